//! On-disk documents, the built-in example corpus, and certificates.
//!
//! A document is JSON with one matrix row per line:
//!
//! ```text
//! {
//!   "field": "Q",
//!   "vars": ["x", "y"],
//!   "f": "x*y",
//!   "d": 2,
//!   "n": 1,
//!   "factors": [
//!     [
//!       ["x"]
//!     ],
//!     [
//!       ["y"]
//!     ]
//!   ]
//! }
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{usage, Error, Result};
use crate::linalg::{Exactness, PolyMatrix};
use crate::mfcore::MatrixFactorization;
use crate::ring::{Field, Poly, Ring};

/// Values a document claims about itself, checked by the corpus tests.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_gens: Option<Vec<usize>>,
    /// Projective multiplicities `m_k` of the syzygy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub syzygy_projectives: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudoprojective: Option<bool>,
}

impl Expected {
    fn is_empty(&self) -> bool {
        *self == Expected::default()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocMeta {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Expected::is_empty")]
    pub expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MFDocument {
    pub field: String,
    pub vars: Vec<String>,
    pub f: String,
    pub d: usize,
    pub n: usize,
    pub factors: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<DocMeta>,
}

/// 1-based line and column of byte offset `pos` in `text`.
fn locate(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Finds the byte offset of the quoted string `s` as the `nth` occurrence
/// at or after `from`.
fn find_quoted(text: &str, from: usize, s: &str, nth: usize) -> Option<usize> {
    let needle = serde_json::to_string(s).ok()?;
    text[from..]
        .match_indices(&needle)
        .nth(nth)
        .map(|(i, _)| from + i)
}

impl MFDocument {
    /// Parses a document; JSON and polynomial errors carry line/column.
    pub fn parse(text: &str) -> Result<MFDocument> {
        let doc: MFDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.to_factorization_located(Some(text))?;
        Ok(doc)
    }

    /// The factorization, without checking the rotation identities.
    pub fn to_factorization(&self) -> Result<MatrixFactorization> {
        self.to_factorization_located(None)
    }

    fn to_factorization_located(&self, text: Option<&str>) -> Result<MatrixFactorization> {
        let field: Field = self.field.parse()?;
        let ring = Ring::from_names(field, self.vars.clone())?;
        let relocate = |err: Error, anchor: Option<usize>| match (err, text, anchor) {
            (
                Error::Parse {
                    column, message, ..
                },
                Some(t),
                Some(pos),
            ) => {
                let (line, col) = locate(t, pos);
                // Step past the opening quote.
                Error::Parse {
                    line,
                    column: col + column,
                    message,
                }
            }
            (err, _, _) => err,
        };
        let f_anchor = text.and_then(|t| {
            let key = t.find("\"f\"")?;
            find_quoted(t, key + 3, &self.f, 0)
        });
        let f = Poly::parse(&ring, &self.f).map_err(|e| relocate(e, f_anchor))?;
        if self.factors.len() != self.d {
            return usage(format!(
                "d = {} but {} factors given",
                self.d,
                self.factors.len()
            ));
        }
        let factors_key = text.and_then(|t| t.find("\"factors\""));
        let mut seen: Vec<&str> = Vec::new();
        let mut factors = Vec::with_capacity(self.d);
        for (k, grid) in self.factors.iter().enumerate() {
            if grid.len() != self.n || grid.iter().any(|row| row.len() != self.n) {
                return usage(format!("factor {} is not {}x{}", k + 1, self.n, self.n));
            }
            let mut rows = Vec::with_capacity(self.n);
            for row in grid {
                let mut parsed = Vec::with_capacity(self.n);
                for entry in row {
                    let nth = seen.iter().filter(|s| **s == entry.as_str()).count();
                    seen.push(entry);
                    let p = Poly::parse(&ring, entry).map_err(|e| {
                        let anchor = text
                            .zip(factors_key)
                            .and_then(|(t, from)| find_quoted(t, from, entry, nth));
                        relocate(e, anchor)
                    })?;
                    parsed.push(p);
                }
                rows.push(parsed);
            }
            factors.push(PolyMatrix::from_rows(&ring, rows)?);
        }
        MatrixFactorization::unverified(f, factors)
    }

    pub fn from_factorization(x: &MatrixFactorization, meta: Option<DocMeta>) -> MFDocument {
        MFDocument {
            field: x.ring().field().to_string(),
            vars: x.ring().vars().to_vec(),
            f: x.f().to_string(),
            d: x.d(),
            n: x.n(),
            factors: x
                .factors()
                .iter()
                .map(|m| {
                    m.to_rows()
                        .iter()
                        .map(|r| r.iter().map(Poly::to_string).collect())
                        .collect()
                })
                .collect(),
            meta,
        }
    }

    /// Re-prints every polynomial in its canonical form.
    pub fn canonical(&self) -> Result<MFDocument> {
        Ok(MFDocument::from_factorization(
            &self.to_factorization()?,
            self.meta.clone(),
        ))
    }

    pub fn name(&self) -> &str {
        self.meta.as_ref().map_or("", |m| m.name.as_str())
    }

    /// The canonical text: fixed key order, one matrix row per line.
    pub fn print(&self) -> String {
        let mut out = String::from("{\n");
        out += &format!("  \"field\": {},\n", json(&self.field));
        out += &format!("  \"vars\": {},\n", string_list(&self.vars));
        out += &format!("  \"f\": {},\n", json(&self.f));
        out += &format!("  \"d\": {},\n", self.d);
        out += &format!("  \"n\": {},\n", self.n);
        out += "  \"factors\": [\n";
        for (k, grid) in self.factors.iter().enumerate() {
            out += "    [\n";
            for (r, row) in grid.iter().enumerate() {
                let sep = if r + 1 < grid.len() { "," } else { "" };
                out += &format!("      {}{sep}\n", string_list(row));
            }
            let sep = if k + 1 < self.factors.len() { "," } else { "" };
            out += &format!("    ]{sep}\n");
        }
        match &self.meta {
            Some(meta) => {
                out += "  ],\n";
                out += &format!("  \"meta\": {}\n", json(meta));
            }
            None => out += "  ]\n",
        }
        out += "}\n";
        out
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn string_list(items: &[String]) -> String {
    let parts: Vec<String> = items.iter().map(|s| json(s.as_str())).collect();
    format!("[{}]", parts.join(", "))
}

const CORPUS: &[(&str, &str)] = &[
    ("dinfty", include_str!("../corpus/dinfty.mf")),
    ("lines3", include_str!("../corpus/lines3.mf")),
    ("lines4", include_str!("../corpus/lines4.mf")),
    ("e6", include_str!("../corpus/e6.mf")),
    ("e7", include_str!("../corpus/e7.mf")),
    ("e8a", include_str!("../corpus/e8a.mf")),
    ("e8b", include_str!("../corpus/e8b.mf")),
    ("pair", include_str!("../corpus/pair.mf")),
    ("e6pair", include_str!("../corpus/e6pair.mf")),
];

/// The built-in example documents.
pub fn corpus() -> Vec<MFDocument> {
    CORPUS
        .iter()
        .map(|(name, text)| {
            MFDocument::parse(text).unwrap_or_else(|e| panic!("corpus document {name}: {e}"))
        })
        .collect()
}

pub fn corpus_document(name: &str) -> Option<MFDocument> {
    corpus().into_iter().find(|d| d.name() == name)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(name: &str, bytes: &[u8]) -> InputDigest {
        InputDigest {
            name: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Output of every checking command. Serialization is deterministic: no
/// clocks, field order fixed, maps sorted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub exactness: Exactness,
    pub seed: u64,
    pub trials: usize,
    pub valid: bool,
    pub evidence: serde_json::Value,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_documents_are_canonical_and_valid() {
        let docs = corpus();
        assert!(docs.len() >= 8);
        for ((name, text), doc) in CORPUS.iter().zip(&docs) {
            assert_eq!(doc.name(), *name);
            assert_eq!(doc.print(), *text, "{name} is not in canonical form");
            assert_eq!(MFDocument::parse(&doc.print()).unwrap(), *doc);
            assert_eq!(doc.canonical().unwrap(), *doc);
            let x = doc.to_factorization().unwrap();
            assert!(x.verify().valid, "{name}");
        }
    }

    #[test]
    fn corpus_expectations_hold() {
        for doc in corpus() {
            let x = doc.to_factorization().unwrap();
            let exp = doc.meta.as_ref().unwrap().expected.clone();
            if let Some(r) = exp.reduced {
                assert_eq!(x.is_reduced(), r, "{}", doc.name());
            }
            if let Some(mu) = exp.min_gens {
                assert_eq!(x.min_gens_all(), mu, "{}", doc.name());
            }
            let pred = crate::split::predict_syzygy_split(&x);
            if let Some(m) = exp.syzygy_projectives {
                assert_eq!(pred.m, m, "{}", doc.name());
            }
            if let Some(s) = exp.stable_size {
                assert_eq!(pred.stable_size, s, "{}", doc.name());
            }
        }
        assert_eq!(
            corpus_document("e6")
                .unwrap()
                .meta
                .unwrap()
                .expected
                .reduced,
            Some(true)
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let text = "{\n  \"field\": \"Q\",\n  \"vars\": [\"x\"],\n  \"f\": \"x^2\",\n  \"d\": 2,\n  \"n\": 1,\n  \"factors\": [\n    [\n      [\"x\"]\n    ],\n    [\n      [\"x+*\"]\n    ]\n  ]\n}\n";
        match MFDocument::parse(text) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 12);
                // `*` is the third character inside the string opening at column 8.
                assert_eq!(column, 11);
            }
            other => panic!("{other:?}"),
        }
        match MFDocument::parse("{\n  \"field\": \"Q\",\n  oops\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shape_mismatch_is_usage() {
        let text =
            r#"{"field": "Q", "vars": ["x"], "f": "x^2", "d": 2, "n": 1, "factors": [[["x"]]]}"#;
        assert!(matches!(MFDocument::parse(text), Err(Error::Usage(_))));
    }

    #[test]
    fn print_round_trips() {
        let doc = corpus_document("e6").unwrap();
        let text = doc.print();
        assert_eq!(MFDocument::parse(&text).unwrap().print(), text);
        assert!(text.lines().any(|l| l.trim() == r#"["y", "0", "x"],"#));
    }

    #[test]
    fn digests_are_stable() {
        let d = InputDigest::of("a", b"abc");
        assert_eq!(
            d.sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
