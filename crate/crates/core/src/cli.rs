//! Command-line front end. Transform commands print a canonical document;
//! every other command prints a certificate.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::acceptance::{self, cover_host, document_verdict, gamma_check, random_poly};
use crate::corpus::{corpus, Certificate, DocMeta, InputDigest, MFDocument};
use crate::cover::{cover_round_trip, find_roots, psi_iso};
use crate::error::{usage, Error, Result};
use crate::frobenius::{
    cosyzygy, extract_homotopy, factor_through_injective, homotopy_verify, mapping_cone,
    null_homotopic_morphism, periodic_resolution, syzygy, syzygy_cosyzygy_iso, Homotopy,
    StructureMaps,
};
use crate::gamma::gamma_round_trip;
use crate::linalg::{Exactness, PivotPolicy};
use crate::mfcore::{MatrixFactorization, Morphism};
use crate::split::{is_pseudoprojective, predict_syzygy_split, split_projectives};

#[derive(Debug, Parser)]
#[command(
    name = "matfac",
    version,
    about = "Build and certify matrix factorizations"
)]
pub struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = acceptance::SEED)]
    pub seed: u64,
    /// Random points per generic-rank estimate.
    #[arg(long, global = true, default_value_t = acceptance::RANK_TRIALS)]
    pub trials: usize,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Truncated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Identity,
    Zero,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every cyclic rotation product.
    Verify {
        file: PathBuf,
    },
    /// Reprint a document canonically.
    Format {
        file: PathBuf,
    },
    /// Rotate the factors: slot k of the output is slot k+j of the input.
    Shift {
        #[arg(short = 'j', allow_negative_numbers = true)]
        j: i64,
        file: PathBuf,
    },
    /// Direct sum of two factorizations of the same f and d.
    Sum {
        first: PathBuf,
        second: PathBuf,
    },
    Syzygy {
        file: PathBuf,
    },
    Cosyzygy {
        file: PathBuf,
    },
    /// Certify both defining sequences and the syzygy/cosyzygy isomorphism.
    IsoCheck {
        file: PathBuf,
    },
    /// Mapping cone of an endomorphism of the input.
    Cone {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MapKind::Identity)]
        map: MapKind,
    },
    /// Check a seeded random homotopy against the morphism it defines.
    HomotopyVerify {
        file: PathBuf,
    },
    /// Detach projective summands.
    Split {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Series precision in truncated mode.
        #[arg(long, default_value_t = 8)]
        precision: u32,
    },
    /// Predict the projective multiplicities of the syzygy.
    Predict {
        file: PathBuf,
    },
    Resolution {
        file: PathBuf,
    },
    GammaCheck {
        file: PathBuf,
    },
    CoverCheck {
        file: PathBuf,
        /// Host prime for rational input; the default is the smallest p with 2d | p-1.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Run the acceptance suite and check every built-in document.
    CorpusRun,
}

struct Input {
    doc: MFDocument,
    digest: InputDigest,
}

impl Input {
    fn load(path: &Path) -> Result<Input> {
        let bytes = std::fs::read(path)
            .or_else(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .or_else(|_| usage(format!("{} is not UTF-8", path.display())))?;
        let name = path.file_name().map_or_else(
            || path.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        );
        Ok(Input {
            doc: MFDocument::parse(&text)?,
            digest: InputDigest::of(&name, &bytes),
        })
    }

    fn factorization(&self) -> Result<MatrixFactorization> {
        self.doc.to_factorization()
    }

    /// The input as a verified factorization, for transforms.
    fn verified(&self) -> Result<MatrixFactorization> {
        let x = self.factorization()?;
        match x.verify().first_failure {
            None => Ok(x),
            Some(k) => crate::error::domain(format!(
                "{} is not a matrix factorization: rotation {k} differs from f·I",
                self.digest.name
            )),
        }
    }

    fn derived(&self, x: &MatrixFactorization, op: &str) -> String {
        let meta = DocMeta {
            name: format!("{op}({})", self.doc.name()),
            ..DocMeta::default()
        };
        MFDocument::from_factorization(x, Some(meta)).print()
    }
}

struct Run<'a> {
    cli: &'a Cli,
}

impl Run<'_> {
    fn certificate(
        &self,
        inputs: &[&Input],
        exactness: Exactness,
        valid: bool,
        evidence: serde_json::Value,
    ) -> String {
        Certificate {
            command: command_name(&self.cli.command).to_string(),
            inputs: inputs.iter().map(|i| i.digest.clone()).collect(),
            exactness,
            seed: self.cli.seed,
            trials: self.cli.trials,
            valid,
            evidence,
        }
        .to_json()
    }

    /// Certificate for a check command; an input that is not a factorization
    /// gets an invalid verdict rather than an error.
    fn check(
        &self,
        input: &Input,
        body: impl FnOnce(&MatrixFactorization) -> Result<(bool, serde_json::Value)>,
    ) -> Result<String> {
        let x = input.factorization()?;
        let report = x.verify();
        if !report.valid {
            return Ok(self.certificate(
                &[input],
                Exactness::Exact,
                false,
                json!({ "input": report }),
            ));
        }
        let (valid, evidence) = body(&x)?;
        Ok(self.certificate(&[input], Exactness::Exact, valid, evidence))
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Format { .. } => "format",
        Command::Shift { .. } => "shift",
        Command::Sum { .. } => "sum",
        Command::Syzygy { .. } => "syzygy",
        Command::Cosyzygy { .. } => "cosyzygy",
        Command::IsoCheck { .. } => "iso-check",
        Command::Cone { .. } => "cone",
        Command::HomotopyVerify { .. } => "homotopy-verify",
        Command::Split { .. } => "split",
        Command::Predict { .. } => "predict",
        Command::Resolution { .. } => "resolution",
        Command::GammaCheck { .. } => "gamma-check",
        Command::CoverCheck { .. } => "cover-check",
        Command::CorpusRun => "corpus-run",
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report serializes")
}

/// Executes one command and returns what it prints.
pub fn run(cli: &Cli) -> Result<String> {
    let run = Run { cli };
    let (seed, trials) = (cli.seed, cli.trials);
    match &cli.command {
        Command::Verify { file } => {
            let input = Input::load(file)?;
            let x = input.factorization()?;
            let report = x.verify();
            let mut evidence = json!({ "report": report });
            if report.valid {
                evidence["reduced"] = json!(x.is_reduced());
                evidence["min_gens"] = json!(x.min_gens_all());
                evidence["pseudoprojective"] = json!(is_pseudoprojective(&x)?);
            }
            Ok(run.certificate(&[&input], Exactness::Exact, report.valid, evidence))
        }
        Command::Format { file } => Ok(Input::load(file)?.doc.canonical()?.print()),
        Command::Shift { j, file } => {
            let input = Input::load(file)?;
            Ok(input.derived(&input.verified()?.shift(*j), &format!("shift{j}")))
        }
        Command::Sum { first, second } => {
            let (a, b) = (Input::load(first)?, Input::load(second)?);
            let sum = a.verified()?.direct_sum(&b.verified()?)?;
            let meta = DocMeta {
                name: format!("sum({}, {})", a.doc.name(), b.doc.name()),
                ..DocMeta::default()
            };
            Ok(MFDocument::from_factorization(&sum, Some(meta)).print())
        }
        Command::Syzygy { file } => {
            let input = Input::load(file)?;
            Ok(input.derived(&syzygy(&input.verified()?).0, "syzygy"))
        }
        Command::Cosyzygy { file } => {
            let input = Input::load(file)?;
            Ok(input.derived(&cosyzygy(&input.verified()?).0, "cosyzygy"))
        }
        Command::IsoCheck { file } => run.check(&Input::load(file)?, |x| {
            let (_, syz) = syzygy(x);
            let (_, cosyz) = cosyzygy(x);
            let syz = syz.certify(trials, seed);
            let cosyz = cosyz.certify(trials, seed);
            let iso = syzygy_cosyzygy_iso(x)?.report();
            let valid = syz.exact && cosyz.exact && iso.valid;
            Ok((
                valid,
                json!({ "syzygy_sequence": syz, "cosyzygy_sequence": cosyz, "iso": iso }),
            ))
        }),
        Command::Cone { file, map } => run.check(&Input::load(file)?, |x| {
            let alpha = match map {
                MapKind::Identity => Morphism::identity(x),
                MapKind::Zero => Morphism::zero(x, x)?,
            };
            let cone = mapping_cone(&alpha)?;
            let report = cone.report();
            Ok((
                report.valid,
                json!({ "cone_size": cone.cone.n(), "report": report }),
            ))
        }),
        Command::HomotopyVerify { file } => run.check(&Input::load(file)?, |x| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let maps = (0..x.d())
                .map(|_| {
                    let rows = (0..x.n())
                        .map(|_| {
                            (0..x.n())
                                .map(|_| random_poly(x.ring(), &mut rng, 2, 1))
                                .collect()
                        })
                        .collect();
                    crate::linalg::PolyMatrix::from_rows(x.ring(), rows)
                })
                .collect::<Result<Vec<_>>>()?;
            let s = Homotopy::new(x, x, maps)?;
            let alpha = null_homotopic_morphism(x, x, &s)?;
            let morphism = alpha.verify();
            let sum = homotopy_verify(&alpha, &s);
            let gamma = factor_through_injective(x, x, &s)?;
            let lambda = StructureMaps::new(x).lambda_morphism();
            let factors = gamma.verify().valid && gamma.compose(&lambda)? == alpha;
            let recovered = extract_homotopy(x, &gamma)? == s;
            let valid = morphism.valid && sum.valid && factors && recovered;
            Ok((
                valid,
                json!({
                    "morphism": morphism,
                    "homotopy_sum": sum,
                    "factors_through_injective": factors,
                    "homotopy_recovered": recovered,
                }),
            ))
        }),
        Command::Split {
            file,
            mode,
            precision,
        } => {
            let input = Input::load(file)?;
            let x = input.factorization()?;
            let report = x.verify();
            if !report.valid {
                return Ok(run.certificate(
                    &[&input],
                    Exactness::Exact,
                    false,
                    json!({ "input": report }),
                ));
            }
            let policy = match mode {
                Mode::Exact => PivotPolicy::ScalarUnits,
                Mode::Truncated => PivotPolicy::AnyUnit {
                    precision: *precision,
                },
            };
            let res = split_projectives(&x, policy)?;
            let report = res.verify(&x);
            let stable = MFDocument::from_factorization(&res.stable_part, None);
            let valid = report.valid && res.blocked.is_none();
            let evidence = json!({
                "multiplicities": res.multiplicities,
                "stable_size": res.stable_part.n(),
                "fixpoint": res.fixpoint,
                "blocked": res.blocked,
                "report": report,
                "stable_part": stable,
            });
            Ok(run.certificate(&[&input], res.exactness, valid, evidence))
        }
        Command::Predict { file } => run.check(&Input::load(file)?, |x| {
            let pred = predict_syzygy_split(x);
            Ok((true, to_json(&pred)))
        }),
        Command::Resolution { file } => run.check(&Input::load(file)?, |x| {
            let report = periodic_resolution(x)?.report(x, trials, seed);
            Ok((report.valid, to_json(&report)))
        }),
        Command::GammaCheck { file } => run.check(&Input::load(file)?, |x| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let algebra = gamma_check(x.d(), x.f(), acceptance::GAMMA_TRIPLES, &mut rng)?;
            let round_trip = gamma_round_trip(x)?.report(x)?;
            let valid = algebra.valid && round_trip.valid;
            Ok((
                valid,
                json!({ "algebra": algebra, "round_trip": round_trip }),
            ))
        }),
        Command::CoverCheck { file, prime } => run.check(&Input::load(file)?, |x| {
            let hosted = cover_host(x, *prime)?;
            let roots = find_roots(hosted.ring().field().characteristic(), x.d())?;
            let psi = psi_iso(&roots, hosted.f())?;
            let round_trip = cover_round_trip(&hosted, &roots)?.report(&hosted, &roots)?;
            let valid = psi.valid && round_trip.valid;
            Ok((valid, json!({ "psi": psi, "round_trip": round_trip })))
        }),
        Command::CorpusRun => {
            let criteria = acceptance::run_all(seed);
            let documents = corpus()
                .iter()
                .map(document_verdict)
                .collect::<Result<Vec<_>>>()?;
            let valid = criteria.iter().all(|c| c.pass)
                && documents.iter().all(|d| d.valid && d.expectations_met);
            let evidence = json!({ "criteria": criteria, "documents": documents });
            Ok(run.certificate(&[], Exactness::Exact, valid, evidence))
        }
    }
}

/// Process exit status for an error: 2 usage, 3 domain, 4 parse.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => 2,
        Error::Domain(_) => 3,
        Error::Parse { .. } => 4,
    }
}
