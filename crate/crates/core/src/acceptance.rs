//! The acceptance checks, shared by the `acceptance` test target and the
//! `corpus-run` command. Every comparison is exact; the only tolerances are
//! the sample counts and seed pinned below.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{corpus, corpus_document, MFDocument};
use crate::cover::{cover_prime, cover_round_trip, find_roots, psi_iso};
use crate::error::Result;
use crate::frobenius::{
    cosyzygy, periodic_resolution, syzygy, syzygy_cosyzygy_iso, syzygy_with, StructureMaps,
};
use crate::gamma::{eij_factorization, gamma_mul, gamma_round_trip, gamma_z_power, GammaAlgebra};
use crate::linalg::{random_scalar, PivotPolicy, PolyMatrix};
use crate::mfcore::{MatrixFactorization, Morphism};
use crate::ring::{Field, Monomial, Poly, Ring, RingRef};
use crate::split::{predict_syzygy_split, split_projectives};

pub const SEED: u64 = 0x5eed;
/// Random points per generic-rank estimate.
pub const RANK_TRIALS: usize = 5;
pub const GAMMA_TRIPLES: usize = 300;
pub const GAMMA_MAX_D: usize = 5;
pub const AXIOM_SAMPLES: usize = 200;
pub const RANK_SAMPLES: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} [{}] {}: {}", self.id, self.title, self.detail)
    }
}

pub const TITLES: [&str; 10] = [
    "corpus verification",
    "syzygy entrywise",
    "split prediction",
    "d=2 degeneration",
    "syzygy/cosyzygy isomorphism",
    "periodic resolution",
    "gamma suite",
    "functor round-trips",
    "psi isomorphism",
    "property suites",
];

pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    let outcome = match id {
        1 => corpus_verification(),
        2 => syzygy_entrywise(),
        3 => split_prediction(),
        4 => d2_degeneration(),
        5 => syzygy_iso(),
        6 => resolution(seed),
        7 => gamma_suite(seed),
        8 => round_trips(),
        9 => psi_suite(),
        10 => property_suites(seed),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        title: TITLES.get(id as usize - 1).copied().unwrap_or("unknown"),
        pass,
        detail,
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=10).map(|id| run_criterion(id, seed)).collect()
}

type Outcome = Result<(bool, String)>;

fn factorizations() -> Result<Vec<(String, MatrixFactorization)>> {
    corpus()
        .into_iter()
        .map(|doc| Ok((doc.name().to_string(), doc.to_factorization()?)))
        .collect()
}

fn named(name: &str) -> Result<MatrixFactorization> {
    corpus_document(name)
        .ok_or_else(|| crate::Error::Usage(format!("corpus has no {name}")))?
        .to_factorization()
}

/// Runs `check` on every corpus item and lists the failures.
fn over_corpus(check: impl Fn(&MatrixFactorization) -> Result<bool>) -> Outcome {
    let items = factorizations()?;
    let mut failed = Vec::new();
    for (name, x) in &items {
        if !check(x)? {
            failed.push(name.clone());
        }
    }
    Ok(if failed.is_empty() {
        (true, format!("{}/{} documents", items.len(), items.len()))
    } else {
        (false, format!("failed: {}", failed.join(", ")))
    })
}

fn corpus_verification() -> Outcome {
    over_corpus(|x| {
        let report = x.verify();
        Ok(report.valid && report.rotations.len() == x.d())
    })
}

fn syzygy_entrywise() -> Outcome {
    let x = named("dinfty")?;
    let r = x.ring();
    let display = [
        [
            ["0", "-y", "-x*y", "-y^2"],
            ["-x^2", "x", "0", "x*y"],
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
        ],
        [
            ["-1", "0", "-x", "-y"],
            ["-x", "-y", "-x^2", "0"],
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
        ],
        [
            ["-x", "-y", "-x^2*y", "0"],
            ["0", "x", "x^3", "-x^2"],
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
        ],
    ];
    let (omega, _) = syzygy(&x);
    let mut mismatches = 0;
    for (k, grid) in display.iter().enumerate() {
        let rows: Vec<&[&str]> = grid.iter().map(|r| r.as_slice()).collect();
        let expected = PolyMatrix::parse(r, &rows)?;
        mismatches += (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| omega.phi(k as i64 + 1).get(i, j) != expected.get(i, j))
            .count();
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} of 48 entries differ"),
    ))
}

fn split_prediction() -> Outcome {
    let x = named("dinfty")?;
    let pred = predict_syzygy_split(&x);
    let (omega, _) = syzygy(&x);
    let res = split_projectives(&omega, PivotPolicy::ScalarUnits)?;
    let report = res.verify(&omega);
    let pass = pred.m == [0, 0, 1]
        && pred.stable_size == 3
        && res.multiplicities == [0, 0, 1]
        && res.stable_part.n() == 3
        && res.fixpoint
        && report.valid
        && report.stable_multiplicities.iter().all(|s| *s == 0);
    Ok((
        pass,
        format!(
            "m = {:?}, stable size {}; detached {:?}, stable part {}x{}, fixpoint {}, \
             detachable strands left {:?}, raw unit entries {}",
            pred.m,
            pred.stable_size,
            res.multiplicities,
            res.stable_part.n(),
            res.stable_part.n(),
            res.fixpoint,
            report.stable_multiplicities,
            report.stable_unit_entries
        ),
    ))
}

fn d2_degeneration() -> Outcome {
    let mut checked = Vec::new();
    for (name, x) in factorizations()?.into_iter().filter(|(_, x)| x.d() == 2) {
        let expected = vec![-x.phi(2), -x.phi(1)];
        let (omega, _) = syzygy(&x);
        let (omega_minus, _) = cosyzygy(&x);
        let iso = syzygy_cosyzygy_iso(&x)?;
        let ok = omega.factors() == expected.as_slice()
            && omega_minus.factors() == expected.as_slice()
            && iso.forward == Morphism::identity(&omega)
            && iso.inverse == Morphism::identity(&omega);
        if !ok {
            return Ok((false, format!("{name} differs")));
        }
        checked.push(name);
    }
    Ok((
        !checked.is_empty(),
        format!("checked {}", checked.join(", ")),
    ))
}

fn syzygy_iso() -> Outcome {
    over_corpus(|x| Ok(syzygy_cosyzygy_iso(x)?.report().valid))
}

fn resolution(seed: u64) -> Outcome {
    over_corpus(|x| Ok(periodic_resolution(x)?.report(x, RANK_TRIALS, seed).valid))
}

/// Algebra-level verdicts for Γ with a given `d` and `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaCheck {
    pub d: usize,
    pub triples: usize,
    pub associative: bool,
    /// `z^d = f·1_Γ`.
    pub z_power: bool,
    /// Indices `(i, j)` whose `e_ij` chain fails.
    pub failed_chains: Vec<(usize, usize)>,
    pub valid: bool,
}

pub fn gamma_check(d: usize, f: &Poly, triples: usize, rng: &mut impl Rng) -> Result<GammaCheck> {
    let alg = GammaAlgebra::new(d, f)?;
    let mut associative = true;
    for _ in 0..triples {
        let mut pick = || alg.basis(rng.gen_range(1..=d as i64), rng.gen_range(1..=d as i64));
        let (a, b, c) = (pick(), pick(), pick());
        let left = gamma_mul(&alg, &gamma_mul(&alg, &a, &b)?, &c)?;
        let right = gamma_mul(&alg, &a, &gamma_mul(&alg, &b, &c)?)?;
        associative &= left == right;
    }
    let z_power = gamma_z_power(&alg, d as u32)? == alg.one().scale(f);
    let mut failed_chains = Vec::new();
    for i in 1..=d {
        for j in (1..=d).filter(|j| *j != i) {
            if !eij_factorization(&alg, i, j)?.valid {
                failed_chains.push((i, j));
            }
        }
    }
    Ok(GammaCheck {
        d,
        triples,
        associative,
        z_power,
        valid: associative && z_power && failed_chains.is_empty(),
        failed_chains,
    })
}

fn gamma_suite(seed: u64) -> Outcome {
    let ring = Ring::new(Field::Rational, &["x", "y"])?;
    let f = Poly::parse(&ring, "x^2*y")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in 2..=GAMMA_MAX_D {
        let check = gamma_check(d, &f, GAMMA_TRIPLES, &mut rng)?;
        if !check.valid {
            return Ok((false, format!("{check:?}")));
        }
    }
    Ok((
        true,
        format!("d = 2..={GAMMA_MAX_D}: {GAMMA_TRIPLES} triples each, z^d = f·1, all chains"),
    ))
}

/// Reduces a rational factorization modulo the smallest prime hosting the
/// cover roots; prime-field items stay where they are.
pub fn cover_host(x: &MatrixFactorization, prime: Option<u64>) -> Result<MatrixFactorization> {
    match x.ring().field() {
        Field::Prime(p) => {
            if prime.is_some_and(|q| q != *p) {
                return crate::error::usage(format!(
                    "document lives over F{p}, not F{}",
                    prime.unwrap()
                ));
            }
            Ok(x.clone())
        }
        Field::Rational => {
            let p = prime.unwrap_or_else(|| cover_prime(x.d()));
            let ring = x.ring().with_field(Field::prime(p)?);
            x.change_ring(&ring)
        }
    }
}

fn round_trips() -> Outcome {
    let mut hosts = Vec::new();
    for (name, x) in factorizations()? {
        if !gamma_round_trip(&x)?.report(&x)?.valid {
            return Ok((false, format!("ℋℱ round trip fails on {name}")));
        }
        let hosted = cover_host(&x, None)?;
        let roots = find_roots(hosted.ring().field().characteristic(), x.d())?;
        if !cover_round_trip(&hosted, &roots)?
            .report(&hosted, &roots)?
            .valid
        {
            return Ok((false, format!("𝒜ℬ round trip fails on {name}")));
        }
        hosts.push(format!("{name}@F{}", roots.p()));
    }
    Ok((true, format!("both round trips on {}", hosts.join(", "))))
}

fn psi_suite() -> Outcome {
    let mut details = Vec::new();
    for (p, d, f) in [(7u64, 3usize, "x^3 + y^4"), (5, 2, "x*y")] {
        let ring = Ring::new(Field::prime(p)?, &["x", "y"])?;
        let roots = find_roots(p, d)?;
        let cert = psi_iso(&roots, &Poly::parse(&ring, f)?)?;
        if !cert.valid {
            return Ok((false, format!("(p, d) = ({p}, {d}): {cert:?}")));
        }
        details.push(format!("({p},{d}): {} pairs", cert.pairs_checked));
    }
    Ok((true, details.join("; ")))
}

pub fn random_poly(ring: &RingRef, rng: &mut impl Rng, max_terms: usize, max_exp: u32) -> Poly {
    let nvars = ring.nvars();
    let terms = rng.gen_range(0..=max_terms);
    (0..terms).fold(Poly::zero(ring), |acc, _| {
        let exps = (0..nvars).map(|_| rng.gen_range(0..=max_exp)).collect();
        let c = random_scalar(ring.field(), rng);
        &acc + &Poly::monomial(ring, Monomial::from_exponents(exps), c)
    })
}

fn ring_axioms(rng: &mut ChaCha8Rng) -> Result<bool> {
    for field in [Field::Rational, Field::prime(7)?] {
        let ring = Ring::new(field, &["x", "y"])?;
        for _ in 0..AXIOM_SAMPLES {
            let a = random_poly(&ring, rng, 4, 2);
            let b = random_poly(&ring, rng, 4, 2);
            let c = random_poly(&ring, rng, 4, 2);
            let ok = &(&a + &b) + &c == &a + &(&b + &c)
                && &a + &b == &b + &a
                && &(&a * &b) * &c == &a * &(&b * &c)
                && &a * &b == &b * &a
                && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
                && &(&a - &b) + &b == a
                && &a * &Poly::one(&ring) == a;
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn rank_inequality(rng: &mut ChaCha8Rng) -> Result<bool> {
    let ring = Ring::new(Field::Rational, &["x", "y"])?;
    for _ in 0..RANK_SAMPLES {
        let rows = (0..3)
            .map(|_| (0..3).map(|_| random_poly(&ring, rng, 2, 1)).collect())
            .collect();
        let m = PolyMatrix::from_rows(&ring, rows)?;
        if m.residue_rank() > m.generic_rank_with(RANK_TRIALS, rng) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn admissibility() -> Result<bool> {
    for (_, x) in factorizations()? {
        let maps = StructureMaps::new(&x);
        let report = maps.report();
        let (_, syz) = syzygy_with(&maps);
        let (_, cosyz) = crate::frobenius::cosyzygy_with(&maps);
        let ok = report.rho_is_admissible_epi
            && report.lambda_is_admissible_mono
            && syz.inclusion.is_admissible_mono()?
            && cosyz.surjection.is_admissible_epi()?;
        if !ok {
            return Ok(false);
        }
    }
    // Multiplication by x on the node is injective but does not split.
    let pair = named("pair")?;
    let times_x = Morphism::new(&pair, &pair, vec![pair.phi(1).clone(), pair.phi(1).clone()])?;
    Ok(times_x.verify().valid && !times_x.is_admissible_mono()?)
}

/// Gathers the first-summand coordinates of each `n_x + n_y` block first.
pub fn sum_permutation(ring: &RingRef, blocks: usize, n_x: usize, n_y: usize) -> PolyMatrix {
    let n = n_x + n_y;
    let mut order: Vec<usize> = (0..blocks)
        .flat_map(|b| (0..n_x).map(move |i| b * n + i))
        .collect();
    order.extend((0..blocks).flat_map(|b| (n_x..n).map(move |i| b * n + i)));
    let mut perm = PolyMatrix::zeros(ring, blocks * n, blocks * n);
    for (new, old) in order.into_iter().enumerate() {
        perm.set(new, old, Poly::one(ring));
    }
    perm
}

pub fn syzygy_additive(x: &MatrixFactorization, y: &MatrixFactorization) -> Result<bool> {
    let (sum, _) = syzygy(&x.direct_sum(y)?);
    let (ox, _) = syzygy(x);
    let (oy, _) = syzygy(y);
    let parts = ox.direct_sum(&oy)?;
    let perm = sum_permutation(x.ring(), x.d() - 1, x.n(), y.n());
    let perm_t = perm.transpose();
    Ok((1..=x.d() as i64).all(|k| &(&perm * sum.phi(k)) * &perm_t == *parts.phi(k)))
}

fn additivity() -> Result<bool> {
    let pairs = [
        (named("dinfty")?, named("dinfty")?.shift(1)),
        (named("e8a")?, named("e8b")?),
        (named("e6")?, named("e6")?.shift(2)),
        (named("pair")?, named("pair")?.shift(1)),
    ];
    for (x, y) in &pairs {
        if !syzygy_additive(x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn property_suites(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let results = [
        ("ring axioms", ring_axioms(&mut rng)?),
        ("rank inequality", rank_inequality(&mut rng)?),
        ("admissibility", admissibility()?),
        ("syzygy additivity", additivity()?),
    ];
    let failed: Vec<&str> = results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
    Ok(if failed.is_empty() {
        (
            true,
            results
                .iter()
                .map(|(n, _)| *n)
                .collect::<Vec<_>>()
                .join(", "),
        )
    } else {
        (false, format!("failed: {}", failed.join(", ")))
    })
}

/// Verdicts for one document, used by `corpus-run`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DocumentVerdict {
    pub name: String,
    pub valid: bool,
    pub reduced: bool,
    pub min_gens: Vec<usize>,
    pub syzygy_projectives: Vec<usize>,
    pub stable_size: usize,
    pub expectations_met: bool,
}

pub fn document_verdict(doc: &MFDocument) -> Result<DocumentVerdict> {
    let x = doc.to_factorization()?;
    let pred = predict_syzygy_split(&x);
    let reduced = x.is_reduced();
    let exp = doc
        .meta
        .as_ref()
        .map(|m| m.expected.clone())
        .unwrap_or_default();
    let expectations_met = exp.reduced.is_none_or(|r| r == reduced)
        && exp.min_gens.as_ref().is_none_or(|m| *m == pred.mu)
        && exp.syzygy_projectives.as_ref().is_none_or(|m| *m == pred.m)
        && exp.stable_size.is_none_or(|s| s == pred.stable_size)
        && exp.pseudoprojective.is_none_or(|p| {
            crate::split::is_pseudoprojective(&x)
                .map(|q| q == p)
                .unwrap_or(false)
        });
    Ok(DocumentVerdict {
        name: doc.name().to_string(),
        valid: x.verify().valid,
        reduced,
        min_gens: pred.mu,
        syzygy_projectives: pred.m,
        stable_size: pred.stable_size,
        expectations_met,
    })
}
