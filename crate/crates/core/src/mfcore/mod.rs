//! Matrix factorizations `X = (φ_1, …, φ_d)` with `φ_k: F_{k+1} → F_k` and
//! every cyclic product `φ_k φ_{k+1} ··· φ_{k−1}` equal to `f·I`.
//!
//! Slot indices are 1-based and cyclic: any integer is accepted and read
//! modulo `d`.

mod morphism;

pub use morphism::{Morphism, MorphismReport};

use serde::Serialize;

use crate::error::{domain, usage, Result};
use crate::linalg::PolyMatrix;
use crate::ring::{Poly, RingRef};

/// 0-based storage position of the cyclic slot `k` (1-based) among `d`.
pub fn slot(k: i64, d: usize) -> usize {
    (k - 1).rem_euclid(d as i64) as usize
}

/// A slot index in `Z_d`, normalised to `1..=d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicIndex {
    value: usize,
    d: usize,
}

impl CyclicIndex {
    pub fn new(k: i64, d: usize) -> CyclicIndex {
        assert!(d > 0, "cyclic modulus must be positive");
        CyclicIndex {
            value: slot(k, d) + 1,
            d,
        }
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn offset(&self, by: i64) -> CyclicIndex {
        CyclicIndex::new(self.value as i64 + by, self.d)
    }
}

/// Per-rotation verdicts of [`MatrixFactorization::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    /// `rotations[k-1]` is true iff `φ_k ··· φ_{k−1} = f·I`.
    pub rotations: Vec<bool>,
    pub valid: bool,
    /// First slot (1-based) whose rotation fails.
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization {
    f: Poly,
    factors: Vec<PolyMatrix>,
    n: usize,
}

impl MatrixFactorization {
    /// Builds a factorization after checking shapes and every rotation.
    pub fn new(f: Poly, factors: Vec<PolyMatrix>) -> Result<MatrixFactorization> {
        let x = MatrixFactorization::unverified(f, factors)?;
        let report = x.verify();
        if let Some(k) = report.first_failure {
            return domain(format!("rotation {k} does not multiply to f·I"));
        }
        Ok(x)
    }

    /// Builds a candidate factorization after checking shapes only; use
    /// [`verify`](Self::verify) to examine its products.
    pub fn unverified(f: Poly, factors: Vec<PolyMatrix>) -> Result<MatrixFactorization> {
        if factors.len() < 2 {
            return usage(format!("need at least 2 factors, got {}", factors.len()));
        }
        let n = factors[0].rows();
        for (k, m) in factors.iter().enumerate() {
            if m.shape() != (n, n) {
                return usage(format!(
                    "factor {} is {}x{}, expected {n}x{n}",
                    k + 1,
                    m.rows(),
                    m.cols()
                ));
            }
            if **m.ring() != **f.ring() {
                return usage(format!("factor {} is over a different ring than f", k + 1));
            }
        }
        Ok(MatrixFactorization { f, factors, n })
    }

    /// The zero object of size 0.
    pub fn zero(f: &Poly, d: usize) -> MatrixFactorization {
        MatrixFactorization {
            f: f.clone(),
            factors: vec![PolyMatrix::zeros(f.ring(), 0, 0); d],
            n: 0,
        }
    }

    /// `𝒫_i`: size 1, `f` in slot `i`, 1 elsewhere.
    pub fn projective(i: i64, d: usize, f: &Poly) -> MatrixFactorization {
        let target = slot(i, d);
        let factors = (0..d)
            .map(|k| {
                let e = if k == target {
                    f.clone()
                } else {
                    Poly::one(f.ring())
                };
                PolyMatrix::scalar(&e, 1)
            })
            .collect();
        MatrixFactorization {
            f: f.clone(),
            factors,
            n: 1,
        }
    }

    /// `⊕ 𝒫_i^{s_i}`, summands in slot order.
    pub fn projective_sum(f: &Poly, multiplicities: &[usize]) -> MatrixFactorization {
        let d = multiplicities.len();
        let mut acc = MatrixFactorization::zero(f, d);
        for (i, &s) in multiplicities.iter().enumerate() {
            for _ in 0..s {
                acc = acc
                    .direct_sum(&MatrixFactorization::projective(i as i64 + 1, d, f))
                    .expect("same f and d");
            }
        }
        acc
    }

    pub fn ring(&self) -> &RingRef {
        self.f.ring()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn d(&self) -> usize {
        self.factors.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[PolyMatrix] {
        &self.factors
    }

    /// `φ_k`, with `k` read cyclically.
    pub fn phi(&self, k: i64) -> &PolyMatrix {
        &self.factors[slot(k, self.d())]
    }

    pub fn identity_matrix(&self) -> PolyMatrix {
        PolyMatrix::identity(self.ring(), self.n)
    }

    pub fn f_identity(&self) -> PolyMatrix {
        PolyMatrix::scalar(&self.f, self.n)
    }

    /// `φ_k φ_{k+1} ··· φ_{k−1}`.
    pub fn rotation_product(&self, k: i64) -> PolyMatrix {
        let d = self.d() as i64;
        (1..d).fold(self.phi(k).clone(), |acc, j| &acc * self.phi(k + j))
    }

    pub fn verify(&self) -> VerifyReport {
        let target = self.f_identity();
        let rotations: Vec<bool> = (1..=self.d() as i64)
            .map(|k| self.rotation_product(k) == target)
            .collect();
        let first_failure = rotations.iter().position(|ok| !ok).map(|k| k + 1);
        VerifyReport {
            valid: first_failure.is_none(),
            rotations,
            first_failure,
        }
    }

    /// `θ_{ki} = φ_k φ_{k+1} ··· φ_{i−1}: F_i → F_k`, the identity when `i ≡ k`.
    pub fn theta(&self, k: i64, i: i64) -> PolyMatrix {
        let d = self.d() as i64;
        let len = (i - k).rem_euclid(d);
        (0..len).fold(self.identity_matrix(), |acc, j| &acc * self.phi(k + j))
    }

    /// `T^j(X) = (φ_{j+1}, …, φ_j)`.
    pub fn shift(&self, j: i64) -> MatrixFactorization {
        let d = self.d() as i64;
        MatrixFactorization {
            f: self.f.clone(),
            factors: (1..=d).map(|k| self.phi(k + j).clone()).collect(),
            n: self.n,
        }
    }

    pub fn direct_sum(&self, other: &MatrixFactorization) -> Result<MatrixFactorization> {
        if self.d() != other.d() {
            return usage(format!(
                "factor counts differ: {} vs {}",
                self.d(),
                other.d()
            ));
        }
        if self.f != other.f {
            return usage(format!("different f: {} vs {}", self.f, other.f));
        }
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixFactorization {
            f: self.f.clone(),
            factors,
            n: self.n + other.n,
        })
    }

    /// All entries of all factors lie in the maximal ideal.
    pub fn is_reduced(&self) -> bool {
        self.factors.iter().all(PolyMatrix::is_reduced)
    }

    /// Minimal number of generators of `cok φ_k`.
    pub fn min_gens(&self, k: i64) -> usize {
        self.n - self.phi(k).residue_rank()
    }

    pub fn min_gens_all(&self) -> Vec<usize> {
        (1..=self.d() as i64).map(|k| self.min_gens(k)).collect()
    }

    /// Same factorization over another ring with the same variables.
    pub fn change_ring(&self, target: &RingRef) -> Result<MatrixFactorization> {
        let factors = self
            .factors
            .iter()
            .map(|m| m.change_ring(target))
            .collect::<Result<Vec<_>>>()?;
        MatrixFactorization::unverified(self.f.change_ring(target)?, factors)
    }

    /// Conjugates each slot by an invertible change of basis:
    /// `φ_k ↦ g_k φ_k g_{k+1}^{-1}`, given the `g_k` and their inverses.
    pub fn conjugate(&self, g: &[PolyMatrix], g_inv: &[PolyMatrix]) -> MatrixFactorization {
        let d = self.d() as i64;
        let factors = (1..=d)
            .map(|k| &(&g[slot(k, self.d())] * self.phi(k)) * &g_inv[slot(k + 1, self.d())])
            .collect();
        MatrixFactorization {
            f: self.f.clone(),
            factors,
            n: self.n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Field, Ring};

    fn dinfty() -> MatrixFactorization {
        let r = Ring::new(Field::Rational, &["x", "y"]).unwrap();
        let f = Poly::parse(&r, "x^2*y").unwrap();
        MatrixFactorization::new(
            f,
            vec![
                PolyMatrix::parse(&r, &[&["x", "y"], &["0", "-x"]]).unwrap(),
                PolyMatrix::parse(&r, &[&["0", "y"], &["x^2", "-x"]]).unwrap(),
                PolyMatrix::parse(&r, &[&["1", "0"], &["x", "y"]]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn e6(perturb: bool) -> MatrixFactorization {
        let r = Ring::new(Field::prime(7).unwrap(), &["x", "y"]).unwrap();
        let f = Poly::parse(&r, "x^3 + y^4").unwrap();
        let corner = if perturb { "y^2" } else { "y" };
        MatrixFactorization::unverified(
            f,
            vec![
                PolyMatrix::parse(
                    &r,
                    &[&[corner, "0", "x"], &["x", "-y^2", "0"], &["0", "x", "-y"]],
                )
                .unwrap(),
                PolyMatrix::parse(
                    &r,
                    &[
                        &["-y^2", "0", "2*x"],
                        &["2*x", "-y", "0"],
                        &["0", "2*x", "y"],
                    ],
                )
                .unwrap(),
                PolyMatrix::parse(
                    &r,
                    &[
                        &["-y", "0", "4*x"],
                        &["4*x", "y", "0"],
                        &["0", "4*x", "-y^2"],
                    ],
                )
                .unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn e6_triple_verifies() {
        let report = e6(false).verify();
        assert!(report.valid);
        assert_eq!(report.rotations, vec![true, true, true]);
    }

    #[test]
    fn perturbed_e6_reports_failing_rotation() {
        let report = e6(true).verify();
        assert!(!report.valid);
        assert_eq!(report.first_failure, Some(1));
        assert!(
            MatrixFactorization::new(e6(true).f().clone(), e6(true).factors().to_vec()).is_err()
        );
    }

    #[test]
    fn projectives() {
        let x = dinfty();
        let p1 = MatrixFactorization::projective(1, 3, x.f());
        assert!(p1.verify().valid);
        assert_eq!(p1.phi(1).get(0, 0), x.f());
        assert!(p1.phi(2).get(0, 0).is_one());
        let sum = MatrixFactorization::projective_sum(x.f(), &[1, 1, 1]);
        assert!(sum.verify().valid);
        assert_eq!(sum.n(), 3);
        for i in 1..=3 {
            assert_eq!(
                MatrixFactorization::projective(i, 3, x.f()).min_gens_all(),
                (1..=3).map(|k| usize::from(k == i)).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn shifts() {
        let x = dinfty();
        let t = x.shift(1);
        assert_eq!(
            t.factors(),
            &[x.phi(2).clone(), x.phi(3).clone(), x.phi(1).clone()]
        );
        assert_eq!(x.shift(3), x);
        assert_eq!(x.shift(1).shift(1), x.shift(2));
        let f = x.f();
        for j in 0..3 {
            assert_eq!(
                MatrixFactorization::projective(2, 3, f).shift(j),
                MatrixFactorization::projective(2 - j, 3, f)
            );
        }
    }

    #[test]
    fn direct_sums() {
        let x = dinfty();
        assert_eq!(
            x.direct_sum(&MatrixFactorization::zero(x.f(), 3)).unwrap(),
            x
        );
        let r = Ring::new(Field::Rational, &["x", "y"]).unwrap();
        let f = Poly::parse(&r, "x*y").unwrap();
        let xy = MatrixFactorization::new(
            f.clone(),
            vec![
                PolyMatrix::parse(&r, &[&["x"]]).unwrap(),
                PolyMatrix::parse(&r, &[&["y"]]).unwrap(),
            ],
        )
        .unwrap();
        let s = xy.direct_sum(&xy.shift(1)).unwrap();
        assert_eq!(s.n(), 2);
        assert!(s.verify().valid);
        assert!(matches!(xy.direct_sum(&x), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn theta_identities() {
        let x = dinfty();
        // direct product oracle for θ_21 = φ_2 φ_3
        assert_eq!(x.theta(2, 1), x.phi(2) * x.phi(3));
        assert!(x.theta(2, 2).is_identity());
        for k in 1..=3 {
            assert_eq!(x.phi(k) * &x.theta(k + 1, k), x.f_identity());
            for i in (1..=3).filter(|&i| i != k) {
                assert_eq!(x.phi(k) * &x.theta(k + 1, i), x.theta(k, i));
            }
        }
    }

    #[test]
    fn min_gens_of_dinfty() {
        let x = dinfty();
        assert_eq!(x.min_gens_all(), vec![2, 2, 1]);
        assert!(!x.is_reduced());
        let e = e6(false);
        assert!(e.is_reduced());
        assert_eq!(e.min_gens_all(), vec![3, 3, 3]);
    }

    #[test]
    fn cyclic_indices() {
        assert_eq!(CyclicIndex::new(0, 3).value(), 3);
        assert_eq!(CyclicIndex::new(-1, 3).value(), 2);
        assert_eq!(CyclicIndex::new(3, 3).offset(1).value(), 1);
        assert_eq!(slot(4, 3), 0);
    }
}
