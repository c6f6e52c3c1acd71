use serde::Serialize;

use crate::linalg::PolyMatrix;
use crate::mfcore::{MatrixFactorization, Morphism};
use crate::ring::Poly;

/// Square block matrix with `nb x nb` blocks of size `n`, zero unless `f`
/// supplies a block.
pub(crate) fn block_grid(
    x: &MatrixFactorization,
    row_blocks: usize,
    col_blocks: usize,
    f: impl Fn(usize, usize) -> Option<PolyMatrix>,
) -> PolyMatrix {
    let n = x.n();
    let mut m = PolyMatrix::zeros(x.ring(), row_blocks * n, col_blocks * n);
    for r in 0..row_blocks {
        for c in 0..col_blocks {
            if let Some(b) = f(r, c) {
                m.paste(r * n, c * n, &b);
            }
        }
    }
    m
}

/// Slots summed in `F̂_k = F_{k+1} ⊕ ··· ⊕ F_{k−1}`, in order.
pub fn hat_slots(k: i64, d: usize) -> Vec<i64> {
    (1..d as i64).map(|j| k + j).collect()
}

/// The maps attached to `X` by the projective-cover and injective-envelope
/// constructions. Indices into the vectors are `k − 1`.
#[derive(Clone, Debug)]
pub struct StructureMaps {
    pub x: MatrixFactorization,
    /// `Θ_k = (θ_{k,k+1} ··· θ_{k,k−1}): F̂_k → F_k`.
    pub big_theta: Vec<PolyMatrix>,
    /// `Ξ_k = (θ_{k+1,k}; …; θ_{k−1,k}): F_k → F̂_k`.
    pub xi: Vec<PolyMatrix>,
    /// `ρ_k = (1 Θ_k)`.
    pub rho: Vec<PolyMatrix>,
    /// `ε_k = (−Θ_k; 1)`.
    pub eps: Vec<PolyMatrix>,
    /// `λ_k = (1; Ξ_k)`.
    pub lambda: Vec<PolyMatrix>,
    /// `η_k = (−Ξ_k 1)`.
    pub eta: Vec<PolyMatrix>,
    /// `P(X)`, slot `k` being `F_k ⊕ F̂_k`.
    pub projective: MatrixFactorization,
    /// `I(X)`, slot `k` being `F_k ⊕ F̂_k`.
    pub injective: MatrixFactorization,
}

/// Identities recorded for a [`StructureMaps`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub rho_eps_zero: bool,
    pub eta_lambda_zero: bool,
    /// `Θ_k Ξ_k = (d−1)·f·I`, so `ρ_k λ_k = I + (d−1)·f·I`.
    pub theta_xi_is_multiple_of_f: bool,
    pub projective_valid: bool,
    pub injective_valid: bool,
    pub rho_is_admissible_epi: bool,
    pub lambda_is_admissible_mono: bool,
}

impl StructureMaps {
    pub fn new(x: &MatrixFactorization) -> StructureMaps {
        let d = x.d();
        let ring = x.ring();
        let id = x.identity_matrix();
        let fid = x.f_identity();
        let mut big_theta = Vec::with_capacity(d);
        let mut xi = Vec::with_capacity(d);
        let mut rho = Vec::with_capacity(d);
        let mut eps = Vec::with_capacity(d);
        let mut lambda = Vec::with_capacity(d);
        let mut eta = Vec::with_capacity(d);
        let mut p_factors = Vec::with_capacity(d);
        let mut i_factors = Vec::with_capacity(d);
        for k in 1..=d as i64 {
            let slots = hat_slots(k, d);
            let th = block_grid(x, 1, d - 1, |_, c| Some(x.theta(k, slots[c])));
            let xk = block_grid(x, d - 1, 1, |r, _| Some(x.theta(slots[r], k)));
            let hat_id = PolyMatrix::identity(ring, (d - 1) * x.n());
            rho.push(PolyMatrix::block(ring, &[vec![id.clone(), th.clone()]]).unwrap());
            eps.push(PolyMatrix::block(ring, &[vec![-&th], vec![hat_id.clone()]]).unwrap());
            lambda.push(PolyMatrix::block(ring, &[vec![id.clone()], vec![xk.clone()]]).unwrap());
            eta.push(PolyMatrix::block(ring, &[vec![-&xk, hat_id]]).unwrap());
            // P(X): (a_{k+1}, …, a_{k−1}, a_k) ↦ (f a_k, a_{k+1}, …, a_{k−1})
            p_factors.push(block_grid(x, d, d, |r, c| match (r, c) {
                (0, c) if c == d - 1 => Some(fid.clone()),
                (r, c) if r >= 1 && c == r - 1 => Some(id.clone()),
                _ => None,
            }));
            // I(X): (a_{k+1}, …, a_{k−1}, a_k) ↦ (a_k, f a_{k+1}, a_{k+2}, …, a_{k−1})
            i_factors.push(block_grid(x, d, d, |r, c| match (r, c) {
                (0, c) if c == d - 1 => Some(id.clone()),
                (1, 0) => Some(fid.clone()),
                (r, c) if r >= 2 && c == r - 1 => Some(id.clone()),
                _ => None,
            }));
            big_theta.push(th);
            xi.push(xk);
        }
        let f = x.f().clone();
        StructureMaps {
            x: x.clone(),
            big_theta,
            xi,
            rho,
            eps,
            lambda,
            eta,
            projective: MatrixFactorization::unverified(f.clone(), p_factors)
                .expect("square blocks"),
            injective: MatrixFactorization::unverified(f, i_factors).expect("square blocks"),
        }
    }

    /// `ρ: P(X) → X`.
    pub fn rho_morphism(&self) -> Morphism {
        Morphism::new(&self.projective, &self.x, self.rho.clone()).expect("shapes")
    }

    /// `λ: X → I(X)`.
    pub fn lambda_morphism(&self) -> Morphism {
        Morphism::new(&self.x, &self.injective, self.lambda.clone()).expect("shapes")
    }

    pub fn report(&self) -> StructureReport {
        let d = self.x.d();
        let multiple = PolyMatrix::scalar(
            &(self.x.f() * &Poly::int(self.x.ring(), d as i64 - 1)),
            self.x.n(),
        );
        StructureReport {
            rho_eps_zero: (0..d).all(|k| (&self.rho[k] * &self.eps[k]).is_zero()),
            eta_lambda_zero: (0..d).all(|k| (&self.eta[k] * &self.lambda[k]).is_zero()),
            theta_xi_is_multiple_of_f: (0..d).all(|k| &self.big_theta[k] * &self.xi[k] == multiple),
            projective_valid: self.projective.verify().valid,
            injective_valid: self.injective.verify().valid,
            rho_is_admissible_epi: self.rho_morphism().is_admissible_epi().unwrap_or(false),
            lambda_is_admissible_mono: self.lambda_morphism().is_admissible_mono().unwrap_or(false),
        }
    }
}

/// Permutation matrices `g_k` carrying `P(X)` onto `⊕_i 𝒫_i^n` (summands in
/// slot order, coordinates inner): strand `i` at slot `k` sits in block
/// `(i − k) mod d` of `F_k ⊕ F̂_k`.
pub fn projective_strand_permutation(x: &MatrixFactorization) -> Vec<PolyMatrix> {
    let d = x.d();
    let n = x.n();
    (1..=d as i64)
        .map(|k| {
            let mut g = PolyMatrix::zeros(x.ring(), d * n, d * n);
            for i in 0..d {
                let block = (i as i64 + 1 - k).rem_euclid(d as i64) as usize;
                for c in 0..n {
                    g.set(i * n + c, block * n + c, Poly::one(x.ring()));
                }
            }
            g
        })
        .collect()
}
