use serde::Serialize;

use crate::error::{usage, Result};
use crate::linalg::PolyMatrix;
use crate::mfcore::{MatrixFactorization, Morphism};

use super::structure::StructureMaps;
use super::syzygy::cosyzygy_with;

/// `C(α)` with the maps of its triangle.
#[derive(Clone, Debug)]
pub struct Cone {
    pub cone: MatrixFactorization,
    /// `q: X' → C(α)`, `q_k = (1; 0)`.
    pub q: Morphism,
    /// `p: C(α) → Ω⁻(X)`, `p_k = (0 1)`.
    pub p: Morphism,
    /// `β: I(X) → C(α)`, `β_k = (α_k 0; −Ξ_k 1)`.
    pub beta: Morphism,
    /// `λ: X → I(X)` and `η: I(X) → Ω⁻(X)` from the cosyzygy sequence.
    pub lambda: Morphism,
    pub eta: Morphism,
    pub alpha: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub cone_valid: bool,
    pub q_verified: bool,
    pub p_verified: bool,
    pub beta_verified: bool,
    /// `β∘λ = q∘α`.
    pub left_square: bool,
    /// `p∘β = η`.
    pub right_square: bool,
    pub valid: bool,
}

/// Mapping cone of a verified morphism `α: X → X'`. Slot `k` of the cone
/// is `F'_k ⊕ F̂_k` with
/// `Δ_k = (φ'_k  (0 ··· 0 α_k); 0  Ω⁻_k)`.
pub fn mapping_cone(alpha: &Morphism) -> Result<Cone> {
    if !alpha.verify().valid {
        return usage("mapping cone needs a verified morphism");
    }
    let x = alpha.source();
    let xp = alpha.target();
    let d = x.d();
    let (n, np) = (x.n(), xp.n());
    let ring = x.ring();
    let maps = StructureMaps::new(x);
    let (omega_minus, ses) = cosyzygy_with(&maps);
    let hat = (d - 1) * n;
    let factors = (1..=d as i64)
        .map(|k| {
            let mut corner = PolyMatrix::zeros(ring, np, hat);
            corner.paste(0, hat - n, alpha.component(k));
            PolyMatrix::block(
                ring,
                &[
                    vec![xp.phi(k).clone(), corner],
                    vec![PolyMatrix::zeros(ring, hat, np), omega_minus.phi(k).clone()],
                ],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let cone = MatrixFactorization::unverified(x.f().clone(), factors)?;
    let q = Morphism::new(
        xp,
        &cone,
        vec![
            PolyMatrix::block(
                ring,
                &[
                    vec![PolyMatrix::identity(ring, np)],
                    vec![PolyMatrix::zeros(ring, hat, np)]
                ]
            )?;
            d
        ],
    )?;
    let p = Morphism::new(
        &cone,
        &omega_minus,
        vec![
            PolyMatrix::block(
                ring,
                &[vec![
                    PolyMatrix::zeros(ring, hat, np),
                    PolyMatrix::identity(ring, hat)
                ]]
            )?;
            d
        ],
    )?;
    let beta_components = (0..d)
        .map(|k| {
            PolyMatrix::block(
                ring,
                &[
                    vec![
                        alpha.components()[k].clone(),
                        PolyMatrix::zeros(ring, np, hat),
                    ],
                    vec![-&maps.xi[k], PolyMatrix::identity(ring, hat)],
                ],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let beta = Morphism::new(&maps.injective, &cone, beta_components)?;
    Ok(Cone {
        cone,
        q,
        p,
        beta,
        lambda: ses.inclusion,
        eta: ses.surjection,
        alpha: alpha.clone(),
    })
}

impl Cone {
    pub fn report(&self) -> ConeReport {
        let cone_valid = self.cone.verify().valid;
        let q_verified = self.q.verify().valid;
        let p_verified = self.p.verify().valid;
        let beta_verified = self.beta.verify().valid;
        let left_square = self.beta.compose(&self.lambda).ok() == self.q.compose(&self.alpha).ok();
        let right_square = self.p.compose(&self.beta).ok().as_ref() == Some(&self.eta);
        ConeReport {
            valid: cone_valid
                && q_verified
                && p_verified
                && beta_verified
                && left_square
                && right_square,
            cone_valid,
            q_verified,
            p_verified,
            beta_verified,
            left_square,
            right_square,
        }
    }
}
