use serde::Serialize;

use crate::error::Result;
use crate::linalg::PolyMatrix;
use crate::mfcore::{MatrixFactorization, Morphism};

use super::structure::{block_grid, hat_slots, StructureMaps};

/// `inclusion` followed by `surjection`.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    pub inclusion: Morphism,
    pub surjection: Morphism,
}

/// Exactness evidence for a [`ShortExactSeq`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesReport {
    pub inclusion_verified: bool,
    pub surjection_verified: bool,
    pub composite_zero: bool,
    pub admissible_mono: bool,
    pub admissible_epi: bool,
    /// Per slot: generic rank of the inclusion plus that of the surjection
    /// equals the middle rank.
    pub rank_additive: Vec<bool>,
    pub exact: bool,
}

impl ShortExactSeq {
    pub fn certify(&self, trials: usize, seed: u64) -> SesReport {
        let inclusion_verified = self.inclusion.verify().valid;
        let surjection_verified = self.surjection.verify().valid;
        let composite_zero = self
            .surjection
            .components()
            .iter()
            .zip(self.inclusion.components())
            .all(|(p, i)| (p * i).is_zero());
        let admissible_mono = self.inclusion.is_admissible_mono().unwrap_or(false);
        let admissible_epi = self.surjection.is_admissible_epi().unwrap_or(false);
        let middle = self.inclusion.target().n();
        let rank_additive: Vec<bool> = self
            .inclusion
            .components()
            .iter()
            .zip(self.surjection.components())
            .map(|(i, p)| i.generic_rank(trials, seed) + p.generic_rank(trials, seed) == middle)
            .collect();
        let exact = inclusion_verified
            && surjection_verified
            && composite_zero
            && admissible_mono
            && admissible_epi
            && rank_additive.iter().all(|b| *b);
        SesReport {
            inclusion_verified,
            surjection_verified,
            composite_zero,
            admissible_mono,
            admissible_epi,
            rank_additive,
            exact,
        }
    }
}

/// `Ω_k: F̂_{k+1} → F̂_k`. First block row `(−θ_{k+1,k+2}, …, −θ_{k+1,k})`,
/// identities on the subdiagonal.
pub fn syzygy_factor(x: &MatrixFactorization, k: i64) -> PolyMatrix {
    let d = x.d();
    let cols = hat_slots(k + 1, d);
    block_grid(x, d - 1, d - 1, |r, c| {
        if r == 0 {
            Some(-&x.theta(k + 1, cols[c]))
        } else if c + 1 == r {
            Some(x.identity_matrix())
        } else {
            None
        }
    })
}

/// `Ω⁻_k: F̂_{k+1} → F̂_k`. Last block column `(−θ_{k+1,k}; …; −θ_{k−1,k})`,
/// identities on the subdiagonal.
pub fn cosyzygy_factor(x: &MatrixFactorization, k: i64) -> PolyMatrix {
    let d = x.d();
    let rows = hat_slots(k, d);
    block_grid(x, d - 1, d - 1, |r, c| {
        if c == d - 2 {
            Some(-&x.theta(rows[r], k))
        } else if c + 1 == r {
            Some(x.identity_matrix())
        } else {
            None
        }
    })
}

/// `Ω(X)` together with `Ω ↣ P(X) ↠ X` given by `(ε, ρ)`.
pub fn syzygy(x: &MatrixFactorization) -> (MatrixFactorization, ShortExactSeq) {
    let maps = StructureMaps::new(x);
    syzygy_with(&maps)
}

pub fn syzygy_with(maps: &StructureMaps) -> (MatrixFactorization, ShortExactSeq) {
    let x = &maps.x;
    let factors = (1..=x.d() as i64).map(|k| syzygy_factor(x, k)).collect();
    let omega = MatrixFactorization::unverified(x.f().clone(), factors).expect("square blocks");
    let inclusion = Morphism::new(&omega, &maps.projective, maps.eps.clone()).expect("shapes");
    let ses = ShortExactSeq {
        inclusion,
        surjection: maps.rho_morphism(),
    };
    (omega, ses)
}

/// `Ω⁻(X)` together with `X ↣ I(X) ↠ Ω⁻(X)` given by `(λ, η)`.
pub fn cosyzygy(x: &MatrixFactorization) -> (MatrixFactorization, ShortExactSeq) {
    let maps = StructureMaps::new(x);
    cosyzygy_with(&maps)
}

pub fn cosyzygy_with(maps: &StructureMaps) -> (MatrixFactorization, ShortExactSeq) {
    let x = &maps.x;
    let factors = (1..=x.d() as i64).map(|k| cosyzygy_factor(x, k)).collect();
    let omega = MatrixFactorization::unverified(x.f().clone(), factors).expect("square blocks");
    let surjection = Morphism::new(&maps.injective, &omega, maps.eta.clone()).expect("shapes");
    let ses = ShortExactSeq {
        inclusion: maps.lambda_morphism(),
        surjection,
    };
    (omega, ses)
}

/// The isomorphism `Ω(X) → Ω⁻(X)` and its inverse.
#[derive(Clone, Debug)]
pub struct SyzygyIso {
    pub forward: Morphism,
    pub inverse: Morphism,
}

/// Evidence that [`SyzygyIso`] is an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub forward_squares: Vec<bool>,
    pub inverse_squares: Vec<bool>,
    pub inverse_products_identity: bool,
    pub unitriangular: bool,
    pub valid: bool,
}

/// Block upper unitriangular `α_k` on `F̂_k`, block `(r, c)` for `r < c`
/// equal to `θ_{k+r+1, k+c+1}`.
pub fn syzygy_iso_factor(x: &MatrixFactorization, k: i64) -> PolyMatrix {
    let d = x.d();
    let slots = hat_slots(k, d);
    block_grid(x, d - 1, d - 1, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => Some(x.identity_matrix()),
        std::cmp::Ordering::Less => Some(x.theta(slots[r], slots[c])),
        std::cmp::Ordering::Greater => None,
    })
}

pub fn syzygy_cosyzygy_iso(x: &MatrixFactorization) -> Result<SyzygyIso> {
    let (omega, _) = syzygy(x);
    let (omega_minus, _) = cosyzygy(x);
    let forward: Vec<PolyMatrix> = (1..=x.d() as i64)
        .map(|k| syzygy_iso_factor(x, k))
        .collect();
    let inverse = forward
        .iter()
        .map(PolyMatrix::invert_unitriangular)
        .collect::<Result<Vec<_>>>()?;
    Ok(SyzygyIso {
        forward: Morphism::new(&omega, &omega_minus, forward)?,
        inverse: Morphism::new(&omega_minus, &omega, inverse)?,
    })
}

impl SyzygyIso {
    pub fn report(&self) -> IsoReport {
        let forward_squares = self.forward.verify().squares;
        let inverse_squares = self.inverse.verify().squares;
        let inverse_products_identity = self
            .forward
            .components()
            .iter()
            .zip(self.inverse.components())
            .all(|(a, b)| (a * b).is_identity() && (b * a).is_identity());
        let unitriangular = self
            .forward
            .components()
            .iter()
            .all(|a| a.invert_unitriangular().is_ok());
        let valid = forward_squares.iter().chain(&inverse_squares).all(|b| *b)
            && inverse_products_identity
            && unitriangular;
        IsoReport {
            forward_squares,
            inverse_squares,
            inverse_products_identity,
            unitriangular,
            valid,
        }
    }
}
