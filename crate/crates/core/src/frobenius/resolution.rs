use serde::Serialize;

use crate::error::Result;
use crate::mfcore::{MatrixFactorization, Morphism};

use super::structure::StructureMaps;
use super::syzygy::{cosyzygy_with, syzygy_cosyzygy_iso, syzygy_with};

/// The maps `p = ε α⁻¹ η: I(X) → P(X)` and `q = λ ρ: P(X) → I(X)`.
#[derive(Clone, Debug)]
pub struct PeriodicResolution {
    pub p: Morphism,
    pub q: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub p_verified: bool,
    pub q_verified: bool,
    pub pq_zero: bool,
    pub qp_zero: bool,
    pub p_ranks: Vec<usize>,
    pub q_ranks: Vec<usize>,
    /// `(d−1)n` and `n`.
    pub expected_ranks: (usize, usize),
    pub valid: bool,
}

pub fn periodic_resolution(x: &MatrixFactorization) -> Result<PeriodicResolution> {
    let maps = StructureMaps::new(x);
    let (_, syz) = syzygy_with(&maps);
    let (_, cosyz) = cosyzygy_with(&maps);
    let iso = syzygy_cosyzygy_iso(x)?;
    let p = syz
        .inclusion
        .compose(&iso.inverse.compose(&cosyz.surjection)?)?;
    let q = cosyz.inclusion.compose(&syz.surjection)?;
    Ok(PeriodicResolution { p, q })
}

impl PeriodicResolution {
    pub fn report(&self, x: &MatrixFactorization, trials: usize, seed: u64) -> ResolutionReport {
        let zero = |m: &Result<Morphism>| {
            m.as_ref()
                .map(|m| m.components().iter().all(|c| c.is_zero()))
                .unwrap_or(false)
        };
        let pq_zero = zero(&self.p.compose(&self.q));
        let qp_zero = zero(&self.q.compose(&self.p));
        let p_ranks: Vec<usize> = self
            .p
            .components()
            .iter()
            .map(|c| c.generic_rank(trials, seed))
            .collect();
        let q_ranks: Vec<usize> = self
            .q
            .components()
            .iter()
            .map(|c| c.generic_rank(trials, seed))
            .collect();
        let expected_ranks = ((x.d() - 1) * x.n(), x.n());
        let p_verified = self.p.verify().valid;
        let q_verified = self.q.verify().valid;
        let valid = p_verified
            && q_verified
            && pq_zero
            && qp_zero
            && p_ranks.iter().all(|r| *r == expected_ranks.0)
            && q_ranks.iter().all(|r| *r == expected_ranks.1);
        ResolutionReport {
            p_verified,
            q_verified,
            pq_zero,
            qp_zero,
            p_ranks,
            q_ranks,
            expected_ranks,
            valid,
        }
    }
}
