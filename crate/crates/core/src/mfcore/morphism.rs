use serde::Serialize;

use crate::error::{usage, Result};
use crate::linalg::PolyMatrix;

use super::{slot, MatrixFactorization};

/// Per-square verdicts of [`Morphism::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    /// `squares[k-1]` is true iff `α_k φ_k = φ'_k α_{k+1}`.
    pub squares: Vec<bool>,
    pub valid: bool,
}

/// A tuple `(α_1, …, α_d)` with `α_k: F_k → F'_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: MatrixFactorization,
    target: MatrixFactorization,
    components: Vec<PolyMatrix>,
}

impl Morphism {
    /// Checks shapes; commutativity is left to [`verify`](Self::verify).
    pub fn new(
        source: &MatrixFactorization,
        target: &MatrixFactorization,
        components: Vec<PolyMatrix>,
    ) -> Result<Morphism> {
        if source.d() != target.d() || source.f() != target.f() {
            return usage("source and target must share f and d");
        }
        if components.len() != source.d() {
            return usage(format!(
                "expected {} components, got {}",
                source.d(),
                components.len()
            ));
        }
        for (k, c) in components.iter().enumerate() {
            if c.shape() != (target.n(), source.n()) {
                return usage(format!(
                    "component {} is {}x{}, expected {}x{}",
                    k + 1,
                    c.rows(),
                    c.cols(),
                    target.n(),
                    source.n()
                ));
            }
            if **c.ring() != **source.ring() {
                return usage(format!("component {} is over a different ring", k + 1));
            }
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(x: &MatrixFactorization) -> Morphism {
        Morphism {
            source: x.clone(),
            target: x.clone(),
            components: vec![x.identity_matrix(); x.d()],
        }
    }

    pub fn zero(source: &MatrixFactorization, target: &MatrixFactorization) -> Result<Morphism> {
        let c = PolyMatrix::zeros(source.ring(), target.n(), source.n());
        Morphism::new(source, target, vec![c; source.d()])
    }

    pub fn source(&self) -> &MatrixFactorization {
        &self.source
    }

    pub fn target(&self) -> &MatrixFactorization {
        &self.target
    }

    pub fn components(&self) -> &[PolyMatrix] {
        &self.components
    }

    /// `α_k`, with `k` read cyclically.
    pub fn component(&self, k: i64) -> &PolyMatrix {
        &self.components[slot(k, self.components.len())]
    }

    pub fn verify(&self) -> MorphismReport {
        let d = self.source.d() as i64;
        let squares: Vec<bool> = (1..=d)
            .map(|k| {
                self.component(k) * self.source.phi(k) == self.target.phi(k) * self.component(k + 1)
            })
            .collect();
        MorphismReport {
            valid: squares.iter().all(|s| *s),
            squares,
        }
    }

    /// `self ∘ other`, defined when `other` ends where `self` starts.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if other.target != self.source {
            return usage("composition needs matching middle object");
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.checked_mul(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    /// `T^j(α) = (α_{j+1}, …, α_j)`.
    pub fn shift(&self, j: i64) -> Morphism {
        let d = self.components.len() as i64;
        Morphism {
            source: self.source.shift(j),
            target: self.target.shift(j),
            components: (1..=d).map(|k| self.component(k + j).clone()).collect(),
        }
    }

    pub fn checked_add(&self, other: &Morphism) -> Result<Morphism> {
        if self.source != other.source || self.target != other.target {
            return usage("morphisms with different endpoints cannot be added");
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(&self.source, &self.target, components)
    }

    fn require_verified(&self) -> Result<()> {
        let report = self.verify();
        if !report.valid {
            let k = report.squares.iter().position(|s| !s).unwrap() + 1;
            return usage(format!("not a morphism: square {k} does not commute"));
        }
        Ok(())
    }

    /// Every component is a split injection, i.e. its residue rank equals
    /// the source size.
    pub fn is_admissible_mono(&self) -> Result<bool> {
        self.require_verified()?;
        Ok(self
            .components
            .iter()
            .all(|c| c.residue_rank() == self.source.n()))
    }

    /// Every component is surjective, i.e. its residue rank equals the
    /// target size.
    pub fn is_admissible_epi(&self) -> Result<bool> {
        self.require_verified()?;
        Ok(self
            .components
            .iter()
            .all(|c| c.residue_rank() == self.target.n()))
    }
}
