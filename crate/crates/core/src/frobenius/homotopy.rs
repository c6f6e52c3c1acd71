use serde::Serialize;

use crate::error::{usage, Result};
use crate::linalg::PolyMatrix;
use crate::mfcore::{slot, MatrixFactorization, Morphism};

use super::structure::StructureMaps;

/// Maps `s_j: F_j → F'_{j−1}`; `maps[j-1]` holds `s_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    maps: Vec<PolyMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyReport {
    /// `indices[i-1]` is true iff `α_i` equals the homotopy sum at `i`.
    pub indices: Vec<bool>,
    pub valid: bool,
}

impl Homotopy {
    /// Checks that `s_j` has shape `n'_{j−1} × n_j` for all `j`.
    pub fn new(
        source: &MatrixFactorization,
        target: &MatrixFactorization,
        maps: Vec<PolyMatrix>,
    ) -> Result<Homotopy> {
        if maps.len() != source.d() {
            return usage(format!(
                "expected {} homotopy maps, got {}",
                source.d(),
                maps.len()
            ));
        }
        if let Some((j, m)) = maps
            .iter()
            .enumerate()
            .find(|(_, m)| m.shape() != (target.n(), source.n()))
        {
            return usage(format!(
                "s_{} is {}x{}, expected {}x{}",
                j + 1,
                m.rows(),
                m.cols(),
                target.n(),
                source.n()
            ));
        }
        Ok(Homotopy { maps })
    }

    pub fn zero(source: &MatrixFactorization, target: &MatrixFactorization) -> Homotopy {
        Homotopy {
            maps: vec![PolyMatrix::zeros(source.ring(), target.n(), source.n()); source.d()],
        }
    }

    /// `s_j`, with `j` read cyclically.
    pub fn s(&self, j: i64) -> &PolyMatrix {
        &self.maps[slot(j, self.maps.len())]
    }

    pub fn maps(&self) -> &[PolyMatrix] {
        &self.maps
    }
}

/// `Σ_m θ'_{i,m} s_{m+1} θ_{m+1,i}`, the component at `i` of the morphism
/// that `s` makes null-homotopic.
pub fn homotopy_sum(
    source: &MatrixFactorization,
    target: &MatrixFactorization,
    s: &Homotopy,
    i: i64,
) -> PolyMatrix {
    let d = source.d() as i64;
    (0..d)
        .map(|k| {
            let m = i - k;
            &(&target.theta(i, m) * s.s(m + 1)) * &source.theta(m + 1, i)
        })
        .fold(
            PolyMatrix::zeros(source.ring(), target.n(), source.n()),
            |acc, t| &acc + &t,
        )
}

pub fn homotopy_verify(alpha: &Morphism, s: &Homotopy) -> HomotopyReport {
    let d = alpha.source().d() as i64;
    let indices: Vec<bool> = (1..=d)
        .map(|i| homotopy_sum(alpha.source(), alpha.target(), s, i) == *alpha.component(i))
        .collect();
    HomotopyReport {
        valid: indices.iter().all(|b| *b),
        indices,
    }
}

/// The morphism `X → X'` that `s` witnesses as null-homotopic.
pub fn null_homotopic_morphism(
    source: &MatrixFactorization,
    target: &MatrixFactorization,
    s: &Homotopy,
) -> Result<Morphism> {
    let d = source.d() as i64;
    Morphism::new(
        source,
        target,
        (1..=d)
            .map(|i| homotopy_sum(source, target, s, i))
            .collect(),
    )
}

/// The morphism `γ: I(X) → X'` with
/// `γ_k = (θ'_{k,k−1} s_k, s_{k+1}, θ'_{k,k+1} s_{k+2}, …, θ'_{k,k−2} s_{k−1})`;
/// `γ∘λ` is the null-homotopic morphism of `s`.
pub fn factor_through_injective(
    source: &MatrixFactorization,
    target: &MatrixFactorization,
    s: &Homotopy,
) -> Result<Morphism> {
    let maps = StructureMaps::new(source);
    let d = source.d() as i64;
    let ring = source.ring();
    let components = (1..=d)
        .map(|k| {
            let blocks: Vec<PolyMatrix> = (0..d)
                .map(|j| &target.theta(k, k + j - 1) * s.s(k + j))
                .collect();
            PolyMatrix::block(ring, &[blocks])
        })
        .collect::<Result<Vec<_>>>()?;
    Morphism::new(&maps.injective, target, components)
}

/// Reads `s_j` off a morphism `β: I(X) → X'` as the block of `β_{j−1}` on the
/// summand `F_j`. Then `β∘λ` is null-homotopic via `s`.
pub fn extract_homotopy(x: &MatrixFactorization, beta: &Morphism) -> Result<Homotopy> {
    let d = x.d();
    let n = x.n();
    if beta.source().n() != d * n || beta.source().d() != d {
        return usage("morphism does not start at I(X)");
    }
    let np = beta.target().n();
    let maps = (1..=d as i64)
        .map(|j| beta.component(j - 1).submatrix(0, np, n, n))
        .collect();
    Homotopy::new(x, beta.target(), maps)
}
