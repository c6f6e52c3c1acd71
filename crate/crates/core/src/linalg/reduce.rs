use serde::Serialize;

use crate::error::Result;
use crate::ring::Poly;

use super::PolyMatrix;

/// Whether a computation is exact or only valid modulo terms of total
/// degree above the recorded precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Truncated(u32),
}

impl Exactness {
    pub fn agrees(&self, a: &PolyMatrix, b: &PolyMatrix) -> bool {
        match self {
            Exactness::Exact => a == b,
            Exactness::Truncated(n) => a.equals_mod_degree(b, *n),
        }
    }

    pub fn is_identity(&self, m: &PolyMatrix) -> bool {
        self.agrees(m, &PolyMatrix::identity(m.ring(), m.rows()))
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            Exactness::Exact => None,
            Exactness::Truncated(n) => Some(*n),
        }
    }

    fn clean(&self, m: PolyMatrix) -> PolyMatrix {
        match self {
            Exactness::Exact => m,
            Exactness::Truncated(n) => m.truncate(*n),
        }
    }
}

/// Which entries may serve as pivots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotPolicy {
    /// Nonzero constants only; all arithmetic stays exact.
    ScalarUnits,
    /// Any unit of the local ring, inverted as a series to the given precision.
    AnyUnit { precision: u32 },
}

impl PivotPolicy {
    pub fn exactness(&self) -> Exactness {
        match self {
            PivotPolicy::ScalarUnits => Exactness::Exact,
            PivotPolicy::AnyUnit { precision } => Exactness::Truncated(*precision),
        }
    }

    pub fn admits(&self, p: &Poly) -> bool {
        match self {
            PivotPolicy::ScalarUnits => p.is_unit() && p.as_constant().is_some(),
            PivotPolicy::AnyUnit { .. } => p.is_unit(),
        }
    }

    /// Inverse of an admissible pivot.
    pub fn invert(&self, p: &Poly) -> Result<Poly> {
        match self {
            PivotPolicy::ScalarUnits => {
                let c = p
                    .as_constant()
                    .and_then(|c| c.inv())
                    .ok_or_else(|| crate::Error::Domain(format!("{p} is not a scalar unit")))?;
                Ok(Poly::constant(p.ring(), c))
            }
            PivotPolicy::AnyUnit { precision } => Ok(p.series_inverse(*precision)?.poly),
        }
    }
}

/// Invertible left and right matrices together with their inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChange {
    pub left: PolyMatrix,
    pub left_inv: PolyMatrix,
    pub right: PolyMatrix,
    pub right_inv: PolyMatrix,
    pub exactness: Exactness,
}

impl BaseChange {
    pub fn identity(m: &PolyMatrix) -> BaseChange {
        let ring = m.ring();
        BaseChange {
            left: PolyMatrix::identity(ring, m.rows()),
            left_inv: PolyMatrix::identity(ring, m.rows()),
            right: PolyMatrix::identity(ring, m.cols()),
            right_inv: PolyMatrix::identity(ring, m.cols()),
            exactness: Exactness::Exact,
        }
    }

    /// Both stored inverses are two-sided, exactly or to the recorded precision.
    pub fn verify(&self) -> bool {
        let e = self.exactness;
        e.is_identity(&(&self.left * &self.left_inv))
            && e.is_identity(&(&self.left_inv * &self.left))
            && e.is_identity(&(&self.right * &self.right_inv))
            && e.is_identity(&(&self.right_inv * &self.right))
    }

    /// `left · m · right`.
    pub fn apply(&self, m: &PolyMatrix) -> PolyMatrix {
        &(&self.left * m) * &self.right
    }
}

/// Outcome of [`elementary_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// `left · input · right`, with each pivot normalised to 1 and its row
    /// and column otherwise cleared.
    pub reduced: PolyMatrix,
    pub change: BaseChange,
    /// Pivot positions in the order they were used.
    pub pivots: Vec<(usize, usize)>,
}

impl Reduction {
    /// The block left after deleting pivot rows and columns.
    pub fn remainder(&self) -> PolyMatrix {
        let rows: Vec<usize> = (0..self.reduced.rows())
            .filter(|i| self.pivots.iter().all(|p| p.0 != *i))
            .collect();
        let cols: Vec<usize> = (0..self.reduced.cols())
            .filter(|j| self.pivots.iter().all(|p| p.1 != *j))
            .collect();
        self.reduced.select(&rows, &cols)
    }
}

/// Repeatedly pivots on the first admissible entry in row-major order among
/// unused rows and columns, clearing its row and column. Stops at a
/// fixpoint where no admissible pivot remains.
pub fn elementary_reduce(m: &PolyMatrix, policy: PivotPolicy) -> Result<Reduction> {
    let exactness = policy.exactness();
    let ring = m.ring().clone();
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut change = BaseChange::identity(m);
    change.exactness = exactness;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    loop {
        let found = (0..rows)
            .filter(|i| pivots.iter().all(|p| p.0 != *i))
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .find(|&(i, j)| pivots.iter().all(|p| p.1 != j) && policy.admits(a.get(i, j)));
        let Some((pr, pc)) = found else {
            break;
        };
        let u = a.get(pr, pc).clone();
        let u_inv = policy.invert(&u)?;

        // Scale the pivot row by u^-1.
        let mut scale = PolyMatrix::identity(&ring, rows);
        scale.set(pr, pr, u_inv.clone());
        let mut unscale = PolyMatrix::identity(&ring, rows);
        unscale.set(pr, pr, u);
        a = exactness.clean(&scale * &a);
        change.left = exactness.clean(&scale * &change.left);
        change.left_inv = &change.left_inv * &unscale;

        // Clear the pivot column with row operations.
        let mut rop = PolyMatrix::identity(&ring, rows);
        let mut rop_inv = PolyMatrix::identity(&ring, rows);
        for i in (0..rows).filter(|&i| i != pr) {
            let c = a.get(i, pc).clone();
            if !c.is_zero() {
                rop.set(i, pr, -&c);
                rop_inv.set(i, pr, c);
            }
        }
        a = exactness.clean(&rop * &a);
        change.left = exactness.clean(&rop * &change.left);
        change.left_inv = exactness.clean(&change.left_inv * &rop_inv);

        // Clear the pivot row with column operations.
        let mut cop = PolyMatrix::identity(&ring, cols);
        let mut cop_inv = PolyMatrix::identity(&ring, cols);
        for j in (0..cols).filter(|&j| j != pc) {
            let c = a.get(pr, j).clone();
            if !c.is_zero() {
                cop.set(pc, j, -&c);
                cop_inv.set(pc, j, c);
            }
        }
        a = exactness.clean(&a * &cop);
        change.right = exactness.clean(&change.right * &cop);
        change.right_inv = exactness.clean(&cop_inv * &change.right_inv);

        pivots.push((pr, pc));
    }
    Ok(Reduction {
        reduced: a,
        change,
        pivots,
    })
}
