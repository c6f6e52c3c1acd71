use serde::Serialize;

use crate::error::{domain, usage, Result};
use crate::linalg::{elementary_reduce, Exactness, PivotPolicy, PolyMatrix};
use crate::mfcore::{MatrixFactorization, Morphism};
use crate::ring::Poly;

/// Invertible `h` with `h · m = (1; 0)` for a split injection `m`.
fn split_injection(m: &PolyMatrix, policy: PivotPolicy) -> Result<(PolyMatrix, PolyMatrix)> {
    let ring = m.ring();
    let (rows, cols) = m.shape();
    let red = elementary_reduce(m, policy)?;
    if red.pivots.len() < cols {
        return domain(match policy {
            PivotPolicy::ScalarUnits => {
                "splitting needs a non-scalar unit pivot; retry in truncated mode"
            }
            PivotPolicy::AnyUnit { .. } => "component is not a split injection",
        });
    }
    // Permutation sending the pivot row of column c to position c.
    let mut order: Vec<usize> = (0..cols)
        .map(|c| red.pivots.iter().find(|p| p.1 == c).unwrap().0)
        .collect();
    let rest: Vec<usize> = (0..rows).filter(|r| !order.contains(r)).collect();
    order.extend(rest);
    let mut perm = PolyMatrix::zeros(ring, rows, rows);
    for (pos, &r) in order.iter().enumerate() {
        perm.set(pos, r, Poly::one(ring));
    }
    let eye = PolyMatrix::identity(ring, rows - cols);
    let right = red.change.right.direct_sum(&eye)?;
    let right_inv = red.change.right_inv.direct_sum(&eye)?;
    let h = &(&right * &perm) * &red.change.left;
    let h_inv = &(&red.change.left_inv * &perm.transpose()) * &right_inv;
    Ok((h, h_inv))
}

fn clean(e: Exactness, m: PolyMatrix) -> PolyMatrix {
    match e {
        Exactness::Exact => m,
        Exactness::Truncated(n) => m.truncate(n),
    }
}

/// Completed square of a pushout or pullback.
#[derive(Clone, Debug)]
pub struct ExactSquare {
    /// The new object `Y'`.
    pub object: MatrixFactorization,
    /// Pushout: `X' → Y'`. Pullback: `Y' → W`.
    pub induced: Morphism,
    /// Pushout: `Y → Y'`. Pullback: `Y' → Y`.
    pub comparison: Morphism,
    pub exactness: Exactness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub object_valid: bool,
    pub induced_verified: bool,
    pub comparison_verified: bool,
    pub commutes: bool,
    pub exactness: Exactness,
    pub valid: bool,
}

fn check_square(
    e: Exactness,
    object: &MatrixFactorization,
    induced: &Morphism,
    comparison: &Morphism,
    lhs: Vec<PolyMatrix>,
    rhs: Vec<PolyMatrix>,
) -> SquareReport {
    let agree = |m: &Morphism| {
        (1..=m.source().d() as i64).all(|k| {
            e.agrees(
                &(m.component(k) * m.source().phi(k)),
                &(m.target().phi(k) * m.component(k + 1)),
            )
        })
    };
    let object_valid = (1..=object.d() as i64)
        .all(|k| e.agrees(&object.rotation_product(k), &object.f_identity()));
    let induced_verified = agree(induced);
    let comparison_verified = agree(comparison);
    let commutes = lhs.iter().zip(&rhs).all(|(a, b)| e.agrees(a, b));
    SquareReport {
        valid: object_valid && induced_verified && comparison_verified && commutes,
        object_valid,
        induced_verified,
        comparison_verified,
        commutes,
        exactness: e,
    }
}

/// Pushout of an admissible mono `q: X ↣ Y` along `β: X → X'`.
///
/// In a basis of `Y` where `q_k = (1; 0)` the factors read
/// `(φ_k b_k; 0 e_k)`; the pushout is `(φ'_k β_k b_k; 0 e_k)`.
pub fn pushout(q: &Morphism, beta: &Morphism, policy: PivotPolicy) -> Result<ExactSquare> {
    if q.source() != beta.source() {
        return usage("pushout needs morphisms with a common source");
    }
    if !q.is_admissible_mono()? {
        return usage("pushout needs an admissible monomorphism");
    }
    if !beta.verify().valid {
        return usage("pushout needs a verified morphism");
    }
    let e = policy.exactness();
    let y = q.target();
    let xp = beta.target();
    let ring = y.ring();
    let d = y.d();
    let (n, m, np) = (q.source().n(), y.n(), xp.n());
    let splits = q
        .components()
        .iter()
        .map(|c| split_injection(c, policy))
        .collect::<Result<Vec<_>>>()?;
    let mut factors = Vec::with_capacity(d);
    let mut comparison = Vec::with_capacity(d);
    for k in 0..d {
        let psi = clean(
            e,
            &(&splits[k].0 * &y.factors()[k]) * &splits[(k + 1) % d].1,
        );
        let b = psi.submatrix(0, n, n, m - n);
        let tail = psi.submatrix(n, m - n, n, m - n);
        factors.push(clean(
            e,
            PolyMatrix::block(
                ring,
                &[
                    vec![xp.factors()[k].clone(), &beta.components()[k] * &b],
                    vec![PolyMatrix::zeros(ring, m - n, np), tail],
                ],
            )?,
        ));
        let widen = beta.components()[k].direct_sum(&PolyMatrix::identity(ring, m - n))?;
        comparison.push(clean(e, &widen * &splits[k].0));
    }
    let object = MatrixFactorization::unverified(y.f().clone(), factors)?;
    let inclusion = PolyMatrix::block(
        ring,
        &[
            vec![PolyMatrix::identity(ring, np)],
            vec![PolyMatrix::zeros(ring, m - n, np)],
        ],
    )?;
    let induced = Morphism::new(xp, &object, vec![inclusion; d])?;
    let comparison = Morphism::new(y, &object, comparison)?;
    Ok(ExactSquare {
        object,
        induced,
        comparison,
        exactness: e,
    })
}

/// Pullback of an admissible epi `π: Y ↠ Z` along `β: W → Z`.
///
/// In a basis of `Y` where `π_k = (1 0)` the factors read
/// `(φ^Z_k 0; c_k e_k)`; the pullback is `(φ^W_k 0; c_k β_{k+1} e_k)`.
pub fn pullback(pi: &Morphism, beta: &Morphism, policy: PivotPolicy) -> Result<ExactSquare> {
    if pi.target() != beta.target() {
        return usage("pullback needs morphisms with a common target");
    }
    if !pi.is_admissible_epi()? {
        return usage("pullback needs an admissible epimorphism");
    }
    if !beta.verify().valid {
        return usage("pullback needs a verified morphism");
    }
    let e = policy.exactness();
    let y = pi.source();
    let w = beta.source();
    let ring = y.ring();
    let d = y.d();
    let (m, n, nw) = (y.n(), pi.target().n(), w.n());
    // Splitting π_k^T gives h with π_k h^T = (1 0).
    let splits = pi
        .components()
        .iter()
        .map(|c| {
            split_injection(&c.transpose(), policy).map(|(h, hi)| (hi.transpose(), h.transpose()))
        })
        .collect::<Result<Vec<_>>>()?;
    // splits[k] = (g, g_inv) with π_k g_inv = (1 0) and g = g_inv^{-1}.
    let mut factors = Vec::with_capacity(d);
    let mut comparison = Vec::with_capacity(d);
    for k in 0..d {
        let (g_k, _) = &splits[k];
        let (_, g_next_inv) = &splits[(k + 1) % d];
        let psi = clean(e, &(g_k * &y.factors()[k]) * g_next_inv);
        let c = psi.submatrix(n, m - n, 0, n);
        let tail = psi.submatrix(n, m - n, n, m - n);
        factors.push(clean(
            e,
            PolyMatrix::block(
                ring,
                &[
                    vec![w.factors()[k].clone(), PolyMatrix::zeros(ring, nw, m - n)],
                    vec![&c * &beta.components()[(k + 1) % d], tail],
                ],
            )?,
        ));
        let widen = beta.components()[k].direct_sum(&PolyMatrix::identity(ring, m - n))?;
        comparison.push(clean(e, &splits[k].1 * &widen));
    }
    let object = MatrixFactorization::unverified(y.f().clone(), factors)?;
    let projection = PolyMatrix::block(
        ring,
        &[vec![
            PolyMatrix::identity(ring, nw),
            PolyMatrix::zeros(ring, nw, m - n),
        ]],
    )?;
    let induced = Morphism::new(&object, w, vec![projection; d])?;
    let comparison = Morphism::new(&object, y, comparison)?;
    Ok(ExactSquare {
        object,
        induced,
        comparison,
        exactness: e,
    })
}

impl ExactSquare {
    /// Pushout square: `comparison ∘ q = induced ∘ β`.
    pub fn pushout_report(&self, q: &Morphism, beta: &Morphism) -> SquareReport {
        let lhs = (0..q.source().d())
            .map(|k| &self.comparison.components()[k] * &q.components()[k])
            .collect();
        let rhs = (0..q.source().d())
            .map(|k| &self.induced.components()[k] * &beta.components()[k])
            .collect();
        check_square(
            self.exactness,
            &self.object,
            &self.induced,
            &self.comparison,
            lhs,
            rhs,
        )
    }

    /// Pullback square: `π ∘ comparison = β ∘ induced`.
    pub fn pullback_report(&self, pi: &Morphism, beta: &Morphism) -> SquareReport {
        let lhs = (0..pi.source().d())
            .map(|k| &pi.components()[k] * &self.comparison.components()[k])
            .collect();
        let rhs = (0..pi.source().d())
            .map(|k| &beta.components()[k] * &self.induced.components()[k])
            .collect();
        check_square(
            self.exactness,
            &self.object,
            &self.induced,
            &self.comparison,
            lhs,
            rhs,
        )
    }
}
