//! Projective summands: the size predictions for syzygies and a splitter
//! that detaches `𝒫_i` summands with explicit base changes.
//!
//! `X` has a summand `𝒫_i` exactly when `θ_{i+1,i}` (the product of all
//! factors except `φ_i`) has a unit entry, and the number of such summands
//! is the residue rank of `θ_{i+1,i}`. A unit entry `u = θ_{i+1,i}[r][c]`
//! yields the strand `v_k = θ_{k,i} e_c` and the retraction
//! `a_k = e_r^T θ_{i+1,k}`, with `a_k v_k = u` in every slot.

use serde::Serialize;

use crate::error::{usage, Result};
use crate::linalg::{Exactness, PivotPolicy, PolyMatrix};
use crate::mfcore::{slot, MatrixFactorization};
use crate::ring::Poly;

/// Some factor is invertible.
pub fn is_pseudoprojective(x: &MatrixFactorization) -> Result<bool> {
    if x.n() == 0 {
        return usage("the zero factorization has no pseudoprojective test");
    }
    Ok(x.factors().iter().any(|m| m.residue_rank() == x.n()))
}

/// Predicted shape of `Ω(X) ≅ Ω̃ ⊕ ⊕_k 𝒫_k^{m_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitPrediction {
    /// Minimal generator counts of `cok φ_k`.
    pub mu: Vec<usize>,
    /// `m_k = n − μ_k`.
    pub m: Vec<usize>,
    /// `Σ μ_k − n`.
    pub stable_size: usize,
}

pub fn predict_syzygy_split(x: &MatrixFactorization) -> SplitPrediction {
    let mu = x.min_gens_all();
    let m = mu.iter().map(|u| x.n() - u).collect();
    let stable_size = mu.iter().sum::<usize>() - x.n();
    SplitPrediction { mu, m, stable_size }
}

/// Number of `𝒫_i` summands for each slot `i`, read off `θ_{i+1,i}`.
pub fn projective_multiplicities(x: &MatrixFactorization) -> Vec<usize> {
    (1..=x.d() as i64)
        .map(|i| x.theta(i + 1, i).residue_rank())
        .collect()
}

/// `X ≅ stable_part ⊕ 𝒫_1^{s_1} ⊕ ··· ⊕ 𝒫_d^{s_d}` through
/// `g_k φ_k g_{k+1}^{-1}`.
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub stable_part: MatrixFactorization,
    pub multiplicities: Vec<usize>,
    /// `g_k` (index `k − 1`).
    pub transforms: Vec<PolyMatrix>,
    pub inverses: Vec<PolyMatrix>,
    pub exactness: Exactness,
    /// No `θ_{i+1,i}` of the stable part has a unit entry.
    pub fixpoint: bool,
    /// Why the exact splitter stopped before the fixpoint, if it did.
    pub blocked: Option<String>,
    /// Slots of the detached summands in detachment order.
    pub detached: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub inverses_ok: bool,
    pub decomposition_ok: bool,
    pub stable_valid: bool,
    /// Residue ranks of `θ_{i+1,i}` on the stable part; all zero at a fixpoint.
    pub stable_multiplicities: Vec<usize>,
    /// Unit entries left in the stable part's factors.
    pub stable_unit_entries: usize,
    pub exactness: Exactness,
    pub valid: bool,
}

impl SplitResult {
    pub fn verify(&self, x: &MatrixFactorization) -> SplitReport {
        let e = self.exactness;
        let inverses_ok = self
            .transforms
            .iter()
            .zip(&self.inverses)
            .all(|(g, h)| e.is_identity(&(g * h)) && e.is_identity(&(h * g)));
        let target = self
            .stable_part
            .direct_sum(&MatrixFactorization::projective_sum(
                x.f(),
                &self.multiplicities,
            ))
            .expect("same f and d");
        let decomposition_ok = (1..=x.d() as i64).all(|k| {
            let conj =
                &(&self.transforms[slot(k, x.d())] * x.phi(k)) * &self.inverses[slot(k + 1, x.d())];
            e.agrees(&conj, target.phi(k))
        });
        let stable_valid = (1..=x.d() as i64).all(|k| {
            e.agrees(
                &self.stable_part.rotation_product(k),
                &self.stable_part.f_identity(),
            )
        });
        let stable_unit_entries = self
            .stable_part
            .factors()
            .iter()
            .flat_map(|m| m.entries())
            .filter(|p| p.is_unit())
            .count();
        SplitReport {
            valid: inverses_ok && decomposition_ok && stable_valid,
            inverses_ok,
            decomposition_ok,
            stable_valid,
            stable_multiplicities: projective_multiplicities(&self.stable_part),
            stable_unit_entries,
            exactness: e,
        }
    }
}

fn clean(e: Exactness, m: PolyMatrix) -> PolyMatrix {
    match e {
        Exactness::Exact => m,
        Exactness::Truncated(n) => m.truncate(n),
    }
}

/// Base changes `B_k` (and inverses) putting the strand through `(r, c)` of
/// `θ_{i+1,i}` in the first coordinate of every slot, or a reason why the
/// policy cannot invert the required pivots.
fn strand_base_change(
    y: &MatrixFactorization,
    i: i64,
    r: usize,
    c: usize,
    policy: PivotPolicy,
) -> std::result::Result<(Vec<PolyMatrix>, Vec<PolyMatrix>), String> {
    let d = y.d();
    let m = y.n();
    let ring = y.ring();
    let e = policy.exactness();
    let u = y.theta(i + 1, i).get(r, c).clone();
    let u_inv = policy.invert(&u).map_err(|err| err.to_string())?;
    let mut bs = Vec::with_capacity(d);
    let mut b_invs = Vec::with_capacity(d);
    for k in 1..=d as i64 {
        let v = y.theta(k, i).column(c);
        let a = y.theta(i + 1, k).row_matrix(r);
        let Some(p) = (0..m).find(|&j| policy.admits(v.get(j, 0))) else {
            return Err(format!(
                "strand vector in slot {} has no admissible pivot",
                slot(k, d) + 1
            ));
        };
        let vp_inv = policy.invert(v.get(p, 0)).map_err(|err| err.to_string())?;
        let others: Vec<usize> = (0..m).filter(|&j| j != p).collect();
        let mut b = PolyMatrix::zeros(ring, m, m);
        let mut b_inv = PolyMatrix::zeros(ring, m, m);
        for j in 0..m {
            b.set(j, 0, v.get(j, 0).clone());
            b_inv.set(0, j, a.get(0, j) * &u_inv);
        }
        for (col, &j) in others.iter().enumerate() {
            let coeff = a.get(0, j) * &u_inv;
            for row in 0..m {
                let mut entry = -&(v.get(row, 0) * &coeff);
                if row == j {
                    entry = entry + Poly::one(ring);
                }
                b.set(row, col + 1, entry);
            }
            b_inv.set(col + 1, j, Poly::one(ring));
            b_inv.set(col + 1, p, -&(v.get(j, 0) * &vp_inv));
        }
        bs.push(clean(e, b));
        b_invs.push(clean(e, b_inv));
    }
    Ok((bs, b_invs))
}

/// Detaches `𝒫_i` summands until no `θ_{i+1,i}` of the remainder has an
/// admissible unit entry.
pub fn split_projectives(x: &MatrixFactorization, policy: PivotPolicy) -> Result<SplitResult> {
    let d = x.d();
    let n = x.n();
    let ring = x.ring().clone();
    let e = policy.exactness();
    let mut g: Vec<PolyMatrix> = vec![PolyMatrix::identity(&ring, n); d];
    let mut g_inv = g.clone();
    // Current stable block occupies the trailing `m` coordinates.
    let mut stable = x.clone();
    let mut detached: Vec<usize> = Vec::new();
    let mut blocked: Option<String>;
    'search: loop {
        let m = stable.n();
        blocked = None;
        for i in 1..=d as i64 {
            let phi_hat = stable.theta(i + 1, i);
            for r in 0..m {
                for c in 0..m {
                    let entry = phi_hat.get(r, c);
                    if !entry.is_unit() {
                        continue;
                    }
                    if !policy.admits(entry) {
                        blocked.get_or_insert_with(|| {
                            format!(
                                "unit {entry} in slot {i} is not a scalar; retry in truncated mode"
                            )
                        });
                        continue;
                    }
                    let (bs, b_invs) = match strand_base_change(&stable, i, r, c, policy) {
                        Ok(pair) => pair,
                        Err(reason) => {
                            blocked.get_or_insert(reason);
                            continue;
                        }
                    };
                    let offset = n - m;
                    let lift = |b: &PolyMatrix| {
                        PolyMatrix::identity(&ring, offset)
                            .direct_sum(b)
                            .expect("same ring")
                    };
                    for k in 0..d {
                        g[k] = clean(e, &lift(&b_invs[k]) * &g[k]);
                        g_inv[k] = clean(e, &g_inv[k] * &lift(&bs[k]));
                    }
                    let conj = stable.conjugate(&b_invs, &bs);
                    let rest = conj
                        .factors()
                        .iter()
                        .map(|f| clean(e, f.submatrix(1, m - 1, 1, m - 1)))
                        .collect();
                    stable = MatrixFactorization::unverified(x.f().clone(), rest)?;
                    detached.push(slot(i, d) + 1);
                    continue 'search;
                }
            }
        }
        break;
    }
    // Reorder coordinates to (stable, 𝒫_1…, 𝒫_2…, …).
    let m = stable.n();
    let mut order: Vec<usize> = (n - m..n).collect();
    let mut by_slot: Vec<(usize, usize)> = detached
        .iter()
        .enumerate()
        .map(|(pos, &s)| (s, pos))
        .collect();
    by_slot.sort();
    order.extend(by_slot.iter().map(|&(_, pos)| pos));
    let mut perm = PolyMatrix::zeros(&ring, n, n);
    for (new, &old) in order.iter().enumerate() {
        perm.set(new, old, Poly::one(&ring));
    }
    let perm_t = perm.transpose();
    let transforms: Vec<PolyMatrix> = g.iter().map(|gk| &perm * gk).collect();
    let inverses: Vec<PolyMatrix> = g_inv.iter().map(|gk| gk * &perm_t).collect();
    let mut multiplicities = vec![0; d];
    for s in &detached {
        multiplicities[s - 1] += 1;
    }
    let fixpoint = projective_multiplicities(&stable).iter().all(|s| *s == 0);
    Ok(SplitResult {
        stable_part: stable,
        multiplicities,
        transforms,
        inverses,
        exactness: e,
        fixpoint,
        blocked: if fixpoint { None } else { blocked },
        detached,
    })
}
