//! The algebra `Γ = End(𝒫)ᵒᵖ` of `𝒫 = 𝒫_1 ⊕ ··· ⊕ 𝒫_d`, free over `S` on
//! `e_ij` (`i, j ∈ 1..=d`), and its modules.
//!
//! `e_ij` is the minimal morphism `𝒫_j → 𝒫_i`: its component at slot `k` is
//! `f` when `k` lies in the cyclic range `j+1, …, i` and `1` otherwise.
//! Products are opposite composition, so `e_ij · e_pq` vanishes unless
//! `i = q` and is then `f^c e_pj`.

mod module;

use serde::Serialize;

pub use module::{
    functor_f, functor_f_morphism, functor_h, gamma_round_trip, regular_module, GammaModule,
    ModuleReport, RoundTrip, RoundTripReport,
};

use crate::error::{usage, Result};
use crate::mfcore::slot;
use crate::ring::{Poly, RingRef};

/// Structure constants of `Γ` for a fixed `d` and `f`.
#[derive(Clone, Debug)]
pub struct GammaAlgebra {
    d: usize,
    f: Poly,
    /// Power of `f` in `e_ij · e_pi`, indexed by `(i, j, p)`.
    table: Vec<u32>,
}

/// `Σ coeffs[i][j] e_ij`, stored row-major with 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElement {
    d: usize,
    coeffs: Vec<Poly>,
}

fn cyclic_dist(from: usize, to: usize, d: usize) -> usize {
    (to + d - from) % d
}

impl GammaAlgebra {
    pub fn new(d: usize, f: &Poly) -> Result<GammaAlgebra> {
        if d < 2 {
            return usage("Γ needs d ≥ 2");
        }
        let mut alg = GammaAlgebra {
            d,
            f: f.clone(),
            table: Vec::with_capacity(d * d * d),
        };
        // Only i = q contributes, so index by (i, j, p).
        for i in 1..=d {
            for j in 1..=d {
                for p in 1..=d {
                    let c = alg.exponent(i, j, 1) + alg.exponent(p, i, 1) - alg.exponent(p, j, 1);
                    alg.table.push(c);
                }
            }
        }
        Ok(alg)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn ring(&self) -> &RingRef {
        self.f.ring()
    }

    /// Power of `f` in the slot-`k` component of `e_ij`.
    pub fn exponent(&self, i: usize, j: usize, k: usize) -> u32 {
        let d = self.d;
        let (i, j, k) = (i - 1, j - 1, k - 1);
        let reach = cyclic_dist(j, i, d);
        let pos = cyclic_dist(j, k, d);
        u32::from(pos >= 1 && pos <= reach)
    }

    /// `e_ij · e_pq = f^c e_{p j}` as `(p, j, c)`, or `None` when `i ≠ q`.
    pub fn basis_product(
        &self,
        i: usize,
        j: usize,
        p: usize,
        q: usize,
    ) -> Option<(usize, usize, u32)> {
        if i != q {
            return None;
        }
        let d = self.d;
        Some((p, j, self.table[((i - 1) * d + (j - 1)) * d + (p - 1)]))
    }

    pub fn zero(&self) -> GammaElement {
        GammaElement {
            d: self.d,
            coeffs: vec![Poly::zero(self.ring()); self.d * self.d],
        }
    }

    /// `e_ij` with indices read cyclically.
    pub fn basis(&self, i: i64, j: i64) -> GammaElement {
        let mut e = self.zero();
        e.set(
            slot(i, self.d) + 1,
            slot(j, self.d) + 1,
            Poly::one(self.ring()),
        );
        e
    }

    pub fn one(&self) -> GammaElement {
        let mut e = self.zero();
        for i in 1..=self.d {
            e.set(i, i, Poly::one(self.ring()));
        }
        e
    }

    /// `z = Σ_i e_{i(i−1)}`.
    pub fn z(&self) -> GammaElement {
        let mut e = self.zero();
        for i in 1..=self.d as i64 {
            e = e.add(&self.basis(i, i - 1));
        }
        e
    }
}

impl GammaElement {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Coefficient of `e_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.coeffs[(i - 1) * self.d + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Poly) {
        self.coeffs[(i - 1) * self.d + (j - 1)] = c;
    }

    pub fn add(&self, other: &GammaElement) -> GammaElement {
        GammaElement {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Poly) -> GammaElement {
        GammaElement {
            d: self.d,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Nonzero terms as `(i, j, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        let d = self.d;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / d + 1, idx % d + 1, c))
    }
}

pub fn gamma_mul(alg: &GammaAlgebra, a: &GammaElement, b: &GammaElement) -> Result<GammaElement> {
    if a.d != alg.d || b.d != alg.d {
        return usage("Γ elements of different d");
    }
    let mut out = alg.zero();
    for (i, j, ca) in a.terms() {
        for (p, q, cb) in b.terms() {
            if let Some((r, s, c)) = alg.basis_product(i, j, p, q) {
                let term = &(ca * cb) * &alg.f.pow(c);
                let sum = out.get(r, s) + &term;
                out.set(r, s, sum);
            }
        }
    }
    Ok(out)
}

/// `z^s = f^q Σ_i e_{i(i−r)}` for `s = dq + r`.
pub fn gamma_z_power(alg: &GammaAlgebra, s: u32) -> Result<GammaElement> {
    if s == 0 {
        return usage("z-power needs s ≥ 1");
    }
    let d = alg.d as u32;
    let (q, r) = (s / d, s % d);
    let mut out = alg.zero();
    for i in 1..=alg.d as i64 {
        out = out.add(&alg.basis(i, i - r as i64));
    }
    Ok(out.scale(&alg.f.pow(q)))
}

/// `e_ij` evaluated as the chain `e_{(j+1)j} e_{(j+2)(j+1)} ··· e_{i(i−1)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EijCertificate {
    pub i: usize,
    pub j: usize,
    /// Factors `(a, b)` standing for `e_ab`, in multiplication order.
    pub chain: Vec<(usize, usize)>,
    pub valid: bool,
}

pub fn eij_factorization(alg: &GammaAlgebra, i: usize, j: usize) -> Result<EijCertificate> {
    let d = alg.d;
    if !(1..=d).contains(&i) || !(1..=d).contains(&j) {
        return usage(format!("indices ({i}, {j}) out of range 1..={d}"));
    }
    if i == j {
        return usage("e_ii has no chain factorization");
    }
    let len = cyclic_dist(j - 1, i - 1, d);
    let chain: Vec<(usize, usize)> = (1..=len)
        .map(|t| {
            let hi = slot((j + t) as i64, d) + 1;
            let lo = slot((j + t - 1) as i64, d) + 1;
            (hi, lo)
        })
        .collect();
    let mut product = alg.one();
    for &(a, b) in &chain {
        product = gamma_mul(alg, &product, &alg.basis(a as i64, b as i64))?;
    }
    Ok(EijCertificate {
        i,
        j,
        valid: product == alg.basis(i as i64, j as i64),
        chain,
    })
}
