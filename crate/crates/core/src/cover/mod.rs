//! The `d`-fold branched cover `R♯ = S⟦z⟧/(f + z^d)` with `σ(z) = ωz`, its
//! skew group algebra `R♯[σ]`, the isomorphism `ψ: R♯[σ] → Γ`, and the
//! functors between matrix factorizations and `σ`-modules.
//!
//! Only prime fields host this module: a primitive `d`-th root of unity `ω`
//! and a root `μ` of `x^d + 1` must exist in `𝔽_p`.

mod sigma;

use serde::Serialize;

pub use sigma::{
    cover_round_trip, eigenspace_decompose, functor_a, functor_b, functor_b_morphism,
    CoverRoundTrip, CoverRoundTripReport, EigenspaceReport, Eigenspaces, SigmaModule, SigmaReport,
};

use crate::error::{domain, usage, Result};
use crate::gamma::{gamma_mul, GammaAlgebra, GammaElement};
use crate::linalg::PolyMatrix;
use crate::ring::{is_prime, Field, Poly, RingRef, Scalar};

/// `ω` with `ω^d = 1` of exact order `d`, and `μ` with `μ^d = −1`, in `𝔽_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    field: Field,
    d: usize,
    omega: Scalar,
    mu: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSummary {
    pub p: u64,
    pub d: usize,
    pub omega: u64,
    pub mu: u64,
}

impl RootData {
    /// Checks both defining properties and that `p ∤ d`.
    pub fn new(p: u64, d: usize, omega: u64, mu: u64) -> Result<RootData> {
        let field = Field::prime(p)?;
        if d < 2 {
            return usage("root data needs d ≥ 2");
        }
        if (d as u64).is_multiple_of(p) {
            return domain(format!("characteristic {p} divides d = {d}"));
        }
        let omega = field.int(omega as i64);
        let mu = field.int(mu as i64);
        if !omega.pow(d as u64).is_one() || (1..d).any(|t| omega.pow(t as u64).is_one()) {
            return domain(format!(
                "{omega} is not a primitive {d}-th root of unity mod {p}"
            ));
        }
        if !(&mu.pow(d as u64) + &field.one()).is_zero() {
            return domain(format!("{mu}^{d} ≠ −1 mod {p}"));
        }
        Ok(RootData {
            field,
            d,
            omega,
            mu,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn omega(&self) -> &Scalar {
        &self.omega
    }

    pub fn mu(&self) -> &Scalar {
        &self.mu
    }

    /// `ω^e` for any integer `e`.
    pub fn omega_pow(&self, e: i64) -> Scalar {
        self.omega.pow(e.rem_euclid(self.d as i64) as u64)
    }

    pub fn summary(&self) -> RootSummary {
        RootSummary {
            p: self.p(),
            d: self.d,
            omega: self.omega.residue().expect("prime field"),
            mu: self.mu.residue().expect("prime field"),
        }
    }
}

/// Smallest `ω` and `μ` in `𝔽_p` (as integers in `1..p`) meeting the
/// constraints.
pub fn find_roots(p: u64, d: usize) -> Result<RootData> {
    if !is_prime(p) {
        return usage(format!("{p} is not prime"));
    }
    if d < 2 {
        return usage("root data needs d ≥ 2");
    }
    if (d as u64).is_multiple_of(p) {
        return domain(format!("characteristic {p} divides d = {d}"));
    }
    let field = Field::prime(p)?;
    let d64 = d as u64;
    let omega = (2..p).find(|&w| {
        let s = field.int(w as i64);
        s.pow(d64).is_one() && (1..d64).all(|t| !s.pow(t).is_one())
    });
    let Some(omega) = omega else {
        return domain(format!(
            "no primitive {d}-th root of unity mod {p} (needs d | p−1)"
        ));
    };
    let mu = (1..p).find(|&m| (&field.int(m as i64).pow(d64) + &field.one()).is_zero());
    let Some(mu) = mu else {
        return domain(format!("no root of x^{d} + 1 mod {p}"));
    };
    RootData::new(p, d, omega, mu)
}

/// Smallest prime `p` with `2d | p − 1`, which hosts both roots.
pub fn cover_prime(d: usize) -> u64 {
    let step = 2 * d as u64;
    (1..)
        .map(|t| t * step + 1)
        .find(|p| is_prime(*p))
        .expect("Dirichlet")
}

/// `R♯[σ]` over a fixed `f`: elements `Σ c_ab z^a σ^b` with `0 ≤ a, b < d`.
#[derive(Clone, Debug)]
pub struct SkewAlgebra {
    roots: RootData,
    f: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewElement {
    d: usize,
    /// `coeffs[a*d + b]` multiplies `z^a σ^b`.
    coeffs: Vec<Poly>,
}

impl SkewAlgebra {
    pub fn new(roots: &RootData, f: &Poly) -> Result<SkewAlgebra> {
        if *f.field() != roots.field {
            return usage(format!(
                "f lives over {} but the roots over {}",
                f.field(),
                roots.field
            ));
        }
        Ok(SkewAlgebra {
            roots: roots.clone(),
            f: f.clone(),
        })
    }

    pub fn roots(&self) -> &RootData {
        &self.roots
    }

    pub fn ring(&self) -> &RingRef {
        self.f.ring()
    }

    pub fn zero(&self) -> SkewElement {
        let d = self.roots.d;
        SkewElement {
            d,
            coeffs: vec![Poly::zero(self.ring()); d * d],
        }
    }

    /// `z^a σ^b` for `0 ≤ a, b < d`.
    pub fn basis(&self, a: usize, b: usize) -> SkewElement {
        let mut e = self.zero();
        e.set(a, b, Poly::one(self.ring()));
        e
    }

    pub fn one(&self) -> SkewElement {
        self.basis(0, 0)
    }

    pub fn z(&self) -> SkewElement {
        self.basis(1 % self.roots.d, 0)
    }

    pub fn sigma(&self) -> SkewElement {
        self.basis(0, 1 % self.roots.d)
    }

    /// `(1/d) Σ_j ω^{jk} σ^j`.
    pub fn sigma_idempotent(&self, k: i64) -> Result<SkewElement> {
        let d = self.roots.d;
        let Some(inv_d) = self.roots.field.int(d as i64).inv() else {
            return domain("characteristic divides d");
        };
        let mut e = self.zero();
        for j in 0..d {
            let c = &inv_d * &self.roots.omega_pow(j as i64 * k);
            e.set(0, j, Poly::constant(self.ring(), c));
        }
        Ok(e)
    }
}

impl SkewElement {
    pub fn get(&self, a: usize, b: usize) -> &Poly {
        &self.coeffs[a * self.d + b]
    }

    pub fn set(&mut self, a: usize, b: usize, c: Poly) {
        self.coeffs[a * self.d + b] = c;
    }

    pub fn add(&self, other: &SkewElement) -> SkewElement {
        SkewElement {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Poly) -> SkewElement {
        SkewElement {
            d: self.d,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        let d = self.d;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / d, idx % d, c))
    }
}

/// `(z^a σ^b)(z^c σ^e) = ω^{bc} z^{a+c} σ^{b+e}`, with `z^d = −f`.
pub fn skew_mul(alg: &SkewAlgebra, x: &SkewElement, y: &SkewElement) -> Result<SkewElement> {
    let d = alg.roots.d;
    if x.d != d || y.d != d {
        return usage("skew elements of different d");
    }
    let neg_f = -&alg.f;
    let mut out = alg.zero();
    for (a, b, cx) in x.terms() {
        for (c, e, cy) in y.terms() {
            let twist = alg.roots.omega_pow((b * c) as i64);
            let mut coeff = (cx * cy).scale(&twist);
            let mut exp = a + c;
            if exp >= d {
                exp -= d;
                coeff = &coeff * &neg_f;
            }
            let slot = (b + e) % d;
            let sum = out.get(exp, slot) + &coeff;
            out.set(exp, slot, sum);
        }
    }
    Ok(out)
}

/// `ψ` on a skew element, through `ψ(z) = μ Σ e_{i(i−1)}` and
/// `ψ(σ) = Σ ω^{−i} e_ii` multiplied out in `Γ`.
pub fn psi(alg: &SkewAlgebra, gamma: &GammaAlgebra, x: &SkewElement) -> Result<GammaElement> {
    let d = alg.roots.d;
    let ring = alg.ring();
    let psi_z = gamma.z().scale(&Poly::constant(ring, alg.roots.mu.clone()));
    let mut psi_sigma = gamma.zero();
    for i in 1..=d {
        psi_sigma.set(i, i, Poly::constant(ring, alg.roots.omega_pow(-(i as i64))));
    }
    let mut z_pows = vec![gamma.one()];
    let mut s_pows = vec![gamma.one()];
    for t in 1..d {
        z_pows.push(gamma_mul(gamma, &z_pows[t - 1], &psi_z)?);
        s_pows.push(gamma_mul(gamma, &s_pows[t - 1], &psi_sigma)?);
    }
    let mut out = gamma.zero();
    for (a, b, c) in x.terms() {
        out = out.add(&gamma_mul(gamma, &z_pows[a], &s_pows[b])?.scale(c));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiCertificate {
    pub roots: RootSummary,
    pub pairs_checked: usize,
    pub multiplicative: bool,
    /// The `d² × d²` coefficient matrix of `ψ` on the basis is invertible at the origin.
    pub bijective: bool,
    /// `ψ(z)^d = ψ(z^d) = −f·1_Γ`.
    pub z_power: bool,
    pub sigma_power: bool,
    /// `ψ((1/d) Σ_j ω^{jk} σ^j) = e_kk` for every `k`.
    pub idempotents: bool,
    pub valid: bool,
}

pub fn psi_iso(roots: &RootData, f: &Poly) -> Result<PsiCertificate> {
    let d = roots.d;
    let skew = SkewAlgebra::new(roots, f)?;
    let gamma = GammaAlgebra::new(d, f)?;
    let ring = skew.ring().clone();
    let basis: Vec<(usize, usize)> = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).collect();
    let images = basis
        .iter()
        .map(|&(a, b)| psi(&skew, &gamma, &skew.basis(a, b)))
        .collect::<Result<Vec<_>>>()?;
    let mut multiplicative = true;
    for (s, &(a, b)) in basis.iter().enumerate() {
        for (t, &(c, e)) in basis.iter().enumerate() {
            let prod = skew_mul(&skew, &skew.basis(a, b), &skew.basis(c, e))?;
            if psi(&skew, &gamma, &prod)? != gamma_mul(&gamma, &images[s], &images[t])? {
                multiplicative = false;
            }
        }
    }
    let mut coeffs = PolyMatrix::zeros(&ring, d * d, d * d);
    for (col, img) in images.iter().enumerate() {
        for (i, j, c) in img.terms() {
            coeffs.set((i - 1) * d + (j - 1), col, c.clone());
        }
    }
    let bijective = coeffs.residue_rank() == d * d;
    let psi_z = psi(&skew, &gamma, &skew.z())?;
    let psi_s = psi(&skew, &gamma, &skew.sigma())?;
    let (mut zp, mut sp) = (gamma.one(), gamma.one());
    for _ in 0..d {
        zp = gamma_mul(&gamma, &zp, &psi_z)?;
        sp = gamma_mul(&gamma, &sp, &psi_s)?;
    }
    let z_power = zp == gamma.one().scale(&-f);
    let sigma_power = sp == gamma.one();
    let mut idempotents = true;
    for k in 1..=d {
        let img = psi(&skew, &gamma, &skew.sigma_idempotent(k as i64)?)?;
        idempotents &= img == gamma.basis(k as i64, k as i64);
    }
    Ok(PsiCertificate {
        roots: roots.summary(),
        pairs_checked: basis.len() * basis.len(),
        valid: multiplicative && bijective && z_power && sigma_power && idempotents,
        multiplicative,
        bijective,
        z_power,
        sigma_power,
        idempotents,
    })
}
