use serde::Serialize;

use crate::error::{domain, usage, Result};
use crate::linalg::PolyMatrix;
use crate::mfcore::{MatrixFactorization, Morphism};

use super::{GammaAlgebra, GammaElement};

/// A `Γ`-module free over `S`, given by the action matrices of the `e_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaModule {
    d: usize,
    rank: usize,
    /// `action[(i-1)*d + (j-1)]` is the matrix of `e_ij`.
    action: Vec<PolyMatrix>,
    /// Sizes of the `e_11, …, e_dd` blocks when the basis is adapted.
    blocks: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleReport {
    /// `A(e_ij) A(e_pq) = A(e_ij · e_pq)` for all basis pairs.
    pub relations: bool,
    /// `Σ e_ii` acts as the identity.
    pub unit_acts_as_identity: bool,
    /// Each `e_ii` is the coordinate projector of its declared block.
    pub adapted: bool,
    pub valid: bool,
}

impl GammaModule {
    pub fn new(
        d: usize,
        action: Vec<PolyMatrix>,
        blocks: Option<Vec<usize>>,
    ) -> Result<GammaModule> {
        if action.len() != d * d {
            return usage(format!(
                "expected {} action matrices, got {}",
                d * d,
                action.len()
            ));
        }
        let rank = action[0].rows();
        if action.iter().any(|m| m.shape() != (rank, rank)) {
            return usage("action matrices must share one square shape");
        }
        if let Some(b) = &blocks {
            if b.len() != d || b.iter().sum::<usize>() != rank {
                return usage("block sizes must be d numbers summing to the rank");
            }
        }
        Ok(GammaModule {
            d,
            rank,
            action,
            blocks,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }

    /// Matrix of `e_ij`, 1-based.
    pub fn action(&self, i: usize, j: usize) -> &PolyMatrix {
        &self.action[(i - 1) * self.d + (j - 1)]
    }

    pub fn act(&self, a: &GammaElement) -> PolyMatrix {
        let ring = self.action[0].ring();
        a.terms().fold(
            PolyMatrix::zeros(ring, self.rank, self.rank),
            |acc, (i, j, c)| &acc + &self.action(i, j).scale(c),
        )
    }

    fn block_offsets(&self) -> Option<Vec<usize>> {
        self.blocks.as_ref().map(|b| {
            b.iter()
                .scan(0, |acc, s| {
                    let start = *acc;
                    *acc += s;
                    Some(start)
                })
                .collect()
        })
    }

    fn is_adapted(&self) -> bool {
        let (Some(sizes), Some(offsets)) = (self.blocks.as_ref(), self.block_offsets()) else {
            return false;
        };
        let ring = self.action[0].ring();
        (1..=self.d).all(|i| {
            let mut proj = PolyMatrix::zeros(ring, self.rank, self.rank);
            proj.paste(
                offsets[i - 1],
                offsets[i - 1],
                &PolyMatrix::identity(ring, sizes[i - 1]),
            );
            *self.action(i, i) == proj
        })
    }

    pub fn verify(&self, alg: &GammaAlgebra) -> ModuleReport {
        let d = self.d;
        let mut relations = d == alg.d();
        'outer: for i in 1..=d {
            for j in 1..=d {
                for p in 1..=d {
                    for q in 1..=d {
                        let lhs = self.action(i, j) * self.action(p, q);
                        let rhs = match alg.basis_product(i, j, p, q) {
                            Some((r, s, c)) => self.action(r, s).scale(&alg.f().pow(c)),
                            None => PolyMatrix::zeros(alg.ring(), self.rank, self.rank),
                        };
                        if lhs != rhs {
                            relations = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        let unit_acts_as_identity = self.act(&alg.one()).is_identity();
        let adapted = self.is_adapted();
        ModuleReport {
            valid: relations && unit_acts_as_identity,
            relations,
            unit_acts_as_identity,
            adapted,
        }
    }
}

/// `ℱ(X) = Hom(𝒫, X)` on the basis `F_1 ⊕ ··· ⊕ F_d`, where `x ∈ F_i` stands
/// for the morphism `𝒫_i → X` with components `θ_{k,i} x`. The element `e_ij`
/// acts as `θ_{j,i}: F_i → F_j`.
pub fn functor_f(x: &MatrixFactorization) -> GammaModule {
    let d = x.d();
    let n = x.n();
    let ring = x.ring();
    let mut action = Vec::with_capacity(d * d);
    for i in 1..=d {
        for j in 1..=d {
            let mut m = PolyMatrix::zeros(ring, d * n, d * n);
            m.paste((j - 1) * n, (i - 1) * n, &x.theta(j as i64, i as i64));
            action.push(m);
        }
    }
    GammaModule {
        d,
        rank: d * n,
        action,
        blocks: Some(vec![n; d]),
    }
}

/// `ℱ(α) = α_1 ⊕ ··· ⊕ α_d`.
pub fn functor_f_morphism(alpha: &Morphism) -> Result<PolyMatrix> {
    PolyMatrix::block_diagonal(alpha.source().ring(), alpha.components())
}

/// `ℋ(M)`: the maps `z: e_{k+1,k+1} M → e_kk M` for `k = 1, …, d`.
pub fn functor_h(alg: &GammaAlgebra, m: &GammaModule) -> Result<MatrixFactorization> {
    if m.d != alg.d() {
        return usage("module and algebra have different d");
    }
    if !m.is_adapted() {
        return domain("ℋ needs a basis adapted to e_11, …, e_dd");
    }
    let sizes = m.blocks.as_ref().expect("adapted");
    let n = sizes[0];
    if sizes.iter().any(|s| *s != n) {
        return domain(format!("idempotent blocks have unequal ranks {sizes:?}"));
    }
    let z = m.act(&alg.z());
    let d = m.d;
    let factors = (0..d)
        .map(|k| z.submatrix(k * n, n, ((k + 1) % d) * n, n))
        .collect();
    MatrixFactorization::new(alg.f().clone(), factors)
}

/// `Γ` as a left module over itself, with block `i` spanned by
/// `e_1i, …, e_di` (so `e_pq` sits at `(q−1)d + (p−1)`).
pub fn regular_module(alg: &GammaAlgebra) -> GammaModule {
    let d = alg.d();
    let ring = alg.ring();
    let idx = |p: usize, q: usize| (q - 1) * d + (p - 1);
    let mut action = Vec::with_capacity(d * d);
    for i in 1..=d {
        for j in 1..=d {
            let mut m = PolyMatrix::zeros(ring, d * d, d * d);
            for p in 1..=d {
                let (r, s, c) = alg.basis_product(i, j, p, i).expect("i = q");
                m.set(idx(r, s), idx(p, i), alg.f().pow(c));
            }
            action.push(m);
        }
    }
    GammaModule {
        d,
        rank: d * d,
        action,
        blocks: Some(vec![d; d]),
    }
}

/// `X → ℋℱ(X)` given by `θ` restricted to each `F_k`, and its inverse.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub image: MatrixFactorization,
    pub forward: Morphism,
    pub inverse: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub module: ModuleReport,
    pub forward_verified: bool,
    pub inverse_verified: bool,
    pub inverse_identities: bool,
    pub valid: bool,
}

pub fn gamma_round_trip(x: &MatrixFactorization) -> Result<RoundTrip> {
    let alg = GammaAlgebra::new(x.d(), x.f())?;
    let module = functor_f(x);
    let image = functor_h(&alg, &module)?;
    let n = x.n();
    // In adapted coordinates θ|_{F_k} is the k-th diagonal block of e_kk.
    let forward: Vec<PolyMatrix> = (1..=x.d())
        .map(|k| {
            module
                .action(k, k)
                .submatrix((k - 1) * n, n, (k - 1) * n, n)
        })
        .collect();
    let ring = x.ring();
    let inverse = forward
        .iter()
        .map(|m| {
            if m.is_identity() {
                Ok(PolyMatrix::identity(ring, n))
            } else {
                m.invert_unitriangular()
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RoundTrip {
        forward: Morphism::new(x, &image, forward)?,
        inverse: Morphism::new(&image, x, inverse)?,
        image,
    })
}

impl RoundTrip {
    pub fn report(&self, x: &MatrixFactorization) -> Result<RoundTripReport> {
        let alg = GammaAlgebra::new(x.d(), x.f())?;
        let module = functor_f(x).verify(&alg);
        let forward_verified = self.forward.verify().valid;
        let inverse_verified = self.inverse.verify().valid;
        let inverse_identities = self.inverse.compose(&self.forward)? == Morphism::identity(x)
            && self.forward.compose(&self.inverse)? == Morphism::identity(&self.image);
        Ok(RoundTripReport {
            valid: module.valid
                && module.adapted
                && forward_verified
                && inverse_verified
                && inverse_identities,
            module,
            forward_verified,
            inverse_verified,
            inverse_identities,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::periodic_resolution;
    use crate::ring::{Field, Poly, Ring, RingRef};

    fn qxy() -> RingRef {
        Ring::new(Field::Rational, &["x", "y"]).unwrap()
    }

    fn dinfty() -> MatrixFactorization {
        let r = qxy();
        MatrixFactorization::new(
            Poly::parse(&r, "x^2*y").unwrap(),
            vec![
                PolyMatrix::parse(&r, &[&["x", "y"], &["0", "-x"]]).unwrap(),
                PolyMatrix::parse(&r, &[&["0", "y"], &["x^2", "-x"]]).unwrap(),
                PolyMatrix::parse(&r, &[&["1", "0"], &["x", "y"]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn f_of_dinfty_is_an_adapted_module() {
        let x = dinfty();
        let alg = GammaAlgebra::new(3, x.f()).unwrap();
        let m = functor_f(&x);
        assert_eq!(m.rank(), 6);
        let report = m.verify(&alg);
        assert!(report.valid && report.adapted, "{report:?}");
    }

    #[test]
    fn f_of_projective_sum_is_the_regular_module() {
        let f = Poly::parse(&qxy(), "x^2*y").unwrap();
        for d in 2..=4 {
            let alg = GammaAlgebra::new(d, &f).unwrap();
            let p = MatrixFactorization::projective_sum(&f, &vec![1; d]);
            let reg = regular_module(&alg);
            assert_eq!(functor_f(&p), reg);
            assert!(reg.verify(&alg).valid);
            assert_eq!(functor_h(&alg, &reg).unwrap(), p);
        }
    }

    #[test]
    fn round_trips() {
        let x = dinfty();
        let rt = gamma_round_trip(&x).unwrap();
        assert_eq!(rt.image, x);
        assert!(rt.report(&x).unwrap().valid);
        let p1 = MatrixFactorization::projective(1, 3, x.f());
        let rt = gamma_round_trip(&p1).unwrap();
        assert_eq!(rt.image, p1);
    }

    #[test]
    fn h_rejects_unadapted_and_unequal_blocks() {
        let x = dinfty();
        let alg = GammaAlgebra::new(3, x.f()).unwrap();
        let m = functor_f(&x);
        let unadapted = GammaModule::new(3, m.action.clone(), None).unwrap();
        assert!(matches!(
            functor_h(&alg, &unadapted),
            Err(crate::Error::Domain(_))
        ));
        let lopsided = GammaModule::new(3, m.action.clone(), Some(vec![1, 2, 3])).unwrap();
        assert!(functor_h(&alg, &lopsided).is_err());
    }

    #[test]
    fn morphisms_map_to_module_maps() {
        let x = dinfty();
        let res = periodic_resolution(&x).unwrap();
        for alpha in [&res.p, &res.q] {
            let fa = functor_f_morphism(alpha).unwrap();
            let (src, tgt) = (functor_f(alpha.source()), functor_f(alpha.target()));
            for i in 1..=3 {
                for j in 1..=3 {
                    assert_eq!(tgt.action(i, j) * &fa, &fa * src.action(i, j));
                }
            }
        }
        let fp = functor_f_morphism(&res.p).unwrap();
        let fq = functor_f_morphism(&res.q).unwrap();
        assert!((&fp * &fq).is_zero() && (&fq * &fp).is_zero());
        let (d, n) = (3, 2);
        assert_eq!(fp.generic_rank(5, 7) + fq.generic_rank(5, 7), d * d * n);
    }
}
