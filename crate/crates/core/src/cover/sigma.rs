use serde::Serialize;

use crate::error::{domain, usage, Result};
use crate::linalg::PolyMatrix;
use crate::mfcore::{MatrixFactorization, Morphism};
use crate::ring::Poly;

use super::{RootData, RootSummary};

/// An `R♯[σ]`-module free over `S`, given by the actions of `z` and `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaModule {
    pub d: usize,
    pub zmat: PolyMatrix,
    pub smat: PolyMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaReport {
    /// `σ^d = 1`.
    pub sigma_order: bool,
    /// `z^d = −f`.
    pub z_relation: bool,
    /// `σz = ωzσ`.
    pub twisted_commutation: bool,
    pub valid: bool,
}

fn check_field(roots: &RootData, ring_field: &crate::ring::Field) -> Result<()> {
    if *ring_field != roots.field {
        return usage(format!(
            "factorization lives over {ring_field} but the roots over {}",
            roots.field
        ));
    }
    Ok(())
}

impl SigmaModule {
    pub fn new(d: usize, zmat: PolyMatrix, smat: PolyMatrix) -> Result<SigmaModule> {
        if !zmat.is_square() || zmat.shape() != smat.shape() {
            return usage("z and σ actions must be square of one size");
        }
        Ok(SigmaModule { d, zmat, smat })
    }

    pub fn rank(&self) -> usize {
        self.zmat.rows()
    }

    pub fn verify(&self, roots: &RootData, f: &Poly) -> SigmaReport {
        let n = self.rank();
        let ring = self.zmat.ring();
        let sigma_order = self.smat.pow(self.d as u32).is_identity();
        let z_relation = self.zmat.pow(self.d as u32) == PolyMatrix::scalar(&-f, n);
        let omega = Poly::constant(ring, roots.omega.clone());
        let twisted_commutation =
            &self.smat * &self.zmat == (&self.zmat * &self.smat).scale(&omega);
        SigmaReport {
            valid: sigma_order && z_relation && twisted_commutation,
            sigma_order,
            z_relation,
            twisted_commutation,
        }
    }
}

/// Position of `F_k` in the basis `F_d ⊕ F_{d−1} ⊕ ··· ⊕ F_1`.
fn b_position(k: usize, d: usize) -> usize {
    d - k
}

/// `ℬ(X)` on `F_d ⊕ ··· ⊕ F_1`: `z` maps `F_{k+1}` to `F_k` by `μ⁻¹φ_k`
/// and `σ` scales `F_i` by `ω^{d−i}`.
pub fn functor_b(x: &MatrixFactorization, roots: &RootData) -> Result<SigmaModule> {
    check_field(roots, x.ring().field())?;
    if x.d() != roots.d {
        return usage(format!(
            "factorization has d = {} but the roots d = {}",
            x.d(),
            roots.d
        ));
    }
    let d = x.d();
    let n = x.n();
    let ring = x.ring();
    let mu_inv = Poly::constant(ring, roots.mu.inv().expect("μ is a unit"));
    let mut zmat = PolyMatrix::zeros(ring, d * n, d * n);
    let mut smat = PolyMatrix::zeros(ring, d * n, d * n);
    for k in 1..=d {
        let next = k % d + 1;
        zmat.paste(
            b_position(k, d) * n,
            b_position(next, d) * n,
            &x.phi(k as i64).scale(&mu_inv),
        );
        let weight = Poly::constant(ring, roots.omega_pow((d - k) as i64));
        let pos = b_position(k, d) * n;
        smat.paste(pos, pos, &PolyMatrix::scalar(&weight, n));
    }
    SigmaModule::new(d, zmat, smat)
}

/// `ℬ(α) = α_d ⊕ ··· ⊕ α_1`.
pub fn functor_b_morphism(alpha: &Morphism) -> Result<PolyMatrix> {
    let mut blocks = alpha.components().to_vec();
    blocks.reverse();
    PolyMatrix::block_diagonal(alpha.source().ring(), &blocks)
}

/// Projectors `π_k = (1/d) Σ_i ω^{−ik} σ^i` onto the `ω^k`-eigenspaces.
#[derive(Clone, Debug)]
pub struct Eigenspaces {
    pub projectors: Vec<PolyMatrix>,
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenspaceReport {
    pub sums_to_identity: bool,
    pub orthogonal_idempotents: bool,
    pub ranks: Vec<usize>,
    pub valid: bool,
}

pub fn eigenspace_decompose(module: &SigmaModule, roots: &RootData) -> Result<Eigenspaces> {
    check_field(roots, module.smat.ring().field())?;
    let d = module.d;
    let ring = module.smat.ring();
    let Some(inv_d) = roots.field.int(d as i64).inv() else {
        return domain(format!("characteristic {} divides d = {d}", roots.p()));
    };
    let powers: Vec<PolyMatrix> =
        std::iter::successors(Some(PolyMatrix::identity(ring, module.rank())), |m| {
            Some(m * &module.smat)
        })
        .take(d)
        .collect();
    let projectors: Vec<PolyMatrix> = (0..d as i64)
        .map(|k| {
            powers.iter().enumerate().fold(
                PolyMatrix::zeros(ring, module.rank(), module.rank()),
                |acc, (i, s)| {
                    let c = &inv_d * &roots.omega_pow(-(i as i64) * k);
                    &acc + &s.scale(&Poly::constant(ring, c))
                },
            )
        })
        .collect();
    // Idempotents have residue rank equal to their rank.
    let ranks = projectors.iter().map(PolyMatrix::residue_rank).collect();
    Ok(Eigenspaces { projectors, ranks })
}

impl Eigenspaces {
    pub fn report(&self) -> EigenspaceReport {
        let ring = self.projectors[0].ring();
        let n = self.projectors[0].rows();
        let sum = self
            .projectors
            .iter()
            .fold(PolyMatrix::zeros(ring, n, n), |acc, p| &acc + p);
        let sums_to_identity = sum.is_identity();
        let mut orthogonal_idempotents = true;
        for (k, a) in self.projectors.iter().enumerate() {
            for (l, b) in self.projectors.iter().enumerate() {
                let prod = a * b;
                let ok = if k == l { prod == *a } else { prod.is_zero() };
                orthogonal_idempotents &= ok;
            }
        }
        EigenspaceReport {
            valid: sums_to_identity && orthogonal_idempotents,
            sums_to_identity,
            orthogonal_idempotents,
            ranks: self.ranks.clone(),
        }
    }

    /// Coordinates spanning each eigenspace when every projector is a 0/1
    /// diagonal matrix.
    fn coordinates(&self) -> Option<Vec<Vec<usize>>> {
        self.projectors
            .iter()
            .map(|p| {
                let mut coords = Vec::new();
                for i in 0..p.rows() {
                    for j in 0..p.cols() {
                        let e = p.get(i, j);
                        if i == j && e.is_one() {
                            coords.push(i);
                        } else if !e.is_zero() {
                            return None;
                        }
                    }
                }
                Some(coords)
            })
            .collect()
    }
}

/// `𝒜(N)`: slot `k` is the eigenspace `N^{ω^{d−k}}`, and `φ_k` is `μz`
/// restricted to `N^{ω^{d−k−1}} → N^{ω^{d−k}}`.
pub fn functor_a(module: &SigmaModule, roots: &RootData, f: &Poly) -> Result<MatrixFactorization> {
    let spaces = eigenspace_decompose(module, roots)?;
    let Some(coords) = spaces.coordinates() else {
        return domain("𝒜 needs a basis adapted to the σ-eigenspaces");
    };
    let n = coords[0].len();
    if coords.iter().any(|c| c.len() != n) {
        return domain(format!("eigenspaces have unequal ranks {:?}", spaces.ranks));
    }
    let d = module.d;
    let ring = module.zmat.ring();
    let mu_z = module.zmat.scale(&Poly::constant(ring, roots.mu.clone()));
    let eigen = |k: usize| &coords[(d - k % d) % d];
    let factors = (1..=d)
        .map(|k| mu_z.select(eigen(k), eigen(k + 1)))
        .collect();
    MatrixFactorization::new(f.clone(), factors)
}

/// `X → 𝒜ℬ(X)` given by the inclusions `q_i: F_i → ℬ(X)` read in
/// eigenspace coordinates, with its inverse.
#[derive(Clone, Debug)]
pub struct CoverRoundTrip {
    pub module: SigmaModule,
    pub image: MatrixFactorization,
    pub forward: Morphism,
    pub inverse: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverRoundTripReport {
    pub roots: RootSummary,
    pub module: SigmaReport,
    pub eigenspaces: EigenspaceReport,
    pub forward_verified: bool,
    pub inverse_verified: bool,
    pub inverse_identities: bool,
    pub valid: bool,
}

pub fn cover_round_trip(x: &MatrixFactorization, roots: &RootData) -> Result<CoverRoundTrip> {
    let module = functor_b(x, roots)?;
    let image = functor_a(&module, roots, x.f())?;
    let spaces = eigenspace_decompose(&module, roots)?;
    let coords = spaces.coordinates().expect("ℬ output is adapted");
    let (d, n) = (x.d(), x.n());
    let ring = x.ring();
    let forward = (1..=d)
        .map(|k| {
            let mut q = PolyMatrix::zeros(ring, d * n, n);
            q.paste(b_position(k, d) * n, 0, &PolyMatrix::identity(ring, n));
            q.select(&coords[(d - k) % d], &(0..n).collect::<Vec<_>>())
        })
        .collect::<Vec<_>>();
    let inverse = forward.iter().map(PolyMatrix::transpose).collect();
    Ok(CoverRoundTrip {
        forward: Morphism::new(x, &image, forward)?,
        inverse: Morphism::new(&image, x, inverse)?,
        module,
        image,
    })
}

impl CoverRoundTrip {
    pub fn report(
        &self,
        x: &MatrixFactorization,
        roots: &RootData,
    ) -> Result<CoverRoundTripReport> {
        let module = self.module.verify(roots, x.f());
        let eigenspaces = eigenspace_decompose(&self.module, roots)?.report();
        let forward_verified = self.forward.verify().valid;
        let inverse_verified = self.inverse.verify().valid;
        let inverse_identities = self.inverse.compose(&self.forward)? == Morphism::identity(x)
            && self.forward.compose(&self.inverse)? == Morphism::identity(&self.image);
        Ok(CoverRoundTripReport {
            roots: roots.summary(),
            valid: module.valid
                && eigenspaces.valid
                && forward_verified
                && inverse_verified
                && inverse_identities,
            module,
            eigenspaces,
            forward_verified,
            inverse_verified,
            inverse_identities,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::find_roots;
    use crate::frobenius::periodic_resolution;
    use crate::ring::{Field, Ring, RingRef};

    fn f7() -> RingRef {
        Ring::new(Field::prime(7).unwrap(), &["x", "y"]).unwrap()
    }

    fn e6() -> MatrixFactorization {
        let r = f7();
        MatrixFactorization::new(
            Poly::parse(&r, "x^3 + y^4").unwrap(),
            vec![
                PolyMatrix::parse(
                    &r,
                    &[&["y", "0", "x"], &["x", "-y^2", "0"], &["0", "x", "-y"]],
                )
                .unwrap(),
                PolyMatrix::parse(
                    &r,
                    &[
                        &["-y^2", "0", "2*x"],
                        &["2*x", "-y", "0"],
                        &["0", "2*x", "y"],
                    ],
                )
                .unwrap(),
                PolyMatrix::parse(
                    &r,
                    &[
                        &["-y", "0", "4*x"],
                        &["4*x", "y", "0"],
                        &["0", "4*x", "-y^2"],
                    ],
                )
                .unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn b_of_e6_satisfies_the_relations() {
        let x = e6();
        let roots = find_roots(7, 3).unwrap();
        let b = functor_b(&x, &roots).unwrap();
        assert_eq!(b.rank(), 9);
        assert!(b.verify(&roots, x.f()).valid);
        // σ is diagonal with weights 1, ω, ω² on F_3, F_2, F_1
        let w = |e: i64| Poly::constant(&f7(), roots.omega_pow(e));
        for t in 0..9 {
            assert_eq!(*b.smat.get(t, t), w((t / 3) as i64));
        }
    }

    #[test]
    fn knoerrer_pair_over_f5() {
        let r = Ring::new(Field::prime(5).unwrap(), &["x", "y"]).unwrap();
        let roots = find_roots(5, 2).unwrap();
        let x = MatrixFactorization::new(
            Poly::parse(&r, "x*y").unwrap(),
            vec![
                PolyMatrix::parse(&r, &[&["x"]]).unwrap(),
                PolyMatrix::parse(&r, &[&["y"]]).unwrap(),
            ],
        )
        .unwrap();
        let b = functor_b(&x, &roots).unwrap();
        // μ = 2, μ⁻¹ = 3: z = (0 3y; 3x 0) on F_2 ⊕ F_1
        assert_eq!(
            b.zmat,
            PolyMatrix::parse(&r, &[&["0", "3*y"], &["3*x", "0"]]).unwrap()
        );
        assert!(b.verify(&roots, x.f()).valid);
    }

    #[test]
    fn field_mismatch_is_a_usage_error() {
        let q = Ring::new(Field::Rational, &["x", "y"]).unwrap();
        let x = MatrixFactorization::new(
            Poly::parse(&q, "x*y").unwrap(),
            vec![
                PolyMatrix::parse(&q, &[&["x"]]).unwrap(),
                PolyMatrix::parse(&q, &[&["y"]]).unwrap(),
            ],
        )
        .unwrap();
        let roots = find_roots(5, 2).unwrap();
        assert!(matches!(functor_b(&x, &roots), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn projectors_on_b_are_block_projectors() {
        let x = e6();
        let roots = find_roots(7, 3).unwrap();
        let b = functor_b(&x, &roots).unwrap();
        let spaces = eigenspace_decompose(&b, &roots).unwrap();
        assert!(spaces.report().valid);
        assert_eq!(spaces.ranks, vec![3, 3, 3]);
        let r = f7();
        for i in 1..=3usize {
            let mut block = PolyMatrix::zeros(&r, 9, 9);
            let pos = b_position(i, 3) * 3;
            block.paste(pos, pos, &PolyMatrix::identity(&r, 3));
            assert_eq!(spaces.projectors[(3 - i) % 3], block);
        }
    }

    #[test]
    fn conjugated_sigma_still_splits() {
        let r = f7();
        let roots = find_roots(7, 3).unwrap();
        let s = PolyMatrix::diagonal(
            &r,
            &[Poly::one(&r), Poly::constant(&r, roots.omega().clone())],
        );
        let g = PolyMatrix::parse(&r, &[&["1", "x + y"], &["0", "1"]]).unwrap();
        let g_inv = PolyMatrix::parse(&r, &[&["1", "-x - y"], &["0", "1"]]).unwrap();
        let conj = &(&g * &s) * &g_inv;
        let m = SigmaModule::new(3, PolyMatrix::zeros(&r, 2, 2), conj).unwrap();
        let spaces = eigenspace_decompose(&m, &roots).unwrap();
        assert!(spaces.report().valid);
        assert_eq!(spaces.ranks, vec![1, 1, 0]);
        let m = SigmaModule::new(3, PolyMatrix::zeros(&r, 2, 2), s).unwrap();
        let spaces = eigenspace_decompose(&m, &roots).unwrap();
        assert_eq!(
            spaces.projectors[0],
            PolyMatrix::parse(&r, &[&["1", "0"], &["0", "0"]]).unwrap()
        );
    }

    #[test]
    fn a_of_b_round_trip() {
        let x = e6();
        let roots = find_roots(7, 3).unwrap();
        let rt = cover_round_trip(&x, &roots).unwrap();
        assert_eq!(rt.image, x);
        assert!(rt.report(&x, &roots).unwrap().valid);
        let p1 = MatrixFactorization::projective(1, 3, x.f());
        assert_eq!(cover_round_trip(&p1, &roots).unwrap().image, p1);
    }

    #[test]
    fn a_rejects_unequal_eigenspaces() {
        let r = f7();
        let roots = find_roots(7, 3).unwrap();
        let s = PolyMatrix::diagonal(
            &r,
            &[Poly::one(&r), Poly::constant(&r, roots.omega().clone())],
        );
        let m = SigmaModule::new(3, PolyMatrix::zeros(&r, 2, 2), s).unwrap();
        let f = Poly::parse(&r, "x^3 + y^4").unwrap();
        assert!(matches!(
            functor_a(&m, &roots, &f),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn b_is_functorial_on_resolution_maps() {
        let x = e6();
        let roots = find_roots(7, 3).unwrap();
        let res = periodic_resolution(&x).unwrap();
        let comp = res.p.compose(&res.q).unwrap();
        assert_eq!(
            functor_b_morphism(&comp).unwrap(),
            &functor_b_morphism(&res.p).unwrap() * &functor_b_morphism(&res.q).unwrap()
        );
        let (bs, bt) = (
            functor_b(res.q.source(), &roots).unwrap(),
            functor_b(res.q.target(), &roots).unwrap(),
        );
        let bq = functor_b_morphism(&res.q).unwrap();
        assert_eq!(&bt.zmat * &bq, &bq * &bs.zmat);
        assert_eq!(&bt.smat * &bq, &bq * &bs.smat);
    }
}
