use super::*;
use crate::linalg::{PivotPolicy, PolyMatrix};
use crate::mfcore::{MatrixFactorization, Morphism};
use crate::ring::{Field, Poly, Ring, RingRef};

fn qxy() -> RingRef {
    Ring::new(Field::Rational, &["x", "y"]).unwrap()
}

fn m(r: &RingRef, rows: &[&[&str]]) -> PolyMatrix {
    PolyMatrix::parse(r, rows).unwrap()
}

fn dinfty() -> MatrixFactorization {
    let r = qxy();
    MatrixFactorization::new(
        Poly::parse(&r, "x^2*y").unwrap(),
        vec![
            m(&r, &[&["x", "y"], &["0", "-x"]]),
            m(&r, &[&["0", "y"], &["x^2", "-x"]]),
            m(&r, &[&["1", "0"], &["x", "y"]]),
        ],
    )
    .unwrap()
}

fn pair() -> MatrixFactorization {
    let r = qxy();
    MatrixFactorization::new(
        Poly::parse(&r, "x*y").unwrap(),
        vec![m(&r, &[&["x"]]), m(&r, &[&["y"]])],
    )
    .unwrap()
}

fn lines4() -> MatrixFactorization {
    let r = qxy();
    MatrixFactorization::new(
        Poly::parse(&r, "x*y*(x+y)*(x-y)").unwrap(),
        vec![
            m(&r, &[&["x"]]),
            m(&r, &[&["y"]]),
            m(&r, &[&["x+y"]]),
            m(&r, &[&["x-y"]]),
        ],
    )
    .unwrap()
}

#[test]
fn d2_syzygy_and_cosyzygy_swap_and_negate() {
    let x = pair();
    let expected = vec![-x.phi(2), -x.phi(1)];
    let (omega, _) = syzygy(&x);
    let (omega_minus, _) = cosyzygy(&x);
    assert_eq!(omega.factors(), expected.as_slice());
    assert_eq!(omega_minus.factors(), expected.as_slice());
    let iso = syzygy_cosyzygy_iso(&x).unwrap();
    assert_eq!(iso.forward, Morphism::identity(&omega));
}

#[test]
fn d3_block_forms() {
    let x = dinfty();
    let r = x.ring().clone();
    let id = x.identity_matrix();
    let zero = PolyMatrix::zeros(&r, 2, 2);
    for k in 1..=3 {
        let omega = PolyMatrix::block(
            &r,
            &[
                vec![-x.phi(k + 1), -&(x.phi(k + 1) * x.phi(k + 2))],
                vec![id.clone(), zero.clone()],
            ],
        )
        .unwrap();
        assert_eq!(syzygy_factor(&x, k), omega);
        let omega_minus = PolyMatrix::block(
            &r,
            &[
                vec![zero.clone(), -&(x.phi(k + 1) * x.phi(k + 2))],
                vec![id.clone(), -x.phi(k + 2)],
            ],
        )
        .unwrap();
        assert_eq!(cosyzygy_factor(&x, k), omega_minus);
        let alpha = PolyMatrix::block(
            &r,
            &[
                vec![id.clone(), x.phi(k + 1).clone()],
                vec![zero.clone(), id.clone()],
            ],
        )
        .unwrap();
        assert_eq!(syzygy_iso_factor(&x, k), alpha);
    }
}

#[test]
fn dinfty_syzygy_matches_display() {
    let x = dinfty();
    let r = x.ring().clone();
    let (omega, ses) = syzygy(&x);
    assert_eq!(
        omega.factors(),
        &[
            m(
                &r,
                &[
                    &["0", "-y", "-x*y", "-y^2"],
                    &["-x^2", "x", "0", "x*y"],
                    &["1", "0", "0", "0"],
                    &["0", "1", "0", "0"],
                ]
            ),
            m(
                &r,
                &[
                    &["-1", "0", "-x", "-y"],
                    &["-x", "-y", "-x^2", "0"],
                    &["1", "0", "0", "0"],
                    &["0", "1", "0", "0"],
                ]
            ),
            m(
                &r,
                &[
                    &["-x", "-y", "-x^2*y", "0"],
                    &["0", "x", "x^3", "-x^2"],
                    &["1", "0", "0", "0"],
                    &["0", "1", "0", "0"],
                ]
            ),
        ]
    );
    assert!(omega.verify().valid);
    assert!(ses.certify(5, 7).exact);
}

#[test]
fn structure_maps_identities() {
    for x in [dinfty(), pair(), lines4()] {
        let maps = StructureMaps::new(&x);
        let report = maps.report();
        assert!(report.rho_eps_zero && report.eta_lambda_zero);
        assert!(report.theta_xi_is_multiple_of_f);
        assert!(report.projective_valid && report.injective_valid);
        assert!(report.rho_is_admissible_epi && report.lambda_is_admissible_mono);
    }
}

#[test]
fn d2_big_theta_is_the_other_factor() {
    let x = pair();
    let maps = StructureMaps::new(&x);
    assert_eq!(maps.big_theta[0], *x.phi(1));
    assert_eq!(maps.big_theta[1], *x.phi(2));
}

#[test]
fn projective_cover_is_a_sum_of_projectives() {
    let x = dinfty();
    let maps = StructureMaps::new(&x);
    let g = projective_strand_permutation(&x);
    let g_inv: Vec<PolyMatrix> = g.iter().map(PolyMatrix::transpose).collect();
    assert_eq!(
        maps.projective.conjugate(&g, &g_inv),
        MatrixFactorization::projective_sum(x.f(), &[2, 2, 2])
    );
}

#[test]
fn cosyzygy_sequences_are_exact() {
    for x in [dinfty(), pair(), lines4()] {
        let (omega_minus, ses) = cosyzygy(&x);
        assert!(omega_minus.verify().valid);
        assert!(ses.certify(5, 3).exact);
        let (_, syz) = syzygy(&x);
        assert!(syz.certify(5, 3).exact);
    }
}

#[test]
fn syzygy_iso_certifies() {
    for x in [dinfty(), pair(), lines4()] {
        let report = syzygy_cosyzygy_iso(&x).unwrap().report();
        assert!(report.valid, "{report:?}");
    }
    // d = 4 gives 3x3 block unitriangular components
    let iso = syzygy_cosyzygy_iso(&lines4()).unwrap();
    let a = &iso.forward.components()[0];
    assert_eq!(a.shape(), (3, 3));
    assert!((a * &a.invert_unitriangular().unwrap()).is_identity());
}

#[test]
fn cone_of_zero_decouples() {
    let x = dinfty();
    let zero = Morphism::zero(&x, &x).unwrap();
    let cone = mapping_cone(&zero).unwrap();
    let (omega_minus, _) = cosyzygy(&x);
    assert_eq!(cone.cone, x.direct_sum(&omega_minus).unwrap());
    assert!(cone.report().valid);
}

#[test]
fn cone_of_identity_is_injective_envelope() {
    for x in [dinfty(), pair(), lines4()] {
        let cone = mapping_cone(&Morphism::identity(&x)).unwrap();
        let report = cone.report();
        assert!(report.valid, "{report:?}");
        // β_k = (1 0; −Ξ_k 1) is lower unitriangular, hence invertible
        for b in cone.beta.components() {
            assert!(b.invert_unitriangular().is_ok());
        }
        assert_eq!(cone.beta.source(), &StructureMaps::new(&x).injective);
    }
}

#[test]
fn cone_of_d2_morphism() {
    let x = pair();
    let r = x.ring().clone();
    let p1 = MatrixFactorization::projective(1, 2, x.f());
    let alpha = Morphism::new(&x, &p1, vec![m(&r, &[&["y"]]), m(&r, &[&["1"]])]).unwrap();
    let cone = mapping_cone(&alpha).unwrap();
    assert!(cone.cone.verify().valid);
    assert!(cone.report().valid);
    assert!(mapping_cone(&Morphism::new(&x, &p1, vec![m(&r, &[&["1"]]); 2]).unwrap()).is_err());
}

#[test]
fn zero_homotopy_verifies() {
    let x = dinfty();
    let zero = Morphism::zero(&x, &x).unwrap();
    assert!(homotopy_verify(&zero, &Homotopy::zero(&x, &x)).valid);
}

#[test]
fn morphisms_through_injective_are_null_homotopic() {
    let x = dinfty();
    let r = x.ring().clone();
    let s = Homotopy::new(
        &x,
        &x,
        vec![
            m(&r, &[&["1", "x"], &["0", "y"]]),
            m(&r, &[&["0", "2"], &["x*y", "1"]]),
            m(&r, &[&["y", "0"], &["1", "-1"]]),
        ],
    )
    .unwrap();
    let gamma = factor_through_injective(&x, &x, &s).unwrap();
    assert!(gamma.verify().valid);
    let lambda = StructureMaps::new(&x).lambda_morphism();
    let alpha = gamma.compose(&lambda).unwrap();
    assert!(alpha.verify().valid);
    assert_eq!(alpha, null_homotopic_morphism(&x, &x, &s).unwrap());
    // The maps read off β = γ are exactly s, with a plus sign.
    let extracted = extract_homotopy(&x, &gamma).unwrap();
    assert_eq!(extracted, s);
    assert!(homotopy_verify(&alpha, &extracted).valid);
    let negated = Homotopy::new(&x, &x, s.maps().iter().map(|m| -m).collect()).unwrap();
    assert!(!homotopy_verify(&alpha, &negated).valid);
}

#[test]
fn identity_on_p1_is_null_homotopic() {
    let x = dinfty();
    let p1 = MatrixFactorization::projective(1, 3, x.f());
    let r = x.ring().clone();
    let s = Homotopy::new(
        &p1,
        &p1,
        vec![m(&r, &[&["0"]]), m(&r, &[&["1"]]), m(&r, &[&["0"]])],
    )
    .unwrap();
    let beta = factor_through_injective(&p1, &p1, &s).unwrap();
    assert!(beta.verify().valid);
    let lambda = StructureMaps::new(&p1).lambda_morphism();
    assert_eq!(beta.compose(&lambda).unwrap(), Morphism::identity(&p1));
    let extracted = extract_homotopy(&p1, &beta).unwrap();
    assert!(homotopy_verify(&Morphism::identity(&p1), &extracted).valid);
}

#[test]
fn pushout_along_identity_returns_target() {
    let x = dinfty();
    let maps = StructureMaps::new(&x);
    let lambda = maps.lambda_morphism();
    let sq = pushout(&lambda, &Morphism::identity(&x), PivotPolicy::ScalarUnits).unwrap();
    assert!(sq.pushout_report(&lambda, &Morphism::identity(&x)).valid);
    assert_eq!(sq.object.n(), maps.injective.n());
    let id = Morphism::identity(&maps.injective);
    let sq = pushout(&id, &id, PivotPolicy::ScalarUnits).unwrap();
    assert_eq!(sq.object, maps.injective);
}

#[test]
fn pushout_of_syzygy_inclusion_along_zero() {
    let x = dinfty();
    let (omega, ses) = syzygy(&x);
    let zero = Morphism::zero(&omega, &MatrixFactorization::zero(x.f(), 3)).unwrap();
    let sq = pushout(&ses.inclusion, &zero, PivotPolicy::ScalarUnits).unwrap();
    assert!(sq.pushout_report(&ses.inclusion, &zero).valid);
    assert_eq!(sq.object.n(), x.n());
    for k in 1..=3 {
        assert_eq!(
            sq.object.phi(k).generic_rank(5, 1),
            x.phi(k).generic_rank(5, 1)
        );
        assert_eq!(sq.object.phi(k).residue_rank(), x.phi(k).residue_rank());
    }
}

#[test]
fn d2_pushout_of_p1_into_p1_p2() {
    let x = pair();
    let r = x.ring().clone();
    let f = x.f();
    let p1 = MatrixFactorization::projective(1, 2, f);
    let sum = MatrixFactorization::projective_sum(f, &[1, 1]);
    let incl = Morphism::new(&p1, &sum, vec![m(&r, &[&["1"], &["0"]]); 2]).unwrap();
    let scale = Morphism::new(&p1, &p1, vec![m(&r, &[&["3"]]); 2]).unwrap();
    let sq = pushout(&incl, &scale, PivotPolicy::ScalarUnits).unwrap();
    assert!(sq.pushout_report(&incl, &scale).valid);
    // brute force: b_k = 0 here, so the pushout is 𝒫_1 ⊕ 𝒫_2 again
    assert_eq!(sq.object, sum);
    assert_eq!(
        sq.comparison.components()[0],
        m(&r, &[&["3", "0"], &["0", "1"]])
    );
}

#[test]
fn pullbacks() {
    for x in [dinfty(), pair(), lines4()] {
        let maps = StructureMaps::new(&x);
        let rho = maps.rho_morphism();
        let sq = pullback(&rho, &Morphism::identity(&x), PivotPolicy::ScalarUnits).unwrap();
        assert!(sq.pullback_report(&rho, &Morphism::identity(&x)).valid);
        let zero = Morphism::zero(&MatrixFactorization::zero(x.f(), x.d()), &x).unwrap();
        let sq = pullback(&rho, &zero, PivotPolicy::ScalarUnits).unwrap();
        assert!(sq.pullback_report(&rho, &zero).valid);
        assert_eq!(sq.object.n(), (x.d() - 1) * x.n());
    }
}

#[test]
fn truncated_pushout_with_non_scalar_unit() {
    let x = pair();
    let r = x.ring().clone();
    let f = x.f();
    let p1 = MatrixFactorization::projective(1, 2, f);
    let sum = MatrixFactorization::projective_sum(f, &[1, 1]);
    // (1+x; 0) and (1+x; 0) on the two slots: needs a series inverse
    let incl = Morphism::new(&p1, &sum, vec![m(&r, &[&["1+x"], &["0"]]); 2]).unwrap();
    assert!(incl.verify().valid);
    let id = Morphism::identity(&p1);
    assert!(matches!(
        pushout(&incl, &id, PivotPolicy::ScalarUnits),
        Err(crate::Error::Domain(_))
    ));
    let sq = pushout(&incl, &id, PivotPolicy::AnyUnit { precision: 6 }).unwrap();
    assert!(sq.pushout_report(&incl, &id).valid);
}

#[test]
fn periodic_resolutions() {
    for x in [dinfty(), pair(), lines4()] {
        let res = periodic_resolution(&x).unwrap();
        let report = res.report(&x, 5, 11);
        assert!(report.valid, "{report:?}");
    }
}

#[test]
fn d2_resolution_alternates_the_factors() {
    let x = pair();
    let res = periodic_resolution(&x).unwrap();
    let r = x.ring().clone();
    // α = 1, so p_1 = ε_1 η_1 = (−x; 1)(−y 1) and q_1 = λ_1 ρ_1 = (1; y)(1 x)
    assert_eq!(
        res.p.components()[0],
        m(&r, &[&["x*y", "-x"], &["-y", "1"]])
    );
    assert_eq!(res.q.components()[0], m(&r, &[&["1", "x"], &["y", "x*y"]]));
}
