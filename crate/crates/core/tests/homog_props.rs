mod common;

use common::{build, nonzero_gauss, terms, with_linear_part};
use proptest::prelude::*;
use quathom::field::{Field, GaussRat};
use quathom::homog::{
    check_homogenizing, eigen_coordinates, homogeneous_presentation, lhs_certificate_check, solve_shifted_eigen,
    solve_shifted_eigen_iterative, LocalRingPresentation,
};
use quathom::series::{Ideal, SeriesRing, SubstitutionMap};
use quathom::Error;

fn ring() -> SeriesRing {
    SeriesRing::new(&["x", "y"], 6).unwrap()
}

fn lambdas() -> impl Strategy<Value = GaussRat> {
    let half_plus_half_i = GaussRat::ratio(1, 2).add(&GaussRat::ratio(1, 2).mul(&GaussRat::i()));
    prop_oneof![Just(GaussRat::ratio(1, 2)), Just(GaussRat::ratio(-1, 3)), Just(GaussRat::ratio(2, 3)), Just(half_plus_half_i)]
}

fn tails() -> impl Strategy<Value = Vec<Vec<(Vec<u16>, GaussRat)>>> {
    proptest::collection::vec(terms(2, 2, 4, 3), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solution_is_unique(lambda in lambdas(), tail in tails(), delta in terms(2, 2, 6, 4)) {
        // e(c) − λc is linear in c, so uniqueness means it has no kernel on 𝔪²
        let r = ring();
        let e = with_linear_part(&r, &lambda, &tail);
        let delta = build(&r, &delta);
        let rhs = &e.substitute(&delta).unwrap() - &delta.scale(&lambda);
        prop_assert_eq!(solve_shifted_eigen(&e, &lambda, &rhs).unwrap(), delta.clone());
        prop_assert_eq!(rhs.is_zero(), delta.is_zero());
    }

    #[test]
    fn solver_is_linear_in_the_right_hand_side(lambda in lambdas(), tail in tails(), r1 in terms(2, 2, 6, 4), r2 in terms(2, 2, 6, 4), t in nonzero_gauss()) {
        let r = ring();
        let e = with_linear_part(&r, &lambda, &tail);
        let (a, b) = (build(&r, &r1), build(&r, &r2));
        let solve = |rhs: &quathom::series::Series<GaussRat>| solve_shifted_eigen(&e, &lambda, rhs).unwrap();
        let combo = &a.scale(&t) + &b;
        prop_assert_eq!(solve(&combo), &solve(&a).scale(&t) + &solve(&b));
    }

    #[test]
    fn both_solution_paths_agree(lambda in lambdas(), tail in tails(), rhs in terms(2, 2, 6, 5)) {
        let r = ring();
        let e = with_linear_part(&r, &lambda, &tail);
        let rhs = build(&r, &rhs);
        prop_assert_eq!(
            solve_shifted_eigen(&e, &lambda, &rhs).unwrap(),
            solve_shifted_eigen_iterative(&e, &lambda, &rhs).unwrap()
        );
    }

    #[test]
    fn eigen_coordinates_linearize_the_map(lambda in lambdas(), tail in tails()) {
        let r = ring();
        let e = with_linear_part(&r, &lambda, &tail);
        let fs = eigen_coordinates(&e, &LocalRingPresentation::free(&r)).unwrap();
        for (k, f) in fs.iter().enumerate() {
            prop_assert_eq!(e.substitute(f).unwrap(), f.scale(&lambda));
            prop_assert_eq!(f.graded_component(1), r.var(k));
        }
    }

    #[test]
    fn conjugated_scalings_present_the_tangent_cone(tail in tails(), lambda in lambdas()) {
        // φ ∘ e_λ ∘ φ⁻¹ preserves φ(J) for homogeneous J = (x·y)
        let r = ring();
        let phi = with_linear_part(&r, &GaussRat::int(1), &tail);
        let e = phi.compose(&SubstitutionMap::diagonal(&r, &lambda).compose(&phi.invert().unwrap()).unwrap()).unwrap();
        let xy = &r.var::<GaussRat>(0) * &r.var(1);
        let a = LocalRingPresentation::new(&r, Ideal::new(&r, vec![phi.substitute(&xy).unwrap()]).unwrap()).unwrap();
        prop_assert_eq!(check_homogenizing(&e, &a).unwrap(), lambda.clone());
        let cert = homogeneous_presentation(&e, &a).unwrap();
        prop_assert!(cert.homogeneous_ideal.is_homogeneous());
        let check = lhs_certificate_check(&cert, &a);
        prop_assert!(check.passed, "{:?}", check.reasons);
        let (y1, y2) = (cert.ring.var::<GaussRat>(0), cert.ring.var(1));
        let expected = Ideal::new(&cert.ring, vec![&y1 * &y2]).unwrap();
        prop_assert!(expected.equals(&cert.homogeneous_ideal).unwrap());
    }

    #[test]
    fn non_scalar_differentials_are_rejected(tail in tails(), a in nonzero_gauss(), b in nonzero_gauss()) {
        prop_assume!(a != b);
        let r = ring();
        let images = vec![&r.var::<GaussRat>(0).scale(&a) + &build(&r, &tail[0]), &r.var::<GaussRat>(1).scale(&b) + &build(&r, &tail[1])];
        let e = SubstitutionMap::new(&r, images).unwrap();
        prop_assert_eq!(check_homogenizing(&e, &LocalRingPresentation::free(&r)), Err(Error::NotScalarDifferential));
    }
}

#[test]
fn lambda_outside_the_unit_disc_is_rejected() {
    let r = ring();
    for lambda in [GaussRat::int(1), GaussRat::int(2), GaussRat::int(0), GaussRat::i()] {
        let e = SubstitutionMap::diagonal(&r, &lambda);
        let err = check_homogenizing(&e, &LocalRingPresentation::free(&r)).unwrap_err();
        assert!(matches!(err, Error::LambdaOutOfRange(_)), "{lambda:?}: {err}");
    }
}

#[test]
fn maps_not_preserving_the_relations_are_rejected() {
    let r = ring();
    let (x, y) = (r.var::<GaussRat>(0), r.var::<GaussRat>(1));
    let a = LocalRingPresentation::new(&r, Ideal::new(&r, vec![&y.pow(2) - &x.pow(3)]).unwrap()).unwrap();
    let e = SubstitutionMap::diagonal(&r, &GaussRat::ratio(1, 2));
    assert!(matches!(check_homogenizing(&e, &a), Err(Error::DoesNotPreserveIdeal(_))));
}
