use num_complex::Complex64;
use proptest::prelude::*;
use quathom::field::{Field, GaussRat};
use quathom::linalg::Matrix;
use quathom::quatlin::{
    commutes_with_su2, hodge_frame, phi_from_frames, scalar_of_phi, su2_commutation_check, InducedComplexStructure,
    QuaternionModule, SCALAR_TOL,
};
use quathom::Error;

type C = Complex64;

fn structure() -> impl Strategy<Value = InducedComplexStructure<C>> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("away from zero", |(a, b, c)| a * a + b * b + c * c > 0.01)
        .prop_map(|(a, b, c)| {
            let n = (a * a + b * b + c * c).sqrt();
            InducedComplexStructure::new(C::new(a / n, 0.0), C::new(b / n, 0.0), C::new(c / n, 0.0)).unwrap()
        })
}

fn lambda(n: usize, i: &InducedComplexStructure<C>, j: &InducedComplexStructure<C>) -> C {
    scalar_of_phi(&QuaternionModule::new(n), i, j).unwrap().lambda
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projector_is_an_orthogonal_half(i in structure(), n in 1usize..=3) {
        let frame = hodge_frame(&QuaternionModule::new(n), &i).unwrap();
        let p = frame.projector10();
        prop_assert!(p.mul(p).approx_eq(p, SCALAR_TOL));
        prop_assert!(p.adjoint().approx_eq(p, SCALAR_TOL));
        prop_assert!(p.add(&p.conj()).approx_eq(&Matrix::identity(4 * n), SCALAR_TOL));
        prop_assert_eq!(p.rank(), 2 * n);
        prop_assert_eq!(frame.basis10().len(), 2 * n);
    }

    #[test]
    fn phi_is_a_real_scalar_in_the_unit_interval(i in structure(), j in structure(), n in 1usize..=2) {
        let s = scalar_of_phi(&QuaternionModule::new(n), &i, &j).unwrap();
        prop_assert!(s.residual < SCALAR_TOL);
        prop_assert!(s.lambda.im.abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&s.lambda.re));
    }

    #[test]
    fn direct_sums_share_the_scalar(i in structure(), j in structure()) {
        let l1 = lambda(1, &i, &j);
        prop_assert!((lambda(2, &i, &j) - l1).norm() < 1e-10);
        prop_assert!((lambda(3, &i, &j) - l1).norm() < 1e-10);
    }

    #[test]
    fn opposite_structures_are_complementary(i in structure(), j in structure()) {
        // P_J + P_{−J} = Id, so Φ_{I,J} + Φ_{I,−J} = id on V_I^{1,0}
        prop_assert!((lambda(1, &i, &j) + lambda(1, &i, &j.negated()) - C::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn scalar_is_symmetric(i in structure(), j in structure()) {
        prop_assert!((lambda(2, &i, &j) - lambda(2, &j, &i)).norm() < 1e-10);
    }

    #[test]
    fn extremes_only_at_equal_and_opposite(i in structure()) {
        prop_assert!((lambda(1, &i, &i) - C::new(1.0, 0.0)).norm() < 1e-10);
        prop_assert!(lambda(1, &i, &i.negated()).norm() < 1e-10);
    }

    #[test]
    fn phi_commutes_with_the_quaternion_action(i in structure(), j in structure()) {
        prop_assert!(su2_commutation_check(&QuaternionModule::new(2), &i, &j).unwrap());
    }

    #[test]
    fn perturbed_phi_fails_the_commutation_check(i in structure(), j in structure(), e in 0.01f64..1.0) {
        let module = QuaternionModule::new(1);
        let (fi, fj) = (hodge_frame(&module, &i).unwrap(), hodge_frame(&module, &j).unwrap());
        let phi = phi_from_frames(&fi, &fj);
        let mut perturbed = phi.clone();
        perturbed[(0, 1)] += C::new(e, 0.0);
        prop_assert!(!commutes_with_su2(&module, &fi, &perturbed));
    }
}

#[test]
fn exact_axis_structures() {
    let module = QuaternionModule::<GaussRat>::new(1);
    let axes: Vec<_> = (0..3).map(InducedComplexStructure::<GaussRat>::axis).collect();
    for (a, i) in axes.iter().enumerate() {
        for (b, j) in axes.iter().enumerate() {
            let s = scalar_of_phi(&module, i, j).unwrap();
            let expected = if a == b { GaussRat::int(1) } else { GaussRat::ratio(1, 2) };
            assert_eq!(s.lambda, expected, "axes {a}, {b}");
            assert_eq!(s.residual, 0.0);
            assert!(su2_commutation_check(&module, i, j).unwrap());
        }
    }
}

#[test]
fn rational_directions_close_over_the_gaussian_rationals() {
    let q = |n, d| GaussRat::ratio(n, d);
    let i = InducedComplexStructure::from_direction(q(3, 1), q(4, 1), q(0, 1)).unwrap();
    assert_eq!(i.coefficients(), [q(3, 5), q(4, 5), q(0, 1)]);
    let irr = InducedComplexStructure::from_direction(q(1, 1), q(1, 1), q(0, 1));
    assert!(matches!(irr, Err(Error::FieldClosureError(_))));
    assert!(matches!(InducedComplexStructure::new(q(3, 5), q(4, 5), q(1, 1)), Err(Error::NotUnitImaginary(_))));
    let lambda = scalar_of_phi(&QuaternionModule::new(1), &InducedComplexStructure::axis(0), &i).unwrap().lambda;
    assert_eq!(lambda, q(4, 5));
    assert!(lambda.sub(&q(1, 1).add(&q(3, 5)).mul(&q(1, 2))).is_zero());
}
