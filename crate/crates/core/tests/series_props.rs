mod common;

use common::{build, gauss, nonzero_gauss, terms};
use proptest::prelude::*;
use quathom::field::{Field, GaussRat};
use quathom::linalg::Matrix;
use quathom::series::{Ideal, SeriesRing, SubstitutionMap};

fn ring(n: usize) -> SeriesRing {
    SeriesRing::new(&["x", "y", "z"][..n], n_trunc(n)).unwrap()
}

fn n_trunc(nvars: usize) -> usize {
    if nvars == 2 {
        6
    } else {
        4
    }
}

type Terms = Vec<(Vec<u16>, GaussRat)>;
type MapParts = (Vec<GaussRat>, Vec<GaussRat>, Vec<Terms>);

/// A map with linear part `diag + strictly upper triangular` (invertible)
/// and quadratic tail.
fn automorphism(nvars: usize) -> impl Strategy<Value = MapParts> {
    (
        proptest::collection::vec(nonzero_gauss(), nvars),
        proptest::collection::vec(gauss(), nvars * nvars),
        proptest::collection::vec(terms(nvars, 2, 3, 2), nvars),
    )
}

fn make_map(r: &SeriesRing, (diag, upper, tail): &MapParts) -> SubstitutionMap<GaussRat> {
    let n = r.nvars();
    let lin = Matrix::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else if j > i { upper[i * n + j].clone() } else { GaussRat::int(0) });
    let linear = SubstitutionMap::linear(r, &lin).unwrap();
    let images = linear.images().iter().zip(tail).map(|(l, t)| l + &build(r, t)).collect();
    SubstitutionMap::new(r, images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn substitution_is_a_ring_homomorphism(m in automorphism(2), f in terms(2, 0, 4, 4), g in terms(2, 0, 4, 4)) {
        let r = ring(2);
        let map = make_map(&r, &m);
        let (f, g) = (build(&r, &f), build(&r, &g));
        let s = |h: &quathom::series::Series<GaussRat>| map.substitute(h).unwrap();
        let (prod, sum) = (&f * &g, &f + &g);
        prop_assert_eq!(s(&prod), &s(&f) * &s(&g));
        prop_assert_eq!(s(&sum), &s(&f) + &s(&g));
    }

    #[test]
    fn inverse_composes_to_identity(m in automorphism(3)) {
        let r = ring(3);
        let map = make_map(&r, &m);
        let inv = map.invert().unwrap();
        let id = SubstitutionMap::identity(&r);
        prop_assert_eq!(map.compose(&inv).unwrap(), id.clone());
        prop_assert_eq!(inv.compose(&map).unwrap(), id);
    }

    #[test]
    fn compose_is_substitution_after_substitution(a in automorphism(2), b in automorphism(2), f in terms(2, 1, 4, 4)) {
        let r = ring(2);
        let (g, h) = (make_map(&r, &a), make_map(&r, &b));
        let f = build(&r, &f);
        let composed = g.compose(&h).unwrap();
        prop_assert_eq!(composed.substitute(&f).unwrap(), g.substitute(&h.substitute(&f).unwrap()).unwrap());
    }

    #[test]
    fn diagonal_map_scales_each_degree(lambda in nonzero_gauss(), f in terms(2, 0, 6, 6)) {
        let r = ring(2);
        let f = build(&r, &f);
        let image = SubstitutionMap::diagonal(&r, &lambda).substitute(&f).unwrap();
        for d in 0..=r.truncation() {
            prop_assert_eq!(image.graded_component(d), f.graded_component(d).scale(&lambda.pow(d as u32)));
        }
    }

    #[test]
    fn products_respect_truncation(f in terms(2, 0, 6, 5), g in terms(2, 0, 6, 5)) {
        let r = ring(2);
        let p = &build(&r, &f) * &build(&r, &g);
        prop_assert!(p.max_degree().unwrap_or(0) <= r.truncation());
        prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn standard_basis_generates_the_same_ideal(gens in proptest::collection::vec(terms(2, 2, 4, 3), 1..=3)) {
        let r = ring(2);
        let gens: Vec<_> = gens.iter().map(|g| build(&r, g)).filter(|g| !g.is_zero()).collect();
        let ideal = Ideal::new(&r, gens.clone()).unwrap();
        let basis = ideal.groebner().unwrap();
        for g in &gens {
            prop_assert!(basis.reduce(g).unwrap().is_zero());
        }
        let regenerated = Ideal::new(&r, basis.cached_basis().unwrap().to_vec()).unwrap();
        prop_assert!(regenerated.contains_ideal(&ideal).unwrap());
        prop_assert!(ideal.contains_ideal(&regenerated).unwrap());
    }

    #[test]
    fn colength_is_invariant_under_automorphisms(m in automorphism(2), gens in proptest::collection::vec(terms(2, 2, 3, 2), 1..=2)) {
        let r = ring(2);
        let gens: Vec<_> = gens.iter().map(|g| build(&r, g)).filter(|g| !g.is_zero()).collect();
        let ideal = Ideal::new(&r, gens).unwrap();
        let moved = ideal.map(&make_map(&r, &m)).unwrap();
        prop_assert_eq!(ideal.colength().unwrap(), moved.colength().unwrap());
    }

    #[test]
    fn intersection_lies_in_both(a in terms(2, 1, 2, 2), b in terms(2, 1, 2, 2)) {
        let r = ring(2);
        let (a, b) = (build(&r, &a), build(&r, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (ia, ib) = (Ideal::new(&r, vec![a.clone()]).unwrap(), Ideal::new(&r, vec![b.clone()]).unwrap());
        let meet = ia.intersection(&ib).unwrap();
        prop_assert!(ia.contains_ideal(&meet).unwrap() && ib.contains_ideal(&meet).unwrap());
        prop_assert!(meet.contains(&(&a * &b)).unwrap());
    }
}
