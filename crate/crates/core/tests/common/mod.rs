#![allow(dead_code)]

use proptest::prelude::*;
use quathom::field::{Field, GaussRat};
use quathom::series::{Monomial, Series, SeriesRing, SubstitutionMap};

pub fn gauss() -> impl Strategy<Value = GaussRat> {
    (-4i64..=4, 1i64..=3, -2i64..=2, 1i64..=2)
        .prop_map(|(a, b, c, d)| GaussRat::ratio(a, b).add(&GaussRat::ratio(c, d).mul(&GaussRat::i())))
}

pub fn nonzero_gauss() -> impl Strategy<Value = GaussRat> {
    gauss().prop_filter("nonzero", |c| !c.is_zero())
}

/// Up to `terms` terms of degree in `min..=max` over `nvars` variables.
pub fn terms(nvars: usize, min: usize, max: usize, terms: usize) -> impl Strategy<Value = Vec<(Vec<u16>, GaussRat)>> {
    let term = (proptest::collection::vec(0usize..nvars, min..=max), gauss()).prop_map(move |(picks, c)| {
        let mut exps = vec![0u16; nvars];
        for v in picks {
            exps[v] += 1;
        }
        (exps, c)
    });
    proptest::collection::vec(term, 0..=terms)
}

pub fn build(ring: &SeriesRing, terms: &[(Vec<u16>, GaussRat)]) -> Series<GaussRat> {
    Series::from_terms(ring, terms.iter().map(|(e, c)| (Monomial::from_exponents(e), c.clone())))
}

/// `x_i ↦ λ·x_i + h_i` with `h_i ∈ 𝔪²`.
pub fn with_linear_part(ring: &SeriesRing, lambda: &GaussRat, higher: &[Vec<(Vec<u16>, GaussRat)>]) -> SubstitutionMap<GaussRat> {
    let images = ring.vars_series::<GaussRat>().iter().zip(higher).map(|(x, h)| &x.scale(lambda) + &build(ring, h)).collect();
    SubstitutionMap::new(ring, images).unwrap()
}
