//! Seeded random inputs for property checks.

use num_complex::Complex64;
use rand::Rng;

use crate::field::{Field, GaussRat};
use crate::quatlin::InducedComplexStructure;
use crate::series::{Monomial, Series, SeriesRing, SubstitutionMap};

/// A uniformly distributed unit imaginary quaternion.
pub fn random_structure<R: Rng>(rng: &mut R) -> InducedComplexStructure<Complex64> {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (0.1..=1.0).contains(&norm) {
            let [a, b, c] = v.map(|x| Complex64::new(x / norm, 0.0));
            return InducedComplexStructure::new(a, b, c).expect("normalized");
        }
    }
}

/// Angle between the coefficient vectors of two structures.
pub fn angle(i: &InducedComplexStructure<Complex64>, j: &InducedComplexStructure<Complex64>) -> f64 {
    i.dot(j).re.clamp(-1.0, 1.0).acos()
}

/// A pair with angular separation inside `(min, π − min)`.
pub fn random_separated_pair<R: Rng>(
    rng: &mut R,
    min: f64,
) -> (InducedComplexStructure<Complex64>, InducedComplexStructure<Complex64>) {
    loop {
        let (i, j) = (random_structure(rng), random_structure(rng));
        let a = angle(&i, &j);
        if a > min && a < std::f64::consts::PI - min {
            return (i, j);
        }
    }
}

/// A small Gaussian rational `p/q + (p'/q')·i`, real with probability 1/2.
pub fn random_gauss<R: Rng>(rng: &mut R) -> GaussRat {
    let re = GaussRat::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    if rng.gen_bool(0.5) {
        re
    } else {
        re.add(&GaussRat::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2)).mul(&GaussRat::i()))
    }
}

/// A random series with `terms` terms of degree in `min..=max` (capped at `N`).
pub fn random_series<R: Rng>(rng: &mut R, ring: &SeriesRing, min: usize, max: usize, terms: usize) -> Series<GaussRat> {
    let max = max.min(ring.truncation());
    let n = ring.nvars();
    let picks = (0..terms).map(|_| {
        let d = rng.gen_range(min..=max);
        let mut exps = vec![0u16; n];
        for _ in 0..d {
            exps[rng.gen_range(0..n)] += 1;
        }
        (Monomial::from_exponents(&exps), random_gauss(rng))
    });
    picks.fold(Series::zero(ring), |acc, (m, c)| &acc + &Series::monomial(ring, m, c))
}

/// `x_i ↦ λ·x_i + (random terms of degree 2..=4)`.
pub fn random_homogenizing_map<R: Rng>(rng: &mut R, ring: &SeriesRing, lambda: &GaussRat) -> SubstitutionMap<GaussRat> {
    let images = ring
        .vars_series::<GaussRat>()
        .iter()
        .map(|x| &x.scale(lambda) + &random_series(rng, ring, 2, 4, 3))
        .collect();
    SubstitutionMap::new(ring, images).expect("images vanish at the origin")
}

/// A map with random invertible linear part and random higher terms.
pub fn random_automorphism<R: Rng>(rng: &mut R, ring: &SeriesRing) -> SubstitutionMap<GaussRat> {
    loop {
        let images: Vec<Series<GaussRat>> =
            (0..ring.nvars()).map(|_| &random_series(rng, ring, 1, 1, 2) + &random_series(rng, ring, 2, 3, 2)).collect();
        if let Ok(map) = SubstitutionMap::new(ring, images) {
            if map.linear_part().inverse().is_some() {
                return map;
            }
        }
    }
}
