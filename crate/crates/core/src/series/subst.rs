use std::collections::HashMap;

use super::{Monomial, Series, SeriesRing};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// An endomorphism of a [`SeriesRing`] fixing the maximal ideal, given by
/// the images of the variables.
#[derive(Clone, PartialEq, Debug)]
pub struct SubstitutionMap<F: Field> {
    ring: SeriesRing,
    images: Vec<Series<F>>,
}

impl<F: Field> SubstitutionMap<F> {
    /// Every image must lie in the ring and have zero constant term.
    pub fn new(ring: &SeriesRing, images: Vec<Series<F>>) -> Result<Self> {
        if images.len() != ring.nvars() {
            return Err(Error::PreconditionViolated(format!(
                "substitution map needs {} images, got {}",
                ring.nvars(),
                images.len()
            )));
        }
        for (idx, img) in images.iter().enumerate() {
            if img.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if !img.constant_term().is_zero() {
                return Err(Error::PreconditionViolated(format!(
                    "image of `{}` has a nonzero constant term",
                    ring.vars()[idx]
                )));
            }
        }
        Ok(SubstitutionMap { ring: ring.clone(), images })
    }

    pub fn identity(ring: &SeriesRing) -> Self {
        SubstitutionMap { ring: ring.clone(), images: ring.vars_series() }
    }

    /// `x_i ↦ λ·x_i`.
    pub fn diagonal(ring: &SeriesRing, lambda: &F) -> Self {
        SubstitutionMap { ring: ring.clone(), images: ring.vars_series().iter().map(|x| x.scale(lambda)).collect() }
    }

    /// `x_i ↦ Σ_j m[(i, j)]·x_j`.
    pub fn linear(ring: &SeriesRing, m: &Matrix<F>) -> Result<Self> {
        let n = ring.nvars();
        if (m.rows(), m.cols()) != (n, n) {
            return Err(Error::PreconditionViolated(format!("linear map must be {n}x{n}")));
        }
        let images = (0..n)
            .map(|i| Series::from_terms(ring, (0..n).map(|j| (Monomial::var(n, j), m[(i, j)].clone()))))
            .collect();
        Ok(SubstitutionMap { ring: ring.clone(), images })
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn images(&self) -> &[Series<F>] {
        &self.images
    }

    pub fn image(&self, idx: usize) -> &Series<F> {
        &self.images[idx]
    }

    /// Jacobian at the origin: row `i` holds the linear coefficients of the
    /// image of `x_i`.
    pub fn linear_part(&self) -> Matrix<F> {
        Matrix::from_rows(&self.images.iter().map(Series::linear_coefficients).collect::<Vec<_>>())
    }

    pub fn is_linear(&self) -> bool {
        self.images.iter().all(|s| s.terms().all(|(m, _)| m.degree() == 1))
    }

    pub fn substituter(&self) -> Substituter<'_, F> {
        Substituter::new(&self.ring, &self.images)
    }

    /// `f(images)` modulo degree `N + 1`.
    pub fn substitute(&self, f: &Series<F>) -> Result<Series<F>> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(self.substituter().apply(f))
    }

    /// `(self ∘ inner)(x_i) = self.substitute(inner(x_i))`.
    pub fn compose(&self, inner: &SubstitutionMap<F>) -> Result<Self> {
        if inner.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        let mut sub = self.substituter();
        let images = inner.images.iter().map(|img| sub.apply(img)).collect();
        Ok(SubstitutionMap { ring: self.ring.clone(), images })
    }

    /// Two-sided inverse modulo degree `N + 1`. Each pass of
    /// `g ← L⁻¹(x − H(g))`, where `L` and `H` are the linear and nonlinear
    /// parts, fixes one more degree.
    pub fn invert(&self) -> Result<Self> {
        let linear = self.linear_part();
        let linv = linear.inverse().ok_or(Error::SingularLinearPart)?;
        let higher: Vec<Series<F>> = self.images.iter().map(|s| s - &s.graded_component(1)).collect();
        let inverse_linear = SubstitutionMap::linear(&self.ring, &linv)?;
        let mut g = inverse_linear.clone();
        for _ in 1..self.ring.truncation() {
            let mut sub = g.substituter();
            let rhs: Vec<Series<F>> =
                self.ring.vars_series().iter().zip(&higher).map(|(x, h)| x - &sub.apply(h)).collect();
            let rhs_map = SubstitutionMap { ring: self.ring.clone(), images: rhs };
            g = rhs_map.compose(&inverse_linear)?;
        }
        Ok(g)
    }

    /// The same images in a ring with the same variables at another
    /// truncation order.
    pub fn reinterpret(&self, ring: &SeriesRing) -> Result<Self> {
        let images = self.images.iter().map(|s| s.reinterpret(ring)).collect::<Result<Vec<_>>>()?;
        SubstitutionMap::new(ring, images)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.ring == other.ring && self.images.iter().zip(&other.images).all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Evaluates series at fixed images lying in a `target` ring, memoizing
/// the image of every monomial met so far. The source ring may differ from
/// the target; variable `k` of the source is sent to `images[k]`. Reuse one
/// instance for many substitutions into the same map.
pub struct Substituter<'a, F: Field> {
    target: SeriesRing,
    images: &'a [Series<F>],
    cache: HashMap<Monomial, Series<F>>,
}

impl<'a, F: Field> Substituter<'a, F> {
    pub fn new(target: &SeriesRing, images: &'a [Series<F>]) -> Self {
        debug_assert!(images.iter().all(|s| s.ring() == target));
        Substituter { target: target.clone(), images, cache: HashMap::new() }
    }

    pub fn monomial_image(&mut self, m: &Monomial) -> Series<F> {
        if let Some(s) = self.cache.get(m) {
            return s.clone();
        }
        let out = match m.last_var() {
            None => Series::one(&self.target),
            Some(v) => {
                let prev = m.with_exponent(v, m.exponents()[v] - 1);
                let base = self.monomial_image(&prev);
                &base * &self.images[v]
            }
        };
        self.cache.insert(m.clone(), out.clone());
        out
    }

    pub fn apply(&mut self, f: &Series<F>) -> Series<F> {
        assert_eq!(f.ring().nvars(), self.images.len(), "one image per source variable");
        let mut acc = Series::zero(&self.target);
        for (m, c) in f.terms() {
            if m.is_one() {
                acc.add_term(Monomial::one(self.target.nvars()), c.clone());
                continue;
            }
            let img = self.monomial_image(m);
            for (mm, cc) in img.terms() {
                acc.add_term(mm.clone(), cc.mul(c));
            }
        }
        acc
    }
}
