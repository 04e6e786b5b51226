use std::borrow::Cow;
use std::sync::Arc;

use super::standard_basis::{Engine, Poly};
use super::{monomials_up_to, Monomial, MonomialOrder, Series, SeriesRing, SubstitutionMap};
use crate::error::{Error, Result};
use crate::field::Field;

/// Default cap on the number of S-pairs one completion may process.
pub const DEFAULT_PAIR_BUDGET: usize = 100_000;

/// The pair budget: `QUATHOM_BUDGET` if set to a positive integer, else
/// [`DEFAULT_PAIR_BUDGET`].
pub fn pair_budget() -> usize {
    std::env::var("QUATHOM_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_PAIR_BUDGET)
}

/// An ideal of a truncated series ring, i.e. of `ℂ[[x]]/𝔪^{N+1}`.
///
/// Standard bases use [`MonomialOrder::LocalDegRevLex`]. A computed basis
/// is attached to a new value by [`Ideal::groebner`]; ideals are never
/// mutated.
#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    ring: SeriesRing,
    generators: Vec<Series<F>>,
    basis: Option<Arc<Vec<Series<F>>>>,
}

impl<F: Field> Ideal<F> {
    /// Zero generators are dropped; the rest must lie in the maximal ideal.
    pub fn new(ring: &SeriesRing, generators: Vec<Series<F>>) -> Result<Self> {
        for g in &generators {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if !g.constant_term().is_zero() {
                return Err(Error::PreconditionViolated(format!("generator `{g}` is a unit")));
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), generators, basis: None })
    }

    pub fn zero(ring: &SeriesRing) -> Self {
        Ideal { ring: ring.clone(), generators: Vec::new(), basis: Some(Arc::new(Vec::new())) }
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Series<F>] {
        &self.generators
    }

    pub fn cached_basis(&self) -> Option<&[Series<F>]> {
        self.basis.as_deref().map(Vec::as_slice)
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::LocalDegRevLex
    }

    fn require_exact(&self) -> Result<()> {
        if F::EXACT || self.generators.is_empty() {
            Ok(())
        } else {
            Err(Error::UnsupportedBackend(format!("standard bases need the exact backend, not {}", F::NAME)))
        }
    }

    fn engine(&self) -> Engine {
        Engine { order: self.order(), truncation: Some(self.ring.truncation()), budget: pair_budget() }
    }

    fn to_poly(&self, f: &Series<F>) -> Poly<F> {
        Poly::from_terms(self.order(), f.terms())
    }

    fn poly_to_series(&self, p: &Poly<F>) -> Series<F> {
        Series::from_terms(&self.ring, p.terms().map(|(m, c)| (m.clone(), c.clone())))
    }

    fn compute_basis(&self) -> Result<Vec<Series<F>>> {
        self.require_exact()?;
        let polys = self.generators.iter().map(|g| self.to_poly(g)).collect();
        let basis = self.engine().basis(polys)?;
        Ok(basis.iter().map(|p| self.poly_to_series(p)).collect())
    }

    /// The same ideal with its reduced standard basis attached.
    pub fn groebner(&self) -> Result<Self> {
        if self.basis.is_some() {
            return Ok(self.clone());
        }
        Ok(Ideal { basis: Some(Arc::new(self.compute_basis()?)), ..self.clone() })
    }

    /// The reduced standard basis, computed unless cached.
    pub fn standard_basis(&self) -> Result<Cow<'_, [Series<F>]>> {
        match &self.basis {
            Some(b) => Ok(Cow::Borrowed(b.as_slice())),
            None => Ok(Cow::Owned(self.compute_basis()?)),
        }
    }

    /// Leading monomials of the standard basis.
    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        let order = self.order();
        Ok(self
            .standard_basis()?
            .iter()
            .map(|g| g.terms().map(|(m, _)| m.clone()).max_by(|a, b| order.cmp(a, b)).expect("nonzero"))
            .collect())
    }

    /// Unique normal form modulo the ideal and degree `N + 1`.
    pub fn reduce(&self, f: &Series<F>) -> Result<Series<F>> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if self.generators.is_empty() {
            return Ok(f.clone());
        }
        self.require_exact()?;
        let basis = self.standard_basis()?;
        let polys: Vec<Poly<F>> = basis.iter().map(|g| self.to_poly(g)).collect();
        Ok(self.poly_to_series(&self.engine().normal_form(&self.to_poly(f), &polys)))
    }

    pub fn contains(&self, f: &Series<F>) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> Result<bool> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        let with_basis = self.groebner()?;
        for g in &other.generators {
            if !with_basis.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality modulo degree `N + 1`, by mutual containment.
    pub fn equals(&self, other: &Ideal<F>) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    /// `(I ∩ J)` of the ideals the generators span in the power series
    /// ring, reduced modulo degree `N + 1`.
    ///
    /// Computed by eliminating `t` from `t·I + (1 − t)·J` with an ordinary
    /// polynomial Gröbner basis. The generators are polynomials, so the
    /// polynomial intersection extends to the power series ring.
    pub fn intersection(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        if self.generators.is_empty() || other.generators.is_empty() {
            return Ok(Ideal::zero(&self.ring));
        }
        self.require_exact()?;
        other.require_exact()?;
        let order = MonomialOrder::Elimination { block: 1 };
        let lift = |g: &Series<F>, t_exp: u16, negate: bool| -> Vec<(Monomial, F)> {
            g.terms().map(|(m, c)| (m.prepend(t_exp), if negate { c.neg() } else { c.clone() })).collect()
        };
        let mut gens: Vec<Poly<F>> = Vec::new();
        for g in &self.generators {
            let terms = lift(g, 1, false);
            gens.push(Poly::from_terms(order, terms.iter().map(|(m, c)| (m, c))));
        }
        for h in &other.generators {
            let mut terms = lift(h, 0, false);
            terms.extend(lift(h, 1, true));
            gens.push(Poly::from_terms(order, terms.iter().map(|(m, c)| (m, c))));
        }
        let engine = Engine { order, truncation: None, budget: pair_budget() };
        let basis = engine.basis(gens)?;
        let generators: Vec<Series<F>> = basis
            .iter()
            .filter(|p| p.terms().all(|(m, _)| m.exponents()[0] == 0))
            .map(|p| Series::from_terms(&self.ring, p.terms().map(|(m, c)| (m.drop_first(), c.clone()))))
            .collect();
        Ideal::new(&self.ring, generators)
    }

    /// `dim ℂ[[x]]/(I + 𝔪^{N+1})`: the number of standard monomials.
    pub fn colength(&self) -> Result<usize> {
        let leads = self.leading_monomials()?;
        Ok(monomials_up_to(self.ring.nvars(), self.ring.truncation())
            .iter()
            .filter(|m| !leads.iter().any(|l| l.divides(m)))
            .count())
    }

    /// The ideal of lowest-degree forms (the tangent cone), generated by
    /// the initial forms of a standard basis.
    pub fn tangent_cone(&self) -> Result<Ideal<F>> {
        let forms = self.standard_basis()?.iter().map(Series::initial_form).collect();
        Ideal::new(&self.ring, forms)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(Series::is_homogeneous)
    }

    /// The ideal generated by the images of the generators.
    pub fn map(&self, m: &SubstitutionMap<F>) -> Result<Ideal<F>> {
        if m.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let mut sub = m.substituter();
        let images = self.generators.iter().map(|g| sub.apply(g)).collect();
        Ideal::new(&self.ring, images)
    }

    /// Whether `m` maps the ideal into itself.
    pub fn preserved_by(&self, m: &SubstitutionMap<F>) -> Result<bool> {
        self.contains_ideal(&self.map(m)?)
    }

    /// The same generators in a ring with the same number of variables.
    pub fn reinterpret(&self, ring: &SeriesRing) -> Result<Ideal<F>> {
        let gens = self.generators.iter().map(|g| g.reinterpret(ring)).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, gens)
    }

    pub fn render(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(Series::render).collect();
        format!("({})", gens.join(", "))
    }
}
