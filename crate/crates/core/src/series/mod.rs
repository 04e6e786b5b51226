//! Truncated multivariate power series.
//!
//! A [`SeriesRing`] with truncation order `N` models `ℂ[[x₁..xₙ]]/𝔪^{N+1}`:
//! every computation is exact modulo terms of total degree `N + 1` and above.
//! Coefficient maps are ordered by exponent vector, so iteration (and hence
//! every rendered result) is deterministic.

mod ideal;
mod monomial;
mod standard_basis;
mod subst;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;

pub use ideal::{pair_budget, Ideal, DEFAULT_PAIR_BUDGET};
pub use monomial::{Monomial, MonomialOrder};
pub use subst::{SubstitutionMap, Substituter};

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    vars: Vec<String>,
    truncation: usize,
}

/// Variables and truncation order. Cloning is cheap.
#[derive(Clone, Debug, Eq)]
pub struct SeriesRing(Arc<RingData>);

impl PartialEq for SeriesRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SeriesRing {
    /// Requires `truncation >= 2`, distinct identifier names, and no
    /// variable called `i` (reserved for the imaginary unit).
    pub fn new<S: AsRef<str>>(vars: &[S], truncation: usize) -> Result<Self> {
        if truncation < 2 {
            return Err(Error::PreconditionViolated(format!("truncation order {truncation} < 2")));
        }
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (idx, v) in vars.iter().enumerate() {
            if !is_identifier(v) || v == "i" {
                return Err(Error::PreconditionViolated(format!("invalid variable name `{v}`")));
            }
            if vars[..idx].contains(v) {
                return Err(Error::PreconditionViolated(format!("duplicate variable `{v}`")));
            }
        }
        Ok(SeriesRing(Arc::new(RingData { vars, truncation })))
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn truncation(&self) -> usize {
        self.0.truncation
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        Self::new(&self.0.vars, truncation)
    }

    pub fn var<F: Field>(&self, idx: usize) -> Series<F> {
        Series::monomial(self, Monomial::var(self.nvars(), idx), F::one())
    }

    pub fn vars_series<F: Field>(&self) -> Vec<Series<F>> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    /// Number of monomials of degree `<= N`.
    pub fn dimension(&self) -> usize {
        (0..=self.truncation()).map(|d| binomial(d + self.nvars() - 1, d)).sum()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// An element of a [`SeriesRing`]. No zero coefficient and no term above
/// the truncation order is ever stored.
#[derive(Clone, PartialEq)]
pub struct Series<F> {
    ring: SeriesRing,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> fmt::Debug for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({})", self.render())
    }
}

impl<F: Field> fmt::Display for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<F: Field> Series<F> {
    pub fn zero(ring: &SeriesRing) -> Self {
        Series { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &SeriesRing, c: F) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &SeriesRing) -> Self {
        Self::constant(ring, F::one())
    }

    pub fn monomial(ring: &SeriesRing, m: Monomial, c: F) -> Self {
        let mut s = Self::zero(ring);
        s.add_term(m, c);
        s
    }

    /// Builds a series from terms, summing repeats and dropping zeros and
    /// terms above the truncation order.
    pub fn from_terms(ring: &SeriesRing, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut s = Self::zero(ring);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: F) {
        assert_eq!(m.nvars(), self.ring.nvars(), "monomial arity");
        if m.degree() > self.ring.truncation() || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    /// Coefficients of `x₁..xₙ`.
    pub fn linear_coefficients(&self) -> Vec<F> {
        (0..self.ring.nvars()).map(|i| self.coefficient(&Monomial::var(self.ring.nvars(), i))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest degree of a stored term.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.order() == self.max_degree()
    }

    /// Whether every term has degree at least `d`, i.e. membership in `𝔪^d`.
    pub fn in_power_of_maximal(&self, d: usize) -> bool {
        self.order().is_none_or(|o| o >= d)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let n = self.ring.truncation();
        let mut rhs: Vec<(usize, &Monomial, &F)> = other.terms.iter().map(|(m, c)| (m.degree(), m, c)).collect();
        rhs.sort_by_key(|t| t.0);
        let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for &(db, mb, cb) in rhs.iter().take_while(|t| da + t.0 <= n) {
                let _ = db;
                let prod = ca.mul(cb);
                acc.entry(ma.mul(mb)).and_modify(|c| *c = c.add(&prod)).or_insert(prod);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Series { ring: self.ring.clone(), terms: acc })
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).filter(|(_, c)| !c.is_zero()).collect();
        Series { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.ring), |acc, _| &acc * self)
    }

    /// Drops every term of degree above `d`.
    pub fn truncate(&self, d: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() <= d).map(|(m, c)| (m.clone(), c.clone())).collect();
        Series { ring: self.ring.clone(), terms }
    }

    /// The homogeneous part of degree `d`.
    pub fn graded_component(&self, d: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        Series { ring: self.ring.clone(), terms }
    }

    /// Nonzero homogeneous components with their degrees, by increasing degree.
    pub fn homogeneous_components(&self) -> Vec<(usize, Self)> {
        let mut by_degree: BTreeMap<usize, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_degree.entry(m.degree()).or_insert_with(|| Self::zero(&self.ring)).terms.insert(m.clone(), c.clone());
        }
        by_degree.into_iter().collect()
    }

    /// Lowest-degree form.
    pub fn initial_form(&self) -> Self {
        match self.order() {
            Some(d) => self.graded_component(d),
            None => self.clone(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&F) -> F) -> Self {
        Series::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// The series over another field, via `f` on each coefficient, in `ring`
    /// (same number of variables).
    pub fn convert<G: Field>(&self, ring: &SeriesRing, f: impl Fn(&F) -> G) -> Result<Series<G>> {
        if ring.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch);
        }
        Ok(Series::from_terms(ring, self.terms.iter().map(|(m, c)| (m.clone(), f(c)))))
    }

    /// The same coefficients in another ring with the same number of
    /// variables (renaming, or changing the truncation order).
    pub fn reinterpret(&self, ring: &SeriesRing) -> Result<Self> {
        if ring.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch);
        }
        Ok(Series::from_terms(ring, self.terms.iter().map(|(m, c)| (m.clone(), c.clone()))))
    }

    /// Largest coefficient modulus; 0 for the zero series.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if F::EXACT {
            self == other
        } else {
            self.checked_sub(other).map(|d| d.max_abs() <= tol).unwrap_or(false)
        }
    }

    /// Terms by increasing degree; within a degree, lexicographically
    /// descending exponents (`x^2`, `x*y`, `y^2`).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &F)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0.cmp(a.0)));
        v
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let vars = self.ring.vars();
        let mut out = String::new();
        for (idx, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let text = c.render();
            let (negative, body) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            let term = if m.is_one() {
                body
            } else if body == "1" {
                m.render(vars)
            } else {
                format!("{body}*{}", m.render(vars))
            };
            match (idx, negative) {
                (0, false) => out.push_str(&term),
                (0, true) => {
                    out.push('-');
                    out.push_str(&term);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&term);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&term);
                }
            }
        }
        out
    }
}

/// Arithmetic operators panic on mismatched rings; use the `checked_*`
/// methods where that can happen.
impl<F: Field> Add for &Series<F> {
    type Output = Series<F>;
    fn add(self, rhs: &Series<F>) -> Series<F> {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Sub for &Series<F> {
    type Output = Series<F>;
    fn sub(self, rhs: &Series<F>) -> Series<F> {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Mul for &Series<F> {
    type Output = Series<F>;
    fn mul(self, rhs: &Series<F>) -> Series<F> {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Neg for &Series<F> {
    type Output = Series<F>;
    fn neg(self) -> Series<F> {
        self.scale(&F::one().neg())
    }
}

/// Series operations
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub enum Operand<'a, F> {
    Series(&'a Series<F>),
    Scalar(&'a F),
}

/// Checked binary arithmetic on series; a scalar operand is promoted to a
/// constant series.
pub fn series_arith<F: Field>(op: ArithOp, lhs: &Series<F>, rhs: Operand<'_, F>) -> Result<Series<F>> {
    let promoted;
    let rhs = match rhs {
        Operand::Series(s) => s,
        Operand::Scalar(c) => {
            promoted = Series::constant(lhs.ring(), c.clone());
            &promoted
        }
    };
    match op {
        ArithOp::Add => lhs.checked_add(rhs),
        ArithOp::Sub => lhs.checked_sub(rhs),
        ArithOp::Mul => lhs.checked_mul(rhs),
    }
}

/// Every monomial of degree `<= d`, ordered by degree.
pub fn monomials_up_to(nvars: usize, d: usize) -> Vec<Monomial> {
    (0..=d).flat_map(|k| Monomial::all_of_degree(nvars, k)).collect()
}
