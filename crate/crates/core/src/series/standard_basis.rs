//! Buchberger completion, used in two settings.
//!
//! * Truncated: the local degree order, all terms above degree `N`
//!   discarded. Leading terms are lowest-degree terms, so reduction only
//!   ever raises degree, and it terminates in the finite set of monomials
//!   of degree `<= N`. The result is a standard basis of `I + 𝔪^{N+1}`.
//! * Global: an ordinary polynomial Gröbner basis, used for elimination.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::Bound;

use super::{Monomial, MonomialOrder};
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Key {
    order: MonomialOrder,
    mono: Monomial,
}

impl Ord for Key {
    /// Leading monomials sort first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&other.mono, &self.mono)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Debug)]
pub(crate) struct Poly<F> {
    terms: BTreeMap<Key, F>,
}

impl<F: Field> Poly<F> {
    pub(crate) fn from_terms<'a>(order: MonomialOrder, terms: impl IntoIterator<Item = (&'a Monomial, &'a F)>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (Key { order, mono: m.clone() }, c.clone()))
            .collect();
        Poly { terms }
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter().map(|(k, c)| (&k.mono, c))
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next().map(|(k, c)| (&k.mono, c))
    }

    fn make_monic(&mut self) {
        if let Some(inv) = self.terms.values().next().and_then(F::inv) {
            for c in self.terms.values_mut() {
                *c = c.mul(&inv);
            }
        }
    }

    fn add_term(&mut self, key: Key, c: F) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

pub(crate) struct Engine {
    pub order: MonomialOrder,
    /// Maximal retained degree, or `None` for the global setting.
    pub truncation: Option<usize>,
    pub budget: usize,
}

impl Engine {
    fn keep(&self, m: &Monomial) -> bool {
        self.truncation.is_none_or(|n| m.degree() <= n)
    }

    /// `f − c·m·g`, discarding truncated terms.
    fn subtract_multiple<F: Field>(&self, f: &mut Poly<F>, c: &F, m: &Monomial, g: &Poly<F>) {
        for (k, gc) in &g.terms {
            let mono = k.mono.mul(m);
            if self.keep(&mono) {
                f.add_term(Key { order: self.order, mono }, gc.mul(c).neg());
            }
        }
    }

    fn truncated<F: Field>(&self, f: &Poly<F>) -> Poly<F> {
        Poly { terms: f.terms.iter().filter(|(k, _)| self.keep(&k.mono)).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    /// Full reduction by monic `basis` elements: no term of the result is
    /// divisible by a leading monomial of the basis.
    pub(crate) fn normal_form<F: Field>(&self, f: &Poly<F>, basis: &[Poly<F>]) -> Poly<F> {
        let leads: Vec<&Monomial> = basis.iter().map(|g| g.leading().expect("nonzero basis element").0).collect();
        let mut f = self.truncated(f);
        let mut cursor: Option<Key> = None;
        loop {
            let mut range = match &cursor {
                None => f.terms.range::<Key, _>(..),
                Some(k) => f.terms.range::<Key, _>((Bound::Excluded(k), Bound::Unbounded)),
            };
            let found = range.find_map(|(k, c)| {
                leads.iter().position(|l| l.divides(&k.mono)).map(|gi| (k.clone(), c.clone(), gi))
            });
            let Some((key, coeff, gi)) = found else { break };
            let quotient = leads[gi].quotient_of(&key.mono);
            self.subtract_multiple(&mut f, &coeff, &quotient, &basis[gi]);
            cursor = Some(key);
        }
        f
    }

    /// A reduced basis (monic, no lead divides another element's terms),
    /// sorted by leading monomial.
    pub(crate) fn basis<F: Field>(&self, generators: Vec<Poly<F>>) -> Result<Vec<Poly<F>>> {
        let mut basis: Vec<Poly<F>> = Vec::new();
        // (lcm degree, discovery index, i, j)
        let mut pairs: Vec<(usize, usize, usize, usize)> = Vec::new();
        let mut discovered = 0usize;
        let mut processed = 0usize;

        let mut queue: Vec<Poly<F>> = generators;
        queue.reverse();
        loop {
            while let Some(g) = queue.pop() {
                let mut h = self.normal_form(&g, &basis);
                if h.is_zero() {
                    continue;
                }
                h.make_monic();
                let new_lead = h.leading().unwrap().0.clone();
                let idx = basis.len();
                basis.push(h);
                for (i, other) in basis[..idx].iter().enumerate() {
                    let lead = other.leading().unwrap().0;
                    if lead.coprime(&new_lead) {
                        continue;
                    }
                    let lcm = lead.lcm(&new_lead);
                    if !self.keep(&lcm) {
                        continue;
                    }
                    pairs.push((lcm.degree(), discovered, i, idx));
                    discovered += 1;
                }
            }
            let Some(pos) = pairs.iter().enumerate().min_by_key(|(_, p)| (p.0, p.1)).map(|(pos, _)| pos) else {
                break;
            };
            let (_, _, i, j) = pairs.swap_remove(pos);
            processed += 1;
            if processed > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            queue.push(self.s_polynomial(&basis[i], &basis[j]));
        }
        Ok(self.reduce_basis(basis))
    }

    fn s_polynomial<F: Field>(&self, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        let lf = f.leading().unwrap().0;
        let lg = g.leading().unwrap().0;
        let lcm = lf.lcm(lg);
        let mut s = Poly { terms: BTreeMap::new() };
        self.subtract_multiple(&mut s, &F::one().neg(), &lf.quotient_of(&lcm), f);
        self.subtract_multiple(&mut s, &F::one(), &lg.quotient_of(&lcm), g);
        s
    }

    fn reduce_basis<F: Field>(&self, basis: Vec<Poly<F>>) -> Vec<Poly<F>> {
        let leads: Vec<Monomial> = basis.iter().map(|g| g.leading().unwrap().0.clone()).collect();
        let minimal: Vec<Poly<F>> = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                !leads.iter().enumerate().any(|(j, l)| j != *i && l.divides(&leads[*i]) && (l != &leads[*i] || j < *i))
            })
            .map(|(_, g)| g.clone())
            .collect();
        let mut reduced: Vec<Poly<F>> = Vec::with_capacity(minimal.len());
        for (i, g) in minimal.iter().enumerate() {
            let others: Vec<Poly<F>> =
                minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, o)| o.clone()).collect();
            let (lead_key, lead_coeff) = g.terms.iter().next().map(|(k, c)| (k.clone(), c.clone())).unwrap();
            let mut tail = g.clone();
            tail.terms.remove(&lead_key);
            let mut r = self.normal_form(&tail, &others);
            r.terms.insert(lead_key, lead_coeff);
            reduced.push(r);
        }
        reduced.sort_by(|a, b| {
            let ka = a.terms.keys().next().unwrap();
            let kb = b.terms.keys().next().unwrap();
            ka.cmp(kb)
        });
        reduced
    }
}
