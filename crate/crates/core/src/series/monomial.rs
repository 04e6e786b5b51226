use std::cmp::Ordering;

use smallvec::SmallVec;

/// A dense exponent vector. The derived ordering is lexicographic on the
/// exponents and only serves as a deterministic storage order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[idx] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the last variable with a positive exponent.
    pub fn last_var(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }

    pub(crate) fn with_exponent(&self, idx: usize, e: u16) -> Monomial {
        let mut m = self.clone();
        m.0[idx] = e;
        m
    }

    pub(crate) fn prepend(&self, e: u16) -> Monomial {
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.push(e);
        v.extend_from_slice(&self.0);
        Monomial(v)
    }

    pub(crate) fn drop_first(&self) -> Monomial {
        Monomial(SmallVec::from_slice(&self.0[1..]))
    }

    pub fn render(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// All monomials in `nvars` variables of total degree exactly `d`, in
    /// descending lexicographic order.
    pub fn all_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
        fn rec(nvars: usize, idx: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if idx + 1 == nvars {
                cur.push(left as u16);
                out.push(Monomial::from_exponents(cur));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e as u16);
                rec(nvars, idx + 1, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(nvars, 0, d, &mut Vec::with_capacity(nvars), &mut out);
        out
    }
}

/// Graded reverse lexicographic comparison of two monomials of equal degree.
fn revlex_tiebreak(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        if x != y {
            // smaller exponent in the last differing variable is larger
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn degrevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: usize = a.iter().map(|&e| e as usize).sum();
    let db: usize = b.iter().map(|&e| e as usize).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Monomial orders. `Greater` means "leads".
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic order.
    DegRevLex,
    /// Lower total degree leads; ties broken by graded reverse lex. The
    /// leading term of a series is then a term of its lowest-degree form.
    LocalDegRevLex,
    /// The first `block` variables dominate (graded revlex on each block).
    Elimination { block: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => degrevlex(&a.0, &b.0),
            MonomialOrder::LocalDegRevLex => b.degree().cmp(&a.degree()).then_with(|| revlex_tiebreak(a, b)),
            MonomialOrder::Elimination { block } => {
                degrevlex(&a.0[..block], &b.0[..block]).then_with(|| degrevlex(&a.0[block..], &b.0[block..]))
            }
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(self, MonomialOrder::LocalDegRevLex)
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::DegRevLex => "degrevlex".into(),
            MonomialOrder::LocalDegRevLex => "local-degrevlex".into(),
            MonomialOrder::Elimination { block } => format!("elimination({block})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_examples() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 > xz > yz > z^2
        let seq = [m(&[2, 0, 0]), m(&[1, 1, 0]), m(&[0, 2, 0]), m(&[1, 0, 1]), m(&[0, 1, 1]), m(&[0, 0, 2])];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater, "{:?} vs {:?}", w[0], w[1]);
        }
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[2, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn local_order_prefers_low_degree() {
        let o = MonomialOrder::LocalDegRevLex;
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[2, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0]), &m(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::Elimination { block: 1 };
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn enumerate_degree() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(4, 7).len(), 120);
        assert_eq!(Monomial::all_of_degree(1, 3), vec![m(&[3])]);
    }
}
