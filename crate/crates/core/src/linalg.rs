//! Small dense matrices over a [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::field::Field;

/// Entries below this modulus count as zero during float elimination.
pub const FLOAT_PIVOT_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].render()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { F::one() } else { F::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn from_columns(columns: &[Vec<F>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> Vec<F> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).fold(F::zero(), |acc, c| acc.add(&self[(r, c)].mul(&v[c]))))
            .collect()
    }

    pub fn add(&self, rhs: &Matrix<F>) -> Matrix<F> {
        self.zip(rhs, F::add)
    }

    pub fn sub(&self, rhs: &Matrix<F>) -> Matrix<F> {
        self.zip(rhs, F::sub)
    }

    fn zip(&self, rhs: &Matrix<F>, op: impl Fn(&F, &F) -> F) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| op(a, b)).collect() }
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        self.map(|x| x.mul(s))
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn conj(&self) -> Matrix<F> {
        self.map(F::conj)
    }

    pub fn transpose(&self) -> Matrix<F> {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn adjoint(&self) -> Matrix<F> {
        self.transpose().conj()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }

    /// Exact equality on the exact backend, Frobenius distance `<= tol` otherwise.
    pub fn approx_eq(&self, other: &Matrix<F>, tol: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        if F::EXACT {
            self == other
        } else {
            self.sub(other).frobenius_norm() <= tol
        }
    }

    fn negligible(x: &F) -> bool {
        if F::EXACT {
            x.is_zero()
        } else {
            x.to_c64().norm() <= FLOAT_PIVOT_TOL
        }
    }

    /// Reduced row echelon form and pivot columns. Exact elimination takes
    /// the first nonzero entry of each column; float elimination takes the
    /// largest modulus.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let candidate = if F::EXACT {
                (row..m.rows).find(|&r| !m[(r, col)].is_zero())
            } else {
                (row..m.rows)
                    .filter(|&r| !Self::negligible(&m[(r, col)]))
                    .max_by(|&a, &b| m[(a, col)].to_c64().norm().total_cmp(&m[(b, col)].to_c64().norm()))
            };
            let Some(p) = candidate else { continue };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in 0..m.cols {
                m[(row, c)] = m[(row, c)].mul(&inv);
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in 0..m.cols {
                    let v = m[(row, c)].mul(&factor);
                    m[(r, c)] = m[(r, c)].sub(&v);
                }
                if !F::EXACT {
                    m[(r, col)] = F::zero();
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self·v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r[(i, f)].neg();
                }
                v
            })
            .collect()
    }

    /// Solves `self·X = rhs`; `None` when inconsistent.
    pub fn solve(&self, rhs: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(self.rows, rhs.rows);
        let aug = Self::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                rhs[(r, c - self.cols)].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x[(p, c)] = red[(i, self.cols + c)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols || self.rank() != self.rows {
            return None;
        }
        self.solve(&Self::identity(self.rows))
    }

    pub fn is_scalar(&self, tol: f64) -> Option<F> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let lambda = self[(0, 0)].clone();
        self.approx_eq(&Self::identity(self.rows).scale(&lambda), tol).then_some(lambda)
    }

    pub fn commutator(&self, other: &Matrix<F>) -> Matrix<F> {
        self.mul(other).sub(&other.mul(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussRat;

    fn q(n: i64) -> GaussRat {
        GaussRat::int(n)
    }

    #[test]
    fn rref_kernel_and_inverse() {
        let m = Matrix::from_rows(&[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).iter().all(Field::is_zero));

        let a = Matrix::from_rows(&[vec![q(2), q(1)], vec![q(1), q(1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m.inverse().is_none());
    }

    #[test]
    fn inconsistent_system() {
        let a = Matrix::from_rows(&[vec![q(1), q(1)], vec![q(1), q(1)]]);
        let b = Matrix::from_rows(&[vec![q(1)], vec![q(2)]]);
        assert!(a.solve(&b).is_none());
    }
}
