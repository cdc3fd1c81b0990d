//! Dense matrices over an exact coefficient ring: fraction-free determinants,
//! rank and reduced row echelon over the field, and the data-parallel minor
//! sweep used by the last-column resultant expansion.

use crate::dpoly::Coeff;
use crate::field::FieldElem;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Coeff> Matrix<R> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| R::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[R] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Copy with row `skip` (0-based) removed.
    pub fn without_row(&self, skip: usize) -> Matrix<R> {
        debug_assert!(skip < self.rows);
        let mut data = Vec::with_capacity((self.rows - 1) * self.cols);
        for r in 0..self.rows {
            if r != skip {
                data.extend_from_slice(self.row(r));
            }
        }
        Matrix { rows: self.rows - 1, cols: self.cols, data }
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Exact determinant by fraction-free Bareiss elimination with
    /// first-nonzero pivoting. Divisions are exact in the coefficient ring.
    pub fn det(&self) -> R {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return R::one();
        }
        let mut m = self.clone();
        let mut sign_flip = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.at(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign_flip = !sign_flip;
                    }
                    None => return R::zero(),
                }
            }
            let pivot = m.at(k, k).clone();
            for i in k + 1..n {
                let lead = m.at(i, k).clone();
                for j in k + 1..n {
                    let v = pivot
                        .mul(m.at(i, j))
                        .sub(&lead.mul(m.at(k, j)))
                        .exact_div(&prev);
                    m.set(i, j, v);
                }
                m.set(i, k, R::zero());
            }
            prev = pivot;
        }
        let d = m.at(n - 1, n - 1).clone();
        if sign_flip {
            d.neg()
        } else {
            d
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl Matrix<FieldElem> {
    /// Exact rank by Gaussian elimination with first-nonzero pivoting.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot_row = match (rank..m.rows).find(|&r| !m.at(r, col).is_zero()) {
                Some(r) => r,
                None => continue,
            };
            m.swap_rows(rank, pivot_row);
            let pivot = m.at(rank, col).clone();
            for r in rank + 1..m.rows {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).div(&pivot).expect("nonzero pivot");
                for c in col..m.cols {
                    let v = m.at(r, c).sub(&factor.mul(m.at(rank, c)));
                    m.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form; returns the reduced matrix and the pivot
    /// column of each nonzero row.
    pub fn rref(&self) -> (Matrix<FieldElem>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot_row = match (rank..m.rows).find(|&r| !m.at(r, col).is_zero()) {
                Some(r) => r,
                None => continue,
            };
            m.swap_rows(rank, pivot_row);
            let inv = m.at(rank, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.at(rank, c).mul(&inv);
                m.set(rank, c, v);
            }
            for r in 0..m.rows {
                if r == rank || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in col..m.cols {
                    let v = m.at(r, c).sub(&factor.mul(m.at(rank, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        (m, pivots)
    }
}

/// Determinants of the square minors obtained by deleting each row in turn
/// from an `(L) x (L-1)` block. The minors are independent, so with the
/// `parallel` feature they are evaluated on the rayon pool; the sequential
/// fallback computes them in row order. Both produce identical results.
pub fn minor_determinants<R: Coeff>(block: &Matrix<R>) -> Vec<R> {
    assert_eq!(block.rows(), block.cols() + 1, "expected an (L) x (L-1) block");
    #[cfg(feature = "parallel")]
    {
        minor_determinants_par(block)
    }
    #[cfg(not(feature = "parallel"))]
    {
        minor_determinants_seq(block)
    }
}

/// Sequential minor sweep; always available, used as the benchmark baseline.
pub fn minor_determinants_seq<R: Coeff>(block: &Matrix<R>) -> Vec<R> {
    (0..block.rows()).map(|r| block.without_row(r).det()).collect()
}

/// Parallel minor sweep on the rayon pool; deterministic combination because
/// results are collected by index.
#[cfg(feature = "parallel")]
pub fn minor_determinants_par<R: Coeff>(block: &Matrix<R>) -> Vec<R> {
    (0..block.rows())
        .into_par_iter()
        .map(|r| block.without_row(r).det())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn fe_mat(rows: usize, cols: usize, vals: &[i64]) -> Matrix<FieldElem> {
        Matrix::from_fn(rows, cols, |r, c| FieldElem::from_rat(rat(vals[r * cols + c])))
    }

    #[test]
    fn det_identity() {
        let m = fe_mat(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(m.det(), FieldElem::one());
    }

    #[test]
    fn det_two_by_two() {
        let m = fe_mat(2, 2, &[3, 7, 2, 5]);
        assert_eq!(m.det(), FieldElem::from_int(1));
        let m = fe_mat(2, 2, &[1, 2, 3, 4]);
        assert_eq!(m.det(), FieldElem::from_int(-2));
    }

    #[test]
    fn det_with_zero_pivot_needs_swap() {
        let m = fe_mat(3, 3, &[0, 1, 2, 1, 0, 3, 4, 5, 0]);
        // expansion: 0*(0-15) - 1*(0-12) + 2*(5-0) = 22
        assert_eq!(m.det(), FieldElem::from_int(22));
    }

    #[test]
    fn det_singular() {
        let m = fe_mat(3, 3, &[1, 2, 3, 2, 4, 6, 1, 1, 1]);
        assert!(m.det().is_zero());
    }

    #[test]
    fn rank_cases() {
        assert_eq!(fe_mat(3, 2, &[0, 0, 0, 0, 0, 0]).rank(), 0);
        assert_eq!(fe_mat(3, 2, &[-3, 1, -1, 0, 1, 1]).rank(), 2);
        assert_eq!(fe_mat(2, 3, &[1, 2, 3, 2, 4, 6]).rank(), 1);
    }

    #[test]
    fn rref_reduces_fully() {
        let m = fe_mat(2, 3, &[2, 4, 2, 1, 3, 3]);
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r, fe_mat(2, 3, &[1, 0, -3, 0, 1, 2]));
    }

    #[test]
    fn minor_sweeps_agree() {
        let block = fe_mat(4, 3, &[1, 2, 3, 0, 1, 4, 5, 6, 0, 2, 1, 1]);
        let seq = minor_determinants_seq(&block);
        let all = minor_determinants(&block);
        assert_eq!(seq, all);
        assert_eq!(seq.len(), 4);
    }
}
