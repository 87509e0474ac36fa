//! Exact dense linear algebra over the Gaussian rationals.

use num_traits::{One, Zero};

use crate::error::{OpaError, Result};
use crate::gaussian::GaussianRational;

/// Row-major square or rectangular matrix of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Copy with column `j` replaced.
    pub fn with_column(&self, j: usize, col: &[GaussianRational]) -> Self {
        assert_eq!(col.len(), self.rows);
        let mut out = self.clone();
        for (i, c) in col.iter().enumerate() {
            out[(i, j)] = c.clone();
        }
        out
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(i * self.cols + j, k * self.cols + j);
        }
    }

    /// Determinant by elimination with first-nonzero pivoting.
    pub fn determinant(&self) -> GaussianRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = GaussianRational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return GaussianRational::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for c in col..n {
                    let t = &factor * &m[(col, c)];
                    m[(r, c)] -= &t;
                }
            }
        }
        det
    }

    /// Solves `A x = b` exactly; `Singular` if `A` is not invertible.
    pub fn solve(&self, b: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let p = (col..n).find(|&r| !m[(r, col)].is_zero()).ok_or(OpaError::Singular)?;
            m.swap_rows(p, col);
            rhs.swap(p, col);
            let inv = m[(col, col)].inv().expect("nonzero pivot");
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for c in col..n {
                    let t = &factor * &m[(col, c)];
                    m[(r, c)] -= &t;
                }
                let t = &factor * &rhs[col];
                rhs[r] -= &t;
            }
        }
        let mut x = vec![GaussianRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i].clone();
            for j in i + 1..n {
                acc -= &(&m[(i, j)] * &x[j]);
            }
            x[i] = &acc / &m[(i, i)];
        }
        Ok(x)
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn determinant_small() {
        let m = ExactMatrix::from_rows(vec![vec![g(3), g(-1)], vec![g(-1), g(3)]]);
        assert_eq!(m.determinant(), g(8));
        let m3 = ExactMatrix::from_rows(vec![
            vec![g(3), g(-1), g(-1)],
            vec![g(-1), g(3), g(1)],
            vec![g(-1), g(1), g(3)],
        ]);
        assert_eq!(m3.determinant(), g(20));
    }

    #[test]
    fn determinant_needs_row_swap() {
        let m = ExactMatrix::from_rows(vec![vec![g(0), g(1)], vec![g(1), g(0)]]);
        assert_eq!(m.determinant(), g(-1));
        let s = ExactMatrix::from_rows(vec![vec![g(1), g(2)], vec![g(2), g(4)]]);
        assert!(s.determinant().is_zero());
    }

    #[test]
    fn solve_round_trip() {
        let i = GaussianRational::i();
        let m = ExactMatrix::from_rows(vec![
            vec![g(0), g(2), &i * &g(3)],
            vec![g(1), g(-1), g(0)],
            vec![i.clone(), g(5), g(1)],
        ]);
        let x = vec![GaussianRational::ratio(1, 3), i.clone(), g(-2)];
        let b = m.mul_vec(&x);
        assert_eq!(m.solve(&b).unwrap(), x);
    }

    #[test]
    fn singular_solve_errors() {
        let s = ExactMatrix::from_rows(vec![vec![g(1), g(2)], vec![g(2), g(4)]]);
        assert!(matches!(s.solve(&[g(1), g(0)]), Err(OpaError::Singular)));
    }
}
