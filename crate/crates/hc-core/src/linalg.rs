//! Exact Gaussian elimination over the rationals.

use num::{One, Zero};

use crate::combinatorics::Q;

/// Dense row-major matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Q>>,
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Q>),
    /// Consistent with free variables; carries the solution with free variables set to zero.
    Underdetermined {
        particular: Vec<Q>,
        nullity: usize,
    },
    Inconsistent,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn from_rows(data: Vec<Vec<Q>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols, data }
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = Q::one() / &self.data[r][c];
            for v in self.data[r].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let factor = self.data[i][c].clone();
                    for (v, p) in self.data[i].iter_mut().zip(&pivot_row) {
                        if !p.is_zero() {
                            *v -= &factor * p;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Solves `self * x = rhs` exactly.
    pub fn solve(&self, rhs: &[Q]) -> Solution {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Matrix::from_rows(
            self.data
                .iter()
                .zip(rhs)
                .map(|(row, b)| {
                    let mut r = row.clone();
                    r.push(b.clone());
                    r
                })
                .collect(),
        );
        if self.rows == 0 {
            return Solution::Unique(vec![Q::zero(); self.cols]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Solution::Inconsistent;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.data[r][self.cols].clone();
        }
        if pivots.len() == self.cols {
            Solution::Unique(x)
        } else {
            Solution::Underdetermined {
                particular: x,
                nullity: self.cols - pivots.len(),
            }
        }
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
