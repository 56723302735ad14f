//! Dense matrices over cyclotomic fields and exact rank.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use serde::{Deserialize, Serialize};

use crate::cyclonum::CyclotomicNumber;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CyclotomicNumber>,
}

impl CycloMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CycloMatrix {
            rows,
            cols,
            data: vec![CyclotomicNumber::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = CyclotomicNumber::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CyclotomicNumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::validation("ragged matrix rows"));
        }
        Ok(CycloMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| CyclotomicNumber::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[CyclotomicNumber] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<CyclotomicNumber>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> CyclotomicNumber {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn checked_mul(&self, other: &CycloMatrix) -> Result<CycloMatrix> {
        if self.cols != other.rows {
            return Err(Error::validation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CycloMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a.checked_mul(b)?;
                        out[(i, j)] = out[(i, j)].checked_add(&prod)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> CycloMatrix {
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &CycloMatrix) -> Result<CycloMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::validation("shape mismatch in matrix sum"));
        }
        Ok(CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Kronecker product, the matrix of a tensor product of maps.
    pub fn kron(&self, other: &CycloMatrix) -> CycloMatrix {
        let mut out = CycloMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &CycloMatrix) -> CycloMatrix {
        let mut out = CycloMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Rank by fraction-free (Bareiss) elimination: every division is exact
    /// by the previous pivot.
    pub fn rank(&self) -> Result<usize> {
        let mut a = self.to_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = CyclotomicNumber::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank][col].clone();
            for r in rank + 1..rows {
                let factor = a[r][col].clone();
                for c in col..cols {
                    let lhs = pivot.checked_mul(&a[r][c])?;
                    let rhs = factor.checked_mul(&a[rank][c])?;
                    a[r][c] = lhs.checked_sub(&rhs)?.checked_div(&prev)?;
                }
            }
            prev = pivot;
            rank += 1;
        }
        Ok(rank)
    }

    /// Rank by Gauss–Jordan elimination with normalized pivots.
    pub fn rank_gauss_jordan(&self) -> Result<usize> {
        let mut a = self.to_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let inv = a[rank][col].checked_inv()?;
            for c in col..cols {
                a[rank][c] = a[rank][c].checked_mul(&inv)?;
            }
            for r in 0..rows {
                if r == rank || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in col..cols {
                    let sub = factor.checked_mul(&a[rank][c])?;
                    a[r][c] = a[r][c].checked_sub(&sub)?;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        Ok(rank)
    }

    /// Determinant by fraction-free elimination; square matrices only.
    pub fn determinant(&self) -> Result<CyclotomicNumber> {
        if !self.is_square() {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut prev = CyclotomicNumber::one();
        let mut sign = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(CyclotomicNumber::zero());
            };
            if p != k {
                a.swap(k, p);
                sign = !sign;
            }
            for r in k + 1..n {
                for c in k + 1..n {
                    let lhs = a[k][k].checked_mul(&a[r][c])?;
                    let rhs = a[r][k].checked_mul(&a[k][c])?;
                    a[r][c] = lhs.checked_sub(&rhs)?.checked_div(&prev)?;
                }
            }
            prev = a[k][k].clone();
        }
        let det = if n == 0 { CyclotomicNumber::one() } else { a[n - 1][n - 1].clone() };
        Ok(if sign { -det } else { det })
    }
}

impl Index<(usize, usize)> for CycloMatrix {
    type Output = CyclotomicNumber;
    fn index(&self, (i, j): (usize, usize)) -> &CyclotomicNumber {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CycloMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CyclotomicNumber {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CycloMatrix {
    type Output = CycloMatrix;
    fn mul(self, rhs: &CycloMatrix) -> CycloMatrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycloMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
