//! Dense exact linear algebra over the rationals.
//!
//! Sizes here are the dimensions of V_{n,k} for moderate n, so a dense
//! representation is fine. Solving is fraction-free: rows are scaled to
//! integers and eliminated Bareiss style (each intermediate entry is a
//! minor of the scaled matrix, and the division by the previous pivot is
//! exact), with back substitution done over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::space::{rat_to_string, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Mat {
        let mut m = Mat::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for inner in 0..self.cols {
                let a = &self[(r, inner)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(inner, c)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(r, c)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for c in 0..self.cols {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !v[c].is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let expect_one = r == c;
                if self[(r, c)].is_one() != expect_one || (!expect_one && !self[(r, c)].is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Row rank, by rational forward elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rat>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)].clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let pivot_row = std::mem::take(&mut m[rank]);
            let inv = pivot_row[col].clone();
            for other in m.iter_mut().skip(rank + 1) {
                if other[col].is_zero() {
                    continue;
                }
                let factor = &other[col] / &inv;
                for (e, p) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                    *e -= &factor * p;
                }
            }
            m[rank] = pivot_row;
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// A basis of the right null space, from the reduced row echelon form.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m: Vec<Vec<Rat>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)].clone()).collect())
            .collect();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let mut pivot_row = std::mem::take(&mut m[row]);
            let inv = pivot_row[col].clone();
            for e in pivot_row[col..].iter_mut() {
                *e = &*e / &inv;
            }
            for (r, other) in m.iter_mut().enumerate() {
                if r != row && !other[col].is_zero() {
                    let factor = other[col].clone();
                    for (e, p) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                        *e -= &factor * p;
                    }
                }
            }
            m[row] = pivot_row;
            pivot_cols.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        let free_cols: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut v = vec![Rat::zero(); self.cols];
            v[fc] = Rat::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves self * X = rhs for square self via fraction-free elimination.
    /// Pivots on the first row with a nonzero entry in the current column.
    /// Returns None when the matrix is singular.
    pub fn solve_columns(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows, "dimension mismatch");
        let n = self.rows;
        let width = n + rhs.cols;

        // scale each augmented row to integers
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let mut lcm = BigInt::one();
            for c in 0..n {
                lcm = lcm.lcm(self[(r, c)].denom());
            }
            for c in 0..rhs.cols {
                lcm = lcm.lcm(rhs[(r, c)].denom());
            }
            let mut row: Vec<BigInt> = Vec::with_capacity(width);
            for c in 0..n {
                row.push(scaled(&self[(r, c)], &lcm));
            }
            for c in 0..rhs.cols {
                row.push(scaled(&rhs[(r, c)], &lcm));
            }
            m.push(row);
        }

        // Bareiss forward elimination
        let mut prev = BigInt::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot);
            for r in col + 1..n {
                for c in col + 1..width {
                    let num = &m[col][col] * &m[r][c] - &m[r][col] * &m[col][c];
                    debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                    m[r][c] = num / &prev;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[col][col].clone();
        }

        // rational back substitution, one rhs column at a time
        let mut out = Mat::zeros(n, rhs.cols);
        for j in 0..rhs.cols {
            for r in (0..n).rev() {
                let mut acc = Rat::from_integer(m[r][n + j].clone());
                for c in r + 1..n {
                    let prod = Rat::from_integer(m[r][c].clone()) * &out[(c, j)];
                    acc -= prod;
                }
                out[(r, j)] = acc / Rat::from_integer(m[r][r].clone());
            }
        }
        Some(out)
    }

    pub fn solve(&self, rhs: &[Rat]) -> Option<Vec<Rat>> {
        let rhs_mat = Mat::from_columns(rhs.len(), &[rhs.to_vec()]);
        self.solve_columns(&rhs_mat).map(|m| m.column(0))
    }

    pub fn inverse(&self) -> Option<Mat> {
        self.solve_columns(&Mat::identity(self.rows))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.rows)
            .map(|r| {
                serde_json::Value::Array(
                    (0..self.cols)
                        .map(|c| serde_json::Value::String(rat_to_string(&self[(r, c)])))
                        .collect(),
                )
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    /// True when each column's nonzero entries share a single sign.
    pub fn columns_sign_coherent(&self) -> bool {
        for c in 0..self.cols {
            let mut seen_pos = false;
            let mut seen_neg = false;
            for r in 0..self.rows {
                let v = &self[(r, c)];
                if v.is_positive() {
                    seen_pos = true;
                } else if v.is_negative() {
                    seen_neg = true;
                }
            }
            if seen_pos && seen_neg {
                return false;
            }
        }
        true
    }

    /// Determinant via fraction-free elimination (the last pivot of the
    /// Bareiss sweep is det of the integer-scaled matrix).
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let mut scale = Rat::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let mut lcm = BigInt::one();
            for c in 0..n {
                lcm = lcm.lcm(self[(r, c)].denom());
            }
            scale *= Rat::from_integer(lcm.clone());
            m.push((0..n).map(|c| scaled(&self[(r, c)], &lcm)).collect());
        }
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Rat::zero();
            };
            if pivot != col {
                m.swap(col, pivot);
                sign = -sign;
            }
            for r in col + 1..n {
                for c in col + 1..n {
                    let num = &m[col][col] * &m[r][c] - &m[r][col] * &m[col][c];
                    debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                    m[r][c] = num / &prev;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[col][col].clone();
        }
        Rat::from_integer(BigInt::from(sign) * prev) / scale
    }
}

fn scaled(r: &Rat, lcm: &BigInt) -> BigInt {
    r.numer() * (lcm / r.denom())
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{rat, rat_int};

    fn mat(rows: &[&[i64]]) -> Mat {
        let mut m = Mat::zeros(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m[(r, c)] = rat_int(v);
            }
        }
        m
    }

    #[test]
    fn solve_small_system() {
        let a = mat(&[&[2, 1], &[1, -1]]);
        let x = a.solve(&[rat_int(3), rat_int(0)]).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(1)]);
    }

    #[test]
    fn solve_rational_system() {
        let mut a = Mat::zeros(2, 2);
        a[(0, 0)] = rat(1, 2);
        a[(0, 1)] = rat(1, 3);
        a[(1, 0)] = rat_int(1);
        a[(1, 1)] = rat_int(-1);
        let x = a.solve(&[rat(5, 6), rat_int(0)]).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(1)]);
    }

    #[test]
    fn singular_detected() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        assert!(a.solve(&[rat_int(1), rat_int(2)]).is_none());
        assert!(a.inverse().is_none());
        assert_eq!(a.rank(), 1);
        assert_eq!(a.det(), rat_int(0));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = mat(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
        assert_eq!(a.det(), rat_int(2));
    }

    #[test]
    fn nullspace_matches_rank() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            let img = a.mul_vec(v);
            assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn zero_row_matrix() {
        let a = Mat::zeros(0, 3);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.nullspace().len(), 3);
    }

    #[test]
    fn sign_coherence() {
        assert!(mat(&[&[1, -2], &[2, 0]]).columns_sign_coherent());
        assert!(!mat(&[&[1, 0], &[-2, 1]]).columns_sign_coherent());
    }

    #[test]
    fn det_with_row_swaps() {
        let a = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.det(), rat_int(-1));
        let b = mat(&[&[0, 2, 1], &[3, 0, 0], &[0, 0, 5]]);
        assert_eq!(b.det(), rat_int(-30));
    }
}
