//! Dense exact linear algebra over the rationals.
//!
//! Elimination is fraction-free: each row is scaled to integers and reduced
//! with Bareiss' algorithm, so every intermediate entry is an integer minor
//! of the scaled matrix. Pivots are the first nonzero entry in column order,
//! which makes every result deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::compute(self)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn determinant(&self) -> Option<Rational> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(Rational::one());
        }
        let e = self.echelon();
        if e.pivots.len() < self.rows {
            return Some(Rational::zero());
        }
        let last = &e.rows[self.rows - 1][self.cols - 1];
        let mut det = Rational::from_integer(last.clone()) / &e.row_scale;
        if e.swaps % 2 == 1 {
            det = -det;
        }
        Some(det)
    }

    /// Kernel basis, one vector per free column, with that free variable set
    /// to one and the other free variables to zero.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let e = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        free.into_iter()
            .map(|f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                e.back_substitute(&mut x, None);
                x
            })
            .collect()
    }

    /// A solution of `self * x = b` with every free variable set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let aug = self.hcat(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let e = aug.echelon();
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols + 1];
        e.back_substitute(&mut x, Some(self.cols));
        x.truncate(self.cols);
        Some(x)
    }

    /// Cells as `num/den` (integers bare), comma separated, one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format_rational(self.get(i, j))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format_rational(self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Integer row echelon form produced by Bareiss elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Nonzero rows of the echelon form, each of full width.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// Product of the per-row integer scalings applied before elimination.
    row_scale: BigInt,
    swaps: usize,
}

impl Echelon {
    fn compute(m: &Matrix) -> Echelon {
        let mut row_scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..m.rows)
            .map(|i| {
                let lcm = (0..m.cols).fold(BigInt::one(), |l, j| l.lcm(m.get(i, j).denom()));
                row_scale *= &lcm;
                (0..m.cols)
                    .map(|j| {
                        let v = m.get(i, j);
                        v.numer() * (&lcm / v.denom())
                    })
                    .collect()
            })
            .collect();

        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                swaps += 1;
            }
            let (head, tail) = a.split_at_mut(r + 1);
            let pivot_row = &head[r];
            for row in tail.iter_mut() {
                let factor = row[c].clone();
                for j in c + 1..m.cols {
                    let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        Echelon {
            rows: a,
            pivots,
            row_scale,
            swaps,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Fills pivot variables of `x` from the already-set free variables.
    /// With `rhs = Some(col)`, column `col` is the augmented right-hand side.
    fn back_substitute(&self, x: &mut [Rational], rhs: Option<usize>) {
        let width = rhs.unwrap_or(x.len());
        for (t, &pc) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[t];
            let mut acc = match rhs {
                Some(col) => Rational::from_integer(row[col].clone()),
                None => Rational::zero(),
            };
            for j in pc + 1..width {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = acc / Rational::from_integer(row[pc].clone());
        }
    }
}

/// Greedy complement: scanning `candidates` in order, keeps those that raise
/// the rank of `range` plus the already-kept candidates. Returns kept indices.
pub fn greedy_complement(range: &Matrix, candidates: &[Vec<Rational>]) -> Vec<usize> {
    let mut current = range.clone();
    let mut rank = current.rank();
    let mut kept = Vec::new();
    for (idx, cand) in candidates.iter().enumerate() {
        if rank == range.rows() {
            break;
        }
        let trial = current.hcat(&Matrix::from_columns(range.rows(), &[cand.clone()]));
        let r = trial.rank();
        if r > rank {
            current = trial;
            rank = r;
            kept.push(idx);
        }
    }
    kept
}

/// Exact decomposition `v = A u + B c` for a verified direct sum
/// `range(A) + span(B) = whole space`, `range(A) ∩ span(B) = 0`.
#[derive(Debug, Clone)]
pub struct DirectSum {
    range: Matrix,
    combined: Matrix,
    complement_dim: usize,
}

impl DirectSum {
    /// `None` if the columns of `complement` do not complement `range(range)`.
    pub fn new(range: Matrix, complement: &[Vec<Rational>]) -> Option<DirectSum> {
        let n = range.rows();
        let base_rank = range.rank();
        let combined = if complement.is_empty() {
            range.clone()
        } else {
            range.hcat(&Matrix::from_columns(n, complement))
        };
        let full = combined.rank();
        if full != n || base_rank + complement.len() != n {
            return None;
        }
        Some(DirectSum {
            range,
            combined,
            complement_dim: complement.len(),
        })
    }

    pub fn range(&self) -> &Matrix {
        &self.range
    }

    /// `(u, c)` with `A u + B c = v`; `u` has its free variables set to zero.
    pub fn decompose(&self, v: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut z = self
            .combined
            .solve(v)
            .expect("a verified direct sum spans the whole space");
        let c = z.split_off(self.range.cols());
        debug_assert_eq!(c.len(), self.complement_dim);
        (z, c)
    }
}
