//! Prime-field arithmetic and Gaussian elimination over F_p.

use crate::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field F_p. Elements are `u64` values in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p is small in practice; widen to avoid overflow anyway.
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::domain("division by zero in F_p".to_string()));
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// A multiplicative generator, found by exhaustive order check (p is small).
    pub fn generator(&self) -> u64 {
        if self.p == 2 {
            return 1;
        }
        'cand: for g in 2..self.p {
            let mut x = g;
            for _ in 1..self.p - 2 {
                x = self.mul(x, g);
                if x == 1 {
                    continue 'cand;
                }
            }
            return g;
        }
        unreachable!("every prime field has a generator")
    }
}

/// Dense matrix over F_p, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    pub field: Fp,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(field: Fp, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = FpMatrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v % field.p;
            }
        }
        m
    }

    /// In-place reduction to row echelon form with partial pivoting by row
    /// order; returns the pivot column of each pivot row.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| self[(r, col)] != 0) else {
                continue;
            };
            self.swap_rows(row, pivot_row);
            let inv = f.inv(self[(row, col)]).expect("pivot nonzero");
            for j in col..self.cols {
                self[(row, j)] = f.mul(self[(row, j)], inv);
            }
            for r in 0..self.rows {
                if r != row && self[(r, col)] != 0 {
                    let factor = self[(r, col)];
                    for j in col..self.cols {
                        let sub = f.mul(factor, self[(row, j)]);
                        self[(r, j)] = f.sub(self[(r, j)], sub);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right null space `{x : Mx = 0}`.
    pub fn null_space(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (pr, &pc) in pivots.iter().enumerate() {
                // x_pc = -sum over free columns of m[pr, fc] * x_fc
                v[pc] = f.neg(m[(pr, fc)]);
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `Mx = rhs`; `None` when inconsistent. Free variables are set to 0.
    pub fn solve(&self, rhs: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(rhs.len(), self.rows);
        let f = self.field;
        let mut aug = FpMatrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = rhs[i] % f.p;
        }
        let pivots = aug.row_reduce();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![0u64; self.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(pr, self.cols)];
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for FpMatrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}
