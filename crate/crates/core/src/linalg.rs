//! Exact dense linear algebra: elimination over a [`Field`], rank over `F_p`
//! with machine words, and determinants of small polynomial matrices.

use std::collections::HashMap;

use thiserror::Error;

use crate::field::{inv_mod, mul_mod, sub_mod, Field, FieldElement};
use crate::poly::Polynomial;

/// Largest polynomial matrix handled by the symbolic routines.
pub const MAX_SYMBOLIC_SIZE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("matrix of size {size} exceeds the limit of {limit}")]
pub struct MatrixTooLarge {
    pub size: usize,
    pub limit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { field, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    if self.get(r, j).is_zero() {
                        continue;
                    }
                    let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
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

    /// Basis of the right kernel, one vector per free column, with that free
    /// coordinate set to 1.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> FieldElement {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = self.field;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return f.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("pivot is nonzero");
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Rank of a matrix of residues modulo the prime `p`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(piv) = (r..n_rows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for i in r + 1..n_rows {
            if rows[i][c] == 0 {
                continue;
            }
            let factor = mul_mod(rows[i][c], inv, p);
            for j in c..n_cols {
                let t = mul_mod(factor, rows[r][j], p);
                rows[i][j] = sub_mod(rows[i][j], t, p);
            }
        }
        r += 1;
    }
    r
}

fn check_square(m: &[Vec<Polynomial>]) -> usize {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    n
}

/// Determinant by Laplace expansion along rows, memoized on the set of
/// columns still available.
pub fn det_cofactor(field: Field, m: &[Vec<Polynomial>]) -> Result<Polynomial, MatrixTooLarge> {
    let n = check_square(m);
    if n > MAX_SYMBOLIC_SIZE {
        return Err(MatrixTooLarge { size: n, limit: MAX_SYMBOLIC_SIZE });
    }
    let mut memo: HashMap<u32, Polynomial> = HashMap::new();
    Ok(minor(m, field, (1u32 << n) - 1, &mut memo))
}

// Determinant of the bottom rows against the columns in `cols`.
fn minor(m: &[Vec<Polynomial>], field: Field, cols: u32, memo: &mut HashMap<u32, Polynomial>) -> Polynomial {
    if cols == 0 {
        return Polynomial::one(field);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let n = m.len();
    let row = n - cols.count_ones() as usize;
    let mut acc = Polynomial::zero(field);
    let mut sign_positive = true;
    for c in 0..n {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = minor(m, field, cols & !(1 << c), memo);
            let term = entry * &sub;
            acc = if sign_positive { acc + term } else { acc - term };
        }
        sign_positive = !sign_positive;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Rank of a polynomial matrix over the rational function field, by
/// fraction-free (Bareiss) elimination with exact polynomial division.
pub fn bareiss_rank(m: &[Vec<Polynomial>]) -> Result<usize, MatrixTooLarge> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if rows.max(cols) > MAX_SYMBOLIC_SIZE {
        return Err(MatrixTooLarge { size: rows.max(cols), limit: MAX_SYMBOLIC_SIZE });
    }
    if rows == 0 || cols == 0 {
        return Ok(0);
    }
    let field = m[0][0].field();
    let mut a: Vec<Vec<Polynomial>> = m.to_vec();
    let mut prev = Polynomial::one(field);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = num.exact_divide(&prev).expect("fields agree").expect("Bareiss quotients are exact");
            }
            a[i][c] = Polynomial::zero(field);
        }
        prev = a[r][c].clone();
        r += 1;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> FieldElement {
        Field::Rational.from_i64(v)
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(Field::Rational, s).unwrap()
    }

    #[test]
    fn rref_kernel_det() {
        let m = Matrix::from_rows(
            Field::Rational,
            vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]],
        );
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        for row in 0..3 {
            let f = Field::Rational;
            let dot = (0..3).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(m.get(row, j), &k[0][j])));
            assert!(dot.is_zero());
        }
        assert!(m.determinant().is_zero());
        let id = Matrix::from_rows(Field::Rational, vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(id.determinant(), q(-1));
    }

    #[test]
    fn modular_rank() {
        let p = 7;
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], p), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![3, 4]], p), 2);
        // 1*5 - 3*4 = -7 = 0 mod 7
        assert_eq!(rank_mod_p(vec![vec![1, 3], vec![4, 5]], p), 1);
    }

    #[test]
    fn symbolic_determinant_matches_leibniz() {
        let m: Vec<Vec<Polynomial>> = (1..=3).map(|i| (1..=3).map(|j| p(&format!("x{}{}", i, j))).collect()).collect();
        let det = det_cofactor(Field::Rational, &m).unwrap();
        let want = p("x11*x22*x33 - x11*x23*x32 - x12*x21*x33 + x12*x23*x31 + x13*x21*x32 - x13*x22*x31");
        assert_eq!(det, want);
        let big = vec![vec![p("1"); 13]; 13];
        assert!(det_cofactor(Field::Rational, &big).is_err());
    }

    #[test]
    fn bareiss_rank_of_dependent_rows() {
        let m = vec![vec![p("x1"), p("x2")], vec![p("x1^2"), p("x1*x2")]];
        assert_eq!(bareiss_rank(&m).unwrap(), 1);
        let m = vec![vec![p("x1"), p("x2")], vec![p("x2"), p("x1")], vec![p("1"), p("1")]];
        assert_eq!(bareiss_rank(&m).unwrap(), 2);
    }
}
