//! Dense exact integer matrices.
//!
//! Determinant (Bareiss), Smith normal form with unimodular transforms,
//! column-style Hermite normal form, gcd of minors, and a couple of exact
//! solvers. Sizes here are desk scale: the acceptance corpus never goes past
//! a few dozen rows.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{divides, Int};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn diagonal(entries: &[Int]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors. `rows` is needed
    /// to describe an empty column list.
    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch(format!(
                "expected columns of length {rows}"
            )));
        }
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Test and example convenience; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Int>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect();
        Self::from_rows(&rows).expect("rectangular literal")
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

    pub fn entries(&self) -> &[Int] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal_entries(&self) -> Vec<Int> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut s = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                s[(a, b)] = self[(i, j)].clone();
            }
        }
        s
    }

    pub fn try_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Result<Vec<Int>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = k * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    /// col[dst] += k · col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = k * &self[(i, src)];
            self[(i, dst)] += t;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = -x;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = -x;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self[(i, j)].to_string())?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(a: &IntMatrix) -> Result<Int> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(Int::one());
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    negate = !negate;
                }
                None => return Ok(Int::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                // Sylvester's identity makes this division exact
                m[(i, j)] = num / &prev;
            }
        }
        prev = m[(k, k)].clone();
    }
    let d = m[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Smith normal form `U·A·V = D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
    /// Nonzero diagonal `b_1 | b_2 | … | b_r`, all positive.
    pub invariant_factors: Vec<Int>,
}

fn min_abs_nonzero(a: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), Int)> = None;
    for i in from..a.rows {
        for j in from..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Smith normal form with minimum-absolute-value pivoting.
///
/// Each step moves the smallest nonzero entry of the trailing block to the
/// pivot, clears its row and column by truncated division, and repeats until
/// the pivot divides everything left in the block.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut rank = 0;

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_nonzero(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot exists in row or column t
                let (pi, pj) = min_abs_nonzero_cross(&d, t);
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..m)
                .cartesian_product(t + 1..n)
                .find(|&(i, j)| !divides(&pivot, &d[(i, j)]));
            match offender {
                Some((i, _)) => {
                    d.add_row_multiple(t, i, &Int::one());
                    u.add_row_multiple(t, i, &Int::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }

    let invariant_factors = (0..rank).map(|i| d[(i, i)].clone()).collect();
    SnfResult {
        u,
        d,
        v,
        rank,
        invariant_factors,
    }
}

// smallest nonzero entry in row t or column t (the pivot itself included)
fn min_abs_nonzero_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let candidates = (t..d.rows)
        .map(|i| (i, t))
        .chain((t + 1..d.cols).map(|j| (t, j)));
    candidates
        .filter(|&p| !d[p].is_zero())
        .min_by_key(|&p| d[p].abs())
        .expect("pivot is nonzero")
}

/// gcd of all `i×i` minors (0 if all vanish). Exponential; oracle use only.
pub fn gcd_minors(a: &IntMatrix, i: usize) -> Result<Int> {
    if i == 0 || i > a.rows.min(a.cols) {
        return Err(Error::InvalidArgument(format!(
            "minor size {i} outside 1..={}",
            a.rows.min(a.cols)
        )));
    }
    let mut g = Int::zero();
    for rs in (0..a.rows).combinations(i) {
        for cs in (0..a.cols).combinations(i) {
            g = g.gcd(&det_exact(&a.submatrix(&rs, &cs))?);
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

/// Column-style Hermite normal form `A·U = H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Row index of the pivot in each nonzero column of `h`.
    pub pivot_rows: Vec<usize>,
}

impl HnfResult {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// The nonzero columns of `h`: the canonical basis of the column span.
    pub fn basis(&self) -> Vec<Vec<Int>> {
        (0..self.rank()).map(|j| self.h.column(j)).collect()
    }
}

/// Lower echelon form under right unimodular transforms. Pivots are
/// positive and entries to the left of a pivot lie in `[0, pivot)`, so two
/// matrices with the same column span have the same nonzero columns.
pub fn hnf(a: &IntMatrix) -> HnfResult {
    let (rows, cols) = (a.rows, a.cols);
    let mut h = a.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivot_rows = Vec::new();
    let mut k = 0;
    for r in 0..rows {
        if k == cols {
            break;
        }
        while let Some(p) = (k..cols)
            .filter(|&c| !h[(r, c)].is_zero())
            .min_by_key(|&c| h[(r, c)].abs())
        {
            h.swap_cols(k, p);
            u.swap_cols(k, p);
            let mut done = true;
            for c in k + 1..cols {
                if h[(r, c)].is_zero() {
                    continue;
                }
                let q = -h[(r, c)].div_floor(&h[(r, k)]);
                h.add_col_multiple(c, k, &q);
                u.add_col_multiple(c, k, &q);
                done &= h[(r, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, k)].is_zero() {
            continue;
        }
        if h[(r, k)].is_negative() {
            h.negate_col(k);
            u.negate_col(k);
        }
        for c in 0..k {
            let q = -h[(r, c)].div_floor(&h[(r, k)]);
            h.add_col_multiple(c, k, &q);
            u.add_col_multiple(c, k, &q);
        }
        pivot_rows.push(r);
        k += 1;
    }
    HnfResult { h, u, pivot_rows }
}

/// The unique `X` with `A·X = B` for square upper triangular `A` with
/// nonzero diagonal. Fails if `X` is not integral.
pub fn solve_upper_triangular(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if !a.is_upper_triangular() {
        return Err(Error::InvalidArgument(
            "matrix is not upper triangular".into(),
        ));
    }
    if b.rows != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "{} rows on the left, {} on the right",
            a.rows, b.rows
        )));
    }
    if let Some(i) = (0..a.rows).find(|&i| a[(i, i)].is_zero()) {
        return Err(Error::ZeroDiagonal(i));
    }
    let n = a.rows;
    let mut x = IntMatrix::zeros(n, b.cols);
    for j in 0..b.cols {
        for i in (0..n).rev() {
            let mut acc = b[(i, j)].clone();
            for l in i + 1..n {
                acc -= &a[(i, l)] * &x[(l, j)];
            }
            let (q, r) = acc.div_rem(&a[(i, i)]);
            if !r.is_zero() {
                return Err(Error::NonIntegral);
            }
            x[(i, j)] = q;
        }
    }
    Ok(x)
}

/// An integral `X` with `A·X = B`, or `NonIntegral` if none exists. When `A`
/// has full column rank the solution is unique.
pub fn solve_integral(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if b.rows != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "{} rows on the left, {} on the right",
            a.rows, b.rows
        )));
    }
    let s = snf(a);
    // D·Y = U·B with X = V·Y
    let ub = &s.u * b;
    let mut y = IntMatrix::zeros(a.cols, b.cols);
    for j in 0..b.cols {
        for i in 0..a.rows {
            if i < s.rank {
                let (q, r) = ub[(i, j)].div_rem(&s.invariant_factors[i]);
                if !r.is_zero() {
                    return Err(Error::NonIntegral);
                }
                y[(i, j)] = q;
            } else if !ub[(i, j)].is_zero() {
                return Err(Error::NonIntegral);
            }
        }
    }
    Ok(&s.v * &y)
}

/// Transposed cofactor matrix: `A·adj(A) = det(A)·I`.
pub fn adjugate(a: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    if n == 1 {
        return Ok(IntMatrix::identity(1));
    }
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rs: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cs: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let minor = det_exact(&a.submatrix(&rs, &cs))?;
            adj[(i, j)] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    Ok(adj)
}

pub fn rank(a: &IntMatrix) -> usize {
    snf(a).rank
}
