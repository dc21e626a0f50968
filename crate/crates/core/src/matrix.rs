//! Dense matrices over `F_q`: products, Gauss-Jordan inversion, right-hand
//! solving and rejection sampling of invertible matrices.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{same_field, Field, FieldElement, FieldExt};

/// Cap on rejection-sampling rounds in [`random_invertible`].
pub const INVERTIBLE_ATTEMPTS: usize = 10_000;

/// Row-major matrix; indices are zero-based `(row, col)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    ctx: Field,
}

impl Matrix {
    pub fn zeros(ctx: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![ctx.zero(); rows * cols],
            ctx: Arc::clone(ctx),
        }
    }

    pub fn identity(ctx: &Field, n: usize) -> Matrix {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = ctx.one();
        }
        m
    }

    pub fn from_entries(
        ctx: &Field,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !same_field(e.ctx(), ctx)) {
            return Err(Error::ContextMismatch);
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
            ctx: Arc::clone(ctx),
        })
    }

    /// Builds a matrix from rows of element indices (residues over a prime
    /// field).
    pub fn from_rows<R: AsRef<[u64]>>(ctx: &Field, rows: &[R]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&i| ctx.from_index(i)))
            .collect();
        Self::from_entries(ctx, rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        if !same_field(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_entries(&self.ctx, self.rows, self.cols, entries)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        if v.iter().any(|e| !same_field(e.ctx(), &self.ctx)) {
            return Err(Error::ContextMismatch);
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.ctx.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.row_reduce(self.cols).len()
    }

    /// Reduces to reduced row echelon form, choosing pivots only among the
    /// first `pivot_cols` columns. Returns the pivot column of each leading
    /// row.
    fn row_reduce(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(found) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, found);
            let inv = self[(row, col)].inv().expect("pivot is nonzero");
            for j in 0..self.cols {
                self[(row, j)] = &self[(row, j)] * &inv;
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let factor = self[(r, col)].clone();
                for j in 0..self.cols {
                    let delta = &factor * &self[(row, j)];
                    self[(r, j)] = &self[(r, j)] - &delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Parses one row per line, entries in element text form.
    pub fn parse(ctx: &Field, lines: &[&str]) -> Result<Matrix> {
        let rows = lines
            .iter()
            .map(|line| {
                line.split_whitespace()
                    .map(|t| ctx.parse_element(t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::parse("matrix rows have different lengths"));
        }
        Self::from_entries(ctx, rows.len(), cols, rows.into_iter().flatten().collect())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

/// One row per line, entries separated by single spaces.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{}\n{self}", self.rows, self.cols)
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !same_field(&a.ctx, &b.ctx) {
        return Err(Error::ContextMismatch);
    }
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(&a.ctx, a.rows, b.cols);
    for i in 0..a.rows {
        for l in 0..a.cols {
            let x = &a[(i, l)];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                out[(i, j)] = &out[(i, j)] + &(x * &b[(l, j)]);
            }
        }
    }
    Ok(out)
}

/// Gauss-Jordan inverse; pivots on the first nonzero entry of each column.
pub fn mat_inv(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "cannot invert a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut aug = Matrix::zeros(&a.ctx, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n + i)] = a.ctx.one();
    }
    if aug.row_reduce(n).len() < n {
        return Err(Error::Singular);
    }
    let mut inv = Matrix::zeros(&a.ctx, n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Ok(inv)
}

/// Solves `X * a = b` for `X`.
///
/// The transposed system `a^T X^T = b^T` is row reduced; `a` must have full
/// row rank for the solution to be unique.
pub fn solve_right(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !same_field(&a.ctx, &b.ctx) {
        return Err(Error::ContextMismatch);
    }
    if a.cols != b.cols {
        return Err(Error::Shape(format!(
            "X*A = B needs equal column counts, got A {}x{} and B {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let unknowns = a.rows;
    let (eqs, rhs) = (a.cols, b.rows);
    let mut aug = Matrix::zeros(&a.ctx, eqs, unknowns + rhs);
    for e in 0..eqs {
        for u in 0..unknowns {
            aug[(e, u)] = a[(u, e)].clone();
        }
        for s in 0..rhs {
            aug[(e, unknowns + s)] = b[(s, e)].clone();
        }
    }
    let pivots = aug.row_reduce(unknowns);
    let rank = pivots.len();
    for e in rank..eqs {
        if (0..rhs).any(|s| !aug[(e, unknowns + s)].is_zero()) {
            return Err(Error::Inconsistent);
        }
    }
    if rank < unknowns {
        return Err(Error::Underdetermined {
            rank,
            needed: unknowns,
        });
    }
    // Full rank: pivot row r holds unknown r.
    let mut x = Matrix::zeros(&a.ctx, rhs, unknowns);
    for (r, &u) in pivots.iter().enumerate() {
        for s in 0..rhs {
            x[(s, u)] = aug[(r, unknowns + s)].clone();
        }
    }
    Ok(x)
}

/// Uniform sample from `GL(dim, F_q)` by rejection.
pub fn random_invertible<R: Rng + ?Sized>(dim: usize, ctx: &Field, rng: &mut R) -> Result<Matrix> {
    if dim == 0 {
        return Err(Error::Shape("dimension must be positive".into()));
    }
    for _ in 0..INVERTIBLE_ATTEMPTS {
        let entries = (0..dim * dim).map(|_| ctx.random(rng)).collect();
        let m = Matrix::from_entries(ctx, dim, dim, entries)?;
        if m.rank() == dim {
            return Ok(m);
        }
    }
    Err(Error::SamplingExhausted(INVERTIBLE_ATTEMPTS))
}
