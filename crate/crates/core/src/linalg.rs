//! Exact and floating-point rank, null-space and solve routines.
//!
//! All routines take a list of column vectors of a common length `n`.
//! Exact routines are the authoritative backend for verification;
//! the floating ones exist for the rate simulator.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{BiaError, Result};

/// Relative pivot threshold for floating rank decisions.
pub const FLOAT_RANK_TOLERANCE: f64 = 1e-10;

fn check_lengths<T>(columns: &[Vec<T>]) -> Result<usize> {
    let n = columns.first().map_or(0, Vec::len);
    if let Some(bad) = columns.iter().position(|c| c.len() != n) {
        return Err(BiaError::DimensionMismatch(format!(
            "column {} has length {}, expected {}",
            bad + 1,
            columns[bad].len(),
            n
        )));
    }
    Ok(n)
}

/// Rank and the greedy set of independent columns (left to right).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

impl RankProfile {
    /// Columns that depend on earlier ones.
    pub fn dependent_columns(&self, total: usize) -> Vec<usize> {
        (0..total).filter(|c| !self.pivot_columns.contains(c)).collect()
    }
}

/// Fraction-free (Bareiss) elimination over the integers.
pub fn exact_rank_profile(columns: &[Vec<BigInt>]) -> Result<RankProfile> {
    let rows = check_lengths(columns)?;
    let cols = columns.len();
    // a[i][c] = coordinate i of column c
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| columns.iter().map(|col| col[i].clone()).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(found) = (pivot_row..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(found, pivot_row);
        let (top, bottom) = a.split_at_mut(pivot_row + 1);
        let pivot = &top[pivot_row];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot[c] * &row[j] - &row[c] * &pivot[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[pivot_row][c].clone();
        pivots.push(c);
        pivot_row += 1;
    }
    Ok(RankProfile {
        rank: pivots.len(),
        pivot_columns: pivots,
    })
}

pub fn exact_rank(columns: &[Vec<BigInt>]) -> Result<usize> {
    Ok(exact_rank_profile(columns)?.rank)
}

pub fn to_big(columns: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    columns
        .iter()
        .map(|c| c.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

/// Reduced row echelon form of a rational matrix given row-major.
/// Returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(found) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(found, r);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the orthogonal complement of the column span,
/// `{w : wᵀ c = 0 for every column c}`.
pub fn exact_orthogonal_complement(columns: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    // rows of the system are the columns themselves
    let mut m: Vec<Vec<BigRational>> = columns.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut w = vec![BigRational::zero(); n];
            w[f] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                w[p] = -m[row][f].clone();
            }
            w
        })
        .collect()
}

/// Solve `A x = b` for a full-column-rank `A` (given as columns) in exact
/// arithmetic. Errors when the system is rank deficient or inconsistent.
pub fn exact_solve(columns: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = check_lengths(columns)?;
    if b.len() != n {
        return Err(BiaError::DimensionMismatch(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            n
        )));
    }
    let k = columns.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&k) {
        return Err(BiaError::DimensionMismatch("inconsistent linear system".into()));
    }
    if pivots.len() != k {
        return Err(BiaError::DimensionMismatch(format!(
            "system has rank {} < {} unknowns",
            pivots.len(),
            k
        )));
    }
    Ok((0..k).map(|i| aug[i][k].clone()).collect())
}

/// Gaussian elimination with partial pivoting. A pivot counts when it exceeds
/// [`FLOAT_RANK_TOLERANCE`] times the largest absolute entry.
pub fn float_rank(columns: &[Vec<f64>]) -> Result<usize> {
    let rows = check_lengths(columns)?;
    let cols = columns.len();
    let mut a: Vec<Vec<f64>> = (0..rows).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    let scale = a.iter().flat_map(|r| r.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0);
    }
    let tol = FLOAT_RANK_TOLERANCE * scale;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, a[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        a.swap(best, r);
        let (top, below) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in below.iter_mut() {
            let f = row[c] / pivot_row[c];
            if f != 0.0 {
                for (x, p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x -= f * p;
                }
            }
        }
        r += 1;
    }
    Ok(r)
}

pub fn columns_to_matrix(columns: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, columns.len(), |i, j| columns[j][i])
}

/// Orthogonal projector onto the complement of the column span.
pub fn complement_projector(columns: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    let mut p = DMatrix::<f64>::identity(n, n);
    if columns.is_empty() {
        return p;
    }
    let a = columns_to_matrix(columns, n);
    let svd = a.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return p;
    }
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > FLOAT_RANK_TOLERANCE * smax {
            let uk = u.column(k);
            p -= uk * uk.transpose();
        }
    }
    p
}

/// `log2 det(I + snr · Gᵀ G)` for a symmetric positive semidefinite Gram matrix.
pub fn log2_det_identity_plus(gram: &DMatrix<f64>, snr: f64) -> f64 {
    let k = gram.nrows();
    let m = DMatrix::<f64>::identity(k, k) + gram * snr;
    let eig = m.symmetric_eigen();
    eig.eigenvalues.iter().map(|l| l.max(1.0).log2()).sum()
}

/// Least-squares solve for `Gram x = rhs` with a full-rank check.
pub fn solve_symmetric(gram: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let cols: Vec<Vec<f64>> = gram.column_iter().map(|c| c.iter().copied().collect()).collect();
    if float_rank(&cols).ok()? < gram.ncols() {
        return None;
    }
    gram.clone().lu().solve(rhs)
}

pub fn max_abs(values: impl IntoIterator<Item = BigRational>) -> BigRational {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(BigRational::zero(), |m, v| if v > m { v } else { m })
}
