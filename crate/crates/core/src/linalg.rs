//! Exact Gaussian elimination over a field, with kernel extraction.

#![allow(clippy::needless_range_loop)]

use crate::ring::Field;
use crate::{Error, Result};

/// Outcome of solving `rows * x = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<T> {
    Solution {
        particular: Vec<T>,
        /// Basis of the kernel of `rows`, one vector per free column,
        /// ordered by free column index.
        kernel: Vec<Vec<T>>,
    },
    Inconsistent,
}

/// Row-reduce the augmented system and read off one particular solution and
/// a kernel basis. Pivoting is deterministic: columns left to right, first
/// row with a nonzero entry.
pub fn solve_affine_system<F: Field>(
    field: &F,
    rows: &[Vec<F::Elem>],
    rhs: &[F::Elem],
) -> Result<SolveOutcome<F::Elem>> {
    let nrows = rows.len();
    if rhs.len() != nrows {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but {} right-hand entries",
            nrows,
            rhs.len()
        )));
    }
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }

    let mut a: Vec<Vec<F::Elem>> = rows.to_vec();
    let mut b: Vec<F::Elem> = rhs.to_vec();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        let hit = (pivot_row..nrows).find(|&r| !field.is_zero(&a[r][col]));
        let Some(r) = hit else { continue };
        a.swap(pivot_row, r);
        b.swap(pivot_row, r);
        let inv = field.inv(&a[pivot_row][col]).unwrap();
        for c in col..ncols {
            a[pivot_row][c] = field.mul(&a[pivot_row][c], &inv);
        }
        b[pivot_row] = field.mul(&b[pivot_row], &inv);
        for r2 in 0..nrows {
            if r2 == pivot_row || field.is_zero(&a[r2][col]) {
                continue;
            }
            let factor = a[r2][col].clone();
            for c in col..ncols {
                let sub = field.mul(&factor, &a[pivot_row][c]);
                a[r2][c] = field.sub(&a[r2][c], &sub);
            }
            let sub = field.mul(&factor, &b[pivot_row]);
            b[r2] = field.sub(&b[r2], &sub);
        }
        pivot_cols.push(col);
        pivot_row += 1;
        if pivot_row == nrows {
            break;
        }
    }

    // Any zero row with a nonzero rhs is a contradiction.
    for r in pivot_row..nrows {
        if !field.is_zero(&b[r]) {
            return Ok(SolveOutcome::Inconsistent);
        }
    }

    let mut particular = vec![field.zero(); ncols];
    for (k, &col) in pivot_cols.iter().enumerate() {
        particular[col] = b[k].clone();
    }

    let is_pivot = {
        let mut mask = vec![false; ncols];
        for &c in &pivot_cols {
            mask[c] = true;
        }
        mask
    };
    let mut kernel = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (k, &col) in pivot_cols.iter().enumerate() {
            v[col] = field.neg(&a[k][free]);
        }
        kernel.push(v);
    }

    Ok(SolveOutcome::Solution { particular, kernel })
}

/// rows * x, for verification.
pub fn mat_vec<F: Field>(field: &F, rows: &[Vec<F::Elem>], x: &[F::Elem]) -> Vec<F::Elem> {
    rows.iter()
        .map(|row| {
            row.iter().zip(x.iter()).fold(field.zero(), |acc, (a, b)| {
                field.add(&acc, &field.mul(a, b))
            })
        })
        .collect()
}
