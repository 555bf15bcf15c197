//! Independent reference computations for tests: textbook Gaussian
//! elimination over the rationals and window systems assembled from
//! residuals of unit vectors. Nothing here calls into the elimination or
//! matrix-building code under test.

#![allow(dead_code)]

use lacuna_core::operator::{FiniteSolution, OperatorSpec};
use lacuna_core::Rational;
use num_traits::{One, Zero};

/// Rank by plain row reduction with rational division.
pub fn naive_rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = Rational::one() / a[rank][c].clone();
        for x in a[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn unit(m: i64) -> FiniteSolution {
    FiniteSolution::new(m, vec![Rational::one()]).unwrap()
}

/// Rows: equations `n` in `rows`; columns: `x(lo)..x(hi)`; entry is the
/// residual at `n` of the unit sequence at `m`.
pub fn residual_matrix(op: &OperatorSpec, rows: std::ops::RangeInclusive<i64>, lo: i64, hi: i64) -> Vec<Vec<Rational>> {
    rows.map(|n| (lo..=hi).map(|m| op.residual(&unit(m), n)).collect()).collect()
}

/// Dimension of the global solutions supported in `[lo, hi]`.
pub fn confined_nullity(op: &OperatorSpec, lo: i64, hi: i64) -> usize {
    let r = op.order() as i64;
    let rows = residual_matrix(op, lo - r..=hi, lo, hi);
    (hi - lo + 1) as usize - naive_rank(&rows)
}

/// Nullity of the equations living inside `[lo, hi]`.
pub fn free_nullity(op: &OperatorSpec, lo: i64, hi: i64) -> usize {
    let r = op.order() as i64;
    let rows = residual_matrix(op, lo..=hi - r, lo, hi);
    (hi - lo + 1) as usize - naive_rank(&rows)
}

/// Projection dimensions onto the first `i` columns of the system that is zero
/// left of `s` and has equations `[s - r, s + n - 1 - r]`, from ranks alone:
/// `dim proj_i ker A = i - rank A + rank A[:, i..]`.
pub fn left_projection_dims(op: &OperatorSpec, s: i64, i_max: usize, n: usize) -> Vec<usize> {
    let r = op.order() as i64;
    let hi = s + n as i64 - 1;
    let a = residual_matrix(op, s - r..=hi - r, s, hi);
    let rank = naive_rank(&a);
    (1..=i_max).map(|i| i + naive_rank(&a.iter().map(|row| row[i..].to_vec()).collect::<Vec<_>>()) - rank).collect()
}
