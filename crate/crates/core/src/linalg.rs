//! Exact rank and nullspace computations for (banded) rational matrices, and
//! the kernels of window systems built on them.
//!
//! Two elimination routes are provided and must agree exactly:
//!
//! * [`rank_and_nullspace`] keeps every row as a primitive integer segment
//!   and only touches rows whose segment starts at the pivot column. On the
//!   banded window systems of an order-`r` operator, segments never grow past
//!   `2(r + 1)` entries.
//! * [`rank_and_nullspace_dense`] is a dense fraction-free Gauss-Jordan
//!   (Bareiss) elimination.
//!
//! Both pivot on the leftmost column and the first row holding a nonzero
//! there. Results are reported against the reduced row echelon form, which is
//! unique, so the two routes return identical bases: one vector per free
//! column, scaled to integers with content one and a positive leading entry.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::operator::{BoundaryMode, FiniteSolution, OperatorSpec};
use crate::rational::{normalize_primitive, primitive_integer};
use crate::sequence::Window;
use crate::{Error, Rational, Result};

/// Row stored as a contiguous segment of columns starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseRow {
    start: usize,
    entries: Vec<Rational>,
}

impl SparseRow {
    /// Leading and trailing zeroes are trimmed away.
    pub fn new(start: usize, entries: Vec<Rational>) -> Self {
        let Some(first) = entries.iter().position(|x| !x.is_zero()) else {
            return SparseRow::default();
        };
        let last = entries.iter().rposition(|x| !x.is_zero()).unwrap_or(first);
        let entries = if first == 0 && last + 1 == entries.len() { entries } else { entries[first..=last].to_vec() };
        SparseRow { start: start + first, entries }
    }

    /// Column of the first stored entry.
    pub fn start(&self) -> usize {
        self.start
    }

    /// Stored entries; empty for a zero row.
    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// One past the last stored column.
    pub fn end(&self) -> usize {
        self.start + self.entries.len()
    }

    /// Entry in column `j`.
    pub fn get(&self, j: usize) -> Rational {
        if j >= self.start && j < self.end() {
            self.entries[j - self.start].clone()
        } else {
            Rational::zero()
        }
    }
}

/// Exact rational matrix with segment-compressed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl Matrix {
    /// Rows must not reach past `ncols`.
    pub fn from_sparse_rows(ncols: usize, rows: Vec<SparseRow>) -> Self {
        assert!(rows.iter().all(|r| r.end() <= ncols), "row extends past the last column");
        Matrix { ncols, rows }
    }

    /// Dense constructor; every row must have `ncols` entries.
    pub fn from_dense(ncols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::ArityMismatch { expected: ncols, found: bad.len() });
        }
        Ok(Matrix { ncols, rows: rows.into_iter().map(|r| SparseRow::new(0, r)).collect() })
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Rows in order.
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(j)
    }

    /// Widest stored row segment.
    pub fn max_row_width(&self) -> usize {
        self.rows.iter().map(|r| r.entries.len()).max().unwrap_or(0)
    }

    /// Dense copy.
    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| (0..self.ncols).map(|j| r.get(j)).collect()).collect()
    }

    /// `M v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        self.rows.iter().map(|r| r.entries.iter().zip(&v[r.start..r.end()]).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Rank, pivot columns of the reduced echelon form and a canonical nullspace
/// basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nullspace {
    /// Rank of the matrix.
    pub rank: usize,
    /// Pivot columns, increasing.
    pub pivot_columns: Vec<usize>,
    /// One primitive integer vector per free column, in column order.
    pub basis: Vec<Vec<Rational>>,
}

// Primitive integer row segment; `vals[0]` is nonzero.
#[derive(Debug, Clone)]
struct IntRow {
    start: usize,
    vals: Vec<BigInt>,
}

impl IntRow {
    fn from_sparse(row: &SparseRow) -> Option<IntRow> {
        if row.entries.is_empty() {
            return None;
        }
        Some(IntRow { start: row.start, vals: primitive_integer(&row.entries) })
    }

    fn end(&self) -> usize {
        self.start + self.vals.len()
    }

    fn get(&self, j: usize) -> Option<&BigInt> {
        if j >= self.start && j < self.end() {
            Some(&self.vals[j - self.start])
        } else {
            None
        }
    }

    /// Clears the leading entry of `row` against the pivot row `self`; both
    /// start at the same column. The result is trimmed and primitive.
    fn eliminate(&self, row: &IntRow) -> Option<IntRow> {
        let g = self.vals[0].gcd(&row.vals[0]);
        let a = &self.vals[0] / &g;
        let b = &row.vals[0] / &g;
        let end = self.end().max(row.end());
        let mut vals = Vec::with_capacity(end - self.start);
        for j in self.start..end {
            let mut v = BigInt::zero();
            if let Some(x) = row.get(j) {
                v += &a * x;
            }
            if let Some(y) = self.get(j) {
                v -= &b * y;
            }
            vals.push(v);
        }
        let first = vals.iter().position(|v| !v.is_zero())?;
        let last = vals.iter().rposition(|v| !v.is_zero())?;
        let vals = normalize_primitive(vals[first..=last].to_vec());
        Some(IntRow { start: self.start + first, vals })
    }
}

// Row echelon form: pivot rows with strictly increasing start columns.
fn echelon(m: &Matrix) -> Vec<IntRow> {
    let mut remaining: Vec<IntRow> = m.rows.iter().filter_map(IntRow::from_sparse).collect();
    let mut pivots = Vec::new();
    for c in 0..m.ncols {
        if remaining.is_empty() {
            break;
        }
        // Every remaining row starts at or after c; those at c hold the
        // column's nonzeroes.
        let Some(idx) = remaining.iter().position(|r| r.start == c) else { continue };
        let pivot = remaining.remove(idx);
        if remaining.iter().any(|r| r.start == c) {
            remaining = remaining
                .into_iter()
                .filter_map(|r| if r.start == c { pivot.eliminate(&r) } else { Some(r) })
                .collect();
        }
        pivots.push(pivot);
    }
    pivots
}

/// Back-substitution for the free column `f`: the solution with `x_f = 1`
/// and every other free variable zero, as `(offset, values)` covering
/// `[offset, f]`, scaled to a primitive integer vector.
fn free_column_vector(pivots: &[IntRow], reach: &[usize], f: usize) -> (usize, Vec<Rational>) {
    // xs[t] holds x_{f - t}
    let mut xs: Vec<Rational> = vec![Rational::one()];
    let mut lowest = f;
    let below = pivots.partition_point(|p| p.start < f);
    for i in (0..below).rev() {
        if reach[i] <= lowest {
            break;
        }
        let p = &pivots[i];
        let c = p.start;
        while f - (xs.len() - 1) > c {
            xs.push(Rational::zero());
        }
        let mut acc = Rational::zero();
        for (j, a) in p.vals.iter().enumerate().skip(1) {
            let col = c + j;
            if col > f {
                break;
            }
            let x = &xs[f - col];
            if !x.is_zero() {
                acc += x * Rational::from_integer(a.clone());
            }
        }
        if !acc.is_zero() {
            xs[f - c] = -acc / Rational::from_integer(p.vals[0].clone());
            lowest = c;
        }
    }
    xs.truncate(f - lowest + 1);
    xs.reverse();
    let ints = primitive_integer(&xs);
    (lowest, ints.into_iter().map(Rational::from_integer).collect())
}

struct SparseKernel {
    rank: usize,
    pivot_columns: Vec<usize>,
    vectors: Vec<(usize, Vec<Rational>)>,
}

fn sparse_kernel(m: &Matrix) -> SparseKernel {
    let pivots = echelon(m);
    // reach[i]: one past the furthest column touched by pivots[0..=i]
    let reach: Vec<usize> = pivots
        .iter()
        .scan(0usize, |acc, p| {
            *acc = (*acc).max(p.end());
            Some(*acc)
        })
        .collect();
    let pivot_columns: Vec<usize> = pivots.iter().map(|p| p.start).collect();
    let mut vectors = Vec::with_capacity(m.ncols - pivots.len());
    let mut next = pivot_columns.iter().peekable();
    for f in 0..m.ncols {
        if next.peek() == Some(&&f) {
            next.next();
            continue;
        }
        vectors.push(free_column_vector(&pivots, &reach, f));
    }
    SparseKernel { rank: pivots.len(), pivot_columns, vectors }
}

/// Rank and canonical nullspace by segment-wise integer elimination.
pub fn rank_and_nullspace(m: &Matrix) -> Nullspace {
    let k = sparse_kernel(m);
    let basis = k
        .vectors
        .into_iter()
        .map(|(off, vals)| {
            let mut v = vec![Rational::zero(); m.ncols];
            for (i, x) in vals.into_iter().enumerate() {
                v[off + i] = x;
            }
            v
        })
        .collect();
    Nullspace { rank: k.rank, pivot_columns: k.pivot_columns, basis }
}

/// Rank and canonical nullspace by dense fraction-free Gauss-Jordan
/// elimination. Every division is exact; all pivots end up equal to the last
/// pivot `d`, so the basis vector of a free column `f` is `d` at `f` and
/// `-a[i][f]` at the pivot column of row `i`.
pub fn rank_and_nullspace_dense(m: &Matrix) -> Nullspace {
    let ncols = m.ncols;
    let mut a: Vec<Vec<BigInt>> = m
        .rows
        .iter()
        .map(|r| {
            let mut den = BigInt::one();
            for x in &r.entries {
                den = den.lcm(x.denom());
            }
            (0..ncols).map(|j| (r.get(j) * &den).to_integer()).collect()
        })
        .collect();
    let nrows = a.len();
    let mut d = BigInt::one();
    let mut pivot_columns = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(i) = (rank..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, i);
        let pivot_row = a[rank].clone();
        let p = pivot_row[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank {
                continue;
            }
            let f = row[c].clone();
            for j in 0..ncols {
                let num = &p * &row[j] - &f * &pivot_row[j];
                let (q, rem) = num.div_rem(&d);
                assert!(rem.is_zero(), "fraction-free step left a remainder");
                row[j] = q;
            }
        }
        d = p;
        pivot_columns.push(c);
        rank += 1;
    }
    let mut basis = Vec::with_capacity(ncols - rank);
    let mut next = pivot_columns.iter().peekable();
    for f in 0..ncols {
        if next.peek() == Some(&&f) {
            next.next();
            continue;
        }
        let mut v = vec![BigInt::zero(); ncols];
        v[f] = d.clone();
        for (i, &pc) in pivot_columns.iter().enumerate() {
            v[pc] = -a[i][f].clone();
        }
        basis.push(normalize_primitive(v).into_iter().map(Rational::from_integer).collect());
    }
    Nullspace { rank, pivot_columns, basis }
}

/// Basis of the global solutions supported in `window`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    window: Window,
    solutions: Vec<FiniteSolution>,
}

impl KernelBasis {
    /// Wraps dense vectors of length `window.len()`; zero vectors are
    /// rejected.
    pub fn from_vectors(window: Window, vectors: &[Vec<Rational>]) -> Result<Self> {
        let mut solutions = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() as u64 != window.len() {
                return Err(Error::ArityMismatch { expected: window.len() as usize, found: v.len() });
            }
            let s = FiniteSolution::from_window_vector(window.lo(), v)
                .ok_or(Error::InvalidSolution("kernel vector is zero"))?;
            solutions.push(s);
        }
        Ok(KernelBasis { window, solutions })
    }

    /// The window the kernel was computed on.
    pub fn window(&self) -> Window {
        self.window
    }

    /// Dimension of the kernel.
    pub fn dim(&self) -> usize {
        self.solutions.len()
    }

    /// Basis vectors as tightly anchored solutions.
    pub fn solutions(&self) -> &[FiniteSolution] {
        &self.solutions
    }

    /// Basis vectors zero-extended to the whole window.
    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        self.solutions.iter().map(|s| s.on_window(&self.window)).collect()
    }

    /// Independent re-check: every vector solves `L x = 0` globally, lies in
    /// the window, and the vectors are linearly independent.
    pub fn verify(&self, op: &OperatorSpec) -> Result<()> {
        for (index, s) in self.solutions.iter().enumerate() {
            if !self.window.contains_window(&s.span()) || !op.is_global_solution_finite(s) {
                return Err(Error::VerificationFailure { index });
            }
        }
        let rows = self
            .solutions
            .iter()
            .map(|s| SparseRow::new((s.anchor() - self.window.lo()) as usize, s.values().to_vec()))
            .collect();
        let m = Matrix::from_sparse_rows(self.window.len() as usize, rows);
        let rank = echelon(&m).len();
        if rank != self.solutions.len() {
            return Err(Error::VerificationFailure { index: rank });
        }
        Ok(())
    }
}

/// All global solutions supported inside `w`: the nullspace of the
/// support-confined window system. Each vector is re-verified against the
/// operator before it is returned.
pub fn finite_support_kernel(op: &OperatorSpec, w: &Window) -> Result<KernelBasis> {
    let m = op.window_matrix(w, BoundaryMode::SupportConfined);
    let k = sparse_kernel(&m);
    let mut solutions = Vec::with_capacity(k.vectors.len());
    for (index, (off, vals)) in k.vectors.into_iter().enumerate() {
        let s = FiniteSolution::from_window_vector(w.lo() + off as i64, &vals)
            .ok_or(Error::VerificationFailure { index })?;
        if !op.is_global_solution_finite(&s) {
            return Err(Error::VerificationFailure { index });
        }
        solutions.push(s);
    }
    Ok(KernelBasis { window: *w, solutions })
}

/// Nullity of the free-boundary window system: the dimension of the
/// solutions of the equations living inside `w`, with no assumption outside.
pub fn free_kernel_dim(op: &OperatorSpec, w: &Window) -> Result<usize> {
    let r = op.order();
    if w.len() <= r as u64 {
        return Err(Error::WindowTooSmall { len: w.len(), order: r });
    }
    let m = op.window_matrix(w, BoundaryMode::FreeBoundary);
    Ok(m.ncols() - echelon(&m).len())
}

/// For `i = 1..=i_max`, the dimension of the projection onto the first `i`
/// coordinates `[ray_start, ray_start + i - 1]` of the solutions of the
/// [`BoundaryMode::LeftConfined`] system on `[ray_start, ray_start + budget - 1]`.
///
/// Every solution supported in `[ray_start, +inf)` restricts to a solution of
/// that system, so these are upper approximations of the projections of the
/// ray-supported solution space; they can only shrink as `budget` grows.
pub fn projection_dims(op: &OperatorSpec, ray_start: i64, i_max: usize, budget: usize) -> Result<Vec<usize>> {
    if i_max == 0 || budget < i_max {
        return Err(Error::InvalidParameter("projection needs budget >= i_max >= 1"));
    }
    let w = Window::new(ray_start, ray_start + budget as i64 - 1)?;
    let ns = rank_and_nullspace(&op.window_matrix(&w, BoundaryMode::LeftConfined));
    let basis = Matrix::from_sparse_rows(budget, ns.basis.into_iter().map(|v| SparseRow::new(0, v)).collect());
    // rank of the first i columns = number of echelon pivots among them
    let pivots: Vec<usize> = echelon(&basis).iter().map(|p| p.start).collect();
    Ok((1..=i_max).map(|i| pivots.partition_point(|&c| c < i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{example1_operator, fibonacci_operator, zero_operator};
    use crate::rational::int;

    fn mat(rows: &[&[i64]]) -> Matrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        Matrix::from_dense(ncols, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_examples() {
        let m = mat(&[&[1, 1], &[0, 0]]);
        let ns = rank_and_nullspace(&m);
        assert_eq!(ns.rank, 1);
        assert_eq!(ns.basis, vec![ints(&[1, -1])]);
        assert_eq!(rank_and_nullspace_dense(&m), ns);

        let id = mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let ns = rank_and_nullspace(&id);
        assert_eq!((ns.rank, ns.basis.len()), (3, 0));
        assert_eq!(rank_and_nullspace_dense(&id), ns);
    }

    #[test]
    fn basis_is_canonical() {
        // x0 + 2 x2 = 0, x1 - x2 = 0 scaled by rationals
        let m = Matrix::from_dense(
            3,
            vec![vec![Rational::new(1.into(), 2.into()), int(0), int(1)], vec![int(3), int(3), int(3)]],
        )
        .unwrap();
        let ns = rank_and_nullspace(&m);
        assert_eq!(ns.pivot_columns, vec![0, 1]);
        assert_eq!(ns.basis, vec![ints(&[2, -1, -1])]);
        assert_eq!(rank_and_nullspace_dense(&m), ns);
    }

    #[test]
    fn zero_and_empty_matrices() {
        let z = Matrix::from_dense(3, vec![ints(&[0, 0, 0])]).unwrap();
        let ns = rank_and_nullspace(&z);
        assert_eq!(ns.rank, 0);
        assert_eq!(ns.basis, vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])]);
        let e = Matrix::from_dense(2, vec![]).unwrap();
        assert_eq!(rank_and_nullspace(&e).basis.len(), 2);
        assert_eq!(rank_and_nullspace_dense(&e), rank_and_nullspace(&e));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::from_dense(2, vec![ints(&[1])]).is_err());
    }

    #[test]
    fn example1_confined_nullity() {
        let op = example1_operator(2, None).unwrap();
        let m = op.window_matrix(&Window::new(0, 8).unwrap(), BoundaryMode::SupportConfined);
        let ns = rank_and_nullspace(&m);
        assert_eq!(ns.basis.len(), 6);
        for v in &ns.basis {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank_and_nullspace_dense(&m), ns);
    }

    #[test]
    fn finite_support_kernel_examples() {
        let op = example1_operator(2, None).unwrap();
        let k = finite_support_kernel(&op, &Window::new(1, 2).unwrap()).unwrap();
        assert_eq!(k.vectors(), vec![ints(&[1, 0]), ints(&[0, 1])]);

        let fib = fibonacci_operator();
        for (lo, hi) in [(0, 0), (0, 5), (-100, 99)] {
            assert_eq!(finite_support_kernel(&fib, &Window::new(lo, hi).unwrap()).unwrap().dim(), 0);
        }

        let z = zero_operator(2);
        let k = finite_support_kernel(&z, &Window::new(0, 4).unwrap()).unwrap();
        assert_eq!(k.dim(), 5);
        k.verify(&z).unwrap();
    }

    #[test]
    fn free_kernel_examples() {
        let fib = fibonacci_operator();
        assert_eq!(free_kernel_dim(&fib, &Window::new(0, 10).unwrap()).unwrap(), 2);
        assert_eq!(free_kernel_dim(&fib, &Window::new(0, 1).unwrap()), Err(Error::WindowTooSmall { len: 2, order: 2 }));
        assert_eq!(free_kernel_dim(&zero_operator(2), &Window::new(0, 4).unwrap()).unwrap(), 5);
        let op = example1_operator(2, None).unwrap();
        assert_eq!(free_kernel_dim(&op, &Window::new(0, 8).unwrap()).unwrap(), 6);
    }

    #[test]
    fn projection_examples() {
        let op = example1_operator(2, None).unwrap();
        assert_eq!(projection_dims(&op, 1, 3, 30).unwrap(), vec![1, 2, 2]);
        assert_eq!(projection_dims(&fibonacci_operator(), 0, 3, 50).unwrap(), vec![0, 0, 0]);
        assert_eq!(projection_dims(&zero_operator(1), 0, 4, 10).unwrap(), vec![1, 2, 3, 4]);
        assert!(projection_dims(&op, 0, 0, 10).is_err());
        assert!(projection_dims(&op, 0, 5, 4).is_err());
    }

    #[test]
    fn verify_rejects_dependent_or_false_vectors() {
        let z = zero_operator(1);
        let w = Window::new(0, 2).unwrap();
        let dup = KernelBasis::from_vectors(w, &[ints(&[1, 0, 0]), ints(&[2, 0, 0])]).unwrap();
        assert!(dup.verify(&z).is_err());
        let fib = fibonacci_operator();
        let bogus = KernelBasis::from_vectors(w, &[ints(&[1, 0, 0])]).unwrap();
        assert_eq!(bogus.verify(&fib), Err(Error::VerificationFailure { index: 0 }));
        assert!(KernelBasis::from_vectors(w, &[ints(&[0, 0, 0])]).is_err());
        assert!(KernelBasis::from_vectors(w, &[ints(&[1, 0])]).is_err());
    }
}
