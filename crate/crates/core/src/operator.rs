//! The difference operator `L = sum_k a_k(n) sigma^k`, residuals, exact
//! verification of finite-support solutions and residue-class certificates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::Zero;

use crate::linalg::{Matrix, SparseRow};
use crate::sequence::{Sequence, SequenceSpec, Window};
use crate::{Error, MaskTarget, Rational, Result};

/// Order `r` plus the coefficients `a_0, ..., a_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSpec {
    coeffs: Vec<SequenceSpec>,
}

/// How a window system treats the outside of the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// Unknowns outside the window are zero; equations `n` in `[lo - r, hi]`.
    /// Nullspace vectors are exactly the global solutions supported in the
    /// window.
    SupportConfined,
    /// No assumption outside the window; only equations `n` in `[lo, hi - r]`
    /// that stay inside it.
    FreeBoundary,
    /// Zero to the left of the window, free to the right; equations `n` in
    /// `[lo - r, hi - r]`. Restrictions of solutions supported in
    /// `[lo, +inf)` satisfy it.
    LeftConfined,
}

impl OperatorSpec {
    /// `coeffs[k]` is `a_k`; its length must be `order + 1`.
    pub fn new(order: usize, coeffs: Vec<SequenceSpec>) -> Result<Self> {
        if coeffs.len() != order + 1 {
            return Err(Error::ArityMismatch { expected: order + 1, found: coeffs.len() });
        }
        Ok(OperatorSpec { coeffs })
    }

    /// Order `r`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All coefficients, `a_0` first.
    pub fn coeffs(&self) -> &[SequenceSpec] {
        &self.coeffs
    }

    /// Coefficient `a_k`.
    pub fn coeff(&self, k: usize) -> &SequenceSpec {
        &self.coeffs[k]
    }

    /// Whether every coefficient vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SequenceSpec::is_identically_zero)
    }

    /// `(L x)(n) = sum_k a_k(n) x(n + k)`.
    pub fn residual<S: Sequence + ?Sized>(&self, x: &S, n: i64) -> Rational {
        let mut acc = Rational::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            let c = a.eval(n);
            if c.is_zero() {
                continue;
            }
            let v = x.eval(n + k as i64);
            if !v.is_zero() {
                acc += c * v;
            }
        }
        acc
    }

    /// Exact check that the zero extension of `x` solves `L x = 0` on all of
    /// the integers. Outside `[min_supp - r, max_supp]` every equation only
    /// touches zeroes, so these finitely many residuals decide it.
    pub fn is_global_solution_finite(&self, x: &FiniteSolution) -> bool {
        let r = self.order() as i64;
        (x.min_support() - r..=x.max_support()).all(|n| self.residual(x, n).is_zero())
    }

    /// Checks the equations that lie entirely inside `w`, i.e. residuals for
    /// `n` in `[w.lo, w.hi - r]`, and reports the first failing `n`.
    pub fn windowed_residual_check<S: Sequence + ?Sized>(&self, x: &S, w: &Window) -> Result<()> {
        let r = self.order() as i64;
        for n in w.lo()..=w.hi() - r {
            let res = self.residual(x, n);
            if !res.is_zero() {
                return Err(Error::NotASolutionOnWindow { n, residual: res });
            }
        }
        Ok(())
    }

    /// Exact linearization of `L x = 0` on `w`; columns are `x(w.lo)..x(w.hi)`.
    /// Row `n` has `a_{m-n}(n)` in column `m` for `0 <= m - n <= r`.
    pub fn window_matrix(&self, w: &Window, mode: BoundaryMode) -> Matrix {
        let r = self.order() as i64;
        let ncols = w.len() as usize;
        let equations = match mode {
            BoundaryMode::SupportConfined => w.lo() - r..=w.hi(),
            BoundaryMode::FreeBoundary => w.lo()..=w.hi() - r,
            BoundaryMode::LeftConfined => w.lo() - r..=w.hi() - r,
        };
        let rows = equations
            .map(|n| {
                let first = n.max(w.lo());
                let last = (n + r).min(w.hi());
                let entries = (first..=last).map(|m| self.coeffs[(m - n) as usize].eval(n)).collect();
                SparseRow::new((first - w.lo()) as usize, entries)
            })
            .collect();
        Matrix::from_sparse_rows(ncols, rows)
    }
}

/// A global solution with finite support: `values[i]` at `anchor + i`, zero
/// elsewhere. The first and last values are nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSolution {
    anchor: i64,
    values: Vec<Rational>,
}

impl FiniteSolution {
    /// Rejects all-zero or loosely anchored value lists.
    pub fn new(anchor: i64, values: Vec<Rational>) -> Result<Self> {
        match (values.first(), values.last()) {
            (Some(a), Some(b)) if !a.is_zero() && !b.is_zero() => {}
            (None, _) | (_, None) => return Err(Error::InvalidSolution("empty value list")),
            _ if values.iter().all(Zero::is_zero) => return Err(Error::InvalidSolution("all values are zero")),
            _ => return Err(Error::InvalidSolution("first and last values must be nonzero")),
        }
        if anchor.checked_add(values.len() as i64 - 1).is_none() {
            return Err(Error::InvalidSolution("support overflows the index range"));
        }
        Ok(FiniteSolution { anchor, values })
    }

    /// Re-anchors a vector living on `[lo, lo + len)` tightly around its
    /// support. `None` for the zero vector.
    pub fn from_window_vector(lo: i64, values: &[Rational]) -> Option<Self> {
        let first = values.iter().position(|v| !v.is_zero())?;
        let last = values.iter().rposition(|v| !v.is_zero())?;
        Some(FiniteSolution { anchor: lo + first as i64, values: values[first..=last].to_vec() })
    }

    /// Index of the first value.
    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// Values from `anchor` on.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Smallest support index.
    pub fn min_support(&self) -> i64 {
        self.anchor
    }

    /// Largest support index.
    pub fn max_support(&self) -> i64 {
        self.anchor + self.values.len() as i64 - 1
    }

    /// Hull of the support.
    pub fn span(&self) -> Window {
        Window::new(self.min_support(), self.max_support()).expect("tight anchoring")
    }

    /// Support indices in increasing order.
    pub fn support(&self) -> Vec<i64> {
        self.values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| self.anchor + i as i64).collect()
    }

    /// Zero-extended values on `w`, which must contain the support.
    pub fn on_window(&self, w: &Window) -> Vec<Rational> {
        w.indices().map(|n| self.eval(n)).collect()
    }

    /// Whether the two supports share an index.
    pub fn overlaps(&self, other: &FiniteSolution) -> bool {
        if self.max_support() < other.min_support() || other.max_support() < self.min_support() {
            return false;
        }
        let mine: BTreeSet<i64> = self.support().into_iter().collect();
        other.support().iter().any(|n| mine.contains(n))
    }
}

impl Sequence for FiniteSolution {
    fn eval(&self, n: i64) -> Rational {
        let i = n as i128 - self.anchor as i128;
        if i >= 0 && (i as usize) < self.values.len() {
            self.values[i as usize].clone()
        } else {
            Rational::zero()
        }
    }
}

/// Residues allowed to carry nonzero values, modulo `modulus`.
/// An empty `allowed` set denotes the zero sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMask {
    modulus: u64,
    allowed: BTreeSet<u64>,
}

impl ResidueMask {
    /// Residues must lie in `[0, modulus)`.
    pub fn new(modulus: u64, allowed: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("mask modulus must be positive"));
        }
        let allowed: BTreeSet<u64> = allowed.into_iter().collect();
        if allowed.iter().any(|&a| a >= modulus) {
            return Err(Error::InvalidParameter("mask residue outside [0, modulus)"));
        }
        Ok(ResidueMask { modulus, allowed })
    }

    /// Every residue allowed.
    pub fn full(modulus: u64) -> Result<Self> {
        Self::new(modulus, 0..modulus)
    }

    /// Modulus.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Allowed residues.
    pub fn allowed(&self) -> &BTreeSet<u64> {
        &self.allowed
    }

    /// Whether the residue of `n` is allowed.
    pub fn allows(&self, n: i64) -> bool {
        let c = (n as i128).rem_euclid(self.modulus as i128) as u64;
        self.allowed.contains(&c)
    }
}

/// Outcome of [`residue_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueVerdict {
    /// Every product `a_k(n) x(n + k)` vanishes identically; `L x = 0` on all
    /// of the integers for every `x` respecting the solution mask.
    Certified {
        /// Common modulus the residues were compared at.
        modulus: u64,
    },
    /// Some `a_k(n)` and `x(n + k)` can both be nonzero.
    NotCertified {
        /// Shift of the offending product.
        k: usize,
        /// Residue of `n` modulo the common modulus where both are allowed.
        residue: u64,
    },
}

impl ResidueVerdict {
    /// Shorthand for the certified case.
    pub fn is_certified(&self) -> bool {
        matches!(self, ResidueVerdict::Certified { .. })
    }
}

const MIN_SAMPLE: u64 = 64;
const MAX_SAMPLE: u64 = 1 << 20;

fn lcm_capped(a: u64, b: u64) -> u64 {
    let l = a.lcm(&b);
    if l > MAX_SAMPLE {
        a
    } else {
        l
    }
}

/// Certifies `L x = 0` symbolically from residue-class supports.
///
/// `coeff_masks[k]` claims `supp(a_k)` and `solution_mask` claims `supp(x)`.
/// The coefficient claims (and the solution claim, when `solution` is given)
/// are first sampled on `[-S, S)` where `S` is a common period of the masks
/// and of the periodic coefficients (at least 64); a contradiction is a
/// [`Error::MaskViolation`] and no verdict is issued.
pub fn residue_certificate(
    op: &OperatorSpec,
    coeff_masks: &[ResidueMask],
    solution_mask: &ResidueMask,
    solution: Option<&SequenceSpec>,
) -> Result<ResidueVerdict> {
    let r = op.order();
    if coeff_masks.len() != r + 1 {
        return Err(Error::ArityMismatch { expected: r + 1, found: coeff_masks.len() });
    }
    let modulus = coeff_masks.iter().map(ResidueMask::modulus).fold(solution_mask.modulus(), |acc, m| acc.lcm(&m));

    let mut sample = modulus;
    for p in op.coeffs().iter().chain(solution).filter_map(SequenceSpec::natural_period) {
        sample = lcm_capped(sample, p);
    }
    let sample = sample.clamp(MIN_SAMPLE, MAX_SAMPLE) as i64;
    for n in -sample..sample {
        for (k, (a, mask)) in op.coeffs().iter().zip(coeff_masks).enumerate() {
            if !mask.allows(n) && !a.eval(n).is_zero() {
                return Err(Error::MaskViolation { target: MaskTarget::Coefficient(k), index: n });
            }
        }
        if let Some(x) = solution {
            if !solution_mask.allows(n) && !x.eval(n).is_zero() {
                return Err(Error::MaskViolation { target: MaskTarget::Solution, index: n });
            }
        }
    }

    for (k, mask) in coeff_masks.iter().enumerate() {
        for t in 0..modulus {
            let n = t as i64;
            if mask.allows(n) && solution_mask.allows(n + k as i64) {
                return Ok(ResidueVerdict::NotCertified { k, residue: t });
            }
        }
    }
    Ok(ResidueVerdict::Certified { modulus })
}
