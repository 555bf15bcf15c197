//! Budgeted constructions for both directions of the lacunary criterion.
//!
//! * [`certify_dimension`] collects pairwise support-disjoint finite-support
//!   solutions on growing symmetric windows, proving `dim V_L >= k`.
//! * [`split_lacunary`] cuts a sequence that solves the equation on a window
//!   at runs of at least `r + 1` zeroes; every piece is a global solution.
//! * [`build_lacunary`] stacks finite-support blocks along a ray with gaps
//!   that grow at least by one per step, giving a prefix of a lacunary
//!   solution.
//!
//! None of these decide finiteness of the dimension. When the budget runs out
//! the answer is `Inconclusive`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::linalg::finite_support_kernel;
use crate::operator::{FiniteSolution, OperatorSpec};
use crate::sequence::{support_in_window, FiniteTable, Sequence, SequenceSpec, Window};
use crate::{Error, Rational, Result};

/// `k` exact global solutions with pairwise disjoint supports inside
/// `window`; a proof that the solution space has dimension at least `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionCertificate {
    /// Claimed lower bound.
    pub k: usize,
    /// Window holding every support.
    pub window: Window,
    /// The witnesses.
    pub solutions: Vec<FiniteSolution>,
}

impl DimensionCertificate {
    /// Re-checks the certificate from scratch against `op`.
    pub fn verify(&self, op: &OperatorSpec) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("certificate must claim k >= 1"));
        }
        if self.solutions.len() != self.k {
            return Err(Error::ArityMismatch { expected: self.k, found: self.solutions.len() });
        }
        let mut seen = BTreeSet::new();
        for (index, s) in self.solutions.iter().enumerate() {
            if !self.window.contains_window(&s.span()) || !op.is_global_solution_finite(s) {
                return Err(Error::VerificationFailure { index });
            }
            for n in s.support() {
                if !seen.insert(n) {
                    return Err(Error::VerificationFailure { index });
                }
            }
        }
        Ok(())
    }
}

/// Result of [`certify_dimension`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    /// A sound lower bound.
    Certified(DimensionCertificate),
    /// Budget exhausted.
    Inconclusive {
        /// Largest finite-support kernel dimension seen.
        largest_kernel_dim: usize,
    },
}

/// Leftmost-first greedy choice of solutions with pairwise disjoint supports.
pub fn disjoint_greedy(solutions: &[FiniteSolution]) -> Vec<FiniteSolution> {
    let mut order: Vec<&FiniteSolution> = solutions.iter().collect();
    order.sort_by_key(|s| (s.min_support(), s.max_support()));
    let mut used = BTreeSet::new();
    let mut picked = Vec::new();
    for s in order {
        let support = s.support();
        if support.iter().any(|n| used.contains(n)) {
            continue;
        }
        used.extend(support);
        picked.push(s.clone());
    }
    picked
}

fn disjoint_on(op: &OperatorSpec, half_width: u64) -> Result<(usize, Vec<FiniteSolution>)> {
    let n = half_width as i64;
    let kernel = finite_support_kernel(op, &Window::new(-n, n)?)?;
    Ok((kernel.dim(), disjoint_greedy(kernel.solutions())))
}

/// Searches symmetric windows `[-N, N]` for `N = r+1, 2(r+1), 4(r+1), ...`
/// up to `budget` (and `budget` itself) for `k` support-disjoint solutions.
///
/// Once a window succeeds, bisection inside the last doubling step shrinks
/// it; the certificate is taken on the smallest successful window found.
pub fn certify_dimension(op: &OperatorSpec, k: usize, budget: u64) -> Result<Certification> {
    if k == 0 || budget == 0 {
        return Err(Error::InvalidParameter("k and budget must be positive"));
    }
    let step = op.order() as u64 + 1;
    let mut schedule = Vec::new();
    let mut n = step;
    while n <= budget {
        schedule.push(n);
        n = n.saturating_mul(2);
    }
    if schedule.last() != Some(&budget) {
        schedule.push(budget);
    }

    let mut largest = 0;
    let mut failed = 0u64;
    for &n in &schedule {
        let (dim, picked) = disjoint_on(op, n)?;
        largest = largest.max(dim);
        if picked.len() < k {
            failed = n;
            continue;
        }
        let (mut lo, mut hi, mut best) = (failed, n, picked);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let (_, p) = disjoint_on(op, mid)?;
            if p.len() >= k {
                hi = mid;
                best = p;
            } else {
                lo = mid;
            }
        }
        best.truncate(k);
        let h = hi as i64;
        return Ok(Certification::Certified(DimensionCertificate { k, window: Window::new(-h, h)?, solutions: best }));
    }
    Ok(Certification::Inconclusive { largest_kernel_dim: largest })
}

/// Result of [`split_lacunary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitOutcome {
    /// Verified pieces, leftmost first, with pairwise disjoint supports.
    Pieces(Vec<FiniteSolution>),
    /// No piece flanked on both sides by `r + 1` zeroes inside the window.
    NoCuts,
}

/// Cuts `x` at maximal zero runs of length at least `r + 1`.
///
/// `x` must satisfy every equation lying inside `w`; otherwise the first
/// failing index is reported as [`Error::NotASolutionOnWindow`]. A piece is
/// kept only if it has `r + 1` verified zeroes on both sides inside `w`, so
/// nothing is cut at the window edges. At most `max_pieces` pieces are
/// returned.
pub fn split_lacunary(op: &OperatorSpec, x: &SequenceSpec, w: &Window, max_pieces: usize) -> Result<SplitOutcome> {
    if max_pieces == 0 {
        return Err(Error::InvalidParameter("max_pieces must be positive"));
    }
    op.windowed_residual_check(x, w)?;
    let r = op.order() as i64;
    let support = support_in_window(x, w).indices;

    let mut groups: Vec<(i64, i64)> = Vec::new();
    for &n in &support {
        match groups.last_mut() {
            // zero run between last and n is n - last - 1
            Some((_, last)) if n - *last - 1 < r + 1 => *last = n,
            _ => groups.push((n, n)),
        }
    }

    let mut pieces = Vec::new();
    for (first, last) in groups {
        if first - w.lo() < r + 1 || w.hi() - last < r + 1 {
            continue;
        }
        if pieces.len() == max_pieces {
            break;
        }
        let values: Vec<Rational> = (first..=last).map(|n| x.eval(n)).collect();
        let piece = FiniteSolution::new(first, values)?;
        if !op.is_global_solution_finite(&piece) {
            return Err(Error::VerificationFailure { index: pieces.len() });
        }
        pieces.push(piece);
    }
    if pieces.is_empty() {
        Ok(SplitOutcome::NoCuts)
    } else {
        Ok(SplitOutcome::Pieces(pieces))
    }
}

/// Direction along which blocks are stacked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ray {
    /// Blocks move right, starting at `-budget`.
    Positive,
    /// Blocks move left, starting at `budget`.
    Negative,
}

/// Finite-support blocks `A_1, A_2, ...` in construction order together with
/// the gaps between consecutive ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLacunarySolution {
    /// Direction of construction.
    pub ray: Ray,
    /// Blocks in construction order (increasing support on the positive ray,
    /// decreasing on the negative one).
    pub blocks: Vec<FiniteSolution>,
    /// Distance between the facing support ends of consecutive blocks.
    pub gap_profile: Vec<i64>,
}

fn gap_between(ray: Ray, prev: &FiniteSolution, next: &FiniteSolution) -> i64 {
    match ray {
        Ray::Positive => next.min_support() - prev.max_support(),
        Ray::Negative => prev.min_support() - next.max_support(),
    }
}

impl PartialLacunarySolution {
    /// Hull of all block supports.
    pub fn covered_window(&self) -> Window {
        let lo = self.blocks.iter().map(FiniteSolution::min_support).min().unwrap_or(0);
        let hi = self.blocks.iter().map(FiniteSolution::max_support).max().unwrap_or(0);
        Window::new(lo, hi).expect("nonempty hull")
    }

    /// The sum of the blocks as a table over the covered window, zero
    /// outside.
    pub fn assemble(&self) -> SequenceSpec {
        let w = self.covered_window();
        let mut values = vec![Rational::zero(); w.len() as usize];
        for b in &self.blocks {
            for (i, v) in b.values().iter().enumerate() {
                let at = (b.anchor() - w.lo()) as usize + i;
                values[at] += v;
            }
        }
        SequenceSpec::FiniteTable(FiniteTable::new(w.lo(), values, Rational::zero()).expect("nonempty"))
    }

    /// Largest gap reached.
    pub fn max_gap(&self) -> Option<i64> {
        self.gap_profile.iter().copied().max()
    }

    /// Re-checks blocks, ordering, the gap profile (`gap[i] >= i + 2`) and the
    /// assembled sum against `op`.
    pub fn verify(&self, op: &OperatorSpec) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidParameter("no blocks"));
        }
        if self.gap_profile.len() + 1 != self.blocks.len() {
            return Err(Error::ArityMismatch { expected: self.blocks.len() - 1, found: self.gap_profile.len() });
        }
        for (index, b) in self.blocks.iter().enumerate() {
            if !op.is_global_solution_finite(b) {
                return Err(Error::VerificationFailure { index });
            }
        }
        for (i, pair) in self.blocks.windows(2).enumerate() {
            let gap = gap_between(self.ray, &pair[0], &pair[1]);
            if gap != self.gap_profile[i] || gap < i as i64 + 2 {
                return Err(Error::VerificationFailure { index: i + 1 });
            }
        }
        let r = op.order() as i64;
        let w = self.covered_window();
        op.windowed_residual_check(&self.assemble(), &Window::new(w.lo() - r, w.hi() + r)?)
    }
}

/// Result of [`build_lacunary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LacunaryOutcome {
    /// A prefix whose gap profile reached the target.
    Built(PartialLacunarySolution),
    /// Both rays exhausted within the budget.
    Inconclusive,
}

// First nonzero finite-support solution in windows growing from `start`
// along the ray, never leaving [-limit, limit].
fn find_block(op: &OperatorSpec, ray: Ray, start: i64, limit: i64) -> Result<Option<FiniteSolution>> {
    let mut len = op.order() as i64 + 1;
    loop {
        let w = match ray {
            Ray::Positive => Window::new(start, start.saturating_add(len - 1).min(limit))?,
            Ray::Negative => Window::new(start.saturating_sub(len - 1).max(-limit), start)?,
        };
        let kernel = finite_support_kernel(op, &w)?;
        let pick = match ray {
            Ray::Positive => kernel.solutions().iter().min_by_key(|s| (s.max_support(), s.min_support())),
            Ray::Negative => kernel.solutions().iter().max_by_key(|s| (s.min_support(), s.max_support())),
        };
        if let Some(s) = pick {
            return Ok(Some(s.clone()));
        }
        let exhausted = match ray {
            Ray::Positive => w.hi() == limit,
            Ray::Negative => w.lo() == -limit,
        };
        if exhausted {
            return Ok(None);
        }
        len = len.saturating_mul(2);
    }
}

fn build_on_ray(op: &OperatorSpec, ray: Ray, min_gap: i64, limit: i64) -> Result<Option<PartialLacunarySolution>> {
    let mut blocks: Vec<FiniteSolution> = Vec::new();
    let mut gaps: Vec<i64> = Vec::new();
    loop {
        let start = match blocks.last() {
            None => match ray {
                Ray::Positive => -limit,
                Ray::Negative => limit,
            },
            Some(prev) => {
                // gap[i] >= i + 2 and strictly above the previous gap
                let i = gaps.len() as i64;
                let target = (i + 2).max(gaps.last().map_or(0, |g| g + 1));
                match ray {
                    Ray::Positive => prev.max_support() + target,
                    Ray::Negative => prev.min_support() - target,
                }
            }
        };
        if start.abs() > limit {
            return Ok(None);
        }
        let Some(block) = find_block(op, ray, start, limit)? else { return Ok(None) };
        if let Some(prev) = blocks.last() {
            gaps.push(gap_between(ray, prev, &block));
        }
        blocks.push(block);
        if gaps.last().is_some_and(|&g| g >= min_gap) {
            return Ok(Some(PartialLacunarySolution { ray, blocks, gap_profile: gaps }));
        }
    }
}

/// Stacks finite-support blocks along the positive ray (then, failing that,
/// the negative ray) inside `[-budget, budget]` until some gap reaches
/// `min_gap`. Each new block is searched beyond the previous one at distance
/// at least `max(i + 2, previous gap + 1)`, so the gap profile is strictly
/// increasing with `gap[i] >= i + 2`.
pub fn build_lacunary(op: &OperatorSpec, min_gap: i64, budget: u64) -> Result<LacunaryOutcome> {
    if min_gap <= 0 || budget == 0 {
        return Err(Error::InvalidParameter("gap and budget must be positive"));
    }
    let limit = i64::try_from(budget).map_err(|_| Error::InvalidParameter("budget too large"))?;
    for ray in [Ray::Positive, Ray::Negative] {
        if let Some(partial) = build_on_ray(op, ray, min_gap, limit)? {
            partial.verify(op)?;
            return Ok(LacunaryOutcome::Built(partial));
        }
    }
    Ok(LacunaryOutcome::Inconclusive)
}
