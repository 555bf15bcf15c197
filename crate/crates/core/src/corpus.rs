//! Named operators with executable known facts, plus a seeded random family
//! of residue-pattern operators for property tests.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{build_lacunary, certify_dimension, split_lacunary, Certification, LacunaryOutcome, SplitOutcome};
use crate::linalg::{finite_support_kernel, free_kernel_dim, projection_dims};
use crate::operator::{residue_certificate, OperatorSpec, ResidueMask};
use crate::rational::int;
use crate::sequence::{GeometricSupport, Polynomial, ResiduePolynomial, SequenceSpec, Window};
use crate::{Error, Rational, Result};

/// `c_k(n) = values[k]` when `(r + 1) | (n + k)`, zero otherwise.
///
/// Every sequence vanishing on the multiples of `r + 1` solves this operator.
/// Values default to one and must be nonzero.
pub fn example1_operator(r: usize, values: Option<&[Rational]>) -> Result<OperatorSpec> {
    if r == 0 {
        return Err(Error::InvalidParameter("order must be positive"));
    }
    let m = r as u64 + 1;
    let ones = vec![int(1); r + 1];
    let values = values.unwrap_or(&ones);
    if values.len() != r + 1 {
        return Err(Error::ArityMismatch { expected: r + 1, found: values.len() });
    }
    if let Some(k) = values.iter().position(Zero::is_zero) {
        return Err(Error::ZeroValueRejected { k });
    }
    let coeffs = values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let class = (m - k as u64 % m) % m;
            let mut per_class = BTreeMap::new();
            per_class.insert(class, Polynomial::constant(v.clone()));
            ResiduePolynomial::new(m, per_class).map(SequenceSpec::ResiduePolynomial)
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorSpec::new(r, coeffs)
}

/// Masks `{n : n + k = 0 mod r + 1}` for the coefficients of
/// [`example1_operator`].
pub fn example1_coefficient_masks(r: usize) -> Vec<ResidueMask> {
    let m = r as u64 + 1;
    (0..=r as u64).map(|k| ResidueMask::new(m, [(m - k % m) % m]).expect("residue below modulus")).collect()
}

/// Nonzero residues modulo `r + 1`.
pub fn example1_solution_mask(r: usize) -> ResidueMask {
    let m = r as u64 + 1;
    ResidueMask::new(m, 1..m).expect("residues below modulus")
}

/// Indicator of `(r + 1) 2^m + 1`, `m >= 0`: a lacunary solution of
/// [`example1_operator`].
pub fn example1_lacunary(r: usize) -> SequenceSpec {
    SequenceSpec::GeometricSupport(GeometricSupport::new(r as u64 + 1, 1, int(1), false).expect("positive scale"))
}

/// `x(n + 2) - x(n + 1) - x(n) = 0`.
pub fn fibonacci_operator() -> OperatorSpec {
    let c = SequenceSpec::constant_int;
    OperatorSpec::new(2, vec![c(-1), c(-1), c(1)]).expect("three coefficients")
}

/// Order-`r` operator with all coefficients zero.
pub fn zero_operator(r: usize) -> OperatorSpec {
    OperatorSpec::new(r, vec![SequenceSpec::zero(); r + 1]).expect("r + 1 coefficients")
}

const SMALL_VALUES: [i64; 6] = [-3, -2, -1, 1, 2, 3];

/// Seeded operator whose coefficients are constants on random subsets of the
/// residue classes modulo `modulus`. Requires `1 <= r <= 6` and
/// `1 <= modulus <= 6`.
pub fn random_residue_operator(r: usize, modulus: u64, seed: u64) -> Result<OperatorSpec> {
    if !(1..=6).contains(&r) || !(1..=6).contains(&modulus) {
        return Err(Error::InvalidParameter("random operators need 1 <= r, modulus <= 6"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..=r)
        .map(|_| {
            let mut per_class = BTreeMap::new();
            for class in 0..modulus {
                if rng.gen_bool(0.5) {
                    let v = SMALL_VALUES[rng.gen_range(0..SMALL_VALUES.len())];
                    per_class.insert(class, Polynomial::constant(int(v)));
                }
            }
            ResiduePolynomial::new(modulus, per_class).map(SequenceSpec::ResiduePolynomial)
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorSpec::new(r, coeffs)
}

/// A claim about a corpus entry that can be re-checked by running the
/// library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnownFact {
    /// `finite_support_kernel(op, window)` has dimension `dim`.
    KernelDim {
        /// Window.
        window: Window,
        /// Expected dimension.
        dim: usize,
    },
    /// `free_kernel_dim(op, window) == dim`.
    FreeKernelDim {
        /// Window.
        window: Window,
        /// Expected nullity.
        dim: usize,
    },
    /// `projection_dims(op, ray_start, dims.len(), budget) == dims`.
    ProjectionDims {
        /// First coordinate of the ray.
        ray_start: i64,
        /// Window length.
        budget: usize,
        /// Expected dimensions for `i = 1..`.
        dims: Vec<usize>,
    },
    /// `certify_dimension(op, k, budget)` returns a certificate.
    Certifies {
        /// Lower bound.
        k: usize,
        /// Budget.
        budget: u64,
    },
    /// `certify_dimension(op, k, budget)` is inconclusive.
    CertifyInconclusive {
        /// Lower bound.
        k: usize,
        /// Budget.
        budget: u64,
    },
    /// Splitting the entry's sequence on `window` gives these supports.
    SplitSupports {
        /// Window.
        window: Window,
        /// Expected piece supports, leftmost first.
        supports: Vec<Vec<i64>>,
    },
    /// The residue masks certify the entry's sequence (or every sequence
    /// respecting the solution mask when the entry has none).
    ResidueCertified {
        /// One mask per coefficient.
        coeff_masks: Vec<ResidueMask>,
        /// Mask of the solution.
        solution_mask: ResidueMask,
    },
    /// `build_lacunary(op, gap, budget)` succeeds.
    BuildsLacunary {
        /// Target gap.
        gap: i64,
        /// Budget.
        budget: u64,
    },
}

/// A named operator, optionally with a distinguished solution, and facts
/// about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    /// Lookup name.
    pub name: String,
    /// The operator.
    pub operator: OperatorSpec,
    /// A solution the facts may refer to.
    pub sequence: Option<SequenceSpec>,
    /// Executable claims.
    pub known_facts: Vec<KnownFact>,
}

impl KnownFact {
    /// Runs the claim against `entry`; `Ok(false)` means the library
    /// disagrees with the recorded fact.
    pub fn check(&self, entry: &CorpusEntry) -> Result<bool> {
        let op = &entry.operator;
        Ok(match self {
            KnownFact::KernelDim { window, dim } => finite_support_kernel(op, window)?.dim() == *dim,
            KnownFact::FreeKernelDim { window, dim } => free_kernel_dim(op, window)? == *dim,
            KnownFact::ProjectionDims { ray_start, budget, dims } => {
                projection_dims(op, *ray_start, dims.len(), *budget)? == *dims
            }
            KnownFact::Certifies { k, budget } => match certify_dimension(op, *k, *budget)? {
                Certification::Certified(cert) => cert.verify(op).is_ok(),
                Certification::Inconclusive { .. } => false,
            },
            KnownFact::CertifyInconclusive { k, budget } => {
                matches!(certify_dimension(op, *k, *budget)?, Certification::Inconclusive { .. })
            }
            KnownFact::SplitSupports { window, supports } => {
                let Some(x) = &entry.sequence else { return Ok(false) };
                match split_lacunary(op, x, window, usize::MAX)? {
                    SplitOutcome::Pieces(p) => p.iter().map(|s| s.support()).collect::<Vec<_>>() == *supports,
                    SplitOutcome::NoCuts => supports.is_empty(),
                }
            }
            KnownFact::ResidueCertified { coeff_masks, solution_mask } => {
                residue_certificate(op, coeff_masks, solution_mask, entry.sequence.as_ref())?.is_certified()
            }
            KnownFact::BuildsLacunary { gap, budget } => match build_lacunary(op, *gap, *budget)? {
                LacunaryOutcome::Built(p) => p.verify(op).is_ok(),
                LacunaryOutcome::Inconclusive => false,
            },
        })
    }
}

impl CorpusEntry {
    /// Indices of facts that do not hold.
    pub fn failing_facts(&self) -> Result<Vec<usize>> {
        let mut bad = Vec::new();
        for (i, fact) in self.known_facts.iter().enumerate() {
            if !fact.check(self)? {
                bad.push(i);
            }
        }
        Ok(bad)
    }
}

fn window(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).expect("lo <= hi")
}

fn example1_entry(r: usize) -> CorpusEntry {
    let m = r as i64 + 1;
    let mut facts: Vec<KnownFact> = [8, 50, 100]
        .into_iter()
        .map(|n| KnownFact::KernelDim { window: window(0, n), dim: (n + 1 - (n / m + 1)) as usize })
        .collect();
    facts.push(KnownFact::Certifies { k: 10, budget: 100 });
    facts.push(KnownFact::ResidueCertified {
        coeff_masks: example1_coefficient_masks(r),
        solution_mask: ResidueMask::new(m as u64, [1]).expect("1 < modulus"),
    });
    let pieces: &[&[i64]] = match r {
        1 => &[&[3, 5], &[9], &[17], &[33], &[65], &[129], &[257], &[513]],
        2 => &[&[4, 7], &[13], &[25], &[49], &[97], &[193], &[385], &[769]],
        3 => &[&[5, 9], &[17], &[33], &[65], &[129], &[257], &[513]],
        _ => &[],
    };
    if !pieces.is_empty() {
        facts.push(KnownFact::SplitSupports {
            window: window(0, 1000),
            supports: pieces.iter().map(|p| p.to_vec()).collect(),
        });
    }
    if r == 2 {
        facts.push(KnownFact::FreeKernelDim { window: window(0, 8), dim: 6 });
        facts.push(KnownFact::ProjectionDims { ray_start: 1, budget: 30, dims: vec![1, 2, 2] });
        facts.push(KnownFact::BuildsLacunary { gap: 20, budget: 200 });
    }
    CorpusEntry {
        name: format!("example1_r{r}"),
        operator: example1_operator(r, None).expect("r >= 1"),
        sequence: Some(example1_lacunary(r)),
        known_facts: facts,
    }
}

/// Every corpus entry, in a fixed order.
pub fn entries() -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = (1..=3).map(example1_entry).collect();
    out.push(CorpusEntry {
        name: "fibonacci".into(),
        operator: fibonacci_operator(),
        sequence: None,
        known_facts: vec![
            KnownFact::KernelDim { window: window(0, 199), dim: 0 },
            KnownFact::KernelDim { window: window(-100, 99), dim: 0 },
            KnownFact::FreeKernelDim { window: window(0, 10), dim: 2 },
            KnownFact::ProjectionDims { ray_start: 0, budget: 50, dims: vec![0, 0, 0] },
            KnownFact::CertifyInconclusive { k: 1, budget: 200 },
        ],
    });
    out.push(CorpusEntry {
        name: "zero_r1".into(),
        operator: zero_operator(1),
        sequence: None,
        known_facts: vec![
            KnownFact::KernelDim { window: window(0, 4), dim: 5 },
            KnownFact::FreeKernelDim { window: window(0, 4), dim: 5 },
            KnownFact::ProjectionDims { ray_start: 0, budget: 10, dims: vec![1, 2, 3, 4] },
            KnownFact::Certifies { k: 7, budget: 8 },
            KnownFact::BuildsLacunary { gap: 5, budget: 50 },
        ],
    });
    out
}

/// Entry by name.
pub fn entry(name: &str) -> Option<CorpusEntry> {
    entries().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{support_in_window, Sequence};

    #[test]
    fn example1_shape() {
        let op = example1_operator(2, None).unwrap();
        assert_eq!(op.order(), 2);
        // c_k(n) != 0 exactly when 3 | n + k, checked on a full period
        for k in 0..=2 {
            for n in -3..3i64 {
                assert_eq!(!op.coeff(k).eval(n).is_zero(), (n + k as i64).rem_euclid(3) == 0);
            }
        }
        let vals = [int(2), int(-1), Rational::new(1.into(), 2.into())];
        let op = example1_operator(2, Some(&vals)).unwrap();
        assert_eq!(op.coeff(2).eval(1), vals[2]);
        assert_eq!(op.coeff(0).eval(3), int(2));
    }

    #[test]
    fn example1_r1_forces_even_indices() {
        let op = example1_operator(1, None).unwrap();
        // row n touches x(n) or x(n + 1), whichever is even
        for n in -4..4i64 {
            let even = if n % 2 == 0 { 0 } else { 1 };
            assert!(!op.coeff(even).eval(n).is_zero());
            assert!(op.coeff(1 - even).eval(n).is_zero());
        }
    }

    #[test]
    fn zero_values_rejected() {
        let vals = [int(0), int(1), int(1)];
        assert_eq!(example1_operator(2, Some(&vals)), Err(Error::ZeroValueRejected { k: 0 }));
        assert!(example1_operator(0, None).is_err());
        assert!(example1_operator(2, Some(&vals[..2])).is_err());
    }

    #[test]
    fn lacunary_supports() {
        let w = window(0, 40);
        assert_eq!(support_in_window(&example1_lacunary(2), &w).indices, vec![4, 7, 13, 25]);
        assert_eq!(support_in_window(&example1_lacunary(1), &w).indices, vec![3, 5, 9, 17, 33]);
    }

    #[test]
    fn random_operators_are_deterministic() {
        let a = random_residue_operator(2, 3, 0).unwrap();
        assert_eq!(a, random_residue_operator(2, 3, 0).unwrap());
        assert_ne!(a, random_residue_operator(2, 3, 1).unwrap());
        assert!(random_residue_operator(7, 3, 0).is_err());
        assert!(random_residue_operator(2, 7, 0).is_err());
        assert!(random_residue_operator(0, 3, 0).is_err());
    }

    #[test]
    fn corpus_facts_hold() {
        for e in entries() {
            assert_eq!(e.failing_facts().unwrap(), Vec::<usize>::new(), "{}", e.name);
        }
        assert!(entry("fibonacci").is_some());
        assert!(entry("nope").is_none());
    }

    #[test]
    fn wrong_fact_is_reported() {
        let mut e = entry("zero_r1").unwrap();
        e.known_facts = vec![KnownFact::KernelDim { window: window(0, 4), dim: 4 }];
        assert_eq!(e.failing_facts().unwrap(), vec![0]);
    }
}
