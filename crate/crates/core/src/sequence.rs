//! Finitely described bi-infinite rational sequences and their supports.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::int;
use crate::{Error, Rational, Result};

/// Anything that can be evaluated at every integer index.
pub trait Sequence {
    /// Exact value at `n`.
    fn eval(&self, n: i64) -> Rational;
}

/// Inclusive integer interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    /// Fails with [`Error::InvalidWindow`] when `lo > hi`.
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    /// Lower end.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Upper end.
    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Number of points, `hi - lo + 1`.
    pub fn len(&self) -> u64 {
        (self.hi as i128 - self.lo as i128 + 1) as u64
    }

    /// Always false; a window holds at least one point.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether `n` lies in the window.
    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    /// Whether `other` lies inside `self`.
    pub fn contains_window(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Iterator over the indices of the window.
    pub fn indices(&self) -> core::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

/// Sorted support indices inside a window together with consecutive gaps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportProfile {
    /// Strictly increasing support indices.
    pub indices: Vec<i64>,
    /// `gaps[i] = indices[i + 1] - indices[i]`.
    pub gaps: Vec<i64>,
}

impl SupportProfile {
    /// Builds the profile from strictly increasing indices.
    pub fn from_indices(indices: Vec<i64>) -> Self {
        let gaps = indices.windows(2).map(|w| w[1] - w[0]).collect();
        SupportProfile { indices, gaps }
    }

    /// Largest gap, if there are at least two support points.
    pub fn max_gap(&self) -> Option<i64> {
        self.gaps.iter().copied().max()
    }
}

/// Polynomial in `n` with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Constant polynomial.
    pub fn constant(c: Rational) -> Self {
        Polynomial::new(alloc::vec![c])
    }

    /// Coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation at the integer `n`.
    pub fn eval(&self, n: i64) -> Rational {
        let x = BigInt::from(n);
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }
}

/// `values[i]` at `anchor + i`, `default` everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    anchor: i64,
    values: Vec<Rational>,
    default: Rational,
}

impl FiniteTable {
    /// `values` must be nonempty.
    pub fn new(anchor: i64, values: Vec<Rational>, default: Rational) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence("finite table needs at least one value"));
        }
        if anchor.checked_add(values.len() as i64 - 1).is_none() {
            return Err(Error::InvalidSequence("finite table overflows the index range"));
        }
        Ok(FiniteTable { anchor, values, default })
    }

    /// Index of `values[0]`.
    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// Tabulated values.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value outside the table.
    pub fn default_value(&self) -> &Rational {
        &self.default
    }

    /// Inclusive index range covered by the table.
    pub fn span(&self) -> Window {
        Window { lo: self.anchor, hi: self.anchor + self.values.len() as i64 - 1 }
    }

    fn eval(&self, n: i64) -> Rational {
        let i = n as i128 - self.anchor as i128;
        if i >= 0 && (i as usize) < self.values.len() {
            self.values[i as usize].clone()
        } else {
            self.default.clone()
        }
    }
}

/// `values[(n - offset) mod period]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Periodic {
    values: Vec<Rational>,
    offset: i64,
}

impl Periodic {
    /// The period is `values.len()`, which must be positive.
    pub fn new(values: Vec<Rational>, offset: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence("period must be positive"));
        }
        Ok(Periodic { values, offset })
    }

    /// Constant sequence.
    pub fn constant(c: Rational) -> Self {
        Periodic { values: alloc::vec![c], offset: 0 }
    }

    /// Period length.
    pub fn period(&self) -> u64 {
        self.values.len() as u64
    }

    /// One period of values starting at `offset`.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Index where `values[0]` sits.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    fn eval(&self, n: i64) -> Rational {
        let p = self.values.len() as i128;
        let i = (n as i128 - self.offset as i128).rem_euclid(p);
        self.values[i as usize].clone()
    }
}

/// `per_class[n mod modulus](n)`; an absent class means zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResiduePolynomial {
    modulus: u64,
    per_class: BTreeMap<u64, Polynomial>,
}

impl ResiduePolynomial {
    /// Every class key must be below `modulus`, which must be positive.
    pub fn new(modulus: u64, per_class: BTreeMap<u64, Polynomial>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidSequence("modulus must be positive"));
        }
        if per_class.keys().any(|&c| c >= modulus) {
            return Err(Error::InvalidSequence("residue class outside [0, modulus)"));
        }
        Ok(ResiduePolynomial { modulus, per_class })
    }

    /// Modulus of the residue pattern.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Polynomial attached to each present class.
    pub fn per_class(&self) -> &BTreeMap<u64, Polynomial> {
        &self.per_class
    }

    fn eval(&self, n: i64) -> Rational {
        let class = (n as i128).rem_euclid(self.modulus as i128) as u64;
        match self.per_class.get(&class) {
            Some(p) => p.eval(n),
            None => Rational::zero(),
        }
    }
}

/// `value` at `n = scale * 2^m + shift`, zero elsewhere.
///
/// By default `m` ranges over the non-negative integers. With
/// `allow_negative_m`, negative `m` is admitted as long as `scale * 2^m`
/// stays integral, i.e. `m >= -v2(scale)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricSupport {
    scale: u64,
    shift: i64,
    value: Rational,
    allow_negative_m: bool,
}

impl GeometricSupport {
    /// `scale` must be positive.
    pub fn new(scale: u64, shift: i64, value: Rational, allow_negative_m: bool) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidSequence("scale must be positive"));
        }
        Ok(GeometricSupport { scale, shift, value, allow_negative_m })
    }

    /// Scale factor in front of `2^m`.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// Additive shift.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Value taken on the support.
    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// Whether negative exponents are admitted.
    pub fn allow_negative_m(&self) -> bool {
        self.allow_negative_m
    }

    /// Smallest admissible exponent `m`.
    fn min_exponent(&self) -> i32 {
        if self.allow_negative_m {
            -(self.scale.trailing_zeros() as i32)
        } else {
            0
        }
    }

    fn on_support(&self, n: i64) -> bool {
        let d = n as i128 - self.shift as i128;
        if d <= 0 {
            return false;
        }
        // d = odd(scale) * 2^e with e >= v2(scale) + min_exponent
        let twos = self.scale.trailing_zeros();
        let odd = (self.scale >> twos) as i128;
        if d % odd != 0 {
            return false;
        }
        let q = d / odd;
        if q & (q - 1) != 0 {
            return false;
        }
        let e = q.trailing_zeros() as i32;
        e - twos as i32 >= self.min_exponent()
    }

    /// Support points inside `w`, in increasing order, enumerated from the
    /// closed form.
    pub fn support_in(&self, w: &Window) -> Vec<i64> {
        let twos = self.scale.trailing_zeros() as i32;
        let odd = (self.scale >> twos) as i128;
        let mut out = Vec::new();
        if self.value.is_zero() {
            return out;
        }
        let mut e = twos + self.min_exponent();
        while e < 127 {
            let Some(step) = odd.checked_mul(1i128 << e) else { break };
            let n = self.shift as i128 + step;
            if n > w.hi as i128 {
                break;
            }
            if n >= w.lo as i128 {
                out.push(n as i64);
            }
            e += 1;
        }
        out
    }

    fn eval(&self, n: i64) -> Rational {
        if self.on_support(n) {
            self.value.clone()
        } else {
            Rational::zero()
        }
    }
}

/// A bi-infinite rational sequence given by a finite description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSpec {
    /// Table with a default value outside it.
    FiniteTable(FiniteTable),
    /// Periodic values.
    Periodic(Periodic),
    /// Polynomial per residue class.
    ResiduePolynomial(ResiduePolynomial),
    /// Constant value on `scale * 2^m + shift`.
    GeometricSupport(GeometricSupport),
}

impl SequenceSpec {
    /// The constant sequence `c`.
    pub fn constant(c: Rational) -> Self {
        SequenceSpec::Periodic(Periodic::constant(c))
    }

    /// The zero sequence.
    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// Constant integer sequence, for tests and generators.
    pub fn constant_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    /// A period after which the sequence repeats, when it has one.
    pub fn natural_period(&self) -> Option<u64> {
        match self {
            SequenceSpec::Periodic(p) => Some(p.period()),
            SequenceSpec::ResiduePolynomial(r) => {
                // Only constant-per-class patterns are periodic.
                r.per_class.values().all(|p| p.coeffs.len() <= 1).then_some(r.modulus)
            }
            SequenceSpec::FiniteTable(_) | SequenceSpec::GeometricSupport(_) => None,
        }
    }

    /// Whether the sequence is zero at every integer.
    pub fn is_identically_zero(&self) -> bool {
        match self {
            SequenceSpec::FiniteTable(t) => t.default.is_zero() && t.values.iter().all(Zero::is_zero),
            SequenceSpec::Periodic(p) => p.values.iter().all(Zero::is_zero),
            SequenceSpec::ResiduePolynomial(r) => r.per_class.values().all(Polynomial::is_zero),
            SequenceSpec::GeometricSupport(g) => g.value.is_zero(),
        }
    }
}

impl Sequence for SequenceSpec {
    fn eval(&self, n: i64) -> Rational {
        match self {
            SequenceSpec::FiniteTable(t) => t.eval(n),
            SequenceSpec::Periodic(p) => p.eval(n),
            SequenceSpec::ResiduePolynomial(r) => r.eval(n),
            SequenceSpec::GeometricSupport(g) => g.eval(n),
        }
    }
}

/// Value of `spec` at `n`.
pub fn eval(spec: &SequenceSpec, n: i64) -> Rational {
    spec.eval(n)
}

/// Support of `spec` restricted to `w`.
pub fn support_in_window(spec: &SequenceSpec, w: &Window) -> SupportProfile {
    let indices = match spec {
        SequenceSpec::GeometricSupport(g) => g.support_in(w),
        SequenceSpec::FiniteTable(t) if t.default.is_zero() => {
            let span = t.span();
            let lo = span.lo.max(w.lo);
            let hi = span.hi.min(w.hi);
            if lo > hi {
                Vec::new()
            } else {
                (lo..=hi).filter(|&n| !t.eval(n).is_zero()).collect()
            }
        }
        _ => w.indices().filter(|&n| !spec.eval(n).is_zero()).collect(),
    };
    SupportProfile::from_indices(indices)
}

/// Finite witness of lacunarity: does the support on `w` contain two
/// consecutive points at distance at least `min_gap`?
pub fn lacunarity_witness(spec: &SequenceSpec, w: &Window, min_gap: i64) -> bool {
    support_in_window(spec, w).gaps.iter().any(|&g| g >= min_gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn geometric(scale: u64, shift: i64) -> SequenceSpec {
        SequenceSpec::GeometricSupport(GeometricSupport::new(scale, shift, int(1), false).unwrap())
    }

    #[test]
    fn window_rejects_reversed_bounds() {
        assert_eq!(Window::new(3, 2), Err(Error::InvalidWindow { lo: 3, hi: 2 }));
        assert_eq!(Window::new(-2, 5).unwrap().len(), 8);
    }

    #[test]
    fn eval_examples() {
        let p = SequenceSpec::Periodic(Periodic::new(ints(&[1, 0]), 0).unwrap());
        assert_eq!(p.eval(5), int(0));
        assert_eq!(p.eval(-4), int(1));

        let mut classes = BTreeMap::new();
        classes.insert(0, Polynomial::new(ints(&[0, 1])));
        let r = SequenceSpec::ResiduePolynomial(ResiduePolynomial::new(3, classes).unwrap());
        assert_eq!(r.eval(6), int(6));
        assert_eq!(r.eval(7), int(0));
        assert_eq!(r.eval(-3), int(-3));

        let g = geometric(3, 1);
        assert_eq!(g.eval(13), int(1));
        assert_eq!(g.eval(10), int(0));
        assert_eq!(g.eval(4), int(1));
        assert_eq!(g.eval(1), int(0));
    }

    #[test]
    fn finite_table_eval_and_default() {
        let t = SequenceSpec::FiniteTable(FiniteTable::new(-1, ints(&[4, 5]), int(9)).unwrap());
        assert_eq!(t.eval(-1), int(4));
        assert_eq!(t.eval(0), int(5));
        assert_eq!(t.eval(1), int(9));
        assert!(FiniteTable::new(0, vec![], int(0)).is_err());
    }

    #[test]
    fn constructors_validate() {
        assert!(Periodic::new(vec![], 0).is_err());
        assert!(ResiduePolynomial::new(0, BTreeMap::new()).is_err());
        let mut bad = BTreeMap::new();
        bad.insert(3, Polynomial::constant(int(1)));
        assert!(ResiduePolynomial::new(3, bad).is_err());
        assert!(GeometricSupport::new(0, 0, int(1), false).is_err());
    }

    #[test]
    fn support_examples() {
        let t = SequenceSpec::FiniteTable(FiniteTable::new(0, ints(&[1, 0, 2]), int(0)).unwrap());
        let prof = support_in_window(&t, &Window::new(-2, 5).unwrap());
        assert_eq!(prof.indices, vec![0, 2]);
        assert_eq!(prof.gaps, vec![2]);

        let prof = support_in_window(&geometric(3, 1), &Window::new(0, 100).unwrap());
        assert_eq!(prof.indices, vec![4, 7, 13, 25, 49, 97]);

        let p = SequenceSpec::Periodic(Periodic::new(ints(&[0, 1, 1]), 0).unwrap());
        assert_eq!(support_in_window(&p, &Window::new(0, 5).unwrap()).indices, vec![1, 2, 4, 5]);
    }

    #[test]
    fn negative_exponents_need_even_scale() {
        // scale 12 = 3 * 4 admits m = -1, -2: support starts at 3 + 1 = 4.
        let g = GeometricSupport::new(12, 1, int(1), true).unwrap();
        let w = Window::new(0, 60).unwrap();
        assert_eq!(g.support_in(&w), vec![4, 7, 13, 25, 49]);
        let strict = GeometricSupport::new(12, 1, int(1), false).unwrap();
        assert_eq!(strict.support_in(&w), vec![13, 25, 49]);
        // odd scale: negative m never integral, so the option changes nothing
        let odd = GeometricSupport::new(3, 1, int(1), true).unwrap();
        assert_eq!(odd.support_in(&w), vec![4, 7, 13, 25, 49]);
    }

    #[test]
    fn lacunarity_examples() {
        let g = geometric(3, 1);
        assert!(lacunarity_witness(&g, &Window::new(0, 1000).unwrap(), 40));
        let gaps = support_in_window(&g, &Window::new(0, 1000).unwrap()).gaps;
        assert_eq!(gaps, vec![3, 6, 12, 24, 48, 96, 192, 384]);

        let p = SequenceSpec::Periodic(Periodic::new(ints(&[1, 0]), 0).unwrap());
        assert!(!lacunarity_witness(&p, &Window::new(-50, 50).unwrap(), 3));

        let single = SequenceSpec::FiniteTable(FiniteTable::new(4, ints(&[7]), int(0)).unwrap());
        assert!(!lacunarity_witness(&single, &Window::new(0, 10).unwrap(), 1));
    }

    #[test]
    fn polynomial_trims_and_evaluates() {
        let p = Polynomial::new(ints(&[1, -2, 1, 0, 0]));
        assert_eq!(p.coeffs().len(), 3);
        assert_eq!(p.eval(5), int(16));
        assert!(Polynomial::new(ints(&[0])).is_zero());
    }

    #[test]
    fn identically_zero_detection() {
        assert!(SequenceSpec::zero().is_identically_zero());
        assert!(!SequenceSpec::constant_int(1).is_identically_zero());
        assert!(
            SequenceSpec::ResiduePolynomial(ResiduePolynomial::new(2, BTreeMap::new()).unwrap()).is_identically_zero()
        );
    }
}
