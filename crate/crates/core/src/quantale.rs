//! Bases of enrichment: commutative unital quantales.
//!
//! A quantale supplies the truth values that hom-objects and profunctors
//! take. Three instances ship here:
//!
//! * [`Cost`]: extended non-negative reals, tensor `+`, truth `0`, internal hom
//!   truncated subtraction, join `min`, meet `max`. The truth order is the
//!   reverse of the numeric order.
//! * [`Boolean`]: `{false, true}` with `and`, implication, `or`, `and`.
//! * [`Lukasiewicz`]: the unit interval with the Łukasiewicz t-norm.
//!
//! All operations are exact on the chosen representation. Tolerant
//! comparisons ([`Quantale::leq_within`], [`Quantale::eq_within`]) exist for
//! consumers that accumulate floating point error.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use thiserror::Error;

/// Rejected raw value when constructing a quantale element.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ValueError {
    #[error("value is NaN")]
    Nan,
    #[error("cost value {0} is negative")]
    Negative(f64),
    #[error("value {0} lies outside [0, 1]")]
    OutOfUnitRange(f64),
}

/// A commutative unital quantale with finite joins and meets.
///
/// `leq` is the truth order: `leq(a, b)` reads "a entails b", so [`unit`]
/// is the top element and [`bottom`] the least.
///
/// [`unit`]: Quantale::unit
/// [`bottom`]: Quantale::bottom
pub trait Quantale {
    type Value: Copy + PartialEq + fmt::Debug;

    const NAME: &'static str;

    /// Monoidal unit; also the truth value.
    fn unit() -> Self::Value;

    /// Least element: the empty join.
    fn bottom() -> Self::Value;

    fn tensor(a: Self::Value, b: Self::Value) -> Self::Value;

    /// Internal hom, right adjoint to `tensor(a, -)`.
    fn hom(a: Self::Value, b: Self::Value) -> Self::Value;

    fn leq(a: Self::Value, b: Self::Value) -> bool;

    /// Existential quantifier over a finite multiset. Empty input gives
    /// [`Quantale::bottom`].
    fn join<I: IntoIterator<Item = Self::Value>>(values: I) -> Self::Value;

    /// Universal quantifier over a finite multiset. Empty input gives
    /// [`Quantale::unit`] (the top).
    fn meet<I: IntoIterator<Item = Self::Value>>(values: I) -> Self::Value;

    fn is_true(v: Self::Value) -> bool {
        v == Self::unit()
    }

    /// `leq` relaxed by an absolute tolerance on real-valued instances.
    fn leq_within(a: Self::Value, b: Self::Value, _tol: f64) -> bool {
        Self::leq(a, b)
    }

    /// Equality relaxed by an absolute tolerance on real-valued instances.
    fn eq_within(a: Self::Value, b: Self::Value, _tol: f64) -> bool {
        a == b
    }
}

/// A distance in `[0, ∞]`. NaN and negative magnitudes are unrepresentable.
#[derive(Clone, Copy, PartialEq)]
pub struct CostValue(f64);

impl CostValue {
    pub const ZERO: CostValue = CostValue(0.0);
    pub const INFINITY: CostValue = CostValue(f64::INFINITY);

    pub fn new(magnitude: f64) -> Result<Self, ValueError> {
        if magnitude.is_nan() {
            Err(ValueError::Nan)
        } else if magnitude < 0.0 {
            Err(ValueError::Negative(magnitude))
        } else {
            // folds -0.0 into +0.0
            Ok(CostValue(magnitude + 0.0))
        }
    }

    /// Caller guarantees `magnitude` is non-negative and not NaN.
    pub(crate) fn from_raw(magnitude: f64) -> Self {
        debug_assert!(magnitude >= 0.0, "invalid cost {magnitude}");
        CostValue(magnitude)
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }
}

impl Eq for CostValue {}

impl Ord for CostValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for CostValue {
    type Output = CostValue;

    #[inline]
    fn add(self, rhs: CostValue) -> CostValue {
        CostValue(self.0 + rhs.0)
    }
}

impl fmt::Debug for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

impl TryFrom<f64> for CostValue {
    type Error = ValueError;

    fn try_from(v: f64) -> Result<Self, ValueError> {
        CostValue::new(v)
    }
}

/// Lawvere's quantale `([0, ∞], ≥, +, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Cost;

impl Cost {
    /// Truncated subtraction `b ∸ a`, with `∞ ∸ ∞ = 0`.
    #[inline]
    pub fn truncated_sub(b: CostValue, a: CostValue) -> CostValue {
        if a.is_infinite() {
            CostValue::ZERO
        } else if b.is_infinite() {
            CostValue::INFINITY
        } else if b.0 > a.0 {
            CostValue(b.0 - a.0)
        } else {
            CostValue::ZERO
        }
    }
}

impl Quantale for Cost {
    type Value = CostValue;

    const NAME: &'static str = "cost";

    #[inline]
    fn unit() -> CostValue {
        CostValue::ZERO
    }

    #[inline]
    fn bottom() -> CostValue {
        CostValue::INFINITY
    }

    #[inline]
    fn tensor(a: CostValue, b: CostValue) -> CostValue {
        a + b
    }

    #[inline]
    fn hom(a: CostValue, b: CostValue) -> CostValue {
        Cost::truncated_sub(b, a)
    }

    #[inline]
    fn leq(a: CostValue, b: CostValue) -> bool {
        a.0 >= b.0
    }

    fn join<I: IntoIterator<Item = CostValue>>(values: I) -> CostValue {
        values.into_iter().fold(CostValue::INFINITY, core::cmp::min)
    }

    fn meet<I: IntoIterator<Item = CostValue>>(values: I) -> CostValue {
        values.into_iter().fold(CostValue::ZERO, core::cmp::max)
    }

    fn leq_within(a: CostValue, b: CostValue, tol: f64) -> bool {
        a.is_infinite() || a.0 >= b.0 - tol
    }

    fn eq_within(a: CostValue, b: CostValue, tol: f64) -> bool {
        if a.is_infinite() || b.is_infinite() {
            a == b
        } else {
            libm::fabs(a.0 - b.0) <= tol
        }
    }
}

/// Two-valued logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Boolean;

impl Quantale for Boolean {
    type Value = bool;

    const NAME: &'static str = "bool";

    fn unit() -> bool {
        true
    }

    fn bottom() -> bool {
        false
    }

    fn tensor(a: bool, b: bool) -> bool {
        a && b
    }

    fn hom(a: bool, b: bool) -> bool {
        !a || b
    }

    fn leq(a: bool, b: bool) -> bool {
        !a || b
    }

    fn join<I: IntoIterator<Item = bool>>(values: I) -> bool {
        values.into_iter().any(|v| v)
    }

    fn meet<I: IntoIterator<Item = bool>>(values: I) -> bool {
        values.into_iter().all(|v| v)
    }
}

/// A truth degree in `[0, 1]`.
#[derive(Clone, Copy, PartialEq)]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const ONE: UnitValue = UnitValue(1.0);

    pub fn new(v: f64) -> Result<Self, ValueError> {
        if v.is_nan() {
            Err(ValueError::Nan)
        } else if !(0.0..=1.0).contains(&v) {
            Err(ValueError::OutOfUnitRange(v))
        } else {
            Ok(UnitValue(v + 0.0))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl Eq for UnitValue {}

impl Ord for UnitValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for UnitValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// The unit interval under the Łukasiewicz t-norm `max(0, a + b - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Lukasiewicz;

impl Quantale for Lukasiewicz {
    type Value = UnitValue;

    const NAME: &'static str = "lukasiewicz";

    fn unit() -> UnitValue {
        UnitValue::ONE
    }

    fn bottom() -> UnitValue {
        UnitValue::ZERO
    }

    fn tensor(a: UnitValue, b: UnitValue) -> UnitValue {
        // lo - (1 - hi) is exact when hi is the unit and symmetric in a, b
        let (lo, hi) = if a.0 <= b.0 { (a.0, b.0) } else { (b.0, a.0) };
        let s = lo - (1.0 - hi);
        if s > 0.0 {
            UnitValue(s)
        } else {
            UnitValue::ZERO
        }
    }

    fn hom(a: UnitValue, b: UnitValue) -> UnitValue {
        // a <= b first so that hom is exactly 1 whenever leq holds
        if a.0 <= b.0 {
            UnitValue::ONE
        } else {
            UnitValue(1.0 - a.0 + b.0)
        }
    }

    fn leq(a: UnitValue, b: UnitValue) -> bool {
        a.0 <= b.0
    }

    fn join<I: IntoIterator<Item = UnitValue>>(values: I) -> UnitValue {
        values.into_iter().fold(UnitValue::ZERO, core::cmp::max)
    }

    fn meet<I: IntoIterator<Item = UnitValue>>(values: I) -> UnitValue {
        values.into_iter().fold(UnitValue::ONE, core::cmp::min)
    }

    fn leq_within(a: UnitValue, b: UnitValue, tol: f64) -> bool {
        a.0 <= b.0 + tol
    }

    fn eq_within(a: UnitValue, b: UnitValue, tol: f64) -> bool {
        libm::fabs(a.0 - b.0) <= tol
    }
}
