//! Exact integers with an inline `i64` fast path.
//!
//! Smith-normal-form pivots on boundary matrices stay tiny almost always, so
//! the representation keeps small values unboxed and spills to a heap
//! `BigInt` only on overflow. The invariant is that `Big` is used exactly
//! when the value does not fit in `i64`, so equality and hashing are
//! structural.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub fn zero() -> Self {
        Int::Small(0)
    }

    pub fn one() -> Self {
        Int::Small(1)
    }

    fn from_big(b: BigInt) -> Self {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_abs() {
                Some(a) => Int::Small(a),
                None => Int::from_big(BigInt::from(*v).abs()),
            },
            Int::Big(b) => Int::from_big(b.abs()),
        }
    }

    pub fn signum(&self) -> i64 {
        match self {
            Int::Small(v) => v.signum(),
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Compare absolute values.
    pub fn abs_cmp(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.unsigned_abs().cmp(&b.unsigned_abs()),
            _ => self.to_bigint().abs().cmp(&other.to_bigint().abs()),
        }
    }

    pub fn checked_neg(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }

    pub fn add(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => match a.checked_add(*b) {
                Some(c) => Int::Small(c),
                None => Int::from_big(BigInt::from(*a) + BigInt::from(*b)),
            },
            _ => Int::from_big(self.to_bigint() + other.to_bigint()),
        }
    }

    pub fn sub(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => match a.checked_sub(*b) {
                Some(c) => Int::Small(c),
                None => Int::from_big(BigInt::from(*a) - BigInt::from(*b)),
            },
            _ => Int::from_big(self.to_bigint() - other.to_bigint()),
        }
    }

    pub fn mul(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => match a.checked_mul(*b) {
                Some(c) => Int::Small(c),
                None => Int::from_big(BigInt::from(*a) * BigInt::from(*b)),
            },
            _ => Int::from_big(self.to_bigint() * other.to_bigint()),
        }
    }

    /// a - q*b fused, the inner loop of every elimination.
    pub fn sub_mul(&self, q: &Int, b: &Int) -> Int {
        match (self, q, b) {
            (Int::Small(a), Int::Small(q), Int::Small(b)) => {
                match q.checked_mul(*b).and_then(|p| a.checked_sub(p)) {
                    Some(c) => Int::Small(c),
                    None => Int::from_big(BigInt::from(*a) - BigInt::from(*q) * BigInt::from(*b)),
                }
            }
            _ => Int::from_big(self.to_bigint() - q.to_bigint() * b.to_bigint()),
        }
    }

    /// Floor division (quotient rounds toward negative infinity).
    pub fn div_floor(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *b != 0 && !(*a == i64::MIN && *b == -1) => {
                // div_euclid keeps the remainder nonnegative; floor division
                // wants the remainder to carry the divisor's sign.
                let q = a.div_euclid(*b);
                if a.rem_euclid(*b) != 0 && *b < 0 {
                    Int::Small(q - 1)
                } else {
                    Int::Small(q)
                }
            }
            _ => {
                use num_integer::Integer;
                Int::from_big(self.to_bigint().div_floor(&other.to_bigint()))
            }
        }
    }

    /// Exact division; panics if not divisible (internal use on checked paths).
    pub fn div_exact(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *b != 0 && !(*a == i64::MIN && *b == -1) => {
                debug_assert_eq!(a % b, 0, "div_exact: {a} not divisible by {b}");
                Int::Small(a / b)
            }
            _ => {
                let (q, r) = {
                    use num_integer::Integer;
                    self.to_bigint().div_rem(&other.to_bigint())
                };
                debug_assert!(r.is_zero());
                Int::from_big(q)
            }
        }
    }

    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => b % a == 0,
            _ => {
                use num_integer::Integer;
                other.to_bigint().mod_floor(&self.to_bigint()).is_zero()
            }
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => {
                let g = num_integer::gcd(a.unsigned_abs() as u128, b.unsigned_abs() as u128);
                if g <= i64::MAX as u128 {
                    Int::Small(g as i64)
                } else {
                    Int::from_big(BigInt::from(g))
                }
            }
            _ => {
                use num_integer::Integer;
                Int::from_big(self.to_bigint().gcd(&other.to_bigint()))
            }
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::from_big(BigInt::from(v)),
        }
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::ops::Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        self.checked_neg()
    }
}
