//! Half-integer arithmetic on doubled integers.
//!
//! Angular-momentum quantum numbers are half-integers. Storing `2j` as an
//! `i32` keeps comparisons and parity checks exact; floating point enters
//! only at the final `value()` conversion.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Half(i32);

impl Half {
    pub const ZERO: Half = Half(0);

    /// Build from a doubled value: `from_doubled(3)` is 3/2.
    pub const fn from_doubled(doubled: i32) -> Self {
        Half(doubled)
    }

    /// Build from a whole integer: `from_int(2)` is 2.
    pub const fn from_int(value: i32) -> Self {
        Half(2 * value)
    }

    pub const fn doubled(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// True when `self` and `other` are both integers or both half-odd.
    pub const fn same_parity(self, other: Half) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    pub const fn abs(self) -> Half {
        Half(self.0.abs())
    }

    /// Number of ladder states `2j + 1`; meaningful for j >= 0.
    pub fn multiplicity(self) -> usize {
        debug_assert!(self.0 >= 0);
        (self.0 + 1) as usize
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half(self.0 + rhs.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half(self.0 - rhs.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
