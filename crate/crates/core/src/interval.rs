//! Closed intervals with rational endpoints.

use std::fmt;

use serde::Serialize;

use crate::rational::Rational;

/// `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval with lo {lo} > hi {hi}");
        RationalInterval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        RationalInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    /// `[v - radius, v + radius]` with the lower end clamped at `floor`.
    pub fn around_clamped(v: &Rational, radius: &Rational, floor: &Rational) -> Self {
        let lo = v - radius;
        let lo = if &lo < floor { floor.clone() } else { lo };
        RationalInterval::new(lo, v + radius)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * Rational::new(1, 2)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn is_disjoint(&self, other: &RationalInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn add(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    /// Multiplication by a non-negative scalar.
    pub fn scale(&self, factor: &Rational) -> RationalInterval {
        assert!(!factor.is_negative(), "negative interval scale {factor}");
        RationalInterval::new(&self.lo * factor, &self.hi * factor)
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
