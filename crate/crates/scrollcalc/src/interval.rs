//! Closed integer intervals used for dimensions the model cannot pin down.
//!
//! Arithmetic is endpoint-wise. An interval with `lo == hi` is an exact value.

use crate::tri::TriState;
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub const fn exact(v: i64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn value(&self) -> Option<i64> {
        self.is_exact().then_some(self.lo)
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Intersection of two sound enclosures; `None` when they are disjoint.
    pub fn meet(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn clamp_min(self, floor: i64) -> Interval {
        Interval {
            lo: self.lo.max(floor),
            hi: self.hi.max(floor),
        }
    }

    pub fn max_with(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn eq_value(&self, v: i64) -> TriState {
        if self.is_exact() && self.lo == v {
            TriState::True
        } else if !self.contains(v) {
            TriState::False
        } else {
            TriState::Unknown
        }
    }

    pub fn gt(&self, v: i64) -> TriState {
        if self.lo > v {
            TriState::True
        } else if self.hi <= v {
            TriState::False
        } else {
            TriState::Unknown
        }
    }

    pub fn ge(&self, v: i64) -> TriState {
        self.gt(v - 1)
    }

    pub fn lt(&self, v: i64) -> TriState {
        self.ge(v).not()
    }

    pub fn le(&self, v: i64) -> TriState {
        self.gt(v).not()
    }

    pub fn sum<I: IntoIterator<Item = Interval>>(it: I) -> Interval {
        it.into_iter().fold(Interval::exact(0), |a, b| a + b)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Add<i64> for Interval {
    type Output = Interval;
    fn add(self, rhs: i64) -> Interval {
        Interval {
            lo: self.lo + rhs,
            hi: self.hi + rhs,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl Sub<i64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: i64) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl From<i64> for Interval {
    fn from(v: i64) -> Self {
        Interval::exact(v)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv() -> impl Strategy<Value = Interval> {
        (-20i64..20, 0i64..10).prop_map(|(lo, w)| Interval::new(lo, lo + w))
    }

    #[test]
    fn comparisons_straddle_to_unknown() {
        let i = Interval::new(1, 3);
        assert_eq!(i.gt(0), TriState::True);
        assert_eq!(i.gt(2), TriState::Unknown);
        assert_eq!(i.gt(3), TriState::False);
        assert_eq!(i.eq_value(2), TriState::Unknown);
        assert_eq!(Interval::exact(2).eq_value(2), TriState::True);
        assert_eq!(i.eq_value(7), TriState::False);
    }

    proptest! {
        #[test]
        fn add_sub_enclose_pointwise(a in iv(), b in iv(), s in 0.0f64..1.0, t in 0.0f64..1.0) {
            let x = a.lo + ((a.hi - a.lo) as f64 * s) as i64;
            let y = b.lo + ((b.hi - b.lo) as f64 * t) as i64;
            prop_assert!((a + b).contains(x + y));
            prop_assert!((a - b).contains(x - y));
            prop_assert!((-a).contains(-x));
        }

        #[test]
        fn meet_is_contained_in_both(a in iv(), b in iv()) {
            if let Some(m) = a.meet(&b) {
                prop_assert!(a.contains(m.lo) && a.contains(m.hi));
                prop_assert!(b.contains(m.lo) && b.contains(m.hi));
            } else {
                prop_assert!(a.hi < b.lo || b.hi < a.lo);
            }
        }
    }
}
