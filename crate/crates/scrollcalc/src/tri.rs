//! Three-valued logic for predicates that may be undecidable from the
//! information held by a curve model.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TriState {
    True,
    False,
    Unknown,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::True
        } else {
            TriState::False
        }
    }

    pub fn is_true(self) -> bool {
        self == TriState::True
    }

    pub fn is_false(self) -> bool {
        self == TriState::False
    }

    pub fn is_unknown(self) -> bool {
        self == TriState::Unknown
    }

    pub fn and(self, other: TriState) -> TriState {
        use TriState::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }

    pub fn or(self, other: TriState) -> TriState {
        use TriState::*;
        match (self, other) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            _ => Unknown,
        }
    }

    pub fn not(self) -> TriState {
        match self {
            TriState::True => TriState::False,
            TriState::False => TriState::True,
            TriState::Unknown => TriState::Unknown,
        }
    }

    /// Conjunction over an iterator; short-circuits on the first `False`.
    pub fn all<I: IntoIterator<Item = TriState>>(it: I) -> TriState {
        let mut acc = TriState::True;
        for t in it {
            acc = acc.and(t);
            if acc.is_false() {
                break;
            }
        }
        acc
    }

    pub fn any<I: IntoIterator<Item = TriState>>(it: I) -> TriState {
        let mut acc = TriState::False;
        for t in it {
            acc = acc.or(t);
            if acc.is_true() {
                break;
            }
        }
        acc
    }

    /// Prefer a decided answer from `self`, fall back to `other`.
    pub fn or_else(self, other: impl FnOnce() -> TriState) -> TriState {
        if self.is_unknown() {
            other()
        } else {
            self
        }
    }
}

impl From<bool> for TriState {
    fn from(b: bool) -> Self {
        TriState::from_bool(b)
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TriState::True => "true",
            TriState::False => "false",
            TriState::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::TriState::{self, *};

    const ALL: [TriState; 3] = [True, False, Unknown];

    #[test]
    fn kleene_tables() {
        assert_eq!(True.and(Unknown), Unknown);
        assert_eq!(False.and(Unknown), False);
        assert_eq!(True.or(Unknown), True);
        assert_eq!(False.or(Unknown), Unknown);
        for a in ALL {
            assert_eq!(a.not().not(), a);
            for b in ALL {
                assert_eq!(a.and(b), b.and(a));
                assert_eq!(a.and(b).not(), a.not().or(b.not()));
            }
        }
    }

    #[test]
    fn folds() {
        assert_eq!(TriState::all([]), True);
        assert_eq!(TriState::any([]), False);
        assert_eq!(TriState::all([True, Unknown, False]), False);
        assert_eq!(TriState::any([False, Unknown]), Unknown);
    }
}
