//! Formal divisor classes on the base curve.
//!
//! A class is an integer combination of atoms: named points, opaque named
//! classes carrying their degree (the canonical class, a declared g¹₂, ...),
//! and residual summands about which only the degree and an effectivity flag
//! are known. Equality is structural; linear equivalence is only introduced
//! through aliases declared on the curve model.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Points whose name starts with this prefix are symbolic generic points:
/// mutually general and in general position with respect to every declared
/// class.
pub const GENERIC_PREFIX: char = '@';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Effectivity {
    Effective,
    NotEffective,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Atom {
    Point(String),
    /// An opaque class such as the canonical class or a declared g¹₂.
    Class { name: String, degree: i64 },
    /// An unnamed generic summand: a general element of Pic of its degree,
    /// or of the effective locus when flagged effective.
    Residual { name: String, degree: i64, eff: Effectivity },
}

impl Atom {
    pub fn point(name: impl Into<String>) -> Atom {
        Atom::Point(name.into())
    }

    pub fn residual(degree: i64, eff: Effectivity) -> Atom {
        let tag = match eff {
            Effectivity::Effective => "",
            Effectivity::NotEffective => ",ne",
            Effectivity::Unknown => ",?",
        };
        Atom::Residual {
            name: format!("res({degree}{tag})"),
            degree,
            eff,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Atom::Point(_) => 1,
            Atom::Class { degree, .. } | Atom::Residual { degree, .. } => *degree,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Atom::Point(n) => n,
            Atom::Class { name, .. } | Atom::Residual { name, .. } => name,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Atom::Point(_))
    }

    pub fn is_class(&self) -> bool {
        matches!(self, Atom::Class { .. })
    }

    pub fn is_generic_point(&self) -> bool {
        matches!(self, Atom::Point(n) if n.starts_with(GENERIC_PREFIX))
    }

    pub fn is_residual(&self) -> bool {
        matches!(self, Atom::Residual { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DivisorClass {
    terms: BTreeMap<Atom, i64>,
}

impl DivisorClass {
    pub fn zero() -> Self {
        DivisorClass::default()
    }

    pub fn atom(a: Atom) -> Self {
        Self::zero().with_term(a, 1)
    }

    pub fn point(name: impl Into<String>) -> Self {
        Self::atom(Atom::Point(name.into()))
    }

    pub fn generic_effective(degree: i64) -> Self {
        Self::atom(Atom::residual(degree, Effectivity::Effective))
    }

    pub fn generic_non_effective(degree: i64) -> Self {
        Self::atom(Atom::residual(degree, Effectivity::NotEffective))
    }

    pub fn with_term(mut self, a: Atom, coeff: i64) -> Self {
        let c = self.terms.entry(a.clone()).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&a);
        }
        self
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(a, c)| a.degree() * c).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, i64)> {
        self.terms.iter().map(|(a, c)| (a, *c))
    }

    pub fn coeff(&self, a: &Atom) -> i64 {
        self.terms.get(a).copied().unwrap_or(0)
    }

    pub fn point_coeff(&self, name: &str) -> i64 {
        self.coeff(&Atom::Point(name.to_string()))
    }

    /// Point part with its coefficients (named and generic points).
    pub fn named_coeffs(&self) -> BTreeMap<String, i64> {
        self.terms()
            .filter(|(a, _)| a.is_point())
            .map(|(a, c)| (a.name().to_string(), c))
            .collect()
    }

    /// Total degree carried by residual summands.
    pub fn residual_degree(&self) -> i64 {
        self.terms().filter(|(a, _)| a.is_residual()).map(|(a, c)| a.degree() * c).sum()
    }

    pub fn has_class_atoms(&self) -> bool {
        self.terms.keys().any(Atom::is_class)
    }

    pub fn has_generic_points(&self) -> bool {
        self.terms.keys().any(Atom::is_generic_point)
    }

    /// Effectivity read off the coefficients alone, for classes made only of
    /// points and residual summands.
    pub fn syntactic_effectivity(&self) -> Effectivity {
        let mut unknown = false;
        for (a, c) in self.terms() {
            if c < 0 {
                return Effectivity::NotEffective;
            }
            if let Atom::Residual { eff, .. } = a {
                match eff {
                    Effectivity::Effective => {}
                    Effectivity::NotEffective => return Effectivity::NotEffective,
                    Effectivity::Unknown => unknown = true,
                }
            }
        }
        if unknown {
            Effectivity::Unknown
        } else {
            Effectivity::Effective
        }
    }

    /// Splits off the symbolic generic points: `(rest, generic part)`.
    pub fn split_generic(&self) -> (DivisorClass, Vec<(Atom, i64)>) {
        let mut rest = self.clone();
        let mut gens = Vec::new();
        for (a, c) in self.terms() {
            if a.is_generic_point() {
                gens.push((a.clone(), c));
                rest.terms.remove(a);
            }
        }
        (rest, gens)
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        let mut out = DivisorClass::zero();
        if k == 0 {
            return out;
        }
        for (a, c) in self.terms() {
            out.terms.insert(a.clone(), c * k);
        }
        out
    }

    /// Replaces every occurrence of `a` by `replacement`.
    pub fn substitute(&self, a: &Atom, replacement: &DivisorClass) -> DivisorClass {
        let c = self.coeff(a);
        if c == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        out.terms.remove(a);
        &out + &replacement.scale(c)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        for (a, c) in rhs.terms() {
            out = out.with_term(a.clone(), c);
        }
        out
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self + &(-rhs)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (a, c)) in self.terms().enumerate() {
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            f.write_str(a.name())?;
        }
        Ok(())
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A parsed but unresolved term of a class expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Name(String),
    Residual(i64, Effectivity),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse class expression {input:?}: {msg}")]
pub struct ParseError {
    pub input: String,
    pub msg: String,
}

/// Parses `2P - Q + K + res(3)` style expressions into signed terms.
///
/// `res(n)` is an effective residual of degree n, `res(n,ne)` a
/// non-effective one and `res(n,?)` one of unknown effectivity.
pub fn parse_expression(input: &str) -> Result<Vec<(i64, Token)>, ParseError> {
    let err = |msg: &str| ParseError {
        input: input.to_string(),
        msg: msg.to_string(),
    };
    let s: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty expression"));
    }
    if s == ['0'] {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let mut sign = 1;
        if s[i] == '+' || s[i] == '-' {
            if s[i] == '-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(err("expected + or - between terms"));
        }
        let start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: i64 = if i > start {
            s[start..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| err("bad coefficient"))?
        } else {
            1
        };
        if s[i..].starts_with(&['r', 'e', 's', '(']) {
            let close = s[i..]
                .iter()
                .position(|&c| c == ')')
                .ok_or_else(|| err("unclosed res("))?
                + i;
            let inner: String = s[i + 4..close].iter().collect();
            let mut parts = inner.split(',');
            let deg: i64 = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| err("res() needs an integer degree"))?;
            let eff = match parts.next() {
                None => Effectivity::Effective,
                Some("ne") => Effectivity::NotEffective,
                Some("?") => Effectivity::Unknown,
                Some(_) => return Err(err("res() flag must be ne or ?")),
            };
            out.push((sign * coeff, Token::Residual(deg, eff)));
            i = close + 1;
            continue;
        }
        let name_start = i;
        while i < s.len() && (s[i].is_alphanumeric() || s[i] == '_' || s[i] == '\'' || s[i] == GENERIC_PREFIX) {
            i += 1;
        }
        if i == name_start {
            return Err(err("expected a name"));
        }
        let name: String = s[name_start..i].iter().collect();
        out.push((sign * coeff, Token::Name(name)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(deg: i64) -> Atom {
        Atom::Class {
            name: "K".into(),
            degree: deg,
        }
    }

    #[test]
    fn degree_is_additive() {
        let d = DivisorClass::point("P").with_term(k(2), 1) + DivisorClass::generic_effective(3);
        assert_eq!(d.degree(), 6);
        let e = &d - &DivisorClass::point("P");
        assert_eq!(e.degree(), 5);
        assert_eq!(e.point_coeff("P"), 0);
        assert_eq!(e.residual_degree(), 3);
    }

    #[test]
    fn syntactic_effectivity() {
        let b = DivisorClass::generic_effective(3);
        let p = DivisorClass::point("P");
        assert_eq!((&b + &p).syntactic_effectivity(), Effectivity::Effective);
        assert_eq!((&b - &p).syntactic_effectivity(), Effectivity::NotEffective);
        assert_eq!(DivisorClass::generic_non_effective(0).syntactic_effectivity(), Effectivity::NotEffective);
        assert_eq!(DivisorClass::zero().syntactic_effectivity(), Effectivity::Effective);
        // round trips through a residual summand are structural
        let e = DivisorClass::generic_non_effective(-1);
        assert_eq!(&(&b + &e) - &e, b);
    }

    #[test]
    fn substitute_rewrites_atom() {
        let q = Atom::point("Q");
        let d = DivisorClass::point("Q").scale(2) + DivisorClass::point("R");
        let rep = DivisorClass::atom(k(2)) - DivisorClass::point("P");
        let out = d.substitute(&q, &rep);
        assert_eq!(out.coeff(&k(2)), 2);
        assert_eq!(out.point_coeff("P"), -2);
        assert_eq!(out.degree(), d.degree());
    }

    #[test]
    fn parse_shapes() {
        let t = parse_expression("2P - Q + K + res(3) - res(1,ne)").unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t[0], (2, Token::Name("P".into())));
        assert_eq!(t[1], (-1, Token::Name("Q".into())));
        assert_eq!(t[3], (1, Token::Residual(3, Effectivity::Effective)));
        assert_eq!(t[4], (-1, Token::Residual(1, Effectivity::NotEffective)));
        assert_eq!(parse_expression("-@g").unwrap(), vec![(-1, Token::Name("@g".into()))]);
        assert_eq!(parse_expression("0").unwrap(), vec![]);
        assert!(parse_expression("P*Q").is_err());
        assert!(parse_expression("").is_err());
        assert!(parse_expression("res(x)").is_err());
    }

    #[test]
    fn display() {
        let d = DivisorClass::point("P").scale(2) - DivisorClass::point("Q");
        assert_eq!(d.to_string(), "2P - Q");
        assert_eq!((-d).to_string(), "-2P + Q");
        assert_eq!(DivisorClass::zero().to_string(), "0");
        assert_eq!(DivisorClass::generic_effective(3).to_string(), "res(3)");
    }

    fn small_class() -> impl Strategy<Value = DivisorClass> {
        (-3i64..4, -3i64..4, -3i64..4, -2i64..3).prop_map(|(p, q, r, s)| {
            DivisorClass::point("P").scale(p)
                + DivisorClass::point("Q").scale(q)
                + DivisorClass::zero().with_term(k(2), r)
                + DivisorClass::generic_effective(2).scale(s)
        })
    }

    proptest! {
        #[test]
        fn group_laws(a in small_class(), b in small_class(), c in small_class()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!((&a + &b).degree(), a.degree() + b.degree());
            prop_assert_eq!(a.scale(3).degree(), 3 * a.degree());
        }
    }
}
