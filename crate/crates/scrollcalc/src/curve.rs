//! The base curve: genus, named points, declared classes and aliases, and an
//! h⁰/h¹ oracle that answers exactly when the declared data or the genericity
//! rules force a value and with an interval otherwise.

use crate::divisor::{parse_expression, Atom, DivisorClass, Effectivity, ParseError, Token, GENERIC_PREFIX};
use crate::interval::Interval;
use crate::tri::TriState;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub const CANONICAL: &str = "K";

/// The two symbolic generic points used when quantifying over all points.
pub const GENERIC_POINT: &str = "@g";
pub const GENERIC_POINT_2: &str = "@h";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("h0({class}) is tabulated as {tabulated} but Riemann-Roch forces {forced}")]
    InconsistentTable { class: String, tabulated: i64, forced: i64 },
    #[error("the declared data give contradictory bounds for h0({class})")]
    ContradictoryBounds { class: String },
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("name {0:?} is declared twice")]
    DuplicateName(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("alias {lhs} ~ {rhs} relates classes of different degree")]
    AliasDegree { lhs: String, rhs: String },
    #[error("alias relation {0} has no point or declared class with coefficient ±1 to eliminate")]
    AliasUnsupported(String),
    #[error("genus must be nonnegative")]
    NegativeGenus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuantifierDomain {
    Named,
    NamedAndGeneric,
}

impl QuantifierDomain {
    pub fn label(self) -> &'static str {
        match self {
            QuantifierDomain::Named => "named",
            QuantifierDomain::NamedAndGeneric => "named+generic",
        }
    }
}

/// How an h⁰ value was obtained; carried into reports next to interval answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum H0Source {
    Tabulated,
    DegreeForced,
    GenericEffective,
    GenericNonEffective,
    GenericUnknownEffectivity,
    GenericPointShift,
    Duality,
    TabulatedShift,
    CliffordBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct H0 {
    pub value: Interval,
    pub source: H0Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    NegativeDegree,
    RiemannRoch,
    PointDrop,
    Clifford,
    Effectivity,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::NegativeDegree => "negative degree",
            ViolationKind::RiemannRoch => "Riemann–Roch",
            ViolationKind::PointDrop => "point drop",
            ViolationKind::Clifford => "Clifford",
            ViolationKind::Effectivity => "effectivity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub class: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CurveModel {
    genus: i64,
    points: Vec<String>,
    symbols: BTreeMap<String, i64>,
    named: BTreeMap<String, DivisorClass>,
    /// Alias rewrites `pivot -> replacement`; replacements never contain pivots.
    rules: Vec<(Atom, DivisorClass)>,
    /// Tabulated h⁰ values keyed by normalized class.
    table: BTreeMap<DivisorClass, i64>,
    effective: BTreeMap<DivisorClass, bool>,
    /// Points and residuals tied to other atoms by a declaration, so that the
    /// genericity rules no longer apply to classes containing them.
    constrained: BTreeSet<Atom>,
}

#[derive(Debug, Clone)]
pub struct CurveModelBuilder {
    model: CurveModel,
    pending_table: Vec<(DivisorClass, i64)>,
    pending_eff: Vec<(DivisorClass, bool)>,
    pending_alias: Vec<(DivisorClass, DivisorClass)>,
}

impl CurveModelBuilder {
    pub fn point(mut self, name: &str) -> Result<Self, CurveError> {
        self.model.check_fresh(name)?;
        self.model.points.push(name.to_string());
        Ok(self)
    }

    pub fn points(mut self, names: &[&str]) -> Result<Self, CurveError> {
        for n in names {
            self = self.point(n)?;
        }
        Ok(self)
    }

    /// Declares an opaque class of the given degree (e.g. a g¹₂).
    pub fn symbol(mut self, name: &str, degree: i64) -> Result<Self, CurveError> {
        self.model.check_fresh(name)?;
        self.model.symbols.insert(name.to_string(), degree);
        Ok(self)
    }

    /// Names a composite class; later expressions may refer to it.
    pub fn class(mut self, name: &str, class: DivisorClass) -> Result<Self, CurveError> {
        self.model.check_fresh(name)?;
        self.model.named.insert(name.to_string(), class);
        Ok(self)
    }

    pub fn class_expr(self, name: &str, expr: &str) -> Result<Self, CurveError> {
        let c = self.model.parse(expr)?;
        self.class(name, c)
    }

    pub fn tabulate(mut self, class: DivisorClass, h0: i64) -> Self {
        self.pending_table.push((class, h0));
        self
    }

    pub fn tabulate_expr(self, expr: &str, h0: i64) -> Result<Self, CurveError> {
        let c = self.model.parse(expr)?;
        Ok(self.tabulate(c, h0))
    }

    pub fn declare_effective(mut self, class: DivisorClass, effective: bool) -> Self {
        self.pending_eff.push((class, effective));
        self
    }

    pub fn alias(mut self, lhs: DivisorClass, rhs: DivisorClass) -> Self {
        self.pending_alias.push((lhs, rhs));
        self
    }

    pub fn alias_expr(self, lhs: &str, rhs: &str) -> Result<Self, CurveError> {
        let l = self.model.parse(lhs)?;
        let r = self.model.parse(rhs)?;
        Ok(self.alias(l, r))
    }

    /// Resolves an expression against the names declared so far.
    pub fn parse(&self, expr: &str) -> Result<DivisorClass, CurveError> {
        self.model.parse(expr)
    }

    pub fn build(self) -> Result<CurveModel, CurveError> {
        let mut m = self.model;
        for (lhs, rhs) in self.pending_alias {
            m.add_relation(&lhs, &rhs)?;
        }
        for (_, rep) in &m.rules {
            if !rep.has_class_atoms() {
                m.constrained.extend(rep.terms().map(|(a, _)| a.clone()));
            }
        }
        let g = m.genus;
        m.table.insert(DivisorClass::zero(), 1);
        m.table.insert(m.normalize(&m.canonical()), g);
        for (c, h) in self.pending_table {
            let n = m.normalize(&c);
            m.table.insert(n, h);
        }
        for (c, e) in self.pending_eff {
            let n = m.normalize(&c);
            m.effective.insert(n, e);
        }
        // point-only entries whose value departs from the generic rule tie their
        // points together
        let mut tied = Vec::new();
        for (c, &h) in &m.table {
            if !c.has_class_atoms() && !c.is_zero() {
                let generic = m.plain_generic(c).0;
                if generic.value() != Some(h) {
                    tied.extend(c.terms().map(|(a, _)| a.clone()));
                }
            }
        }
        m.constrained.extend(tied);
        Ok(m)
    }
}

impl CurveModel {
    pub fn builder(genus: i64) -> Result<CurveModelBuilder, CurveError> {
        if genus < 0 {
            return Err(CurveError::NegativeGenus);
        }
        Ok(CurveModelBuilder {
            model: CurveModel {
                genus,
                points: Vec::new(),
                symbols: BTreeMap::new(),
                named: BTreeMap::new(),
                rules: Vec::new(),
                table: BTreeMap::new(),
                effective: BTreeMap::new(),
                constrained: BTreeSet::new(),
            },
            pending_table: Vec::new(),
            pending_eff: Vec::new(),
            pending_alias: Vec::new(),
        })
    }

    /// A curve of genus g with the given named points and nothing else declared.
    pub fn generic(genus: i64, points: &[&str]) -> Result<CurveModel, CurveError> {
        Self::builder(genus)?.points(points)?.build()
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn canonical_degree(&self) -> i64 {
        2 * self.genus - 2
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::atom(Atom::Class {
            name: CANONICAL.to_string(),
            degree: self.canonical_degree(),
        })
    }

    pub fn named_class(&self, name: &str) -> Option<&DivisorClass> {
        self.named.get(name)
    }

    pub fn named_classes(&self) -> impl Iterator<Item = (&String, &DivisorClass)> {
        self.named.iter()
    }

    pub fn table(&self) -> impl Iterator<Item = (&DivisorClass, i64)> {
        self.table.iter().map(|(c, h)| (c, *h))
    }

    pub fn is_point(&self, name: &str) -> bool {
        name.starts_with(GENERIC_PREFIX) || self.points.iter().any(|p| p == name)
    }

    fn check_fresh(&self, name: &str) -> Result<(), CurveError> {
        if name == CANONICAL
            || name.starts_with(GENERIC_PREFIX)
            || self.points.iter().any(|p| p == name)
            || self.symbols.contains_key(name)
            || self.named.contains_key(name)
        {
            return Err(CurveError::DuplicateName(name.to_string()));
        }
        Ok(())
    }

    fn resolve(&self, name: &str) -> Result<DivisorClass, CurveError> {
        if name == CANONICAL {
            return Ok(self.canonical());
        }
        if self.is_point(name) {
            return Ok(DivisorClass::point(name));
        }
        if let Some(&degree) = self.symbols.get(name) {
            return Ok(DivisorClass::atom(Atom::Class {
                name: name.to_string(),
                degree,
            }));
        }
        self.named
            .get(name)
            .cloned()
            .ok_or_else(|| CurveError::UnknownName(name.to_string()))
    }

    /// Parses a class expression such as `K + R1 - 2P + res(3)`.
    pub fn parse(&self, expr: &str) -> Result<DivisorClass, CurveError> {
        let mut out = DivisorClass::zero();
        for (c, tok) in parse_expression(expr)? {
            let piece = match tok {
                Token::Name(n) => self.resolve(&n)?,
                Token::Residual(d, e) => DivisorClass::atom(Atom::residual(d, e)),
            };
            out = &out + &piece.scale(c);
        }
        Ok(out)
    }

    fn add_relation(&mut self, lhs: &DivisorClass, rhs: &DivisorClass) -> Result<(), CurveError> {
        if lhs.degree() != rhs.degree() {
            return Err(CurveError::AliasDegree {
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        let rel = self.normalize(&(lhs - rhs));
        if rel.is_zero() {
            return Ok(());
        }
        let unit = |a: &Atom, c: i64| c.abs() == 1 && !a.is_generic_point() && !a.is_residual();
        let pivot = rel
            .terms()
            .filter(|(a, c)| a.is_point() && unit(a, *c))
            .last()
            .or_else(|| rel.terms().filter(|(a, c)| a.is_class() && unit(a, *c)).last())
            .map(|(a, c)| (a.clone(), c))
            .ok_or_else(|| CurveError::AliasUnsupported(rel.to_string()))?;
        let (atom, c) = pivot;
        // rel = c·atom + rest ∼ 0, so atom ∼ −c·rest
        let rest = rel.substitute(&atom, &DivisorClass::zero());
        let replacement = rest.scale(-c);
        for (_, rep) in self.rules.iter_mut() {
            *rep = rep.substitute(&atom, &replacement);
        }
        self.rules.push((atom, replacement));
        Ok(())
    }

    /// Rewrites a class with the declared aliases.
    pub fn normalize(&self, d: &DivisorClass) -> DivisorClass {
        let mut out = d.clone();
        for (a, rep) in &self.rules {
            out = out.substitute(a, rep);
        }
        out
    }

    /// Structural equality after alias rewriting.
    pub fn equivalent(&self, a: &DivisorClass, b: &DivisorClass) -> bool {
        self.normalize(a) == self.normalize(b)
    }

    fn is_plain(&self, d: &DivisorClass) -> bool {
        !d.has_class_atoms() && d.terms().all(|(a, _)| !self.constrained.contains(a))
    }

    fn forced(&self, deg: i64) -> Option<i64> {
        if deg < 0 {
            Some(0)
        } else if deg > self.canonical_degree() {
            Some(deg - self.genus + 1)
        } else {
            None
        }
    }

    /// Largest h⁰ any class of degree n can have on a curve of this genus.
    pub fn max_h0_of_degree(&self, n: i64) -> i64 {
        let g = self.genus;
        match self.forced(n) {
            Some(v) => v,
            None => (n / 2 + 1).max(n - g + 1),
        }
    }

    /// The genericity rules for classes built from unconstrained points and
    /// residual summands only.
    fn plain_generic(&self, d: &DivisorClass) -> (Interval, H0Source) {
        let g = self.genus;
        let a = d.degree();
        if let Some(v) = self.forced(a) {
            return (Interval::exact(v), H0Source::DegreeForced);
        }
        let effective = if a >= g { a - g + 1 } else { 1 };
        let non_effective = (a - g + 1).max(0);
        match d.syntactic_effectivity() {
            Effectivity::Effective => (Interval::exact(effective), H0Source::GenericEffective),
            Effectivity::NotEffective => (Interval::exact(non_effective), H0Source::GenericNonEffective),
            Effectivity::Unknown => (
                Interval::new(non_effective, effective),
                H0Source::GenericUnknownEffectivity,
            ),
        }
    }

    pub fn h0(&self, d: &DivisorClass) -> Result<Interval, CurveError> {
        Ok(self.h0_detail(d)?.value)
    }

    pub fn h0_detail(&self, d: &DivisorClass) -> Result<H0, CurveError> {
        self.eval(&self.normalize(d), true)
    }

    fn eval(&self, d: &DivisorClass, allow_duality: bool) -> Result<H0, CurveError> {
        let g = self.genus;
        let deg = d.degree();
        let forced = self.forced(deg);
        if let Some(&t) = self.table.get(d) {
            if let Some(f) = forced {
                if f != t {
                    return Err(CurveError::InconsistentTable {
                        class: d.to_string(),
                        tabulated: t,
                        forced: f,
                    });
                }
            }
            return Ok(H0 {
                value: Interval::exact(t),
                source: H0Source::Tabulated,
            });
        }
        if let Some(f) = forced {
            return Ok(H0 {
                value: Interval::exact(f),
                source: H0Source::DegreeForced,
            });
        }
        // from here on g ≥ 1 and 0 ≤ deg ≤ 2g−2
        let contradiction = || CurveError::ContradictoryBounds { class: d.to_string() };
        let mut best = H0 {
            value: Interval::new((deg - g + 1).max(0), deg / 2 + 1),
            source: H0Source::CliffordBounds,
        };
        let refine = |best: &mut H0, v: Interval, src: H0Source| -> Result<(), CurveError> {
            let m = best.value.meet(&v).ok_or_else(contradiction)?;
            if m != best.value {
                best.value = m;
                best.source = src;
            }
            Ok(())
        };
        if let Some(&e) = self.effective.get(d) {
            let v = if e {
                Interval::new(1, best.value.hi.max(1))
            } else {
                Interval::exact(0)
            };
            refine(&mut best, v, H0Source::Tabulated)?;
        }
        if self.is_plain(d) {
            let (v, src) = self.plain_generic(d);
            refine(&mut best, v, src)?;
            return Ok(best);
        }
        if d.has_generic_points() {
            let v = self.generic_point_shift(d)?;
            refine(&mut best, v, H0Source::GenericPointShift)?;
        }
        if allow_duality {
            let dual = self.normalize(&(&self.canonical() - d));
            let hd = self.eval(&dual, false)?;
            if hd.source != H0Source::CliffordBounds {
                refine(&mut best, hd.value + (deg - g + 1), H0Source::Duality)?;
            }
        }
        for (t, &h) in &self.table {
            let diff = d - t;
            if diff.is_zero() || !diff.terms().all(|(a, _)| a.is_point() && !a.is_generic_point()) {
                continue;
            }
            let k: i64 = diff.terms().map(|(_, c)| c.abs()).sum();
            if diff.terms().all(|(_, c)| c < 0) {
                refine(&mut best, Interval::new((h - k).max(0), h), H0Source::TabulatedShift)?;
            } else if diff.terms().all(|(_, c)| c > 0) {
                refine(&mut best, Interval::new(h, h + k), H0Source::TabulatedShift)?;
            }
        }
        Ok(best)
    }

    /// h⁰ of T + Σ c_i G_i with G_i symbolic generic points, from h⁰ of T.
    fn generic_point_shift(&self, d: &DivisorClass) -> Result<Interval, CurveError> {
        let (rest, gens) = d.split_generic();
        let mut h = self.eval(&rest, true)?.value;
        let mut deg = rest.degree();
        let g = self.genus;
        let plus: i64 = gens.iter().filter(|(_, c)| *c > 0).map(|(_, c)| c).sum();
        let minus: i64 = gens.iter().filter(|(_, c)| *c < 0).map(|(_, c)| -c).sum();
        for _ in 0..plus {
            // a general point is a base point of |T + G| exactly when T is special
            let h1 = h - deg + g - 1;
            h = if h1.hi <= 0 {
                h + 1
            } else if h1.lo > 0 {
                h
            } else {
                Interval::new(h.lo, h.hi + 1)
            };
            deg += 1;
        }
        Ok(Interval::new((h.lo - minus).max(0), (h.hi - minus).max(0)))
    }

    pub fn h1(&self, d: &DivisorClass) -> Result<Interval, CurveError> {
        let deg = d.degree();
        if deg > self.canonical_degree() {
            self.h0(d)?;
            return Ok(Interval::exact(0));
        }
        let h = self.h0(d)? - (deg - self.genus + 1);
        Ok(h.clamp_min(0))
    }

    /// h⁰(D) − h⁰(D − P), enclosed in [0, 1].
    pub fn drop_at(&self, d: &DivisorClass, p: &str) -> Result<Interval, CurveError> {
        let a = self.h0(d)?;
        if a.hi == 0 {
            return Ok(Interval::exact(0));
        }
        let b = self.h0(&(d - &DivisorClass::point(p)))?;
        let lo = (a.lo - b.hi).clamp(0, 1);
        let hi = (a.hi - b.lo).clamp(0, 1);
        Ok(if lo <= hi { Interval::new(lo, hi) } else { Interval::new(0, 1) })
    }

    /// P is a base point of |D|. An empty system has every point as a base point.
    pub fn is_base_point(&self, d: &DivisorClass, p: &str) -> Result<TriState, CurveError> {
        Ok(self.drop_at(d, p)?.eq_value(0))
    }

    pub fn domain_points(&self, domain: QuantifierDomain) -> Vec<String> {
        let mut v = self.points.clone();
        if domain == QuantifierDomain::NamedAndGeneric {
            v.push(GENERIC_POINT.to_string());
        }
        v
    }

    /// Unordered pairs {P, Q} with P ≠ Q, over the domain; with generic points
    /// enabled both (named, @g) and (@g, @h) are included.
    pub fn domain_pairs(&self, domain: QuantifierDomain) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let pts = &self.points;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                out.push((pts[i].clone(), pts[j].clone()));
            }
        }
        if domain == QuantifierDomain::NamedAndGeneric {
            for p in pts {
                out.push((p.clone(), GENERIC_POINT.to_string()));
            }
            out.push((GENERIC_POINT.to_string(), GENERIC_POINT_2.to_string()));
        }
        out
    }

    pub fn is_bpf(&self, d: &DivisorClass, domain: QuantifierDomain) -> Result<TriState, CurveError> {
        let d = self.normalize(d);
        let h = self.h0(&d)?;
        let deg = d.degree();
        if h.hi == 0 {
            return Ok(TriState::False);
        }
        if self.genus == 0 {
            return Ok(TriState::from_bool(deg >= 0));
        }
        if h.lo > self.max_h0_of_degree(deg - 1) {
            return Ok(TriState::True);
        }
        if self.is_plain(&d) && deg > self.genus {
            return Ok(TriState::True);
        }
        if h == Interval::exact(1) && deg >= 1 {
            return Ok(TriState::False);
        }
        let mut acc = TriState::True;
        for p in self.domain_points(domain) {
            match self.is_base_point(&d, &p)? {
                TriState::True => return Ok(TriState::False),
                TriState::Unknown => acc = TriState::Unknown,
                TriState::False => {}
            }
        }
        // the domain cannot certify the remaining points
        Ok(acc.and(TriState::Unknown))
    }

    pub fn is_very_ample(&self, d: &DivisorClass, domain: QuantifierDomain) -> Result<TriState, CurveError> {
        let d = self.normalize(d);
        let h = self.h0(&d)?;
        let deg = d.degree();
        let g = self.genus;
        if g == 0 {
            return Ok(TriState::from_bool(deg >= 1));
        }
        if h.hi <= 2 {
            return Ok(TriState::False);
        }
        if h.lo - 1 > self.max_h0_of_degree(deg - 2) {
            return Ok(TriState::True);
        }
        if deg == 2 * g && g <= 2 {
            return Ok(TriState::False);
        }
        if self.is_bpf(&d, domain)?.is_false() {
            return Ok(TriState::False);
        }
        let mut pairs: Vec<(String, String)> = self.domain_pairs(domain);
        for p in self.domain_points(domain) {
            pairs.push((p.clone(), p));
        }
        for (p, q) in pairs {
            let e = &(&d - &DivisorClass::point(&p)) - &DivisorClass::point(&q);
            let he = self.h0(&e)?;
            if he.lo > h.hi - 2 {
                return Ok(TriState::False);
            }
        }
        Ok(TriState::Unknown)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let g = self.genus;
        let mut out = Vec::new();
        let push = |out: &mut Vec<Violation>, kind, c: &DivisorClass, detail: String| {
            out.push(Violation {
                kind,
                class: c.to_string(),
                detail,
            })
        };
        for (c, &h) in &self.table {
            let deg = c.degree();
            if deg < 0 && h != 0 {
                push(&mut out, ViolationKind::NegativeDegree, c, format!("degree {deg} but h0 = {h}"));
                continue;
            }
            let h1 = h - deg + g - 1;
            if h < 0 || h1 < 0 {
                push(
                    &mut out,
                    ViolationKind::RiemannRoch,
                    c,
                    format!("h0 = {h} forces h1 = {h1} < 0 at degree {deg}"),
                );
                continue;
            }
            if deg > 2 * g - 2 && h1 != 0 {
                push(
                    &mut out,
                    ViolationKind::RiemannRoch,
                    c,
                    format!("degree {deg} > 2g-2 forces h0 = {}, tabulated {h}", deg - g + 1),
                );
                continue;
            }
            if h > 0 && h1 > 0 && 2 * (h - 1) > deg {
                push(
                    &mut out,
                    ViolationKind::Clifford,
                    c,
                    format!("special class of degree {deg} with h0 = {h} exceeds deg/2 + 1"),
                );
            }
            if let Some(&false) = self.effective.get(c) {
                if h > 0 {
                    push(&mut out, ViolationKind::Effectivity, c, format!("declared non-effective but h0 = {h}"));
                }
            }
            for p in &self.points {
                let below = self.normalize(&(c - &DivisorClass::point(p)));
                if let Some(&hb) = self.table.get(&below) {
                    let drop = h - hb;
                    if !(0..=1).contains(&drop) {
                        push(
                            &mut out,
                            ViolationKind::PointDrop,
                            c,
                            format!("h0 drops by {drop} when removing {p}"),
                        );
                    }
                }
            }
        }
        for (c, &e) in &self.effective {
            if e && c.degree() < 0 {
                push(&mut out, ViolationKind::NegativeDegree, c, "declared effective with negative degree".into());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use QuantifierDomain::NamedAndGeneric as NG;

    fn hyperelliptic() -> CurveModel {
        CurveModel::builder(2)
            .unwrap()
            .points(&["P", "Q", "R"])
            .unwrap()
            .symbol("g12", 2)
            .unwrap()
            .alias_expr("g12", "K")
            .unwrap()
            .alias_expr("P + Q", "K")
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn degree_forced_values() {
        let c = CurveModel::generic(0, &["P"]).unwrap();
        let d = c.parse("2P").unwrap();
        assert_eq!(c.h0(&d).unwrap(), Interval::exact(3));
        assert_eq!(c.h0(&c.parse("-P").unwrap()).unwrap(), Interval::exact(0));
        let e = CurveModel::generic(1, &[]).unwrap();
        assert_eq!(e.h1(&DivisorClass::generic_effective(3)).unwrap(), Interval::exact(0));
    }

    #[test]
    fn generic_rules() {
        let c = CurveModel::generic(2, &[]).unwrap();
        assert_eq!(c.h0(&DivisorClass::generic_effective(1)).unwrap(), Interval::exact(1));
        assert_eq!(c.h0(&DivisorClass::generic_effective(2)).unwrap(), Interval::exact(1));
        assert_eq!(c.h0(&DivisorClass::generic_non_effective(1)).unwrap(), Interval::exact(0));
        assert_eq!(c.h0(&DivisorClass::generic_non_effective(2)).unwrap(), Interval::exact(1));
        let e = CurveModel::generic(1, &[]).unwrap();
        assert_eq!(e.h0(&DivisorClass::generic_non_effective(0)).unwrap(), Interval::exact(0));
        assert_eq!(e.h1(&DivisorClass::generic_non_effective(0)).unwrap(), Interval::exact(0));
    }

    #[test]
    fn canonical_and_duality() {
        let c = hyperelliptic();
        let k = c.canonical();
        assert_eq!(c.h0(&k).unwrap(), Interval::exact(2));
        assert_eq!(c.h1(&k).unwrap(), Interval::exact(1));
        // K − R is the conjugate of R
        let kr = &k - &DivisorClass::point("R");
        assert_eq!(c.h0(&kr).unwrap(), Interval::exact(1));
        // P + Q − R rewrites to K − R
        assert_eq!(c.h0(&c.parse("P + Q - R").unwrap()).unwrap(), Interval::exact(1));
        assert_eq!(c.h0(&c.parse("g12").unwrap()).unwrap(), Interval::exact(2));
        assert_eq!(c.h0(&c.parse("K - @g").unwrap()).unwrap(), Interval::exact(1));
        assert_eq!(c.h0(&c.parse("K - @g - @h").unwrap()).unwrap(), Interval::exact(0));
        assert_eq!(c.h0(&c.parse("K + @g").unwrap()).unwrap(), Interval::exact(2));
        assert!(c.validate().is_empty());
    }

    #[test]
    fn base_points() {
        let c = CurveModel::builder(1).unwrap().point("P").unwrap().tabulate_expr("P", 1).unwrap().build().unwrap();
        assert_eq!(c.is_base_point(&c.parse("P").unwrap(), "P").unwrap(), TriState::True);
        let r = CurveModel::generic(0, &["P"]).unwrap();
        assert_eq!(r.is_base_point(&DivisorClass::generic_effective(2), "P").unwrap(), TriState::False);
        let t = CurveModel::generic(2, &[]).unwrap();
        assert_eq!(t.is_base_point(&DivisorClass::generic_effective(3), GENERIC_POINT).unwrap(), TriState::False);
        // K + P on a genus-2 curve has P as a base point
        let h = hyperelliptic();
        assert_eq!(h.is_base_point(&h.parse("K + R").unwrap(), "R").unwrap(), TriState::True);
        assert_eq!(h.is_bpf(&h.parse("K + R").unwrap(), NG).unwrap(), TriState::False);
        assert_eq!(h.is_bpf(&h.canonical(), NG).unwrap(), TriState::True);
    }

    #[test]
    fn ampleness_examples() {
        let r = CurveModel::generic(0, &[]).unwrap();
        assert_eq!(r.is_very_ample(&DivisorClass::generic_effective(1), NG).unwrap(), TriState::True);
        let e = CurveModel::generic(1, &["P"]).unwrap();
        let d2 = DivisorClass::generic_effective(2);
        assert_eq!(e.is_bpf(&d2, NG).unwrap(), TriState::True);
        assert_eq!(e.is_very_ample(&d2, NG).unwrap(), TriState::False);
        assert_eq!(e.is_very_ample(&DivisorClass::generic_effective(3), NG).unwrap(), TriState::True);
        let h = hyperelliptic();
        assert_eq!(h.is_very_ample(&h.canonical(), NG).unwrap(), TriState::False);
        assert_eq!(h.is_very_ample(&h.parse("K + P + R").unwrap(), NG).unwrap(), TriState::False);
        assert_eq!(h.is_very_ample(&DivisorClass::generic_effective(5), NG).unwrap(), TriState::True);
    }

    #[test]
    fn validator_flags() {
        let bad = CurveModel::builder(1).unwrap().point("P").unwrap().tabulate_expr("-P", 1).unwrap().build().unwrap();
        let v = bad.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind.to_string(), "negative degree");
        let rr = CurveModel::builder(1).unwrap().point("P").unwrap().tabulate_expr("3P", 1).unwrap().build().unwrap();
        assert_eq!(rr.validate()[0].kind, ViolationKind::RiemannRoch);
        assert!(matches!(
            rr.h0(&rr.parse("3P").unwrap()),
            Err(CurveError::InconsistentTable { .. })
        ));
        let cl = CurveModel::builder(3).unwrap().point("P").unwrap().tabulate_expr("2P", 3).unwrap().build().unwrap();
        assert!(cl.validate().iter().any(|v| v.kind == ViolationKind::Clifford));
        let g2 = CurveModel::builder(2)
            .unwrap()
            .symbol("g12", 2)
            .unwrap()
            .tabulate_expr("g12", 2)
            .unwrap()
            .tabulate_expr("K", 2)
            .unwrap()
            .build()
            .unwrap();
        assert!(g2.validate().is_empty());
    }

    #[test]
    fn alias_errors() {
        let b = CurveModel::builder(1).unwrap().points(&["P", "Q"]).unwrap();
        assert!(matches!(
            b.clone().alias_expr("P", "2Q").unwrap().build(),
            Err(CurveError::AliasDegree { .. })
        ));
        assert!(matches!(
            b.clone().alias_expr("2P", "2Q").unwrap().build(),
            Err(CurveError::AliasUnsupported(_))
        ));
        assert!(matches!(b.point("P"), Err(CurveError::DuplicateName(_))));
    }

    #[test]
    fn point_relations_disable_generic_rule() {
        // P + Q ∼ R + S on a genus-3 curve: P + Q − R is effective
        let c = CurveModel::builder(3)
            .unwrap()
            .points(&["P", "Q", "R", "S"])
            .unwrap()
            .alias_expr("P + Q", "R + S")
            .unwrap()
            .build()
            .unwrap();
        let d = c.parse("P + Q - R").unwrap();
        assert!(c.h0(&d).unwrap().contains(1));
    }
}
