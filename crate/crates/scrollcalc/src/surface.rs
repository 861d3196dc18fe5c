//! Geometrically ruled surfaces over a curve model, in normalized form.
//!
//! A surface is either a decomposable anchor P(O ⊕ O(𝔢)) or the result of a
//! chain of elementary transformations. Invariants are cached per surface and
//! the chain is kept as a persistent parent link.

use crate::curve::CurveModel;
use crate::divisor::DivisorClass;
use crate::elm::StepRecord;
use crate::error::{Error, Result};
use crate::tri::TriState;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::sync::Arc;

/// Class m·X₀ + 𝔟·f, with X₀ the minimal section of the surface it lives on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PicClass {
    pub m: i64,
    pub b: DivisorClass,
}

impl PicClass {
    pub fn new(m: i64, b: DivisorClass) -> Self {
        PicClass { m, b }
    }

    pub fn min_section() -> Self {
        PicClass::new(1, DivisorClass::zero())
    }

    pub fn fiber(b: DivisorClass) -> Self {
        PicClass::new(0, b)
    }

    pub fn num(&self) -> NumClass {
        NumClass {
            m: self.m,
            b_deg: self.b.degree(),
        }
    }

    pub fn scale(&self, k: i64) -> PicClass {
        PicClass::new(self.m * k, self.b.scale(k))
    }
}

impl Add for &PicClass {
    type Output = PicClass;
    fn add(self, rhs: &PicClass) -> PicClass {
        PicClass::new(self.m + rhs.m, &self.b + &rhs.b)
    }
}

impl Sub for &PicClass {
    type Output = PicClass;
    fn sub(self, rhs: &PicClass) -> PicClass {
        PicClass::new(self.m - rhs.m, &self.b - &rhs.b)
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.m, self.b.is_zero()) {
            (0, _) => write!(f, "({})f", self.b),
            (m, true) => write!(f, "{m}X0"),
            (m, false) => write!(f, "{m}X0 + ({})f", self.b),
        }
    }
}

/// Numerical image (m, deg 𝔟) of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct NumClass {
    pub m: i64,
    pub b_deg: i64,
}

impl NumClass {
    pub fn new(m: i64, b_deg: i64) -> Self {
        NumClass { m, b_deg }
    }
}

/// Intersection form on Num(S): X₀² = −e, X₀·f = 1, f² = 0.
pub fn intersect_num(e: i64, c: NumClass, d: NumClass) -> i64 {
    -e * c.m * d.m + c.m * d.b_deg + d.m * c.b_deg
}

/// Label of a section curve; each elementary transformation appends a prime
/// to the curves it carries over.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SectionId(pub String);

impl SectionId {
    pub fn new(s: impl Into<String>) -> Self {
        SectionId(s.into())
    }

    pub fn primed(&self) -> SectionId {
        SectionId(format!("{}'", self.0))
    }

    pub fn unprimed(&self) -> SectionId {
        SectionId(self.0.strip_suffix('\'').unwrap_or(&self.0).to_string())
    }
}

impl fmt::Display for SectionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone)]
pub struct ChainLink {
    pub parent: RuledSurface,
    pub record: StepRecord,
}

#[derive(Debug, Clone)]
pub struct RuledSurface {
    pub(crate) curve: Arc<CurveModel>,
    pub(crate) e: i64,
    pub(crate) e_class: DivisorClass,
    pub(crate) decomposable: TriState,
    pub(crate) min_section: SectionId,
    pub(crate) complement: Option<SectionId>,
    pub(crate) tracked: BTreeMap<String, PicClass>,
    pub(crate) link: Option<Arc<ChainLink>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinSectionInfo {
    pub section: SectionId,
    pub class: PicClass,
    pub self_intersection: i64,
    /// False exactly when |X₀| moves, i.e. on the product surface.
    pub unique: TriState,
    pub complement: Option<SectionId>,
    pub complement_self_intersection: Option<i64>,
    /// Lower bound for D² over the remaining sections of a decomposable surface.
    pub other_sections_at_least: Option<i64>,
}

impl RuledSurface {
    /// P(O ⊕ O(𝔢)) with deg 𝔢 ≤ 0.
    pub fn decomposable(curve: Arc<CurveModel>, e_class: DivisorClass) -> Result<Self> {
        let e_class = curve.normalize(&e_class);
        let deg = e_class.degree();
        if deg > 0 {
            return Err(Error::NotNormalized(deg));
        }
        let s = RuledSurface {
            curve,
            e: -deg,
            e_class,
            decomposable: TriState::True,
            min_section: SectionId::new("X0"),
            complement: Some(SectionId::new("X1")),
            tracked: BTreeMap::new(),
            link: None,
        };
        s.check_segre()?;
        Ok(s)
    }

    pub fn product(curve: Arc<CurveModel>) -> Self {
        Self::decomposable(curve, DivisorClass::zero()).expect("product surface is normalized")
    }

    /// P(O(𝔞) ⊕ O(𝔟)) rewritten as a twist of a normalized decomposable surface.
    pub fn from_split(curve: Arc<CurveModel>, a: &DivisorClass, b: &DivisorClass) -> Result<(Self, DivisorClass)> {
        let (e_class, twist) = if (b - a).degree() <= 0 {
            (b - a, a.clone())
        } else {
            (a - b, b.clone())
        };
        Ok((Self::decomposable(curve, e_class)?, twist))
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn curve_arc(&self) -> &Arc<CurveModel> {
        &self.curve
    }

    pub fn genus(&self) -> i64 {
        self.curve.genus()
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn e_class(&self) -> &DivisorClass {
        &self.e_class
    }

    pub fn is_decomposable(&self) -> TriState {
        self.decomposable
    }

    pub fn min_section(&self) -> &SectionId {
        &self.min_section
    }

    pub fn complement(&self) -> Option<&SectionId> {
        self.complement.as_ref()
    }

    pub fn min_section_self_int(&self) -> i64 {
        -self.e
    }

    pub fn link(&self) -> Option<&ChainLink> {
        self.link.as_deref()
    }

    pub fn parent(&self) -> Option<&RuledSurface> {
        self.link().map(|l| &l.parent)
    }

    pub fn chain_len(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Some(p) = cur.parent() {
            n += 1;
            cur = p;
        }
        n
    }

    pub fn anchor(&self) -> &RuledSurface {
        let mut cur = self;
        while let Some(p) = cur.parent() {
            cur = p;
        }
        cur
    }

    /// Recorded steps from the anchor to this surface, in order.
    pub fn steps(&self) -> Vec<&StepRecord> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some(l) = cur.link() {
            out.push(&l.record);
            cur = &l.parent;
        }
        out.reverse();
        out
    }

    pub fn tracked(&self) -> &BTreeMap<String, PicClass> {
        &self.tracked
    }

    /// Registers a class whose transforms are carried along later steps.
    pub fn with_tracked(mut self, name: &str, class: PicClass) -> Self {
        let class = PicClass::new(class.m, self.curve.normalize(&class.b));
        self.tracked.insert(name.to_string(), class);
        self
    }

    pub fn intersect(&self, c: NumClass, d: NumClass) -> i64 {
        intersect_num(self.e, c, d)
    }

    pub fn intersect_classes(&self, c: &PicClass, d: &PicClass) -> i64 {
        self.intersect(c.num(), d.num())
    }

    /// Degree of the scroll image of a unisecant system: H² = 2·deg 𝔟 − e.
    pub fn scroll_degree(&self, h: &PicClass) -> Result<i64> {
        if h.m != 1 {
            return Err(Error::Precondition(format!("scroll degree needs a unisecant class, got m = {}", h.m)));
        }
        Ok(2 * h.b.degree() - self.e)
    }

    /// The section D ∼ X₀ + (𝔞 − 𝔢)f cut out by a quotient line bundle of
    /// class 𝔞, together with deg 𝔞 = X₀·D.
    pub fn section_from_quotient(&self, a: &DivisorClass) -> (PicClass, i64) {
        let b = self.curve.normalize(&(a - &self.e_class));
        let class = PicClass::new(1, b);
        let d = self.intersect(PicClass::min_section().num(), class.num());
        debug_assert_eq!(d, a.degree());
        (class, d)
    }

    /// Whether 𝔢 is linearly trivial, as far as the model can tell.
    pub fn e_class_trivial(&self) -> TriState {
        if self.e != 0 {
            return TriState::False;
        }
        if self.e_class.is_zero() {
            return TriState::True;
        }
        match self.curve.h0(&self.e_class) {
            Ok(h) => h.eq_value(1),
            Err(_) => TriState::Unknown,
        }
    }

    pub fn is_product(&self) -> TriState {
        self.decomposable.and(self.e_class_trivial())
    }

    pub fn min_section_info(&self) -> MinSectionInfo {
        let dec = self.decomposable.is_true();
        MinSectionInfo {
            section: self.min_section.clone(),
            class: PicClass::min_section(),
            self_intersection: -self.e,
            unique: self.is_product().not(),
            complement: if dec { self.complement.clone() } else { None },
            complement_self_intersection: dec.then_some(self.e),
            other_sections_at_least: dec.then_some(self.e + 2),
        }
    }

    /// Segre bounds: e ≥ 0 when decomposable, −g ≤ e ≤ 2g−2 otherwise.
    pub fn check_segre(&self) -> Result<()> {
        let g = self.genus();
        let ok_dec = self.e >= 0;
        let ok_indec = -g <= self.e && self.e <= 2 * g - 2;
        let (ok, kind) = match self.decomposable {
            TriState::True => (ok_dec, "decomposable"),
            TriState::False => (ok_indec, "indecomposable"),
            TriState::Unknown => (ok_dec || ok_indec, "ruled"),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SegreBoundViolation { e: self.e, genus: g, kind })
        }
    }

    /// Rewrites a class in the basis where the complementary section X₁ is
    /// taken as minimal; only meaningful for e = 0 decomposable surfaces.
    pub(crate) fn swap_class(&self, c: &PicClass) -> PicClass {
        // X₀ = X₁ + 𝔢f
        PicClass::new(c.m, self.curve.normalize(&(&c.b + &self.e_class.scale(c.m))))
    }

    /// The same surface with the roles of X₀ and X₁ exchanged (e = 0 only).
    pub(crate) fn swapped(&self) -> RuledSurface {
        debug_assert!(self.e == 0 && self.decomposable.is_true());
        let mut s = self.clone();
        s.e_class = self.curve.normalize(&(-&self.e_class));
        if let Some(c) = self.complement.clone() {
            s.complement = Some(self.min_section.clone());
            s.min_section = c;
        }
        s.tracked = self.tracked.iter().map(|(k, v)| (k.clone(), self.swap_class(v))).collect();
        s
    }

    /// Equality of everything an inverse step must restore.
    pub fn same_invariants(&self, other: &RuledSurface) -> bool {
        self.e == other.e
            && self.curve.equivalent(&self.e_class, &other.e_class)
            && self.decomposable == other.decomposable
            && self.min_section == other.min_section
            && self.tracked == other.tracked
    }
}

impl fmt::Display for RuledSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.decomposable {
            TriState::True => "decomposable",
            TriState::False => "indecomposable",
            TriState::Unknown => "undetermined",
        };
        write!(f, "{kind} ruled surface, e = {}, e_class = {}, min section {}", self.e, self.e_class, self.min_section)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn curve(g: i64) -> Arc<CurveModel> {
        Arc::new(CurveModel::generic(g, &["P", "Q"]).unwrap())
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersect_num(0, NumClass::new(0, 1), NumClass::new(0, 1)), 0);
        assert_eq!(intersect_num(3, NumClass::new(1, 0), NumClass::new(0, 1)), 1);
        assert_eq!(intersect_num(2, NumClass::new(2, 3), NumClass::new(1, 1)), 1);
    }

    #[test]
    fn scroll_degrees() {
        let c = curve(0);
        let s = RuledSurface::decomposable(c.clone(), c.parse("-P").unwrap()).unwrap();
        let h = PicClass::new(1, DivisorClass::generic_effective(2));
        assert_eq!(s.scroll_degree(&h).unwrap(), 3);
        assert_eq!(s.intersect_classes(&h, &h), 3);
        let p = RuledSurface::product(c);
        assert_eq!(p.scroll_degree(&PicClass::min_section()).unwrap(), 0);
        let e = curve(1);
        let s = RuledSurface::decomposable(e.clone(), e.parse("-P").unwrap()).unwrap();
        assert_eq!(s.scroll_degree(&PicClass::new(1, DivisorClass::generic_effective(3))).unwrap(), 5);
        assert!(s.scroll_degree(&PicClass::new(2, DivisorClass::zero())).is_err());
    }

    #[test]
    fn sections_from_quotients() {
        let c = curve(1);
        let s = RuledSurface::decomposable(c.clone(), c.parse("-P").unwrap()).unwrap();
        let (x0, d) = s.section_from_quotient(s.e_class());
        assert_eq!(x0, PicClass::min_section());
        assert_eq!(d, -1);
        let (x1, d) = s.section_from_quotient(&DivisorClass::zero());
        assert_eq!(x1, PicClass::new(1, c.parse("P").unwrap()));
        assert_eq!(d, 0);
        let (sec, d) = s.section_from_quotient(&DivisorClass::generic_effective(2));
        assert_eq!(sec.b.degree(), 3);
        assert_eq!(d, 2);
    }

    #[test]
    fn min_section_flags() {
        let c = curve(1);
        let p = RuledSurface::product(c.clone());
        assert_eq!(p.min_section_info().unique, TriState::False);
        let s = RuledSurface::decomposable(c.clone(), c.parse("-P-Q").unwrap()).unwrap();
        let info = s.min_section_info();
        assert_eq!(info.self_intersection, -2);
        assert_eq!(info.complement_self_intersection, Some(2));
        assert_eq!(info.other_sections_at_least, Some(4));
        assert_eq!(info.unique, TriState::True);
        let t = RuledSurface::decomposable(c.clone(), c.parse("P-Q").unwrap()).unwrap();
        assert_eq!(t.min_section_info().unique, TriState::True);
        assert!(RuledSurface::decomposable(c.clone(), c.parse("P").unwrap()).is_err());
    }

    #[test]
    fn split_normalization() {
        let c = curve(1);
        let (s, twist) = RuledSurface::from_split(c.clone(), &c.parse("2P").unwrap(), &c.parse("Q").unwrap()).unwrap();
        assert_eq!(s.e(), 1);
        assert_eq!(twist, c.parse("2P").unwrap());
        assert_eq!(s.e_class(), &c.parse("Q - 2P").unwrap());
    }

    proptest! {
        #[test]
        fn form_is_symmetric_bilinear(e in -2i64..5, a in -4i64..5, b in -6i64..7, c in -4i64..5, d in -6i64..7, x in -4i64..5, y in -6i64..7) {
            let u = NumClass::new(a, b);
            let v = NumClass::new(c, d);
            let w = NumClass::new(x, y);
            prop_assert_eq!(intersect_num(e, u, v), intersect_num(e, v, u));
            let uw = NumClass::new(a + x, b + y);
            prop_assert_eq!(intersect_num(e, uw, v), intersect_num(e, u, v) + intersect_num(e, w, v));
        }

        #[test]
        fn degree_matches_self_intersection(e in 0i64..5, bd in -3i64..9) {
            let c = curve(2);
            let ec = DivisorClass::generic_non_effective(-e);
            let s = RuledSurface::decomposable(c, ec).unwrap();
            let h = PicClass::new(1, DivisorClass::generic_effective(bd));
            prop_assert_eq!(s.scroll_degree(&h).unwrap(), s.intersect_classes(&h, &h));
        }
    }
}
