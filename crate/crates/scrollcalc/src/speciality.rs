//! Speciality h¹(O_S(H)) of a scroll, its growth under projection, and the
//! statements about cones and special directrix curves.

use crate::curve::{CurveModel, QuantifierDomain, GENERIC_POINT, GENERIC_POINT_2};
use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linear_system::{self, pairs_with_doubles};
use crate::surface::{PicClass, RuledSurface};
use crate::tri::TriState;
use serde::Serialize;
use std::sync::Arc;

pub fn speciality(s: &RuledSurface, h: &PicClass) -> Result<Interval> {
    if h.m != 1 {
        return Err(Error::Precondition(format!("speciality needs a unisecant system, got m = {}", h.m)));
    }
    linear_system::h1(s, h)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeSpeciality {
    #[serde(skip)]
    pub surface: RuledSurface,
    #[serde(skip)]
    pub system: PicClass,
    /// h¹ of the hyperplane system on the cone model
    pub speciality: Interval,
    /// g + h¹(𝔟) on the curve
    pub closed_form: Interval,
}

/// The cone over the curve embedded by |𝔟|, modelled on the decomposable
/// surface with 𝔢 = −𝔟 and the system |X₀ + 𝔟f| contracting X₀.
pub fn cone_speciality(curve: Arc<CurveModel>, b: &DivisorClass, domain: QuantifierDomain) -> Result<ConeSpeciality> {
    let g = curve.genus();
    if g < 1 {
        return Err(Error::Precondition("cones are only special over curves of positive genus".into()));
    }
    let b = curve.normalize(b);
    if curve.is_bpf(&b, domain)?.is_false() {
        return Err(Error::NotBasePointFree);
    }
    let h1b = curve.h1(&b)?;
    let surface = RuledSurface::decomposable(curve.clone(), -&b)?;
    let system = PicClass::new(1, b);
    let sp = speciality(&surface, &system)?;
    Ok(ConeSpeciality {
        surface,
        system,
        speciality: sp,
        closed_form: h1b + g,
    })
}

/// Growth of the speciality when projecting from a linear space meeting the
/// scroll in a cycle of degree `cycle_degree` spanning `span_dim`.
pub fn projection_delta(cycle_degree: i64, span_dim: i64) -> Result<i64> {
    if span_dim < 0 || cycle_degree < span_dim + 1 {
        return Err(Error::MalformedCycle {
            degree: cycle_degree,
            span: span_dim,
        });
    }
    Ok(cycle_degree - span_dim - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProjectionEvent {
    pub cycle_degree: i64,
    pub span_dim: i64,
    pub delta: i64,
}

/// Speciality history along a chain of projections. Appending returns a new
/// ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialityLedger {
    anchor: Interval,
    current_i: Interval,
    events: Vec<ProjectionEvent>,
}

impl SpecialityLedger {
    pub fn new(anchor: Interval) -> Self {
        SpecialityLedger {
            anchor,
            current_i: anchor,
            events: Vec::new(),
        }
    }

    pub fn for_scroll(s: &RuledSurface, h: &PicClass) -> Result<Self> {
        Ok(Self::new(speciality(s, h)?))
    }

    pub fn anchor(&self) -> Interval {
        self.anchor
    }

    pub fn current_i(&self) -> Interval {
        self.current_i
    }

    pub fn events(&self) -> &[ProjectionEvent] {
        &self.events
    }

    pub fn total_delta(&self) -> i64 {
        self.events.iter().map(|e| e.delta).sum()
    }

    pub fn append(&self, cycle_degree: i64, span_dim: i64) -> Result<SpecialityLedger> {
        let delta = projection_delta(cycle_degree, span_dim)?;
        let mut next = self.clone();
        next.events.push(ProjectionEvent {
            cycle_degree,
            span_dim,
            delta,
        });
        next.current_i = next.current_i + delta;
        Ok(next)
    }
}

/// Whether the scroll is a cone: every pair of generators meets, i.e.
/// h⁰(H − Pf − Qf) ≥ h⁰(H) − 3 for all P, Q.
///
/// The drop at a general pair bounds the drop at every pair by
/// semicontinuity, so a general pair with drop at most 3 settles it.
pub fn is_cone_test(s: &RuledSurface, h: &PicClass, domain: QuantifierDomain) -> Result<TriState> {
    if s.genus() < 1 {
        return Err(Error::Precondition("the cone criterion needs genus at least 1".into()));
    }
    if h.m != 1 {
        return Err(Error::Precondition(format!("cone test needs a unisecant system, got m = {}", h.m)));
    }
    let hv = linear_system::h0(s, h)?;
    if hv.hi < 4 {
        return Err(Error::Precondition(format!("cone test needs N >= 3, h0(H) = {hv}")));
    }
    if linear_system::base_locus(s, h, domain)?.bpf.is_false() {
        return Err(Error::NotBasePointFree);
    }
    let curve = s.curve();
    let b = curve.normalize(&h.b);
    let mut verdict = TriState::Unknown;
    for (p, q) in pairs_with_doubles(curve, domain) {
        let rest = curve.normalize(&(&(&b - &DivisorClass::point(p.as_str())) - &DivisorClass::point(q.as_str())));
        let less = linear_system::h0(s, &PicClass::new(1, rest))?;
        let d = Interval::new((hv.lo - less.hi).max(0), (hv.hi - less.lo).max(0));
        if d.lo >= 4 {
            return Ok(TriState::False);
        }
        if p == GENERIC_POINT && q == GENERIC_POINT_2 && d.hi <= 3 {
            verdict = TriState::True;
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectrixCheck {
    /// H·C
    pub degree: i64,
    /// class of O_C(H) on the curve
    pub restriction: DivisorClass,
    pub h1_directrix: Interval,
    pub h1_scroll: Interval,
    /// h¹(O_C(H)) ≤ h¹(O_S(H)); False means the model is inconsistent
    pub holds: TriState,
}

/// Compares the speciality of the section C = X₀ + 𝔠f, embedded by H, with
/// that of the scroll.
pub fn directrix_speciality_bound_check(s: &RuledSurface, h: &PicClass, c: &PicClass) -> Result<DirectrixCheck> {
    if h.m != 1 || c.m != 1 {
        return Err(Error::Precondition("both H and C must be unisecant".into()));
    }
    let curve = s.curve();
    // O_C(X₀) has class 𝔠 + 𝔢 on C ≅ X
    let restriction = curve.normalize(&(&(&c.b + s.e_class()) + &h.b));
    let h1_directrix = curve.h1(&restriction)?;
    let h1_scroll = speciality(s, h)?;
    let holds = if h1_directrix.hi <= h1_scroll.lo {
        TriState::True
    } else if h1_directrix.lo > h1_scroll.hi {
        TriState::False
    } else {
        TriState::Unknown
    };
    Ok(DirectrixCheck {
        degree: s.intersect_classes(h, c),
        restriction,
        h1_directrix,
        h1_scroll,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum SpecialDirectrix {
    NotApplicable {
        failed: String,
    },
    Guaranteed {
        /// number of general points imposed, g − i + 1
        points: i64,
        feasibility_lhs: i64,
        feasibility_rhs: i64,
        max_directrix_degree: i64,
        min_other_section_degree: i64,
        directrix_speciality: i64,
        linearly_normal: bool,
        unique: bool,
        minimal: bool,
    },
}

/// The properties of the special directrix curve guaranteed for a special
/// scroll of genus g, degree d and speciality i.
pub fn special_directrix_bounds(g: i64, d: i64, i: i64) -> SpecialDirectrix {
    if i < 1 {
        return SpecialDirectrix::NotApplicable {
            failed: format!("i >= 1 (i = {i})"),
        };
    }
    if d < 4 * g - 2 {
        return SpecialDirectrix::NotApplicable {
            failed: format!("d >= 4g - 2 (d = {d}, 4g - 2 = {})", 4 * g - 2),
        };
    }
    let a = g - i + 1;
    let lhs = 2 * a;
    let rhs = d - 2 * g + 1 + i;
    debug_assert!(lhs <= rhs);
    SpecialDirectrix::Guaranteed {
        points: a,
        feasibility_lhs: lhs,
        feasibility_rhs: rhs,
        max_directrix_degree: 2 * g - 2,
        min_other_section_degree: 2 * g,
        directrix_speciality: i,
        linearly_normal: true,
        unique: true,
        minimal: true,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialDirectrixReport {
    pub genus: i64,
    pub degree: i64,
    pub speciality: Interval,
    pub guaranteed: SpecialDirectrix,
    /// On a decomposable surface: the minimal section has degree at most
    /// 2g − 2 and speciality i, and its complement has degree at least 2g.
    pub cross_check: TriState,
}

pub fn special_directrix_search(s: &RuledSurface, h: &PicClass) -> Result<SpecialDirectrixReport> {
    let g = s.genus();
    let d = s.scroll_degree(h)?;
    let sp = speciality(s, h)?;
    let Some(i) = sp.value() else {
        return Ok(SpecialDirectrixReport {
            genus: g,
            degree: d,
            speciality: sp,
            guaranteed: SpecialDirectrix::NotApplicable {
                failed: format!("speciality is not determined ({sp})"),
            },
            cross_check: TriState::Unknown,
        });
    };
    let guaranteed = special_directrix_bounds(g, d, i);
    let cross_check = match (&guaranteed, s.is_decomposable()) {
        (SpecialDirectrix::Guaranteed { .. }, TriState::True) => {
            let x0 = directrix_speciality_bound_check(s, h, &PicClass::min_section())?;
            let x1 = PicClass::new(1, -s.e_class());
            let other = s.intersect_classes(h, &x1);
            let ok = x0.degree <= 2 * g - 2 && x0.h1_directrix == Interval::exact(i) && other >= 2 * g;
            TriState::from_bool(ok)
        }
        _ => TriState::Unknown,
    };
    Ok(SpecialDirectrixReport {
        genus: g,
        degree: d,
        speciality: sp,
        guaranteed,
        cross_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const D: QuantifierDomain = QuantifierDomain::NamedAndGeneric;

    fn curve(g: i64) -> Arc<CurveModel> {
        Arc::new(CurveModel::generic(g, &["P", "Q", "P0"]).unwrap())
    }

    fn res(d: i64) -> DivisorClass {
        DivisorClass::generic_effective(d)
    }

    #[test]
    fn speciality_examples() {
        let c0 = curve(0);
        let s = RuledSurface::decomposable(c0.clone(), c0.parse("-P0").unwrap()).unwrap();
        assert_eq!(speciality(&s, &PicClass::new(1, res(2))).unwrap(), Interval::exact(0));
        let c1 = curve(1);
        let s = RuledSurface::decomposable(c1.clone(), c1.parse("-P0").unwrap()).unwrap();
        assert_eq!(speciality(&s, &PicClass::new(1, res(3))).unwrap(), Interval::exact(0));
    }

    #[test]
    fn cones() {
        let c1 = curve(1);
        let k = cone_speciality(c1, &res(3), D).unwrap();
        assert_eq!(k.speciality, Interval::exact(1));
        assert_eq!(k.closed_form, Interval::exact(1));
        let c2 = curve(2);
        let k = cone_speciality(c2.clone(), &c2.canonical(), D);
        // K is free on a genus 2 curve but not very ample; the cone is still special
        let k = k.unwrap();
        assert_eq!(k.speciality, Interval::exact(3));
        let k = cone_speciality(c2, &res(5), D).unwrap();
        assert_eq!(k.speciality, Interval::exact(2));
        assert!(cone_speciality(curve(0), &res(2), D).is_err());
    }

    #[test]
    fn deltas() {
        assert_eq!(projection_delta(1, 0).unwrap(), 0);
        assert_eq!(projection_delta(3, 1).unwrap(), 1);
        assert_eq!(projection_delta(2, 1).unwrap(), 0);
        assert!(matches!(projection_delta(1, 1), Err(Error::MalformedCycle { .. })));
    }

    #[test]
    fn ledger_is_persistent() {
        let l0 = SpecialityLedger::new(Interval::exact(0));
        let l1 = l0.append(3, 1).unwrap();
        assert_eq!(l0.events().len(), 0);
        assert_eq!(l1.current_i(), Interval::exact(1));
        assert!(l1.append(0, 0).is_err());
    }

    #[test]
    fn cone_test() {
        let c1 = curve(1);
        let k = cone_speciality(c1.clone(), &res(3), D).unwrap();
        assert_eq!(is_cone_test(&k.surface, &k.system, D).unwrap(), TriState::True);
        let s = RuledSurface::decomposable(c1.clone(), c1.parse("-P0").unwrap()).unwrap();
        assert_eq!(is_cone_test(&s, &PicClass::new(1, res(3)), D).unwrap(), TriState::False);
        let c0 = curve(0);
        let s = RuledSurface::decomposable(c0.clone(), c0.parse("-P0").unwrap()).unwrap();
        assert!(is_cone_test(&s, &PicClass::new(1, res(2)), D).is_err());
    }

    #[test]
    fn directrix_checks() {
        let c2 = curve(2);
        let k = cone_speciality(c2.clone(), &c2.canonical(), D).unwrap();
        // X₁ = X₀ + Kf on the cone
        let x1 = PicClass::new(1, c2.canonical());
        let chk = directrix_speciality_bound_check(&k.surface, &k.system, &x1).unwrap();
        assert_eq!(chk.h1_directrix, Interval::exact(1));
        assert_eq!(chk.h1_scroll, Interval::exact(3));
        assert_eq!(chk.holds, TriState::True);
        assert_eq!(chk.degree, 2);
    }

    #[test]
    fn special_directrix() {
        assert!(matches!(special_directrix_bounds(2, 5, 1), SpecialDirectrix::NotApplicable { .. }));
        assert!(matches!(special_directrix_bounds(2, 8, 0), SpecialDirectrix::NotApplicable { .. }));
        match special_directrix_bounds(2, 8, 1) {
            SpecialDirectrix::Guaranteed {
                points,
                feasibility_lhs,
                feasibility_rhs,
                max_directrix_degree,
                ..
            } => {
                assert_eq!((points, feasibility_lhs, feasibility_rhs, max_directrix_degree), (2, 4, 6, 2));
            }
            other => panic!("{other:?}"),
        }
        match special_directrix_bounds(1, 4, 1) {
            SpecialDirectrix::Guaranteed {
                feasibility_lhs,
                feasibility_rhs,
                ..
            } => assert_eq!((feasibility_lhs, feasibility_rhs), (2, 4)),
            other => panic!("{other:?}"),
        }
        // g = 2, 𝔢 = −P−Q, 𝔟 = K+P+Q: d = 6, i = h¹(K) = 1, X₀ embedded by K
        let c2 = curve(2);
        let s = RuledSurface::decomposable(c2.clone(), c2.parse("-P-Q").unwrap()).unwrap();
        let h = PicClass::new(1, c2.parse("K+P+Q").unwrap());
        let r = special_directrix_search(&s, &h).unwrap();
        assert_eq!(r.degree, 6);
        assert_eq!(r.speciality, Interval::exact(1));
        assert_eq!(r.cross_check, TriState::True);
    }

    proptest! {
        #[test]
        fn deltas_nonnegative(span in 0i64..6, extra in 0i64..6) {
            let d = projection_delta(span + 1 + extra, span).unwrap();
            prop_assert_eq!(d, extra);
        }

        #[test]
        fn cone_speciality_positive(g in 1i64..4, d in 0i64..10) {
            let c = curve(g);
            let b = res(2 * g + 1 + d);
            let k = cone_speciality(c, &b, D).unwrap();
            prop_assert!(k.speciality.lo >= 1);
            prop_assert_eq!(k.speciality, k.closed_form);
        }

        #[test]
        fn nonspecial_summands_give_nonspecial_scroll(g in 0i64..3, extra in 0i64..5, e in 0i64..3) {
            let c = curve(g);
            let e_class = DivisorClass::point("P0").scale(-e);
            let s = RuledSurface::decomposable(c, e_class).unwrap();
            // both summands of degree > 2g − 2
            let b = res(2 * g - 1 + e + extra);
            prop_assert_eq!(speciality(&s, &PicClass::new(1, b)).unwrap(), Interval::exact(0));
        }
    }
}
