//! Elementary transformations: blow up a point x on the fiber Pf and contract
//! the strict transform of that fiber.
//!
//! A step carries the point P = π(x) and a position flag locating x relative to
//! the distinguished sections. The flag is checked against what the curve
//! model can decide; steps whose outcome depends on undecidable data are
//! refused.

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::surface::{ChainLink, PicClass, RuledSurface, SectionId};
use crate::tri::TriState;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Position {
    OnX0,
    OnX1,
    OffBothGenericFiber,
    OffBothBasePointFiber,
    OnMinSection,
    OffMinSection,
    Unknown,
}

impl Position {
    pub const ALL: [Position; 7] = [
        Position::OnX0,
        Position::OnX1,
        Position::OffBothGenericFiber,
        Position::OffBothBasePointFiber,
        Position::OnMinSection,
        Position::OffMinSection,
        Position::Unknown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Position::OnX0 => "OnX0",
            Position::OnX1 => "OnX1",
            Position::OffBothGenericFiber => "OffBothGenericFiber",
            Position::OffBothBasePointFiber => "OffBothBasePointFiber",
            Position::OnMinSection => "OnMinSection",
            Position::OffMinSection => "OffMinSection",
            Position::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Position {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Position::ALL
            .iter()
            .copied()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown position {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElmStep {
    pub point: String,
    pub position: Position,
    /// Multiplicity at x of each tracked class; missing entries mean 0.
    #[serde(default)]
    pub multiplicities: BTreeMap<String, i64>,
}

impl ElmStep {
    pub fn new(point: impl Into<String>, position: Position) -> Self {
        ElmStep {
            point: point.into(),
            position,
            multiplicities: BTreeMap::new(),
        }
    }

    pub fn with_multiplicity(mut self, class: &str, mu: i64) -> Self {
        self.multiplicities.insert(class.to_string(), mu);
        self
    }
}

/// Which rule applied. The names say where x sits and what happens to e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ElmCase {
    /// x on X₀ of a decomposable surface: e+1, stays decomposable.
    MinSection,
    /// x on X₁ with e ≥ 1: e−1, X₀′ stays minimal.
    ComplementLower,
    /// x on X₁ with e = 0: e becomes 1 and X₁′ becomes minimal.
    ComplementSwap,
    /// x off X₀, X₁ on a fiber where |X₁| is free, e ≥ 1.
    GenericFiberLower,
    /// Same with e = 0: the curve of |X₁| through x becomes minimal.
    GenericFiberSwap,
    /// x off X₀, X₁ on a fiber over a base point of −𝔢: result indecomposable.
    BasePointFiber,
    /// x on the minimal section of a surface not known to be decomposable.
    MinSectionGeneral,
    /// Undoing a MinSectionGeneral step.
    OffMinSectionInverse,
}

impl ElmCase {
    pub fn e_change(self) -> i64 {
        match self {
            ElmCase::MinSection | ElmCase::ComplementSwap | ElmCase::GenericFiberSwap | ElmCase::MinSectionGeneral => 1,
            ElmCase::ComplementLower
            | ElmCase::GenericFiberLower
            | ElmCase::BasePointFiber
            | ElmCase::OffMinSectionInverse => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub point: String,
    pub position: Position,
    pub case: ElmCase,
    /// ν*X₀ = Y₀ + shift·f, with Y₀ the minimal section after the step.
    pub shift: DivisorClass,
    pub multiplicities: BTreeMap<String, i64>,
    pub e_before: i64,
    pub e_after: i64,
}

/// Decides the case of a step, validating the position flag.
pub fn resolve_case(s: &RuledSurface, point: &str, position: Position) -> Result<ElmCase> {
    let curve = s.curve();
    if !curve.is_point(point) {
        return Err(Error::UnknownPoint(point.to_string()));
    }
    let invalid = |reason: &str| Error::InvalidPosition {
        position: position.name().to_string(),
        point: point.to_string(),
        reason: reason.to_string(),
    };
    let undecidable = |reason: &str| Error::UndecidablePosition {
        position: position.name().to_string(),
        point: point.to_string(),
        reason: reason.to_string(),
    };
    let need_dec = || match s.is_decomposable() {
        TriState::True => Ok(()),
        TriState::False => Err(invalid("the surface is indecomposable, so X1 is not defined")),
        TriState::Unknown => Err(undecidable("decomposability of the surface is undetermined")),
    };
    match position {
        Position::Unknown => Err(undecidable("no position given")),
        Position::OffMinSection => Err(undecidable(
            "off the minimal section the outcome depends on curves through x that the model does not track",
        )),
        Position::OnX0 | Position::OnMinSection => Ok(if s.is_decomposable().is_true() {
            ElmCase::MinSection
        } else {
            ElmCase::MinSectionGeneral
        }),
        Position::OnX1 => {
            need_dec()?;
            Ok(if s.e() >= 1 {
                ElmCase::ComplementLower
            } else {
                ElmCase::ComplementSwap
            })
        }
        Position::OffBothGenericFiber => {
            need_dec()?;
            let neg = -s.e_class();
            match curve.h0(&neg)?.gt(0) {
                TriState::True => {}
                TriState::False => return Err(invalid("h0(-e_class) = 0")),
                TriState::Unknown => return Err(undecidable("h0(-e_class) > 0 is undecided")),
            }
            match curve.is_base_point(&neg, point)? {
                TriState::False => {}
                TriState::True => return Err(invalid("P is a base point of -e_class")),
                TriState::Unknown => return Err(undecidable("base-point status of P for -e_class is undecided")),
            }
            Ok(if s.e() >= 1 {
                ElmCase::GenericFiberLower
            } else {
                ElmCase::GenericFiberSwap
            })
        }
        Position::OffBothBasePointFiber => {
            need_dec()?;
            match curve.is_base_point(&-s.e_class(), point)? {
                TriState::True => Ok(ElmCase::BasePointFiber),
                TriState::False => Err(invalid("P is not a base point of -e_class")),
                TriState::Unknown => Err(undecidable("base-point status of P for -e_class is undecided")),
            }
        }
    }
}

fn check_multiplicity(m: i64, mu: i64) -> Result<()> {
    if mu < 0 || mu > m.max(0) {
        return Err(Error::MultiplicityOutOfRange { mu, m });
    }
    Ok(())
}

/// C′ = ν*C − μ·Pf written over the new minimal section.
pub fn transform_class_with_shift(c: &PicClass, shift: &DivisorClass, point: &str, mu: i64) -> Result<PicClass> {
    check_multiplicity(c.m, mu)?;
    let b = &(&c.b + &shift.scale(c.m)) - &DivisorClass::point(point).scale(mu);
    Ok(PicClass::new(c.m, b))
}

/// Transform of a class on the parent of `child` along its last step.
pub fn transform_class(child: &RuledSurface, c: &PicClass, mu: i64) -> Result<PicClass> {
    let link = child.link().ok_or(Error::NoStepToUndo)?;
    let r = &link.record;
    let out = transform_class_with_shift(c, &r.shift, &r.point, mu)?;
    Ok(PicClass::new(out.m, child.curve().normalize(&out.b)))
}

/// C′·D′ = C·D + nm − n·μ_D − m·μ_C for n-secant C and m-secant D.
pub fn transformed_intersection(cd: i64, n: i64, m: i64, mu_c: i64, mu_d: i64) -> i64 {
    cd + n * m - n * mu_d - m * mu_c
}

/// Where two unisecant curves meet after the step, pushed down to X, given
/// 𝔟 = π_*(C∩D) before it.
pub fn transformed_section_intersection_divisor(b: &DivisorClass, point: &str, x_on_c: bool, x_on_d: bool) -> DivisorClass {
    let p = DivisorClass::point(point);
    match (x_on_c, x_on_d) {
        (true, true) => b - &p,
        (false, false) => b + &p,
        _ => b.clone(),
    }
}

/// O_{C′}(C′) from O_C(C) ≅ O_X(𝔟) and the multiplicity of C at x.
pub fn self_intersection_twist(b: &DivisorClass, point: &str, mu: i64) -> DivisorClass {
    b + &DivisorClass::point(point).scale(1 - 2 * mu)
}

struct Outcome {
    e: i64,
    e_class: DivisorClass,
    decomposable: TriState,
    min_section: SectionId,
    complement: Option<SectionId>,
    shift: DivisorClass,
}

fn outcome(s: &RuledSurface, case: ElmCase, point: &str, fresh: &SectionId) -> Outcome {
    let p = DivisorClass::point(point);
    let g = s.genus();
    let x0 = s.min_section().primed();
    let x1 = s.complement().map(SectionId::primed);
    let lower = |complement: Option<SectionId>| Outcome {
        e: s.e() - 1,
        e_class: s.e_class() + &p,
        decomposable: TriState::True,
        min_section: x0.clone(),
        complement,
        shift: DivisorClass::zero(),
    };
    let swap = |new_min: SectionId| Outcome {
        e: 1,
        e_class: &(-s.e_class()) - &p,
        decomposable: TriState::True,
        min_section: new_min,
        complement: Some(x0.clone()),
        shift: s.e_class() + &p,
    };
    match case {
        ElmCase::MinSection => Outcome {
            e: s.e() + 1,
            e_class: s.e_class() - &p,
            decomposable: TriState::True,
            min_section: x0.clone(),
            complement: x1.clone(),
            shift: p.clone(),
        },
        ElmCase::ComplementLower => lower(x1.clone()),
        ElmCase::GenericFiberLower => lower(Some(fresh.primed())),
        ElmCase::ComplementSwap => swap(x1.clone().unwrap_or_else(|| SectionId::new("X1'"))),
        ElmCase::GenericFiberSwap => swap(fresh.primed()),
        ElmCase::BasePointFiber => Outcome {
            e: s.e() - 1,
            e_class: s.e_class() + &p,
            decomposable: TriState::False,
            min_section: x0.clone(),
            complement: None,
            shift: DivisorClass::zero(),
        },
        ElmCase::MinSectionGeneral => {
            let e = s.e() + 1;
            let decomposable = if e > 2 * g - 2 {
                TriState::True
            } else if e < 0 {
                TriState::False
            } else {
                TriState::Unknown
            };
            Outcome {
                e,
                e_class: s.e_class() - &p,
                decomposable,
                min_section: x0.clone(),
                complement: decomposable.is_true().then(|| SectionId::new("X1'")),
                shift: p.clone(),
            }
        }
        ElmCase::OffMinSectionInverse => Outcome {
            e: s.e() - 1,
            e_class: s.e_class() + &p,
            decomposable: TriState::Unknown,
            min_section: x0,
            complement: None,
            shift: DivisorClass::zero(),
        },
    }
}

/// Applies one elementary transformation.
pub fn transform_surface(s: &RuledSurface, step: &ElmStep) -> Result<RuledSurface> {
    let case = resolve_case(s, &step.point, step.position)?;
    let fresh = SectionId::new(format!("D{}", s.chain_len() + 1));
    let out = outcome(s, case, &step.point, &fresh);
    let curve = s.curve_arc().clone();
    let mut tracked = BTreeMap::new();
    for (name, c) in s.tracked() {
        let mu = step.multiplicities.get(name).copied().unwrap_or(0);
        let t = transform_class_with_shift(c, &out.shift, &step.point, mu)?;
        tracked.insert(name.clone(), PicClass::new(t.m, curve.normalize(&t.b)));
    }
    for name in step.multiplicities.keys() {
        if !s.tracked().contains_key(name) {
            return Err(Error::Precondition(format!("multiplicity given for untracked class {name:?}")));
        }
    }
    let record = StepRecord {
        point: step.point.clone(),
        position: step.position,
        case,
        shift: curve.normalize(&out.shift),
        multiplicities: step.multiplicities.clone(),
        e_before: s.e(),
        e_after: out.e,
    };
    let e_class = curve.normalize(&out.e_class);
    debug_assert_eq!(e_class.degree(), -out.e);
    let next = RuledSurface {
        curve,
        e: out.e,
        e_class,
        decomposable: out.decomposable,
        min_section: out.min_section,
        complement: out.complement,
        tracked,
        link: Some(Arc::new(ChainLink {
            parent: s.clone(),
            record,
        })),
    };
    next.check_segre()?;
    Ok(next)
}

/// Applies a list of steps in order.
pub fn apply_steps(s: &RuledSurface, steps: &[ElmStep]) -> Result<RuledSurface> {
    let mut cur = s.clone();
    for st in steps {
        cur = transform_surface(&cur, st)?;
    }
    Ok(cur)
}

/// The case that undoes `case`, read on the surface the step produced.
fn inverse_case(case: ElmCase) -> ElmCase {
    match case {
        ElmCase::MinSection => ElmCase::ComplementLower,
        ElmCase::ComplementLower | ElmCase::GenericFiberLower => ElmCase::MinSection,
        ElmCase::ComplementSwap | ElmCase::GenericFiberSwap => ElmCase::ComplementLower,
        ElmCase::BasePointFiber => ElmCase::MinSectionGeneral,
        ElmCase::MinSectionGeneral => ElmCase::OffMinSectionInverse,
        ElmCase::OffMinSectionInverse => ElmCase::MinSectionGeneral,
    }
}

/// Undoes the last step: the elementary transformation at the point y of the
/// new fiber that the contraction produced. `y` names that fiber's point on X.
pub fn inverse_step(child: &RuledSurface, y: &str) -> Result<RuledSurface> {
    let link = child.link().ok_or(Error::NoStepToUndo)?;
    let r = &link.record;
    let parent = &link.parent;
    if y != r.point {
        return Err(Error::NotDistinguishedPoint {
            given: y.to_string(),
            expected: r.point.clone(),
        });
    }
    let curve = child.curve_arc().clone();
    let inv = inverse_case(r.case);
    let unused = SectionId::new("-");
    let out = outcome(child, inv, &r.point, &unused);

    // labels go back by one prime
    let mut min_section = out.min_section.unprimed().unprimed();
    let mut complement = out.complement.map(|c| c.unprimed().unprimed());
    let mut e_class = curve.normalize(&out.e_class);
    let mut tracked = BTreeMap::new();
    for name in parent.tracked().keys() {
        let c = child.tracked().get(name).ok_or(Error::InconsistentChain { field: "tracked" })?;
        let mu = r.multiplicities.get(name).copied().unwrap_or(0);
        let t = transform_class_with_shift(c, &out.shift, &r.point, c.m.max(0) - mu)?;
        tracked.insert(name.clone(), PicClass::new(t.m, curve.normalize(&t.b)));
    }
    let decomposable = match out.decomposable {
        TriState::Unknown => parent.is_decomposable(),
        d => d,
    };

    let mut recovered = RuledSurface {
        curve: curve.clone(),
        e: out.e,
        e_class: e_class.clone(),
        decomposable,
        min_section: min_section.clone(),
        complement: complement.clone(),
        tracked,
        link: parent.link.clone(),
    };
    if matches!(r.case, ElmCase::ComplementSwap | ElmCase::GenericFiberSwap) {
        // the inverse lands on the same e = 0 surface with X₀ and X₁ exchanged
        recovered = recovered.swapped();
        min_section = recovered.min_section.clone();
        e_class = recovered.e_class.clone();
        complement = recovered.complement.clone();
    }
    if matches!(r.case, ElmCase::GenericFiberLower | ElmCase::GenericFiberSwap) {
        // the auxiliary curve of |X₁| through x is replaced by X₁ itself
        if r.case == ElmCase::GenericFiberSwap {
            min_section = parent.min_section.clone();
        }
        complement = parent.complement.clone();
    }
    recovered.min_section = min_section;
    recovered.complement = complement.or_else(|| parent.complement.clone());
    recovered.e_class = e_class;

    if recovered.e != parent.e {
        return Err(Error::InconsistentChain { field: "e" });
    }
    if !curve.equivalent(&recovered.e_class, &parent.e_class) {
        return Err(Error::InconsistentChain { field: "e_class" });
    }
    if recovered.decomposable != parent.decomposable {
        return Err(Error::InconsistentChain { field: "decomposable" });
    }
    if recovered.min_section != parent.min_section {
        return Err(Error::InconsistentChain { field: "min_section" });
    }
    if recovered.tracked != parent.tracked {
        return Err(Error::InconsistentChain { field: "tracked" });
    }
    recovered.check_segre()?;
    Ok(recovered)
}

/// Projection of the scroll of |H| from the image of a point x on Pf: the
/// elementary transform at x together with H′ = ν*H − Pf.
///
/// With no explicit position, x is a general point of its fiber. That pins
/// down the case on a decomposable surface; elsewhere a position is required.
pub fn project_scroll(
    s: &RuledSurface,
    h: &PicClass,
    point: &str,
    position: Option<Position>,
    smooth_image: bool,
) -> Result<(RuledSurface, PicClass)> {
    if h.m != 1 {
        return Err(Error::Precondition(format!("projection needs a unisecant system, got m = {}", h.m)));
    }
    if !smooth_image {
        return Err(Error::SingularCenter(point.to_string()));
    }
    let position = match position {
        Some(p) => p,
        None => general_fiber_position(s, point)?,
    };
    let step = ElmStep::new(point, position);
    let next = transform_surface(s, &step)?;
    let h2 = transform_class(&next, h, 1)?;
    Ok((next, h2))
}

/// The position of a general point of the fiber over `point`.
pub fn general_fiber_position(s: &RuledSurface, point: &str) -> Result<Position> {
    let undecidable = |reason: &str| Error::UndecidablePosition {
        position: Position::OffMinSection.name().to_string(),
        point: point.to_string(),
        reason: reason.to_string(),
    };
    if !s.is_decomposable().is_true() {
        return Err(undecidable("a general point of the fiber is off the minimal section; give an explicit position"));
    }
    let curve = s.curve();
    let neg = -s.e_class();
    let has_sections = curve.h0(&neg)?.gt(0);
    let base = curve.is_base_point(&neg, point)?;
    match (has_sections, base) {
        (TriState::True, TriState::False) => Ok(Position::OffBothGenericFiber),
        (_, TriState::True) => Ok(Position::OffBothBasePointFiber),
        _ => Err(undecidable("cannot tell whether P is a base point of -e_class")),
    }
}

/// Steps on X₀ from the product surface that rebuild a decomposable surface,
/// one for each point of −𝔢 written as a sum of named points.
pub fn nagata_chain(s: &RuledSurface) -> Result<Vec<ElmStep>> {
    if !s.is_decomposable().is_true() {
        return Err(Error::Precondition("nagata_chain starts from a decomposable surface".into()));
    }
    let neg = s.curve().normalize(&-s.e_class());
    let mut steps = Vec::new();
    for (a, c) in neg.terms() {
        let name = match a {
            crate::divisor::Atom::Point(n) if c > 0 => n,
            _ => return Err(Error::AliasRequired(neg.to_string())),
        };
        for _ in 0..c {
            steps.push(ElmStep::new(name.clone(), Position::OnX0));
        }
    }
    Ok(steps)
}

/// nagata_chain of the anchor followed by the recorded steps of the chain.
pub fn construction_chain(s: &RuledSurface) -> Result<Vec<ElmStep>> {
    let mut steps = nagata_chain(s.anchor())?;
    for r in s.steps() {
        steps.push(ElmStep {
            point: r.point.clone(),
            position: r.position,
            multiplicities: r.multiplicities.clone(),
        });
    }
    Ok(steps)
}

/// Repeated steps on the minimal section until the surface is forced to be
/// decomposable (e > 2g−2). Returns the steps and the final surface.
pub fn reduce_to_decomposable(s: &RuledSurface, points: &[&str]) -> Result<(Vec<ElmStep>, RuledSurface)> {
    let g = s.genus();
    let mut cur = s.clone();
    let mut steps = Vec::new();
    let mut i = 0;
    while !cur.is_decomposable().is_true() {
        if points.is_empty() {
            return Err(Error::Precondition("no points to transform at".into()));
        }
        let step = ElmStep::new(points[i % points.len()], Position::OnMinSection);
        cur = transform_surface(&cur, &step)?;
        steps.push(step);
        i += 1;
        debug_assert!(cur.e() <= 2 * g - 1);
    }
    Ok((steps, cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveModel;

    fn curve(g: i64) -> Arc<CurveModel> {
        Arc::new(CurveModel::generic(g, &["P", "Q", "P0"]).unwrap())
    }

    fn dec(c: &Arc<CurveModel>, e: &str) -> RuledSurface {
        RuledSurface::decomposable(c.clone(), c.parse(e).unwrap()).unwrap()
    }

    #[test]
    fn case_one_raises_e() {
        let c = curve(1);
        let s = RuledSurface::product(c.clone());
        let t = transform_surface(&s, &ElmStep::new("P", Position::OnX0)).unwrap();
        assert_eq!(t.e(), 1);
        assert_eq!(t.e_class(), &c.parse("-P").unwrap());
        assert!(t.is_decomposable().is_true());
        assert_eq!(t.min_section().0, "X0'");
        assert_eq!(t.min_section_self_int(), -1);
    }

    #[test]
    fn case_two_both_branches() {
        let c = curve(1);
        let s = dec(&c, "-P");
        let t = transform_surface(&s, &ElmStep::new("Q", Position::OnX1)).unwrap();
        assert_eq!((t.e(), t.e_class().clone()), (0, c.parse("Q-P").unwrap()));
        assert_eq!(t.min_section().0, "X0'");
        let u = transform_surface(&t, &ElmStep::new("P", Position::OnX1)).unwrap();
        assert_eq!(u.e(), 1);
        assert_eq!(u.e_class(), &c.parse("-Q").unwrap());
        assert_eq!(u.min_section().0, "X1''");
    }

    #[test]
    fn case_four_gives_the_indecomposable_elliptic_surface() {
        let c = curve(1);
        let s = dec(&c, "-P0");
        let t = transform_surface(&s, &ElmStep::new("P0", Position::OffBothBasePointFiber)).unwrap();
        assert_eq!(t.e(), 0);
        assert_eq!(t.is_decomposable(), TriState::False);
        assert!(t.e_class().is_zero());
        // P is not a base point of P0 on an elliptic curve
        assert!(matches!(
            transform_surface(&s, &ElmStep::new("P", Position::OffBothBasePointFiber)),
            Err(Error::InvalidPosition { .. })
        ));
        assert!(matches!(
            transform_surface(&t, &ElmStep::new("P", Position::OnX1)),
            Err(Error::InvalidPosition { .. })
        ));
    }

    #[test]
    fn refuses_undecidable_positions() {
        let c = curve(1);
        let s = dec(&c, "-P0");
        for pos in [Position::Unknown, Position::OffMinSection] {
            assert!(matches!(
                transform_surface(&s, &ElmStep::new("P", pos)),
                Err(Error::UndecidablePosition { .. })
            ));
        }
        assert!(matches!(
            transform_surface(&s, &ElmStep::new("Z", Position::OnX0)),
            Err(Error::UnknownPoint(_))
        ));
    }

    #[test]
    fn intersections_closed_form() {
        assert_eq!(transformed_intersection(3, 1, 1, 1, 1), 2);
        assert_eq!(transformed_intersection(3, 1, 1, 0, 0), 4);
        assert_eq!(transformed_intersection(3, 0, 0, 0, 0), 3);
        assert_eq!(transformed_intersection(0, 2, 1, 1, 0), 1);
        let b = DivisorClass::point("R");
        assert_eq!(transformed_section_intersection_divisor(&b, "P", true, true).degree(), 0);
        assert_eq!(transformed_section_intersection_divisor(&b, "P", false, false).degree(), 2);
        assert_eq!(transformed_section_intersection_divisor(&b, "P", true, false), b);
        assert_eq!(self_intersection_twist(&b, "P", 0), &b + &DivisorClass::point("P"));
    }

    #[test]
    fn class_transform_and_round_trip() {
        let c = curve(1);
        let s = dec(&c, "-P0")
            .with_tracked("X1", PicClass::new(1, c.parse("P0").unwrap()))
            .with_tracked("F", PicClass::fiber(c.parse("Q").unwrap()));
        let step = ElmStep::new("P", Position::OnX0).with_multiplicity("X1", 0);
        let t = transform_surface(&s, &step).unwrap();
        assert_eq!(t.tracked()["X1"], PicClass::new(1, c.parse("P0+P").unwrap()));
        assert_eq!(t.tracked()["F"], PicClass::fiber(c.parse("Q").unwrap()));
        let back = inverse_step(&t, "P").unwrap();
        assert!(back.same_invariants(&s));
        assert!(matches!(inverse_step(&t, "Q"), Err(Error::NotDistinguishedPoint { .. })));
        assert!(matches!(inverse_step(&s, "P"), Err(Error::NoStepToUndo)));
    }

    #[test]
    fn multiplicity_range() {
        let c = curve(1);
        let s = dec(&c, "-P0").with_tracked("C", PicClass::new(1, DivisorClass::zero()));
        let bad = ElmStep::new("P", Position::OnX0).with_multiplicity("C", 2);
        assert!(matches!(transform_surface(&s, &bad), Err(Error::MultiplicityOutOfRange { .. })));
    }

    #[test]
    fn nagata_replay() {
        let c = curve(1);
        let s = dec(&c, "-P-2Q");
        let steps = nagata_chain(&s).unwrap();
        assert_eq!(steps.len(), 3);
        let r = apply_steps(&RuledSurface::product(c.clone()), &steps).unwrap();
        assert_eq!(r.e(), 3);
        assert!(c.equivalent(r.e_class(), s.e_class()));
        assert!(nagata_chain(&RuledSurface::product(c.clone())).unwrap().is_empty());
        let w = dec(&c, "res(-1,ne)");
        assert!(matches!(nagata_chain(&w), Err(Error::AliasRequired(_))));
    }

    #[test]
    fn projections_lower_degree() {
        let c = curve(1);
        let s = dec(&c, "-P0");
        let h = PicClass::new(1, DivisorClass::generic_effective(3));
        let (t, h1) = project_scroll(&s, &h, "@x1", None, true).unwrap();
        assert_eq!(t.scroll_degree(&h1).unwrap(), 4);
        assert!(t.is_decomposable().is_true());
        let (u, h2) = project_scroll(&t, &h1, "@x2", None, true).unwrap();
        assert_eq!(u.scroll_degree(&h2).unwrap(), 3);
        assert_eq!(u.e(), -1);
        assert_eq!(u.is_decomposable(), TriState::False);
        assert!(matches!(project_scroll(&s, &h, "@x1", None, false), Err(Error::SingularCenter(_))));
        assert!(matches!(project_scroll(&u, &h2, "@x3", None, true), Err(Error::UndecidablePosition { .. })));
    }

    #[test]
    fn reduce_reaches_decomposable() {
        let c = curve(1);
        let s = dec(&c, "-P0");
        let t = transform_surface(&s, &ElmStep::new("P0", Position::OffBothBasePointFiber)).unwrap();
        let (steps, r) = reduce_to_decomposable(&t, &["P"]).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(r.e(), 1);
        assert!(r.is_decomposable().is_true());
    }
}
