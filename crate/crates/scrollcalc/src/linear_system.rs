//! Complete linear systems |mX₀ + 𝔟f|: dimensions, base points, irreducibility
//! of the general member, very ampleness, and what the induced map does.
//!
//! Statements quantified over all points of the curve are evaluated over the
//! named points plus symbolic generic ones (see [`QuantifierDomain`]). A
//! criterion that needs every point is only used to refute, never to certify,
//! unless a certificate covering all points is available.

use crate::curve::{CurveModel, QuantifierDomain, GENERIC_POINT, GENERIC_POINT_2};
use crate::divisor::DivisorClass;
use crate::elm::ElmCase;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::surface::{PicClass, RuledSurface, SectionId};
use crate::tri::TriState;
use serde::Serialize;

fn pt(p: &str) -> DivisorClass {
    DivisorClass::point(p)
}

/// 𝔟 + k𝔢 for k = 0..=m.
pub fn summands(s: &RuledSurface, m: i64, b: &DivisorClass) -> Vec<DivisorClass> {
    (0..=m.max(0))
        .map(|k| s.curve().normalize(&(b + &s.e_class().scale(k))))
        .collect()
}

fn curve_hi(c: &CurveModel, d: &DivisorClass, i: u32) -> Result<Interval> {
    Ok(match i {
        0 => c.h0(d)?,
        1 => c.h1(d)?,
        _ => Interval::exact(0),
    })
}

/// h^i on a decomposable surface: the sum of h^i(𝔟 + k𝔢) over k = 0..=m.
pub fn h_i_decomposable(s: &RuledSurface, m: i64, b: &DivisorClass, i: u32) -> Result<Interval> {
    if !s.is_decomposable().is_true() {
        return Err(Error::Precondition("the splitting formula needs a decomposable surface".into()));
    }
    if m < 0 {
        return Err(Error::Precondition(format!("negative secancy m = {m}")));
    }
    let mut acc = Interval::exact(0);
    for d in summands(s, m, b) {
        acc = acc + curve_hi(s.curve(), &d, i)?;
    }
    Ok(acc)
}

/// [0, Σ h^i(𝔟 + k𝔢)], valid on any ruled surface.
pub fn h_i_upper_bound(s: &RuledSurface, m: i64, b: &DivisorClass, i: u32) -> Result<Interval> {
    if m < 0 {
        return Err(Error::Precondition(format!("negative secancy m = {m}")));
    }
    let mut hi = 0;
    for d in summands(s, m, b) {
        hi += curve_hi(s.curve(), &d, i)?.hi;
    }
    Ok(Interval::new(0, hi))
}

/// χ(O_S(mX₀ + 𝔟f)) = (m+1)(deg 𝔟 + 1 − g) − e·m(m+1)/2.
pub fn euler_characteristic(s: &RuledSurface, m: i64, b_deg: i64) -> i64 {
    (m + 1) * (b_deg + 1 - s.genus()) - s.e() * m * (m + 1) / 2
}

pub fn h0(s: &RuledSurface, c: &PicClass) -> Result<Interval> {
    if c.m < 0 {
        return Ok(Interval::exact(0));
    }
    if c.m == 0 {
        return Ok(s.curve().h0(&c.b)?);
    }
    if s.is_decomposable().is_true() {
        return h_i_decomposable(s, c.m, &c.b, 0);
    }
    if c.m == 1 && s.link().is_some() {
        return h0_chain(s, c);
    }
    general_bounds(s, c)
}

fn general_bounds(s: &RuledSurface, c: &PicClass) -> Result<Interval> {
    let chi = euler_characteristic(s, c.m, c.b.degree());
    let hi = h_i_upper_bound(s, c.m, &c.b, 0)?.hi;
    Ok(Interval::new(chi.max(0).min(hi), hi))
}

/// h¹ from h⁰ and Riemann–Roch (h² vanishes for m ≥ 0), met with the
/// summand bound.
pub fn h1(s: &RuledSurface, c: &PicClass) -> Result<Interval> {
    if c.m < 0 {
        return Err(Error::Precondition(format!("negative secancy m = {}", c.m)));
    }
    let chi = euler_characteristic(s, c.m, c.b.degree());
    let from_rr = (h0(s, c)? - chi).clamp_min(0);
    let bound = h_i_upper_bound(s, c.m, &c.b, 1)?;
    from_rr
        .meet(&bound)
        .ok_or_else(|| Error::Precondition(format!("h1 bounds for {c} are contradictory")))
}

/// h⁰ of a unisecant class on a chain surface, by pulling back along the
/// chain to the decomposable anchor. At each step the center either is or is
/// not a base point of the corresponding system on the previous surface,
/// which costs 0 or 1 dimension.
pub fn h0_chain(s: &RuledSurface, h: &PicClass) -> Result<Interval> {
    if h.m != 1 {
        return Err(Error::Precondition(format!("h0_chain needs a unisecant class, got m = {}", h.m)));
    }
    let link = match s.link() {
        None => {
            return if s.is_decomposable().is_true() {
                h_i_decomposable(s, 1, &h.b, 0)
            } else {
                general_bounds(s, h)
            }
        }
        Some(l) => l,
    };
    let parent = &link.parent;
    let r = &link.record;
    let curve = s.curve();
    // H = ν*X₀ + (𝔟 − shift)f, and |ν*C + 𝔞f| ≅ |C + (𝔞 + P)f − x|
    let c = curve.normalize(&(&(&h.b - &r.shift) + &pt(&r.point)));
    let above = PicClass::new(1, c.clone());
    let hp = h0_chain(parent, &above)?;
    let base = center_is_base_point(parent, r.case, &r.point, &c)?;
    Ok(match base {
        TriState::True => hp,
        TriState::False => (hp - 1).clamp_min(0),
        TriState::Unknown => Interval::new((hp.lo - 1).max(0), hp.hi),
    })
}

/// Whether the center of a step is a base point of |X₀ + 𝔠f| on the surface
/// the step started from.
fn center_is_base_point(parent: &RuledSurface, case: ElmCase, p: &str, c: &DivisorClass) -> Result<TriState> {
    let curve = parent.curve();
    let ce = curve.normalize(&(c + parent.e_class()));
    Ok(match case {
        // x = X₀ ∩ Pf
        ElmCase::MinSection => curve.is_base_point(&ce, p)?,
        // x = X₁ ∩ Pf
        ElmCase::ComplementLower | ElmCase::ComplementSwap => curve.is_base_point(c, p)?,
        // x off both: only a fixed fiber passes through it
        ElmCase::GenericFiberLower | ElmCase::GenericFiberSwap | ElmCase::BasePointFiber => {
            curve.is_base_point(c, p)?.and(curve.is_base_point(&ce, p)?)
        }
        ElmCase::MinSectionGeneral | ElmCase::OffMinSectionInverse => {
            let full = h0_chain(parent, &PicClass::new(1, c.clone()))?;
            let less = h0_chain(parent, &PicClass::new(1, curve.normalize(&(c - &pt(p)))))?;
            match drop(full, less).value() {
                Some(2) => TriState::False,
                Some(0) => TriState::True,
                // the one base point on Pf is X₀ ∩ Pf when P is a base point of 𝔠 + 𝔢
                Some(1) if curve.is_base_point(&ce, p)?.is_true() => TriState::True,
                _ => TriState::Unknown,
            }
        }
    })
}

/// h⁰(A) − h⁰(B) for B ⊆ A, as an interval clipped at 0.
fn drop(a: Interval, b: Interval) -> Interval {
    let lo = (a.lo - b.hi).max(0);
    let hi = (a.hi - b.lo).max(lo);
    Interval::new(lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseKind {
    FreeOnGenerator,
    PointOnX0,
    PointOnX1,
    SinglePointUnlocated,
    FixedGenerator,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseEntry {
    pub generator: String,
    pub kind: BaseKind,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseLocus {
    pub entries: Vec<BaseEntry>,
    pub bpf: TriState,
    pub criterion: &'static str,
}

impl BaseLocus {
    pub fn kinds_at(&self, generator: &str) -> Vec<BaseKind> {
        self.entries.iter().filter(|e| e.generator == generator).map(|e| e.kind).collect()
    }
}

fn entry(p: &str, kind: BaseKind, witness: String) -> BaseEntry {
    BaseEntry {
        generator: p.to_string(),
        kind,
        witness,
    }
}

pub fn base_locus(s: &RuledSurface, c: &PicClass, domain: QuantifierDomain) -> Result<BaseLocus> {
    let curve = s.curve();
    if c.m < 0 {
        return Err(Error::Precondition(format!("negative secancy m = {}", c.m)));
    }
    if c.m == 0 || s.is_decomposable().is_true() {
        return decomposable_base_locus(s, c, domain);
    }
    let mut entries = Vec::new();
    let b = curve.normalize(&c.b);
    let be = curve.normalize(&(&b + s.e_class()));
    if c.m > 1 {
        for p in curve.domain_points(domain) {
            entries.push(entry(&p, BaseKind::Unknown, "no criterion for m-secant systems here".into()));
        }
        return Ok(BaseLocus {
            entries,
            bpf: TriState::Unknown,
            criterion: "none available",
        });
    }
    let h = h0(s, c)?;
    let nonspecial = curve.h1(&b)?.eq_value(0);
    for p in curve.domain_points(domain) {
        let less = h0(s, &PicClass::new(1, curve.normalize(&(&b - &pt(&p)))))?;
        let d = drop(h, less);
        let witness = format!("h0(H) - h0(H - {p}f) = {d}");
        let kind = match d.value() {
            Some(2) => BaseKind::FreeOnGenerator,
            Some(0) => BaseKind::FixedGenerator,
            Some(1) => {
                if curve.is_base_point(&be, &p)?.is_true() {
                    BaseKind::PointOnX0
                } else {
                    BaseKind::SinglePointUnlocated
                }
            }
            _ if nonspecial.is_true() => {
                match (curve.is_base_point(&b, &p)?, curve.is_base_point(&be, &p)?) {
                    (TriState::False, TriState::False) => BaseKind::FreeOnGenerator,
                    (TriState::False, TriState::True) => BaseKind::PointOnX0,
                    _ => BaseKind::Unknown,
                }
            }
            _ => BaseKind::Unknown,
        };
        entries.push(entry(&p, kind, witness));
    }
    // b nonspecial with b and b + e free gives a free system
    let certificate = nonspecial
        .and(curve.is_bpf(&b, domain)?)
        .and(curve.is_bpf(&be, domain)?);
    let refuted = entries.iter().any(|e| {
        matches!(
            e.kind,
            BaseKind::FixedGenerator | BaseKind::PointOnX0 | BaseKind::PointOnX1 | BaseKind::SinglePointUnlocated
        )
    });
    let (bpf, criterion) = if certificate.is_true() {
        (TriState::True, "nonspecial b with b and b+e base-point-free")
    } else if refuted {
        (TriState::False, "h0 drop at a generator")
    } else {
        (TriState::Unknown, "h0 drop test over the quantifier domain")
    };
    Ok(BaseLocus {
        entries,
        bpf,
        criterion,
    })
}

fn decomposable_base_locus(s: &RuledSurface, c: &PicClass, domain: QuantifierDomain) -> Result<BaseLocus> {
    let curve = s.curve();
    let sums = summands(s, c.m, &c.b);
    let first = &sums[0];
    let last = &sums[sums.len() - 1];
    let mut entries = Vec::new();
    for p in curve.domain_points(domain) {
        let on_x1 = curve.is_base_point(first, &p)?;
        let on_x0 = curve.is_base_point(last, &p)?;
        let mut all = TriState::True;
        for d in &sums {
            all = all.and(curve.is_base_point(d, &p)?);
        }
        let witness = format!("{p} base point of b: {on_x1}, of b+{}e: {on_x0}, of every b+ke: {all}", c.m);
        if all.is_true() {
            entries.push(entry(&p, BaseKind::FixedGenerator, witness));
            continue;
        }
        let before = entries.len();
        if on_x1.is_true() {
            entries.push(entry(&p, BaseKind::PointOnX1, witness.clone()));
        }
        if on_x0.is_true() {
            entries.push(entry(&p, BaseKind::PointOnX0, witness.clone()));
        }
        let settled = on_x1.is_false() && on_x0.is_false();
        if entries.len() == before && settled {
            entries.push(entry(&p, BaseKind::FreeOnGenerator, witness));
        } else if !(on_x0.is_false() || on_x0.is_true()) || !(on_x1.is_false() || on_x1.is_true()) {
            entries.push(entry(&p, BaseKind::Unknown, witness));
        }
    }
    let mut bpf = curve.is_bpf(first, domain)?;
    if c.m > 0 {
        bpf = bpf.and(curve.is_bpf(last, domain)?);
    }
    if entries.iter().any(|e| !matches!(e.kind, BaseKind::FreeOnGenerator | BaseKind::Unknown)) {
        bpf = TriState::False;
    }
    Ok(BaseLocus {
        entries,
        bpf,
        criterion: "decomposable: base points of b and b+me",
    })
}

/// Whether the general member of |X₀ + 𝔟f| is irreducible, with the name
/// of the criterion used.
pub fn generic_member_irreducible(
    s: &RuledSurface,
    b: &DivisorClass,
    domain: QuantifierDomain,
) -> Result<(TriState, &'static str)> {
    let curve = s.curve();
    let b = curve.normalize(b);
    let be = curve.normalize(&(&b + s.e_class()));
    let trivial = |d: &DivisorClass| -> Result<TriState> {
        Ok(if d.degree() == 0 {
            curve.h0(d)?.eq_value(1)
        } else {
            TriState::False
        })
    };
    let effective = curve.h0(&b)?.ge(1).and(curve.h0(&be)?.ge(1));
    let no_common = if curve.is_bpf(&b, domain)?.is_true() || curve.is_bpf(&be, domain)?.is_true() {
        TriState::True
    } else {
        let mut acc = TriState::Unknown;
        for p in curve.domain_points(domain) {
            if curve.is_base_point(&b, &p)?.and(curve.is_base_point(&be, &p)?).is_true() {
                acc = TriState::False;
            }
        }
        acc
    };
    if s.is_decomposable().is_true() {
        let v = trivial(&b)?.or(trivial(&be)?).or(effective.and(no_common));
        return Ok((v, "decomposable: b ~ 0, b ~ -e, or effective summands without common base point"));
    }
    let sufficient = curve.h1(&b)?.eq_value(0).and(effective).and(no_common);
    if sufficient.is_true() {
        return Ok((TriState::True, "nonspecial b with effective b, b+e without common base point"));
    }
    let h = PicClass::new(1, b.clone());
    let hv = h0(s, &h)?;
    if hv.hi == 0 {
        return Ok((TriState::False, "empty system"));
    }
    for p in curve.domain_points(domain) {
        let less = h0(s, &PicClass::new(1, curve.normalize(&(&b - &pt(&p)))))?;
        let d = drop(hv, less);
        if hv == Interval::exact(1) && less.lo >= 1 {
            return Ok((TriState::False, "the only member contains a generator"));
        }
        if hv.lo > 1 && d == Interval::exact(0) {
            return Ok((TriState::False, "fixed generator"));
        }
        if hv.lo > 1 && p == GENERIC_POINT && d == Interval::exact(1) {
            return Ok((TriState::False, "a base point on the general generator gives a fixed unisecant curve"));
        }
    }
    Ok((TriState::Unknown, "codimension conditions undecided on the quantifier domain"))
}

pub fn is_very_ample(s: &RuledSurface, c: &PicClass, domain: QuantifierDomain) -> Result<(TriState, &'static str)> {
    let curve = s.curve();
    if c.m < 1 {
        return Err(Error::Precondition(format!("very ampleness needs m >= 1, got m = {}", c.m)));
    }
    let va = |d: &DivisorClass| curve.is_very_ample(d, domain);
    let bpf = |d: &DivisorClass| curve.is_bpf(d, domain);
    if s.is_decomposable().is_true() {
        let sums = summands(s, c.m, &c.b);
        let m = c.m as usize;
        if m == 1 {
            let v = va(&sums[0])?.and(va(&sums[1])?);
            return Ok((v, "decomposable unisecant: b and b+e very ample"));
        }
        let v = TriState::all([
            bpf(&sums[0])?,
            bpf(&sums[1])?,
            bpf(&sums[m - 1])?,
            bpf(&sums[m])?,
            va(&sums[0])?,
            va(&sums[m])?,
        ]);
        return Ok((v, "decomposable m-secant: b, b+e, b+(m-1)e, b+me free and b, b+me very ample"));
    }
    if base_locus(s, c, domain)?.bpf.is_false() {
        return Ok((TriState::False, "not base-point-free"));
    }
    if c.m > 1 {
        return Ok((TriState::Unknown, "no criterion for m-secant systems on this surface"));
    }
    let b = curve.normalize(&c.b);
    let be = curve.normalize(&(&b + s.e_class()));
    let sufficient = curve.h1(&b)?.eq_value(0).and(va(&b)?).and(va(&be)?);
    if sufficient.is_true() {
        return Ok((TriState::True, "nonspecial b with b and b+e very ample"));
    }
    let h = h0(s, c)?;
    for (p, q) in pairs_with_doubles(curve, domain) {
        let less = h0(s, &PicClass::new(1, curve.normalize(&(&(&b - &pt(&p)) - &pt(&q)))))?;
        if drop(h, less).eq_value(4).is_false() {
            return Ok((TriState::False, "h0(H - (P+Q)f) differs from h0(H) - 4"));
        }
    }
    Ok((TriState::Unknown, "drop-by-four test undecided on the quantifier domain"))
}

/// Pairs {P, Q} with P ≠ Q followed by the doubled points (P, P).
pub fn pairs_with_doubles(curve: &CurveModel, domain: QuantifierDomain) -> Vec<(String, String)> {
    let mut v = curve.domain_pairs(domain);
    v.extend(curve.domain_points(domain).into_iter().map(|p| (p.clone(), p)));
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LocusPiece {
    WholeSection { section: SectionId },
    PointOnSection { section: SectionId, generator: String, via: String },
    UnlocatedPoint { generator: String, via: String },
    Generator { generator: String, via: String },
    Undecided { generator: String, via: String },
}

/// The closed set K where the map of a free unisecant system fails to be an
/// isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsomorphismLocus {
    pub pieces: Vec<LocusPiece>,
    /// K lies inside this section, when a criterion says so.
    pub contained_in: Option<SectionId>,
    /// True when the pieces describe all of K and not only its trace on the
    /// quantifier domain.
    pub complete: bool,
}

impl IsomorphismLocus {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

pub fn isomorphism_locus(s: &RuledSurface, h: &PicClass, domain: QuantifierDomain) -> Result<IsomorphismLocus> {
    if h.m != 1 {
        return Err(Error::Precondition(format!("isomorphism locus needs a unisecant system, got m = {}", h.m)));
    }
    let curve = s.curve();
    if base_locus(s, h, domain)?.bpf.is_false() {
        return Err(Error::NotBasePointFree);
    }
    if is_very_ample(s, h, domain)?.0.is_true() {
        return Ok(IsomorphismLocus {
            pieces: Vec::new(),
            contained_in: None,
            complete: true,
        });
    }
    let b = curve.normalize(&h.b);
    let be = curve.normalize(&(&b + s.e_class()));
    let mut pieces = Vec::new();
    let ordered: Vec<(String, String)> = pairs_with_doubles(curve, domain)
        .into_iter()
        .flat_map(|(p, q)| {
            if p == q {
                vec![(p, q)]
            } else {
                vec![(p.clone(), q.clone()), (q, p)]
            }
        })
        .collect();
    if s.is_decomposable().is_true() {
        let x0 = s.min_section().clone();
        let x1 = s.complement().cloned().unwrap_or_else(|| SectionId::new("X1"));
        let mut whole = Vec::new();
        // the whole section when its own map is not birational, or when a
        // general point is a base point of 𝔟+𝔢−P for general P
        for (a, sec) in [(&be, &x0), (&b, &x1)] {
            let t = curve.normalize(&(a - &pt(GENERIC_POINT)));
            let generic_hit = domain == QuantifierDomain::NamedAndGeneric
                && curve.is_base_point(&t, GENERIC_POINT_2)?.is_true();
            let collapsed = !matches!(curve_map_birational(curve, a, domain)?, Some(t) if !t.is_false());
            if generic_hit || collapsed {
                whole.push(sec.clone());
                pieces.push(LocusPiece::WholeSection { section: sec.clone() });
            }
        }
        for (p, q) in &ordered {
            let bp = curve.normalize(&(&b - &pt(p)));
            let bep = curve.normalize(&(&be - &pt(p)));
            let on1 = curve.is_base_point(&bp, q)?;
            let on0 = curve.is_base_point(&bep, q)?;
            let via = format!("base points of |H - {p}f| on {q}f");
            if on0.and(on1).is_true() {
                pieces.push(LocusPiece::Generator {
                    generator: q.clone(),
                    via,
                });
                continue;
            }
            for (flag, sec) in [(on0, &x0), (on1, &x1)] {
                if flag.is_true() && !whole.contains(sec) {
                    pieces.push(LocusPiece::PointOnSection {
                        section: sec.clone(),
                        generator: q.clone(),
                        via: via.clone(),
                    });
                }
            }
            if on0.is_unknown() || on1.is_unknown() {
                pieces.push(LocusPiece::Undecided {
                    generator: q.clone(),
                    via,
                });
            }
        }
        pieces.dedup();
        let va_b = curve.is_very_ample(&b, domain)?;
        let va_be = curve.is_very_ample(&be, domain)?;
        let contained_in = if va_b.and(curve.is_bpf(&be, domain)?).is_true() {
            Some(x0.clone())
        } else if va_be.and(curve.is_bpf(&b, domain)?).is_true() {
            Some(x1.clone())
        } else {
            None
        };
        let complete = match &contained_in {
            Some(sec) => whole.contains(sec),
            None => false,
        };
        return Ok(IsomorphismLocus {
            pieces,
            contained_in,
            complete,
        });
    }
    for (p, q) in &ordered {
        let bp = curve.normalize(&(&b - &pt(p)));
        let bpq = curve.normalize(&(&bp - &pt(q)));
        let d = drop(h0(s, &PicClass::new(1, bp))?, h0(s, &PicClass::new(1, bpq.clone()))?);
        let via = format!("h0(H - {p}f) - h0(H - {p}f - {q}f) = {d}");
        let bep = curve.normalize(&(&be - &pt(p)));
        match d.value() {
            Some(2) => {}
            Some(0) => pieces.push(LocusPiece::Generator {
                generator: q.clone(),
                via,
            }),
            Some(1) if curve.is_base_point(&bep, q)?.is_true() => pieces.push(LocusPiece::PointOnSection {
                section: s.min_section().clone(),
                generator: q.clone(),
                via,
            }),
            Some(1) => pieces.push(LocusPiece::UnlocatedPoint {
                generator: q.clone(),
                via,
            }),
            _ => pieces.push(LocusPiece::Undecided {
                generator: q.clone(),
                via,
            }),
        }
    }
    Ok(IsomorphismLocus {
        pieces,
        contained_in: None,
        complete: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    GeneratorsMeet { p: String, q: String },
    TorsalGenerator { p: String },
    DoubleGenerator { p: String, q: String },
    InfinitelyNearDouble { p: String },
    MultipleDirectrixImage { section: SectionId, multiplicity: i64 },
    IsolatedOnDirectrix { section: SectionId, p: String, q: String },
    /// The directrix goes to a point, as X₀ does for a cone.
    ContractedDirectrix { section: SectionId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityEntry {
    pub kind: SingularityKind,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub entries: Vec<SingularityEntry>,
    /// Whether the map is birational onto its image.
    pub birational: TriState,
    pub undecided_pairs: Vec<(String, String)>,
    pub quantifier_domain: &'static str,
}

impl SingularityReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Birationality of the map of a free system |𝔞| on the curve onto its image.
/// `None` when the image is a point.
fn curve_map_birational(curve: &CurveModel, a: &DivisorClass, domain: QuantifierDomain) -> Result<Option<TriState>> {
    let h = curve.h0(a)?;
    let deg = a.degree();
    if h == Interval::exact(1) {
        return Ok(None);
    }
    if h == Interval::exact(2) {
        return Ok(Some(TriState::from_bool(deg <= 1)));
    }
    if curve.is_very_ample(a, domain)?.is_true() {
        return Ok(Some(TriState::True));
    }
    // a k:1 map with k ≥ 2 onto a nondegenerate curve in P^(h−1) needs deg ≥ 2(h−1)
    if h.lo >= 3 && deg < 2 * (h.lo - 1) {
        return Ok(Some(TriState::True));
    }
    Ok(Some(TriState::Unknown))
}

pub fn singularity_report(s: &RuledSurface, h: &PicClass, domain: QuantifierDomain) -> Result<SingularityReport> {
    if h.m != 1 {
        return Err(Error::Precondition(format!("singularity report needs a unisecant system, got m = {}", h.m)));
    }
    if base_locus(s, h, domain)?.bpf.is_false() {
        return Err(Error::NotBasePointFree);
    }
    let curve = s.curve();
    let b = curve.normalize(&h.b);
    let be = curve.normalize(&(&b + s.e_class()));
    let mut entries = Vec::new();
    let mut undecided = Vec::new();
    let pairs = pairs_with_doubles(curve, domain);
    let minus2 = |a: &DivisorClass, p: &str, q: &str| curve.normalize(&(&(a - &pt(p)) - &pt(q)));

    if !s.is_decomposable().is_true() {
        let hv = h0(s, h)?;
        let mut birational = TriState::Unknown;
        for (p, q) in &pairs {
            let d = drop(hv, h0(s, &PicClass::new(1, minus2(&b, p, q)))?);
            let witness = format!("h0(H) - h0(H - {p}f - {q}f) = {d}");
            if p == GENERIC_POINT && q == GENERIC_POINT_2 {
                birational = d.ge(3);
            }
            let kind = match (d.value(), p == q) {
                (Some(4), _) => continue,
                (Some(3), false) => SingularityKind::GeneratorsMeet { p: p.clone(), q: q.clone() },
                (Some(3), true) => SingularityKind::TorsalGenerator { p: p.clone() },
                (Some(2), false) => SingularityKind::DoubleGenerator { p: p.clone(), q: q.clone() },
                (Some(2), true) => SingularityKind::InfinitelyNearDouble { p: p.clone() },
                _ => {
                    undecided.push((p.clone(), q.clone()));
                    continue;
                }
            };
            entries.push(SingularityEntry { kind, witness });
        }
        return Ok(SingularityReport {
            entries,
            birational,
            undecided_pairs: undecided,
            quantifier_domain: domain.label(),
        });
    }

    let x0 = s.min_section().clone();
    let x1 = s.complement().cloned().unwrap_or_else(|| SectionId::new("X1"));
    let mut directrix_birational = Vec::new();
    for (a, sec) in [(&be, &x0), (&b, &x1)] {
        let bir = curve_map_birational(curve, a, domain)?;
        match bir {
            None => entries.push(SingularityEntry {
                kind: SingularityKind::ContractedDirectrix { section: sec.clone() },
                witness: format!("h0({a}) = 1"),
            }),
            Some(TriState::False) => entries.push(SingularityEntry {
                kind: SingularityKind::MultipleDirectrixImage {
                    section: sec.clone(),
                    multiplicity: a.degree(),
                },
                witness: format!("h0({a}) = 2 with degree {}: the directrix maps {}:1 onto a line", a.degree(), a.degree()),
            }),
            _ => {}
        }
        directrix_birational.push(bir.unwrap_or(TriState::False));
    }
    let h_be = curve.h0(&be)?;
    let h_b = curve.h0(&b)?;
    let mut birational = TriState::Unknown;
    for (p, q) in &pairs {
        let d0 = drop(h_be, curve.h0(&minus2(&be, p, q))?);
        let d1 = drop(h_b, curve.h0(&minus2(&b, p, q))?);
        let witness = format!(
            "h0(b+e) - h0(b+e-{p}-{q}) = {d0}, h0(b) - h0(b-{p}-{q}) = {d1}"
        );
        let (Some(v0), Some(v1)) = (d0.value(), d1.value()) else {
            undecided.push((p.clone(), q.clone()));
            continue;
        };
        if p == GENERIC_POINT && q == GENERIC_POINT_2 {
            birational = TriState::from_bool(v0 + v1 >= 3);
        }
        let same = p == q;
        let kind = match (v0, v1) {
            (2, 2) => continue,
            (1, 1) if same => SingularityKind::InfinitelyNearDouble { p: p.clone() },
            (1, 1) => SingularityKind::DoubleGenerator { p: p.clone(), q: q.clone() },
            (1, 2) | (2, 1) => {
                let (sec, bir) = if v0 == 1 {
                    (&x0, directrix_birational[0])
                } else {
                    (&x1, directrix_birational[1])
                };
                if bir.is_false() {
                    // part of a multiple or contracted directrix
                    continue;
                }
                if same {
                    SingularityKind::TorsalGenerator { p: p.clone() }
                } else {
                    SingularityKind::IsolatedOnDirectrix {
                        section: sec.clone(),
                        p: p.clone(),
                        q: q.clone(),
                    }
                }
            }
            _ => {
                undecided.push((p.clone(), q.clone()));
                continue;
            }
        };
        entries.push(SingularityEntry { kind, witness });
    }
    Ok(SingularityReport {
        entries,
        birational,
        undecided_pairs: undecided,
        quantifier_domain: domain.label(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearSystemReport {
    pub m: i64,
    pub b: DivisorClass,
    pub h0: Interval,
    pub h1: Interval,
    /// H², the degree of the image for m = 1
    pub self_intersection: i64,
    pub base_locus: Vec<BaseEntry>,
    pub bpf: TriState,
    pub generic_member_irreducible: Option<TriState>,
    pub very_ample: TriState,
    pub criteria: Vec<String>,
    pub quantifier_domain: &'static str,
}

pub fn classify(s: &RuledSurface, c: &PicClass, domain: QuantifierDomain) -> Result<LinearSystemReport> {
    let c = PicClass::new(c.m, s.curve().normalize(&c.b));
    let h0v = h0(s, &c)?;
    let h1v = h1(s, &c)?;
    let bl = base_locus(s, &c, domain)?;
    let mut criteria = vec![format!("base locus: {}", bl.criterion)];
    let (va, va_crit) = if c.m >= 1 {
        is_very_ample(s, &c, domain)?
    } else {
        (TriState::False, "m = 0 systems are composed with the ruling")
    };
    criteria.push(format!("very ample: {va_crit}"));
    let irreducible = if c.m == 1 {
        let (v, crit) = generic_member_irreducible(s, &c.b, domain)?;
        criteria.push(format!("irreducible: {crit}"));
        Some(v)
    } else {
        None
    };
    // very ample implies free
    let bpf = if va.is_true() { TriState::True } else { bl.bpf };
    Ok(LinearSystemReport {
        m: c.m,
        b: c.b.clone(),
        h0: h0v,
        h1: h1v,
        self_intersection: s.intersect_classes(&c, &c),
        base_locus: bl.entries,
        bpf,
        generic_member_irreducible: irreducible,
        very_ample: va,
        criteria,
        quantifier_domain: domain.label(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elm::{transform_surface, ElmStep, Position};
    use std::sync::Arc;

    const D: QuantifierDomain = QuantifierDomain::NamedAndGeneric;

    fn curve(g: i64) -> Arc<CurveModel> {
        Arc::new(CurveModel::generic(g, &["P", "Q", "P0"]).unwrap())
    }

    fn dec(c: &Arc<CurveModel>, e: &str) -> RuledSurface {
        RuledSurface::decomposable(c.clone(), c.parse(e).unwrap()).unwrap()
    }

    fn res(d: i64) -> DivisorClass {
        DivisorClass::generic_effective(d)
    }

    #[test]
    fn decomposable_dimensions() {
        let c0 = curve(0);
        let s = dec(&c0, "-P0");
        assert_eq!(h_i_decomposable(&s, 1, &res(2), 0).unwrap(), Interval::exact(5));
        assert_eq!(h_i_decomposable(&s, 0, &res(2), 0).unwrap(), Interval::exact(3));
        let c1 = curve(1);
        let s = dec(&c1, "-P0");
        assert_eq!(h_i_decomposable(&s, 1, &res(3), 0).unwrap(), Interval::exact(5));
        assert_eq!(h_i_decomposable(&s, 1, &res(3), 1).unwrap(), Interval::exact(0));
    }

    #[test]
    fn upper_bounds() {
        let c1 = curve(1);
        let s = dec(&c1, "-P0");
        assert_eq!(h_i_upper_bound(&s, 1, &res(3), 1).unwrap(), Interval::exact(0));
        let c2 = curve(2);
        let s = dec(&c2, "-P0");
        let b = &c2.canonical() + &c2.parse("P0").unwrap();
        // h1(K + P0) = 0, h1(K) = 1
        let ub = h_i_upper_bound(&s, 1, &b, 1).unwrap();
        assert_eq!(ub, Interval::new(0, 1));
    }

    #[test]
    fn chain_dimension_cases() {
        let c = curve(1);
        let s = dec(&c, "-P0");
        let h = PicClass::new(1, res(3));
        assert_eq!(h0_chain(&s, &h).unwrap(), h0(&s, &h).unwrap());
        // x on X₀ off the base locus of |H + Pf|: one less
        let t = transform_surface(&s, &ElmStep::new("P", Position::OnX0)).unwrap();
        let h_on_t = PicClass::new(1, res(3));
        assert_eq!(h0_chain(&t, &h_on_t).unwrap(), Interval::exact(4));
        assert_eq!(h0(&t, &h_on_t).unwrap(), Interval::exact(4));
        // x on X₀ where P is a base point of 𝔠 + 𝔢 = P: unchanged
        let s2 = dec(&c, "-Q");
        let t2 = transform_surface(&s2, &ElmStep::new("P", Position::OnX0)).unwrap();
        let pq = c.parse("P + Q").unwrap();
        let before = h0(&s2, &PicClass::new(1, pq.clone())).unwrap();
        assert_eq!(before, Interval::exact(3));
        assert_eq!(h0_chain(&t2, &PicClass::new(1, pq.clone())).unwrap(), before);
        assert_eq!(h0(&t2, &PicClass::new(1, pq)).unwrap(), before);
        // 𝔠 + 𝔢 = 0 has no base points: one less
        let s3 = dec(&c, "-P");
        let t3 = transform_surface(&s3, &ElmStep::new("P", Position::OnX0)).unwrap();
        let h3 = PicClass::new(1, c.parse("P").unwrap());
        assert_eq!(h0(&s3, &h3).unwrap(), Interval::exact(2));
        assert_eq!(h0_chain(&t3, &h3).unwrap(), Interval::exact(1));
    }

    #[test]
    fn base_locus_examples() {
        let c1 = curve(1);
        let p = RuledSurface::product(c1.clone());
        let bl = base_locus(&p, &PicClass::new(1, c1.parse("P").unwrap()), D).unwrap();
        assert_eq!(bl.kinds_at("P"), vec![BaseKind::FixedGenerator]);
        assert_eq!(bl.bpf, TriState::False);
        let c0 = curve(0);
        let s = dec(&c0, "-P0");
        let bl = base_locus(&s, &PicClass::new(1, res(2)), D).unwrap();
        assert!(bl.entries.iter().all(|e| e.kind == BaseKind::FreeOnGenerator));
        assert_eq!(bl.bpf, TriState::True);
        // b = P + Q free, b + e = P has P as a base point
        let s = dec(&c1, "-Q");
        let bl = base_locus(&s, &PicClass::new(1, c1.parse("P + Q").unwrap()), D).unwrap();
        assert_eq!(bl.kinds_at("P"), vec![BaseKind::PointOnX0]);
        assert_eq!(bl.kinds_at("Q"), vec![BaseKind::FreeOnGenerator]);
        assert_eq!(bl.bpf, TriState::False);
    }

    #[test]
    fn irreducibility_examples() {
        let c1 = curve(1);
        let p = RuledSurface::product(c1.clone());
        assert_eq!(generic_member_irreducible(&p, &DivisorClass::zero(), D).unwrap().0, TriState::True);
        assert_eq!(generic_member_irreducible(&p, &c1.parse("P").unwrap(), D).unwrap().0, TriState::False);
        let c0 = curve(0);
        let s = dec(&c0, "-P0");
        assert_eq!(generic_member_irreducible(&s, &res(2), D).unwrap().0, TriState::True);
    }

    #[test]
    fn very_ample_examples() {
        let c0 = curve(0);
        let s = dec(&c0, "-P0");
        assert_eq!(is_very_ample(&s, &PicClass::new(2, res(3)), D).unwrap().0, TriState::True);
        assert_eq!(is_very_ample(&s, &PicClass::new(2, res(2)), D).unwrap().0, TriState::False);
        assert_eq!(is_very_ample(&s, &PicClass::new(1, res(2)), D).unwrap().0, TriState::True);
        let c1 = curve(1);
        let s = dec(&c1, "-P0");
        assert_eq!(is_very_ample(&s, &PicClass::new(1, res(3)), D).unwrap().0, TriState::False);
        assert_eq!(is_very_ample(&s, &PicClass::new(1, res(4)), D).unwrap().0, TriState::True);
    }

    #[test]
    fn cone_locus_is_the_vertex_section() {
        let c1 = curve(1);
        let s = RuledSurface::decomposable(c1.clone(), -&res(3)).unwrap();
        let h = PicClass::new(1, res(3));
        let k = isomorphism_locus(&s, &h, D).unwrap();
        assert!(k.complete);
        assert_eq!(k.pieces, vec![LocusPiece::WholeSection { section: SectionId::new("X0") }]);
        let rep = singularity_report(&s, &h, D).unwrap();
        assert_eq!(
            rep.entries[0].kind,
            SingularityKind::ContractedDirectrix { section: SectionId::new("X0") }
        );
        assert_eq!(rep.birational, TriState::True);
    }

    #[test]
    fn very_ample_system_has_empty_reports() {
        let c1 = curve(1);
        let s = dec(&c1, "-P0");
        let h = PicClass::new(1, res(4));
        assert!(isomorphism_locus(&s, &h, D).unwrap().is_empty());
        assert!(singularity_report(&s, &h, D).unwrap().is_empty());
        let p = RuledSurface::product(c1.clone());
        assert!(matches!(
            isomorphism_locus(&p, &PicClass::new(1, c1.parse("P").unwrap()), D),
            Err(Error::NotBasePointFree)
        ));
    }

    #[test]
    fn classify_cubic_scroll() {
        let c0 = curve(0);
        let s = dec(&c0, "-P0");
        let r = classify(&s, &PicClass::new(1, res(2)), D).unwrap();
        assert_eq!(r.h0, Interval::exact(5));
        assert_eq!(r.self_intersection, 3);
        assert_eq!(r.very_ample, TriState::True);
        assert_eq!(r.bpf, TriState::True);
        assert_eq!(r.h1, Interval::exact(0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn e_expr() -> impl Strategy<Value = &'static str> {
            prop::sample::select(vec!["0", "-P0", "-P0-Q", "-2P0"])
        }

        proptest! {
            // steps on X₀ or X₁ keep the surface decomposable, so the chain
            // recursion and the splitting formula must agree
            #[test]
            fn chain_agrees_with_splitting(
                g in 0i64..3,
                e in e_expr(),
                on_x0 in any::<bool>(),
                d in 0i64..7,
                kp in -1i64..3,
            ) {
                let c = curve(g);
                let s = dec(&c, e);
                let pos = if on_x0 { Position::OnX0 } else { Position::OnX1 };
                let t = match transform_surface(&s, &ElmStep::new("P", pos)) {
                    Ok(t) => t,
                    Err(_) => return Ok(()),
                };
                prop_assume!(t.is_decomposable().is_true());
                let b = &res(d) + &DivisorClass::point("P").scale(kp);
                let h = PicClass::new(1, b);
                let chain = h0_chain(&t, &h).unwrap();
                let split = h_i_decomposable(&t, 1, &h.b, 0).unwrap();
                prop_assert!(chain.meet(&split).is_some(), "{} vs {}", chain, split);
                if chain.is_exact() && split.is_exact() {
                    prop_assert_eq!(chain, split);
                }
            }

            #[test]
            fn h1_is_riemann_roch_consistent(g in 0i64..3, e in e_expr(), m in 0i64..3, d in -2i64..9) {
                let c = curve(g);
                let s = dec(&c, e);
                let h = PicClass::new(m, res(d));
                let chi = euler_characteristic(&s, m, d);
                let h0v = h0(&s, &h).unwrap();
                let h1v = h1(&s, &h).unwrap();
                prop_assert!(h0v.lo - h1v.hi <= chi && chi <= h0v.hi - h1v.lo);
            }

            // a fixed generator forbids freeness, very ampleness forces it
            #[test]
            fn report_invariants(g in 0i64..3, e in e_expr(), d in 0i64..8, kp in -1i64..3) {
                let c = curve(g);
                let s = dec(&c, e);
                let b = &res(d) + &DivisorClass::point("P").scale(kp);
                let r = classify(&s, &PicClass::new(1, b), D).unwrap();
                if r.base_locus.iter().any(|e| e.kind == BaseKind::FixedGenerator) {
                    prop_assert!(r.bpf.is_false());
                }
                if r.very_ample.is_true() {
                    prop_assert!(r.bpf.is_true());
                }
            }
        }
    }
}
