//! Command implementations. Each returns a JSON value; rendering and exit
//! codes are handled by the caller.

use crate::scenario::{parse_steps, Scenario, ScenarioError, Script};
use scrollcalc::blowup::elm_via_lattice;
use scrollcalc::elm::{inverse_step, project_scroll, transform_surface, transformed_intersection};
use scrollcalc::linear_system::{self, BaseKind, LocusPiece};
use scrollcalc::speciality::{self, SpecialityLedger};
use scrollcalc::{Error, Interval, PicClass, Position, QuantifierDomain, RuledSurface, TriState};
use serde_json::{json, Value};

pub enum Failure {
    Scenario(ScenarioError),
    Math(Error),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Scenario(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

type Out = Result<Value, Failure>;

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

pub fn surface_summary(name: &str, s: &RuledSurface) -> Value {
    json!({
        "name": name,
        "genus": s.genus(),
        "e": s.e(),
        "e_class": s.e_class(),
        "decomposable": s.is_decomposable(),
        "min_section": s.min_section(),
        "complement": s.complement(),
        "chain_length": s.chain_len(),
    })
}

#[derive(serde::Serialize)]
struct ScrollNumbers {
    degree: i64,
    projective_dimension: Interval,
    speciality: Interval,
}

fn scroll_numbers(s: &RuledSurface, h: &PicClass) -> Result<ScrollNumbers, Error> {
    Ok(ScrollNumbers {
        degree: s.scroll_degree(h)?,
        projective_dimension: linear_system::h0(s, h)? - 1,
        speciality: speciality::speciality(s, h)?,
    })
}

fn error_value(e: &Error) -> Value {
    json!({ "error": e.to_string() })
}

pub fn classify(sc: &Scenario, surface: Option<&str>, system: Option<&str>, domain: QuantifierDomain) -> Out {
    let (sname, s) = sc.surface(surface)?;
    let (hname, h) = sc.system(system)?;
    let report = linear_system::classify(s, h, domain)?;
    let mut out = json!({
        "surface": surface_summary(sname, s),
        "system": { "name": hname, "m": h.m, "b": h.b },
        "report": to_value(&report),
    });
    if h.m == 1 {
        out["scroll"] = to_value(&scroll_numbers(s, h)?);
        out["singularities"] = match linear_system::singularity_report(s, h, domain) {
            Ok(r) => to_value(&r),
            Err(e @ Error::NotBasePointFree) => error_value(&e),
            Err(e) => return Err(e.into()),
        };
        out["isomorphism_locus"] = match linear_system::isomorphism_locus(s, h, domain) {
            Ok(r) => to_value(&r),
            Err(e @ Error::NotBasePointFree) => error_value(&e),
            Err(e) => return Err(e.into()),
        };
    }
    Ok(out)
}

fn trace_row(i: usize, s: &RuledSurface) -> Value {
    let rec = s.link().map(|l| &l.record);
    json!({
        "step": i,
        "point": rec.map(|r| r.point.clone()),
        "position": rec.map(|r| r.position),
        "case": rec.map(|r| r.case),
        "e": s.e(),
        "e_class": s.e_class(),
        "decomposable": s.is_decomposable(),
        "min_section": s.min_section(),
        "complement": s.complement(),
        "tracked": s.tracked(),
    })
}

pub fn transform(sc: &Scenario, surface: Option<&str>, steps: Option<&str>) -> Out {
    let (sname, s) = sc.surface(surface)?;
    let (start, surfaces) = match steps {
        Some(text) => {
            let mut cur = s.clone();
            let mut v = Vec::new();
            for st in parse_steps(text)? {
                cur = transform_surface(&cur, &st)?;
                v.push(cur.clone());
            }
            (s.clone(), v)
        }
        None => {
            // replay the recorded chain from its anchor
            let mut v = Vec::new();
            let mut cur = s.clone();
            while let Some(p) = cur.parent().cloned() {
                v.push(cur);
                cur = p;
            }
            v.reverse();
            (cur, v)
        }
    };
    let mut rows = vec![trace_row(0, &start)];
    let mut inverse_ok = true;
    for (i, t) in surfaces.iter().enumerate() {
        rows.push(trace_row(i + 1, t));
        let rec = &t.link().expect("transformed surface has a link").record;
        let back = inverse_step(t, &rec.point)?;
        inverse_ok &= back.same_invariants(t.parent().expect("has parent"));
    }
    Ok(json!({
        "surface": surface_summary(sname, s),
        "trace": rows,
        "inverse_round_trip": inverse_ok,
    }))
}

pub fn project(
    sc: &Scenario,
    surface: Option<&str>,
    system: Option<&str>,
    count: usize,
    center: Option<&str>,
    position: Option<&str>,
    domain: QuantifierDomain,
) -> Out {
    let (sname, s) = sc.surface(surface)?;
    let (hname, h) = sc.system(system)?;
    let position: Option<Position> = match position {
        Some(p) => Some(p.parse().map_err(ScenarioError)?),
        None => None,
    };
    if center.is_some() && count > 1 {
        return Err(ScenarioError("a named center can only be used for a single projection".into()).into());
    }
    let mut cur = s.clone();
    let mut hc = h.clone();
    let mut ledger = SpecialityLedger::for_scroll(&cur, &hc)?;
    let mut rows = vec![json!({
        "center": null,
        "case": null,
        "numbers": to_value(&scroll_numbers(&cur, &hc)?),
        "ledger_i": ledger.current_i(),
    })];
    for k in 0..count {
        let fresh = format!("@x{}", k + 1);
        let point = center.unwrap_or(&fresh);
        let smooth = if point.starts_with('@') {
            true
        } else {
            center_is_smooth(&cur, &hc, point, domain)?
        };
        let (next, hn) = project_scroll(&cur, &hc, point, position, smooth)?;
        // a single point of the scroll: cycle degree 1 spanning a point
        ledger = ledger.append(1, 0)?;
        let numbers = scroll_numbers(&next, &hn)?;
        let i_now = numbers.speciality;
        rows.push(json!({
            "center": point,
            "case": next.link().map(|l| l.record.case),
            "numbers": to_value(&numbers),
            "ledger_i": ledger.current_i(),
            "ledger_consistent": i_now.meet(&ledger.current_i()).is_some(),
        }));
        cur = next;
        hc = hn;
    }
    Ok(json!({
        "surface": surface_summary(sname, s),
        "system": { "name": hname, "m": h.m, "b": h.b },
        "trajectory": rows,
        "final_system": { "m": hc.m, "b": hc.b },
        "ledger": to_value(&ledger),
    }))
}

/// A named center is refused when its generator meets the locus where the
/// map fails to be an isomorphism.
fn center_is_smooth(s: &RuledSurface, h: &PicClass, point: &str, domain: QuantifierDomain) -> Result<bool, Error> {
    let locus = linear_system::isomorphism_locus(s, h, domain)?;
    Ok(!locus.pieces.iter().any(|p| match p {
        LocusPiece::WholeSection { .. } => true,
        LocusPiece::PointOnSection { generator, .. }
        | LocusPiece::UnlocatedPoint { generator, .. }
        | LocusPiece::Generator { generator, .. }
        | LocusPiece::Undecided { generator, .. } => generator == point,
    }))
}

fn parse_cycles(text: &str) -> Result<Vec<(i64, i64)>, ScenarioError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (d, s) = item
                .split_once(':')
                .ok_or_else(|| ScenarioError(format!("cycle {item:?} should look like DEGREE:SPAN")))?;
            let d = d.trim().parse().map_err(|_| ScenarioError(format!("bad cycle degree in {item:?}")))?;
            let s = s.trim().parse().map_err(|_| ScenarioError(format!("bad span dimension in {item:?}")))?;
            Ok((d, s))
        })
        .collect()
}

pub fn report(
    sc: &Scenario,
    surface: Option<&str>,
    system: Option<&str>,
    cycles: Option<&str>,
    domain: QuantifierDomain,
) -> Out {
    let (sname, s) = sc.surface(surface)?;
    let (hname, h) = sc.system(system)?;
    let mut ledger = SpecialityLedger::for_scroll(s, h)?;
    for (d, span) in parse_cycles(cycles.unwrap_or(""))? {
        ledger = ledger.append(d, span)?;
    }
    let cone = match speciality::is_cone_test(s, h, domain) {
        Ok(t) => json!({ "verdict": t }),
        Err(Error::Precondition(msg)) => json!({ "not_applicable": msg }),
        Err(e @ Error::NotBasePointFree) => error_value(&e),
        Err(e) => return Err(e.into()),
    };
    let mut directrices = vec![json!({
        "section": s.min_section(),
        "check": to_value(&speciality::directrix_speciality_bound_check(s, h, &PicClass::min_section())?),
    })];
    if s.is_decomposable().is_true() {
        let x1 = PicClass::new(1, -s.e_class());
        directrices.push(json!({
            "section": s.complement(),
            "check": to_value(&speciality::directrix_speciality_bound_check(s, h, &x1)?),
        }));
    }
    Ok(json!({
        "surface": surface_summary(sname, s),
        "system": { "name": hname, "m": h.m, "b": h.b },
        "scroll": to_value(&scroll_numbers(s, h)?),
        "ledger": to_value(&ledger),
        "is_cone": cone,
        "directrix_speciality": directrices,
        "special_directrix": to_value(&speciality::special_directrix_search(s, h)?),
    }))
}

struct Checks {
    rows: Vec<Value>,
    failed: usize,
}

impl Checks {
    fn record(&mut self, name: String, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        self.rows.push(json!({ "check": name, "passed": ok, "detail": detail }));
    }
}

/// Runs every invariant and oracle check on the scenario's surfaces and
/// systems. Returns the report and whether everything passed.
pub fn verify(sc: &Scenario, domain: QuantifierDomain) -> Result<(Value, bool), Failure> {
    let mut c = Checks {
        rows: Vec::new(),
        failed: 0,
    };
    let violations = sc.curve.validate();
    c.record("curve data consistent".into(), violations.is_empty(), format!("{} violations", violations.len()));
    // closed-form intersections against the blow-up lattice on a small grid
    let mut mismatches = 0;
    for n in 0..=2 {
        for m in 0..=2 {
            for mc in 0..=n {
                for md in 0..=m {
                    for cd in -3..=3 {
                        if transformed_intersection(cd, n, m, mc, md) != elm_via_lattice(cd, n, m, mc, md) {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    c.record("intersections agree with the blow-up lattice".into(), mismatches == 0, format!("{mismatches} mismatches"));
    for (name, s) in &sc.surfaces {
        let mut cur = Some(s.clone());
        while let Some(t) = cur {
            let label = if t.chain_len() == s.chain_len() {
                name.clone()
            } else {
                format!("{name}[{}]", t.chain_len())
            };
            let segre = t.check_segre();
            c.record(format!("{label}: Segre bounds"), segre.is_ok(), format!("e = {}", t.e()));
            if let Some(link) = t.link() {
                let ok = match inverse_step(&t, &link.record.point) {
                    Ok(back) => back.same_invariants(&link.parent),
                    Err(_) => false,
                };
                c.record(format!("{label}: inverse step recovers the parent"), ok, format!("case {:?}", link.record.case));
            }
            cur = t.parent().cloned();
        }
        for (hname, h) in &sc.systems {
            system_checks(&mut c, name, s, hname, h, domain)?;
        }
    }
    let passed = c.rows.len() - c.failed;
    let ok = c.failed == 0;
    Ok((
        json!({ "checks": c.rows, "passed": passed, "failed": c.failed }),
        ok,
    ))
}

fn system_checks(
    c: &mut Checks,
    sname: &str,
    s: &RuledSurface,
    hname: &str,
    h: &PicClass,
    domain: QuantifierDomain,
) -> Result<(), Failure> {
    let label = format!("{sname}/{hname}");
    if h.m < 0 {
        return Ok(());
    }
    let r = linear_system::classify(s, h, domain)?;
    let fixed = r.base_locus.iter().any(|e| e.kind == BaseKind::FixedGenerator);
    c.record(format!("{label}: fixed generator excludes freeness"), !(fixed && !r.bpf.is_false()), format!("bpf {}", r.bpf));
    c.record(
        format!("{label}: very ample implies free"),
        !(r.very_ample.is_true() && !r.bpf.is_true()),
        format!("very ample {}, bpf {}", r.very_ample, r.bpf),
    );
    let chi = linear_system::euler_characteristic(s, h.m, h.b.degree());
    let rr = r.h0.lo - r.h1.hi <= chi && chi <= r.h0.hi - r.h1.lo;
    c.record(format!("{label}: Riemann-Roch"), rr, format!("h0 {}, h1 {}, chi {chi}", r.h0, r.h1));
    if h.m == 1 && s.link().is_some() && s.is_decomposable().is_true() {
        let chain = linear_system::h0_chain(s, h)?;
        let split = linear_system::h_i_decomposable(s, 1, &h.b, 0)?;
        c.record(
            format!("{label}: chain dimension matches the splitting formula"),
            chain.meet(&split).is_some(),
            format!("chain {chain}, split {split}"),
        );
    }
    if h.m == 1 {
        let i = speciality::speciality(s, h)?;
        c.record(format!("{label}: speciality nonnegative"), i.lo >= 0, format!("i = {i}"));
        let chk = speciality::directrix_speciality_bound_check(s, h, &PicClass::min_section())?;
        c.record(
            format!("{label}: directrix speciality bounded by the scroll's"),
            !chk.holds.is_false(),
            format!("h1 on directrix {}, on scroll {}", chk.h1_directrix, chk.h1_scroll),
        );
        if r.very_ample.is_true() && s.genus() >= 1 && r.h0.lo >= 4 {
            let cone = speciality::is_cone_test(s, h, domain)?;
            c.record(format!("{label}: very ample scroll is not a cone"), cone != TriState::True, format!("cone test {cone}"));
        }
    }
    Ok(())
}

pub fn run_script(sc: &Scenario, script: &Script, domain: QuantifierDomain) -> Out {
    let surface = script.surface.as_deref();
    let system = script.system.as_deref();
    match script.command.as_str() {
        "classify" => classify(sc, surface, system, domain),
        "transform" => transform(sc, surface, script.steps.as_deref()),
        "project" => project(
            sc,
            surface,
            system,
            script.count.unwrap_or(1),
            script.center.as_deref(),
            script.position.as_deref(),
            domain,
        ),
        "report" => report(sc, surface, system, script.cycles.as_deref(), domain),
        "verify" => verify(sc, domain).map(|(v, _)| v),
        other => Err(ScenarioError(format!("unknown script command {other:?}")).into()),
    }
}
