//! Scenario files: a curve, surfaces built on it, named systems, and scripts.

use scrollcalc::curve::Violation;
use scrollcalc::elm::apply_steps;
use scrollcalc::{CurveModel, ElmStep, PicClass, Position, RuledSurface};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub schema_version: Option<u32>,
    #[serde(default)]
    pub description: Option<String>,
    pub curve: CurveSpec,
    #[serde(default)]
    pub surfaces: BTreeMap<String, SurfaceSpec>,
    #[serde(default)]
    pub systems: BTreeMap<String, SystemSpec>,
    #[serde(default)]
    pub scripts: Vec<Script>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub genus: i64,
    #[serde(default)]
    pub points: Vec<String>,
    /// opaque classes of a given degree
    #[serde(default)]
    pub symbols: BTreeMap<String, i64>,
    #[serde(default)]
    pub classes: Vec<NamedClass>,
    #[serde(default)]
    pub aliases: Vec<(String, String)>,
    #[serde(default)]
    pub table: Vec<TableEntry>,
    #[serde(default)]
    pub effective: Vec<EffectiveEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedClass {
    pub name: String,
    pub expr: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub class: String,
    pub h0: i64,
    /// justification, for the reader of the file
    #[serde(default)]
    #[allow(dead_code)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveEntry {
    pub class: String,
    pub effective: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    Decomposable {
        e_class: String,
        #[serde(default)]
        tracked: BTreeMap<String, SystemSpec>,
    },
    Chain {
        anchor: String,
        steps: Vec<StepSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub point: String,
    pub position: String,
    #[serde(default)]
    pub multiplicities: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub m: i64,
    pub b: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Script {
    pub command: String,
    #[serde(default)]
    pub surface: Option<String>,
    #[serde(default)]
    pub system: Option<String>,
    #[serde(default)]
    pub steps: Option<String>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub center: Option<String>,
    #[serde(default)]
    pub position: Option<String>,
    #[serde(default)]
    pub cycles: Option<String>,
}

/// Problems with the scenario itself, as opposed to the mathematics.
#[derive(Debug)]
pub struct ScenarioError(pub String);

impl std::fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(msg: impl Into<String>) -> ScenarioError {
    ScenarioError(msg.into())
}

pub struct Scenario {
    pub file: ScenarioFile,
    pub curve: Arc<CurveModel>,
    pub surfaces: BTreeMap<String, RuledSurface>,
    pub systems: BTreeMap<String, PicClass>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Scenario, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| bad(format!("malformed scenario: {e}")))?;
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(bad(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}")));
            }
        }
        let curve = Arc::new(build_curve(&file.curve)?);
        let violations = curve.validate();
        if !violations.is_empty() {
            return Err(bad(describe_violations(&violations)));
        }
        let mut systems = BTreeMap::new();
        for (name, spec) in &file.systems {
            systems.insert(name.clone(), parse_system(&curve, spec, name)?);
        }
        let mut surfaces = BTreeMap::new();
        for name in file.surfaces.keys() {
            build_surface(&file, &curve, name, &mut surfaces, &mut Vec::new())?;
        }
        Ok(Scenario {
            file,
            curve,
            surfaces,
            systems,
        })
    }

    pub fn surface(&self, name: Option<&str>) -> Result<(&str, &RuledSurface), ScenarioError> {
        let name = name.ok_or_else(|| bad("command needs a surface name"))?;
        self.surfaces
            .get_key_value(name)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| bad(format!("no surface named {name:?}")))
    }

    pub fn system(&self, name: Option<&str>) -> Result<(&str, &PicClass), ScenarioError> {
        let name = name.ok_or_else(|| bad("command needs a system name"))?;
        self.systems
            .get_key_value(name)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| bad(format!("no system named {name:?}")))
    }
}

fn describe_violations(v: &[Violation]) -> String {
    let lines: Vec<String> = v
        .iter()
        .map(|x| format!("  {} violated at {}: {}", x.kind, x.class, x.detail))
        .collect();
    format!("curve data are inconsistent:\n{}", lines.join("\n"))
}

fn build_curve(spec: &CurveSpec) -> Result<CurveModel, ScenarioError> {
    let err = |e: scrollcalc::CurveError| bad(format!("curve: {e}"));
    let mut b = CurveModel::builder(spec.genus).map_err(err)?;
    for p in &spec.points {
        b = b.point(p).map_err(err)?;
    }
    for (name, deg) in &spec.symbols {
        b = b.symbol(name, *deg).map_err(err)?;
    }
    for c in &spec.classes {
        b = b.class_expr(&c.name, &c.expr).map_err(err)?;
    }
    for (l, r) in &spec.aliases {
        b = b.alias_expr(l, r).map_err(err)?;
    }
    for t in &spec.table {
        b = b.tabulate_expr(&t.class, t.h0).map_err(err)?;
    }
    for e in &spec.effective {
        let c = b.parse(&e.class).map_err(err)?;
        b = b.declare_effective(c, e.effective);
    }
    b.build().map_err(err)
}

pub fn parse_system(curve: &CurveModel, spec: &SystemSpec, name: &str) -> Result<PicClass, ScenarioError> {
    let b = curve
        .parse(&spec.b)
        .map_err(|e| bad(format!("system {name:?}: {e}")))?;
    Ok(PicClass::new(spec.m, b))
}

pub fn parse_steps(text: &str) -> Result<Vec<ElmStep>, ScenarioError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (p, pos) = item
                .split_once(':')
                .ok_or_else(|| bad(format!("step {item:?} should look like POINT:POSITION")))?;
            let position: Position = pos.trim().parse().map_err(bad)?;
            Ok(ElmStep::new(p.trim(), position))
        })
        .collect()
}

fn step_from_spec(s: &StepSpec) -> Result<ElmStep, ScenarioError> {
    let position: Position = s.position.parse().map_err(bad)?;
    let mut st = ElmStep::new(s.point.clone(), position);
    st.multiplicities = s.multiplicities.clone();
    Ok(st)
}

/// Builds `name` and whatever it is anchored on. Mathematical errors while
/// building are scenario errors: the file describes a surface that does not
/// exist.
fn build_surface(
    file: &ScenarioFile,
    curve: &Arc<CurveModel>,
    name: &str,
    done: &mut BTreeMap<String, RuledSurface>,
    stack: &mut Vec<String>,
) -> Result<(), ScenarioError> {
    if done.contains_key(name) {
        return Ok(());
    }
    if stack.iter().any(|n| n == name) {
        return Err(bad(format!("surface {name:?} is anchored on itself")));
    }
    let spec = file
        .surfaces
        .get(name)
        .ok_or_else(|| bad(format!("no surface named {name:?}")))?;
    stack.push(name.to_string());
    let surface = match spec {
        SurfaceSpec::Decomposable { e_class, tracked } => {
            let e = curve
                .parse(e_class)
                .map_err(|e| bad(format!("surface {name:?}: {e}")))?;
            let mut s = RuledSurface::decomposable(curve.clone(), e).map_err(|e| bad(format!("surface {name:?}: {e}")))?;
            for (tname, tspec) in tracked {
                s = s.with_tracked(tname, parse_system(curve, tspec, tname)?);
            }
            s
        }
        SurfaceSpec::Chain { anchor, steps } => {
            build_surface(file, curve, anchor, done, stack)?;
            let base = done[anchor.as_str()].clone();
            let steps = steps.iter().map(step_from_spec).collect::<Result<Vec<_>, _>>()?;
            apply_steps(&base, &steps).map_err(|e| bad(format!("surface {name:?}: {e}")))?
        }
    };
    stack.pop();
    done.insert(name.to_string(), surface);
    Ok(())
}
