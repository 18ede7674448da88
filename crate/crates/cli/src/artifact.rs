//! JSON artifact schema. Every file carries `schema_version` and enough of
//! the experiment to be re-checked on its own.

use std::path::Path;

use permeas_core::algaction::{AlgebraicAction, Point};
use permeas_core::groupring::L1Element;
use permeas_core::groups::{Zd, ZdElem};
use permeas_core::specification::LogEntry;
use serde::{Deserialize, Serialize};

use crate::config::{AtomSpec, FunctionSpec};
use crate::error::{CliError, CliResult};
use crate::parse::{format_group_ring, parse_group_ring};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub schema_version: u32,
    pub dim: usize,
    pub f: String,
    /// Tolerance the inverse of `f` was certified to.
    pub inverse_tol: f64,
    pub artifact: Artifact,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Artifact {
    Invert(InvertArtifact),
    Tile(TileArtifact),
    Shadow(ShadowArtifact),
    CountFixed(CountFixedArtifact),
    Approx(ApproxArtifact),
}

impl Artifact {
    pub fn name(&self) -> &'static str {
        match self {
            Artifact::Invert(_) => "invert",
            Artifact::Tile(_) => "tile",
            Artifact::Shadow(_) => "shadow",
            Artifact::CountFixed(_) => "count_fixed",
            Artifact::Approx(_) => "approx",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct L1Json {
    pub support: Vec<Vec<i64>>,
    pub coeffs: Vec<f64>,
    pub tail: f64,
}

impl L1Json {
    pub fn from_element(g: &L1Element<ZdElem>) -> Self {
        let (support, coeffs) = g.terms().map(|(e, c)| (e.coords().to_vec(), c)).unzip();
        L1Json {
            support,
            coeffs,
            tail: g.tail(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InvertArtifact {
    pub tol: f64,
    pub residual: f64,
    pub iterations: usize,
    pub grid: usize,
    pub symbol_lower_bound: f64,
    pub history: Vec<f64>,
    pub inverse: L1Json,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TileJson {
    pub shape: usize,
    pub center: Vec<i64>,
    pub witness: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TileArtifact {
    pub target: Vec<u64>,
    /// Box sides, smallest volume first.
    pub shapes: Vec<Vec<u64>>,
    pub eps: f64,
    pub target_size: u64,
    pub covered: u64,
    pub cover_fraction: f64,
    pub invariance_defect: f64,
    pub tiles: Vec<TileJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PointJson {
    Homoclinic { v: String },
    Periodic { modulus: u64, vbar: Vec<i64> },
    Window { sites: Vec<Vec<i64>>, values: Vec<f64> },
}

impl PointJson {
    pub fn from_point(p: &Point) -> Self {
        match p {
            Point::Homoclinic(v) => PointJson::Homoclinic { v: format_group_ring(v) },
            Point::Periodic(p) => PointJson::Periodic {
                modulus: p.modulus(),
                vbar: p.vbar_canonical(),
            },
            Point::Window(w) => {
                let (sites, values) = w.iter().map(|(e, v)| (e.coords().to_vec(), *v)).unzip();
                PointJson::Window { sites, values }
            }
        }
    }

    pub fn to_point(&self, action: &AlgebraicAction) -> CliResult<Point> {
        let d = action.dim();
        match self {
            PointJson::Homoclinic { v } => {
                Ok(action.xi(parse_group_ring(v, d).map_err(CliError::Config)?))
            }
            PointJson::Periodic { modulus, vbar } => Ok(action.xi_periodic(*modulus, vbar.clone())?),
            PointJson::Window { sites, values } => {
                if sites.len() != values.len() || sites.iter().any(|s| s.len() != d) {
                    return Err(CliError::Config("malformed window point".into()));
                }
                Ok(Point::window(sites.iter().map(|s| ZdElem::new(s)).zip(values.iter().copied())))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LogJson {
    pub name: String,
    pub value: f64,
    /// `None` for an unbounded (informational) entry.
    pub bound: Option<f64>,
    pub strict: bool,
    pub holds: bool,
}

impl From<&LogEntry> for LogJson {
    fn from(e: &LogEntry) -> Self {
        LogJson {
            name: e.name.clone(),
            value: e.value,
            bound: e.bound.is_finite().then_some(e.bound),
            strict: e.strict,
            holds: e.holds,
        }
    }
}

pub fn log_json(entries: &[LogEntry]) -> Vec<LogJson> {
    entries.iter().map(LogJson::from).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ShadowWindowJson {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub point: PointJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ShadowArtifact {
    pub eps: f64,
    pub modulus: Option<u64>,
    /// Metric depth `K` of the verification rows.
    pub depth: usize,
    /// Per-coordinate evaluation tolerance of the verification rows.
    pub eval_tol: f64,
    pub window_size: usize,
    pub windows: Vec<ShadowWindowJson>,
    pub y: PointJson,
    pub generator: String,
    pub rows: usize,
    pub worst_rho: f64,
    pub max_coordinate_gap: f64,
    pub derivation: Vec<LogJson>,
    pub budget: Vec<LogJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FixedCountJson {
    pub modulus: u64,
    /// Decimal, exact.
    pub count: String,
    pub invariant_factors: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CountFixedArtifact {
    pub rows: Vec<FixedCountJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScheduleJson {
    pub base: u64,
    pub cap: u64,
    pub scales: [u64; 2],
    pub cell_floor: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub weight: f64,
    pub modulus: u64,
    pub vbar: Vec<i64>,
}

impl From<&AtomSpec> for AtomJson {
    fn from(a: &AtomSpec) -> Self {
        AtomJson {
            weight: a.weight,
            modulus: a.modulus,
            vbar: a.vbar.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AttemptJson {
    pub modulus: u64,
    pub outcome: String,
    pub ledger_total: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BudgetTermJson {
    pub name: String,
    pub allowance: f64,
    pub consumed: f64,
    pub per_function: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ApproxArtifact {
    pub eps: f64,
    pub schedule: ScheduleJson,
    pub atoms: Vec<AtomJson>,
    pub functions: Vec<FunctionSpec>,
    pub y: PointJson,
    pub modulus: u64,
    /// Number of distinct translates carrying `μ_y`.
    pub orbit_atoms: usize,
    pub tiles_per_axis: u64,
    pub windows: usize,
    pub cells: usize,
    pub metric_lipschitz: f64,
    pub shadow_eps: f64,
    pub gamma: f64,
    pub window_size: usize,
    pub attempts: Vec<AttemptJson>,
    pub ledger: Vec<BudgetTermJson>,
    pub ledger_total: f64,
    pub integrals_nu: Vec<f64>,
    pub integrals_mu: Vec<f64>,
    pub gaps: Vec<f64>,
    pub worst_rho: f64,
    pub log: Vec<LogJson>,
    pub notes: Vec<String>,
}

pub fn build_action(dim: usize, f: &str, tol: f64) -> CliResult<AlgebraicAction> {
    let zd = Zd::new(dim)?;
    let f = parse_group_ring(f, dim).map_err(CliError::Config)?;
    Ok(AlgebraicAction::new(zd, f, tol)?)
}

/// Compact JSON with a trailing newline; floats use shortest round-trip form.
pub fn write_json(path: &Path, env: &Envelope) -> CliResult<()> {
    let mut text = serde_json::to_string(env)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_json(path: &Path) -> CliResult<Envelope> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        other => {
            return Err(CliError::Config(format!(
                "unsupported schema_version {other:?}, expected {SCHEMA_VERSION}"
            )))
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
