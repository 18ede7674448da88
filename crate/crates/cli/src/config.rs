//! Experiment configuration. Unknown keys are rejected everywhere.

use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dim: usize,
    /// Group-ring text, e.g. `3*e - x(1) - x(-1)`.
    pub f: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Output,
    pub invert: Option<InvertBlock>,
    pub tile: Option<TileBlock>,
    pub shadow: Option<ShadowBlock>,
    pub count_fixed: Option<CountFixedBlock>,
    pub approx: Option<ApproxBlock>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Certificate tolerance of the inverse behind every point evaluation.
    pub inverse: f64,
    /// Evaluation tolerance used when re-checking artifacts.
    pub verify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            inverse: 1e-12,
            verify: 1e-10,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    pub dir: String,
}

impl Default for Output {
    fn default() -> Self {
        Output {
            dir: "permeas-out".into(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertBlock {
    pub tol: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileBlock {
    /// Side lengths of the target box `[0, m_1) × … × [0, m_d)`.
    pub target: Vec<u64>,
    /// Side lengths of each box shape.
    pub shapes: Vec<Vec<u64>>,
    pub eps: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PointSpec {
    Zero,
    Homoclinic { generator: String },
    Periodic { modulus: u64, vbar: Vec<i64> },
    /// Homoclinic point with a seeded random generator on the sites the
    /// window's rows read, widened by `radius`.
    Random {
        #[serde(default = "default_radius")]
        radius: u64,
        #[serde(default = "default_coeff")]
        max_coeff: i64,
    },
}

fn default_radius() -> u64 {
    2
}

fn default_coeff() -> i64 {
    2
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    /// Inclusive lower corner.
    pub lo: Vec<i64>,
    /// Inclusive upper corner.
    pub hi: Vec<i64>,
    pub point: PointSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowBlock {
    pub eps: f64,
    /// Periodic shadow under `(nZ)^d`; omitted for a homoclinic shadow.
    pub modulus: Option<u64>,
    pub windows: Vec<WindowSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountFixedBlock {
    pub from: u64,
    pub to: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub weight: f64,
    pub modulus: u64,
    /// Generator over `[0, n)^d`, row-major.
    pub vbar: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize, serde::Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HarmonicSpec {
    pub freqs: Vec<i64>,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

#[derive(Clone, Debug, Deserialize, serde::Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub sites: Vec<Vec<i64>>,
    pub harmonics: Vec<HarmonicSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxBlock {
    pub eps: f64,
    #[serde(default = "default_base")]
    pub base: u64,
    #[serde(default = "default_cap")]
    pub cap: u64,
    #[serde(default = "default_scales")]
    pub scales: [u64; 2],
    #[serde(default = "default_floor")]
    pub cell_floor: f64,
    pub atoms: Vec<AtomSpec>,
    pub functions: Vec<FunctionSpec>,
}

fn default_base() -> u64 {
    1 << 10
}

fn default_cap() -> u64 {
    1 << 18
}

fn default_scales() -> [u64; 2] {
    [1 << 10, 1 << 12]
}

fn default_floor() -> f64 {
    1e-3
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Config(msg()))
    }
}

fn in_open(x: f64, lo: f64, hi: f64) -> bool {
    x > lo && x < hi
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let d = self.dim;
        check((1..=permeas_core::groups::MAX_DIM).contains(&d), || {
            format!("dim must lie in 1..={}, got {d}", permeas_core::groups::MAX_DIM)
        })?;
        check(in_open(self.tolerances.inverse, 0.0, 1e-3), || "tolerances.inverse must lie in (0, 1e-3)".into())?;
        check(in_open(self.tolerances.verify, 0.0, 1e-3), || "tolerances.verify must lie in (0, 1e-3)".into())?;
        check(!self.output.dir.is_empty(), || "output.dir must be nonempty".into())?;
        if let Some(b) = &self.invert {
            check(in_open(b.tol, 0.0, 1.0), || "invert.tol must lie in (0, 1)".into())?;
        }
        if let Some(b) = &self.tile {
            check(b.target.len() == d, || format!("tile.target needs {d} sides"))?;
            check(b.target.iter().all(|&m| (1..=4096).contains(&m)), || "tile.target sides must lie in 1..=4096".into())?;
            check(b.target.iter().map(|&m| m as u128).product::<u128>() <= 1 << 20, || {
                "tile.target volume must not exceed 2^20".into()
            })?;
            check(!b.shapes.is_empty(), || "tile.shapes must be nonempty".into())?;
            for s in &b.shapes {
                check(s.len() == d, || format!("every tile shape needs {d} sides"))?;
                check(s.iter().all(|&m| (1..=4096).contains(&m)), || "shape sides must lie in 1..=4096".into())?;
            }
            check(in_open(b.eps, 0.0, 0.25), || "tile.eps must lie in (0, 1/4)".into())?;
        }
        if let Some(b) = &self.shadow {
            check(b.eps > 0.0 && b.eps <= 1.0, || "shadow.eps must lie in (0, 1]".into())?;
            check(!b.windows.is_empty(), || "shadow.windows must be nonempty".into())?;
            if let Some(n) = b.modulus {
                check((1..=1 << 20).contains(&n), || "shadow.modulus must lie in 1..=2^20".into())?;
            }
            for w in &b.windows {
                check(w.lo.len() == d && w.hi.len() == d, || format!("window corners need {d} coordinates"))?;
                check(w.lo.iter().zip(&w.hi).all(|(l, h)| l <= h && h - l < 4096), || {
                    "window corners must satisfy lo <= hi with sides below 4096".into()
                })?;
                let volume: u128 = w.lo.iter().zip(&w.hi).map(|(l, h)| (h - l + 1) as u128).product();
                check(volume <= 1 << 16, || "window volume must not exceed 2^16".into())?;
                self.validate_point(&w.point)?;
            }
        }
        if let Some(b) = &self.count_fixed {
            check(1 <= b.from && b.from <= b.to, || "count_fixed needs 1 <= from <= to".into())?;
            check((b.to as u128).pow(d as u32) <= 256, || "count_fixed: index n^d must not exceed 256".into())?;
        }
        if let Some(b) = &self.approx {
            check(in_open(b.eps, 0.0, 1.0), || "approx.eps must lie in (0, 1)".into())?;
            check(1 <= b.base && b.base <= b.cap && b.cap <= 1 << 22, || {
                "approx needs 1 <= base <= cap <= 2^22".into()
            })?;
            check(0 < b.scales[0] && b.scales[0] < b.scales[1], || "approx.scales must be increasing".into())?;
            check((0.0..1.0).contains(&b.cell_floor), || "approx.cell_floor must lie in [0, 1)".into())?;
            check(!b.atoms.is_empty(), || "approx.atoms must be nonempty".into())?;
            let total: f64 = b.atoms.iter().map(|a| a.weight).sum();
            check((total - 1.0).abs() <= 1e-12, || format!("approx atom weights sum to {total}, not 1"))?;
            for a in &b.atoms {
                check(a.weight > 0.0, || "approx atom weights must be positive".into())?;
                self.validate_periodic(a.modulus, &a.vbar)?;
            }
            check(!b.functions.is_empty(), || "approx.functions must be nonempty".into())?;
            for f in &b.functions {
                check(f.sites.iter().all(|s| s.len() == d), || format!("function sites need {d} coordinates"))?;
                check(!f.harmonics.is_empty(), || "every function needs a harmonic".into())?;
                check(f.harmonics.iter().all(|h| h.freqs.len() == f.sites.len()), || {
                    "each harmonic needs one frequency per site".into()
                })?;
                check(f.harmonics.iter().all(|h| h.a.is_finite() && h.b.is_finite()), || {
                    "harmonic coefficients must be finite".into()
                })?;
            }
        }
        Ok(())
    }

    fn validate_periodic(&self, modulus: u64, vbar: &[i64]) -> Result<(), CliError> {
        check((1..=4096).contains(&modulus), || "periodic modulus must lie in 1..=4096".into())?;
        let size = (modulus as u128).pow(self.dim as u32);
        check(vbar.len() as u128 == size, || format!("vbar needs {size} entries"))
    }

    fn validate_point(&self, p: &PointSpec) -> Result<(), CliError> {
        match p {
            PointSpec::Periodic { modulus, vbar } => self.validate_periodic(*modulus, vbar),
            PointSpec::Random { radius, max_coeff } => {
                check(*radius <= 16, || "random radius must not exceed 16".into())?;
                check((0..=16).contains(max_coeff), || "random max_coeff must lie in 0..=16".into())
            }
            _ => Ok(()),
        }
    }

    pub fn out_dir(&self) -> std::path::PathBuf {
        match std::env::var_os(crate::OUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => dir.into(),
            _ => self.output.dir.clone().into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let base = "dim = 1\nf = \"3*e - x(1) - x(-1)\"\n";
        assert!(ExperimentConfig::from_toml(base).is_ok());
        assert!(ExperimentConfig::from_toml(&format!("{base}colour = 3\n")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("{base}[invert]\ntol = 1e-10\nextra = 1\n")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("{base}[tolerances]\ninverse = 1e-12\nfoo = 2\n")).is_err());
    }

    #[test]
    fn ranges_are_checked() {
        let base = "f = \"3*e - x(1) - x(-1)\"\n";
        assert!(ExperimentConfig::from_toml(&format!("dim = 0\n{base}")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("dim = 1\n{base}[invert]\ntol = 2.0\n")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("dim = 1\n{base}[tile]\ntarget = [10]\nshapes = [[2]]\neps = 0.3\n")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("dim = 1\n{base}[count_fixed]\nfrom = 3\nto = 2\n")).is_err());
        let atoms = "[[approx.atoms]]\nweight = 0.5\nmodulus = 2\nvbar = [1, 0]\n";
        let funcs = "[[approx.functions]]\nsites = [[0]]\nharmonics = [{ freqs = [1], a = 1.0 }]\n";
        let ok = format!("dim = 1\n{base}[approx]\neps = 0.1\n{atoms}{atoms}{funcs}");
        assert!(ExperimentConfig::from_toml(&ok).is_ok());
        let light = format!("dim = 1\n{base}[approx]\neps = 0.1\n{atoms}{funcs}");
        assert!(ExperimentConfig::from_toml(&light).is_err());
    }

    #[test]
    fn point_specs_are_tagged() {
        let text = r#"
dim = 1
f = "3*e - x(1) - x(-1)"
[shadow]
eps = 0.1
windows = [
  { lo = [0], hi = [2], point = { kind = "homoclinic", generator = "x(1)" } },
  { lo = [50], hi = [51], point = { kind = "random" } },
  { lo = [90], hi = [90], point = { kind = "periodic", modulus = 2, vbar = [1, 0] } },
]
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        let w = &cfg.shadow.unwrap().windows;
        assert!(matches!(w[1].point, PointSpec::Random { radius: 2, max_coeff: 2 }));
        let bad = text.replace("\"random\"", "\"noise\"");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }
}
