//! Subcommand runners. Each writes `<name>.json` plus CSV summaries into the
//! output directory and returns the written paths.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use permeas_core::algaction::{AlgebraicAction, Point};
use permeas_core::groupring::{GroupRingElement, L1Invertible};
use permeas_core::groups::{FiniteSubset, Zd, ZdElem};
use permeas_core::measures::{
    approximate_by_periodic, integrate, periodic_measure, CylinderFunction, Harmonic, SampledMeasure, Schedule,
};
use permeas_core::specification::{derive_windows, shadow_periodic, shadow_simple};
use permeas_core::tiling::quasi_tile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::artifact::*;
use crate::config::{ApproxBlock, AtomSpec, ExperimentConfig, FunctionSpec, PointSpec};
use crate::error::{CliError, CliResult};
use crate::parse::{format_group_ring, parse_group_ring};

/// Tolerance for comparing recomputed floats against recorded ones.
pub const RECHECK_TOL: f64 = 1e-9;

pub struct Written {
    pub paths: Vec<PathBuf>,
}

fn missing(block: &str) -> CliError {
    CliError::Config(format!("config has no [{block}] block"))
}

fn envelope(cfg: &ExperimentConfig, artifact: Artifact) -> CliResult<Envelope> {
    let f = parse_group_ring(&cfg.f, cfg.dim).map_err(CliError::Config)?;
    Ok(Envelope {
        schema_version: SCHEMA_VERSION,
        dim: cfg.dim,
        f: format_group_ring(&f),
        inverse_tol: cfg.tolerances.inverse,
        artifact,
    })
}

struct Output {
    dir: PathBuf,
    paths: Vec<PathBuf>,
}

impl Output {
    fn new(cfg: &ExperimentConfig) -> CliResult<Self> {
        let dir = cfg.out_dir();
        std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Output { dir, paths: Vec::new() })
    }

    fn json(&mut self, env: &Envelope) -> CliResult<()> {
        let path = self.dir.join(format!("{}.json", env.artifact.name()));
        write_json(&path, env)?;
        self.paths.push(path);
        Ok(())
    }

    fn csv(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
        let path = self.dir.join(name);
        write_csv(&path, header, rows)?;
        self.paths.push(path);
        Ok(())
    }

    fn done(self) -> Written {
        Written { paths: self.paths }
    }
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn site_header(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("s{i}")).collect()
}

fn num(x: f64) -> String {
    // Shortest round-trip form, matching the JSON artifacts.
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn action_for(cfg: &ExperimentConfig) -> CliResult<AlgebraicAction> {
    build_action(cfg.dim, &cfg.f, cfg.tolerances.inverse)
}

pub fn invert(cfg: &ExperimentConfig) -> CliResult<Written> {
    let block = cfg.invert.as_ref().ok_or_else(|| missing("invert"))?;
    let zd = Zd::new(cfg.dim)?;
    let f = parse_group_ring(&cfg.f, cfg.dim).map_err(CliError::Config)?;
    let cert = zd.l1_inverse(&f, block.tol)?;
    let art = InvertArtifact {
        tol: cert.tol,
        residual: cert.residual,
        iterations: cert.iterations,
        grid: cert.grid,
        symbol_lower_bound: cert.symbol_lower_bound,
        history: cert.history.clone(),
        inverse: L1Json::from_element(&cert.inverse),
    };
    let mut header = site_header(cfg.dim);
    header.push("coeff".into());
    let rows: Vec<Vec<String>> = art
        .inverse
        .support
        .iter()
        .zip(&art.inverse.coeffs)
        .map(|(s, c)| s.iter().map(i64::to_string).chain([num(*c)]).collect())
        .collect();
    let mut out = Output::new(cfg)?;
    out.json(&envelope(cfg, Artifact::Invert(art))?)?;
    out.csv("invert.csv", &header, &rows)?;
    Ok(out.done())
}

pub fn box_from_sides(zd: &Zd, sides: &[u64]) -> FiniteSubset<ZdElem> {
    let lo = vec![0i64; sides.len()];
    let hi: Vec<i64> = sides.iter().map(|&m| m as i64).collect();
    zd.box_set(&lo, &hi)
}

/// Shape sides ordered by volume, ties lexicographically.
pub fn sorted_shapes(shapes: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut out = shapes.to_vec();
    out.sort_by(|a, b| {
        let va: u64 = a.iter().product();
        let vb: u64 = b.iter().product();
        va.cmp(&vb).then(a.cmp(b))
    });
    out.dedup();
    out
}

pub fn tile(cfg: &ExperimentConfig) -> CliResult<Written> {
    let block = cfg.tile.as_ref().ok_or_else(|| missing("tile"))?;
    let zd = Zd::new(cfg.dim)?;
    let target = box_from_sides(&zd, &block.target);
    let sides = sorted_shapes(&block.shapes);
    let shapes: Vec<_> = sides.iter().map(|s| box_from_sides(&zd, s)).collect();
    let tiling = quasi_tile(&zd, &target, &shapes, block.eps)?;
    let tiles: Vec<TileJson> = tiling
        .tiles
        .iter()
        .map(|t| TileJson {
            shape: t.shape,
            center: t.center.coords().to_vec(),
            witness: t
                .witness
                .as_ref()
                .map(|w| w.iter().map(|e| e.coords().to_vec()).collect())
                .unwrap_or_default(),
        })
        .collect();
    let covered: u64 = tiles.iter().map(|t| t.witness.len() as u64).sum();
    let art = TileArtifact {
        target: block.target.clone(),
        shapes: sides,
        eps: block.eps,
        target_size: target.len() as u64,
        covered,
        cover_fraction: covered as f64 / target.len() as f64,
        invariance_defect: tiling.invariance_defect,
        tiles,
    };
    let header: Vec<String> = ["target_size", "covered", "cover_fraction", "tiles", "shapes", "eps", "invariance_defect"]
        .map(String::from)
        .to_vec();
    let row = vec![
        art.target_size.to_string(),
        art.covered.to_string(),
        num(art.cover_fraction),
        art.tiles.len().to_string(),
        art.shapes.len().to_string(),
        num(art.eps),
        num(art.invariance_defect),
    ];
    let mut out = Output::new(cfg)?;
    out.json(&envelope(cfg, Artifact::Tile(art))?)?;
    out.csv("tile.csv", &header, &[row])?;
    Ok(out.done())
}

/// Seeded generator on `-[lo, hi]` widened by `r`, the sites read by the
/// rows of window `[lo, hi]`; coefficients in `[-k, k]`.
fn random_generator(rng: &mut ChaCha8Rng, lo: &[i64], hi: &[i64], radius: u64, max_coeff: i64) -> GroupRingElement<ZdElem> {
    let zd = Zd::new(lo.len()).expect("validated dimension");
    let r = radius as i64;
    let from: Vec<i64> = hi.iter().map(|c| -c - r).collect();
    let to: Vec<i64> = lo.iter().map(|c| -c + r + 1).collect();
    let sites = zd.box_set(&from, &to);
    GroupRingElement::from_terms(
        sites
            .iter()
            .map(|&s| (s, rng.gen_range(-max_coeff..=max_coeff)))
            .collect::<Vec<_>>(),
    )
}

fn point_from_spec(
    action: &AlgebraicAction,
    spec: &PointSpec,
    (lo, hi): (&[i64], &[i64]),
    rng: &mut ChaCha8Rng,
) -> CliResult<Point> {
    Ok(match spec {
        PointSpec::Zero => Point::zero(),
        PointSpec::Homoclinic { generator } => {
            action.xi(parse_group_ring(generator, action.dim()).map_err(CliError::Config)?)
        }
        PointSpec::Periodic { modulus, vbar } => action.xi_periodic(*modulus, vbar.clone())?,
        PointSpec::Random { radius, max_coeff } => action.xi(random_generator(rng, lo, hi, *radius, *max_coeff)),
    })
}

/// Inclusive box `[lo, hi]`.
pub fn closed_box(zd: &Zd, lo: &[i64], hi: &[i64]) -> FiniteSubset<ZdElem> {
    let hi: Vec<i64> = hi.iter().map(|h| h + 1).collect();
    zd.box_set(lo, &hi)
}

pub fn shadow(cfg: &ExperimentConfig) -> CliResult<Written> {
    let block = cfg.shadow.as_ref().ok_or_else(|| missing("shadow"))?;
    let action = action_for(cfg)?;
    let zd = action.group();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut windows = Vec::new();
    let mut points = Vec::new();
    let mut window_json = Vec::new();
    for w in &block.windows {
        let x = point_from_spec(&action, &w.point, (&w.lo, &w.hi), &mut rng)?;
        windows.push(closed_box(zd, &w.lo, &w.hi));
        window_json.push(ShadowWindowJson {
            lo: w.lo.clone(),
            hi: w.hi.clone(),
            point: PointJson::from_point(&x),
        });
        points.push(x);
    }
    let bundle = derive_windows(&action, block.eps)?;
    let sh = match block.modulus {
        Some(n) => shadow_periodic(&action, &bundle, &windows, &points, n)?,
        None => shadow_simple(&action, &bundle, &windows, &points)?,
    };
    let eval_tol = (bundle.eps1 * 1e-3).min(1e-9);
    let mut header = vec!["window".to_string()];
    header.extend(site_header(cfg.dim));
    header.push("rho".into());
    let rows: Vec<Vec<String>> = sh
        .rows
        .iter()
        .map(|r| {
            std::iter::once(r.window.to_string())
                .chain(r.s.coords().iter().map(i64::to_string))
                .chain([num(r.rho)])
                .collect()
        })
        .collect();
    let art = ShadowArtifact {
        eps: block.eps,
        modulus: block.modulus,
        depth: bundle.depth,
        eval_tol,
        window_size: bundle.window.len(),
        windows: window_json,
        y: PointJson::from_point(&sh.y),
        generator: format_group_ring(&sh.generator),
        rows: sh.rows.len(),
        worst_rho: sh.worst().map_or(0.0, |r| r.rho),
        max_coordinate_gap: sh.max_coordinate_gap,
        derivation: log_json(&bundle.log),
        budget: log_json(&sh.budget),
    };
    let mut out = Output::new(cfg)?;
    out.json(&envelope(cfg, Artifact::Shadow(art))?)?;
    out.csv("shadow.csv", &header, &rows)?;
    Ok(out.done())
}

pub fn fixed_counts(action: &AlgebraicAction, from: u64, to: u64) -> CliResult<Vec<FixedCountJson>> {
    (from..=to)
        .into_par_iter()
        .map(|n| {
            let c = action.count_fixed_points(n)?;
            Ok(FixedCountJson {
                modulus: n,
                count: c.count.to_string(),
                invariant_factors: c.invariant_factors.iter().map(BigInt::to_string).collect(),
            })
        })
        .collect()
}

pub fn count_fixed(cfg: &ExperimentConfig) -> CliResult<Written> {
    let block = cfg.count_fixed.as_ref().ok_or_else(|| missing("count_fixed"))?;
    let action = action_for(cfg)?;
    let rows = fixed_counts(&action, block.from, block.to)?;
    let csv_rows: Vec<Vec<String>> = rows.iter().map(|r| vec![r.modulus.to_string(), r.count.clone()]).collect();
    let mut out = Output::new(cfg)?;
    out.json(&envelope(cfg, Artifact::CountFixed(CountFixedArtifact { rows }))?)?;
    out.csv("count_fixed.csv", &["modulus".into(), "count".into()], &csv_rows)?;
    Ok(out.done())
}

/// `ν = Σ w_k μ_{y_k}` for the configured periodic atoms.
pub fn target_measure(action: &AlgebraicAction, atoms: &[AtomSpec]) -> CliResult<SampledMeasure> {
    let orbits = atoms
        .iter()
        .map(|a| Ok(periodic_measure(&action.xi_periodic(a.modulus, a.vbar.clone())?)?))
        .collect::<CliResult<Vec<_>>>()?;
    let parts: Vec<(f64, &SampledMeasure)> = atoms.iter().map(|a| a.weight).zip(orbits.iter()).collect();
    Ok(SampledMeasure::mixture(action, &parts)?)
}

pub fn test_functions(dim: usize, specs: &[FunctionSpec]) -> CliResult<Vec<CylinderFunction>> {
    specs
        .iter()
        .map(|f| {
            if f.sites.iter().any(|s| s.len() != dim) {
                return Err(CliError::Config(format!("function sites need {dim} coordinates")));
            }
            let window = f.sites.iter().map(|s| ZdElem::new(s)).collect();
            let terms = f
                .harmonics
                .iter()
                .map(|h| Harmonic {
                    freqs: h.freqs.clone(),
                    a: h.a,
                    b: h.b,
                })
                .collect();
            Ok(CylinderFunction::new(window, terms)?)
        })
        .collect()
}

/// `(∫ξ dν, ∫ξ dμ)` for every test function, in parallel.
pub fn integral_pairs(
    action: &AlgebraicAction,
    nu: &SampledMeasure,
    mu: &SampledMeasure,
    w: &[CylinderFunction],
    tol: f64,
) -> CliResult<Vec<(f64, f64)>> {
    w.par_iter()
        .map(|xi| Ok((integrate(action, nu, xi, tol)?, integrate(action, mu, xi, tol)?)))
        .collect()
}

pub fn schedule_of(block: &ApproxBlock) -> Schedule {
    Schedule {
        base: block.base,
        cap: block.cap,
        scales: (block.scales[0], block.scales[1]),
        cell_floor: block.cell_floor,
    }
}

pub fn approx(cfg: &ExperimentConfig) -> CliResult<Written> {
    let block = cfg.approx.as_ref().ok_or_else(|| missing("approx"))?;
    let action = action_for(cfg)?;
    let nu = target_measure(&action, &block.atoms)?;
    let w = test_functions(cfg.dim, &block.functions)?;
    let out_approx = approximate_by_periodic(&action, &nu, &w, block.eps, &schedule_of(block))?;
    let report = &out_approx.report;
    let pairs = integral_pairs(&action, &nu, &out_approx.measure, &w, cfg.tolerances.verify)?;
    let art = ApproxArtifact {
        eps: block.eps,
        schedule: ScheduleJson {
            base: block.base,
            cap: block.cap,
            scales: block.scales,
            cell_floor: block.cell_floor,
        },
        atoms: block.atoms.iter().map(AtomJson::from).collect(),
        functions: block.functions.clone(),
        y: PointJson::from_point(&out_approx.y),
        modulus: report.modulus,
        orbit_atoms: out_approx.measure.len(),
        tiles_per_axis: report.tiles_per_axis,
        windows: report.windows,
        cells: report.cells,
        metric_lipschitz: report.metric_lipschitz,
        shadow_eps: report.shadow_eps,
        gamma: report.gamma,
        window_size: report.window_size,
        attempts: report
            .attempts
            .iter()
            .map(|a| AttemptJson {
                modulus: a.modulus,
                outcome: a.outcome.clone(),
                ledger_total: a.ledger_total,
            })
            .collect(),
        ledger: report
            .ledger
            .iter()
            .map(|t| BudgetTermJson {
                name: t.name.clone(),
                allowance: t.allowance,
                consumed: t.consumed,
                per_function: t.per_function.clone(),
            })
            .collect(),
        ledger_total: report.ledger_total,
        integrals_nu: pairs.iter().map(|p| p.0).collect(),
        integrals_mu: pairs.iter().map(|p| p.1).collect(),
        gaps: report.gaps.clone(),
        worst_rho: report.worst_rho,
        log: log_json(&report.log),
        notes: report.notes.clone(),
    };
    let gap_rows: Vec<Vec<String>> = (0..w.len())
        .map(|j| {
            vec![
                j.to_string(),
                num(art.integrals_nu[j]),
                num(art.integrals_mu[j]),
                num(art.gaps[j]),
            ]
        })
        .collect();
    let ledger_rows: Vec<Vec<String>> = art
        .ledger
        .iter()
        .map(|t| vec![t.name.clone(), num(t.allowance), num(t.consumed)])
        .collect();
    let mut out = Output::new(cfg)?;
    out.json(&envelope(cfg, Artifact::Approx(art))?)?;
    out.csv(
        "approx_gaps.csv",
        &["function", "integral_nu", "integral_mu", "gap"].map(String::from),
        &gap_rows,
    )?;
    out.csv("approx_ledger.csv", &["term", "allowance", "consumed"].map(String::from), &ledger_rows)?;
    Ok(out.done())
}
