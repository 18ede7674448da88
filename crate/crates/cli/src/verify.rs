//! Re-checks an emitted artifact from its JSON alone.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use permeas_core::algaction::AlgebraicAction;
use permeas_core::groups::{Zd, ZdElem};
use permeas_core::measures::periodic_measure;
use permeas_core::tiling::{check_eps_disjoint, PlacedTile, QuasiTiling};
use rayon::prelude::*;

use crate::artifact::*;
use crate::config::AtomSpec;
use crate::error::{CliError, CliResult};
use crate::parse::parse_group_ring;
use crate::run::{box_from_sides, closed_box, fixed_counts, integral_pairs, target_measure, test_functions, RECHECK_TOL};

/// Short human-readable summary of what was checked.
pub type Summary = String;

fn fail(msg: impl Into<String>) -> CliError {
    CliError::Mismatch(msg.into())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= RECHECK_TOL * (1.0 + a.abs().max(b.abs()))
}

pub fn verify(env: &Envelope) -> CliResult<Summary> {
    match &env.artifact {
        Artifact::Invert(a) => verify_invert(env, a),
        Artifact::Tile(a) => verify_tile(env, a),
        Artifact::Shadow(a) => verify_shadow(env, a),
        Artifact::CountFixed(a) => verify_count_fixed(env, a),
        Artifact::Approx(a) => verify_approx(env, a),
    }
}

fn action_of(env: &Envelope) -> CliResult<AlgebraicAction> {
    build_action(env.dim, &env.f, env.inverse_tol)
}

fn rational(x: f64) -> CliResult<BigRational> {
    BigRational::from_float(x).ok_or_else(|| fail(format!("non-finite value {x}")))
}

/// Exact `‖f·g - δ_e‖₁` with `g` read as exact binary fractions.
pub fn exact_residual(f: &[(Vec<i64>, i64)], g: &[(Vec<i64>, BigRational)], dim: usize) -> BigRational {
    let mut r: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (s, a) in f {
        let a = BigRational::from_integer(BigInt::from(*a));
        for (u, b) in g {
            let k: Vec<i64> = s.iter().zip(u).map(|(x, y)| x + y).collect();
            *r.entry(k).or_insert_with(BigRational::zero) += &a * b;
        }
    }
    *r.entry(vec![0; dim]).or_insert_with(BigRational::zero) -= BigRational::one();
    r.values().map(|c| c.abs()).fold(BigRational::zero(), |acc, c| acc + c)
}

fn verify_invert(env: &Envelope, a: &InvertArtifact) -> CliResult<Summary> {
    let f = parse_group_ring(&env.f, env.dim).map_err(CliError::Config)?;
    let inv = &a.inverse;
    if inv.support.len() != inv.coeffs.len() || inv.support.iter().any(|s| s.len() != env.dim) {
        return Err(fail("inverse support and coefficients disagree"));
    }
    let f_terms: Vec<(Vec<i64>, i64)> = f.terms().map(|(e, c)| (e.coords().to_vec(), c)).collect();
    let g_terms = inv
        .support
        .iter()
        .zip(&inv.coeffs)
        .map(|(s, c)| Ok((s.clone(), rational(*c)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let exact = exact_residual(&f_terms, &g_terms, env.dim);
    let claimed = rational(a.residual)?;
    if exact > claimed {
        return Err(fail(format!("exact residual exceeds the recorded bound {}", a.residual)));
    }
    // Neumann bound on the distance to the true inverse.
    let one = BigRational::one();
    if exact >= one {
        return Err(fail("residual is not below 1"));
    }
    let norm_g = g_terms.iter().map(|(_, c)| c.abs()).fold(BigRational::zero(), |acc, c| acc + c);
    let needed = &exact * &norm_g / (&one - &exact);
    if needed > rational(inv.tail)? {
        return Err(fail("recorded tail is below the Neumann bound"));
    }
    let norm_f = BigRational::from_integer(BigInt::from(f.l1_norm()));
    if claimed + rational(inv.tail)? * norm_f > rational(a.tol)? {
        return Err(fail("residual + tail * |f|_1 exceeds the tolerance"));
    }
    let exact_f = exact.numer().to_string().parse::<f64>().unwrap_or(f64::INFINITY)
        / exact.denom().to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    Ok(format!("invert: exact residual {exact_f:e} <= {:e}, tol {:e}", a.residual, a.tol))
}

fn elem(coords: &[i64], dim: usize) -> CliResult<ZdElem> {
    if coords.len() != dim {
        return Err(fail(format!("coordinate list {coords:?} is not in Z^{dim}")));
    }
    Ok(ZdElem::new(coords))
}

fn verify_tile(env: &Envelope, a: &TileArtifact) -> CliResult<Summary> {
    let zd = Zd::new(env.dim)?;
    let shapes: Vec<_> = a.shapes.iter().map(|s| box_from_sides(&zd, s)).collect();
    let target = box_from_sides(&zd, &a.target);
    let tiles = a
        .tiles
        .iter()
        .map(|t| {
            if t.shape >= shapes.len() {
                return Err(fail(format!("tile refers to missing shape {}", t.shape)));
            }
            let witness = t.witness.iter().map(|c| elem(c, env.dim)).collect::<CliResult<Vec<_>>>()?;
            Ok(PlacedTile {
                shape: t.shape,
                center: elem(&t.center, env.dim)?,
                witness: Some(witness.into_iter().collect()),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let tiling = QuasiTiling {
        shapes,
        tiles,
        target: target.clone(),
        eps: a.eps,
        invariance_defect: a.invariance_defect,
    };
    let report = check_eps_disjoint(&zd, &tiling, a.eps)?;
    if !report.holds {
        return Err(fail(format!(
            "not eps-disjoint: {} overlapping, {} thin, {} outside",
            report.overlapping.len(),
            report.thin.len(),
            report.outside.len()
        )));
    }
    // Witnesses are disjoint subsets of the target, so their sizes add up.
    let covered: u64 = tiling.tiles.iter().map(|t| t.witness.as_ref().map_or(0, |w| w.len() as u64)).sum();
    if covered != a.covered || target.len() as u64 != a.target_size {
        return Err(fail("recorded coverage does not match the witnesses"));
    }
    if (covered as f64) < (1.0 - a.eps) * target.len() as f64 {
        return Err(fail(format!("cover fraction {} below 1 - eps", a.cover_fraction)));
    }
    Ok(format!(
        "tile: {} tiles, eps-disjoint, cover {covered}/{}",
        a.tiles.len(),
        a.target_size
    ))
}

fn verify_shadow(env: &Envelope, a: &ShadowArtifact) -> CliResult<Summary> {
    let action = action_of(env)?;
    let zd = action.group().clone();
    let y = a.y.to_point(&action)?;
    match (&a.y, a.modulus) {
        (PointJson::Periodic { modulus, .. }, Some(n)) if *modulus == n => {}
        (PointJson::Homoclinic { v }, None) if *v == a.generator => {}
        _ => return Err(fail("shadow point does not match the requested kind")),
    }
    let mut rows = 0;
    let mut worst = 0.0f64;
    for (i, w) in a.windows.iter().enumerate() {
        if w.lo.len() != env.dim || w.hi.len() != env.dim {
            return Err(fail(format!("window {i} has the wrong dimension")));
        }
        let x = w.point.to_point(&action)?;
        let fi = closed_box(&zd, &w.lo, &w.hi);
        let rhos = fi
            .as_slice()
            .par_iter()
            .map(|&s| action.metric_rho_bound(&x.translate(s), &y.translate(s), a.depth, a.eval_tol))
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some((k, r)) = rhos.iter().enumerate().find(|(_, r)| **r > a.eps) {
            return Err(fail(format!(
                "window {i} at {:?}: rho bound {r} > eps {}",
                fi.as_slice()[k].coords(),
                a.eps
            )));
        }
        rows += rhos.len();
        worst = rhos.iter().copied().fold(worst, f64::max);
    }
    if rows != a.rows || !close(worst, a.worst_rho) {
        return Err(fail(format!(
            "recomputed {rows} rows with worst {worst}, recorded {} with {}",
            a.rows, a.worst_rho
        )));
    }
    if let PointJson::Periodic { vbar, .. } = &a.y {
        let half = action.norm_f() / 2;
        if vbar.iter().any(|c| c.unsigned_abs() > half) {
            return Err(fail("periodic generator exceeds |f|_1/2"));
        }
    }
    Ok(format!("shadow: {rows} rows, worst rho {worst:e} <= eps {}", a.eps))
}

fn verify_count_fixed(env: &Envelope, a: &CountFixedArtifact) -> CliResult<Summary> {
    let action = action_of(env)?;
    let (Some(first), Some(last)) = (a.rows.first(), a.rows.last()) else {
        return Err(fail("no rows"));
    };
    let fresh = fixed_counts(&action, first.modulus, last.modulus)?;
    if fresh != a.rows {
        return Err(fail("recomputed fixed-point counts differ"));
    }
    for r in &a.rows {
        let product = r
            .invariant_factors
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| fail(e.to_string())))
            .try_fold(BigInt::one(), |acc, x| x.map(|x| acc * x))?;
        if product.to_string() != r.count {
            return Err(fail(format!("invariant factors of modulus {} do not multiply to the count", r.modulus)));
        }
    }
    Ok(format!("count-fixed: {} moduli recomputed", a.rows.len()))
}

fn verify_approx(env: &Envelope, a: &ApproxArtifact) -> CliResult<Summary> {
    let action = action_of(env)?;
    let atoms: Vec<AtomSpec> = a
        .atoms
        .iter()
        .map(|x| AtomSpec {
            weight: x.weight,
            modulus: x.modulus,
            vbar: x.vbar.clone(),
        })
        .collect();
    let nu = target_measure(&action, &atoms)?;
    let w = test_functions(env.dim, &a.functions)?;
    let y = a.y.to_point(&action)?;
    if y.as_periodic().map(|p| p.modulus()) != Some(a.modulus) {
        return Err(fail("approximating point is not periodic with the recorded modulus"));
    }
    let mu = periodic_measure(&y)?;
    if mu.len() != a.orbit_atoms {
        return Err(fail(format!("orbit has {} atoms, recorded {}", mu.len(), a.orbit_atoms)));
    }
    let n = w.len();
    if a.gaps.len() != n || a.integrals_nu.len() != n || a.integrals_mu.len() != n {
        return Err(fail("per-function tables have the wrong length"));
    }
    let pairs = integral_pairs(&action, &nu, &mu, &w, 1e-10)?;
    for (j, (inu, imu)) in pairs.iter().enumerate() {
        let gap = (inu - imu).abs();
        if !(gap < a.eps) {
            return Err(fail(format!("function {j}: gap {gap} not below eps {}", a.eps)));
        }
        if !close(gap, a.gaps[j]) || !close(*inu, a.integrals_nu[j]) || !close(*imu, a.integrals_mu[j]) {
            return Err(fail(format!("function {j}: recomputed integrals differ from the record")));
        }
        let chain: f64 = a.ledger.iter().map(|t| t.per_function.get(j).copied().unwrap_or(0.0)).sum();
        if gap > chain + RECHECK_TOL {
            return Err(fail(format!("function {j}: gap {gap} exceeds its ledger chain {chain}")));
        }
    }
    let total: f64 = a.ledger.iter().map(|t| t.consumed).sum();
    if !close(total, a.ledger_total) || !(a.ledger_total < a.eps) {
        return Err(fail(format!("ledger total {} inconsistent or not below eps", a.ledger_total)));
    }
    let worst = pairs.iter().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(format!(
        "approx: modulus {}, {} functions, max gap {worst:e}, ledger {:e} < eps {}",
        a.modulus, n, a.ledger_total, a.eps
    ))
}
