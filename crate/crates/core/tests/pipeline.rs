use permeas_core::algaction::{AlgebraicAction, Point};
use permeas_core::groupring::GroupRingElement;
use permeas_core::groups::{FiniteSubset, Zd, ZdElem};
use permeas_core::measures::{
    approximate_by_periodic, periodic_measure, weakstar_gap, Atom, CylinderFunction, SampledMeasure, Schedule,
};
use permeas_core::specification::{derive_windows, shadow_periodic};
use permeas_core::tiling::{quasi_tile, tile_cores};
use permeas_core::Error;

fn z(v: i64) -> ZdElem {
    ZdElem::new(&[v])
}

fn harmonic() -> AlgebraicAction {
    let f = GroupRingElement::from_terms([(z(0), 3), (z(1), -1), (z(-1), -1)]);
    AlgebraicAction::new(Zd::new(1).unwrap(), f, 1e-12).unwrap()
}

fn test_functions() -> Vec<CylinderFunction> {
    vec![
        CylinderFunction::cos(&[(z(0), 1)]).unwrap(),
        CylinderFunction::sin(&[(z(0), 1)]).unwrap(),
        CylinderFunction::cos(&[(z(0), 1), (z(1), -1)]).unwrap(),
    ]
}

#[test]
fn periodic_target_is_approximated() {
    let a = harmonic();
    let y0 = a.xi_periodic(4, vec![1, -1, 0, 2]).unwrap();
    let nu = periodic_measure(&y0).unwrap();
    let w = test_functions();
    let out = approximate_by_periodic(&a, &nu, &w, 0.2, &Schedule::default()).unwrap();
    let gap = weakstar_gap(&a, &nu, &out.measure, &w, 1e-10).unwrap();
    assert!(gap < 0.2, "{gap}");
    assert!(out.report.ledger_total < 0.2);
    assert!(out.report.gaps.iter().all(|g| *g <= out.report.ledger_total + 1e-9));
    assert!(out.report.sketch.cells.iter().map(|c| c.weight).sum::<f64>() > 1.0 - 1e-12);
    let y = out.y.as_periodic().unwrap();
    assert_eq!(y.modulus(), out.report.modulus);
    assert!(y.vbar_sup() <= 2);
}

#[test]
fn small_cap_exhausts_the_budget() {
    let a = harmonic();
    let mu1 = periodic_measure(&a.xi_periodic(2, vec![1, 0]).unwrap()).unwrap();
    let mu2 = periodic_measure(&a.xi_periodic(3, vec![1, 0, 0]).unwrap()).unwrap();
    let nu = SampledMeasure::mixture(&a, &[(0.5, &mu1), (0.5, &mu2)]).unwrap();
    let schedule = Schedule {
        base: 1 << 10,
        cap: 1 << 10,
        ..Schedule::default()
    };
    match approximate_by_periodic(&a, &nu, &test_functions(), 0.05, &schedule) {
        Err(Error::BudgetExhausted { inequality, total, eps, .. }) => {
            assert_eq!(inequality, "periodic_vs_cores");
            assert!(total >= eps);
        }
        other => panic!("expected an exhausted budget, got {other:?}"),
    }
}

#[test]
fn tiny_moduli_fail_on_tiling_or_separation() {
    let a = harmonic();
    let nu = SampledMeasure::point_mass(Point::zero());
    let schedule = Schedule {
        base: 8,
        cap: 64,
        scales: (8, 16),
        ..Schedule::default()
    };
    let err = approximate_by_periodic(&a, &nu, &test_functions(), 0.1, &schedule).unwrap_err();
    assert!(matches!(err, Error::CoreTooSmall { .. } | Error::Separation { .. } | Error::TilingFailed { .. }), "{err}");
}

#[test]
fn non_convergent_atoms_make_the_pipeline_infeasible() {
    let a = harmonic();
    let y = a.xi_periodic(3, vec![1, 0, 0]).unwrap();
    let nu = SampledMeasure::new(
        &a,
        vec![Atom {
            point: y,
            weight: 1.0,
            scale: Some(1),
        }],
        FiniteSubset::empty(),
    )
    .unwrap();
    let schedule = Schedule {
        scales: (1, 2),
        ..Schedule::default()
    };
    let err = approximate_by_periodic(&a, &nu, &test_functions(), 0.05, &schedule).unwrap_err();
    assert!(matches!(err, Error::PipelineInfeasible(_)), "{err}");
}

#[test]
fn tiles_cores_and_periodic_shadow_compose() {
    let a = harmonic();
    let zd = a.group();
    let bundle = derive_windows(&a, 0.1).unwrap();
    let m = 1024u64;
    let tiling = quasi_tile(zd, &zd.cube(m), &[zd.cube(128), zd.cube(256)], 0.01).unwrap();
    let cores = tile_cores(zd, &tiling, &bundle.window, 1.0).unwrap();
    assert_eq!(cores.len(), 4);
    let windows: Vec<FiniteSubset<ZdElem>> = cores.iter().map(|c| c.placed_shadow(zd)).collect();
    let points: Vec<Point> = (0..cores.len())
        .map(|i| a.xi(GroupRingElement::from_terms([(z(40 * i as i64), 1 + i as i64 % 2)])))
        .collect();
    let shadow = shadow_periodic(&a, &bundle, &windows, &points, m).unwrap();
    assert_eq!(shadow.rows.len(), windows.iter().map(|w| w.len()).sum::<usize>());
    for row in &shadow.rows {
        let rho = a
            .metric_rho(&points[row.window].translate(row.s), &shadow.y.translate(row.s), 1e-6)
            .unwrap();
        assert!(rho <= 0.1 + 1e-6);
    }
}

#[test]
fn two_dimensional_periodic_shadow() {
    let zd = Zd::new(2).unwrap();
    let e = |a: i64, b: i64| ZdElem::new(&[a, b]);
    let f = GroupRingElement::from_terms([(e(0, 0), 5), (e(1, 0), -1), (e(-1, 0), -1), (e(0, 1), -1), (e(0, -1), -1)]);
    let a = AlgebraicAction::new(zd, f, 1e-12).unwrap();
    let bundle = derive_windows(&a, 0.5).unwrap();
    let window: FiniteSubset<ZdElem> = [e(0, 0), e(1, 0), e(0, 1)].into_iter().collect();
    let x = a.xi(GroupRingElement::from_terms([(e(0, 0), 2), (e(1, 1), -1)]));
    let reach = bundle.window.iter().map(|g| g.sup_norm()).max().unwrap();
    let modulus = (2 * reach + 4) as u64;
    let shadow = shadow_periodic(&a, &bundle, &[window.clone()], &[x.clone()], modulus).unwrap();
    let y = shadow.y.as_periodic().unwrap();
    assert_eq!(y.modulus(), modulus);
    for &s in window.iter() {
        let rho = a.metric_rho(&x.translate(s), &shadow.y.translate(s), 1e-6).unwrap();
        assert!(rho <= 0.5 + 1e-6, "{rho}");
    }
}
