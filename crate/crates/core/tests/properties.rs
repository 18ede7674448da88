use permeas_core::algaction::{torus_dist, AlgebraicAction, Point};
use permeas_core::groupring::{GroupRingElement, L1Invertible};
use permeas_core::groups::{FiniteSubset, Group, Zd, ZdElem};
use permeas_core::measures::{periodic_measure, weakstar_gap, CylinderFunction, Harmonic, SampledMeasure};
use permeas_core::tiling::{check_eps_disjoint, quasi_tile};
use proptest::prelude::*;

fn z(v: i64) -> ZdElem {
    ZdElem::new(&[v])
}

fn harmonic() -> AlgebraicAction {
    let f = GroupRingElement::from_terms([(z(0), 3), (z(1), -1), (z(-1), -1)]);
    AlgebraicAction::new(Zd::new(1).unwrap(), f, 1e-12).unwrap()
}

fn element2() -> impl Strategy<Value = GroupRingElement<ZdElem>> {
    proptest::collection::vec(((-2i64..=2, -2i64..=2), -3i64..=3), 0..5).prop_map(|v| {
        GroupRingElement::from_terms(v.into_iter().map(|((a, b), c)| (ZdElem::new(&[a, b]), c)))
    })
}

fn cylinder() -> impl Strategy<Value = CylinderFunction> {
    proptest::collection::vec((proptest::collection::vec(-2i64..=2, 3), -2.0f64..2.0, -2.0f64..2.0), 1..4).prop_map(
        |terms| {
            CylinderFunction::new(
                vec![z(-1), z(0), z(2)],
                terms.into_iter().map(|(freqs, a, b)| Harmonic { freqs, a, b }).collect(),
            )
            .unwrap()
        },
    )
}

fn periodic_generator() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-2i64..=2, 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_in_z2_is_commutative(a in element2(), b in element2(), c in element2()) {
        let g = Zd::new(2).unwrap();
        prop_assert_eq!(a.convolve(&g, &b), b.convolve(&g, &a));
        let lhs = a.convolve(&g, &b.add(&c));
        prop_assert_eq!(lhs, a.convolve(&g, &b).add(&a.convolve(&g, &c)));
        prop_assert!(a.convolve(&g, &b).l1_norm() <= a.l1_norm() * b.l1_norm());
    }

    #[test]
    fn inverse_certificate_is_honest(k in 3i64..7, tol_exp in 4i32..12) {
        // f = k e - x(1) - x(-1) is invertible for k > 2.
        let zd = Zd::new(1).unwrap();
        let f = GroupRingElement::from_terms([(z(0), k), (z(1), -1), (z(-1), -1)]);
        let tol = 10f64.powi(-tol_exp);
        let cert = zd.l1_inverse(&f, tol).unwrap();
        let fg = f.to_l1().convolve(&zd, &cert.inverse);
        let delta = GroupRingElement::delta(z(0)).to_l1();
        prop_assert!(fg.sub(&delta).stored_norm() <= cert.residual);
        prop_assert!(cert.residual + cert.inverse.tail() * (k + 2) as f64 <= tol);
    }

    #[test]
    fn cylinder_functions_are_bounded_and_lipschitz(
        xi in cylinder(),
        x in proptest::collection::vec(0.0f64..1.0, 3),
        dy in proptest::collection::vec(-0.01f64..0.01, 3),
    ) {
        let y: Vec<f64> = x.iter().zip(&dy).map(|(a, b)| a + b).collect();
        let vx = xi.value_from(&x);
        prop_assert!(vx.abs() <= xi.sup_bound() + 1e-12);
        let dist = x.iter().zip(&y).map(|(a, b)| torus_dist(*a, *b)).fold(0.0, f64::max);
        prop_assert!((vx - xi.value_from(&y)).abs() <= xi.coord_lipschitz() * dist + 1e-12);
        // Integer shifts of coordinates leave ξ unchanged.
        let shifted: Vec<f64> = x.iter().map(|a| a + 3.0).collect();
        prop_assert!((vx - xi.value_from(&shifted)).abs() <= 1e-9);
    }

    #[test]
    fn weakstar_gap_is_a_pseudometric(a in periodic_generator(), b in periodic_generator(), c in periodic_generator(), xi in cylinder()) {
        let act = harmonic();
        let m = |v: &Vec<i64>| periodic_measure(&act.xi_periodic(v.len() as u64, v.clone()).unwrap()).unwrap();
        let (ma, mb, mc) = (m(&a), m(&b), m(&c));
        let w = [xi, CylinderFunction::cos(&[(z(0), 1)]).unwrap()];
        let ab = weakstar_gap(&act, &ma, &mb, &w, 1e-10).unwrap();
        let bc = weakstar_gap(&act, &mb, &mc, &w, 1e-10).unwrap();
        let ac = weakstar_gap(&act, &ma, &mc, &w, 1e-10).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert!((ab - weakstar_gap(&act, &mb, &ma, &w, 1e-10).unwrap()).abs() <= 1e-9);
        prop_assert!(weakstar_gap(&act, &ma, &ma, &w, 1e-10).unwrap() <= 1e-9);
    }

    #[test]
    fn periodic_measures_are_probability_measures(v in periodic_generator()) {
        let act = harmonic();
        let y = act.xi_periodic(v.len() as u64, v.clone()).unwrap();
        let mu = periodic_measure(&y).unwrap();
        prop_assert!((mu.total_weight() - 1.0).abs() <= 1e-12);
        prop_assert!(v.len() % mu.len() == 0);
        // Every atom is a translate of y, and all translates are represented.
        for t in 0..v.len() as i64 {
            let moved = y.translate(z(t));
            let hit = mu.atoms().iter().any(|atom| {
                (0..v.len() as i64).all(|s| {
                    let p = act.eval_coord(&atom.point, z(s), 1e-9).unwrap();
                    let q = act.eval_coord(&moved, z(s), 1e-9).unwrap();
                    torus_dist(p, q) <= 1e-8
                })
            });
            prop_assert!(hit);
        }
    }

    #[test]
    fn mixtures_are_linear(a in periodic_generator(), b in periodic_generator(), w in 0.05f64..0.95, xi in cylinder()) {
        let act = harmonic();
        let m = |v: &Vec<i64>| periodic_measure(&act.xi_periodic(v.len() as u64, v.clone()).unwrap()).unwrap();
        let (ma, mb) = (m(&a), m(&b));
        let mix = SampledMeasure::mixture(&act, &[(w, &ma), (1.0 - w, &mb)]).unwrap();
        let int = |mu: &SampledMeasure| permeas_core::measures::integrate(&act, mu, &xi, 1e-11).unwrap();
        prop_assert!((int(&mix) - (w * int(&ma) + (1.0 - w) * int(&mb))).abs() <= 1e-9);
    }

    #[test]
    fn quasi_tilings_pass_their_audit(m in 6u64..40, small in 1u64..4, extra in 1u64..4, eps in 0.05f64..0.24) {
        let zd = Zd::new(2).unwrap();
        let shapes = [zd.cube(small), zd.cube(small + extra)];
        if let Ok(t) = quasi_tile(&zd, &zd.cube(m), &shapes, eps) {
            prop_assert!(check_eps_disjoint(&zd, &t, eps).unwrap().holds);
            let c = t.cover_fraction(&zd).unwrap();
            prop_assert!(*c.numer() as f64 / *c.denom() as f64 >= 1.0 - eps);
        }
    }

    #[test]
    fn metric_is_symmetric_and_triangular(a in periodic_generator(), b in periodic_generator(), c in periodic_generator()) {
        let act = harmonic();
        let p = |v: &Vec<i64>| act.xi_periodic(v.len() as u64, v.clone()).unwrap();
        let (x, y, w) = (p(&a), p(&b), p(&c));
        let d = |u: &Point, v: &Point| act.metric_rho(u, v, 1e-8).unwrap();
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() <= 1e-12);
        prop_assert!(d(&x, &w) <= d(&x, &y) + d(&y, &w) + 1e-8);
        prop_assert!(d(&x, &x) <= 1e-8);
    }
}

#[test]
fn enumeration_prefix_is_a_ball_union() {
    let zd = Zd::new(2).unwrap();
    let prefix: FiniteSubset<ZdElem> = zd.enumeration_prefix(25).into_iter().collect();
    assert_eq!(prefix, zd.ball(2));
    for (k, e) in zd.enumeration_prefix(49).into_iter().enumerate() {
        assert_eq!(zd.enumeration_index(e), k as u64);
    }
}
