//! Executable specification property for `X_f`: window derivation,
//! separation checks and the three shadowing constructions.
//!
//! Shadowing works through integer generators. A point `x` on the window
//! sites `F_i⁻¹W₁W₂` is lifted to `v = round(r_f w)`; since
//! `x = ξ(r_f w)`, the assembled `y = ξ(Σ vⁱ)` differs from `xⁱ` at a site
//! `t` by `Σ_k g_k D_{t+k}` where `D` vanishes on the lifted domain and is
//! bounded by `‖f‖₁` elsewhere. `W₂` is chosen so that this is below `ε₁/2`
//! on `F_i⁻¹W₁`, which by the choice of `W₁` keeps `ρ(sxⁱ, sy) ≤ ε`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algaction::{torus_dist, AlgebraicAction, Point};
use crate::error::{invalid, Error, Result};
use crate::groupring::{tail_window, GroupRingElement};
use crate::groups::{FiniteSubset, Group, ResiduallyFinite, Zd, ZdElem};

/// One recorded inequality `value ≤ bound` (or `<` when `strict`).
#[derive(Clone, Debug, PartialEq)]
pub struct LogEntry {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub strict: bool,
    pub holds: bool,
}

impl LogEntry {
    pub fn new(name: impl ToString, value: f64, bound: f64, strict: bool) -> Self {
        let holds = if strict { value < bound } else { value <= bound };
        LogEntry {
            name: name.to_string(),
            value,
            bound,
            strict,
            holds,
        }
    }
}

/// All windows derived from `f` and `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowBundle {
    pub eps: f64,
    /// Coordinate tolerance, `min(ε/8, 1/(2‖f‖₁))`.
    pub eps1: f64,
    /// Tolerance of the homoclinic approximation step, `ε₁/2`.
    pub delta: f64,
    /// Metric depth `K`: `W₁` is the enumeration prefix of length `K`.
    pub depth: usize,
    /// `{e} ∪ supp f*`.
    pub w: FiniteSubset<ZdElem>,
    pub w1: FiniteSubset<ZdElem>,
    pub w2: FiniteSubset<ZdElem>,
    /// `W₁W₂(W₁W₂)⁻¹`.
    pub w3: FiniteSubset<ZdElem>,
    /// `F = AA⁻¹` with `A = W₁W₂W₃⁻¹W`.
    pub window: FiniteSubset<ZdElem>,
    /// Achieved `Σ_{s ∉ W₂⁻¹} |(f*)⁻¹_s| + tail`.
    pub w2_mass: f64,
    pub log: Vec<LogEntry>,
}

impl WindowBundle {
    /// `W₁W₂`, the set whose translates `F_i⁻¹W₁W₂` carry the lifts.
    pub fn lift_window(&self) -> FiniteSubset<ZdElem> {
        let zd = Zd::new(self.w1.iter().next().map_or(1, |e| e.dim())).expect("valid dimension");
        self.w1.product(&zd, &self.w2)
    }
}

/// Windows for shadowing at tolerance `eps`.
pub fn derive_windows(action: &AlgebraicAction, eps: f64) -> Result<WindowBundle> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1], got {eps}")));
    }
    let zd = action.group();
    let norm_f = action.norm_f() as f64;
    let eps1 = (eps / 8.0).min(1.0 / (2.0 * norm_f));
    let mut log = Vec::new();
    log.push(LogEntry::new("eps1 * |f|_1", eps1 * norm_f, 1.0, true));

    let mut depth = 0;
    let mut tail = 1.0;
    while tail > eps / 2.0 {
        tail *= 0.5;
        depth += 1;
    }
    let w1: FiniteSubset<ZdElem> = zd.enumeration_prefix(depth).into_iter().collect();
    log.push(LogEntry::new("metric truncation 2^-K", tail, eps / 2.0, false));
    let agreement = tail + 2.0 * eps1 * (2.0 - 2.0 * tail);
    log.push(LogEntry::new("2^-K + 2 eps1 sum_{k<K} 2^-k", agreement, eps, false));

    let eta = eps1 / (2.0 * norm_f);
    let gstar = action.inverse_star();
    let w2 = tail_window(zd, &gstar, eta)?;
    let w2_inv = w2.inverse(zd);
    let w2_mass = gstar.mass_outside(&w2_inv) + gstar.tail();
    log.push(LogEntry::new("mass of (f*)^-1 outside W2^-1", w2_mass, eta, true));

    let w1w2 = w1.product(zd, &w2);
    let w3 = w1w2.product(zd, &w1w2.inverse(zd));
    let w: FiniteSubset<ZdElem> = core::iter::once(zd.identity())
        .chain(action.f().involution(zd).support().iter().copied())
        .collect();
    let a = w1w2.product(zd, &w3.inverse(zd)).product(zd, &w);
    let window = a.product(zd, &a.inverse(zd));
    log.push(LogEntry::new("|F|", window.len() as f64, f64::INFINITY, true));
    Ok(WindowBundle {
        eps,
        eps1,
        delta: eps1 / 2.0,
        depth,
        w,
        w1,
        w2,
        w3,
        window,
        w2_mass,
        log,
    })
}

/// Which displayed condition a pair violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    /// `FF_i ∩ F_j = ∅` for `i ≠ j`.
    Disjoint,
    /// `FF_i ∩ F_j(Γ' ∖ {e}) = ∅`.
    Periodic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationCertificate<S> {
    pub subgroup: Option<S>,
    pub windows: usize,
    pub holds: bool,
    /// `(i, j, condition)`, 0-based, sorted.
    pub violations: Vec<(usize, usize, Condition)>,
}

/// Checks the separation conditions for `windows` against `f_window`.
///
/// Every `a ∈ FF_i` is looked up among the window elements sharing its
/// coset (or equal to it, without a subgroup); a hit `b ∈ F_j` is a
/// violation when `i ≠ j` and `a = b`, or when `a ≠ b`.
pub fn check_separation<G: ResiduallyFinite>(
    group: &G,
    f_window: &FiniteSubset<G::Elem>,
    windows: &[FiniteSubset<G::Elem>],
    subgroup: Option<&G::Subgroup>,
) -> SeparationCertificate<G::Subgroup> {
    let key = |e: G::Elem| match subgroup {
        Some(h) => group.coset_reduce(h, e).1,
        None => e,
    };
    let mut owners: BTreeMap<G::Elem, Vec<(usize, G::Elem)>> = BTreeMap::new();
    for (j, fj) in windows.iter().enumerate() {
        for &b in fj.iter() {
            owners.entry(key(b)).or_default().push((j, b));
        }
    }
    let mut violations = Vec::new();
    for (i, fi) in windows.iter().enumerate() {
        let grown = group.product_set(f_window, fi);
        for &a in grown.iter() {
            if let Some(hits) = owners.get(&key(a)) {
                for &(j, b) in hits {
                    if a == b && i != j {
                        violations.push((i, j, Condition::Disjoint));
                    } else if a != b && subgroup.is_some() {
                        violations.push((i, j, Condition::Periodic));
                    }
                }
            }
        }
    }
    violations.sort_unstable();
    violations.dedup();
    SeparationCertificate {
        subgroup: subgroup.cloned(),
        windows: windows.len(),
        holds: violations.is_empty(),
        violations,
    }
}

fn separation_error<S>(cert: &SeparationCertificate<S>) -> Error {
    let (i, j, _) = cert.violations[0];
    Error::Separation {
        violations: cert.violations.len(),
        first: (i, j),
    }
}

/// Achieved `ρ` bound for one translate `s ∈ F_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerificationRow {
    pub window: usize,
    pub s: ZdElem,
    pub rho: f64,
}

/// Result of a shadowing construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Shadow {
    pub y: Point,
    /// The integer generator assembled from the lifts.
    pub generator: GroupRingElement<ZdElem>,
    pub rows: Vec<VerificationRow>,
    /// Largest `d_T(xⁱ_t, y_t)` over the lifted sites `F_i⁻¹W₁`.
    pub max_coordinate_gap: f64,
    pub budget: Vec<LogEntry>,
}

impl Shadow {
    pub fn worst(&self) -> Option<VerificationRow> {
        self.rows.iter().copied().max_by(|a, b| a.rho.total_cmp(&b.rho))
    }
}

fn eval_tol(bundle: &WindowBundle) -> f64 {
    (bundle.eps1 * 1e-3).min(1e-9)
}

struct Lifts {
    domains: Vec<FiniteSubset<ZdElem>>,
    lifts: Vec<GroupRingElement<ZdElem>>,
}

fn lift_all(
    action: &AlgebraicAction,
    bundle: &WindowBundle,
    windows: &[FiniteSubset<ZdElem>],
    points: &[Point],
) -> Result<Lifts> {
    if windows.len() != points.len() {
        return Err(invalid(format!(
            "{} windows but {} points",
            windows.len(),
            points.len()
        )));
    }
    if windows.iter().any(|w| w.is_empty()) {
        return Err(invalid("windows must be nonempty"));
    }
    let zd = action.group();
    let lw = bundle.lift_window();
    let tol = eval_tol(bundle);
    let half = action.norm_f() / 2;
    let mut domains = Vec::with_capacity(windows.len());
    let mut lifts = Vec::with_capacity(windows.len());
    for (fi, x) in windows.iter().zip(points) {
        let domain = fi.inverse(zd).product(zd, &lw);
        let v = action.lift_on(x, &domain, tol)?;
        if let Some((at, c)) = v.terms().find(|(_, c)| c.unsigned_abs() > half) {
            return Err(Error::Internal(format!(
                "lift coefficient {c} at {at:?} exceeds |f|_1/2"
            )));
        }
        domains.push(domain);
        lifts.push(v);
    }
    Ok(Lifts { domains, lifts })
}

/// Checks `ρ(sxⁱ, sy) ≤ ε` for every `s ∈ F_i` and returns the rows and
/// the largest coordinate gap on `F_i⁻¹W₁`.
fn verify(
    action: &AlgebraicAction,
    bundle: &WindowBundle,
    windows: &[FiniteSubset<ZdElem>],
    points: &[Point],
    y: &Point,
) -> Result<(Vec<VerificationRow>, f64)> {
    let tol = eval_tol(bundle);
    let w1 = action.group().enumeration_prefix(bundle.depth);
    let mut rows = Vec::new();
    let mut gap = 0.0f64;
    let mut ycache: BTreeMap<ZdElem, f64> = BTreeMap::new();
    for (i, (fi, x)) in windows.iter().zip(points).enumerate() {
        let mut xcache: BTreeMap<ZdElem, f64> = BTreeMap::new();
        for &s in fi.iter() {
            let mut rho = 0.0;
            let mut w = 1.0;
            for &t in &w1 {
                let site = t - s;
                let a = match xcache.get(&site) {
                    Some(a) => *a,
                    None => *xcache.entry(site).or_insert(action.eval_coord(x, site, tol)?),
                };
                let b = match ycache.get(&site) {
                    Some(b) => *b,
                    None => *ycache.entry(site).or_insert(action.eval_coord(y, site, tol)?),
                };
                let d = torus_dist(a, b);
                gap = gap.max(d);
                rho += w * (d + 2.0 * tol).min(0.5);
                w *= 0.5;
            }
            rho += w;
            if rho > bundle.eps {
                return Err(Error::Verification {
                    window: i,
                    at: s.coords().to_vec(),
                    achieved: rho,
                    bound: bundle.eps,
                });
            }
            rows.push(VerificationRow { window: i, s, rho });
        }
        if windows.len() > 64 {
            ycache.clear();
        }
    }
    Ok((rows, gap))
}

fn budget(action: &AlgebraicAction, bundle: &WindowBundle, gap: f64) -> Vec<LogEntry> {
    let tol = eval_tol(bundle);
    let norm_f = action.norm_f() as f64;
    let tail_term = norm_f * (1.0 + tol) * bundle.w2_mass;
    let eval_term = 2.0 * tol;
    let mut terms = vec![
        LogEntry::new("inverse tail |f|_1 * mass", tail_term, bundle.eps1 / 2.0, false),
        LogEntry::new("coordinate evaluation", eval_term, bundle.eps1 / 4.0, false),
        LogEntry::new("coordinate total", tail_term + eval_term, 2.0 * bundle.eps1, true),
    ];
    terms.push(LogEntry::new("observed coordinate gap", gap, tail_term + eval_term, false));
    terms
}

/// Shadows each `xⁱ` along `F_i` by a single homoclinic point.
pub fn shadow_simple(
    action: &AlgebraicAction,
    bundle: &WindowBundle,
    windows: &[FiniteSubset<ZdElem>],
    points: &[Point],
) -> Result<Shadow> {
    let zd = action.group();
    let lw = bundle.lift_window();
    let f_tilde = lw.product(zd, &lw.inverse(zd));
    let cert = check_separation(zd, &f_tilde, windows, None);
    if !cert.holds {
        return Err(separation_error(&cert));
    }
    let Lifts { domains, lifts } = lift_all(action, bundle, windows, points)?;
    for i in 0..domains.len() {
        for j in i + 1..domains.len() {
            if !domains[i].is_disjoint(&domains[j]) {
                return Err(Error::Internal(format!("lift domains {i} and {j} overlap")));
            }
        }
    }
    let generator = lifts.iter().fold(GroupRingElement::zero(), |acc, v| acc.add(v));
    let y = action.xi(generator.clone());
    let (rows, gap) = verify(action, bundle, windows, points, &y)?;
    Ok(Shadow {
        y,
        generator,
        rows,
        max_coordinate_gap: gap,
        budget: budget(action, bundle, gap),
    })
}

/// A homoclinic point tracking `x` along `F₁`, with its far-field check.
#[derive(Clone, Debug, PartialEq)]
pub struct HomoclinicApprox {
    pub shadow: Shadow,
    /// `‖v‖_∞ · mass` bound on `|y_t|` for `t ∉ F₁⁻¹W₁W₂W₂⁻¹`.
    pub far_field_bound: f64,
    /// Largest `d_T(y_t, 0)` seen on a band of sites outside that region.
    pub far_field_observed: f64,
}

/// Finite version of the homoclinic approximation: `y = ξ(v)` with `v`
/// supported in `F₁⁻¹W₁W₂`.
pub fn homoclinic_approx(
    action: &AlgebraicAction,
    bundle: &WindowBundle,
    x: &Point,
    f1: &FiniteSubset<ZdElem>,
) -> Result<HomoclinicApprox> {
    let shadow = shadow_simple(action, bundle, core::slice::from_ref(f1), core::slice::from_ref(x))?;
    let zd = action.group();
    let vsup = shadow.generator.terms().map(|(_, c)| c.unsigned_abs()).max().unwrap_or(0) as f64;
    let tol = eval_tol(bundle);
    let far_field_bound = vsup * bundle.w2_mass + tol;
    let near = f1
        .inverse(zd)
        .product(zd, &bundle.lift_window())
        .product(zd, &bundle.w2.inverse(zd));
    let mut observed = 0.0f64;
    if let Some((lo, hi)) = zd.bounding_box(&near) {
        for layer in 1..=8i64 {
            for t in box_layer(zd, lo, hi, layer) {
                if !near.contains(&t) {
                    observed = observed.max(torus_dist(action.eval_coord(&shadow.y, t, tol)?, 0.0));
                }
            }
        }
    }
    if observed > far_field_bound {
        return Err(Error::Verification {
            window: 0,
            at: Vec::new(),
            achieved: observed,
            bound: far_field_bound,
        });
    }
    Ok(HomoclinicApprox {
        shadow,
        far_field_bound,
        far_field_observed: observed,
    })
}

/// Sites at sup-distance exactly `layer` from the box `[lo, hi]`.
fn box_layer(zd: &Zd, lo: ZdElem, hi: ZdElem, layer: i64) -> Vec<ZdElem> {
    let d = zd.dim();
    let lo_c: Vec<i64> = lo.coords().iter().map(|c| c - layer).collect();
    let hi_c: Vec<i64> = hi.coords().iter().map(|c| c + layer + 1).collect();
    zd.box_set(&lo_c, &hi_c)
        .iter()
        .copied()
        .filter(|t| {
            (0..d).any(|i| t.coords()[i] == lo_c[i] || t.coords()[i] == hi_c[i] - 1)
        })
        .collect()
}

/// Periodic shadow: a `(nZ)^d`-fixed point `y` with `ρ(sxⁱ, sy) ≤ ε` for
/// `s ∈ F_i`.
pub fn shadow_periodic(
    action: &AlgebraicAction,
    bundle: &WindowBundle,
    windows: &[FiniteSubset<ZdElem>],
    points: &[Point],
    modulus: u64,
) -> Result<Shadow> {
    let zd = action.group();
    let h = zd.congruence_subgroup(modulus)?;
    let cert = check_separation(zd, &bundle.window, windows, Some(&h));
    if !cert.holds {
        return Err(separation_error(&cert));
    }
    let Lifts { lifts, .. } = lift_all(action, bundle, windows, points)?;
    let index = h.index() as usize;
    let domain = zd.fundamental_domain(&h);
    let mut zbar = vec![0i64; index];
    let mut owner = vec![usize::MAX; index];
    let mut generator_terms = Vec::new();
    for (i, v) in lifts.iter().enumerate() {
        for (u, c) in v.terms() {
            let (_, q) = zd.coset_reduce(&h, u);
            let slot = domain.as_slice().binary_search(&q).expect("reduced into Q");
            let k = row_major(q, modulus);
            if owner[slot] != usize::MAX {
                return Err(Error::Internal(format!(
                    "periodic translates of lift supports collide at {q:?} (windows {} and {i})",
                    owner[slot]
                )));
            }
            owner[slot] = i;
            zbar[k] = c;
            generator_terms.push((q, c));
        }
    }
    let half = action.norm_f() / 2;
    if zbar.iter().any(|c| c.unsigned_abs() > half) {
        return Err(Error::Internal("periodic generator exceeds |f|_1/2".into()));
    }
    let y = action.xi_periodic(modulus, zbar)?;
    let (rows, gap) = verify(action, bundle, windows, points, &y)?;
    Ok(Shadow {
        y,
        generator: GroupRingElement::from_terms(generator_terms),
        rows,
        max_coordinate_gap: gap,
        budget: budget(action, bundle, gap),
    })
}

fn row_major(q: ZdElem, n: u64) -> usize {
    q.coords().iter().fold(0usize, |acc, &c| acc * n as usize + c as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algaction::torus_dist;

    fn z(v: i64) -> ZdElem {
        ZdElem::new(&[v])
    }

    fn interval(lo: i64, hi: i64) -> FiniteSubset<ZdElem> {
        (lo..=hi).map(z).collect()
    }

    fn harmonic() -> AlgebraicAction {
        let f = GroupRingElement::from_terms([(z(0), 3), (z(1), -1), (z(-1), -1)]);
        AlgebraicAction::new(Zd::new(1).unwrap(), f, 1e-12).unwrap()
    }

    #[test]
    fn windows_for_harmonic_model() {
        let a = harmonic();
        let b = derive_windows(&a, 0.1).unwrap();
        assert_eq!(b.eps1, 0.0125);
        assert_eq!(b.depth, 5);
        assert_eq!(b.w1, interval(-2, 2));
        assert!(b.log.iter().all(|e| e.holds), "{:?}", b.log);
        // Re-verify the W₂ inequality by direct summation from the closed form.
        let rho = 0.381_966_011_250_105_1f64;
        let g = |n: i64| libm::pow(rho, n.unsigned_abs() as f64) / libm::sqrt(5.0);
        let w2inv = b.w2.inverse(a.group());
        let outside: f64 = (-200..=200).filter(|n| !w2inv.contains(&z(*n))).map(g).sum();
        assert!(outside < b.eps1 / 10.0);
        assert_eq!(b.window, b.window.inverse(a.group()));
        assert!(b.window.contains(&z(0)));
    }

    #[test]
    fn trivial_f_windows() {
        let f = GroupRingElement::delta(z(0));
        let a = AlgebraicAction::new(Zd::new(1).unwrap(), f, 1e-12).unwrap();
        let b = derive_windows(&a, 0.1).unwrap();
        assert_eq!(b.w2, FiniteSubset::singleton(z(0)));
        // A = W₁W₃⁻¹ = W₁W₁W₁⁻¹ = [-6,6].
        assert_eq!(b.w3, interval(-4, 4));
        assert_eq!(b.window, interval(-12, 12));
    }

    #[test]
    fn windows_grow_as_eps_shrinks() {
        let a = harmonic();
        let sizes: Vec<FiniteSubset<ZdElem>> = [0.2, 0.1, 0.05].iter().map(|&e| derive_windows(&a, e).unwrap().window).collect();
        assert!(sizes[0].is_subset(&sizes[1]) && sizes[1].is_subset(&sizes[2]));
    }

    #[test]
    fn separation_examples() {
        let zd = Zd::new(1).unwrap();
        let f = interval(-3, 3);
        let one = check_separation(&zd, &f, &[FiniteSubset::singleton(z(0))], None);
        assert!(one.holds);
        let two = [FiniteSubset::singleton(z(0)), FiniteSubset::singleton(z(10))];
        assert!(check_separation(&zd, &f, &two, None).holds);
        let h = zd.congruence_subgroup(12).unwrap();
        let c = check_separation(&zd, &f, &two, Some(&h));
        assert!(!c.holds);
        assert!(c.violations.contains(&(1, 0, Condition::Periodic)));
        // FF₁ = [-3,3] meets F₁(Γ' ∖ {e}) exactly when n ≤ 3.
        let h3 = zd.congruence_subgroup(3).unwrap();
        let single = check_separation(&zd, &f, &[FiniteSubset::singleton(z(0))], Some(&h3));
        assert_eq!(single.violations, vec![(0, 0, Condition::Periodic)]);
        let h4 = zd.congruence_subgroup(4).unwrap();
        assert!(check_separation(&zd, &f, &[FiniteSubset::singleton(z(0))], Some(&h4)).holds);
    }

    #[test]
    fn simple_shadows() {
        let a = harmonic();
        let b = derive_windows(&a, 0.1).unwrap();
        let zero = shadow_simple(&a, &b, &[interval(-2, 2)], &[Point::zero()]).unwrap();
        assert!(zero.generator.is_zero());

        let x1 = a.xi(GroupRingElement::delta(z(0)));
        let x2 = a.xi(GroupRingElement::delta(z(50)));
        let windows = [interval(-2, 2), interval(48, 52)];
        let s = shadow_simple(&a, &b, &windows, &[x1.clone(), x2.clone()]).unwrap();
        assert!(s.rows.iter().all(|r| r.rho <= 0.1));

        // ρ(sx, sy) for s ∈ [48,52] reads sites near -50, where ξ(δ₋₅₀) lives.
        let x3 = a.xi(GroupRingElement::delta(z(-50)));
        let s = shadow_simple(&a, &b, &windows, &[x1.clone(), x3]).unwrap();
        assert!(s.rows.iter().all(|r| r.rho <= 0.1));
        // Superposition oracle: y agrees with ξ(δ₀ + δ₋₅₀) on both lifted blocks.
        let sup = a.xi(GroupRingElement::from_terms([(z(0), 1), (z(-50), 1)]));
        for t in (-4..=4).chain(-54..=-46) {
            let d = torus_dist(a.eval_coord(&s.y, z(t), 1e-9).unwrap(), a.eval_coord(&sup, z(t), 1e-9).unwrap());
            assert!(d < b.eps1, "t = {t}: {d}");
        }
        assert!(s.budget.iter().all(|e| e.holds), "{:?}", s.budget);

        let overlapping = [interval(-2, 2), interval(3, 6)];
        assert!(matches!(shadow_simple(&a, &b, &overlapping, &[x1, x2]), Err(Error::Separation { .. })));
    }

    #[test]
    fn homoclinic_approximation() {
        let a = harmonic();
        let b = derive_windows(&a, 0.05).unwrap();
        let z0 = homoclinic_approx(&a, &b, &Point::zero(), &interval(-3, 3)).unwrap();
        assert!(z0.shadow.generator.is_zero());
        let x = a.xi(GroupRingElement::delta(z(0)));
        let h = homoclinic_approx(&a, &b, &x, &interval(-3, 3)).unwrap();
        assert!(h.far_field_observed <= h.far_field_bound);
        assert!(h.far_field_bound <= b.eps1);
        let prof = a.homoclinic_decay_profile(&h.shadow.y, &[0, 5, 20, 40], 1e-9).unwrap();
        assert!(prof.iter().all(|p| p.observed <= p.bound));
    }

    #[test]
    fn periodic_shadows() {
        let a = harmonic();
        let b = derive_windows(&a, 0.1).unwrap();
        let zero = shadow_periodic(&a, &b, &[interval(-2, 2)], &[Point::zero()], 200).unwrap();
        assert!(zero.generator.is_zero());
        assert_eq!(zero.y.translate(z(200)), zero.y);

        let x = a.xi(GroupRingElement::delta(z(0)));
        let s = shadow_periodic(&a, &b, &[interval(-2, 2)], &[x.clone()], 200).unwrap();
        assert_eq!(s.y.translate(z(-400)), s.y);
        assert!(s.rows.iter().all(|r| r.rho <= 0.1));

        // Dense float solve of the 200×200 circulant as the oracle.
        let n = 200usize;
        let zbar = s.y.as_periodic().unwrap().vbar_canonical();
        let mut m = vec![vec![0.0f64; n + 1]; n];
        for t in 0..n {
            m[t][t] += 3.0;
            m[t][(t + 1) % n] -= 1.0;
            m[t][(t + n - 1) % n] -= 1.0;
            m[t][n] = zbar[t] as f64;
        }
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
            m.swap(c, p);
            for r in 0..n {
                if r != c {
                    let k = m[r][c] / m[c][c];
                    for col in c..=n {
                        let v = m[c][col];
                        m[r][col] -= k * v;
                    }
                }
            }
        }
        for t in 0..n {
            let exact = m[t][n] / m[t][t];
            let got = a.eval_coord(&s.y, z(t as i64), 1e-9).unwrap();
            assert!(torus_dist(exact, got) < 1e-9, "t = {t}");
        }

        let two = [interval(0, 2), interval(60, 62)];
        let xs = [x.clone(), x];
        assert!(matches!(shadow_periodic(&a, &b, &two, &xs, 110), Err(Error::Separation { .. })));
    }
}
