//! The principal algebraic action `X_f ⊂ T^{Z^d}` for a group-ring element
//! `f` invertible in `l¹`.
//!
//! Conventions, with `g = f⁻¹`:
//!
//! * `(r_h v)_t = Σ_s h_s v_{t+s}`, so `r_f r_g = id`;
//! * `ξ(v)_t = (r_g v)_t mod 1 = Σ_u v_u g_{u-t} mod 1`;
//! * `(l^s x)_t = x_{t-s}`, matching `ξ(δ_s·v) = l^s ξ(v)`;
//! * `x ∈ X_f` iff `(r_f x)_t ≡ 0` for every `t`.
//!
//! A periodic generator `v̄` on `Q = [0, n)^d` stands for its
//! `(nZ)^d`-periodization `V`, and `ξ(V)_t = Σ_q v̄_q G_{q-t}` with
//! `G_m = Σ_j g_{m+jn}` the periodized inverse.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::groupring::{gamma, GroupRingElement, InverseCertificate, L1Element, L1Invertible};
use crate::groups::{CongruenceSubgroup, FiniteSubset, Grid, Group, ResiduallyFinite, Zd, ZdElem};
use crate::linalg;

/// Largest quotient solved in exact rational arithmetic.
pub const EXACT_INDEX_LIMIT: u64 = 64;

/// Distance from `ℤ` of a lift used by [`AlgebraicAction::lift_small`]
/// before a window is rejected as not lying in `X_f`.
pub const LIFT_DEFECT_LIMIT: f64 = 1e-9;

/// Representative of `a mod 1` in `[0, 1)`.
pub fn frac(a: f64) -> f64 {
    let r = a - libm::floor(a);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on `T = R/Z`.
pub fn torus_dist(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    d.min(1.0 - d)
}

/// A point of `X_f` (or, for windowed samples, a candidate point).
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    /// Torus values on a declared finite window.
    Window(BTreeMap<ZdElem, f64>),
    /// `ξ(v)` for a finitely supported integer `v`.
    Homoclinic(GroupRingElement<ZdElem>),
    Periodic(PeriodicPoint),
}

/// `ξ(V)` for the periodization `V` of `v̄`, translated by `shift`.
#[derive(Clone, Debug)]
pub struct PeriodicPoint {
    modulus: u64,
    dim: usize,
    vbar: Arc<[i64]>,
    coords: Arc<[f64]>,
    err: f64,
    shift: ZdElem,
}

impl PartialEq for PeriodicPoint {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.dim == other.dim && self.vbar_canonical() == other.vbar_canonical()
    }
}

impl PeriodicPoint {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subgroup(&self) -> CongruenceSubgroup {
        CongruenceSubgroup {
            dim: self.dim,
            modulus: self.modulus,
        }
    }

    /// Absolute error bound of every stored coordinate.
    pub fn coordinate_error(&self) -> f64 {
        self.err
    }

    fn grid(&self) -> Grid {
        quotient_grid(self.dim, self.modulus)
    }

    fn reduce(&self, t: ZdElem) -> usize {
        let n = self.modulus as i64;
        let mut c = [0i64; crate::groups::MAX_DIM];
        for (i, slot) in c.iter_mut().enumerate().take(self.dim) {
            *slot = (t.coords()[i] - self.shift.coords()[i]).rem_euclid(n);
        }
        self.grid().index(ZdElem::new(&c[..self.dim])).expect("reduced into Q")
    }

    /// `x_t` in `[0, 1)`, accurate to [`Self::coordinate_error`].
    pub fn coord(&self, t: ZdElem) -> f64 {
        self.coords[self.reduce(t)]
    }

    /// Coordinates over `Q = [0, n)^d`, row-major.
    pub fn coords_on_domain(&self) -> Vec<f64> {
        let grid = self.grid();
        (0..grid.volume()).map(|i| self.coord(grid.elem(i))).collect()
    }

    /// The generator with the translation applied, row-major over `Q`.
    pub fn vbar_canonical(&self) -> Vec<i64> {
        let grid = self.grid();
        (0..grid.volume()).map(|i| self.vbar[self.reduce(grid.elem(i))]).collect()
    }

    pub fn vbar_sup(&self) -> u64 {
        self.vbar.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }
}

impl Point {
    pub fn zero() -> Point {
        Point::Homoclinic(GroupRingElement::zero())
    }

    /// Windowed point; values are reduced mod 1.
    pub fn window(values: impl IntoIterator<Item = (ZdElem, f64)>) -> Point {
        Point::Window(values.into_iter().map(|(e, v)| (e, frac(v))).collect())
    }

    /// `l^s x`.
    pub fn translate(&self, s: ZdElem) -> Point {
        match self {
            Point::Window(w) => Point::Window(w.iter().map(|(e, v)| (*e + s, *v)).collect()),
            Point::Homoclinic(v) => {
                Point::Homoclinic(GroupRingElement::from_terms(v.terms().map(|(e, c)| (e + s, c))))
            }
            Point::Periodic(p) => {
                let n = p.modulus as i64;
                let mut c = [0i64; crate::groups::MAX_DIM];
                for (i, slot) in c.iter_mut().enumerate().take(p.dim) {
                    *slot = (p.shift.coords()[i] + s.coords()[i]).rem_euclid(n);
                }
                Point::Periodic(PeriodicPoint {
                    shift: ZdElem::new(&c[..p.dim]),
                    ..p.clone()
                })
            }
        }
    }

    pub fn as_periodic(&self) -> Option<&PeriodicPoint> {
        match self {
            Point::Periodic(p) => Some(p),
            _ => None,
        }
    }
}

/// The periodized inverse `G` on `Q` for one modulus.
#[derive(Debug)]
pub struct PeriodicInverse {
    pub modulus: u64,
    /// Exact `G` over `Q` (row-major) when the index is small.
    pub exact: Option<Vec<BigRational>>,
    /// Nonzero entries `(index in Q, G_m)`.
    pub approx: Vec<(usize, f64)>,
    /// Bound on `Σ_m |G_m - stored G_m|`.
    pub error: f64,
    pub norm: f64,
}

/// Output of [`AlgebraicAction::lift_small`].
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub v: GroupRingElement<ZdElem>,
    /// `V' = {t : t + supp f ⊆ V}`, where `v` was computed.
    pub domain: FiniteSubset<ZdElem>,
    /// Sites where `ξ(v)` provably agrees with `x` within `tol`.
    pub reliable: FiniteSubset<ZdElem>,
    pub tol: f64,
    pub max_defect: f64,
}

/// One radius of [`AlgebraicAction::homoclinic_decay_profile`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayPoint {
    pub radius: u64,
    pub observed: f64,
    pub bound: f64,
}

/// `|Fix_{Γ'}(X_f)|` and the invariant factors of `Z^Q / M Z^Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointCount {
    pub modulus: u64,
    pub count: BigInt,
    pub invariant_factors: Vec<BigInt>,
}

fn quotient_grid(dim: usize, n: u64) -> Grid {
    Grid::new(dim, &[0; crate::groups::MAX_DIM][..dim], &[n as i64; crate::groups::MAX_DIM][..dim])
}

/// `X_f` together with a certified inverse of `f`.
#[derive(Debug)]
pub struct AlgebraicAction {
    group: Zd,
    f: GroupRingElement<ZdElem>,
    norm_f: u64,
    cert: InverseCertificate<ZdElem>,
    periodic: spin::RwLock<BTreeMap<u64, Arc<PeriodicInverse>>>,
}

impl AlgebraicAction {
    /// Inverts `f` to tolerance `tol`.
    pub fn new(group: Zd, f: GroupRingElement<ZdElem>, tol: f64) -> Result<Self> {
        let cert = group.l1_inverse(&f, tol)?;
        Self::with_inverse(group, f, cert)
    }

    pub fn with_inverse(group: Zd, f: GroupRingElement<ZdElem>, cert: InverseCertificate<ZdElem>) -> Result<Self> {
        if f.terms().any(|(e, _)| e.dim() != group.dim()) {
            return Err(invalid("f has the wrong dimension"));
        }
        Ok(AlgebraicAction {
            group,
            norm_f: f.l1_norm(),
            f,
            cert,
            periodic: spin::RwLock::new(BTreeMap::new()),
        })
    }

    pub fn group(&self) -> &Zd {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn f(&self) -> &GroupRingElement<ZdElem> {
        &self.f
    }

    pub fn norm_f(&self) -> u64 {
        self.norm_f
    }

    pub fn certificate(&self) -> &InverseCertificate<ZdElem> {
        &self.cert
    }

    /// `g ≈ f⁻¹`.
    pub fn inverse(&self) -> &L1Element<ZdElem> {
        &self.cert.inverse
    }

    /// `(f*)⁻¹ = (f⁻¹)*`.
    pub fn inverse_star(&self) -> L1Element<ZdElem> {
        self.cert.inverse.involution(&self.group)
    }

    fn check_dim(&self, e: ZdElem) -> Result<()> {
        if e.dim() != self.dim() {
            return Err(invalid(format!("element {e:?} is not in Z^{}", self.dim())));
        }
        Ok(())
    }

    /// `ξ(v)`.
    pub fn xi(&self, v: GroupRingElement<ZdElem>) -> Point {
        Point::Homoclinic(v)
    }

    /// `ξ(V)` for the `(nZ)^d`-periodization of `v̄`, given row-major on `[0, n)^d`.
    pub fn xi_periodic(&self, modulus: u64, vbar: Vec<i64>) -> Result<Point> {
        if modulus == 0 {
            return Err(invalid("modulus must be positive"));
        }
        let d = self.dim();
        let grid = quotient_grid(d, modulus);
        if vbar.len() != grid.volume() {
            return Err(invalid(format!(
                "periodic generator has {} entries, expected {}",
                vbar.len(),
                grid.volume()
            )));
        }
        let inv = self.periodic_inverse(modulus)?;
        let vsup = vbar.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0) as f64;
        let support: Vec<(ZdElem, i64)> = vbar
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| (grid.elem(i), *v))
            .collect();
        let n = modulus as i64;
        let index_of = |q: ZdElem, m: ZdElem| {
            let mut c = [0i64; crate::groups::MAX_DIM];
            for (i, slot) in c.iter_mut().enumerate().take(d) {
                *slot = (q.coords()[i] - m.coords()[i]).rem_euclid(n);
            }
            grid.index(ZdElem::new(&c[..d])).expect("reduced into Q")
        };
        let (coords, err): (Vec<f64>, f64) = match &inv.exact {
            Some(exact) => {
                let mut acc = vec![BigRational::zero(); grid.volume()];
                for (q, v) in &support {
                    let vq = BigRational::from_integer(BigInt::from(*v));
                    for (mi, gm) in exact.iter().enumerate() {
                        if gm.is_zero() {
                            continue;
                        }
                        // x_t gets v̄_q G_{q-t}; with m = q - t, t = q - m.
                        let t = index_of(*q, grid.elem(mi));
                        acc[t] += &vq * gm;
                    }
                }
                let coords = acc
                    .into_iter()
                    .map(|a| {
                        let fr = &a - a.floor();
                        frac(fr.to_f64().unwrap_or(0.0))
                    })
                    .collect();
                (coords, f64::EPSILON)
            }
            None => {
                let mut acc = vec![0.0f64; grid.volume()];
                for (q, v) in &support {
                    for (mi, gm) in &inv.approx {
                        let t = index_of(*q, grid.elem(*mi));
                        acc[t] += *v as f64 * gm;
                    }
                }
                let round = gamma(inv.approx.len() + 2) * vsup * inv.norm;
                (acc.into_iter().map(frac).collect(), vsup * inv.error + round)
            }
        };
        Ok(Point::Periodic(PeriodicPoint {
            modulus,
            dim: d,
            vbar: vbar.into(),
            coords: coords.into(),
            err,
            shift: ZdElem::zero(d),
        }))
    }

    /// `ξ` of the periodization of a finitely supported `v`.
    pub fn xi_periodized(&self, modulus: u64, v: &GroupRingElement<ZdElem>) -> Result<Point> {
        let h = self.group.congruence_subgroup(modulus)?;
        let grid = quotient_grid(self.dim(), modulus);
        let mut vbar = vec![0i64; grid.volume()];
        for (u, c) in v.terms() {
            let (_, q) = self.group.coset_reduce(&h, u);
            vbar[grid.index(q).expect("fundamental domain")] += c;
        }
        self.xi_periodic(modulus, vbar)
    }

    /// Cached periodized inverse for `(nZ)^d`.
    pub fn periodic_inverse(&self, modulus: u64) -> Result<Arc<PeriodicInverse>> {
        if let Some(p) = self.periodic.read().get(&modulus) {
            return Ok(p.clone());
        }
        let built = Arc::new(self.build_periodic_inverse(modulus)?);
        let mut w = self.periodic.write();
        Ok(w.entry(modulus).or_insert(built).clone())
    }

    fn build_periodic_inverse(&self, modulus: u64) -> Result<PeriodicInverse> {
        let d = self.dim();
        let grid = quotient_grid(d, modulus);
        let index = grid.volume();
        let n = modulus as i64;
        let reduce = |e: ZdElem| {
            let c: Vec<i64> = e.coords().iter().map(|x| x.rem_euclid(n)).collect();
            grid.index(ZdElem::new(&c)).expect("reduced into Q")
        };
        if (index as u64) <= EXACT_INDEX_LIMIT {
            // M y = δ_0 has solution y_t = G_{-t}.
            let q = |a: i64| BigRational::from_integer(BigInt::from(a));
            let mut m = vec![vec![q(0); index]; index];
            for (t, row) in m.iter_mut().enumerate() {
                let te = grid.elem(t);
                for (s, c) in self.f.terms() {
                    row[reduce(te + s)] += q(c);
                }
            }
            let mut rhs = vec![q(0); index];
            rhs[0] = q(1);
            let y = linalg::solve_rational(m, rhs).ok_or(Error::InfiniteFixedSet)?;
            let mut exact = vec![q(0); index];
            for (t, yt) in y.into_iter().enumerate() {
                exact[reduce(-grid.elem(t))] = yt;
            }
            let approx: Vec<(usize, f64)> = exact
                .iter()
                .enumerate()
                .filter(|(_, g)| !g.is_zero())
                .map(|(i, g)| (i, g.to_f64().unwrap_or(0.0)))
                .collect();
            let norm = approx.iter().map(|(_, g)| g.abs()).sum();
            return Ok(PeriodicInverse {
                modulus,
                exact: Some(exact),
                approx,
                error: 0.0,
                norm,
            });
        }
        let g = self.inverse();
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        let mut folds: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, c) in g.terms() {
            let i = reduce(k);
            *acc.entry(i).or_insert(0.0) += c;
            *folds.entry(i).or_insert(0) += 1;
        }
        let max_fold = folds.values().copied().max().unwrap_or(1);
        let approx: Vec<(usize, f64)> = acc.into_iter().filter(|(_, c)| *c != 0.0).collect();
        let norm = approx.iter().map(|(_, g)| g.abs()).sum();
        Ok(PeriodicInverse {
            modulus,
            exact: None,
            approx,
            error: g.tail() + gamma(max_fold) * g.stored_norm(),
            norm,
        })
    }

    /// Error bound for `ξ(v)_t` computed from the stored inverse.
    fn homoclinic_coord(&self, v: &GroupRingElement<ZdElem>, t: ZdElem) -> (f64, f64) {
        let g = self.inverse();
        let mut acc = 0.0;
        let mut abs = 0.0;
        let mut vsup = 0u64;
        for (u, c) in v.terms() {
            let gk = g.coeff(&(u - t));
            acc += c as f64 * gk;
            abs += (c as f64 * gk).abs();
            vsup = vsup.max(c.unsigned_abs());
        }
        let err = vsup as f64 * g.tail() + gamma(v.len() + 2) * abs;
        (frac(acc), err)
    }

    /// `x_s` on the torus, to within `tol`.
    pub fn eval_coord(&self, x: &Point, s: ZdElem, tol: f64) -> Result<f64> {
        self.check_dim(s)?;
        match x {
            Point::Window(w) => w
                .get(&s)
                .copied()
                .ok_or_else(|| Error::InsufficientWindow(s.coords().to_vec())),
            Point::Homoclinic(v) => {
                let (val, err) = self.homoclinic_coord(v, s);
                if err > tol {
                    return Err(Error::RefineInverse {
                        required: tol,
                        available: err,
                    });
                }
                Ok(val)
            }
            Point::Periodic(p) => {
                if p.err > tol {
                    return Err(Error::RefineInverse {
                        required: tol,
                        available: p.err,
                    });
                }
                Ok(p.coord(s))
            }
        }
    }

    /// Small lift of a windowed point: `w ∈ [-1/2, 1/2)`,
    /// `v = r_f w` on the shrunken window, rounded to integers.
    pub fn lift_small(&self, x: &Point, tol: f64) -> Result<Lift> {
        let Point::Window(values) = x else {
            return Err(invalid("lift_small needs a windowed point"));
        };
        let window: FiniteSubset<ZdElem> = values.keys().copied().collect();
        let supp = self.f.support();
        let domain = self.group.interior(&window, &supp, &window);
        if domain.is_empty() {
            return Err(invalid("window too small: shrinking by supp f leaves nothing"));
        }
        let w = |t: ZdElem| {
            let a = values[&t];
            if a >= 0.5 {
                a - 1.0
            } else {
                a
            }
        };
        let mut terms = Vec::new();
        let mut max_defect = 0.0f64;
        for &t in domain.iter() {
            let raw: f64 = self.f.terms().map(|(s, c)| c as f64 * w(t + s)).sum();
            let rounded = libm::round(raw);
            let defect = (raw - rounded).abs();
            if defect > LIFT_DEFECT_LIMIT {
                return Err(Error::NotInXf {
                    at: t.coords().to_vec(),
                    defect,
                });
            }
            max_defect = max_defect.max(defect);
            terms.push((t, rounded as i64));
        }
        let v = GroupRingElement::from_terms(terms);
        // ξ(v)_t - x_t = -Σ_{k : t+k ∉ V'} g_k (r_f w)_{t+k} with |r_f w| ≤ ‖f‖₁/2.
        let g = self.inverse();
        let half = self.norm_f as f64 / 2.0;
        let reliable = window
            .iter()
            .copied()
            .filter(|&t| {
                let outside: f64 = g
                    .terms()
                    .filter(|(k, _)| !domain.contains(&(t + *k)))
                    .map(|(_, c)| c.abs())
                    .sum();
                half * (outside + g.tail()) <= tol
            })
            .collect();
        Ok(Lift {
            v,
            domain,
            reliable,
            tol,
            max_defect,
        })
    }

    /// `v = round(r_f w)` on an explicit `domain`, with `w` the lift of `x`
    /// into `[-1/2, 1/2)` evaluated to `tol`. Needs `x` on `domain + supp f`.
    pub fn lift_on(&self, x: &Point, domain: &FiniteSubset<ZdElem>, tol: f64) -> Result<GroupRingElement<ZdElem>> {
        let mut cache: BTreeMap<ZdElem, f64> = BTreeMap::new();
        let limit = LIFT_DEFECT_LIMIT + self.norm_f as f64 * tol;
        let mut terms = Vec::with_capacity(domain.len());
        for &t in domain.iter() {
            let mut raw = 0.0;
            for (s, c) in self.f.terms() {
                let site = t + s;
                let a = match cache.get(&site) {
                    Some(a) => *a,
                    None => {
                        let a = self.eval_coord(x, site, tol)?;
                        cache.insert(site, a);
                        a
                    }
                };
                raw += c as f64 * if a >= 0.5 { a - 1.0 } else { a };
            }
            let rounded = libm::round(raw);
            let defect = (raw - rounded).abs();
            if defect > limit {
                return Err(Error::NotInXf {
                    at: t.coords().to_vec(),
                    defect,
                });
            }
            terms.push((t, rounded as i64));
        }
        Ok(GroupRingElement::from_terms(terms))
    }

    /// Upper bound on `ρ(x, y)` from the first `depth` coordinates, each
    /// evaluated to `tol`; the unseen terms contribute at most `2^{-depth}`.
    pub fn metric_rho_bound(&self, x: &Point, y: &Point, depth: usize, tol: f64) -> Result<f64> {
        let mut total = 0.0;
        let mut w = 1.0;
        for s in self.group.enumeration_prefix(depth) {
            let a = self.eval_coord(x, s, tol)?;
            let b = self.eval_coord(y, s, tol)?;
            total += w * (torus_dist(a, b) + 2.0 * tol).min(0.5);
            w *= 0.5;
        }
        Ok(total + w)
    }

    /// `d_T((r_f x)_s, 0)`, to within `tol`.
    pub fn membership_defect(&self, x: &Point, s: ZdElem, tol: f64) -> Result<f64> {
        let per = tol / self.norm_f.max(1) as f64;
        let mut acc = 0.0;
        for (k, c) in self.f.terms() {
            let xs = self.eval_coord(x, s + k, per).map_err(|e| match e {
                Error::InsufficientWindow(at) => invalid(format!("insufficient window at {at:?}")),
                other => other,
            })?;
            acc += c as f64 * xs;
        }
        Ok(torus_dist(acc, 0.0))
    }

    /// `ρ(x, y)` to within `tol`.
    pub fn metric_rho(&self, x: &Point, y: &Point, tol: f64) -> Result<f64> {
        let depth = metric_depth(tol);
        let per = tol / 8.0;
        let mut total = 0.0;
        let mut w = 1.0;
        for s in self.group.enumeration_prefix(depth) {
            let a = self.eval_coord(x, s, per)?;
            let b = self.eval_coord(y, s, per)?;
            total += w * torus_dist(a, b);
            w *= 0.5;
        }
        Ok(total)
    }

    /// Sup of `d_T(x_s, 0)` over each sphere `|s|_∞ = R`, against
    /// `‖v‖₁ · (Σ_{|k|_∞ ≥ R - r_v} |g_k| + tail) + tol` where `r_v` is the
    /// sup-norm radius of `supp v`.
    pub fn homoclinic_decay_profile(&self, x: &Point, radii: &[u64], tol: f64) -> Result<Vec<DecayPoint>> {
        let Point::Homoclinic(v) = x else {
            return Err(invalid("decay profile needs a homoclinic point"));
        };
        let g = self.inverse();
        let rv = v.terms().map(|(u, _)| u.sup_norm()).max().unwrap_or(0);
        let vnorm = v.l1_norm() as f64;
        radii
            .iter()
            .map(|&r| {
                let mut observed = 0.0f64;
                for s in self.group.shell(r) {
                    observed = observed.max(torus_dist(self.eval_coord(x, s, tol)?, 0.0));
                }
                let cut = r.saturating_sub(rv);
                let mass: f64 = g.terms().filter(|(k, _)| k.sup_norm() >= cut).map(|(_, c)| c.abs()).sum();
                let bound = if v.is_zero() { 0.0 } else { vnorm * (mass + g.tail()) + tol };
                Ok(DecayPoint {
                    radius: r,
                    observed,
                    bound,
                })
            })
            .collect()
    }

    /// Number of `(nZ)^d`-fixed points of `X_f`, `|det M|` for the quotient
    /// matrix `M_{t, t+s} = f_s` on `Z^Q`.
    pub fn count_fixed_points(&self, modulus: u64) -> Result<FixedPointCount> {
        if modulus == 0 {
            return Err(invalid("modulus must be positive"));
        }
        let grid = quotient_grid(self.dim(), modulus);
        let n = modulus as i64;
        let size = grid.volume();
        let mut m = vec![vec![BigInt::zero(); size]; size];
        for (t, row) in m.iter_mut().enumerate() {
            let te = grid.elem(t);
            for (s, c) in self.f.terms() {
                let target: Vec<i64> = (te + s).coords().iter().map(|x| x.rem_euclid(n)).collect();
                row[grid.index(ZdElem::new(&target)).expect("reduced")] += c;
            }
        }
        let invariant_factors = linalg::smith_diagonal(m);
        let count: BigInt = invariant_factors.iter().product();
        if count.is_zero() {
            return Err(Error::InfiniteFixedSet);
        }
        Ok(FixedPointCount {
            modulus,
            count,
            invariant_factors,
        })
    }
}

/// Number of enumeration terms kept by [`AlgebraicAction::metric_rho`]:
/// the least `K` with `2^{-K} < tol/2`.
pub fn metric_depth(tol: f64) -> usize {
    let mut k = 0;
    let mut w = 1.0;
    while w >= tol / 2.0 {
        w *= 0.5;
        k += 1;
    }
    k
}
