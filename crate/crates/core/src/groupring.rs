//! The integer group ring `ZΓ` and finitely supported approximations in
//! `l¹(Γ, R)` with certified tails.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fourier;
use crate::groups::{FiniteSubset, Group, Zd, ZdElem};

const U: f64 = f64::EPSILON / 2.0;

/// `γ_n = n·u / (1 - n·u)`, the accumulated relative error of `n` roundings.
pub(crate) fn gamma(n: usize) -> f64 {
    let nu = n as f64 * U;
    nu / (1.0 - nu)
}

/// An element of `ZΓ`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement<E> {
    terms: BTreeMap<E, i64>,
}

impl<E: Copy + Ord> Default for GroupRingElement<E> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<E: Copy + Ord> GroupRingElement<E> {
    pub fn zero() -> Self {
        GroupRingElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn delta(e: E) -> Self {
        Self::from_terms([(e, 1)])
    }

    /// Sums repeated keys and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (E, i64)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: E, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &E) -> i64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (E, i64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> FiniteSubset<E> {
        FiniteSubset::from_sorted_unchecked(self.terms.keys().copied().collect())
    }

    pub fn l1_norm(&self) -> u64 {
        self.terms.values().map(|c| c.unsigned_abs()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    /// `(a·b)_t = Σ_s a_s b_{s⁻¹t}`.
    pub fn convolve<G: Group<Elem = E>>(&self, group: &G, other: &Self) -> Self {
        let mut out = Self::zero();
        for (s, a) in self.terms() {
            for (u, b) in other.terms() {
                out.add_term(group.mul(s, u), a * b);
            }
        }
        out
    }

    /// `f* = Σ f_s s⁻¹`.
    pub fn involution<G: Group<Elem = E>>(&self, group: &G) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (group.inv(e), c)))
    }

    pub fn is_self_adjoint<G: Group<Elem = E>>(&self, group: &G) -> bool {
        *self == self.involution(group)
    }

    pub fn to_l1(&self) -> L1Element<E> {
        L1Element::from_terms(self.terms().map(|(e, c)| (e, c as f64)), 0.0)
    }
}

/// A finitely supported real element standing in for an element of
/// `l¹(Γ)` within `tail` in `l¹` norm.
#[derive(Clone, Debug, PartialEq)]
pub struct L1Element<E> {
    terms: BTreeMap<E, f64>,
    tail: f64,
}

impl<E: Copy + Ord> L1Element<E> {
    pub fn zero() -> Self {
        L1Element {
            terms: BTreeMap::new(),
            tail: 0.0,
        }
    }

    /// Sums repeated keys and drops exact zeros. Panics on a negative or
    /// non-finite tail.
    pub fn from_terms(terms: impl IntoIterator<Item = (E, f64)>, tail: f64) -> Self {
        assert!(tail >= 0.0 && tail.is_finite(), "tail must be finite and nonnegative");
        let mut map: BTreeMap<E, f64> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        L1Element { terms: map, tail }
    }

    pub fn coeff(&self, e: &E) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (E, f64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn with_tail(mut self, tail: f64) -> Self {
        assert!(tail >= 0.0 && tail.is_finite());
        self.tail = tail;
        self
    }

    pub fn support(&self) -> FiniteSubset<E> {
        FiniteSubset::from_sorted_unchecked(self.terms.keys().copied().collect())
    }

    pub fn stored_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Interval containing the norm of the represented element.
    pub fn norm_bracket(&self) -> (f64, f64) {
        let n = self.stored_norm();
        let slack = gamma(self.terms.len()) * n;
        ((n - slack - self.tail).max(0.0), n + slack + self.tail)
    }

    pub fn add(&self, other: &Self) -> Self {
        let terms = self.terms().chain(other.terms());
        let mut out = Self::from_terms(terms, 0.0);
        let round = U * (self.stored_norm() + other.stored_norm());
        out.tail = self.tail + other.tail + round;
        out
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = Self::from_terms(self.terms().map(|(e, c)| (e, c * k)), 0.0);
        out.tail = self.tail * k.abs() + U * k.abs() * self.stored_norm();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let neg = L1Element {
            terms: other.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            tail: other.tail,
        };
        self.add(&neg)
    }

    /// Convolution; tails follow `t_a‖b‖ + ‖a‖t_b + t_a t_b` plus the
    /// floating-point error of the stored product.
    pub fn convolve<G: Group<Elem = E>>(&self, group: &G, other: &Self) -> Self {
        let mut map: BTreeMap<E, f64> = BTreeMap::new();
        for (s, a) in self.terms() {
            for (u, b) in other.terms() {
                *map.entry(group.mul(s, u)).or_insert(0.0) += a * b;
            }
        }
        map.retain(|_, c| *c != 0.0);
        let (na, nb) = (self.stored_norm(), other.stored_norm());
        let m = self.len().min(other.len());
        let tail = self.tail * nb + na * other.tail + self.tail * other.tail + gamma(m + 2) * na * nb;
        L1Element { terms: map, tail }
    }

    pub fn involution<G: Group<Elem = E>>(&self, group: &G) -> Self {
        L1Element {
            terms: self.terms().map(|(e, c)| (group.inv(e), c)).collect(),
            tail: self.tail,
        }
    }

    /// Coefficients on `window`, zero elsewhere; the tail is dropped since
    /// the result is exactly what it stores.
    pub fn restrict(&self, window: &FiniteSubset<E>) -> Self {
        L1Element {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| window.contains(e))
                .map(|(e, c)| (*e, *c))
                .collect(),
            tail: 0.0,
        }
    }

    /// `Σ_{s ∉ window} |g_s|` over the stored coefficients.
    pub fn mass_outside(&self, window: &FiniteSubset<E>) -> f64 {
        self.terms
            .iter()
            .filter(|(e, _)| !window.contains(e))
            .map(|(_, c)| c.abs())
            .sum()
    }
}

/// `w̃`: the coefficients of `g` on `window`, with zero tail.
pub fn truncate_inverse<E: Copy + Ord>(g: &L1Element<E>, window: &FiniteSubset<E>) -> L1Element<E> {
    g.restrict(window)
}

/// Smallest enumeration prefix `W ∋ e` with `Σ_{s ∉ W⁻¹} |g_s| + tail < η`.
pub fn tail_window<G: Group>(group: &G, g: &L1Element<G::Elem>, eta: f64) -> Result<FiniteSubset<G::Elem>> {
    if !(eta > 0.0) {
        return Err(invalid(format!("tail_window: eta must be positive, got {eta}")));
    }
    if eta <= g.tail {
        return Err(Error::Unachievable {
            requested: eta,
            floor: g.tail,
        });
    }
    // s lies outside W⁻¹ exactly when the index of s⁻¹ is at least |W|.
    let mut by_index: Vec<(u64, f64)> = g
        .terms()
        .map(|(s, c)| (group.enumeration_index(group.inv(s)), c.abs()))
        .collect();
    by_index.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    let mut outside = g.tail;
    let mut len = 1u64;
    for (idx, c) in by_index {
        if outside + c >= eta {
            len = len.max(idx + 1);
            break;
        }
        outside += c;
    }
    Ok(group.enumeration_prefix(len as usize).into_iter().collect())
}

/// A certified approximate inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseCertificate<E> {
    /// `g` with `tail ≥ ‖f⁻¹ - g‖₁`.
    pub inverse: L1Element<E>,
    /// Upper bound on `‖f·g - δ_e‖₁`, roundoff included.
    pub residual: f64,
    pub tol: f64,
    pub iterations: usize,
    /// Side of the torus grid used for the initial guess.
    pub grid: usize,
    /// Certified lower bound on `|f̂|` over the torus.
    pub symbol_lower_bound: f64,
    /// Residual bound after the initial guess and each refinement.
    pub history: Vec<f64>,
}

/// Groups where inversion in `l¹` is available.
pub trait L1Invertible: Group {
    /// Certified `g ≈ f⁻¹` with `residual + tail·‖f‖₁ ≤ tol`.
    fn l1_inverse(
        &self,
        f: &GroupRingElement<Self::Elem>,
        tol: f64,
    ) -> Result<InverseCertificate<Self::Elem>>;
}

const MAX_GRID_POINTS: usize = 1 << 20;
const MAX_REFINEMENTS: usize = 100;
const STAGNATION_WINDOW: usize = 10;

type Coeffs = BTreeMap<ZdElem, f64>;

/// Upper bound on `‖f·g - δ_e‖₁` and the residual itself.
fn residual(zd: &Zd, f: &[(ZdElem, f64)], norm_f: f64, g: &Coeffs) -> (f64, Coeffs) {
    let mut r: Coeffs = BTreeMap::new();
    for (s, a) in f {
        for (u, b) in g {
            *r.entry(*s + *u).or_insert(0.0) -= a * b;
        }
    }
    *r.entry(zd.identity()).or_insert(0.0) += 1.0;
    let raw: f64 = r.values().map(|c| c.abs()).sum();
    let norm_g: f64 = g.values().map(|c| c.abs()).sum();
    let k = r.len();
    let bound = (raw + gamma(f.len() + 1) * norm_f * norm_g * (1.0 + gamma(k))) * (1.0 + gamma(k + 1));
    (bound, r)
}

/// Drops the smallest coefficients while their total mass stays within `budget`.
fn drop_small(c: &mut Coeffs, budget: f64) {
    let mut mags: Vec<(f64, ZdElem)> = c.iter().map(|(e, v)| (v.abs(), *e)).collect();
    mags.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut spent = 0.0;
    for (m, e) in mags {
        if spent + m > budget {
            break;
        }
        spent += m;
        c.remove(&e);
    }
}

fn symmetrize(c: &mut Coeffs) {
    let keys: Vec<ZdElem> = c.keys().copied().collect();
    let mut out = BTreeMap::new();
    for k in keys {
        let v = 0.5 * (c.get(&k).copied().unwrap_or(0.0) + c.get(&-k).copied().unwrap_or(0.0));
        if v != 0.0 {
            out.insert(k, v);
            out.insert(-k, v);
        }
    }
    *c = out;
}

fn not_invertible(reason: impl Into<String>, residual: f64, min_symbol: f64) -> Error {
    Error::NotInvertible {
        reason: reason.into(),
        residual,
        min_symbol,
    }
}

impl L1Invertible for Zd {
    /// Torus-grid initial guess refined by Newton–Schulz steps
    /// `g ← g(2δ_e - f·g)`; the tail comes from the Neumann bound
    /// `‖f⁻¹ - g‖₁ ≤ r‖g‖₁/(1 - r)`.
    fn l1_inverse(&self, f: &GroupRingElement<ZdElem>, tol: f64) -> Result<InverseCertificate<ZdElem>> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(invalid(format!("l1_inverse: tol must be positive, got {tol}")));
        }
        if f.is_zero() {
            return Err(not_invertible("zero element", 1.0, 0.0));
        }
        let d = self.dim();
        if f.terms().any(|(e, _)| e.dim() != d) {
            return Err(invalid("l1_inverse: element has the wrong dimension"));
        }
        let terms: Vec<(ZdElem, f64)> = f.terms().map(|(e, c)| (e, c as f64)).collect();
        let norm_f = f.l1_norm() as f64;
        let lipschitz = core::f64::consts::PI
            * terms
                .iter()
                .map(|(s, c)| c.abs() * s.coords().iter().map(|x| x.unsigned_abs() as f64).sum::<f64>())
                .sum::<f64>();
        let reach = terms.iter().map(|(s, _)| s.sup_norm()).max().unwrap_or(0) as usize;

        let mut n = (4 * reach + 4).next_power_of_two().max(16);
        let (mut g, symbol_lower_bound) = loop {
            let samples = fourier::symbol_on_grid(&terms, d, n);
            let min = samples.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
            if min <= 1e-12 * norm_f {
                return Err(not_invertible(
                    format!("symbol vanishes on the {n}-point torus grid"),
                    f64::NAN,
                    min,
                ));
            }
            let can_refine = (2 * n).pow(d as u32) <= MAX_GRID_POINTS;
            let lower = min - lipschitz / n as f64;
            if lower <= 0.0 {
                if can_refine {
                    n *= 2;
                    continue;
                }
                return Err(not_invertible(
                    format!("symbol not certified away from zero at grid {n}"),
                    f64::NAN,
                    min,
                ));
            }
            let mut data: Vec<Complex64> = samples.iter().map(|z| z.inv()).collect();
            // Transform rounding leaves every coefficient with absolute error
            // of order ε·log(n)·max|1/f̂|; entries below that are noise.
            let noise = 4.0 * f64::EPSILON * (d * n.trailing_zeros() as usize + 1) as f64 / min;
            fourier::fft_nd(&mut data, d, n, false);
            let scale = 1.0 / data.len() as f64;
            let mut guess: Coeffs = BTreeMap::new();
            let mut edge = 0.0;
            let mut edge_max = 0.0f64;
            let mut k = [0usize; crate::groups::MAX_DIM];
            for z in &data {
                let mut c = [0i64; crate::groups::MAX_DIM];
                for i in 0..d {
                    c[i] = if k[i] < n / 2 { k[i] as i64 } else { k[i] as i64 - n as i64 };
                }
                let e = ZdElem::new(&c[..d]);
                let v = z.re * scale;
                if e.sup_norm() as usize >= n / 4 {
                    edge += v.abs();
                    edge_max = edge_max.max(v.abs());
                }
                if v.abs() > noise {
                    guess.insert(e, v);
                }
                for i in (0..d).rev() {
                    k[i] += 1;
                    if k[i] < n {
                        break;
                    }
                    k[i] = 0;
                }
            }
            if edge > tol * 1e-3 && edge_max > noise && can_refine {
                n *= 2;
                continue;
            }
            break (guess, lower);
        };

        let self_adjoint = f.is_self_adjoint(self);
        let kappa = norm_f * g.values().map(|c| c.abs()).sum::<f64>();
        let budget = tol / (16.0 * norm_f * (1.0 + kappa));
        drop_small(&mut g, budget);
        if self_adjoint {
            symmetrize(&mut g);
        }

        let mut history = Vec::new();
        let mut iterations = 0;
        loop {
            let (res, mut r) = residual(self, &terms, norm_f, &g);
            history.push(res);
            let norm_g: f64 = g.values().map(|c| c.abs()).sum::<f64>() * (1.0 + gamma(g.len()));
            if res < 1.0 {
                let tail = res * norm_g / (1.0 - res) * (1.0 + 4.0 * U);
                if res + tail * norm_f <= tol {
                    return Ok(InverseCertificate {
                        inverse: L1Element::from_terms(g, tail),
                        residual: res,
                        tol,
                        iterations,
                        grid: n,
                        symbol_lower_bound,
                        history,
                    });
                }
                let floor = gamma(terms.len() + 1) * norm_f * norm_g;
                if floor * (1.0 + norm_g * norm_f / (1.0 - res)) > tol {
                    return Err(Error::Unachievable {
                        requested: tol,
                        floor: floor * (1.0 + norm_g * norm_f),
                    });
                }
            }
            if history.len() > STAGNATION_WINDOW && res > 0.5 * history[history.len() - 1 - STAGNATION_WINDOW] {
                return Err(not_invertible(
                    format!("residual failed to halve over {STAGNATION_WINDOW} refinements"),
                    res,
                    symbol_lower_bound,
                ));
            }
            if iterations >= MAX_REFINEMENTS {
                return Err(Error::NoConvergence(format!(
                    "residual {res} after {iterations} refinements"
                )));
            }
            drop_small(&mut r, budget);
            let mut next = g.clone();
            for (u, a) in &g {
                for (t, b) in &r {
                    *next.entry(*u + *t).or_insert(0.0) += a * b;
                }
            }
            next.retain(|_, c| *c != 0.0);
            drop_small(&mut next, budget);
            if self_adjoint {
                symmetrize(&mut next);
            }
            g = next;
            iterations += 1;
        }
    }
}

/// `f̂(θ)` for an element of `ZZ^d`.
pub fn symbol(f: &GroupRingElement<ZdElem>, theta: &[f64]) -> Complex64 {
    let terms: Vec<(ZdElem, f64)> = f.terms().map(|(e, c)| (e, c as f64)).collect();
    fourier::symbol_at(&terms, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(v: i64) -> ZdElem {
        ZdElem::new(&[v])
    }

    fn harmonic() -> GroupRingElement<ZdElem> {
        GroupRingElement::from_terms([(z(0), 3), (z(1), -1), (z(-1), -1)])
    }

    const RHO: f64 = 0.381_966_011_250_105_1;

    fn closed_form(n: i64) -> f64 {
        libm::pow(RHO, n.unsigned_abs() as f64) / libm::sqrt(5.0)
    }

    #[test]
    fn ring_examples() {
        let g = Zd::new(1).unwrap();
        let f = harmonic();
        assert_eq!(f.convolve(&g, &GroupRingElement::delta(z(0))), f);
        let shifted = f.convolve(&g, &GroupRingElement::delta(z(2)));
        assert_eq!(shifted, GroupRingElement::from_terms([(z(2), 3), (z(3), -1), (z(1), -1)]));
        assert_eq!(f.involution(&g), f);
        let h = GroupRingElement::from_terms([(z(0), 1), (z(1), -2)]);
        assert_eq!(h.involution(&g), GroupRingElement::from_terms([(z(0), 1), (z(-1), -2)]));
        assert_eq!(f.l1_norm(), 5);
        assert_eq!(GroupRingElement::from_terms([(z(1), 2), (z(1), -2)]), GroupRingElement::zero());
    }

    #[test]
    fn trivial_inverses() {
        let g = Zd::new(1).unwrap();
        let one = g.l1_inverse(&GroupRingElement::delta(z(0)), 1e-12).unwrap();
        assert_eq!(one.inverse.terms().collect::<Vec<_>>(), [(z(0), 1.0)]);
        assert!(one.residual < 1e-15);
        let two = g.l1_inverse(&GroupRingElement::from_terms([(z(0), 2)]), 1e-12).unwrap();
        assert_eq!(two.inverse.terms().collect::<Vec<_>>(), [(z(0), 0.5)]);
        let shift = g.l1_inverse(&GroupRingElement::delta(z(3)), 1e-12).unwrap();
        assert!((shift.inverse.coeff(&z(-3)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn harmonic_inverse_matches_closed_form() {
        let g = Zd::new(1).unwrap();
        let cert = g.l1_inverse(&harmonic(), 1e-10).unwrap();
        let inv = &cert.inverse;
        assert!(cert.residual + inv.tail() * 5.0 <= 1e-10);
        for n in -10..=10 {
            assert!((inv.coeff(&z(n)) - closed_form(n)).abs() < 1e-10, "n = {n}");
        }
        for (e, c) in inv.terms() {
            assert!((c - inv.coeff(&-e)).abs() <= 1e-12);
        }
        let (lo, hi) = inv.norm_bracket();
        assert!(lo <= 1.0 && 1.0 <= hi, "{lo} {hi}");
    }

    #[test]
    fn two_dimensional_inverse() {
        let g = Zd::new(2).unwrap();
        let e = |a, b| ZdElem::new(&[a, b]);
        let f = GroupRingElement::from_terms([(e(0, 0), 5), (e(1, 0), -1), (e(-1, 0), -1), (e(0, 1), -1), (e(0, -1), -1), (e(1, 1), 1)]);
        let cert = g.l1_inverse(&f, 1e-9).unwrap();
        let fg = f.to_l1().convolve(&g, &cert.inverse);
        let err = fg.sub(&GroupRingElement::delta(e(0, 0)).to_l1()).stored_norm();
        assert!(err <= cert.residual * (1.0 + 1e-9));
        // Σ g = 1/f̂(0)
        let total: f64 = cert.inverse.terms().map(|(_, c)| c).sum();
        assert!((total - 1.0 / 2.0).abs() < 1e-9);
    }

    #[test]
    fn non_invertible_detected() {
        let g = Zd::new(1).unwrap();
        let lap = GroupRingElement::from_terms([(z(0), 2), (z(1), -1), (z(-1), -1)]);
        assert!(matches!(g.l1_inverse(&lap, 1e-8), Err(Error::NotInvertible { .. })));
        // zeros at θ = 1/3, 2/3, off every dyadic grid
        let cyc = GroupRingElement::from_terms([(z(0), 1), (z(1), 1), (z(2), 1)]);
        assert!(matches!(g.l1_inverse(&cyc, 1e-8), Err(Error::NotInvertible { .. })));
        let g2 = Zd::new(2).unwrap();
        let e = |a, b| ZdElem::new(&[a, b]);
        let lap2 = GroupRingElement::from_terms([(e(0, 0), 4), (e(1, 0), -1), (e(-1, 0), -1), (e(0, 1), -1), (e(0, -1), -1)]);
        assert!(matches!(g2.l1_inverse(&lap2, 1e-8), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn tail_windows() {
        let g = Zd::new(1).unwrap();
        let delta = GroupRingElement::delta(z(0)).to_l1();
        assert_eq!(tail_window(&g, &delta, 0.1).unwrap(), FiniteSubset::singleton(z(0)));
        let cert = g.l1_inverse(&harmonic(), 1e-12).unwrap();
        let w = tail_window(&g, &cert.inverse, 1e-3).unwrap();
        assert_eq!(w, (-7..=7).map(z).collect());
        // direct summation from the closed form
        let outside = |r: i64| 2.0 * (r + 1..200).map(closed_form).sum::<f64>();
        assert!(outside(7) < 1e-3 && outside(6) >= 1e-3);
        assert_eq!(tail_window(&g, &cert.inverse, 10.0).unwrap(), FiniteSubset::singleton(z(0)));
        let wide = cert.inverse.clone().with_tail(0.5);
        assert!(matches!(tail_window(&g, &wide, 0.4), Err(Error::Unachievable { .. })));
    }

    #[test]
    fn truncation() {
        let g = Zd::new(1).unwrap();
        let cert = g.l1_inverse(&harmonic(), 1e-12).unwrap();
        let w: FiniteSubset<ZdElem> = (-2..=2).map(z).collect();
        let t = truncate_inverse(&cert.inverse, &w);
        assert_eq!(t.len(), 5);
        assert_eq!(t.tail(), 0.0);
        for n in -2..=2 {
            assert!((t.coeff(&z(n)) - closed_form(n)).abs() < 1e-12);
        }
        let e = truncate_inverse(&cert.inverse, &FiniteSubset::singleton(z(0)));
        assert_eq!(e.terms().collect::<Vec<_>>(), [(z(0), cert.inverse.coeff(&z(0)))]);
    }

    fn small_element() -> impl Strategy<Value = GroupRingElement<ZdElem>> {
        proptest::collection::vec((-3i64..=3, -4i64..=4), 0..5)
            .prop_map(|v| GroupRingElement::from_terms(v.into_iter().map(|(s, c)| (z(s), c))))
    }

    proptest! {
        #[test]
        fn convolution_is_associative(a in small_element(), b in small_element(), c in small_element()) {
            let g = Zd::new(1).unwrap();
            prop_assert_eq!(a.convolve(&g, &b).convolve(&g, &c), a.convolve(&g, &b.convolve(&g, &c)));
        }

        #[test]
        fn involution_is_an_antihomomorphism(a in small_element(), b in small_element()) {
            let g = Zd::new(1).unwrap();
            prop_assert_eq!(a.involution(&g).involution(&g), a.clone());
            prop_assert_eq!(a.convolve(&g, &b).involution(&g), b.involution(&g).convolve(&g, &a.involution(&g)));
        }

        #[test]
        fn l1_convolution_tail_brackets_exact_product(a in small_element(), b in small_element(), ta in 0.0f64..0.5, tb in 0.0f64..0.5) {
            let g = Zd::new(1).unwrap();
            let p = a.to_l1().with_tail(ta).convolve(&g, &b.to_l1().with_tail(tb));
            let bound = ta * b.l1_norm() as f64 + a.l1_norm() as f64 * tb + ta * tb;
            prop_assert!(p.tail() >= bound);
            let exact = a.convolve(&g, &b).to_l1();
            prop_assert!(p.sub(&exact).stored_norm() <= 1e-12);
        }
    }
}
