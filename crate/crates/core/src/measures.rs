//! Test functions, sampled invariant measures and the periodic
//! approximation pipeline.
//!
//! Every measure here is a finite list of atoms. The pipeline compares a
//! target `ν` with the orbit measure of one periodic point `y` through a
//! chain of averages
//!
//! ```text
//! ν(ξ) → Σ_a w_a ξ*(a) → Σ_c a_c ξ*(x_c) → Σ_c share_c ξ*(x_c)
//!      → core averages of xⁱ → core averages of y → μ_y(ξ)
//! ```
//!
//! and records each link as a ledger term. The terms are computed, not
//! estimated, so their sum bounds the achieved gap.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::algaction::{torus_dist, AlgebraicAction, PeriodicPoint, Point};
use crate::error::{invalid, Error, Result};
use crate::groups::{FiniteSubset, Group, Zd, ZdElem};
use crate::specification::{derive_windows, shadow_periodic, LogEntry, WindowBundle};
use crate::tiling::{quasi_tile, tile_cores};

/// Coordinates closer than this on the torus are treated as equal when
/// deduplicating atoms.
pub const ATOM_TOLERANCE: f64 = 1e-9;

/// Length of the enumeration prefix compared when no window is declared.
pub const DEFAULT_WINDOW: usize = 16;

/// One trigonometric term `a·cos(2π⟨m, x⟩) + b·sin(2π⟨m, x⟩)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Harmonic {
    /// One frequency per site of the function's window.
    pub freqs: Vec<i64>,
    pub a: f64,
    pub b: f64,
}

/// A trigonometric polynomial in finitely many coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderFunction {
    window: Vec<ZdElem>,
    terms: Vec<Harmonic>,
}

impl CylinderFunction {
    pub fn new(window: Vec<ZdElem>, terms: Vec<Harmonic>) -> Result<Self> {
        let mut sorted = window.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != window.len() {
            return Err(invalid("cylinder function window has repeated sites"));
        }
        if let Some(first) = window.first() {
            if window.iter().any(|s| s.dim() != first.dim()) {
                return Err(invalid("cylinder function window mixes dimensions"));
            }
        }
        for t in &terms {
            if t.freqs.len() != window.len() {
                return Err(invalid(format!(
                    "term has {} frequencies for a window of {} sites",
                    t.freqs.len(),
                    window.len()
                )));
            }
            if !(t.a.is_finite() && t.b.is_finite()) {
                return Err(invalid("cylinder function coefficients must be finite"));
            }
        }
        Ok(CylinderFunction { window, terms })
    }

    pub fn constant(c: f64) -> Self {
        CylinderFunction {
            window: Vec::new(),
            terms: vec![Harmonic {
                freqs: Vec::new(),
                a: c,
                b: 0.0,
            }],
        }
    }

    /// `cos(2π Σ m_s x_s)`.
    pub fn cos(freqs: &[(ZdElem, i64)]) -> Result<Self> {
        Self::single(freqs, 1.0, 0.0)
    }

    /// `sin(2π Σ m_s x_s)`.
    pub fn sin(freqs: &[(ZdElem, i64)]) -> Result<Self> {
        Self::single(freqs, 0.0, 1.0)
    }

    fn single(freqs: &[(ZdElem, i64)], a: f64, b: f64) -> Result<Self> {
        Self::new(
            freqs.iter().map(|(s, _)| *s).collect(),
            vec![Harmonic {
                freqs: freqs.iter().map(|(_, m)| *m).collect(),
                a,
                b,
            }],
        )
    }

    pub fn window(&self) -> &[ZdElem] {
        &self.window
    }

    pub fn terms(&self) -> &[Harmonic] {
        &self.terms
    }

    /// `D_ξ = Σ_j (|a_j| + |b_j|)`.
    pub fn sup_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.a.abs() + t.b.abs()).sum()
    }

    /// `L` with `|ξ(x) - ξ(y)| ≤ L · max_s d_T(x_s, y_s)`.
    pub fn coord_lipschitz(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| 2.0 * PI * (t.a.abs() + t.b.abs()) * t.freqs.iter().map(|m| m.unsigned_abs() as f64).sum::<f64>())
            .sum()
    }

    /// `L_ρ` with `|ξ(x) - ξ(y)| ≤ L_ρ · ρ(x, y)`, from
    /// `d_T(x_s, y_s) ≤ 2^{k_s} ρ(x, y)` for the enumeration index `k_s`.
    pub fn metric_lipschitz(&self, group: &Zd) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let weighted: f64 = t
                    .freqs
                    .iter()
                    .zip(&self.window)
                    .map(|(m, s)| m.unsigned_abs() as f64 * libm::exp2(group.enumeration_index(*s) as f64))
                    .sum();
                2.0 * PI * (t.a.abs() + t.b.abs()) * weighted
            })
            .sum()
    }

    /// `ξ` from coordinate values listed in window order.
    pub fn value_from(&self, coords: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let phase: f64 = t.freqs.iter().zip(coords).map(|(m, x)| *m as f64 * x).sum();
                let angle = 2.0 * PI * phase;
                t.a * libm::cos(angle) + t.b * libm::sin(angle)
            })
            .sum()
    }

    /// `ξ(gx)` to within `tol`; `(gx)_s = x_{s-g}`.
    pub fn value_at(&self, action: &AlgebraicAction, x: &Point, g: ZdElem, tol: f64) -> Result<f64> {
        let lip = self.coord_lipschitz();
        let per = if lip > 0.0 { tol / lip } else { 1.0 };
        let mut coords = [0.0f64; 16];
        let mut heap = Vec::new();
        let slots: &mut [f64] = if self.window.len() <= coords.len() {
            &mut coords[..self.window.len()]
        } else {
            heap.resize(self.window.len(), 0.0);
            &mut heap
        };
        for (slot, s) in slots.iter_mut().zip(&self.window) {
            *slot = action.eval_coord(x, *s - g, per)?;
        }
        Ok(self.value_from(slots))
    }

    /// `ξ(x)` to within `tol`.
    pub fn value(&self, action: &AlgebraicAction, x: &Point, tol: f64) -> Result<f64> {
        self.value_at(action, x, ZdElem::zero(action.dim()), tol)
    }
}

/// One weighted atom of a [`SampledMeasure`].
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub point: Point,
    pub weight: f64,
    /// Box scale at which the atom's Birkhoff data was produced, if any.
    pub scale: Option<u64>,
}

/// A probability measure given by finitely many atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledMeasure {
    atoms: Vec<Atom>,
    window: FiniteSubset<ZdElem>,
}

impl SampledMeasure {
    /// Builds a measure, merging atoms that agree on `window` (periodic
    /// atoms with a common modulus are compared on the whole quotient).
    pub fn new(action: &AlgebraicAction, atoms: Vec<Atom>, window: FiniteSubset<ZdElem>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("a measure needs at least one atom"));
        }
        if atoms.iter().any(|a| !(a.weight > 0.0 && a.weight.is_finite())) {
            return Err(invalid("atom weights must be positive"));
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("atom weights sum to {total}, not 1")));
        }
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            let mut found = None;
            for (k, m) in merged.iter().enumerate() {
                if same_point(action, &m.point, &atom.point, &window)? {
                    found = Some(k);
                    break;
                }
            }
            match found {
                Some(k) => merged[k].weight += atom.weight,
                None => merged.push(atom),
            }
        }
        Ok(SampledMeasure { atoms: merged, window })
    }

    pub fn point_mass(point: Point) -> Self {
        SampledMeasure {
            atoms: vec![Atom {
                point,
                weight: 1.0,
                scale: None,
            }],
            window: FiniteSubset::empty(),
        }
    }

    /// `Σ_k w_k μ_k`, deduplicated over the union of the windows.
    pub fn mixture(action: &AlgebraicAction, parts: &[(f64, &SampledMeasure)]) -> Result<Self> {
        let mut window = FiniteSubset::empty();
        let mut atoms = Vec::new();
        for (w, mu) in parts {
            window = window.union(&mu.window);
            atoms.extend(mu.atoms.iter().map(|a| Atom {
                weight: a.weight * w,
                ..a.clone()
            }));
        }
        Self::new(action, atoms, window)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn window(&self) -> &FiniteSubset<ZdElem> {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

fn same_point(action: &AlgebraicAction, a: &Point, b: &Point, window: &FiniteSubset<ZdElem>) -> Result<bool> {
    if let (Point::Periodic(p), Point::Periodic(q)) = (a, b) {
        // Both are periodic under the lcm of the moduli; compare a full period.
        let n = num_integer::lcm(p.modulus(), q.modulus());
        let size = (n as u128).checked_pow(p.dim() as u32);
        if p.dim() == q.dim() && size.is_some_and(|s| s <= 1 << 22) {
            let tol = ATOM_TOLERANCE + p.coordinate_error() + q.coordinate_error();
            let zd = action.group();
            return Ok(zd.cube(n).iter().all(|&t| torus_dist(p.coord(t), q.coord(t)) <= tol));
        }
    }
    let default;
    let window = if window.is_empty() {
        default = action.group().enumeration_prefix(DEFAULT_WINDOW).into_iter().collect();
        &default
    } else {
        window
    };
    let tol = ATOM_TOLERANCE / 4.0;
    for &s in window.iter() {
        let u = action.eval_coord(a, s, tol)?;
        let v = action.eval_coord(b, s, tol)?;
        if torus_dist(u, v) > ATOM_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For every `q ∈ Q` (row-major), the first element of its coset of the
/// stabilizer of `p`.
fn orbit_classes(p: &PeriodicPoint) -> Vec<usize> {
    let coords = p.coords_on_domain();
    let n = p.modulus() as usize;
    let d = p.dim();
    let size = coords.len();
    let tol = ATOM_TOLERANCE + 2.0 * p.coordinate_error();
    let shift_index = |i: usize, h: usize| -> usize {
        // Row-major addition of two elements of (Z/n)^d.
        let mut out = 0;
        let mut stride = 1;
        let (mut a, mut b) = (i, h);
        for _ in 0..d {
            out += ((a % n + b % n) % n) * stride;
            a /= n;
            b /= n;
            stride *= n;
        }
        out
    };
    let fixes = |h: usize| (0..size).all(|t| torus_dist(coords[shift_index(t, h)], coords[t]) <= tol);
    let stab: Vec<usize> = if d == 1 {
        // The stabilizer of a point of Z/n is generated by its least period.
        let period = (1..=n).find(|p| n % p == 0 && (*p == n || fixes(*p))).unwrap_or(n);
        (0..n).step_by(period).collect()
    } else {
        (0..size).filter(|&h| h == 0 || fixes(h)).collect()
    };
    let mut class = vec![usize::MAX; size];
    for q in 0..size {
        if class[q] == usize::MAX {
            for &h in &stab {
                class[shift_index(q, h)] = q;
            }
        }
    }
    class
}

fn quotient_elem(index: usize, n: u64, d: usize) -> ZdElem {
    let mut c = [0i64; crate::groups::MAX_DIM];
    let mut i = index;
    for k in (0..d).rev() {
        c[k] = (i % n as usize) as i64;
        i /= n as usize;
    }
    ZdElem::new(&c[..d])
}

fn quotient_index(g: ZdElem, n: u64) -> usize {
    g.coords()
        .iter()
        .fold(0usize, |acc, &c| acc * n as usize + c.rem_euclid(n as i64) as usize)
}

/// Uniform measure on the orbit `{q·y : q ∈ Q}` of a periodic point.
pub fn periodic_measure(y: &Point) -> Result<SampledMeasure> {
    let Some(p) = y.as_periodic() else {
        if let Point::Homoclinic(v) = y {
            if v.is_zero() {
                return Ok(SampledMeasure::point_mass(y.clone()));
            }
        }
        return Err(invalid("periodic_measure needs a periodic point"));
    };
    let class = orbit_classes(p);
    let reps: Vec<usize> = (0..class.len()).filter(|&q| class[q] == q).collect();
    let w = 1.0 / reps.len() as f64;
    let atoms = reps
        .iter()
        .map(|&q| Atom {
            point: y.translate(quotient_elem(q, p.modulus(), p.dim())),
            weight: w,
            scale: None,
        })
        .collect();
    Ok(SampledMeasure {
        atoms,
        window: FiniteSubset::empty(),
    })
}

/// Uniform weights on `{gx : g ∈ F}`, merging equal translates.
pub fn empirical_measure(action: &AlgebraicAction, x: &Point, f: &FiniteSubset<ZdElem>) -> Result<SampledMeasure> {
    if f.is_empty() {
        return Err(invalid("empirical measure over an empty set"));
    }
    let w = 1.0 / f.len() as f64;
    if let Point::Periodic(p) = x {
        let class = orbit_classes(p);
        let mut weights: BTreeMap<usize, f64> = BTreeMap::new();
        for &g in f.iter() {
            *weights.entry(class[quotient_index(g, p.modulus())]).or_insert(0.0) += w;
        }
        let atoms = weights
            .into_iter()
            .map(|(q, weight)| Atom {
                point: x.translate(quotient_elem(q, p.modulus(), p.dim())),
                weight,
                scale: None,
            })
            .collect();
        return Ok(SampledMeasure {
            atoms,
            window: FiniteSubset::empty(),
        });
    }
    let window: FiniteSubset<ZdElem> = match x {
        Point::Window(values) => {
            // Sites every translate still covers.
            let keys: FiniteSubset<ZdElem> = values.keys().copied().collect();
            keys.iter()
                .copied()
                .filter(|s| f.iter().all(|g| keys.contains(&(*s - *g))))
                .collect()
        }
        _ => action.group().enumeration_prefix(DEFAULT_WINDOW).into_iter().collect(),
    };
    let atoms = f
        .iter()
        .map(|&g| Atom {
            point: x.translate(g),
            weight: w,
            scale: None,
        })
        .collect();
    let mut mu = SampledMeasure::new(action, atoms, window)?;
    let total = mu.total_weight();
    for a in &mut mu.atoms {
        a.weight /= total;
    }
    Ok(mu)
}

/// `(1/|F|) Σ_{g∈F} ξ(gx)`, each term to within `tol`.
pub fn birkhoff_average(
    action: &AlgebraicAction,
    xi: &CylinderFunction,
    x: &Point,
    f: &FiniteSubset<ZdElem>,
    tol: f64,
) -> Result<f64> {
    if f.is_empty() {
        return Err(invalid("Birkhoff average over an empty set"));
    }
    let mut acc = 0.0;
    for &g in f.iter() {
        acc += xi.value_at(action, x, g, tol)?;
    }
    Ok(acc / f.len() as f64)
}

/// `∫ ξ dμ` to within `tol`.
pub fn integrate(action: &AlgebraicAction, mu: &SampledMeasure, xi: &CylinderFunction, tol: f64) -> Result<f64> {
    let mut acc = 0.0;
    for a in &mu.atoms {
        acc += a.weight * xi.value(action, &a.point, tol)?;
    }
    Ok(acc)
}

/// `max_{ξ ∈ W} |∫ξ dμ - ∫ξ dν|`, to within `tol`.
pub fn weakstar_gap(
    action: &AlgebraicAction,
    mu: &SampledMeasure,
    nu: &SampledMeasure,
    w: &[CylinderFunction],
    tol: f64,
) -> Result<f64> {
    let mut gap = 0.0f64;
    for xi in w {
        let a = integrate(action, mu, xi, tol / 2.0)?;
        let b = integrate(action, nu, xi, tol / 2.0)?;
        gap = gap.max((a - b).abs());
    }
    Ok(gap)
}

/// Birkhoff data of one atom of `ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomEstimate {
    /// Averages over `[0, N₁)^d`, one per test function.
    pub coarse: Vec<f64>,
    /// Averages over `[0, N₂)^d`, taken as `ξ*`.
    pub fine: Vec<f64>,
    pub convergent: bool,
    /// Index into [`PartitionSketch::cells`] after merging.
    pub cell: usize,
}

/// One cell of the join partition.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    /// Bin index per test function, `1..=bin_count`.
    pub bins: Vec<u64>,
    pub weight: f64,
    pub atoms: Vec<usize>,
    /// The convergent atom of largest weight.
    pub representative: usize,
}

/// A cell absorbed into a neighbour.
#[derive(Clone, Debug, PartialEq)]
pub struct Merge {
    pub from: Vec<u64>,
    pub into: Vec<u64>,
    pub weight: f64,
    pub reason: String,
}

/// Two-scale Birkhoff data of `ν` and the induced partition.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSketch {
    pub eps: f64,
    /// `D = max_ξ D_ξ`.
    pub sup_bound: f64,
    pub bin_width: f64,
    pub bin_count: u64,
    pub scales: (u64, u64),
    pub estimates: Vec<AtomEstimate>,
    pub cells: Vec<Cell>,
    pub merges: Vec<Merge>,
    pub notes: Vec<String>,
}

impl PartitionSketch {
    /// Bin of a value: `j` with `-D + (j-1)ε/8 ≤ v < -D + jε/8`, clamped.
    pub fn bin(&self, v: f64) -> u64 {
        bin_of(v, self.sup_bound, self.bin_width, self.bin_count)
    }

    /// `ξ*` of the representative of `cell`, per test function.
    pub fn cell_limits(&self, cell: usize) -> &[f64] {
        &self.estimates[self.cells[cell].representative].fine
    }
}

fn bin_of(v: f64, d: f64, width: f64, count: u64) -> u64 {
    let j = libm::floor((v + d) / width) + 1.0;
    if j < 1.0 {
        1
    } else if j > count as f64 {
        count
    } else {
        j as u64
    }
}

/// Estimates `ξ*` on the atoms of `ν` and groups them into cells.
///
/// An atom is convergent when its averages at the two scales differ by
/// less than `ε/8` for every `ξ`. Cells lighter than `floor`, or without a
/// convergent atom, are merged into the nearest remaining cell by bin
/// distance.
pub fn partition_sketch(
    action: &AlgebraicAction,
    nu: &SampledMeasure,
    w: &[CylinderFunction],
    eps: f64,
    scales: (u64, u64),
    floor: f64,
) -> Result<PartitionSketch> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let (n1, n2) = scales;
    if !(0 < n1 && n1 < n2) {
        return Err(invalid("scales must satisfy 0 < N1 < N2"));
    }
    if w.is_empty() {
        return Err(invalid("at least one test function is required"));
    }
    let zd = action.group();
    let d = w.iter().map(CylinderFunction::sup_bound).fold(0.0, f64::max);
    let width = eps / 8.0;
    let bin_count = libm::floor(16.0 * d / eps) as u64 + 1;
    let f1 = zd.cube(n1);
    let f2 = zd.cube(n2);
    let tol = 1e-10;
    let mut estimates = Vec::with_capacity(nu.len());
    for atom in nu.atoms() {
        let mut coarse = Vec::with_capacity(w.len());
        let mut fine = Vec::with_capacity(w.len());
        for xi in w {
            coarse.push(birkhoff_average(action, xi, &atom.point, &f1, tol)?);
            fine.push(birkhoff_average(action, xi, &atom.point, &f2, tol)?);
        }
        let convergent = coarse.iter().zip(&fine).all(|(a, b)| (a - b).abs() < width);
        estimates.push(AtomEstimate {
            coarse,
            fine,
            convergent,
            cell: usize::MAX,
        });
    }
    if !estimates.iter().any(|e| e.convergent) {
        return Err(Error::PipelineInfeasible(
            "no atom has agreeing Birkhoff averages at both scales".into(),
        ));
    }

    let mut raw: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (k, e) in estimates.iter().enumerate() {
        let key = e.fine.iter().map(|v| bin_of(*v, d, width, bin_count)).collect();
        raw.entry(key).or_default().push(k);
    }
    let weight_of = |atoms: &[usize]| atoms.iter().map(|&k| nu.atoms()[k].weight).sum::<f64>();
    let has_rep = |atoms: &[usize]| atoms.iter().any(|&k| estimates[k].convergent);
    let mut keep: Vec<Vec<u64>> = raw
        .iter()
        .filter(|(_, atoms)| has_rep(atoms) && weight_of(atoms) >= floor)
        .map(|(k, _)| k.clone())
        .collect();
    if keep.is_empty() {
        let heaviest = raw
            .iter()
            .filter(|(_, atoms)| has_rep(atoms))
            .max_by(|a, b| weight_of(a.1).total_cmp(&weight_of(b.1)))
            .map(|(k, _)| k.clone())
            .expect("some cell has a convergent atom");
        keep.push(heaviest);
    }
    let mut merges = Vec::new();
    let mut cells: BTreeMap<Vec<u64>, Vec<usize>> = keep.iter().map(|k| (k.clone(), raw[k].clone())).collect();
    for (key, atoms) in &raw {
        if cells.contains_key(key) {
            continue;
        }
        let into = keep
            .iter()
            .min_by_key(|k| k.iter().zip(key).map(|(a, b)| a.abs_diff(*b)).sum::<u64>())
            .expect("nonempty")
            .clone();
        let reason = if has_rep(atoms) { "below weight floor" } else { "no convergent atom" };
        merges.push(Merge {
            from: key.clone(),
            into: into.clone(),
            weight: weight_of(atoms),
            reason: reason.into(),
        });
        cells.get_mut(&into).expect("kept").extend(atoms.iter().copied());
    }
    let cells: Vec<Cell> = cells
        .into_iter()
        .map(|(bins, mut atoms)| {
            atoms.sort_unstable();
            let representative = atoms
                .iter()
                .copied()
                .filter(|&k| estimates[k].convergent)
                .fold(None, |best: Option<usize>, k| match best {
                    Some(b) if nu.atoms()[b].weight >= nu.atoms()[k].weight => Some(b),
                    _ => Some(k),
                })
                .expect("kept cells hold a convergent atom");
            Cell {
                bins,
                weight: weight_of(&atoms),
                atoms,
                representative,
            }
        })
        .collect();
    for (c, cell) in cells.iter().enumerate() {
        for &k in &cell.atoms {
            estimates[k].cell = c;
        }
    }
    let notes = vec![format!(
        "bin count [16D/eps]+1 = {bin_count} of width eps/8 covering [-D, D]"
    )];
    Ok(PartitionSketch {
        eps,
        sup_bound: d,
        bin_width: width,
        bin_count,
        scales,
        estimates,
        cells,
        merges,
        notes,
    })
}

/// Modulus search policy for [`approximate_by_periodic`].
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    /// First modulus tried; later ones double it.
    pub base: u64,
    /// Largest modulus tried.
    pub cap: u64,
    /// Box sides `N₁ < N₂` for the Birkhoff estimates.
    pub scales: (u64, u64),
    /// Cells lighter than this are merged.
    pub cell_floor: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            base: 1 << 10,
            cap: 1 << 18,
            scales: (1 << 10, 1 << 12),
            cell_floor: 1e-3,
        }
    }
}

impl Schedule {
    pub fn moduli(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut m = self.base.max(1);
        while m <= self.cap {
            out.push(m);
            m = match m.checked_mul(2) {
                Some(v) => v,
                None => break,
            };
        }
        out
    }
}

/// One link of the averaging chain.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetTerm {
    pub name: String,
    pub allowance: f64,
    /// Largest value over the test functions.
    pub consumed: f64,
    pub per_function: Vec<f64>,
}

/// What happened at one modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct Attempt {
    pub modulus: u64,
    pub outcome: String,
    pub ledger_total: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxReport {
    pub eps: f64,
    /// Largest `L_ρ` over the test functions.
    pub metric_lipschitz: f64,
    /// Shadowing tolerance `(ε/8)/L_ρ`.
    pub shadow_eps: f64,
    /// The smallness parameter `γ` for the cell shares.
    pub gamma: f64,
    pub window_size: usize,
    pub modulus: u64,
    pub tiles_per_axis: u64,
    pub windows: usize,
    pub cells: usize,
    pub attempts: Vec<Attempt>,
    pub ledger: Vec<BudgetTerm>,
    pub ledger_total: f64,
    /// `|∫ξ dν - ∫ξ dμ_y|` per test function.
    pub gaps: Vec<f64>,
    /// Largest verified `ρ(sxⁱ, sy)` bound.
    pub worst_rho: f64,
    pub log: Vec<LogEntry>,
    pub notes: Vec<String>,
    pub sketch: PartitionSketch,
}

/// A periodic point whose orbit measure approximates `ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    pub y: Point,
    pub measure: SampledMeasure,
    pub report: ApproxReport,
}

const EVAL_TOL: f64 = 1e-10;

/// Ledger allowances, in units of `ε`.
const ALLOWANCES: [(&str, f64); 6] = [
    ("invariance", 0.125),
    ("cell_binning", 0.125),
    ("subfamily_shares", 0.125),
    ("core_averages", 0.25),
    ("shadowing", 0.125),
    ("periodic_vs_cores", 0.25),
];

/// Tile counts per cell by largest remainder.
fn apportion(weights: &[f64], tiles: u64) -> Vec<u64> {
    let exact: Vec<f64> = weights.iter().map(|w| w * tiles as f64).collect();
    let mut counts: Vec<u64> = exact.iter().map(|e| libm::floor(*e) as u64).collect();
    let mut left = tiles - counts.iter().sum::<u64>().min(tiles);
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - libm::floor(exact[a]);
        let rb = exact[b] - libm::floor(exact[b]);
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &c in order.iter().cycle().take(weights.len() * 2) {
        if left == 0 {
            break;
        }
        counts[c] += 1;
        left -= 1;
    }
    counts
}

/// Smallest power-of-two tile count per axis whose share rounding costs
/// at most `ε/16`.
fn tiles_per_axis(weights: &[f64], d: usize, sup: f64, eps: f64) -> u64 {
    let mut t = 1u64;
    loop {
        let total = t.pow(d as u32);
        let counts = apportion(weights, total);
        let err: f64 = counts
            .iter()
            .zip(weights)
            .map(|(n, a)| (*n as f64 / total as f64 - a).abs())
            .sum::<f64>()
            * sup;
        if err <= eps / 16.0 || t >= 64 {
            return t;
        }
        t *= 2;
    }
}

struct Candidate {
    y: Point,
    ledger: Vec<BudgetTerm>,
    total: f64,
    windows: usize,
    worst_rho: f64,
    log: Vec<LogEntry>,
}

/// Finds a periodic point `y` with `|∫ξ dν - ∫ξ dμ_y| < ε` for `ξ ∈ W`.
///
/// Moduli from the schedule are tried in turn; tiling, core and separation
/// failures and an over-budget ledger advance to the next one. At the cap
/// the last ledger is reported through [`Error::BudgetExhausted`].
pub fn approximate_by_periodic(
    action: &AlgebraicAction,
    nu: &SampledMeasure,
    w: &[CylinderFunction],
    eps: f64,
    schedule: &Schedule,
) -> Result<Approximation> {
    let zd = action.group();
    let sketch = partition_sketch(action, nu, w, eps, schedule.scales, schedule.cell_floor)?;
    let l_rho = w.iter().map(|xi| xi.metric_lipschitz(zd)).fold(0.0, f64::max);
    let shadow_eps = if l_rho > 0.0 { (eps / 8.0 / l_rho).min(1.0) } else { 1.0 };
    let bundle = derive_windows(action, shadow_eps)?;
    let l = sketch.cells.len() as f64;
    let dsup = sketch.sup_bound.max(f64::MIN_POSITIVE);
    let fsize = bundle.window.len() as f64;
    let gamma = 0.5
        * [
            shadow_eps / (16.0 * l),
            shadow_eps / (8.0 * dsup * fsize),
            0.5,
            shadow_eps / (16.0 * dsup * l),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = sketch.cells.iter().map(|c| c.weight).collect();
    let t = tiles_per_axis(&weights, action.dim(), sketch.sup_bound, eps);
    let mut notes = sketch.notes.clone();
    for m in &sketch.merges {
        notes.push(format!(
            "cell {:?} (weight {}) merged into {:?}: {}",
            m.from, m.weight, m.into, m.reason
        ));
    }

    let mut attempts = Vec::new();
    let mut last: Option<Candidate> = None;
    let mut last_err: Option<Error> = None;
    for m in schedule.moduli() {
        if m % t != 0 {
            attempts.push(Attempt {
                modulus: m,
                outcome: format!("skipped: not a multiple of {t} tiles"),
                ledger_total: None,
            });
            continue;
        }
        match attempt(action, nu, w, eps, &sketch, &bundle, m, t, gamma) {
            Ok(c) => {
                let ok = c.total < eps;
                attempts.push(Attempt {
                    modulus: m,
                    outcome: if ok { "accepted".into() } else { "ledger over budget".into() },
                    ledger_total: Some(c.total),
                });
                if ok {
                    let measure = periodic_measure(&c.y)?;
                    let mut gaps = Vec::with_capacity(w.len());
                    for xi in w {
                        let a = integrate(action, nu, xi, EVAL_TOL)?;
                        let b = integrate(action, &measure, xi, EVAL_TOL)?;
                        gaps.push((a - b).abs());
                    }
                    if let Some(g) = gaps.iter().copied().find(|g| !(*g < eps)) {
                        return Err(Error::Internal(format!(
                            "ledger total {} below eps but gap {g} is not",
                            c.total
                        )));
                    }
                    let mut log = bundle.log.clone();
                    log.extend(c.log);
                    log.push(LogEntry::new("ledger total", c.total, eps, true));
                    return Ok(Approximation {
                        y: c.y,
                        measure,
                        report: ApproxReport {
                            eps,
                            metric_lipschitz: l_rho,
                            shadow_eps,
                            gamma,
                            window_size: bundle.window.len(),
                            modulus: m,
                            tiles_per_axis: t,
                            windows: c.windows,
                            cells: sketch.cells.len(),
                            attempts,
                            ledger: c.ledger,
                            ledger_total: c.total,
                            gaps,
                            worst_rho: c.worst_rho,
                            log,
                            notes,
                            sketch,
                        },
                    });
                }
                last = Some(c);
            }
            Err(e @ (Error::TilingFailed { .. } | Error::CoreTooSmall { .. } | Error::Separation { .. })) => {
                attempts.push(Attempt {
                    modulus: m,
                    outcome: e.to_string(),
                    ledger_total: None,
                });
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    match last {
        Some(c) => {
            let worst = c
                .ledger
                .iter()
                .max_by(|a, b| (a.consumed / a.allowance).total_cmp(&(b.consumed / b.allowance)))
                .expect("ledger is nonempty");
            Err(Error::BudgetExhausted {
                inequality: worst.name.clone(),
                consumed: worst.consumed,
                allowance: worst.allowance,
                total: c.total,
                eps,
            })
        }
        None => Err(last_err.unwrap_or_else(|| {
            Error::PipelineInfeasible(format!(
                "no modulus in the schedule is a multiple of {t}"
            ))
        })),
    }
}

#[allow(clippy::too_many_arguments)]
fn attempt(
    action: &AlgebraicAction,
    nu: &SampledMeasure,
    w: &[CylinderFunction],
    eps: f64,
    sketch: &PartitionSketch,
    bundle: &WindowBundle,
    m: u64,
    t: u64,
    gamma: f64,
) -> Result<Candidate> {
    let zd = action.group();
    let side = m / t;
    let half = (side / 2).max(1);
    let target = zd.cube(m);
    let shapes = vec![zd.cube(half), zd.cube(side)];
    let tiling = quasi_tile(zd, &target, &shapes, (eps / 64.0).min(0.125))?;
    let cores = tile_cores(zd, &tiling, &bundle.window, 1.0)?;

    let weights: Vec<f64> = sketch.cells.iter().map(|c| c.weight).collect();
    let counts = apportion(&weights, cores.len() as u64);
    let mut owner = Vec::with_capacity(cores.len());
    for (c, n) in counts.iter().enumerate() {
        owner.extend(core::iter::repeat_n(c, *n as usize));
    }
    let reps: Vec<&Point> = sketch
        .cells
        .iter()
        .map(|c| &nu.atoms()[c.representative].point)
        .collect();
    let windows: Vec<FiniteSubset<ZdElem>> = cores.iter().map(|c| c.placed_shadow(zd)).collect();
    let points: Vec<Point> = cores
        .iter()
        .zip(&owner)
        .map(|(c, &cell)| reps[cell].translate(zd.inv(c.center)))
        .collect();
    let shadow = shadow_periodic(action, bundle, &windows, &points, m)?;
    let y = shadow.y;
    let worst_rho = shadow.rows.iter().map(|r| r.rho).fold(0.0, f64::max);

    let core_total: usize = cores.iter().map(|c| c.shadow.len()).sum();
    let mut shares = vec![0.0f64; sketch.cells.len()];
    for (c, &cell) in cores.iter().zip(&owner) {
        shares[cell] += c.shadow.len() as f64 / core_total as f64;
    }
    let quotient = zd.cube(m);
    let mut per: Vec<Vec<f64>> = vec![Vec::with_capacity(w.len()); ALLOWANCES.len()];
    let mut log = Vec::new();
    for (k, xi) in w.iter().enumerate() {
        let nu_int = integrate(action, nu, xi, EVAL_TOL)?;
        let atom_star: f64 = nu
            .atoms()
            .iter()
            .zip(&sketch.estimates)
            .map(|(a, e)| a.weight * e.fine[k])
            .sum();
        let cell_sum: f64 = sketch
            .cells
            .iter()
            .enumerate()
            .map(|(c, cell)| cell.weight * sketch.cell_limits(c)[k])
            .sum();
        let share_sum: f64 = shares
            .iter()
            .enumerate()
            .map(|(c, s)| s * sketch.cell_limits(c)[k])
            .sum();
        // Identical cores carrying the same representative share one sum.
        let mut memo: Vec<(usize, &FiniteSubset<ZdElem>, f64)> = Vec::new();
        let mut core_x = 0.0;
        let mut core_y = 0.0;
        for (c, &cell) in cores.iter().zip(&owner) {
            let cached = memo.iter().find(|(k, set, _)| *k == cell && **set == c.shadow).map(|e| e.2);
            let sum = match cached {
                Some(s) => s,
                None => {
                    let mut s = 0.0;
                    for &u in c.shadow.iter() {
                        s += xi.value_at(action, reps[cell], u, EVAL_TOL)?;
                    }
                    memo.push((cell, &c.shadow, s));
                    s
                }
            };
            core_x += sum;
            for &u in c.shadow.iter() {
                core_y += xi.value_at(action, &y, u + c.center, EVAL_TOL)?;
            }
        }
        core_x /= core_total as f64;
        core_y /= core_total as f64;
        let mut mu_y = 0.0;
        for &q in quotient.iter() {
            mu_y += xi.value_at(action, &y, q, EVAL_TOL)?;
        }
        mu_y /= quotient.len() as f64;
        let slack = 2.0 * EVAL_TOL;
        per[0].push((nu_int - atom_star).abs() + slack);
        per[1].push((atom_star - cell_sum).abs());
        per[2].push((cell_sum - share_sum).abs());
        per[3].push((share_sum - core_x).abs() + slack);
        per[4].push((core_x - core_y).abs() + slack);
        per[5].push((core_y - mu_y).abs() + slack);
    }
    let l = sketch.cells.len() as f64;
    log.push(LogEntry::new(
        "max |share - a_i| against gamma/l",
        shares.iter().zip(&weights).map(|(s, a)| (s - a).abs()).fold(0.0, f64::max),
        gamma / l,
        true,
    ));
    let ledger: Vec<BudgetTerm> = ALLOWANCES
        .iter()
        .zip(per)
        .map(|((name, frac), values)| BudgetTerm {
            name: (*name).to_string(),
            allowance: frac * eps,
            consumed: values.iter().copied().fold(0.0, f64::max),
            per_function: values,
        })
        .collect();
    let total = ledger.iter().map(|b| b.consumed).sum();
    Ok(Candidate {
        y,
        ledger,
        total,
        windows: windows.len(),
        worst_rho,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::GroupRingElement;

    fn z(v: i64) -> ZdElem {
        ZdElem::new(&[v])
    }

    fn harmonic() -> AlgebraicAction {
        let f = GroupRingElement::from_terms([(z(0), 3), (z(1), -1), (z(-1), -1)]);
        AlgebraicAction::new(Zd::new(1).unwrap(), f, 1e-12).unwrap()
    }

    fn cos0() -> CylinderFunction {
        CylinderFunction::cos(&[(z(0), 1)]).unwrap()
    }

    fn interval(lo: i64, hi: i64) -> FiniteSubset<ZdElem> {
        (lo..hi).map(z).collect()
    }

    /// Coordinates of the `nZ`-periodic point with generator `vbar`, by a
    /// dense solve of `M x = vbar` with `M_{t,t+s} += f_s`.
    fn dense_periodic(vbar: &[i64]) -> Vec<f64> {
        let n = vbar.len();
        let mut m = vec![vec![0.0f64; n]; n];
        for t in 0..n {
            m[t][t] += 3.0;
            m[t][(t + 1) % n] -= 1.0;
            m[t][(t + n - 1) % n] -= 1.0;
        }
        let mut b: Vec<f64> = vbar.iter().map(|&v| v as f64).collect();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
            m.swap(c, p);
            b.swap(c, p);
            for r in 0..n {
                if r != c {
                    let k = m[r][c] / m[c][c];
                    for cc in 0..n {
                        m[r][cc] -= k * m[c][cc];
                    }
                    b[r] -= k * b[c];
                }
            }
        }
        (0..n).map(|i| b[i] / m[i][i]).map(|v| v - libm::floor(v)).collect()
    }

    #[test]
    fn cylinder_bounds() {
        let xi = CylinderFunction::new(
            vec![z(0), z(1)],
            vec![
                Harmonic { freqs: vec![1, -1], a: 1.0, b: 0.5 },
                Harmonic { freqs: vec![2, 0], a: -0.25, b: 0.0 },
            ],
        )
        .unwrap();
        assert_eq!(xi.sup_bound(), 1.75);
        assert!((xi.coord_lipschitz() - 2.0 * PI * (1.5 * 2.0 + 0.25 * 2.0)).abs() < 1e-12);
        // Enumeration 0, -1, 1: x₁ carries weight 2^2.
        let zd = Zd::new(1).unwrap();
        assert!((xi.metric_lipschitz(&zd) - 2.0 * PI * (1.5 * 5.0 + 0.25 * 2.0)).abs() < 1e-12);
        assert!(CylinderFunction::new(vec![z(0), z(0)], vec![]).is_err());
        assert!(CylinderFunction::new(vec![z(0)], vec![Harmonic { freqs: vec![], a: 1.0, b: 0.0 }]).is_err());
    }

    #[test]
    fn birkhoff_trivial_cases() {
        let a = harmonic();
        let x = a.xi(GroupRingElement::from_terms([(z(2), 1)]));
        let c = CylinderFunction::constant(0.7);
        assert!((birkhoff_average(&a, &c, &x, &interval(0, 20), 1e-9).unwrap() - 0.7).abs() < 1e-12);
        let zero = Point::zero();
        assert!((birkhoff_average(&a, &cos0(), &zero, &interval(-5, 5), 1e-9).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn birkhoff_over_periods_is_orbit_average() {
        let a = harmonic();
        let vbar = [1i64, 0, -1, 0, 2];
        let y = a.xi_periodic(5, vbar.to_vec()).unwrap();
        let coords = dense_periodic(&vbar);
        let orbit: f64 = coords.iter().map(|x| libm::cos(2.0 * PI * x)).sum::<f64>() / 5.0;
        for k in [1, 2, 7] {
            let avg = birkhoff_average(&a, &cos0(), &y, &interval(0, 5 * k), 1e-10).unwrap();
            assert!((avg - orbit).abs() < 1e-9, "{avg} vs {orbit}");
        }
    }

    #[test]
    fn empirical_measures() {
        let a = harmonic();
        let x = a.xi(GroupRingElement::from_terms([(z(0), 1)]));
        let mu = empirical_measure(&a, &x, &interval(0, 1)).unwrap();
        assert_eq!(mu.len(), 1);
        assert_eq!(mu.atoms()[0].point, x);

        let y = a.xi_periodic(2, vec![1, 0]).unwrap();
        let mu = empirical_measure(&a, &y, &interval(0, 4)).unwrap();
        assert_eq!(mu.len(), 2);
        assert!(mu.atoms().iter().all(|at| (at.weight - 0.5).abs() < 1e-15));

        let f = interval(-3, 9);
        let xi = CylinderFunction::new(
            vec![z(0), z(1)],
            vec![Harmonic { freqs: vec![1, 2], a: 0.3, b: -0.8 }],
        )
        .unwrap();
        for p in [&x, &y] {
            let mu = empirical_measure(&a, p, &f).unwrap();
            let lhs = integrate(&a, &mu, &xi, 1e-10).unwrap();
            let rhs = birkhoff_average(&a, &xi, p, &f, 1e-10).unwrap();
            assert!((lhs - rhs).abs() < 2e-10);
        }
    }

    #[test]
    fn periodic_measure_orbits() {
        let a = harmonic();
        assert_eq!(periodic_measure(&Point::zero()).unwrap().len(), 1);
        let zero = a.xi_periodic(2, vec![0, 0]).unwrap();
        assert_eq!(periodic_measure(&zero).unwrap().len(), 1);
        // The 2-periodic system has 5 solutions M⁻¹(k, 0); the 4 nonzero ones
        // are not Z-fixed and so have orbits of size 2.
        for k in 1..5 {
            let coords = dense_periodic(&[k, 0]);
            assert!(torus_dist(coords[0], coords[1]) > 1e-3);
            let y = a.xi_periodic(2, vec![k, 0]).unwrap();
            let mu = periodic_measure(&y).unwrap();
            assert_eq!(mu.len(), 2);
            assert!((mu.total_weight() - 1.0).abs() < 1e-15);
        }
        // A 3-periodic point viewed with modulus 6 keeps its orbit of size 3.
        let y = a.xi_periodic(6, vec![1, 0, 0, 1, 0, 0]).unwrap();
        assert_eq!(periodic_measure(&y).unwrap().len(), 3);
        assert!(periodic_measure(&a.xi(GroupRingElement::from_terms([(z(0), 1)]))).is_err());
    }

    #[test]
    fn gaps_and_mixtures() {
        let a = harmonic();
        let mu = periodic_measure(&a.xi_periodic(2, vec![1, 0]).unwrap()).unwrap();
        let nu = periodic_measure(&a.xi_periodic(3, vec![1, 0, 0]).unwrap()).unwrap();
        let w = [cos0(), CylinderFunction::sin(&[(z(0), 1)]).unwrap()];
        assert_eq!(weakstar_gap(&a, &mu, &mu, &w, 1e-10).unwrap(), 0.0);
        assert_eq!(weakstar_gap(&a, &mu, &nu, &[CylinderFunction::constant(2.0)], 1e-10).unwrap(), 0.0);
        let g1 = weakstar_gap(&a, &mu, &nu, &w, 1e-10).unwrap();
        let g2 = weakstar_gap(&a, &nu, &mu, &w, 1e-10).unwrap();
        assert_eq!(g1, g2);
        assert!(g1 > 0.0);
        let mix = SampledMeasure::mixture(&a, &[(0.5, &mu), (0.5, &nu)]).unwrap();
        assert_eq!(mix.len(), 5);
        for xi in &w {
            let lhs = integrate(&a, &mix, xi, 1e-10).unwrap();
            let rhs = 0.5 * integrate(&a, &mu, xi, 1e-10).unwrap() + 0.5 * integrate(&a, &nu, xi, 1e-10).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
        let same = SampledMeasure::mixture(&a, &[(0.25, &mu), (0.75, &mu)]).unwrap();
        assert_eq!(same.len(), 2);
        assert!(SampledMeasure::new(&a, vec![Atom { point: Point::zero(), weight: 0.9, scale: None }], FiniteSubset::empty()).is_err());
    }

    #[test]
    fn sketch_cells() {
        let a = harmonic();
        let w = [cos0()];
        let s = partition_sketch(&a, &SampledMeasure::point_mass(Point::zero()), &w, 0.125, (16, 64), 1e-3).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.cell_limits(0), &[1.0]);
        assert_eq!(s.cells[0].weight, 1.0);
        assert_eq!(s.bin_count, 129);
        assert_eq!(s.bin(1.0), 129);
        assert_eq!(s.bin(-1.0), 1);
        for j in 1..128u64 {
            let edge = -1.0 + j as f64 / 64.0;
            assert_eq!(s.bin(edge), j + 1);
            assert_eq!(s.bin(edge - 1e-12), j);
        }

        let mu = periodic_measure(&a.xi_periodic(2, vec![1, 0]).unwrap()).unwrap();
        let nu = periodic_measure(&a.xi_periodic(3, vec![1, 0, 0]).unwrap()).unwrap();
        let mix = SampledMeasure::mixture(&a, &[(0.5, &mu), (0.5, &nu)]).unwrap();
        let s = partition_sketch(&a, &mix, &w, 0.05, (1 << 10, 1 << 12), 1e-3).unwrap();
        assert_eq!(s.cells.len(), 2);
        for c in &s.cells {
            assert!((c.weight - 0.5).abs() < 1e-12);
        }
        assert!(s.merges.is_empty());
    }

    #[test]
    fn light_cells_are_merged() {
        let a = harmonic();
        let y1 = a.xi_periodic(2, vec![1, 0]).unwrap();
        let y2 = a.xi_periodic(3, vec![1, 0, 0]).unwrap();
        let mix = SampledMeasure::new(
            &a,
            vec![
                Atom { point: y1, weight: 0.9995, scale: None },
                Atom { point: y2, weight: 0.0005, scale: None },
            ],
            FiniteSubset::empty(),
        )
        .unwrap();
        let s = partition_sketch(&a, &mix, &[cos0()], 0.05, (1 << 10, 1 << 12), 1e-3).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.merges.len(), 1);
        assert_eq!(s.cells[0].representative, 0);
        assert!((s.cells[0].weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schedule_moduli() {
        let s = Schedule { base: 3, cap: 30, ..Schedule::default() };
        assert_eq!(s.moduli(), vec![3, 6, 12, 24]);
        assert_eq!(apportion(&[0.5, 0.5], 2), vec![1, 1]);
        assert_eq!(apportion(&[0.7, 0.3], 4), vec![3, 1]);
        assert_eq!(apportion(&[1.0 / 3.0; 3], 4).iter().sum::<u64>(), 4);
        assert_eq!(tiles_per_axis(&[1.0], 1, 1.0, 0.1), 1);
        assert_eq!(tiles_per_axis(&[0.5, 0.5], 1, 1.0, 0.1), 2);
    }

    #[test]
    fn approximation_of_zero_point_mass() {
        let a = harmonic();
        let nu = SampledMeasure::point_mass(Point::zero());
        let w = [cos0()];
        let schedule = Schedule { scales: (16, 64), ..Schedule::default() };
        let out = approximate_by_periodic(&a, &nu, &w, 0.2, &schedule).unwrap();
        assert!(out.report.gaps.iter().all(|g| *g < 1e-9));
        assert!(out.report.ledger_total < 0.2);
        assert_eq!(out.measure.len(), 1);
    }
}
