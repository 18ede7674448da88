//! ε-disjoint families, α-covers and greedy ε-quasi-tilings.
//!
//! [`quasi_tile`] places translates `A_j·c` of the shapes inside a target
//! set, largest shape first, sweeping candidate centres in enumeration
//! order. A translate is accepted when more than `1 - ε` of it is still
//! uncovered; the uncovered part becomes its disjointness witness. The
//! result always carries its witnesses so that [`check_eps_disjoint`] can
//! audit it without searching.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{invalid, Error, Result};
use crate::groups::{folner_defect, FiniteSubset, Grid, Group, Zd, ZdElem, MAX_DIM};

/// One translate `A_j·c` of a shape, with its ε-disjointness witness.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedTile<E> {
    pub shape: usize,
    pub center: E,
    pub witness: Option<FiniteSubset<E>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiTiling<E> {
    pub shapes: Vec<FiniteSubset<E>>,
    pub tiles: Vec<PlacedTile<E>>,
    pub target: FiniteSubset<E>,
    pub eps: f64,
    /// `folner_defect(A, A_k A_k⁻¹)` for the largest shape `A_k`.
    pub invariance_defect: f64,
}

impl<E: Copy + Ord + core::fmt::Debug> QuasiTiling<E> {
    /// The placed set `A_j·c` of tile `i`.
    pub fn tile_set<G: Group<Elem = E>>(&self, group: &G, i: usize) -> FiniteSubset<E> {
        let t = &self.tiles[i];
        self.shapes[t.shape].translate_right(group, t.center)
    }

    /// Tiling centres `C_j` of shape `j`.
    pub fn centers(&self, j: usize) -> FiniteSubset<E> {
        self.tiles
            .iter()
            .filter(|t| t.shape == j)
            .map(|t| t.center)
            .collect()
    }

    pub fn cover_fraction<G: Group<Elem = E>>(&self, group: &G) -> Result<Ratio<u64>> {
        let family: Vec<_> = (0..self.tiles.len()).map(|i| self.tile_set(group, i)).collect();
        alpha_cover_fraction(&family, &self.target)
    }

    /// The sufficient invariance condition `defect < ε / (4k)`.
    pub fn invariance_sufficient(&self) -> bool {
        self.invariance_defect < self.eps / (4.0 * self.shapes.len() as f64)
    }
}

/// `|A ∩ ⋃ family| / |A|`.
pub fn alpha_cover_fraction<E: Copy + Ord>(
    family: &[FiniteSubset<E>],
    a: &FiniteSubset<E>,
) -> Result<Ratio<u64>> {
    if a.is_empty() {
        return Err(invalid("alpha_cover_fraction: A must be nonempty"));
    }
    let covered = a.iter().filter(|e| family.iter().any(|s| s.contains(e))).count();
    Ok(Ratio::new(covered as u64, a.len() as u64))
}

/// Audit outcome of [`check_eps_disjoint`].
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DisjointnessReport {
    pub holds: bool,
    /// Pairs of tiles whose witnesses intersect.
    pub overlapping: Vec<(usize, usize)>,
    /// Tiles whose witness ratio `|B|/|A_j|` is not above `1 - ε`.
    pub thin: Vec<(usize, f64)>,
    /// Tiles not contained in the target.
    pub outside: Vec<usize>,
}

/// Witness-based verification of ε-disjointness.
pub fn check_eps_disjoint<G: Group>(
    group: &G,
    tiling: &QuasiTiling<G::Elem>,
    eps: f64,
) -> Result<DisjointnessReport> {
    let mut report = DisjointnessReport::default();
    let mut owners: Vec<(G::Elem, usize)> = Vec::new();
    for (i, t) in tiling.tiles.iter().enumerate() {
        let w = t
            .witness
            .as_ref()
            .ok_or_else(|| invalid(alloc::format!("tile {i} has no witness")))?;
        let tile = tiling.tile_set(group, i);
        if !w.is_subset(&tile) {
            return Err(invalid(alloc::format!("witness of tile {i} leaves its tile")));
        }
        if !tile.is_subset(&tiling.target) {
            report.outside.push(i);
        }
        let size = tiling.shapes[t.shape].len() as f64;
        let ratio = w.len() as f64 / size;
        if !(w.len() as f64 > (1.0 - eps) * size) {
            report.thin.push((i, ratio));
        }
        owners.extend(w.iter().map(|&e| (e, i)));
    }
    owners.sort_unstable();
    let mut pairs = Vec::new();
    for run in owners.chunk_by(|a, b| a.0 == b.0) {
        for a in 0..run.len() {
            for b in a + 1..run.len() {
                pairs.push((run[a].1.min(run[b].1), run[a].1.max(run[b].1)));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    report.overlapping = pairs;
    report.holds = report.overlapping.is_empty() && report.thin.is_empty() && report.outside.is_empty();
    Ok(report)
}

/// Incremental coverage bookkeeping used by the greedy sweep.
pub trait CoverageIndex<E> {
    /// Centres `c` with `shape·c ⊆ target`, in enumeration order.
    fn fitting_centers(&self, shape: &FiniteSubset<E>) -> Vec<E>;
    fn uncovered_count(&self, shape: &FiniteSubset<E>, c: E) -> usize;
    /// Marks `shape·c` covered and returns the newly covered elements.
    fn cover(&mut self, shape: &FiniteSubset<E>, c: E) -> FiniteSubset<E>;
    fn covered_count(&self) -> usize;
}

/// Groups that can hand out a [`CoverageIndex`] for a target set.
pub trait Tileable: Group + Sized {
    fn coverage_index<'a>(
        &'a self,
        target: &FiniteSubset<Self::Elem>,
    ) -> Box<dyn CoverageIndex<Self::Elem> + 'a> {
        Box::new(SetCoverage {
            group: self,
            target: target.clone(),
            covered: alloc::collections::BTreeSet::new(),
        })
    }
}

struct SetCoverage<'a, G: Group> {
    group: &'a G,
    target: FiniteSubset<G::Elem>,
    covered: alloc::collections::BTreeSet<G::Elem>,
}

impl<G: Group> CoverageIndex<G::Elem> for SetCoverage<'_, G> {
    fn fitting_centers(&self, shape: &FiniteSubset<G::Elem>) -> Vec<G::Elem> {
        let Some(&s0) = shape.iter().next() else {
            return Vec::new();
        };
        let s0inv = self.group.inv(s0);
        let cands: FiniteSubset<G::Elem> = self.target.iter().map(|&a| self.group.mul(s0inv, a)).collect();
        let mut out: Vec<_> = cands
            .iter()
            .copied()
            .filter(|&c| shape.iter().all(|&s| self.target.contains(&self.group.mul(s, c))))
            .collect();
        out.sort_by(|&a, &b| self.group.enumeration_cmp(a, b));
        out
    }

    fn uncovered_count(&self, shape: &FiniteSubset<G::Elem>, c: G::Elem) -> usize {
        shape
            .iter()
            .filter(|&&s| !self.covered.contains(&self.group.mul(s, c)))
            .count()
    }

    fn cover(&mut self, shape: &FiniteSubset<G::Elem>, c: G::Elem) -> FiniteSubset<G::Elem> {
        let mut fresh = Vec::new();
        for &s in shape.iter() {
            let e = self.group.mul(s, c);
            if self.covered.insert(e) {
                fresh.push(e);
            }
        }
        FiniteSubset::from_vec(fresh)
    }

    fn covered_count(&self) -> usize {
        self.covered.len()
    }
}

impl Tileable for Zd {
    fn coverage_index<'a>(&'a self, target: &FiniteSubset<ZdElem>) -> Box<dyn CoverageIndex<ZdElem> + 'a> {
        let grid = self.grid_for(target).unwrap_or_else(|| Grid::new(self.dim(), &[0; MAX_DIM], &[0; MAX_DIM]));
        let mut in_target = vec![false; grid.volume()];
        let mut target_counts = Fenwick::new(&grid);
        for &e in target.iter() {
            let i = grid.index(e).expect("inside bbox");
            in_target[i] = true;
            target_counts.add(&grid, i, 1);
        }
        Box::new(DenseCoverage {
            zd: *self,
            covered: vec![false; grid.volume()],
            covered_counts: Fenwick::new(&grid),
            in_target,
            target_counts,
            grid,
            n_covered: 0,
        })
    }
}

/// Dense coverage over the bounding box of the target. Box-shaped tiles
/// are counted in `O(2^d log^d n)` through Fenwick trees; other shapes fall
/// back to per-element lookups.
struct DenseCoverage {
    zd: Zd,
    grid: Grid,
    in_target: Vec<bool>,
    covered: Vec<bool>,
    target_counts: Fenwick,
    covered_counts: Fenwick,
    n_covered: usize,
}

impl DenseCoverage {
    /// Half-open box `[lo, hi)` in grid offsets, clipped; `None` if it leaves the grid.
    fn box_offsets(&self, lo: ZdElem, hi: ZdElem) -> Option<([usize; MAX_DIM], [usize; MAX_DIM])> {
        let mut a = [0; MAX_DIM];
        let mut b = [1; MAX_DIM];
        for i in 0..self.zd.dim() {
            let l = lo.coords()[i] - self.grid.lo(i);
            let h = hi.coords()[i] + 1 - self.grid.lo(i);
            if l < 0 || h as usize > self.grid.extent(i) {
                return None;
            }
            a[i] = l as usize;
            b[i] = h as usize;
        }
        Some((a, b))
    }
}

impl CoverageIndex<ZdElem> for DenseCoverage {
    fn fitting_centers(&self, shape: &FiniteSubset<ZdElem>) -> Vec<ZdElem> {
        let d = self.zd.dim();
        let (Some((slo, shi)), Some(_)) = (self.zd.bounding_box(shape), self.in_target.first()) else {
            return Vec::new();
        };
        // Candidate centres keep the shape's bounding box inside the grid.
        let mut lo = [0i64; MAX_DIM];
        let mut hi = [0i64; MAX_DIM];
        for i in 0..d {
            lo[i] = self.grid.lo(i) - slo.coords()[i];
            hi[i] = self.grid.lo(i) + self.grid.extent(i) as i64 - shi.coords()[i];
            if hi[i] <= lo[i] {
                return Vec::new();
            }
        }
        let cand_grid = Grid::new(d, &lo[..d], &hi[..d]);
        let is_box = self.zd.as_box(shape).is_some();
        let mut out: Vec<ZdElem> = (0..cand_grid.volume())
            .map(|i| cand_grid.elem(i))
            .filter(|&c| {
                if is_box {
                    let (a, b) = self.box_offsets(slo + c, shi + c).expect("candidate inside grid");
                    self.target_counts.box_sum(d, &a, &b) == shape.len() as i64
                } else {
                    shape
                        .iter()
                        .all(|&s| self.grid.index(s + c).is_some_and(|i| self.in_target[i]))
                }
            })
            .collect();
        out.sort_by(|&a, &b| self.zd.enumeration_cmp(a, b));
        out
    }

    fn uncovered_count(&self, shape: &FiniteSubset<ZdElem>, c: ZdElem) -> usize {
        if let Some((slo, shi)) = self.zd.as_box(shape) {
            if let Some((a, b)) = self.box_offsets(slo + c, shi + c) {
                let cov = self.covered_counts.box_sum(self.zd.dim(), &a, &b);
                return shape.len() - cov as usize;
            }
        }
        shape
            .iter()
            .filter(|&&s| !self.grid.index(s + c).is_some_and(|i| self.covered[i]))
            .count()
    }

    fn cover(&mut self, shape: &FiniteSubset<ZdElem>, c: ZdElem) -> FiniteSubset<ZdElem> {
        let mut fresh = Vec::new();
        for &s in shape.iter() {
            let e = s + c;
            if let Some(i) = self.grid.index(e) {
                if !self.covered[i] {
                    self.covered[i] = true;
                    self.covered_counts.add(&self.grid, i, 1);
                    self.n_covered += 1;
                    fresh.push(e);
                }
            }
        }
        FiniteSubset::from_vec(fresh)
    }

    fn covered_count(&self) -> usize {
        self.n_covered
    }
}

/// d-dimensional Fenwick tree over a row-major grid.
struct Fenwick {
    dim: usize,
    ext: [usize; MAX_DIM],
    tree: Vec<i64>,
}

impl Fenwick {
    fn new(grid: &Grid) -> Self {
        let dim = grid.dim();
        let mut ext = [1; MAX_DIM];
        for (i, e) in ext.iter_mut().enumerate().take(dim) {
            *e = grid.extent(i);
        }
        Fenwick {
            dim,
            ext,
            tree: vec![0; grid.volume()],
        }
    }

    fn linear(&self, pos: &[usize; MAX_DIM]) -> usize {
        let mut idx = 0;
        for i in 0..self.dim {
            idx = idx * self.ext[i] + pos[i];
        }
        idx
    }

    fn add(&mut self, grid: &Grid, flat: usize, delta: i64) {
        let e = grid.elem(flat);
        let mut pos = [0usize; MAX_DIM];
        for (i, p) in pos.iter_mut().enumerate().take(self.dim) {
            *p = (e.coords()[i] - grid.lo(i)) as usize;
        }
        let mut cur = [0usize; MAX_DIM];
        self.add_rec(0, &pos, &mut cur, delta);
    }

    fn add_rec(&mut self, axis: usize, pos: &[usize; MAX_DIM], cur: &mut [usize; MAX_DIM], delta: i64) {
        if axis == self.dim {
            let l = self.linear(cur);
            self.tree[l] += delta;
            return;
        }
        let mut i = pos[axis] + 1;
        while i <= self.ext[axis] {
            cur[axis] = i - 1;
            self.add_rec(axis + 1, pos, cur, delta);
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over `[0, end)` on every axis.
    fn prefix(&self, end: &[usize; MAX_DIM]) -> i64 {
        let mut cur = [0usize; MAX_DIM];
        self.prefix_rec(0, end, &mut cur)
    }

    fn prefix_rec(&self, axis: usize, end: &[usize; MAX_DIM], cur: &mut [usize; MAX_DIM]) -> i64 {
        if axis == self.dim {
            return self.tree[self.linear(cur)];
        }
        let mut s = 0;
        let mut i = end[axis];
        while i > 0 {
            cur[axis] = i - 1;
            s += self.prefix_rec(axis + 1, end, cur);
            i -= i & i.wrapping_neg();
        }
        s
    }

    /// Sum over the half-open box `[a, b)` by inclusion–exclusion.
    fn box_sum(&self, dim: usize, a: &[usize; MAX_DIM], b: &[usize; MAX_DIM]) -> i64 {
        let mut total = 0;
        for mask in 0u32..(1 << dim) {
            let mut corner = [0usize; MAX_DIM];
            for i in 0..dim {
                corner[i] = if mask & (1 << i) != 0 { a[i] } else { b[i] };
            }
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            total += sign * self.prefix(&corner);
        }
        total
    }
}

/// Greedy ε-quasi-tiling of `a` by translates of `shapes`.
///
/// `shapes` are indexed small to large; placement runs from the largest.
/// Fails with [`Error::TilingFailed`] when the achieved cover fraction is
/// below `1 - ε`.
pub fn quasi_tile<G: Tileable>(
    group: &G,
    a: &FiniteSubset<G::Elem>,
    shapes: &[FiniteSubset<G::Elem>],
    eps: f64,
) -> Result<QuasiTiling<G::Elem>> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(invalid(alloc::format!("quasi_tile: eps {eps} outside (0, 1/4)")));
    }
    if a.is_empty() {
        return Err(invalid("quasi_tile: target must be nonempty"));
    }
    if shapes.is_empty() || shapes.iter().any(|s| s.is_empty()) {
        return Err(invalid("quasi_tile: shapes must be nonempty"));
    }
    let largest = shapes.last().expect("nonempty");
    let k = largest.product(group, &largest.inverse(group));
    let defect = folner_defect(group, a, &k)?;
    let invariance_defect = *defect.numer() as f64 / *defect.denom() as f64;

    let mut index = group.coverage_index(a);
    let mut tiles = Vec::new();
    for (j, shape) in shapes.iter().enumerate().rev() {
        let need = (1.0 - eps) * shape.len() as f64;
        for c in index.fitting_centers(shape) {
            if index.uncovered_count(shape, c) as f64 > need {
                let witness = index.cover(shape, c);
                tiles.push(PlacedTile {
                    shape: j,
                    center: c,
                    witness: Some(witness),
                });
            }
        }
    }
    let achieved = index.covered_count() as f64 / a.len() as f64;
    if achieved < 1.0 - eps {
        return Err(Error::TilingFailed {
            achieved,
            required: 1.0 - eps,
        });
    }
    Ok(QuasiTiling {
        shapes: shapes.to_vec(),
        tiles,
        target: a.clone(),
        eps,
        invariance_defect,
    })
}

/// Inner cores of one placed tile, in shape coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TileCore<E> {
    pub tile: usize,
    pub center: E,
    /// Witness pulled back to the shape, `T̃ = B·c⁻¹`.
    pub witness_core: FiniteSubset<E>,
    /// `T = {s ∈ T̃ : F·s ⊆ shape}`.
    pub inner: FiniteSubset<E>,
    /// `S = {s ∈ T : F·s ⊆ T}`.
    pub shadow: FiniteSubset<E>,
    /// `|shape ∖ S| / |shape|`.
    pub deficit: f64,
}

impl<E: Copy + Ord> TileCore<E> {
    /// `S·c`, the core in target coordinates.
    pub fn placed_shadow<G: Group<Elem = E>>(&self, group: &G) -> FiniteSubset<E> {
        self.shadow.translate_right(group, self.center)
    }

    pub fn placed_inner<G: Group<Elem = E>>(&self, group: &G) -> FiniteSubset<E> {
        self.inner.translate_right(group, self.center)
    }
}

/// Cores `T ⊇ S` of every placed tile for the window `f`.
///
/// `S` is taken as the `F`-interior of `T`, which gives `F·S ⊆ T`; cores of
/// distinct tiles therefore satisfy `F·S_1 c_1 ∩ T_2 c_2 = ∅`.
pub fn tile_cores<G: Group>(
    group: &G,
    tiling: &QuasiTiling<G::Elem>,
    f: &FiniteSubset<G::Elem>,
    gamma: f64,
) -> Result<Vec<TileCore<G::Elem>>> {
    let mut out = Vec::with_capacity(tiling.tiles.len());
    for (i, t) in tiling.tiles.iter().enumerate() {
        let witness = t
            .witness
            .as_ref()
            .ok_or_else(|| invalid(alloc::format!("tile {i} has no witness")))?;
        let shape = &tiling.shapes[t.shape];
        let cinv = group.inv(t.center);
        let witness_core = witness.translate_right(group, cinv);
        let inner = group.interior(&witness_core, f, shape);
        let shadow = group.interior(&inner, f, &inner);
        let deficit = 1.0 - shadow.len() as f64 / shape.len() as f64;
        if !(deficit < gamma) {
            return Err(Error::CoreTooSmall {
                tile: i,
                deficit,
                gamma,
            });
        }
        out.push(TileCore {
            tile: i,
            center: t.center,
            witness_core,
            inner,
            shadow,
            deficit,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1(v: i64) -> ZdElem {
        ZdElem::new(&[v])
    }

    fn interval(lo: i64, hi: i64) -> FiniteSubset<ZdElem> {
        (lo..hi).map(z1).collect()
    }

    #[test]
    fn cover_fraction_examples() {
        let a = interval(0, 10);
        assert_eq!(alpha_cover_fraction(&[a.clone()], &a).unwrap(), Ratio::new(1, 1));
        assert_eq!(alpha_cover_fraction::<ZdElem>(&[], &a).unwrap(), Ratio::new(0, 1));
        assert_eq!(
            alpha_cover_fraction(&[interval(0, 4), interval(6, 8)], &a).unwrap(),
            Ratio::new(6, 10)
        );
        assert!(alpha_cover_fraction(&[a], &FiniteSubset::empty()).is_err());
    }

    fn manual(shapes: Vec<FiniteSubset<ZdElem>>, tiles: Vec<PlacedTile<ZdElem>>, target: FiniteSubset<ZdElem>) -> QuasiTiling<ZdElem> {
        QuasiTiling {
            shapes,
            tiles,
            target,
            eps: 0.2,
            invariance_defect: 0.0,
        }
    }

    #[test]
    fn eps_disjoint_examples() {
        let z = Zd::new(1).unwrap();
        let shape = interval(0, 10);
        let exact = manual(
            vec![shape.clone()],
            vec![
                PlacedTile { shape: 0, center: z1(0), witness: Some(interval(0, 10)) },
                PlacedTile { shape: 0, center: z1(10), witness: Some(interval(10, 20)) },
            ],
            interval(0, 20),
        );
        assert!(check_eps_disjoint(&z, &exact, 0.01).unwrap().holds);

        let twins = manual(
            vec![shape.clone()],
            vec![
                PlacedTile { shape: 0, center: z1(0), witness: Some(interval(0, 10)) },
                PlacedTile { shape: 0, center: z1(0), witness: Some(interval(0, 10)) },
            ],
            interval(0, 20),
        );
        let r = check_eps_disjoint(&z, &twins, 0.2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.overlapping, vec![(0, 1)]);

        // Tiles [0,10) and [9,19) overlap in one point; witnesses drop it.
        let one_overlap = manual(
            vec![shape.clone()],
            vec![
                PlacedTile { shape: 0, center: z1(0), witness: Some(interval(0, 9)) },
                PlacedTile { shape: 0, center: z1(9), witness: Some(interval(9, 19)) },
            ],
            interval(0, 20),
        );
        assert!(check_eps_disjoint(&z, &one_overlap, 0.2).unwrap().holds);
        // 9/10 is not above 1 - 0.1.
        let r = check_eps_disjoint(&z, &one_overlap, 0.1).unwrap();
        assert_eq!(r.thin, vec![(0, 0.9)]);

        let missing = manual(
            vec![shape],
            vec![PlacedTile { shape: 0, center: z1(0), witness: None }],
            interval(0, 20),
        );
        assert!(matches!(check_eps_disjoint(&z, &missing, 0.2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn exact_tilings() {
        let z = Zd::new(1).unwrap();
        let t = quasi_tile(&z, &interval(0, 8), &[interval(0, 2)], 0.2).unwrap();
        assert_eq!(t.centers(0), [0, 2, 4, 6].map(z1).into_iter().collect());
        assert_eq!(t.cover_fraction(&z).unwrap(), Ratio::new(1, 1));

        let z2 = Zd::new(2).unwrap();
        let t2 = quasi_tile(&z2, &z2.cube(6), &[z2.cube(2)], 0.2).unwrap();
        assert_eq!(t2.tiles.len(), 9);
        assert_eq!(t2.cover_fraction(&z2).unwrap(), Ratio::new(1, 1));
        assert!(check_eps_disjoint(&z2, &t2, 0.2).unwrap().holds);
    }

    #[test]
    fn two_shape_tiling_meets_cover_bound() {
        let z2 = Zd::new(2).unwrap();
        let t = quasi_tile(&z2, &z2.cube(10), &[z2.cube(2), z2.cube(3)], 0.24).unwrap();
        let frac = t.cover_fraction(&z2).unwrap();
        assert!(frac >= Ratio::new(76, 100), "{frac}");
        assert!(check_eps_disjoint(&z2, &t, 0.24).unwrap().holds);
    }

    #[test]
    fn dense_and_generic_coverage_agree() {
        // The generic set-based sweep is the reference for the dense one.
        struct Plain(Zd);
        impl Group for Plain {
            type Elem = ZdElem;
            fn identity(&self) -> ZdElem { self.0.identity() }
            fn mul(&self, a: ZdElem, b: ZdElem) -> ZdElem { a + b }
            fn inv(&self, a: ZdElem) -> ZdElem { -a }
            fn word_length(&self, a: ZdElem) -> u64 { a.sup_norm() }
            fn enumeration_prefix(&self, len: usize) -> Vec<ZdElem> { self.0.enumeration_prefix(len) }
            fn enumeration_index(&self, a: ZdElem) -> u64 { self.0.enumeration_index(a) }
        }
        impl Tileable for Plain {}
        let z2 = Zd::new(2).unwrap();
        let plain = Plain(z2);
        let target = z2.box_set(&[0, 0], &[11, 9]);
        let l: FiniteSubset<ZdElem> = [[0, 0], [1, 0], [0, 1]].iter().map(|c| ZdElem::new(c)).collect();
        let shapes = [l, z2.cube(3)];
        let fast = quasi_tile(&z2, &target, &shapes, 0.2);
        let slow = quasi_tile(&plain, &target, &shapes, 0.2);
        assert_eq!(fast, slow);
    }

    #[test]
    fn cores() {
        let z = Zd::new(1).unwrap();
        let t = quasi_tile(&z, &interval(0, 100), &[interval(0, 100)], 0.2).unwrap();
        let ident = FiniteSubset::singleton(z1(0));
        let c = tile_cores(&z, &t, &ident, 0.01).unwrap();
        assert_eq!(c[0].shadow, c[0].inner);
        assert_eq!(c[0].inner, c[0].witness_core);

        let f = interval(-2, 3);
        let c = tile_cores(&z, &t, &f, 0.1).unwrap();
        assert_eq!(c[0].inner, interval(2, 98));
        assert_eq!(c[0].shadow, interval(4, 96));
        assert!((c[0].deficit - 0.08).abs() < 1e-12);
        assert!(matches!(tile_cores(&z, &t, &f, 0.075), Err(Error::CoreTooSmall { tile: 0, .. })));

        let big = interval(-60, 61);
        assert!(matches!(tile_cores(&z, &t, &big, 0.5), Err(Error::CoreTooSmall { .. })));
    }
}
