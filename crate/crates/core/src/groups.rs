//! Countable groups, finite subsets, Følner sets and finite-index subgroups.
//!
//! Everything downstream talks to a group through the [`Group`],
//! [`ResiduallyFinite`] and [`Amenable`] traits. The one concrete instance
//! is [`Zd`], the free abelian group of rank `d`, whose elements are
//! [`ZdElem`] integer tuples.
//!
//! The enumeration of `Z^d` is frozen: elements are listed by sup-norm
//! (word length) and, inside a sup-norm shell, lexicographically. For
//! `d = 1` this gives `0, -1, 1, -2, 2, ...`. The metric on `X_f` and the
//! windows derived for shadowing depend on this order.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_rational::Ratio;

use crate::error::{invalid, Error, Result};

/// A discrete countable group with a fixed enumeration.
pub trait Group {
    type Elem: Copy + Ord + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Self::Elem;
    fn word_length(&self, a: Self::Elem) -> u64;

    /// The first `len` elements of the enumeration.
    fn enumeration_prefix(&self, len: usize) -> Vec<Self::Elem>;

    /// Position of `a` in the enumeration.
    fn enumeration_index(&self, a: Self::Elem) -> u64;

    /// Enumeration order: word length first, ties by the element order.
    fn enumeration_cmp(&self, a: Self::Elem, b: Self::Elem) -> Ordering {
        self.word_length(a)
            .cmp(&self.word_length(b))
            .then_with(|| a.cmp(&b))
    }

    /// Setwise product `AB = {ab}`.
    fn product_set(
        &self,
        a: &FiniteSubset<Self::Elem>,
        b: &FiniteSubset<Self::Elem>,
    ) -> FiniteSubset<Self::Elem> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &x in a.iter() {
            for &y in b.iter() {
                out.push(self.mul(x, y));
            }
        }
        FiniteSubset::from_vec(out)
    }

    /// `{s in set : window·s ⊆ within}`.
    fn interior(
        &self,
        set: &FiniteSubset<Self::Elem>,
        window: &FiniteSubset<Self::Elem>,
        within: &FiniteSubset<Self::Elem>,
    ) -> FiniteSubset<Self::Elem> {
        let kept = set
            .iter()
            .copied()
            .filter(|&s| window.iter().all(|&w| within.contains(&self.mul(w, s))))
            .collect();
        FiniteSubset::from_sorted_unchecked(kept)
    }
}

/// Groups whose finite-index normal subgroups separate points.
pub trait ResiduallyFinite: Group {
    type Subgroup: Clone + fmt::Debug;

    /// The `n`-th member of the canonical shrinking sequence of subgroups.
    fn congruence_subgroup(&self, n: u64) -> Result<Self::Subgroup>;
    fn index(&self, h: &Self::Subgroup) -> u64;
    fn contains(&self, h: &Self::Subgroup, g: Self::Elem) -> bool;
    /// A transversal `Q` with `{sQ : s in H}` partitioning the group.
    fn fundamental_domain(&self, h: &Self::Subgroup) -> FiniteSubset<Self::Elem>;
    /// Unique factorisation `g = s·q` with `s ∈ H`, `q ∈ Q`.
    fn coset_reduce(&self, h: &Self::Subgroup, g: Self::Elem) -> (Self::Elem, Self::Elem);
}

/// Groups with a distinguished Følner sequence.
pub trait Amenable: Group {
    fn folner_set(&self, n: u64) -> FiniteSubset<Self::Elem>;
}

/// A finite set of group elements, stored sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteSubset<E> {
    elems: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for FiniteSubset<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

impl<E: Copy + Ord> FiniteSubset<E> {
    pub fn empty() -> Self {
        FiniteSubset { elems: Vec::new() }
    }

    pub fn singleton(e: E) -> Self {
        FiniteSubset { elems: vec![e] }
    }

    pub fn from_vec(mut elems: Vec<E>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        FiniteSubset { elems }
    }

    pub(crate) fn from_sorted_unchecked(elems: Vec<E>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        FiniteSubset { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.elems.binary_search(e).is_ok()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, E> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[E] {
        &self.elems
    }

    pub fn into_vec(self) -> Vec<E> {
        self.elems
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elems, &other.elems);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FiniteSubset { elems: out }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.merge_filter(other, |in_a, in_b| in_a && in_b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.merge_filter(other, |in_a, in_b| in_a && !in_b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.merge_filter(other, |in_a, in_b| in_a != in_b)
    }

    fn merge_filter(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elems, &other.elems);
        loop {
            let (e, in_a, in_b) = match (a.get(i), b.get(j)) {
                (None, None) => break,
                (Some(&x), None) => {
                    i += 1;
                    (x, true, false)
                }
                (None, Some(&y)) => {
                    j += 1;
                    (y, false, true)
                }
                (Some(&x), Some(&y)) => match x.cmp(&y) {
                    Ordering::Less => {
                        i += 1;
                        (x, true, false)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (y, false, true)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (x, true, true)
                    }
                },
            };
            if keep(in_a, in_b) {
                out.push(e);
            }
        }
        FiniteSubset { elems: out }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.len() <= other.len() && self.iter().all(|e| other.contains(e))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().all(|e| !large.contains(e))
    }

    /// `gF`.
    pub fn translate_left<G: Group<Elem = E>>(&self, group: &G, g: E) -> Self {
        Self::from_vec(self.iter().map(|&x| group.mul(g, x)).collect())
    }

    /// `Fg`.
    pub fn translate_right<G: Group<Elem = E>>(&self, group: &G, g: E) -> Self {
        Self::from_vec(self.iter().map(|&x| group.mul(x, g)).collect())
    }

    /// `F⁻¹`.
    pub fn inverse<G: Group<Elem = E>>(&self, group: &G) -> Self {
        Self::from_vec(self.iter().map(|&x| group.inv(x)).collect())
    }

    /// `FK`.
    pub fn product<G: Group<Elem = E>>(&self, group: &G, other: &Self) -> Self {
        group.product_set(self, other)
    }

    /// Elements sorted by the group's enumeration order.
    pub fn in_enumeration_order<G: Group<Elem = E>>(&self, group: &G) -> Vec<E> {
        let mut v = self.elems.clone();
        v.sort_by(|&a, &b| group.enumeration_cmp(a, b));
        v
    }
}

impl<E: Copy + Ord> FromIterator<E> for FiniteSubset<E> {
    fn from_iter<I: IntoIterator<Item = E>>(iter: I) -> Self {
        Self::from_vec(iter.into_iter().collect())
    }
}

impl<'a, E> IntoIterator for &'a FiniteSubset<E> {
    type Item = &'a E;
    type IntoIter = core::slice::Iter<'a, E>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// `|F △ KF| / |F|`.
pub fn folner_defect<G: Group>(
    group: &G,
    f: &FiniteSubset<G::Elem>,
    k: &FiniteSubset<G::Elem>,
) -> Result<Ratio<u64>> {
    if f.is_empty() {
        return Err(invalid("folner_defect: F must be nonempty"));
    }
    let kf = group.product_set(k, f);
    let sym = f.symmetric_difference(&kf);
    Ok(Ratio::new(sym.len() as u64, f.len() as u64))
}

/// Smallest `N` such that `G_n ∩ K⁻¹K = {e}` for every `n` in `N..=horizon`.
pub fn subgroup_limit_threshold<G, S>(
    group: &G,
    schedule: S,
    k: &FiniteSubset<G::Elem>,
    horizon: u64,
) -> Result<u64>
where
    G: ResiduallyFinite,
    S: Fn(u64) -> Result<G::Subgroup>,
{
    if horizon == 0 {
        return Err(invalid("subgroup_limit_threshold: horizon must be positive"));
    }
    let kk = k.inverse(group).product(group, k);
    let e = group.identity();
    let trivial = |n: u64| -> Result<bool> {
        let h = schedule(n)?;
        Ok(kk.iter().all(|&g| g == e || !group.contains(&h, g)))
    };
    if !trivial(horizon)? {
        return Err(Error::NoConvergence(alloc::format!(
            "G_n meets K^-1 K nontrivially at the horizon n = {horizon}"
        )));
    }
    let mut n = horizon;
    while n > 1 && trivial(n - 1)? {
        n -= 1;
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// Z^d
// ---------------------------------------------------------------------------

pub const MAX_DIM: usize = 4;

/// An element of `Z^d`, `1 <= d <= MAX_DIM`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZdElem {
    dim: u8,
    coords: [i64; MAX_DIM],
}

impl ZdElem {
    /// Panics if `coords` is empty or longer than [`MAX_DIM`].
    pub fn new(coords: &[i64]) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&coords.len()),
            "Z^d element needs 1..={MAX_DIM} coordinates"
        );
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        ZdElem {
            dim: coords.len() as u8,
            coords: c,
        }
    }

    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        ZdElem {
            dim: dim as u8,
            coords: [0; MAX_DIM],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim as usize]
    }

    pub fn sup_norm(&self) -> u64 {
        self.coords().iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn zip(self, other: Self, op: impl Fn(i64, i64) -> i64) -> Self {
        debug_assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut c = [0; MAX_DIM];
        for i in 0..self.dim as usize {
            c[i] = op(self.coords[i], other.coords[i]);
        }
        ZdElem {
            dim: self.dim,
            coords: c,
        }
    }
}

impl fmt::Debug for ZdElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for ZdElem {
    type Output = ZdElem;
    fn add(self, rhs: ZdElem) -> ZdElem {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for ZdElem {
    type Output = ZdElem;
    fn sub(self, rhs: ZdElem) -> ZdElem {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for ZdElem {
    type Output = ZdElem;
    fn neg(self) -> ZdElem {
        self.zip(self, |a, _| -a)
    }
}

/// The group `Z^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zd {
    dim: usize,
}

/// The subgroup `(nZ)^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CongruenceSubgroup {
    pub dim: usize,
    pub modulus: u64,
}

impl CongruenceSubgroup {
    pub fn index(&self) -> u64 {
        self.modulus.pow(self.dim as u32)
    }
}

impl Zd {
    pub fn new(dim: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(invalid(alloc::format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        Ok(Zd { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elem(&self, coords: &[i64]) -> Result<ZdElem> {
        if coords.len() != self.dim {
            return Err(invalid(alloc::format!(
                "expected {} coordinates, got {}",
                self.dim,
                coords.len()
            )));
        }
        Ok(ZdElem::new(coords))
    }

    /// Half-open box `[lo, hi)`.
    pub fn box_set(&self, lo: &[i64], hi: &[i64]) -> FiniteSubset<ZdElem> {
        assert_eq!(lo.len(), self.dim);
        assert_eq!(hi.len(), self.dim);
        if lo.iter().zip(hi).any(|(l, h)| l >= h) {
            return FiniteSubset::empty();
        }
        let grid = Grid::new(self.dim, lo, hi);
        FiniteSubset::from_sorted_unchecked((0..grid.volume()).map(|i| grid.elem(i)).collect())
    }

    /// `[0, n)^d`.
    pub fn cube(&self, n: u64) -> FiniteSubset<ZdElem> {
        let lo = vec![0; self.dim];
        let hi = vec![n as i64; self.dim];
        self.box_set(&lo, &hi)
    }

    /// `[-r, r]^d`.
    pub fn ball(&self, r: u64) -> FiniteSubset<ZdElem> {
        let r = r as i64;
        let lo = vec![-r; self.dim];
        let hi = vec![r + 1; self.dim];
        self.box_set(&lo, &hi)
    }

    /// Elements of sup-norm exactly `r`, in lexicographic order.
    pub fn shell(&self, r: u64) -> Vec<ZdElem> {
        if r == 0 {
            return vec![ZdElem::zero(self.dim)];
        }
        let r = r as i64;
        self.ball(r as u64)
            .into_vec()
            .into_iter()
            .filter(|e| e.coords().iter().any(|c| c.abs() == r))
            .collect()
    }

    /// Bounding box `[lo, hi]` (inclusive) of a nonempty set.
    pub fn bounding_box(&self, set: &FiniteSubset<ZdElem>) -> Option<(ZdElem, ZdElem)> {
        let first = *set.iter().next()?;
        let (mut lo, mut hi) = (first, first);
        for e in set.iter() {
            for i in 0..self.dim {
                lo.coords[i] = lo.coords[i].min(e.coords[i]);
                hi.coords[i] = hi.coords[i].max(e.coords[i]);
            }
        }
        Some((lo, hi))
    }

    /// Whether `set` is exactly its bounding box.
    pub fn as_box(&self, set: &FiniteSubset<ZdElem>) -> Option<(ZdElem, ZdElem)> {
        let (lo, hi) = self.bounding_box(set)?;
        let vol: u128 = (0..self.dim)
            .map(|i| (hi.coords[i] - lo.coords[i] + 1) as u128)
            .product();
        (vol == set.len() as u128).then_some((lo, hi))
    }

    pub(crate) fn grid_for(&self, set: &FiniteSubset<ZdElem>) -> Option<Grid> {
        let (lo, hi) = self.bounding_box(set)?;
        let hi1: Vec<i64> = hi.coords().iter().map(|c| c + 1).collect();
        Some(Grid::new(self.dim, lo.coords(), &hi1))
    }
}

impl Group for Zd {
    type Elem = ZdElem;

    fn identity(&self) -> ZdElem {
        ZdElem::zero(self.dim)
    }

    fn mul(&self, a: ZdElem, b: ZdElem) -> ZdElem {
        a + b
    }

    fn inv(&self, a: ZdElem) -> ZdElem {
        -a
    }

    fn word_length(&self, a: ZdElem) -> u64 {
        a.sup_norm()
    }

    fn enumeration_prefix(&self, len: usize) -> Vec<ZdElem> {
        let mut out = Vec::with_capacity(len);
        let mut r = 0;
        while out.len() < len {
            for e in self.shell(r) {
                if out.len() == len {
                    break;
                }
                out.push(e);
            }
            r += 1;
        }
        out
    }

    fn enumeration_index(&self, a: ZdElem) -> u64 {
        let r = a.sup_norm();
        let base = if r == 0 {
            0
        } else {
            (2 * r - 1).pow(self.dim as u32)
        };
        let shell = self.shell(r);
        let rank = shell.binary_search(&a).expect("element lies on its own shell");
        base + rank as u64
    }

    fn product_set(&self, a: &FiniteSubset<ZdElem>, b: &FiniteSubset<ZdElem>) -> FiniteSubset<ZdElem> {
        if a.is_empty() || b.is_empty() {
            return FiniteSubset::empty();
        }
        if let (Some((alo, ahi)), Some((blo, bhi))) = (self.as_box(a), self.as_box(b)) {
            let lo = alo + blo;
            let hi1: Vec<i64> = (ahi + bhi).coords().iter().map(|c| c + 1).collect();
            return self.box_set(lo.coords(), &hi1);
        }
        if a.len() * b.len() <= 4096 {
            let mut out = Vec::with_capacity(a.len() * b.len());
            for &x in a.iter() {
                for &y in b.iter() {
                    out.push(x + y);
                }
            }
            return FiniteSubset::from_vec(out);
        }
        let (alo, ahi) = self.bounding_box(a).expect("nonempty");
        let (blo, bhi) = self.bounding_box(b).expect("nonempty");
        let lo = alo + blo;
        let hi1: Vec<i64> = (ahi + bhi).coords().iter().map(|c| c + 1).collect();
        let grid = Grid::new(self.dim, lo.coords(), &hi1);
        if grid.volume() > (1 << 28) {
            let mut out = Vec::with_capacity(a.len() * b.len());
            for &x in a.iter() {
                for &y in b.iter() {
                    out.push(x + y);
                }
            }
            return FiniteSubset::from_vec(out);
        }
        let mut mark = vec![false; grid.volume()];
        for &x in a.iter() {
            for &y in b.iter() {
                mark[grid.index(x + y).expect("inside bbox")] = true;
            }
        }
        let elems = mark
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| grid.elem(i))
            .collect();
        FiniteSubset::from_sorted_unchecked(elems)
    }

    fn interior(
        &self,
        set: &FiniteSubset<ZdElem>,
        window: &FiniteSubset<ZdElem>,
        within: &FiniteSubset<ZdElem>,
    ) -> FiniteSubset<ZdElem> {
        let Some(grid) = self.grid_for(within) else {
            return FiniteSubset::empty();
        };
        if grid.volume() > (1 << 28) || window.len() * set.len() < 4096 {
            let kept = set
                .iter()
                .copied()
                .filter(|&s| window.iter().all(|&w| within.contains(&(w + s))))
                .collect();
            return FiniteSubset::from_sorted_unchecked(kept);
        }
        let mut mark = vec![false; grid.volume()];
        for &e in within.iter() {
            mark[grid.index(e).expect("inside bbox")] = true;
        }
        let kept = set
            .iter()
            .copied()
            .filter(|&s| {
                window
                    .iter()
                    .all(|&w| grid.index(w + s).is_some_and(|i| mark[i]))
            })
            .collect();
        FiniteSubset::from_sorted_unchecked(kept)
    }
}

impl ResiduallyFinite for Zd {
    type Subgroup = CongruenceSubgroup;

    fn congruence_subgroup(&self, n: u64) -> Result<CongruenceSubgroup> {
        if n == 0 {
            return Err(invalid("congruence subgroup modulus must be >= 1"));
        }
        Ok(CongruenceSubgroup {
            dim: self.dim,
            modulus: n,
        })
    }

    fn index(&self, h: &CongruenceSubgroup) -> u64 {
        h.index()
    }

    fn contains(&self, h: &CongruenceSubgroup, g: ZdElem) -> bool {
        let n = h.modulus as i64;
        g.coords().iter().all(|c| c.rem_euclid(n) == 0)
    }

    fn fundamental_domain(&self, h: &CongruenceSubgroup) -> FiniteSubset<ZdElem> {
        self.cube(h.modulus)
    }

    fn coset_reduce(&self, h: &CongruenceSubgroup, g: ZdElem) -> (ZdElem, ZdElem) {
        let n = h.modulus as i64;
        let q = g.zip(g, |c, _| c.rem_euclid(n));
        (g - q, q)
    }
}

impl Amenable for Zd {
    fn folner_set(&self, n: u64) -> FiniteSubset<ZdElem> {
        self.cube(n)
    }
}

/// Row-major dense layout of a half-open box, last coordinate fastest.
#[derive(Clone, Debug)]
pub(crate) struct Grid {
    dim: usize,
    lo: [i64; MAX_DIM],
    ext: [usize; MAX_DIM],
    volume: usize,
}

impl Grid {
    pub(crate) fn new(dim: usize, lo: &[i64], hi: &[i64]) -> Self {
        let mut l = [0; MAX_DIM];
        let mut ext = [1; MAX_DIM];
        for i in 0..dim {
            l[i] = lo[i];
            ext[i] = (hi[i] - lo[i]).max(0) as usize;
        }
        let volume = ext[..dim].iter().product();
        Grid {
            dim,
            lo: l,
            ext,
            volume,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn volume(&self) -> usize {
        self.volume
    }

    pub(crate) fn extent(&self, axis: usize) -> usize {
        self.ext[axis]
    }

    pub(crate) fn lo(&self, axis: usize) -> i64 {
        self.lo[axis]
    }

    pub(crate) fn index(&self, e: ZdElem) -> Option<usize> {
        let mut idx = 0usize;
        for i in 0..self.dim {
            let off = e.coords[i] - self.lo[i];
            if off < 0 || off as usize >= self.ext[i] {
                return None;
            }
            idx = idx * self.ext[i] + off as usize;
        }
        Some(idx)
    }

    pub(crate) fn elem(&self, mut idx: usize) -> ZdElem {
        let mut c = [0i64; MAX_DIM];
        for i in (0..self.dim).rev() {
            c[i] = self.lo[i] + (idx % self.ext[i]) as i64;
            idx /= self.ext[i];
        }
        ZdElem {
            dim: self.dim as u8,
            coords: c,
        }
    }
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
    fn folner_defect_examples() {
        let z = Zd::new(1).unwrap();
        let k: FiniteSubset<_> = [z1(0), z1(1)].into_iter().collect();
        assert_eq!(folner_defect(&z, &interval(0, 10), &k).unwrap(), Ratio::new(1, 10));
        let e = FiniteSubset::singleton(z1(0));
        assert_eq!(folner_defect(&z, &interval(-4, 17), &e).unwrap(), Ratio::new(0, 1));

        let z2 = Zd::new(2).unwrap();
        let k2: FiniteSubset<_> = [ZdElem::new(&[0, 0]), ZdElem::new(&[1, 0])].into_iter().collect();
        for n in [3u64, 7, 12] {
            assert_eq!(folner_defect(&z2, &z2.cube(n), &k2).unwrap(), Ratio::new(1, n));
        }
        assert!(folner_defect(&z, &FiniteSubset::empty(), &k).is_err());
    }

    #[test]
    fn congruence_and_domains() {
        let z = Zd::new(1).unwrap();
        let h = z.congruence_subgroup(5).unwrap();
        assert_eq!(z.index(&h), 5);
        assert_eq!(z.fundamental_domain(&h), interval(0, 5));
        assert_eq!(z.coset_reduce(&h, z1(13)), (z1(10), z1(3)));
        assert_eq!(z.coset_reduce(&h, z1(-7)), (z1(-10), z1(3)));
        assert_eq!(z.coset_reduce(&h, z1(0)), (z1(0), z1(0)));
        assert!(z.congruence_subgroup(0).is_err());

        let whole = z.congruence_subgroup(1).unwrap();
        assert_eq!(z.index(&whole), 1);
        assert_eq!(z.fundamental_domain(&whole), FiniteSubset::singleton(z1(0)));

        let z2 = Zd::new(2).unwrap();
        let h2 = z2.congruence_subgroup(3).unwrap();
        assert_eq!(z2.index(&h2), 9);
        let h2 = z2.congruence_subgroup(2).unwrap();
        let q = z2.fundamental_domain(&h2);
        assert_eq!(q.len(), 4);
        assert!(q.contains(&ZdElem::new(&[1, 1])));
    }

    #[test]
    fn limit_threshold_examples() {
        let z = Zd::new(1).unwrap();
        let sched = |n| z.congruence_subgroup(n);
        assert_eq!(subgroup_limit_threshold(&z, sched, &interval(-3, 4), 50).unwrap(), 7);
        assert_eq!(
            subgroup_limit_threshold(&z, sched, &FiniteSubset::singleton(z1(0)), 50).unwrap(),
            1
        );
        assert!(matches!(
            subgroup_limit_threshold(&z, sched, &interval(-3, 4), 5),
            Err(Error::NoConvergence(_))
        ));

        let z2 = Zd::new(2).unwrap();
        // Exhaustive: n = 1 contains (1,0) ∈ K⁻¹K; n = 2 meets {-1,0,1}^2 only at 0.
        let k = z2.cube(2);
        let kk = k.inverse(&z2).product(&z2, &k);
        assert!(kk.iter().any(|&g| !g.is_zero() && z2.contains(&z2.congruence_subgroup(1).unwrap(), g)));
        assert!(kk.iter().all(|&g| g.is_zero() || !z2.contains(&z2.congruence_subgroup(2).unwrap(), g)));
        let sched2 = |n| z2.congruence_subgroup(n);
        assert_eq!(subgroup_limit_threshold(&z2, sched2, &k, 20).unwrap(), 2);
    }

    #[test]
    fn enumeration_order_is_shell_then_lex() {
        let z = Zd::new(1).unwrap();
        let p = z.enumeration_prefix(7);
        assert_eq!(p, [0, -1, 1, -2, 2, -3, 3].map(z1).to_vec());
        for (i, &e) in p.iter().enumerate() {
            assert_eq!(z.enumeration_index(e), i as u64);
        }
        let z2 = Zd::new(2).unwrap();
        let p2 = z2.enumeration_prefix(30);
        for (i, &e) in p2.iter().enumerate() {
            assert_eq!(z2.enumeration_index(e), i as u64);
        }
        assert!(p2.windows(2).all(|w| z2.enumeration_cmp(w[0], w[1]) == Ordering::Less));
        assert_eq!(p2[1], ZdElem::new(&[-1, -1]));
    }

    #[test]
    fn set_algebra() {
        let a = interval(0, 6);
        let b = interval(3, 9);
        assert_eq!(a.union(&b), interval(0, 9));
        assert_eq!(a.intersection(&b), interval(3, 6));
        assert_eq!(a.difference(&b), interval(0, 3));
        assert_eq!(a.symmetric_difference(&b), interval(0, 3).union(&interval(6, 9)));
        assert!(interval(1, 3).is_subset(&a));
        assert!(interval(0, 3).is_disjoint(&interval(3, 5)));
    }

    #[test]
    fn dense_product_matches_pairwise() {
        let z2 = Zd::new(2).unwrap();
        let a = z2.cube(70);
        let b: FiniteSubset<_> = [[0, 0], [3, -2], [-5, 1], [1, 1]].iter().map(|c| ZdElem::new(c)).collect();
        let mut pairs = Vec::new();
        for &x in a.iter() {
            for &y in b.iter() {
                pairs.push(x + y);
            }
        }
        assert_eq!(z2.product_set(&a, &b), FiniteSubset::from_vec(pairs));
    }
}
