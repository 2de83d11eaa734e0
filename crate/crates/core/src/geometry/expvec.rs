use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Hard storage capacity of an [`ExpVec`]: dehomogenized exponents in dimension up to 7,
/// or homogeneous exponents over a space of dimension up to 6.
pub const EXPVEC_CAPACITY: usize = 8;

/// Exponent vector of a monomial, stored inline. All entries are nonnegative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpVec {
    len: u8,
    coords: [i32; EXPVEC_CAPACITY],
}

impl ExpVec {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= EXPVEC_CAPACITY, "ExpVec capacity exceeded");
        ExpVec { len: dim as u8, coords: [0; EXPVEC_CAPACITY] }
    }

    pub fn new(coords: &[i64]) -> Result<Self> {
        if coords.len() > EXPVEC_CAPACITY {
            return Err(Error::DimensionCap { dim: coords.len(), cap: EXPVEC_CAPACITY });
        }
        if coords.iter().any(|&c| c < 0 || c > i32::MAX as i64) {
            return Err(Error::NegativeEntry(coords.to_vec()));
        }
        let mut v = ExpVec::zero(coords.len());
        for (slot, &c) in v.coords.iter_mut().zip(coords) {
            *slot = c as i32;
        }
        Ok(v)
    }

    /// Panicking constructor for literals in tests and examples.
    pub fn of(coords: &[i64]) -> Self {
        Self::new(coords).expect("valid exponent vector")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        debug_assert!(i < self.dim());
        self.coords[i] as i64
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: i64) {
        debug_assert!(i < self.dim() && value >= 0);
        self.coords[i] = value as i32;
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.coords[..self.dim()].iter().map(|&c| c as i64)
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.iter().collect()
    }

    pub fn total(&self) -> i64 {
        self.iter().sum()
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.dim(), other.dim());
        let mut out = *self;
        for i in 0..self.dim() {
            out.coords[i] += other.coords[i];
        }
        out
    }

    pub fn scale(&self, k: i64) -> ExpVec {
        let mut out = *self;
        for i in 0..self.dim() {
            out.coords[i] = (self.coords[i] as i64 * k) as i32;
        }
        out
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &ExpVec) -> bool {
        (0..self.dim()).all(|i| self.coords[i] <= other.coords[i])
    }

    /// Componentwise `self <= other`, ignoring coordinate `skip`.
    pub fn divides_except(&self, other: &ExpVec, skip: usize) -> bool {
        (0..self.dim()).all(|i| i == skip || self.coords[i] <= other.coords[i])
    }

    pub fn with_zeroed(&self, i: usize) -> ExpVec {
        let mut out = *self;
        out.coords[i] = 0;
        out
    }

    /// Drops the coordinates listed in `drop` (sorted or not).
    pub fn project_out(&self, drop: &[usize]) -> ExpVec {
        let kept: Vec<i64> = (0..self.dim()).filter(|i| !drop.contains(i)).map(|i| self.get(i)).collect();
        ExpVec::of(&kept)
    }

    pub fn dot(&self, w: &[i64]) -> i64 {
        self.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    /// Homogenizes a dehomogenized exponent of degree `degree`: prepends `degree - |a|`.
    pub fn homogenize(&self, degree: i64) -> ExpVec {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(degree - self.total());
        coords.extend(self.iter());
        ExpVec::of(&coords)
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ExpVec").field(&self.to_vec()).finish()
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Sorted, deduplicated set of exponent vectors of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    dim: usize,
    points: Vec<ExpVec>,
}

impl PointSet {
    pub fn empty(dim: usize) -> Self {
        PointSet { dim, points: Vec::new() }
    }

    pub fn origin(dim: usize) -> Self {
        PointSet { dim, points: vec![ExpVec::zero(dim)] }
    }

    pub fn from_vec(dim: usize, mut points: Vec<ExpVec>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ExpVec] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExpVec> {
        self.points.iter()
    }

    pub fn contains(&self, p: &ExpVec) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn first_missing_from(&self, other: &PointSet) -> Option<ExpVec> {
        self.points.iter().find(|p| !other.contains(p)).copied()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut all = self.points.clone();
        all.extend_from_slice(&other.points);
        PointSet::from_vec(self.dim, all).expect("same dimension")
    }

    pub fn map(&self, f: impl Fn(&ExpVec) -> ExpVec, dim: usize) -> PointSet {
        PointSet::from_vec(dim, self.points.iter().map(f).collect()).expect("mapped dimension")
    }

    pub fn filter(&self, f: impl Fn(&ExpVec) -> bool) -> PointSet {
        PointSet { dim: self.dim, points: self.points.iter().copied().filter(|p| f(p)).collect() }
    }

    /// For every line parallel to the last axis keeps only the lowest and highest point.
    /// Every vertex of the convex hull survives.
    pub fn line_extremes(&self) -> Vec<ExpVec> {
        if self.dim == 0 {
            return self.points.clone();
        }
        let last = self.dim - 1;
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.points.len() {
            let mut j = i;
            let key = |p: &ExpVec| p.with_zeroed(last);
            while j + 1 < self.points.len() && key(&self.points[j + 1]) == key(&self.points[i]) {
                j += 1;
            }
            // sorted lexicographically, so the run is sorted by the last coordinate
            out.push(self.points[i]);
            if j != i {
                out.push(self.points[j]);
            }
            i = j + 1;
        }
        out
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a ExpVec;
    type IntoIter = std::slice::Iter<'a, ExpVec>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Largest bounding box, in bits, for which sums go through a dense bitmap.
const DENSE_LIMIT: usize = 1 << 28;

/// Exact pairwise-sum set `{a + b}`.
pub fn minkowski_sum(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if a.is_empty() || b.is_empty() {
        return Ok(PointSet::empty(a.dim()));
    }
    if a.len() * b.len() > 256 {
        if let Some(s) = dense_sum(a, b) {
            return Ok(s);
        }
    }
    hashed_sum(a, b)
}

fn hashed_sum(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    let mut seen: HashSet<ExpVec> = HashSet::with_capacity(a.len().max(b.len()) * 2);
    for p in a {
        for q in b {
            seen.insert(p.add(q));
        }
    }
    PointSet::from_vec(a.dim(), seen.into_iter().collect())
}

fn upper_corner(s: &PointSet) -> Vec<usize> {
    let mut u = vec![0usize; s.dim()];
    for p in s {
        for (i, x) in p.iter().enumerate() {
            u[i] = u[i].max(x as usize);
        }
    }
    u
}

/// Rows along the last axis stored as bitsets; `None` if the box is too large.
fn dense_sum(a: &PointSet, b: &PointSet) -> Option<PointSet> {
    let d = a.dim();
    if d == 0 {
        return Some(PointSet::origin(0));
    }
    let (ua, ub) = (upper_corner(a), upper_corner(b));
    let sizes: Vec<usize> = ua.iter().zip(&ub).map(|(x, y)| x + y + 1).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n))?;
    if total > DENSE_LIMIT {
        return None;
    }
    let last = sizes[d - 1];
    let words = last.div_ceil(64);
    let row_of = |p: &ExpVec, q: Option<&ExpVec>| {
        (0..d - 1).fold(0usize, |r, i| r * sizes[i] + (p.get(i) + q.map_or(0, |q| q.get(i))) as usize)
    };
    // the points of `a` grouped into rows, in sorted order
    let mut a_rows: Vec<(ExpVec, Vec<u64>)> = Vec::new();
    for p in a {
        let key = p.with_zeroed(d - 1);
        if a_rows.last().is_none_or(|(k, _)| *k != key) {
            a_rows.push((key, vec![0u64; words]));
        }
        let bits = &mut a_rows.last_mut().unwrap().1;
        let x = p.get(d - 1) as usize;
        bits[x / 64] |= 1 << (x % 64);
    }
    let mut grid = vec![0u64; (total / last) * words];
    for (key, bits) in &a_rows {
        for q in b {
            let row = row_of(key, Some(q)) * words;
            let shift = q.get(d - 1) as usize;
            let (ws, bs) = (shift / 64, shift % 64);
            let dst = &mut grid[row..row + words];
            for (w, &src) in bits.iter().enumerate() {
                if src == 0 {
                    continue;
                }
                dst[w + ws] |= src << bs;
                if bs > 0 && w + ws + 1 < words {
                    dst[w + ws + 1] |= src >> (64 - bs);
                }
            }
        }
    }
    let mut points = Vec::new();
    let mut coords = vec![0i64; d];
    for (r, chunk) in grid.chunks(words).enumerate() {
        if chunk.iter().all(|&w| w == 0) {
            continue;
        }
        let mut rest = r;
        for i in (0..d - 1).rev() {
            coords[i] = (rest % sizes[i]) as i64;
            rest /= sizes[i];
        }
        for (w, &word) in chunk.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let t = word.trailing_zeros() as usize;
                coords[d - 1] = (w * 64 + t) as i64;
                points.push(ExpVec::of(&coords));
                word &= word - 1;
            }
        }
    }
    Some(PointSet { dim: d, points })
}

/// `k`-fold sum `A + ... + A`; `k = 0` gives the origin.
pub fn minkowski_power(a: &PointSet, k: u32) -> PointSet {
    let mut acc = PointSet::origin(a.dim());
    for _ in 0..k {
        acc = minkowski_sum(&acc, a).expect("same dimension");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(dim: usize, pts: &[&[i64]]) -> PointSet {
        PointSet::from_vec(dim, pts.iter().map(|p| ExpVec::of(p)).collect()).unwrap()
    }

    #[test]
    fn sums() {
        let a = set(1, &[&[0], &[1]]);
        assert_eq!(minkowski_sum(&a, &a).unwrap(), set(1, &[&[0], &[1], &[2]]));
        let b = set(2, &[&[0, 0], &[2, 1]]);
        assert_eq!(minkowski_sum(&b, &PointSet::origin(2)).unwrap(), b);
        assert_eq!(minkowski_sum(&b, &set(2, &[&[1, 0]])).unwrap(), set(2, &[&[1, 0], &[3, 1]]));
        assert!(minkowski_sum(&a, &b).is_err());
    }

    #[test]
    fn rejects_negative() {
        assert!(ExpVec::new(&[1, -1]).is_err());
    }

    #[test]
    fn homogenize_prepends_missing_degree() {
        assert_eq!(ExpVec::of(&[2, 1]).homogenize(4), ExpVec::of(&[1, 2, 1]));
    }

    #[test]
    fn line_extremes_keep_ends() {
        let s = set(2, &[&[0, 0], &[0, 1], &[0, 2], &[1, 0], &[2, 0]]);
        assert_eq!(s.line_extremes(), vec![ExpVec::of(&[0, 0]), ExpVec::of(&[0, 2]), ExpVec::of(&[1, 0]), ExpVec::of(&[2, 0])]);
    }

    #[test]
    fn dense_and_hashed_sums_agree() {
        let a = PointSet::from_vec(3, (0..60).map(|i| ExpVec::of(&[i % 4, (i * 7) % 5, (i * 13) % 71])).collect()).unwrap();
        let b = PointSet::from_vec(3, (0..40).map(|i| ExpVec::of(&[i % 3, i % 2, (i * 31) % 97])).collect()).unwrap();
        assert_eq!(dense_sum(&a, &b).unwrap(), hashed_sum(&a, &b).unwrap());
    }

    fn arb_set() -> impl Strategy<Value = PointSet> {
        prop::collection::vec(prop::collection::vec(0i64..5, 2), 1..6)
            .prop_map(|v| PointSet::from_vec(2, v.iter().map(|p| ExpVec::of(p)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn sum_is_commutative_and_associative(a in arb_set(), b in arb_set(), c in arb_set()) {
            prop_assert_eq!(minkowski_sum(&a, &b).unwrap(), minkowski_sum(&b, &a).unwrap());
            let left = minkowski_sum(&minkowski_sum(&a, &b).unwrap(), &c).unwrap();
            let right = minkowski_sum(&a, &minkowski_sum(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
