use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dd::{self, primitive};
use super::expvec::ExpVec;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Default cap on the ambient dimension of hulls and volumes.
pub const DEFAULT_MAX_DIM: usize = 6;

/// `<normal, x> <= offset` (or `=` when used as an equation), integer data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl Halfspace {
    /// Clears denominators of a rational inequality `<normal, x> <= offset`.
    pub fn from_rational(normal: &[Rational], offset: &Rational) -> Halfspace {
        let l = rational::lcm_of_denominators(normal.iter().chain(std::iter::once(offset)));
        let lq = Rational::from_integer(l);
        let mut all: Vec<BigInt> = normal.iter().map(|q| (q * &lq).to_integer()).collect();
        all.push((offset * &lq).to_integer());
        let mut all = primitive(all);
        let offset = all.pop().unwrap();
        Halfspace { normal: all, offset }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.normal.iter().zip(x).map(|(a, b)| Rational::from_integer(a.clone()) * b).sum()
    }

    pub fn slack(&self, x: &[Rational]) -> Rational {
        Rational::from_integer(self.offset.clone()) - self.eval(x)
    }
}

/// A nonempty rational polytope with both descriptions.
///
/// Vertices are sorted; facets are the inequalities of the polytope inside its affine
/// hull, equations cut out the affine hull.
#[derive(Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
    facets: Vec<Halfspace>,
    equations: Vec<Halfspace>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}
impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<Vec<String>> = self.vertices.iter().map(|v| v.iter().map(|q| q.to_string()).collect()).collect();
        f.debug_struct("Polytope").field("dim", &self.dim).field("vertices", &vs).finish()
    }
}

/// `conv{(0, 0), (1, 0), (0, 1)}`.
impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({})", v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "conv{{{}}}", vs.join(", "))
    }
}

fn to_big(q: &[Rational]) -> Vec<BigInt> {
    // homogeneous integer generator (L q, L)
    let l = rational::lcm_of_denominators(q.iter());
    let lq = Rational::from_integer(l.clone());
    let mut g: Vec<BigInt> = q.iter().map(|x| (x * &lq).to_integer()).collect();
    g.push(l);
    g
}

/// RREF of the row space spanned by `rows` over Q: (pivot columns, reduced rows).
pub(super) fn rref(rows: &[Vec<BigInt>], n: usize) -> (Vec<usize>, Vec<Vec<Rational>>) {
    let idx = dd::independent_rows(rows, n);
    let mut m: Vec<Vec<Rational>> =
        idx.iter().map(|&i| rows[i].iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        m[r].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let src = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, m)
}

/// Integer basis of `{z : <z, row> = 0 for all rows}` from an RREF.
pub(super) fn null_space(pivots: &[usize], reduced: &[Vec<Rational>], n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut z = vec![Rational::zero(); n];
            z[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                z[p] = -reduced[i][f].clone();
            }
            let l = rational::lcm_of_denominators(z.iter());
            primitive(z.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect())
        })
        .collect()
}

impl Polytope {
    /// Convex hull of rational points.
    pub fn hull(points: &[Vec<Rational>]) -> Result<Polytope> {
        Self::hull_capped(points, DEFAULT_MAX_DIM)
    }

    pub fn hull_capped(points: &[Vec<Rational>], max_dim: usize) -> Result<Polytope> {
        let dim = points.first().ok_or(Error::EmptyInput)?.len();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        if dim > max_dim {
            return Err(Error::DimensionCap { dim, cap: max_dim });
        }
        Self::hull_homogeneous(points.iter().map(|p| to_big(p)).collect(), dim)
    }

    /// Hull of lattice points scaled down: `{p / t}` for pairs `(p, t)` with `t > 0`.
    pub fn hull_scaled_lattice<'a>(points: impl IntoIterator<Item = (&'a ExpVec, i64)>, dim: usize) -> Result<Polytope> {
        let gens: Vec<Vec<BigInt>> = points
            .into_iter()
            .map(|(p, t)| {
                debug_assert_eq!(p.dim(), dim);
                let mut g: Vec<BigInt> = p.iter().map(BigInt::from).collect();
                g.push(BigInt::from(t));
                g
            })
            .collect();
        if gens.is_empty() {
            return Err(Error::EmptyInput);
        }
        if dim > DEFAULT_MAX_DIM {
            return Err(Error::DimensionCap { dim, cap: DEFAULT_MAX_DIM });
        }
        Self::hull_homogeneous(gens, dim)
    }

    /// Hull from homogeneous integer generators `(x t, t)`, `t > 0`.
    pub(crate) fn hull_homogeneous(gens: Vec<Vec<BigInt>>, dim: usize) -> Result<Polytope> {
        let n = dim + 1;
        let (pivots, reduced) = rref(&gens, n);
        let k = pivots.len();
        let equations: Vec<Halfspace> = null_space(&pivots, &reduced, n)
            .into_iter()
            .map(|mut z| {
                let t = z.pop().unwrap();
                let (normal, offset) = canonical_sign(z, -t);
                Halfspace { normal, offset }
            })
            .collect();
        let projected: Vec<Vec<BigInt>> = gens.iter().map(|g| pivots.iter().map(|&p| g[p].clone()).collect()).collect();
        let rays = dd::extreme_rays(&projected, k).expect("projection onto pivot columns has full rank");

        // vertices: generators whose tight facets have rank k - 1
        let mut vertices: Vec<Vec<Rational>> = Vec::new();
        let mut seen_gens: Vec<&Vec<BigInt>> = Vec::new();
        for (g, pg) in gens.iter().zip(&projected) {
            let tight: Vec<Vec<BigInt>> = rays.iter().filter(|y| dd::dot(y, pg).is_zero()).cloned().collect();
            if tight.len() + 1 < k {
                continue;
            }
            if dd::rank(&tight, k) + 1 != k {
                continue;
            }
            if seen_gens.iter().any(|s| proportional(s, g)) {
                continue;
            }
            seen_gens.push(g);
            let t = Rational::from_integer(g[dim].clone());
            vertices.push(g[..dim].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect());
        }
        vertices.sort();
        vertices.dedup();

        let mut facets: Vec<Halfspace> = rays
            .iter()
            .map(|y| {
                let mut lifted = vec![BigInt::zero(); n];
                for (i, &p) in pivots.iter().enumerate() {
                    lifted[p] = y[i].clone();
                }
                let t = lifted.pop().unwrap();
                Halfspace { normal: lifted.into_iter().map(|x| -x).collect(), offset: t }
            })
            .filter(|h| {
                let tight = vertices.iter().filter(|v| h.slack(v).is_zero()).count();
                tight > 0 && tight < vertices.len()
            })
            .collect();
        facets.sort();
        facets.dedup();
        Ok(Polytope { dim, vertices, facets, equations })
    }

    /// Bounded polyhedron `{x : facets, equations}`; `Ok(None)` when empty.
    pub fn from_halfspaces(dim: usize, ineqs: &[Halfspace], eqs: &[Halfspace]) -> Result<Option<Polytope>> {
        let n = dim + 1;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for h in ineqs {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.normal.len() });
            }
            // offset * t - <a, x> >= 0
            let mut r: Vec<BigInt> = h.normal.iter().map(|a| -a).collect();
            r.push(h.offset.clone());
            rows.push(r);
        }
        for h in eqs {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.normal.len() });
            }
            let mut r: Vec<BigInt> = h.normal.iter().map(|a| -a).collect();
            r.push(h.offset.clone());
            rows.push(r.iter().map(|x| -x).collect());
            rows.push(r);
        }
        let mut t = vec![BigInt::zero(); n];
        t[dim] = BigInt::one();
        rows.push(t);
        let rays = dd::extreme_rays(&rows, n).map_err(|_| Error::Unbounded)?;
        if rays.iter().any(|r| r[dim].is_zero()) {
            return Err(Error::Unbounded);
        }
        if rays.is_empty() {
            return Ok(None);
        }
        Self::hull_homogeneous(rays, dim).map(Some)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equations(&self) -> &[Halfspace] {
        &self.equations
    }

    pub fn affine_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_lattice_polytope(&self) -> bool {
        self.vertices.iter().flatten().all(|q| q.is_integer())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|h| h.slack(x).is_zero()) && self.facets.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Strict interior relative to the ambient space.
    pub fn contains_interior(&self, x: &[Rational]) -> bool {
        self.equations.is_empty() && self.facets.iter().all(|h| h.slack(x).is_positive())
    }

    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        self.dim == other.dim && other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn scale(&self, k: &Rational) -> Polytope {
        if k.is_zero() {
            return Polytope::hull(&[vec![Rational::zero(); self.dim]]).expect("origin");
        }
        let vs: Vec<Vec<Rational>> = self.vertices.iter().map(|v| v.iter().map(|x| x * k).collect()).collect();
        Polytope::hull(&vs).expect("scaled vertices")
    }

    /// Image under `x -> A x + b`.
    pub fn map_affine(&self, a: &[Vec<Rational>], b: &[Rational]) -> Result<Polytope> {
        let vs: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .map(|v| a.iter().zip(b).map(|(row, bi)| row.iter().zip(v).map(|(x, y)| x * y).sum::<Rational>() + bi).collect())
            .collect();
        Polytope::hull(&vs)
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut vs = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                vs.push(p.iter().zip(q).map(|(a, b)| a + b).collect());
            }
        }
        Polytope::hull(&vs)
    }

    /// `self ∩ {extra}`; `Ok(None)` if empty.
    pub fn intersect(&self, extra_ineqs: &[Halfspace], extra_eqs: &[Halfspace]) -> Result<Option<Polytope>> {
        let ineqs: Vec<Halfspace> = self.facets.iter().chain(extra_ineqs).cloned().collect();
        let eqs: Vec<Halfspace> = self.equations.iter().chain(extra_eqs).cloned().collect();
        Polytope::from_halfspaces(self.dim, &ineqs, &eqs)
    }

    /// Drops the listed coordinates of every vertex.
    pub fn project_out(&self, drop: &[usize]) -> Result<Polytope> {
        let vs: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .map(|v| v.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, x)| x.clone()).collect())
            .collect();
        Polytope::hull(&vs)
    }

    /// Exact Euclidean volume by recursive facet pyramids; 0 for lower-dimensional polytopes.
    pub fn volume(&self) -> Rational {
        if !self.is_full_dimensional() {
            return Rational::zero();
        }
        match self.dim {
            0 => Rational::one(),
            1 => {
                let xs = self.vertices.iter().map(|v| &v[0]);
                let max = xs.clone().max().unwrap();
                let min = xs.min().unwrap();
                max - min
            }
            d => {
                let apex = &self.vertices[0];
                let mut total = Rational::zero();
                for f in &self.facets {
                    let h = f.slack(apex);
                    if h.is_zero() {
                        continue;
                    }
                    let j = f.normal.iter().position(|a| !a.is_zero()).expect("nonzero facet normal");
                    let face: Vec<Vec<Rational>> = self
                        .vertices
                        .iter()
                        .filter(|v| f.slack(v).is_zero())
                        .map(|v| v.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| x.clone()).collect())
                        .collect();
                    let base = Polytope::hull(&face).expect("facet has vertices").volume();
                    total += h * base / Rational::from_integer(f.normal[j].abs());
                }
                total / rational::int(d as i64)
            }
        }
    }

    /// `d! * volume`, the normalized volume.
    pub fn normalized_volume(&self) -> Rational {
        self.volume() * Rational::from_integer(rational::factorial(self.dim))
    }

    /// Calls `f` for every lattice point of `m * self`, in lexicographic order.
    /// Stops early and returns `false` if `f` returns `false`.
    pub fn for_each_lattice_point(&self, m: i64, mut f: impl FnMut(&[i64]) -> bool) -> bool {
        let d = self.dim;
        if d == 0 {
            return f(&[]);
        }
        let mq = rational::int(m);
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in &self.vertices {
            for i in 0..d {
                let x = &v[i] * &mq;
                lo[i] = lo[i].min(x.ceil().to_integer().to_i64().expect("coordinate fits i64"));
                hi[i] = hi[i].max(x.floor().to_integer().to_i64().expect("coordinate fits i64"));
            }
        }
        if (0..d).any(|i| lo[i] > hi[i]) {
            return true;
        }
        let cons = self.int_constraints(m);
        // suffix minima of the remaining terms over the box
        let suffix: Vec<Vec<i128>> = cons
            .iter()
            .map(|(a, _)| {
                let mut s = vec![0i128; d + 1];
                for i in (0..d).rev() {
                    s[i] = s[i + 1] + (a[i] * lo[i] as i128).min(a[i] * hi[i] as i128);
                }
                s
            })
            .collect();
        let mut x = vec![0i64; d];
        let mut partial = vec![0i128; cons.len()];
        enumerate_rec(0, &lo, &hi, &cons, &suffix, &mut x, &mut partial, &mut f)
    }

    /// Constraints of `m * self` as `<a,x> <= rhs`, equations as two of them.
    fn int_constraints(&self, m: i64) -> Vec<(Vec<i128>, i128)> {
        let mut cons: Vec<(Vec<i128>, i128)> = Vec::new();
        let conv = |x: &BigInt| x.to_i128().expect("facet data fits i128");
        for h in &self.facets {
            cons.push((h.normal.iter().map(conv).collect(), conv(&h.offset) * m as i128));
        }
        for h in &self.equations {
            let a: Vec<i128> = h.normal.iter().map(conv).collect();
            let b = conv(&h.offset) * m as i128;
            cons.push((a.iter().map(|x| -x).collect(), -b));
            cons.push((a, b));
        }
        cons
    }

    /// Membership test for lattice points of `m * self` without rational arithmetic.
    pub fn lattice_membership(&self, m: i64) -> impl Fn(&[i64]) -> bool {
        let cons = self.int_constraints(m);
        move |x: &[i64]| cons.iter().all(|(a, rhs)| a.iter().zip(x).map(|(p, q)| p * *q as i128).sum::<i128>() <= *rhs)
    }

    pub fn count_lattice_points(&self, m: i64) -> u64 {
        let mut n = 0u64;
        self.for_each_lattice_point(m, |_| {
            n += 1;
            true
        });
        n
    }

    pub fn lattice_points(&self, m: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.for_each_lattice_point(m, |p| {
            out.push(p.to_vec());
            true
        });
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    i: usize,
    lo: &[i64],
    hi: &[i64],
    cons: &[(Vec<i128>, i128)],
    suffix: &[Vec<i128>],
    x: &mut Vec<i64>,
    partial: &mut Vec<i128>,
    f: &mut impl FnMut(&[i64]) -> bool,
) -> bool {
    let d = lo.len();
    for v in lo[i]..=hi[i] {
        x[i] = v;
        let mut ok = true;
        for (c, (a, rhs)) in cons.iter().enumerate() {
            if partial[c] + a[i] * v as i128 + suffix[c][i + 1] > *rhs {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        if i + 1 == d {
            if !f(x) {
                return false;
            }
        } else {
            for (c, (a, _)) in cons.iter().enumerate() {
                partial[c] += a[i] * v as i128;
            }
            let keep = enumerate_rec(i + 1, lo, hi, cons, suffix, x, partial, f);
            for (c, (a, _)) in cons.iter().enumerate() {
                partial[c] -= a[i] * v as i128;
            }
            if !keep {
                return false;
            }
        }
    }
    true
}

fn proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    // both have positive last coordinate
    let n = a.len();
    a.iter().zip(b).all(|(x, y)| x * &b[n - 1] == y * &a[n - 1])
}

fn canonical_sign(mut normal: Vec<BigInt>, mut offset: BigInt) -> (Vec<BigInt>, BigInt) {
    let first = normal.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(|| offset.clone());
    if first.is_negative() {
        normal.iter_mut().for_each(|x| *x = -x.clone());
        offset = -offset;
    }
    let g = normal.iter().fold(offset.clone(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        normal.iter_mut().for_each(|x| *x /= &g);
        offset /= &g;
    }
    (normal, offset)
}

/// `conv(0, scale e_1, ..., scale e_d)`.
pub fn simplex(dim: usize, scale: &Rational) -> Polytope {
    let mut vs = vec![vec![Rational::zero(); dim]];
    for i in 0..dim {
        let mut v = vec![Rational::zero(); dim];
        v[i] = scale.clone();
        vs.push(v);
    }
    Polytope::hull(&vs).expect("simplex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn standard_triangle() {
        let p = Polytope::hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(p.facets().len(), 3);
        assert_eq!(p.volume(), ratio(1, 2));
        assert!(p.contains(&[ratio(1, 3), ratio(1, 3)]));
        assert!(!p.contains(&[int(1), int(1)]));
    }

    #[test]
    fn single_point_has_volume_zero() {
        let p = Polytope::hull(&pts(&[&[0, 0]])).unwrap();
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.affine_dim(), 0);
        assert_eq!(p.volume(), int(0));
    }

    #[test]
    fn interior_point_dropped() {
        let p = Polytope::hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1]])).unwrap();
        assert_eq!(p.vertices(), &pts(&[&[0, 0], &[0, 2], &[2, 0]])[..]);
    }

    #[test]
    fn segment_volume() {
        let p = Polytope::hull(&pts(&[&[0], &[2]])).unwrap();
        assert_eq!(p.volume(), int(2));
    }

    #[test]
    fn truncated_simplex_area() {
        let s = simplex(2, &int(1));
        let cut = s.intersect(&[Halfspace::from_rational(&[int(1), int(0)], &ratio(7, 10))], &[]).unwrap().unwrap();
        // the corner x > 7/10 is a right triangle with legs 3/10
        assert_eq!(cut.volume(), ratio(91, 200));
        assert_eq!(cut.vertices().len(), 4);
    }

    #[test]
    fn lower_dimensional_hull_in_space() {
        let p = Polytope::hull(&pts(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1]])).unwrap();
        assert_eq!(p.affine_dim(), 2);
        assert_eq!(p.volume(), int(0));
        assert_eq!(p.vertices().len(), 3);
        assert!(p.contains(&[ratio(1, 4), ratio(1, 4), int(1)]));
        assert!(!p.contains(&[ratio(1, 4), ratio(1, 4), int(0)]));
    }

    #[test]
    fn cube_volume_and_scaling() {
        let c = Polytope::hull(&pts(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]))
        .unwrap();
        assert_eq!(c.facets().len(), 6);
        assert_eq!(c.volume(), int(1));
        assert_eq!(c.scale(&int(3)).volume(), int(27));
    }

    #[test]
    fn halfspace_roundtrip_and_emptiness() {
        let s = simplex(2, &int(1));
        let back = Polytope::from_halfspaces(2, s.facets(), &[]).unwrap().unwrap();
        assert_eq!(back, s);
        let empty = s.intersect(&[Halfspace::from_rational(&[int(-1), int(0)], &int(-2))], &[]).unwrap();
        assert!(empty.is_none());
        let unbounded = Polytope::from_halfspaces(1, &[Halfspace::from_rational(&[int(-1)], &int(0))], &[]);
        assert_eq!(unbounded.unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn lattice_points_of_dilated_simplex() {
        let s = simplex(2, &int(1));
        assert_eq!(s.lattice_points(3).len(), 10);
        let seg = Polytope::hull(&pts(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(seg.lattice_points(4), vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![3, 0], vec![4, 0]]);
        let q = s.intersect(&[Halfspace::from_rational(&[int(1), int(0)], &ratio(5, 7))], &[]).unwrap().unwrap();
        // a1 <= floor(5m/7), a1 + a2 <= m at m = 7: sum_{a1=0}^{5} (8 - a1)
        assert_eq!(q.lattice_points(7).len(), 33);
    }
}
