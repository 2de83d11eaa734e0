//! Graded linear series in the monomial model.
//!
//! A series assigns to each degree `m` a finite set `S_m` of dehomogenized exponent
//! vectors with `|a| <= m * bound`; the dropped coordinate is `m * bound - |a|`.

mod flag;
mod multi;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub use flag::Flag;
pub use multi::MultiGradedSeries;

use crate::error::{Error, Result};
use crate::geometry::{minkowski_sum, ExpVec, LatticeBuilder, LatticeSummary, PointSet, Polytope, DEFAULT_MAX_DIM};
use crate::rational::{self, Rational};

/// Largest degree set any single enumeration may produce.
pub const MAX_POINTS: usize = 8_000_000;

/// Integer truncation rules for series that are not finitely generated in general.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `a_coord <= floor(num m / den)` inside `|a| <= m bound`.
    FloorRatio { num: u32, den: u32, coord: usize, bound: u32 },
    /// `a_coord <= floor(m sqrt(num / den))` inside `|a| <= m bound`.
    FloorSqrt { num: u32, den: u32, coord: usize, bound: u32 },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::FloorRatio { .. } => "floor_ratio",
            Rule::FloorSqrt { .. } => "floor_sqrt",
        }
    }

    pub fn coord(&self) -> usize {
        match self {
            Rule::FloorRatio { coord, .. } | Rule::FloorSqrt { coord, .. } => *coord,
        }
    }

    pub fn bound(&self) -> u32 {
        match self {
            Rule::FloorRatio { bound, .. } | Rule::FloorSqrt { bound, .. } => *bound,
        }
    }

    /// Upper bound on `a_coord` in degree `m`.
    pub fn cap(&self, m: u32) -> i64 {
        let m = m as i64;
        match *self {
            Rule::FloorRatio { num, den, .. } => Integer::div_floor(&(num as i64 * m), &(den as i64)),
            Rule::FloorSqrt { num, den, .. } => {
                let q = (m * m * num as i64) / den as i64;
                num_integer::Roots::sqrt(&q)
            }
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let (den, coord) = match self {
            Rule::FloorRatio { den, coord, .. } | Rule::FloorSqrt { den, coord, .. } => (*den, *coord),
        };
        if den == 0 {
            return Err(Error::InvalidArgument("rule denominator must be positive".into()));
        }
        if coord >= dim {
            return Err(Error::InvalidArgument(format!("rule coordinate {} outside 1..={dim}", coord + 1)));
        }
        Ok(())
    }

    /// Points `x >= 0` with `|x| <= m bound` and `x_coord <= cap`, in closed form.
    fn count(&self, dim: usize, m: u32) -> usize {
        let total = m as u64 * self.bound() as u64;
        let top = (self.cap(m).max(-1) + 1) as u64;
        let top = top.min(total + 1);
        // sum over x_coord = j of C(total - j + dim - 1, dim - 1)
        let mut n: u128 = 0;
        for j in 0..top {
            n += binomial(total - j + dim as u64 - 1, dim as u64 - 1);
        }
        n as usize
    }

    fn contains(&self, m: u32, a: &ExpVec) -> bool {
        a.total() <= m as i64 * self.bound() as i64 && a.get(self.coord()) <= self.cap(m)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone)]
enum Mode {
    Complete(Polytope),
    Generated(Vec<(ExpVec, u32)>),
    Rule(Rule),
    Explicit(BTreeMap<u32, PointSet>),
    Veronese(GradedSeries, u32),
    Restricted(GradedSeries, Vec<usize>),
    Sum(GradedSeries, GradedSeries),
    Induced(MultiGradedSeries, Vec<u32>),
}

struct Inner {
    name: String,
    dim: usize,
    bound: u32,
    mode: Mode,
    cache: RwLock<BTreeMap<u32, Arc<PointSet>>>,
}

/// Shared handle to a graded series; clones share the per-degree cache.
#[derive(Clone)]
pub struct GradedSeries(Arc<Inner>);

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedSeries({:?}, dim {}, {})", self.0.name, self.0.dim, self.mode_name())
    }
}

/// Membership test for one degree.
pub type Membership = Box<dyn Fn(&ExpVec) -> bool + Send + Sync>;

/// Outcome of the generic finiteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfReport {
    pub is_gf: bool,
    /// First degree whose difference lattice has full rank.
    pub witness_degree: Option<u32>,
    /// Map degree: the smallest full-rank index seen.
    pub delta: Option<BigInt>,
    /// `(m, rank, index)` for every nonempty degree tested.
    pub per_degree: Vec<(u32, usize, Option<BigInt>)>,
    /// Difference lattice at the degree realizing `delta` (or of maximal rank).
    pub difference_lattice: LatticeSummary,
}

fn natural_bound<'a>(points: impl IntoIterator<Item = (&'a ExpVec, u32)>) -> u32 {
    points.into_iter().map(|(p, deg)| (p.total() as u64).div_ceil(deg.max(1) as u64) as u32).max().unwrap_or(0)
}

impl GradedSeries {
    fn build(dim: usize, bound: u32, mode: Mode) -> GradedSeries {
        GradedSeries(Arc::new(Inner { name: String::new(), dim, bound, mode, cache: RwLock::new(BTreeMap::new()) }))
    }

    /// Lattice points of `m P` in degree `m`. `P` must lie in the nonnegative orthant.
    pub fn complete(polytope: Polytope) -> Result<GradedSeries> {
        let dim = polytope.dim();
        if dim > DEFAULT_MAX_DIM {
            return Err(Error::DimensionCap { dim, cap: DEFAULT_MAX_DIM });
        }
        if polytope.vertices().iter().flatten().any(|q| q < &Rational::zero()) {
            return Err(Error::InvalidArgument("complete-mode polytope must lie in the nonnegative orthant".into()));
        }
        let bound = polytope
            .vertices()
            .iter()
            .map(|v| v.iter().sum::<Rational>().ceil().to_integer().to_u32().unwrap_or(u32::MAX))
            .max()
            .unwrap_or(0);
        Ok(Self::build(dim, bound, Mode::Complete(polytope)))
    }

    /// The complete series of `O(k)` on projective `dim`-space.
    pub fn projective(dim: usize, k: u32) -> Result<GradedSeries> {
        Ok(Self::complete(crate::geometry::simplex(dim, &rational::int(k as i64)))?.named(&format!("P{dim}_O{k}")))
    }

    /// Sums of generators `(g, deg g)`; `S_m` collects sums of total degree `m`.
    pub fn generated(dim: usize, gens: Vec<(ExpVec, u32)>) -> Result<GradedSeries> {
        if dim > DEFAULT_MAX_DIM + 1 {
            return Err(Error::DimensionCap { dim, cap: DEFAULT_MAX_DIM });
        }
        for (g, deg) in &gens {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
            }
            if *deg == 0 {
                return Err(Error::InvalidArgument(format!("generator {g} has degree 0")));
            }
        }
        let bound = natural_bound(gens.iter().map(|(g, d)| (g, *d)));
        Ok(Self::build(dim, bound, Mode::Generated(gens)))
    }

    /// `S_m = {0}` in every degree.
    pub fn trivial(dim: usize) -> GradedSeries {
        Self::generated(dim, vec![(ExpVec::zero(dim), 1)]).expect("trivial series").named("trivial")
    }

    pub fn rule(dim: usize, rule: Rule) -> Result<GradedSeries> {
        rule.validate(dim)?;
        let bound = rule.bound();
        Ok(Self::build(dim, bound, Mode::Rule(rule)))
    }

    /// Listed degrees only; every unlisted positive degree is empty.
    pub fn explicit(dim: usize, degrees: BTreeMap<u32, Vec<ExpVec>>) -> Result<GradedSeries> {
        let mut sets = BTreeMap::new();
        for (m, pts) in degrees {
            let s = PointSet::from_vec(dim, pts)?;
            if m == 0 && s != PointSet::origin(dim) {
                return Err(Error::InvalidArgument("degree 0 must be exactly the origin".into()));
            }
            sets.insert(m, s);
        }
        let bound = sets.iter().flat_map(|(m, s)| s.iter().map(move |p| (p, *m))).filter(|(_, m)| *m > 0);
        let bound = natural_bound(bound);
        Ok(Self::build(dim, bound, Mode::Explicit(sets)))
    }

    pub(crate) fn induced(multi: MultiGradedSeries, a: Vec<u32>) -> GradedSeries {
        let bound = multi.bound_at(&a);
        Self::build(multi.dim(), bound, Mode::Induced(multi, a))
    }

    /// A copy under a new name with a fresh cache.
    pub fn named(&self, name: &str) -> GradedSeries {
        GradedSeries(Arc::new(Inner {
            name: name.to_string(),
            dim: self.0.dim,
            bound: self.0.bound,
            mode: self.0.mode.clone(),
            cache: RwLock::new(BTreeMap::new()),
        }))
    }

    /// Raises the declared degree bound.
    pub fn with_bound(&self, bound: u32) -> Result<GradedSeries> {
        if bound < self.0.bound {
            return Err(Error::InvalidArgument(format!("bound {bound} below the natural bound {}", self.0.bound)));
        }
        let mut s = self.named(&self.0.name);
        Arc::get_mut(&mut s.0).expect("fresh handle").bound = bound;
        Ok(s)
    }

    /// Largest listed degree of an explicit series; the series is only meaningful up to it.
    pub fn listed_degree(&self) -> Option<u32> {
        match &self.0.mode {
            Mode::Explicit(sets) => sets.keys().next_back().copied(),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn bound(&self) -> u32 {
        self.0.bound
    }

    pub fn mode_name(&self) -> &'static str {
        match &self.0.mode {
            Mode::Complete(_) => "complete",
            Mode::Generated(_) => "generated",
            Mode::Rule(_) => "rule",
            Mode::Explicit(_) => "explicit",
            Mode::Veronese(..) => "veronese",
            Mode::Restricted(..) => "restricted",
            Mode::Sum(..) => "sum",
            Mode::Induced(..) => "induced",
        }
    }

    pub fn generators(&self) -> Option<&[(ExpVec, u32)]> {
        match &self.0.mode {
            Mode::Generated(g) => Some(g),
            _ => None,
        }
    }

    pub fn polytope(&self) -> Option<&Polytope> {
        match &self.0.mode {
            Mode::Complete(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_generated(&self) -> bool {
        matches!(self.0.mode, Mode::Generated(_))
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.0.mode, Mode::Complete(_))
    }

    /// `S_m`, computed once and shared.
    pub fn degree(&self, m: u32) -> Result<Arc<PointSet>> {
        if let Some(s) = self.0.cache.read().expect("cache lock").get(&m) {
            return Ok(s.clone());
        }
        let fresh = Arc::new(self.compute(m)?);
        if fresh.len() > MAX_POINTS {
            return Err(Error::CapExceeded(format!("degree {m} has more than {MAX_POINTS} points")));
        }
        let mut cache = self.0.cache.write().expect("cache lock");
        Ok(cache.entry(m).or_insert(fresh).clone())
    }

    /// `♯S_m`; complete and rule series are counted without being stored.
    pub fn count(&self, m: u32) -> Result<usize> {
        if let Some(s) = self.0.cache.read().expect("cache lock").get(&m) {
            return Ok(s.len());
        }
        match &self.0.mode {
            Mode::Complete(p) if m > 0 => Ok(p.count_lattice_points(m as i64) as usize),
            Mode::Rule(rule) if m > 0 => Ok(rule.count(self.0.dim, m)),
            Mode::Veronese(inner, h) => inner.count(h * m),
            _ => Ok(self.degree(m)?.len()),
        }
    }

    /// Membership predicate for `S_m`, materializing `S_m` only when the mode needs it.
    pub fn membership(&self, m: u32) -> Result<Membership> {
        match &self.0.mode {
            Mode::Complete(p) if m > 0 => {
                let test = p.lattice_membership(m as i64);
                Ok(Box::new(move |a: &ExpVec| test(&a.to_vec())))
            }
            Mode::Rule(rule) if m > 0 => {
                let rule = rule.clone();
                Ok(Box::new(move |a: &ExpVec| rule.contains(m, a)))
            }
            Mode::Veronese(inner, h) => inner.membership(h * m),
            _ => {
                let set = self.degree(m)?;
                Ok(Box::new(move |a: &ExpVec| set.contains(a)))
            }
        }
    }

    fn compute(&self, m: u32) -> Result<PointSet> {
        let d = self.0.dim;
        if m == 0 {
            return Ok(PointSet::origin(d));
        }
        match &self.0.mode {
            Mode::Complete(p) => {
                let mut pts = Vec::new();
                let mut over = false;
                p.for_each_lattice_point(m as i64, |x| {
                    if pts.len() >= MAX_POINTS {
                        over = true;
                        return false;
                    }
                    pts.push(ExpVec::of(x));
                    true
                });
                if over {
                    return Err(Error::CapExceeded(format!("degree {m} has more than {MAX_POINTS} points")));
                }
                PointSet::from_vec(d, pts)
            }
            Mode::Generated(gens) => {
                if gens.iter().all(|(_, deg)| *deg == 1) {
                    if m == 1 {
                        return PointSet::from_vec(d, gens.iter().map(|(g, _)| *g).collect());
                    }
                    let h = m / 2;
                    return minkowski_sum(&*self.degree(h)?, &*self.degree(m - h)?);
                }
                for j in 1..m {
                    self.degree(j)?;
                }
                let mut pts = Vec::new();
                for (g, deg) in gens {
                    if *deg <= m {
                        pts.extend(self.degree(m - deg)?.iter().map(|p| p.add(g)));
                    }
                }
                PointSet::from_vec(d, pts)
            }
            Mode::Rule(rule) => {
                let total = m as i64 * rule.bound() as i64;
                let cap = rule.cap(m);
                let mut pts = Vec::new();
                let mut x = vec![0i64; d];
                enumerate_simplex(&mut x, 0, total, &mut |x| {
                    if x[rule.coord()] <= cap {
                        pts.push(ExpVec::of(x));
                    }
                });
                PointSet::from_vec(d, pts)
            }
            Mode::Explicit(sets) => Ok(sets.get(&m).cloned().unwrap_or_else(|| PointSet::empty(d))),
            Mode::Veronese(inner, h) => Ok((*inner.degree(h * m)?).clone()),
            Mode::Restricted(inner, drop) => {
                let s = inner.degree(m)?;
                Ok(s.filter(|p| drop.iter().all(|&j| p.get(j) == 0)).map(|p| p.project_out(drop), d))
            }
            Mode::Sum(a, b) => minkowski_sum(&*a.degree(m)?, &*b.degree(m)?),
            Mode::Induced(multi, a) => {
                let idx: Vec<u32> = a.iter().map(|x| x * m).collect();
                Ok((*multi.degree(&idx)?).clone())
            }
        }
    }

    /// Membership `a in S_m` without materializing `S_m` where the mode allows it.
    pub fn contains(&self, m: u32, a: &ExpVec) -> Result<bool> {
        if a.dim() != self.0.dim {
            return Err(Error::DimensionMismatch { expected: self.0.dim, found: a.dim() });
        }
        if m == 0 {
            return Ok(a.iter().all(|x| x == 0));
        }
        match &self.0.mode {
            Mode::Complete(p) => {
                let mq = rational::int(m as i64);
                Ok(p.contains(&a.iter().map(|x| rational::int(x) / &mq).collect::<Vec<_>>()))
            }
            Mode::Rule(rule) => Ok(rule.contains(m, a)),
            Mode::Veronese(inner, h) => inner.contains(h * m, a),
            Mode::Restricted(inner, drop) => {
                let mut full = Vec::with_capacity(inner.dim());
                let mut it = a.iter();
                for j in 0..inner.dim() {
                    full.push(if drop.contains(&j) { 0 } else { it.next().expect("restricted length") });
                }
                inner.contains(m, &ExpVec::of(&full))
            }
            _ => Ok(self.degree(m)?.contains(a)),
        }
    }

    /// Cheap nonemptiness test for `S_m`.
    pub fn is_nonempty(&self, m: u32) -> Result<bool> {
        if m == 0 {
            return Ok(true);
        }
        match &self.0.mode {
            Mode::Complete(p) => Ok(!p.for_each_lattice_point(m as i64, |_| false)),
            Mode::Rule(_) => Ok(true),
            Mode::Generated(gens) => {
                let mut reach = vec![false; m as usize + 1];
                reach[0] = true;
                for j in 1..=m as usize {
                    reach[j] = gens.iter().any(|(_, deg)| (*deg as usize) <= j && reach[j - *deg as usize]);
                }
                Ok(reach[m as usize])
            }
            Mode::Veronese(inner, h) => inner.is_nonempty(h * m),
            Mode::Sum(a, b) => Ok(a.is_nonempty(m)? && b.is_nonempty(m)?),
            Mode::Induced(multi, a) => multi.is_nonempty(&a.iter().map(|x| x * m).collect::<Vec<_>>()),
            _ => Ok(!self.degree(m)?.is_empty()),
        }
    }

    /// A subset of `S_m` whose convex hull is `conv S_m`; empty iff `S_m` is.
    pub fn hull_candidates(&self, m: u32) -> Result<Vec<ExpVec>> {
        let d = self.0.dim;
        if m == 0 {
            return Ok(vec![ExpVec::zero(d)]);
        }
        match &self.0.mode {
            Mode::Complete(p) if p.is_lattice_polytope() => Ok(p
                .vertices()
                .iter()
                .map(|v| {
                    let c: Vec<i64> = v.iter().map(|q| q.to_integer().to_i64().expect("vertex fits") * m as i64).collect();
                    ExpVec::of(&c)
                })
                .collect()),
            Mode::Generated(gens) if gens.iter().all(|(_, deg)| *deg == 1) => {
                Ok(gens.iter().map(|(g, _)| g.scale(m as i64)).collect())
            }
            Mode::Rule(rule) => {
                let total = m as i64 * rule.bound() as i64;
                let t = rule.cap(m).min(total);
                let c = rule.coord();
                let unit = |i: usize, v: i64| {
                    let mut e = ExpVec::zero(d);
                    e.set(i, v);
                    e
                };
                let mut out = vec![ExpVec::zero(d), unit(c, t)];
                for i in (0..d).filter(|&i| i != c) {
                    out.push(unit(i, total));
                    let mut e = unit(c, t);
                    e.set(i, total - t);
                    out.push(e);
                }
                Ok(out)
            }
            Mode::Veronese(inner, h) => inner.hull_candidates(h * m),
            Mode::Restricted(inner, drop) => Ok(inner
                .hull_candidates(m)?
                .into_iter()
                .filter(|p| drop.iter().all(|&j| p.get(j) == 0))
                .map(|p| p.project_out(drop))
                .collect()),
            Mode::Sum(a, b) => {
                let (ca, cb) = (a.hull_candidates(m)?, b.hull_candidates(m)?);
                let mut out: Vec<ExpVec> = ca.iter().flat_map(|p| cb.iter().map(move |q| p.add(q))).collect();
                out.sort_unstable();
                out.dedup();
                Ok(out)
            }
            Mode::Induced(multi, a) => multi.hull_candidates(&a.iter().map(|x| x * m).collect::<Vec<_>>()),
            _ => Ok(self.degree(m)?.line_extremes()),
        }
    }

    /// `Delta` in the identity flag when it is known in closed form.
    pub fn exact_body(&self) -> Option<Polytope> {
        match &self.0.mode {
            Mode::Complete(p) => Some(p.clone()),
            Mode::Generated(gens) if !gens.is_empty() => {
                let pts: Vec<Vec<Rational>> =
                    gens.iter().map(|(g, deg)| g.iter().map(|x| rational::ratio(x, *deg as i64)).collect()).collect();
                Polytope::hull(&pts).ok()
            }
            Mode::Veronese(inner, h) => inner.exact_body().map(|b| b.scale(&rational::int(*h as i64))),
            Mode::Sum(a, b) => a.exact_body()?.minkowski_sum(&b.exact_body()?).ok(),
            Mode::Induced(multi, a) => multi.exact_body_at(a),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact_body().is_some()
    }

    /// `Gamma_m`: the valuation vectors of `S_m`.
    pub fn gamma(&self, m: u32, flag: &Flag) -> Result<PointSet> {
        self.check_flag(flag)?;
        let total = m as i64 * self.0.bound as i64;
        let s = self.degree(m)?;
        let pts: Result<Vec<ExpVec>> = s.iter().map(|a| flag.valuation(a, total)).collect();
        PointSet::from_vec(self.0.dim, pts?)
    }

    pub(crate) fn check_flag(&self, flag: &Flag) -> Result<()> {
        if flag.dim() != self.0.dim {
            return Err(Error::DimensionMismatch { expected: self.0.dim, found: flag.dim() });
        }
        Ok(())
    }

    /// gcd of the nonempty positive degrees up to `m_max`.
    pub fn exponent(&self, m_max: u32) -> Result<u32> {
        let mut g = 0u32;
        for m in 1..=m_max {
            if g == 1 {
                break;
            }
            if self.is_nonempty(m)? {
                g = g.gcd(&m);
            }
        }
        if g == 0 {
            return Err(Error::NoSections(m_max));
        }
        Ok(g)
    }

    /// `W_{h,m} = W_{hm}`.
    pub fn veronese(&self, h: u32) -> Result<GradedSeries> {
        if h == 0 {
            return Err(Error::InvalidArgument("Veronese factor must be at least 1".into()));
        }
        if h == 1 {
            return Ok(self.clone());
        }
        let name = format!("{}^({h})", self.0.name);
        let s = match &self.0.mode {
            Mode::Complete(p) => Self::complete(p.scale(&rational::int(h as i64)))?,
            Mode::Veronese(inner, k) => Self::build(self.0.dim, self.0.bound * h, Mode::Veronese(inner.clone(), k * h)),
            _ => Self::build(self.0.dim, self.0.bound * h, Mode::Veronese(self.clone(), h)),
        };
        Ok(s.named(&name))
    }

    /// Restriction to the coordinate subvariety `{x_j = 0 : j in vanishing}`, 0-based
    /// indices into the dehomogenized coordinates.
    pub fn restrict(&self, vanishing: &[usize]) -> Result<GradedSeries> {
        let d = self.0.dim;
        let mut drop = vanishing.to_vec();
        drop.sort_unstable();
        drop.dedup();
        if drop.len() != vanishing.len() {
            return Err(Error::InvalidArgument(format!("repeated coordinate in {vanishing:?}")));
        }
        if let Some(&j) = drop.iter().find(|&&j| j >= d) {
            return Err(Error::InvalidArgument(format!("coordinate {} outside 1..={d}", j + 1)));
        }
        if drop.is_empty() {
            return Ok(self.clone());
        }
        let nd = d - drop.len();
        let name = format!("{}|{:?}", self.0.name, drop.iter().map(|j| j + 1).collect::<Vec<_>>());
        let s = match &self.0.mode {
            Mode::Complete(p) => {
                let eqs: Vec<crate::geometry::Halfspace> = drop
                    .iter()
                    .map(|&j| {
                        let normal = (0..d).map(|i| BigInt::from((i == j) as i64)).collect();
                        crate::geometry::Halfspace { normal, offset: BigInt::zero() }
                    })
                    .collect();
                match p.intersect(&[], &eqs)? {
                    Some(face) if nd > 0 => Self::complete(face.project_out(&drop)?)?.with_bound(self.0.bound)?,
                    Some(_) => Self::trivial(0).with_bound(self.0.bound)?,
                    None => Self::explicit(nd, BTreeMap::new())?,
                }
            }
            Mode::Generated(gens) => {
                let kept: Vec<(ExpVec, u32)> = gens
                    .iter()
                    .filter(|(g, _)| drop.iter().all(|&j| g.get(j) == 0))
                    .map(|(g, deg)| (g.project_out(&drop), *deg))
                    .collect();
                Self::generated(nd, kept)?.with_bound(self.0.bound)?
            }
            Mode::Veronese(inner, h) => inner.restrict(&drop)?.veronese(*h)?.with_bound(self.0.bound)?,
            Mode::Sum(a, b) => a.restrict(&drop)?.sum(&b.restrict(&drop)?)?,
            _ => Self::build(nd, self.0.bound, Mode::Restricted(self.clone(), drop)),
        };
        Ok(s.named(&name))
    }

    /// Degreewise Minkowski sum: the product series.
    pub fn sum(&self, other: &GradedSeries) -> Result<GradedSeries> {
        if self.0.dim != other.0.dim {
            return Err(Error::DimensionMismatch { expected: self.0.dim, found: other.0.dim });
        }
        let s = Self::build(self.0.dim, self.0.bound + other.0.bound, Mode::Sum(self.clone(), other.clone()));
        Ok(s.named(&format!("{}+{}", self.0.name, other.0.name)))
    }

    /// Checks `S_k + S_l` inside `S_{k+l}` for all `k + l <= m_max`.
    pub fn audit_multiplicativity(&self, m_max: u32) -> Result<()> {
        for k in 1..=m_max / 2 {
            for l in k..=m_max - k {
                let sum = minkowski_sum(&*self.degree(k)?, &*self.degree(l)?)?;
                let target = self.degree(k + l)?;
                if let Some(p) = sum.first_missing_from(&target) {
                    return Err(Error::Multiplicativity { k, l, point: p.to_vec() });
                }
            }
        }
        Ok(())
    }

    /// Difference-lattice test over the degrees `1..=m_max`.
    pub fn gf_report(&self, m_max: u32) -> Result<GfReport> {
        let d = self.0.dim;
        let mut per_degree = Vec::new();
        let mut best: Option<(u32, LatticeSummary)> = None;
        for m in 1..=m_max {
            if !self.is_nonempty(m)? {
                continue;
            }
            let s = self.degree(m)?;
            let base = s.points()[0];
            let mut lb = LatticeBuilder::new(d);
            for p in s.iter().skip(1) {
                if lb.is_everything() {
                    break;
                }
                let diff: Vec<i64> = p.iter().zip(base.iter()).map(|(x, y)| x - y).collect();
                lb.insert_i64(&diff);
            }
            let summary = lb.finish();
            per_degree.push((m, summary.rank, summary.index.clone()));
            let better = match &best {
                None => true,
                Some((_, b)) => match (&summary.index, &b.index) {
                    (Some(i), Some(j)) => i < j,
                    (Some(_), None) => true,
                    (None, None) => summary.rank > b.rank,
                    (None, Some(_)) => false,
                },
            };
            if better {
                best = Some((m, summary));
            }
        }
        let (_, lattice) = best.ok_or(Error::NoSections(m_max))?;
        let witness_degree = per_degree.iter().find(|(_, r, _)| *r == d).map(|(m, _, _)| *m);
        Ok(GfReport {
            is_gf: witness_degree.is_some(),
            witness_degree,
            delta: lattice.index.clone(),
            per_degree,
            difference_lattice: lattice,
        })
    }

    /// Largest difference-lattice rank over `1..=m_max`; `None` when every degree is empty.
    pub fn iitaka_dim(&self, m_max: u32) -> Result<Option<usize>> {
        match self.gf_report(m_max) {
            Ok(r) => Ok(r.per_degree.iter().map(|(_, rank, _)| *rank).max()),
            Err(Error::NoSections(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

fn enumerate_simplex(x: &mut Vec<i64>, i: usize, left: i64, f: &mut impl FnMut(&[i64])) {
    if i == x.len() {
        f(x);
        return;
    }
    for v in 0..=left {
        x[i] = v;
        enumerate_simplex(x, i + 1, left - v, f);
    }
    x[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::minkowski_power;

    fn squares() -> GradedSeries {
        GradedSeries::generated(1, vec![(ExpVec::of(&[0]), 1), (ExpVec::of(&[2]), 1)]).unwrap()
    }

    fn floor57() -> GradedSeries {
        GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 }).unwrap()
    }

    fn set(dim: usize, pts: &[&[i64]]) -> PointSet {
        PointSet::from_vec(dim, pts.iter().map(|p| ExpVec::of(p)).collect()).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let p2 = GradedSeries::projective(2, 1).unwrap();
        assert_eq!(p2.gamma(3, &Flag::identity(2)).unwrap().len(), 10);
        assert_eq!(squares().gamma(3, &Flag::identity(1)).unwrap(), set(1, &[&[0], &[2], &[4], &[6]]));
        assert_eq!(floor57().gamma(0, &Flag::identity(2)).unwrap(), PointSet::origin(2));
    }

    #[test]
    fn exponents() {
        assert_eq!(GradedSeries::projective(2, 1).unwrap().exponent(10).unwrap(), 1);
        let even = GradedSeries::generated(1, vec![(ExpVec::of(&[1]), 2)]).unwrap();
        assert_eq!(even.exponent(10).unwrap(), 2);
        assert_eq!(squares().exponent(10).unwrap(), 1);
        let empty = GradedSeries::explicit(1, BTreeMap::new()).unwrap();
        assert_eq!(empty.exponent(5).unwrap_err(), Error::NoSections(5));
    }

    #[test]
    fn veronese_examples() {
        let sq = squares();
        assert_eq!(*sq.veronese(2).unwrap().degree(1).unwrap(), set(1, &[&[0], &[2], &[4]]));
        let p = GradedSeries::projective(2, 1).unwrap().veronese(3).unwrap();
        assert!(p.is_complete());
        assert_eq!(p.count(1).unwrap(), 10);
        assert!(sq.veronese(0).is_err());
    }

    #[test]
    fn restriction_examples() {
        let line = GradedSeries::projective(2, 1).unwrap().restrict(&[1]).unwrap();
        assert_eq!(line.dim(), 1);
        assert_eq!(*line.degree(4).unwrap(), *GradedSeries::projective(1, 1).unwrap().degree(4).unwrap());
        let point = squares().restrict(&[0]).unwrap();
        assert_eq!(point.dim(), 0);
        assert_eq!(*point.degree(5).unwrap(), PointSet::origin(0));
        let plane = GradedSeries::projective(3, 2).unwrap().restrict(&[2]).unwrap();
        assert_eq!(*plane.degree(3).unwrap(), *GradedSeries::projective(2, 2).unwrap().degree(3).unwrap());
        assert!(squares().restrict(&[1]).is_err());
    }

    #[test]
    fn gf_examples() {
        let r = GradedSeries::projective(2, 1).unwrap().gf_report(4).unwrap();
        assert!(r.is_gf);
        assert_eq!((r.witness_degree, r.delta), (Some(1), Some(BigInt::from(1))));
        let r = squares().gf_report(4).unwrap();
        assert_eq!(r.delta, Some(BigInt::from(2)));
        let seg = Polytope::hull(&[vec![rational::int(0), rational::int(0)], vec![rational::int(1), rational::int(0)]]).unwrap();
        let flat = GradedSeries::complete(seg).unwrap();
        assert!(!flat.gf_report(4).unwrap().is_gf);
        assert_eq!(flat.iitaka_dim(4).unwrap(), Some(1));
        assert_eq!(GradedSeries::trivial(2).iitaka_dim(4).unwrap(), Some(0));
        assert_eq!(GradedSeries::projective(2, 1).unwrap().iitaka_dim(3).unwrap(), Some(2));
    }

    #[test]
    fn sums() {
        let o1 = GradedSeries::projective(2, 1).unwrap();
        let o2 = GradedSeries::projective(2, 2).unwrap();
        let s = o1.sum(&o1).unwrap();
        for m in 0..5 {
            assert_eq!(*s.degree(m).unwrap(), *o2.degree(m).unwrap());
        }
        let t = squares().sum(&GradedSeries::trivial(1)).unwrap();
        assert_eq!(*t.degree(4).unwrap(), *squares().degree(4).unwrap());
        let ss = squares().sum(&squares()).unwrap();
        assert_eq!(*ss.degree(2).unwrap(), set(1, &[&[0], &[2], &[4], &[6], &[8]]));
    }

    #[test]
    fn rule_sets_and_hull_candidates() {
        let f = floor57();
        // m = 7: columns a1 = 0..=5 of heights 8 - a1
        assert_eq!(f.count(7).unwrap(), 33);
        assert!(f.contains(7, &ExpVec::of(&[5, 2])).unwrap());
        assert!(!f.contains(7, &ExpVec::of(&[6, 0])).unwrap());
        f.audit_multiplicativity(10).unwrap();
        let cands = f.hull_candidates(7).unwrap();
        let direct = Polytope::hull_scaled_lattice(f.degree(7).unwrap().iter().map(|p| (p, 1)), 2).unwrap();
        let hinted = Polytope::hull_scaled_lattice(cands.iter().map(|p| (p, 1)), 2).unwrap();
        assert_eq!(direct, hinted);
        assert!(cands.iter().all(|p| f.contains(7, p).unwrap()));
    }

    #[test]
    fn counts_without_storing_agree_with_sets() {
        let f = floor57();
        let p2 = GradedSeries::projective(3, 2).unwrap();
        for m in 1..9 {
            let fresh_f = floor57();
            assert_eq!(fresh_f.count(m).unwrap(), f.degree(m).unwrap().len());
            let fresh_p = GradedSeries::projective(3, 2).unwrap();
            assert_eq!(fresh_p.count(m).unwrap(), p2.degree(m).unwrap().len());
            let inside = p2.membership(m).unwrap();
            assert!(p2.degree(m).unwrap().iter().all(&inside));
            assert!(!inside(&ExpVec::of(&[2 * m as i64 + 1, 0, 0])));
        }
    }

    #[test]
    fn explicit_violation_is_reported() {
        let mut degs = BTreeMap::new();
        degs.insert(1, vec![ExpVec::of(&[1])]);
        degs.insert(2, vec![ExpVec::of(&[0])]);
        let s = GradedSeries::explicit(1, degs).unwrap();
        assert_eq!(s.audit_multiplicativity(2).unwrap_err(), Error::Multiplicativity { k: 1, l: 1, point: vec![2] });
    }

    #[test]
    fn generated_mixed_degrees() {
        let s = GradedSeries::generated(1, vec![(ExpVec::of(&[0]), 1), (ExpVec::of(&[3]), 2)]).unwrap();
        assert_eq!(*s.degree(4).unwrap(), set(1, &[&[0], &[3], &[6]]));
        assert!(!GradedSeries::generated(1, vec![(ExpVec::of(&[1]), 2)]).unwrap().is_nonempty(3).unwrap());
        let g = PointSet::from_vec(1, vec![ExpVec::of(&[0]), ExpVec::of(&[2])]).unwrap();
        assert_eq!(*squares().degree(5).unwrap(), minkowski_power(&g, 5));
    }
}
