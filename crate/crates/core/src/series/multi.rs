use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::GradedSeries;
use crate::error::{Error, Result};
use crate::geometry::{minkowski_sum, ExpVec, PointSet, Polytope};
use crate::rational;

/// Caps on the `W^(p)` recursion.
pub const MAX_ARITY: usize = 3;
pub const MAX_SUBSERIES_P: u32 = 20;
pub const MAX_SUBSERIES_TOTAL: u32 = 400;

#[derive(Clone)]
enum MultiMode {
    /// `W_m = S^1_{m_1} + ... + S^r_{m_r}` on the cone cut out by `support`.
    Product { factors: Vec<GradedSeries>, support: Vec<Vec<i64>> },
    /// `W^(p)`: sums of pieces of total degree `p`.
    Sub { parent: MultiGradedSeries, p: u32 },
}

struct Inner {
    name: String,
    dim: usize,
    arity: usize,
    mode: MultiMode,
    cache: RwLock<BTreeMap<Vec<u32>, Arc<PointSet>>>,
}

/// Multi-graded series indexed by `N^r`; clones share the cache.
#[derive(Clone)]
pub struct MultiGradedSeries(Arc<Inner>);

impl fmt::Debug for MultiGradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiGradedSeries({:?}, dim {}, arity {})", self.0.name, self.0.dim, self.0.arity)
    }
}

impl MultiGradedSeries {
    /// Product of single-graded factors of a common dimension, optionally restricted to
    /// the cone `{m : <c, m> >= 0 for c in support}`.
    pub fn product(factors: Vec<GradedSeries>, support: Vec<Vec<i64>>) -> Result<MultiGradedSeries> {
        let first = factors.first().ok_or(Error::EmptyInput)?;
        let dim = first.dim();
        if let Some(f) = factors.iter().find(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
        }
        let arity = factors.len();
        if arity > MAX_ARITY {
            return Err(Error::CapExceeded(format!("arity {arity} above {MAX_ARITY}")));
        }
        if let Some(c) = support.iter().find(|c| c.len() != arity) {
            return Err(Error::DimensionMismatch { expected: arity, found: c.len() });
        }
        let name = factors.iter().map(|f| f.name().to_string()).collect::<Vec<_>>().join("x");
        Ok(MultiGradedSeries(Arc::new(Inner {
            name,
            dim,
            arity,
            mode: MultiMode::Product { factors, support },
            cache: RwLock::new(BTreeMap::new()),
        })))
    }

    pub fn named(&self, name: &str) -> MultiGradedSeries {
        MultiGradedSeries(Arc::new(Inner {
            name: name.to_string(),
            dim: self.0.dim,
            arity: self.0.arity,
            mode: self.0.mode.clone(),
            cache: RwLock::new(BTreeMap::new()),
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn factors(&self) -> Option<&[GradedSeries]> {
        match &self.0.mode {
            MultiMode::Product { factors, .. } => Some(factors),
            MultiMode::Sub { .. } => None,
        }
    }

    fn check(&self, m: &[u32]) -> Result<()> {
        if m.len() != self.0.arity {
            return Err(Error::DimensionMismatch { expected: self.0.arity, found: m.len() });
        }
        Ok(())
    }

    fn in_support(&self, m: &[u32]) -> bool {
        match &self.0.mode {
            MultiMode::Product { support, .. } => {
                support.iter().all(|c| c.iter().zip(m).map(|(a, &b)| a * b as i64).sum::<i64>() >= 0)
            }
            MultiMode::Sub { parent, .. } => parent.in_support(m),
        }
    }

    /// Degree bound of `W_m`.
    pub fn bound_at(&self, m: &[u32]) -> u32 {
        match &self.0.mode {
            MultiMode::Product { factors, .. } => factors.iter().zip(m).map(|(f, &k)| f.bound() * k).sum(),
            MultiMode::Sub { parent, .. } => parent.bound_at(m),
        }
    }

    pub fn degree(&self, m: &[u32]) -> Result<Arc<PointSet>> {
        self.check(m)?;
        if let Some(s) = self.0.cache.read().expect("cache lock").get(m) {
            return Ok(s.clone());
        }
        let fresh = Arc::new(self.compute(m)?);
        let mut cache = self.0.cache.write().expect("cache lock");
        Ok(cache.entry(m.to_vec()).or_insert(fresh).clone())
    }

    fn compute(&self, m: &[u32]) -> Result<PointSet> {
        let d = self.0.dim;
        if m.iter().all(|&x| x == 0) {
            return Ok(PointSet::origin(d));
        }
        if !self.in_support(m) {
            return Ok(PointSet::empty(d));
        }
        match &self.0.mode {
            MultiMode::Product { factors, .. } => {
                let mut acc = PointSet::origin(d);
                for (f, &k) in factors.iter().zip(m) {
                    acc = minkowski_sum(&acc, &*f.degree(k)?)?;
                    if acc.is_empty() {
                        break;
                    }
                }
                Ok(acc)
            }
            MultiMode::Sub { parent, p } => {
                let total: u32 = m.iter().sum();
                if !total.is_multiple_of(*p) {
                    return Ok(PointSet::empty(d));
                }
                if total > MAX_SUBSERIES_TOTAL {
                    return Err(Error::CapExceeded(format!("|m| = {total} above {MAX_SUBSERIES_TOTAL}")));
                }
                let mut pts: Vec<ExpVec> = Vec::new();
                for n in compositions(m, *p) {
                    let head = parent.degree(&n)?;
                    if head.is_empty() {
                        continue;
                    }
                    let rest: Vec<u32> = m.iter().zip(&n).map(|(a, b)| a - b).collect();
                    let tail = self.degree(&rest)?;
                    pts.extend(minkowski_sum(&head, &tail)?.iter().copied());
                }
                let out = PointSet::from_vec(d, pts)?;
                let full = parent.degree(m)?;
                if let Some(p) = out.first_missing_from(&full) {
                    return Err(Error::InvalidArgument(format!("W^(p) escapes W at {m:?}: {p}")));
                }
                Ok(out)
            }
        }
    }

    pub fn is_nonempty(&self, m: &[u32]) -> Result<bool> {
        self.check(m)?;
        if m.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        if !self.in_support(m) {
            return Ok(false);
        }
        match &self.0.mode {
            MultiMode::Product { factors, .. } => {
                for (f, &k) in factors.iter().zip(m) {
                    if !f.is_nonempty(k)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            MultiMode::Sub { .. } => Ok(!self.degree(m)?.is_empty()),
        }
    }

    /// A subset of `W_m` with the same convex hull.
    pub fn hull_candidates(&self, m: &[u32]) -> Result<Vec<ExpVec>> {
        self.check(m)?;
        if !self.is_nonempty(m)? {
            return Ok(Vec::new());
        }
        match &self.0.mode {
            MultiMode::Product { factors, .. } => {
                let mut acc = vec![ExpVec::zero(self.0.dim)];
                for (f, &k) in factors.iter().zip(m) {
                    let c = f.hull_candidates(k)?;
                    acc = acc.iter().flat_map(|p| c.iter().map(move |q| p.add(q))).collect();
                    acc.sort_unstable();
                    acc.dedup();
                }
                Ok(acc)
            }
            MultiMode::Sub { .. } => Ok(self.degree(m)?.line_extremes()),
        }
    }

    /// `sum_i a_i Delta_i` when every factor is exact.
    pub(crate) fn exact_body_at(&self, a: &[u32]) -> Option<Polytope> {
        let MultiMode::Product { factors, .. } = &self.0.mode else { return None };
        if a.iter().all(|&x| x == 0) || !self.in_support(a) {
            return None;
        }
        let mut acc: Option<Polytope> = None;
        for (f, &k) in factors.iter().zip(a) {
            if k == 0 {
                continue;
            }
            let b = f.exact_body()?.scale(&rational::int(k as i64));
            acc = Some(match acc {
                None => b,
                Some(p) => p.minkowski_sum(&b).ok()?,
            });
        }
        acc
    }

    /// `W_{a, m} = W_{m a}`.
    pub fn induced(&self, a: &[u32]) -> Result<GradedSeries> {
        self.check(a)?;
        let name = format!("{}@{a:?}", self.0.name);
        Ok(GradedSeries::induced(self.clone(), a.to_vec()).named(&name))
    }

    /// `W^(p)`.
    pub fn subseries(&self, p: u32) -> Result<MultiGradedSeries> {
        if p == 0 {
            return Err(Error::InvalidArgument("p must be at least 1".into()));
        }
        if p > MAX_SUBSERIES_P {
            return Err(Error::CapExceeded(format!("p = {p} above {MAX_SUBSERIES_P}")));
        }
        Ok(MultiGradedSeries(Arc::new(Inner {
            name: format!("{}^({p})", self.0.name),
            dim: self.0.dim,
            arity: self.0.arity,
            mode: MultiMode::Sub { parent: self.clone(), p },
            cache: RwLock::new(BTreeMap::new()),
        })))
    }

    /// Checks `W_k + W_l` inside `W_{k+l}` for every pair of indices in `[0, box]^r`
    /// whose sum stays in the box.
    pub fn audit_multiplicativity(&self, box_size: u32) -> Result<()> {
        let idx = grid(self.0.arity, box_size);
        for k in &idx {
            for l in &idx {
                let kl: Vec<u32> = k.iter().zip(l).map(|(a, b)| a + b).collect();
                if k > l || kl.iter().any(|&x| x > box_size) {
                    continue;
                }
                let sum = minkowski_sum(&*self.degree(k)?, &*self.degree(l)?)?;
                if let Some(p) = sum.first_missing_from(&*self.degree(&kl)?) {
                    return Err(Error::InvalidArgument(format!(
                        "multiplicativity violated: W_{k:?} + W_{l:?} contains {p} outside W_{kl:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// All `n <= m` componentwise with `|n| = p`.
pub(crate) fn compositions(m: &[u32], p: u32) -> Vec<Vec<u32>> {
    fn rec(m: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == m.len() {
            if left <= m[i] {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for v in 0..=left.min(m[i]) {
            cur.push(v);
            rec(m, i + 1, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if !m.is_empty() {
        rec(m, 0, p, &mut Vec::new(), &mut out);
    }
    out
}

/// `[0, box]^r` in lexicographic order.
pub(crate) fn grid(r: usize, box_size: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..=box_size).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}
