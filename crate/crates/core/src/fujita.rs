//! Fujita approximation of a graded series by the algebras generated in one degree.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{minkowski_sum, PointSet};
use crate::okounkov::{self, LATTICE_WINDOW};
use crate::rational::{self, Rational};
use crate::report::ConvergenceTable;
use crate::series::{Flag, GradedSeries};

pub const DEFAULT_K_CAP: u32 = 16;

/// `T_{k,p}`: the k-fold sum of `S_p`, checked to lie in `S_{kp}`.
pub fn tkp(series: &GradedSeries, k: u32, p: u32) -> Result<PointSet> {
    let mut out = None;
    for_each_tkp(series, p, k, |_, t| {
        out = Some(t.clone());
        Ok(())
    })?;
    Ok(out.expect("k >= 1"))
}

/// Walks `T_{1,p}, ..., T_{k_cap,p}`, asserting each lies in `S_{kp}`.
fn for_each_tkp(series: &GradedSeries, p: u32, k_cap: u32, mut f: impl FnMut(u32, &PointSet) -> Result<()>) -> Result<()> {
    if p == 0 || k_cap == 0 {
        return Err(Error::InvalidArgument("k and p must be at least 1".into()));
    }
    let sp = series.degree(p)?;
    if sp.is_empty() {
        return Err(Error::EmptyDegree(p));
    }
    let mut t = (*sp).clone();
    for k in 1..=k_cap {
        if k > 1 {
            t = minkowski_sum(&t, &sp)?;
        }
        let inside = series.membership(k * p)?;
        if let Some(bad) = t.iter().find(|a| !inside(a)) {
            return Err(Error::Multiplicativity { k: p, l: (k - 1) * p, point: bad.to_vec() });
        }
        f(k, &t)?;
    }
    Ok(())
}

/// One row of the `(p, k)` grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FujitaRow {
    pub p: u32,
    /// `k -> ♯T_{k,p} / ♯S_{kp}`.
    pub ratios: ConvergenceTable,
    /// `d! ♯T_{k,p} / (k p)^d` at `k = k_cap`.
    pub limit_estimate: Rational,
    /// `d! ♯S_{kp} / (k p)^d` at the same `k`.
    pub reference: Rational,
    /// `max(0, reference - limit) / d!`.
    pub achieved_epsilon: Rational,
    pub qualifies: bool,
    /// Ratios never decrease in `k`.
    pub monotone: bool,
    /// The last ratio is still larger than the one before it.
    pub still_rising: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FujitaReport {
    pub epsilon: Rational,
    pub k_cap: u32,
    pub p_cap: u32,
    /// `d! vol(Δ) / δ_lat`, used for the precondition.
    pub volume_estimate: Rational,
    /// Smallest qualifying `p`; `None` is the "p0 not reached" outcome.
    pub p0: Option<u32>,
    /// Rows for every `p <= p_cap` with `S_p` nonempty.
    pub rows: Vec<FujitaRow>,
}

impl FujitaReport {
    pub fn row(&self, p: u32) -> Option<&FujitaRow> {
        self.rows.iter().find(|r| r.p == p)
    }
}

pub fn fujita_row(series: &GradedSeries, epsilon: &Rational, p: u32, k_cap: u32) -> Result<FujitaRow> {
    let d = series.dim();
    let fact = Rational::from_integer(rational::factorial(d));
    let mut ratios = ConvergenceTable::new(&format!("fujita ratios p={p}"), &["p", "k"]);
    let mut last_t = 0usize;
    let mut last_s = 0usize;
    for_each_tkp(series, p, k_cap, |k, t| {
        let s = series.count(k * p)?;
        ratios.push(vec![p as i64, k as i64], rational::ratio(t.len() as i64, s as i64));
        last_t = t.len();
        last_s = s;
        Ok(())
    })?;
    let denom = Rational::from_integer(BigInt::from(k_cap as u64 * p as u64).pow(d as u32));
    let limit_estimate = &fact * rational::int(last_t as i64) / &denom;
    let reference = &fact * rational::int(last_s as i64) / &denom;
    let gap = &reference - &limit_estimate;
    let achieved_epsilon = if gap.is_positive() { gap.clone() / &fact } else { Rational::zero() };
    let qualifies = limit_estimate >= &reference - &fact * epsilon;
    let values: Vec<&Rational> = ratios.rows.iter().map(|r| &r.value).collect();
    let monotone = values.windows(2).all(|w| w[0] <= w[1]);
    let still_rising = values.len() >= 2 && values[values.len() - 1] > values[values.len() - 2];
    Ok(FujitaRow { p, ratios, limit_estimate, reference, achieved_epsilon, qualifies, monotone, still_rising })
}

/// The `(p, k)` grid for `p <= p_cap`, `k <= k_cap`, and the smallest qualifying `p`.
///
/// A degree `p` qualifies when `d! ♯T_{k,p}/(kp)^d >= d! ♯S_{kp}/(kp)^d - d! epsilon` at `k = k_cap`.
pub fn fujita_report(series: &GradedSeries, epsilon: &Rational, p_cap: u32, k_cap: u32) -> Result<FujitaReport> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if p_cap == 0 || k_cap == 0 {
        return Err(Error::InvalidArgument("caps must be at least 1".into()));
    }
    let flag = Flag::identity(series.dim());
    let volume_estimate = okounkov::volume_estimate(series, &flag, p_cap.max(LATTICE_WINDOW))?;
    if !volume_estimate.is_positive() {
        return Err(Error::Refused(format!("series {} has zero volume estimate", series.name())));
    }
    let ps: Vec<u32> = (1..=p_cap).filter(|&p| series.is_nonempty(p).unwrap_or(false)).collect();
    let rows = ps.par_iter().map(|&p| fujita_row(series, epsilon, p, k_cap)).collect::<Result<Vec<_>>>()?;
    let p0 = rows.iter().find(|r| r.qualifies).map(|r| r.p);
    Ok(FujitaReport { epsilon: epsilon.clone(), k_cap, p_cap, volume_estimate, p0, rows })
}
