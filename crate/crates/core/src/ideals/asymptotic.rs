use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::howald::{multiplier_ideal_of, NewtonPolyhedron};
use super::star::check_star;
use super::{base_ideal, base_ideal_hull, MonomialIdeal};
use crate::error::{Error, Result};
use crate::geometry::ExpVec;
use crate::okounkov::{self, schedule};
use crate::rational::{self, Rational};
use crate::report::ConvergenceTable;
use crate::series::{Flag, GradedSeries};

pub const DEFAULT_K_CAP: u32 = 8;

/// Degrees used for the (★) search behind [`mu_equals_ain_check`].
const MU_STAR_RANGE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticIdeal {
    /// The sum of `J(1/k b_{pk})` over the admissible `k <= k_cap`.
    pub ideal: MonomialIdeal,
    /// First `k` from which the running sum stayed constant, if it did for two terms.
    pub stabilized_at: Option<u32>,
    /// Running sums, one per admissible `k`.
    pub chain: Vec<(u32, MonomialIdeal)>,
    /// `b_p` was already the unit sheaf, so no Howald step ran.
    pub unit_shortcut: bool,
}

/// `J(||pD||)` as the largest of `J(1/k b(|pkD|))`, `k <= k_cap`.
///
/// When every pure power lies in `S_p` the base ideal is the unit sheaf and so is the
/// answer; it is then returned as the unit ideal.
pub fn asymptotic_multiplier_ideal(series: &GradedSeries, p: u32, k_cap: u32) -> Result<AsymptoticIdeal> {
    if p == 0 || k_cap == 0 {
        return Err(Error::InvalidArgument("p and k_cap must be at least 1".into()));
    }
    if !series.is_nonempty(p)? {
        return Err(Error::EmptyDegree(p));
    }
    let d = series.dim();
    let n = d + 1;
    let total = p as i64 * series.bound() as i64;
    let mut free = series.contains(p, &ExpVec::zero(d))?;
    for i in 0..d {
        let mut e = ExpVec::zero(d);
        e.set(i, total);
        free = free && series.contains(p, &e)?;
    }
    if free {
        let unit = MonomialIdeal::unit(n);
        return Ok(AsymptoticIdeal { ideal: unit.clone(), stabilized_at: Some(1), chain: vec![(1, unit)], unit_shortcut: true });
    }
    let mut chain: Vec<(u32, MonomialIdeal)> = Vec::new();
    let mut running = MonomialIdeal::zero(n);
    for k in 1..=k_cap {
        if !series.is_nonempty(p * k)? {
            continue;
        }
        let np = NewtonPolyhedron::new(n, &base_ideal_hull(series, p * k)?)?;
        running = running.sum(&multiplier_ideal_of(&np, &rational::ratio(1, k as i64))?);
        chain.push((k, running.clone()));
    }
    let stabilized_at =
        (0..chain.len().saturating_sub(1)).find(|&i| chain[i..].iter().all(|(_, j)| *j == chain[i].1)).map(|i| chain[i].0);
    Ok(AsymptoticIdeal { ideal: running, stabilized_at, chain, unit_shortcut: false })
}

fn binomial(n: i64, k: i64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Calls `f` on every exponent in `n` variables of total degree `total`.
fn for_each_monomial(n: usize, total: i64, f: &mut impl FnMut(&ExpVec)) {
    fn rec(v: &mut Vec<i64>, left: i64, n: usize, f: &mut impl FnMut(&ExpVec)) {
        if v.len() + 1 == n {
            v.push(left);
            f(&ExpVec::of(v));
            v.pop();
            return;
        }
        for x in 0..=left {
            v.push(x);
            rec(v, left - x, n, f);
            v.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), total, n, f);
}

/// `d'! #{degree-m monomials on V inside J(||mL||)|_V} / m^d'` for `V = {x_j = 0, j in vanishing}`.
pub fn reduced_volume(ambient: &GradedSeries, vanishing: &[usize], m_max: u32) -> Result<ConvergenceTable> {
    let restricted = ambient.restrict(vanishing)?;
    let dv = restricted.dim();
    let mut table = ConvergenceTable::new("reduced_volume", &["m"]);
    let e = match restricted.exponent(m_max) {
        Ok(e) => e,
        Err(Error::NoSections(_)) => {
            for m in schedule(1, m_max) {
                table.push(vec![m as i64], Rational::zero());
            }
            return Ok(table);
        }
        Err(err) => return Err(err),
    };
    // homogeneous indices of the vanishing coordinates
    let mut homog: Vec<usize> = vanishing.iter().map(|j| j + 1).collect();
    homog.sort_unstable();
    homog.dedup();
    let rows = schedule(e, m_max);
    let values: Vec<(u32, Rational)> = rows
        .par_iter()
        .map(|&m| -> Result<(u32, Rational)> {
            let j = asymptotic_multiplier_ideal(ambient, m, DEFAULT_K_CAP)?.ideal.restrict(&homog);
            let total = m as i64 * ambient.bound() as i64;
            let count = if j.is_unit_sheaf() {
                binomial(total + dv as i64, dv as i64)
            } else {
                let mut c = 0i64;
                for_each_monomial(dv + 1, total, &mut |b| {
                    if j.sheaf_contains_monomial(b) {
                        c += 1;
                    }
                });
                BigInt::from(c)
            };
            let scale = Rational::from_integer(rational::factorial(dv)) / Rational::from_integer(BigInt::from(m).pow(dv as u32));
            Ok((m, Rational::from_integer(count) * scale))
        })
        .collect::<Result<_>>()?;
    for (m, v) in values {
        table.push(vec![m as i64], v);
    }
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct MuCheck {
    pub mu: ConvergenceTable,
    pub ain: ConvergenceTable,
    /// `delta * vol` of the restricted series.
    pub delta_vol: ConvergenceTable,
    pub delta: BigInt,
    pub witness: ExpVec,
    /// Relative last-row gaps `|mu - ain|/ain`, `|mu - delta vol|/delta vol`, `|ain - delta vol|/delta vol`.
    pub residuals: [Rational; 3],
    /// `mu >= ain` on every row.
    pub mu_dominates: bool,
}

fn relative(a: &Rational, b: &Rational) -> Rational {
    if b.is_zero() {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// `mu(V, L) = ||L^d . V|| = delta vol_{X|V}(L)` on matched rows; needs a (★) witness.
pub fn mu_equals_ain_check(ambient: &GradedSeries, vanishing: &[usize], flag: &Flag, m_max: u32) -> Result<MuCheck> {
    let star = check_star(ambient, MU_STAR_RANGE.min(m_max.max(1)))?;
    let witness = star
        .witness
        .ok_or_else(|| Error::Refused(format!("{} has no (★) witness up to degree {MU_STAR_RANGE}", ambient.name())))?;
    let restricted = ambient.restrict(vanishing)?;
    if restricted.dim() == 0 {
        return Err(Error::ZeroDimensional);
    }
    let identity = okounkov::check_fujita_identity(&restricted, flag, m_max)?;
    let mu = reduced_volume(ambient, vanishing, m_max)?;
    let dq = Rational::from_integer(identity.delta.clone());
    let mut delta_vol = ConvergenceTable::new("delta_vol", &["m"]);
    for r in &identity.vol.rows {
        delta_vol.push(r.index.clone(), &dq * &r.value);
    }
    let ain = identity.ain;
    let mu_dominates = mu.rows.iter().all(|r| ain.value_at(&r.index).is_none_or(|a| r.value >= *a));
    let last = |t: &ConvergenceTable| t.last_value().cloned().unwrap_or_else(Rational::zero);
    let (m, a, v) = (last(&mu), last(&ain), last(&delta_vol));
    let residuals = [relative(&m, &a), relative(&m, &v), relative(&a, &v)];
    Ok(MuCheck { mu, ain, delta_vol, delta: identity.delta, witness, residuals, mu_dominates })
}

/// Toric divisorial valuation `v(x^a) = <w, a>` in homogeneous coordinates.
///
/// Some weight must vanish so that the center lies on the variety; the weights are
/// then determined by the valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialValuation {
    weights: Vec<i64>,
}

impl MonomialValuation {
    pub fn new(weights: Vec<i64>) -> Result<MonomialValuation> {
        if weights.iter().any(|&w| w < 0) {
            return Err(Error::NegativeEntry(weights));
        }
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::InvalidArgument("valuation weights are all zero".into()));
        }
        if !weights.contains(&0) {
            return Err(Error::InvalidArgument("some valuation weight must be zero".into()));
        }
        if weights.iter().fold(0i64, |g, &w| g.gcd(&w)) != 1 {
            return Err(Error::InvalidArgument(format!("valuation weights {weights:?} are not primitive")));
        }
        Ok(MonomialValuation { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn value(&self, a: &ExpVec) -> i64 {
        a.dot(&self.weights)
    }

    /// Minimum over the generators; `None` for the zero ideal.
    pub fn of_ideal(&self, ideal: &MonomialIdeal) -> Option<i64> {
        ideal.generators().iter().map(|g| self.value(g)).min()
    }

    fn check(&self, series: &GradedSeries) -> Result<()> {
        if self.weights.len() != series.dim() + 1 {
            return Err(Error::DimensionMismatch { expected: series.dim() + 1, found: self.weights.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticOrder {
    /// `p -> v(b_p) / p` on the multiples of the exponent.
    pub per_p: ConvergenceTable,
    pub infimum: Rational,
}

/// `v(b_p)`, read off the hull candidates.
fn base_order(series: &GradedSeries, v: &MonomialValuation, p: u32) -> Result<i64> {
    let total = p as i64 * series.bound() as i64;
    let cands = series.hull_candidates(p)?;
    cands.iter().map(|a| v.value(&a.homogenize(total))).min().ok_or(Error::EmptyDegree(p))
}

pub fn asymptotic_order(series: &GradedSeries, v: &MonomialValuation, p_max: u32) -> Result<AsymptoticOrder> {
    v.check(series)?;
    let e = series.exponent(p_max)?;
    let mut per_p = ConvergenceTable::new("asymptotic_order", &["p"]);
    let mut infimum: Option<Rational> = None;
    for p in (e..=p_max).step_by(e as usize) {
        if !series.is_nonempty(p)? {
            continue;
        }
        let r = rational::ratio(base_order(series, v, p)?, p as i64);
        if infimum.as_ref().is_none_or(|i| r < *i) {
            infimum = Some(r.clone());
        }
        per_p.push(vec![p as i64], r);
    }
    Ok(AsymptoticOrder { per_p, infimum: infimum.ok_or(Error::NoSections(p_max))? })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationChecks {
    pub infimum: Rational,
    pub witness: ExpVec,
    /// When `v(||D||) = 0`: `v(b_p) <= v(witness)` for every tested `p`.
    pub v_bounded_ok: bool,
    /// `sup_p v(J_p)/p`.
    pub sup_ratio: Rational,
    /// `v(witness) / p_max`.
    pub slack: Rational,
    pub sup_ratio_ok: bool,
}

pub fn valuation_checks(series: &GradedSeries, v: &MonomialValuation, p_max: u32) -> Result<ValuationChecks> {
    v.check(series)?;
    let star = check_star(series, p_max)?;
    let witness =
        star.witness.ok_or_else(|| Error::Refused(format!("{} has no (★) witness up to degree {p_max}", series.name())))?;
    let order = asymptotic_order(series, v, p_max)?;
    let bound = v.value(&witness);
    let mut v_bounded_ok = true;
    let mut sup_ratio: Option<Rational> = None;
    for (p, _) in &star.per_p_shifts {
        if order.infimum.is_zero() && base_order(series, v, *p)? > bound {
            v_bounded_ok = false;
        }
        let j = asymptotic_multiplier_ideal(series, *p, DEFAULT_K_CAP)?.ideal;
        let r = rational::ratio(v.of_ideal(&j).expect("nonzero multiplier ideal"), *p as i64);
        if sup_ratio.as_ref().is_none_or(|s| r > *s) {
            sup_ratio = Some(r);
        }
    }
    let sup_ratio = sup_ratio.expect("witness implies a tested degree");
    let slack = rational::ratio(bound, p_max as i64);
    let sup_ratio_ok = (&sup_ratio - &order.infimum).abs() <= slack;
    Ok(ValuationChecks { infimum: order.infimum, witness, v_bounded_ok, sup_ratio, slack, sup_ratio_ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subadditivity {
    Holds,
    Fails,
    /// One of the two ideals did not stabilize within the cap.
    Inconclusive,
}

/// `J(||kp D||) ⊆ J(||pD||)^k` as ideal sheaves.
pub fn subadditivity_check(series: &GradedSeries, p: u32, k: u32, k_cap: u32) -> Result<Subadditivity> {
    let big = asymptotic_multiplier_ideal(series, k * p, k_cap)?;
    let small = asymptotic_multiplier_ideal(series, p, k_cap)?;
    if big.stabilized_at.is_none() || small.stabilized_at.is_none() {
        return Ok(Subadditivity::Inconclusive);
    }
    Ok(if big.ideal.sheaf_subset(&small.ideal.power(k)) { Subadditivity::Holds } else { Subadditivity::Fails })
}

/// `b_p` for the tested degrees, handy for tables and pictures.
pub fn base_ideals(series: &GradedSeries, p_max: u32) -> Result<Vec<(u32, MonomialIdeal)>> {
    (1..=p_max)
        .filter_map(|p| match series.is_nonempty(p) {
            Ok(true) => Some(base_ideal(series, p).map(|b| (p, b))),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}
