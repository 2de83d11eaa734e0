use super::asymptotic::{asymptotic_multiplier_ideal, DEFAULT_K_CAP};
use super::{base_ideal, MonomialIdeal};
use crate::error::{Error, Result};
use crate::fujita;
use crate::geometry::ExpVec;
use crate::series::GradedSeries;

/// Default number of powers compared by [`is_finitely_generated`].
pub const DEFAULT_M_CHECK: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarWitnessReport {
    /// Shift `n_p` with `J_p(-n_p) ⊆ b_p` for each tested `p` with sections.
    pub per_p_shifts: Vec<(u32, ExpVec)>,
    /// The running maximum of the shifts stopped growing in the first half of the range.
    pub stabilized: bool,
    /// Componentwise maximum of the shifts, rechecked against every tested `p`.
    pub witness: Option<ExpVec>,
    pub p_range: u32,
    /// `b_p ⊆ J_p` held for every tested `p`.
    pub base_in_multiplier: bool,
}

/// Per generator of `j` and per chart, the cheapest shift into `b`; returns their maximum.
fn shift_into(j: &MonomialIdeal, b: &MonomialIdeal) -> Option<ExpVec> {
    let n = j.nvars();
    let mut shift = vec![0i64; n];
    for g in j.generators() {
        for chart in 0..n {
            let best = b
                .generators()
                .iter()
                .map(|h| {
                    let need: Vec<i64> = (0..n).map(|i| if i == chart { 0 } else { (h.get(i) - g.get(i)).max(0) }).collect();
                    (need.iter().sum::<i64>(), need)
                })
                .min()?;
            for (s, x) in shift.iter_mut().zip(best.1) {
                *s = (*s).max(x);
            }
        }
    }
    Some(ExpVec::of(&shift))
}

/// Searches for one twist `N` with `J(||pD||)(-N) ⊆ b(|pD|)` for all `p <= p_max` with sections.
pub fn check_star(series: &GradedSeries, p_max: u32) -> Result<StarWitnessReport> {
    check_star_with(series, p_max, DEFAULT_K_CAP)
}

pub fn check_star_with(series: &GradedSeries, p_max: u32, k_cap: u32) -> Result<StarWitnessReport> {
    if p_max == 0 {
        return Err(Error::InvalidArgument("p_max must be at least 1".into()));
    }
    let mut per_p = Vec::new();
    let mut pairs = Vec::new();
    let mut base_in_multiplier = true;
    for p in 1..=p_max {
        if !series.is_nonempty(p)? {
            continue;
        }
        let b = base_ideal(series, p)?;
        let j = asymptotic_multiplier_ideal(series, p, k_cap)?.ideal;
        base_in_multiplier &= b.sheaf_subset(&j);
        let shift = shift_into(&j, &b).expect("nonzero base ideal");
        per_p.push((p, shift));
        pairs.push((j, b));
    }
    if per_p.is_empty() {
        return Err(Error::NoSections(p_max));
    }
    let n = series.dim() + 1;
    let max_over = |items: &[(u32, ExpVec)]| {
        let v: Vec<i64> = (0..n).map(|i| items.iter().map(|(_, s)| s.get(i)).max().unwrap_or(0)).collect();
        ExpVec::of(&v)
    };
    let witness = max_over(&per_p);
    let verified = pairs.iter().all(|(j, b)| j.translate(&witness).sheaf_subset(b));
    let half: Vec<(u32, ExpVec)> = per_p.iter().filter(|(p, _)| *p <= p_max.div_ceil(2)).cloned().collect();
    let stabilized = verified && !half.is_empty() && max_over(&half) == witness;
    Ok(StarWitnessReport {
        per_p_shifts: per_p,
        stabilized,
        witness: verified.then_some(witness),
        p_range: p_max,
        base_in_multiplier,
    })
}

/// Smallest `p0 <= p_max` with `b(|m p0 D|) = b(|p0 D|)^m` for all `m <= m_check`.
pub fn is_finitely_generated(series: &GradedSeries, p_max: u32, m_check: u32) -> Result<Option<u32>> {
    'p: for p in 1..=p_max {
        if !series.is_nonempty(p)? {
            continue;
        }
        for m in 2..=m_check {
            // T_{m,p} ⊆ S_{mp} is asserted inside, so equal sizes mean equal ideals
            if fujita::tkp(series, m, p)?.len() != series.count(m * p)? {
                continue 'p;
            }
        }
        return Ok(Some(p));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSum {
    pub witnesses: [ExpVec; 2],
    pub sum_witness: ExpVec,
    /// `sum_witness <= witnesses[0] + witnesses[1]` componentwise.
    pub holds: bool,
}

/// (★) for the sum of two series with witnesses.
pub fn star_sum_check(s1: &GradedSeries, s2: &GradedSeries, p_max: u32) -> Result<StarSum> {
    let w1 = check_star(s1, p_max)?.witness.ok_or_else(|| Error::Refused(format!("{} has no (★) witness", s1.name())))?;
    let w2 = check_star(s2, p_max)?.witness.ok_or_else(|| Error::Refused(format!("{} has no (★) witness", s2.name())))?;
    let sum = s1.sum(s2)?;
    let ws = check_star(&sum, p_max)?.witness.ok_or_else(|| Error::Refused("the sum has no (★) witness".into()))?;
    let bound = w1.add(&w2);
    Ok(StarSum { holds: ws.divides(&bound), witnesses: [w1, w2], sum_witness: ws })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::tests::squares;
    use crate::series::Rule;

    fn staggered() -> GradedSeries {
        GradedSeries::generated(1, vec![(ExpVec::of(&[0]), 1), (ExpVec::of(&[3]), 2)]).unwrap()
    }

    #[test]
    fn generated_series_have_stable_witnesses() {
        for s in [squares(), staggered()] {
            let r = check_star(&s, 12).unwrap();
            assert!(r.stabilized, "{s:?}: {r:?}");
            assert!(r.base_in_multiplier);
        }
        assert_eq!(check_star(&squares(), 12).unwrap().witness, Some(ExpVec::zero(2)));
    }

    #[test]
    fn complete_series_need_no_twist() {
        let r = check_star(&GradedSeries::projective(2, 1).unwrap(), 6).unwrap();
        assert_eq!(r.witness, Some(ExpVec::zero(3)));
    }

    #[test]
    fn finite_generation_degrees() {
        assert_eq!(is_finitely_generated(&GradedSeries::projective(2, 1).unwrap(), 5, 4).unwrap(), Some(1));
        assert_eq!(is_finitely_generated(&staggered(), 5, 6).unwrap(), Some(2));
        let f = GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 }).unwrap();
        assert_eq!(is_finitely_generated(&f, 10, DEFAULT_M_CHECK).unwrap(), Some(7));
    }

    #[test]
    fn sums_of_witnessed_series() {
        let r = star_sum_check(&squares(), &staggered(), 8).unwrap();
        assert!(r.holds, "{r:?}");
    }
}
