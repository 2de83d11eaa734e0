//! Monomial ideals in the homogeneous coordinates of projective space.
//!
//! An ideal is kept by its minimal generators in `N^{d+1}`. Questions about the ideal
//! sheaf on `P^d` (unit, containment) are answered chart by chart: on the chart
//! `x_i != 0` the coordinate `i` is ignored.

mod asymptotic;
mod howald;
mod star;

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::ExpVec;
use crate::series::GradedSeries;

pub use asymptotic::{
    asymptotic_multiplier_ideal, asymptotic_order, base_ideals, mu_equals_ain_check, reduced_volume, subadditivity_check,
    valuation_checks, AsymptoticIdeal, AsymptoticOrder, MonomialValuation, MuCheck, Subadditivity, ValuationChecks,
    DEFAULT_K_CAP,
};
pub use howald::{integral_closure, multiplier_ideal, NewtonPolyhedron};
pub use star::{check_star, check_star_with, is_finitely_generated, star_sum_check, StarWitnessReport, DEFAULT_M_CHECK};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<ExpVec>,
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialIdeal{self}")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self.gens.iter().map(monomial_name).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn monomial_name(g: &ExpVec) -> String {
    let parts: Vec<String> = g
        .iter()
        .enumerate()
        .filter(|(_, e)| *e > 0)
        .map(|(i, e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Minimal elements under divisibility, sorted by degree then lexicographically.
fn minimalize(mut gens: Vec<ExpVec>) -> Vec<ExpVec> {
    gens.sort_unstable_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut kept: Vec<ExpVec> = Vec::with_capacity(gens.len());
    let mut lower = 0;
    for (i, g) in gens.iter().enumerate() {
        // candidates of strictly smaller degree end at `lower`
        if i > 0 && gens[i - 1].total() < g.total() {
            lower = kept.len();
        }
        if !kept[..lower].iter().any(|h| h.divides(g)) {
            kept.push(*g);
        }
    }
    kept
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: Vec<ExpVec>) -> Result<MonomialIdeal> {
        if let Some(g) = gens.iter().find(|g| g.dim() != nvars) {
            return Err(Error::DimensionMismatch { expected: nvars, found: g.dim() });
        }
        if let Some(g) = gens.iter().find(|g| g.iter().any(|x| x < 0)) {
            return Err(Error::NegativeEntry(g.to_vec()));
        }
        Ok(MonomialIdeal { nvars, gens: minimalize(gens) })
    }

    pub fn zero(nvars: usize) -> MonomialIdeal {
        MonomialIdeal { nvars, gens: Vec::new() }
    }

    pub fn unit(nvars: usize) -> MonomialIdeal {
        MonomialIdeal { nvars, gens: vec![ExpVec::zero(nvars)] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[ExpVec] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.first().is_some_and(|g| g.total() == 0)
    }

    pub fn contains(&self, v: &ExpVec) -> bool {
        self.gens.iter().any(|g| g.divides(v))
    }

    /// `self ⊆ other` as ideals of the polynomial ring.
    pub fn is_subset(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        MonomialIdeal { nvars: self.nvars, gens: minimalize(gens) }
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let gens = self.gens.iter().flat_map(|a| other.gens.iter().map(move |b| a.add(b))).collect();
        MonomialIdeal { nvars: self.nvars, gens: minimalize(gens) }
    }

    pub fn power(&self, k: u32) -> MonomialIdeal {
        (0..k).fold(MonomialIdeal::unit(self.nvars), |acc, _| acc.product(self))
    }

    /// `x^n * self`, the twist by the divisor with exponent `n`.
    pub fn translate(&self, n: &ExpVec) -> MonomialIdeal {
        MonomialIdeal { nvars: self.nvars, gens: self.gens.iter().map(|g| g.add(n)).collect() }
    }

    /// The ideal on the chart `x_i != 0`, in the remaining variables.
    pub fn chart(&self, i: usize) -> MonomialIdeal {
        MonomialIdeal { nvars: self.nvars - 1, gens: minimalize(self.gens.iter().map(|g| g.project_out(&[i])).collect()) }
    }

    /// `x^v` lies in the sheaf on every chart.
    pub fn sheaf_contains_monomial(&self, v: &ExpVec) -> bool {
        (0..self.nvars).all(|i| self.gens.iter().any(|g| g.divides_except(v, i)))
    }

    /// `self ⊆ other` as ideal sheaves on `P^{n-1}`.
    pub fn sheaf_subset(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.sheaf_contains_monomial(g))
    }

    pub fn sheaf_eq(&self, other: &MonomialIdeal) -> bool {
        self.sheaf_subset(other) && other.sheaf_subset(self)
    }

    /// Unit on every chart: every variable has a pure power among the generators.
    pub fn is_unit_sheaf(&self) -> bool {
        (0..self.nvars).all(|i| self.gens.iter().any(|g| (0..self.nvars).all(|j| j == i || g.get(j) == 0)))
    }

    /// Restriction to the coordinate subspace `{x_j = 0, j in vanishing}`: generators
    /// involving a vanishing variable die, the rest lose those coordinates.
    pub fn restrict(&self, vanishing: &[usize]) -> MonomialIdeal {
        let gens =
            self.gens.iter().filter(|g| vanishing.iter().all(|&j| g.get(j) == 0)).map(|g| g.project_out(vanishing)).collect();
        MonomialIdeal { nvars: self.nvars - vanishing.len(), gens: minimalize(gens) }
    }
}

/// `b(|pD|)`: the ideal of the homogenized exponents of `S_p`; zero when `S_p` is empty.
pub fn base_ideal(series: &GradedSeries, p: u32) -> Result<MonomialIdeal> {
    let total = p as i64 * series.bound() as i64;
    let s = series.degree(p)?;
    // equal degrees: every homogenized exponent is a minimal generator
    let mut gens: Vec<ExpVec> = s.iter().map(|a| a.homogenize(total)).collect();
    gens.sort_unstable();
    Ok(MonomialIdeal { nvars: series.dim() + 1, gens })
}

/// Only the generators needed for the Newton polyhedron of `b(|pD|)`.
pub(crate) fn base_ideal_hull(series: &GradedSeries, p: u32) -> Result<Vec<ExpVec>> {
    let total = p as i64 * series.bound() as i64;
    Ok(series.hull_candidates(p)?.iter().map(|a| a.homogenize(total)).collect())
}
