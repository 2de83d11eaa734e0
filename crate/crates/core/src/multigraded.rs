//! Global cones of multi-graded series, their fibers and the uniform Fujita check.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{cone_from_generators, PolyCone, Polytope};
use crate::okounkov::{self, LATTICE_WINDOW};
use crate::rational::{self, Certification, Rational};
use crate::series::{Flag, MultiGradedSeries};

/// The cone `Σ(W)` in `R^d x R^r`, built from the indices in `[0, truncation]^r`.
#[derive(Debug, Clone)]
pub struct GlobalBody {
    pub cone: PolyCone,
    pub support: PolyCone,
    pub truncation: u32,
    /// Built from exact factor bodies rather than truncated data.
    pub exact: bool,
    pub dim: usize,
    pub arity: usize,
}

fn nonzero_indices(multi: &MultiGradedSeries, indices: impl IntoIterator<Item = Vec<u32>>) -> Result<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    for m in indices {
        if m.iter().any(|&x| x > 0) && multi.is_nonempty(&m)? {
            out.push(m);
        }
    }
    Ok(out)
}

fn grid(r: usize, box_size: u32) -> Vec<Vec<u32>> {
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

/// Closed cone spanned by the nonzero indices in the box with `W_m != 0`.
pub fn support_cone(multi: &MultiGradedSeries, truncation: u32) -> Result<PolyCone> {
    let gens = nonzero_indices(multi, grid(multi.arity(), truncation))?;
    if gens.is_empty() {
        return Err(Error::GfPrime("(i) the support is {0}".into()));
    }
    let gens: Vec<Vec<i64>> = gens.iter().map(|m| m.iter().map(|&x| x as i64).collect()).collect();
    cone_from_generators(&gens)
}

/// Cone over `(nu(s), m)` for hull candidates `s` of `W_m`, `m` in `indices`.
fn cone_over(multi: &MultiGradedSeries, flag: &Flag, indices: &[Vec<u32>]) -> Result<PolyCone> {
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for m in indices {
        let total = multi.bound_at(m) as i64;
        for a in multi.hull_candidates(m)? {
            let nu = flag.valuation(&a, total)?;
            let mut g: Vec<BigInt> = nu.iter().map(BigInt::from).collect();
            g.extend(m.iter().map(|&x| BigInt::from(x)));
            gens.push(g);
        }
    }
    if gens.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(PolyCone::from_big(gens, multi.dim() + multi.arity()))
}

/// Exact cone for unrestricted products of exact factors: `(A Δ_i + c_i, e_i)`.
fn exact_cone(multi: &MultiGradedSeries, flag: &Flag) -> Option<PolyCone> {
    let factors = multi.factors()?;
    let r = multi.arity();
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let body = f.exact_body()?;
        let (a, c) = flag.affine_map(f.bound() as i64);
        for v in body.vertices() {
            let mut y: Vec<Rational> =
                a.iter().zip(&c).map(|(row, ci)| row.iter().zip(v).map(|(x, z)| x * z).sum::<Rational>() + ci).collect();
            y.extend((0..r).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
            let l = rational::lcm_of_denominators(y.iter());
            let lq = Rational::from_integer(l);
            gens.push(y.iter().map(|q| (q * &lq).to_integer()).collect());
        }
    }
    Some(PolyCone::from_big(gens, multi.dim() + r))
}

/// Checks (GF') on the box and builds the global cone.
///
/// Clause (ii) is tested on the interior indices of `[1, 2]^r` for `k` in a window,
/// clause (iii) on the sum of the support generators.
pub fn global_body(multi: &MultiGradedSeries, flag: &Flag, truncation: u32) -> Result<GlobalBody> {
    if flag.dim() != multi.dim() {
        return Err(Error::DimensionMismatch { expected: multi.dim(), found: flag.dim() });
    }
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let support = support_cone(multi, truncation)?;
    if !support.is_full_dimensional() {
        return Err(Error::GfPrime("(i) the support cone has empty interior".into()));
    }
    let r = multi.arity();
    let as_q = |m: &[u32]| m.iter().map(|&x| rational::int(x as i64)).collect::<Vec<_>>();
    for a in grid(r, 2) {
        if !support.contains_interior(&as_q(&a)) {
            continue;
        }
        let window = LATTICE_WINDOW / 2..=LATTICE_WINDOW;
        for k in window {
            let ka: Vec<u32> = a.iter().map(|x| x * k).collect();
            if !multi.is_nonempty(&ka)? {
                return Err(Error::GfPrime(format!("(ii) W at {ka:?} is zero for interior {a:?}")));
            }
        }
    }
    let a0: Vec<u32> = support
        .rays()
        .iter()
        .fold(vec![0u32; r], |acc, ray| acc.iter().zip(ray).map(|(x, y)| x + y.to_u32().expect("small ray")).collect());
    let induced = multi.induced(&a0)?;
    match induced.gf_report(LATTICE_WINDOW) {
        Ok(rep) if rep.is_gf => {}
        Ok(_) | Err(Error::NoSections(_)) => {
            return Err(Error::GfPrime(format!("(iii) the series induced by {a0:?} fails (GF)")));
        }
        Err(e) => return Err(e),
    }
    let unrestricted = support.halfspaces().len() == r && support.equations().is_empty() && support.rays().len() == r;
    let (cone, exact) = match exact_cone(multi, flag).filter(|_| unrestricted) {
        Some(c) => (c, true),
        None => {
            let idx = nonzero_indices(multi, grid(r, truncation))?;
            (cone_over(multi, flag, &idx)?, false)
        }
    };
    Ok(GlobalBody { cone, support, truncation, exact, dim: multi.dim(), arity: r })
}

impl GlobalBody {
    fn check_interior(&self, a: &[Rational]) -> Result<()> {
        if a.len() != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: a.len() });
        }
        if !self.support.contains_interior(a) {
            let shown: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            return Err(Error::OutOfSupport(format!("({})", shown.join(", "))));
        }
        Ok(())
    }
}

/// `{x : (x, a) in Σ}` for `a` interior to the support.
pub fn fiber_body(gb: &GlobalBody, a: &[Rational]) -> Result<Polytope> {
    gb.check_interior(a)?;
    gb.cone.fiber(a)
}

/// The fiber at an integral index next to the body computed from `W_{a,.}` alone.
#[derive(Debug, Clone)]
pub struct FiberComparison {
    pub fiber: Polytope,
    pub direct: Polytope,
    pub equal: bool,
    pub fiber_contains_direct: bool,
    /// `a` is interior to the support; otherwise the fiber is that of the closed cone.
    pub interior: bool,
}

///
/// Nonzero boundary points of the support are accepted: the closed cone still has a fiber
/// there, and the comparison records that the point is not interior.
pub fn compare_fiber(gb: &GlobalBody, multi: &MultiGradedSeries, flag: &Flag, a: &[u32], m_max: u32) -> Result<FiberComparison> {
    let aq: Vec<Rational> = a.iter().map(|&x| rational::int(x as i64)).collect();
    let interior = gb.check_interior(&aq).is_ok();
    if !interior && (a.iter().all(|&x| x == 0) || !gb.support.contains(&aq)) {
        gb.check_interior(&aq)?;
    }
    let fiber = gb.cone.fiber(&aq)?;
    let direct = okounkov::okounkov_body(&multi.induced(a)?, flag, m_max)?.body;
    Ok(FiberComparison {
        equal: fiber == direct,
        fiber_contains_direct: fiber.contains_polytope(&direct),
        fiber,
        direct,
        interior,
    })
}

#[derive(Debug, Clone)]
pub struct FiberPoint {
    pub a: Vec<Rational>,
    pub volume: Rational,
    /// `vol(fiber(2a)) = 2^d vol(fiber(a))`.
    pub homogeneous: bool,
}

#[derive(Debug, Clone)]
pub struct MidpointCheck {
    pub left: usize,
    pub right: usize,
    pub midpoint_volume: Rational,
    pub holds: bool,
    pub certification: Certification,
}

#[derive(Debug, Clone)]
pub struct FiberScan {
    pub points: Vec<FiberPoint>,
    /// Midpoint log-concavity for consecutive grid points.
    pub midpoints: Vec<MidpointCheck>,
}

impl FiberScan {
    pub fn all_hold(&self) -> bool {
        self.points.iter().all(|p| p.homogeneous) && self.midpoints.iter().all(|m| m.holds)
    }
}

fn fiber_volume(gb: &GlobalBody, a: &[Rational]) -> Result<Rational> {
    match gb.cone.fiber(a) {
        Ok(p) => Ok(p.volume()),
        Err(Error::EmptyFiber) => Ok(Rational::zero()),
        Err(e) => Err(e),
    }
}

pub fn fiber_volume_scan(gb: &GlobalBody, grid: &[Vec<Rational>]) -> Result<FiberScan> {
    for a in grid {
        gb.check_interior(a)?;
    }
    let d = gb.dim as u32;
    let scale = Rational::from_integer(BigInt::from(2).pow(d));
    let points = grid
        .par_iter()
        .map(|a| {
            let volume = fiber_volume(gb, a)?;
            let doubled: Vec<Rational> = a.iter().map(|x| x * rational::int(2)).collect();
            let homogeneous = fiber_volume(gb, &doubled)? == &volume * &scale;
            Ok(FiberPoint { a: a.clone(), volume, homogeneous })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut midpoints = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let mid: Vec<Rational> = grid[i].iter().zip(&grid[i + 1]).map(|(x, y)| (x + y) / rational::int(2)).collect();
        let midpoint_volume = fiber_volume(gb, &mid)?;
        // vol(mid)^(1/d) >= (vol(a)^(1/d) + vol(b)^(1/d)) / 2, scaled by 2^d
        let c = rational::root_sum_at_most(
            &(&midpoint_volume * &scale),
            &[points[i].volume.clone(), points[i + 1].volume.clone()],
            d.max(1),
        );
        midpoints.push(MidpointCheck { left: i, right: i + 1, midpoint_volume, holds: c.holds, certification: c.certification });
    }
    Ok(FiberScan { points, midpoints })
}

/// One cell of the `(p, a)` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiFujitaCell {
    pub p: u32,
    pub a: Vec<Rational>,
    /// `vol(W^(p)_a) / vol(W_a)`.
    pub ratio: Rational,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiFujita {
    pub epsilon: Rational,
    pub truncation: u32,
    pub p0: Option<u32>,
    /// Smallest passing `p` for each grid point separately.
    pub pointwise_p0: Vec<Option<u32>>,
    pub table: Vec<MultiFujitaCell>,
}

/// Smallest `p <= p_cap` with `1 - vol(W^(p)_a)/vol(W_a) < epsilon` at every grid point.
///
/// `vol(W^(p)_a)` is the fiber of the cone over the pieces of total degree `p`; `vol(W_a)`
/// is the fiber of the global cone over all indices with `|m| <= max(truncation, p_cap)`.
pub fn multigraded_fujita_check(
    multi: &MultiGradedSeries,
    flag: &Flag,
    grid_points: &[Vec<Rational>],
    epsilon: &Rational,
    p_cap: u32,
    truncation: u32,
) -> Result<MultiFujita> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if p_cap == 0 {
        return Err(Error::InvalidArgument("p_cap must be at least 1".into()));
    }
    let t = truncation.max(p_cap);
    let gb = global_body(multi, flag, t)?;
    for a in grid_points {
        gb.check_interior(a)?;
    }
    let r = multi.arity();
    let within_t: Vec<Vec<u32>> = grid(r, t).into_iter().filter(|m| m.iter().sum::<u32>() <= t).collect();
    let denom_cone = if gb.exact { gb.cone.clone() } else { cone_over(multi, flag, &nonzero_indices(multi, within_t)?)? };
    let denominators = grid_points
        .iter()
        .map(|a| {
            let v = denom_cone.fiber(a)?.volume();
            if v.is_zero() {
                return Err(Error::Refused(format!(
                    "zero fiber volume at {:?}",
                    a.iter().map(rational::format).collect::<Vec<_>>()
                )));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let one = Rational::one();
    let table: Vec<MultiFujitaCell> = (1..=p_cap)
        .into_par_iter()
        .map(|p| {
            let pieces: Vec<Vec<u32>> = grid(r, p).into_iter().filter(|m| m.iter().sum::<u32>() == p).collect();
            let pieces = nonzero_indices(multi, pieces)?;
            let cone = if pieces.is_empty() { None } else { Some(cone_over(multi, flag, &pieces)?) };
            grid_points
                .iter()
                .zip(&denominators)
                .map(|(a, den)| {
                    let num = match &cone {
                        Some(c) => match c.fiber(a) {
                            Ok(b) => b.volume(),
                            Err(Error::EmptyFiber) => Rational::zero(),
                            Err(e) => return Err(e),
                        },
                        None => Rational::zero(),
                    };
                    let ratio = num / den;
                    let passes = &one - &ratio < *epsilon;
                    Ok(MultiFujitaCell { p, a: a.clone(), ratio, passes })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let n = grid_points.len();
    let p0 = (1..=p_cap).find(|&p| table.iter().filter(|c| c.p == p).all(|c| c.passes));
    let pointwise_p0 = (0..n).map(|i| (1..=p_cap).find(|&p| table[(p as usize - 1) * n + i].passes)).collect();
    Ok(MultiFujita { epsilon: epsilon.clone(), truncation: t, p0, pointwise_p0, table })
}

/// Rational points `a_1 + ... + a_r = 1`, `a_i >= lower`, with denominator `steps`.
pub fn simplex_grid(r: usize, lower: &Rational, steps: u32) -> Vec<Vec<Rational>> {
    grid(r, steps)
        .into_iter()
        .filter(|m| m.iter().sum::<u32>() == steps)
        .map(|m| m.iter().map(|&x| rational::ratio(x as i64, steps as i64)).collect::<Vec<_>>())
        .filter(|a| a.iter().all(|x| x >= lower))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::series::{GradedSeries, Rule};

    fn linear_family() -> MultiGradedSeries {
        MultiGradedSeries::product(vec![GradedSeries::projective(1, 1).unwrap(), GradedSeries::projective(1, 2).unwrap()], vec![])
            .unwrap()
    }

    fn q(a: &[i64]) -> Vec<Rational> {
        a.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn linear_family_fibers() {
        let w = linear_family();
        let gb = global_body(&w, &Flag::identity(1), 4).unwrap();
        assert!(gb.exact);
        let ends = |p: Polytope| p.vertices().to_vec();
        assert_eq!(ends(fiber_body(&gb, &q(&[1, 1])).unwrap()), vec![q(&[0]), q(&[3])]);
        assert_eq!(fiber_body(&gb, &q(&[0, 1])).unwrap_err(), Error::OutOfSupport("(0, 1)".into()));
        let scan = fiber_volume_scan(&gb, &[q(&[1, 1]), q(&[1, 2]), q(&[2, 2])]).unwrap();
        let vols: Vec<Rational> = scan.points.iter().map(|p| p.volume.clone()).collect();
        assert_eq!(vols, q(&[3, 5, 6]));
        assert!(scan.all_hold());
    }

    #[test]
    fn truncated_cone_matches_exact() {
        let w = MultiGradedSeries::product(
            vec![GradedSeries::projective(1, 1).unwrap(), GradedSeries::projective(1, 2).unwrap()],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        let gb = global_body(&w, &Flag::identity(1), 3).unwrap();
        let exact = global_body(&linear_family(), &Flag::identity(1), 3).unwrap();
        for a in [[1, 1], [2, 1], [1, 3]] {
            assert_eq!(fiber_body(&gb, &q(&a)).unwrap(), fiber_body(&exact, &q(&a)).unwrap());
        }
    }

    #[test]
    fn one_ray_support_is_rejected() {
        let w = MultiGradedSeries::product(
            vec![GradedSeries::projective(1, 1).unwrap(), GradedSeries::projective(1, 1).unwrap()],
            vec![vec![1, -1], vec![-1, 1]],
        )
        .unwrap();
        assert!(matches!(global_body(&w, &Flag::identity(1), 3), Err(Error::GfPrime(_))));
    }

    #[test]
    fn uniform_p0_on_the_pair() {
        let w = MultiGradedSeries::product(
            vec![
                GradedSeries::projective(2, 1).unwrap(),
                GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 }).unwrap(),
            ],
            vec![],
        )
        .unwrap();
        let k = simplex_grid(2, &ratio(1, 4), 4);
        assert_eq!(k.len(), 3);
        let r = multigraded_fujita_check(&w, &Flag::identity(2), &k, &ratio(1, 10), 14, 14).unwrap();
        let p0 = r.p0.expect("uniform p0");
        assert!(p0 <= 14);
        assert!(r.pointwise_p0.iter().all(|p| p.unwrap() <= p0));
        assert!(r.table.iter().all(|c| c.ratio <= int(1) && c.ratio.is_positive()));
    }

    #[test]
    fn linear_family_is_projectively_normal() {
        let k = simplex_grid(2, &ratio(1, 4), 4);
        let r = multigraded_fujita_check(&linear_family(), &Flag::identity(1), &k, &ratio(1, 10), 3, 3).unwrap();
        assert_eq!(r.p0, Some(1));
    }
}
