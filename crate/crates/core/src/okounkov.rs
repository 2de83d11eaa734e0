//! Okounkov bodies, volume estimators and the volume identities they satisfy.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{LatticeBuilder, LatticeSummary, Polytope};
use crate::rational::{self, Certification, Rational};
use crate::report::ConvergenceTable;
use crate::series::{Flag, GradedSeries};

/// Degrees scanned for lattice data (difference lattices and the group of `Gamma`).
pub const LATTICE_WINDOW: u32 = 12;

#[derive(Debug, Clone)]
pub struct OkounkovBody {
    pub body: Polytope,
    /// The body is `Delta` itself rather than an inner approximation.
    pub exact: bool,
    pub m_used: u32,
    /// Group generated by `(m, nu)` for `m` in the lattice window, degree coordinate first.
    pub lattice: LatticeSummary,
}

#[derive(Debug, Clone)]
pub struct VolumeReport {
    /// `d! #Gamma_m / m^d`.
    pub count_estimates: ConvergenceTable,
    /// `d! vol(conv Gamma_m) / m^d`.
    pub hull_estimates: ConvergenceTable,
    /// `d! vol(Delta) / delta_lat` when `Delta` is known exactly.
    pub normalized_target: Option<Rational>,
    /// Index of `{v : (v, 0) in group(Gamma)}`; `None` when infinite.
    pub delta_lat: Option<BigInt>,
    pub exponent: u32,
    pub body: OkounkovBody,
}

/// Estimator rows: multiples of `e` up to `m_max`, spaced roughly geometrically, always
/// ending at the largest multiple.
pub fn schedule(e: u32, m_max: u32) -> Vec<u32> {
    let top = m_max / e.max(1);
    if top == 0 {
        return Vec::new();
    }
    const MANTISSAS: [u32; 7] = [1, 2, 3, 4, 5, 6, 8];
    let mut ks: Vec<u32> = Vec::new();
    let mut scale = 1u32;
    while scale <= top {
        ks.extend(MANTISSAS.iter().map(|s| s * scale).filter(|&k| k <= top));
        scale *= 10;
    }
    ks.push(top);
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter().map(|k| k * e.max(1)).collect()
}

fn factorial(d: usize) -> Rational {
    Rational::from_integer(rational::factorial(d))
}

fn power(m: u32, d: usize) -> Rational {
    Rational::from_integer(BigInt::from(m).pow(d as u32))
}

/// `Delta` mapped through the flag, when the series knows it exactly.
pub fn exact_body(series: &GradedSeries, flag: &Flag) -> Result<Option<Polytope>> {
    series.check_flag(flag)?;
    let Some(body) = series.exact_body() else { return Ok(None) };
    if flag.is_identity() || series.dim() == 0 {
        return Ok(Some(body));
    }
    let (a, c) = flag.affine_map(series.bound() as i64);
    let image = body.map_affine(&a, &c)?;
    if image.vertices().iter().flatten().any(|q| q < &Rational::zero()) {
        return Err(Error::InvalidFlag("flag maps the body outside the nonnegative orthant".into()));
    }
    Ok(Some(image))
}

/// `conv Gamma_m` as a polytope at scale `m` (not divided by `m`); `None` if `S_m` is empty.
pub fn degree_hull(series: &GradedSeries, flag: &Flag, m: u32) -> Result<Option<Polytope>> {
    let cands = series.hull_candidates(m)?;
    if cands.is_empty() {
        return Ok(None);
    }
    let total = m as i64 * series.bound() as i64;
    let nus = cands.iter().map(|a| flag.valuation(a, total)).collect::<Result<Vec<_>>>()?;
    Polytope::hull_scaled_lattice(nus.iter().map(|p| (p, 1)), series.dim()).map(Some)
}

/// Group generated by `(m, nu(a))`, `a in S_m`, `1 <= m <= window`.
pub fn gamma_lattice(series: &GradedSeries, flag: &Flag, window: u32) -> Result<LatticeSummary> {
    series.check_flag(flag)?;
    let d = series.dim();
    let mut lb = LatticeBuilder::new(d + 1);
    for m in 1..=window {
        if lb.is_everything() {
            break;
        }
        if !series.is_nonempty(m)? {
            continue;
        }
        let total = m as i64 * series.bound() as i64;
        for a in series.degree(m)?.iter() {
            if lb.is_everything() {
                break;
            }
            let nu = flag.valuation(a, total)?;
            let mut v = vec![m as i64];
            v.extend(nu.iter());
            lb.insert_i64(&v);
        }
    }
    Ok(lb.finish())
}

/// Index of the degree-zero slice `{v : (0, v) in L}` of a lattice with the degree first.
pub fn degree_zero_index(lattice: &LatticeSummary) -> Option<BigInt> {
    let d = lattice.dim.checked_sub(1)?;
    let slice: Vec<&Vec<BigInt>> = lattice.basis.iter().filter(|r| r[0].is_zero()).collect();
    if slice.len() != d {
        return None;
    }
    Some(slice.iter().fold(BigInt::one(), |acc, r| {
        let pivot = r.iter().find(|x| !x.is_zero()).expect("basis rows are nonzero");
        acc * pivot
    }))
}

/// `conv(U_{m <= m_max} Gamma_m / m)`, or `Delta` itself in exact modes.
pub fn okounkov_body(series: &GradedSeries, flag: &Flag, m_max: u32) -> Result<OkounkovBody> {
    let lattice = gamma_lattice(series, flag, m_max.min(LATTICE_WINDOW))?;
    if let Some(body) = exact_body(series, flag)? {
        return Ok(OkounkovBody { body, exact: true, m_used: m_max, lattice });
    }
    let mut bodies = inner_bodies(series, flag, m_max, &[m_max])?;
    let (_, body) = bodies.pop().ok_or(Error::NoSections(m_max))?;
    Ok(OkounkovBody { body, exact: false, m_used: m_max, lattice })
}

/// Incremental inner bodies `conv(U_{j <= m} Gamma_j / j)`, recorded at each `m` in `marks`.
pub fn inner_bodies(series: &GradedSeries, flag: &Flag, m_max: u32, marks: &[u32]) -> Result<Vec<(u32, Polytope)>> {
    series.check_flag(flag)?;
    let mut current: Option<Polytope> = None;
    let mut out = Vec::new();
    for m in 1..=m_max {
        if series.is_nonempty(m)? {
            let total = m as i64 * series.bound() as i64;
            let mq = rational::int(m as i64);
            let mut fresh: Vec<Vec<Rational>> = Vec::new();
            for a in series.hull_candidates(m)? {
                let nu = flag.valuation(&a, total)?;
                let x: Vec<Rational> = nu.iter().map(|v| rational::int(v) / &mq).collect();
                if current.as_ref().is_none_or(|p| !p.contains(&x)) {
                    fresh.push(x);
                }
            }
            if !fresh.is_empty() {
                if let Some(p) = &current {
                    fresh.extend(p.vertices().iter().cloned());
                }
                current = Some(Polytope::hull(&fresh)?);
            }
        }
        if marks.contains(&m) {
            if let Some(p) = &current {
                out.push((m, p.clone()));
            }
        }
    }
    if current.is_none() {
        return Err(Error::NoSections(m_max));
    }
    Ok(out)
}

/// Both estimator tables along the multiples of the exponent.
pub fn volume_report(series: &GradedSeries, flag: &Flag, m_max: u32) -> Result<VolumeReport> {
    series.check_flag(flag)?;
    let d = series.dim();
    let e = series.exponent(m_max)?;
    let rows = schedule(e, m_max);
    let body = okounkov_body(series, flag, m_max)?;
    let delta_lat = degree_zero_index(&body.lattice);
    let full_volume = if body.exact { Some(factorial(d) * body.body.volume()) } else { None };
    let normalized_target = full_volume.as_ref().map(|v| match &delta_lat {
        Some(i) => v / Rational::from_integer(i.clone()),
        None => Rational::zero(),
    });

    let estimates: Vec<(u32, Rational, Rational)> = rows
        .par_iter()
        .map(|&m| -> Result<(u32, Rational, Rational)> {
            let count = series.count(m)?;
            let hull = degree_hull(series, flag, m)?.map(|p| p.volume()).unwrap_or_else(Rational::zero);
            let scale = factorial(d) / power(m, d);
            Ok((m, rational::int(count as i64) * &scale, hull * scale))
        })
        .collect::<Result<_>>()?;

    let mut count_estimates = ConvergenceTable::new("count_estimate", &["m"]).with_target(normalized_target.clone());
    let mut hull_estimates = ConvergenceTable::new("hull_estimate", &["m"]).with_target(full_volume);
    for (m, c, h) in estimates {
        count_estimates.push(vec![m as i64], c);
        hull_estimates.push(vec![m as i64], h);
    }
    Ok(VolumeReport { count_estimates, hull_estimates, normalized_target, delta_lat, exponent: e, body })
}

/// Volume report of the restriction to `{x_j = 0 : j in vanishing}`.
pub fn restricted_volume(ambient: &GradedSeries, vanishing: &[usize], flag: &Flag, m_max: u32) -> Result<VolumeReport> {
    let restricted = ambient.restrict(vanishing)?;
    if restricted.dim() == 0 {
        return Err(Error::ZeroDimensional);
    }
    volume_report(&restricted, flag, m_max)
}

/// `d! vol(conv S_m) / m^d`, the toric asymptotic intersection estimator.
pub fn asymptotic_intersection(series: &GradedSeries, flag: &Flag, m_max: u32) -> Result<ConvergenceTable> {
    let window = m_max.min(LATTICE_WINDOW);
    if !series.gf_report(window)?.is_gf {
        return Err(Error::NotGenericallyFinite(window));
    }
    let d = series.dim();
    let e = series.exponent(m_max)?;
    let target = exact_body(series, flag)?.map(|b| factorial(d) * b.volume());
    let rows: Vec<(u32, Rational)> = schedule(e, m_max)
        .par_iter()
        .map(|&m| -> Result<(u32, Rational)> {
            let v = degree_hull(series, flag, m)?.map(|p| p.volume()).unwrap_or_else(Rational::zero);
            Ok((m, factorial(d) * v / power(m, d)))
        })
        .collect::<Result<_>>()?;
    let mut t = ConvergenceTable::new("asymptotic_intersection", &["m"]).with_target(target);
    for (m, v) in rows {
        t.push(vec![m as i64], v);
    }
    Ok(t)
}

#[derive(Debug, Clone)]
pub struct FujitaIdentity {
    /// Map degree from the difference lattices.
    pub delta: BigInt,
    /// Index of the degree-zero slice of the group of `Gamma`.
    pub delta_lat: BigInt,
    pub delta_agrees: bool,
    /// `d! vol(Delta_{<= m}) / delta_lat`.
    pub vol: ConvergenceTable,
    /// `d! #S_m / m^d`.
    pub count_vol: ConvergenceTable,
    /// `d! vol(conv S_m) / m^d`.
    pub ain: ConvergenceTable,
    /// `|delta vol - ain|` per row.
    pub residuals: ConvergenceTable,
}

impl FujitaIdentity {
    pub fn last_residual(&self) -> Rational {
        self.residuals.last_value().cloned().unwrap_or_else(Rational::zero)
    }
}

/// `delta vol = ain` along the estimator rows.
pub fn check_fujita_identity(series: &GradedSeries, flag: &Flag, m_max: u32) -> Result<FujitaIdentity> {
    let window = m_max.min(LATTICE_WINDOW);
    let gf = series.gf_report(window)?;
    if !gf.is_gf {
        return Err(Error::NotGenericallyFinite(window));
    }
    let d = series.dim();
    let delta = gf.delta.expect("generically finite series has a finite map degree");
    let lattice = gamma_lattice(series, flag, window)?;
    let delta_lat = degree_zero_index(&lattice).ok_or(Error::NotGenericallyFinite(window))?;
    let e = series.exponent(m_max)?;
    let rows = schedule(e, m_max);
    let exact = exact_body(series, flag)?;
    let bodies: Vec<(u32, Polytope)> = match &exact {
        Some(b) => rows.iter().map(|&m| (m, b.clone())).collect(),
        None => inner_bodies(series, flag, m_max, &rows)?,
    };
    let target = exact.as_ref().map(|b| factorial(d) * b.volume());
    let lat = Rational::from_integer(delta_lat.clone());
    let dq = Rational::from_integer(delta.clone());

    let ain_rows: Vec<(u32, Rational, Rational)> = rows
        .par_iter()
        .map(|&m| -> Result<(u32, Rational, Rational)> {
            let v = degree_hull(series, flag, m)?.map(|p| p.volume()).unwrap_or_else(Rational::zero);
            let scale = factorial(d) / power(m, d);
            Ok((m, v * &scale, rational::int(series.count(m)? as i64) * scale))
        })
        .collect::<Result<_>>()?;

    let mut vol = ConvergenceTable::new("vol", &["m"]).with_target(target.as_ref().map(|t| t / &lat));
    let mut count_vol = ConvergenceTable::new("count_vol", &["m"]).with_target(target.as_ref().map(|t| t / &lat));
    let mut ain = ConvergenceTable::new("ain", &["m"]).with_target(target);
    let mut residuals = ConvergenceTable::new("residual", &["m"]).with_target(Some(Rational::zero()));
    for ((m, body), (_, a, c)) in bodies.iter().zip(ain_rows) {
        let v = factorial(d) * body.volume() / &lat;
        residuals.push(vec![*m as i64], (&dq * &v - &a).abs());
        vol.push(vec![*m as i64], v);
        count_vol.push(vec![*m as i64], c);
        ain.push(vec![*m as i64], a);
    }
    Ok(FujitaIdentity { delta_agrees: delta == delta_lat, delta, delta_lat, vol, count_vol, ain, residuals })
}

#[derive(Debug, Clone)]
pub struct Homogeneity {
    pub holds: bool,
    pub exact: bool,
    pub scaled: Polytope,
    pub veronese: Polytope,
}

/// `Delta(W_{h,.}) = h Delta(W_.)`; inexact modes check
/// `h Delta_{<= m} ⊆ Delta^{(h)}_{<= m} ⊆ h Delta_{<= hm}`.
pub fn homogeneity_check(series: &GradedSeries, flag: &Flag, h: u32, m_max: u32) -> Result<Homogeneity> {
    let v = series.veronese(h)?;
    let hq = rational::int(h as i64);
    let base = okounkov_body(series, flag, m_max)?;
    let vb = okounkov_body(&v, flag, m_max)?;
    if base.exact && vb.exact {
        let scaled = base.body.scale(&hq);
        return Ok(Homogeneity { holds: scaled == vb.body, exact: true, scaled, veronese: vb.body });
    }
    let big = okounkov_body(series, flag, h * m_max)?.body.scale(&hq);
    let scaled = base.body.scale(&hq);
    let holds = vb.body.contains_polytope(&scaled) && big.contains_polytope(&vb.body);
    Ok(Homogeneity { holds, exact: false, scaled, veronese: vb.body })
}

/// `d! vol(Delta_{<= m_max}) / delta_lat`, zero when the lattice slice has infinite index.
pub fn volume_estimate(series: &GradedSeries, flag: &Flag, m_max: u32) -> Result<Rational> {
    let b = okounkov_body(series, flag, m_max)?;
    let d = series.dim();
    Ok(match degree_zero_index(&b.lattice) {
        Some(i) => factorial(d) * b.body.volume() / Rational::from_integer(i),
        None => Rational::zero(),
    })
}

#[derive(Debug, Clone)]
pub struct LogConcavity {
    pub lhs: Rational,
    pub parts: [Rational; 2],
    pub holds: bool,
    pub certification: Certification,
}

/// `vol(W1 W2)^(1/d) >= vol(W1)^(1/d) + vol(W2)^(1/d)` on the final estimates.
pub fn log_concavity_check(s1: &GradedSeries, s2: &GradedSeries, flag: &Flag, m_max: u32) -> Result<LogConcavity> {
    let sum = s1.sum(s2)?;
    let d = s1.dim();
    if d == 0 {
        return Err(Error::ZeroDimensional);
    }
    let lhs = volume_estimate(&sum, flag, m_max)?;
    let parts = [volume_estimate(s1, flag, m_max)?, volume_estimate(s2, flag, m_max)?];
    let c = rational::root_sum_at_most(&lhs, &parts, d as u32);
    Ok(LogConcavity { lhs, parts, holds: c.holds, certification: c.certification })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ExpVec;
    use crate::rational::{int, ratio};
    use crate::series::Rule;

    fn squares() -> GradedSeries {
        GradedSeries::generated(1, vec![(ExpVec::of(&[0]), 1), (ExpVec::of(&[2]), 1)]).unwrap()
    }

    fn floor57() -> GradedSeries {
        GradedSeries::rule(2, Rule::FloorRatio { num: 5, den: 7, coord: 0, bound: 1 }).unwrap()
    }

    #[test]
    fn schedules() {
        assert_eq!(schedule(1, 7), vec![1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(schedule(2, 9), vec![2, 4, 6, 8]);
        let s = schedule(1, 200);
        assert_eq!((s[0], *s.last().unwrap()), (1, 200));
        assert!(s.windows(2).all(|w| w[0] < w[1]) && s.len() < 30);
    }

    #[test]
    fn squares_body_and_lattice() {
        let b = okounkov_body(&squares(), &Flag::identity(1), 10).unwrap();
        assert!(b.exact);
        assert_eq!(b.body.vertices(), &[vec![int(0)], vec![int(2)]][..]);
        assert_eq!(degree_zero_index(&b.lattice), Some(BigInt::from(2)));
    }

    #[test]
    fn floor57_body_reaches_polygon() {
        let b = okounkov_body(&floor57(), &Flag::identity(2), 14).unwrap();
        assert!(!b.exact);
        assert_eq!(b.body.volume(), ratio(45, 98));
        assert_eq!(degree_zero_index(&b.lattice), Some(BigInt::from(1)));
    }

    #[test]
    fn squares_identity_is_exact() {
        let r = check_fujita_identity(&squares(), &Flag::identity(1), 30).unwrap();
        assert_eq!((r.delta.clone(), r.delta_lat.clone()), (BigInt::from(2), BigInt::from(2)));
        assert!(r.residuals.rows.iter().all(|row| row.value.is_zero()));
        assert!(r.vol.rows.iter().all(|row| row.value == int(1)));
        assert!(r.ain.rows.iter().all(|row| row.value == int(2)));
    }

    #[test]
    fn homogeneity_on_rule_series() {
        for h in 1..=3 {
            assert!(homogeneity_check(&floor57(), &Flag::identity(2), h, 10).unwrap().holds);
        }
    }

    #[test]
    fn trivial_series_has_zero_target() {
        let r = volume_report(&GradedSeries::trivial(2), &Flag::identity(2), 20).unwrap();
        assert_eq!(r.normalized_target, Some(int(0)));
        assert_eq!(r.delta_lat, None);
        assert!(r.hull_estimates.rows.iter().all(|row| row.value.is_zero()));
    }

    #[test]
    fn log_concavity_equality_case() {
        let o1 = GradedSeries::projective(2, 1).unwrap();
        let o2 = GradedSeries::projective(2, 2).unwrap();
        let c = log_concavity_check(&o1, &o2, &Flag::identity(2), 4).unwrap();
        assert_eq!((c.lhs.clone(), c.parts.clone()), (int(9), [int(1), int(4)]));
        assert!(c.holds);
    }
}
