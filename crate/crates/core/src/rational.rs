//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Parses `"a/b"`, `"a"` or `"-a/b"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `num/den`, also for integers, so that every serialized value has one shape.
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Decimal rendering rounded half away from zero to `digits` places. Purely integer
/// arithmetic, so the output is deterministic.
pub fn decimal(q: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = q.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if q.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits as usize)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `q^(1/n)` when it is rational.
pub fn exact_root(q: &Rational, n: u32) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let num = q.numer().nth_root(n);
    let den = q.denom().nth_root(n);
    if num.pow(n) == *q.numer() && den.pow(n) == *q.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

/// Dyadic enclosure `lo <= q^(1/n) <= hi` with `hi - lo = 2^-bits` (or exact).
pub fn root_enclosure(q: &Rational, n: u32, bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "root of a negative rational");
    let two_k = BigInt::one() << bits;
    let scaled = q * Rational::from_integer((BigInt::one() << (bits * n)).clone());
    let floor = scaled.floor().to_integer();
    let r = floor.nth_root(n);
    let lo = Rational::new(r.clone(), two_k.clone());
    let exact = Rational::from_integer(r.pow(n)) == scaled;
    let hi = if exact { lo.clone() } else { Rational::new(r + 1, two_k) };
    (lo, hi)
}

/// How a root comparison was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// Widened floating point bounds decided it.
    Float,
    /// All roots were rational.
    ExactRoots,
    /// Dyadic integer-root enclosures decided it.
    Enclosure,
    /// Nothing decided it within the refinement budget.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootComparison {
    pub holds: bool,
    pub certification: Certification,
}

/// Decides `lhs^(1/n) >= sum_i parts_i^(1/n)`.
///
/// The float stage only ever answers "holds"; a float "fails" falls through to the
/// exact refinement.
pub fn root_sum_at_most(lhs: &Rational, parts: &[Rational], n: u32) -> RootComparison {
    assert!(n >= 1);
    let rel = 1e-12;
    let inv = 1.0 / n as f64;
    let lhs_lo = to_f64(lhs).max(0.0).powf(inv) * (1.0 - rel);
    let rhs_hi: f64 = parts.iter().map(|p| to_f64(p).max(0.0).powf(inv) * (1.0 + rel)).sum::<f64>() * (1.0 + rel);
    if lhs_lo.is_finite() && rhs_hi.is_finite() && lhs_lo >= rhs_hi && lhs_lo > 0.0 {
        return RootComparison { holds: true, certification: Certification::Float };
    }

    let exact: Option<Vec<Rational>> = std::iter::once(lhs).chain(parts).map(|q| exact_root(q, n)).collect();
    if let Some(roots) = exact {
        let rhs: Rational = roots[1..].iter().fold(Rational::zero(), |a, b| a + b);
        return RootComparison { holds: roots[0] >= rhs, certification: Certification::ExactRoots };
    }

    for bits in [64u32, 128, 256, 512] {
        let (l_lo, l_hi) = root_enclosure(lhs, n, bits);
        let (mut r_lo, mut r_hi) = (Rational::zero(), Rational::zero());
        for p in parts {
            let (lo, hi) = root_enclosure(p, n, bits);
            r_lo += lo;
            r_hi += hi;
        }
        if l_lo >= r_hi {
            return RootComparison { holds: true, certification: Certification::Enclosure };
        }
        if l_hi < r_lo {
            return RootComparison { holds: false, certification: Certification::Enclosure };
        }
    }
    RootComparison { holds: false, certification: Certification::Undecided }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("5/7").unwrap(), ratio(5, 7));
        assert_eq!(parse(" -3 ").unwrap(), int(-3));
        assert_eq!(format(&int(2)), "2/1");
        assert_eq!(format(&ratio(-6, 4)), "-3/2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&ratio(45, 49), 6), "0.918367");
        assert_eq!(decimal(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(decimal(&int(4), 2), "4.00");
        assert_eq!(decimal(&ratio(1, 2), 0), "1");
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&int(9), 2), Some(int(3)));
        assert_eq!(exact_root(&ratio(8, 27), 3), Some(ratio(2, 3)));
        assert_eq!(exact_root(&int(2), 2), None);
        let (lo, hi) = root_enclosure(&int(2), 2, 20);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
    }

    #[test]
    fn root_sums() {
        // equality case can only be settled exactly
        let c = root_sum_at_most(&int(9), &[int(1), int(4)], 2);
        assert!(c.holds);
        assert_eq!(c.certification, Certification::ExactRoots);
        let c = root_sum_at_most(&int(10), &[int(1), ratio(45, 49)], 2);
        assert!(c.holds);
        let c = root_sum_at_most(&int(2), &[int(1), int(1)], 2);
        assert!(!c.holds);
    }
}
