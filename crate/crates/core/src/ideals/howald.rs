use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::MonomialIdeal;
use crate::error::{Error, Result};
use crate::geometry::{ExpVec, PolyCone};
use crate::rational::Rational;

/// `P(a) = conv(gens) + R^n_{>=0}` as inequalities `<h, x> >= beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    nvars: usize,
    facets: Vec<(Vec<i128>, i128)>,
    /// Largest exponent of each variable over the generators.
    max_exponent: Vec<i64>,
}

impl NewtonPolyhedron {
    /// Any generating set with the right convex hull works, in particular hull candidates.
    pub fn new(nvars: usize, gens: &[ExpVec]) -> Result<NewtonPolyhedron> {
        if gens.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        let n = nvars + 1;
        let mut cone_gens: Vec<Vec<BigInt>> =
            gens.iter().map(|g| g.iter().map(BigInt::from).chain(std::iter::once(BigInt::from(1))).collect()).collect();
        for i in 0..nvars {
            cone_gens.push((0..n).map(|j| BigInt::from((i == j) as i64)).collect());
        }
        let cone = PolyCone::from_big(cone_gens, n);
        let conv = |x: &BigInt| x.to_i128().expect("facet data fits i128");
        let facets = cone
            .halfspaces()
            .iter()
            .filter(|h| h[..nvars].iter().any(|x| !x.is_zero()))
            .map(|h| (h[..nvars].iter().map(conv).collect(), -conv(&h[nvars])))
            .collect();
        let max_exponent = (0..nvars).map(|i| gens.iter().map(|g| g.get(i)).max().unwrap_or(0)).collect();
        Ok(NewtonPolyhedron { nvars, facets, max_exponent })
    }

    pub fn of_ideal(ideal: &MonomialIdeal) -> Result<NewtonPolyhedron> {
        NewtonPolyhedron::new(ideal.nvars(), ideal.generators())
    }

    pub fn facets(&self) -> &[(Vec<i128>, i128)] {
        &self.facets
    }

    pub fn contains(&self, v: &ExpVec) -> bool {
        self.facets.iter().all(|(h, beta)| dot(h, v) >= *beta)
    }

    /// `v + (1,...,1)` lies in the interior of `c P`.
    pub fn howald_contains(&self, c: &Rational, v: &ExpVec) -> bool {
        let (num, den) = split(c);
        self.facets.iter().all(|(h, beta)| den * (dot(h, v) + h.iter().sum::<i128>()) > num * beta)
    }

    /// Minimal lattice points of `{v : <h, v> >= bound_f}` inside the box `[0, caps]`.
    fn staircase(&self, bounds: &[i128], caps: &[i64]) -> Vec<ExpVec> {
        let n = self.nvars;
        let last = n - 1;
        // smallest admissible last coordinate for a prefix, or None
        let min_last = |prefix: &[i64]| -> Option<i64> {
            let mut t: i128 = 0;
            for ((h, _), &b) in self.facets.iter().zip(bounds) {
                let partial: i128 = h[..last].iter().zip(prefix).map(|(a, &x)| a * x as i128).sum();
                let r = b - partial;
                if h[last] == 0 {
                    if r > 0 {
                        return None;
                    }
                } else {
                    t = t.max(Integer::div_ceil(&r, &h[last]));
                }
            }
            Some(t as i64)
        };
        let dims: Vec<usize> = caps[..last].iter().map(|&c| c as usize + 1).collect();
        let size: usize = dims.iter().product();
        let mut strides = vec![1usize; last];
        for i in (0..last.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let mut table: Vec<Option<i64>> = Vec::with_capacity(size);
        let mut prefix = vec![0i64; last];
        for idx in 0..size {
            let mut rem = idx;
            for i in 0..last {
                prefix[i] = (rem / strides[i]) as i64;
                rem %= strides[i];
            }
            table.push(min_last(&prefix));
        }
        let mut out = Vec::new();
        for idx in 0..size {
            let Some(t) = table[idx] else { continue };
            let mut rem = idx;
            for i in 0..last {
                prefix[i] = (rem / strides[i]) as i64;
                rem %= strides[i];
            }
            let minimal = (0..last).all(|i| prefix[i] == 0 || table[idx - strides[i]].is_none_or(|s| s > t));
            if minimal {
                let mut v = prefix.clone();
                v.push(t);
                out.push(ExpVec::of(&v));
            }
        }
        out
    }
}

fn dot(h: &[i128], v: &ExpVec) -> i128 {
    h.iter().zip(v.iter()).map(|(a, b)| a * b as i128).sum()
}

fn split(c: &Rational) -> (i128, i128) {
    (c.numer().to_i128().expect("small coefficient"), c.denom().to_i128().expect("small coefficient"))
}

/// Minimal lattice points of the Newton polyhedron.
pub fn integral_closure(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    let np = NewtonPolyhedron::of_ideal(ideal)?;
    let bounds: Vec<i128> = np.facets.iter().map(|(_, beta)| *beta).collect();
    let gens = np.staircase(&bounds, &np.max_exponent);
    MonomialIdeal::new(ideal.nvars(), gens)
}

/// Howald: `J(c a)` is generated by the `x^v` with `v + (1,...,1)` in the interior of `c P(a)`.
pub fn multiplier_ideal(ideal: &MonomialIdeal, c: &Rational) -> Result<MonomialIdeal> {
    multiplier_ideal_of(&NewtonPolyhedron::of_ideal(ideal)?, c)
}

pub(crate) fn multiplier_ideal_of(np: &NewtonPolyhedron, c: &Rational) -> Result<MonomialIdeal> {
    if !c.is_positive() {
        return Err(Error::InvalidArgument("multiplier ideal coefficient must be positive".into()));
    }
    let (num, den) = split(c);
    // den <h, v> > num beta - den |h|  <=>  <h, v> >= floor((num beta - den |h|) / den) + 1
    let bounds: Vec<i128> =
        np.facets.iter().map(|(h, beta)| Integer::div_floor(&(num * beta - den * h.iter().sum::<i128>()), &den) + 1).collect();
    // a minimal v has v_i <= floor(c M_i)
    let caps: Vec<i64> = np.max_exponent.iter().map(|&m| (num * m as i128 / den) as i64).collect();
    MonomialIdeal::new(np.nvars, np.staircase(&bounds, &caps))
}
