use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dd::{self, primitive};
use super::polytope::{null_space, rref, Halfspace, Polytope};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Closed polyhedral cone in `R^n` generated by nonnegative integer vectors.
///
/// `halfspaces` are `<h, y> >= 0`, `equations` are `<z, y> = 0`; together they cut out
/// exactly the cone spanned by `rays`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCone {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    halfspaces: Vec<Vec<BigInt>>,
    equations: Vec<Vec<BigInt>>,
}

/// Cone spanned by `points`, all in `N^n`.
pub fn cone_from_generators(points: &[Vec<i64>]) -> Result<PolyCone> {
    let n = points.first().ok_or(Error::EmptyInput)?.len();
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.len() });
        }
        if p.iter().any(|&x| x < 0) {
            return Err(Error::NegativeEntry(p.clone()));
        }
    }
    Ok(PolyCone::from_big(points.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect(), n))
}

impl PolyCone {
    /// Generators must lie in a pointed cone; nonnegative vectors always do.
    pub(crate) fn from_big(gens: Vec<Vec<BigInt>>, n: usize) -> PolyCone {
        let gens: Vec<Vec<BigInt>> = gens.into_iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
        if gens.is_empty() {
            let equations = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
            return PolyCone { dim: n, rays: Vec::new(), halfspaces: Vec::new(), equations };
        }
        let (pivots, reduced) = rref(&gens, n);
        let k = pivots.len();
        let equations = null_space(&pivots, &reduced, n);
        let projected: Vec<Vec<BigInt>> = gens.iter().map(|g| pivots.iter().map(|&p| g[p].clone()).collect()).collect();
        let dual = dd::extreme_rays(&projected, k).expect("projection onto pivot columns has full rank");

        let mut rays: Vec<Vec<BigInt>> = Vec::new();
        for (g, pg) in gens.iter().zip(&projected) {
            let tight: Vec<Vec<BigInt>> = dual.iter().filter(|y| dd::dot(y, pg).is_zero()).cloned().collect();
            if tight.len() + 1 >= k && dd::rank(&tight, k) + 1 == k {
                rays.push(primitive(g.clone()));
            }
        }
        rays.sort();
        rays.dedup();
        let mut halfspaces: Vec<Vec<BigInt>> = dual
            .iter()
            .map(|y| {
                let mut lifted = vec![BigInt::zero(); n];
                for (i, &p) in pivots.iter().enumerate() {
                    lifted[p] = y[i].clone();
                }
                lifted
            })
            .collect();
        halfspaces.sort();
        PolyCone { dim: n, rays, halfspaces, equations }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn halfspaces(&self) -> &[Vec<BigInt>] {
        &self.halfspaces
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    /// Nonempty interior in the ambient space.
    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    fn eval(h: &[BigInt], y: &[Rational]) -> Rational {
        h.iter().zip(y).map(|(a, b)| Rational::from_integer(a.clone()) * b).sum()
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        self.equations.iter().all(|z| Self::eval(z, y).is_zero())
            && self.halfspaces.iter().all(|h| !Self::eval(h, y).is_negative())
    }

    pub fn contains_interior(&self, y: &[Rational]) -> bool {
        self.is_full_dimensional() && self.halfspaces.iter().all(|h| Self::eval(h, y).is_positive())
    }

    /// Fiber `{x in R^d : (x, a) in cone}` over the last `a.len()` coordinates.
    /// An empty fiber is [`Error::EmptyFiber`].
    pub fn fiber(&self, a: &[Rational]) -> Result<Polytope> {
        let r = a.len();
        if r > self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: r });
        }
        let d = self.dim - r;
        let split = |h: &[BigInt]| -> (Vec<Rational>, Rational) {
            let x: Vec<Rational> = h[..d].iter().map(|v| Rational::from_integer(v.clone())).collect();
            (x, Self::eval(&h[d..], a))
        };
        // <h_x, x> + <h_a, a> >= 0  becomes  <-h_x, x> <= <h_a, a>
        let ineqs: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .map(|h| {
                let (x, c) = split(h);
                let neg: Vec<Rational> = x.iter().map(|v| -v).collect();
                Halfspace::from_rational(&neg, &c)
            })
            .collect();
        let mut eqs: Vec<Halfspace> = Vec::new();
        for z in &self.equations {
            let (x, c) = split(z);
            if x.iter().all(|v| v.is_zero()) {
                if !c.is_zero() {
                    return Err(Error::EmptyFiber);
                }
                continue;
            }
            eqs.push(Halfspace::from_rational(&x.iter().map(|v| -v).collect::<Vec<_>>(), &c));
        }
        if d == 0 {
            return if ineqs.iter().all(|h| !h.offset.is_negative()) {
                Polytope::hull(&[vec![]])
            } else {
                Err(Error::EmptyFiber)
            };
        }
        Polytope::from_halfspaces(d, &ineqs, &eqs)?.ok_or(Error::EmptyFiber)
    }

    /// Convenience for integral fibers.
    pub fn fiber_at(&self, a: &[i64]) -> Result<Polytope> {
        self.fiber(&a.iter().map(|&x| rational::int(x)).collect::<Vec<_>>())
    }
}
