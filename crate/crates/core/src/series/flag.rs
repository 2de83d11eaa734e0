use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::ExpVec;
use crate::rational::Rational;

/// Torus-invariant coordinate flag on the affine chart `x_i != 0`.
///
/// A dehomogenized exponent `a` of total degree `t` is first rewritten in the chart of
/// `dehomogenizing_index` (coordinates of `(t - |a|, a)` other than that index), then
/// permuted and finally multiplied by the optional unimodular matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    dim: usize,
    dehomogenizing_index: usize,
    /// 1-based: `nu_j = a'_{permutation[j]}`.
    permutation: Vec<usize>,
    matrix: Option<Vec<Vec<i64>>>,
}

impl Flag {
    pub fn identity(dim: usize) -> Flag {
        Flag { dim, dehomogenizing_index: 0, permutation: (1..=dim).collect(), matrix: None }
    }

    pub fn new(dim: usize, dehomogenizing_index: usize, permutation: Vec<usize>, matrix: Option<Vec<Vec<i64>>>) -> Result<Flag> {
        if dehomogenizing_index > dim {
            return Err(Error::InvalidFlag(format!("dehomogenizing index {dehomogenizing_index} not in [0, {dim}]")));
        }
        let mut sorted = permutation.clone();
        sorted.sort_unstable();
        if sorted != (1..=dim).collect::<Vec<_>>() {
            return Err(Error::InvalidFlag(format!("{permutation:?} is not a permutation of 1..={dim}")));
        }
        if let Some(m) = &matrix {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidFlag(format!("matrix must be {dim}x{dim}")));
            }
            let det = determinant(m);
            if det.abs() != Rational::one() {
                return Err(Error::InvalidFlag(format!("matrix has determinant {det}, not +-1")));
            }
        }
        Ok(Flag { dim, dehomogenizing_index, permutation, matrix })
    }

    pub fn with_permutation(dim: usize, permutation: Vec<usize>) -> Result<Flag> {
        Flag::new(dim, 0, permutation, None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dehomogenizing_index(&self) -> usize {
        self.dehomogenizing_index
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn matrix(&self) -> Option<&[Vec<i64>]> {
        self.matrix.as_deref()
    }

    pub fn is_identity(&self) -> bool {
        self.dehomogenizing_index == 0 && self.matrix.is_none() && self.permutation.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    fn chart(&self, a: &[i64], total: i64) -> Vec<i64> {
        if self.dehomogenizing_index == 0 {
            return a.to_vec();
        }
        let mut h = Vec::with_capacity(a.len() + 1);
        h.push(total - a.iter().sum::<i64>());
        h.extend_from_slice(a);
        h.remove(self.dehomogenizing_index);
        h
    }

    fn transform(&self, a: Vec<i64>) -> Vec<i64> {
        let p: Vec<i64> = self.permutation.iter().map(|&j| a[j - 1]).collect();
        match &self.matrix {
            None => p,
            Some(m) => m.iter().map(|row| row.iter().zip(&p).map(|(x, y)| x * y).sum()).collect(),
        }
    }

    /// `nu(x^a)` for a section of total degree `total` (that is `m` times the degree bound).
    pub fn valuation(&self, a: &ExpVec, total: i64) -> Result<ExpVec> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.dim() });
        }
        let nu = self.transform(self.chart(&a.to_vec(), total));
        ExpVec::new(&nu).map_err(|_| Error::InvalidFlag(format!("valuation of {a} at total degree {total} is {nu:?}")))
    }

    /// The valuation extended to rational points of degree one with total `bound`,
    /// as `x -> A x + c`.
    pub fn affine_map(&self, bound: i64) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let d = self.dim;
        let image = |x: &[i64]| -> Vec<i64> { self.transform(self.chart(x, bound)) };
        let origin = image(&vec![0; d]);
        let mut a = vec![vec![Rational::zero(); d]; d];
        for j in 0..d {
            let mut e = vec![0; d];
            e[j] = 1;
            let col = image(&e);
            for i in 0..d {
                a[i][j] = Rational::from_integer((col[i] - origin[i]).into());
            }
        }
        (a, origin.into_iter().map(|x| Rational::from_integer(x.into())).collect())
    }
}

fn determinant(m: &[Vec<i64>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            let src = a[c].clone();
            for (x, y) in a[r].iter_mut().zip(&src) {
                *x -= &f * y;
            }
        }
    }
    det
}
