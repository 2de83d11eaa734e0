//! Double description: extreme rays of `{y : <a_i, y> >= 0}` for integer rows `a_i`.
//!
//! Exact integer arithmetic throughout. Adjacency uses the combinatorial test on zero
//! sets, which is valid for pointed cones; pointedness is guaranteed by requiring the
//! rows to have full rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RankDeficient(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: Bits,
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().for_each(|x| *x /= &g);
    }
    v
}

/// Indices of a maximal linearly independent subset of `rows`, greedy in order.
pub(crate) fn independent_rows(rows: &[Vec<BigInt>], n: usize) -> Vec<usize> {
    // echelon rows over Q with their pivot columns
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        if chosen.len() == n {
            break;
        }
        let mut v: Vec<Rational> = row.iter().map(|x| Rational::from_integer(x.clone())).collect();
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                let f = &v[*p] / &b[*p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            basis.push((p, v));
            chosen.push(idx);
        }
    }
    chosen
}

/// Rank of a set of integer rows.
pub(crate) fn rank(rows: &[Vec<BigInt>], n: usize) -> usize {
    independent_rows(rows, n).len()
}

/// Solves `B x = e_j` for each `j`; returns the columns of `B^{-1}` scaled to primitive
/// integer vectors (positive multiples).
fn inverse_columns(b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|x| Rational::from_integer(x.clone())).collect();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("basis rows are independent");
        m.swap(c, p);
        let inv = m[c][c].recip();
        m[c].iter_mut().for_each(|x| *x *= &inv);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let (src, dst) = if r < c {
                    let (a, b) = m.split_at_mut(c);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[c], &mut b[0])
                };
                for (x, y) in dst.iter_mut().zip(src.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    (0..n)
        .map(|j| {
            let col: Vec<Rational> = (0..n).map(|i| m[i][n + j].clone()).collect();
            let l = col.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            primitive(col.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect())
        })
        .collect()
}

/// Extreme rays of the pointed cone `{y in R^n : <row, y> >= 0 for every row}`,
/// as primitive integer vectors in sorted order.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], n: usize) -> Result<Vec<Vec<BigInt>>, RankDeficient> {
    debug_assert!(rows.iter().all(|r| r.len() == n));
    if n == 0 {
        return Ok(Vec::new());
    }
    let basis = independent_rows(rows, n);
    if basis.len() < n {
        return Err(RankDeficient(basis.len()));
    }
    let total = rows.len();
    let b: Vec<Vec<BigInt>> = basis.iter().map(|&i| rows[i].clone()).collect();
    let mut rays: Vec<Ray> = inverse_columns(&b)
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            let mut zeros = Bits::new(total);
            for (k, &bi) in basis.iter().enumerate() {
                if k != j {
                    zeros.set(bi);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    let mut in_basis = vec![false; total];
    basis.iter().for_each(|&i| in_basis[i] = true);

    for (t, row) in rows.iter().enumerate() {
        if in_basis[t] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if minus.is_empty() {
            for (r, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    r.zeros.set(t);
                }
            }
            continue;
        }
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let mut fresh = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < n {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(i, r)| i != p && i != q && common.subset_of(&r.zeros));
                if blocked {
                    continue;
                }
                let v: Vec<BigInt> = rays[q].v.iter().zip(&rays[p].v).map(|(x, y)| &values[p] * x - &values[q] * y).collect();
                let mut zeros = common;
                zeros.set(t);
                fresh.push(Ray { v: primitive(v), zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.zeros.set(t);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn orthant() {
        let r = extreme_rays(&rows(&[&[1, 0], &[0, 1]]), 2).unwrap();
        assert_eq!(r, rows(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn dual_of_fan_over_segment() {
        // dual of cone{(0,1),(1,1),(2,1)} has rays orthogonal to the extreme generators
        let r = extreme_rays(&rows(&[&[0, 1], &[1, 1], &[2, 1]]), 2).unwrap();
        assert_eq!(r, rows(&[&[-1, 2], &[1, 0]]));
    }

    #[test]
    fn square_pyramid_has_five_rays_in_dual() {
        // cone over the unit square at height 1: 4 facets
        let r = extreme_rays(&rows(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[1, 1, 2]]), 3).unwrap();
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        assert_eq!(extreme_rays(&rows(&[&[1, 1], &[2, 2]]), 2), Err(RankDeficient(1)));
    }

    #[test]
    fn infeasible_collapses_to_nothing() {
        let r = extreme_rays(&rows(&[&[1, 0], &[0, 1], &[-1, -1]]), 2).unwrap();
        assert!(r.is_empty());
    }
}
