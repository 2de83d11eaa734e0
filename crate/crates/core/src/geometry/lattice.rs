//! Subgroups of `Z^n`: Hermite echelon bases, Smith invariants and indices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Rank, index and a Hermite basis of a subgroup of `Z^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSummary {
    pub dim: usize,
    pub rank: usize,
    /// `None` when the subgroup is not of full rank (infinite index).
    pub index: Option<BigInt>,
    /// Hermite normal form rows, pivots strictly increasing.
    pub basis: Vec<Vec<BigInt>>,
    /// Nonzero Smith invariant factors `d_1 | d_2 | ...`.
    pub invariant_factors: Vec<BigInt>,
}

impl LatticeSummary {
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.dim
    }

    /// Index as a plain integer, `None` if infinite or too large.
    pub fn index_u64(&self) -> Option<u64> {
        self.index.as_ref().and_then(|i| u64::try_from(i).ok())
    }
}

/// Incrementally maintained echelon basis of the group generated by inserted vectors.
#[derive(Debug, Clone)]
pub struct LatticeBuilder {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl LatticeBuilder {
    pub fn new(dim: usize) -> Self {
        LatticeBuilder { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// True once the group is all of `Z^dim`; further inserts cannot change anything.
    pub fn is_everything(&self) -> bool {
        self.rows.len() == self.dim && self.rows.iter().zip(&self.pivots).all(|(r, &p)| r[p].is_one())
    }

    pub fn insert_i64(&mut self, v: &[i64]) {
        if self.is_everything() || v.iter().all(|&x| x == 0) {
            return;
        }
        self.insert(v.iter().map(|&x| BigInt::from(x)).collect());
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim, "lattice vector of wrong dimension");
        let mut k = 0;
        loop {
            let Some(j) = v.iter().position(|x| !x.is_zero()) else { return };
            while k < self.rows.len() && self.pivots[k] < j {
                k += 1;
            }
            if k == self.rows.len() || self.pivots[k] != j {
                if v[j].is_negative() {
                    v.iter_mut().for_each(|x| *x = -x.clone());
                }
                self.rows.insert(k, v);
                self.pivots.insert(k, j);
                return;
            }
            let r = &mut self.rows[k];
            if (&v[j] % &r[j]).is_zero() {
                let q = &v[j] / &r[j];
                for (x, y) in v.iter_mut().zip(r.iter()) {
                    *x -= &q * y;
                }
            } else {
                let e = r[j].extended_gcd(&v[j]);
                let (a, b) = (&r[j] / &e.gcd, &v[j] / &e.gcd);
                let new_r: Vec<BigInt> = r.iter().zip(&v).map(|(p, q)| &e.x * p + &e.y * q).collect();
                let new_v: Vec<BigInt> = r.iter().zip(&v).map(|(p, q)| &a * q - &b * p).collect();
                *r = new_r;
                if r[j].is_negative() {
                    r.iter_mut().for_each(|x| *x = -x.clone());
                }
                v = new_v;
            }
        }
    }

    pub fn finish(mut self) -> LatticeSummary {
        // reduce entries above pivots into [0, pivot)
        for i in 0..self.rows.len() {
            let p = self.pivots[i];
            for k in 0..i {
                let q = self.rows[k][p].div_floor(&self.rows[i][p]);
                if !q.is_zero() {
                    let (upper, lower) = self.rows.split_at_mut(i);
                    for (x, y) in upper[k].iter_mut().zip(lower[0].iter()) {
                        *x -= &q * y;
                    }
                }
            }
        }
        let invariant_factors = smith_invariants(&self.rows, self.dim);
        let rank = self.rows.len();
        let index = (rank == self.dim).then(|| invariant_factors.iter().fold(BigInt::one(), |a, b| a * b));
        LatticeSummary { dim: self.dim, rank, index, basis: self.rows, invariant_factors }
    }
}

/// Summary of the subgroup of `Z^dim` generated by `vectors`.
pub fn lattice_summary(vectors: &[Vec<i64>], dim: usize) -> LatticeSummary {
    let mut b = LatticeBuilder::new(dim);
    for v in vectors {
        b.insert_i64(v);
    }
    b.finish()
}

/// Nonzero Smith invariant factors of the row space of `m`.
pub fn smith_invariants(m: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let nrows = a.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                let (top, rest) = a.split_at_mut(i);
                for (x, y) in rest[0].iter_mut().zip(top[t].iter()) {
                    *x -= &q * y;
                }
            }
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..ncols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut() {
                    let y = row[t].clone();
                    row[j] -= &q * y;
                }
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot must divide the remaining block
        let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
        if let Some(i) = bad {
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in top[t].iter_mut().zip(rest[0].iter()) {
                *x += y;
            }
            continue;
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}
