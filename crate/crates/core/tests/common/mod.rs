//! Oracles shared by the integration tests. Nothing here calls into the library's
//! polyhedral code.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use okounkov_lab::geometry::ExpVec;
use okounkov_lab::ideals::MonomialIdeal;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `a . x < b` (strict) or `a . x <= b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Ineq {
    a: Vec<Q>,
    b: Q,
    strict: bool,
}

/// Fourier-Motzkin feasibility of a system of strict and weak inequalities.
fn feasible(mut rows: Vec<Ineq>, nvars: usize) -> bool {
    for v in (0..nvars).rev() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[v].is_positive() {
                pos.push(r);
            } else if r.a[v].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for n in &neg {
                // scale so the coefficients of v cancel
                let (sp, sn) = (-n.a[v].clone(), p.a[v].clone());
                let a: Vec<Q> = (0..nvars).map(|i| &p.a[i] * &sp + &n.a[i] * &sn).collect();
                rest.push(Ineq { a, b: &p.b * &sp + &n.b * &sn, strict: p.strict || n.strict });
            }
        }
        // rows with no variables left are checked at the end; the rest are scaled and deduplicated
        let mut next = std::collections::HashSet::new();
        for mut r in rest {
            if let Some(lead) = r.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
                r.a.iter_mut().for_each(|x| *x /= &lead);
                r.b /= &lead;
            }
            next.insert(r);
        }
        rows = next.into_iter().collect();
    }
    rows.iter().all(|r| if r.strict { r.b.is_positive() } else { !r.b.is_negative() })
}

/// Is there a convex combination `x` of `c * gens` with `x < w` (strict) or `x <= w`?
///
/// For the up-closed Newton polyhedron `P = conv(gens) + R^n_+` this is `w in int(cP)`,
/// respectively `w in cP`.
pub fn below(gens: &[Vec<i64>], c: &Q, w: &[Q], strict: bool) -> bool {
    // generators above another one do not change the polyhedron
    let gens: Vec<&Vec<i64>> =
        gens.iter().filter(|g| !gens.iter().any(|o| o != *g && o.iter().zip(g.iter()).all(|(a, b)| a <= b))).collect();
    let mut gens: Vec<&Vec<i64>> = gens.into_iter().fold(Vec::new(), |mut acc, g| {
        if !acc.contains(&g) {
            acc.push(g);
        }
        acc
    });
    let n = w.len();
    // lambda_last = 1 - sum of the others; variables are lambda_0..lambda_{k-2}
    let last = gens.pop().unwrap();
    let k = gens.len();
    let mut rows = Vec::new();
    for j in 0..k {
        let mut a = vec![Q::zero(); k];
        a[j] = -Q::one();
        rows.push(Ineq { a, b: Q::zero(), strict: false });
    }
    rows.push(Ineq { a: vec![Q::one(); k], b: Q::one(), strict: false });
    for i in 0..n {
        let a: Vec<Q> = gens.iter().map(|g| c * q(g[i] - last[i])).collect();
        rows.push(Ineq { a, b: &w[i] - c * q(last[i]), strict });
    }
    feasible(rows, k)
}

fn boxed(n: usize, side: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i64>| (0..=side).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Minimal points of `{v in box : inside(v)}` for an up-closed predicate. Points are visited
/// by total degree, so anything above an earlier hit is skipped without a test.
fn minimal(mut points: Vec<Vec<i64>>, inside: impl Fn(&[i64]) -> bool) -> Vec<ExpVec> {
    points.sort_by_key(|p| p.iter().sum::<i64>());
    let mut hits: Vec<Vec<i64>> = Vec::new();
    for p in points {
        if hits.iter().any(|h| h.iter().zip(&p).all(|(a, b)| a <= b)) {
            continue;
        }
        if inside(&p) {
            hits.push(p);
        }
    }
    let mut out: Vec<ExpVec> = hits.iter().map(|p| ExpVec::of(p)).collect();
    out.sort();
    out
}

fn sorted(i: &MonomialIdeal) -> Vec<ExpVec> {
    let mut g = i.generators().to_vec();
    g.sort();
    g
}

/// Minimal `v` in a box with `v + 1` interior to `c P(gens)`.
pub fn multiplier_oracle(gens: &[Vec<i64>], c: &Q) -> Vec<ExpVec> {
    let n = gens[0].len();
    let top = gens.iter().flatten().copied().max().unwrap_or(0);
    let side = (c * q(top)).ceil().to_integer().try_into().unwrap_or(0i64) + 1;
    minimal(boxed(n, side), |v| below(gens, c, &v.iter().map(|x| q(x + 1)).collect::<Vec<_>>(), true))
}

/// Minimal lattice points of `P(gens)`.
pub fn closure_oracle(gens: &[Vec<i64>]) -> Vec<ExpVec> {
    let n = gens[0].len();
    let side = gens.iter().flatten().copied().max().unwrap_or(0);
    minimal(boxed(n, side), |v| below(gens, &Q::one(), &v.iter().map(|&x| q(x)).collect::<Vec<_>>(), false))
}

pub fn generators_sorted(i: &MonomialIdeal) -> Vec<ExpVec> {
    sorted(i)
}

fn det(m: &[Vec<Q>]) -> Q {
    match m.len() {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
        }
    }
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// No `d + 1` of the points lie on a common hyperplane.
pub fn general_position(pts: &[Vec<Q>]) -> bool {
    let d = pts[0].len();
    let subsets = combinations(pts.len(), d + 1);
    subsets.iter().all(|s| {
        let m: Vec<Vec<Q>> = s[1..].iter().map(|&i| sub(&pts[i], &pts[s[0]])).collect();
        !det(&m).is_zero()
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Volume of the hull of points in general position, `d <= 3`: every supporting hyperplane
/// through `d` points cuts out a simplicial facet; cone it off at the centroid.
pub fn triangulated_volume(pts: &[Vec<Q>]) -> Q {
    let d = pts[0].len();
    let nq = q(pts.len() as i64);
    let centroid: Vec<Q> = (0..d).map(|i| pts.iter().map(|p| p[i].clone()).sum::<Q>() / &nq).collect();
    if d == 1 {
        let xs: Vec<&Q> = pts.iter().map(|p| &p[0]).collect();
        return xs.iter().copied().max().unwrap() - xs.iter().copied().min().unwrap();
    }
    let fact = if d == 2 { q(2) } else { q(6) };
    let mut vol = Q::zero();
    for s in combinations(pts.len(), d) {
        // normal of the hyperplane through the chosen points, tested against all others
        let base = &pts[s[0]];
        let sides: Vec<Q> = (0..pts.len())
            .filter(|i| !s.contains(i))
            .map(|i| {
                let mut m: Vec<Vec<Q>> = s[1..].iter().map(|&j| sub(&pts[j], base)).collect();
                m.push(sub(&pts[i], base));
                det(&m)
            })
            .collect();
        if sides.iter().all(|x| x.is_positive()) || sides.iter().all(|x| x.is_negative()) {
            let m: Vec<Vec<Q>> = s.iter().map(|&j| sub(&pts[j], &centroid)).collect();
            vol += det(&m).abs() / &fact;
        }
    }
    vol
}

/// Random monomial ideals: 1 to 5 generators in 2 or 3 variables, exponents at most 6,
/// with a coefficient from a fixed list.
pub fn random_ideal_cases(seed: u64, count: usize) -> Vec<(Vec<Vec<i64>>, Q)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coefficients = [(1, 3), (1, 2), (2, 3), (1, 1), (4, 3), (3, 2), (2, 1), (5, 2), (3, 1)];
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=3);
            let k = rng.gen_range(1..=5);
            let gens = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..=6)).collect()).collect();
            let (a, b) = coefficients[rng.gen_range(0..coefficients.len())];
            (gens, qr(a, b))
        })
        .collect()
}

/// Cases where the Howald staircase and the interiority oracle disagree.
pub fn howald_mismatches(cases: &[(Vec<Vec<i64>>, Q)]) -> Vec<String> {
    use okounkov_lab::ideals::multiplier_ideal;
    cases
        .iter()
        .filter_map(|(gens, c)| {
            let ideal = MonomialIdeal::new(gens[0].len(), gens.iter().map(|g| ExpVec::of(g)).collect()).unwrap();
            let got = generators_sorted(&multiplier_ideal(&ideal, c).unwrap());
            let want = multiplier_oracle(gens, c);
            (got != want).then(|| format!("J({c} * {ideal}): staircase {got:?}, oracle {want:?}"))
        })
        .collect()
}
