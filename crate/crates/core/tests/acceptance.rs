//! One PASS/FAIL line per acceptance criterion. Runs without the libtest harness so the
//! lines land in the test log; any failure makes the binary exit nonzero.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use num_traits::{One, Signed, Zero};
use okounkov_lab::cli;
use okounkov_lab::fujita::fujita_report;
use okounkov_lab::geometry::simplex;
use okounkov_lab::ideals::{
    base_ideal, check_star, mu_equals_ain_check, subadditivity_check, valuation_checks, MonomialValuation, Subadditivity,
    DEFAULT_K_CAP,
};
use okounkov_lab::multigraded::{compare_fiber, fiber_volume_scan, global_body, multigraded_fujita_check, simplex_grid};
use okounkov_lab::okounkov::{check_fujita_identity, homogeneity_check, volume_report};
use okounkov_lab::rational::Certification;
use okounkov_lab::series::{Flag, GradedSeries, MultiGradedSeries};
use okounkov_lab::spec::{parse_spec, SeriesSpec};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn specs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/specs")
}

fn load(name: &str) -> SeriesSpec {
    parse_spec(&specs_dir().join(format!("{name}.toml"))).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn single(name: &str) -> (GradedSeries, Flag) {
    let s = load(name);
    (s.single().expect("single-graded").clone(), s.flag.clone())
}

fn multi(name: &str) -> (MultiGradedSeries, Flag) {
    let s = load(name);
    (s.multi().expect("multigraded").clone(), s.flag.clone())
}

/// Every single-graded example spec.
fn singles() -> Vec<(String, GradedSeries, Flag)> {
    let mut names: Vec<String> = std::fs::read_dir(specs_dir())
        .unwrap()
        .map(|e| e.unwrap().path().file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
        .into_iter()
        .filter_map(|n| {
            let s = load(&n);
            s.single().cloned().map(|g| (n, g, s.flag.clone()))
        })
        .collect()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within_time(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, format!("took {:.1?}, limit {limit:?}", t.elapsed()))
}

fn c1() -> Outcome {
    let t = Instant::now();
    let (s, flag) = single("p2_o1");
    let rep = volume_report(&s, &flag, 200).map_err(e2s)?;
    let v = rep.count_estimates.value_at(&[200]).ok_or("no row at m = 200")?.clone();
    ensure(v == qr(201 * 202, 200 * 200), format!("estimate {v}"))?;
    let rel = (&v - q(1)) / q(1);
    ensure(rel <= qr(2, 100), format!("relative error {rel}"))?;
    ensure(rep.body.exact && rep.body.body == simplex(2, &q(1)), format!("body {}", rep.body.body))?;
    ensure(rep.body.body.volume() == qr(1, 2), "volume")?;
    within_time(t, Duration::from_secs(5))?;
    Ok(format!("2 #Gamma_200 / 200^2 = {v}, relative error {rel}, body {}", rep.body.body))
}

fn c2() -> Outcome {
    let (s, flag) = single("squares");
    let rep = volume_report(&s, &flag, 40).map_err(e2s)?;
    let dl = rep.delta_lat.clone().ok_or("infinite index")?;
    ensure(dl == 2.into(), format!("delta_lat {dl}"))?;
    ensure(rep.body.exact && rep.body.body == simplex(1, &q(2)), format!("body {}", rep.body.body))?;
    ensure(rep.normalized_target == Some(q(1)), "normalized target")?;
    // #S_m = m + 1 for the squares series
    let last = rep.count_estimates.last().ok_or("no rows")?;
    ensure(last.value == qr(last.index[0] + 1, last.index[0]), format!("count estimate {}", last.value))?;
    Ok(format!("delta_lat = {dl}, Delta = {}, d! vol = {}", rep.body.body, rep.body.body.volume()))
}

fn c3() -> Outcome {
    let t = Instant::now();
    let (s, flag) = single("squares");
    let id = check_fujita_identity(&s, &flag, 60).map_err(e2s)?;
    ensure(id.residuals.rows.iter().all(|r| r.value.is_zero()), "nonzero squares residual")?;
    ensure(
        id.delta == 2.into() && id.vol.rows.iter().all(|r| r.value == q(1)) && id.ain.rows.iter().all(|r| r.value == q(2)),
        "squares values",
    )?;
    let (f, flag) = single("floor57");
    let id = check_fujita_identity(&f, &flag, 140).map_err(e2s)?;
    let target = q(2) * (qr(1, 2) - qr(4, 49) / q(2));
    let ain = id.ain.value_at(&[140]).ok_or("no row at m = 140")?.clone();
    let rel = ((&ain - &target) / &target).abs();
    ensure(rel <= qr(2, 100), format!("ain(140) = {ain}, relative gap {rel}"))?;
    let res = id.last_residual() / &target;
    ensure(res <= qr(2, 100), format!("relative residual {res}"))?;
    within_time(t, Duration::from_secs(60))?;
    Ok(format!(
        "squares residual 0 on {} rows; floor57 ain(140) = {} vs 45/49, gap {}",
        id.residuals.rows.len(),
        okounkov_lab::rational::decimal(&ain, 5),
        okounkov_lab::rational::decimal(&rel, 5)
    ))
}

fn c4() -> Outcome {
    let mut tested = Vec::new();
    for (name, s, flag) in singles() {
        if !s.is_exact() {
            continue;
        }
        for h in 1..=3 {
            let hc = homogeneity_check(&s, &flag, h, 12).map_err(e2s)?;
            ensure(hc.exact && hc.holds, format!("{name}, h = {h}"))?;
        }
        tested.push(name);
    }
    ensure(tested.len() >= 4, "too few exact examples")?;
    Ok(format!("h = 1, 2, 3 exact on {}", tested.join(", ")))
}

fn c5() -> Outcome {
    let t = Instant::now();
    let eps = qr(1, 100);
    // stabilization degrees: lattice polygons and unimodular simplices are normal; the
    // staggered series needs its degree 2 generator
    let mut found = Vec::new();
    for (name, expected, p_cap, k_cap) in
        [("p2_o1", 1, 2, 6), ("p3_o2", 1, 2, 3), ("trapezoid", 1, 2, 6), ("squares", 1, 4, 8), ("staggered", 2, 4, 8)]
    {
        let (s, _) = single(name);
        let rep = fujita_report(&s, &eps, p_cap, k_cap).map_err(e2s)?;
        ensure(rep.p0 == Some(expected), format!("{name}: p0 {:?}, expected {expected}", rep.p0))?;
        let row = rep.row(expected).ok_or("missing row")?;
        ensure(row.ratios.rows.iter().all(|r| r.value.is_one()), format!("{name}: ratio below 1"))?;
        found.push(format!("{name} {expected}"));
    }
    let (f, _) = single("floor57");
    let rep = fujita_report(&f, &eps, 14, DEFAULT_K_CAP).map_err(e2s)?;
    let p0 = rep.p0.ok_or("floor57: no p0 up to 14")?;
    ensure(rep.row(p0).map(|r| r.monotone) == Some(true), "floor57: k-table not monotone")?;
    within_time(t, Duration::from_secs(120))?;
    Ok(format!("p0: {}; floor57 p0 = {p0} (expected 7), monotone", found.join(", ")))
}

fn c6() -> Outcome {
    let (w, flag) = multi("linear_family");
    let gb = global_body(&w, &flag, 8).map_err(e2s)?;
    let mut seen = Vec::new();
    for (a, top) in [([1, 0], 1), ([1, 1], 3), ([1, 2], 5)] {
        let c = compare_fiber(&gb, &w, &flag, &a, 24).map_err(e2s)?;
        ensure(c.fiber == simplex(1, &q(top)), format!("fiber at {a:?} is {}", c.fiber))?;
        ensure(c.equal, format!("fiber at {a:?} differs from the induced body {}", c.direct))?;
        seen.push(format!("{a:?} -> {}", c.fiber));
    }
    Ok(seen.join(", "))
}

fn c7() -> Outcome {
    let (w, flag) = multi("pair");
    let gb = global_body(&w, &flag, 14).map_err(e2s)?;
    let grid = simplex_grid(2, &qr(1, 11), 11);
    ensure(grid.len() == 10, format!("grid has {} points", grid.len()))?;
    let scan = fiber_volume_scan(&gb, &grid).map_err(e2s)?;
    ensure(scan.points.iter().all(|p| p.homogeneous), "homogeneity")?;
    ensure(scan.midpoints.iter().all(|m| m.holds), "log-concavity")?;
    let exact = scan.midpoints.iter().filter(|m| m.certification != Certification::Float).count();
    Ok(format!(
        "{} points homogeneous, {} midpoints hold ({} needed exact refinement)",
        scan.points.len(),
        scan.midpoints.len(),
        exact
    ))
}

fn c8() -> Outcome {
    let t = Instant::now();
    let (w, flag) = multi("pair");
    let grid = simplex_grid(2, &qr(1, 4), 4);
    let check = multigraded_fujita_check(&w, &flag, &grid, &qr(1, 10), 14, 14).map_err(e2s)?;
    let p0 = check.p0.ok_or("no uniform p0 up to 14")?;
    let pointwise: Vec<u32> = check.pointwise_p0.iter().map(|p| p.ok_or("pointwise p0 missing")).collect::<Result<_, _>>()?;
    ensure(pointwise.iter().all(|&p| p <= p0), format!("pointwise {pointwise:?} above {p0}"))?;
    within_time(t, Duration::from_secs(600))?;
    Ok(format!("uniform p0 = {p0} on {} grid points, pointwise {pointwise:?}", grid.len()))
}

fn c9() -> Outcome {
    let t = Instant::now();
    let cases = random_ideal_cases(2024, 200);
    let bad = howald_mismatches(&cases);
    ensure(bad.is_empty(), format!("{} mismatches, first: {}", bad.len(), bad.first().cloned().unwrap_or_default()))?;
    within_time(t, Duration::from_secs(60))?;
    Ok(format!("200 ideals, 0 mismatches in {:.1?}", t.elapsed()))
}

fn c10() -> Outcome {
    let mut notes = Vec::new();
    for (name, s, _) in singles() {
        let r = check_star(&s, 8).map_err(e2s)?;
        ensure(r.base_in_multiplier, format!("{name}: b_p not inside J_p"))?;
        for p in 1..=8 {
            if s.is_nonempty(p).map_err(e2s)? {
                let b = base_ideal(&s, p).map_err(e2s)?;
                ensure(!b.is_zero(), format!("{name}: zero base ideal at {p}"))?;
            }
        }
        let required = matches!(s.mode_name(), "generated" | "complete");
        if required {
            ensure(r.stabilized && r.witness.is_some(), format!("{name}: no stabilized witness"))?;
        }
        if r.stabilized {
            let mut holds = 0;
            for p in 1..=3 {
                for k in 2..=3 {
                    if !s.is_nonempty(p).map_err(e2s)? || !s.is_nonempty(k * p).map_err(e2s)? {
                        continue;
                    }
                    match subadditivity_check(&s, p, k, 4).map_err(e2s)? {
                        Subadditivity::Fails => return Err(format!("{name}: subadditivity fails at p = {p}, k = {k}")),
                        Subadditivity::Holds => holds += 1,
                        Subadditivity::Inconclusive => {}
                    }
                }
            }
            notes.push(format!(
                "{name} witness {} ({holds} subadditive pairs)",
                r.witness.map(|w| w.to_string()).unwrap_or_default()
            ));
        }
    }
    Ok(notes.join("; "))
}

fn c11() -> Outcome {
    let (p3, _) = single("p3_o2");
    let c = mu_equals_ain_check(&p3, &[2], &Flag::identity(2), 100).map_err(e2s)?;
    for r in &c.residuals {
        ensure(*r <= qr(3, 100), format!("residual {r}"))?;
    }
    ensure(c.mu_dominates, "p3_o2: mu below ain")?;
    let limit = |t: &okounkov_lab::report::ConvergenceTable| {
        t.last_value().map(|v| okounkov_lab::rational::decimal(v, 4)).unwrap_or_default()
    };
    let mut others = Vec::new();
    for (name, s, _) in singles() {
        if s.dim() < 2 || name == "p3_o2" {
            continue;
        }
        for j in 0..s.dim() {
            let c = mu_equals_ain_check(&s, &[j], &Flag::identity(s.dim() - 1), 60).map_err(e2s)?;
            ensure(c.mu_dominates, format!("{name}, x{} = 0: mu below ain", j + 1))?;
        }
        others.push(name);
    }
    Ok(format!(
        "mu {}, ain {}, delta vol {}; mu >= ain also on {}",
        limit(&c.mu),
        limit(&c.ain),
        limit(&c.delta_vol),
        others.join(", ")
    ))
}

fn c12() -> Outcome {
    let (s, _) = single("squares");
    let v = MonomialValuation::new(vec![1, 0]).map_err(e2s)?;
    let c = valuation_checks(&s, &v, 20).map_err(e2s)?;
    ensure(c.infimum.is_zero(), format!("infimum {}", c.infimum))?;
    ensure(c.v_bounded_ok, "v-boundedness")?;
    ensure(c.sup_ratio_ok, format!("sup ratio {} outside slack {}", c.sup_ratio, c.slack))?;
    Ok(format!("infimum 0, witness {}, sup ratio {} within {}", c.witness, c.sup_ratio, c.slack))
}

fn c13() -> Outcome {
    let runs: [&[&str]; 9] = [
        &["volume", "p2_o1", "--mmax", "60"],
        &["body", "trapezoid"],
        &["restrict", "p3_o2", "--vanish", "3", "--mmax", "30"],
        &["fujita", "floor57", "--pmax", "8", "--kcap", "6"],
        &["multigraded", "linear_family", "--fiber", "1,0,1,1,1,2"],
        &["star", "staggered", "--pmax", "8"],
        &["mu", "p3_o2", "--vanish", "3", "--mmax", "30"],
        &["valuation", "squares", "--weights", "1,0", "--pmax", "20"],
        &["audit", "floor57", "--mmax", "10"],
    ];
    for r in runs {
        let path = specs_dir().join(format!("{}.toml", r[1]));
        let mut args = vec!["okounkov-lab".to_string(), r[0].to_string(), path.display().to_string()];
        args.extend(r[2..].iter().map(|s| s.to_string()));
        let a = cli::run_args(&args).map_err(e2s)?;
        let b = cli::run_args(&args).map_err(e2s)?;
        ensure(a.status == cli::EXIT_OK, format!("{} exited {}", r[0], a.status))?;
        ensure(!a.csv.is_empty() && a.csv == b.csv && a.svg == b.svg, format!("{} output differs", r[0]))?;
    }
    Ok("all nine subcommands byte-identical across two runs".into())
}

fn main() {
    let criteria: [Criterion; 13] = [
        (1, "volume law on the plane", c1),
        (2, "lattice normalization", c2),
        (3, "volume identity", c3),
        (4, "homogeneity", c4),
        (5, "Fujita approximation", c5),
        (6, "fibers of the global body", c6),
        (7, "log-concavity on the grid", c7),
        (8, "uniform multigraded p0", c8),
        (9, "multiplier ideal oracle", c9),
        (10, "property star", c10),
        (11, "reduced volume chain", c11),
        (12, "valuation suite", c12),
        (13, "determinism", c13),
    ];
    let mut failed = 0;
    for (n, title, f) in criteria {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {n:>2} PASS  {title} [{secs:.2}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {title} [{secs:.2}s]: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
