//! The `okounkov-lab` command line: one subcommand per family of checks, CSV tables on
//! stdout (and in `--out DIR`), SVG pictures in `--out DIR`.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fujita;
use crate::ideals::{self, Subadditivity};
use crate::multigraded;
use crate::okounkov;
use crate::rational::{self, Rational};
use crate::report::{ConvergenceTable, RunManifest, Table};
use crate::series::{Flag, GradedSeries, MultiGradedSeries};
use crate::spec::{self, SeriesSpec};
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;
pub const EXIT_SPEC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "okounkov-lab", version, about = "Okounkov bodies and asymptotic invariants of monomial graded linear series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Series definition file.
    pub spec: PathBuf,
    /// Directory for CSV and SVG files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume estimators along the degrees of the series.
    Volume {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mmax: Option<u32>,
        /// Relative tolerance on the last count estimate.
        #[arg(long, value_parser = parse_rational)]
        tol: Option<Rational>,
    },
    /// The Okounkov body and its lattice data.
    Body {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mmax: Option<u32>,
    },
    /// Volume of the restriction to a coordinate subspace.
    Restrict {
        #[command(flatten)]
        common: Common,
        /// 1-based coordinates that vanish on the subspace.
        #[arg(long, value_delimiter = ',', required = true)]
        vanish: Vec<usize>,
        #[arg(long)]
        mmax: Option<u32>,
    },
    /// Fujita approximation grid over `(p, k)`.
    Fujita {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_rational)]
        eps: Option<Rational>,
        #[arg(long)]
        pmax: Option<u32>,
        #[arg(long)]
        kcap: Option<u32>,
    },
    /// Global body, fiber volumes and the uniform Fujita check of a multigraded series.
    Multigraded {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_rational)]
        eps: Option<Rational>,
        #[arg(long)]
        pmax: Option<u32>,
        #[arg(long)]
        truncation: Option<u32>,
        /// Lower bound on the coordinates of the Fujita grid.
        #[arg(long, value_parser = parse_rational, default_value = "1/4")]
        lower: Rational,
        /// Denominator of the Fujita grid.
        #[arg(long, default_value_t = 4)]
        steps: u32,
        /// Denominator of the interior grid for the volume scan.
        #[arg(long, default_value_t = 11)]
        scan_steps: u32,
        /// Integral points whose fiber is compared with the induced series, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        fiber: Vec<u32>,
        /// Degree cap for the direct bodies in fiber comparisons.
        #[arg(long, default_value_t = 24)]
        mmax: u32,
    },
    /// Property (★), base ideals versus multiplier ideals and subadditivity.
    Star {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pmax: Option<u32>,
        #[arg(long)]
        kcap: Option<u32>,
        #[arg(long)]
        mcheck: Option<u32>,
    },
    /// Reduced volume against the asymptotic intersection on a coordinate subspace.
    Mu {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        vanish: Vec<usize>,
        #[arg(long)]
        mmax: Option<u32>,
        /// Relative tolerance on the pairwise residuals.
        #[arg(long, value_parser = parse_rational)]
        tol: Option<Rational>,
    },
    /// Asymptotic order along a toric valuation.
    Valuation {
        #[command(flatten)]
        common: Common,
        /// Weights on the homogeneous coordinates, e.g. `1,0`.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<i64>,
        #[arg(long)]
        pmax: Option<u32>,
    },
    /// Multiplicativity, generic finiteness, homogeneity and the volume identity.
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mmax: Option<u32>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Volume { .. } => "volume",
            Command::Body { .. } => "body",
            Command::Restrict { .. } => "restrict",
            Command::Fujita { .. } => "fujita",
            Command::Multigraded { .. } => "multigraded",
            Command::Star { .. } => "star",
            Command::Mu { .. } => "mu",
            Command::Valuation { .. } => "valuation",
            Command::Audit { .. } => "audit",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Volume { common, .. }
            | Command::Body { common, .. }
            | Command::Restrict { common, .. }
            | Command::Fujita { common, .. }
            | Command::Multigraded { common, .. }
            | Command::Star { common, .. }
            | Command::Mu { common, .. }
            | Command::Valuation { common, .. }
            | Command::Audit { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file: String,
    pub content: String,
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub csv: Vec<Artifact>,
    pub svg: Vec<Artifact>,
    pub notes: Vec<String>,
    pub status: i32,
}

enum Pending {
    Convergence(ConvergenceTable),
    Plain(Table),
}

struct Run {
    manifest: RunManifest,
    tables: Vec<Pending>,
    svg: Vec<Artifact>,
    notes: Vec<String>,
    status: i32,
}

impl Run {
    fn cap(&mut self, key: &str, value: impl ToString) {
        self.manifest = self.manifest.clone().cap(key, value);
    }

    fn table(&mut self, t: ConvergenceTable) {
        self.tables.push(Pending::Convergence(t));
    }

    fn plain(&mut self, t: Table) {
        self.tables.push(Pending::Plain(t));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn status(&mut self, code: i32) {
        self.status = self.status.max(code);
    }

    fn fail(&mut self, s: impl Into<String>) {
        self.note(s);
        self.status(EXIT_CHECK_FAILED);
    }

    fn error(&mut self, e: &Error) {
        self.note(format!("error: {e}"));
        self.status(exit_code(e));
    }

    fn finish(self) -> Outcome {
        let manifest = self.manifest;
        let csv = self
            .tables
            .iter()
            .map(|t| match t {
                Pending::Convergence(t) => Artifact { file: file_name(&t.name, "csv"), content: t.to_csv(&manifest) },
                Pending::Plain(t) => Artifact { file: file_name(&t.name, "csv"), content: t.to_csv(&manifest) },
            })
            .collect();
        Outcome { csv, svg: self.svg, notes: self.notes, status: self.status }
    }
}

fn file_name(name: &str, ext: &str) -> String {
    let stem: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("{stem}.{ext}")
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded(_) => EXIT_PARTIAL,
        Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::DimensionCap { .. }
        | Error::InvalidFlag(_)
        | Error::NegativeEntry(_)
        | Error::EmptyInput => EXIT_SPEC,
        _ => EXIT_CHECK_FAILED,
    }
}

fn q(x: &Rational) -> String {
    rational::format(x)
}

fn qs(v: &[Rational]) -> String {
    v.iter().map(q).collect::<Vec<_>>().join(" ")
}

fn summary(rows: Vec<(&str, String)>) -> Table {
    let mut t = Table::new("summary", &["key", "value"]);
    for (k, v) in rows {
        t.push(vec![k.to_string(), v]);
    }
    t
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "none".into())
}

/// Retries with half the degree cap until the computation fits; the reduced cap is noted.
fn shrinking<T>(run: &mut Run, mut m: u32, f: impl Fn(u32) -> Result<T>) -> Result<(T, u32)> {
    let asked = m;
    loop {
        match f(m) {
            Err(Error::CapExceeded(why)) if m > 1 => {
                run.note(format!("cap exceeded at mmax={m} ({why})"));
                m /= 2;
            }
            Ok(t) => {
                if m < asked {
                    run.status(EXIT_PARTIAL);
                    run.cap("partial_mmax", m);
                }
                return Ok((t, m));
            }
            Err(e) => return Err(e),
        }
    }
}

fn single(spec: &SeriesSpec) -> Result<&GradedSeries> {
    spec.single()
        .ok_or_else(|| Error::InvalidArgument(format!("{} is multigraded; this command needs a single series", spec.name())))
}

fn multi(spec: &SeriesSpec) -> Result<&MultiGradedSeries> {
    spec.multi().ok_or_else(|| Error::InvalidArgument(format!("{} is not multigraded", spec.name())))
}

fn spec_eps(spec: &SeriesSpec) -> Option<Rational> {
    spec.caps().eps.as_deref().and_then(|e| rational::parse(e).ok())
}

/// 1-based vanishing coordinates to the 0-based form and the flag of the subspace.
fn vanishing(series: &GradedSeries, vanish: &[usize]) -> Result<(Vec<usize>, Flag)> {
    let d = series.dim();
    if let Some(&j) = vanish.iter().find(|&&j| j == 0 || j > d) {
        return Err(Error::InvalidArgument(format!("vanishing coordinate {j} outside 1..={d}")));
    }
    let j0: Vec<usize> = vanish.iter().map(|j| j - 1).collect();
    let dv = series.restrict(&j0)?.dim();
    if dv == 0 {
        return Err(Error::ZeroDimensional);
    }
    Ok((j0, Flag::identity(dv)))
}

/// Parses the arguments and runs; clap errors map to exit 4 (0 for help and version).
pub fn run_args<I, T>(args: I) -> std::result::Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Ok(run(&Cli::try_parse_from(args)?.command))
}

pub fn run(command: &Command) -> Outcome {
    let path = &command.common().spec;
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => return Outcome { notes: vec![format!("{}: {e}", path.display())], status: EXIT_SPEC, ..Default::default() },
    };
    let mut run = Run {
        manifest: RunManifest::new(command.name(), &bytes),
        tables: Vec::new(),
        svg: Vec::new(),
        notes: Vec::new(),
        status: EXIT_OK,
    };
    let text = String::from_utf8_lossy(&bytes);
    let spec = match spec::parse_spec_str(&text) {
        Ok(s) => s,
        Err(errs) => {
            for e in errs.0 {
                run.note(format!("{}: {e}", path.display()));
            }
            run.status(EXIT_SPEC);
            return run.finish();
        }
    };
    if let Err(e) = dispatch(command, &spec, &mut run) {
        run.error(&e);
    }
    run.finish()
}

fn dispatch(command: &Command, spec: &SeriesSpec, run: &mut Run) -> Result<()> {
    let caps = spec.caps().clone();
    match command {
        Command::Volume { mmax, tol, .. } => {
            let s = single(spec)?;
            let (rep, m) = shrinking(run, mmax.or(caps.mmax).unwrap_or(100), |m| okounkov::volume_report(s, &spec.flag, m))?;
            run.cap("mmax", m);
            let mut count = rep.count_estimates.clone();
            if let Some(t) = tol {
                run.cap("tol", q(t));
                count = count.with_tolerance(t.clone());
                if count.within_tolerance() == Some(false) {
                    run.fail(format!("count estimate misses its target by more than {}", q(t)));
                }
            }
            run.plain(summary(vec![
                ("exponent", rep.exponent.to_string()),
                ("delta_lat", opt(&rep.delta_lat)),
                ("body_exact", rep.body.exact.to_string()),
                ("body_volume", q(&rep.body.body.volume())),
                ("normalized_target", rep.normalized_target.as_ref().map(q).unwrap_or_else(|| "none".into())),
                ("relative_error", count.relative_error().as_ref().map(q).unwrap_or_else(|| "none".into())),
            ]));
            run.table(count);
            run.table(rep.hull_estimates);
            body_svg(run, &rep.body.body, spec.name());
        }
        Command::Body { mmax, .. } => {
            let s = single(spec)?;
            let (b, m) = shrinking(run, mmax.or(caps.mmax).unwrap_or(24), |m| okounkov::okounkov_body(s, &spec.flag, m))?;
            run.cap("mmax", m);
            let d = s.dim();
            let fact = Rational::from_integer(rational::factorial(d));
            run.plain(summary(vec![
                ("exact", b.exact.to_string()),
                ("m_used", b.m_used.to_string()),
                ("volume", q(&b.body.volume())),
                ("normalized_volume", q(&(&fact * b.body.volume()))),
                ("lattice_rank", b.lattice.rank.to_string()),
                ("delta_lat", opt(&okounkov::degree_zero_index(&b.lattice))),
            ]));
            let mut header = vec!["vertex".to_string()];
            header.extend((1..=d).map(|i| format!("nu{i}")));
            let mut t = Table { name: "body_vertices".into(), header, rows: Vec::new() };
            for (i, v) in b.body.vertices().iter().enumerate() {
                let mut row = vec![i.to_string()];
                row.extend(v.iter().map(q));
                t.push(row);
            }
            run.plain(t);
            body_svg(run, &b.body, spec.name());
        }
        Command::Restrict { vanish, mmax, .. } => {
            let s = single(spec)?;
            let (j0, flag) = vanishing(s, vanish)?;
            run.cap("vanish", vanish.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" "));
            let (rep, m) = shrinking(run, mmax.or(caps.mmax).unwrap_or(100), |m| okounkov::restricted_volume(s, &j0, &flag, m))?;
            run.cap("mmax", m);
            run.plain(summary(vec![
                ("restricted_dim", flag.dim().to_string()),
                ("exponent", rep.exponent.to_string()),
                ("delta_lat", opt(&rep.delta_lat)),
                ("normalized_target", rep.normalized_target.as_ref().map(q).unwrap_or_else(|| "none".into())),
            ]));
            run.table(rep.count_estimates);
            run.table(rep.hull_estimates);
            body_svg(run, &rep.body.body, &format!("{} restricted", spec.name()));
        }
        Command::Fujita { eps, pmax, kcap, .. } => {
            let s = single(spec)?;
            let eps = eps.clone().or_else(|| spec_eps(spec)).unwrap_or_else(|| rational::ratio(1, 100));
            let p_cap = pmax.or(caps.pmax).unwrap_or(14);
            let k_cap = kcap.or(caps.kcap).unwrap_or(fujita::DEFAULT_K_CAP);
            run.cap("eps", q(&eps));
            run.cap("pmax", p_cap);
            run.cap("kcap", k_cap);
            let rep = fujita::fujita_report(s, &eps, p_cap, k_cap)?;
            run.plain(summary(vec![
                ("p0", opt(&rep.p0)),
                ("volume_estimate", q(&rep.volume_estimate)),
                ("p0_row_monotone", opt(&rep.p0.and_then(|p| rep.row(p)).map(|r| r.monotone))),
            ]));
            let mut rows = Table::new(
                "fujita_rows",
                &["p", "limit_estimate", "reference", "achieved_epsilon", "qualifies", "monotone", "still_rising"],
            );
            let mut ratios = ConvergenceTable::new("fujita_ratios", &["p", "k"]);
            for r in &rep.rows {
                rows.push(vec![
                    r.p.to_string(),
                    q(&r.limit_estimate),
                    q(&r.reference),
                    q(&r.achieved_epsilon),
                    r.qualifies.to_string(),
                    r.monotone.to_string(),
                    r.still_rising.to_string(),
                ]);
                ratios.rows.extend(r.ratios.rows.iter().cloned());
            }
            run.plain(rows);
            run.table(ratios);
            if rep.p0.is_none() {
                run.fail(format!("no p <= {p_cap} reaches epsilon {}", q(&eps)));
            }
        }
        Command::Multigraded { eps, pmax, truncation, lower, steps, scan_steps, fiber, mmax, .. } => {
            let w = multi(spec)?;
            let r = w.arity();
            let eps = eps.clone().or_else(|| spec_eps(spec)).unwrap_or_else(|| rational::ratio(1, 10));
            let p_cap = pmax.or(caps.pmax).unwrap_or(14);
            let trunc = truncation.or(caps.truncation).unwrap_or(14);
            for (k, v) in [("eps", q(&eps)), ("pmax", p_cap.to_string()), ("truncation", trunc.to_string())] {
                run.cap(k, v);
            }
            run.cap("grid", format!("lower {} steps {steps}", q(lower)));
            run.cap("scan_steps", scan_steps);
            let gb = multigraded::global_body(w, &spec.flag, trunc)?;
            let scan_grid = multigraded::simplex_grid(r, &rational::ratio(1, *scan_steps as i64), *scan_steps);
            let scan = multigraded::fiber_volume_scan(&gb, &scan_grid)?;
            let mut points = Table::new("fiber_scan", &["a", "volume", "homogeneous"]);
            for p in &scan.points {
                points.push(vec![qs(&p.a), q(&p.volume), p.homogeneous.to_string()]);
            }
            let mut mids = Table::new("midpoints", &["left", "right", "midpoint_volume", "holds", "certification"]);
            for m in &scan.midpoints {
                mids.push(vec![
                    qs(&scan.points[m.left].a),
                    qs(&scan.points[m.right].a),
                    q(&m.midpoint_volume),
                    m.holds.to_string(),
                    format!("{:?}", m.certification),
                ]);
            }
            let grid = multigraded::simplex_grid(r, lower, *steps);
            let check = multigraded::multigraded_fujita_check(w, &spec.flag, &grid, &eps, p_cap, trunc)?;
            let mut cells = Table::new("multigraded_fujita", &["p", "a", "ratio", "passes"]);
            for c in &check.table {
                cells.push(vec![c.p.to_string(), qs(&c.a), q(&c.ratio), c.passes.to_string()]);
            }
            let mut pointwise = Table::new("pointwise_p0", &["a", "p0"]);
            for (a, p) in grid.iter().zip(&check.pointwise_p0) {
                pointwise.push(vec![qs(a), opt(p)]);
            }
            let mut compare = Table::new("fiber_comparison", &["a", "interior", "fiber_vertices", "direct_vertices", "equal"]);
            for a in fiber.chunks(r) {
                if a.len() != r {
                    return Err(Error::InvalidArgument(format!("--fiber needs multiples of {r} entries")));
                }
                let c = multigraded::compare_fiber(&gb, w, &spec.flag, a, *mmax)?;
                let verts = |p: &crate::geometry::Polytope| {
                    p.vertices().iter().map(|v| format!("({})", qs(v))).collect::<Vec<_>>().join(" ")
                };
                let a_str = a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                compare.push(vec![a_str.clone(), c.interior.to_string(), verts(&c.fiber), verts(&c.direct), c.equal.to_string()]);
                if !c.equal {
                    run.fail(format!("fiber at ({a_str}) differs from the induced body"));
                }
            }
            run.plain(summary(vec![
                ("p0", opt(&check.p0)),
                ("exact_cone", gb.exact.to_string()),
                ("truncation", check.truncation.to_string()),
                ("midpoint_checks_hold", scan.all_hold().to_string()),
                ("pointwise_within_uniform", pointwise_within(&check).to_string()),
            ]));
            run.plain(points);
            run.plain(mids);
            run.plain(cells);
            run.plain(pointwise);
            if !fiber.is_empty() {
                run.plain(compare);
            }
            if !scan.all_hold() || scan.points.iter().any(|p| !p.homogeneous) {
                run.fail("a fiber volume inequality failed");
            }
            if check.p0.is_none() {
                run.fail(format!("no uniform p <= {p_cap} reaches epsilon {}", q(&eps)));
            }
        }
        Command::Star { pmax, kcap, mcheck, .. } => {
            let s = single(spec)?;
            let p_max = pmax.or(caps.pmax).unwrap_or(20);
            let k_cap = kcap.or(caps.kcap).unwrap_or(ideals::DEFAULT_K_CAP);
            let m_check = mcheck.or(caps.mcheck).unwrap_or(ideals::DEFAULT_M_CHECK);
            run.cap("pmax", p_max);
            run.cap("kcap", k_cap);
            run.cap("mcheck", m_check);
            let rep = ideals::check_star_with(s, p_max, k_cap)?;
            let fg = ideals::is_finitely_generated(s, p_max, m_check)?;
            let n = s.dim() + 1;
            let mut header = vec!["p".to_string()];
            header.extend((0..n).map(|i| format!("n{i}")));
            let mut shifts = Table { name: "star_shifts".into(), header, rows: Vec::new() };
            for (p, v) in &rep.per_p_shifts {
                let mut row = vec![p.to_string()];
                row.extend(v.iter().map(|x| x.to_string()));
                shifts.push(row);
            }
            let mut sub = Table::new("subadditivity", &["p", "k", "result"]);
            let mut sub_fails = false;
            for (p, _) in rep.per_p_shifts.iter().filter(|(p, _)| 2 * p <= p_max) {
                let r = ideals::subadditivity_check(s, *p, 2, k_cap)?;
                sub_fails |= r == Subadditivity::Fails;
                sub.push(vec![p.to_string(), "2".into(), format!("{r:?}")]);
            }
            run.plain(summary(vec![
                ("witness", rep.witness.as_ref().map(|w| w.to_string()).unwrap_or_else(|| "none".into())),
                ("stabilized", rep.stabilized.to_string()),
                ("base_in_multiplier", rep.base_in_multiplier.to_string()),
                ("finitely_generated_degree", opt(&fg)),
            ]));
            run.plain(shifts);
            run.plain(sub);
            if n == 2 {
                if let Some((p, _)) = rep.per_p_shifts.first() {
                    let b = ideals::base_ideal(s, *p)?;
                    let j = ideals::asymptotic_multiplier_ideal(s, *p, k_cap)?.ideal;
                    run.svg.push(Artifact {
                        file: format!("base_ideal_p{p}.svg"),
                        content: svg::staircase_svg(&b, &format!("b_{p}"))?,
                    });
                    run.svg.push(Artifact {
                        file: format!("multiplier_ideal_p{p}.svg"),
                        content: svg::staircase_svg(&j, &format!("J_{p}"))?,
                    });
                }
            }
            if rep.witness.is_none() {
                run.fail(format!("no (★) witness up to degree {p_max}"));
            } else if !rep.stabilized {
                run.note("the witness did not stabilize in the first half of the range");
            }
            if !rep.base_in_multiplier {
                run.fail("some base ideal is not inside its multiplier ideal");
            }
            if sub_fails {
                run.fail("subadditivity failed");
            }
        }
        Command::Mu { vanish, mmax, tol, .. } => {
            let s = single(spec)?;
            let (j0, flag) = vanishing(s, vanish)?;
            run.cap("vanish", vanish.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" "));
            let (c, m) = shrinking(run, mmax.or(caps.mmax).unwrap_or(100), |m| ideals::mu_equals_ain_check(s, &j0, &flag, m))?;
            run.cap("mmax", m);
            let [r1, r2, r3] = &c.residuals;
            run.plain(summary(vec![
                ("delta", c.delta.to_string()),
                ("witness", c.witness.to_string()),
                ("residual_mu_ain", q(r1)),
                ("residual_mu_delta_vol", q(r2)),
                ("residual_ain_delta_vol", q(r3)),
                ("mu_dominates_ain", c.mu_dominates.to_string()),
            ]));
            run.table(c.mu);
            run.table(c.ain);
            run.table(c.delta_vol);
            if !c.mu_dominates {
                run.fail("mu < ain on some row");
            }
            if let Some(t) = tol {
                run.cap("tol", q(t));
                if c.residuals.iter().any(|r| r > t) {
                    run.fail(format!("a residual exceeds {}", q(t)));
                }
            }
        }
        Command::Valuation { weights, pmax, .. } => {
            let s = single(spec)?;
            let p_max = pmax.or(caps.pmax).unwrap_or(20);
            run.cap("pmax", p_max);
            run.cap("weights", weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" "));
            let v = ideals::MonomialValuation::new(weights.clone())?;
            let order = ideals::asymptotic_order(s, &v, p_max)?;
            let c = ideals::valuation_checks(s, &v, p_max)?;
            run.plain(summary(vec![
                ("infimum", q(&c.infimum)),
                ("witness", c.witness.to_string()),
                ("v_bounded_ok", c.v_bounded_ok.to_string()),
                ("sup_ratio", q(&c.sup_ratio)),
                ("slack", q(&c.slack)),
                ("sup_ratio_ok", c.sup_ratio_ok.to_string()),
            ]));
            run.table(order.per_p);
            if !c.v_bounded_ok || !c.sup_ratio_ok {
                run.fail("valuation checks failed");
            }
        }
        Command::Audit { mmax, .. } => {
            let m = mmax.unwrap_or(12);
            run.cap("mmax", m);
            let mut t = Table::new("audit", &["check", "result", "detail"]);
            match &spec.kind {
                spec::SeriesKind::Single(s) => audit_single(run, &mut t, s, &spec.flag, m)?,
                spec::SeriesKind::Multi(w) => {
                    let box_size = m.min(spec::AUDIT_BOX + 1);
                    record(
                        run,
                        &mut t,
                        "multiplicativity",
                        w.audit_multiplicativity(box_size).map(|_| format!("box {box_size}")),
                    );
                    record(
                        run,
                        &mut t,
                        "gf_prime",
                        multigraded::global_body(w, &spec.flag, m).map(|g| format!("exact cone {}", g.exact)),
                    );
                }
            }
            run.plain(t);
        }
    }
    Ok(())
}

fn pointwise_within(check: &multigraded::MultiFujita) -> bool {
    match check.p0 {
        Some(p0) => check.pointwise_p0.iter().all(|p| p.is_some_and(|p| p <= p0)),
        None => false,
    }
}

fn body_svg(run: &mut Run, p: &crate::geometry::Polytope, title: &str) {
    if p.dim() == 2 {
        if let Ok(s) = svg::polytope_svg(p, title) {
            run.svg.push(Artifact { file: "body.svg".into(), content: s });
        }
    }
}

/// One audit row; a failure marks the run failed but later checks still run.
fn record(run: &mut Run, t: &mut Table, check: &str, r: Result<String>) {
    match r {
        Ok(detail) => t.push(vec![check.into(), "ok".into(), detail]),
        Err(Error::CapExceeded(why)) => {
            run.status(EXIT_PARTIAL);
            t.push(vec![check.into(), "cap exceeded".into(), why.replace(',', ";")]);
        }
        Err(e) => {
            run.fail(format!("{check}: {e}"));
            t.push(vec![check.into(), "failed".into(), e.to_string().replace(',', ";")]);
        }
    }
}

fn audit_single(run: &mut Run, t: &mut Table, s: &GradedSeries, flag: &Flag, m: u32) -> Result<()> {
    let m = match s.listed_degree() {
        Some(top) if top < m => {
            run.note(format!("explicit series: audit limited to the listed degrees <= {top}"));
            run.cap("audit_mmax", top);
            top
        }
        _ => m,
    };
    record(run, t, "multiplicativity", s.audit_multiplicativity(m).map(|_| format!("degrees <= {m}")));
    let e = s.exponent(m)?;
    t.push(vec!["exponent".into(), e.to_string(), String::new()]);
    t.push(vec!["iitaka_dim".into(), opt(&s.iitaka_dim(m)?), String::new()]);
    let gf = s.gf_report(m)?;
    t.push(vec!["generically_finite".into(), gf.is_gf.to_string(), format!("delta {}", opt(&gf.delta))]);
    for h in 1..=3 {
        let r = okounkov::homogeneity_check(s, flag, h, m).and_then(|c| {
            if c.holds {
                Ok(format!("exact {}", c.exact))
            } else {
                Err(Error::Refused(format!("body of the {h}-th Veronese is not {h} times the body")))
            }
        });
        record(run, t, &format!("homogeneity h={h}"), r);
    }
    if gf.is_gf {
        let id = okounkov::check_fujita_identity(s, flag, m)?;
        let res = id.last_residual();
        t.push(vec![
            "fujita_identity".into(),
            if res.is_zero() { "exact".into() } else { q(&res) },
            format!("delta {} delta_lat {} agree {}", id.delta, id.delta_lat, id.delta_agrees),
        ]);
        run.table(id.residuals);
    }
    Ok(())
}

/// Writes the outcome: CSV to stdout, notes to stderr, files to `out`.
pub fn emit(outcome: &Outcome, out: Option<&std::path::Path>) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for (i, a) in outcome.csv.iter().enumerate() {
        if i > 0 {
            writeln!(lock)?;
        }
        lock.write_all(a.content.as_bytes())?;
    }
    for n in &outcome.notes {
        eprintln!("{n}");
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        for a in outcome.csv.iter().chain(&outcome.svg) {
            std::fs::write(dir.join(&a.file), &a.content)?;
        }
    }
    Ok(())
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_SPEC } else { EXIT_OK };
        }
    };
    let outcome = run(&cli.command);
    match emit(&outcome, cli.command.common().out.as_deref()) {
        Ok(()) => outcome.status,
        Err(e) => {
            eprintln!("cannot write output: {e}");
            EXIT_SPEC
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_run() -> Run {
        Run { manifest: RunManifest::new("test", b""), tables: Vec::new(), svg: Vec::new(), notes: Vec::new(), status: EXIT_OK }
    }

    #[test]
    fn shrinking_marks_partial_runs() {
        let mut run = empty_run();
        let (got, m) =
            shrinking(&mut run, 100, |m| if m > 30 { Err(Error::CapExceeded(format!("m = {m}"))) } else { Ok(m) }).unwrap();
        assert_eq!((got, m), (25, 25));
        assert_eq!(run.status, EXIT_PARTIAL);
        assert_eq!(run.notes.len(), 2);
        assert!(run.manifest.caps.contains(&("partial_mmax".to_string(), "25".to_string())));

        let mut run = empty_run();
        assert_eq!(shrinking(&mut run, 8, Ok).unwrap(), (8, 8));
        assert_eq!(run.status, EXIT_OK);
    }

    #[test]
    fn error_classes() {
        assert_eq!(exit_code(&Error::CapExceeded("x".into())), EXIT_PARTIAL);
        assert_eq!(exit_code(&Error::EmptyInput), EXIT_SPEC);
        assert_eq!(exit_code(&Error::EmptyFiber), EXIT_CHECK_FAILED);
    }
}
