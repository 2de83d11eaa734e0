//! Series definition files.
//!
//! ```toml
//! name = "floor57"
//! dim = 2
//! mode = "rule"
//!
//! [rule]
//! name = "floor_ratio"
//! num = 5
//! den = 7
//! coord = 1        # 1-based
//!
//! [caps]
//! mmax = 140
//! ```
//!
//! Other modes use `[complete] vertices = [[...]]`, `[generated] gens = [[exps..., degree]]`
//! and `[explicit.degrees] "1" = [[...]]`. A multigraded file sets `mode = "multigraded"`,
//! `arity`, optional `support` rows and one `[[factor]]` table per factor, each carrying
//! its own `mode` and mode table.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{ExpVec, Polytope};
use crate::rational::{self, Rational};
use crate::series::{Flag, GradedSeries, MultiGradedSeries, Rule};

/// Degrees checked for `S_k + S_l ⊆ S_{k+l}` when a file lists sets by hand.
pub const AUDIT_DEGREE: u32 = 8;
pub const AUDIT_BOX: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Number::Int(n) => Ok(rational::int(*n)),
            Number::Text(s) => rational::parse(s).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dehomogenize: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
}

/// Default caps for the subcommands; command-line flags override them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mmax: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmax: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kcap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcheck: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompleteDef {
    pub vertices: Vec<Vec<Number>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratedDef {
    pub gens: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDef {
    pub name: String,
    pub num: u32,
    pub den: u32,
    pub coord: usize,
    #[serde(default = "one")]
    pub bound: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitDef {
    pub degrees: BTreeMap<String, Vec<Vec<i64>>>,
}

/// One single-graded series as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<CompleteDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<GeneratedDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<ExplicitDef>,
}

/// The whole file. Field order matters for serialization: plain keys before tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    pub dim: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagDef>,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<CompleteDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<GeneratedDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<ExplicitDef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factor: Vec<SeriesDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecErrors(pub Vec<SpecError>);

impl fmt::Display for SpecErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", lines.join("\n"))
    }
}

impl std::error::Error for SpecErrors {}

#[derive(Debug, Clone)]
pub enum SeriesKind {
    Single(GradedSeries),
    Multi(MultiGradedSeries),
}

#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub definition: SpecFile,
    pub kind: SeriesKind,
    pub flag: Flag,
}

impl SeriesSpec {
    pub fn name(&self) -> &str {
        &self.definition.name
    }

    pub fn dim(&self) -> usize {
        self.definition.dim
    }

    pub fn caps(&self) -> &Caps {
        &self.definition.caps
    }

    pub fn single(&self) -> Option<&GradedSeries> {
        match &self.kind {
            SeriesKind::Single(s) => Some(s),
            SeriesKind::Multi(_) => None,
        }
    }

    pub fn multi(&self) -> Option<&MultiGradedSeries> {
        match &self.kind {
            SeriesKind::Multi(m) => Some(m),
            SeriesKind::Single(_) => None,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.definition).expect("spec serializes")
    }
}

/// 1-based line of the first `[key...]` header or `key =` assignment.
fn line_of(src: &str, key: &str) -> Option<usize> {
    src.lines()
        .position(|l| {
            let t = l.trim_start();
            t.starts_with(&format!("[{key}")) || t.starts_with(&format!("[[{key}")) || {
                t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
            }
        })
        .map(|i| i + 1)
}

struct Errors<'a> {
    src: &'a str,
    list: Vec<SpecError>,
}

impl Errors<'_> {
    fn push(&mut self, key: &str, message: impl Into<String>) {
        let line = line_of(self.src, key);
        self.list.push(SpecError { line, message: message.into() });
    }
}

pub fn parse_spec(path: &Path) -> Result<SeriesSpec, SpecErrors> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| SpecErrors(vec![SpecError { line: None, message: format!("{}: {e}", path.display()) }]))?;
    parse_spec_str(&src)
}

pub fn parse_spec_str(src: &str) -> Result<SeriesSpec, SpecErrors> {
    let definition: SpecFile = toml::from_str(src).map_err(|e| {
        let line = e.span().map(|s| src[..s.start].matches('\n').count() + 1);
        SpecErrors(vec![SpecError { line, message: e.message().to_string() }])
    })?;
    let mut errs = Errors { src, list: Vec::new() };
    let flag = build_flag(&definition, &mut errs);
    let kind = if definition.mode == "multigraded" {
        build_multi(&definition, &mut errs).map(SeriesKind::Multi)
    } else {
        let top = SeriesDef {
            name: Some(definition.name.clone()),
            mode: definition.mode.clone(),
            bound: definition.bound,
            complete: definition.complete.clone(),
            generated: definition.generated.clone(),
            rule: definition.rule.clone(),
            explicit: definition.explicit.clone(),
        };
        if !definition.factor.is_empty() || definition.arity.is_some() || definition.support.is_some() {
            errs.push("factor", "factor, arity and support need mode = \"multigraded\"");
        }
        build_series(&top, definition.dim, "", &mut errs).map(SeriesKind::Single)
    };
    if let Some(eps) = &definition.caps.eps {
        if rational::parse(eps).map_or(true, |q| q <= Rational::from_integer(0.into())) {
            errs.push("eps", format!("caps.eps = {eps:?} is not a positive rational"));
        }
    }
    match (kind, flag) {
        (Some(kind), Some(flag)) if errs.list.is_empty() => Ok(SeriesSpec { definition, kind, flag }),
        _ => Err(SpecErrors(errs.list)),
    }
}

fn build_flag(def: &SpecFile, errs: &mut Errors) -> Option<Flag> {
    let Some(f) = &def.flag else { return Some(Flag::identity(def.dim)) };
    let perm = f.permutation.clone().unwrap_or_else(|| (1..=def.dim).collect());
    match Flag::new(def.dim, f.dehomogenize.unwrap_or(0), perm, f.matrix.clone()) {
        Ok(flag) => Some(flag),
        Err(e) => {
            errs.push("flag", e.to_string());
            None
        }
    }
}

fn build_multi(def: &SpecFile, errs: &mut Errors) -> Option<MultiGradedSeries> {
    let Some(arity) = def.arity else {
        errs.push("mode", "multigraded mode needs arity");
        return None;
    };
    if def.factor.len() != arity {
        errs.push("factor", format!("arity {arity} but {} [[factor]] tables", def.factor.len()));
        return None;
    }
    if def.complete.is_some() || def.generated.is_some() || def.rule.is_some() || def.explicit.is_some() {
        errs.push("mode", "multigraded files put mode tables inside [[factor]]");
    }
    let factors: Vec<Option<GradedSeries>> = def.factor.iter().map(|f| build_series(f, def.dim, "factor.", errs)).collect();
    let factors: Option<Vec<GradedSeries>> = factors.into_iter().collect();
    let multi = MultiGradedSeries::product(factors?, def.support.clone().unwrap_or_default());
    match multi.and_then(|m| m.audit_multiplicativity(AUDIT_BOX).map(|_| m)) {
        Ok(m) => Some(m.named(&def.name)),
        Err(e) => {
            errs.push("support", e.to_string());
            None
        }
    }
}

fn build_series(def: &SeriesDef, dim: usize, prefix: &str, errs: &mut Errors) -> Option<GradedSeries> {
    let present = [
        ("complete", def.complete.is_some()),
        ("generated", def.generated.is_some()),
        ("rule", def.rule.is_some()),
        ("explicit", def.explicit.is_some()),
    ];
    if !present.iter().any(|(m, _)| *m == def.mode) {
        errs.push("mode", format!("unknown mode {:?}; expected complete, generated, rule, explicit or multigraded", def.mode));
        return None;
    }
    for (m, there) in present {
        if m == def.mode && !there {
            errs.push("mode", format!("mode {m:?} needs a [{prefix}{m}] table"));
            return None;
        }
        if m != def.mode && there {
            errs.push(&format!("{prefix}{m}"), format!("[{prefix}{m}] given but mode is {:?}", def.mode));
        }
    }
    let built = match def.mode.as_str() {
        "complete" => complete(def.complete.as_ref()?, dim).map_err(|e| (format!("{prefix}complete"), e)),
        "generated" => generated(def.generated.as_ref()?, dim).map_err(|e| (format!("{prefix}generated"), e)),
        "rule" => rule(def.rule.as_ref()?, dim).map_err(|e| (format!("{prefix}rule"), e)),
        _ => explicit(def.explicit.as_ref()?, dim).map_err(|e| (format!("{prefix}explicit"), e)),
    };
    let series = match built {
        Ok(s) => s,
        Err((key, e)) => {
            errs.push(&key, e);
            return None;
        }
    };
    let series = match def.bound {
        Some(b) => match series.with_bound(b) {
            Ok(s) => s,
            Err(e) => {
                errs.push("bound", e.to_string());
                return None;
            }
        },
        None => series,
    };
    Some(match &def.name {
        Some(n) => series.named(n),
        None => series,
    })
}

fn complete(def: &CompleteDef, dim: usize) -> Result<GradedSeries, String> {
    let mut pts = Vec::new();
    for v in &def.vertices {
        if v.len() != dim {
            return Err(format!("vertex of length {} in dimension {dim}", v.len()));
        }
        pts.push(v.iter().map(Number::to_rational).collect::<Result<Vec<_>, _>>()?);
    }
    let p = Polytope::hull(&pts).map_err(|e| e.to_string())?;
    GradedSeries::complete(p).map_err(|e| e.to_string())
}

fn generated(def: &GeneratedDef, dim: usize) -> Result<GradedSeries, String> {
    let mut gens = Vec::new();
    for g in &def.gens {
        if g.len() != dim + 1 {
            return Err(format!("generator {g:?} must list {dim} exponents and a degree"));
        }
        let deg = u32::try_from(g[dim]).map_err(|_| format!("generator {g:?} has a negative degree"))?;
        gens.push((ExpVec::of(&g[..dim]), deg));
    }
    GradedSeries::generated(dim, gens).map_err(|e| e.to_string())
}

fn rule(def: &RuleDef, dim: usize) -> Result<GradedSeries, String> {
    if def.coord == 0 || def.coord > dim {
        return Err(format!("rule coord {} outside 1..={dim}", def.coord));
    }
    let (num, den, coord, bound) = (def.num, def.den, def.coord - 1, def.bound);
    let r = match def.name.as_str() {
        "floor_ratio" => Rule::FloorRatio { num, den, coord, bound },
        "floor_sqrt" => Rule::FloorSqrt { num, den, coord, bound },
        other => return Err(format!("unknown rule {other:?}; expected floor_ratio or floor_sqrt")),
    };
    GradedSeries::rule(dim, r).map_err(|e| e.to_string())
}

fn explicit(def: &ExplicitDef, dim: usize) -> Result<GradedSeries, String> {
    let mut degrees = BTreeMap::new();
    for (k, pts) in &def.degrees {
        let m: u32 = k.parse().map_err(|_| format!("degree key {k:?} is not a nonnegative integer"))?;
        if let Some(p) = pts.iter().find(|p| p.len() != dim) {
            return Err(format!("point {p:?} in degree {m} has length {} in dimension {dim}", p.len()));
        }
        degrees.insert(m, pts.iter().map(|p| ExpVec::of(p)).collect());
    }
    let top = degrees.keys().copied().max().unwrap_or(0).clamp(1, AUDIT_DEGREE);
    let s = GradedSeries::explicit(dim, degrees).map_err(|e| e.to_string())?;
    s.audit_multiplicativity(top).map_err(|e| e.to_string())?;
    Ok(s)
}
