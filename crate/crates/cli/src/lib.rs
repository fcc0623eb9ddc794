//! Command-line front end: argument and config-file handling, dispatch to
//! the library, and JSON / CSV / text report emission.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cyclodyn::growth::{self, DegenerateClass, Place, Precision};
use cyclodyn::parse::{parse_cyc, parse_map, parse_rational_expr};
use cyclodyn::pencil::{self, HypothesisVerdict};
use cyclodyn::ratmap::{iterate_term_counts, OrbitVerdict, SparsityOptions, DEFAULT_DEGREE_CAP};
use cyclodyn::search::{self, SearchConfig, StartSet, Target};
use cyclodyn::special::{self, SpecialKind};
use cyclodyn::cyclo::{clear_denominators, cyclotomic_polynomial, house};
use cyclodyn::interval::Round;
use cyclodyn::rational::padic_abs;
use cyclodyn::{CycNum, Error, Poly, RatMap};

pub const SCHEMA: u32 = 1;
pub const PRECISION_ENV: &str = "CYCLODYN_PRECISION_BITS";

/// Exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const RESOURCE_CAP: i32 = 3;
    pub const INDETERMINATE: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "cyclodyn", version, about = "Roots of unity in orbits of rational maps over cyclotomic fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Read the run configuration from a TOML or JSON file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here and print the text summary to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Starting precision for certified comparisons [default: $CYCLODYN_PRECISION_BITS or 128].
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Precision at which an undecided comparison becomes an error [default: 4096].
    #[arg(long, global = true)]
    pub precision_cap: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel commands [default: all cores].
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print the text summary instead of JSON on stdout.
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Iterate a map from a start point until a pole, a target hit or the depth limit.
    Orbit(OrbitArgs),
    /// Formal iterate h^(n) as a reduced rational function.
    Iterate(IterateArgs),
    /// Term counts of iterates against the lower bound.
    Sparsity(SparsityArgs),
    /// Absolute values along an orbit, degenerate classes, or randomized suites.
    Growth(GrowthArgs),
    /// The constants L_h, the threshold M and the term-count bound.
    Bounds(BoundsArgs),
    /// Decide whether a map is conjugate to a signed power or Chebyshev map.
    Special(SpecialArgs),
    /// Exhaustive search for orbits reaching a target.
    Search(SearchArgs),
    /// Root search for the pencils f(X) - Y^m g(X).
    Hypothesis(HypothesisArgs),
    /// Replay the worked examples (pole convention and the d - e <= 1 cases).
    Demo(DemoArgs),
    /// Exact arithmetic on cyclotomic elements: value, order, house, p-adic size.
    Field(FieldArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Orbit(_) => "orbit",
            Command::Iterate(_) => "iterate",
            Command::Sparsity(_) => "sparsity",
            Command::Growth(_) => "growth",
            Command::Bounds(_) => "bounds",
            Command::Special(_) => "special",
            Command::Search(_) => "search",
            Command::Hypothesis(_) => "hypothesis",
            Command::Demo(_) => "demo",
            Command::Field(_) => "field",
        }
    }
}

fn d_depth() -> usize {
    10
}
fn d_none() -> String {
    "none".into()
}
fn d_n() -> u32 {
    2
}
fn d_n_max() -> u32 {
    12
}
fn d_place() -> String {
    "inf".into()
}
fn d_steps() -> usize {
    8
}
fn d_cases() -> usize {
    100
}
fn d_one() -> String {
    "1".into()
}
fn d_special_bound() -> u64 {
    special::DEFAULT_SPLITTING_CONDUCTOR
}
fn d_search_depth() -> usize {
    4
}
fn d_start_set() -> String {
    "roots:12".into()
}
fn d_target() -> String {
    "root-of-unity".into()
}
fn d_size_cap() -> u64 {
    1 << 20
}
fn d_pencil_bound() -> u64 {
    pencil::DEFAULT_CONDUCTOR_BOUND
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct OrbitArgs {
    /// Rational map such as "(X^2 + 1)/X"; `z<n>` denotes exp(2 pi i / n).
    #[arg(long)]
    pub map: String,
    /// Start point, a cyclotomic literal such as "1 + z3".
    #[arg(long)]
    pub start: String,
    #[arg(long, default_value_t = d_depth())]
    #[serde(default = "d_depth")]
    pub depth: usize,
    /// none | root-of-unity | house:<A> | radical:<a>:<n>
    #[arg(long, default_value_t = d_none())]
    #[serde(default = "d_none")]
    pub target: String,
    #[arg(long, default_value_t = d_size_cap())]
    #[serde(default = "d_size_cap")]
    pub size_cap_bits: u64,
    /// After a target hit, check house(alpha_l) <= L_h for this A.
    #[arg(long)]
    #[serde(default)]
    pub backstop: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct IterateArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long, default_value_t = d_n())]
    #[serde(default = "d_n")]
    pub n: u32,
    /// Also report the monic conjugate h_mu.
    #[arg(long)]
    #[serde(default)]
    pub monic: bool,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SparsityArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long, default_value_t = d_n_max())]
    #[serde(default = "d_n_max")]
    pub n_max: u32,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct GrowthArgs {
    #[arg(long)]
    #[serde(default)]
    pub map: Option<String>,
    #[arg(long)]
    #[serde(default)]
    pub start: Option<String>,
    /// inf | inf:<k> (embedding zeta -> zeta^k) | <prime>
    #[arg(long, default_value_t = d_place())]
    #[serde(default = "d_place")]
    pub place: String,
    #[arg(long, default_value_t = d_steps())]
    #[serde(default = "d_steps")]
    pub steps: usize,
    /// Classify a map with d - e <= 1 at the prime given by --place.
    #[arg(long)]
    #[serde(default)]
    pub degenerate: bool,
    /// Run a randomized suite instead: padic | archimedean | degenerate.
    #[arg(long)]
    #[serde(default)]
    pub suite: Option<String>,
    #[arg(long, default_value_t = d_cases())]
    #[serde(default = "d_cases")]
    pub cases: usize,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[allow(non_snake_case)]
pub struct BoundsArgs {
    #[arg(long)]
    pub map: String,
    /// House threshold A for L_h.
    #[arg(long = "A", default_value_t = d_one())]
    #[serde(default = "d_one")]
    pub A: String,
    /// Height constant B for the threshold M.
    #[arg(long = "B")]
    #[serde(default)]
    pub B: Option<String>,
    /// Iterate index for the term-count bound.
    #[arg(long)]
    #[serde(default)]
    pub n: Option<u32>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SpecialArgs {
    #[arg(long)]
    pub map: String,
    /// Largest conductor searched for witness radicals.
    #[arg(long, default_value_t = d_special_bound())]
    #[serde(default = "d_special_bound")]
    pub conductor_bound: u64,
    /// Conjugate the map by this Mobius map, e.g. "(2*X + 1)/(X - 1)", first.
    #[arg(long)]
    #[serde(default)]
    pub conjugate_by: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SearchArgs {
    #[arg(long)]
    pub map: String,
    /// roots:<N> | box:<N>:<H>
    #[arg(long, default_value_t = d_start_set())]
    #[serde(default = "d_start_set")]
    pub start_set: String,
    #[arg(long, default_value_t = d_search_depth())]
    #[serde(default = "d_search_depth")]
    pub depth: usize,
    /// root-of-unity | house:<A> | radical:<a>:<n>
    #[arg(long, default_value_t = d_target())]
    #[serde(default = "d_target")]
    pub target: String,
    #[arg(long, default_value_t = d_size_cap())]
    #[serde(default = "d_size_cap")]
    pub size_cap_bits: u64,
    /// Also write the hits as CSV.
    #[arg(long)]
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct HypothesisArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long, default_value_t = d_pencil_bound())]
    #[serde(default = "d_pencil_bound")]
    pub conductor_bound: u64,
    /// Largest degree of numerator and denominator of a root [default: 2 deg f].
    #[arg(long)]
    #[serde(default)]
    pub degree_bound: Option<u64>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq, Default)]
pub struct DemoArgs {}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FieldArgs {
    /// Element to evaluate, e.g. "1/(1 + z3)"; repeatable.
    #[arg(long = "value")]
    #[serde(default)]
    pub values: Vec<String>,
    /// Also print the cyclotomic polynomial of this order.
    #[arg(long)]
    #[serde(default)]
    pub cyclotomic: Option<u64>,
    /// Prime for the p-adic absolute value of rational elements.
    #[arg(long)]
    #[serde(default)]
    pub prime: Option<u64>,
}

fn env_precision() -> u32 {
    std::env::var(PRECISION_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(128)
}

fn d_cap() -> u32 {
    4096
}

/// A complete, serializable description of one run.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default = "env_precision")]
    pub precision_bits: u32,
    #[serde(default = "d_cap")]
    pub precision_cap_bits: u32,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, precision_bits: env_precision(), precision_cap_bits: d_cap(), seed: 0 }
    }

    fn precision(&self) -> Precision {
        Precision { start_bits: self.precision_bits, cap_bits: self.precision_cap_bits }
    }

    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
        }
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        // TOML has no null; unset options are simply left out
        let mut v = serde_json::to_value(self).map_err(|e| CliError::Config(e.to_string()))?;
        if let Value::Object(m) = &mut v {
            m.retain(|_, x| !x.is_null());
        }
        toml::to_string(&v).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Io(_) => exit::IO,
            CliError::Core(Error::ResourceCap(_)) => exit::RESOURCE_CAP,
            CliError::Core(Error::IndeterminateComparison { .. }) => exit::INDETERMINATE,
            CliError::Core(_) => exit::CONFIG,
        }
    }
}

/// Result of a run: the JSON payload and a short human-readable summary.
pub struct Outcome {
    pub result: Value,
    pub text: String,
}

fn field_cmd(a: &FieldArgs, prec: Precision) -> Result<Outcome, CliError> {
    if let Some(p) = a.prime {
        if !cyclodyn::rational::is_prime(p) {
            return Err(CliError::Config(format!("--prime {p} is not prime")));
        }
    }
    let mut lines = Vec::new();
    let phi = match a.cyclotomic {
        Some(0) => return Err(CliError::Config("--cyclotomic must be at least 1".into())),
        Some(n) => {
            let terms = cyclotomic_polynomial(n)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(i, c)| (i as u64, CycNum::from_rational(&cyclodyn::Rational::from_integer(c.into()))))
                .collect();
            let phi = Poly::from_terms(terms).to_string();
            lines.push(format!("Phi_{n} = {phi}"));
            Some(phi)
        }
        None => None,
    };
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for v in &a.values {
        let x = cyc_arg("value", v)?;
        let order = x.root_of_unity_order();
        let hv = house(&x, prec.start_bits);
        let padic = match (a.prime, x.to_rational()) {
            (Some(p), Some(q)) => Some(padic_abs(&q, p).to_string()),
            _ => None,
        };
        let mut line = format!("{v} = {x}; order {}; house in [{}, {}]", order.map_or("none".into(), |o| o.to_string()), hv.lower.to_decimal(12, Round::Down), hv.upper.to_decimal(12, Round::Up));
        if let Some(pa) = &padic {
            line.push_str(&format!("; |.|_{} = {pa}", a.prime.unwrap()));
        }
        lines.push(line);
        rows.push(json!({
            "input": v,
            "value": x,
            "expr": x.to_string(),
            "conductor": x.conductor(),
            "root_of_unity_order": order,
            "house": hv,
            "padic_abs": padic,
        }));
        values.push(x);
    }
    let d = clear_denominators(&values).to_string();
    if !values.is_empty() {
        lines.push(format!("common denominator {d}"));
    }
    let result = json!({ "cyclotomic": phi, "values": rows, "common_denominator": d });
    Ok(Outcome { result, text: lines.join("\n") })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn map_arg(s: &str) -> Result<RatMap, CliError> {
    parse_map(s).map_err(|e| CliError::Config(format!("--map {s:?}: {e}")))
}

fn cyc_arg(name: &str, s: &str) -> Result<CycNum, CliError> {
    parse_cyc(s).map_err(|e| CliError::Config(format!("--{name} {s:?}: {e}")))
}

/// A map of degree one, read as `(aX + b)/(cX + d)`.
fn mobius_arg(s: &str) -> Result<special::Mobius, CliError> {
    let bad = |why: String| CliError::Config(format!("--conjugate-by {s:?}: {why}"));
    let l = parse_map(s).map_err(|e| bad(e.to_string()))?;
    if l.degree() != 1 {
        return Err(bad("not a Mobius map".into()));
    }
    let (f, g) = (l.num(), l.den());
    special::Mobius::new(f.coeff(1), f.coeff(0), g.coeff(1), g.coeff(0)).map_err(|e| bad(e.to_string()))
}

fn rational_arg(name: &str, s: &str) -> Result<cyclodyn::Rational, CliError> {
    parse_rational_expr(s).map_err(|e| CliError::Config(format!("--{name} {s:?}: {e}")))
}

fn required<'a>(name: &str, v: &'a Option<String>) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Config(format!("--{name} is required")))
}

/// `none`, `root-of-unity`, `house:<A>` or `radical:<a>:<n>`.
pub fn parse_target(s: &str) -> Result<Option<Target>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Config(format!("unknown target {s:?}"));
    Ok(match parts.as_slice() {
        ["none"] => None,
        ["root-of-unity"] => Some(Target::RootOfUnity),
        ["house", a] => Some(Target::HouseAtMost { a: rational_arg("target", a)? }),
        ["radical", a, n] => Some(Target::RadicalOfRational {
            a: rational_arg("target", a)?,
            max_exponent: n.parse().map_err(|_| bad())?,
        }),
        _ => return Err(bad()),
    })
}

/// `roots:<N>` or `box:<N>:<H>`.
pub fn parse_start_set(s: &str) -> Result<StartSet, CliError> {
    let bad = || CliError::Config(format!("unknown start set {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["roots", n] => Ok(StartSet::RootsOfUnity { max_conductor: n.parse().map_err(|_| bad())? }),
        ["box", n, h] => Ok(StartSet::CycBox {
            max_conductor: n.parse().map_err(|_| bad())?,
            max_coeff_height: h.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

/// `inf`, `inf:<k>` or a prime.
pub fn parse_place(s: &str) -> Result<Place, CliError> {
    let bad = || CliError::Config(format!("unknown place {s:?}"));
    match s.split_once(':') {
        None if s == "inf" => Ok(Place::Archimedean { k: 1 }),
        Some(("inf", k)) => Ok(Place::Archimedean { k: k.parse().map_err(|_| bad())? }),
        None => Ok(Place::PAdic { p: s.parse().map_err(|_| bad())? }),
        _ => Err(bad()),
    }
}

fn verdict_text(v: &OrbitVerdict) -> String {
    match v {
        OrbitVerdict::PoleAtStep(t) => format!("PoleAtStep({t})"),
        OrbitVerdict::TargetHitAtStep(k) => format!("TargetHitAtStep({k})"),
        OrbitVerdict::DepthExhausted => "DepthExhausted".into(),
        OrbitVerdict::SizeCapExceeded(t) => format!("SizeCapExceeded({t})"),
    }
}

/// Runs one configuration.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let prec = cfg.precision();
    match &cfg.command {
        Command::Orbit(a) => {
            let h = map_arg(&a.map)?;
            let start = cyc_arg("start", &a.start)?;
            let target = parse_target(&a.target)?;
            let rec = h.try_orbit(&start, a.depth, Some(a.size_cap_bits), |x| match &target {
                None => Ok(false),
                Some(t) => Ok(search::test_target(t, x, (prec.start_bits, prec.cap_bits))?.is_some()),
            })?;
            let pts: Vec<String> = rec.points.iter().map(|x| x.to_string()).collect();
            let mut text = format!("orbit of {} under {}: {}; points [{}]", start, h, verdict_text(&rec.verdict), pts.join(", "));
            let mut result = to_value(&rec);
            if let Some(b) = &a.backstop {
                let v = growth::house_backstop_check(&h, &rec, &rational_arg("backstop", b)?, prec)?;
                text.push_str(&format!("\nbackstop: {v:?}"));
                result["backstop"] = to_value(&v);
            }
            Ok(Outcome { result, text })
        }
        Command::Iterate(a) => {
            let h = map_arg(&a.map)?;
            let it = h.formal_iterate(a.n, DEFAULT_DEGREE_CAP)?;
            let (tn, td) = it.term_count();
            let mut result = json!({
                "n": a.n,
                "iterate": it.to_expr(),
                "degree": it.degree(),
                "terms": [tn, td],
                "map": it,
            });
            let mut text = format!("h^({}) = {} with ({tn}, {td}) terms", a.n, it);
            if a.monic {
                let (hm, mu) = h.monic_normalize()?;
                text.push_str(&format!("\nmu = {mu}, h_mu = {hm}"));
                result["monic"] = json!({ "mu": mu, "mu_expr": mu.to_string(), "map": hm.to_expr() });
            }
            Ok(Outcome { result, text })
        }
        Command::Sparsity(a) => {
            let h = map_arg(&a.map)?;
            let rows = iterate_term_counts(&h, a.n_max, &SparsityOptions::default())?;
            let ok = rows.iter().all(|r| r.bound_satisfied);
            let text = rows
                .iter()
                .map(|r| format!("n = {:2}: {} terms{} bound {}", r.n, r.total_terms, if r.exact { "" } else { " (at least)" }, if r.bound_satisfied { "ok" } else { "FAILS" }))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome { result: json!({ "rows": rows, "bound_satisfied": ok }), text })
        }
        Command::Growth(a) => growth_cmd(a, cfg, prec),
        Command::Bounds(a) => bounds_cmd(a, prec),
        Command::Special(a) => {
            let mut h = map_arg(&a.map)?;
            let mut prefix = String::new();
            if let Some(l) = &a.conjugate_by {
                h = special::mobius_conjugate(&h, &mobius_arg(l)?);
                prefix = format!("conjugate {h}: ");
            }
            let v = special::detect_special_with(&h, a.conductor_bound);
            let portrait = special::ramification_portrait(&h, a.conductor_bound);
            let text = match &v.witness {
                Some(w) => format!("{prefix}{:?} via L = {} (normal form {})", v.kind, w.mobius, w.normal_form()),
                None => format!("{prefix}{:?}", v.kind),
            };
            let tr: Vec<String> = portrait.totally_ramified.iter().map(|p| p.to_string()).collect();
            let text = format!("{text}\ntotally ramified: [{}]", tr.join(", "));
            let mut result = to_value(&v);
            result["map"] = json!(h.to_expr());
            result["portrait"] = to_value(&portrait);
            Ok(Outcome { result, text })
        }
        Command::Search(a) => search_cmd(a, cfg),
        Command::Hypothesis(a) => {
            let h = map_arg(&a.map)?;
            let db = a.degree_bound.unwrap_or_else(|| pencil::default_degree_bound(&h));
            let r = pencil::check_hypothesis(&h, a.conductor_bound, db)?;
            let text = match &r.verdict {
                HypothesisVerdict::HypothesisFails { m, root } => format!("HypothesisFails at m = {m} with root {}", root.expr),
                HypothesisVerdict::HypothesisHolds { conductor_bound, degree_bound } => {
                    format!("HypothesisHolds up to conductor {conductor_bound}, degree {degree_bound}")
                }
                HypothesisVerdict::DegreeConditionFails => format!("DegreeConditionFails (d = {}, e = {})", r.d, r.e),
            };
            Ok(Outcome { result: to_value(&r), text })
        }
        Command::Demo(_) => demo(prec),
        Command::Field(a) => field_cmd(a, prec),
    }
}

fn growth_cmd(a: &GrowthArgs, cfg: &RunConfig, prec: Precision) -> Result<Outcome, CliError> {
    if let Some(suite) = &a.suite {
        let sums = match suite.as_str() {
            "padic" => vec![growth::suite::padic_suite(a.cases, a.steps, cfg.seed)],
            "archimedean" => vec![growth::suite::archimedean_suite(a.cases, a.steps, cfg.seed)],
            "degenerate" => growth::suite::degenerate_suites(a.cases, cfg.seed),
            _ => return Err(CliError::Config(format!("unknown suite {suite:?}"))),
        };
        let text = sums.iter().map(|s| format!("{}: {}/{} passed", s.name, s.passed, s.cases)).collect::<Vec<_>>().join("\n");
        return Ok(Outcome { result: to_value(&sums), text });
    }
    let h = map_arg(required("map", &a.map)?)?;
    let start = required("start", &a.start)?;
    let place = parse_place(&a.place)?;
    if a.degenerate {
        let Place::PAdic { p } = place else {
            return Err(CliError::Config("--degenerate needs a prime --place".into()));
        };
        let r = growth::degenerate_behavior(&h, &rational_arg("start", start)?, p, prec)?;
        let text = format!("{:?} at p = {p}, verified: {}", r.class, r.verified);
        return Ok(Outcome { result: to_value(&r), text });
    }
    let r = growth::verify_growth(&h, &cyc_arg("start", start)?, place, a.steps, prec)?;
    let vals: Vec<String> = r.values.iter().map(|v| to_value(v).to_string()).collect();
    let text = format!("values {}; strictly increasing: {}", vals.join(", "), r.strictly_increasing);
    Ok(Outcome { result: to_value(&r), text })
}

fn bounds_cmd(a: &BoundsArgs, prec: Precision) -> Result<Outcome, CliError> {
    let h = map_arg(&a.map)?;
    let big_a = rational_arg("A", &a.A)?;
    let lh = growth::compute_Lh(&h, &big_a, prec.start_bits)?;
    let mut result = json!({ "d": h.d(), "e": h.e(), "L_h": lh });
    let mut text = match &lh.exact {
        Some(q) => format!("L_h = {}", cyclodyn::rational::format_rational(q)),
        None => format!("L_h in {:?}", lh.enclosure.to_decimal_pair(20)),
    };
    if let Some(b) = &a.B {
        let m = growth::min_M_threshold(&rational_arg("B", b)?, h.d(), h.e())?;
        result["M"] = json!(m);
        text.push_str(&format!("\nM = {m}"));
    }
    if let Some(n) = a.n {
        let fz = growth::fz_lower_bound(h.degree(), n)?;
        text.push_str(&format!("\nterm-count bound at n = {n}: {:?}", fz.effective.to_decimal_pair(20)));
        result["fz"] = to_value(&fz);
    }
    Ok(Outcome { result, text })
}

fn search_cmd(a: &SearchArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let target = parse_target(&a.target)?.ok_or_else(|| CliError::Config("search needs a target".into()))?;
    let sc = SearchConfig {
        map: map_arg(&a.map)?,
        start_set: parse_start_set(&a.start_set)?,
        max_depth: a.depth,
        target,
        precision_bits: cfg.precision_bits,
        precision_cap_bits: cfg.precision_cap_bits,
        size_cap_bits: a.size_cap_bits,
        seed: cfg.seed,
    };
    let report = search::run_search(&sc)?;
    let summary = search::summarize(&report);
    if let Some(path) = &a.csv {
        write_hits_csv(path, &report)?;
    }
    let mut text = format!(
        "{} starts, {} hits (rate {:.4}), {} poles, {} exhausted, {} size-capped, {} indeterminate",
        report.counts.starts,
        report.counts.hits,
        summary.hit_rate,
        report.counts.poles,
        report.counts.depth_exhausted,
        report.counts.size_capped,
        report.counts.indeterminate
    );
    for row in &summary.rows {
        let depths: Vec<String> = row.by_depth.iter().map(|(k, c)| format!("k={k}: {c}")).collect();
        text.push_str(&format!("\nconductor {:3}: {} hits ({})", row.conductor, row.hits, depths.join(", ")));
    }
    Ok(Outcome { result: json!({ "report": report, "summary": summary }), text })
}

#[derive(Serialize)]
struct HitRow {
    start: String,
    k: usize,
    value: String,
    evidence: String,
}

fn write_hits_csv(path: &Path, report: &search::SearchReport) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for h in &report.hits {
        let evidence = match &h.evidence {
            search::Evidence::RootOfUnity { order } => format!("order {order}"),
            search::Evidence::Radical { exponent } => format!("exponent {exponent}"),
            search::Evidence::House { precision_bits } => format!("house at {precision_bits} bits"),
        };
        w.serialize(HitRow { start: h.start.to_string(), k: h.k, value: h.value.to_string(), evidence }).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn demo(prec: Precision) -> Result<Outcome, CliError> {
    let mut items = Vec::new();
    let mut lines = Vec::new();
    let inv = parse_map("1/X")?;
    let rec = inv.orbit(&CycNum::zero(), 3, |_| false);
    lines.push(format!("1/X from 0: {}", verdict_text(&rec.verdict)));
    items.push(json!({ "name": "pole_convention_orbit", "map": "1/X", "start": "0", "verdict": rec.verdict }));
    let it = inv.formal_iterate(2, DEFAULT_DEGREE_CAP)?;
    lines.push(format!("(1/X)^(2) = {it}"));
    items.push(json!({ "name": "pole_convention_iterate", "map": "1/X", "n": 2, "iterate": it.to_expr() }));
    for (m, a, p) in [("(X^2 + 3*X)/(X^2 + 3)", "1/3", 3u64), ("X^2/(X + 1)", "1/2", 2), ("(X + 1/3)/(X^2 + X + 1/9)", "1/27", 3)] {
        let h = parse_map(m)?;
        let r = growth::degenerate_behavior(&h, &parse_rational_expr(a)?, p, prec)?;
        debug_assert_ne!(r.class, DegenerateClass::NotDegenerate);
        lines.push(format!("{m} at {a}, p = {p}: {:?}, verified {}", r.class, r.verified));
        items.push(json!({ "name": "degenerate", "map": m, "start": a, "p": p, "report": r }));
    }
    let v = special::detect_special(&parse_map("X^3 - 3*X")?);
    debug_assert_eq!(v.kind, SpecialKind::ChebyshevConjugate);
    lines.push(format!("X^3 - 3*X: {:?}", v.kind));
    items.push(json!({ "name": "chebyshev", "map": "X^3 - 3*X", "verdict": v }));
    Ok(Outcome { result: Value::Array(items), text: lines.join("\n") })
}

/// The versioned report envelope.
pub fn envelope(cfg: &RunConfig, result: Value) -> Value {
    json!({ "schema": SCHEMA, "command": cfg.command.name(), "config": cfg, "result": result })
}

/// Builds the run configuration from parsed arguments.
pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match (&cli.config, &cli.command) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            RunConfig::from_text(&text)?
        }
        (None, Some(c)) => RunConfig::new(c.clone()),
        (None, None) => return Err(CliError::Config("a subcommand or --config is required".into())),
    };
    if let Some(b) = cli.precision_bits {
        cfg.precision_bits = b;
    }
    if let Some(b) = cli.precision_cap {
        cfg.precision_cap_bits = b;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cfg.precision_bits < 16 || cfg.precision_cap_bits < cfg.precision_bits {
        return Err(CliError::Config("need 16 <= precision_bits <= precision_cap".into()));
    }
    Ok(cfg)
}

/// Full CLI run; returns the exit status.
pub fn main_with(cli: Cli) -> i32 {
    if let Some(t) = cli.threads {
        // a second initialisation (in tests) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let run = || -> Result<(), CliError> {
        let cfg = resolve(&cli)?;
        let out = execute(&cfg)?;
        let report = serde_json::to_string_pretty(&envelope(&cfg, out.result)).expect("json");
        match &cli.out {
            Some(path) => {
                std::fs::write(path, report + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                println!("{}", out.text);
            }
            None if cli.text => println!("{}", out.text),
            None => println!("{report}"),
        }
        Ok(())
    };
    match run() {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
