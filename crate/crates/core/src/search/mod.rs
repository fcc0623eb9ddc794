//! Exhaustive searches over finite slices of the cyclotomic closure for
//! orbits that reach a target (a root of unity, a radical of a rational, or
//! a point of small house) at some step `k >= 1`.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclo::{house_le, phi, CycNum};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ratmap::{OrbitVerdict, RatMap};

/// Finite families of start points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartSet {
    /// All roots of unity of order at most `max_conductor`.
    RootsOfUnity { max_conductor: u64 },
    /// The roots of unity above, then every element with integer power-basis
    /// coordinates in `[-max_coeff_height, max_coeff_height]` and conductor
    /// at most `max_conductor`.
    CycBox { max_conductor: u64, max_coeff_height: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    RootOfUnity,
    /// `x^n = a` for some `1 <= n <= max_exponent`.
    RadicalOfRational {
        #[serde(with = "crate::rational::serde_string")]
        a: Rational,
        max_exponent: u32,
    },
    /// `house(x) <= a`.
    HouseAtMost {
        #[serde(with = "crate::rational::serde_string")]
        a: Rational,
    },
}

/// Search parameters; the map is stored as its canonical expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    #[serde(serialize_with = "map_out", deserialize_with = "map_in")]
    pub map: RatMap,
    pub start_set: StartSet,
    pub max_depth: usize,
    pub target: Target,
    pub precision_bits: u32,
    pub precision_cap_bits: u32,
    /// Orbit points above this many bits end the orbit.
    pub size_cap_bits: u64,
    /// Recorded for reproducibility; the enumeration itself is deterministic.
    pub seed: u64,
}

fn map_out<S: Serializer>(h: &RatMap, s: S) -> std::result::Result<S::Ok, S::Error> {
    h.to_expr().serialize(s)
}

fn map_in<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RatMap, D::Error> {
    let s = String::deserialize(d)?;
    crate::parse::parse_map(&s).map_err(serde::de::Error::custom)
}

impl SearchConfig {
    pub fn new(map: RatMap, start_set: StartSet, max_depth: usize, target: Target) -> Self {
        SearchConfig {
            map,
            start_set,
            max_depth,
            target,
            precision_bits: 128,
            precision_cap_bits: 4096,
            size_cap_bits: 1 << 20,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = match self.start_set {
            StartSet::RootsOfUnity { max_conductor } | StartSet::CycBox { max_conductor, .. } => max_conductor,
        };
        if n < 1 {
            return Err(Error::InvalidArgument("max_conductor must be at least 1".into()));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidArgument("max_depth must be at least 1".into()));
        }
        if let Target::HouseAtMost { a } = &self.target {
            if num_traits::Signed::is_negative(a) {
                return Err(Error::InvalidArgument("house bound must be nonnegative".into()));
            }
        }
        Ok(())
    }
}

/// Upper limit on the number of enumerated starts.
pub const MAX_STARTS: usize = 2_000_000;

/// Deterministic, duplicate-free list of start points.
pub fn enumerate_starts(set: &StartSet) -> Result<Vec<CycNum>> {
    let (max_n, height) = match *set {
        StartSet::RootsOfUnity { max_conductor } => (max_conductor, None),
        StartSet::CycBox { max_conductor, max_coeff_height } => (max_conductor, Some(max_coeff_height)),
    };
    let mut out = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n {
            if k.gcd(&n) == 1 {
                out.push(CycNum::zeta_pow(n, k as i64));
            }
        }
    }
    let Some(hgt) = height else { return Ok(out) };
    let mut seen: HashSet<CycNum> = out.iter().cloned().collect();
    let side = 2 * hgt + 1;
    for n in (1..=max_n).filter(|n| n % 4 != 2) {
        let len = phi(n) as u32;
        let total = (side as u128).checked_pow(len).unwrap_or(u128::MAX);
        if total + out.len() as u128 > MAX_STARTS as u128 {
            return Err(Error::ResourceCap(format!("box of conductor {n} has {total} elements")));
        }
        let mut digits = vec![0u64; len as usize];
        for _ in 0..total {
            let coeffs: Vec<Rational> =
                digits.iter().map(|&d| Rational::from_integer((d as i64 - hgt as i64).into())).collect();
            let c = CycNum::from_coeffs(n, &coeffs);
            if c.conductor() == n && seen.insert(c.clone()) {
                out.push(c);
            }
            // little-endian odometer, so the last coordinate varies slowest
            for d in digits.iter_mut() {
                *d += 1;
                if *d < side {
                    break;
                }
                *d = 0;
            }
        }
    }
    Ok(out)
}

/// Why the target predicate accepted a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    RootOfUnity { order: u64 },
    Radical { exponent: u32 },
    House { precision_bits: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub start: CycNum,
    pub k: usize,
    pub value: CycNum,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounts {
    pub starts: usize,
    pub hits: usize,
    pub poles: usize,
    pub depth_exhausted: usize,
    pub size_capped: usize,
    pub indeterminate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub hits: Vec<Hit>,
    pub counts: SearchCounts,
    /// Starts whose target comparison could not be certified.
    pub indeterminate_starts: Vec<CycNum>,
}

/// Evidence that `x` meets the target, or `None`.
pub fn test_target(target: &Target, x: &CycNum, prec: (u32, u32)) -> Result<Option<Evidence>> {
    match target {
        Target::RootOfUnity => Ok(x.root_of_unity_order().map(|order| Evidence::RootOfUnity { order })),
        Target::RadicalOfRational { a, max_exponent } => Ok(radical_exponent(x, a, *max_exponent).map(|exponent| Evidence::Radical { exponent })),
        Target::HouseAtMost { a } => {
            let (ord, bits) = crate::cyclo::house_cmp(x, a, prec.0, prec.1)?;
            Ok((ord != std::cmp::Ordering::Greater).then_some(Evidence::House { precision_bits: bits }))
        }
    }
}

/// Least `n <= max` with `x^n = a`.
fn radical_exponent(x: &CycNum, a: &Rational, max: u32) -> Option<u32> {
    let target = CycNum::from_rational(a);
    if x.is_zero() {
        return (num_traits::Zero::is_zero(a) && max >= 1).then_some(1);
    }
    // |x|^(2n) = a^2 forces x conj(x) rational
    x.abs_sq().to_rational()?;
    let mut p = CycNum::one();
    for n in 1..=max {
        p = p.mul(x);
        if p == target {
            return Some(n);
        }
    }
    None
}

enum StartOutcome {
    Hit(Hit),
    Pole,
    Exhausted,
    SizeCap,
    Indeterminate,
}

fn run_start(cfg: &SearchConfig, a: &CycNum) -> StartOutcome {
    let prec = (cfg.precision_bits, cfg.precision_cap_bits);
    let mut evidence = None;
    let rec = cfg.map.try_orbit(a, cfg.max_depth, Some(cfg.size_cap_bits), |x| {
        evidence = test_target(&cfg.target, x, prec)?;
        Ok(evidence.is_some())
    });
    match rec {
        Err(_) => StartOutcome::Indeterminate,
        Ok(rec) => match rec.verdict {
            OrbitVerdict::TargetHitAtStep(k) => StartOutcome::Hit(Hit {
                start: a.clone(),
                k,
                value: rec.points[k].clone(),
                evidence: evidence.expect("hit carries evidence"),
            }),
            OrbitVerdict::PoleAtStep(_) => StartOutcome::Pole,
            OrbitVerdict::DepthExhausted => StartOutcome::Exhausted,
            OrbitVerdict::SizeCapExceeded(_) => StartOutcome::SizeCap,
        },
    }
}

/// Runs the search; starts are processed in parallel and merged in
/// enumeration order.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchReport> {
    cfg.validate()?;
    let starts = enumerate_starts(&cfg.start_set)?;
    let outcomes: Vec<StartOutcome> = starts.par_iter().map(|a| run_start(cfg, a)).collect();
    let mut counts = SearchCounts { starts: starts.len(), ..Default::default() };
    let mut hits = Vec::new();
    let mut indeterminate_starts = Vec::new();
    for (a, o) in starts.into_iter().zip(outcomes) {
        match o {
            StartOutcome::Hit(h) => hits.push(h),
            StartOutcome::Pole => counts.poles += 1,
            StartOutcome::Exhausted => counts.depth_exhausted += 1,
            StartOutcome::SizeCap => counts.size_capped += 1,
            StartOutcome::Indeterminate => {
                counts.indeterminate += 1;
                indeterminate_starts.push(a);
            }
        }
    }
    counts.hits = hits.len();
    Ok(SearchReport { config: cfg.clone(), hits, counts, indeterminate_starts })
}

/// Recomputes the orbit of a hit's start and checks the hit exactly.
pub fn verify_hit(cfg: &SearchConfig, hit: &Hit) -> bool {
    let prec = (cfg.precision_bits, cfg.precision_cap_bits);
    let rec = cfg.map.try_orbit(&hit.start, hit.k, None, |x| Ok(test_target(&cfg.target, x, prec)?.is_some()));
    let Ok(rec) = rec else { return false };
    rec.verdict == OrbitVerdict::TargetHitAtStep(hit.k)
        && rec.points[hit.k] == hit.value
        && match (&hit.evidence, &cfg.target) {
            (Evidence::RootOfUnity { order }, Target::RootOfUnity) => {
                hit.value.pow_u(*order).is_one() && hit.value.root_of_unity_order() == Some(*order)
            }
            (Evidence::Radical { exponent }, Target::RadicalOfRational { a, .. }) => {
                hit.value.pow_u(*exponent as u64) == CycNum::from_rational(a)
            }
            (Evidence::House { .. }, Target::HouseAtMost { a }) => {
                house_le(&hit.value, a, cfg.precision_bits, cfg.precision_cap_bits).unwrap_or(false)
            }
            _ => false,
        }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SummaryRow {
    pub conductor: u64,
    pub hits: usize,
    /// Hit counts keyed by the step `k` of the hit.
    pub by_depth: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchSummary {
    pub starts: usize,
    pub hits: usize,
    /// `hits / starts`, 0 for an empty report.
    pub hit_rate: f64,
    pub by_depth: BTreeMap<usize, usize>,
    pub rows: Vec<SummaryRow>,
}

/// Aggregates hits by start conductor and hit depth.
pub fn summarize(report: &SearchReport) -> SearchSummary {
    let mut rows: BTreeMap<u64, SummaryRow> = BTreeMap::new();
    let mut by_depth = BTreeMap::new();
    for h in &report.hits {
        let n = h.start.conductor();
        let row = rows.entry(n).or_insert_with(|| SummaryRow { conductor: n, ..Default::default() });
        row.hits += 1;
        *row.by_depth.entry(h.k).or_default() += 1;
        *by_depth.entry(h.k).or_default() += 1;
    }
    let starts = report.counts.starts;
    SearchSummary {
        starts,
        hits: report.hits.len(),
        hit_rate: if starts == 0 { 0.0 } else { report.hits.len() as f64 / starts as f64 },
        by_depth,
        rows: rows.into_values().collect(),
    }
}
