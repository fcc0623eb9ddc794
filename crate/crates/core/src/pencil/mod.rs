//! Roots in `K^c(Y)` of the pencils `f(X) - Y^m g(X)`.
//!
//! A root is written `lambda * P(Y) / Q(Y)` with `P`, `Q` monic and coprime.
//! By the rational root theorem over `K^c[Y]`, `P` divides the `X^0`
//! coefficient and `Q` the leading `X` coefficient; both are binomials in
//! `Y`, so their monic divisors are products of the binomial's factors.

use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{nth_root, CycNum};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::rat;
use crate::ratmap::RatMap;

/// `f(X) - Y^m g(X)`, stored by powers of `X` with coefficients in `K^c[Y]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pencil {
    f: Poly,
    g: Poly,
    m: u32,
    /// `coeffs[i]` is the coefficient of `X^i`, a polynomial in `Y`.
    coeffs: Vec<Poly>,
}

impl Pencil {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degree_x(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn coeff_x(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    /// Support in `Y` of every `X` coefficient is inside `{0, m}`.
    pub fn y_support_ok(&self) -> bool {
        self.coeffs.iter().all(|c| c.terms().iter().all(|(e, _)| *e == 0 || *e == self.m as u64))
    }

    pub fn to_expr(&self) -> String {
        let ym = if self.m == 1 { "Y".to_string() } else { format!("Y^{}", self.m) };
        let gpart = if self.g.is_one() {
            ym
        } else if self.g.term_count() == 1 && self.g.lc().is_one() {
            format!("{ym}*{}", self.g)
        } else {
            format!("{ym}*({})", self.g)
        };
        format!("{} - {gpart}", self.f)
    }

    /// `Q^N F(lambda P / Q, Y)` as a polynomial in `Y`.
    pub fn substitute(&self, lambda: &CycNum, p: &Poly, q: &Poly) -> Poly {
        let n = self.coeffs.len() - 1;
        let mut p_pows = vec![Poly::one()];
        let mut q_pows = vec![Poly::one()];
        for i in 0..n {
            p_pows.push(p_pows[i].mul(p));
            q_pows.push(q_pows[i].mul(q));
        }
        let mut acc = Poly::zero();
        let mut lam = CycNum::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = acc.add(&a.mul(&p_pows[i]).mul(&q_pows[n - i]).scale(&lam));
            }
            lam = lam.mul(lambda);
        }
        acc
    }
}

impl std::fmt::Display for Pencil {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_expr())
    }
}

/// Builds `f(X) - Y^m g(X)` for `h = f/g`.
pub fn build_pencil(h: &RatMap, m: u32) -> Result<Pencil> {
    let (f, g) = (h.num().clone(), h.den().clone());
    if m < 1 || m as u64 > f.degree() {
        return Err(Error::InvalidArgument(format!("m = {m} is outside 1..={}", f.degree())));
    }
    let n = f.degree().max(g.degree()) as usize;
    let coeffs = (0..=n as u64)
        .map(|i| Poly::constant(f.coeff(i)).sub(&Poly::monomial(m as u64, g.coeff(i))))
        .collect();
    Ok(Pencil { f, g, m, coeffs })
}

/// `lambda * num / den` in `K^c(Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionRoot {
    pub num: Poly,
    pub den: Poly,
    pub conductor: u64,
    pub expr: String,
}

impl FunctionRoot {
    fn new(lambda: &CycNum, p: &Poly, q: &Poly) -> Self {
        let num = p.scale(lambda);
        let den = q.clone();
        let conductor = num.conductor().max(den.conductor()).max(1);
        let (ns, ds) = (num.fmt_var("Y"), den.fmt_var("Y"));
        let expr = if den.is_one() {
            ns
        } else {
            let wrap = |p: &Poly, s: String| if p.term_count() > 1 { format!("({s})") } else { s };
            format!("{}/{}", wrap(&num, ns), wrap(&den, ds))
        };
        FunctionRoot { num, den, conductor, expr }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PencilOutcome {
    RootFound { root: FunctionRoot },
    NoRootUpToBound { conductor_bound: u64, degree_bound: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilVerdict {
    pub outcome: PencilOutcome,
    /// Candidate pairs `(P, Q)` examined.
    pub candidates: usize,
    /// Candidate pairs discarded by the degree balance test.
    pub pruned: usize,
    /// Some scaling equation had no solver (three or more terms, degree > 2).
    pub incomplete: bool,
}

#[derive(Clone, Debug)]
pub struct PencilOptions {
    /// Skip pairs whose leading or trailing `Y` terms cannot cancel.
    pub prune: bool,
    /// Largest number of divisors enumerated per coefficient.
    pub divisor_limit: usize,
}

impl Default for PencilOptions {
    fn default() -> Self {
        PencilOptions { prune: true, divisor_limit: 1 << 16 }
    }
}

pub const DEFAULT_CONDUCTOR_BOUND: u64 = 60;

pub fn default_degree_bound(h: &RatMap) -> u64 {
    2 * h.num().degree()
}

/// Monic divisors of `c Y^j + d Y^l` (at most two terms), found through the
/// factorization `Y^r - t = prod (Y^(r/s) - tau zeta_s^i)` with `tau^s = t`
/// and `s | r` as large as the conductor bound allows.
fn binomial_divisors(b: &Poly, conductor_bound: u64, max_degree: u64, limit: usize) -> Result<Vec<Poly>> {
    let terms = b.terms();
    let (low, core) = match terms.len() {
        1 => (terms[0].0, Vec::new()),
        2 => {
            let (l, cl) = &terms[0];
            let (j, cj) = &terms[1];
            let r = j - l;
            let t = cl.neg().div(cj)?;
            (*l, binomial_factors(&t, r, conductor_bound))
        }
        _ => return Err(Error::InvalidArgument("pencil coefficient is not a binomial".into())),
    };
    let subsets = 1usize.checked_shl(core.len() as u32).unwrap_or(usize::MAX);
    if subsets.saturating_mul(low as usize + 1) > limit {
        return Err(Error::ResourceCap(format!("{} divisors exceed the limit {limit}", subsets.saturating_mul(low as usize + 1))));
    }
    let mut out = Vec::new();
    for mask in 0..subsets {
        let mut d = Poly::one();
        for (i, f) in core.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d = d.mul(f);
            }
        }
        for i in 0..=low {
            let full = d.mul(&Poly::monomial(i, CycNum::one()));
            if full.degree() <= max_degree {
                out.push(full);
            }
        }
    }
    Ok(out)
}

fn binomial_factors(t: &CycNum, r: u64, bound: u64) -> Vec<Poly> {
    for s in (1..=r).rev().filter(|s| r % s == 0) {
        let Some(tau) = nth_root(t, s as u32, bound) else { continue };
        let factors: Vec<Poly> = (0..s)
            .map(|i| {
                let root = tau.mul(&CycNum::zeta_pow(s, i as i64));
                Poly::monomial(r / s, CycNum::one()).sub(&Poly::constant(root))
            })
            .collect();
        if factors.iter().all(|f| f.conductor() <= bound) {
            return factors;
        }
    }
    vec![Poly::monomial(r, CycNum::one()).sub(&Poly::constant(t.clone()))]
}

fn order_at_zero(p: &Poly) -> u64 {
    p.terms().first().map_or(0, |t| t.0)
}

/// Indices attaining the extreme of `score`, with their weights.
fn extreme<F: Fn(usize, &Poly) -> i64>(coeffs: &[Poly], score: F, top: bool) -> Vec<usize> {
    let scored: Vec<(usize, i64)> =
        coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, a)| (i, score(i, a))).collect();
    let best = if top { scored.iter().map(|s| s.1).max() } else { scored.iter().map(|s| s.1).min() };
    scored.into_iter().filter(|s| Some(s.1) == best).map(|s| s.0).collect()
}

/// Nonzero roots of `sum c_i x^i`, or `None` when no solver applies.
fn nonzero_roots(terms: &[(usize, CycNum)], bound: u64) -> Option<Vec<CycNum>> {
    match terms.len() {
        0 | 1 => Some(Vec::new()),
        2 => {
            let (i1, c1) = &terms[0];
            let (i2, c2) = &terms[1];
            let k = (i2 - i1) as u64;
            let t = c1.neg().div(c2).ok()?;
            let Some(tau) = nth_root(&t, k as u32, bound) else { return Some(Vec::new()) };
            Some((0..k).map(|j| tau.mul(&CycNum::zeta_pow(k, j as i64))).filter(|x| x.conductor() <= bound).collect())
        }
        _ => {
            let base = terms[0].0;
            let top = terms.last().unwrap().0 - base;
            if top > 2 {
                return None;
            }
            let c = |i: usize| terms.iter().find(|t| t.0 == base + i).map_or(CycNum::zero(), |t| t.1.clone());
            let (a, b, c0) = (c(2), c(1), c(0));
            let disc = b.mul(&b).sub(&a.mul(&c0).scale(&rat(4, 1)));
            let Some(sq) = nth_root(&disc, 2, bound) else { return Some(Vec::new()) };
            let two_a = a.scale(&rat(2, 1));
            let mut v = vec![b.neg().add(&sq).div(&two_a).ok()?];
            if !sq.is_zero() {
                v.push(b.neg().sub(&sq).div(&two_a).ok()?);
            }
            Some(v.into_iter().filter(|x| !x.is_zero() && x.conductor() <= bound).collect())
        }
    }
}

pub fn function_field_roots(pencil: &Pencil, conductor_bound: u64, degree_bound: u64) -> Result<PencilVerdict> {
    function_field_roots_with(pencil, conductor_bound, degree_bound, &PencilOptions::default())
}

pub fn function_field_roots_with(
    pencil: &Pencil,
    conductor_bound: u64,
    degree_bound: u64,
    opts: &PencilOptions,
) -> Result<PencilVerdict> {
    if conductor_bound < 1 || degree_bound < 1 {
        return Err(Error::InvalidArgument("bounds must be at least 1".into()));
    }
    let coeffs = &pencil.coeffs;
    let n = coeffs.len() - 1;
    let mut verdict = PencilVerdict {
        outcome: PencilOutcome::NoRootUpToBound { conductor_bound, degree_bound },
        candidates: 0,
        pruned: 0,
        incomplete: false,
    };
    if coeffs[0].is_zero() {
        let root = FunctionRoot::new(&CycNum::zero(), &Poly::one(), &Poly::one());
        verdict.outcome = PencilOutcome::RootFound { root };
        return Ok(verdict);
    }
    let ps = binomial_divisors(&coeffs[0], conductor_bound, degree_bound, opts.divisor_limit)?;
    let qs = binomial_divisors(&coeffs[n], conductor_bound, degree_bound, opts.divisor_limit)?;
    for p in &ps {
        for q in &qs {
            if !p.gcd(q).is_one() {
                continue;
            }
            verdict.candidates += 1;
            let shift = p.degree() as i64 - q.degree() as i64;
            let top = extreme(coeffs, |i, a| a.degree() as i64 + i as i64 * shift, true);
            let oshift = order_at_zero(p) as i64 - order_at_zero(q) as i64;
            let bottom = extreme(coeffs, |i, a| order_at_zero(a) as i64 + i as i64 * oshift, false);
            if opts.prune && (top.len() < 2 || bottom.len() < 2) {
                verdict.pruned += 1;
                continue;
            }
            let top_eq: Vec<(usize, CycNum)> = top.iter().map(|&i| (i, coeffs[i].lc())).collect();
            let tc = |x: &Poly| x.terms()[0].1.clone();
            let bottom_eq: Vec<(usize, CycNum)> = bottom
                .iter()
                .map(|&i| (i, tc(&coeffs[i]).mul(&tc(p).pow_u(i as u64)).mul(&tc(q).pow_u((n - i) as u64))))
                .collect();
            let eq = if top_eq.len() <= 2 || bottom_eq.len() > 2 { &top_eq } else { &bottom_eq };
            let Some(lambdas) = nonzero_roots(eq, conductor_bound) else {
                verdict.incomplete = true;
                continue;
            };
            for lambda in lambdas {
                if pencil.substitute(&lambda, p, q).is_zero() {
                    let root = FunctionRoot::new(&lambda, p, q);
                    if root.conductor <= conductor_bound {
                        verdict.outcome = PencilOutcome::RootFound { root };
                        return Ok(verdict);
                    }
                }
            }
        }
    }
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilRow {
    pub m: u32,
    pub pencil: String,
    pub verdict: PencilVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypothesisVerdict {
    HypothesisHolds { conductor_bound: u64, degree_bound: u64 },
    HypothesisFails { m: u32, root: FunctionRoot },
    DegreeConditionFails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub d: u64,
    pub e: u64,
    /// `d - e > 1`.
    pub degree_gap: bool,
    /// `max(d, e) >= 2`.
    pub max_degree: bool,
    pub rows: Vec<PencilRow>,
    pub verdict: HypothesisVerdict,
}

/// Degree conditions plus a root search for every `m = 1..=deg f`.
pub fn check_hypothesis(h: &RatMap, conductor_bound: u64, degree_bound: u64) -> Result<HypothesisReport> {
    let (d, e) = (h.d(), h.e());
    let degree_gap = d > e + 1;
    let max_degree = d.max(e) >= 2;
    let ms: Vec<u32> = (1..=h.num().degree() as u32).collect();
    let rows = ms
        .par_iter()
        .map(|&m| {
            let p = build_pencil(h, m)?;
            let verdict = function_field_roots(&p, conductor_bound, degree_bound)?;
            Ok(PencilRow { m, pencil: p.to_expr(), verdict })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = if !(degree_gap && max_degree) {
        HypothesisVerdict::DegreeConditionFails
    } else if let Some((m, root)) = rows.iter().find_map(|r| match &r.verdict.outcome {
        PencilOutcome::RootFound { root } => Some((r.m, root.clone())),
        _ => None,
    }) {
        HypothesisVerdict::HypothesisFails { m, root }
    } else {
        HypothesisVerdict::HypothesisHolds { conductor_bound, degree_bound }
    };
    Ok(HypothesisReport { d, e, degree_gap, max_degree, rows, verdict })
}

#[cfg(test)]
mod tests;
