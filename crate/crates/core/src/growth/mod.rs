//! Growth of orbits at archimedean and p-adic places: start conditions,
//! monotonicity verification, the degenerate cases `d - e <= 1`, the bound
//! `L_h` on houses before a target hit, and the thresholds built on the
//! term-count bound.

mod padic;
pub mod suite;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::cyclo::{embedding_table, house, house_cmp, house_le, CycNum};
use crate::error::{Error, Result};
use crate::interval::{ln, ln_u64, ComplexInterval, Dyadic, Interval};
use crate::rational::{format_rational, is_prime, rational_root, valuation, Rational};
use crate::ratmap::{OrbitRecord, OrbitVerdict, RatMap};
use padic::PadicOrbit;

/// Working precision for certified comparisons: start value and the cap at
/// which an undecided comparison becomes an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start_bits: 128, cap_bits: 4096 }
    }
}

/// An absolute value on the field of the orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Place {
    /// `|sigma_k(.)|` with `sigma_k: zeta_N -> exp(2 pi i k / N)`, `N` the
    /// conductor of the map and start point together.
    Archimedean { k: u64 },
    /// `|x|_p = p^(-v_p(x))`, normalised by `|p|_p = 1/p`.
    PAdic { p: u64 },
}

/// One entry of a growth report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbsValue {
    /// `p^exponent`, exact.
    PAdic { p: u64, exponent: i64 },
    /// The absolute value of zero.
    Zero,
    /// Certified enclosure of an archimedean absolute value.
    Enclosure(Interval),
}

impl AbsValue {
    /// Exact rational value when it is small enough to write out.
    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            AbsValue::Zero => Some(Rational::zero()),
            AbsValue::PAdic { p, exponent } => {
                let bits = exponent.unsigned_abs() as f64 * (*p as f64).log2();
                (bits <= 4096.0).then(|| crate::rational::pow_i(&Rational::from_integer(BigInt::from(*p)), *exponent))
            }
            AbsValue::Enclosure(i) => i.is_point().then(|| i.lo.to_rational()),
        }
    }
}

impl Serialize for AbsValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AbsValue::Enclosure(i) if !i.is_point() => i.to_decimal_pair(20).serialize(s),
            AbsValue::PAdic { p, exponent } if self.to_rational().is_none() => {
                format!("{p}^{exponent}").serialize(s)
            }
            _ => format_rational(&self.to_rational().unwrap()).serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub place: Place,
    /// `|h^(r)(alpha)|` for `r = 0..=steps`.
    pub values: Vec<AbsValue>,
    pub strictly_increasing: bool,
    /// First `i` with `values[i] >= values[i+1]`.
    pub first_violation: Option<usize>,
    /// p-adic only: `|h(x)|_p = |x|_p^(d-e)` held at every step.
    pub closed_form_holds: Option<bool>,
    /// Precision that certified the comparisons (p-adic: digits).
    pub precision_bits: u32,
    pub normalization: Option<String>,
}

fn ambient_conductor(h: &RatMap, a: &CycNum) -> u64 {
    h.conductor().lcm(&a.conductor())
}

fn check_place(place: Place, n: u64) -> Result<()> {
    match place {
        Place::PAdic { p } if !is_prime(p) => Err(Error::InvalidArgument(format!("{p} is not prime"))),
        Place::Archimedean { k } if k.gcd(&n) != 1 => Err(Error::InvalidArgument(format!(
            "embedding index {k} is not coprime to the conductor {n}"
        ))),
        _ => Ok(()),
    }
}

fn rational_data(h: &RatMap, a: &CycNum) -> Result<Rational> {
    if !h.is_rational() {
        return Err(Error::NonRationalData(format!("map {h}")));
    }
    a.to_rational().ok_or_else(|| Error::NonRationalData(format!("point {a}")))
}

fn require_monic(h: &RatMap) -> Result<()> {
    if h.is_monic() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("numerator of {h} is not monic")))
    }
}

/// Non-leading coefficients of numerator and denominator.
fn lower_coeffs(h: &RatMap) -> Vec<CycNum> {
    let (d, e) = (h.d(), h.e());
    let a = h.num().terms().iter().filter(|(i, _)| *i < d);
    let b = h.den().terms().iter().filter(|(j, _)| *j < e);
    a.chain(b).map(|(_, c)| c.clone()).collect()
}

/// `-v_p` of the largest non-leading coefficient and 1, i.e. `log_p max{1, |c|_p}`.
fn padic_bound_exponent(h: &RatMap, p: u64) -> i64 {
    lower_coeffs(h)
        .iter()
        .filter_map(|c| valuation(&c.to_rational().unwrap(), p))
        .map(|v| -v)
        .fold(0, i64::max)
}

/// Exact modulus when it is rational (rationals, roots of unity, ...).
fn exact_modulus(c: &CycNum) -> Option<Rational> {
    if let Some(q) = c.to_rational() {
        return Some(q.abs());
    }
    rational_root(&c.abs_sq().to_rational()?, 2)
}

/// Certified sign of a real element of the field at the identity embedding.
fn real_sign(x: &CycNum, prec: Precision, what: &str) -> Result<(i32, u32)> {
    if let Some(q) = x.to_rational() {
        return Ok((if q.is_zero() { 0 } else if q.is_positive() { 1 } else { -1 }, 0));
    }
    let n = x.conductor();
    let mut bits = prec.start_bits.max(32);
    loop {
        let table = embedding_table(n, bits);
        if let Some(s) = x.embed(1, n, &table, bits).re.sign() {
            return Ok((s, bits));
        }
        if bits >= prec.cap_bits {
            return Err(Error::IndeterminateComparison { what: what.to_string(), precision_bits: bits });
        }
        bits *= 2;
    }
}

/// `1 + sum |sigma_k(c)|` over the non-leading coefficients: exact when every
/// modulus is rational, otherwise an enclosure.
fn coefficient_sum(h: &RatMap, k: u64, n: u64, bits: u32) -> (Option<Rational>, Interval) {
    let table = embedding_table(n, bits);
    let mut exact = Some(Rational::one());
    let mut enc = Interval::from_int(1);
    for c in lower_coeffs(h) {
        match exact_modulus(&c) {
            Some(q) => {
                exact = exact.map(|e| e + &q);
                enc = enc.add(&Interval::from_rational(&q, bits), bits);
            }
            None => {
                exact = None;
                enc = enc.add(&c.embed(k, n, &table, bits).abs(bits), bits);
            }
        }
    }
    (exact, enc)
}

/// Strict start condition for orbit growth at `place`.
pub fn start_condition(h: &RatMap, a: &CycNum, place: Place, prec: Precision) -> Result<bool> {
    require_monic(h)?;
    let n = ambient_conductor(h, a);
    check_place(place, n)?;
    match place {
        Place::PAdic { p } => {
            let q = rational_data(h, a)?;
            let Some(v) = valuation(&q, p) else { return Ok(false) };
            Ok(-v > padic_bound_exponent(h, p))
        }
        Place::Archimedean { k } => archimedean_start(h, a, k, n, prec),
    }
}

fn archimedean_start(h: &RatMap, a: &CycNum, k: u64, n: u64, prec: Precision) -> Result<bool> {
    let sa = a.galois(k as i64);
    if let (Some(r), _) = coefficient_sum(h, k, n, 64) {
        // |sigma(a)| > r  <=>  sigma(a) conj(sigma(a)) - r^2 > 0
        let delta = sa.abs_sq().sub(&CycNum::from_rational(&(&r * &r)));
        return Ok(real_sign(&delta, prec, "archimedean start condition")?.0 > 0);
    }
    let mut bits = prec.start_bits.max(32);
    loop {
        let table = embedding_table(n, bits);
        let lhs = a.embed(k, n, &table, bits).abs(bits);
        let (_, rhs) = coefficient_sum(h, k, n, bits);
        if let Some(b) = rhs.lt(&lhs) {
            return Ok(b);
        }
        if bits >= prec.cap_bits {
            return Err(Error::IndeterminateComparison {
                what: "archimedean start condition".into(),
                precision_bits: bits,
            });
        }
        bits *= 2;
    }
}

/// Absolute values along `steps` steps of the orbit of `a`, with certified
/// strict increase (and the p-adic closed form).
pub fn verify_growth(h: &RatMap, a: &CycNum, place: Place, steps: usize, prec: Precision) -> Result<GrowthReport> {
    if h.d() < h.e() + 2 {
        return Err(Error::PreconditionViolated(format!("d - e = {} - {} is not > 1", h.d(), h.e())));
    }
    if !start_condition(h, a, place, prec)? {
        return Err(Error::PreconditionViolated(format!("start condition fails for {a} at {place:?}")));
    }
    match place {
        Place::PAdic { p } => padic_growth(h, &a.to_rational().unwrap(), p, steps, prec),
        Place::Archimedean { k } => archimedean_growth(h, a, k, steps, prec),
    }
}

fn padic_values(h: &RatMap, a: &Rational, p: u64, steps: usize, prec: Precision) -> Result<(Vec<AbsValue>, bool, u32)> {
    let digits = (prec.start_bits / 4).max(16);
    let orbit = padic::orbit_valuations(h, a, p, steps, digits, prec.cap_bits)?;
    let (vals, pole) = match orbit {
        PadicOrbit::Complete(v) => (v, false),
        PadicOrbit::Pole(v) => (v, true),
    };
    let values = vals
        .iter()
        .map(|v| match v {
            Some(v) => AbsValue::PAdic { p, exponent: -v },
            None => AbsValue::Zero,
        })
        .collect();
    Ok((values, pole, digits))
}

fn exponent(v: &AbsValue) -> Option<i64> {
    match v {
        AbsValue::PAdic { exponent, .. } => Some(*exponent),
        _ => None,
    }
}

fn padic_growth(h: &RatMap, a: &Rational, p: u64, steps: usize, prec: Precision) -> Result<GrowthReport> {
    let (values, pole, digits) = padic_values(h, a, p, steps, prec)?;
    if pole {
        return Err(Error::Pole(format!("orbit of {} under {h}", format_rational(a))));
    }
    let de = h.d() as i64 - h.e() as i64;
    let mut first_violation = None;
    let mut closed = true;
    for (i, w) in values.windows(2).enumerate() {
        let (x, y) = (exponent(&w[0]), exponent(&w[1]));
        if first_violation.is_none() && !matches!((x, y), (Some(x), Some(y)) if x < y) {
            first_violation = Some(i);
        }
        closed &= matches!((x, y), (Some(x), Some(y)) if x.checked_mul(de) == Some(y));
    }
    Ok(GrowthReport {
        place: Place::PAdic { p },
        values,
        strictly_increasing: first_violation.is_none(),
        first_violation,
        closed_form_holds: Some(closed),
        precision_bits: digits,
        normalization: Some(format!("|{p}|_{p} = 1/{p}")),
    })
}

enum Certified {
    Done(Vec<Interval>, Option<usize>),
    Undecided,
}

fn archimedean_growth(h: &RatMap, a: &CycNum, k: u64, steps: usize, prec: Precision) -> Result<GrowthReport> {
    let n = ambient_conductor(h, a);
    let mut bits = prec.start_bits.max(32);
    loop {
        if let Certified::Done(mods, first_violation) = archimedean_orbit(h, a, k, n, steps, bits) {
            return Ok(GrowthReport {
                place: Place::Archimedean { k },
                values: mods.into_iter().map(AbsValue::Enclosure).collect(),
                strictly_increasing: first_violation.is_none(),
                first_violation,
                closed_form_holds: None,
                precision_bits: bits,
                normalization: None,
            });
        }
        if bits >= prec.cap_bits {
            return Err(Error::IndeterminateComparison { what: "archimedean growth".into(), precision_bits: bits });
        }
        bits *= 2;
    }
}

fn embed_poly(p: &crate::poly::Poly, k: u64, n: u64, table: &[ComplexInterval], bits: u32) -> Vec<(u64, ComplexInterval)> {
    p.terms().iter().map(|(e, c)| (*e, c.embed(k, n, table, bits))).collect()
}

fn horner(terms: &[(u64, ComplexInterval)], x: &ComplexInterval, bits: u32) -> ComplexInterval {
    let mut acc = ComplexInterval::zero();
    let mut prev = terms.last().map_or(0, |t| t.0);
    for (e, c) in terms.iter().rev() {
        acc = acc.mul(&x.powu(prev - e, bits), bits).add(c, bits);
        prev = *e;
    }
    acc.mul(&x.powu(prev, bits), bits)
}

fn archimedean_orbit(h: &RatMap, a: &CycNum, k: u64, n: u64, steps: usize, bits: u32) -> Certified {
    let table = embedding_table(n, bits);
    let f = embed_poly(h.num(), k, n, &table, bits);
    let g = embed_poly(h.den(), k, n, &table, bits);
    let mut x = a.embed(k, n, &table, bits);
    let mut mods = vec![x.abs(bits)];
    let mut first_violation = None;
    for i in 0..steps {
        let Some(y) = horner(&f, &x, bits).div(&horner(&g, &x, bits), bits) else {
            return Certified::Undecided;
        };
        x = y;
        mods.push(x.abs(bits));
        match mods[i].lt(&mods[i + 1]) {
            Some(true) => {}
            Some(false) => {
                first_violation.get_or_insert(i);
            }
            None => return Certified::Undecided,
        }
    }
    Certified::Done(mods, first_violation)
}

/// Behaviour of `|h^(n)(a)|_p` when `d - e <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegenerateClass {
    /// `d = e`, small coefficients: every iterate has absolute value 1.
    ConstantOne,
    /// `d = e + 1`: every iterate has the absolute value of the start.
    ConstantAbs,
    /// `d < e`, large constant terms: the second iterate has `|a_0|_p / |b_0|_p`.
    LeadingRatio,
    /// `d - e > 1`: orbits eventually grow strictly.
    NotDegenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerateReport {
    pub class: DegenerateClass,
    pub prime: u64,
    /// `|h^(r)(a)|_p` for `r = 0..=6` (fewer if a later step is undecidable or a pole).
    pub values: Vec<AbsValue>,
    /// The class's prediction matched the computed values.
    pub verified: bool,
}

pub const DEGENERATE_STEPS: usize = 6;

/// Classifies `h` by `d - e` at `p` and checks the predicted absolute values.
pub fn degenerate_behavior(h: &RatMap, a: &Rational, p: u64, prec: Precision) -> Result<DegenerateReport> {
    let ac = CycNum::from_rational(a);
    rational_data(h, &ac)?;
    check_place(Place::PAdic { p }, 1)?;
    let (d, e) = (h.d() as i64, h.e() as i64);
    if d - e > 1 {
        return Ok(DegenerateReport { class: DegenerateClass::NotDegenerate, prime: p, values: vec![], verified: true });
    }
    if !start_condition(h, &ac, Place::PAdic { p }, prec)? {
        return Err(Error::PreconditionViolated(format!("start condition fails for {} at p = {p}", format_rational(a))));
    }
    let v0 = -valuation(a, p).unwrap();
    let coeff_exp = |c: &CycNum| valuation(&c.to_rational().unwrap(), p).map(|v| -v);
    let class = match d - e {
        0 => {
            if lower_coeffs(h).iter().any(|c| coeff_exp(c).is_some_and(|x| x >= 0)) {
                return Err(Error::HypothesisNotMet("d = e needs every non-leading coefficient with |c|_p < 1".into()));
            }
            DegenerateClass::ConstantOne
        }
        1 => DegenerateClass::ConstantAbs,
        _ => {
            let a0 = coeff_exp(&h.num().coeff(0));
            let b0 = coeff_exp(&h.den().coeff(0));
            if !(a0.is_some_and(|x| x > 0) && b0.is_some_and(|x| x > 0)) {
                return Err(Error::HypothesisNotMet("d < e needs |a_0|_p > 1 and |b_0|_p > 1".into()));
            }
            DegenerateClass::LeadingRatio
        }
    };
    // later steps of the d < e case carry no prediction and may hit zero or a pole
    let mut values = None;
    for steps in (2..=DEGENERATE_STEPS).rev() {
        match padic_values(h, a, p, steps, prec) {
            Ok((v, _, _)) => {
                values = Some(v);
                break;
            }
            Err(err) if class != DegenerateClass::LeadingRatio => return Err(err),
            Err(_) => {}
        }
    }
    let values = values.ok_or_else(|| Error::IndeterminateComparison {
        what: format!("{p}-adic orbit values"),
        precision_bits: prec.cap_bits,
    })?;
    let exps: Vec<Option<i64>> = values.iter().map(exponent).collect();
    let verified = match class {
        DegenerateClass::ConstantOne => exps.len() == DEGENERATE_STEPS + 1 && exps[1..].iter().all(|x| *x == Some(0)),
        DegenerateClass::ConstantAbs => exps.len() == DEGENERATE_STEPS + 1 && exps.iter().all(|x| *x == Some(v0)),
        _ => {
            let a0 = coeff_exp(&h.num().coeff(0)).unwrap();
            let b0 = coeff_exp(&h.den().coeff(0)).unwrap();
            exps.len() >= 3 && exps[1] == Some((d - e) * v0) && exps[2] == Some(a0 - b0)
        }
    };
    Ok(DegenerateReport { class, prime: p, values, verified })
}

/// The constant `L_h = max(A, max over embeddings of 1 + sum |sigma(a_i)| + sum |sigma(b_j)|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LhBound {
    /// Exact value when every coefficient has a rational modulus.
    pub exact: Option<Rational>,
    pub enclosure: Interval,
    pub precision_bits: u32,
}

impl Serialize for LhBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LhBound", 3)?;
        st.serialize_field("exact", &self.exact.as_ref().map(format_rational))?;
        st.serialize_field("enclosure", &self.enclosure.to_decimal_pair(20))?;
        st.serialize_field("precision_bits", &self.precision_bits)?;
        st.end()
    }
}

#[allow(non_snake_case)]
pub fn compute_Lh(h: &RatMap, A: &Rational, precision_bits: u32) -> Result<LhBound> {
    require_monic(h)?;
    if A.is_negative() {
        return Err(Error::InvalidArgument("A must be nonnegative".into()));
    }
    let n = h.conductor();
    let bits = precision_bits.max(32);
    let mut exact = Some(A.clone());
    let mut enc = Interval::from_rational(A, bits);
    for k in CycNum::embedding_indices(n) {
        let (x, i) = coefficient_sum(h, k, n, bits);
        exact = match (exact, x) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        enc = enc.max(&i);
    }
    if let Some(q) = &exact {
        enc = Interval::from_rational(q, bits);
    }
    Ok(LhBound { exact, enclosure: enc, precision_bits: bits })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BackstopVerdict {
    /// Every `house(alpha_l) <= L_h` for `l < k`.
    Pass { checked: usize, precision_bits: u32 },
    /// `house(alpha_index) > L_h`.
    Fail { index: usize },
}

/// Checks `house(alpha_l) <= L_h` for every point before a target hit with
/// `house(alpha_k) <= A`.
#[allow(non_snake_case)]
pub fn house_backstop_check(h: &RatMap, record: &OrbitRecord, A: &Rational, prec: Precision) -> Result<BackstopVerdict> {
    let OrbitVerdict::TargetHitAtStep(k) = record.verdict else {
        return Err(Error::PreconditionViolated("orbit does not end with a target hit".into()));
    };
    if h.d() < h.e() + 2 {
        return Err(Error::PreconditionViolated(format!("d - e = {} - {} is not > 1", h.d(), h.e())));
    }
    require_monic(h)?;
    if !house_le(&record.points[k], A, prec.start_bits, prec.cap_bits)? {
        return Err(Error::PreconditionViolated(format!("house of {} exceeds A", record.points[k])));
    }
    let lh = compute_Lh(h, A, prec.start_bits)?;
    let mut used = 0;
    for (l, x) in record.points[..k].iter().enumerate() {
        let ok = match &lh.exact {
            Some(t) => {
                let (ord, bits) = house_cmp(x, t, prec.start_bits, prec.cap_bits)?;
                used = used.max(bits);
                ord != Ordering::Greater
            }
            None => {
                let (ok, bits) = house_below_enclosure(h, x, A, prec)?;
                used = used.max(bits);
                ok
            }
        };
        if !ok {
            return Ok(BackstopVerdict::Fail { index: l });
        }
    }
    Ok(BackstopVerdict::Pass { checked: k, precision_bits: used })
}

#[allow(non_snake_case)]
fn house_below_enclosure(h: &RatMap, x: &CycNum, A: &Rational, prec: Precision) -> Result<(bool, u32)> {
    let mut bits = prec.start_bits.max(32);
    loop {
        let lh = compute_Lh(h, A, bits)?.enclosure;
        let hx = house(x, bits).interval();
        if let Some(b) = hx.le(&lh) {
            return Ok((b, bits));
        }
        if bits >= prec.cap_bits {
            return Err(Error::IndeterminateComparison { what: format!("house of {x} against L_h"), precision_bits: bits });
        }
        bits *= 2;
    }
}

/// Is `5^b * 2016 >= m^(k-2)` for `b = num/den`, i.e. `b ln 5 + ln 2016 >= (k-2) ln m`?
fn log_rhs_at_least(b: &Rational, m: u64, k: i64) -> bool {
    if k <= 2 {
        return true;
    }
    let (p, q) = (b.numer().to_biguint().unwrap(), b.denom().to_biguint().unwrap());
    let q = num_traits::ToPrimitive::to_usize(&q).expect("denominator of B fits a machine word");
    let p = num_traits::ToPrimitive::to_usize(&p).expect("numerator of B fits a machine word");
    let lhs = num_traits::pow(BigInt::from(5), p) * num_traits::pow(BigInt::from(2016), q);
    let rhs = num_traits::pow(BigInt::from(m), (k as usize - 2) * q);
    lhs >= rhs
}

/// Smallest integer `M > (B ln 5 + ln 2016) / ln max(d, e) + 2`.
#[allow(non_snake_case)]
pub fn min_M_threshold(B: &Rational, d: u64, e: u64) -> Result<u64> {
    let m = d.max(e);
    if m < 2 {
        return Err(Error::InvalidArgument("max(d, e) must be at least 2".into()));
    }
    if B.is_negative() {
        return Err(Error::InvalidArgument("B must be nonnegative".into()));
    }
    let mut bits = 64;
    loop {
        let num = ln(&Rational::from_integer(5.into()), bits)
            .scale_rational(B, bits)
            .add(&ln_u64(2016, bits), bits);
        let rhs = num.div(&ln_u64(m, bits), bits).unwrap().add(&Interval::from_int(2), bits);
        let lo = rhs.lo.to_int(crate::interval::Round::Down);
        let hi = rhs.hi.to_int(crate::interval::Round::Down);
        if lo == hi {
            return Ok(num_traits::ToPrimitive::to_u64(&lo).unwrap() + 1);
        }
        if &hi - &lo == BigInt::one() {
            // the enclosure straddles the integer `hi`: decide rhs >= hi exactly
            let k = num_traits::ToPrimitive::to_i64(&hi).unwrap();
            let floor = if log_rhs_at_least(B, m, k) { k } else { k - 1 };
            return Ok(floor as u64 + 1);
        }
        bits *= 2;
    }
}

/// The term-count lower bound `((n-2) ln d - ln 2016) / ln 5` and its effective value `max(1, .)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FzBound {
    pub raw: Interval,
    pub effective: Interval,
}

impl Serialize for FzBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FzBound", 2)?;
        st.serialize_field("raw", &self.raw.to_decimal_pair(20))?;
        st.serialize_field("effective", &self.effective.to_decimal_pair(20))?;
        st.end()
    }
}

pub fn fz_lower_bound(d: u64, n: u32) -> Result<FzBound> {
    if d < 2 || n < 3 {
        return Err(Error::InvalidArgument("need d >= 2 and n >= 3".into()));
    }
    let bits = 128;
    let top = ln_u64(d, bits).mul(&Interval::from_int(n as i64 - 2), bits).sub(&ln_u64(2016, bits), bits);
    let raw = top.div(&ln_u64(5, bits), bits).unwrap();
    let one = Interval::point(Dyadic::from_int(1));
    Ok(FzBound { effective: raw.max(&one), raw })
}
