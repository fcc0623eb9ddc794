//! Rational maps `f/g`: evaluation, stepwise orbits, formal iterates,
//! term counts and monic conjugation.

mod modular;
mod sparsity;

pub use sparsity::{fz_check, iterate_term_counts, SparsityRow, SparsityOptions};

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclo::{nth_root, CycNum};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Default cap on the degree of formal iterates.
pub const DEFAULT_DEGREE_CAP: u64 = 1 << 16;

/// Conductor bound used when extracting radicals for monic conjugation.
pub const DEFAULT_ROOT_CONDUCTOR_BOUND: u64 = 240;

/// Reduced rational map `num / den` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMap {
    num: Poly,
    den: Poly,
}

impl RatMap {
    /// Reduces `num / den` (common factors removed, denominator made monic).
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatMap { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let inv = den.lc().inv()?;
        Ok(RatMap { num: num.scale(&inv), den: den.scale(&inv) })
    }

    /// Builds from parts already known to be coprime (only the scaling is normalised).
    pub(crate) fn from_coprime(num: Poly, den: Poly) -> Self {
        let inv = den.lc().inv().expect("nonzero denominator");
        RatMap { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(f: Poly) -> Self {
        RatMap { num: f, den: Poly::one() }
    }

    pub fn identity() -> Self {
        RatMap::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Degree of the numerator.
    pub fn d(&self) -> u64 {
        self.num.degree()
    }

    /// Degree of the denominator.
    pub fn e(&self) -> u64 {
        self.den.degree()
    }

    /// Degree of the map, `max(d, e)`.
    pub fn degree(&self) -> u64 {
        self.d().max(self.e())
    }

    pub fn is_polynomial(&self) -> bool {
        self.e() == 0
    }

    pub fn is_rational(&self) -> bool {
        self.num.is_rational() && self.den.is_rational()
    }

    /// Both parts monic (the denominator always is).
    pub fn is_monic(&self) -> bool {
        self.num.is_monic()
    }

    /// `lc(f) / lc(g)`.
    pub fn leading_ratio(&self) -> CycNum {
        self.num.lc()
    }

    pub fn conductor(&self) -> u64 {
        num_integer::Integer::lcm(&self.num.conductor(), &self.den.conductor())
    }

    /// `h(a)`, or `Error::Pole` when the denominator vanishes at `a`.
    pub fn eval(&self, a: &CycNum) -> Result<CycNum> {
        let g = self.den.eval(a);
        if g.is_zero() {
            return Err(Error::Pole(a.to_string()));
        }
        self.num.eval(a).div(&g)
    }

    /// Formal composition `self ∘ other`, computed homogeneously.
    pub fn compose(&self, other: &RatMap) -> RatMap {
        let dd = self.degree();
        let (f, g) = (&other.num, &other.den);
        let mut fp = vec![Poly::one()];
        let mut gp = vec![Poly::one()];
        for i in 1..=dd as usize {
            fp.push(fp[i - 1].mul(f));
            gp.push(gp[i - 1].mul(g));
        }
        let homog = |p: &Poly| {
            let mut acc = Poly::zero();
            for (i, c) in p.terms() {
                let i = *i as usize;
                acc = acc.add(&fp[i].mul(&gp[dd as usize - i]).scale(c));
            }
            acc
        };
        let num = homog(&self.num);
        let den = homog(&self.den);
        if num.is_zero() {
            return RatMap { num, den: Poly::one() };
        }
        // homogeneous composition of reduced maps is already reduced
        RatMap::from_coprime(num, den)
    }

    /// `h^(n)` as a reduced map; `ResourceCap` if its degree would exceed `degree_cap`.
    pub fn formal_iterate(&self, n: u32, degree_cap: u64) -> Result<RatMap> {
        let dd = self.degree();
        let target = (dd as u128).checked_pow(n).unwrap_or(u128::MAX);
        if n > 0 && target > degree_cap as u128 {
            return Err(Error::ResourceCap(format!(
                "iterate {n} has degree {dd}^{n}, above the cap {degree_cap}"
            )));
        }
        let mut it = RatMap::identity();
        for k in 1..=n {
            it = self.compose(&it);
            let want = (dd as u128).pow(k);
            assert_eq!(it.degree() as u128, want, "iterate degree is multiplicative");
        }
        Ok(it)
    }

    /// Nonzero monomials of numerator and denominator.
    pub fn term_count(&self) -> (usize, usize) {
        (self.num.term_count(), self.den.term_count())
    }

    /// Conjugates by `X -> mu X` so both parts become monic; returns `(h_mu, mu)`.
    pub fn monic_normalize(&self) -> Result<(RatMap, CycNum)> {
        self.monic_normalize_with(DEFAULT_ROOT_CONDUCTOR_BOUND)
    }

    pub fn monic_normalize_with(&self, conductor_bound: u64) -> Result<(RatMap, CycNum)> {
        let (d, e) = (self.d() as i64, self.e() as i64);
        if d - e == 1 {
            return Err(Error::ExponentZero);
        }
        let c = self.leading_ratio();
        if c.is_zero() {
            return Err(Error::NotRepresentable("zero map".into()));
        }
        let k = d - e - 1;
        let rhs = if k > 0 { c.clone() } else { c.inv()? };
        let mu = if rhs.is_one() {
            CycNum::one()
        } else {
            nth_root(&rhs, k.unsigned_abs() as u32, conductor_bound).ok_or_else(|| {
                Error::NotRepresentable(format!("no cyclotomic root of mu^{k} = {c}"))
            })?
        };
        let mu_inv = mu.inv()?;
        let num = self.num.scale_var(&mu_inv).scale(&mu);
        let den = self.den.scale_var(&mu_inv);
        let h = RatMap::from_coprime(num, den);
        debug_assert!(h.is_monic());
        Ok((h, mu))
    }

    /// Stepwise orbit with a boolean target.
    pub fn orbit(&self, a: &CycNum, max_depth: usize, mut target: impl FnMut(&CycNum) -> bool) -> OrbitRecord {
        self.try_orbit(a, max_depth, None, |x| Ok(target(x))).expect("infallible target")
    }

    /// Stepwise orbit; the target is tested from step 1 on. A point whose
    /// [`CycNum::bit_size`] exceeds `size_cap` stops the orbit.
    pub fn try_orbit(
        &self,
        a: &CycNum,
        max_depth: usize,
        size_cap: Option<u64>,
        mut target: impl FnMut(&CycNum) -> Result<bool>,
    ) -> Result<OrbitRecord> {
        let mut points = vec![a.clone()];
        for t in 1..=max_depth {
            let prev = &points[t - 1];
            let next = match self.eval(prev) {
                Ok(v) => v,
                Err(Error::Pole(_)) => {
                    return Ok(OrbitRecord { start: a.clone(), points, verdict: OrbitVerdict::PoleAtStep(t) })
                }
                Err(e) => return Err(e),
            };
            let big = size_cap.is_some_and(|cap| next.bit_size() > cap);
            points.push(next);
            if big {
                return Ok(OrbitRecord { start: a.clone(), points, verdict: OrbitVerdict::SizeCapExceeded(t) });
            }
            if target(&points[t])? {
                return Ok(OrbitRecord { start: a.clone(), points, verdict: OrbitVerdict::TargetHitAtStep(t) });
            }
        }
        Ok(OrbitRecord { start: a.clone(), points, verdict: OrbitVerdict::DepthExhausted })
    }

    /// `(num)/(den)` or just the numerator for polynomials.
    pub fn to_expr(&self) -> String {
        if self.den.is_one() {
            self.num.to_string()
        } else {
            let wrap = |p: &Poly| if p.term_count() > 1 { format!("({p})") } else { p.to_string() };
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Display for RatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: Poly,
    den: Poly,
    d: u64,
    e: u64,
}

impl Serialize for RatMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { num: self.num.clone(), den: self.den.clone(), d: self.d(), e: self.e() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        RatMap::new(w.num, w.den).map_err(serde::de::Error::custom)
    }
}

/// How a stepwise orbit ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitVerdict {
    /// The denominator vanished at `points[t-1]`; `points` has length `t`.
    PoleAtStep(usize),
    /// `points[k]` satisfied the target (`k >= 1`).
    TargetHitAtStep(usize),
    DepthExhausted,
    /// `points[t]` exceeded the per-orbit size cap.
    SizeCapExceeded(usize),
}

/// A start point, its orbit prefix and the termination verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub start: CycNum,
    pub points: Vec<CycNum>,
    pub verdict: OrbitVerdict,
}
