//! Finite-precision p-adic numbers with tracked precision.
//!
//! A value is `p^val * u` where the unit `u` is known modulo `p^prec`. Sums
//! whose leading digits cancel past the known precision are reported as
//! undecidable instead of guessed, so every valuation produced here is exact.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;
use crate::ratmap::RatMap;

#[derive(Clone, Debug)]
pub(crate) struct Qp {
    val: i64,
    unit: BigUint,
    prec: u32,
}

/// `None` is an exact zero (only ever produced by zero inputs).
pub(crate) type PVal = Option<Qp>;

pub(crate) struct Ctx {
    pb: BigUint,
    prec: u32,
}

/// Cancellation swallowed every known digit.
#[derive(Debug)]
pub(crate) struct Lost;

impl Ctx {
    pub(crate) fn new(p: u64, prec: u32) -> Self {
        Ctx { pb: BigUint::from(p), prec }
    }

    fn modulus(&self, k: u32) -> BigUint {
        num_traits::pow(self.pb.clone(), k as usize)
    }

    fn split(&self, n: &BigUint) -> (u32, BigUint) {
        let mut v = 0;
        let mut n = n.clone();
        loop {
            let (q, r) = n.div_rem(&self.pb);
            if !r.is_zero() {
                return (v, n);
            }
            n = q;
            v += 1;
        }
    }

    pub(crate) fn from_rational(&self, q: &Rational) -> PVal {
        if q.is_zero() {
            return None;
        }
        let (vn, n) = self.split(q.numer().magnitude());
        let (vd, d) = self.split(q.denom().magnitude());
        let m = self.modulus(self.prec);
        let mut u = (n % &m) * d.modinv(&m).expect("unit denominator") % &m;
        if q.is_negative() {
            u = (&m - u) % &m;
        }
        Some(Qp { val: vn as i64 - vd as i64, unit: u, prec: self.prec })
    }

    pub(crate) fn mul(&self, a: &PVal, b: &PVal) -> PVal {
        let (a, b) = (a.as_ref()?, b.as_ref()?);
        let prec = a.prec.min(b.prec);
        let m = self.modulus(prec);
        Some(Qp { val: a.val + b.val, unit: (&a.unit * &b.unit) % m, prec })
    }

    pub(crate) fn add(&self, a: &PVal, b: &PVal) -> std::result::Result<PVal, Lost> {
        let (a, b) = match (a, b) {
            (None, x) | (x, None) => return Ok(x.clone()),
            (Some(a), Some(b)) => (a, b),
        };
        let abs = (a.val + a.prec as i64).min(b.val + b.prec as i64);
        let v = a.val.min(b.val);
        let window = (abs - v) as u32;
        let m = self.modulus(window);
        let shifted = |x: &Qp| {
            let s = (x.val - v) as u64;
            if s >= window as u64 {
                BigUint::zero()
            } else {
                &x.unit * self.modulus(s as u32)
            }
        };
        let s = (shifted(a) + shifted(b)) % &m;
        if s.is_zero() {
            return Err(Lost);
        }
        let (w, u) = self.split(&s);
        let prec = window - w;
        Ok(Some(Qp { val: v + w as i64, unit: u % self.modulus(prec), prec }))
    }

    pub(crate) fn inv(&self, a: &PVal) -> Option<PVal> {
        let a = a.as_ref()?;
        let m = self.modulus(a.prec);
        Some(Some(Qp { val: -a.val, unit: a.unit.modinv(&m).expect("unit"), prec: a.prec }))
    }

    fn eval(&self, f: &Poly, x: &PVal) -> std::result::Result<PVal, Lost> {
        let mut acc: PVal = None;
        let mut prev = f.degree();
        for (e, c) in f.terms().iter().rev() {
            for _ in 0..(prev - *e) {
                acc = self.mul(&acc, x);
            }
            // coefficients were checked rational by the caller
            let c = self.from_rational(&c.to_rational().unwrap());
            acc = self.add(&acc, &c)?;
            prev = *e;
        }
        for _ in 0..prev {
            acc = self.mul(&acc, x);
        }
        Ok(acc)
    }
}

impl Qp {
    pub(crate) fn val(&self) -> i64 {
        self.val
    }
}

/// Result of a p-adic orbit: `Some(v)` is the valuation of a nonzero point,
/// `None` an exact zero.
pub(crate) enum PadicOrbit {
    Complete(Vec<Option<i64>>),
    /// The denominator vanished exactly at `points[t-1]`.
    Pole(Vec<Option<i64>>),
}

/// Valuations of `alpha_0..alpha_steps`, escalating the working precision
/// from `start` digits until every step is decided or `cap` is reached.
pub(crate) fn orbit_valuations(h: &RatMap, a: &Rational, p: u64, steps: usize, start: u32, cap: u32) -> Result<PadicOrbit> {
    let mut prec = start.max(8);
    loop {
        match try_orbit(h, a, p, steps, prec) {
            Ok(o) => return Ok(o),
            Err(Lost) if prec < cap => prec *= 2,
            Err(Lost) => {
                return Err(Error::IndeterminateComparison {
                    what: format!("{p}-adic valuation along the orbit of {}", crate::rational::format_rational(a)),
                    precision_bits: prec,
                })
            }
        }
    }
}

fn try_orbit(h: &RatMap, a: &Rational, p: u64, steps: usize, prec: u32) -> std::result::Result<PadicOrbit, Lost> {
    let ctx = Ctx::new(p, prec);
    let mut x = ctx.from_rational(a);
    let mut vals = vec![x.as_ref().map(Qp::val)];
    for _ in 0..steps {
        let g = ctx.eval(h.den(), &x)?;
        let Some(ginv) = ctx.inv(&g) else {
            return Ok(PadicOrbit::Pole(vals));
        };
        let f = ctx.eval(h.num(), &x)?;
        x = ctx.mul(&f, &ginv);
        vals.push(x.as_ref().map(Qp::val));
    }
    Ok(PadicOrbit::Complete(vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, valuation};

    #[test]
    fn arithmetic_matches_exact_valuations() {
        let ctx = Ctx::new(3, 20);
        let a = ctx.from_rational(&rat(5, 9));
        let b = ctx.from_rational(&rat(-5, 9));
        assert!(ctx.add(&a, &b).is_err());
        let c = ctx.from_rational(&rat(4, 9));
        let s = ctx.add(&a, &c).unwrap().unwrap();
        assert_eq!(s.val(), valuation(&rat(1, 1), 3).unwrap());
        let t = ctx.add(&ctx.from_rational(&int(7)), &ctx.from_rational(&int(2))).unwrap().unwrap();
        assert_eq!(t.val(), 2);
        let pr = ctx.mul(&a, &ctx.from_rational(&int(27))).unwrap();
        assert_eq!(pr.val(), 1);
        assert_eq!(ctx.inv(&a).unwrap().unwrap().val(), 2);
    }

    #[test]
    fn orbit_of_square_map() {
        let h = RatMap::from_poly(Poly::from_ints(&[0, 0, 1]));
        let PadicOrbit::Complete(v) = orbit_valuations(&h, &rat(1, 2), 2, 4, 16, 256).unwrap() else { panic!() };
        assert_eq!(v, vec![Some(-1), Some(-2), Some(-4), Some(-8), Some(-16)]);
    }

    #[test]
    fn exact_orbit_agrees() {
        // (X^3 + 5X + 1/3)/(X - 2) at a = 7/4, p = 2
        let num = Poly::from_dense(vec![
            crate::CycNum::from_rational(&rat(1, 3)),
            crate::CycNum::from_int(5),
            crate::CycNum::zero(),
            crate::CycNum::one(),
        ]);
        let h = RatMap::new(num, Poly::from_ints(&[-2, 1])).unwrap();
        let mut x = crate::CycNum::from_rational(&rat(7, 4));
        let PadicOrbit::Complete(v) = orbit_valuations(&h, &rat(7, 4), 2, 4, 16, 1024).unwrap() else { panic!() };
        for got in v {
            let q = x.to_rational().unwrap();
            assert_eq!(got, valuation(&q, 2));
            x = h.eval(&x).unwrap();
        }
    }
}
