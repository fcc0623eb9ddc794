//! Sparse univariate polynomials with [`CycNum`] coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Sparse polynomial: strictly ascending exponents, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(u64, CycNum)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(CycNum::one())
    }

    pub fn x() -> Self {
        Poly::monomial(1, CycNum::one())
    }

    pub fn constant(c: CycNum) -> Self {
        Poly::monomial(0, c)
    }

    pub fn monomial(e: u64, c: CycNum) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(e, c)] }
        }
    }

    /// Sorts, merges equal exponents and drops zeros.
    pub fn from_terms(mut terms: Vec<(u64, CycNum)>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(u64, CycNum)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = lc.add(&c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    /// Dense ascending integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (i as u64, CycNum::from_int(c))).collect())
    }

    /// Dense ascending coefficients.
    pub fn from_dense(coeffs: Vec<CycNum>) -> Self {
        Poly::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| (i as u64, c)).collect())
    }

    pub fn terms(&self) -> &[(u64, CycNum)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u64 {
        self.terms.last().map_or(0, |t| t.0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn lc(&self) -> CycNum {
        self.terms.last().map_or_else(CycNum::zero, |t| t.1.clone())
    }

    pub fn coeff(&self, e: u64) -> CycNum {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => CycNum::zero(),
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_rational())
    }

    /// Least common multiple of the coefficient conductors.
    pub fn conductor(&self) -> u64 {
        self.terms.iter().fold(1u64, |acc, (_, c)| acc.lcm(&c.conductor()))
    }

    /// Dense ascending coefficient vector of length `degree + 1`.
    pub fn dense(&self) -> Vec<CycNum> {
        let mut v = vec![CycNum::zero(); self.degree() as usize + 1];
        for (e, c) in &self.terms {
            v[*e as usize] = c.clone();
        }
        v
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_a = j >= other.terms.len() || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_b = i >= self.terms.len() || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_a {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_b {
                out.push(other.terms[j].clone());
                j += 1;
            } else {
                let c = self.terms[i].1.add(&other.terms[j].1);
                if !c.is_zero() {
                    out.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, a)| (*e, a.mul(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.is_rational() && other.is_rational() {
            return mul_rational(self, other);
        }
        let mut acc: BTreeMap<u64, CycNum> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let p = ca.mul(cb);
                acc.entry(ea + eb).and_modify(|c| *c = c.add(&p)).or_insert(p);
            }
        }
        Poly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow_u(&self, mut k: u64) -> Self {
        let mut acc = Poly::one();
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Horner evaluation over the sparse support.
    pub fn eval(&self, x: &CycNum) -> CycNum {
        let mut acc = CycNum::zero();
        let mut prev = self.degree();
        for (e, c) in self.terms.iter().rev() {
            if !acc.is_zero() {
                acc = acc.mul(&x.pow_u(prev - e));
            }
            acc = acc.add(c);
            prev = *e;
        }
        if prev > 0 && !acc.is_zero() {
            acc = acc.mul(&x.pow_u(prev));
        }
        acc
    }

    /// `self(q(X))`.
    pub fn compose(&self, q: &Poly) -> Self {
        let mut acc = Poly::zero();
        let mut prev = self.degree();
        for (e, c) in self.terms.iter().rev() {
            if !acc.is_zero() {
                acc = acc.mul(&q.pow_u(prev - e));
            }
            acc = acc.add(&Poly::constant(c.clone()));
            prev = *e;
        }
        if prev > 0 && !acc.is_zero() {
            acc = acc.mul(&q.pow_u(prev));
        }
        acc
    }

    /// `self(c X)`.
    pub fn scale_var(&self, c: &CycNum) -> Self {
        Poly::from_terms(self.terms.iter().map(|(e, a)| (*e, a.mul(&c.pow_u(*e)))).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e > 0)
                .map(|(e, c)| (e - 1, c.scale(&Rational::from_integer(BigInt::from(*e)))))
                .collect(),
        }
    }

    /// Euclidean division over the coefficient field.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() || self.degree() < d.degree() {
            return Ok((Poly::zero(), self.clone()));
        }
        let dd = d.degree();
        let inv = d.lc().inv()?;
        let mut r: BTreeMap<u64, CycNum> = self.terms.iter().cloned().collect();
        let mut q = Vec::new();
        while let Some((&top, _)) = r.iter().next_back() {
            if top < dd {
                break;
            }
            let c = r.remove(&top).unwrap().mul(&inv);
            let shift = top - dd;
            for (e, a) in &d.terms[..d.terms.len() - 1] {
                let t = a.mul(&c);
                let k = e + shift;
                let v = r.get(&k).map_or_else(|| t.neg(), |x| x.sub(&t));
                if v.is_zero() {
                    r.remove(&k);
                } else {
                    r.insert(k, v);
                }
            }
            q.push((shift, c));
        }
        q.reverse();
        Ok((Poly { terms: q }, Poly { terms: r.into_iter().collect() }))
    }

    /// Quotient of an exact division; `None` if the remainder is nonzero.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    fn prem(&self, d: &Poly) -> Poly {
        let delta = self.degree() + 1 - d.degree();
        let lc = d.lc().pow_u(delta);
        self.scale(&lc).div_rem(d).unwrap().1
    }

    /// Monic gcd by the subresultant remainder sequence; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) =
            if self.degree() >= other.degree() { (self.clone(), other.clone()) } else { (other.clone(), self.clone()) };
        if b.is_zero() {
            return a.monic();
        }
        let mut g = CycNum::one();
        let mut h = CycNum::one();
        loop {
            let delta = a.degree() - b.degree();
            let r = a.prem(&b);
            if r.is_zero() {
                return b.monic();
            }
            if r.degree() == 0 {
                return Poly::one();
            }
            let denom = g.mul(&h.pow_u(delta));
            a = b;
            b = r.scale(&denom.inv().unwrap());
            g = a.lc();
            // h <- g^delta / h^(delta - 1)
            h = g.pow_u(delta).mul(&h.pow(1 - delta as i64).unwrap());
        }
    }

    /// Yun's squarefree decomposition: monic `(factor, multiplicity)` pairs with
    /// nonconstant, pairwise coprime factors; the product of `factor^mult` is `monic(self)`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0).unwrap();
        let c = fp.exact_div(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut i = 1u32;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            let nb = b.exact_div(&a).unwrap();
            let c = d.exact_div(&a).unwrap();
            d = c.sub(&nb.derivative());
            if a.degree() > 0 {
                out.push((a, i));
            }
            b = nb;
            i += 1;
        }
        out
    }

    /// Formats the polynomial in the given variable name.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c.to_rational() {
                Some(q) if q < Rational::zero() => (true, CycNum::from_rational(&-q)),
                _ => (false, c.clone()),
            };
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            let cs = mag.to_string();
            let coef = if mag.is_rational() || !cs.contains([' ']) { cs } else { format!("({cs})") };
            let body = if mono.is_empty() {
                coef
            } else if mag.is_one() {
                mono
            } else {
                format!("{coef}*{mono}")
            };
            match (idx == 0, neg) {
                (true, false) => s.push_str(&body),
                (true, true) => {
                    s.push('-');
                    s.push_str(&body)
                }
                (false, false) => {
                    s.push_str(" + ");
                    s.push_str(&body)
                }
                (false, true) => {
                    s.push_str(" - ");
                    s.push_str(&body)
                }
            }
        }
        s
    }
}

/// Product of two polynomials with rational coefficients through integer arithmetic.
fn mul_rational(a: &Poly, b: &Poly) -> Poly {
    let (ia, da) = int_form(a);
    let (ib, db) = int_form(b);
    let den = da * db;
    let deg = a.degree() + b.degree();
    let dense = deg as usize <= 4 * a.terms.len() * b.terms.len() + 64;
    let collected: Vec<(u64, BigInt)> = if dense {
        let mut v = vec![BigInt::zero(); deg as usize + 1];
        for (ea, ca) in &ia {
            for (eb, cb) in &ib {
                v[(ea + eb) as usize] += ca * cb;
            }
        }
        v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u64, c)).collect()
    } else {
        let mut m: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (ea, ca) in &ia {
            for (eb, cb) in &ib {
                *m.entry(ea + eb).or_default() += ca * cb;
            }
        }
        m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    };
    Poly {
        terms: collected
            .into_iter()
            .map(|(e, c)| (e, CycNum::from_rational(&Rational::new(c, den.clone()))))
            .collect(),
    }
}

fn int_form(p: &Poly) -> (Vec<(u64, BigInt)>, BigInt) {
    let den = p.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denominator()));
    let v = p
        .terms
        .iter()
        .map(|(e, c)| {
            let q = c.to_rational().unwrap();
            (*e, q.numer() * (&den / q.denom()))
        })
        .collect();
    (v, den)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("X"))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    coeffs: Vec<(u64, CycNum)>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { coeffs: self.terms.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::from_terms(Wire::deserialize(d)?.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[1, 0, 1]);
        assert_eq!(a.to_string(), "X^2 + 1");
        assert_eq!(a.mul(&a), p(&[1, 0, 2, 0, 1]));
        assert_eq!(p(&[0, -3, 0, 1]).to_string(), "X^3 - 3*X");
        assert_eq!(a.eval(&CycNum::from_int(2)), CycNum::from_int(5));
        assert_eq!(a.eval(&CycNum::zeta(4)), CycNum::zero());
        assert_eq!(a.compose(&a), p(&[2, 0, 2, 0, 1]));
        assert_eq!(a.derivative(), p(&[0, 2]));
        assert_eq!(a.term_count(), 2);
        let z = Poly::from_terms(vec![(2, CycNum::one()), (0, CycNum::one().add(&CycNum::zeta(3)))]);
        assert_eq!(z.to_string(), "X^2 + (1 + z3)");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn division_gcd_squarefree() {
        let a = p(&[-1, 0, 1]); // X^2 - 1
        let b = p(&[1, 1]); // X + 1
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert!(a.div_rem(&Poly::zero()).is_err());
        let f = p(&[-1, 1]).pow_u(3).mul(&p(&[2, 1]).pow_u(2)).mul(&p(&[5, 0, 1]));
        let g = p(&[-1, 1]).pow_u(2).mul(&p(&[7, 1]));
        assert_eq!(f.gcd(&g), p(&[-1, 1]).pow_u(2));
        let sf = f.scale(&CycNum::from_int(3)).squarefree_decomposition();
        assert_eq!(sf, vec![(p(&[5, 0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]);
        // gcd over Q(zeta_3): X^2 + X + 1 and X - zeta_3
        let lin = Poly::from_terms(vec![(1, CycNum::one()), (0, CycNum::zeta(3).neg())]);
        assert_eq!(p(&[1, 1, 1]).gcd(&lin), lin);
    }

    #[test]
    fn json_form() {
        let a = Poly::from_terms(vec![(3, CycNum::one()), (0, CycNum::from_rational(&rat(1, 2)))]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"{"coeffs":[[0,{"conductor":1,"coeffs":[["1","2"]]}],[3,{"conductor":1,"coeffs":[["1","1"]]}]]}"#
        );
        assert_eq!(serde_json::from_str::<Poly>(&s).unwrap(), a);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-6i64..7, 1i64..4, 0usize..3), 1..6).prop_map(|cs| {
            Poly::from_dense(
                cs.into_iter()
                    .map(|(a, b, z)| match z {
                        0 => CycNum::from_rational(&rat(a, b)),
                        1 => CycNum::zeta(3).scale(&rat(a, b)),
                        _ => CycNum::zeta(4).scale(&rat(a, b)).add(&CycNum::from_int(1)),
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn division_identity(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }

        #[test]
        fn gcd_divides_and_is_maximal(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assume!(!c.is_zero() && !a.is_zero() && !b.is_zero());
            let ac = a.mul(&c);
            let bc = b.mul(&c);
            let g = ac.gcd(&bc);
            prop_assert!(ac.exact_div(&g).is_some());
            prop_assert!(bc.exact_div(&g).is_some());
            prop_assert!(g.exact_div(&c.monic()).is_some());
            prop_assert!(g.is_monic());
        }

        #[test]
        fn eval_is_ring_hom(a in arb_poly(), b in arb_poly(), x in -5i64..6) {
            let x = CycNum::from_rational(&int(x)).add(&CycNum::zeta(3));
            prop_assert_eq!(a.mul(&b).eval(&x), a.eval(&x).mul(&b.eval(&x)));
            prop_assert_eq!(a.compose(&b).eval(&x), a.eval(&b.eval(&x)));
        }
    }
}
