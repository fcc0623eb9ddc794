//! Chebyshev polynomials, Möbius conjugation, ramification portraits and
//! detection of maps conjugate to `±X^d` or `±T_d`.
//!
//! A special verdict always carries a Möbius witness `L` with
//! `L∘h∘L⁻¹ = εX^d` (or `εT_d`) checked by exact coefficient comparison.
//! Portraits are only used to rule shapes out and to locate the witness.

mod portrait;

pub use portrait::{ramification_portrait, CriticalGroup, RamificationPortrait};

use std::fmt;

use serde::{Serialize, Serializer};

use crate::cyclo::{nth_root, CycNum};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratmap::RatMap;

/// Largest conductor searched when a witness needs a radical.
pub const DEFAULT_SPLITTING_CONDUCTOR: u64 = 120;

/// `T_d` from `T_0 = 2`, `T_1 = X`, `T_{k+1} = X T_k - T_{k-1}`.
pub fn chebyshev(d: u64) -> Poly {
    let mut prev = Poly::constant(CycNum::from_int(2));
    let mut cur = Poly::x();
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = Poly::x().mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// A point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum P1 {
    Finite(CycNum),
    Infinity,
}

impl fmt::Display for P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1::Finite(c) => write!(f, "{c}"),
            P1::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for P1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

/// `X -> (aX + b)/(cX + d)`, scaled so the first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mobius {
    a: CycNum,
    b: CycNum,
    c: CycNum,
    d: CycNum,
}

impl Mobius {
    pub fn new(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> Result<Self> {
        if a.mul(&d).sub(&b.mul(&c)).is_zero() {
            return Err(Error::InvalidArgument("Möbius determinant vanishes".into()));
        }
        let lead = [&a, &b, &c, &d].into_iter().find(|x| !x.is_zero()).unwrap().inv()?;
        Ok(Mobius { a: a.mul(&lead), b: b.mul(&lead), c: c.mul(&lead), d: d.mul(&lead) })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Mobius::new(CycNum::from_int(a), CycNum::from_int(b), CycNum::from_int(c), CycNum::from_int(d))
    }

    pub fn identity() -> Self {
        Mobius { a: CycNum::one(), b: CycNum::zero(), c: CycNum::zero(), d: CycNum::one() }
    }

    /// `X -> mu X + nu`.
    pub fn affine(mu: CycNum, nu: CycNum) -> Result<Self> {
        Mobius::new(mu, nu, CycNum::zero(), CycNum::one())
    }

    pub fn entries(&self) -> [&CycNum; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn conductor(&self) -> u64 {
        self.entries().iter().fold(1, |n, x| num_integer::Integer::lcm(&n, &x.conductor()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Mobius) -> Mobius {
        let m = |x: &CycNum, y: &CycNum, z: &CycNum, w: &CycNum| x.mul(y).add(&z.mul(w));
        Mobius::new(
            m(&self.a, &o.a, &self.b, &o.c),
            m(&self.a, &o.b, &self.b, &o.d),
            m(&self.c, &o.a, &self.d, &o.c),
            m(&self.c, &o.b, &self.d, &o.d),
        )
        .expect("product of invertible maps")
    }

    pub fn inverse(&self) -> Mobius {
        Mobius::new(self.d.clone(), self.b.neg(), self.c.neg(), self.a.clone()).expect("invertible")
    }

    pub fn apply(&self, p: &P1) -> P1 {
        match p {
            P1::Infinity if self.c.is_zero() => P1::Infinity,
            P1::Infinity => P1::Finite(self.a.div(&self.c).unwrap()),
            P1::Finite(x) => {
                let den = self.c.mul(x).add(&self.d);
                if den.is_zero() {
                    P1::Infinity
                } else {
                    P1::Finite(self.a.mul(x).add(&self.b).div(&den).unwrap())
                }
            }
        }
    }

    pub fn to_ratmap(&self) -> RatMap {
        let num = Poly::from_dense(vec![self.b.clone(), self.a.clone()]);
        let den = Poly::from_dense(vec![self.d.clone(), self.c.clone()]);
        RatMap::new(num, den).expect("nonzero denominator")
    }

    /// `sum p_i (aX + b)^i (cX + d)^(deg - i)`.
    fn substitute(&self, p: &Poly, deg: u64) -> Poly {
        let lin_num = Poly::from_dense(vec![self.b.clone(), self.a.clone()]);
        let lin_den = Poly::from_dense(vec![self.d.clone(), self.c.clone()]);
        let mut np = vec![Poly::one()];
        let mut dp = vec![Poly::one()];
        for i in 1..=deg as usize {
            np.push(np[i - 1].mul(&lin_num));
            dp.push(dp[i - 1].mul(&lin_den));
        }
        let mut acc = Poly::zero();
        for (i, c) in p.terms() {
            acc = acc.add(&np[*i as usize].mul(&dp[(deg - i) as usize]).scale(c));
        }
        acc
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ratmap().to_expr())
    }
}

impl Serialize for Mobius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Mobius", 5)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("c", &self.c.to_string())?;
        st.serialize_field("d", &self.d.to_string())?;
        st.serialize_field("expr", &self.to_string())?;
        st.end()
    }
}

/// `L∘h∘L⁻¹`, reduced.
pub fn mobius_conjugate(h: &RatMap, l: &Mobius) -> RatMap {
    let dd = h.degree();
    let li = l.inverse();
    let f = li.substitute(h.num(), dd);
    let g = li.substitute(h.den(), dd);
    let num = f.scale(&l.a).add(&g.scale(&l.b));
    let den = f.scale(&l.c).add(&g.scale(&l.d));
    RatMap::new(num, den).expect("conjugate of a map has a nonzero denominator")
}

/// Image of a point of the projective line under `h`.
pub fn eval_p1(h: &RatMap, p: &P1) -> P1 {
    match p {
        P1::Infinity => match h.d().cmp(&h.e()) {
            std::cmp::Ordering::Greater => P1::Infinity,
            std::cmp::Ordering::Less => P1::Finite(CycNum::zero()),
            std::cmp::Ordering::Equal => P1::Finite(h.num().lc().div(&h.den().lc()).unwrap()),
        },
        P1::Finite(x) => match h.eval(x) {
            Ok(y) => P1::Finite(y),
            Err(_) => P1::Infinity,
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialKind {
    PowerConjugate,
    ChebyshevConjugate,
    NotSpecial,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `ε X^exponent` (the exponent is `-deg h` when `h` swaps its two
    /// totally ramified points).
    Power,
    Chebyshev,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub mobius: Mobius,
    pub sign: i8,
    pub family: Family,
    /// `d` for `εT_d`; `±d` for `εX^(±d)`.
    pub exponent: i64,
}

impl Witness {
    /// The normal form `εX^e` or `εT_d`.
    pub fn normal_form(&self) -> RatMap {
        let eps = CycNum::from_int(self.sign as i64);
        match self.family {
            Family::Chebyshev => RatMap::from_poly(chebyshev(self.exponent as u64).scale(&eps)),
            Family::Power if self.exponent >= 0 => {
                RatMap::from_poly(Poly::monomial(self.exponent as u64, eps))
            }
            Family::Power => {
                RatMap::new(Poly::constant(eps), Poly::monomial(self.exponent.unsigned_abs(), CycNum::one())).unwrap()
            }
        }
    }

    /// Exact check of `L∘h∘L⁻¹ = normal form`.
    pub fn verifies(&self, h: &RatMap) -> bool {
        mobius_conjugate(h, &self.mobius) == self.normal_form()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialVerdict {
    pub kind: SpecialKind,
    pub witness: Option<Witness>,
    /// Conductor of the field holding the witness entries.
    pub witness_conductor: Option<u64>,
    pub note: Option<String>,
}

impl SpecialVerdict {
    fn plain(kind: SpecialKind, note: impl Into<String>) -> Self {
        SpecialVerdict { kind, witness: None, witness_conductor: None, note: Some(note.into()) }
    }

    fn found(h: &RatMap, w: Witness) -> Option<Self> {
        if !w.verifies(h) {
            return None;
        }
        let kind = match w.family {
            Family::Power => SpecialKind::PowerConjugate,
            Family::Chebyshev => SpecialKind::ChebyshevConjugate,
        };
        let note = (w.exponent < 0).then(|| "h swaps its two totally ramified points".to_string());
        Some(SpecialVerdict { kind, witness_conductor: Some(w.mobius.conductor()), witness: Some(w), note })
    }
}

pub fn detect_special(h: &RatMap) -> SpecialVerdict {
    detect_special_with(h, DEFAULT_SPLITTING_CONDUCTOR)
}

/// Decides whether `h` is conjugate over the algebraic closure to `±X^(±d)`
/// or `±T_d`, using radicals from cyclotomic fields of conductor at most
/// `conductor_bound` for the witness.
pub fn detect_special_with(h: &RatMap, conductor_bound: u64) -> SpecialVerdict {
    let dd = h.degree();
    if dd < 2 {
        return SpecialVerdict::plain(SpecialKind::NotSpecial, "degree below 2");
    }
    let portrait = ramification_portrait(h, conductor_bound);
    if !portrait.complete {
        return SpecialVerdict::plain(SpecialKind::Unknown, "totally ramified points do not split over the searched fields");
    }
    let tr = &portrait.totally_ramified;
    let mut blocked = false;
    if tr.len() == 2 {
        let (p, q) = (&tr[0], &tr[1]);
        let (hp, hq) = (eval_p1(h, p), eval_p1(h, q));
        let fixed = hp == *p && hq == *q;
        let swapped = hp == *q && hq == *p;
        if fixed || swapped {
            match power_witness(h, p, q, swapped, conductor_bound) {
                Some(w) => {
                    if let Some(v) = SpecialVerdict::found(h, w) {
                        return v;
                    }
                }
                None => blocked = true,
            }
        }
    }
    for p in &portrait.fixed_totally_ramified {
        match chebyshev_witness(h, p, conductor_bound) {
            Ok(Some(w)) => {
                if let Some(v) = SpecialVerdict::found(h, w) {
                    return v;
                }
            }
            Ok(None) => {}
            Err(()) => blocked = true,
        }
    }
    if blocked {
        return SpecialVerdict::plain(SpecialKind::Unknown, "a witness needs a radical outside the searched fields");
    }
    SpecialVerdict::plain(SpecialKind::NotSpecial, "ramification excludes both special shapes")
}

/// Möbius map sending `p -> 0` and `q -> inf`.
fn zero_infinity(p: &P1, q: &P1) -> Mobius {
    match (p, q) {
        (P1::Finite(p), P1::Finite(q)) => Mobius::new(CycNum::one(), p.neg(), CycNum::one(), q.neg()).unwrap(),
        (P1::Finite(p), P1::Infinity) => Mobius::affine(CycNum::one(), p.neg()).unwrap(),
        (P1::Infinity, P1::Finite(q)) => Mobius::new(CycNum::zero(), CycNum::one(), CycNum::one(), q.neg()).unwrap(),
        _ => unreachable!("distinct points"),
    }
}

/// Conjugating to `c X^(±d)` and absorbing `c` by `X -> mu X`.
fn power_witness(h: &RatMap, p: &P1, q: &P1, swapped: bool, bound: u64) -> Option<Witness> {
    let dd = h.degree();
    let l1 = zero_infinity(p, q);
    let h1 = mobius_conjugate(h, &l1);
    let c = h1.num().lc();
    // mu (c (X/mu)^(±d)) = c mu^(1 ∓ d) X^(±d); want eps
    for sign in [1i8, -1] {
        let eps = CycNum::from_int(sign as i64);
        let mu = if swapped {
            // mu^(d+1) = eps / c
            nth_root(&eps.div(&c).ok()?, dd as u32 + 1, bound)
        } else if dd == 1 {
            None
        } else {
            // mu^(d-1) = c / eps
            nth_root(&c.div(&eps).ok()?, dd as u32 - 1, bound)
        };
        if let Some(mu) = mu {
            let l = Mobius::affine(mu, CycNum::zero()).ok()?.compose(&l1);
            let exponent = if swapped { -(dd as i64) } else { dd as i64 };
            return Some(Witness { mobius: l, sign, family: Family::Power, exponent });
        }
    }
    None
}

/// Moves the fixed totally ramified point `p` to infinity and normalises the
/// resulting polynomial's critical values to `±2`. `Err` when a needed
/// square root is not found.
fn chebyshev_witness(h: &RatMap, p: &P1, bound: u64) -> std::result::Result<Option<Witness>, ()> {
    let dd = h.degree();
    let l1 = match p {
        P1::Infinity => Mobius::identity(),
        P1::Finite(x) => Mobius::new(CycNum::zero(), CycNum::one(), CycNum::one(), x.neg()).unwrap(),
    };
    let h1 = mobius_conjugate(h, &l1);
    if !h1.is_polynomial() {
        return Ok(None);
    }
    let poly = h1.num().clone();
    let attempt = |a: Mobius| {
        let w = Witness { mobius: a.compose(&l1), sign: 1, family: Family::Chebyshev, exponent: dd as i64 };
        let conj = mobius_conjugate(h, &w.mobius);
        let t = RatMap::from_poly(chebyshev(dd));
        if conj == t {
            return Some(w);
        }
        let neg = RatMap::from_poly(chebyshev(dd).neg());
        (conj == neg).then_some(Witness { sign: -1, ..w })
    };
    if dd == 2 {
        // a X^2 + b X + c is conjugate by X -> aX + b/2 to X^2 + C
        let (a, b) = (poly.coeff(2), poly.coeff(1));
        let m = Mobius::affine(a, b.scale(&crate::rational::rat(1, 2))).unwrap();
        return Ok(attempt(m));
    }
    let w0 = poly.derivative().monic();
    if !w0.gcd(&w0.derivative()).is_constant() {
        return Ok(None);
    }
    // critical values are the roots of the minimal polynomial of `poly` modulo `w0`
    let r1 = poly.div_rem(&w0).unwrap().1;
    if r1.is_constant() {
        return Ok(None);
    }
    let r2 = r1.mul(&r1).div_rem(&w0).unwrap().1;
    let top = r1.degree();
    let s = r2.coeff(top).div(&r1.coeff(top)).unwrap();
    let t = r2.sub(&r1.scale(&s));
    if !t.is_constant() {
        return Ok(None);
    }
    let t = t.coeff(0);
    // values v with v^2 = s v + t
    let disc = s.mul(&s).add(&t.scale(&crate::rational::int(4)));
    let Some(sq) = nth_root(&disc, 2, bound) else { return Err(()) };
    let half = crate::rational::rat(1, 2);
    let v1 = s.add(&sq).scale(&half);
    let v2 = s.sub(&sq).scale(&half);
    for (x, y) in [(&v1, &v2), (&v2, &v1)] {
        // A(x) = 2, A(y) = -2
        let alpha = CycNum::from_int(4).div(&x.sub(y)).unwrap();
        let beta = CycNum::from_int(2).sub(&alpha.mul(x));
        if let Some(w) = attempt(Mobius::affine(alpha, beta).unwrap()) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
