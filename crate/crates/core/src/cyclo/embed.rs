//! Complex embeddings and the certified house.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::{Serialize, Serializer};

use super::CycNum;
use crate::error::{Error, Result};
use crate::interval::{cos_sin_turns, ComplexInterval, Dyadic, Interval, Round};
use crate::rational::Rational;

type Table = Arc<Vec<ComplexInterval>>;

static TABLES: OnceLock<Mutex<HashMap<(u64, u32), Table>>> = OnceLock::new();

/// Enclosures of `exp(2 pi i j / n)` for `j = 0..n`, memoized per `(n, prec)`.
pub fn embedding_table(n: u64, prec: u32) -> Table {
    let cache = TABLES.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(n, prec)) {
        return t.clone();
    }
    let table: Table = Arc::new(
        (0..n)
            .map(|j| {
                let (c, s) = cos_sin_turns(&Rational::new((j as i64).into(), (n as i64).into()), prec);
                ComplexInterval { re: c, im: s }
            })
            .collect(),
    );
    let mut guard = cache.lock().unwrap();
    if guard.len() > 256 {
        guard.clear();
    }
    guard.entry((n, prec)).or_insert(table).clone()
}

impl CycNum {
    /// Enclosure of the image under `zeta_n -> exp(2 pi i k / n)`, where `n` is a
    /// multiple of the conductor and `table = embedding_table(n, prec)`.
    pub fn embed(&self, k: u64, n: u64, table: &[ComplexInterval], prec: u32) -> ComplexInterval {
        let (num, den) = self.int_parts();
        let step = n / self.conductor();
        let mut acc = ComplexInterval::zero();
        for (i, c) in num.iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let j = ((i as u64 * step) % n) * (k % n) % n;
            let ci = Interval::point(Dyadic::new(c.clone(), 0));
            acc = acc.add(&table[j as usize].scale(&ci, prec), prec);
        }
        if num_traits::One::is_one(den) {
            return acc;
        }
        let d = Interval::point(Dyadic::new(den.clone(), 0));
        ComplexInterval { re: acc.re.div(&d, prec).unwrap(), im: acc.im.div(&d, prec).unwrap() }
    }

    /// Embedding indices `k` (coprime to the conductor) up to complex conjugation.
    pub fn embedding_indices(n: u64) -> Vec<u64> {
        if n <= 2 {
            return vec![1];
        }
        (1..=n / 2).filter(|k| k.gcd(&n) == 1).collect()
    }
}

/// Enclosure of the house (maximum modulus over all conjugates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HouseInterval {
    pub lower: Dyadic,
    pub upper: Dyadic,
    pub precision_bits: u32,
}

impl HouseInterval {
    pub fn interval(&self) -> Interval {
        Interval::new(self.lower.clone(), self.upper.clone())
    }
}

impl Serialize for HouseInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HouseInterval", 3)?;
        st.serialize_field("lower", &self.lower.to_decimal(20, Round::Down))?;
        st.serialize_field("upper", &self.upper.to_decimal(20, Round::Up))?;
        st.serialize_field("precision_bits", &self.precision_bits)?;
        st.end()
    }
}

/// Certified enclosure of the house of `a` at the given working precision.
pub fn house(a: &CycNum, precision_bits: u32) -> HouseInterval {
    let n = a.conductor();
    let table = embedding_table(n, precision_bits);
    let mut best: Option<Interval> = None;
    for k in CycNum::embedding_indices(n) {
        let m = a.embed(k, n, &table, precision_bits).abs(precision_bits);
        best = Some(match best {
            None => m,
            Some(b) => b.max(&m),
        });
    }
    let b = best.unwrap();
    HouseInterval { lower: b.lo, upper: b.hi, precision_bits }
}

/// Exact comparison of `house(a)` with a nonnegative rational `t`.
///
/// Works with the real element `delta = a * conj(a) - t^2`: the house equals `t`
/// exactly when `delta = 0`, otherwise all conjugates of `delta` are nonzero and
/// their signs are certified with precision doubling from `start` up to `cap`.
/// Returns the ordering and the precision that certified it.
pub fn house_cmp(a: &CycNum, t: &Rational, start: u32, cap: u32) -> Result<(Ordering, u32)> {
    assert!(!num_traits::Signed::is_negative(t), "house threshold must be nonnegative");
    let delta = a.abs_sq().sub(&CycNum::from_rational(&(t * t)));
    if delta.is_zero() {
        return Ok((Ordering::Equal, 0));
    }
    if let Some(q) = delta.to_rational() {
        return Ok((if num_traits::Signed::is_positive(&q) { Ordering::Greater } else { Ordering::Less }, 0));
    }
    let n = delta.conductor();
    let mut prec = start.max(32);
    loop {
        let table = embedding_table(n, prec);
        let mut undecided = false;
        for k in CycNum::embedding_indices(n) {
            let v = delta.embed(k, n, &table, prec).re;
            match v.sign() {
                Some(1) => return Ok((Ordering::Greater, prec)),
                Some(_) => {}
                None => undecided = true,
            }
        }
        if !undecided {
            return Ok((Ordering::Less, prec));
        }
        if prec >= cap {
            return Err(Error::IndeterminateComparison {
                what: format!("house({a}) against {}", crate::rational::format_rational(t)),
                precision_bits: prec,
            });
        }
        prec = (prec * 2).min(cap);
    }
}

/// Certified `house(a) <= t`.
pub fn house_le(a: &CycNum, t: &Rational, start: u32, cap: u32) -> Result<bool> {
    Ok(house_cmp(a, t, start, cap)?.0 != Ordering::Greater)
}
