//! Literal syntax (`1/2 + 3*z12^2`) and the JSON form of cyclotomic numbers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{phi, CycNum};
use crate::rational::{format_rational, Rational};

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.conductor();
        if n == 1 {
            return write!(f, "{}", format_rational(&self.coeff(0)));
        }
        let mut first = true;
        for (i, c) in self.coeffs().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            let power = match i {
                0 => String::new(),
                1 => format!("z{n}"),
                _ => format!("z{n}^{i}"),
            };
            let body = if power.is_empty() {
                format_rational(&mag)
            } else if mag.is_one() {
                power
            } else {
                format!("{}*{}", format_rational(&mag), power)
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    conductor: u64,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs = self.coeffs().iter().map(|c| [c.numer().to_string(), c.denom().to_string()]).collect();
        Wire { conductor: self.conductor(), coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.conductor == 0 || w.coeffs.len() as u64 != phi(w.conductor) {
            return Err(D::Error::custom("coefficient vector length must equal phi(conductor)"));
        }
        let mut coeffs = Vec::with_capacity(w.coeffs.len());
        for [n, den] in &w.coeffs {
            let n: BigInt = n.parse().map_err(D::Error::custom)?;
            let den: BigInt = den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(Rational::new(n, den));
        }
        Ok(CycNum::from_coeffs(w.conductor, &coeffs))
    }
}
