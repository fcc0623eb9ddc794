//! Critical points of a rational map from its Wronskian `f'g - fg'`.

use serde::Serialize;

use super::{eval_p1, mobius_conjugate, Mobius, P1};
use crate::cyclo::{nth_root, CycNum};
use crate::poly::Poly;
use crate::rational::rat;
use crate::ratmap::RatMap;

/// Critical points sharing one squarefree factor of the Wronskian (or the
/// point at infinity), all with the same ramification index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalGroup {
    /// `None` for the point at infinity.
    pub factor: Option<Poly>,
    pub index: u64,
    /// Explicit points when the factor is linear or a split quadratic.
    pub points: Option<Vec<P1>>,
    pub values: Option<Vec<P1>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationPortrait {
    pub degree: u64,
    pub critical: Vec<CriticalGroup>,
    pub totally_ramified: Vec<P1>,
    pub fixed_totally_ramified: Vec<P1>,
    /// `sum (e_P - 1)` over all critical points, `2 deg - 2` by Riemann–Hurwitz.
    pub ramification_sum: u64,
    /// Every totally ramified point was found explicitly.
    pub complete: bool,
}

fn wronskian(h: &RatMap) -> Poly {
    let (f, g) = (h.num(), h.den());
    f.derivative().mul(g).sub(&f.mul(&g.derivative()))
}

/// Roots of a linear or quadratic polynomial when they lie in a cyclotomic
/// field of conductor at most `bound`.
fn small_roots(p: &Poly, bound: u64) -> Option<Vec<CycNum>> {
    match p.degree() {
        1 => Some(vec![p.coeff(0).neg().div(&p.coeff(1)).ok()?]),
        2 => {
            let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
            let disc = b.mul(&b).sub(&a.mul(&c).scale(&rat(4, 1)));
            let sq = nth_root(&disc, 2, bound)?;
            let two_a = a.scale(&rat(2, 1));
            Some(vec![b.neg().add(&sq).div(&two_a).ok()?, b.neg().sub(&sq).div(&two_a).ok()?])
        }
        _ => None,
    }
}

/// Order of vanishing at 0.
fn order_at_zero(p: &Poly) -> u64 {
    p.terms().first().map_or(0, |t| t.0)
}

pub fn ramification_portrait(h: &RatMap, bound: u64) -> RamificationPortrait {
    let dd = h.degree();
    let w = wronskian(h);
    let mut critical = Vec::new();
    let mut tr = Vec::new();
    let mut complete = true;
    let mut sum = 0;
    for (factor, mult) in w.squarefree_decomposition() {
        let index = mult as u64 + 1;
        sum += mult as u64 * factor.degree();
        let points = small_roots(&factor, bound).map(|r| r.into_iter().map(P1::Finite).collect::<Vec<_>>());
        if index == dd {
            match &points {
                Some(ps) => tr.extend(ps.iter().cloned()),
                None => complete = false,
            }
        }
        let values = points.as_ref().map(|ps| ps.iter().map(|p| eval_p1(h, p)).collect());
        critical.push(CriticalGroup { factor: Some(factor), index, points, values });
    }
    // local degree at infinity, read off at 0 after conjugating by 1/X
    let inv = Mobius::new(CycNum::zero(), CycNum::one(), CycNum::one(), CycNum::zero()).unwrap();
    let e_inf = order_at_zero(&wronskian(&mobius_conjugate(h, &inv))) + 1;
    if e_inf > 1 {
        sum += e_inf - 1;
        critical.push(CriticalGroup {
            factor: None,
            index: e_inf,
            points: Some(vec![P1::Infinity]),
            values: Some(vec![eval_p1(h, &P1::Infinity)]),
        });
        if e_inf == dd {
            tr.push(P1::Infinity);
        }
    }
    let fixed = tr.iter().filter(|p| eval_p1(h, p) == **p).cloned().collect();
    RamificationPortrait {
        degree: dd,
        critical,
        totally_ramified: tr,
        fixed_totally_ramified: fixed,
        ramification_sum: sum,
        complete,
    }
}
