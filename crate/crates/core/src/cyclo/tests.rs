use super::*;
use crate::rational::{int, rat};
use crate::interval::Dyadic;
use proptest::prelude::*;

fn z(n: u64) -> CycNum {
    CycNum::zeta(n)
}

/// Phi_n by repeated exact division of X^n - 1 by the smaller cyclotomic factors.
fn phi_by_division(n: u64) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d != 0 {
            continue;
        }
        let q = phi_by_division(d);
        let dq = q.len() - 1;
        let mut out = vec![0i64; p.len() - dq];
        for top in (dq..p.len()).rev() {
            let c = p[top];
            out[top - dq] = c;
            for j in 0..=dq {
                p[top - dq + j] -= c * q[j];
            }
        }
        assert!(p.iter().all(|&c| c == 0), "inexact division");
        p = out;
    }
    p
}

#[test]
fn cyclotomic_polynomials() {
    assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
    assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
    assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    for n in 1..=40 {
        assert_eq!(cyclotomic_polynomial(n), phi_by_division(n), "n = {n}");
        assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, phi(n));
    }
    // first cyclotomic polynomial with a coefficient of absolute value 2
    assert!(cyclotomic_polynomial(105).contains(&-2));
}

#[test]
fn field_op_examples() {
    assert_eq!(&z(3) + &z(3).pow_u(2), CycNum::from_int(-1));
    assert_eq!(&z(4) * &z(4), CycNum::from_int(-1));
    let one_plus = &CycNum::one() + &z(3);
    assert_eq!(one_plus.inv().unwrap(), z(3).neg());
    assert_eq!(CycNum::zero().inv(), Err(Error::DivisionByZero));
    assert_eq!(CycNum::one().div(&CycNum::zero()), Err(Error::DivisionByZero));
    assert_eq!(z(5).pow(-1).unwrap(), CycNum::zeta_pow(5, 4));
}

/// Inverse of a + b*zeta_3 by solving the 2x2 multiplication system directly.
#[test]
fn inverse_matches_linear_algebra_oracle() {
    for (a, b) in [(1, 1), (2, -3), (5, 7), (0, 1), (-4, 9)] {
        let (a, b) = (int(a), int(b));
        // (a + b z)(x + y z) with z^2 = -1 - z:
        // constant: a x - b y, linear: a y + b x - b y
        let det = &a * &a - &a * &b + &b * &b;
        let x = (&a - &b) / &det;
        let y = -&b / &det;
        let elt = CycNum::from_coeffs(3, &[a.clone(), b.clone()]);
        assert_eq!(elt.inv().unwrap(), CycNum::from_coeffs(3, &[x, y]));
    }
}

#[test]
fn canonical_conductor() {
    assert_eq!(z(2), CycNum::from_int(-1));
    assert_eq!(z(6).conductor(), 3);
    assert_eq!(z(6), z(3).pow_u(2).neg());
    assert_eq!(z(10).conductor(), 5);
    let sqrt2 = &z(8) + &CycNum::zeta_pow(8, 7);
    assert_eq!(sqrt2.conductor(), 8);
    assert_eq!(&sqrt2 * &sqrt2, CycNum::from_int(2));
    let sqrt_m3 = &z(3) - &CycNum::zeta_pow(3, 2);
    assert_eq!(&sqrt_m3 * &sqrt_m3, CycNum::from_int(-3));
    // zeta_12^3 = i lives in Q(zeta_4)
    assert_eq!(CycNum::zeta_pow(12, 3), z(4));
    assert_eq!(CycNum::zeta_pow(60, 20), z(3));
    assert!(CycNum::from_coeffs(15, &[int(0)]).is_zero());
}

#[test]
fn root_of_unity_examples() {
    assert_eq!(z(5).root_of_unity_order(), Some(5));
    assert_eq!((&CycNum::one() + &z(4)).root_of_unity_order(), None);
    assert_eq!((&CycNum::one() + &z(3)).root_of_unity_order(), Some(6));
    assert_eq!(CycNum::from_int(-1).root_of_unity_order(), Some(2));
    assert_eq!(CycNum::one().root_of_unity_order(), Some(1));
    assert_eq!(CycNum::zero().root_of_unity_order(), None);
    assert_eq!(CycNum::from_rational(&rat(1, 2)).root_of_unity_order(), None);
    // modulus one but not a root of unity: (3 + 4i)/5
    let w = CycNum::from_coeffs(4, &[rat(3, 5), rat(4, 5)]);
    assert_eq!(w.root_of_unity_order(), None);
}

#[test]
fn orders_of_all_small_roots() {
    for n in 1..=60u64 {
        for k in 1..=n {
            let a = CycNum::zeta_pow(n, k as i64);
            assert_eq!(a.root_of_unity_order(), Some(n / n.gcd(&k)), "zeta_{n}^{k}");
        }
    }
}

#[test]
fn house_examples() {
    let h = house(&z(8), 64);
    let eps = Dyadic::new(1.into(), -30);
    let one = Dyadic::from_int(1);
    assert!(h.lower <= one && one <= h.upper);
    assert!(h.upper.sub(&h.lower, 64, crate::interval::Round::Up) < eps);
    let h2 = house(&CycNum::from_int(2), 64);
    assert_eq!((h2.lower, h2.upper), (Dyadic::from_int(2), Dyadic::from_int(2)));
    let a = &CycNum::one() + &z(3);
    let h = house(&a, 128);
    assert!(h.interval().contains(&int(1)));
    assert_eq!(house_cmp(&a, &int(1), 128, 4096).unwrap().0, Ordering::Equal);
    // 1 + zeta_5 has conjugate moduli 2cos(pi/5) and 2cos(2pi/5)
    let b = &CycNum::one() + &z(5);
    let h = house(&b, 128);
    assert!((h.lower.to_f64() - 2.0 * (std::f64::consts::PI / 5.0).cos()).abs() < 1e-12);
    assert_eq!(house_cmp(&b, &rat(1618, 1000), 64, 4096).unwrap().0, Ordering::Greater);
    assert_eq!(house_cmp(&b, &rat(1619, 1000), 64, 4096).unwrap().0, Ordering::Less);
    assert!(house_le(&b, &rat(1619, 1000), 64, 4096).unwrap());
}

#[test]
fn clear_denominator_examples() {
    let v = [CycNum::from_rational(&rat(1, 2)), CycNum::from_rational(&rat(3, 4))];
    assert_eq!(clear_denominators(&v), BigInt::from(4));
    let v = [z(3).scale(&rat(1, 6)), CycNum::from_rational(&rat(1, 10))];
    assert_eq!(clear_denominators(&v), BigInt::from(30));
    assert_eq!(clear_denominators(&[CycNum::from_int(2), z(5)]), BigInt::from(1));
}

#[test]
fn radicals() {
    for q in [2, 3, 5, 7, -1, -2, -3, 12, 18, -20] {
        let r = sqrt_rational(&int(q), 200).unwrap();
        assert_eq!(&r * &r, CycNum::from_int(q), "sqrt({q})");
    }
    let r = sqrt_rational(&rat(3, 8), 200).unwrap();
    assert_eq!(&r * &r, CycNum::from_rational(&rat(3, 8)));
    assert!(sqrt_rational(&int(101), 60).is_none());
    assert_eq!(sqrt_rational(&int(9), 1), Some(CycNum::from_int(3)));
    let c = CycNum::from_int(3);
    assert_eq!(nth_root(&c, 1, 60), Some(c.clone()));
    let r = nth_root(&CycNum::from_int(-8), 3, 60).unwrap();
    assert_eq!(r, CycNum::from_int(-2));
    let r = nth_root(&CycNum::from_int(-1), 2, 60).unwrap();
    assert_eq!(&r * &r, CycNum::from_int(-1));
    let c = z(7).scale(&int(4));
    let r = nth_root(&c, 4, 200).unwrap();
    assert_eq!(r.pow_u(4), c);
    assert!(nth_root(&CycNum::from_int(2), 3, 1000).is_none());
    assert!(nth_root(&(&CycNum::one() + &z(8)), 2, 1000).is_none());
}

#[test]
fn literal_and_json() {
    let a = &CycNum::from_rational(&rat(1, 2)) + &CycNum::zeta_pow(12, 2).scale(&int(3));
    assert_eq!(a.to_string(), "7/2 + 3*z3");
    let b = &CycNum::from_rational(&rat(1, 2)) + &CycNum::zeta(12).scale(&int(3));
    assert_eq!(b.to_string(), "1/2 + 3*z12");
    assert_eq!((&z(5) - &CycNum::zeta_pow(5, 3)).to_string(), "z5 - z5^3");
    assert_eq!(z(3).neg().to_string(), "-z3");
    assert_eq!(CycNum::from_rational(&rat(-7, 3)).to_string(), "-7/3");
    let json = serde_json::to_string(&z(3).scale(&rat(2, 3))).unwrap();
    assert_eq!(json, r#"{"conductor":3,"coeffs":[["0","1"],["2","3"]]}"#);
    let back: CycNum = serde_json::from_str(&json).unwrap();
    assert_eq!(back, z(3).scale(&rat(2, 3)));
    assert!(serde_json::from_str::<CycNum>(r#"{"conductor":3,"coeffs":[["1","1"]]}"#).is_err());
}

const CONDUCTORS: [u64; 10] = [1, 3, 4, 5, 7, 8, 9, 12, 15, 20];

fn arb_cyc() -> impl Strategy<Value = CycNum> {
    (0usize..CONDUCTORS.len())
        .prop_flat_map(|i| {
            let n = CONDUCTORS[i];
            (Just(n), proptest::collection::vec((-9i64..10, 1i64..5), phi(n) as usize))
        })
        .prop_map(|(n, cs)| {
            let cs: Vec<Rational> = cs.into_iter().map(|(a, b)| rat(a, b)).collect();
            CycNum::from_coeffs(n, &cs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn lift_round_trip(a in arb_cyc(), extra in 1u64..7) {
        let big = a.conductor() * extra;
        let back = CycNum::from_coeffs(big, &a.coeffs_in(big));
        prop_assert_eq!(back, a);
    }

    #[test]
    fn canonical_is_minimal(a in arb_cyc()) {
        // no proper divisor field representation exists: the element is not
        // fixed by the Galois group of Q(zeta_n)/Q(zeta_{n/p}).
        let n = a.conductor();
        for (p, _) in factor_u64(n) {
            let m = n / p;
            if m % 4 == 2 { continue; }
            let moved = (1..n).filter(|k| k.gcd(&n) == 1 && k % m == 1 % m)
                .any(|k| a.galois(k as i64) != a);
            prop_assert!(moved, "{} fixed by Gal(Q(zeta_{})/Q(zeta_{}))", a, n, m);
        }
    }

    #[test]
    fn house_rotation_invariant(a in arb_cyc(), n in 1u64..13, k in 0i64..13) {
        let rotated = &a * &CycNum::zeta_pow(n, k);
        let h1 = house(&a, 96).interval();
        let h2 = house(&rotated, 96).interval();
        let slack = Dyadic::new(1.into(), -60);
        prop_assert!(h1.lo.sub(&slack, 96, crate::interval::Round::Down) <= h2.hi);
        prop_assert!(h2.lo.sub(&slack, 96, crate::interval::Round::Down) <= h1.hi);
    }

    #[test]
    fn json_round_trip(a in arb_cyc()) {
        let s = serde_json::to_string(&a).unwrap();
        let b: CycNum = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(a, b);
    }
}
