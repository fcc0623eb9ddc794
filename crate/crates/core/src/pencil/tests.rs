use super::*;
use crate::parse::parse_map;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn map(s: &str) -> RatMap {
    parse_map(s).unwrap()
}

fn y_poly(s: &str) -> Poly {
    crate::parse::parse_poly(&s.replace('Y', "X")).unwrap()
}

#[test]
fn construction_examples() {
    let p = build_pencil(&map("X^2"), 2).unwrap();
    assert_eq!(p.to_expr(), "X^2 - Y^2");
    assert_eq!(p.coeff_x(0), &y_poly("-Y^2"));
    let p = build_pencil(&map("X^3 + 2"), 3).unwrap();
    assert_eq!(p.to_expr(), "X^3 + 2 - Y^3");
    let p = build_pencil(&map("X^2/(X + 1)"), 1).unwrap();
    assert_eq!(p.to_expr(), "X^2 - Y*(X + 1)");
    assert_eq!(p.degree_x(), 2);
    assert_eq!((p.coeff_x(1), p.coeff_x(0)), (&y_poly("-Y"), &y_poly("-Y")));
    assert!(p.y_support_ok());
    assert!(build_pencil(&map("X^2"), 3).is_err());
    assert!(build_pencil(&map("X^2"), 0).is_err());
}

#[test]
fn root_examples() {
    let v = function_field_roots(&build_pencil(&map("X^2"), 2).unwrap(), 60, 4).unwrap();
    let PencilOutcome::RootFound { root } = v.outcome else { panic!("{v:?}") };
    assert_eq!(root.expr, "Y");
    assert_eq!((root.num.clone(), root.den.clone()), (y_poly("Y"), Poly::one()));

    let v = function_field_roots(&build_pencil(&map("X^2"), 1).unwrap(), 60, 4).unwrap();
    assert!(matches!(v.outcome, PencilOutcome::NoRootUpToBound { conductor_bound: 60, degree_bound: 4 }));
    assert!(v.pruned > 0);

    // X^2 + 1 - Y^2 would need Y^2 - 1 to be a square; it is squarefree
    let w = y_poly("Y^2 - 1");
    assert!(w.gcd(&w.derivative()).is_one());
    let v = function_field_roots(&build_pencil(&map("X^2 + 1"), 2).unwrap(), 60, 4).unwrap();
    assert!(matches!(v.outcome, PencilOutcome::NoRootUpToBound { .. }));
}

#[test]
fn roots_with_denominators() {
    // (1 - Y) X - 1 has the root 1/(1 - Y)
    let p = build_pencil(&map("(X - 1)/X"), 1).unwrap();
    let v = function_field_roots(&p, 60, 2).unwrap();
    let PencilOutcome::RootFound { root } = v.outcome else { panic!("{v:?}") };
    assert_eq!(root.expr, "-1/(Y - 1)");
    assert!(p.substitute(&CycNum::one(), &root.num, &root.den).is_zero());
}

#[test]
fn hypothesis_examples() {
    let r = check_hypothesis(&map("X^2"), DEFAULT_CONDUCTOR_BOUND, 4).unwrap();
    let HypothesisVerdict::HypothesisFails { m, root } = &r.verdict else { panic!("{r:?}") };
    assert_eq!((*m, root.expr.as_str()), (2, "Y"));

    let h = map("X^3 + 2");
    let r = check_hypothesis(&h, DEFAULT_CONDUCTOR_BOUND, default_degree_bound(&h)).unwrap();
    assert_eq!(r.verdict, HypothesisVerdict::HypothesisHolds { conductor_bound: 60, degree_bound: 6 });
    assert_eq!(r.rows.len(), 3);
    // Y^3 - 2 is squarefree, so it is not a cube
    let w = y_poly("Y^3 - 2");
    assert!(w.gcd(&w.derivative()).is_one());

    let r = check_hypothesis(&map("X^2/(X + 1)"), 60, 4).unwrap();
    assert_eq!(r.verdict, HypothesisVerdict::DegreeConditionFails);
    assert!(r.max_degree && !r.degree_gap);
}

#[test]
fn signed_powers_fail_at_m_equal_d() {
    for d in 2..=5u64 {
        for sign in [1i64, -1] {
            let h = RatMap::from_poly(Poly::monomial(d, CycNum::from_int(sign)));
            let r = check_hypothesis(&h, DEFAULT_CONDUCTOR_BOUND, default_degree_bound(&h)).unwrap();
            let HypothesisVerdict::HypothesisFails { m, root } = &r.verdict else { panic!("d = {d}, {r:?}") };
            assert_eq!(*m as u64, d);
            // eps * Y with eps^d = sign
            assert!(root.den.is_one());
            assert_eq!(root.num.degree(), 1);
            assert_eq!(root.num.term_count(), 1);
            assert_eq!(root.num.lc().pow_u(d), CycNum::from_int(sign));
            for row in &r.rows {
                if row.m as u64 != d {
                    assert!(matches!(row.verdict.outcome, PencilOutcome::NoRootUpToBound { .. }), "d = {d}, m = {}", row.m);
                }
            }
        }
    }
}

fn random_map(rng: &mut ChaCha8Rng) -> RatMap {
    loop {
        let d = rng.gen_range(2..=4usize);
        let mut f: Vec<i64> = (0..=d).map(|_| rng.gen_range(-2..=2)).collect();
        f[d] = rng.gen_range(1..=2);
        let e = rng.gen_range(0..=d);
        let mut g: Vec<i64> = (0..=e).map(|_| rng.gen_range(-2..=2)).collect();
        g[e] = 1;
        // keep sparse shapes common so that roots actually occur
        if rng.gen_bool(0.5) {
            for c in f.iter_mut().take(d) {
                *c = 0;
            }
        }
        if let Ok(h) = RatMap::new(Poly::from_ints(&f), Poly::from_ints(&g)) {
            if h.num().degree() >= 1 {
                return h;
            }
        }
    }
}

#[test]
fn pruning_agrees_with_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let full = PencilOptions { prune: false, ..Default::default() };
    let mut found = 0;
    for _ in 0..20 {
        let h = random_map(&mut rng);
        let m = rng.gen_range(1..=h.num().degree() as u32);
        let p = build_pencil(&h, m).unwrap();
        let a = function_field_roots(&p, 12, 4).unwrap();
        let b = function_field_roots_with(&p, 12, 4, &full).unwrap();
        assert_eq!(a.outcome, b.outcome, "{p}");
        assert_eq!(b.pruned, 0);
        if let PencilOutcome::RootFound { root } = &a.outcome {
            found += 1;
            assert!(p.substitute(&CycNum::one(), &root.num, &root.den).is_zero(), "{p}");
        }
    }
    assert!(found > 0);
}
