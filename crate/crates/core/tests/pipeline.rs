use cyclodyn::parse::parse_map;
use cyclodyn::search::{run_search, verify_hit, SearchConfig, StartSet, Target};
use cyclodyn::special::{chebyshev, detect_special, mobius_conjugate, Mobius, SpecialKind};
use cyclodyn::{CycNum, OrbitVerdict, RatMap, Rational};
use proptest::prelude::*;

fn small_cyc(n: u64, coeffs: &[i64]) -> CycNum {
    let qs: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
    CycNum::from_coeffs(n, &qs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_is_two_sided(n in prop::sample::select(vec![3u64, 4, 5, 7, 8, 12, 15]), coeffs in prop::collection::vec(-9i64..=9, 1..8)) {
        let a = small_cyc(n, &coeffs);
        prop_assume!(!a.is_zero());
        let b = a.inv().unwrap();
        prop_assert_eq!(a.mul(&b), CycNum::one());
        prop_assert_eq!(b.inv().unwrap(), a);
    }

    #[test]
    fn printed_maps_parse_back(a in -5i64..=5, b in -5i64..=5, c in 1i64..=4) {
        let h = parse_map(&format!("(X^3 + ({a})*X + {b})/({c}*X^2 + 1)")).unwrap();
        prop_assert_eq!(parse_map(&h.to_expr()).unwrap(), h);
    }
}

#[test]
fn search_hits_replay_through_orbits() {
    let h = parse_map("X^2 - 1").unwrap();
    let cfg = SearchConfig::new(h.clone(), StartSet::RootsOfUnity { max_conductor: 8 }, 3, Target::RootOfUnity);
    let report = run_search(&cfg).unwrap();
    assert!(!report.hits.is_empty());
    for hit in &report.hits {
        assert!(verify_hit(&cfg, hit));
        let rec = h.orbit(&hit.start, 3, |x| x.root_of_unity_order().is_some());
        assert_eq!(rec.verdict, OrbitVerdict::TargetHitAtStep(hit.k));
        assert_eq!(rec.points[hit.k], hit.value);
    }
}

#[test]
fn conjugated_chebyshev_over_a_cyclotomic_field() {
    let t3 = RatMap::from_poly(chebyshev(3));
    let mu = CycNum::zeta(3);
    let l = Mobius::affine(mu, CycNum::from_rational(&Rational::new(1.into(), 2.into()))).unwrap();
    let h = mobius_conjugate(&t3, &l);
    let v = detect_special(&h);
    assert_eq!(v.kind, SpecialKind::ChebyshevConjugate);
    assert!(v.witness.unwrap().verifies(&h));
}
