//! Acceptance suite: one PASS/FAIL line per criterion, each with its time
//! limit. Runs without the libtest harness so the lines always print.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use cyclodyn::growth::suite::{archimedean_suite, degenerate_suites, padic_suite};
use cyclodyn::growth::{house_backstop_check, min_M_threshold, BackstopVerdict, Precision};
use cyclodyn::parse::parse_map;
use cyclodyn::pencil::{check_hypothesis, default_degree_bound, HypothesisVerdict, DEFAULT_CONDUCTOR_BOUND};
use cyclodyn::ratmap::{iterate_term_counts, SparsityOptions};
use cyclodyn::search::{enumerate_starts, run_search, SearchConfig, StartSet, Target};
use cyclodyn::special::{chebyshev, detect_special, mobius_conjugate, Mobius, SpecialKind};
use cyclodyn::{CycNum, Poly, RatMap, Rational};

type Check = Result<String, String>;

fn bin(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclodyn")).args(args).output().expect("run cyclodyn");
    assert!(out.status.success(), "cyclodyn {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pole_convention() -> Check {
    let o = bin(&["orbit", "--map", "1/X", "--start", "0", "--depth", "3"]);
    ensure(o["result"]["verdict"] == serde_json::json!({ "PoleAtStep": 1 }), format!("orbit verdict {}", o["result"]["verdict"]))?;
    let it = bin(&["iterate", "--map", "1/X", "--n", "2"]);
    ensure(it["result"]["iterate"] == "X", format!("iterate gave {}", it["result"]["iterate"]))?;
    Ok("PoleAtStep(1) and h^(2) = X".into())
}

fn growth_suites() -> Check {
    let p = padic_suite(500, 8, 1);
    let a = archimedean_suite(200, 8, 2);
    for s in [&p, &a] {
        ensure(s.all_passed(), format!("{}: {}/{} ({:?})", s.name, s.passed, s.cases, s.failures.first()))?;
    }
    Ok(format!("{}/{} p-adic, {}/{} archimedean", p.passed, p.cases, a.passed, a.cases))
}

fn degenerate() -> Check {
    let sums = degenerate_suites(100, 3);
    for s in &sums {
        ensure(s.all_passed(), format!("{}: {}/{} ({:?})", s.name, s.passed, s.cases, s.failures.first()))?;
    }
    Ok(sums.iter().map(|s| format!("{} {}/{}", s.name, s.passed, s.cases)).collect::<Vec<_>>().join(", "))
}

fn backstop() -> Check {
    let one = Rational::from_integer(1.into());
    let prec = Precision { start_bits: 64, cap_bits: 256 };
    let maps = ["X^2 - 1", "X^2 + X - 1", "X^3 - X", "X^3 + X^2 - 1", "X^2 - 2", "(X^3 - 1)/(X + 2)", "(X^4 + X)/(X^2 - 3)"];
    let sets = [StartSet::RootsOfUnity { max_conductor: 24 }, StartSet::CycBox { max_conductor: 5, max_coeff_height: 1 }];
    let targets = [Target::RootOfUnity, Target::HouseAtMost { a: one.clone() }];
    let (mut hits, mut violations) = (0, 0);
    for m in maps {
        let h = parse_map(m).unwrap();
        ensure(h.d() > h.e() + 1, format!("{m} has d - e <= 1"))?;
        for set in &sets {
            for t in &targets {
                let mut cfg = SearchConfig::new(h.clone(), set.clone(), 4, t.clone());
                cfg.precision_bits = prec.start_bits;
                cfg.precision_cap_bits = prec.cap_bits;
                let report = run_search(&cfg).map_err(|e| format!("{m}: {e}"))?;
                for hit in &report.hits {
                    hits += 1;
                    let rec = h
                        .try_orbit(&hit.start, hit.k, None, |x| cyclodyn::cyclo::house_le(x, &one, prec.start_bits, prec.cap_bits))
                        .map_err(|e| e.to_string())?;
                    match house_backstop_check(&h, &rec, &one, prec) {
                        Ok(BackstopVerdict::Pass { .. }) => {}
                        Ok(BackstopVerdict::Fail { index }) => {
                            violations += 1;
                            eprintln!("  violation: {m} from {} at index {index}", hit.start);
                        }
                        Err(e) => return Err(format!("{m} from {}: {e}", hit.start)),
                    }
                }
            }
        }
    }
    ensure(hits > 0, "no hits to check")?;
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{hits} hit orbits, 0 violations"))
}

/// `K` satisfies `K > (B ln 5 + ln 2016) / ln m + 2` for `B = p/q`, decided in integers.
fn threshold_holds(k: u64, p: u64, q: u64, m: u64) -> bool {
    if k < 2 {
        return false;
    }
    let lhs = num_traits::pow(BigUint::from(m), ((k - 2) * q) as usize);
    let rhs = num_traits::pow(BigUint::from(5u32), p as usize) * num_traits::pow(BigUint::from(2016u32), q as usize);
    lhs > rhs
}

fn constants() -> Check {
    let m = min_M_threshold(&Rational::from_integer(10.into()), 2, 0).map_err(|e| e.to_string())?;
    ensure(m == 37, format!("min_M_threshold(10, 2, 0) = {m}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (p, q) = (rng.gen_range(0..=60u64), rng.gen_range(1..=6u64));
        let d = rng.gen_range(2..=7u64);
        let e = rng.gen_range(0..=d - 2);
        let b = Rational::new(BigInt::from(p), BigInt::from(q));
        let k = min_M_threshold(&b, d, e).map_err(|e| e.to_string())?;
        let top = d.max(e);
        ensure(threshold_holds(k, p, q, top) && !threshold_holds(k - 1, p, q, top), format!("B = {p}/{q}, d = {d}, e = {e}: M = {k}"))?;
    }
    Ok("M(10, 2, 0) = 37; 100 boundaries exact".into())
}

fn height_rational(rng: &mut ChaCha8Rng) -> CycNum {
    let n = rng.gen_range(-10i64..=10);
    let d = rng.gen_range(1i64..=10);
    CycNum::from_rational(&Rational::new(n.into(), d.into()))
}

fn random_mobius(rng: &mut ChaCha8Rng) -> Mobius {
    loop {
        let [a, b, c, d] = [0; 4].map(|_| height_rational(rng));
        if let Ok(l) = Mobius::new(a, b, c, d) {
            return l;
        }
    }
}

fn special_detector() -> Check {
    let mut cases = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for d in 2..=6u64 {
        for sign in [1i64, -1] {
            let eps = CycNum::from_int(sign);
            let power = RatMap::from_poly(Poly::monomial(d, eps.clone()));
            let cheb = RatMap::from_poly(chebyshev(d).scale(&eps));
            for (base, kind) in [(power, SpecialKind::PowerConjugate), (cheb, SpecialKind::ChebyshevConjugate)] {
                for _ in 0..50 {
                    cases.push((mobius_conjugate(&base, &random_mobius(&mut rng)), kind));
                }
            }
        }
    }
    for m in ["X^2 + 1", "X^2 + X", "(X^2 + 1)/X"] {
        cases.push((parse_map(m).unwrap(), SpecialKind::NotSpecial));
    }
    let wrong: Vec<String> = cases
        .par_iter()
        .filter_map(|(h, kind)| {
            let v = detect_special(h);
            let ok = v.kind == *kind && v.witness.as_ref().map_or(*kind == SpecialKind::NotSpecial, |w| w.verifies(h));
            (!ok).then(|| format!("{h}: {:?}", v.kind))
        })
        .collect();
    ensure(wrong.is_empty(), format!("{} misclassified, first {:?}", wrong.len(), wrong.first()))?;
    Ok(format!("{} maps, 0 misclassified, 0 unknown", cases.len()))
}

/// Dense integer expansion of the `n`-th iterate of a polynomial.
fn expand_iterate(coeffs: &[i64], n: u32) -> Vec<BigInt> {
    let f: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let mut it = vec![BigInt::from(0), BigInt::from(1)];
    for _ in 0..n {
        // Horner: f(it)
        let mut acc = vec![f[f.len() - 1].clone()];
        for c in f.iter().rev().skip(1) {
            let mut next = vec![BigInt::from(0); acc.len() + it.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in it.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            next[0] += c;
            acc = next;
        }
        it = acc;
    }
    it
}

fn sparsity() -> Check {
    let h = parse_map("X^2 + 1").unwrap();
    let rows = iterate_term_counts(&h, 4, &SparsityOptions::default()).map_err(|e| e.to_string())?;
    for (row, want) in rows.iter().zip([2usize, 3, 5, 9]) {
        let oracle = expand_iterate(&[1, 0, 1], row.n).iter().filter(|c| c.sign() != num_bigint::Sign::NoSign).count();
        ensure(oracle == want && row.numerator_terms == want && row.denominator_terms == 1, format!("n = {}: {} vs oracle {oracle}", row.n, row.numerator_terms))?;
    }
    for m in ["X^2 + 1", "(X^3 + 2)/1"] {
        let rows = iterate_term_counts(&parse_map(m).unwrap(), 12, &SparsityOptions::default()).map_err(|e| e.to_string())?;
        ensure(rows.len() == 12 && rows.iter().all(|r| r.bound_satisfied), format!("{m}: bound fails"))?;
    }
    Ok("(2,1), (3,1), (5,1), (9,1); bound holds to n = 12".into())
}

fn roots_of_unity() -> Check {
    for n in 1..=60u64 {
        for k in 0..n {
            let z = CycNum::zeta_pow(n, k as i64);
            let want = n / n.gcd(&k);
            ensure(z.root_of_unity_order() == Some(want), format!("zeta_{n}^{k}"))?;
        }
    }
    let one = CycNum::one();
    ensure(one.add(&CycNum::zeta(4)).root_of_unity_order().is_none(), "1 + zeta_4 accepted")?;
    ensure(one.add(&CycNum::zeta(3)).root_of_unity_order() == Some(6), "1 + zeta_3 not of order 6")?;
    Ok("1830 powers classified; 1 + zeta_4 rejected; 1 + zeta_3 has order 6".into())
}

fn pencil() -> Check {
    let r = check_hypothesis(&parse_map("X^2").unwrap(), DEFAULT_CONDUCTOR_BOUND, 4).map_err(|e| e.to_string())?;
    let HypothesisVerdict::HypothesisFails { m: 2, root } = &r.verdict else { return Err(format!("X^2: {:?}", r.verdict)) };
    let p = cyclodyn::pencil::build_pencil(&parse_map("X^2").unwrap(), 2).map_err(|e| e.to_string())?;
    ensure(root.expr == "Y" && p.substitute(&CycNum::one(), &root.num, &root.den).is_zero(), "root Y does not verify")?;
    let h = parse_map("X^3 + 2").unwrap();
    let r = check_hypothesis(&h, DEFAULT_CONDUCTOR_BOUND, default_degree_bound(&h)).map_err(|e| e.to_string())?;
    ensure(matches!(r.verdict, HypothesisVerdict::HypothesisHolds { .. }), format!("X^3 + 2: {:?}", r.verdict))?;
    let r = check_hypothesis(&parse_map("X^2/(X + 1)").unwrap(), 60, 4).map_err(|e| e.to_string())?;
    ensure(r.verdict == HypothesisVerdict::DegreeConditionFails, format!("X^2/(X + 1): {:?}", r.verdict))?;
    Ok("fails at m = 2 with Y; holds; degree condition fails".into())
}

fn search_reproducibility() -> Check {
    let h = parse_map("X^2 + 1").unwrap();
    let set = StartSet::RootsOfUnity { max_conductor: 4 };
    let report = run_search(&SearchConfig::new(h.clone(), set.clone(), 3, Target::RootOfUnity)).map_err(|e| e.to_string())?;
    let mut oracle = Vec::new();
    for a in enumerate_starts(&set).map_err(|e| e.to_string())? {
        let mut x = a.clone();
        for k in 1..=3 {
            let Ok(y) = h.eval(&x) else { break };
            x = y;
            if !x.is_zero() && x.pow_u(2 * x.conductor()).is_one() {
                oracle.push((a.clone(), k, x.clone()));
                break;
            }
        }
    }
    let got: Vec<_> = report.hits.iter().map(|t| (t.start.clone(), t.k, t.value.clone())).collect();
    ensure(got == oracle, format!("{} hits vs oracle {}", got.len(), oracle.len()))?;
    let dir = std::env::temp_dir().join(format!("cyclodyn-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut bytes = HashSet::new();
    for i in 0..2 {
        let path = dir.join(format!("run{i}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_cyclodyn"))
            .args(["search", "--map", "X^2 + 1", "--start-set", "roots:4", "--depth", "3", "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.success(), "search run failed")?;
        bytes.insert(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(bytes.len() == 1, "reports differ")?;
    Ok(format!("{} hits match the oracle; reports byte-identical", got.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("pole convention", Duration::from_secs(1), pole_convention),
        ("growth suites", Duration::from_secs(60), growth_suites),
        ("degenerate classes", Duration::from_secs(30), degenerate),
        ("house backstop", Duration::from_secs(120), backstop),
        ("threshold constants", Duration::from_secs(60), constants),
        ("special detector", Duration::from_secs(120), special_detector),
        ("sparsity", Duration::from_secs(60), sparsity),
        ("root-of-unity test", Duration::from_secs(5), roots_of_unity),
        ("pencil checker", Duration::from_secs(10), pencil),
        ("search reproducibility", Duration::from_secs(5), search_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let el = t.elapsed();
        let r = r.and_then(|msg| if el <= limit { Ok(msg) } else { Err(format!("{msg}; took longer than {limit:?}")) });
        match r {
            Ok(msg) => println!("criterion {:2} {name}: PASS ({:.2}s) {msg}", i + 1, el.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:2} {name}: FAIL ({:.2}s) {msg}", i + 1, el.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
