//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use planet_core::construct::{
    braid_net, hessian_net, pencil_net, singular_cubic_net, torus_net, TorusOptions, DEFAULT_TAU,
};
use planet_core::cubic::{
    abc_set, complete_set_check, dual_points_of, is_algebraic, weierstrass, Algebraicity, CubicTag, IndexSet,
    SingularCase, t_kl,
};
use planet_core::field::{ApproxComplex, CyclotomicField, Field};
use planet_core::geom::{dual_line, Line};
use planet_core::net::{class_profile, euler_feasible, verify_net, Net};
use planet_core::quasigroup::{group_identify, latin_from_net, normalize_to_loop, GroupId};
use planet_core::resonance::{
    essential_component, incidence_matrix, net_resonance, os_h1_dim, q_matrix, Arrangement,
};
use planet_core::selftest::{
    complete_set_suite, concurrency_suite, group_law_suite, harmonic_suite, weierstrass_collinearity_suite,
    weierstrass_identity_suite, SuiteReport,
};
use planet_core::Error;

const TORUS_CASES: [(usize, usize); 6] = [(1, 5), (1, 12), (2, 2), (2, 4), (3, 3), (2, 10)];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn invariants(m1: usize, m2: usize) -> Vec<usize> {
    if m1 == 1 {
        vec![m2]
    } else {
        vec![m1, m2]
    }
}

fn group_of<F: Field>(net: &Net<F>) -> Result<GroupId, String> {
    let ls = latin_from_net(net, None).map_err(|e| e.to_string())?;
    let lp = normalize_to_loop(&ls, 0, 0).map_err(|e| e.to_string())?;
    Ok(group_identify(&lp))
}

fn suite_ok(r: &SuiteReport) -> Result<(), String> {
    ensure(r.passed(), || format!("{}: {} of {} trials failed ({r:?})", r.name, r.failures, r.trials))
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for r in 0..=2i64 {
        for k in 3..=10i64 {
            for m in 2..=50i64 {
                let want = match r {
                    0 => k == 3 || (k == 4 && m >= 3) || (k == 5 && m >= 6),
                    1 => k == 3 || (k == 4 && m >= 4),
                    _ => k == 3,
                };
                let got = euler_feasible(k, m, r).map_err(|e| e.to_string())?.feasible;
                ensure(got == want, || format!("mismatch at k={k} m={m} r={r}: got {got}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (k, m, r) triples, zero mismatches"))
}

fn criterion_2() -> Outcome {
    for m in 2..=12 {
        let f = CyclotomicField::new(m as u64).map_err(|e| e.to_string())?;
        let r = verify_net(&pencil_net(&f, m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(r.ok && (r.k, r.m, r.points) == (3, m, m * m), || format!("pencil m={m}: {r:?}"))?;
    }
    let q = CyclotomicField::new(1).unwrap();
    let r = verify_net(&braid_net(&q).unwrap()).map_err(|e| e.to_string())?;
    ensure(r.ok && (r.k, r.m, r.points) == (3, 2, 4), || format!("braid: {r:?}"))?;
    let f3 = CyclotomicField::new(3).unwrap();
    let h = hessian_net(&f3).map_err(|e| e.to_string())?;
    let r = verify_net(&h).map_err(|e| e.to_string())?;
    ensure(r.ok && (r.k, r.m, r.points) == (4, 3, 9), || format!("hessian: {r:?}"))?;
    for (i, class) in h.classes().iter().enumerate() {
        let p = class_profile(&f3, class).map_err(|e| e.to_string())?;
        ensure(p.name() == "general-position", || format!("hessian class {i} is {}", p.name()))?;
    }
    Ok("pencil m = 2..12, braid and hessian verify; hessian classes in general position".into())
}

fn criterion_3() -> Outcome {
    for m in 2..=12 {
        let f = CyclotomicField::new(m as u64).unwrap();
        let g = group_of(&pencil_net(&f, m).map_err(|e| e.to_string())?)?;
        ensure(g == GroupId::AbelianGroup { invariant_factors: vec![m] }, || format!("pencil m={m}: {g}"))?;
    }
    let f = ApproxComplex::default();
    for (m1, m2) in TORUS_CASES {
        let inv = invariants(m1, m2);
        let net = torus_net(&f, &inv, &TorusOptions::default()).map_err(|e| e.to_string())?;
        let r = verify_net(&net).map_err(|e| e.to_string())?;
        ensure(r.ok, || format!("torus {inv:?} does not verify: {r:?}"))?;
        let g = group_of(&net)?;
        ensure(g == GroupId::AbelianGroup { invariant_factors: inv.clone() }, || format!("torus {inv:?}: {g}"))?;
    }
    Ok("pencil m <= 12 realize [m]; all six torus nets realize their invariant factors".into())
}

/// Verdict and largest dual-point residual on the witness cubic.
fn algebraize<F: Field>(net: &Net<F>) -> Result<(CubicTag, f64), String> {
    match is_algebraic(net).map_err(|e| e.to_string())? {
        Algebraicity::Yes { cubic, class } => {
            let f = net.field();
            let worst = net.lines().map(|l| cubic.residual(f, &dual_line(l))).fold(0.0, f64::max);
            Ok((class.tag, worst))
        }
        Algebraicity::No { diagnostic } => Err(diagnostic),
    }
}

fn criterion_4() -> Outcome {
    let f = ApproxComplex::default();
    let mut worst = 0.0f64;
    let mut check = |what: String, got: (CubicTag, f64), want: CubicTag| {
        worst = worst.max(got.1);
        ensure(got.0 == want && got.1 < 1e-7, || format!("{what}: class {} residual {:.1e}", got.0, got.1))
    };
    for m in 2..=12 {
        let net = pencil_net(&f, m).map_err(|e| e.to_string())?;
        check(format!("pencil m={m}"), algebraize(&net)?, CubicTag::Triangle)?;
        let q = CyclotomicField::new(m as u64).unwrap();
        let (tag, _) = algebraize(&pencil_net(&q, m).map_err(|e| e.to_string())?)?;
        ensure(tag == CubicTag::Triangle, || format!("exact pencil m={m}: {tag}"))?;
    }
    for (m1, m2) in TORUS_CASES {
        let net = torus_net(&f, &invariants(m1, m2), &TorusOptions::default()).map_err(|e| e.to_string())?;
        check(format!("torus ({m1}, {m2})"), algebraize(&net)?, CubicTag::Smooth)?;
    }
    for m in [3, 8] {
        let net = singular_cubic_net(&f, SingularCase::ConicLineTransverse, m, None).map_err(|e| e.to_string())?;
        check(format!("2a m={m}"), algebraize(&net)?, CubicTag::ConicLineTransverse)?;
        let q = CyclotomicField::new(if m == 3 { 12 } else { 8 }).unwrap();
        let net = singular_cubic_net(&q, SingularCase::ConicLineTransverse, m, None).map_err(|e| e.to_string())?;
        let (tag, _) = algebraize(&net)?;
        ensure(tag == CubicTag::ConicLineTransverse, || format!("exact 2a m={m}: {tag}"))?;
    }
    Ok(format!("all verdicts as expected; max regularity residual {worst:.1e}"))
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Outcome {
    let f = ApproxComplex::default();
    let q = CyclotomicField::new(4).unwrap();
    let (mut hold, mut sep) = (0.0f64, f64::MAX);
    for case in SingularCase::ALL {
        let r = group_law_suite(&f, case, 500, rng);
        ensure(r.trials == 500, || format!("{case}: only {} usable draws", r.trials))?;
        suite_ok(&r)?;
        hold = hold.max(r.max_residual);
        sep = sep.min(r.min_separation.unwrap_or(f64::MAX));
        let r = group_law_suite(&q, case, 500, rng);
        ensure(r.trials == 500, || format!("{case} exact: only {} usable draws", r.trials))?;
        suite_ok(&r)?;
    }
    Ok(format!("6 cases x 500 draws, both backends; max residual {hold:.1e}, min perturbed {sep:.1e}"))
}

fn index_set_points(net: &Net<ApproxComplex>, set: &IndexSet, m: i64) -> Vec<planet_core::Point<Complex64>> {
    dual_points_of(net, set, |_, a| a.rem_euclid(m) as usize)
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Outcome {
    let f = ApproxComplex::default();
    let r = complete_set_suite(&f, 100, rng);
    suite_ok(&r)?;
    let net = torus_net(&f, &[11], &TorusOptions::default()).map_err(|e| e.to_string())?;
    for (name, set) in [("T0", t_kl(0, 0)), ("T(2,5)", t_kl(2, 5)), ("{1,2,4}", abc_set(1, 2, 4)), ("{0,3,7}", abc_set(0, 3, 7))] {
        let pts = index_set_points(&net, &set, 11);
        let ok = complete_set_check(&f, &pts).map_err(|e| format!("{name}: {e}"))?;
        ensure(ok, || format!("{name} is not complete on the torus net"))?;
    }
    Ok("100 random complete sets pass, 100 random sets fail; T0, T(2,5), {a,b,c|...} pass".into())
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let f = ApproxComplex::default();
    let q = CyclotomicField::new(1).unwrap();
    let mut worst = 0.0f64;
    for r in [concurrency_suite(&f, 100, rng), harmonic_suite(&f, 100, rng)] {
        ensure(r.trials == 100, || format!("{}: only {} trials", r.name, r.trials))?;
        suite_ok(&r)?;
        worst = worst.max(r.max_residual);
    }
    for r in [concurrency_suite(&q, 100, rng), harmonic_suite(&q, 100, rng)] {
        ensure(r.trials == 100, || format!("{} exact: only {} trials", r.name, r.trials))?;
        suite_ok(&r)?;
    }
    Ok(format!("100 trials each, both backends; max residual {worst:.1e}"))
}

fn q_oracle(j: &[Vec<u8>], n: usize) -> Vec<Vec<i64>> {
    let mut q = vec![vec![0i64; n]; n];
    for a in 0..n {
        for b in 0..n {
            q[a][b] = j.iter().map(|row| i64::from(row[a] * row[b])).sum::<i64>() - 1;
        }
    }
    q
}

fn check_q<F: Field>(name: &str, net: &Net<F>) -> Result<(), String> {
    let r = net_resonance(net).map_err(|e| e.to_string())?;
    let n = net.line_count();
    ensure(r.q == q_oracle(&r.j, n), || format!("{name}: Q differs from the oracle"))?;
    ensure(r.supports_component(net.k() - 2), || format!("{name}: affine blocks {:?}", r.blocks))
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    let f = ApproxComplex::default();
    let braid = braid_net(&f).map_err(|e| e.to_string())?;
    let arr = Arrangement::from_net(&braid).map_err(|e| e.to_string())?;
    let v = essential_component(&braid).map_err(|e| e.to_string())?;
    ensure(v.dim() == 2, || format!("essential component has dim {}", v.dim()))?;
    let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    for _ in 0..20 {
        let a = v.combine(&f, &[c(), c()]);
        let h = os_h1_dim(&arr, &a).map_err(|e| e.to_string())?;
        ensure(h == 1, || format!("h1 = {h} on the essential component"))?;
    }
    for _ in 0..20 {
        let mut a: Vec<Complex64> = (0..6).map(|_| c()).collect();
        let s: Complex64 = a.iter().sum();
        a[5] -= s;
        let h = os_h1_dim(&arr, &a).map_err(|e| e.to_string())?;
        ensure(h == 0, || format!("h1 = {h} at a generic vector"))?;
    }
    let pencil: Vec<Line<Complex64>> = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 3, 0]]
        .iter()
        .map(|&l| Line::from_ints(&f, l).unwrap())
        .collect();
    let local = Arrangement::new(f, pencil.clone()).map_err(|e| e.to_string())?;
    for _ in 0..5 {
        let mut a: Vec<Complex64> = (0..4).map(|_| c()).collect();
        let s: Complex64 = a.iter().sum();
        a[3] -= s;
        let h = os_h1_dim(&local, &a).map_err(|e| e.to_string())?;
        ensure(h == 2, || format!("h1 = {h} on the local component"))?;
    }
    // the pencil with its base point
    let base = vec![planet_core::Point::from_ints(&f, [0, 0, 1]).unwrap()];
    let j = incidence_matrix(&f, &base, &pencil);
    ensure(q_matrix(&j, 4) == q_oracle(&j, 4), || "local pencil Q differs from the oracle".into())?;

    let q3 = CyclotomicField::new(3).unwrap();
    check_q("braid", &braid_net(&q3).unwrap())?;
    check_q("hessian", &hessian_net(&q3).unwrap())?;
    for m in 2..=6 {
        check_q(&format!("pencil {m}"), &pencil_net(&CyclotomicField::new(m as u64).unwrap(), m).unwrap())?;
    }
    check_q("torus (2,2)", &torus_net(&f, &[2, 2], &TorusOptions::default()).unwrap())?;
    Ok("essential dim 2, h1 = 1 on it, 0 off it, 2 on a local component; Q matches the oracle".into())
}

fn criterion_9(rng: &mut ChaCha8Rng) -> Outcome {
    let e = weierstrass(DEFAULT_TAU, 1e-14).map_err(|e| e.to_string())?;
    let id = weierstrass_identity_suite(&e, 100, 1e-10, rng).map_err(|e| e.to_string())?;
    suite_ok(&id)?;
    let col = weierstrass_collinearity_suite(&e, 100, rng).map_err(|e| e.to_string())?;
    ensure(col.trials == 100, || format!("only {} usable triples", col.trials))?;
    suite_ok(&col)?;
    Ok(format!(
        "identity residual {:.1e}; collinear residual {:.1e}, perturbed {:.1e}",
        id.max_residual,
        col.max_residual,
        col.min_separation.unwrap_or(0.0)
    ))
}

fn criterion_10() -> Outcome {
    // No constructor exists for Z_2^3: the only abelian constructor is the
    // torus one, and it refuses three invariant factors.
    let f = ApproxComplex::default();
    for inv in [vec![2, 2, 2], vec![2, 2, 4], vec![3, 3, 3, 3]] {
        let err = torus_net(&f, &inv, &TorusOptions::default()).unwrap_err();
        ensure(err == Error::TooManyInvariantFactors(inv.len()), || format!("{inv:?}: {err}"))?;
        ensure(err.to_string().contains("at most two invariant factors"), || format!("message: {err}"))?;
    }
    Ok("three or more invariant factors are refused with a dedicated error".into())
}

fn main() {
    let seed = 0x5EED;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>)> = vec![
        ("feasibility table", Box::new(|_| criterion_1())),
        ("canonical nets verify", Box::new(|_| criterion_2())),
        ("group realization", Box::new(|_| criterion_3())),
        ("algebraization", Box::new(|_| criterion_4())),
        ("singular cubic group laws", Box::new(criterion_5)),
        ("complete sets", Box::new(criterion_6)),
        ("concurrency and harmonic quadrangles", Box::new(criterion_7)),
        ("resonance", Box::new(criterion_8)),
        ("weierstrass layer", Box::new(criterion_9)),
        ("three invariant factors refused", Box::new(|_| criterion_10())),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let out = run(&mut rng);
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
