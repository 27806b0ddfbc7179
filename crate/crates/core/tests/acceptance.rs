//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary
//! (`harness = false`) so the lines are always printed.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;

use mapvir::algebra::{local_decomposition, Algebra, AlgebraElement, LocalFactor};
use mapvir::evalmod::{int_series_act, weight_multiplicities, IntSeriesSpec, ModuleHandle, Multiplicity};
use mapvir::liealg::LieElement;
use mapvir::pbw::{pbw_basis, EnvElement, Letter, PbwMonomial};
use mapvir::poly::Poly;
use mapvir::scalar::{self, frac, int, Scalar};
use mapvir::selftest::{self, gen};
use mapvir::verma::{check_quasifinite, largest_d0_ideal, split_phi, verma_dims, Functional, QuasifiniteStatus, VermaModule};

use common::{convolve, dense_rank, partition_series, VirOracle};

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: mapvir::Error) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let q1 = verma_dims(10, &[0]);
    let q2 = verma_dims(5, &[0, 1]);
    let o1: Vec<usize> = partition_series(10, 1).into_iter().map(|x| x as usize).collect();
    let o2: Vec<usize> = partition_series(5, 2).into_iter().map(|x| x as usize).collect();
    ensure(q1 == o1 && q1 == vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42], || format!("dim 1: {q1:?} vs {o1:?}"))?;
    ensure(q2 == o2 && q2 == vec![1, 2, 5, 10, 20, 36], || format!("dim 2: {q2:?} vs {o2:?}"))?;
    // M(φ) itself, through a real functional
    let phi = Functional::new(&Algebra::rationals(), vec![frac(-2, 3)], vec![int(5)]).map_err(err)?;
    let m = VermaModule::new(&phi);
    for n in 0..=6u32 {
        let basis = pbw_basis(n, &[0]);
        ensure(basis.len() == o1[n as usize], || format!("pbw basis at depth {n}"))?;
        for w in &basis {
            let v = m.straightener().multiply(&EnvElement::one(), &EnvElement::monomial(w.clone(), scalar::one())).map_err(err)?;
            ensure(v.depths() == vec![n], || format!("monomial {w:?} changed depth"))?;
        }
    }
    Ok(())
}

fn random_small_algebra(r: &mut selftest::Rand) -> Arc<Algebra> {
    if r.gen_bool(0.5) {
        gen::truncated(r.gen_range(1..=4))
    } else {
        let a = r.gen_range(-2..=1);
        let b = a + r.gen_range(1..=2);
        let o1 = r.gen_range(1..=2);
        let o2 = r.gen_range(1..=2);
        Algebra::product_local(vec![
            LocalFactor { point: int(a), order: o1 },
            LocalFactor { point: int(b), order: o2 },
        ])
        .unwrap()
    }
}

/// Random functional, often degenerate so that `J_0 ≠ 0`.
fn random_functional(r: &mut selftest::Rand, alg: &Arc<Algebra>) -> Functional {
    let mut phi = gen::functional(r, alg);
    match r.gen_range(0..3) {
        0 => {}
        1 => {
            let comps = local_decomposition(alg).unwrap();
            let e = &comps[r.gen_range(0..comps.len())].idempotent;
            phi = phi.twist(e).unwrap();
        }
        _ => {
            // φ(d_0⊗t^j) = 0 for the top exponents
            let keep = r.gen_range(0..alg.dim());
            let d0: Vec<Scalar> = phi.d0_values().iter().enumerate().map(|(i, x)| if i <= keep { x.clone() } else { Scalar::zero() }).collect();
            phi = Functional::new(alg, d0, phi.c_values().to_vec()).unwrap();
        }
    }
    phi
}

fn criterion_2() -> Outcome {
    let mut r = selftest::rng(2);
    let mut nontrivial = 0;
    for case in 0..50 {
        let alg = random_small_algebra(&mut r);
        let phi = random_functional(&mut r, &alg);
        let n = alg.dim();
        // J_0 = ker(f ↦ (φ(d_0⊗f e_j))_j), dimension by dense elimination
        let mut rows = Vec::new();
        for j in 0..n {
            let ej = AlgebraElement::basis(&alg, j);
            rows.push((0..n).map(|i| phi.d0_value(&AlgebraElement::basis(&alg, i).multiply(&ej).unwrap()).unwrap()).collect::<Vec<_>>());
        }
        let j0_dim = n - dense_rank(&rows);
        let colors: Vec<usize> = (0..n).collect();
        let m = VermaModule::new(&phi);
        let sing = m.singular_vectors(1, &colors).map_err(err)?;
        ensure(sing.len() == j0_dim, || format!("case {case}: {} singular vectors, dim J0 = {j0_dim}", sing.len()))?;
        ensure(largest_d0_ideal(&phi).map_err(err)?.dim().map_err(err)? == j0_dim, || format!("case {case}: library J0"))?;
        if j0_dim > 0 {
            nontrivial += 1;
        }
        for v in &sing {
            let mut coords = vec![Scalar::zero(); n];
            for (mono, c) in v.terms() {
                let [l] = mono.factors() else {
                    return Err(format!("case {case}: singular vector not of the form (d_-1⊗f)v"));
                };
                ensure(l.depth == 1, || format!("case {case}: letter depth {}", l.depth))?;
                coords[l.color] = c.clone();
            }
            let f = AlgebraElement::from_dense(&alg, &coords);
            for j in 0..n {
                let fe = f.multiply(&AlgebraElement::basis(&alg, j)).unwrap();
                ensure(phi.d0_value(&fe).unwrap().is_zero(), || format!("case {case}: f = {f} not in J0"))?;
            }
        }
    }
    ensure(nontrivial >= 10, || format!("only {nontrivial} cases with J0 ≠ 0"))
}

fn criterion_3() -> Outcome {
    let q = Algebra::rationals();
    let letter = |d: u32| Letter { depth: d, color: 0 };
    // (i) φ(d_0) = 0: d_{-1} v is singular
    let phi = Functional::new(&q, vec![int(0)], vec![frac(3, 2)]).map_err(err)?;
    let s = VermaModule::new(&phi).singular_vectors(1, &[0]).map_err(err)?;
    ensure(s.len() == 1 && s[0].terms().len() == 1, || format!("(i): {s:?}"))?;
    // (ii) (c, h) = (1, -1/4): (d_{-2} + d_{-1}^2) v
    let phi = Functional::new(&q, vec![frac(-1, 4)], vec![int(1)]).map_err(err)?;
    let s = VermaModule::new(&phi).singular_vectors(2, &[0]).map_err(err)?;
    ensure(s.len() == 1, || format!("(ii): {} singular vectors", s.len()))?;
    let a = s[0].coeff(&PbwMonomial::from_letters(vec![letter(2)]));
    let b = s[0].coeff(&PbwMonomial::from_letters(vec![letter(1), letter(1)]));
    ensure(!a.is_zero() && a == b, || format!("(ii): coefficients {a}, {b}"))?;
    // (iii) 5 x 5 grid against the dense oracle
    let cs = [int(0), int(1), frac(1, 2), int(-2), int(25)];
    let hs = [int(0), frac(-1, 4), frac(-1, 16), frac(-1, 2), int(1)];
    let mut reducible = 0;
    for c in &cs {
        for h in &hs {
            let phi = Functional::new(&q, vec![h.clone()], vec![c.clone()]).map_err(err)?;
            let dims = VermaModule::new(&phi).quotient_dims(4, &[0]).map_err(err)?;
            let oracle = VirOracle { c: c.clone(), h: h.clone() };
            for n in 1..=4u32 {
                let lib = verma_dims(4, &[0])[n as usize] - dims[n as usize];
                let ora = oracle.kernel_dim(n);
                ensure(lib == ora, || format!("(iii) c={c}, h={h}, depth {n}: library {lib}, oracle {ora}"))?;
                if n == 4 && lib > 0 {
                    reducible += 1;
                }
            }
        }
    }
    ensure(reducible >= 3, || format!("(iii): grid hit only {reducible} reducible points"))
}

fn criterion_4() -> Outcome {
    let alg = Algebra::polynomial(16).map_err(err)?;
    let pow2 = |k: u32| Scalar::from_integer(num_bigint::BigInt::from(2).pow(k));
    let lambda: Vec<Scalar> = (0..=16).map(|k| int(3) * pow2(k)).collect();
    let kappa: Vec<Scalar> = (0..=16).map(|k| frac(1, 2) * pow2(k)).collect();
    let t2 = Poly::parse("t-2").map_err(err)?;
    let phi = Functional::new(&alg, lambda, kappa).map_err(err)?.with_exact_ideal(t2.clone()).map_err(err)?;
    let v = check_quasifinite(&phi, 16, false);
    ensure(v.status == QuasifiniteStatus::Certified, || format!("status {:?}", v.status))?;
    ensure(v.candidate.as_ref() == Some(&t2), || format!("recurrence {:?}", v.candidate.as_ref().map(|p| p.to_string())))?;
    let w = v.witness.as_ref().and_then(|w| w.generator());
    ensure(w.as_ref() == Some(&t2), || "witness is not (t - 2)".into())?;

    let m = VermaModule::new(&phi);
    let f = AlgebraElement::from_poly(&alg, &t2).map_err(err)?;
    let low: Vec<usize> = (0..=1).map(|e| alg.index_of_exponent(e).unwrap()).collect();
    let raise: Vec<usize> = (0..=3).map(|e| alg.index_of_exponent(e).unwrap()).collect();
    let mut checked = 0;
    for depth in 0..=3u32 {
        for mono in pbw_basis(depth, &low) {
            let wv = EnvElement::monomial(mono.clone(), scalar::one());
            for j in (depth as i64 - 3)..=(depth as i64) {
                let x = LieElement::d(j, f.clone()).map_err(err)?;
                let out = m.act(&x, &wv).map_err(err)?;
                for part in out.homogeneous_parts().into_values() {
                    checked += 1;
                    ensure(m.in_maximal_submodule(&part, &raise).map_err(err)?, || {
                        format!("(d[{j}]⊗(t-2))·{} is not in N(φ)", mono.display(&alg))
                    })?;
                }
            }
        }
    }
    ensure(checked > 50, || format!("only {checked} vectors checked"))
}

fn criterion_5() -> Outcome {
    let alg = Algebra::product_local(vec![
        LocalFactor { point: int(0), order: 1 },
        LocalFactor { point: int(1), order: 1 },
    ])
    .map_err(err)?;
    let mut r = selftest::rng(5);
    let phi = gen::functional(&mut r, &alg);
    let colors = [0, 1];
    let whole = VermaModule::new(&phi).quotient_dims(5, &colors).map_err(err)?;
    let parts = split_phi(&phi).map_err(err)?;
    ensure(parts.len() == 2, || "expected two components".into())?;
    let mut factor_dims = Vec::new();
    for (comp, part) in &parts {
        let d = VermaModule::new(part).quotient_dims(5, &colors).map_err(err)?;
        // the same component as a functional on A/m = Q
        let e = comp.idempotent.clone();
        let q = Algebra::rationals();
        let local = Functional::new(&q, vec![part.d0_value(&e).map_err(err)?], vec![part.c_value(&e).map_err(err)?]).map_err(err)?;
        let dq = VermaModule::new(&local).quotient_dims(5, &[0]).map_err(err)?;
        ensure(d == dq, || format!("component at {}: {d:?} over A vs {dq:?} over Q", comp.point))?;
        factor_dims.push(d);
    }
    let conv = convolve(&factor_dims[0], &factor_dims[1]);
    ensure(whole == conv, || format!("quotient dims {whole:?}, convolution {conv:?}"))
}

fn criterion_6() -> Outcome {
    let mut r = selftest::rng(6);
    let alg = Algebra::polynomial(2).map_err(err)?;
    for _ in 0..5 {
        let (a, b) = (gen::small_scalar(&mut r), gen::small_scalar(&mut r));
        let spec = IntSeriesSpec::new(a.clone(), b.clone(), (-22, 22)).map_err(err)?;
        for m in -6..=6i64 {
            for n in -6..=6i64 {
                for k in -10..=10i64 {
                    let (c1, k1) = int_series_act(&spec, n, k).map_err(err)?;
                    let (c2, k2) = int_series_act(&spec, m, k1).map_err(err)?;
                    let (c3, k3) = int_series_act(&spec, m, k).map_err(err)?;
                    let (c4, k4) = int_series_act(&spec, n, k3).map_err(err)?;
                    let (c5, k5) = int_series_act(&spec, m + n, k).map_err(err)?;
                    ensure(k2 == k4 && k4 == k5, || "exponent bookkeeping".into())?;
                    let lhs = c1 * c2 - c3 * c4;
                    let rhs = int(n - m) * c5;
                    ensure(lhs == rhs, || format!("a={a}, b={b}, m={m}, n={n}, k={k}"))?;
                }
            }
        }
        let h = ModuleHandle::int_series_eval(&alg, spec, int(1)).map_err(err)?;
        let t = weight_multiplicities(&h, (-22, 22)).map_err(err)?;
        ensure(t.entries.values().all(|m| *m == Multiplicity::Exact(1)), || "multiplicity table".into())?;
    }
    // reducibility locus against a brute-force search over modes |n| <= 6
    let window = (-8, 8);
    let avals = [int(0), int(1), frac(1, 2), int(2), int(-1)];
    let bvals = [int(0), int(3), int(-5), frac(1, 3), frac(-7, 2), int(20)];
    for a in &avals {
        for b in &bvals {
            let spec = IntSeriesSpec::new(a.clone(), b.clone(), window).map_err(err)?;
            let coeff = |n: i64, k: i64| int(k) + a * int(n + 1) + b;
            let killed = (window.0..=window.1).any(|k| (-6..=6).all(|n| coeff(n, k).is_zero()));
            let outside_image = (window.0..=window.1).any(|k| (-6..=6).all(|n| coeff(n, k - n).is_zero()));
            let expected = (a.is_zero() || *a == int(1)) && b.is_integer() && {
                let k = if a.is_zero() { -b.clone() } else { -b.clone() - int(1) };
                k >= int(window.0) && k <= int(window.1)
            };
            ensure(spec.trivial_submodule_exponent().is_some() == killed, || format!("submodule a={a}, b={b}"))?;
            ensure(spec.trivial_quotient_exponent().is_some() == outside_image, || format!("quotient a={a}, b={b}"))?;
            ensure(spec.is_reducible() == expected, || format!("locus a={a}, b={b}"))?;
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let alg = Algebra::polynomial(4).map_err(err)?;
    let mut prev = 0;
    for w in [5i64, 10, 20] {
        let s1 = IntSeriesSpec::new(frac(1, 2), frac(1, 3), (-w, w)).map_err(err)?;
        let s2 = IntSeriesSpec::new(frac(2, 5), frac(-1, 7), (-w, w)).map_err(err)?;
        let h = ModuleHandle::tensor(vec![
            ModuleHandle::int_series_eval(&alg, s1, int(0)).map_err(err)?,
            ModuleHandle::int_series_eval(&alg, s2, int(3)).map_err(err)?,
        ])
        .map_err(err)?;
        let t = weight_multiplicities(&h, (0, 0)).map_err(err)?;
        let got = t.get(0).map(|m| m.value()).unwrap_or(0);
        // pairs (k1, k2) in the window with k1 + k2 = 0
        let oracle = (-w..=w).filter(|k| (-w..=w).contains(&-k)).count() as u64;
        ensure(got == oracle, || format!("W={w}: {got} vs {oracle}"))?;
        ensure(got >= w as u64 && got >= prev, || format!("W={w}: {got}"))?;
        prev = got;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let need = [("antisymmetry", 200), ("jacobi", 200), ("straightening", 100), ("algebra_axioms", 100), ("idempotents", 30)];
    let names: Vec<&str> = need.iter().map(|(n, _)| *n).collect();
    let results = selftest::run(8, &names).map_err(err)?;
    for (name, cases) in need {
        let r = results.iter().find(|r| r.name == name).ok_or(format!("suite {name} missing"))?;
        ensure(r.cases >= cases, || format!("{name}: only {} cases", r.cases))?;
        ensure(r.passed(), || format!("{name}: {}", r.failures.join("; ")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("Verma dimensions", criterion_1, 10),
        ("depth-1 singular equivalence", criterion_2, 30),
        ("classical cross-checks", criterion_3, 60),
        ("quasifiniteness and annihilation", criterion_4, 30),
        ("CRT character factorization", criterion_5, 60),
        ("intermediate-series soundness", criterion_6, 10),
        ("tensor unboundedness mechanism", criterion_7, 10),
        ("structural suites", criterion_8, 30),
    ];
    // `cargo test` passes harness flags such as --nocapture; a bare name filters
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.ends_with(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(*limit), || format!("took {:.1} s, limit {limit} s", elapsed.as_secs_f64()))
        });
        match outcome {
            Ok(()) => println!("{id} ({name}): PASS in {:.2} s", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("{id} ({name}): FAIL in {:.2} s: {msg}", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
