//! Seeded invariant suites, shared by the `selftest` subcommand and the
//! structural acceptance checks.

use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    ideal_closure, ideal_intersection, ideal_product, local_decomposition, quotient_algebra, Algebra,
    AlgebraElement, LocalFactor,
};
use crate::error::Result;
use crate::evalmod::IntSeriesSpec;
use crate::liealg::{bracket, grade_decompose, perfectness_witness, LieElement};
use crate::pbw::{colored_partition_count, height_hm, pbw_basis, Straightener};
use crate::scalar::{self, Scalar};
use crate::verma::{Functional, VermaModule, VermaVector};

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random generators for algebras and elements.
pub mod gen {
    use super::*;

    pub fn small_scalar(r: &mut Rand) -> Scalar {
        let p = r.gen_range(-4..=4);
        let q = *[1, 1, 1, 2, 3].choose(r).unwrap();
        scalar::frac(p, q)
    }

    /// `Q[x, y]/(x^2, xy, y^2)`, a local algebra without a monomial presentation.
    pub fn square_zero_plane() -> Arc<Algebra> {
        let z = scalar::zero;
        let o = scalar::one;
        let tensor = vec![
            vec![vec![o(), z(), z()], vec![z(), o(), z()], vec![z(), z(), o()]],
            vec![vec![z(), o(), z()], vec![z(), z(), z()], vec![z(), z(), z()]],
            vec![vec![z(), z(), o()], vec![z(), z(), z()], vec![z(), z(), z()]],
        ];
        Algebra::structure_constants(vec!["1".into(), "x".into(), "y".into()], vec![o(), z(), z()], tensor)
            .expect("valid table")
    }

    /// `Q[t]/(t^n)`.
    pub fn truncated(n: u32) -> Arc<Algebra> {
        Algebra::product_local(vec![LocalFactor { point: scalar::zero(), order: n }]).expect("valid")
    }

    /// Product of one or two local factors at distinct small integer points, total dimension <= 4.
    pub fn product_local(r: &mut Rand) -> Arc<Algebra> {
        let mut points: Vec<i64> = (-2..=2).collect();
        points.shuffle(r);
        let k = r.gen_range(1..=2);
        let mut left = 4u32;
        let mut factors = Vec::new();
        for &p in points.iter().take(k) {
            let order = r.gen_range(1..=left.min(2 + (k == 1) as u32));
            left -= order;
            factors.push(LocalFactor { point: scalar::int(p), order });
            if left == 0 {
                break;
            }
        }
        Algebra::product_local(factors).expect("valid")
    }

    pub fn any_finite(r: &mut Rand) -> Arc<Algebra> {
        match r.gen_range(0..4) {
            0 => Algebra::rationals(),
            1 => square_zero_plane(),
            2 => truncated(r.gen_range(1..=4)),
            _ => product_local(r),
        }
    }

    pub fn element(r: &mut Rand, alg: &Arc<Algebra>) -> AlgebraElement {
        let v: Vec<Scalar> = (0..alg.dim()).map(|_| small_scalar(r)).collect();
        AlgebraElement::from_dense(alg, &v)
    }

    /// A few `d_n⊗f` terms with `|n| <= max_mode`, plus a random central part.
    pub fn lie_element(r: &mut Rand, alg: &Arc<Algebra>, max_mode: i64) -> LieElement {
        let mut x = LieElement::c(element(r, alg));
        for _ in 0..r.gen_range(1..=3) {
            let n = r.gen_range(-max_mode..=max_mode);
            x = x.add(&LieElement::d(n, element(r, alg)).unwrap()).unwrap();
        }
        x
    }

    /// An element of `V_-` (modes in `-max_depth..=-1`, no central part).
    pub fn lowering(r: &mut Rand, alg: &Arc<Algebra>, max_depth: i64) -> LieElement {
        let mut x = LieElement::zero(alg);
        for _ in 0..r.gen_range(1..=2) {
            let n = -r.gen_range(1..=max_depth);
            x = x.add(&LieElement::d(n, element(r, alg)).unwrap()).unwrap();
        }
        x
    }

    pub fn functional(r: &mut Rand, alg: &Arc<Algebra>) -> Functional {
        let d0 = (0..alg.dim()).map(|_| small_scalar(r)).collect();
        let c = (0..alg.dim()).map(|_| small_scalar(r)).collect();
        Functional::new(alg, d0, c).unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Suite = fn(&mut Rand) -> Result<(usize, Vec<String>)>;

pub const SUITES: &[(&str, Suite)] = &[
    ("algebra_axioms", algebra_axioms),
    ("ideals", ideals),
    ("idempotents", idempotents),
    ("antisymmetry", antisymmetry),
    ("jacobi", jacobi),
    ("grading_and_center", grading_and_center),
    ("perfectness", perfectness),
    ("straightening", straightening),
    ("pbw_counts", pbw_counts),
    ("verma_weights", verma_weights),
    ("int_series", int_series),
    ("scalar_round_trip", scalar_round_trip),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs the named suites (all when `names` is empty). Each suite gets its own
/// generator seeded from `seed` and its position, so results do not depend
/// on which other suites run.
pub fn run(seed: u64, names: &[&str]) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    for (i, (name, suite)) in SUITES.iter().enumerate() {
        if !names.is_empty() && !names.contains(name) {
            continue;
        }
        let mut r = rng(seed.wrapping_add(i as u64 * 0x9e37_79b9));
        let (cases, failures) = suite(&mut r)?;
        out.push(SuiteResult { name, cases, failures });
    }
    Ok(out)
}

fn algebra_axioms(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let n = 100;
    for i in 0..n {
        let alg = gen::any_finite(r);
        let (x, y, z) = (gen::element(r, &alg), gen::element(r, &alg), gen::element(r, &alg));
        if x.multiply(&y)? != y.multiply(&x)? {
            fails.push(format!("case {i}: xy != yx over {}", alg.describe()));
        }
        if x.multiply(&y)?.multiply(&z)? != x.multiply(&y.multiply(&z)?)? {
            fails.push(format!("case {i}: (xy)z != x(yz) over {}", alg.describe()));
        }
        if AlgebraElement::unit(&alg).multiply(&x)? != x {
            fails.push(format!("case {i}: 1x != x over {}", alg.describe()));
        }
    }
    Ok((n, fails))
}

fn ideals(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let n = 40;
    for i in 0..n {
        let alg = gen::any_finite(r);
        let ideal = ideal_closure(&[gen::element(r, &alg).multiply(&gen::element(r, &alg))?])?;
        if !ideal.is_multiplication_stable()? {
            fails.push(format!("case {i}: closure not stable"));
        }
        let other = ideal_closure(&[gen::element(r, &alg)])?;
        if !ideal_product(&ideal, &other)?.is_subset_of(&ideal_intersection(&ideal, &other)?)? {
            fails.push(format!("case {i}: IJ not inside I ∩ J"));
        }
        if ideal.is_whole() {
            continue;
        }
        let q = quotient_algebra(&alg, &ideal)?;
        if q.algebra.dim() != alg.dim() - ideal.dim()? {
            fails.push(format!("case {i}: quotient dimension"));
        }
        for _ in 0..100 / n + 2 {
            let (f, g) = (gen::element(r, &alg), gen::element(r, &alg));
            let lhs = q.projection.apply(&f.multiply(&g)?)?;
            let rhs = q.projection.apply(&f)?.multiply(&q.projection.apply(&g)?)?;
            let sum = q.projection.apply(&f.add(&g)?)?;
            if lhs != rhs || sum != q.projection.apply(&f)?.add(&q.projection.apply(&g)?)? {
                fails.push(format!("case {i}: projection is not a homomorphism"));
            }
        }
    }
    Ok((n, fails))
}

fn idempotents(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let n = 30;
    for i in 0..n {
        let alg = gen::product_local(r);
        let comps = local_decomposition(&alg)?;
        let mut sum = AlgebraElement::zero(&alg);
        for (a, ca) in comps.iter().enumerate() {
            sum = sum.add(&ca.idempotent)?;
            for (b, cb) in comps.iter().enumerate() {
                let p = ca.idempotent.multiply(&cb.idempotent)?;
                let expect = if a == b { ca.idempotent.clone() } else { AlgebraElement::zero(&alg) };
                if p != expect {
                    fails.push(format!("case {i}: e{a}·e{b} over {}", alg.describe()));
                }
            }
        }
        if sum != AlgebraElement::unit(&alg) {
            fails.push(format!("case {i}: idempotents do not sum to 1"));
        }
    }
    Ok((n, fails))
}

fn antisymmetry(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let n = 200;
    for i in 0..n {
        let alg = gen::any_finite(r);
        let (x, y) = (gen::lie_element(r, &alg, 4), gen::lie_element(r, &alg, 4));
        if bracket(&x, &y)? != bracket(&y, &x)?.neg() {
            fails.push(format!("case {i}: [{x}, {y}]"));
        }
    }
    Ok((n, fails))
}

fn jacobi(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let n = 200;
    for i in 0..n {
        let alg = gen::any_finite(r);
        let x = gen::lie_element(r, &alg, 3);
        let y = gen::lie_element(r, &alg, 3);
        let z = gen::lie_element(r, &alg, 3);
        let s = bracket(&x, &bracket(&y, &z)?)?
            .add(&bracket(&y, &bracket(&z, &x)?)?)?
            .add(&bracket(&z, &bracket(&x, &y)?)?)?;
        if !s.is_zero() {
            fails.push(format!("case {i}: Jacobi sum {s}"));
        }
    }
    Ok((n, fails))
}

fn grading_and_center(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let alg = gen::product_local(r);
    let mut cases = 0;
    for i in -6..=6i64 {
        for j in -6..=6i64 {
            cases += 1;
            let x = LieElement::d(i, gen::element(r, &alg))?;
            let y = LieElement::d(j, gen::element(r, &alg))?;
            let b = bracket(&x, &y)?;
            for comp in grade_decompose(&b) {
                let has_c = !comp.element.c_part().is_zero();
                if comp.mode != i + j || (has_c && i != -j) {
                    fails.push(format!("[V_{i}, V_{j}] has a component in mode {}", comp.mode));
                }
            }
            let c = LieElement::c(gen::element(r, &alg));
            if !bracket(&c, &x)?.is_zero() {
                fails.push(format!("c⊗A does not commute with mode {i}"));
            }
        }
    }
    Ok((cases, fails))
}

fn perfectness(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let alg = gen::any_finite(r);
    let mut cases = 0;
    for n in -4..=4 {
        cases += 1;
        let f = gen::element(r, &alg);
        let (u, v) = perfectness_witness(n, &f)?;
        if bracket(&u, &v)? != LieElement::d(n, f)? {
            fails.push(format!("mode {n}: witness bracket differs"));
        }
    }
    Ok((cases, fails))
}

fn straightening(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let n = 100;
    for i in 0..n {
        let alg = gen::any_finite(r);
        let st = Straightener::new(&alg);
        let (x, y) = (gen::lowering(r, &alg, 3), gen::lowering(r, &alg, 3));
        let xy = st.straighten(&[x.clone(), y.clone()])?;
        let yx = st.straighten(&[y.clone(), x.clone()])?;
        let br = st.straighten(&[bracket(&x, &y)?])?;
        if xy != yx.add(&br) {
            fails.push(format!("case {i}: xy != yx + [x, y] for x = {x}, y = {y}"));
        }
        // single-generator words: weight preserved and height equal to length
        let len = r.gen_range(1..=4);
        let mut word = Vec::new();
        let mut depth = 0u32;
        for _ in 0..len {
            let m = r.gen_range(1..=3);
            depth += m as u32;
            let b = r.gen_range(0..alg.dim());
            word.push(LieElement::d(-m, AlgebraElement::basis(&alg, b))?);
        }
        let s = st.straighten(&word)?;
        if s.depths().iter().any(|&d| d != depth) {
            fails.push(format!("case {i}: weight not preserved"));
        }
        let (h, _) = height_hm(&s);
        if !s.is_zero() && h != len as i64 {
            fails.push(format!("case {i}: height {h} for a word of length {len}"));
        }
        let (h, _) = height_hm(&xy);
        if h > 2 {
            fails.push(format!("case {i}: height {h} exceeds word length 2"));
        }
    }
    Ok((n, fails))
}

fn pbw_counts(_: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let mut cases = 0;
    for d in 1..=3usize {
        let colors: Vec<usize> = (0..d).collect();
        for n in 0..=10u32 {
            cases += 1;
            let got = pbw_basis(n, &colors).len() as u64;
            if got != colored_partition_count(n, d) {
                fails.push(format!("dim {d}, depth {n}: {got}"));
            }
        }
    }
    Ok((cases, fails))
}

fn verma_weights(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let n = 20;
    for i in 0..n {
        let alg = gen::any_finite(r);
        let phi = gen::functional(r, &alg);
        let m = VermaModule::new(&phi);
        let colors: Vec<usize> = (0..alg.dim()).collect();
        let depth = r.gen_range(1..=3u32);
        let basis = pbw_basis(depth, &colors);
        let w = basis.choose(r).unwrap().clone();
        let v = VermaVector::new(crate::pbw::EnvElement::monomial(w, scalar::one()))?;
        let j = r.gen_range(-2..=3i64);
        let x = LieElement::d(j, gen::element(r, &alg))?;
        for out in m.verma_act(&x, &v)? {
            if out.depth as i64 != depth as i64 - j {
                fails.push(format!("case {i}: mode {j} sends depth {depth} to {}", out.depth));
            }
        }
        for s in m.singular_vectors(depth.min(2), &colors)? {
            if !m.in_maximal_submodule(&s, &colors)? {
                fails.push(format!("case {i}: singular vector outside the maximal submodule"));
            }
        }
    }
    Ok((n, fails))
}

fn int_series(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let mut cases = 0;
    for _ in 0..5 {
        let spec = IntSeriesSpec::new(gen::small_scalar(r), gen::small_scalar(r), (-22, 22))?;
        for m in -6..=6 {
            for n in -6..=6 {
                for k in -10..=10 {
                    cases += 1;
                    match spec.lie_defect(m, n, k) {
                        Some(d) if d.is_zero() => {}
                        other => fails.push(format!("a={}, b={}, m={m}, n={n}, k={k}: {other:?}", spec.a, spec.b)),
                    }
                }
            }
        }
    }
    Ok((cases, fails))
}

fn scalar_round_trip(r: &mut Rand) -> Result<(usize, Vec<String>)> {
    let mut fails = Vec::new();
    let n = 200;
    for _ in 0..n {
        let x = scalar::frac(r.gen_range(-10_000..=10_000), r.gen_range(1..=999));
        let back = scalar::parse(&scalar::format(&x))?;
        if back != x {
            fails.push(format!("{x} parsed back as {back}"));
        }
    }
    Ok((n, fails))
}
