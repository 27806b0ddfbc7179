//! Verma modules `M(φ)`, singular vectors, irreducible-quotient dimensions
//! and the quasifiniteness and reducibility checks.
//!
//! A vector of `M(φ)` is an [`EnvElement`] `X` standing for `X·ṽ`. Raising
//! operators are pushed through the PBW word by commutation until they reach
//! `ṽ`, where `V_0` acts through `φ` and `V_+` acts by zero.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::algebra::{
    local_decomposition, same_algebra, Algebra, AlgebraElement, Ideal, LocalComponent, Projection,
};
use crate::error::{Error, Result};
use crate::liealg::{central_coefficient, check_mode, LieElement};
use crate::linalg::{self, Row};
use crate::pbw::{pbw_basis, EnvElement, Letter, PbwMonomial, Straightener};
use crate::poly::Poly;
use crate::recurrence;
use crate::scalar::{self, Scalar};

/// A linear functional `φ` on `V_0 = (d_0⊗A) ⊕ (c⊗A)`, stored by its values
/// on the algebra basis. For windowed algebras these are the sampled
/// sequences `λ_k = φ(d_0⊗t^k)`, `κ_k = φ(c⊗t^k)` over the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional {
    alg: Arc<Algebra>,
    d0: Vec<Scalar>,
    c: Vec<Scalar>,
    exact_ideal: Option<Poly>,
}

impl Functional {
    pub fn new(alg: &Arc<Algebra>, d0: Vec<Scalar>, c: Vec<Scalar>) -> Result<Self> {
        let n = alg.dim();
        if d0.len() != n || c.len() != n {
            return Err(Error::InvalidFunctional(format!(
                "expected {n} values for d0 and c, got {} and {}",
                d0.len(),
                c.len()
            )));
        }
        Ok(Functional { alg: alg.clone(), d0, c, exact_ideal: None })
    }

    /// Declares that `φ` vanishes on `V_0 ⊗ (p)`; checked on the window.
    pub fn with_exact_ideal(mut self, p: Poly) -> Result<Self> {
        if !self.alg.has_monomial_basis() {
            return Err(Error::InvalidFunctional(
                "exact_ideal needs an algebra with generator t".into(),
            ));
        }
        if p.is_zero() {
            return Err(Error::InvalidFunctional("exact_ideal must be nonzero".into()));
        }
        let p = p.monic();
        for f in self.ideal_window_elements(&p)? {
            if !self.d0_value(&f)?.is_zero() || !self.c_value(&f)?.is_zero() {
                return Err(Error::InvalidFunctional(format!(
                    "values do not vanish on ({p}) at {f}"
                )));
            }
        }
        self.exact_ideal = Some(p);
        Ok(self)
    }

    /// `t^k·p` for every shift that fits the algebra (all of `(p)` when
    /// the algebra is finite).
    fn ideal_window_elements(&self, p: &Poly) -> Result<Vec<AlgebraElement>> {
        let alg = &self.alg;
        if alg.is_finite() {
            return crate::algebra::ideal_closure(&[AlgebraElement::from_poly(alg, p)?])?
                .basis_elements();
        }
        let (lo, hi) = alg.window().unwrap();
        let deg = p.degree().unwrap() as i64;
        let mut out = Vec::new();
        for k in lo..=hi - deg {
            let mut coords = Vec::new();
            for (i, c) in p.coeffs().iter().enumerate() {
                coords.push((alg.index_of_exponent(k + i as i64)?, c.clone()));
            }
            out.push(AlgebraElement::from_sparse(alg, coords));
        }
        Ok(out)
    }

    pub fn zero(alg: &Arc<Algebra>) -> Self {
        let n = alg.dim();
        Functional { alg: alg.clone(), d0: vec![Scalar::zero(); n], c: vec![Scalar::zero(); n], exact_ideal: None }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn d0_values(&self) -> &[Scalar] {
        &self.d0
    }

    pub fn c_values(&self) -> &[Scalar] {
        &self.c
    }

    pub fn exact_ideal(&self) -> Option<&Poly> {
        self.exact_ideal.as_ref()
    }

    fn eval(&self, vals: &[Scalar], f: &AlgebraElement) -> Result<Scalar> {
        if !same_algebra(&self.alg, f.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(f.coords().iter().map(|(k, v)| v * &vals[*k]).sum())
    }

    /// `φ(d_0⊗f)`.
    pub fn d0_value(&self, f: &AlgebraElement) -> Result<Scalar> {
        self.eval(&self.d0, f)
    }

    /// `φ(c⊗f)`.
    pub fn c_value(&self, f: &AlgebraElement) -> Result<Scalar> {
        self.eval(&self.c, f)
    }

    /// Highest weight `φ(d_0⊗1)`.
    pub fn highest_weight(&self) -> Scalar {
        self.d0_value(&AlgebraElement::unit(&self.alg)).expect("same algebra")
    }

    /// `φ ∘ ω` for the involution `d_n ↦ -d_{-n}`, `c ↦ -c`; exchanges
    /// highest- and lowest-weight data.
    pub fn involution(&self) -> Self {
        Functional {
            alg: self.alg.clone(),
            d0: self.d0.iter().map(|x| -x).collect(),
            c: self.c.iter().map(|x| -x).collect(),
            exact_ideal: self.exact_ideal.clone(),
        }
    }

    /// `x ↦ φ(g·x)`.
    pub fn twist(&self, g: &AlgebraElement) -> Result<Self> {
        let n = self.alg.dim();
        let mut d0 = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n);
        for b in 0..n {
            let gb = g.multiply(&AlgebraElement::basis(&self.alg, b))?;
            d0.push(self.d0_value(&gb)?);
            c.push(self.c_value(&gb)?);
        }
        Ok(Functional { alg: self.alg.clone(), d0, c, exact_ideal: None })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if !same_algebra(&self.alg, &o.alg) {
            return Err(Error::AlgebraMismatch);
        }
        let sum = |a: &[Scalar], b: &[Scalar]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(Functional { alg: self.alg.clone(), d0: sum(&self.d0, &o.d0), c: sum(&self.c, &o.c), exact_ideal: None })
    }

    /// The functional induced on `A/I` through `proj`; the caller guarantees
    /// that `φ` vanishes on `V_0⊗I`.
    pub fn descend(&self, proj: &Projection) -> Result<Self> {
        let target = proj.target();
        let mut d0 = Vec::new();
        let mut c = Vec::new();
        for j in 0..target.dim() {
            let f = proj.lift(j)?;
            d0.push(self.d0_value(&f)?);
            c.push(self.c_value(&f)?);
        }
        Functional::new(target, d0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.d0.iter().chain(&self.c).all(Zero::is_zero)
    }
}

/// A homogeneous vector `X·ṽ` of `M(φ)` at depth `n` (weight `φ(d_0) - n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaVector {
    pub depth: u32,
    pub env: EnvElement,
}

impl VermaVector {
    pub fn new(env: EnvElement) -> Result<Self> {
        let depths = env.depths();
        match depths.as_slice() {
            [] => Ok(VermaVector { depth: 0, env }),
            [d] => Ok(VermaVector { depth: *d, env }),
            _ => Err(Error::MixedWeight(format!("depths {depths:?}"))),
        }
    }

    pub fn weight(&self, phi: &Functional) -> Scalar {
        phi.highest_weight() - scalar::int(self.depth as i64)
    }
}

/// `M(φ)` with memoized generator actions.
pub struct VermaModule {
    phi: Functional,
    st: Straightener,
    cache: Mutex<HashMap<(i64, usize, PbwMonomial), EnvElement>>,
}

impl VermaModule {
    pub fn new(phi: &Functional) -> Self {
        VermaModule {
            phi: phi.clone(),
            st: Straightener::new(phi.algebra()),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn functional(&self) -> &Functional {
        &self.phi
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.phi.algebra()
    }

    pub fn straightener(&self) -> &Straightener {
        &self.st
    }

    /// `(d_j⊗e_b)·(m ṽ)`.
    pub fn act_generator(&self, j: i64, b: usize, m: &PbwMonomial) -> Result<EnvElement> {
        check_mode(j)?;
        if j < 0 {
            return self.st.left_mul(Letter { depth: (-j) as u32, color: b }, m);
        }
        let Some(&first) = m.factors().first() else {
            if j == 0 {
                return Ok(EnvElement::monomial(PbwMonomial::one(), self.phi.d0[b].clone()));
            }
            return Ok(EnvElement::zero());
        };
        let key = (j, b, m.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let rest = PbwMonomial::from_letters(m.factors()[1..].to_vec());
        // g·y·R = y·(g·R) + [g, y]·R
        let mut out = self.st.left_mul_env(first, &self.act_generator(j, b, &rest)?)?;
        let m1 = first.depth as i64;
        let prods = self.algebra().mul_basis(b, first.color)?;
        // [d_j⊗e_b, d_{-m1}⊗e_a] = (-m1-j) d_{j-m1}⊗e_b e_a + δ_{j,m1} (j³-j)/12 c⊗e_b e_a
        let coef = scalar::int(-m1 - j);
        for (k, s) in &prods {
            out.add_scaled(&self.act_generator(j - m1, *k, &rest)?, &(&coef * s));
        }
        if j == m1 {
            let cc = central_coefficient(j);
            let rest_env = EnvElement::monomial(rest.clone(), scalar::one());
            for (k, s) in &prods {
                out.add_scaled(&rest_env, &(&cc * s * &self.phi.c[*k]));
            }
        }
        self.cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    pub fn act_generator_env(&self, j: i64, b: usize, v: &EnvElement) -> Result<EnvElement> {
        let mut out = EnvElement::zero();
        for (m, c) in v.terms() {
            out.add_scaled(&self.act_generator(j, b, m)?, c);
        }
        Ok(out)
    }

    /// `x·(vṽ)` for an arbitrary `x ∈ Vir⊗A`.
    pub fn act(&self, x: &LieElement, v: &EnvElement) -> Result<EnvElement> {
        if !same_algebra(self.algebra(), x.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = EnvElement::zero();
        for (j, f) in x.d_part() {
            for (b, s) in f.coords() {
                out.add_scaled(&self.act_generator_env(*j, *b, v)?, s);
            }
        }
        let cval = self.phi.c_value(x.c_part())?;
        out.add_scaled(v, &cval);
        Ok(out)
    }

    /// [`act`](Self::act) split into homogeneous vectors.
    pub fn verma_act(&self, x: &LieElement, v: &VermaVector) -> Result<Vec<VermaVector>> {
        let out = self.act(x, &v.env)?;
        Ok(out
            .homogeneous_parts()
            .into_values()
            .map(|env| VermaVector::new(env).expect("homogeneous part"))
            .collect())
    }

    /// Applies the raising word `d_{m_1}⊗e_{b_1} ⋯ d_{m_r}⊗e_{b_r}` (the
    /// letters of `x` read as raising operators) to `v`.
    pub fn apply_raising(&self, x: &PbwMonomial, v: &EnvElement) -> Result<EnvElement> {
        let mut acc = v.clone();
        for l in x.factors().iter().rev() {
            acc = self.act_generator_env(l.depth as i64, l.color, &acc)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Basis of the vectors of depth `n` killed by `d_1⊗e_i` and `d_2⊗e_i`
    /// for every color `i`, i.e. the singular vectors.
    pub fn singular_vectors(&self, n: u32, colors: &[usize]) -> Result<Vec<EnvElement>> {
        let basis = pbw_basis(n, colors);
        let mut row_index: BTreeMap<(usize, PbwMonomial), usize> = BTreeMap::new();
        let mut columns: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(basis.len());
        let gens: Vec<(i64, usize)> =
            [1i64, 2].iter().flat_map(|&j| colors.iter().map(move |&b| (j, b))).collect();
        for m in &basis {
            let mut col = Vec::new();
            for (g, &(j, b)) in gens.iter().enumerate() {
                for (out, c) in self.act_generator(j, b, m)?.terms() {
                    let next = row_index.len();
                    let r = *row_index.entry((g, out.clone())).or_insert(next);
                    col.push((r, c.clone()));
                }
            }
            columns.push(col);
        }
        let mut rows: Vec<Row> = vec![vec![Scalar::zero(); basis.len()]; row_index.len()];
        for (ci, col) in columns.iter().enumerate() {
            for (r, v) in col {
                rows[*r][ci] = v.clone();
            }
        }
        let kernel = linalg::kernel(&rows, basis.len());
        Ok(kernel
            .into_iter()
            .map(|v| EnvElement::from_terms(basis.iter().cloned().zip(v)))
            .collect())
    }

    /// Matrix of `ṽ`-coefficients of `X·w`, rows indexed by raising
    /// monomials `X`, columns by lowering monomials `w`, both at depth `n`.
    pub fn pairing_matrix(&self, n: u32, colors: &[usize]) -> Result<Vec<Row>> {
        let basis = pbw_basis(n, colors);
        let mut rows = vec![vec![Scalar::zero(); basis.len()]; basis.len()];
        for (ci, w) in basis.iter().enumerate() {
            let start = EnvElement::monomial(w.clone(), scalar::one());
            let mut memo: HashMap<Vec<Letter>, EnvElement> = HashMap::new();
            for (ri, x) in basis.iter().enumerate() {
                let img = self.raise_suffix(x.factors(), &start, &mut memo)?;
                rows[ri][ci] = img.coeff(&PbwMonomial::one());
            }
        }
        Ok(rows)
    }

    fn raise_suffix(
        &self,
        letters: &[Letter],
        start: &EnvElement,
        memo: &mut HashMap<Vec<Letter>, EnvElement>,
    ) -> Result<EnvElement> {
        let Some((first, rest)) = letters.split_first() else {
            return Ok(start.clone());
        };
        if let Some(hit) = memo.get(letters) {
            return Ok(hit.clone());
        }
        let inner = self.raise_suffix(rest, start, memo)?;
        let out = self.act_generator_env(first.depth as i64, first.color, &inner)?;
        memo.insert(letters.to_vec(), out.clone());
        Ok(out)
    }

    /// `dim V(φ)_{φ(d_0)-n}` for `n = 0..=max_depth`, as ranks of the
    /// pairing matrices.
    pub fn quotient_dims(&self, max_depth: u32, colors: &[usize]) -> Result<Vec<usize>> {
        (0..=max_depth)
            .map(|n| {
                if n == 0 {
                    return Ok(1);
                }
                let m = self.pairing_matrix(n, colors)?;
                Ok(linalg::rank(&m, m.first().map_or(0, Vec::len)))
            })
            .collect()
    }

    /// True iff the homogeneous vector `w` lies in the maximal proper
    /// submodule (all raising images have zero `ṽ`-coefficient).
    pub fn in_maximal_submodule(&self, w: &EnvElement, colors: &[usize]) -> Result<bool> {
        let v = VermaVector::new(w.clone())?;
        if v.depth == 0 {
            return Ok(w.is_zero());
        }
        let mut memo = HashMap::new();
        for x in pbw_basis(v.depth, colors) {
            if !self.raise_suffix(x.factors(), w, &mut memo)?.coeff(&PbwMonomial::one()).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `dim M(φ)_{φ(d_0)-n}` over the given colors.
pub fn verma_dims(max_depth: u32, colors: &[usize]) -> Vec<usize> {
    (0..=max_depth).map(|n| pbw_basis(n, colors).len()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasifiniteStatus {
    Certified,
    NoWitnessUpToBound,
}

impl QuasifiniteStatus {
    pub fn name(self) -> &'static str {
        match self {
            QuasifiniteStatus::Certified => "quasifinite_certified",
            QuasifiniteStatus::NoWitnessUpToBound => "no_witness_up_to_bound",
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuasifiniteVerdict {
    pub status: QuasifiniteStatus,
    /// Finite-codimension ideal `J` with `φ(Vir_0⊗J) = 0`, when certified.
    pub witness: Option<Ideal>,
    /// Recurrence found on the window, whether or not it is certified.
    pub candidate: Option<Poly>,
    pub notes: Vec<String>,
}

/// First `min(bound + 1, len)` values of a windowed functional's sequences.
fn sampled<'a>(vals: &'a [Scalar], bound: usize) -> &'a [Scalar] {
    &vals[..vals.len().min(bound + 1)]
}

/// Decides whether `V(φ)` is quasifinite. Finite-dimensional algebras are
/// always quasifinite (witness 0). For windowed algebras a common
/// recurrence of order `<= bound/2` for `λ` and `κ` gives the witness
/// `(p)`; it is certified only when `φ` carries an exact ideal or the caller
/// passes `assume_exact`.
pub fn check_quasifinite(phi: &Functional, bound: usize, assume_exact: bool) -> QuasifiniteVerdict {
    let alg = phi.algebra();
    if alg.is_finite() {
        return QuasifiniteVerdict {
            status: QuasifiniteStatus::Certified,
            witness: Some(Ideal::zero(alg)),
            candidate: None,
            notes: vec!["finite-dimensional algebra: the zero ideal has finite codimension".into()],
        };
    }
    let found = recurrence::joint_annihilator(
        &[sampled(&phi.d0, bound), sampled(&phi.c, bound)],
        bound / 2,
    );
    let mut notes = Vec::new();
    let witness_poly = match (&found, phi.exact_ideal()) {
        (Some(p), Some(q)) if p.divides(q) => Some(p.clone()),
        (Some(p), Some(q)) => {
            notes.push(format!("window recurrence {p} does not divide the exact ideal {q}; using the exact ideal"));
            Some(q.clone())
        }
        (None, Some(q)) => Some(q.clone()),
        (Some(p), None) if assume_exact => Some(p.clone()),
        _ => None,
    };
    match witness_poly {
        Some(p) => QuasifiniteVerdict {
            status: QuasifiniteStatus::Certified,
            witness: Some(Ideal::principal(alg, &p).expect("windowed algebra")),
            candidate: found,
            notes,
        },
        None => {
            if found.is_some() {
                notes.push("recurrence found on the sampled window but not declared exact".into());
            } else {
                notes.push(format!("no common recurrence of order <= {}", bound / 2));
            }
            QuasifiniteVerdict { status: QuasifiniteStatus::NoWitnessUpToBound, witness: None, candidate: found, notes }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducibilityStatus {
    ReducibleCertified,
    IrreducibleCertified,
    NoWitnessUpToBound,
}

impl ReducibilityStatus {
    pub fn name(self) -> &'static str {
        match self {
            ReducibilityStatus::ReducibleCertified => "reducible_certified",
            ReducibilityStatus::IrreducibleCertified => "irreducible_certified",
            ReducibilityStatus::NoWitnessUpToBound => "no_witness_up_to_bound",
        }
    }
}

/// Singular-vector loci for `A = Q` in both sign conventions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalLoci {
    pub central_charge: Scalar,
    /// `φ(d_0)` under `[d_m, d_n] = (n-m) d_{m+n}`.
    pub h: Scalar,
    /// Eigenvalue of `L_0 = -d_0` under `L_n = -d_n`.
    pub h_physics: Scalar,
    /// At central charge 1: `Some(m)` when `h_physics = m²/4`.
    pub c1_kac_index: Option<Option<i64>>,
}

pub fn classical_loci(phi: &Functional) -> Option<ClassicalLoci> {
    if phi.algebra().dim() != 1 || !phi.algebra().is_finite() {
        return None;
    }
    let h = phi.highest_weight();
    let c = phi.c_value(&AlgebraElement::unit(phi.algebra())).ok()?;
    let h_physics = -h.clone();
    let c1_kac_index = (c == scalar::one()).then(|| {
        // h_physics = m²/4 with m ≥ 0
        let four_h = &h_physics * scalar::int(4);
        if !four_h.is_integer() || four_h < Scalar::zero() {
            return None;
        }
        let v: i64 = four_h.to_integer().try_into().ok()?;
        let m = (v as f64).sqrt().round() as i64;
        (m * m == v).then_some(m)
    });
    Some(ClassicalLoci { central_charge: c, h, h_physics, c1_kac_index })
}

#[derive(Debug, Clone)]
pub struct ReducibilityVerdict {
    pub status: ReducibilityStatus,
    /// Largest ideal `J_0` with `φ(d_0⊗J_0) = 0` found (or a principal subideal).
    pub witness: Option<Ideal>,
    pub singular_vector: Option<EnvElement>,
    pub classical: Option<ClassicalLoci>,
    pub notes: Vec<String>,
}

/// `J_0 = {f : φ(d_0⊗fA) = 0}` for finite-dimensional `A`.
pub fn largest_d0_ideal(phi: &Functional) -> Result<Ideal> {
    kernel_ideal(phi, false)
}

/// `{f : φ(d_0⊗fA) = φ(c⊗fA) = 0}`, the annihilator of `V(φ)` in `A`.
pub fn largest_vanishing_ideal(phi: &Functional) -> Result<Ideal> {
    kernel_ideal(phi, true)
}

fn kernel_ideal(phi: &Functional, with_c: bool) -> Result<Ideal> {
    let alg = phi.algebra();
    if !alg.is_finite() {
        return Err(Error::InfiniteDimensionalAlgebra);
    }
    let n = alg.dim();
    let mut rows = Vec::new();
    for j in 0..n {
        let ej = AlgebraElement::basis(alg, j);
        let mut rd = Vec::with_capacity(n);
        let mut rc = Vec::with_capacity(n);
        for i in 0..n {
            let p = AlgebraElement::basis(alg, i).multiply(&ej)?;
            rd.push(phi.d0_value(&p)?);
            rc.push(phi.c_value(&p)?);
        }
        rows.push(rd);
        if with_c {
            rows.push(rc);
        }
    }
    let kernel = linalg::kernel(&rows, n);
    if kernel.is_empty() {
        return Ok(Ideal::zero(alg));
    }
    // the kernel is already an ideal: φ(d_0⊗(fg)e_j) = φ(d_0⊗f(ge_j))
    let ideal = crate::algebra::ideal_closure(
        &kernel.iter().map(|r| AlgebraElement::from_dense(alg, r)).collect::<Vec<_>>(),
    )?;
    debug_assert_eq!(ideal.dim()?, kernel.len());
    Ok(ideal)
}

/// Checks that `(d_{-1}⊗f)ṽ` is killed by `d_1⊗e_i` and `d_2⊗e_i` for the
/// given colors.
fn verify_singular(module: &VermaModule, f: &AlgebraElement, colors: &[usize]) -> Result<Option<EnvElement>> {
    let v = module.act(&LieElement::d(-1, f.clone())?, &EnvElement::one())?;
    for &b in colors {
        for j in [1, 2] {
            if !module.act_generator_env(j, b, &v)?.is_zero() {
                return Ok(None);
            }
        }
    }
    Ok(Some(v))
}

/// Sufficient test for reducibility of `M(φ)`: a nonzero ideal `J` with
/// `φ(d_0⊗J) = 0` yields the singular vector `(d_{-1}⊗f)ṽ`, `f ∈ J`.
/// For windowed algebras (integral domains) the converse also holds, so an
/// exact functional without such an ideal is certified irreducible.
pub fn check_verma_reducible(phi: &Functional, bound: usize, assume_exact: bool) -> Result<ReducibilityVerdict> {
    let alg = phi.algebra();
    let module = VermaModule::new(phi);
    let classical = classical_loci(phi);
    let mut notes = Vec::new();
    if let Some(cl) = &classical {
        notes.push(format!(
            "A = Q: h = {} under [d_m,d_n] = (n-m)d_(m+n); h = {} under L_n = -d_n",
            cl.h, cl.h_physics
        ));
        if let Some(k) = &cl.c1_kac_index {
            notes.push(match k {
                Some(m) => format!("c = 1 and h_physics = m^2/4 with m = {m}: classically reducible"),
                None => "c = 1 and h_physics is not of the form m^2/4: classically irreducible".into(),
            });
        }
    }
    if alg.is_finite() {
        let j0 = largest_d0_ideal(phi)?;
        if j0.is_zero() {
            notes.push("largest ideal J0 is zero; the ideal criterion is only sufficient here".into());
            return Ok(ReducibilityVerdict {
                status: ReducibilityStatus::NoWitnessUpToBound,
                witness: Some(j0),
                singular_vector: None,
                classical,
                notes,
            });
        }
        let f = j0.basis_elements()?.remove(0);
        let colors: Vec<usize> = (0..alg.dim()).collect();
        return Ok(match verify_singular(&module, &f, &colors)? {
            Some(v) => ReducibilityVerdict {
                status: ReducibilityStatus::ReducibleCertified,
                witness: Some(j0),
                singular_vector: Some(v),
                classical,
                notes,
            },
            None => {
                notes.push("singular-vector verification failed".into());
                ReducibilityVerdict { status: ReducibilityStatus::NoWitnessUpToBound, witness: Some(j0), singular_vector: None, classical, notes }
            }
        });
    }
    let (lo, hi) = alg.window().unwrap();
    let found = recurrence::joint_annihilator(&[sampled(&phi.d0, bound)], bound / 2);
    let exact = assume_exact || phi.exact_ideal().is_some();
    let p = match (found, phi.exact_ideal()) {
        (Some(p), Some(q)) if !p.divides(q) => Some(q.clone()),
        (None, Some(q)) => Some(q.clone()),
        (p, _) => p,
    };
    match p {
        Some(p) if exact => {
            let witness = Ideal::principal(alg, &p)?;
            let f = AlgebraElement::from_poly(alg, &p)?;
            let deg = p.degree().unwrap_or(0) as i64;
            let colors: Vec<usize> =
                (lo..=hi - deg).map(|e| alg.index_of_exponent(e)).collect::<Result<_>>()?;
            notes.push(format!("d1, d2 checked against t^k for k in [{lo}, {}]", hi - deg));
            Ok(match verify_singular(&module, &f, &colors)? {
                Some(v) => ReducibilityVerdict {
                    status: ReducibilityStatus::ReducibleCertified,
                    witness: Some(witness),
                    singular_vector: Some(v),
                    classical,
                    notes,
                },
                None => {
                    notes.push("singular-vector verification failed".into());
                    ReducibilityVerdict { status: ReducibilityStatus::NoWitnessUpToBound, witness: Some(witness), singular_vector: None, classical, notes }
                }
            })
        }
        Some(p) => {
            notes.push(format!("candidate ideal ({p}) found on the sampled window; not declared exact"));
            Ok(ReducibilityVerdict { status: ReducibilityStatus::NoWitnessUpToBound, witness: None, singular_vector: None, classical, notes })
        }
        None if exact => {
            notes.push(format!("no recurrence of order <= {} in the d0 sequence; declared exact", bound / 2));
            Ok(ReducibilityVerdict { status: ReducibilityStatus::IrreducibleCertified, witness: Some(Ideal::zero(alg)), singular_vector: None, classical, notes })
        }
        None => {
            notes.push(format!("no recurrence of order <= {} in the d0 sequence", bound / 2));
            Ok(ReducibilityVerdict { status: ReducibilityStatus::NoWitnessUpToBound, witness: None, singular_vector: None, classical, notes })
        }
    }
}

/// Splits `φ` over the local factors of a product_local algebra:
/// `φ_i(x) = φ(e_i·x)` with the CRT idempotents `e_i`.
pub fn split_phi(phi: &Functional) -> Result<Vec<(LocalComponent, Functional)>> {
    local_decomposition(phi.algebra())?
        .into_iter()
        .map(|comp| {
            let part = phi.twist(&comp.idempotent)?;
            Ok((comp, part))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LocalFactor;
    use crate::pbw::colored_partition_count;
    use crate::scalar::{frac, int};

    fn classical(c: Scalar, h: Scalar) -> Functional {
        Functional::new(&Algebra::rationals(), vec![h], vec![c]).unwrap()
    }

    fn nil2(d0: [i64; 2], c: [i64; 2]) -> Functional {
        let a = Algebra::product_local(vec![LocalFactor { point: int(0), order: 2 }]).unwrap();
        Functional::new(&a, d0.iter().map(|&x| int(x)).collect(), c.iter().map(|&x| int(x)).collect())
            .unwrap()
    }

    fn lm(letters: &[(u32, usize)]) -> PbwMonomial {
        PbwMonomial::from_letters(letters.iter().map(|&(d, c)| Letter { depth: d, color: c }).collect())
    }

    #[test]
    fn raising_on_depth_one() {
        let phi = nil2([3, 5], [0, 7]);
        let m = VermaModule::new(&phi);
        let alg = phi.algebra().clone();
        let f = AlgebraElement::from_dense(&alg, &[int(2), int(1)]);
        let g = AlgebraElement::from_dense(&alg, &[int(1), int(4)]);
        let v = m.act(&LieElement::d(-1, f.clone()).unwrap(), &EnvElement::one()).unwrap();
        let out = m.act(&LieElement::d(1, g.clone()).unwrap(), &v).unwrap();
        let gf = g.multiply(&f).unwrap();
        let expect = phi.d0_value(&gf).unwrap() * int(-2);
        assert_eq!(out, EnvElement::monomial(PbwMonomial::one(), expect));
        for j in 2..5 {
            assert!(m.act(&LieElement::d(j, g.clone()).unwrap(), &v).unwrap().is_zero());
        }
    }

    #[test]
    fn mode_two_pair_uses_central_value() {
        let phi = nil2([3, 5], [11, 7]);
        let m = VermaModule::new(&phi);
        let alg = phi.algebra().clone();
        let f = AlgebraElement::basis(&alg, 1);
        let v = m.act(&LieElement::d(-2, f.clone()).unwrap(), &EnvElement::one()).unwrap();
        let out = m.act(&LieElement::d_unit(&alg, 2).unwrap(), &v).unwrap();
        let expect = int(-4) * phi.d0_value(&f).unwrap() + frac(1, 2) * phi.c_value(&f).unwrap();
        assert_eq!(out.coeff(&PbwMonomial::one()), expect);
    }

    #[test]
    fn d0_measures_depth() {
        let h = frac(7, 3);
        let phi = classical(int(1), h.clone());
        let m = VermaModule::new(&phi);
        let alg = phi.algebra().clone();
        let v = EnvElement::monomial(lm(&[(1, 0)]), int(1));
        let out = m.act(&LieElement::d_unit(&alg, 0).unwrap(), &v).unwrap();
        assert_eq!(out, v.scale(&(h - int(1))));
    }

    #[test]
    fn classical_singular_vectors() {
        let m = VermaModule::new(&classical(int(5), int(0)));
        let s = m.singular_vectors(1, &[0]).unwrap();
        assert_eq!(s, vec![EnvElement::monomial(lm(&[(1, 0)]), int(1))]);

        let m = VermaModule::new(&classical(int(1), frac(-1, 4)));
        let s = m.singular_vectors(2, &[0]).unwrap();
        assert_eq!(s.len(), 1);
        let expect = EnvElement::from_terms([(lm(&[(2, 0)]), int(1)), (lm(&[(1, 0), (1, 0)]), int(1))]);
        let lead = s[0].coeff(&lm(&[(2, 0)]));
        assert_eq!(s[0].scale(&lead.recip()), expect);
    }

    #[test]
    fn nilpotent_direction_is_singular() {
        let phi = nil2([3, 0], [1, 0]);
        let m = VermaModule::new(&phi);
        let s = m.singular_vectors(1, &[0, 1]).unwrap();
        assert_eq!(s, vec![EnvElement::monomial(lm(&[(1, 1)]), int(1))]);
    }

    #[test]
    fn generic_quotient_dims() {
        let m = VermaModule::new(&classical(int(2), frac(5, 7)));
        assert_eq!(m.quotient_dims(4, &[0]).unwrap(), vec![1, 1, 2, 3, 5]);
        let z = VermaModule::new(&classical(int(0), int(0)));
        assert_eq!(z.quotient_dims(1, &[0]).unwrap()[1], 0);
    }

    #[test]
    fn nilpotent_part_drops_out_of_quotient() {
        let (h, c) = (frac(2, 3), frac(1, 5));
        let a = Algebra::product_local(vec![LocalFactor { point: int(0), order: 2 }]).unwrap();
        let phi = Functional::new(&a, vec![h.clone(), int(0)], vec![c.clone(), int(0)]).unwrap();
        let lhs = VermaModule::new(&phi).quotient_dims(4, &[0, 1]).unwrap();
        let rhs = VermaModule::new(&classical(c, h)).quotient_dims(4, &[0]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn verma_dims_are_colored_partitions() {
        for d in 1..=2usize {
            let colors: Vec<usize> = (0..d).collect();
            let dims = verma_dims(8, &colors);
            for (n, v) in dims.iter().enumerate() {
                assert_eq!(*v as u64, colored_partition_count(n as u32, d));
            }
        }
    }

    #[test]
    fn quasifinite_on_geometric_sequence() {
        let p = Algebra::polynomial(12).unwrap();
        let d0: Vec<Scalar> = (0..=12).map(|k| int(2i64.pow(k))).collect();
        let phi = Functional::new(&p, d0, vec![int(0); 13]).unwrap();
        let v = check_quasifinite(&phi, 12, false);
        assert_eq!(v.status, QuasifiniteStatus::NoWitnessUpToBound);
        assert_eq!(v.candidate, Some(Poly::parse("t-2").unwrap()));
        let exact = phi.with_exact_ideal(Poly::parse("t-2").unwrap()).unwrap();
        let v = check_quasifinite(&exact, 12, false);
        assert_eq!(v.status, QuasifiniteStatus::Certified);
        assert_eq!(v.witness.unwrap().to_string(), "(t - 2)");
    }

    #[test]
    fn factorial_has_no_witness() {
        let p = Algebra::polynomial(12).unwrap();
        let mut d0 = vec![int(1)];
        for k in 1..=12 {
            let next = &d0[k - 1] * int(k as i64);
            d0.push(next);
        }
        let phi = Functional::new(&p, d0, vec![int(0); 13]).unwrap();
        let v = check_quasifinite(&phi, 12, false);
        assert_eq!(v.status, QuasifiniteStatus::NoWitnessUpToBound);
        assert!(v.candidate.is_none());
    }

    #[test]
    fn finite_algebras_are_quasifinite() {
        let v = check_quasifinite(&nil2([1, 2], [3, 4]), 0, false);
        assert_eq!(v.status, QuasifiniteStatus::Certified);
        assert!(v.witness.unwrap().is_zero());
    }

    #[test]
    fn exact_ideal_is_validated() {
        let p = Algebra::polynomial(6).unwrap();
        let d0: Vec<Scalar> = (0..=6).map(|k| int(3i64.pow(k))).collect();
        let phi = Functional::new(&p, d0, vec![int(0); 7]).unwrap();
        assert!(phi.clone().with_exact_ideal(Poly::parse("t-2").unwrap()).is_err());
        assert!(phi.with_exact_ideal(Poly::parse("t-3").unwrap()).is_ok());
    }

    #[test]
    fn reducible_via_nilpotent_ideal() {
        let v = check_verma_reducible(&nil2([3, 0], [0, 0]), 0, false).unwrap();
        assert_eq!(v.status, ReducibilityStatus::ReducibleCertified);
        assert_eq!(v.witness.unwrap().to_string(), "(t)");
        let sv = v.singular_vector.unwrap();
        assert_eq!(sv, EnvElement::monomial(lm(&[(1, 1)]), int(1)));
    }

    #[test]
    fn classical_has_no_ideal_witness() {
        let v = check_verma_reducible(&classical(int(0), int(5)), 0, false).unwrap();
        assert_eq!(v.status, ReducibilityStatus::NoWitnessUpToBound);
        assert!(v.witness.unwrap().is_zero());
        let loci = classical_loci(&classical(int(1), frac(-1, 4))).unwrap();
        assert_eq!(loci.h_physics, frac(1, 4));
        assert_eq!(loci.c1_kac_index, Some(Some(1)));
    }

    #[test]
    fn reducible_polynomial_functional() {
        let p = Algebra::polynomial(10).unwrap();
        let d0: Vec<Scalar> = (0..=10).map(|k| int(3 * 2i64.pow(k))).collect();
        let phi = Functional::new(&p, d0, vec![int(0); 11])
            .unwrap()
            .with_exact_ideal(Poly::parse("t-2").unwrap())
            .unwrap();
        let v = check_verma_reducible(&phi, 10, false).unwrap();
        assert_eq!(v.status, ReducibilityStatus::ReducibleCertified);
        assert!(v.witness.unwrap().contains(&AlgebraElement::from_poly(&p, &Poly::parse("t-2").unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn split_two_points() {
        let a = Algebra::product_local(vec![
            LocalFactor { point: int(0), order: 1 },
            LocalFactor { point: int(1), order: 1 },
        ])
        .unwrap();
        let phi = Functional::new(&a, vec![int(5), int(2)], vec![int(0), int(0)]).unwrap();
        let parts = split_phi(&phi).unwrap();
        assert_eq!(parts[0].1.highest_weight(), int(3));
        assert_eq!(parts[1].1.highest_weight(), int(2));
        let sum = parts[0].1.add(&parts[1].1).unwrap();
        assert_eq!(sum, phi);

        let single = nil2([4, 1], [2, 2]);
        let parts = split_phi(&single).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1, single);

        for (_, part) in split_phi(&Functional::zero(&a)).unwrap() {
            assert!(part.is_zero());
        }
    }

    #[test]
    fn mixed_weights_are_rejected() {
        let x = EnvElement::from_terms([(lm(&[(1, 0)]), int(1)), (lm(&[(2, 0)]), int(1))]);
        assert!(matches!(VermaVector::new(x), Err(Error::MixedWeight(_))));
    }
}
