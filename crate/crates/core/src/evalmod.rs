//! Intermediate-series modules, (generalized) evaluation modules, tensor
//! products, annihilators and supports, and windowed weight tables.
//!
//! `V(a, b)` has basis `t^k` with `d_n·t^k = (k + a(n+1) + b) t^{n+k}` and
//! `c` acting by zero; `t^k` has weight `k + a + b`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{
    ideal_closure, ideal_intersection, quotient_algebra, same_algebra, Algebra, AlgebraElement,
    AlgebraKind, Ideal, Quotient,
};
use crate::error::{Error, Result};
use crate::liealg::LieElement;
use crate::pbw::{colored_partition_count, colors as pbw_colors, EnvElement};
use crate::poly::Poly;
use crate::scalar::{self, Scalar};
use crate::verma::{check_quasifinite, largest_vanishing_ideal, Functional, QuasifiniteStatus, VermaModule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeriesSpec {
    pub a: Scalar,
    pub b: Scalar,
    /// Exponents `k` of the basis vectors `t^k` kept.
    pub window: (i64, i64),
}

impl IntSeriesSpec {
    /// Validates the window and runs the commutator check on small modes.
    pub fn new(a: Scalar, b: Scalar, window: (i64, i64)) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::InvalidModule(format!(
                "window [{}, {}] is empty",
                window.0, window.1
            )));
        }
        let spec = IntSeriesSpec { a, b, window };
        for m in -2..=2 {
            for n in -2..=2 {
                for k in window.0..=window.1 {
                    if let Some(defect) = spec.lie_defect(m, n, k) {
                        if !defect.is_zero() {
                            return Err(Error::InvalidModule(format!(
                                "commutator check failed at m={m}, n={n}, k={k}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(spec)
    }

    pub fn contains(&self, k: i64) -> bool {
        self.window.0 <= k && k <= self.window.1
    }

    /// Coefficient in `d_n·t^k = coeff·t^{n+k}`, without window checks.
    pub fn coefficient(&self, n: i64, k: i64) -> Scalar {
        scalar::int(k) + &self.a * scalar::int(n + 1) + &self.b
    }

    pub fn weight(&self, k: i64) -> Scalar {
        scalar::int(k) + &self.a + &self.b
    }

    /// `d_m d_n t^k - d_n d_m t^k - (n-m) d_{m+n} t^k` (all multiples of
    /// `t^{m+n+k}`), or `None` when an intermediate exponent leaves the window.
    pub fn lie_defect(&self, m: i64, n: i64, k: i64) -> Option<Scalar> {
        if ![k, n + k, m + k, m + n + k].iter().all(|&e| self.contains(e)) {
            return None;
        }
        let mn = self.coefficient(n, k) * self.coefficient(m, n + k);
        let nm = self.coefficient(m, k) * self.coefficient(n, m + k);
        Some(mn - nm - scalar::int(n - m) * self.coefficient(m + n, k))
    }

    /// Exponent `k` with `t^k` killed by every `d_n`: exists iff `a = 0` and
    /// `b = -k`.
    pub fn trivial_submodule_exponent(&self) -> Option<i64> {
        if !self.a.is_zero() || !self.b.is_integer() {
            return None;
        }
        let k: i64 = (-self.b.to_integer()).try_into().ok()?;
        self.contains(k).then_some(k)
    }

    /// Exponent `k` outside the image of all `d_n`, so that `V(a, b)` has a
    /// one-dimensional quotient at `t^k`: exists iff `a = 1` and `k = -1-b`.
    pub fn trivial_quotient_exponent(&self) -> Option<i64> {
        if !self.a.is_one() || !self.b.is_integer() {
            return None;
        }
        let k: i64 = (-self.b.to_integer() - num_bigint::BigInt::one()).try_into().ok()?;
        self.contains(k).then_some(k)
    }

    pub fn is_reducible(&self) -> bool {
        self.trivial_submodule_exponent().is_some() || self.trivial_quotient_exponent().is_some()
    }
}

/// `d_n·t^k = (coefficient)·t^{n+k}`.
pub fn int_series_act(spec: &IntSeriesSpec, n: i64, k: i64) -> Result<(Scalar, i64)> {
    for e in [k, n + k] {
        if !spec.contains(e) {
            return Err(Error::WindowOverflow { exponent: e, lo: spec.window.0, hi: spec.window.1 });
        }
    }
    Ok((spec.coefficient(n, k), n + k))
}

#[derive(Debug, Clone)]
pub enum ModuleHandle {
    Verma { phi: Functional, colors: Option<(i64, i64)> },
    IrreducibleQuotient { phi: Functional, colors: Option<(i64, i64)> },
    IntSeriesEval { alg: Arc<Algebra>, spec: IntSeriesSpec, point: Scalar },
    GeneralizedEval { alg: Arc<Algebra>, point: Scalar, order: u32, inner: Box<ModuleHandle> },
    Tensor(Vec<ModuleHandle>),
    Trivial(Arc<Algebra>),
}

/// `(t - point)^order` as an ideal of `alg`; must be proper.
pub fn point_power_ideal(alg: &Arc<Algebra>, point: &Scalar, order: u32) -> Result<Ideal> {
    if !alg.has_monomial_basis() {
        return Err(Error::UnsupportedKind(
            "evaluation at a point needs an algebra with generator t".into(),
        ));
    }
    if alg.kind() == AlgebraKind::Laurent && point.is_zero() {
        return Err(Error::InvalidModule("t is invertible in a Laurent algebra; the point must be nonzero".into()));
    }
    let p = Poly::linear(point).pow(order.max(1));
    let ideal = if alg.is_finite() {
        ideal_closure(&[AlgebraElement::from_poly(alg, &p)?])?
    } else {
        Ideal::principal(alg, &p)?
    };
    if ideal.is_whole() {
        return Err(Error::InvalidModule(format!("{point} is not a point of {}", alg.describe())));
    }
    Ok(ideal)
}

impl ModuleHandle {
    pub fn int_series_eval(alg: &Arc<Algebra>, spec: IntSeriesSpec, point: Scalar) -> Result<Self> {
        point_power_ideal(alg, &point, 1)?;
        Ok(ModuleHandle::IntSeriesEval { alg: alg.clone(), spec, point })
    }

    /// Pullback of `inner` (a module over `A/(t - point)^order`) to `A`.
    pub fn generalized_eval(alg: &Arc<Algebra>, point: Scalar, order: u32, inner: ModuleHandle) -> Result<Self> {
        let q = quotient_algebra(alg, &point_power_ideal(alg, &point, order)?)?;
        let inner_alg = inner.algebra();
        if !same_algebra(&q.algebra, &inner_alg) {
            return Err(Error::InvalidModule(format!(
                "inner module lives over {}, expected {}",
                inner_alg.describe(),
                q.algebra.describe()
            )));
        }
        Ok(ModuleHandle::GeneralizedEval { alg: alg.clone(), point, order, inner: Box::new(inner) })
    }

    pub fn tensor(factors: Vec<ModuleHandle>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::InvalidModule("tensor needs at least one factor".into()));
        };
        let alg = first.algebra();
        if factors.iter().any(|f| !same_algebra(&alg, &f.algebra())) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(ModuleHandle::Tensor(factors))
    }

    pub fn algebra(&self) -> Arc<Algebra> {
        match self {
            ModuleHandle::Verma { phi, .. } | ModuleHandle::IrreducibleQuotient { phi, .. } => {
                phi.algebra().clone()
            }
            ModuleHandle::IntSeriesEval { alg, .. }
            | ModuleHandle::GeneralizedEval { alg, .. }
            | ModuleHandle::Trivial(alg) => alg.clone(),
            ModuleHandle::Tensor(fs) => fs[0].algebra(),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            ModuleHandle::Verma { .. } => "verma",
            ModuleHandle::IrreducibleQuotient { .. } => "irreducible_quotient",
            ModuleHandle::IntSeriesEval { .. } => "int_series_eval",
            ModuleHandle::GeneralizedEval { .. } => "generalized_eval",
            ModuleHandle::Tensor(_) => "tensor",
            ModuleHandle::Trivial(_) => "trivial",
        }
    }

    fn quotient(&self) -> Result<Quotient> {
        match self {
            ModuleHandle::GeneralizedEval { alg, point, order, .. } => {
                quotient_algebra(alg, &point_power_ideal(alg, point, *order)?)
            }
            _ => unreachable!("only generalized evaluation modules carry a quotient"),
        }
    }
}

/// A vector of a module handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleVector {
    /// Coordinates on `t^k` of an intermediate-series module.
    Series(BTreeMap<i64, Scalar>),
    /// `X·ṽ` in a Verma module (or a representative in its quotient).
    Verma(EnvElement),
}

impl ModuleVector {
    pub fn is_zero(&self) -> bool {
        match self {
            ModuleVector::Series(m) => m.is_empty(),
            ModuleVector::Verma(e) => e.is_zero(),
        }
    }

    pub fn basis_series(k: i64) -> Self {
        ModuleVector::Series(BTreeMap::from([(k, scalar::one())]))
    }

    fn zero_like(&self) -> Self {
        match self {
            ModuleVector::Series(_) => ModuleVector::Series(BTreeMap::new()),
            ModuleVector::Verma(_) => ModuleVector::Verma(EnvElement::zero()),
        }
    }
}

/// Action of `x ∈ Vir⊗A` on a vector of an evaluation-type module: the
/// coefficients are projected to `A/𝔪^n`, then the inner action applies.
pub fn eval_act(handle: &ModuleHandle, x: &LieElement, v: &ModuleVector) -> Result<ModuleVector> {
    if !same_algebra(&handle.algebra(), x.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    match (handle, v) {
        (ModuleHandle::IntSeriesEval { spec, point, .. }, ModuleVector::Series(coords)) => {
            let mut out: BTreeMap<i64, Scalar> = BTreeMap::new();
            for (n, f) in x.d_part() {
                let s = f.evaluate_at(point)?;
                if s.is_zero() {
                    continue;
                }
                for (k, c) in coords {
                    let (coef, target) = int_series_act(spec, *n, *k)?;
                    *out.entry(target).or_insert_with(Scalar::zero) += &s * c * coef;
                }
            }
            out.retain(|_, v| !v.is_zero());
            Ok(ModuleVector::Series(out))
        }
        (ModuleHandle::GeneralizedEval { inner, .. }, _) => {
            let q = handle.quotient()?;
            let xbar = x.map_coeffs(&q.algebra, |f| q.projection.apply(f))?;
            eval_act(inner, &xbar, v)
        }
        (
            ModuleHandle::Verma { phi, .. } | ModuleHandle::IrreducibleQuotient { phi, .. },
            ModuleVector::Verma(env),
        ) => Ok(ModuleVector::Verma(VermaModule::new(phi).act(x, env)?)),
        (ModuleHandle::Trivial(_), _) => Ok(v.zero_like()),
        (ModuleHandle::Tensor(_), _) => Err(Error::UnsupportedKind(
            "tensor handles expose weight tables only".into(),
        )),
        _ => Err(Error::InvalidModule(format!(
            "vector kind does not match a {} module",
            handle.variant_name()
        ))),
    }
}

/// Annihilator ideal and support of a module.
#[derive(Debug, Clone)]
pub struct AnnSupport {
    pub ann: Ideal,
    /// Points `a` with `Ann ⊆ (t - a)`; `None` when not enumerable.
    pub support: Option<Vec<Scalar>>,
    /// `Ann` is exact (as opposed to a window-based lower bound).
    pub certified: bool,
    /// Multiplication-stability of `Ann` was checked on its basis.
    pub closure_verified: bool,
    pub notes: Vec<String>,
}

/// Points of the presentation whose maximal ideal contains `ann`.
fn support_points(ann: &Ideal, notes: &mut Vec<String>) -> Option<Vec<Scalar>> {
    let alg = ann.algebra();
    if ann.is_whole() {
        return Some(vec![]);
    }
    let Some(g) = ann.generator() else {
        notes.push("structure-constants algebra without a presentation: no point list".into());
        return None;
    };
    if g.is_zero() {
        notes.push("annihilator is zero in an infinite-dimensional algebra: support is everything".into());
        return None;
    }
    if alg.kind() == AlgebraKind::ProductLocal {
        return Some(
            alg.factors()
                .iter()
                .filter(|f| g.eval(&f.point).is_zero())
                .map(|f| f.point.clone())
                .collect(),
        );
    }
    let (roots, rest) = g.rational_roots();
    if rest.degree().unwrap_or(0) > 0 {
        notes.push(format!("annihilator factor {rest} has no rational roots; those points are omitted"));
    }
    let mut pts: Vec<Scalar> = roots.into_iter().map(|(a, _)| a).collect();
    if alg.kind() == AlgebraKind::Laurent {
        pts.retain(|a| !a.is_zero());
    }
    Some(pts)
}

pub fn annihilator_support(handle: &ModuleHandle) -> Result<AnnSupport> {
    let mut notes = Vec::new();
    let (ann, certified) = annihilator(handle, &mut notes)?;
    let closure_verified = match ann.algebra().is_finite() {
        true => ann.is_multiplication_stable()?,
        false => true,
    };
    let support = match handle {
        ModuleHandle::Tensor(fs) => {
            let mut pts: Vec<Scalar> = Vec::new();
            for f in fs {
                let part = annihilator_support(f)?;
                match part.support {
                    Some(p) => pts.extend(p),
                    None => {
                        pts.clear();
                        notes.extend(part.notes);
                        break;
                    }
                }
            }
            pts.sort();
            pts.dedup();
            if pts.is_empty() && !ann.is_whole() {
                support_points(&ann, &mut notes)
            } else {
                Some(pts)
            }
        }
        _ => support_points(&ann, &mut notes),
    };
    Ok(AnnSupport { ann, support, certified, closure_verified, notes })
}

fn annihilator(handle: &ModuleHandle, notes: &mut Vec<String>) -> Result<(Ideal, bool)> {
    match handle {
        // M(φ) is free over U(V_-), so (d_{-1}⊗f)ṽ ≠ 0 for every f ≠ 0
        ModuleHandle::Verma { phi, .. } => Ok((Ideal::zero(phi.algebra()), true)),
        ModuleHandle::IrreducibleQuotient { phi, .. } => {
            let alg = phi.algebra();
            if alg.is_finite() {
                return Ok((largest_vanishing_ideal(phi)?, true));
            }
            let verdict = check_quasifinite(phi, alg.dim() - 1, false);
            notes.extend(verdict.notes.iter().cloned());
            match (verdict.status, verdict.witness) {
                (QuasifiniteStatus::Certified, Some(w)) => Ok((w, true)),
                _ => {
                    if let Some(p) = &verdict.candidate {
                        notes.push(format!("candidate annihilator ({p}) on the sampled window"));
                    }
                    Ok((Ideal::zero(alg), false))
                }
            }
        }
        ModuleHandle::IntSeriesEval { alg, point, .. } => Ok((point_power_ideal(alg, point, 1)?, true)),
        ModuleHandle::GeneralizedEval { alg, point, order, inner } => {
            let (inner_ann, certified) = annihilator(inner, notes)?;
            let q = handle.quotient()?;
            let gbar = inner_ann
                .generator()
                .or_else(|| q.algebra.modulus().cloned().filter(|_| inner_ann.is_zero()))
                .ok_or_else(|| Error::UnsupportedKind("inner annihilator has no generator".into()))?;
            let mpow = Poly::linear(point).pow(*order);
            let g = gbar.gcd(&mpow);
            let ann = if alg.is_finite() {
                ideal_closure(&[AlgebraElement::from_poly(alg, &g)?])?
            } else {
                Ideal::principal(alg, &g)?
            };
            Ok((ann, certified))
        }
        ModuleHandle::Tensor(fs) => {
            let mut acc: Option<Ideal> = None;
            let mut certified = true;
            for f in fs {
                let (a, c) = annihilator(f, notes)?;
                certified &= c;
                acc = Some(match acc {
                    None => a,
                    Some(prev) => ideal_intersection(&prev, &a)?,
                });
            }
            notes.push("tensor annihilator reported as the intersection of the factor annihilators".into());
            Ok((acc.expect("nonempty tensor"), certified))
        }
        ModuleHandle::Trivial(alg) => Ok((Ideal::whole(alg), true)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Exact(u64),
    /// Count restricted to the window; the true multiplicity may be larger.
    LowerBound(u64),
}

impl Multiplicity {
    pub fn value(self) -> u64 {
        match self {
            Multiplicity::Exact(v) | Multiplicity::LowerBound(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Multiplicity::Exact(_))
    }
}

/// Subquotient structure at a zero weight of `V(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroWeightFlags {
    pub trivial_submodule: bool,
    pub trivial_quotient: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    /// Weight at offset 0.
    pub base: Scalar,
    pub entries: BTreeMap<i64, Multiplicity>,
    pub zero_weight: BTreeMap<i64, ZeroWeightFlags>,
    /// Some entry depends on a basis or exponent window.
    pub truncated: bool,
}

impl WeightTable {
    pub fn get(&self, offset: i64) -> Option<Multiplicity> {
        self.entries.get(&offset).copied()
    }

    pub fn max(&self) -> u64 {
        self.entries.values().map(|m| m.value()).max().unwrap_or(0)
    }
}

fn verma_colors(phi: &Functional, window: Option<(i64, i64)>) -> Result<(Vec<usize>, bool)> {
    let alg = phi.algebra();
    let colors = pbw_colors(alg, window)?;
    Ok((colors, !alg.is_finite()))
}

/// Weight multiplicities at offsets `lo..=hi` from the module's base weight.
pub fn weight_multiplicities(handle: &ModuleHandle, offsets: (i64, i64)) -> Result<WeightTable> {
    let (lo, hi) = offsets;
    if lo > hi {
        return Err(Error::InvalidModule(format!("offset range [{lo}, {hi}] is empty")));
    }
    match handle {
        ModuleHandle::Verma { phi, colors } => {
            let (cols, truncated) = verma_colors(phi, *colors)?;
            let mut entries = BTreeMap::new();
            for o in lo..=hi {
                let v = if o > 0 { 0 } else { colored_partition_count((-o) as u32, cols.len()) };
                entries.insert(o, if truncated && o < 0 { Multiplicity::LowerBound(v) } else { Multiplicity::Exact(v) });
            }
            Ok(WeightTable { base: phi.highest_weight(), entries, zero_weight: BTreeMap::new(), truncated })
        }
        ModuleHandle::IrreducibleQuotient { phi, colors } => {
            let (cols, truncated) = verma_colors(phi, *colors)?;
            let depth = (-lo).max(0) as u32;
            let dims = VermaModule::new(phi).quotient_dims(depth, &cols)?;
            let mut entries = BTreeMap::new();
            for o in lo..=hi {
                let v = if o > 0 { 0 } else { dims[(-o) as usize] as u64 };
                entries.insert(o, if truncated && o < 0 { Multiplicity::LowerBound(v) } else { Multiplicity::Exact(v) });
            }
            Ok(WeightTable { base: phi.highest_weight(), entries, zero_weight: BTreeMap::new(), truncated })
        }
        ModuleHandle::IntSeriesEval { spec, .. } => {
            for o in [lo, hi] {
                if !spec.contains(o) {
                    return Err(Error::WindowOverflow { exponent: o, lo: spec.window.0, hi: spec.window.1 });
                }
            }
            let entries = (lo..=hi).map(|o| (o, Multiplicity::Exact(1))).collect();
            let mut zero_weight = BTreeMap::new();
            let ab = &spec.a + &spec.b;
            if ab.is_integer() {
                if let Ok(k) = i64::try_from(-ab.to_integer()) {
                    if lo <= k && k <= hi {
                        zero_weight.insert(
                            k,
                            ZeroWeightFlags {
                                trivial_submodule: spec.trivial_submodule_exponent() == Some(k),
                                trivial_quotient: spec.trivial_quotient_exponent() == Some(k),
                            },
                        );
                    }
                }
            }
            Ok(WeightTable { base: ab, entries, zero_weight, truncated: false })
        }
        ModuleHandle::GeneralizedEval { inner, .. } => weight_multiplicities(inner, offsets),
        ModuleHandle::Tensor(fs) => tensor_table(fs, offsets),
        ModuleHandle::Trivial(_) => Ok(WeightTable {
            base: Scalar::zero(),
            entries: (lo..=hi).map(|o| (o, Multiplicity::Exact(u64::from(o == 0)))).collect(),
            zero_weight: BTreeMap::new(),
            truncated: false,
        }),
    }
}

/// Natural table of a tensor factor: the whole exponent window for
/// intermediate-series factors, depths down to `depth` for highest-weight ones.
fn factor_table(f: &ModuleHandle, depth: i64) -> Result<(WeightTable, bool)> {
    match f {
        ModuleHandle::IntSeriesEval { spec, .. } => Ok((weight_multiplicities(f, spec.window)?, true)),
        ModuleHandle::GeneralizedEval { inner, .. } => factor_table(inner, depth),
        ModuleHandle::Tensor(fs) => {
            let (lo, hi) = natural_range(fs, depth)?;
            Ok((tensor_table(fs, (lo, hi))?, true))
        }
        _ => {
            let t = weight_multiplicities(f, (-depth, 0))?;
            let truncated = t.truncated;
            Ok((t, truncated))
        }
    }
}

fn natural_range(fs: &[ModuleHandle], depth: i64) -> Result<(i64, i64)> {
    let mut lo = 0;
    let mut hi = 0;
    for f in fs {
        let (t, _) = factor_table(f, depth)?;
        lo += t.entries.keys().next().copied().unwrap_or(0);
        hi += t.entries.keys().next_back().copied().unwrap_or(0);
    }
    Ok((lo, hi))
}

fn tensor_table(fs: &[ModuleHandle], (lo, hi): (i64, i64)) -> Result<WeightTable> {
    // highest-weight factors need depths reaching the bottom of the range
    // once the other factors contribute their largest offsets
    let mut two_sided_top = 0;
    for f in fs {
        if let ModuleHandle::IntSeriesEval { spec, .. } = f {
            two_sided_top += spec.window.1;
        }
    }
    let depth = (two_sided_top - lo).max(0);
    let mut base = Scalar::zero();
    let mut truncated = false;
    let mut acc: BTreeMap<i64, u64> = BTreeMap::from([(0, 1)]);
    for f in fs {
        let (t, trunc) = factor_table(f, depth)?;
        base += &t.base;
        truncated |= trunc;
        let mut next: BTreeMap<i64, u64> = BTreeMap::new();
        for (o1, m1) in &acc {
            for (o2, m2) in &t.entries {
                let v = m1 * m2.value();
                if v > 0 {
                    *next.entry(o1 + o2).or_insert(0) += v;
                }
            }
        }
        acc = next;
    }
    let entries = (lo..=hi)
        .map(|o| {
            let v = acc.get(&o).copied().unwrap_or(0);
            (o, if truncated { Multiplicity::LowerBound(v) } else { Multiplicity::Exact(v) })
        })
        .collect();
    Ok(WeightTable { base, entries, zero_weight: BTreeMap::new(), truncated })
}
