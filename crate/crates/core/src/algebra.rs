//! Commutative coefficient algebras `A`, their ideals, quotients and local
//! (CRT) decompositions.
//!
//! Four presentations are supported:
//!
//! * `structure_constants`: a finite basis with an explicit product tensor;
//! * `product_local`: `Q[t]/(prod_i (t - a_i)^{n_i})` with monomial basis
//!   `1, t, ..., t^{N-1}`;
//! * `polynomial` and `laurent`: `Q[t]` and `Q[t, t^-1]` restricted to a
//!   degree window. Products leaving the window raise
//!   [`Error::WindowOverflow`]; nothing is ever silently truncated.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Row};
use crate::poly::Poly;
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    StructureConstants,
    ProductLocal,
    Polynomial,
    Laurent,
}

impl AlgebraKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::StructureConstants => "structure_constants",
            AlgebraKind::ProductLocal => "product_local",
            AlgebraKind::Polynomial => "polynomial",
            AlgebraKind::Laurent => "laurent",
        }
    }
}

/// One factor `Q[t]/((t - point)^order)` of a product_local presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub point: Scalar,
    pub order: u32,
}

type Sparse = Vec<(usize, Scalar)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    kind: AlgebraKind,
    labels: Vec<String>,
    /// `table[i][j]` = coordinates of `e_i e_j` (finite kinds only).
    table: Vec<Vec<Sparse>>,
    unit: Sparse,
    factors: Vec<LocalFactor>,
    /// Defining polynomial when the basis is `1, t, ..., t^{N-1}`.
    modulus: Option<Poly>,
    window: (i64, i64),
}

fn monomial_label(e: i64) -> String {
    match e {
        0 => "1".into(),
        1 => "t".into(),
        _ => format!("t^{e}"),
    }
}

impl Algebra {
    /// The ground field itself, one basis vector labelled `1`.
    pub fn rationals() -> Arc<Algebra> {
        Arc::new(Algebra {
            kind: AlgebraKind::StructureConstants,
            labels: vec!["1".into()],
            table: vec![vec![vec![(0, scalar::one())]]],
            unit: vec![(0, scalar::one())],
            factors: vec![],
            modulus: None,
            window: (0, 0),
        })
    }

    /// Builds an algebra from a dense product tensor `tensor[i][j][k]`
    /// (`e_i e_j = sum_k tensor[i][j][k] e_k`), checking commutativity,
    /// associativity and the unit law.
    pub fn structure_constants(
        labels: Vec<String>,
        unit: Vec<Scalar>,
        tensor: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Arc<Algebra>> {
        let d = labels.len();
        if d == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if unit.len() != d || tensor.len() != d {
            return Err(Error::InvalidAlgebra(format!(
                "unit and tensor must have dimension {d}"
            )));
        }
        let mut table = Vec::with_capacity(d);
        for (i, plane) in tensor.iter().enumerate() {
            if plane.len() != d || plane.iter().any(|r| r.len() != d) {
                return Err(Error::InvalidAlgebra(format!("tensor[{i}] has wrong shape")));
            }
            table.push(plane.iter().map(|r| to_sparse(r)).collect());
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) || l == "c" || l.starts_with("d[") {
                return Err(Error::InvalidAlgebra(format!("bad or duplicate label {l:?}")));
            }
        }
        let alg = Algebra {
            kind: AlgebraKind::StructureConstants,
            labels,
            table,
            unit: to_sparse(&unit),
            factors: vec![],
            modulus: None,
            window: (0, 0),
        };
        alg.check_axioms()?;
        Ok(Arc::new(alg))
    }

    /// `Q[t]/(prod (t - a_i)^{n_i})` with basis `1, t, ..., t^{N-1}`.
    pub fn product_local(factors: Vec<LocalFactor>) -> Result<Arc<Algebra>> {
        if factors.is_empty() {
            return Err(Error::InvalidAlgebra("product_local needs at least one factor".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.order == 0 {
                return Err(Error::InvalidAlgebra(format!("factor {i} has order 0")));
            }
            if factors[..i].iter().any(|g| g.point == f.point) {
                return Err(Error::InvalidAlgebra(format!(
                    "points must be pairwise distinct (repeated {})",
                    f.point
                )));
            }
        }
        let modulus = factors
            .iter()
            .fold(Poly::one(), |acc, f| acc.mul(&Poly::linear(&f.point).pow(f.order)));
        Ok(Arc::new(Self::monomial_quotient(
            AlgebraKind::ProductLocal,
            modulus,
            factors,
        )))
    }

    /// `Q[t]/(p)` for a monic non-constant `p`; product_local when `p` splits
    /// over the rationals, otherwise structure constants on the monomial basis.
    pub fn from_modulus(p: &Poly) -> Result<Arc<Algebra>> {
        let p = p.monic();
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::ImproperIdeal);
        }
        let (roots, rest) = p.rational_roots();
        if rest.degree() == Some(0) {
            let factors = roots
                .into_iter()
                .map(|(point, order)| LocalFactor { point, order })
                .collect();
            return Self::product_local(factors);
        }
        Ok(Arc::new(Self::monomial_quotient(
            AlgebraKind::StructureConstants,
            p,
            vec![],
        )))
    }

    fn monomial_quotient(kind: AlgebraKind, modulus: Poly, factors: Vec<LocalFactor>) -> Algebra {
        let n = modulus.degree().unwrap();
        let reduce = |k: usize| -> Sparse {
            let r = Poly::monomial(k, scalar::one()).rem(&modulus);
            to_sparse(r.coeffs())
        };
        let powers: Vec<Sparse> = (0..2 * n - 1).map(reduce).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| powers[i + j].clone()).collect())
            .collect();
        Algebra {
            kind,
            labels: (0..n as i64).map(monomial_label).collect(),
            table,
            unit: vec![(0, scalar::one())],
            factors,
            modulus: Some(modulus),
            window: (0, 0),
        }
    }

    /// `Q[t]` with exponents restricted to `[0, hi]`.
    pub fn polynomial(hi: i64) -> Result<Arc<Algebra>> {
        Self::windowed(AlgebraKind::Polynomial, 0, hi)
    }

    /// `Q[t, t^-1]` with exponents restricted to `[lo, hi]`, `lo <= 0 <= hi`.
    pub fn laurent(lo: i64, hi: i64) -> Result<Arc<Algebra>> {
        Self::windowed(AlgebraKind::Laurent, lo, hi)
    }

    fn windowed(kind: AlgebraKind, lo: i64, hi: i64) -> Result<Arc<Algebra>> {
        if lo > 0 || hi < 0 {
            return Err(Error::InvalidAlgebra(format!(
                "window [{lo}, {hi}] must contain the exponent 0"
            )));
        }
        if kind == AlgebraKind::Polynomial && lo != 0 {
            return Err(Error::InvalidAlgebra("polynomial windows start at 0".into()));
        }
        Ok(Arc::new(Algebra {
            kind,
            labels: vec![],
            table: vec![],
            unit: vec![((-lo) as usize, scalar::one())],
            factors: vec![],
            modulus: None,
            window: (lo, hi),
        }))
    }

    fn check_axioms(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::InvalidAlgebra(format!("e{i}·e{j} != e{j}·e{i}")));
                }
            }
        }
        for i in 0..d {
            let ue = self.mul_sparse(&self.unit, &[(i, scalar::one())]);
            if ue != vec![(i, scalar::one())] {
                return Err(Error::InvalidAlgebra(format!("unit does not fix basis vector {i}")));
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = self.mul_sparse(&self.table[i][j], &[(k, scalar::one())]);
                    let right = self.mul_sparse(&[(i, scalar::one())], &self.table[j][k]);
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn mul_sparse(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> Sparse {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in &self.table[*i][*j] {
                    *acc.entry(*k).or_insert_with(Scalar::zero) += a * b * c;
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, AlgebraKind::StructureConstants | AlgebraKind::ProductLocal)
    }

    /// Number of basis vectors; for windowed kinds, the window size.
    pub fn dim(&self) -> usize {
        if self.is_finite() {
            self.labels.len()
        } else {
            (self.window.1 - self.window.0 + 1) as usize
        }
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        (!self.is_finite()).then_some(self.window)
    }

    pub fn factors(&self) -> &[LocalFactor] {
        &self.factors
    }

    pub fn modulus(&self) -> Option<&Poly> {
        self.modulus.as_ref()
    }

    /// Basis is `1, t, t^2, ...` (possibly shifted for laurent): elements can be
    /// read as polynomials in `t`.
    pub fn has_monomial_basis(&self) -> bool {
        self.modulus.is_some() || !self.is_finite()
    }

    pub fn label(&self, i: usize) -> String {
        if self.is_finite() {
            self.labels[i].clone()
        } else {
            monomial_label(self.exponent(i))
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        if self.is_finite() {
            return self.labels.iter().position(|l| l == label);
        }
        let e = match label {
            "1" => 0,
            "t" => 1,
            _ => label.strip_prefix("t^")?.trim_matches(|c| c == '(' || c == ')').parse().ok()?,
        };
        self.index_of_exponent(e).ok()
    }

    /// Exponent of basis vector `i` (windowed kinds, and monomial-basis quotients).
    pub fn exponent(&self, i: usize) -> i64 {
        if self.is_finite() {
            i as i64
        } else {
            self.window.0 + i as i64
        }
    }

    pub fn index_of_exponent(&self, e: i64) -> Result<usize> {
        let (lo, hi) = self.window;
        if self.is_finite() || e < lo || e > hi {
            return Err(Error::WindowOverflow { exponent: e, lo, hi });
        }
        Ok((e - lo) as usize)
    }

    pub fn unit_coords(&self) -> &[(usize, Scalar)] {
        &self.unit
    }

    /// Coordinates of `e_i e_j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> Result<Sparse> {
        if self.is_finite() {
            return Ok(self.table[i][j].clone());
        }
        let e = self.exponent(i) + self.exponent(j);
        Ok(vec![(self.index_of_exponent(e)?, scalar::one())])
    }

    /// Human-readable description of the basis order used by PBW monomials.
    pub fn basis_order(&self) -> &'static str {
        match self.kind {
            AlgebraKind::StructureConstants if self.modulus.is_none() => "input order",
            _ => "ascending degree",
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            AlgebraKind::ProductLocal => {
                let parts: Vec<String> = self
                    .factors
                    .iter()
                    .map(|f| {
                        let base = if f.point.is_zero() {
                            "t".to_string()
                        } else if self.factors.len() == 1 && f.order == 1 {
                            Poly::linear(&f.point).to_string()
                        } else {
                            format!("({})", Poly::linear(&f.point))
                        };
                        match f.order {
                            1 => base,
                            n => format!("{base}^{n}"),
                        }
                    })
                    .collect();
                format!("Q[t]/({})", parts.join("*"))
            }
            AlgebraKind::StructureConstants => match &self.modulus {
                Some(m) => format!("Q[t]/({m})"),
                None => format!("structure constants, dim {}", self.dim()),
            },
            AlgebraKind::Polynomial => format!("Q[t], degrees [{}, {}]", self.window.0, self.window.1),
            AlgebraKind::Laurent => {
                format!("Q[t,t^-1], degrees [{}, {}]", self.window.0, self.window.1)
            }
        }
    }
}

fn to_sparse(v: &[Scalar]) -> Sparse {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An element of `A` as sparse coordinates over the algebra basis.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    alg: Arc<Algebra>,
    coords: BTreeMap<usize, Scalar>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.coords == other.coords
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        AlgebraElement { alg: alg.clone(), coords: BTreeMap::new() }
    }

    pub fn unit(alg: &Arc<Algebra>) -> Self {
        Self::from_sparse(alg, alg.unit.iter().cloned())
    }

    pub fn scalar(alg: &Arc<Algebra>, s: Scalar) -> Self {
        Self::unit(alg).scale(&s)
    }

    pub fn basis(alg: &Arc<Algebra>, i: usize) -> Self {
        assert!(i < alg.dim(), "basis index {i} out of range");
        Self::from_sparse(alg, [(i, scalar::one())])
    }

    pub fn from_sparse(alg: &Arc<Algebra>, it: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut coords = BTreeMap::new();
        for (i, v) in it {
            assert!(i < alg.dim(), "basis index {i} out of range");
            if !v.is_zero() {
                let e = coords.entry(i).or_insert_with(Scalar::zero);
                *e += v;
                if e.is_zero() {
                    coords.remove(&i);
                }
            }
        }
        AlgebraElement { alg: alg.clone(), coords }
    }

    pub fn from_dense(alg: &Arc<Algebra>, v: &[Scalar]) -> Self {
        Self::from_sparse(alg, v.iter().cloned().enumerate())
    }

    /// Reads a polynomial in `t` into the algebra: reduced modulo the defining
    /// polynomial for monomial-basis quotients, window-checked for windowed kinds.
    pub fn from_poly(alg: &Arc<Algebra>, p: &Poly) -> Result<Self> {
        if let Some(m) = alg.modulus() {
            return Ok(Self::from_dense(alg, p.rem(m).coeffs()));
        }
        if alg.is_finite() {
            return Err(Error::UnsupportedKind(
                "structure-constants algebra has no generator t".into(),
            ));
        }
        let mut out = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.push((alg.index_of_exponent(k as i64)?, c.clone()));
            }
        }
        Ok(Self::from_sparse(alg, out))
    }

    /// `t^e` in a windowed or monomial-basis algebra.
    pub fn t_power(alg: &Arc<Algebra>, e: i64) -> Result<Self> {
        if alg.is_finite() {
            if e < 0 {
                return Err(Error::UnsupportedKind("negative powers of t".into()));
            }
            return Self::from_poly(alg, &Poly::monomial(e as usize, scalar::one()));
        }
        Ok(Self::basis(alg, alg.index_of_exponent(e)?))
    }

    /// Reads the element as `t^shift · p(t)`; fails for structure-constants
    /// algebras without a monomial basis.
    pub fn to_poly(&self) -> Result<(i64, Poly)> {
        if !self.alg.has_monomial_basis() {
            return Err(Error::UnsupportedKind(
                "structure-constants algebra has no generator t".into(),
            ));
        }
        let shift = if self.alg.is_finite() { 0 } else { self.alg.window.0 };
        let len = self.coords.keys().last().map_or(0, |k| k + 1);
        let mut v = vec![Scalar::zero(); len];
        for (k, c) in &self.coords {
            v[*k] = c.clone();
        }
        let (extra, p) = Poly::new(v).split_t_power();
        Ok((shift + extra as i64, p))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn coords(&self) -> &BTreeMap<usize, Scalar> {
        &self.coords
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coords.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn dense(&self) -> Row {
        (0..self.alg.dim()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// `Some(s)` when the element equals `s·1`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let unit = &self.alg.unit;
        let (k, u) = unit.first()?;
        let s = self.coeff(*k) / u;
        (Self::scalar(&self.alg, s.clone()) == *self).then_some(s)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if same_algebra(&self.alg, &o.alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(Self::from_sparse(
            &self.alg,
            self.coords.iter().chain(&o.coords).map(|(k, v)| (*k, v.clone())),
        ))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_sparse(&self.alg, self.coords.iter().map(|(k, v)| (*k, v * s)))
    }

    /// Exact product in `A`.
    pub fn multiply(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut acc: Vec<(usize, Scalar)> = Vec::new();
        for (i, a) in &self.coords {
            for (j, b) in &o.coords {
                let ab = a * b;
                for (k, c) in self.alg.mul_basis(*i, *j)? {
                    acc.push((k, &ab * c));
                }
            }
        }
        Ok(Self::from_sparse(&self.alg, acc))
    }

    /// Value at `t = point` for monomial-basis algebras.
    pub fn evaluate_at(&self, point: &Scalar) -> Result<Scalar> {
        let (shift, p) = self.to_poly()?;
        if shift < 0 && point.is_zero() {
            return Err(Error::InvalidModule("cannot evaluate t^-1 at 0".into()));
        }
        let base = p.eval(point);
        let tp = if shift >= 0 {
            num_traits::pow(point.clone(), shift as usize)
        } else {
            num_traits::pow(point.recip(), (-shift) as usize)
        };
        Ok(base * tp)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().rev() {
            let label = self.alg.label(*k);
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if label == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}*{label}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum IdealRepr {
    /// Reduced echelon basis of the subspace (finite kinds).
    Subspace(Echelon),
    /// Monic generator; zero polynomial for the zero ideal (windowed kinds).
    Principal(Poly),
}

/// An ideal of `A`. Finite-dimensional algebras store a reduced echelon
/// basis, which makes equality canonical; `Q[t]` and `Q[t, t^-1]` store a
/// monic generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    alg: Arc<Algebra>,
    repr: IdealRepr,
}

impl Ideal {
    pub fn zero(alg: &Arc<Algebra>) -> Ideal {
        let repr = if alg.is_finite() {
            IdealRepr::Subspace(linalg::rref(vec![], alg.dim()))
        } else {
            IdealRepr::Principal(Poly::zero())
        };
        Ideal { alg: alg.clone(), repr }
    }

    pub fn whole(alg: &Arc<Algebra>) -> Ideal {
        ideal_closure(&[AlgebraElement::unit(alg)]).expect("unit generates A")
    }

    /// Wraps an already row-reduced, multiplication-stable subspace.
    pub(crate) fn from_echelon(alg: &Arc<Algebra>, ech: Echelon) -> Ideal {
        Ideal { alg: alg.clone(), repr: IdealRepr::Subspace(ech) }
    }

    /// `(p)` in `Q[t]` or `Q[t, t^-1]`.
    pub fn principal(alg: &Arc<Algebra>, p: &Poly) -> Result<Ideal> {
        if alg.is_finite() {
            return ideal_closure(&[AlgebraElement::from_poly(alg, p)?]);
        }
        Ok(Ideal { alg: alg.clone(), repr: IdealRepr::Principal(normalize_generator(&alg, p)) })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            IdealRepr::Subspace(e) => e.rank() == 0,
            IdealRepr::Principal(p) => p.is_zero(),
        }
    }

    pub fn is_whole(&self) -> bool {
        match &self.repr {
            IdealRepr::Subspace(e) => e.rank() == self.alg.dim(),
            IdealRepr::Principal(p) => p.degree() == Some(0),
        }
    }

    /// Basis matrix; unavailable for ideals of infinite-dimensional algebras.
    pub fn basis_rows(&self) -> Result<&[Row]> {
        match &self.repr {
            IdealRepr::Subspace(e) => Ok(&e.rows),
            IdealRepr::Principal(_) => Err(Error::InfiniteDimensionalAlgebra),
        }
    }

    pub fn echelon(&self) -> Result<&Echelon> {
        match &self.repr {
            IdealRepr::Subspace(e) => Ok(e),
            IdealRepr::Principal(_) => Err(Error::InfiniteDimensionalAlgebra),
        }
    }

    pub fn basis_elements(&self) -> Result<Vec<AlgebraElement>> {
        Ok(self
            .basis_rows()?
            .iter()
            .map(|r| AlgebraElement::from_dense(&self.alg, r))
            .collect())
    }

    pub fn dim(&self) -> Result<usize> {
        Ok(self.basis_rows()?.len())
    }

    /// `dim A/I`, `None` when infinite.
    pub fn codim(&self) -> Option<usize> {
        match &self.repr {
            IdealRepr::Subspace(e) => Some(self.alg.dim() - e.rank()),
            IdealRepr::Principal(p) => p.degree(),
        }
    }

    /// Single generator, when the ideal is principal in `Q[t]`-style algebras.
    pub fn generator(&self) -> Option<Poly> {
        match &self.repr {
            IdealRepr::Principal(p) => Some(p.clone()),
            IdealRepr::Subspace(e) => {
                let m = self.alg.modulus()?;
                let g = e.rows.iter().fold(m.clone(), |g, r| g.gcd(&Poly::new(r.clone())));
                Some(g)
            }
        }
    }

    pub fn contains(&self, f: &AlgebraElement) -> Result<bool> {
        if !same_algebra(&self.alg, f.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        match &self.repr {
            IdealRepr::Subspace(e) => Ok(e.contains(&f.dense())),
            IdealRepr::Principal(p) => {
                let (_, q) = f.to_poly()?;
                Ok(p.divides(&q))
            }
        }
    }

    /// Checks `b·e_j ∈ I` for every basis row `b` and algebra basis vector `e_j`.
    pub fn is_multiplication_stable(&self) -> Result<bool> {
        let rows = self.basis_rows()?;
        for r in rows {
            let b = AlgebraElement::from_dense(&self.alg, r);
            for j in 0..self.alg.dim() {
                if !self.contains(&b.multiply(&AlgebraElement::basis(&self.alg, j))?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_subset_of(&self, other: &Ideal) -> Result<bool> {
        if !same_algebra(&self.alg, &other.alg) {
            return Err(Error::AlgebraMismatch);
        }
        match (&self.repr, &other.repr) {
            (IdealRepr::Principal(a), IdealRepr::Principal(b)) => Ok(b.divides(a)),
            _ => {
                for f in self.basis_elements()? {
                    if !other.contains(&f)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.generator() {
            return write!(f, "({g})");
        }
        let els = self.basis_elements().unwrap_or_default();
        let parts: Vec<String> = els.iter().map(|e| e.to_string()).collect();
        write!(f, "span{{{}}}", parts.join(", "))
    }
}

fn normalize_generator(alg: &Algebra, p: &Poly) -> Poly {
    match alg.kind {
        AlgebraKind::Laurent => p.split_t_power().1.monic(),
        _ => p.monic(),
    }
}

/// Smallest ideal containing `gens`. For finite algebras the span is grown
/// by multiplying with every basis vector until it stabilizes; for `Q[t]`
/// and `Q[t, t^-1]` the result is the principal ideal of the gcd.
pub fn ideal_closure(gens: &[AlgebraElement]) -> Result<Ideal> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidAlgebra("ideal_closure needs at least one generator".into()));
    };
    let alg = first.algebra().clone();
    if gens.iter().any(|g| !same_algebra(&alg, g.algebra())) {
        return Err(Error::AlgebraMismatch);
    }
    if !alg.is_finite() {
        let mut g = Poly::zero();
        for x in gens {
            g = g.gcd(&x.to_poly()?.1);
        }
        return Ok(Ideal { repr: IdealRepr::Principal(normalize_generator(&alg, &g)), alg });
    }
    let n = alg.dim();
    let mut ech = linalg::rref(gens.iter().map(|g| g.dense()).collect(), n);
    loop {
        let mut rows = ech.rows.clone();
        for r in &ech.rows {
            let b = AlgebraElement::from_dense(&alg, r);
            for j in 0..n {
                rows.push(b.multiply(&AlgebraElement::basis(&alg, j))?.dense());
            }
        }
        let next = linalg::rref(rows, n);
        if next.rank() == ech.rank() {
            return Ok(Ideal { alg, repr: IdealRepr::Subspace(next) });
        }
        ech = next;
    }
}

pub fn ideal_sum(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    if !same_algebra(&i.alg, &j.alg) {
        return Err(Error::AlgebraMismatch);
    }
    match (&i.repr, &j.repr) {
        (IdealRepr::Principal(a), IdealRepr::Principal(b)) => Ideal::principal(&i.alg, &a.gcd(b)),
        (IdealRepr::Subspace(a), IdealRepr::Subspace(b)) => {
            let rows = a.rows.iter().chain(&b.rows).cloned().collect();
            Ok(Ideal::from_echelon(&i.alg, linalg::rref(rows, i.alg.dim())))
        }
        _ => unreachable!("ideals of one algebra share a representation"),
    }
}

pub fn ideal_intersection(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    if !same_algebra(&i.alg, &j.alg) {
        return Err(Error::AlgebraMismatch);
    }
    match (&i.repr, &j.repr) {
        (IdealRepr::Principal(a), IdealRepr::Principal(b)) => Ideal::principal(&i.alg, &a.lcm(b)),
        (IdealRepr::Subspace(a), IdealRepr::Subspace(b)) => {
            Ok(Ideal::from_echelon(&i.alg, linalg::intersect(a, b)))
        }
        _ => unreachable!("ideals of one algebra share a representation"),
    }
}

/// `I·J`, spanned by pairwise products of basis vectors.
pub fn ideal_product(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    if !same_algebra(&i.alg, &j.alg) {
        return Err(Error::AlgebraMismatch);
    }
    match (&i.repr, &j.repr) {
        (IdealRepr::Principal(a), IdealRepr::Principal(b)) => Ideal::principal(&i.alg, &a.mul(b)),
        _ => {
            let mut prods = Vec::new();
            for a in i.basis_elements()? {
                for b in j.basis_elements()? {
                    prods.push(a.multiply(&b)?);
                }
            }
            if prods.is_empty() {
                return Ok(Ideal::zero(&i.alg));
            }
            ideal_closure(&prods)
        }
    }
}

pub fn ideal_power(i: &Ideal, n: u32) -> Result<Ideal> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("ideal_power needs a positive exponent".into()));
    }
    let mut acc = i.clone();
    for _ in 1..n {
        acc = ideal_product(&acc, i)?;
    }
    Ok(acc)
}

/// The algebra homomorphism `A -> A/I`.
#[derive(Debug, Clone)]
pub struct Projection {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    map: ProjectionMap,
}

#[derive(Debug, Clone)]
enum ProjectionMap {
    /// Image coordinates of each source basis vector, and the source basis
    /// vector lifting each target basis vector.
    Linear { images: Vec<Sparse>, section: Vec<usize> },
    /// Reduction of `t^k` modulo the generator (monomial-basis target).
    PolyMod(Poly),
}

impl Projection {
    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    /// A preimage of target basis vector `j`.
    pub fn lift(&self, j: usize) -> Result<AlgebraElement> {
        match &self.map {
            ProjectionMap::Linear { section, .. } => Ok(AlgebraElement::basis(&self.source, section[j])),
            ProjectionMap::PolyMod(_) => AlgebraElement::t_power(&self.source, j as i64),
        }
    }

    pub fn apply(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        if !same_algebra(&self.source, f.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        match &self.map {
            ProjectionMap::Linear { images, .. } => {
                let mut acc = Vec::new();
                for (i, c) in f.coords() {
                    acc.extend(images[*i].iter().map(|(k, v)| (*k, v * c)));
                }
                Ok(AlgebraElement::from_sparse(&self.target, acc))
            }
            ProjectionMap::PolyMod(m) => {
                let (shift, p) = f.to_poly()?;
                let tp = if shift >= 0 {
                    Poly::monomial(shift as usize, scalar::one())
                } else {
                    let inv = Poly::monomial(1, scalar::one())
                        .inverse_mod(m)
                        .ok_or_else(|| Error::UnsupportedKind("t is not invertible in the quotient".into()))?;
                    inv.pow((-shift) as u32).rem(m)
                };
                AlgebraElement::from_poly(&self.target, &p.mul(&tp).rem(m))
            }
        }
    }
}

/// `A/I` together with its projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: Arc<Algebra>,
    pub projection: Projection,
}

/// Quotient by a proper ideal of finite codimension. Monomial-basis algebras
/// yield `Q[t]/(g)` for the ideal's generator `g` (product_local when `g`
/// splits); other finite algebras get structure constants on the complement
/// of the ideal's pivot columns.
pub fn quotient_algebra(alg: &Arc<Algebra>, ideal: &Ideal) -> Result<Quotient> {
    if !same_algebra(alg, ideal.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if ideal.is_whole() {
        return Err(Error::ImproperIdeal);
    }
    if alg.has_monomial_basis() {
        let g = ideal.generator().expect("monomial-basis ideals are principal");
        if g.is_zero() {
            return Err(Error::InfiniteDimensionalAlgebra);
        }
        if alg.modulus() == Some(&g) {
            return Ok(Quotient {
                algebra: alg.clone(),
                projection: identity_projection(alg),
            });
        }
        let target = Algebra::from_modulus(&g)?;
        return Ok(Quotient {
            projection: Projection {
                source: alg.clone(),
                target: target.clone(),
                map: ProjectionMap::PolyMod(g),
            },
            algebra: target,
        });
    }
    let ech = ideal.echelon()?;
    let n = alg.dim();
    let mut is_pivot = vec![false; n];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let complement: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let project = |v: &[Scalar]| -> Vec<Scalar> {
        let r = ech.reduce(v);
        complement.iter().map(|&c| r[c].clone()).collect()
    };
    let images: Vec<Sparse> = (0..n)
        .map(|i| {
            let mut e = vec![Scalar::zero(); n];
            e[i] = scalar::one();
            to_sparse(&project(&e))
        })
        .collect();
    let m = complement.len();
    let mut tensor = vec![vec![vec![Scalar::zero(); m]; m]; m];
    for (a, &ca) in complement.iter().enumerate() {
        for (b, &cb) in complement.iter().enumerate() {
            let prod = AlgebraElement::basis(alg, ca).multiply(&AlgebraElement::basis(alg, cb))?;
            tensor[a][b] = project(&prod.dense());
        }
    }
    let unit = project(&AlgebraElement::unit(alg).dense());
    let labels = complement.iter().map(|&c| alg.label(c)).collect();
    let target = Algebra::structure_constants(labels, unit, tensor)?;
    Ok(Quotient {
        projection: Projection { source: alg.clone(), target: target.clone(), map: ProjectionMap::Linear { images, section: complement } },
        algebra: target,
    })
}

fn identity_projection(alg: &Arc<Algebra>) -> Projection {
    Projection {
        source: alg.clone(),
        target: alg.clone(),
        map: ProjectionMap::Linear {
            images: (0..alg.dim()).map(|i| vec![(i, scalar::one())]).collect(),
            section: (0..alg.dim()).collect(),
        },
    }
}

/// One local factor of a product_local algebra.
#[derive(Debug, Clone)]
pub struct LocalComponent {
    pub point: Scalar,
    pub order: u32,
    /// The maximal ideal `(t - point)` of `A`.
    pub maximal_ideal: Ideal,
    /// CRT idempotent: `≡ 1` modulo `(t - point)^order`, `≡ 0` modulo the other factors.
    pub idempotent: AlgebraElement,
}

pub fn local_decomposition(alg: &Arc<Algebra>) -> Result<Vec<LocalComponent>> {
    if alg.kind() != AlgebraKind::ProductLocal {
        return Err(Error::UnsupportedKind(format!(
            "local decomposition needs a product_local presentation, got {}",
            alg.kind().name()
        )));
    }
    let modulus = alg.modulus().expect("product_local has a modulus");
    let mut out = Vec::new();
    for f in alg.factors() {
        let q = Poly::linear(&f.point).pow(f.order);
        let cofactor = modulus.divrem(&q).0;
        let (g, _, v) = q.ext_gcd(&cofactor);
        debug_assert_eq!(g, Poly::one());
        let e = v.mul(&cofactor).rem(modulus);
        out.push(LocalComponent {
            point: f.point.clone(),
            order: f.order,
            maximal_ideal: ideal_closure(&[AlgebraElement::from_poly(alg, &Poly::linear(&f.point))?])?,
            idempotent: AlgebraElement::from_poly(alg, &e)?,
        });
    }
    Ok(out)
}
