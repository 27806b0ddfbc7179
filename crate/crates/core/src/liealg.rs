//! Elements of `Vir ⊗ A` and the graded bracket
//! `[d_m⊗f, d_n⊗g] = (n-m) d_{m+n}⊗fg + δ_{m,-n} (m³-m)/12 c⊗fg`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::algebra::{same_algebra, Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

static MODE_MAX: AtomicI64 = AtomicI64::new(64);

/// Largest admissible `|n|` for a mode `d_n`.
pub fn mode_max() -> i64 {
    MODE_MAX.load(Ordering::Relaxed)
}

pub fn set_mode_max(max: i64) {
    MODE_MAX.store(max.max(1), Ordering::Relaxed);
}

pub fn check_mode(n: i64) -> Result<()> {
    let max = mode_max();
    if n.abs() > max {
        Err(Error::ModeOutOfRange { mode: n, max })
    } else {
        Ok(())
    }
}

/// `(m³ - m)/12`.
pub fn central_coefficient(m: i64) -> Scalar {
    scalar::frac(m * m * m - m, 12)
}

/// Finite sum `Σ d_n⊗f_n + c⊗g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    alg: Arc<Algebra>,
    d: BTreeMap<i64, AlgebraElement>,
    c: AlgebraElement,
}

impl LieElement {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        LieElement { alg: alg.clone(), d: BTreeMap::new(), c: AlgebraElement::zero(alg) }
    }

    /// `d_n⊗f`.
    pub fn d(n: i64, f: AlgebraElement) -> Result<Self> {
        check_mode(n)?;
        let mut x = Self::zero(f.algebra());
        if !f.is_zero() {
            x.d.insert(n, f);
        }
        Ok(x)
    }

    /// `d_n⊗1`.
    pub fn d_unit(alg: &Arc<Algebra>, n: i64) -> Result<Self> {
        Self::d(n, AlgebraElement::unit(alg))
    }

    /// `c⊗g`.
    pub fn c(g: AlgebraElement) -> Self {
        let mut x = Self::zero(g.algebra());
        x.c = g;
        x
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn d_part(&self) -> &BTreeMap<i64, AlgebraElement> {
        &self.d
    }

    pub fn d_coeff(&self, n: i64) -> AlgebraElement {
        self.d.get(&n).cloned().unwrap_or_else(|| AlgebraElement::zero(&self.alg))
    }

    pub fn c_part(&self) -> &AlgebraElement {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_empty() && self.c.is_zero()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if same_algebra(&self.alg, &o.alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    fn add_d(&mut self, n: i64, f: &AlgebraElement) -> Result<()> {
        if f.is_zero() {
            return Ok(());
        }
        check_mode(n)?;
        let sum = match self.d.get(&n) {
            Some(g) => g.add(f)?,
            None => f.clone(),
        };
        if sum.is_zero() {
            self.d.remove(&n);
        } else {
            self.d.insert(n, sum);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = self.clone();
        for (n, f) in &o.d {
            out.add_d(*n, f)?;
        }
        out.c = out.c.add(&o.c)?;
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(&self.alg);
        }
        LieElement {
            alg: self.alg.clone(),
            d: self.d.iter().map(|(n, f)| (*n, f.scale(s))).collect(),
            c: self.c.scale(s),
        }
    }

    /// Multiplies every coefficient by `g ∈ A`.
    pub fn mul_coeff(&self, g: &AlgebraElement) -> Result<Self> {
        let mut out = Self::zero(&self.alg);
        for (n, f) in &self.d {
            out.add_d(*n, &f.multiply(g)?)?;
        }
        out.c = self.c.multiply(g)?;
        Ok(out)
    }

    /// Modes `n` carrying a nonzero `d_n` coefficient.
    pub fn modes(&self) -> impl Iterator<Item = i64> + '_ {
        self.d.keys().copied()
    }

    /// Homogeneous degree if the element lies in a single graded piece.
    pub fn degree(&self) -> Option<i64> {
        let mut modes: std::collections::BTreeSet<i64> = self.d.keys().copied().collect();
        if !self.c.is_zero() {
            modes.insert(0);
        }
        match modes.len() {
            1 => modes.first().copied(),
            _ => None,
        }
    }

    /// Applies `f ↦ h(f)` to every coefficient.
    pub fn map_coeffs(
        &self,
        target: &Arc<Algebra>,
        mut h: impl FnMut(&AlgebraElement) -> Result<AlgebraElement>,
    ) -> Result<Self> {
        let mut out = Self::zero(target);
        for (n, f) in &self.d {
            out.add_d(*n, &h(f)?)?;
        }
        out.c = h(&self.c)?;
        Ok(out)
    }
}

/// Bilinear extension of the basis bracket.
pub fn bracket(x: &LieElement, y: &LieElement) -> Result<LieElement> {
    x.check(y)?;
    let mut out = LieElement::zero(&x.alg);
    for (m, f) in &x.d {
        for (n, g) in &y.d {
            let fg = f.multiply(g)?;
            if fg.is_zero() {
                continue;
            }
            if m != n {
                out.add_d(m + n, &fg.scale(&scalar::int(n - m)))?;
            }
            if *m == -n {
                out.c = out.c.add(&fg.scale(&central_coefficient(*m)))?;
            }
        }
    }
    Ok(out)
}

/// One homogeneous piece of a [`LieElement`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeComponent {
    pub mode: i64,
    pub element: LieElement,
}

/// Splits `x` into graded pieces sorted by mode; `c⊗A` sits in mode 0.
pub fn grade_decompose(x: &LieElement) -> Vec<GradeComponent> {
    let mut modes: Vec<i64> = x.d.keys().copied().collect();
    if !x.c.is_zero() && !x.d.contains_key(&0) {
        modes.push(0);
        modes.sort_unstable();
    }
    modes
        .into_iter()
        .map(|m| {
            let mut e = LieElement::zero(&x.alg);
            if let Some(f) = x.d.get(&m) {
                e.d.insert(m, f.clone());
            }
            if m == 0 {
                e.c = x.c.clone();
            }
            GradeComponent { mode: m, element: e }
        })
        .collect()
}

/// A pair `(u, v)` with `[u, v] = d_n⊗f`, showing `Vir ⊗ A` is perfect in
/// every mode.
pub fn perfectness_witness(n: i64, f: &AlgebraElement) -> Result<(LieElement, LieElement)> {
    let alg = f.algebra();
    if n != 0 {
        let u = LieElement::d_unit(alg, 0)?.scale(&scalar::frac(1, n));
        Ok((u, LieElement::d(n, f.clone())?))
    } else {
        let u = LieElement::d_unit(alg, -1)?.scale(&scalar::frac(1, 2));
        Ok((u, LieElement::d(1, f.clone())?))
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    generator: &str,
    coeff: &AlgebraElement,
) -> fmt::Result {
    // a scalar multiple of 1 prints as `s*gen`, anything else as `gen*(f)`
    match coeff.as_scalar() {
        Some(s) => {
            let neg = s.is_negative();
            let mag = s.abs();
            match (*first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{generator}")?;
            } else {
                write!(f, "{mag}*{generator}")?;
            }
        }
        None => {
            if !*first {
                write!(f, " + ")?;
            }
            write!(f, "{generator}*({coeff})")?;
        }
    }
    *first = false;
    Ok(())
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, coeff) in &self.d {
            write_term(f, &mut first, &format!("d[{n}]"), coeff)?;
        }
        if !self.c.is_zero() {
            write_term(f, &mut first, "c", &self.c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LocalFactor;
    use crate::poly::Poly;
    use crate::scalar::int;

    fn q() -> Arc<Algebra> {
        Algebra::rationals()
    }

    fn dq(n: i64) -> LieElement {
        LieElement::d_unit(&q(), n).unwrap()
    }

    #[test]
    fn lowering_pair_into_d0() {
        let a = Algebra::product_local(vec![LocalFactor { point: int(0), order: 3 }]).unwrap();
        let f = AlgebraElement::from_poly(&a, &Poly::parse("t + 2").unwrap()).unwrap();
        let g = AlgebraElement::from_poly(&a, &Poly::parse("t").unwrap()).unwrap();
        let x = bracket(&LieElement::d(1, g.clone()).unwrap(), &LieElement::d(-1, f.clone()).unwrap())
            .unwrap();
        let expect = LieElement::d(0, g.multiply(&f).unwrap().scale(&int(-2))).unwrap();
        assert_eq!(x, expect);
    }

    #[test]
    fn mode_two_pair_has_half_central_term() {
        let x = bracket(&dq(2), &dq(-2)).unwrap();
        assert_eq!(x.to_string(), "-4*d[0] + 1/2*c");
        let y = bracket(&dq(3), &dq(-3)).unwrap();
        assert_eq!(y.to_string(), "-6*d[0] + 2*c");
    }

    #[test]
    fn central_elements_commute() {
        let c = LieElement::c(AlgebraElement::unit(&q()));
        for n in -3..=3 {
            assert!(bracket(&c, &dq(n)).unwrap().is_zero());
        }
    }

    #[test]
    fn grading_pieces() {
        let a = Algebra::product_local(vec![LocalFactor { point: int(0), order: 2 }]).unwrap();
        let t = AlgebraElement::basis(&a, 1);
        let x = LieElement::d_unit(&a, 2)
            .unwrap()
            .add(&LieElement::d(-1, t.clone()).unwrap())
            .unwrap()
            .add(&LieElement::c(AlgebraElement::unit(&a)))
            .unwrap();
        let parts = grade_decompose(&x);
        assert_eq!(parts.iter().map(|p| p.mode).collect::<Vec<_>>(), vec![-1, 0, 2]);
        assert!(!parts[1].element.c_part().is_zero());
        let sum = parts.iter().try_fold(LieElement::zero(&a), |acc, p| acc.add(&p.element)).unwrap();
        assert_eq!(sum, x);
        assert!(grade_decompose(&LieElement::zero(&a)).is_empty());
        let same_mode = bracket(&LieElement::d_unit(&a, 1).unwrap(), &LieElement::d(1, t).unwrap()).unwrap();
        assert!(grade_decompose(&same_mode).is_empty());
    }

    #[test]
    fn modes_are_bounded() {
        assert!(matches!(
            LieElement::d_unit(&q(), mode_max() + 1),
            Err(Error::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn perfect_in_low_modes() {
        let f = AlgebraElement::unit(&q());
        for n in -4..=4 {
            let (u, v) = perfectness_witness(n, &f).unwrap();
            assert_eq!(bracket(&u, &v).unwrap(), LieElement::d(n, f.clone()).unwrap());
        }
    }

    #[test]
    fn display_with_algebra_coefficients() {
        let a = Algebra::product_local(vec![LocalFactor { point: int(0), order: 2 }]).unwrap();
        let t = AlgebraElement::basis(&a, 1);
        let x = LieElement::d(-1, t).unwrap().add(&LieElement::c(AlgebraElement::scalar(&a, scalar::frac(1, 2)))).unwrap();
        assert_eq!(x.to_string(), "d[-1]*(t) + 1/2*c");
    }
}
