//! PBW basis of `U(V_-)` and straightening into it.
//!
//! A letter `(m, b)` stands for `d_{-m}⊗e_b`. Letters are ordered by
//! `(m, b) ≻ (m', b')` iff `m > m'`, or `m = m'` and `b` precedes `b'` in
//! the algebra basis order (index 0 comes first, i.e. is largest). Monomials
//! store their letters in non-increasing order and compare by length, then
//! depth tuple, then color tuple.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use crate::algebra::{same_algebra, Algebra};
use crate::error::{Error, Result};
use crate::liealg::{check_mode, LieElement};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub depth: u32,
    pub color: usize,
}

impl Ord for Letter {
    fn cmp(&self, o: &Self) -> Ordering {
        self.depth.cmp(&o.depth).then(o.color.cmp(&self.color))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Ordered product of letters, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PbwMonomial {
    factors: Vec<Letter>,
}

impl Ord for PbwMonomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.factors
            .len()
            .cmp(&o.factors.len())
            .then_with(|| {
                let a = self.factors.iter().map(|l| l.depth);
                a.cmp(o.factors.iter().map(|l| l.depth))
            })
            .then_with(|| {
                let a = self.factors.iter().map(|l| std::cmp::Reverse(l.color));
                a.cmp(o.factors.iter().map(|l| std::cmp::Reverse(l.color)))
            })
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl PbwMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// Sorts the letters into PBW order. Only valid when the letters
    /// commute, e.g. for enumerating the basis.
    pub fn from_letters(mut factors: Vec<Letter>) -> Self {
        factors.sort_by(|a, b| b.cmp(a));
        PbwMonomial { factors }
    }

    pub fn factors(&self) -> &[Letter] {
        &self.factors
    }

    pub fn height(&self) -> usize {
        self.factors.len()
    }

    /// Sum of depths; the monomial has weight `-depth`.
    pub fn depth(&self) -> u32 {
        self.factors.iter().map(|l| l.depth).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    fn prepend(&self, l: Letter) -> Self {
        let mut factors = Vec::with_capacity(self.factors.len() + 1);
        factors.push(l);
        factors.extend_from_slice(&self.factors);
        PbwMonomial { factors }
    }

    fn tail(&self) -> Self {
        PbwMonomial { factors: self.factors[1..].to_vec() }
    }

    /// `d[-2]*t . d[-1]*1`; with `sign = 1` the letters are shown as raising
    /// operators `d[+m]`.
    pub fn display(&self, alg: &Algebra) -> String {
        self.display_signed(alg, -1)
    }

    pub fn display_signed(&self, alg: &Algebra, sign: i64) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|l| format!("d[{}]*{}", sign * l.depth as i64, alg.label(l.color)))
            .collect::<Vec<_>>()
            .join(" . ")
    }
}

/// Finite linear combination of PBW monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnvElement {
    terms: BTreeMap<PbwMonomial, Scalar>,
}

impl EnvElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(PbwMonomial::one(), scalar::one())
    }

    pub fn monomial(m: PbwMonomial, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn from_terms(it: impl IntoIterator<Item = (PbwMonomial, Scalar)>) -> Self {
        let mut e = Self::zero();
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &PbwMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, o: &EnvElement, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&self, o: &EnvElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &scalar::one());
        out
    }

    pub fn sub(&self, o: &EnvElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &-scalar::one());
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    /// Depths present, i.e. the negated weights.
    pub fn depths(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(PbwMonomial::depth).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Splits into homogeneous pieces by depth.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, EnvElement> {
        let mut out: BTreeMap<u32, EnvElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.depth()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn display(&self, alg: &Algebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i == 0, neg) {
                (true, true) => s.push('-'),
                (true, false) => {}
                (false, true) => s.push_str(" - "),
                (false, false) => s.push_str(" + "),
            }
            let body = m.display(alg);
            if m.is_one() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&body);
            } else {
                s.push_str(&format!("{mag}*({body})"));
            }
        }
        s
    }
}

/// `(height, hm)` with the conventions `height 0 = -1`, `hm 0 = 0`.
pub fn height_hm(x: &EnvElement) -> (i64, EnvElement) {
    match x.terms.iter().next_back() {
        None => (-1, EnvElement::zero()),
        Some((m, c)) => (m.height() as i64, EnvElement::monomial(m.clone(), c.clone())),
    }
}

/// Straightens products in `U(V_-)` for one algebra, memoizing
/// `letter · monomial` products.
pub struct Straightener {
    alg: Arc<Algebra>,
    cache: Mutex<HashMap<(Letter, PbwMonomial), EnvElement>>,
}

impl Straightener {
    pub fn new(alg: &Arc<Algebra>) -> Self {
        Straightener { alg: alg.clone(), cache: Mutex::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    /// `letter · m` in the PBW basis.
    pub fn left_mul(&self, l: Letter, m: &PbwMonomial) -> Result<EnvElement> {
        let Some(&first) = m.factors.first() else {
            return Ok(EnvElement::monomial(m.prepend(l), scalar::one()));
        };
        if l >= first {
            return Ok(EnvElement::monomial(m.prepend(l), scalar::one()));
        }
        let key = (l, m.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        // l·y·R = y·(l·R) + [l, y]·R, and y dominates every letter produced
        // by l·R because l ≺ y and R ⪯ y.
        let rest = m.tail();
        let mut out = EnvElement::zero();
        for (mono, c) in &self.left_mul(l, &rest)?.terms {
            out.add_term(mono.prepend(first), c.clone());
        }
        // [d_{-a}⊗e_i, d_{-b}⊗e_j] = (a - b) d_{-(a+b)}⊗e_i e_j
        let (a, b) = (l.depth as i64, first.depth as i64);
        if a != b {
            check_mode(a + b)?;
            let coef = scalar::int(a - b);
            for (k, s) in self.alg.mul_basis(l.color, first.color)? {
                let big = Letter { depth: (a + b) as u32, color: k };
                out.add_scaled(&self.left_mul(big, &rest)?, &(&coef * s));
            }
        }
        self.cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// `letter · x` for an arbitrary `x ∈ U(V_-)`.
    pub fn left_mul_env(&self, l: Letter, x: &EnvElement) -> Result<EnvElement> {
        let mut out = EnvElement::zero();
        for (m, c) in &x.terms {
            out.add_scaled(&self.left_mul(l, m)?, c);
        }
        Ok(out)
    }

    /// `y · x` for `y ∈ V_-`.
    pub fn apply_lowering(&self, y: &LieElement, x: &EnvElement) -> Result<EnvElement> {
        let mut out = EnvElement::zero();
        for (l, s) in lowering_letters(y)? {
            out.add_scaled(&self.left_mul_env(l, x)?, &s);
        }
        Ok(out)
    }

    /// Image of the word `w_1 w_2 ... w_r` in the PBW basis.
    pub fn straighten(&self, word: &[LieElement]) -> Result<EnvElement> {
        for y in word {
            if !same_algebra(&self.alg, y.algebra()) {
                return Err(Error::AlgebraMismatch);
            }
        }
        let mut acc = EnvElement::one();
        for y in word.iter().rev() {
            acc = self.apply_lowering(y, &acc)?;
        }
        Ok(acc)
    }

    /// Product `x · y` of two elements of `U(V_-)`.
    pub fn multiply(&self, x: &EnvElement, y: &EnvElement) -> Result<EnvElement> {
        let mut out = EnvElement::zero();
        for (m, c) in &x.terms {
            let mut acc = y.clone();
            for l in m.factors.iter().rev() {
                acc = self.left_mul_env(*l, &acc)?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }
}

/// Decomposes `y ∈ V_-` into letters with coefficients.
pub fn lowering_letters(y: &LieElement) -> Result<Vec<(Letter, Scalar)>> {
    if !y.c_part().is_zero() {
        return Err(Error::NotLowering(0));
    }
    let mut out = Vec::new();
    for (n, f) in y.d_part() {
        if *n >= 0 {
            return Err(Error::NotLowering(*n));
        }
        for (k, c) in f.coords() {
            out.push((Letter { depth: (-n) as u32, color: *k }, c.clone()));
        }
    }
    Ok(out)
}

/// One-shot straightening with a fresh cache.
pub fn straighten(word: &[LieElement]) -> Result<EnvElement> {
    let Some(first) = word.first() else {
        return Ok(EnvElement::one());
    };
    Straightener::new(first.algebra()).straighten(word)
}

/// Basis indices used as PBW colors: all of them for finite algebras, the
/// exponents in `window` for windowed ones.
pub fn colors(alg: &Algebra, window: Option<(i64, i64)>) -> Result<Vec<usize>> {
    if alg.is_finite() {
        return Ok((0..alg.dim()).collect());
    }
    let (lo, hi) = window.ok_or(Error::MissingWindow)?;
    (lo..=hi).map(|e| alg.index_of_exponent(e)).collect()
}

/// All PBW monomials of depth `n` over the given colors, ≻-descending.
pub fn pbw_basis(n: u32, colors: &[usize]) -> Vec<PbwMonomial> {
    let mut letters: Vec<Letter> = (1..=n)
        .flat_map(|d| colors.iter().map(move |&c| Letter { depth: d, color: c }))
        .collect();
    letters.sort_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(letters: &[Letter], start: usize, left: u32, cur: &mut Vec<Letter>, out: &mut Vec<PbwMonomial>) {
        if left == 0 {
            out.push(PbwMonomial { factors: cur.clone() });
            return;
        }
        for i in start..letters.len() {
            if letters[i].depth <= left {
                cur.push(letters[i]);
                rec(letters, i, left - letters[i].depth, cur, out);
                cur.pop();
            }
        }
    }
    rec(&letters, 0, n, &mut cur, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Coefficient of `q^n` in `Π_{k≥1} (1 - q^k)^{-colors}`.
pub fn colored_partition_count(n: u32, colors: usize) -> u64 {
    let n = n as usize;
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for _ in 0..colors {
            for j in k..=n {
                p[j] += p[j - k];
            }
        }
    }
    p[n]
}
