//! Minimal linear recurrences of exact rational sequences.

use num_traits::Zero;

use crate::poly::Poly;
use crate::scalar::{self, Scalar};

/// Shortest linear recurrence found by Berlekamp–Massey.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    /// Connection polynomial `1 + c_1 x + ... + c_L x^L`, ascending.
    pub connection: Vec<Scalar>,
    pub length: usize,
}

impl Recurrence {
    /// The annihilating polynomial `p(t) = t^L C(1/t)`: for all valid `k`,
    /// `sum_i p_i s_{k+i} = 0`. Monic of degree `length`.
    pub fn annihilator(&self) -> Poly {
        let l = self.length;
        let mut coeffs = vec![Scalar::zero(); l + 1];
        for (j, c) in self.connection.iter().enumerate().take(l + 1) {
            coeffs[l - j] = c.clone();
        }
        Poly::new(coeffs)
    }
}

pub fn berlekamp_massey(s: &[Scalar]) -> Recurrence {
    let mut c = vec![scalar::one()];
    let mut b = vec![scalar::one()];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last_disc = scalar::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            if !c[i].is_zero() {
                d += &c[i] * &s[n - i];
            }
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let factor = &d / &last_disc;
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, Scalar::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] -= &factor * bi;
        }
        if 2 * l <= n {
            b = std::mem::replace(&mut c, next);
            l = n + 1 - l;
            last_disc = d;
            shift = 1;
        } else {
            c = next;
            shift += 1;
        }
    }
    c.resize(l + 1, Scalar::zero());
    Recurrence { connection: c, length: l }
}

/// True iff `sum_i p_i s_{k+i} = 0` for every `k` with `k + deg p < len(s)`.
pub fn annihilates(p: &Poly, s: &[Scalar]) -> bool {
    let Some(deg) = p.degree() else { return false };
    (0..s.len().saturating_sub(deg)).all(|k| {
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * &s[k + i])
            .sum::<Scalar>()
            .is_zero()
    })
}

/// Monic polynomial of least degree annihilating every sequence, if one of
/// degree `<= max_order` exists. Individual minimal polynomials come from
/// Berlekamp–Massey; the joint annihilator is their lcm, re-verified on the
/// full windows.
pub fn joint_annihilator(seqs: &[&[Scalar]], max_order: usize) -> Option<Poly> {
    let mut acc = Poly::one();
    for s in seqs {
        let rec = berlekamp_massey(s);
        if rec.length > max_order {
            return None;
        }
        acc = acc.lcm(&rec.annihilator());
    }
    if acc.degree()? > max_order {
        return None;
    }
    seqs.iter().all(|s| annihilates(&acc, s)).then_some(acc)
}
