//! Independent oracles for integration tests. Nothing here calls into the
//! library's linear algebra, PBW or Verma code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mapvir::scalar::{self, Scalar};
use num_traits::Zero;

/// Rank by plain Gaussian elimination on a dense copy.
pub fn dense_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &pivot;
                for c in col..ncols {
                    let d = &f * &m[rank][c];
                    m[r][c] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficients of `Π_{k>=1} (1 - q^k)^{-d}` up to `q^n`, by repeated
/// multiplication with geometric series.
pub fn partition_series(n: usize, d: usize) -> Vec<u64> {
    let mut s = vec![0u64; n + 1];
    s[0] = 1;
    for k in 1..=n {
        for _ in 0..d {
            // multiply by 1/(1 - q^k) = 1 + q^k + q^2k + ...
            let prev = s.clone();
            for i in 0..=n {
                let mut acc = 0;
                let mut j = i as i64;
                while j >= 0 {
                    acc += prev[j as usize];
                    j -= k as i64;
                }
                s[i] = acc;
            }
        }
    }
    s
}

/// Partitions of `n` as non-decreasing part lists.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=left {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

pub type Vec0 = BTreeMap<Vec<u32>, Scalar>;

/// Verma module of the plain Virasoro algebra with
/// `[d_m, d_n] = (n-m) d_{m+n} + δ_{m,-n} (m^3-m)/12 c`, `d_0 ṽ = h ṽ`,
/// `c ṽ = c ṽ`. A key `[k_1 <= k_2 <= ...]` stands for `d_{-k_1} d_{-k_2} ... ṽ`
/// (ascending order, the opposite of the library's normal form).
pub struct VirOracle {
    pub c: Scalar,
    pub h: Scalar,
}

fn add_into(out: &mut Vec0, v: Vec0, s: &Scalar) {
    for (k, x) in v {
        let e = out.entry(k).or_insert_with(Scalar::zero);
        *e += x * s;
    }
    out.retain(|_, x| !x.is_zero());
}

impl VirOracle {
    /// `d_{-a} · (key ṽ)` in ascending normal form.
    pub fn lower(&self, a: u32, key: &[u32]) -> Vec0 {
        match key.first() {
            Some(&k1) if a > k1 => {
                let rest = &key[1..];
                let mut out = Vec0::new();
                // d_{-a} d_{-k1} R = d_{-k1} d_{-a} R + (a - k1) d_{-(a+k1)} R
                for (m, x) in self.lower(a, rest) {
                    add_into(&mut out, self.lower(k1, &m), &x);
                }
                add_into(&mut out, self.lower(a + k1, rest), &scalar::int(a as i64 - k1 as i64));
                out
            }
            _ => {
                let mut k = vec![a];
                k.extend_from_slice(key);
                BTreeMap::from([(k, scalar::one())])
            }
        }
    }

    /// `d_m · (key ṽ)` for `m >= 0`.
    pub fn raise(&self, m: u32, key: &[u32]) -> Vec0 {
        let Some((&k1, rest)) = key.split_first() else {
            return match m {
                0 => BTreeMap::from([(vec![], self.h.clone())]),
                _ => Vec0::new(),
            };
        };
        let mut out = Vec0::new();
        for (r, x) in self.raise(m, rest) {
            add_into(&mut out, self.lower(k1, &r), &x);
        }
        // [d_m, d_{-k1}] = (-k1 - m) d_{m-k1} + δ_{m,k1} (m^3 - m)/12 c
        let coef = scalar::int(-(k1 as i64) - m as i64);
        let part = if m >= k1 { self.raise(m - k1, rest) } else { self.lower(k1 - m, rest) };
        add_into(&mut out, part, &coef);
        if m == k1 {
            let mm = m as i64;
            let cc = scalar::frac(mm * mm * mm - mm, 12) * &self.c;
            add_into(&mut out, BTreeMap::from([(rest.to_vec(), scalar::one())]), &cc);
        }
        out
    }

    fn raise_vec(&self, m: u32, v: &Vec0) -> Vec0 {
        let mut out = Vec0::new();
        for (k, x) in v {
            add_into(&mut out, self.raise(m, k), x);
        }
        out
    }

    /// Shapovalov-type matrix: entry `(μ, λ)` is the `ṽ`-coefficient of
    /// `d_{μ_1} d_{μ_2} ... (λ ṽ)`.
    pub fn pairing(&self, n: u32) -> Vec<Vec<Scalar>> {
        let parts = partitions(n);
        let mut rows = Vec::new();
        for mu in &parts {
            let mut row = Vec::new();
            for lam in &parts {
                let mut v: Vec0 = BTreeMap::from([(lam.clone(), scalar::one())]);
                for &p in mu.iter().rev() {
                    v = self.raise_vec(p, &v);
                }
                row.push(v.get(&Vec::new()).cloned().unwrap_or_else(Scalar::zero));
            }
            rows.push(row);
        }
        rows
    }

    pub fn kernel_dim(&self, n: u32) -> usize {
        let m = self.pairing(n);
        m.len() - dense_rank(&m)
    }
}

/// Depthwise convolution of two dimension sequences.
pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}
