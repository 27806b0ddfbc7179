//! Dense Gaussian elimination over the rationals.
//!
//! Matrices are row vectors of `Scalar`. Elimination skips zero entries, so
//! the sparse pairing and singular-vector systems cost roughly proportional to
//! their fill-in.

use num_traits::Zero;

use crate::scalar::Scalar;

pub type Row = Vec<Scalar>;

/// Reduced row echelon form of a matrix with `ncols` columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub ncols: usize,
    /// Nonzero rows, each with a leading 1 at the matching pivot column.
    pub rows: Vec<Row>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Scalar]) -> Row {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Basis of the null space `{x : A x = 0}`, one vector per free column,
    /// with a 1 in that column.
    pub fn kernel(&self) -> Vec<Row> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.ncols];
            v[free] = num_traits::One::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[free].is_zero() {
                    v[p] = -row[free].clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// Row-reduces `rows` (all of length `ncols`).
pub fn rref(mut rows: Vec<Row>, ncols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Echelon { ncols, rows, pivots }
}

pub fn rank(rows: &[Row], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).rank()
}

pub fn kernel(rows: &[Row], ncols: usize) -> Vec<Row> {
    rref(rows.to_vec(), ncols).kernel()
}

/// Solves `A x = b`; `None` if inconsistent. Free variables are set to zero.
pub fn solve(a: &[Row], b: &[Scalar], ncols: usize) -> Option<Row> {
    let aug: Vec<Row> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let ech = rref(aug, ncols + 1);
    if ech.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Intersection of two row spaces, returned as an echelon basis.
pub fn intersect(a: &Echelon, b: &Echelon) -> Echelon {
    let n = a.ncols;
    // x·A = y·B  <=>  [A; -B]^T (x, y) = 0
    let k = a.rank() + b.rank();
    let mut system: Vec<Row> = vec![vec![Scalar::zero(); k]; n];
    for (i, row) in a.rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            system[c][i] = v.clone();
        }
    }
    for (j, row) in b.rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            system[c][a.rank() + j] = -v.clone();
        }
    }
    let combos = kernel(&system, k);
    let vecs: Vec<Row> = combos
        .iter()
        .map(|coef| {
            let mut v = vec![Scalar::zero(); n];
            for (i, row) in a.rows.iter().enumerate() {
                if coef[i].is_zero() {
                    continue;
                }
                for (x, r) in v.iter_mut().zip(row) {
                    *x += &coef[i] * r;
                }
            }
            v
        })
        .collect();
    rref(vecs, n)
}
