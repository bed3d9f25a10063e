use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Smith decomposition `u * a * v = s` with `u`, `v` unimodular and `s`
/// diagonal, `diag[i] | diag[i + 1]`, all diagonal entries non-negative.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s.get(i, j);
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, s, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = s.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                let q = s.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    s.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                }
                dirty |= !s.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = s.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    s.add_col(j, t, &-&q);
                    v.add_col(j, t, &-&q);
                }
                dirty |= !s.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, s, v)
}

fn finish(u: IntMatrix, s: IntMatrix, v: IntMatrix) -> Snf {
    let diag = (0..s.rows().min(s.cols())).map(|i| s.get(i, i).clone()).collect();
    Snf { u, s, v, diag }
}

/// Basis (as matrix columns) of the saturated lattice `ker(a) ∩ Z^n`.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let k = snf.rank();
    let n = a.cols();
    let cols: Vec<Vec<BigInt>> = (k..n).map(|j| snf.v.col(j)).collect();
    IntMatrix::from_columns(&cols, n)
}

/// An integer solution of `a x = b`, or `None` when none exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!("{} rows, rhs of {}", a.rows(), b.len())));
    }
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let d = snf.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !ci.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = ci.div_rem(&d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    Ok(Some(snf.v.mul_vec(&y)?))
}

/// Row-style Hermite normal form: returns `(h, g)` with `g` unimodular,
/// `h = g * a` in row echelon form, positive pivots, and entries above each
/// pivot reduced into `[0, pivot)`.
pub fn hermite_rows(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut g = IntMatrix::identity(m);
    let mut t = 0;
    for c in 0..n {
        if t == m {
            break;
        }
        loop {
            let piv = (t..m)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&x, &y| h.get(x, c).abs().cmp(&h.get(y, c).abs()));
            let Some(p) = piv else { break };
            h.swap_rows(t, p);
            g.swap_rows(t, p);
            let pv = h.get(t, c).clone();
            let mut done = true;
            for i in t + 1..m {
                let q = h.get(i, c).div_floor(&pv);
                if !q.is_zero() {
                    h.add_row(i, t, &-&q);
                    g.add_row(i, t, &-&q);
                }
                done &= h.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(t, c).is_zero() {
            continue;
        }
        if h.get(t, c).is_negative() {
            h.negate_row(t);
            g.negate_row(t);
        }
        let pv = h.get(t, c).clone();
        for i in 0..t {
            let q = h.get(i, c).div_floor(&pv);
            if !q.is_zero() {
                h.add_row(i, t, &-&q);
                g.add_row(i, t, &-&q);
            }
        }
        t += 1;
    }
    (h, g)
}
