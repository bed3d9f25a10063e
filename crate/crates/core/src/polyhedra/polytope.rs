use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dd;
use crate::error::{Error, Result};
use crate::exactlin::{rat_rank, rat_solve, to_i64, IntMatrix, LinearProgram, LpOutcome, Rational};

/// `{x in R^dim : a·x >= b for each inequality, a·x = b for each equality}`.
#[derive(Clone, Debug, Default)]
pub struct HPolytope {
    pub dim: usize,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
}

/// Scales `(a, b)` to a primitive integer row `(a', b')` with the same sign.
fn integer_row(a: &[Rational], b: &Rational) -> (Vec<BigInt>, BigInt) {
    let l = a.iter().chain(std::iter::once(b)).fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut row: Vec<BigInt> = a.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut rhs = (b * Rational::from_integer(l)).to_integer();
    let g = row.iter().fold(rhs.clone(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        row.iter_mut().for_each(|x| *x = &*x / &g);
        rhs = rhs / &g;
    }
    (row, rhs)
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        HPolytope { dim, ..Default::default() }
    }

    pub fn ge(mut self, a: Vec<Rational>, b: Rational) -> Self {
        self.inequalities.push((a, b));
        self
    }

    pub fn le(self, a: Vec<Rational>, b: Rational) -> Self {
        self.ge(a.into_iter().map(|x| -x).collect(), -b)
    }

    pub fn eq(mut self, a: Vec<Rational>, b: Rational) -> Self {
        self.equalities.push((a, b));
        self
    }

    fn check(&self) -> Result<()> {
        for (a, _) in self.inequalities.iter().chain(&self.equalities) {
            if a.len() != self.dim {
                return Err(Error::DimensionMismatch(format!("constraint of length {} in R^{}", a.len(), self.dim)));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|(a, b)| dot(a, x) >= *b) && self.equalities.iter().all(|(a, b)| dot(a, x) == *b)
    }

    /// Feasibility program over free variables.
    pub fn program(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.dim).all_bounds(None, None);
        lp.inequalities = self.inequalities.clone();
        lp.equalities = self.equalities.clone();
        lp
    }

    pub fn is_empty(&self) -> Result<bool> {
        self.check()?;
        Ok(!self.program().feasible()?)
    }

    /// Vertices of a bounded polytope (empty list for the empty set).
    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        self.check()?;
        let n = self.dim;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut t_row = vec![BigInt::zero(); n + 1];
        t_row[n] = BigInt::one();
        rows.push(t_row);
        let mut push = |a: &[Rational], b: &Rational, sign: i64| {
            let (row, rhs) = integer_row(a, b);
            let s = BigInt::from(sign);
            let mut h: Vec<BigInt> = row.iter().map(|x| x * &s).collect();
            h.push(-rhs * &s);
            rows.push(h);
        };
        for (a, b) in &self.equalities {
            push(a, b, 1);
            push(a, b, -1);
        }
        for (a, b) in &self.inequalities {
            push(a, b, 1);
        }
        let g = dd::from_inequalities(n + 1, &rows);
        let has_point = g.rays.iter().any(|r| r[n].is_positive());
        if !has_point {
            return Ok(Vec::new());
        }
        if !g.lineality.is_empty() || g.rays.iter().any(|r| r[n].is_zero()) {
            return Err(Error::Unbounded);
        }
        let mut verts: Vec<Vec<Rational>> = g
            .rays
            .iter()
            .map(|r| r[..n].iter().map(|x| Rational::new(x.clone(), r[n].clone())).collect())
            .collect();
        verts.sort();
        verts.dedup();
        Ok(verts)
    }

    /// Integer bounds of each coordinate, `None` when empty.
    fn bounding_box(&self) -> Result<Option<Vec<(BigInt, BigInt)>>> {
        let lp = self.program();
        let mut out = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let lo = match lp.with_coordinate_objective(j, true).solve()? {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return Err(Error::Unbounded),
                LpOutcome::Optimal { value, .. } => value.ceil().to_integer(),
            };
            let hi = match lp.with_coordinate_objective(j, false).solve()? {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return Err(Error::Unbounded),
                LpOutcome::Optimal { value, .. } => (-value).floor().to_integer(),
            };
            if lo > hi {
                return Ok(None);
            }
            out.push((lo, hi));
        }
        Ok(Some(out))
    }

    /// All integer points, in lexicographic order.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>> {
        self.check()?;
        let Some(bbox) = self.bounding_box()? else { return Ok(Vec::new()) };
        let conv = |(a, b): &(Vec<Rational>, Rational)| -> Result<(Vec<i128>, i128)> {
            let (row, rhs) = integer_row(a, b);
            let row = row.iter().map(|x| to_i64(x).map(i128::from)).collect::<Result<Vec<_>>>()?;
            Ok((row, i128::from(to_i64(&rhs)?)))
        };
        let ineqs = self.inequalities.iter().map(conv).collect::<Result<Vec<_>>>()?;
        let eqs = self.equalities.iter().map(conv).collect::<Result<Vec<_>>>()?;
        let bbox: Vec<(i64, i64)> = bbox.iter().map(|(l, h)| Ok((to_i64(l)?, to_i64(h)?))).collect::<Result<_>>()?;
        let mut out = Vec::new();
        if self.dim == 0 {
            let ok = ineqs.iter().all(|(_, b)| 0 >= *b) && eqs.iter().all(|(_, b)| *b == 0);
            if ok {
                out.push(Vec::new());
            }
            return Ok(out);
        }
        let mut x: Vec<i64> = bbox.iter().map(|b| b.0).collect();
        let val = |row: &[i128], x: &[i64]| row.iter().zip(x).map(|(a, &b)| a * i128::from(b)).sum::<i128>();
        loop {
            if ineqs.iter().all(|(a, b)| val(a, &x) >= *b) && eqs.iter().all(|(a, b)| val(a, &x) == *b) {
                out.push(x.clone());
            }
            // odometer, last coordinate fastest
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if x[k] < bbox[k].1 {
                    x[k] += 1;
                    break;
                }
                x[k] = bbox[k].0;
            }
        }
    }

    /// Volume of the polytope measured against the lattice spanned by the
    /// columns of `basis`; the polytope must be full-dimensional inside a
    /// translate of that lattice's real span.
    pub fn lattice_volume(&self, basis: &IntMatrix) -> Result<Rational> {
        self.check()?;
        if basis.rows() != self.dim {
            return Err(Error::DimensionMismatch("basis rows vs ambient dimension".into()));
        }
        let k = basis.cols();
        let verts = self.vertices()?;
        if verts.is_empty() {
            return Err(Error::DimensionMismatch("empty polytope".into()));
        }
        let b = basis.to_rational();
        let x0 = verts[0].clone();
        let mut tv: Vec<Vec<Rational>> = Vec::with_capacity(verts.len());
        for v in &verts {
            let diff: Vec<Rational> = v.iter().zip(&x0).map(|(a, c)| a - c).collect();
            let t = rat_solve(&b, &diff)
                .ok_or_else(|| Error::DimensionMismatch("polytope leaves the lattice coset".into()))?;
            tv.push(t);
        }
        if affine_rank(&tv, &(0..tv.len()).collect::<Vec<_>>()) < k {
            return Err(Error::DimensionMismatch("polytope is lower-dimensional".into()));
        }
        // tight vertex sets of the inequalities, in vertex indices
        let tight: Vec<BTreeSet<usize>> = self
            .inequalities
            .iter()
            .map(|(a, rhs)| (0..verts.len()).filter(|&i| dot(a, &verts[i]) == *rhs).collect())
            .collect();
        let all: Vec<usize> = (0..verts.len()).collect();
        let simplices = pulling(&all, k, &tv, &tight);
        let mut total = Rational::zero();
        for s in &simplices {
            let m: Vec<Vec<Rational>> =
                s[1..].iter().map(|&i| tv[i].iter().zip(&tv[s[0]]).map(|(a, c)| a - c).collect()).collect();
            total += rat_det(m).abs();
        }
        let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
        Ok(total / Rational::from_integer(fact))
    }

    /// Euclidean volume relative to `Z^dim`.
    pub fn volume(&self) -> Result<Rational> {
        self.lattice_volume(&IntMatrix::identity(self.dim))
    }
}

fn affine_rank(pts: &[Vec<Rational>], idx: &[usize]) -> usize {
    if idx.len() <= 1 {
        return 0;
    }
    let base = &pts[idx[0]];
    let m: Vec<Vec<Rational>> =
        idx[1..].iter().map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    rat_rank(&m)
}

/// Pulling triangulation of a `dim`-dimensional face given by vertex indices.
fn pulling(face: &[usize], dim: usize, pts: &[Vec<Rational>], tight: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for t in tight {
        let g: Vec<usize> = face.iter().copied().filter(|i| t.contains(i)).collect();
        if g.is_empty() || g.contains(&apex) || facets.contains(&g) {
            continue;
        }
        if affine_rank(pts, &g) == dim - 1 {
            facets.push(g);
        }
    }
    let mut out = Vec::new();
    for g in facets {
        for mut s in pulling(&g, dim - 1, pts, tight) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

fn rat_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let v = &f * &m[c][j];
                m[i][j] -= v;
            }
        }
    }
    det
}
