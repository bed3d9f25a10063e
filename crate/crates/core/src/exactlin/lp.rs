use num_traits::{One, Signed, Zero};

use super::matrix::Rational;
use crate::error::{Error, Result};

/// Minimize `objective · x` subject to linear equalities, `≥` inequalities
/// and per-variable bounds. `None` bounds are infinite.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    /// `n` non-negative variables, zero objective, no constraints.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::zero(); n],
            equalities: Vec::new(),
            inequalities: Vec::new(),
            lower: vec![Some(Rational::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn eq(mut self, row: Vec<Rational>, rhs: Rational) -> Self {
        self.equalities.push((row, rhs));
        self
    }

    pub fn ge(mut self, row: Vec<Rational>, rhs: Rational) -> Self {
        self.inequalities.push((row, rhs));
        self
    }

    pub fn bounds(mut self, j: usize, lo: Option<Rational>, hi: Option<Rational>) -> Self {
        self.lower[j] = lo;
        self.upper[j] = hi;
        self
    }

    pub fn all_bounds(mut self, lo: Option<Rational>, hi: Option<Rational>) -> Self {
        let n = self.num_vars();
        self.lower = vec![lo; n];
        self.upper = vec![hi; n];
        self
    }

    pub fn objective(mut self, c: Vec<Rational>) -> Self {
        self.objective = c;
        self
    }

    /// Copy of the program with objective `x_j` (or `-x_j` to maximize).
    pub fn with_coordinate_objective(&self, j: usize, minimize: bool) -> Self {
        let mut lp = self.clone();
        lp.objective = vec![Rational::zero(); self.num_vars()];
        lp.objective[j] = if minimize { Rational::one() } else { -Rational::one() };
        lp
    }

    /// Two-phase primal simplex with Bland's rule, exact over the rationals.
    pub fn solve(&self) -> Result<LpOutcome> {
        let n = self.num_vars();
        let check = |row: &Vec<Rational>| {
            if row.len() != n {
                Err(Error::DimensionMismatch(format!("constraint of length {} for {} variables", row.len(), n)))
            } else {
                Ok(())
            }
        };
        for (row, _) in self.equalities.iter().chain(&self.inequalities) {
            check(row)?;
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::DimensionMismatch("bound vectors".into()));
        }

        // x_j = offset_j + Σ coef * y_col, with y >= 0
        let mut offset = vec![Rational::zero(); n];
        let mut terms: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        let mut ncols = 0;
        let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
        for j in 0..n {
            match (&self.lower[j], &self.upper[j]) {
                (Some(l), hi) => {
                    offset[j] = l.clone();
                    terms[j].push((ncols, Rational::one()));
                    if let Some(u) = hi {
                        if u < l {
                            return Ok(LpOutcome::Infeasible);
                        }
                        bound_rows.push((ncols, u - l));
                    }
                    ncols += 1;
                }
                (None, Some(u)) => {
                    offset[j] = u.clone();
                    terms[j].push((ncols, -Rational::one()));
                    ncols += 1;
                }
                (None, None) => {
                    terms[j].push((ncols, Rational::one()));
                    terms[j].push((ncols + 1, -Rational::one()));
                    ncols += 2;
                }
            }
        }
        let total = ncols + bound_rows.len() + self.inequalities.len();
        let mut a: Vec<Vec<Rational>> = Vec::new();
        let mut b: Vec<Rational> = Vec::new();
        let expand = |row: &[Rational]| {
            let mut dense = vec![Rational::zero(); total];
            let mut shift = Rational::zero();
            for (j, aj) in row.iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                shift += aj * &offset[j];
                for (col, coef) in &terms[j] {
                    dense[*col] += aj * coef;
                }
            }
            (dense, shift)
        };
        for (row, rhs) in &self.equalities {
            let (dense, shift) = expand(row);
            a.push(dense);
            b.push(rhs - shift);
        }
        let mut slack = ncols;
        for (col, width) in &bound_rows {
            let mut dense = vec![Rational::zero(); total];
            dense[*col] = Rational::one();
            dense[slack] = Rational::one();
            slack += 1;
            a.push(dense);
            b.push(width.clone());
        }
        for (row, rhs) in &self.inequalities {
            let (mut dense, shift) = expand(row);
            dense[slack] = -Rational::one();
            slack += 1;
            a.push(dense);
            b.push(rhs - shift);
        }
        let mut c = vec![Rational::zero(); total];
        let mut c0 = Rational::zero();
        for j in 0..n {
            if self.objective[j].is_zero() {
                continue;
            }
            c0 += &self.objective[j] * &offset[j];
            for (col, coef) in &terms[j] {
                c[*col] += &self.objective[j] * coef;
            }
        }
        Ok(match standard_simplex(a, b, &c) {
            Std::Infeasible => LpOutcome::Infeasible,
            Std::Unbounded => LpOutcome::Unbounded,
            Std::Optimal(y) => {
                let x: Vec<Rational> = (0..n)
                    .map(|j| {
                        let mut v = offset[j].clone();
                        for (col, coef) in &terms[j] {
                            v += coef * &y[*col];
                        }
                        v
                    })
                    .collect();
                let value = c.iter().zip(&y).map(|(ci, yi)| ci * yi).sum::<Rational>() + c0;
                LpOutcome::Optimal { value, x }
            }
        })
    }

    pub fn feasible(&self) -> Result<bool> {
        let mut lp = self.clone();
        lp.objective = vec![Rational::zero(); self.num_vars()];
        Ok(lp.solve()?.is_feasible())
    }
}

enum Std {
    Optimal(Vec<Rational>),
    Infeasible,
    Unbounded,
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule on the columns marked `allowed`; `false` on unboundedness.
    fn run(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let mut entering = None;
            for j in 0..self.rhs {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !cost[bi].is_zero() && !self.t[i][j].is_zero() {
                        rc -= &cost[bi] * &self.t[i][j];
                    }
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.t[i][self.rhs] / &self.t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }
}

/// min c·y subject to a y = b, y >= 0.
fn standard_simplex(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, c: &[Rational]) -> Std {
    let m = a.len();
    let n = c.len();
    for i in 0..m {
        if b[i].is_negative() {
            for x in a[i].iter_mut() {
                *x = -&*x;
            }
            b[i] = -&b[i];
        }
    }
    let rhs = n + m;
    let t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut tab = Tableau { t, basis: (n..n + m).collect(), rhs };

    let mut cost1 = vec![Rational::zero(); rhs];
    for x in cost1[n..].iter_mut() {
        *x = Rational::one();
    }
    tab.run(&cost1, &vec![true; rhs]);
    let infeas: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bi)| bi >= n)
        .map(|(i, _)| tab.t[i][rhs].clone())
        .sum();
    if infeas.is_positive() {
        return Std::Infeasible;
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut cost2 = c.to_vec();
    cost2.extend(std::iter::repeat(Rational::zero()).take(m));
    let allowed: Vec<bool> = (0..rhs).map(|j| j < n).collect();
    if !tab.run(&cost2, &allowed) {
        return Std::Unbounded;
    }
    let mut y = vec![Rational::zero(); n];
    for (i, &bi) in tab.basis.iter().enumerate() {
        if bi < n {
            y[bi] = tab.t[i][rhs].clone();
        }
    }
    Std::Optimal(y)
}
