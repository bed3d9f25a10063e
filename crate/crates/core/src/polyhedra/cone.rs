use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dd;
use crate::error::{Error, Result};
use crate::exactlin::{primitive, LinearProgram, LpOutcome, Rational};

/// A cone in `R^dim` given by integer generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub dim: usize,
    pub generators: Vec<Vec<BigInt>>,
}

fn to_rat(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

impl Cone {
    /// Zero generators are dropped.
    pub fn new(dim: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch(format!("generator of length {} in R^{}", g.len(), dim)));
        }
        let generators = generators.into_iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
        Ok(Cone { dim, generators })
    }

    pub fn from_i64(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// The cone `{y : a · y >= 0 for every row a}`.
    pub fn from_inequalities(dim: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("inequality length".into()));
        }
        let g = dd::from_inequalities(dim, rows);
        let mut gens = g.rays;
        for l in g.lineality {
            gens.push(l.iter().map(|x| -x).collect());
            gens.push(l);
        }
        Cone::new(dim, gens)
    }

    /// Generators of `{y : y · g >= 0 for every generator g}`.
    pub fn dual(&self) -> Result<Cone> {
        Cone::from_inequalities(self.dim, &self.generators)
    }

    pub fn rank(&self) -> usize {
        crate::exactlin::rat_rank(&self.generators.iter().map(|g| to_rat(g)).collect::<Vec<_>>())
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.rank() == self.dim
    }

    fn lambda_lp(&self, v: &[BigInt]) -> LinearProgram {
        let m = self.generators.len();
        let mut lp = LinearProgram::new(m);
        for i in 0..self.dim {
            let row = self.generators.iter().map(|g| Rational::from_integer(g[i].clone())).collect();
            lp = lp.eq(row, Rational::from_integer(v[i].clone()));
        }
        lp
    }

    pub fn is_strongly_convex(&self) -> Result<bool> {
        if self.generators.is_empty() {
            return Ok(true);
        }
        let zero = vec![BigInt::zero(); self.dim];
        let m = self.generators.len();
        let lp = self.lambda_lp(&zero).eq(vec![Rational::one(); m], Rational::one());
        Ok(!lp.feasible()?)
    }

    /// Membership of `v`; with `strict` the relative interior of the cone
    /// (the open interior when the cone is full-dimensional).
    pub fn contains(&self, v: &[BigInt], strict: bool) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!("vector of length {} in R^{}", v.len(), self.dim)));
        }
        let lp = self.lambda_lp(v);
        let witness = match lp.solve()? {
            LpOutcome::Infeasible => return Ok(false),
            LpOutcome::Optimal { x, .. } => x,
            LpOutcome::Unbounded => unreachable!("zero objective"),
        };
        if !strict {
            return Ok(true);
        }
        // the relative interior is the set of strictly positive combinations
        for (i, w) in witness.iter().enumerate() {
            if w.is_positive() {
                continue;
            }
            match lp.with_coordinate_objective(i, false).solve()? {
                LpOutcome::Unbounded => {}
                LpOutcome::Optimal { value, .. } if value.is_negative() => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Primitive extreme rays, sorted; requires strong convexity.
    pub fn extreme_rays(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_strongly_convex()? {
            return Err(Error::NotStronglyConvex);
        }
        let mut gens: Vec<Vec<BigInt>> = self.generators.iter().map(|g| primitive(g)).collect();
        gens.sort();
        gens.dedup();
        let mut i = 0;
        while i < gens.len() {
            let others: Vec<Vec<BigInt>> =
                gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let rest = Cone { dim: self.dim, generators: others };
            if !rest.generators.is_empty() && rest.contains(&gens[i], false)? {
                gens.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(gens)
    }

    /// Cone with the extreme rays as generators.
    pub fn normalized(&self) -> Result<Cone> {
        Ok(Cone { dim: self.dim, generators: self.extreme_rays()? })
    }

    pub fn contains_cone(&self, other: &Cone) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g, false)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Cone) -> Result<bool> {
        Ok(self.dim == other.dim && self.contains_cone(other)? && other.contains_cone(self)?)
    }
}
