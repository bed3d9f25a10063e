use num_bigint::BigInt;

use super::support::fsupp_classes;
use crate::classes::{ClassElement, ClassGroup};
use crate::error::{Error, Result};
use crate::exactlin::{int, rat, LinearProgram, LpOutcome, Rational};
use crate::fan::{Fan, PrimitiveRelation};
use crate::polyhedra::{half_open_witness, half_open_witness_with};

/// An inert divisorial contraction `X → S` with the data needed to compare
/// the Frobenius supports of `X` and `S`.
#[derive(Clone, Debug)]
pub struct InertBlowdown {
    pub x: Fan,
    pub s: Fan,
    pub cg_x: ClassGroup,
    pub cg_s: ClassGroup,
    pub relation: PrimitiveRelation,
    pub exceptional: usize,
}

impl InertBlowdown {
    pub fn new(x: &Fan, relation: &PrimitiveRelation) -> Result<InertBlowdown> {
        let neg = relation.negative_support();
        if neg.len() != 1 || relation.coeffs[neg[0]] != -1 {
            return Err(Error::NotInert);
        }
        let exceptional = neg[0];
        let s = x.blowdown(exceptional, &relation.coeffs)?;
        Ok(InertBlowdown {
            cg_x: ClassGroup::new(x)?,
            cg_s: ClassGroup::new(&s)?,
            x: x.clone(),
            s,
            relation: relation.clone(),
            exceptional,
        })
    }

    fn to_s(&self, i: usize) -> usize {
        if i > self.exceptional { i - 1 } else { i }
    }

    /// `c ↦ Σ b_i c_i` over the positive part, in the coordinates of `S`.
    fn weight(&self) -> Vec<Rational> {
        let mut w = vec![rat(0, 1); self.s.num_rays()];
        for i in self.relation.positive_support() {
            w[self.to_s(i)] = rat(self.relation.coeffs[i], 1);
        }
        w
    }

    /// Smallest and largest `j` with `φ^*δ - jE` in the Frobenius support of `X`.
    pub fn interval(&self, delta: &[i64]) -> Result<(i64, i64)> {
        let pis: Vec<Vec<BigInt>> = self.cg_s.pi.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect();
        let d: Vec<BigInt> = delta.iter().map(|&x| int(x)).collect();
        if delta.iter().all(|x| *x == 0) || half_open_witness(&pis, &d)?.is_none() {
            return Err(Error::OutsideFSupp(format!("{delta:?}")));
        }
        let r = self.s.num_rays();
        let mut lp = LinearProgram::new(r).all_bounds(Some(rat(0, 1)), Some(rat(1, 1)));
        for k in 0..self.cg_s.rank {
            lp = lp.eq(self.cg_s.pi.iter().map(|p| rat(p[k], 1)).collect(), rat(delta[k], 1));
        }
        let w = self.weight();
        let optimum = |lp: LinearProgram| -> Result<Rational> {
            match lp.solve()? {
                LpOutcome::Optimal { value, .. } => Ok(value),
                _ => Err(Error::OutsideFSupp(format!("{delta:?}"))),
            }
        };
        let min = optimum(lp.clone().objective(w.clone()))?;
        let max = -optimum(lp.objective(w.iter().map(|x| -x).collect()))?;
        let lo = min.floor().to_integer();
        let mut hi = max.floor().to_integer();
        // the maximum may only be reached with some coefficient equal to 1
        let extra = [(w, Rational::from_integer(hi.clone()))];
        if half_open_witness_with(&pis, &d, &extra)?.is_none() {
            hi -= 1;
        }
        Ok((crate::exactlin::to_i64(&lo)?, crate::exactlin::to_i64(&hi)?))
    }

    /// Numerical class of the pullback of `δ`.
    pub fn pullback(&self, delta: &[i64]) -> Result<Vec<i64>> {
        let e = ClassElement { free: delta.to_vec(), torsion: vec![0; self.cg_s.torsion_orders.len()] };
        let a = self.cg_s.representative(&e)?;
        let mut lifted = vec![0; self.x.num_rays()];
        for i in 0..self.x.num_rays() {
            if i != self.exceptional {
                lifted[i] = a[self.to_s(i)];
            }
        }
        lifted[self.exceptional] =
            self.relation.positive_support().iter().map(|&i| self.relation.coeffs[i] * a[self.to_s(i)]).sum();
        self.cg_x.numerical_class(&lifted)
    }

    /// `{φ^*δ - jE : δ ∈ FSupp(S), j ∈ J_δ}`, sorted.
    pub fn predicted_fsupp(&self) -> Result<Vec<Vec<i64>>> {
        let e = &self.cg_x.pi[self.exceptional];
        let mut out = Vec::new();
        for delta in fsupp_classes(&self.cg_s)? {
            let (lo, hi) = self.interval(&delta)?;
            let base = self.pullback(&delta)?;
            for j in lo..=hi {
                out.push(base.iter().zip(e).map(|(b, x)| b - j * x).collect());
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}
