//! Class group, numerical classes and the cones of divisors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{hermite_rows, int, rat_inverse, smith_normal_form, to_i64, IntMatrix, Rational};
use crate::fan::Fan;
use crate::polyhedra::{Cone, HPolytope};

/// An element of `Cl(X) = Z^ρ ⊕ T`: numerical part and torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassElement {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

/// Presentation `0 → M → Z^r → Cl(X) → 0` together with a fixed splitting.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub rank: usize,
    /// `ρ x r` projection onto the numerical part.
    pub free_proj: IntMatrix,
    /// Rows computing the torsion residues, with their moduli.
    pub torsion_rows: Vec<Vec<BigInt>>,
    pub torsion_orders: Vec<i64>,
    /// `r x ρ` section of the numerical projection with zero torsion part.
    pub section: IntMatrix,
    /// Integer vectors mapping to the torsion generators.
    pub torsion_lifts: Vec<Vec<BigInt>>,
    /// Numerical classes of the torus-invariant prime divisors.
    pub pi: Vec<Vec<i64>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn integer_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let inv = rat_inverse(&m.to_rational()).ok_or_else(|| Error::DimensionMismatch("singular matrix".into()))?;
    let rows: Vec<Vec<BigInt>> = inv
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(Error::DimensionMismatch("not unimodular".into())) })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(IntMatrix::from_rows(&rows))
}

impl ClassGroup {
    pub fn new(fan: &Fan) -> Result<ClassGroup> {
        let a = fan.ray_matrix();
        let (r, d) = (a.rows(), a.cols());
        let snf = smith_normal_form(&a);
        if snf.rank() != d {
            return Err(Error::MalformedFan("rays do not span the lattice over Q".into()));
        }
        let uinv = integer_inverse(&snf.u)?;
        let raw_free: Vec<Vec<BigInt>> = (d..r).map(|i| snf.u.row(i)).collect();
        let rho = r - d;
        // Hermite-normalise the numerical basis so that coordinates are small
        let (free_proj, g) = if rho > 0 {
            hermite_rows(&IntMatrix::from_rows(&raw_free))
        } else {
            (IntMatrix::zeros(0, r), IntMatrix::identity(0))
        };
        let raw_section = IntMatrix::from_columns(&(d..r).map(|j| uinv.col(j)).collect::<Vec<_>>(), r);
        let section = if rho > 0 { raw_section.mul(&integer_inverse(&g)?)? } else { IntMatrix::zeros(r, 0) };
        let mut torsion_rows = Vec::new();
        let mut torsion_orders = Vec::new();
        let mut torsion_lifts = Vec::new();
        for i in 0..d {
            if snf.diag[i] > BigInt::one() {
                torsion_rows.push(snf.u.row(i));
                torsion_orders.push(to_i64(&snf.diag[i])?);
                torsion_lifts.push(uinv.col(i));
            }
        }
        let pi = (0..r)
            .map(|j| (0..rho).map(|i| to_i64(free_proj.get(i, j))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassGroup { rank: rho, free_proj, torsion_rows, torsion_orders, section, torsion_lifts, pi })
    }

    /// Same group with a different splitting: numerical coordinates changed
    /// by the unimodular `basis_change` and torsion coordinates shifted by
    /// `twist` (one row of length ρ per torsion factor).
    pub fn perturbed(&self, basis_change: &IntMatrix, twist: &[Vec<i64>]) -> Result<ClassGroup> {
        let rho = self.rank;
        let r = self.pi.len();
        let minv = integer_inverse(basis_change)?;
        let free_proj = basis_change.mul(&self.free_proj)?;
        let mut torsion_rows = self.torsion_rows.clone();
        let mut section = self.section.clone();
        for (t, row) in torsion_rows.iter_mut().enumerate() {
            for k in 0..rho {
                let h = int(twist[t][k]);
                for j in 0..r {
                    row[j] += &h * self.free_proj.get(k, j);
                    let v = section.get(j, k) - &h * &self.torsion_lifts[t][j];
                    section.set(j, k, v);
                }
            }
        }
        let section = section.mul(&minv)?;
        let pi = (0..r)
            .map(|j| (0..rho).map(|i| to_i64(free_proj.get(i, j))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassGroup {
            rank: rho,
            free_proj,
            torsion_rows,
            torsion_orders: self.torsion_orders.clone(),
            section,
            torsion_lifts: self.torsion_lifts.clone(),
            pi,
        })
    }

    pub fn num_rays(&self) -> usize {
        self.pi.len()
    }

    pub fn torsion_size(&self) -> i64 {
        self.torsion_orders.iter().product()
    }

    /// All torsion elements, as residue vectors.
    pub fn torsion_elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &n in &self.torsion_orders {
            out = out.into_iter().flat_map(|v| (0..n).map(move |t| { let mut w = v.clone(); w.push(t); w })).collect();
        }
        out
    }

    pub fn class_of(&self, divisor: &[i64]) -> Result<ClassElement> {
        if divisor.len() != self.num_rays() {
            return Err(Error::DimensionMismatch(format!("divisor with {} coefficients", divisor.len())));
        }
        Ok(ClassElement { free: self.numerical_class(divisor)?, torsion: self.torsion_part(divisor) })
    }

    pub fn numerical_class(&self, divisor: &[i64]) -> Result<Vec<i64>> {
        if divisor.len() != self.num_rays() {
            return Err(Error::DimensionMismatch(format!("divisor with {} coefficients", divisor.len())));
        }
        Ok((0..self.rank).map(|k| self.pi.iter().zip(divisor).map(|(p, &c)| p[k] * c).sum()).collect())
    }

    fn torsion_part(&self, divisor: &[i64]) -> Vec<i64> {
        let x: Vec<BigInt> = divisor.iter().map(|&c| int(c)).collect();
        self.torsion_rows
            .iter()
            .zip(&self.torsion_orders)
            .map(|(row, &n)| dot(row, &x).mod_floor(&int(n)).try_into().expect("small residue"))
            .collect()
    }

    pub fn reduce(&self, e: &ClassElement) -> ClassElement {
        ClassElement {
            free: e.free.clone(),
            torsion: e.torsion.iter().zip(&self.torsion_orders).map(|(t, n)| t.rem_euclid(*n)).collect(),
        }
    }

    /// A torus-invariant divisor in the class `e`.
    pub fn representative(&self, e: &ClassElement) -> Result<Vec<i64>> {
        let free: Vec<BigInt> = e.free.iter().map(|&x| int(x)).collect();
        let mut x = self.section.mul_vec(&free)?;
        for (t, lift) in e.torsion.iter().zip(&self.torsion_lifts) {
            for (xi, li) in x.iter_mut().zip(lift) {
                *xi += li * t;
            }
        }
        x.iter().map(to_i64).collect()
    }

    pub fn anticanonical(&self) -> ClassElement {
        self.class_of(&vec![1; self.num_rays()]).expect("length matches")
    }

    pub fn add(&self, a: &ClassElement, b: &ClassElement) -> ClassElement {
        self.reduce(&ClassElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a.torsion.iter().zip(&b.torsion).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn scale(&self, k: i64, a: &ClassElement) -> ClassElement {
        self.reduce(&ClassElement {
            free: a.free.iter().map(|x| k * x).collect(),
            torsion: a.torsion.iter().map(|x| k * x).collect(),
        })
    }

    pub fn neg(&self, a: &ClassElement) -> ClassElement {
        self.scale(-1, a)
    }

    pub fn zero(&self) -> ClassElement {
        ClassElement { free: vec![0; self.rank], torsion: vec![0; self.torsion_orders.len()] }
    }

    fn pi_big(&self) -> Vec<Vec<BigInt>> {
        self.pi.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    pub fn eff_cone(&self) -> Result<Cone> {
        Cone::new(self.rank, self.pi_big())
    }

    /// Interior of the effective cone, decided by linear programming.
    pub fn is_big(&self, v: &[i64]) -> Result<bool> {
        let v: Vec<BigInt> = v.iter().map(|&x| int(x)).collect();
        self.eff_cone()?.contains(&v, true)
    }

    /// Intersection over maximal cones σ of `⟨π_i : i ∉ σ⟩`.
    pub fn nef_cone(&self, fan: &Fan) -> Result<Cone> {
        let mut ineqs = Vec::new();
        for cone in &fan.max_cones {
            let comp: Vec<usize> = (0..fan.num_rays()).filter(|i| !cone.contains(i)).collect();
            if comp.len() != self.rank {
                return Err(Error::MalformedFan("non-simplicial cone".into()));
            }
            let b: Vec<Vec<Rational>> = (0..self.rank)
                .map(|k| comp.iter().map(|&j| Rational::from_integer(int(self.pi[j][k]))).collect())
                .collect();
            let inv = rat_inverse(&b).ok_or_else(|| Error::MalformedFan("degenerate cone complement".into()))?;
            for row in inv {
                let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
                ineqs.push(row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect());
            }
        }
        Cone::from_inequalities(self.rank, &ineqs)?.normalized()
    }

    /// Intersection over rays i of `⟨π_j : j ≠ i⟩`.
    pub fn moving_cone(&self) -> Result<Cone> {
        let pis = self.pi_big();
        let mut ineqs = Vec::new();
        for i in 0..pis.len() {
            let rest: Vec<Vec<BigInt>> = pis.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            ineqs.extend(Cone::new(self.rank, rest)?.dual()?.generators);
        }
        Cone::from_inequalities(self.rank, &ineqs)?.normalized()
    }

    /// The linear form `w ↦ D · R` on numerical classes for a relation `R`.
    pub fn relation_functional(&self, fan: &Fan, relation: &[i64]) -> Result<Vec<i64>> {
        if !fan.is_relation(relation) {
            return Err(Error::NotARelation);
        }
        let b: Vec<BigInt> = relation.iter().map(|&x| int(x)).collect();
        self.section.transpose().mul_vec(&b)?.iter().map(to_i64).collect()
    }

    pub fn intersection_number(&self, fan: &Fan, class: &[i64], relation: &[i64]) -> Result<Rational> {
        let f = self.relation_functional(fan, relation)?;
        if class.len() != f.len() {
            return Err(Error::DimensionMismatch("class length".into()));
        }
        Ok(Rational::from_integer(int(f.iter().zip(class).map(|(a, b)| a * b).sum())))
    }
}

/// `h^0(X, O(D))` for a torus-invariant divisor `D = Σ a_i P_i`.
pub fn h0(fan: &Fan, divisor: &[i64]) -> Result<u64> {
    Ok(section_polytope(fan, divisor)?.lattice_points()?.len() as u64)
}

/// `{m : ⟨m, u_i⟩ >= -a_i}`.
pub fn section_polytope(fan: &Fan, divisor: &[i64]) -> Result<HPolytope> {
    if divisor.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch("divisor length".into()));
    }
    let mut p = HPolytope::new(fan.dim);
    for (u, &a) in fan.rays.iter().zip(divisor) {
        p = p.ge(u.iter().map(|&x| Rational::from_integer(int(x))).collect(), Rational::from_integer(int(-a)));
    }
    Ok(p)
}

