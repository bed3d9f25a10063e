//! Complete simplicial fans: validation, walls, primitive collections and
//! relations, star subdivisions and blowdowns.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{int, rat_inverse, to_i64, IntMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    /// Sorted ray indices of each maximal cone.
    pub max_cones: Vec<Vec<usize>>,
    pub name: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub simplicial: bool,
    pub complete: bool,
    pub smooth: bool,
    pub problems: Vec<String>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.simplicial && self.complete && self.problems.is_empty()
    }
}

/// A codimension-one face shared by two maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub face: Vec<usize>,
    pub cones: (usize, usize),
}

/// A primitive collection with its relation
/// `Σ_{i in P} b_i u_i - Σ_{j in focus \ P} b_j u_j = 0`, stored as one
/// coprime integer coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveRelation {
    pub collection: Vec<usize>,
    pub focus: Vec<usize>,
    pub coeffs: Vec<i64>,
}

impl PrimitiveRelation {
    pub fn positive_support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] > 0).collect()
    }

    pub fn negative_support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] < 0).collect()
    }

    /// Anticanonical degree `Σ b_i`, i.e. `-K · R`.
    pub fn degree(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

fn det_i64(rows: &[Vec<i64>]) -> BigInt {
    IntMatrix::from_i64(rows).determinant().expect("square")
}

fn primitive_i64(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl Fan {
    /// Builds a fan, making rays primitive and cone index lists sorted. The
    /// returned strings describe any normalisation that took place.
    pub fn with_warnings(
        dim: usize,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
        name: Option<String>,
    ) -> Result<(Fan, Vec<String>)> {
        let mut warnings = Vec::new();
        if dim == 0 {
            return Err(Error::MalformedFan("dimension must be positive".into()));
        }
        let mut prim = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::MalformedFan(format!("ray {i} has length {} (dimension {dim})", r.len())));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Error::MalformedFan(format!("ray {i} is zero")));
            }
            let p = primitive_i64(r);
            if p != *r {
                warnings.push(format!("ray {i} {r:?} replaced by primitive generator {p:?}"));
            }
            prim.push(p);
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (k, c) in max_cones.iter().enumerate() {
            if let Some(&i) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::MalformedFan(format!("cone {k} refers to ray {i}, only {} rays", rays.len())));
            }
            let mut c = c.clone();
            c.sort_unstable();
            let before = c.len();
            c.dedup();
            if c.len() != before {
                warnings.push(format!("cone {k} lists a ray twice"));
            }
            cones.push(c);
        }
        Ok((Fan { dim, rays: prim, max_cones: cones, name }, warnings))
    }

    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        Ok(Self::with_warnings(dim, rays, max_cones, None)?.0)
    }

    /// Builds a fan and insists it is complete and simplicial.
    pub fn checked(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        let fan = Self::new(dim, rays, max_cones)?;
        let diag = fan.validate();
        if !diag.is_valid() {
            return Err(Error::MalformedFan(diag.problems.join("; ")));
        }
        Ok(fan)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn num_cones(&self) -> usize {
        self.max_cones.len()
    }

    /// Picard rank of a complete simplicial fan.
    pub fn picard_rank(&self) -> usize {
        self.rays.len() - self.dim
    }

    pub fn ray_big(&self, i: usize) -> Vec<BigInt> {
        self.rays[i].iter().map(|&x| int(x)).collect()
    }

    /// The `r x d` matrix whose rows are the rays.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64(&self.rays)
    }

    fn cone_det(&self, cone: &[usize]) -> BigInt {
        let rows: Vec<Vec<i64>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        det_i64(&rows)
    }

    pub fn validate(&self) -> Diagnostics {
        let mut problems = Vec::new();
        let d = self.dim;
        let mut simplicial = true;
        for (k, c) in self.max_cones.iter().enumerate() {
            if c.len() != d || self.cone_det(c).is_zero() {
                simplicial = false;
                problems.push(format!("cone {k} is not a full-dimensional simplicial cone"));
            }
        }
        let mut seen = HashMap::new();
        for (i, r) in self.rays.iter().enumerate() {
            if let Some(j) = seen.insert(r.clone(), i) {
                problems.push(format!("rays {j} and {i} coincide"));
            }
        }
        let used: BTreeSet<usize> = self.max_cones.iter().flatten().copied().collect();
        for i in 0..self.rays.len() {
            if !used.contains(&i) {
                problems.push(format!("ray {i} lies in no maximal cone"));
            }
        }
        let cone_set: BTreeSet<&Vec<usize>> = self.max_cones.iter().collect();
        if cone_set.len() != self.max_cones.len() {
            problems.push("a maximal cone is listed twice".into());
        }
        let mut complete = simplicial && !self.max_cones.is_empty();
        if simplicial {
            match self.walls() {
                Ok(walls) => {
                    if !self.walls_connected(&walls) {
                        complete = false;
                        problems.push("maximal cones are not connected through walls".into());
                    }
                }
                Err(Error::MalformedFan(m)) => {
                    complete = false;
                    problems.push(m);
                }
                Err(e) => {
                    complete = false;
                    problems.push(e.to_string());
                }
            }
        }
        let smooth = simplicial && self.max_cones.iter().all(|c| self.cone_det(c).abs() == int(1));
        Diagnostics { simplicial, complete, smooth, problems }
    }

    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| c.len() == self.dim && self.cone_det(c).abs() == int(1))
    }

    fn walls_connected(&self, walls: &[Wall]) -> bool {
        let n = self.max_cones.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for w in walls {
                let other = if w.cones.0 == c {
                    w.cones.1
                } else if w.cones.1 == c {
                    w.cones.0
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Codimension-one faces of maximal cones; each must be shared by
    /// exactly two cones lying on opposite sides of it.
    pub fn walls(&self) -> Result<Vec<Wall>> {
        let mut faces: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        for (k, c) in self.max_cones.iter().enumerate() {
            if c.len() != self.dim {
                return Err(Error::MalformedFan(format!("cone {k} is not simplicial")));
            }
            for &drop in c {
                let face: Vec<usize> = c.iter().copied().filter(|&i| i != drop).collect();
                faces.entry(face).or_default().push((k, drop));
            }
        }
        let mut walls = Vec::with_capacity(faces.len());
        let mut keys: Vec<_> = faces.keys().cloned().collect();
        keys.sort();
        for face in keys {
            let owners = &faces[&face];
            if owners.len() != 2 {
                return Err(Error::MalformedFan(format!(
                    "face {face:?} lies in {} maximal cones instead of 2",
                    owners.len()
                )));
            }
            let side = |extra: usize| {
                let mut rows: Vec<Vec<i64>> = face.iter().map(|&i| self.rays[i].clone()).collect();
                rows.push(self.rays[extra].clone());
                det_i64(&rows).signum()
            };
            let (a, b) = (side(owners[0].1), side(owners[1].1));
            if a.is_zero() || a == b {
                return Err(Error::MalformedFan(format!("cones on wall {face:?} overlap")));
            }
            walls.push(Wall { face, cones: (owners[0].0, owners[1].0) });
        }
        Ok(walls)
    }

    /// Coefficients of `v` in the rays of each maximal cone containing it.
    pub fn containing_cones(&self, v: &[BigInt]) -> Vec<(usize, Vec<Rational>)> {
        let mut out = Vec::new();
        for (k, c) in self.max_cones.iter().enumerate() {
            // columns are the rays of the cone
            let m: Vec<Vec<Rational>> = (0..self.dim)
                .map(|row| c.iter().map(|&i| Rational::from_integer(int(self.rays[i][row]))).collect())
                .collect();
            let Some(inv) = rat_inverse(&m) else { continue };
            let coeffs: Vec<Rational> = inv
                .iter()
                .map(|row| row.iter().zip(v).map(|(a, b)| a * Rational::from_integer(b.clone())).sum())
                .collect();
            if coeffs.iter().all(|x| !x.is_negative()) {
                out.push((k, coeffs));
            }
        }
        out
    }

    /// Whether the rays with these indices span a cone of the fan.
    pub fn is_face(&self, set: &[usize]) -> bool {
        self.max_cones.iter().any(|c| set.iter().all(|i| c.contains(i)))
    }

    /// Minimal non-faces, sorted by size then lexicographically.
    pub fn primitive_collections(&self) -> Vec<Vec<usize>> {
        let r = self.rays.len();
        let mut out = Vec::new();
        for k in 2..=(self.dim + 1).min(r) {
            for s in subsets(r, k) {
                if self.is_face(&s) {
                    continue;
                }
                let minimal = (0..k).all(|drop| {
                    let sub: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, &i)| i).collect();
                    self.is_face(&sub)
                });
                if minimal {
                    out.push(s);
                }
            }
        }
        out
    }

    pub fn primitive_relation(&self, collection: &[usize]) -> Result<PrimitiveRelation> {
        let mut sum = vec![BigInt::zero(); self.dim];
        for &i in collection {
            for (s, x) in sum.iter_mut().zip(&self.rays[i]) {
                *s += *x;
            }
        }
        let hits = self.containing_cones(&sum);
        let (k, coeffs) = hits.first().ok_or(Error::OutsideSupport)?;
        let cone = &self.max_cones[*k];
        let mut rel = vec![Rational::zero(); self.rays.len()];
        for &i in collection {
            rel[i] += Rational::from_integer(int(1));
        }
        let mut focus = Vec::new();
        for (a, &i) in coeffs.iter().zip(cone) {
            if a.is_positive() {
                focus.push(i);
                rel[i] -= a;
            }
        }
        focus.sort_unstable();
        let lcm = rel.iter().fold(int(1), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = rel.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let coeffs = ints.iter().map(|x| to_i64(&(x / &g))).collect::<Result<Vec<_>>>()?;
        Ok(PrimitiveRelation { collection: collection.to_vec(), focus, coeffs })
    }

    pub fn primitive_relations(&self) -> Result<Vec<PrimitiveRelation>> {
        self.primitive_collections().iter().map(|p| self.primitive_relation(p)).collect()
    }

    /// Whether `Σ c_i u_i = 0`.
    pub fn is_relation(&self, coeffs: &[i64]) -> bool {
        coeffs.len() == self.rays.len()
            && (0..self.dim).all(|k| {
                self.rays.iter().zip(coeffs).map(|(u, &c)| i128::from(u[k]) * i128::from(c)).sum::<i128>() == 0
            })
    }

    /// Star subdivision at the primitive vector `v`, which becomes the last ray.
    pub fn star_subdivision(&self, v: &[i64]) -> Result<Fan> {
        if v.len() != self.dim || v.iter().all(|&x| x == 0) {
            return Err(Error::DimensionMismatch("subdivision vector".into()));
        }
        let v = primitive_i64(v);
        if self.rays.contains(&v) {
            return Err(Error::RayExists);
        }
        let vb: Vec<BigInt> = v.iter().map(|&x| int(x)).collect();
        let hits: HashMap<usize, Vec<Rational>> = self.containing_cones(&vb).into_iter().collect();
        if hits.is_empty() {
            return Err(Error::OutsideSupport);
        }
        let new = self.rays.len();
        let mut cones = Vec::new();
        for (k, c) in self.max_cones.iter().enumerate() {
            match hits.get(&k) {
                None => cones.push(c.clone()),
                Some(a) => {
                    for (j, aj) in a.iter().enumerate() {
                        if aj.is_positive() {
                            let mut nc: Vec<usize> = c.iter().copied().filter(|&i| i != c[j]).collect();
                            nc.push(new);
                            cones.push(nc);
                        }
                    }
                }
            }
        }
        let mut rays = self.rays.clone();
        rays.push(v);
        let fan = Fan::new(self.dim, rays, cones)?;
        let diag = fan.validate();
        if !diag.is_valid() {
            return Err(Error::MalformedFan(diag.problems.join("; ")));
        }
        Ok(fan)
    }

    /// Removes ray `ray`, contracting along a divisorial relation whose only
    /// negative coefficient sits at `ray`.
    pub fn blowdown(&self, ray: usize, relation: &[i64]) -> Result<Fan> {
        if ray >= self.rays.len() {
            return Err(Error::DimensionMismatch(format!("no ray {ray}")));
        }
        if !self.is_relation(relation) {
            return Err(Error::NotARelation);
        }
        let neg: Vec<usize> = (0..relation.len()).filter(|&i| relation[i] < 0).collect();
        if neg != [ray] {
            return Err(Error::NotDivisorial);
        }
        let pos: Vec<usize> = (0..relation.len()).filter(|&i| relation[i] > 0).collect();
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for c in &self.max_cones {
            let nc: Vec<usize> = if c.contains(&ray) {
                let mut s: BTreeSet<usize> = c.iter().copied().filter(|&i| i != ray).collect();
                s.extend(&pos);
                s.into_iter().collect()
            } else {
                c.clone()
            };
            if nc.len() != self.dim {
                return Err(Error::InvalidContraction(format!("cone {c:?} becomes {nc:?}")));
            }
            if !cones.contains(&nc) {
                cones.push(nc);
            }
        }
        let remap = |i: usize| if i > ray { i - 1 } else { i };
        let cones: Vec<Vec<usize>> = cones.into_iter().map(|c| c.into_iter().map(remap).collect()).collect();
        let rays: Vec<Vec<i64>> =
            self.rays.iter().enumerate().filter(|(i, _)| *i != ray).map(|(_, r)| r.clone()).collect();
        let fan = Fan::new(self.dim, rays, cones)?;
        let diag = fan.validate();
        if !diag.is_valid() {
            return Err(Error::InvalidContraction(diag.problems.join("; ")));
        }
        Ok(fan)
    }
}
