use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::classes::{h0, section_polytope, ClassGroup};
use crate::error::{Error, Result};
use crate::exactlin::{int, kernel_lattice, rat, Rational};
use crate::fan::{subsets, Fan};
use crate::polyhedra::{half_open_witness, Cone, HPolytope};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FSuppEntry {
    pub class: Vec<i64>,
    pub big: bool,
    pub nef: bool,
    pub ample: bool,
    #[serde(with = "crate::exactlin::rational_json")]
    pub alpha: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Signatures {
    /// Density of ample classes.
    #[serde(with = "crate::exactlin::rational_json")]
    pub a: Rational,
    /// Density of nef classes.
    #[serde(with = "crate::exactlin::rational_json")]
    pub n: Rational,
    #[serde(with = "crate::exactlin::rational_json")]
    pub total_big_mass: Rational,
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| int(x)).collect()
}

fn pis(cg: &ClassGroup) -> Vec<Vec<BigInt>> {
    cg.pi.iter().map(|p| big(p)).collect()
}

/// Whether `v ∈ ⟨π_i⟩_[0,1)`, by the linear-programming protocol.
pub fn in_half_open_zonotope(cg: &ClassGroup, v: &[i64]) -> Result<bool> {
    Ok(half_open_witness(&pis(cg), &big(v))?.is_some())
}

/// Facet normals of the zonotope `Σ [0,1] π_i`, one per direction up to sign.
fn zonotope_normals(cg: &ClassGroup) -> Vec<Vec<i64>> {
    let rho = cg.rank;
    if rho == 1 {
        return vec![vec![1]];
    }
    let mut normals: Vec<Vec<i64>> = Vec::new();
    for s in subsets(cg.pi.len(), rho - 1) {
        let rows: Vec<Vec<i64>> = s.iter().map(|&i| cg.pi[i].clone()).collect();
        let m = crate::exactlin::IntMatrix::from_i64(&rows);
        if m.rank() != rho - 1 {
            continue;
        }
        let k = kernel_lattice(&m);
        let mut n: Vec<i64> = k.col(0).iter().map(|x| crate::exactlin::to_i64(x).expect("small")).collect();
        if n.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
            n.iter_mut().for_each(|x| *x = -*x);
        }
        if !normals.contains(&n) {
            normals.push(n);
        }
    }
    normals
}

enum Zone {
    Outside,
    Interior,
    Excluded,
    Boundary,
}

/// Nonzero lattice points of `Q_X = ⟨π_i⟩_[0,1)` with their flags and densities.
pub fn fsupp(fan: &Fan, cg: &ClassGroup) -> Result<Vec<FSuppEntry>> {
    let classes = fsupp_classes(cg)?;
    let nef = cg.nef_cone(fan)?;
    let nef_full = nef.is_full_dimensional();
    classes
        .into_iter()
        .map(|c| {
            let b = big(&c);
            let is_nef = nef.contains(&b, false)?;
            let ample = is_nef && nef_full && nef.contains(&b, true)?;
            let is_big = cg.is_big(&c)?;
            let alpha = if is_big { alpha(cg, &c)? } else { Rational::zero() };
            Ok(FSuppEntry { class: c, big: is_big, nef: is_nef, ample, alpha })
        })
        .collect()
}

/// Nonzero lattice points of `Q_X`, in lexicographic order. Points strictly
/// inside the closed zonotope belong to it, points on a face that forces a
/// coefficient to 1 do not, and the rest are decided by linear programming.
pub fn fsupp_classes(cg: &ClassGroup) -> Result<Vec<Vec<i64>>> {
    let rho = cg.rank;
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let faces: Vec<(Vec<i64>, i64, i64, bool, bool)> = zonotope_normals(cg)
        .into_iter()
        .map(|n| {
            let vals: Vec<i64> = cg.pi.iter().map(|p| dot(&n, p)).collect();
            let hi = vals.iter().filter(|v| **v > 0).sum();
            let lo = vals.iter().filter(|v| **v < 0).sum();
            let forced_hi = vals.iter().any(|v| *v > 0);
            let forced_lo = vals.iter().any(|v| *v < 0);
            (n, lo, hi, forced_hi, forced_lo)
        })
        .collect();
    let zone = |v: &[i64]| {
        let mut interior = true;
        for (n, lo, hi, forced_hi, forced_lo) in &faces {
            let t = dot(n, v);
            if t < *lo || t > *hi {
                return Zone::Outside;
            }
            if (t == *hi && *forced_hi) || (t == *lo && *forced_lo) {
                return Zone::Excluded;
            }
            interior &= t != *lo && t != *hi;
        }
        if interior { Zone::Interior } else { Zone::Boundary }
    };
    let bounds: Vec<(i64, i64)> = (0..rho)
        .map(|k| {
            let lo = cg.pi.iter().map(|p| p[k].min(0)).sum();
            let hi = cg.pi.iter().map(|p| p[k].max(0)).sum();
            (lo, hi)
        })
        .collect();
    let mut classes = Vec::new();
    let mut v: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    'sweep: loop {
        if v.iter().any(|x| *x != 0) {
            let member = match zone(&v) {
                Zone::Outside | Zone::Excluded => false,
                Zone::Interior => true,
                Zone::Boundary => in_half_open_zonotope(cg, &v)?,
            };
            if member {
                classes.push(v.clone());
            }
        }
        let mut k = rho;
        loop {
            if k == 0 {
                break 'sweep;
            }
            k -= 1;
            if v[k] < bounds[k].1 {
                v[k] += 1;
                break;
            }
            v[k] = bounds[k].0;
        }
    }
    Ok(classes)
}

/// Lattice volume of `{c ∈ [0,1]^r : Σ c_i π_i = v}` against
/// `Z^r ∩ ker(π)`; zero when the slice is lower-dimensional or empty.
pub fn alpha(cg: &ClassGroup, v: &[i64]) -> Result<Rational> {
    if v.len() != cg.rank {
        return Err(Error::DimensionMismatch("class length".into()));
    }
    let r = cg.num_rays();
    let mut poly = HPolytope::new(r);
    for i in 0..r {
        let mut e = vec![rat(0, 1); r];
        e[i] = rat(1, 1);
        poly = poly.ge(e.clone(), rat(0, 1)).le(e, rat(1, 1));
    }
    for k in 0..cg.rank {
        poly = poly.eq(cg.pi.iter().map(|p| rat(p[k], 1)).collect(), rat(v[k], 1));
    }
    let lattice = kernel_lattice(&cg.free_proj);
    match poly.lattice_volume(&lattice) {
        Ok(vol) => Ok(vol),
        Err(Error::DimensionMismatch(_)) => Ok(Rational::zero()),
        Err(e) => Err(e),
    }
}

pub fn signatures(entries: &[FSuppEntry]) -> Signatures {
    let sum = |f: &dyn Fn(&FSuppEntry) -> bool| entries.iter().filter(|e| f(e)).map(|e| e.alpha.clone()).sum();
    Signatures { a: sum(&|e| e.ample), n: sum(&|e| e.nef), total_big_mass: sum(&|e| e.big) }
}

#[derive(Clone, Debug)]
pub struct FEffectiveCones {
    /// Cone spanned by the Frobenius support, in numerical coordinates.
    pub frob: Cone,
    /// Its dual, in the dual coordinates.
    pub fe: Cone,
}

pub fn f_effective_cones(cg: &ClassGroup, entries: &[FSuppEntry]) -> Result<FEffectiveCones> {
    let frob = Cone::new(cg.rank, entries.iter().map(|e| big(&e.class)).collect())?.normalized()?;
    let fe = frob.dual()?;
    Ok(FEffectiveCones { frob, fe })
}

/// `v` is big exactly when `-K - v` lies in the Frobenius support.
pub fn big_pairing_check(cg: &ClassGroup, entries: &[FSuppEntry], v: &[i64]) -> Result<bool> {
    let k = cg.anticanonical().free;
    let partner: Vec<i64> = k.iter().zip(v).map(|(a, b)| a - b).collect();
    let present = entries.iter().any(|e| e.class == partner);
    Ok(cg.is_big(v)? == present)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeCheck {
    #[serde(with = "crate::exactlin::rational_json")]
    pub lhs: Rational,
    #[serde(with = "crate::exactlin::rational_json")]
    pub rhs: Rational,
}

/// `vol(P_E)` against `Σ_{D big in FSupp} α(D) h^0(E - D)` for a smooth fan.
pub fn volume_check(fan: &Fan, cg: &ClassGroup, entries: &[FSuppEntry], divisor: &[i64]) -> Result<VolumeCheck> {
    if !fan.is_smooth() {
        return Err(Error::RequiresSmooth);
    }
    let poly = section_polytope(fan, divisor)?;
    let lhs = match poly.volume() {
        Ok(v) => v,
        Err(Error::DimensionMismatch(_)) => Rational::zero(),
        Err(e) => return Err(e),
    };
    let mut rhs = Rational::zero();
    for e in entries.iter().filter(|e| e.big && e.alpha.is_positive()) {
        let rep = cg.representative(&crate::classes::ClassElement { free: e.class.clone(), torsion: vec![] })?;
        let diff: Vec<i64> = divisor.iter().zip(&rep).map(|(a, b)| a - b).collect();
        rhs += &e.alpha * Rational::from_integer(int(h0(fan, &diff)? as i64));
    }
    Ok(VolumeCheck { lhs, rhs })
}

