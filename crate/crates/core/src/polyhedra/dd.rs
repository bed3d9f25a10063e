//! Double description: generators of `{y : a_k · y >= 0 for all k}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactlin::primitive;

#[derive(Clone, Debug, Default)]
pub struct Generators {
    /// Basis of the lineality space.
    pub lineality: Vec<Vec<BigInt>>,
    /// Extreme rays modulo the lineality space.
    pub rays: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(s: &BigInt, x: &[BigInt], t: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    let v: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| s * a + t * b).collect();
    primitive(&v)
}

pub fn from_inequalities(dim: usize, rows: &[Vec<BigInt>]) -> Generators {
    let mut lin: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let mut done: Vec<&Vec<BigInt>> = Vec::new();

    for a in rows {
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        if let Some(idx) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lin.remove(idx);
            let mut al = dot(a, &l);
            if al.is_negative() {
                l.iter_mut().for_each(|x| *x = -&*x);
                al = -al;
            }
            for v in lin.iter_mut().chain(rays.iter_mut()) {
                let av = dot(a, v);
                if !av.is_zero() {
                    *v = combine(&al, v, &-av, &l);
                }
            }
            rays.push(l);
            done.push(a);
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            done.push(a);
            continue;
        }
        let zero_sets: Vec<Vec<bool>> =
            rays.iter().map(|r| done.iter().map(|c| dot(c, r).is_zero()).collect()).collect();
        let min_common = (dim - lin.len()).saturating_sub(2);
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                next.push(r.clone());
            }
        }
        for p in 0..rays.len() {
            if !vals[p].is_positive() {
                continue;
            }
            for q in 0..rays.len() {
                if !vals[q].is_negative() {
                    continue;
                }
                let common: Vec<bool> =
                    zero_sets[p].iter().zip(&zero_sets[q]).map(|(x, y)| *x && *y).collect();
                if common.iter().filter(|x| **x).count() < min_common {
                    continue;
                }
                let blocked = (0..rays.len()).any(|k| {
                    k != p && k != q && common.iter().zip(&zero_sets[k]).all(|(c, z)| !*c || *z)
                });
                if !blocked {
                    next.push(combine(&vals[p], &rays[q], &-&vals[q], &rays[p]));
                }
            }
        }
        rays = next;
        done.push(a);
    }
    rays.sort();
    rays.dedup();
    Generators { lineality: lin, rays }
}
