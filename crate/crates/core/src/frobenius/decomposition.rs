use std::collections::{BTreeMap, HashMap};

use crate::classes::{ClassElement, ClassGroup};
use crate::error::{Error, Result};
use crate::exactlin::{rat, Rational};
use crate::fan::Fan;
use crate::polyhedra::HPolytope;

/// Largest `q^d` the enumerations accept.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Summand classes with multiplicities, sorted by class.
pub type Decomposition = Vec<(ClassElement, u64)>;

/// `q = p^e`, refusing when `q^d` exceeds the budget.
pub fn frobenius_power(p: u64, e: u32, dim: usize) -> Result<i64> {
    if p < 2 || e == 0 {
        return Err(Error::Validation(format!("need p >= 2 and e >= 1, got p = {p}, e = {e}")));
    }
    let q = u128::from(p).checked_pow(e).unwrap_or(u128::MAX);
    let total = q.checked_pow(dim as u32).unwrap_or(u128::MAX);
    if total > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded(total, ENUMERATION_BUDGET));
    }
    Ok(q as i64)
}

/// Summands of `F^e_* O(-D) = ⊕ O(-E)^{m_D(E;q)}`, listed as `(E, m_D(E;q))`.
///
/// Sweeps the characters `χ ∈ M/qM`: each contributes the summand
/// `O(⌊(-D + div χ)/q⌋)`.
pub fn pushforward_decomposition(fan: &Fan, cg: &ClassGroup, divisor: &[i64], p: u64, e: u32) -> Result<Decomposition> {
    if divisor.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch("divisor length".into()));
    }
    let q = frobenius_power(p, e, fan.dim)?;
    let d = fan.dim;
    let r = fan.num_rays();
    let tors_rows: Vec<Vec<i64>> = cg
        .torsion_rows
        .iter()
        .zip(&cg.torsion_orders)
        .map(|(row, &n)| row.iter().map(|x| (x % n).try_into().expect("residue fits")).collect())
        .collect();
    let mut counts: HashMap<ClassElement, u64> = HashMap::new();
    let mut chi = vec![0i64; d];
    let mut floors = vec![0i64; r];
    loop {
        for i in 0..r {
            let a = -divisor[i] + fan.rays[i].iter().zip(&chi).map(|(u, m)| u * m).sum::<i64>();
            floors[i] = a.div_euclid(q);
        }
        let free = (0..cg.rank).map(|k| -(0..r).map(|i| cg.pi[i][k] * floors[i]).sum::<i64>()).collect();
        let torsion = tors_rows
            .iter()
            .zip(&cg.torsion_orders)
            .map(|(row, &n)| (-row.iter().zip(&floors).map(|(a, b)| a * b).sum::<i64>()).rem_euclid(n))
            .collect();
        *counts.entry(ClassElement { free, torsion }).or_insert(0) += 1;
        let mut k = d;
        loop {
            if k == 0 {
                let mut out: Decomposition = counts.into_iter().collect();
                out.sort();
                return Ok(out);
            }
            k -= 1;
            chi[k] += 1;
            if chi[k] < q {
                break;
            }
            chi[k] = 0;
        }
    }
}

/// `m_D(E;q) = #{c ∈ {0..q-1}^r : Σ c_i P_i ∼ qE - D}`, counted as the
/// characters `χ` with `0 <= x_i + ⟨χ, u_i⟩ <= q - 1` for one integer
/// representative `x` of `qE - D`.
pub fn multiplicity(fan: &Fan, cg: &ClassGroup, divisor: &[i64], class: &ClassElement, p: u64, e: u32) -> Result<u64> {
    let q = frobenius_power(p, e, fan.dim)?;
    let rep = cg.representative(class)?;
    let x: Vec<i64> = rep.iter().zip(divisor).map(|(a, b)| q * a - b).collect();
    let mut poly = HPolytope::new(fan.dim);
    for (u, xi) in fan.rays.iter().zip(&x) {
        let row: Vec<Rational> = u.iter().map(|&v| rat(v, 1)).collect();
        poly = poly.ge(row.clone(), rat(-xi, 1)).le(row, rat(q - 1 - xi, 1));
    }
    Ok(poly.lattice_points()?.len() as u64)
}

/// Summands of the trace kernel `F^e_* O_X / O_X`, i.e. all nonzero classes
/// `E` with `m(E;q) > 0`.
pub fn trace_kernel_decomposition(fan: &Fan, cg: &ClassGroup, p: u64, e: u32) -> Result<Decomposition> {
    let zero = cg.zero();
    let mut out = pushforward_decomposition(fan, cg, &vec![0; fan.num_rays()], p, e)?;
    let pos = out.iter().position(|(c, _)| *c == zero).expect("the structure sheaf is a summand");
    if out[pos].1 == 1 {
        out.remove(pos);
    } else {
        out[pos].1 -= 1;
    }
    Ok(out)
}

/// `(F^e_* O(-E))^∨ = ⊕ O(D)^{m_E(D;q)}`, listed as `(D, m_E(D;q))`.
pub fn twisted_decomposition(fan: &Fan, cg: &ClassGroup, class: &ClassElement, p: u64, e: u32) -> Result<Decomposition> {
    pushforward_decomposition(fan, cg, &cg.representative(class)?, p, e)
}

/// Multiplicities summed over torsion twists, keyed by numerical class.
pub fn numerical_multiplicities(dec: &Decomposition) -> BTreeMap<Vec<i64>, u64> {
    let mut out = BTreeMap::new();
    for (c, m) in dec {
        *out.entry(c.free.clone()).or_insert(0) += m;
    }
    out
}
