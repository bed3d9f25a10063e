use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{LinearProgram, LpOutcome, Rational};

fn ri(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

/// Witness `c in [0,1)^m` with `Σ c_i v_i = p`, if one exists.
///
/// Decided on the closed box: the half-open slice is nonempty exactly when
/// the closed slice is nonempty and no coordinate is forced to equal 1
/// (averaging witnesses then gives a point with every coordinate below 1).
pub fn half_open_witness(vectors: &[Vec<BigInt>], p: &[BigInt]) -> Result<Option<Vec<Rational>>> {
    half_open_witness_with(vectors, p, &[])
}

/// As [`half_open_witness`], with extra constraints `a · c >= b` on the coefficients.
pub fn half_open_witness_with(
    vectors: &[Vec<BigInt>],
    p: &[BigInt],
    extra: &[(Vec<Rational>, Rational)],
) -> Result<Option<Vec<Rational>>> {
    let m = vectors.len();
    let dim = p.len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch("vector lengths".into()));
    }
    let mut lp = LinearProgram::new(m).all_bounds(Some(Rational::zero()), Some(Rational::one()));
    for k in 0..dim {
        lp = lp.eq(vectors.iter().map(|v| ri(&v[k])).collect(), ri(&p[k]));
    }
    for (a, b) in extra {
        lp = lp.ge(a.clone(), b.clone());
    }
    let first = match lp.solve()? {
        LpOutcome::Optimal { x, .. } => x,
        _ => return Ok(None),
    };
    let mut witnesses = vec![first.clone()];
    for i in 0..m {
        if first[i] < Rational::one() {
            continue;
        }
        match lp.with_coordinate_objective(i, true).solve()? {
            LpOutcome::Optimal { value, x } if value < Rational::one() => witnesses.push(x),
            _ => return Ok(None),
        }
    }
    let n = Rational::from_integer(BigInt::from(witnesses.len()));
    let avg = (0..m).map(|i| witnesses.iter().map(|w| w[i].clone()).sum::<Rational>() / &n).collect();
    Ok(Some(avg))
}

/// Given a relation `Σ c_i v_i = 0` with mixed signs, returns the nonzero
/// point `Σ_{i : c_i c_{i0} > 0} v_i` (with `i0` the first nonzero index)
/// together with a witness showing it lies in `⟨v_i⟩_[0,1)`.
pub fn half_open_point_from_relation(
    vectors: &[Vec<BigInt>],
    coeffs: &[BigInt],
) -> Result<(Vec<BigInt>, Vec<Rational>)> {
    if vectors.len() != coeffs.len() {
        return Err(Error::DimensionMismatch("one coefficient per vector".into()));
    }
    let dim = vectors.first().map_or(0, |v| v.len());
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch("vector lengths".into()));
    }
    let total: Vec<BigInt> = (0..dim).map(|k| vectors.iter().zip(coeffs).map(|(v, c)| &v[k] * c).sum()).collect();
    if total.iter().any(|x| !x.is_zero()) || coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::NotARelation);
    }
    let has_pos = coeffs.iter().any(|c| c.is_positive());
    let has_neg = coeffs.iter().any(|c| c.is_negative());
    if !(has_pos && has_neg) {
        return Err(Error::DegenerateRelation);
    }
    let i0 = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero coefficient");
    let side = coeffs[i0].is_positive();
    let same = |c: &BigInt| !c.is_zero() && c.is_positive() == side;
    let point: Vec<BigInt> = (0..dim)
        .map(|k| vectors.iter().zip(coeffs).filter(|(_, c)| same(c)).map(|(v, _)| v[k].clone()).sum())
        .collect();
    if point.iter().all(|x| x.is_zero()) {
        return Err(Error::NotStronglyConvex);
    }
    // explicit witness: p = Σ_same (1 - λ|c_i|) v_i + Σ_other λ|c_j| v_j
    let max = coeffs.iter().map(|c| c.abs()).max().expect("nonempty");
    let lambda = Rational::new(BigInt::one(), max + 1);
    let coeff: Vec<Rational> = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                Rational::zero()
            } else if same(c) {
                Rational::one() - &lambda * ri(&c.abs())
            } else {
                &lambda * ri(&c.abs())
            }
        })
        .collect();
    debug_assert!(coeff.iter().all(|x| !x.is_negative() && *x < Rational::one()));
    if half_open_witness(vectors, &point)?.is_none() {
        return Err(Error::NotStronglyConvex);
    }
    Ok((point, coeff))
}
