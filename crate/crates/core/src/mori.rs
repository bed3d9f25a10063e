//! Mori cone, extremal contractions and the Fano-type predicates.

use num_bigint::BigInt;
use serde::Serialize;

use crate::classes::ClassGroup;
use crate::error::{Error, Result};
use crate::exactlin::{int, kernel_lattice, primitive, solve_integer, to_i64, IntMatrix};
use crate::fan::{Fan, PrimitiveRelation};
use crate::polyhedra::Cone;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ContractionKind {
    Fibration,
    Divisorial,
    Small,
}

#[derive(Clone, Debug, Serialize)]
pub struct Contraction {
    /// Primitive generator of the extremal ray in relation-lattice coordinates.
    pub ray: Vec<i64>,
    /// Every primitive relation spanning this ray; the first one is used.
    pub relations: Vec<PrimitiveRelation>,
    pub kind: ContractionKind,
    pub inert: bool,
    pub smooth_blowup: bool,
    /// Anticanonical degree, reported for smooth fans.
    pub length: Option<i64>,
    pub fiber_dim: usize,
    pub exceptional_codim: usize,
    /// The ray whose divisor is contracted, for divisorial contractions.
    pub exceptional_ray: Option<usize>,
    /// Whether all matching relations give the same classification.
    pub consistent: bool,
}

impl Contraction {
    pub fn relation(&self) -> &PrimitiveRelation {
        &self.relations[0]
    }

    pub fn is_birational(&self) -> bool {
        self.kind != ContractionKind::Fibration
    }
}

/// The cone of curves, generated by the primitive relations.
#[derive(Clone, Debug)]
pub struct MoriCone {
    /// Columns form a basis of the relation lattice `{b : Σ b_i u_i = 0}`.
    pub basis: IntMatrix,
    pub relations: Vec<PrimitiveRelation>,
    /// Coordinates of each relation in `basis`.
    pub coords: Vec<Vec<i64>>,
    pub cone: Cone,
}

pub fn mori_cone(fan: &Fan) -> Result<MoriCone> {
    let basis = kernel_lattice(&fan.ray_matrix().transpose());
    let relations = fan.primitive_relations()?;
    let mut coords = Vec::with_capacity(relations.len());
    for rel in &relations {
        let b: Vec<BigInt> = rel.coeffs.iter().map(|&x| int(x)).collect();
        let y = solve_integer(&basis, &b)?.ok_or(Error::NotARelation)?;
        coords.push(y.iter().map(to_i64).collect::<Result<Vec<_>>>()?);
    }
    let gens = coords.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect();
    let cone = Cone::new(basis.cols(), gens)?;
    Ok(MoriCone { basis, relations, coords, cone })
}

fn classify(rel: &PrimitiveRelation) -> (ContractionKind, bool, Option<usize>) {
    let neg = rel.negative_support();
    match neg.len() {
        0 => (ContractionKind::Fibration, false, None),
        1 => (ContractionKind::Divisorial, rel.coeffs[neg[0]] == -1, Some(neg[0])),
        _ => (ContractionKind::Small, false, None),
    }
}

pub fn extremal_contractions(fan: &Fan) -> Result<Vec<Contraction>> {
    let mc = mori_cone(fan)?;
    let smooth = fan.is_smooth();
    let mut out = Vec::new();
    for ray in mc.cone.extreme_rays()? {
        let matches: Vec<usize> = (0..mc.relations.len())
            .filter(|&i| primitive(&mc.coords[i].iter().map(|&x| int(x)).collect::<Vec<_>>()) == ray)
            .collect();
        let Some(&first) = matches.first() else { return Err(Error::UnmatchedRay) };
        let rel = &mc.relations[first];
        let (kind, inert, exceptional_ray) = classify(rel);
        let consistent = matches.iter().all(|&i| {
            let (k, n, _) = classify(&mc.relations[i]);
            k == kind && n == inert
        });
        let k = rel.positive_support().len();
        let l = k + rel.negative_support().len();
        out.push(Contraction {
            ray: ray.iter().map(to_i64).collect::<Result<_>>()?,
            relations: matches.iter().map(|&i| mc.relations[i].clone()).collect(),
            kind,
            inert,
            smooth_blowup: smooth && inert,
            length: smooth.then(|| rel.degree()),
            fiber_dim: k - 1,
            exceptional_codim: l - k,
            exceptional_ray,
            consistent,
        });
    }
    Ok(out)
}

/// `-K` lies in the interior of the nef cone.
pub fn is_fano(fan: &Fan, cg: &ClassGroup) -> Result<bool> {
    let nef = cg.nef_cone(fan)?;
    let k: Vec<BigInt> = cg.anticanonical().free.iter().map(|&x| int(x)).collect();
    Ok(nef.is_full_dimensional() && nef.contains(&k, true)?)
}

pub fn is_weak_fano(fan: &Fan, cg: &ClassGroup) -> Result<bool> {
    let k: Vec<BigInt> = cg.anticanonical().free.iter().map(|&x| int(x)).collect();
    cg.nef_cone(fan)?.contains(&k, false)
}

/// A smooth complete fan is projective space exactly when some primitive
/// relation has no negative part and `d + 1` terms.
pub fn is_projective_space(fan: &Fan) -> Result<bool> {
    if !fan.is_smooth() {
        return Err(Error::RequiresSmooth);
    }
    Ok(fan
        .primitive_relations()?
        .iter()
        .any(|r| r.negative_support().is_empty() && r.positive_support().len() == fan.dim + 1))
}

fn all_birational_inert(fan: &Fan) -> Result<bool> {
    Ok(extremal_contractions(fan)?
        .iter()
        .all(|c| c.kind == ContractionKind::Fibration || (c.kind == ContractionKind::Divisorial && c.inert)))
}

/// Smooth Fano whose birational contractions are all blow-downs of a
/// smooth centre, i.e. inert divisorial.
pub fn is_extremal_fano(fan: &Fan, cg: &ClassGroup) -> Result<bool> {
    if !fan.is_smooth() {
        return Err(Error::RequiresSmooth);
    }
    Ok(is_fano(fan, cg)? && all_birational_inert(fan)?)
}

pub fn is_birationally_inert_fano(fan: &Fan, cg: &ClassGroup) -> Result<bool> {
    Ok(is_fano(fan, cg)? && all_birational_inert(fan)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    /// Exceptional ray index in the fan before this step.
    pub ray: usize,
    pub relation: PrimitiveRelation,
    pub fan: Fan,
}

/// Repeatedly contracts inert divisorial rays until none remain, preferring
/// contractions with a smooth target and then the lowest exceptional ray.
/// The terminal fan must have `Eff = Nef`.
pub fn blowdown_chain(fan: &Fan) -> Result<Vec<ChainStep>> {
    let cg = ClassGroup::new(fan)?;
    if !is_birationally_inert_fano(fan, &cg)? {
        return Err(Error::NotInert);
    }
    let mut steps: Vec<ChainStep> = Vec::new();
    let mut cur = fan.clone();
    loop {
        let mut options = Vec::new();
        for c in extremal_contractions(&cur)? {
            if c.kind != ContractionKind::Divisorial || !c.inert {
                continue;
            }
            let ray = c.exceptional_ray.expect("divisorial");
            let down = cur
                .blowdown(ray, &c.relation().coeffs)
                .map_err(|e| Error::ChainStuck(format!("step {}: {e}", steps.len() + 1)))?;
            options.push((!down.is_smooth(), ray, c.relations[0].clone(), down));
        }
        // Smooth targets first, then the lowest exceptional ray.
        options.sort_by_key(|o| (o.0, o.1));
        let Some((_, ray, relation, down)) = options.into_iter().next() else { break };
        steps.push(ChainStep { ray, relation, fan: down.clone() });
        cur = down;
        if steps.len() > fan.picard_rank() {
            return Err(Error::ChainStuck("chain longer than the Picard rank".into()));
        }
    }
    let cg = ClassGroup::new(&cur)?;
    if !cg.eff_cone()?.same_as(&cg.nef_cone(&cur)?)? {
        return Err(Error::ChainStuck("terminal fan has Eff different from Nef".into()));
    }
    Ok(steps)
}
