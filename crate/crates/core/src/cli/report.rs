//! Aggregated report over every module, as JSON or plain text.
//!
//! Output is deterministic for fixed options: entries are sorted by class
//! coordinates, rationals are `{"num", "den"}` objects, and timing is only
//! recorded on request.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::classes::{ClassElement, ClassGroup};
use crate::error::{Error, Result};
use crate::exactlin::{to_i64, Rational};
use crate::fan::{Diagnostics, Fan};
use crate::frobenius::{
    big_pairing_check, f_effective_cones, frobenius_power, fsupp, multiplicity, numerical_multiplicities, signatures,
    trace_kernel_decomposition, volume_check, FSuppEntry, Signatures,
};
use crate::mori::{
    extremal_contractions, is_birationally_inert_fano, is_extremal_fano, is_fano, is_projective_space, is_weak_fano,
    mori_cone, Contraction, ContractionKind,
};
use crate::polyhedra::Cone;

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub p: u64,
    pub e_list: Vec<u32>,
    pub checks: bool,
    pub timing: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { p: 2, e_list: vec![1, 2, 3], checks: true, timing: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassGroupSummary {
    pub rank: usize,
    pub torsion_orders: Vec<i64>,
    pub ray_classes: Vec<ClassElement>,
    pub anticanonical: ClassElement,
}

/// Extreme rays of the cones, in numerical coordinates (`mori` in
/// relation-lattice coordinates).
#[derive(Clone, Debug, Serialize)]
pub struct ConeSummary {
    pub eff: Vec<Vec<i64>>,
    pub nef: Vec<Vec<i64>>,
    pub mov: Vec<Vec<i64>>,
    pub mori: Vec<Vec<i64>>,
    pub frob: Vec<Vec<i64>>,
    pub f_effective_curves: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionRow {
    #[serde(flatten)]
    pub contraction: Contraction,
    /// Some nef class of the Frobenius support meets the ray in degree 0.
    pub nef_fsupp_witness: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub smooth: bool,
    pub fano: bool,
    pub weak_fano: bool,
    /// `None` on singular fans.
    pub projective_space: Option<bool>,
    pub extremal_fano: Option<bool>,
    pub birationally_inert_fano: bool,
    pub eff_equals_nef: bool,
    pub frob_equals_mov: bool,
    #[serde(with = "crate::exactlin::rational_json")]
    pub a: Rational,
    #[serde(with = "crate::exactlin::rational_json")]
    pub n: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub section: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub name: Option<String>,
    pub dim: usize,
    pub num_rays: usize,
    pub num_cones: usize,
    pub picard_rank: usize,
    pub diagnostics: Diagnostics,
    pub class_group: ClassGroupSummary,
    pub cones: ConeSummary,
    pub fsupp: Vec<FSuppEntry>,
    pub signatures: Signatures,
    pub contractions: Vec<ContractionRow>,
    pub verdicts: Verdicts,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<Timing>>,
}

struct Clock {
    on: bool,
    last: Instant,
    out: Vec<Timing>,
}

impl Clock {
    fn lap(&mut self, section: &str) {
        if self.on {
            let now = Instant::now();
            self.out.push(Timing { section: section.into(), millis: (now - self.last).as_millis() });
            self.last = now;
        }
    }
}

fn rays(cone: &Cone) -> Result<Vec<Vec<i64>>> {
    let mut out: Vec<Vec<i64>> =
        cone.extreme_rays()?.iter().map(|r| r.iter().map(to_i64).collect::<Result<_>>()).collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn run_report(fan: &Fan, options: &ReportOptions) -> Result<Report> {
    let mut clock = Clock { on: options.timing, last: Instant::now(), out: Vec::new() };
    let diagnostics = fan.validate();
    if !diagnostics.is_valid() {
        return Err(Error::Validation(diagnostics.problems.join("; ")));
    }
    let smooth = diagnostics.smooth;
    let cg = ClassGroup::new(fan)?;
    let r = fan.num_rays();
    let class_group = ClassGroupSummary {
        rank: cg.rank,
        torsion_orders: cg.torsion_orders.clone(),
        ray_classes: (0..r)
            .map(|i| {
                let mut e = vec![0; r];
                e[i] = 1;
                cg.class_of(&e)
            })
            .collect::<Result<_>>()?,
        anticanonical: cg.anticanonical(),
    };

    let eff = cg.eff_cone()?;
    let nef = cg.nef_cone(fan)?;
    let mov = cg.moving_cone()?;
    let mc = mori_cone(fan)?;
    clock.lap("cones");
    let entries = fsupp(fan, &cg)?;
    let sig = signatures(&entries);
    let fcones = f_effective_cones(&cg, &entries)?;
    clock.lap("fsupp");
    let cones = ConeSummary {
        eff: rays(&eff)?,
        nef: rays(&nef)?,
        mov: rays(&mov)?,
        mori: rays(&mc.cone)?,
        frob: rays(&fcones.frob)?,
        f_effective_curves: rays(&fcones.fe)?,
    };

    let mut contractions = Vec::new();
    for c in extremal_contractions(fan)? {
        let mut witness = false;
        for e in entries.iter().filter(|e| e.nef) {
            if cg.intersection_number(fan, &e.class, &c.relation().coeffs)?.is_zero() {
                witness = true;
                break;
            }
        }
        contractions.push(ContractionRow { contraction: c, nef_fsupp_witness: witness });
    }
    clock.lap("contractions");

    let verdicts = Verdicts {
        smooth,
        fano: is_fano(fan, &cg)?,
        weak_fano: is_weak_fano(fan, &cg)?,
        projective_space: if smooth { Some(is_projective_space(fan)?) } else { None },
        extremal_fano: if smooth { Some(is_extremal_fano(fan, &cg)?) } else { None },
        birationally_inert_fano: is_birationally_inert_fano(fan, &cg)?,
        eff_equals_nef: eff.same_as(&nef)?,
        frob_equals_mov: fcones.frob.same_as(&mov)?,
        a: sig.a.clone(),
        n: sig.n.clone(),
    };
    clock.lap("verdicts");

    let checks = if options.checks {
        cross_checks(fan, &cg, &entries, &contractions, &verdicts, options)?
    } else {
        Vec::new()
    };
    clock.lap("checks");

    Ok(Report {
        name: fan.name.clone(),
        dim: fan.dim,
        num_rays: r,
        num_cones: fan.num_cones(),
        picard_rank: fan.picard_rank(),
        diagnostics,
        class_group,
        cones,
        fsupp: entries,
        signatures: sig,
        contractions,
        verdicts,
        checks,
        timing: options.timing.then_some(clock.out),
    })
}

fn check(name: &str, ok: bool, detail: String) -> CheckResult {
    CheckResult { name: name.into(), status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail }
}

fn skipped(name: &str, why: &str) -> CheckResult {
    CheckResult { name: name.into(), status: CheckStatus::Skipped, detail: why.into() }
}

fn cross_checks(
    fan: &Fan,
    cg: &ClassGroup,
    entries: &[FSuppEntry],
    contractions: &[ContractionRow],
    verdicts: &Verdicts,
    options: &ReportOptions,
) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let support: BTreeSet<&Vec<i64>> = entries.iter().map(|e| &e.class).collect();

    for &e in &options.e_list {
        let name = format!("trace_kernel(p={}, e={e})", options.p);
        let q = match frobenius_power(options.p, e, fan.dim) {
            Ok(q) => q,
            Err(Error::BudgetExceeded(n, max)) => {
                out.push(skipped(&name, &format!("q^d = {n} exceeds the budget {max}")));
                continue;
            }
            Err(err) => return Err(err),
        };
        let dec = trace_kernel_decomposition(fan, cg, options.p, e)?;
        let total: u64 = dec.iter().map(|(_, m)| m).sum();
        let expected = (q as u64).pow(fan.dim as u32) - 1;
        out.push(check(&format!("{name} rank"), total == expected, format!("sum of multiplicities {total}, q^d - 1 = {expected}")));

        let nums = numerical_multiplicities(&dec);
        let stray: Vec<_> = nums.keys().filter(|k| k.iter().any(|&x| x != 0) && !support.contains(k)).collect();
        out.push(check(&format!("{name} support"), stray.is_empty(), format!("{} classes outside the Frobenius support", stray.len())));

        // The second counting route, per class.
        let mut mismatches = 0;
        let zero = vec![0; fan.num_rays()];
        for (class, m) in &dec {
            let direct = multiplicity(fan, cg, &zero, class, options.p, e)?;
            let m = if class.free.iter().all(|&x| x == 0) && class.torsion.iter().all(|&x| x == 0) { m + 1 } else { *m };
            if direct != m {
                mismatches += 1;
            }
        }
        out.push(check(&format!("{name} two routes"), mismatches == 0, format!("{mismatches} classes disagree")));
    }

    let mut unpaired = 0;
    for e in entries.iter().filter(|e| e.big) {
        if !big_pairing_check(cg, entries, &e.class)? {
            unpaired += 1;
        }
    }
    out.push(check("big_pairing", unpaired == 0, format!("{unpaired} big classes whose partner -K - E is missing")));

    let mass_ok = verdicts.a <= verdicts.n && entries.iter().map(|e| &e.alpha).sum::<Rational>() == Rational::one();
    out.push(check("alpha_mass", mass_ok, "alpha sums to 1 and a <= n".into()));

    let all_big = entries.iter().all(|e| e.big);
    let all_nef = entries.iter().all(|e| e.nef);
    out.push(check(
        "ample_signature_one",
        (verdicts.a == Rational::one()) == verdicts.eff_equals_nef,
        format!("a = {}, eff = nef: {}", verdicts.a, verdicts.eff_equals_nef),
    ));

    if verdicts.smooth {
        let ps = verdicts.projective_space.unwrap_or(false);
        let ef = verdicts.extremal_fano.unwrap_or(false);
        out.push(check("projective_space", all_big == ps, format!("fsupp big: {all_big}, projective space: {ps}")));
        out.push(check("extremal_fano", all_nef == ef, format!("fsupp nef: {all_nef}, extremal Fano: {ef}")));
        if ef {
            let s = fan.num_cones();
            out.push(check("cardinality", entries.len() == s - 1, format!("|fsupp| = {}, s - 1 = {}", entries.len(), s - 1)));
        } else {
            out.push(skipped("cardinality", "not an extremal Fano fan"));
        }
        let k = vec![1; fan.num_rays()];
        let v = volume_check(fan, cg, entries, &k)?;
        out.push(check("volume(-K)", v.lhs == v.rhs, format!("lhs {}, rhs {}", v.lhs, v.rhs)));
    } else {
        for name in ["projective_space", "extremal_fano", "cardinality", "volume(-K)"] {
            out.push(skipped(name, "requires a smooth fan"));
        }
    }

    let divisorial = contractions.iter().filter(|c| c.contraction.kind == ContractionKind::Divisorial).count();
    out.push(check(
        "nef_dual_to_mori",
        nef_dual_matches(fan, cg, &cg.nef_cone(fan)?)?,
        format!("{divisorial} divisorial contractions"),
    ));
    Ok(out)
}

/// The nef cone recomputed as the dual of the cone spanned by the
/// intersection functionals of the primitive relations.
fn nef_dual_matches(fan: &Fan, cg: &ClassGroup, nef: &Cone) -> Result<bool> {
    let functionals =
        fan.primitive_relations()?.iter().map(|r| Ok(big(&cg.relation_functional(fan, &r.coeffs)?))).collect::<Result<_>>()?;
    Cone::new(cg.rank, functionals)?.dual()?.same_as(nef)
}

pub fn to_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

fn vecs(v: &[Vec<i64>]) -> String {
    v.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join(" ")
}

fn kind(k: ContractionKind) -> &'static str {
    match k {
        ContractionKind::Fibration => "fibration",
        ContractionKind::Divisorial => "divisorial",
        ContractionKind::Small => "small",
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn to_text(report: &Report) -> String {
    let mut s = String::new();
    let name = report.name.as_deref().unwrap_or("(unnamed fan)");
    let _ = writeln!(s, "{name}: d = {}, r = {}, s = {}, rho = {}", report.dim, report.num_rays, report.num_cones, report.picard_rank);
    let d = &report.diagnostics;
    let _ = writeln!(s, "  simplicial {}  complete {}  smooth {}", yes(d.simplicial), yes(d.complete), yes(d.smooth));
    let cg = &report.class_group;
    let _ = writeln!(s, "  Cl = Z^{} x torsion {:?}, -K = {:?}", cg.rank, cg.torsion_orders, cg.anticanonical.free);
    let c = &report.cones;
    let _ = writeln!(s, "cones");
    for (label, rays) in [("eff", &c.eff), ("nef", &c.nef), ("mov", &c.mov), ("mori", &c.mori), ("frob", &c.frob), ("fe", &c.f_effective_curves)] {
        let _ = writeln!(s, "  {label:<5} {}", vecs(rays));
    }
    let _ = writeln!(s, "frobenius support ({} classes)", report.fsupp.len());
    for e in &report.fsupp {
        let _ = writeln!(
            s,
            "  {:<18} alpha {:<8} big {:<3} nef {:<3} ample {}",
            format!("{:?}", e.class),
            e.alpha.to_string(),
            yes(e.big),
            yes(e.nef),
            yes(e.ample)
        );
    }
    let _ = writeln!(s, "signatures  a = {}  n = {}  big mass = {}", report.signatures.a, report.signatures.n, report.signatures.total_big_mass);
    let _ = writeln!(s, "contractions");
    for row in &report.contractions {
        let c = &row.contraction;
        let _ = writeln!(
            s,
            "  {:<10} relation {:?}  inert {}  fiber dim {}  nef witness {}",
            kind(c.kind),
            c.relation().coeffs,
            yes(c.inert),
            c.fiber_dim,
            yes(row.nef_fsupp_witness)
        );
    }
    let v = &report.verdicts;
    let opt = |b: Option<bool>| b.map_or("n/a", yes);
    let _ = writeln!(s, "verdicts");
    let _ = writeln!(s, "  fano {}  weak fano {}  projective space {}", yes(v.fano), yes(v.weak_fano), opt(v.projective_space));
    let _ = writeln!(s, "  extremal fano {}  birationally inert fano {}", opt(v.extremal_fano), yes(v.birationally_inert_fano));
    let _ = writeln!(s, "  eff = nef {}  frob = mov {}", yes(v.eff_equals_nef), yes(v.frob_equals_mov));
    if !report.checks.is_empty() {
        let _ = writeln!(s, "checks");
        for c in &report.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skip",
            };
            let _ = writeln!(s, "  {status}  {}: {}", c.name, c.detail);
        }
    }
    if let Some(t) = &report.timing {
        let _ = writeln!(s, "timing");
        for t in t {
            let _ = writeln!(s, "  {:<14} {} ms", t.section, t.millis);
        }
    }
    s
}
