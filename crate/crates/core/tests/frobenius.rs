use std::collections::{BTreeMap, BTreeSet};
use num_traits::Signed;

use toricfrob::classes::{ClassElement, ClassGroup};
use toricfrob::cli::catalog::{catalog, del_pezzo, fatal_example, hirzebruch, product, projective, standard_names};
use toricfrob::exactlin::{rat, Rational};
use toricfrob::fan::Fan;
use toricfrob::frobenius::{
    alpha, big_pairing_check, frobenius_power, fsupp, fsupp_classes, in_half_open_zonotope, multiplicity,
    numerical_multiplicities, pushforward_decomposition, signatures, trace_kernel_decomposition, twisted_decomposition,
    volume_check, InertBlowdown,
};
use toricfrob::mori::{extremal_contractions, ContractionKind};
use toricfrob::Error;

fn pow(q: i64, d: usize) -> u64 {
    (q as u64).pow(d as u32)
}

/// `m_D(E;q)` straight from the definition: coefficient vectors
/// `c ∈ {0..q-1}^r` with `Σ c_i P_i + D ∼ qE`.
fn box_oracle(fan: &Fan, cg: &ClassGroup, divisor: &[i64], q: i64) -> BTreeMap<ClassElement, u64> {
    let r = fan.num_rays();
    let mut counts: BTreeMap<ClassElement, u64> = BTreeMap::new();
    let mut c = vec![0i64; r];
    // E is recovered by trying every class q E hit by some c; classes of c + D
    // are bucketed and matched against q-multiples below.
    let mut by_class: BTreeMap<ClassElement, u64> = BTreeMap::new();
    loop {
        let v: Vec<i64> = c.iter().zip(divisor).map(|(a, b)| a + b).collect();
        *by_class.entry(cg.class_of(&v).unwrap()).or_insert(0) += 1;
        let mut k = 0;
        while k < r {
            c[k] += 1;
            if c[k] < q {
                break;
            }
            c[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
    }
    for (cls, m) in by_class {
        // qE = cls has a solution E exactly when every free coordinate is
        // divisible by q; torsion is solved by search.
        if cls.free.iter().any(|x| x % q != 0) {
            continue;
        }
        let free: Vec<i64> = cls.free.iter().map(|x| x / q).collect();
        for t in cg.torsion_elements() {
            let e = ClassElement { free: free.clone(), torsion: t };
            if cg.scale(q, &e) == cls {
                *counts.entry(e).or_insert(0) += m;
            }
        }
    }
    counts
}

fn small_fans() -> Vec<String> {
    ["projective(1)", "projective(2)", "product(1,1)", "hirzebruch(1)", "hirzebruch(2)", "delpezzo(2)", "projective_plane_mod3", "weighted_projective(1,1,2)", "fatal_example"]
        .map(String::from)
        .to_vec()
}

#[test]
fn sweep_matches_coefficient_box() {
    for name in small_fans() {
        let fan = catalog(&name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let r = fan.num_rays();
        let divisors = [vec![0; r], (0..r as i64).map(|i| i % 3 - 1).collect::<Vec<_>>()];
        for e in 1..=2 {
            let q = 2i64.pow(e);
            if pow(q, r) > 200_000 {
                continue;
            }
            for d in &divisors {
                let got: BTreeMap<_, _> = pushforward_decomposition(&fan, &cg, d, 2, e).unwrap().into_iter().collect();
                assert_eq!(got, box_oracle(&fan, &cg, d, q), "{name} q={q} D={d:?}");
            }
        }
    }
}

#[test]
fn sweep_matches_polytope_count() {
    for name in small_fans() {
        let fan = catalog(&name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let d: Vec<i64> = (0..fan.num_rays() as i64).map(|i| (i * 2) % 3).collect();
        for (p, e) in [(2, 2), (3, 1)] {
            for (class, m) in pushforward_decomposition(&fan, &cg, &d, p, e).unwrap() {
                assert_eq!(multiplicity(&fan, &cg, &d, &class, p, e).unwrap(), m, "{name} {class:?}");
            }
        }
    }
}

#[test]
fn trace_kernel_rank() {
    for name in standard_names() {
        let fan = catalog(&name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        for (p, e) in [(2, 1), (2, 2), (3, 1)] {
            let Ok(q) = frobenius_power(p, e, fan.dim) else { continue };
            let total: u64 = trace_kernel_decomposition(&fan, &cg, p, e).unwrap().iter().map(|(_, m)| m).sum();
            assert_eq!(total, pow(q, fan.dim) - 1, "{name} q={q}");
        }
    }
}

#[test]
fn projective_plane_splitting() {
    let fan = projective(2);
    let cg = ClassGroup::new(&fan).unwrap();
    for (p, e) in [(2u64, 1u32), (2, 2), (3, 1), (5, 1), (2, 4)] {
        let q = p.pow(e);
        let m = numerical_multiplicities(&trace_kernel_decomposition(&fan, &cg, p, e).unwrap());
        assert_eq!(m.get(&vec![1]).copied().unwrap_or(0), (q - 1) * (q + 4) / 2, "q={q}");
        assert_eq!(m.get(&vec![2]).copied().unwrap_or(0), (q - 1) * (q - 2) / 2, "q={q}");
        assert_eq!(m.len(), if q == 2 { 1 } else { 2 });
    }
}

#[test]
fn quadric_splitting_and_twists() {
    let fan = catalog("product(1,1)").unwrap();
    let cg = ClassGroup::new(&fan).unwrap();
    let cls = |a: i64, b: i64| ClassElement { free: vec![a, b], torsion: vec![] };
    for (p, e) in [(2u64, 1u32), (3, 1), (2, 2)] {
        let q = p.pow(e);
        let m: BTreeMap<_, _> = trace_kernel_decomposition(&fan, &cg, p, e).unwrap().into_iter().collect();
        assert_eq!(m, BTreeMap::from([(cls(0, 1), q - 1), (cls(1, 0), q - 1), (cls(1, 1), (q - 1) * (q - 1))]));
        let t: BTreeMap<_, _> = twisted_decomposition(&fan, &cg, &cls(1, 0), p, e).unwrap().into_iter().collect();
        assert_eq!(t, BTreeMap::from([(cls(1, 0), q), (cls(1, 1), q * (q - 1))]));
        // O(-1,-1) pushes forward to O(-1,-1)^{q^2}.
        let t: BTreeMap<_, _> = twisted_decomposition(&fan, &cg, &cls(1, 1), p, e).unwrap().into_iter().collect();
        assert_eq!(t, BTreeMap::from([(cls(1, 1), q * q)]));
        let zero: BTreeMap<_, _> = twisted_decomposition(&fan, &cg, &cg.zero(), p, e).unwrap().into_iter().collect();
        let plain: BTreeMap<_, _> = pushforward_decomposition(&fan, &cg, &[0; 4], p, e).unwrap().into_iter().collect();
        assert_eq!(zero, plain);
    }
}

#[test]
fn pushforward_is_multiplicative() {
    for fan in [projective(1), catalog("product(1,1)").unwrap(), hirzebruch(1)] {
        let cg = ClassGroup::new(&fan).unwrap();
        let d: Vec<i64> = (0..fan.num_rays() as i64).map(|i| i % 2).collect();
        let direct: BTreeMap<_, _> = pushforward_decomposition(&fan, &cg, &d, 2, 3).unwrap().into_iter().collect();
        let mut composed: BTreeMap<ClassElement, u64> = BTreeMap::new();
        for (e, m) in pushforward_decomposition(&fan, &cg, &d, 2, 1).unwrap() {
            let rep = cg.representative(&e).unwrap();
            for (e2, m2) in pushforward_decomposition(&fan, &cg, &rep, 2, 2).unwrap() {
                *composed.entry(e2).or_insert(0) += m * m2;
            }
        }
        assert_eq!(direct, composed);
    }
}

#[test]
fn budget_is_enforced() {
    let fan = projective(4);
    let cg = ClassGroup::new(&fan).unwrap();
    assert!(matches!(pushforward_decomposition(&fan, &cg, &[0; 5], 2, 6), Err(Error::BudgetExceeded(..))));
    assert!(matches!(frobenius_power(1, 1, 2), Err(Error::Validation(_))));
}

#[test]
fn torsion_classes_and_the_characteristic() {
    let fan = catalog("projective_plane_mod3").unwrap();
    let cg = ClassGroup::new(&fan).unwrap();
    let torsion_only = |p: u64, e: u32| {
        trace_kernel_decomposition(&fan, &cg, p, e)
            .unwrap()
            .iter()
            .filter(|(c, _)| c.free.iter().all(|&x| x == 0))
            .map(|(_, m)| *m)
            .sum::<u64>()
    };
    assert_eq!(torsion_only(2, 1), 0);
    assert_eq!(torsion_only(2, 3), 0);
    // With p dividing the torsion order, the nonzero torsion classes do occur.
    assert_eq!(torsion_only(3, 1), 2);
}

fn bounding_box(cg: &ClassGroup) -> Vec<(i64, i64)> {
    (0..cg.rank)
        .map(|k| {
            let lo: i64 = cg.pi.iter().map(|p| p[k].min(0)).sum();
            let hi: i64 = cg.pi.iter().map(|p| p[k].max(0)).sum();
            (lo, hi)
        })
        .collect()
}

#[test]
fn fast_support_agrees_with_lp_protocol() {
    for name in standard_names() {
        let fan = catalog(&name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let bbox = bounding_box(&cg);
        let mut slow = BTreeSet::new();
        let mut v: Vec<i64> = bbox.iter().map(|b| b.0).collect();
        'outer: loop {
            if v.iter().any(|&x| x != 0) && in_half_open_zonotope(&cg, &v).unwrap() {
                slow.insert(v.clone());
            }
            for k in 0..v.len() {
                v[k] += 1;
                if v[k] <= bbox[k].1 {
                    continue 'outer;
                }
                v[k] = bbox[k].0;
            }
            break;
        }
        let fast: BTreeSet<Vec<i64>> = fsupp_classes(&cg).unwrap().into_iter().collect();
        assert_eq!(fast, slow, "{name}");
    }
}

#[test]
fn support_matches_large_q_summands() {
    for name in ["projective(2)", "product(1,1)", "hirzebruch(2)", "delpezzo(3)", "fatal_example", "weighted_projective(1,2,3)"] {
        let fan = catalog(name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let e = if fan.dim == 2 { 5 } else { 4 };
        let seen: BTreeSet<Vec<i64>> = numerical_multiplicities(&trace_kernel_decomposition(&fan, &cg, 2, e).unwrap())
            .into_keys()
            .filter(|k| k.iter().any(|&x| x != 0))
            .collect();
        let support: BTreeSet<Vec<i64>> = fsupp(&fan, &cg).unwrap().into_iter().map(|e| e.class).collect();
        assert_eq!(seen, support, "{name}");
    }
}

#[test]
fn alpha_is_the_limit_density() {
    for name in ["projective(2)", "hirzebruch(1)", "hirzebruch(2)", "delpezzo(2)", "fatal_example"] {
        let fan = catalog(name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let entries = fsupp(&fan, &cg).unwrap();
        for e in 2..=5u32 {
            let q = 2i64.pow(e);
            if pow(q, fan.dim) > 1 << 15 {
                break;
            }
            let m = numerical_multiplicities(&trace_kernel_decomposition(&fan, &cg, 2, e).unwrap());
            for entry in &entries {
                let density = rat(*m.get(&entry.class).unwrap_or(&0) as i64, pow(q, fan.dim) as i64);
                let err = (density - &entry.alpha).abs();
                assert!(err <= rat(2 * fan.dim as i64, q), "{name} {:?} q={q} err={err}", entry.class);
            }
        }
        let total: Rational = entries.iter().map(|e| e.alpha.clone()).sum();
        assert_eq!(total, rat(1, 1), "{name}");
        for entry in &entries {
            assert_eq!(entry.alpha > rat(0, 1), entry.big, "{name} {:?}", entry.class);
        }
    }
}

#[test]
fn density_error_is_not_monotone() {
    // On P^1 x P^2 the class (1,1) has multiplicity (q-1) * (q-1)(q+4)/2, so
    // the error against alpha = 1/2 is (2q^2 - 7q + 4) / (2q^3): it grows from
    // q = 4 to q = 8 before decaying.
    let fan = catalog("product(1,2)").unwrap();
    let cg = ClassGroup::new(&fan).unwrap();
    let entry = fsupp(&fan, &cg).unwrap().into_iter().find(|e| e.class == vec![1, 1]).unwrap();
    assert_eq!(entry.alpha, rat(1, 2));
    let mut errs = Vec::new();
    for e in 2..=5u32 {
        let q = 2i64.pow(e);
        let m = numerical_multiplicities(&trace_kernel_decomposition(&fan, &cg, 2, e).unwrap())[&entry.class];
        assert_eq!(m as i64, (q - 1) * (q - 1) * (q + 4) / 2);
        errs.push((rat(m as i64, q * q * q) - &entry.alpha).abs());
    }
    assert_eq!(errs[0], rat(1, 16));
    assert!(errs[1] > errs[0] && errs[2] < errs[1] && errs[3] < errs[2]);
}

#[test]
fn known_alphas() {
    let p2 = projective(2);
    let cg = ClassGroup::new(&p2).unwrap();
    assert_eq!(alpha(&cg, &[1]).unwrap(), rat(1, 2));
    assert_eq!(alpha(&cg, &[2]).unwrap(), rat(1, 2));
    let p3 = projective(3);
    let cg = ClassGroup::new(&p3).unwrap();
    // Eulerian numbers over 3!.
    let a: Vec<Rational> = (1..=3).map(|k| alpha(&cg, &[k]).unwrap()).collect();
    assert_eq!(a, vec![rat(1, 6), rat(2, 3), rat(1, 6)]);
}

#[test]
fn ample_signatures_of_surfaces() {
    let a = |f: &Fan| {
        let cg = ClassGroup::new(f).unwrap();
        signatures(&fsupp(f, &cg).unwrap())
    };
    assert_eq!(a(&projective(2)).a, rat(1, 1));
    assert_eq!(a(&product(&[&projective(1), &projective(1)])).a, rat(1, 1));
    assert_eq!(a(&del_pezzo(1).unwrap()).a, rat(1, 2));
    assert_eq!(a(&del_pezzo(2).unwrap()).a, rat(0, 1));
    for n in 1..=6 {
        let s = a(&hirzebruch(n));
        assert_eq!(s.a, rat(1, 2 * n), "S_{n}");
        assert_eq!(s.total_big_mass, rat(1, 1));
    }
}

#[test]
fn seven_and_eight_ray_surfaces() {
    let seven = catalog("zero_nef_surface").unwrap();
    let cg = ClassGroup::new(&seven).unwrap();
    let entries = fsupp(&seven, &cg).unwrap();
    let nef_big: Vec<Vec<i64>> = entries
        .iter()
        .filter(|e| e.nef && e.big)
        .map(|e| cg.representative(&ClassElement { free: e.class.clone(), torsion: vec![] }).unwrap())
        .collect();
    // D_(0,1) + D_(-1,0) + D_(-1,-1) is nef with self-intersection 1.
    assert!(nef_big.contains(&vec![0, 0, 1, 1, 1, 0, 0]));
    assert_eq!(signatures(&entries).n, rat(1, 2));
    let eight = catalog("blowup(zero_nef_surface,[-1,1])").unwrap();
    let cg = ClassGroup::new(&eight).unwrap();
    assert_eq!(signatures(&fsupp(&eight, &cg).unwrap()).n, rat(0, 1));
}

#[test]
fn big_classes_pair_with_their_complements() {
    for name in standard_names() {
        let fan = catalog(&name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let entries = fsupp(&fan, &cg).unwrap();
        for e in &entries {
            assert!(big_pairing_check(&cg, &entries, &e.class).unwrap(), "{name} {:?}", e.class);
        }
    }
    // A boundary class of the quadric is neither big nor paired.
    let fan = catalog("product(1,1)").unwrap();
    let cg = ClassGroup::new(&fan).unwrap();
    let entries = fsupp(&fan, &cg).unwrap();
    assert!(!cg.is_big(&[1, 0]).unwrap());
    assert!(big_pairing_check(&cg, &entries, &[1, 0]).unwrap());
}

#[test]
fn volumes_by_support() {
    for (name, divisors) in [
        ("projective(2)", vec![vec![1, 0, 0], vec![3, 0, 0], vec![0, 0, 0], vec![-1, 0, 0]]),
        ("hirzebruch(1)", vec![vec![1, 1, 1, 1], vec![0, 0, 0, 1], vec![2, 0, 1, 0], vec![0, 1, 0, 0]]),
    ] {
        let fan = catalog(name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let entries = fsupp(&fan, &cg).unwrap();
        for d in divisors {
            let v = volume_check(&fan, &cg, &entries, &d).unwrap();
            assert_eq!(v.lhs, v.rhs, "{name} {d:?}");
        }
    }
    let fe = fatal_example();
    let cg = ClassGroup::new(&fe).unwrap();
    assert!(matches!(volume_check(&fe, &cg, &[], &[1; 5]), Err(Error::RequiresSmooth)));
}

fn inert_blowdown(fan: &Fan, exceptional: usize) -> InertBlowdown {
    let c = extremal_contractions(fan)
        .unwrap()
        .into_iter()
        .find(|c| c.kind == ContractionKind::Divisorial && c.inert && c.exceptional_ray == Some(exceptional))
        .unwrap();
    InertBlowdown::new(fan, c.relation()).unwrap()
}

#[test]
fn intervals_on_the_fatal_example() {
    let fe = fatal_example();
    let b = inert_blowdown(&fe, 4);
    assert_eq!(b.s.num_rays(), 4);
    let got: Vec<(i64, i64)> = (1..=3).map(|l| b.interval(&[l]).unwrap()).collect();
    assert_eq!(got, vec![(0, 2), (0, 4), (2, 4)]);
    let mut predicted = b.predicted_fsupp().unwrap();
    predicted.sort();
    let mut actual: Vec<Vec<i64>> = fsupp(&fe, &b.cg_x).unwrap().into_iter().map(|e| e.class).collect();
    actual.sort();
    assert_eq!(predicted, actual);
    assert!(matches!(b.interval(&[4]), Err(Error::OutsideFSupp(_))));
}

#[test]
fn intervals_on_blowups_of_the_plane() {
    let bl = del_pezzo(1).unwrap();
    let b = inert_blowdown(&bl, 3);
    let (_, k) = b.interval(&[1]).unwrap();
    assert_eq!(k, 1);
    for fan in [del_pezzo(1).unwrap(), del_pezzo(2).unwrap(), catalog("blowup(projective(3),[1,1,0])").unwrap()] {
        for c in extremal_contractions(&fan).unwrap().into_iter().filter(|c| c.kind == ContractionKind::Divisorial && c.inert) {
            let b = InertBlowdown::new(&fan, c.relation()).unwrap();
            let mut predicted = b.predicted_fsupp().unwrap();
            predicted.sort();
            let mut actual: Vec<Vec<i64>> = fsupp(&fan, &b.cg_x).unwrap().into_iter().map(|e| e.class).collect();
            actual.sort();
            assert_eq!(predicted, actual);
        }
    }
    let s2 = hirzebruch(2);
    let c = extremal_contractions(&s2).unwrap().into_iter().find(|c| c.kind == ContractionKind::Divisorial).unwrap();
    assert!(matches!(InertBlowdown::new(&s2, c.relation()), Err(Error::NotInert)));
}
