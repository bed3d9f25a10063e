use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use toricfrob::classes::{h0, ClassGroup};
use toricfrob::cli::catalog::{catalog, del_pezzo, fatal_example, hirzebruch, projective, standard_names};
use toricfrob::exactlin::IntMatrix;
use toricfrob::fan::{subsets, Fan};
use toricfrob::frobenius::{fsupp, signatures};
use toricfrob::mori::{
    blowdown_chain, extremal_contractions, is_birationally_inert_fano, is_extremal_fano, is_fano, is_projective_space,
    ContractionKind,
};
use toricfrob::polyhedra::Cone;
use toricfrob::Error;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Sets of rays not lying in a common maximal cone, all of whose proper
/// subsets do.
fn primitive_collections_oracle(fan: &Fan) -> BTreeSet<Vec<usize>> {
    let in_cone = |s: &[usize]| fan.max_cones.iter().any(|c| s.iter().all(|i| c.contains(i)));
    let mut out = BTreeSet::new();
    for k in 2..=fan.num_rays() {
        for s in subsets(fan.num_rays(), k) {
            if in_cone(&s) {
                continue;
            }
            let minimal = (0..s.len()).all(|drop| {
                let t: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &i)| i).collect();
                in_cone(&t)
            });
            if minimal {
                out.insert(s);
            }
        }
    }
    out
}

/// Characters `χ` in a box with `⟨χ, u_i⟩ >= -a_i`.
fn h0_oracle(fan: &Fan, a: &[i64], bound: i64) -> u64 {
    let d = fan.dim;
    let mut chi = vec![-bound; d];
    let mut count = 0;
    loop {
        if fan.rays.iter().zip(a).all(|(u, &ai)| u.iter().zip(&chi).map(|(x, y)| x * y).sum::<i64>() >= -ai) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == d {
                return count;
            }
            chi[k] += 1;
            if chi[k] <= bound {
                break;
            }
            chi[k] = -bound;
            k += 1;
        }
    }
}

#[test]
fn catalog_flags() {
    let singular = ["fatal_example", "weighted_projective(1,1,2)", "weighted_projective(1,2,3)", "weighted_projective(1,1,1,2)", "projective_plane_mod3"];
    for name in standard_names() {
        let fan = catalog(&name).unwrap();
        let diag = fan.validate();
        assert!(diag.is_valid(), "{name}: {:?}", diag.problems);
        assert_eq!(diag.smooth, !singular.contains(&name.as_str()), "{name}");
    }
    assert_eq!(catalog("hirzebruch(2)").unwrap().num_rays(), 4);
    assert_eq!(catalog("delpezzo(3)").unwrap().num_rays(), 6);
    let fe = catalog("fatal_example").unwrap();
    assert_eq!((fe.dim, fe.num_rays()), (3, 5));
    assert!(matches!(catalog("grassmannian(2,4)"), Err(Error::UnknownName(_))));
}

#[test]
fn broken_fans_are_diagnosed() {
    // Missing a cone: not complete.
    let f = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2]]).unwrap();
    assert!(!f.validate().complete);
    // Overlapping cones.
    let f = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![1, 1]], vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 3]]).unwrap();
    assert!(!f.validate().is_valid());
    let (f, warnings) = Fan::with_warnings(2, vec![vec![2, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]], None).unwrap();
    assert_eq!(f.rays[0], vec![1, 0]);
    assert_eq!(warnings.len(), 1);
}

#[test]
fn primitive_collections_match_subset_search() {
    for name in standard_names() {
        let fan = catalog(&name).unwrap();
        let got: BTreeSet<Vec<usize>> = fan.primitive_collections().into_iter().collect();
        assert_eq!(got, primitive_collections_oracle(&fan), "{name}");
        for rel in fan.primitive_relations().unwrap() {
            assert!(fan.is_relation(&rel.coeffs), "{name}");
            assert_eq!(rel.positive_support(), rel.collection, "{name}");
            assert!(rel.negative_support().iter().all(|i| !rel.collection.contains(i)));
        }
    }
}

#[test]
fn primitive_relations_known() {
    let p2 = projective(2);
    let rels = p2.primitive_relations().unwrap();
    assert_eq!(rels.len(), 1);
    assert_eq!(rels[0].coeffs, vec![1, 1, 1]);
    // On S_2 the fibre relation has degree 2 and the (-2)-curve relation degree 0.
    let s2 = hirzebruch(2);
    let degrees: BTreeSet<i64> = s2.primitive_relations().unwrap().iter().map(|r| r.degree()).collect();
    assert_eq!(degrees, BTreeSet::from([0, 2]));
    let fe = fatal_example();
    let mut coeffs: Vec<Vec<i64>> = fe.primitive_relations().unwrap().into_iter().map(|r| r.coeffs).collect();
    coeffs.sort();
    assert!(coeffs.contains(&vec![0, 3, 2, 0, -1]), "{coeffs:?}");
}

#[test]
fn class_group_orders() {
    let mod3 = catalog("projective_plane_mod3").unwrap();
    let cg = ClassGroup::new(&mod3).unwrap();
    assert_eq!((cg.rank, cg.torsion_orders.clone()), (1, vec![3]));
    assert_eq!(cg.torsion_elements().len(), 3);
    let cg = ClassGroup::new(&catalog("weighted_projective(1,2,3)").unwrap()).unwrap();
    assert_eq!((cg.rank, cg.torsion_size()), (1, 1));
}

#[test]
fn principal_divisors_have_zero_class() {
    for name in ["projective(2)", "hirzebruch(3)", "projective_plane_mod3", "weighted_projective(1,2,3)", "delpezzo(2)"] {
        let fan = catalog(name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let r = fan.num_rays();
        // Every a in [-2,2]^r: zero class exactly when a = div(χ) for a χ in a box.
        let principal: BTreeSet<Vec<i64>> = {
            let mut s = BTreeSet::new();
            for x in -8i64..=8 {
                for y in -8i64..=8 {
                    s.insert(fan.rays.iter().map(|u| u[0] * x + u[1] * y).collect::<Vec<_>>());
                }
            }
            s
        };
        let mut a = vec![-2i64; r];
        loop {
            let zero = cg.class_of(&a).unwrap() == cg.zero();
            assert_eq!(zero, principal.contains(&a), "{name} {a:?}");
            let mut k = 0;
            while k < r {
                a[k] += 1;
                if a[k] <= 2 {
                    break;
                }
                a[k] = -2;
                k += 1;
            }
            if k == r {
                break;
            }
        }
    }
}

#[test]
fn representatives_round_trip() {
    for name in ["projective_plane_mod3", "fatal_example", "hirzebruch(2)"] {
        let fan = catalog(name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        for i in 0..fan.num_rays() {
            let mut a = vec![0; fan.num_rays()];
            a[i] = 1;
            let c = cg.class_of(&a).unwrap();
            assert_eq!(cg.class_of(&cg.representative(&c).unwrap()).unwrap(), c);
            assert_eq!(c.free, cg.pi[i]);
        }
    }
}

#[test]
fn h0_matches_box_count() {
    for (name, divisor) in [
        ("projective(2)", vec![2, 0, 1]),
        ("hirzebruch(2)", vec![1, 2, 0, 1]),
        ("delpezzo(3)", vec![1, 1, 1, 1, 1, 1]),
        ("projective_plane_mod3", vec![3, 0, 1]),
        ("hirzebruch(1)", vec![0, -1, 0, 2]),
    ] {
        let fan = catalog(name).unwrap();
        assert_eq!(h0(&fan, &divisor).unwrap(), h0_oracle(&fan, &divisor, 12), "{name}");
    }
}

#[test]
fn nef_cone_is_dual_to_mori_cone() {
    for name in standard_names() {
        let fan = catalog(&name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let functionals: Vec<Vec<BigInt>> =
            fan.primitive_relations().unwrap().iter().map(|r| big(&cg.relation_functional(&fan, &r.coeffs).unwrap())).collect();
        let dual = Cone::new(cg.rank, functionals).unwrap().dual().unwrap();
        assert!(dual.same_as(&cg.nef_cone(&fan).unwrap()).unwrap(), "{name}");
    }
}

#[test]
fn cone_inclusions() {
    for name in standard_names() {
        let fan = catalog(&name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let (eff, nef, mov) = (cg.eff_cone().unwrap(), cg.nef_cone(&fan).unwrap(), cg.moving_cone().unwrap());
        assert!(eff.contains_cone(&mov).unwrap() && mov.contains_cone(&nef).unwrap(), "{name}");
        assert!(eff.is_strongly_convex().unwrap() && eff.is_full_dimensional(), "{name}");
        assert!(nef.is_full_dimensional(), "{name}: projective");
    }
}

#[test]
fn blowup_and_blowdown_round_trip() {
    let p2 = projective(2);
    let b = p2.star_subdivision(&[1, 1]).unwrap();
    assert_eq!((b.num_rays(), b.num_cones()), (4, 4));
    let rel = b.primitive_relations().unwrap().into_iter().find(|r| r.coeffs[3] == -1).unwrap();
    let back = b.blowdown(3, &rel.coeffs).unwrap();
    let cones = |f: &Fan| f.max_cones.iter().cloned().collect::<BTreeSet<_>>();
    assert_eq!(back.rays, p2.rays);
    assert_eq!(cones(&back), cones(&p2));
    assert_eq!(p2.star_subdivision(&[1, 0]), Err(Error::RayExists));
    let p3 = projective(3);
    let fe = p3.star_subdivision(&[0, 3, 2]).unwrap();
    assert!(fe.validate().is_valid() && !fe.is_smooth());
}

#[test]
fn contraction_types() {
    let kinds = |name: &str| {
        let mut k: Vec<(ContractionKind, bool)> =
            extremal_contractions(&catalog(name).unwrap()).unwrap().iter().map(|c| (c.kind, c.inert)).collect();
        k.sort_by_key(|(k, i)| (*k as u8, *i));
        k
    };
    use ContractionKind::*;
    assert_eq!(kinds("projective(3)"), vec![(Fibration, false)]);
    assert_eq!(kinds("product(1,1)"), vec![(Fibration, false), (Fibration, false)]);
    assert_eq!(kinds("hirzebruch(1)"), vec![(Fibration, false), (Divisorial, true)]);
    assert_eq!(kinds("hirzebruch(2)"), vec![(Fibration, false), (Divisorial, false)]);
    assert_eq!(kinds("fatal_example"), vec![(Divisorial, true), (Divisorial, true)]);
    // Blowing up a line in P^3 contracts a divisor onto a curve.
    let bl = extremal_contractions(&catalog("blowup(projective(3),[1,1,0])").unwrap()).unwrap();
    let div = bl.iter().find(|c| c.kind == Divisorial).unwrap();
    assert!(div.smooth_blowup && div.fiber_dim == 1);
    for name in standard_names() {
        for c in extremal_contractions(&catalog(&name).unwrap()).unwrap() {
            assert!(c.consistent, "{name}");
            assert_eq!(c.exceptional_ray.is_some(), c.kind == Divisorial, "{name}");
        }
    }
}

#[test]
fn fano_predicates() {
    for (name, fano, extremal) in [
        ("projective(2)", true, true),
        ("product(1,1)", true, true),
        ("delpezzo(1)", true, true),
        ("delpezzo(2)", true, true),
        ("delpezzo(3)", true, true),
        ("hirzebruch(2)", false, false),
        ("hirzebruch(3)", false, false),
        ("blowup(projective(3),[1,1,0])", true, true),
    ] {
        let fan = catalog(name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        assert_eq!(is_fano(&fan, &cg).unwrap(), fano, "{name}");
        assert_eq!(is_extremal_fano(&fan, &cg).unwrap(), extremal, "{name}");
    }
    assert!(is_projective_space(&projective(4)).unwrap());
    assert!(!is_projective_space(&catalog("product(1,2)").unwrap()).unwrap());
    assert_eq!(is_projective_space(&fatal_example()), Err(Error::RequiresSmooth));
    let fe = fatal_example();
    assert!(is_birationally_inert_fano(&fe, &ClassGroup::new(&fe).unwrap()).unwrap());
}

#[test]
fn blowdown_chains() {
    let steps = blowdown_chain(&del_pezzo(3).unwrap()).unwrap();
    assert!(!steps.is_empty() && steps.len() <= 3);
    let last = &steps.last().unwrap().fan;
    let cg = ClassGroup::new(last).unwrap();
    assert!(cg.eff_cone().unwrap().same_as(&cg.nef_cone(last).unwrap()).unwrap());
    assert!(matches!(blowdown_chain(&hirzebruch(2)), Err(Error::NotInert)));
    assert_eq!(blowdown_chain(&projective(2)).unwrap().len(), 0);

    // Two inert divisorial contractions; only one lands on a smooth fan.
    let steps = blowdown_chain(&fatal_example()).unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].ray, 4);
    assert!(steps[0].fan.is_smooth() && steps[0].fan.num_rays() == 4);
}

#[test]
fn section_change_leaves_invariants_alone() {
    let basis = IntMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
    for name in ["hirzebruch(1)", "product(1,1)", "fatal_example"] {
        let fan = catalog(name).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let moved = cg.perturbed(&basis, &[]).unwrap();
        let a = fsupp(&fan, &cg).unwrap();
        let b = fsupp(&fan, &moved).unwrap();
        assert_eq!(signatures(&a), signatures(&b), "{name}");
        let image: BTreeSet<Vec<i64>> =
            a.iter().map(|e| vec![2 * e.class[0] + e.class[1], e.class[0] + e.class[1]]).collect();
        let got: BTreeSet<Vec<i64>> = b.iter().map(|e| e.class.clone()).collect();
        assert_eq!(image, got, "{name}");
    }
    let fan = catalog("projective_plane_mod3").unwrap();
    let cg = ClassGroup::new(&fan).unwrap();
    let moved = cg.perturbed(&IntMatrix::from_i64(&[vec![1]]), &[vec![1]]).unwrap();
    for a in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [2, -1, 1]] {
        let x = cg.class_of(&a).unwrap();
        let y = moved.class_of(&a).unwrap();
        assert_eq!(x.free, y.free);
        assert_eq!(moved.class_of(&moved.representative(&y).unwrap()).unwrap(), y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_map_is_additive(a in prop::collection::vec(-4i64..5, 6), b in prop::collection::vec(-4i64..5, 6)) {
        let fan = del_pezzo(3).unwrap();
        let cg = ClassGroup::new(&fan).unwrap();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = cg.class_of(&sum).unwrap();
        let rhs = cg.add(&cg.class_of(&a).unwrap(), &cg.class_of(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn intersection_with_relations_is_linear(a in prop::collection::vec(-3i64..4, 4)) {
        let fan = hirzebruch(2);
        let cg = ClassGroup::new(&fan).unwrap();
        let cls = cg.numerical_class(&a).unwrap();
        for rel in fan.primitive_relations().unwrap() {
            // D · R computed from the class agrees with Σ a_i b_i.
            let direct: i64 = a.iter().zip(&rel.coeffs).map(|(x, y)| x * y).sum();
            let via = cg.intersection_number(&fan, &cls, &rel.coeffs).unwrap();
            prop_assert_eq!(via, toricfrob::exactlin::rat(direct, 1));
        }
    }

    #[test]
    fn star_subdivision_stays_valid(x in -2i64..3, y in -2i64..3) {
        prop_assume!((x, y) != (0, 0));
        let g = num_integer::gcd(x, y);
        let v = [x / g, y / g];
        let p2 = projective(2);
        match p2.star_subdivision(&v) {
            Ok(f) => {
                prop_assert!(f.validate().is_valid());
                prop_assert_eq!(f.num_rays(), 4);
            }
            Err(e) => prop_assert_eq!(e, Error::RayExists),
        }
    }
}
