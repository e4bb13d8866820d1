use std::collections::BTreeSet;
use crate::Error;
use std::sync::Arc;

use super::*;

struct Fixture {
    amb: Arc<AmbientDescriptor>,
    g: FiniteGroup,
    h: FiniteGroup,
    x: GroupElement,
    y: GroupElement,
    z: GroupElement,
}

fn fixture(variant: Variant, n: u32, m: u32, k: u32) -> Fixture {
    let amb = Arc::new(AmbientDescriptor::new(2, variant, k, n, m).unwrap());
    let x = amb.mul(&amb.t(), &amb.c());
    let y = amb.mul(&amb.s(), &amb.d());
    let z = amb.mul(&amb.r(), &amb.d());
    let g = FiniteGroup::closure(&amb, &[x, y]).unwrap();
    let h = FiniteGroup::closure(&amb, &[x, z]).unwrap();
    Fixture { amb, g, h, x, y, z }
}

fn cyclic(p: u32, e: u32) -> FiniteGroup {
    let amb = Arc::new(AmbientDescriptor::new(p, if p == 2 { Variant::Dihedral } else { Variant::Heisenberg }, 1, e, 1).unwrap());
    FiniteGroup::closure(&amb, &[amb.c()]).unwrap()
}

fn klein() -> FiniteGroup {
    let amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 1, 1, 1).unwrap());
    FiniteGroup::closure(&amb, &[amb.c(), amb.d()]).unwrap()
}

#[test]
fn closure_orders() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    assert_eq!(f.g.order(), 512);
    assert_eq!(f.h.order(), 512);
    let trivial = FiniteGroup::closure(&f.amb, &[f.amb.identity()]).unwrap();
    assert_eq!(trivial.order(), 1);
    assert!(trivial.generators().is_empty());
    assert_eq!(f.g.index_of(&f.amb.identity()), Some(0));
}

#[test]
fn closure_guard() {
    let amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 3, 4, 3).unwrap());
    let x = amb.mul(&amb.t(), &amb.c());
    let y = amb.mul(&amb.s(), &amb.d());
    assert_eq!(FiniteGroup::closure_with_guard(&amb, &[x, y], 100).unwrap_err(), Error::GuardExceeded { guard: 100 });
}

#[test]
fn closure_soundness_and_words() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    for grp in [&f.g, &f.h] {
        for (i, a) in grp.elements().iter().enumerate() {
            assert_eq!(grp.evaluate_word(&grp.word(i)), *a);
            assert!(grp.contains(&f.amb.inv(a)));
        }
        for a in grp.elements().iter().step_by(7) {
            for b in grp.elements().iter().step_by(5) {
                assert!(grp.contains(&f.amb.mul(a, b)));
            }
        }
    }
}

#[test]
fn closure_is_deterministic() {
    let a = fixture(Variant::Dihedral, 4, 3, 3);
    let b = fixture(Variant::Dihedral, 4, 3, 3);
    assert_eq!(a.g.elements(), b.g.elements());
    for i in 0..a.g.order() {
        assert_eq!(a.g.word(i), b.g.word(i));
    }
}

#[test]
fn derived_subgroup_and_class() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    let dg = f.g.derived_subgroup();
    assert_eq!(dg.order(), 4);
    assert!(dg.is_cyclic());
    let ts2 = f.amb.pow(&f.amb.r(), 2);
    assert!(dg.same_elements(&FiniteGroup::closure(&f.amb, &[ts2]).unwrap()));
    assert!(f.h.derived_subgroup().same_elements(&dg));
    assert_eq!(f.g.nilpotency_class(), 3);
    assert_eq!(f.h.nilpotency_class(), 3);
    let p = FiniteGroup::closure(&f.amb, &[f.amb.t(), f.amb.r(), f.amb.c(), f.amb.d()]).unwrap();
    assert_eq!(p.nilpotency_class(), 3);
    let k = FiniteGroup::closure(&f.amb, &[f.amb.t(), f.amb.r()]).unwrap();
    assert_eq!(k.nilpotency_class(), 3);
    assert!(klein().derived_subgroup().is_trivial());
}

#[test]
fn lower_central_terms_are_powers_of_ts() {
    for (n, m, k) in [(4, 3, 3), (5, 4, 4)] {
        let f = fixture(Variant::Dihedral, n, m, k);
        let series = f.g.lower_central_series();
        for (i, term) in series.terms.iter().enumerate().skip(1) {
            let gen = f.amb.pow(&f.amb.r(), 1 << i);
            assert!(term.same_elements(&FiniteGroup::closure(&f.amb, &[gen]).unwrap()), "gamma_{}", i + 1);
        }
        assert_eq!(series.terms.len() as u32, k + 1);
    }
}

#[test]
fn frattini_subgroups() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    let phi = f.g.frattini();
    assert_eq!(phi.order(), 128);
    let want = FiniteGroup::closure(
        &f.amb,
        &[f.amb.pow(&f.amb.r(), 2), f.amb.pow(&f.amb.c(), 2), f.amb.pow(&f.amb.d(), 2)],
    )
    .unwrap();
    assert!(phi.same_elements(&want));
    assert!(f.h.frattini().same_elements(&want));
    assert_eq!(f.g.order() / phi.order(), 4);
    assert!(klein().frattini().is_trivial());
    // power subgroup is the generated subgroup
    let squares = f.g.power_subgroup(1);
    assert!(squares.is_subgroup_of(&phi));
}

#[test]
fn center_and_centralizers() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    let dg = f.g.derived_subgroup();
    let phi_dg = dg.frattini();
    let n = f.g.centralizer_mod(&dg, &phi_dg).unwrap();
    assert!(n.same_elements(&f.g));
    let k4 = klein();
    assert!(k4.center().same_elements(&k4));
    // x² = c² central in G, z² not central in H
    let z2 = f.amb.pow(&f.z, 2);
    assert!(f.g.center().contains(&f.amb.pow(&f.x, 2)));
    assert!(!f.h.center().contains(&z2));
}

#[test]
fn centralizer_mod_rejects_non_normal() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    let k = FiniteGroup::closure(&f.amb, &[f.amb.t(), f.amb.r()]).unwrap();
    let t_sub = FiniteGroup::closure(&f.amb, &[f.amb.t()]).unwrap();
    assert!(matches!(k.centralizer_mod(&k, &t_sub), Err(Error::NotNormal(_))));
}

#[test]
fn maximal_subgroups_of_g() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    let maxes = f.g.maximal_subgroups();
    assert_eq!(maxes.len(), 3);
    assert!(maxes.iter().all(|m| m.order() == 256));
    let abelian: Vec<_> = maxes.iter().filter(|m| m.is_abelian()).collect();
    assert_eq!(abelian.len(), 1);
    let want = FiniteGroup::closure(
        &f.amb,
        &[f.amb.mul(&f.x, &f.y), f.amb.pow(&f.amb.c(), 2), f.amb.pow(&f.amb.d(), 2)],
    )
    .unwrap();
    assert!(abelian[0].same_elements(&want));
    assert_eq!(abelian[0].exponent(), 16);
    let hmax: Vec<_> = f.h.maximal_subgroups().into_iter().filter(|m| m.is_abelian()).collect();
    assert_eq!(hmax.len(), 1);
    assert_eq!(hmax[0].exponent(), 8);
}

fn class_count_oracle(g: &FiniteGroup) -> usize {
    let amb = g.ambient();
    let mut orbits: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
    for a in g.elements() {
        let orbit: BTreeSet<GroupElement> = g.elements().iter().map(|h| amb.conjugate(a, h)).collect();
        orbits.insert(orbit.into_iter().collect());
    }
    orbits.len()
}

#[test]
fn conjugacy_classes() {
    let k4 = klein();
    assert!(k4.conjugacy_classes().iter().all(|c| c.len() == 1));
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    let classes = f.g.conjugacy_classes();
    let ts4 = f.amb.pow(&f.amb.r(), 4);
    let idx = f.g.index_of(&ts4).unwrap();
    let cls = classes.iter().find(|c| c.contains(&idx)).unwrap();
    assert_eq!(cls.len(), 1);
    let dg = f.g.derived_subgroup().order();
    assert!(classes.iter().all(|c| c.len() <= dg && c.len().is_power_of_two()));
    let total: usize = classes.iter().map(Vec::len).sum();
    assert_eq!(total, 512);
    let oracle = class_count_oracle(&f.g);
    assert_eq!(classes.len(), oracle);
    // frozen from the orbit oracle
    assert_eq!(oracle, 224);
}

#[test]
fn jennings_series_small_cases() {
    let c8 = cyclic(2, 3);
    assert_eq!(c8.jennings_series().factor_orders(), vec![2, 2, 1, 2]);
    assert_eq!(klein().jennings_series().factor_orders(), vec![4]);
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    let gm = f.g.maximal_subgroups().into_iter().find(FiniteGroup::is_abelian).unwrap();
    let hm = f.h.maximal_subgroups().into_iter().find(FiniteGroup::is_abelian).unwrap();
    assert_ne!(gm.jennings_series().factor_orders(), hm.jennings_series().factor_orders());
    for term in f.g.jennings_series().terms.windows(2) {
        assert!(term[1].is_subgroup_of(&term[0]));
    }
}

#[test]
fn jennings_of_abelian_matches_power_subgroups() {
    for grp in [cyclic(2, 4), klein(), fixture(Variant::Dihedral, 4, 3, 3).g.maximal_subgroups().into_iter().find(FiniteGroup::is_abelian).unwrap(), cyclic(3, 3)] {
        let p = grp.ambient().p() as usize;
        let series = grp.jennings_series();
        for (idx, term) in series.terms.iter().enumerate() {
            let i = idx + 1;
            let mut s = 0u32;
            while p.pow(s) < i {
                s += 1;
            }
            assert!(term.same_elements(&grp.power_subgroup(s)), "M_{i}");
        }
    }
}

#[test]
fn recognition_clauses() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    let xi = f.g.index_of(&f.x).unwrap();
    let yi = f.g.index_of(&f.y).unwrap();
    assert!(recognize_g(&f.g, xi, yi, 4, 3, 3).recognized);
    let xh = f.h.index_of(&f.x).unwrap();
    let zh = f.h.index_of(&f.z).unwrap();
    let rec = recognize_g(&f.h, xh, zh, 4, 3, 3);
    assert!(!rec.recognized);
    assert_eq!(rec.failing_clause, Some("b_squared_central"));
    // [z², x] = (ts)^{-4}
    let z2 = f.amb.pow(&f.z, 2);
    assert_eq!(f.amb.commutator(&z2, &f.x), f.amb.zpow(&f.amb.r(), -4));
    let c4 = cyclic(2, 2);
    let ci = c4.index_of(&c4.ambient().c()).unwrap();
    let rec = recognize_g(&c4, ci, ci, 2, 2, 1);
    assert!(!rec.recognized);
    assert_eq!(rec.failing_clause, Some("group_order"));
}

#[test]
fn presentation_search() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    assert!(presentation_hom_search(&f.g, 4, 3, 3, Relations::G).unwrap().is_some());
    assert!(presentation_hom_search(&f.h, 4, 3, 3, Relations::G).unwrap().is_none());
    assert!(presentation_hom_search(&f.h, 4, 3, 3, Relations::H).unwrap().is_some());
    assert!(matches!(presentation_hom_search(&f.h, 4, 3, 2, Relations::H), Err(Error::OrderMismatch { .. })));
}

#[test]
fn brute_force_isomorphism() {
    let f = fixture(Variant::Dihedral, 4, 3, 3);
    assert!(isomorphic_bruteforce(&f.g, &f.g, DEFAULT_ORACLE_BOUND).unwrap());
    assert!(!isomorphic_bruteforce(&f.g, &f.h, DEFAULT_ORACLE_BOUND).unwrap());
    let sd = fixture(Variant::Semidihedral, 4, 3, 3);
    assert!(isomorphic_bruteforce(&f.g, &sd.g, DEFAULT_ORACLE_BOUND).unwrap());
    assert!(matches!(isomorphic_bruteforce(&f.g, &f.g, 256), Err(Error::OracleBoundExceeded { .. })));
}

#[test]
fn recognition_agrees_with_oracle() {
    let reference = fixture(Variant::Dihedral, 4, 3, 3).g;
    let mut cases: Vec<(FiniteGroup, GroupElement, GroupElement)> = Vec::new();
    for variant in [Variant::Dihedral, Variant::Semidihedral, Variant::Quaternion] {
        let f = fixture(variant, 4, 3, 3);
        cases.push((f.g.clone(), f.x, f.y));
        cases.push((f.h.clone(), f.x, f.z));
    }
    let amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 1, 5, 4).unwrap());
    let ab = FiniteGroup::closure(&amb, &[amb.c(), amb.d()]).unwrap();
    cases.push((ab, amb.c(), amb.d()));
    for (grp, a, b) in &cases {
        let rec = recognize_g(grp, grp.index_of(a).unwrap(), grp.index_of(b).unwrap(), 4, 3, 3).recognized;
        let iso = isomorphic_bruteforce(grp, &reference, DEFAULT_ORACLE_BOUND).unwrap();
        assert_eq!(rec, iso, "{:?}", grp.ambient().variant());
    }
}

#[test]
fn heisenberg_elements() {
    let amb = Arc::new(AmbientDescriptor::new(3, Variant::Heisenberg, 1, 2, 1).unwrap());
    let k = FiniteGroup::closure(&amb, &[amb.s(), amb.s1()]).unwrap();
    assert_eq!(k.order(), 27);
    assert_eq!(k.nilpotency_class(), 2);
    assert_eq!(k.exponent(), 3);
    let p = FiniteGroup::closure(&amb, &[amb.s(), amb.s1(), amb.c(), amb.d()]).unwrap();
    assert_eq!(p.order(), 729);
}

#[test]
fn split_maximal_class_tables() {
    let table = Arc::new(KTable::split_maximal_class(3, 4).unwrap());
    let amb = Arc::new(AmbientDescriptor::with_table(table, 1, 1, DEFAULT_GUARD).unwrap());
    let k = FiniteGroup::closure(&amb, &[amb.s(), amb.s1()]).unwrap();
    assert_eq!(k.order(), 243);
    assert_eq!(k.nilpotency_class(), 4);
    assert!(k.maximal_subgroups().iter().any(FiniteGroup::is_abelian));
    // p = 2 reproduces the dihedral group of order 16
    let t2 = Arc::new(KTable::split_maximal_class(2, 3).unwrap());
    let amb2 = Arc::new(AmbientDescriptor::with_table(t2, 1, 1, DEFAULT_GUARD).unwrap());
    let k2 = FiniteGroup::closure(&amb2, &[amb2.s(), amb2.s1()]).unwrap();
    let d16_amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 3, 1, 1).unwrap());
    let d16 = FiniteGroup::closure(&d16_amb, &[d16_amb.t(), d16_amb.s()]).unwrap();
    assert!(isomorphic_bruteforce(&k2, &d16, DEFAULT_ORACLE_BOUND).unwrap());
}

#[test]
fn order_census_of_cyclic() {
    assert_eq!(cyclic(2, 3).order_census(), vec![(1, 1), (2, 1), (4, 2), (8, 4)]);
}
