//! The counterexample family `G = ⟨x, y⟩`, `H = ⟨x, z⟩` inside `P = K × C × D`
//! and its odd-prime analogue `G = ⟨sc, s₁d⟩`.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{
    isomorphic_bruteforce, presentation_hom_search, AmbientDescriptor, FiniteGroup, GroupElement, KTable, Relations,
    Variant, DEFAULT_GUARD, DEFAULT_ORACLE_BOUND,
};
use crate::invariants::compute_n;
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub p: u32,
    pub variant: Variant,
    pub n: u32,
    pub m: u32,
    pub k: u32,
}

impl FamilyParams {
    pub fn two(variant: Variant, n: u32, m: u32, k: u32) -> Self {
        Self { p: 2, variant, n, m, k }
    }

    /// `n > m ≥ k ≥ 3`.
    pub fn validate_two(&self) -> Result<()> {
        if self.p != 2 {
            return Err(Error::InvalidParameters("2-case parameters need p = 2".into()));
        }
        if !self.variant.is_two_group() {
            return Err(Error::InvalidParameters(format!("variant {} is not a 2-group variant", self.variant)));
        }
        if !(self.n > self.m && self.m >= self.k && self.k >= 3) {
            return Err(Error::InvalidParameters(format!(
                "need n > m >= k >= 3, got n = {}, m = {}, k = {}",
                self.n, self.m, self.k
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub params: FamilyParams,
    pub ambient: Arc<AmbientDescriptor>,
    pub p_group: Arc<FiniteGroup>,
    /// `M = ⟨ts, c, d⟩` (2-case only).
    pub m_group: Option<Arc<FiniteGroup>>,
    pub g: Arc<FiniteGroup>,
    /// `H = ⟨x, z⟩` (2-case only).
    pub h: Option<Arc<FiniteGroup>>,
    /// `K` as a subgroup of `P`.
    pub k_group: Arc<FiniteGroup>,
    pub x: GroupElement,
    pub y: GroupElement,
    pub z: Option<GroupElement>,
}

/// Builds the 2-case instance (`x = tc`, `y = sd`, `z = tsd`) or, for odd `p`
/// with the Heisenberg `K`, the instance `G = ⟨sc, s₁d⟩` where `|c| = p^m` and
/// `|d| = p^n`.
pub fn build_family(params: FamilyParams) -> Result<FamilyInstance> {
    build_family_with_guard(params, DEFAULT_GUARD)
}

pub fn build_family_with_guard(params: FamilyParams, guard: usize) -> Result<FamilyInstance> {
    if params.p == 2 {
        params.validate_two()?;
        let amb = Arc::new(AmbientDescriptor::with_guard(2, params.variant, params.k, params.n, params.m, guard)?);
        let (t, s, c, d) = (amb.t(), amb.s(), amb.c(), amb.d());
        let x = amb.mul(&t, &c);
        let y = amb.mul(&s, &d);
        let z = amb.mul(&amb.mul(&t, &s), &d);
        two_case(params, amb, x, y, z, guard)
    } else {
        if params.variant != Variant::Heisenberg {
            return Err(Error::InvalidParameters(format!(
                "odd p needs variant heisenberg or a table K, got {}",
                params.variant
            )));
        }
        let amb = Arc::new(AmbientDescriptor::with_guard(params.p, params.variant, params.k, params.m, params.n, guard)?);
        odd_case(params, amb, guard)
    }
}

/// Odd-p instance over a multiplication-table `K = ⟨s, s₁⟩`.
pub fn build_family_table(table: Arc<KTable>, n: u32, m: u32, guard: usize) -> Result<FamilyInstance> {
    if table.p() == 2 {
        return Err(Error::InvalidParameters("table families are the odd-p construction".into()));
    }
    let amb = Arc::new(AmbientDescriptor::with_table(table, m, n, guard)?);
    let params = FamilyParams { p: amb.p(), variant: Variant::Table, n, m, k: amb.k() };
    odd_case(params, amb, guard)
}

fn odd_case(params: FamilyParams, amb: Arc<AmbientDescriptor>, guard: usize) -> Result<FamilyInstance> {
    let x = amb.mul(&amb.s(), &amb.c());
    let y = amb.mul(&amb.s1(), &amb.d());
    let g = FiniteGroup::closure_with_guard(&amb, &[x, y], guard)?;
    let k_group = FiniteGroup::closure_with_guard(&amb, &[amb.s(), amb.s1()], guard)?;
    let p_group = FiniteGroup::closure_with_guard(&amb, &[amb.s(), amb.s1(), amb.c(), amb.d()], guard)?;
    Ok(FamilyInstance {
        params,
        ambient: amb,
        p_group: Arc::new(p_group),
        m_group: None,
        g: Arc::new(g),
        h: None,
        k_group: Arc::new(k_group),
        x,
        y,
        z: None,
    })
}

fn two_case(
    params: FamilyParams,
    amb: Arc<AmbientDescriptor>,
    x: GroupElement,
    y: GroupElement,
    z: GroupElement,
    guard: usize,
) -> Result<FamilyInstance> {
    let (t, s, c, d) = (amb.t(), amb.s(), amb.c(), amb.d());
    let ts = amb.mul(&t, &s);
    let p_group = FiniteGroup::closure_with_guard(&amb, &[t, s, c, d], guard)?;
    let m_group = FiniteGroup::closure_with_guard(&amb, &[ts, c, d], guard)?;
    let k_group = FiniteGroup::closure_with_guard(&amb, &[t, s], guard)?;
    let g = FiniteGroup::closure_with_guard(&amb, &[x, y], guard)?;
    let h = FiniteGroup::closure_with_guard(&amb, &[x, z], guard)?;
    Ok(FamilyInstance {
        params,
        ambient: amb,
        p_group: Arc::new(p_group),
        m_group: Some(Arc::new(m_group)),
        g: Arc::new(g),
        h: Some(Arc::new(h)),
        k_group: Arc::new(k_group),
        x,
        y,
        z: Some(z),
    })
}

impl FamilyInstance {
    pub fn is_two_case(&self) -> bool {
        self.params.p == 2
    }

    /// The same instance with `G` rebuilt as `⟨x, y'⟩`.
    pub fn with_y(&self, y: GroupElement) -> Result<FamilyInstance> {
        let mut out = self.clone();
        out.y = y;
        out.g = Arc::new(FiniteGroup::closure(&self.ambient, &[self.x, y])?);
        Ok(out)
    }

    pub fn h(&self) -> Result<&Arc<FiniteGroup>> {
        self.h.as_ref().ok_or_else(|| Error::Precondition("instance has no H".into()))
    }

    pub fn z(&self) -> Result<GroupElement> {
        self.z.ok_or_else(|| Error::Precondition("instance has no z".into()))
    }

    /// `ts`, the rotation of `K`.
    pub fn ts(&self) -> GroupElement {
        self.ambient.mul(&self.ambient.t(), &self.ambient.s())
    }
}

fn closure(amb: &Arc<AmbientDescriptor>, gens: &[GroupElement]) -> FiniteGroup {
    FiniteGroup::closure(amb, gens).expect("subgroup of an enumerated group")
}

/// Checks every clause (i)–(vii) of the structure of `P`, `M`, `G`, `H`.
pub fn verify_structure(inst: &FamilyInstance, oracle_bound: usize) -> Result<VerificationReport> {
    if !inst.is_two_case() {
        return Err(Error::Precondition("clause verification needs a 2-case instance".into()));
    }
    let amb = &inst.ambient;
    let FamilyParams { n, m, k, .. } = inst.params;
    let g = &inst.g;
    let h = inst.h()?;
    let p = &inst.p_group;
    let mm = inst.m_group.as_ref().expect("2-case has M");
    let kk = &inst.k_group;
    let (c, d) = (amb.c(), amb.d());
    let (c2, d2) = (amb.pow(&c, 2), amb.pow(&d, 2));
    let ts = inst.ts();
    let ts2 = amb.pow(&ts, 2);
    let (x, y, z) = (inst.x, inst.y, inst.z()?);
    let mut report = VerificationReport::new();

    let expected = 1usize << (n + m + k - 1);
    let pass = g.order() == expected
        && h.order() == expected
        && p.order() == 4 * expected
        && mm.order() == 2 * expected;
    report.push(
        "orders",
        "|G| = |H| = 2^{n+m+k-1}, |M| = 2^{n+m+k}, |P : M| = 2",
        pass,
        json!({"G": g.order(), "H": h.order(), "P": p.order(), "M": mm.order(), "expected": expected}),
    );

    let target = closure(amb, &[ts2]);
    let derived = [g.derived_subgroup(), h.derived_subgroup(), p.derived_subgroup(), kk.derived_subgroup()];
    let classes = [g.nilpotency_class(), h.nilpotency_class(), p.nilpotency_class(), kk.nilpotency_class()];
    let gamma_ok = [g, h].iter().all(|grp| {
        grp.lower_central_series()
            .terms
            .iter()
            .enumerate()
            .skip(1)
            .all(|(i, term)| term.same_elements(&closure(amb, &[amb.pow(&ts, 1 << i)])))
    });
    let pass = derived.iter().all(|dd| dd.same_elements(&target))
        && target.is_cyclic()
        && target.order() == 1 << (k - 1)
        && classes.iter().all(|&cl| cl == k as usize)
        && gamma_ok;
    report.push(
        "derived_subgroups",
        "G' = H' = P' = K' = <(ts)^2> cyclic of order 2^{k-1}; class(G) = class(H) = class(P) = class(K) = k; gamma_i = <(ts)^{2^{i-1}}>",
        pass,
        json!({"derived_order": target.order(), "cyclic": target.is_cyclic(), "classes": classes, "gamma_terms_match": gamma_ok}),
    );

    let phi_target = closure(amb, &[ts2, c2, d2]);
    let phis = [g.frattini(), h.frattini(), p.frattini()];
    let pass = phis.iter().all(|f| f.same_elements(&phi_target));
    report.push(
        "frattini",
        "Phi(G) = Phi(H) = Phi(P) = <(ts)^2, c^2, d^2>",
        pass,
        json!({"order": phi_target.order(), "orders": phis.iter().map(FiniteGroup::order).collect::<Vec<_>>()}),
    );

    let pass = mm.is_abelian() && mm.is_subgroup_of(p) && p.order() == 2 * mm.order();
    report.push("m_abelian_maximal", "M = <ts, c, d> abelian, |P : M| = 2", pass, json!({"abelian": mm.is_abelian()}));

    let gm = g.intersection(mm)?;
    let gm_target = closure(amb, &[amb.mul(&x, &y), c2, d2]);
    let pass = gm.same_elements(&gm_target) && g.order() == 2 * gm.order();
    report.push(
        "g_meet_m",
        "G ∩ M = <xy, c^2, d^2>, |G : G ∩ M| = 2",
        pass,
        json!({"order": gm.order()}),
    );

    let hm = h.intersection(mm)?;
    let hm_target = closure(amb, &[z, c2, d2]);
    let pass = hm.same_elements(&hm_target) && h.order() == 2 * hm.order();
    report.push(
        "h_meet_m",
        "H ∩ M = <z, c^2, d^2>, |H : H ∩ M| = 2",
        pass,
        json!({"order": hm.order()}),
    );

    let exp_g = gm.exponent();
    let exp_h = hm.exponent();
    let abelian_max = |grp: &FiniteGroup| -> Vec<FiniteGroup> {
        grp.maximal_subgroups().into_iter().filter(FiniteGroup::is_abelian).collect()
    };
    let ag = abelian_max(g);
    let ah = abelian_max(h);
    let unique = ag.len() == 1 && ah.len() == 1 && ag[0].same_elements(&gm) && ah[0].same_elements(&hm);
    let invariant_route = unique && exp_g != exp_h;
    let oracle = if g.order() <= oracle_bound {
        Some(!isomorphic_bruteforce(g.as_ref(), h.as_ref(), oracle_bound)?)
    } else {
        None
    };
    let pass = exp_g == 1 << n && exp_h == 1 << (n - 1) && invariant_route && oracle != Some(false);
    report.push(
        "non_isomorphism",
        "exp(G ∩ M) = 2^n, exp(H ∩ M) = 2^{n-1}, each is the unique abelian maximal subgroup, hence G ≇ H",
        pass,
        json!({
            "exp_g_meet_m": exp_g,
            "exp_h_meet_m": exp_h,
            "abelian_maximal_counts": [ag.len(), ah.len()],
            "invariant_route": invariant_route,
            "bruteforce_non_isomorphic": oracle,
        }),
    );
    Ok(report)
}

/// Pairwise isomorphism of the dihedral, semidihedral and quaternion
/// instances, with the dihedral `G` versus `H` as a control.
pub fn compare_variants(n: u32, m: u32, k: u32, oracle_bound: usize) -> Result<VerificationReport> {
    let variants = [Variant::Dihedral, Variant::Semidihedral, Variant::Quaternion];
    let insts: Vec<FamilyInstance> =
        variants.iter().map(|&v| build_family(FamilyParams::two(v, n, m, k))).collect::<Result<_>>()?;
    let size = insts[0].g.order();
    if size > oracle_bound {
        return Err(Error::OracleBoundExceeded { order: size, bound: oracle_bound });
    }
    let mut report = VerificationReport::new();
    for (label, pick) in [("g", 0usize), ("h", 1usize)] {
        let groups: Vec<&FiniteGroup> =
            insts.iter().map(|i| if pick == 0 { i.g.as_ref() } else { i.h.as_ref().unwrap().as_ref() }).collect();
        for a in 0..3 {
            for b in a + 1..3 {
                let iso = isomorphic_bruteforce(groups[a], groups[b], oracle_bound)?;
                report.push(
                    format!("{label}_{}_{}", variants[a].name(), variants[b].name()),
                    format!("{label}({}) ≅ {label}({})", variants[a].name(), variants[b].name()),
                    iso,
                    json!({"isomorphic": iso}),
                );
            }
        }
        let relations = if pick == 0 { Relations::G } else { Relations::H };
        for (inst, grp) in insts.iter().zip(&groups) {
            let w = presentation_hom_search(*grp, n, m, k, relations)?;
            let name = inst.params.variant.name();
            report.push(
                format!("{label}_{name}_presentation"),
                format!(
                    "{label}({name}) = <a, b | a^{{2^n}}, b^{{2^m}}, u = [b,a], u^{{2^{{k-1}}}}, b^a = bu, u^a = u^{{-1}}, u^b = u^{}>",
                    if pick == 0 { "{-1}" } else { "" }
                ),
                w.is_some(),
                json!({"witness": w}),
            );
        }
    }
    let control = isomorphic_bruteforce(insts[0].g.as_ref(), insts[0].h.as_ref().unwrap().as_ref(), oracle_bound)?;
    report.push("control_g_h_dihedral", "G(dihedral) ≇ H(dihedral)", !control, json!({"isomorphic": control}));
    Ok(report)
}

/// Verifies the declared properties of the odd-p construction: `K` of
/// maximal class with an abelian maximal subgroup, `G` two-generated, and
/// `N = C_G(G'/Φ(G'))` abelian of index `p`.
pub fn verify_odd(inst: &FamilyInstance) -> VerificationReport {
    let p = inst.params.p as usize;
    let kk = &inst.k_group;
    let mut report = VerificationReport::new();
    let log_k = (kk.order() as f64).log(p as f64).round() as usize;
    let class = kk.nilpotency_class();
    report.push(
        "k_maximal_class",
        "class(K) = log_p|K| - 1",
        class + 1 == log_k,
        json!({"order": kk.order(), "class": class}),
    );
    let abelian_max = kk.maximal_subgroups().iter().filter(|s| s.is_abelian()).count();
    report.push(
        "k_abelian_maximal",
        "K has an abelian subgroup of index p",
        abelian_max > 0,
        json!({"abelian_maximal_subgroups": abelian_max}),
    );
    let phi = inst.g.frattini();
    let rank = ((inst.g.order() / phi.order()) as f64).log(p as f64).round() as usize;
    report.push("g_two_generated", "|G : Phi(G)| = p^2", rank == 2, json!({"order": inst.g.order(), "frattini_rank": rank}));
    let nn = compute_n(&inst.g);
    let index = inst.g.order() / nn.order();
    report.push(
        "n_abelian",
        "N = C_G(G'/Phi(G')) is abelian",
        nn.is_abelian(),
        json!({"order": nn.order(), "abelian": nn.is_abelian()}),
    );
    report.push("n_index_p", "|G : N| = p", index == p, json!({"index": index}));
    report
}

/// Runs the clause verification with the default oracle bound.
pub fn verify_default(inst: &FamilyInstance) -> Result<VerificationReport> {
    verify_structure(inst, DEFAULT_ORACLE_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(n: u32, m: u32, k: u32) -> FamilyInstance {
        build_family(FamilyParams::two(Variant::Dihedral, n, m, k)).unwrap()
    }

    #[test]
    fn reference_orders() {
        let i = inst(4, 3, 3);
        assert_eq!((i.g.order(), i.h().unwrap().order()), (512, 512));
        assert_eq!(i.p_group.order(), 2048);
        assert_eq!(i.m_group.as_ref().unwrap().order(), 1024);
        assert_eq!(i.ambient.order(), 2048);
    }

    #[test]
    fn rejects_bad_parameters() {
        for (n, m, k) in [(3, 3, 3), (4, 3, 2), (4, 2, 3)] {
            assert!(matches!(
                build_family(FamilyParams::two(Variant::Dihedral, n, m, k)),
                Err(Error::InvalidParameters(_))
            ));
        }
        assert!(build_family(FamilyParams { p: 3, variant: Variant::Dihedral, n: 2, m: 1, k: 1 }).is_err());
    }

    #[test]
    fn clauses_hold_at_reference() {
        let r = verify_default(&inst(4, 3, 3)).unwrap();
        assert_eq!(r.clauses.len(), 7);
        assert!(r.all_pass(), "{:?}", r.first_failure());
        let c = r.get("non_isomorphism").unwrap();
        assert_eq!(c.data["exp_g_meet_m"], 16);
        assert_eq!(c.data["exp_h_meet_m"], 8);
    }

    #[test]
    fn swapping_y_for_z_breaks_non_isomorphism() {
        let i = inst(4, 3, 3);
        let tampered = i.with_y(i.z.unwrap()).unwrap();
        let r = verify_default(&tampered).unwrap();
        assert!(!r.passed("non_isomorphism"));
    }

    #[test]
    fn odd_instance_shapes() {
        let i = build_family(FamilyParams { p: 3, variant: Variant::Heisenberg, n: 2, m: 1, k: 1 }).unwrap();
        assert_eq!(i.ambient.order(), 729);
        assert_eq!(i.ambient.c_order(), 3);
        assert_eq!(i.ambient.d_order(), 9);
        assert!(i.h.is_none());
        let r = verify_odd(&i);
        assert!(r.passed("k_maximal_class"));
        assert!(r.passed("k_abelian_maximal"));
        assert!(r.passed("g_two_generated"));
    }

    #[test]
    fn odd_table_instance_has_abelian_n_of_index_p() {
        let t = Arc::new(KTable::split_maximal_class(3, 4).unwrap());
        let i = build_family_table(t, 1, 1, DEFAULT_GUARD).unwrap();
        let r = verify_odd(&i);
        assert!(r.all_pass(), "{:?}", r.first_failure());
    }

    #[test]
    fn lemma3_hypotheses() {
        for (n, m, k) in [(4, 3, 3), (5, 3, 3), (5, 4, 3)] {
            let i = inst(n, m, k);
            let amb = &i.ambient;
            let (x2, y2) = (amb.pow(&i.x, 2), amb.pow(&i.y, 2));
            let sq = closure(amb, &[x2, y2]);
            let cd = closure(amb, &[amb.pow(&amb.c(), 2), amb.pow(&amb.d(), 2)]);
            assert!(sq.same_elements(&cd));
            assert!(sq.intersection(&i.g.derived_subgroup()).unwrap().is_trivial());
            let xz = amb.mul(&amb.inv(&i.x), &i.z.unwrap());
            let expect = amb.mul(&amb.zpow(&amb.c(), -2), &amb.pow(&amb.d(), 2));
            assert_eq!(amb.pow(&xz, 2), expect);
        }
    }

    #[test]
    fn two_case_n_is_whole_group() {
        let i = inst(4, 3, 3);
        assert!(compute_n(&i.g).same_elements(&i.g));
        assert!(compute_n(i.h().unwrap()).same_elements(i.h().unwrap()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]
        #[test]
        fn clauses_hold_across_parameters(
            (n, m, k) in prop::sample::select(vec![(4u32, 3u32, 3u32), (5, 3, 3), (5, 4, 3), (6, 3, 3)]),
            variant in prop::sample::select(vec![Variant::Dihedral, Variant::Semidihedral, Variant::Quaternion]),
        ) {
            let i = build_family(FamilyParams::two(variant, n, m, k)).unwrap();
            let r = verify_structure(&i, 512).unwrap();
            prop_assert!(r.all_pass(), "{:?}", r.first_failure());
        }
    }
}
