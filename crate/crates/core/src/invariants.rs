//! Algebra-determined invariants of a `p`-group: the subgroup
//! `N = C_G(G'/Φ(G'))`, Jennings data of `N`, ideal dimensions and class-sum
//! counts.

use serde::Serialize;

use crate::algebra::{FpVector, GroupAlgebra, RowSpace};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};

/// `N = C_G(G'/Φ(G'))`; `G` itself when `G` is abelian.
pub fn compute_n(g: &FiniteGroup) -> FiniteGroup {
    if g.is_abelian() {
        return g.clone();
    }
    let derived = g.derived_subgroup();
    let phi = derived.frattini();
    g.centralizer_mod(&derived, &phi).expect("Φ(G') is characteristic in G'")
}

/// Elementary divisors of an abelian `p`-group, descending, from the orders
/// of the power subgroups `A^{p^s}`.
pub fn abelian_type(a: &FiniteGroup) -> Result<Vec<u64>> {
    if !a.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let p = a.ambient().p() as u64;
    // ranks[s] = number of cyclic factors of order > p^s
    let mut ranks = Vec::new();
    let mut prev = a.order();
    let mut s = 0;
    while prev > 1 {
        s += 1;
        let next = a.power_subgroup(s).order();
        ranks.push(log_p((prev / next) as u64, p));
        prev = next;
    }
    Ok(divisors_from_ranks(&ranks, p))
}

fn log_p(mut v: u64, p: u64) -> usize {
    let mut e = 0;
    while v > 1 {
        v /= p;
        e += 1;
    }
    e
}

fn divisors_from_ranks(ranks: &[usize], p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for s in (0..ranks.len()).rev() {
        let above = ranks.get(s + 1).copied().unwrap_or(0);
        for _ in above..ranks[s] {
            out.push(p.pow(s as u32 + 1));
        }
    }
    out
}

/// Elementary divisors recovered from the element-order histogram alone:
/// `|{g : g^{p^s} = 1}| = ∏ p^{min(s, e_i)}`.
pub fn abelian_type_from_order_census(census: &[(u64, usize)], p: u64) -> Vec<u64> {
    let max = census.iter().map(|&(o, _)| o).max().unwrap_or(1);
    let top = log_p(max, p);
    let omega: Vec<usize> =
        (0..=top).map(|s| census.iter().filter(|&&(o, _)| o <= p.pow(s as u32)).map(|&(_, c)| c).sum()).collect();
    // log_p |Ω_{s+1}/Ω_s| = number of factors with e_i > s
    let ranks: Vec<usize> = omega.windows(2).map(|w| log_p((w[1] / w[0]) as u64, p)).collect();
    divisors_from_ranks(&ranks, p)
}

/// `(dim I(N), dim I(N) + I(G')·F_pG)` where `I(N)` is spanned by `n − 1` and
/// `I(G')·F_pG` by `(w − 1)g` for generators `w` of `G'`.
pub fn ideal_subring_dim(alg: &GroupAlgebra, n: &FiniteGroup) -> Result<(usize, usize)> {
    let g = alg.group();
    if !n.is_subgroup_of(g) {
        return Err(Error::NotInGroup);
    }
    let p = alg.p();
    let dim = alg.dim();
    let diff = |a: usize, b: usize| {
        let mut v = FpVector::zero(p, dim);
        v.add_at(a, 1);
        v.add_at(b, p - 1);
        v
    };
    let mut space = RowSpace::new(p, dim);
    for e in n.elements() {
        let i = g.index_of(e).expect("subgroup element");
        if i != 0 {
            space.insert(&diff(i, 0));
        }
    }
    let dim_n = space.dim();
    let derived = g.derived_subgroup();
    for w in derived.generators() {
        let wi = g.index_of(w).expect("derived subgroup element");
        for j in 0..dim {
            space.insert(&diff(alg.product_index(wi, j), j));
        }
    }
    Ok((dim_n, space.dim()))
}

/// `|G : C_G(y)|` together with whether `y^p` is central, for one generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub in_n: bool,
    pub pth_power_central: bool,
    pub centralizer_index: usize,
    /// `|G : C_G(y)| = p` whenever `y ∈ N` and `y^p ∉ Z(G)`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub group_id: String,
    pub p: u32,
    pub order: usize,
    pub n_order: usize,
    pub n_abelian: bool,
    pub n_index: usize,
    pub n_jennings_factors: Vec<usize>,
    pub ideal_dim_n: usize,
    pub ideal_subring_dim: usize,
    pub class_sum_pth_power_count: usize,
    pub phi_n_minus_z_n: usize,
    pub phi_n_minus_z_g: usize,
    pub abelian_type: Option<Vec<u64>>,
    /// `(class size, number of elements)` over `Φ(N) − Z(G)`.
    pub class_size_census: Vec<(usize, usize)>,
    /// `N` abelian of index `p`.
    pub proposition_applicable: bool,
    /// Depends on the chosen generators, so it is not compared by
    /// [`reports_invariant_equal`].
    pub generator_checks: Vec<GeneratorCheck>,
}

fn class_sizes(g: &FiniteGroup) -> Vec<usize> {
    let mut size = vec![0; g.order()];
    for class in g.conjugacy_classes() {
        for &i in &class {
            size[i] = class.len();
        }
    }
    size
}

pub fn proposition_report(id: impl Into<String>, alg: &GroupAlgebra) -> Result<InvariantReport> {
    let g = alg.group();
    let amb = g.ambient();
    let p = amb.p();
    let nn = compute_n(g);
    let n_index = g.order() / nn.order();
    let n_abelian = nn.is_abelian();
    let (ideal_dim_n, ideal_subring_dim) = ideal_subring_dim(alg, &nn)?;
    let phi_n = nn.frattini();
    let z_n = nn.center();
    let z_g = g.center();
    let sizes = class_sizes(g);
    let outside_zg: Vec<&GroupElement> = phi_n.elements().iter().filter(|e| !z_g.contains(e)).collect();
    let mut census: Vec<(usize, usize)> = Vec::new();
    for e in &outside_zg {
        let s = sizes[g.index_of(e).expect("subgroup element")];
        match census.iter_mut().find(|(size, _)| *size == s) {
            Some(entry) => entry.1 += 1,
            None => census.push((s, 1)),
        }
    }
    census.sort_unstable();
    let generator_checks = g
        .generators()
        .iter()
        .map(|y| {
            let in_n = nn.contains(y);
            let pth_power_central = z_g.contains(&amb.pow(y, p as u64));
            let centralizer_index = g.order() / g.centralizer_of(y).order();
            let holds = !in_n || pth_power_central || centralizer_index == p as usize;
            GeneratorCheck { generator: amb.format(y), in_n, pth_power_central, centralizer_index, holds }
        })
        .collect();
    Ok(InvariantReport {
        group_id: id.into(),
        p,
        order: g.order(),
        n_order: nn.order(),
        n_abelian,
        n_index,
        n_jennings_factors: nn.jennings_series().factor_orders(),
        ideal_dim_n,
        ideal_subring_dim,
        class_sum_pth_power_count: alg.class_sum_pth_power_count(),
        phi_n_minus_z_n: phi_n.elements().iter().filter(|e| !z_n.contains(e)).count(),
        phi_n_minus_z_g: outside_zg.len(),
        abelian_type: if n_abelian { Some(abelian_type(&nn)?) } else { None },
        class_size_census: census,
        proposition_applicable: n_abelian && n_index == p as usize,
        generator_checks,
    })
}

/// Equality of every group invariant in the reports: all fields except the
/// identifier and the generator-dependent checks.
pub fn reports_invariant_equal(a: &InvariantReport, b: &InvariantReport) -> bool {
    let strip = |r: &InvariantReport| InvariantReport { group_id: String::new(), generator_checks: Vec::new(), ..r.clone() };
    strip(a) == strip(b)
}

/// Number of classes `C ≠ D` with `Ĉ = D̂^p`, by comparing every `D̂^p` with
/// every class sum.
pub fn pairwise_pth_power_count(alg: &GroupAlgebra) -> usize {
    let sums = alg.class_sums();
    let powers: Vec<_> = sums.iter().map(|s| alg.pow(s, alg.p() as u64).expect("same algebra")).collect();
    (0..sums.len()).filter(|&c| (0..sums.len()).any(|d| d != c && powers[d] == sums[c])).count()
}

/// Number of classes `C` reached as `C = {d^p : d ∈ D}` from a class `D ≠ C`
/// with `|C| = |D|`, i.e. `|C_G(h)| = |C_G(h^p)|` for `h ∈ D`.
pub fn pth_power_classes_by_centralizers(g: &FiniteGroup) -> usize {
    let amb = g.ambient();
    let classes = g.conjugacy_classes();
    let mut class_of = vec![0; g.order()];
    for (ci, c) in classes.iter().enumerate() {
        for &i in c {
            class_of[i] = ci;
        }
    }
    let mut hit = vec![false; classes.len()];
    for (di, d) in classes.iter().enumerate() {
        let h = g.element(d[0]);
        let c = class_of[g.index_of(&amb.pow(&h, amb.p() as u64)).expect("closed")];
        if c != di && classes[c].len() == d.len() {
            hit[c] = true;
        }
    }
    hit.into_iter().filter(|&b| b).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{AmbientDescriptor, Variant};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn abelian(p: u32, n: u32, m: u32) -> FiniteGroup {
        let amb = Arc::new(AmbientDescriptor::new(p, if p == 2 { Variant::Dihedral } else { Variant::Heisenberg }, 1, n, m).unwrap());
        FiniteGroup::closure(&amb, &[amb.c(), amb.d()]).unwrap()
    }

    #[test]
    fn abelian_type_examples() {
        assert_eq!(abelian_type(&abelian(2, 3, 0)).unwrap(), vec![8]);
        assert_eq!(abelian_type(&abelian(2, 1, 1)).unwrap(), vec![2, 2]);
        assert_eq!(abelian_type(&abelian(3, 2, 1)).unwrap(), vec![9, 3]);
        let amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 3, 1, 1).unwrap());
        let k = FiniteGroup::closure(&amb, &[amb.t(), amb.r()]).unwrap();
        assert_eq!(abelian_type(&k), Err(Error::NotAbelian));
    }

    #[test]
    fn abelian_n_is_whole_group() {
        let g = abelian(2, 3, 2);
        assert!(compute_n(&g).same_elements(&g));
        let alg = GroupAlgebra::new(Arc::new(g));
        let r = proposition_report("ab", &alg).unwrap();
        assert_eq!(r.phi_n_minus_z_g, 0);
        assert!(r.class_size_census.is_empty());
        assert_eq!(r.abelian_type, Some(vec![8, 4]));
    }

    #[test]
    fn ideal_dims_match_quotient_formula() {
        let amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 3, 2, 1).unwrap());
        let g = Arc::new(FiniteGroup::closure(&amb, &[amb.t(), amb.r(), amb.c()]).unwrap());
        let alg = GroupAlgebra::new(g.clone());
        let derived = g.derived_subgroup();
        let (dn, dsum) = ideal_subring_dim(&alg, &derived).unwrap();
        assert_eq!(dn, derived.order() - 1);
        assert_eq!(dsum, g.order() - g.order() / derived.order());
        let (dn, dsum) = ideal_subring_dim(&alg, &g).unwrap();
        assert_eq!((dn, dsum), (g.order() - 1, g.order() - 1));
    }

    #[test]
    fn report_equality_ignores_identifier() {
        let g = Arc::new(abelian(2, 2, 1));
        let alg = GroupAlgebra::new(g);
        let a = proposition_report("a", &alg).unwrap();
        let b = proposition_report("b", &alg).unwrap();
        assert!(reports_invariant_equal(&a, &b));
        let other = GroupAlgebra::new(Arc::new(abelian(2, 3, 0)));
        assert!(!reports_invariant_equal(&a, &proposition_report("c", &other).unwrap()));
    }

    #[test]
    fn class_sum_count_routes_agree() {
        let variants = [Variant::Dihedral, Variant::Semidihedral, Variant::Quaternion];
        for (v, k, n) in variants.iter().flat_map(|&v| [(v, 3, 1), (v, 4, 1), (v, 3, 2)]) {
            let amb = Arc::new(AmbientDescriptor::new(2, v, k, n, 1).unwrap());
            let g = Arc::new(FiniteGroup::closure(&amb, &[amb.t(), amb.r(), amb.c()]).unwrap());
            let alg = GroupAlgebra::new(g.clone());
            let count = alg.class_sum_pth_power_count();
            assert_eq!(count, pairwise_pth_power_count(&alg), "{v} k={k} n={n}");
            assert_eq!(count, pth_power_classes_by_centralizers(&g), "{v} k={k} n={n}");
        }
        let amb = Arc::new(AmbientDescriptor::new(3, Variant::Heisenberg, 1, 2, 1).unwrap());
        let g = Arc::new(FiniteGroup::closure(&amb, &[amb.s(), amb.s1(), amb.c()]).unwrap());
        let alg = GroupAlgebra::new(g.clone());
        assert_eq!(alg.class_sum_pth_power_count(), pairwise_pth_power_count(&alg));
        assert_eq!(alg.class_sum_pth_power_count(), pth_power_classes_by_centralizers(&g));
    }

    proptest! {
        #[test]
        fn abelian_type_agrees_with_order_census(p in prop::sample::select(vec![2u32, 3]), n in 0u32..4, m in 0u32..3) {
            let g = abelian(p, n, m);
            let ty = abelian_type(&g).unwrap();
            prop_assert_eq!(ty.iter().product::<u64>(), g.order() as u64);
            prop_assert_eq!(abelian_type_from_order_census(&g.order_census(), p as u64), ty);
        }
    }
}
