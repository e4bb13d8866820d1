//! Enumerated subgroups of an ambient product and their structural subgroups.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::ambient::{AmbientDescriptor, GroupElement};
use crate::error::{Error, Result};

const NO_PARENT: u32 = u32::MAX;

/// A subgroup of `P`, enumerated in canonical element order.
///
/// Each element carries a derivation word over `generators`, stored as a
/// breadth-first spanning tree: `parent[i] = (j, g)` means
/// `elements[i] = elements[j] · generators[g]`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    ambient: Arc<AmbientDescriptor>,
    elements: Vec<GroupElement>,
    generators: Vec<GroupElement>,
    parent: Vec<(u32, u32)>,
    discovery: Vec<u32>,
}

impl FiniteGroup {
    /// Breadth-first closure of `gens` under right multiplication.
    ///
    /// Generators already contained in the subgroup generated by the earlier
    /// ones are dropped; `generators()` returns the retained list.
    pub fn closure(ambient: &Arc<AmbientDescriptor>, gens: &[GroupElement]) -> Result<Self> {
        Self::closure_with_guard(ambient, gens, super::DEFAULT_GUARD)
    }

    pub fn closure_with_guard(
        ambient: &Arc<AmbientDescriptor>,
        gens: &[GroupElement],
        guard: usize,
    ) -> Result<Self> {
        let mut builder = ClosureBuilder::new(ambient, guard);
        for g in gens {
            if !ambient.contains(g) {
                return Err(Error::AmbientMismatch);
            }
            builder.add(*g)?;
        }
        Ok(builder.finish())
    }

    /// Subgroup with exactly the given (sorted or unsorted) element set.
    pub fn from_elements(ambient: &Arc<AmbientDescriptor>, elems: &[GroupElement]) -> Result<Self> {
        let mut builder = ClosureBuilder::new(ambient, super::DEFAULT_GUARD);
        for g in elems {
            builder.add(*g)?;
            if builder.found.len() > elems.len() {
                return Err(Error::NotASubgroup);
            }
        }
        let g = builder.finish();
        if g.order() != elems.len() {
            return Err(Error::NotASubgroup);
        }
        Ok(g)
    }

    pub fn trivial(ambient: &Arc<AmbientDescriptor>) -> Self {
        ClosureBuilder::new(ambient, 1).finish()
    }

    pub fn ambient(&self) -> &Arc<AmbientDescriptor> {
        &self.ambient
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> GroupElement {
        self.elements[i]
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index_of(g).is_some()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.ambient.mul(g, h)
    }

    /// Derivation word of element `i` as generator indices.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = i;
        while self.parent[cur].0 != NO_PARENT {
            let (par, gen) = self.parent[cur];
            word.push(gen as usize);
            cur = par as usize;
        }
        word.reverse();
        word
    }

    /// Element indices in breadth-first discovery order; every element's
    /// tree parent precedes it.
    pub fn discovery_order(&self) -> &[u32] {
        &self.discovery
    }

    /// `(parent index, generator index)` of element `i`, `None` for the identity.
    pub fn tree_parent(&self, i: usize) -> Option<(usize, usize)> {
        let (p, g) = self.parent[i];
        (p != NO_PARENT).then_some((p as usize, g as usize))
    }

    pub fn evaluate_word(&self, word: &[usize]) -> GroupElement {
        word.iter().fold(self.ambient.identity(), |acc, &g| self.ambient.mul(&acc, &self.generators[g]))
    }

    /// Element-set equality.
    pub fn same_elements(&self, other: &FiniteGroup) -> bool {
        self.elements == other.elements
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        let target = self.order() as u64;
        self.elements.iter().any(|g| self.ambient.element_order(g) == target)
    }

    pub fn exponent(&self) -> u64 {
        self.elements.iter().map(|g| self.ambient.element_order(g)).max().unwrap_or(1)
    }

    pub fn is_normal_in(&self, other: &FiniteGroup) -> bool {
        self.generators.iter().all(|v| other.generators.iter().all(|u| self.contains(&self.ambient.conjugate(v, u))))
            && self.is_subgroup_of(other)
    }

    pub fn intersection(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        let common: Vec<GroupElement> = self.elements.iter().copied().filter(|g| other.contains(g)).collect();
        FiniteGroup::from_elements(&self.ambient, &common)
    }

    /// `[U, G]` for a subgroup `U` of `self`, generated by `[u, g]` with `u`
    /// ranging over the generators of `U` and `g` over all of `self`.
    pub fn commutator_with(&self, sub: &FiniteGroup) -> Result<FiniteGroup> {
        let amb = &self.ambient;
        let mut builder = ClosureBuilder::new(amb, super::DEFAULT_GUARD);
        for u in &sub.generators {
            for g in &self.elements {
                builder.add(amb.commutator(u, g))?;
            }
        }
        Ok(builder.finish())
    }

    /// `G' = ⟨[a, g] : a ∈ gens(G), g ∈ G⟩`.
    pub fn derived_subgroup(&self) -> FiniteGroup {
        self.commutator_with(self).expect("subgroup of an enumerated group fits the guard")
    }

    /// `γ₁ = G`, `γ_{i+1} = [γ_i, G]`, ending with the trivial group (or the
    /// first repeated term for a non-nilpotent input).
    pub fn lower_central_series(&self) -> SubgroupSeries {
        let mut terms = vec![self.clone()];
        loop {
            let last = terms.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let next = self.commutator_with(last).expect("fits guard");
            if next.order() == last.order() {
                break;
            }
            terms.push(next);
        }
        SubgroupSeries { kind: SeriesKind::LowerCentral, terms }
    }

    /// Nilpotency class: the `c` with `γ_{c+1} = 1`.
    pub fn nilpotency_class(&self) -> usize {
        self.lower_central_series().terms.len() - 1
    }

    /// Subgroup generated by all `g^{p^s}`.
    pub fn power_subgroup(&self, s: u32) -> FiniteGroup {
        let amb = &self.ambient;
        let e = (amb.p() as u64).pow(s);
        let mut builder = ClosureBuilder::new(amb, super::DEFAULT_GUARD);
        for g in &self.elements {
            builder.add(amb.pow(g, e)).expect("fits guard");
        }
        builder.finish()
    }

    /// `Φ(G) = G^p G'`.
    pub fn frattini(&self) -> FiniteGroup {
        let amb = &self.ambient;
        let derived = self.derived_subgroup();
        let mut builder = ClosureBuilder::new(amb, super::DEFAULT_GUARD);
        for g in derived.generators() {
            builder.add(*g).expect("fits guard");
        }
        for g in &self.elements {
            builder.add(amb.pow(g, amb.p() as u64)).expect("fits guard");
        }
        builder.finish()
    }

    pub fn center(&self) -> FiniteGroup {
        let amb = &self.ambient;
        let elems: Vec<GroupElement> = self
            .elements
            .iter()
            .copied()
            .filter(|g| self.generators.iter().all(|h| amb.mul(g, h) == amb.mul(h, g)))
            .collect();
        FiniteGroup::from_elements(amb, &elems).expect("the center is a subgroup")
    }

    /// `{g ∈ G : [g, u] ∈ V for all u ∈ U}`; `V` must be normal in `U`.
    pub fn centralizer_mod(&self, u: &FiniteGroup, v: &FiniteGroup) -> Result<FiniteGroup> {
        if !v.is_normal_in(u) {
            return Err(Error::NotNormal("V is not normal in U".into()));
        }
        let amb = &self.ambient;
        let elems: Vec<GroupElement> = self
            .elements
            .iter()
            .copied()
            .filter(|g| u.generators.iter().all(|h| v.contains(&amb.commutator(g, h))))
            .collect();
        FiniteGroup::from_elements(amb, &elems)
    }

    /// Centralizer of a single element.
    pub fn centralizer_of(&self, g: &GroupElement) -> FiniteGroup {
        let amb = &self.ambient;
        let elems: Vec<GroupElement> =
            self.elements.iter().copied().filter(|h| amb.mul(g, h) == amb.mul(h, g)).collect();
        FiniteGroup::from_elements(amb, &elems).expect("centralizers are subgroups")
    }

    /// Generators of `self` that form a basis of `G/Φ(G)`.
    pub fn frattini_basis(&self) -> (FiniteGroup, Vec<GroupElement>) {
        let phi = self.frattini();
        let mut basis = Vec::new();
        let mut span = phi.clone();
        let candidates: Vec<GroupElement> = self.generators.iter().chain(self.elements.iter()).copied().collect();
        for g in candidates {
            if span.order() == self.order() {
                break;
            }
            if !span.contains(&g) {
                basis.push(g);
                let mut gens = span.generators.clone();
                gens.push(g);
                span = FiniteGroup::closure(&self.ambient, &gens).expect("fits guard");
            }
        }
        (phi, basis)
    }

    /// All subgroups of index `p`: preimages of the hyperplanes of `G/Φ(G)`.
    pub fn maximal_subgroups(&self) -> Vec<FiniteGroup> {
        if self.is_trivial() {
            return Vec::new();
        }
        let amb = &self.ambient;
        let p = amb.p();
        let (phi, basis) = self.frattini_basis();
        let r = basis.len();
        let mut out = Vec::new();
        // functionals normalized so the first nonzero coordinate is 1
        for f in functionals(p, r) {
            let lead = f.iter().position(|&c| c != 0).unwrap();
            let mut gens: Vec<GroupElement> = phi.generators().to_vec();
            for j in 0..r {
                if j == lead {
                    continue;
                }
                // kernel vector e_j - f_j e_lead
                let coeff = (p - f[j] % p) % p;
                let g = amb.mul(&basis[j], &amb.pow(&basis[lead], coeff as u64));
                gens.push(g);
            }
            out.push(FiniteGroup::closure(amb, &gens).expect("fits guard"));
        }
        out
    }

    /// Conjugacy classes as ascending element-index lists, ordered by their
    /// smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let amb = &self.ambient;
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes = Vec::new();
        for start in 0..self.order() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let e = self.elements[members[head]];
                head += 1;
                for h in &self.generators {
                    let c = self.index_of(&amb.conjugate(&e, h)).expect("closed under conjugation");
                    if class_of[c] == usize::MAX {
                        class_of[c] = id;
                        members.push(c);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Brauer–Jennings–Zassenhaus series `M₁ = G`,
    /// `M_i = [M_{i-1}, G]·(M_{⌈i/p⌉})^p`, up to the first trivial term.
    pub fn jennings_series(&self) -> SubgroupSeries {
        let amb = &self.ambient;
        let p = amb.p() as usize;
        let mut terms = vec![self.clone()];
        while !terms.last().unwrap().is_trivial() {
            let i = terms.len() + 1; // index of the term being built
            let prev = terms.last().unwrap();
            let comm = self.commutator_with(prev).expect("fits guard");
            let source = &terms[i.div_ceil(p) - 1];
            let mut builder = ClosureBuilder::new(amb, super::DEFAULT_GUARD);
            for g in comm.generators() {
                builder.add(*g).expect("fits guard");
            }
            for g in source.elements() {
                builder.add(amb.pow(g, p as u64)).expect("fits guard");
            }
            terms.push(builder.finish());
        }
        SubgroupSeries { kind: SeriesKind::Jennings, terms }
    }

    /// Histogram of element orders.
    pub fn order_census(&self) -> Vec<(u64, usize)> {
        let mut map: HashMap<u64, usize> = HashMap::new();
        for g in &self.elements {
            *map.entry(self.ambient.element_order(g)).or_default() += 1;
        }
        let mut v: Vec<_> = map.into_iter().collect();
        v.sort_unstable();
        v
    }
}

fn functionals(p: u32, r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..r {
        let free = r - lead - 1;
        let count = (p as usize).pow(free as u32);
        for mut code in 0..count {
            let mut f = vec![0u32; r];
            f[lead] = 1;
            for j in (lead + 1..r).rev() {
                f[j] = (code % p as usize) as u32;
                code /= p as usize;
            }
            out.push(f);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    LowerCentral,
    Derived,
    Jennings,
}

#[derive(Clone, Debug)]
pub struct SubgroupSeries {
    pub kind: SeriesKind,
    pub terms: Vec<FiniteGroup>,
}

impl SubgroupSeries {
    /// `|M_i / M_{i+1}|` for consecutive terms.
    pub fn factor_orders(&self) -> Vec<usize> {
        self.terms.windows(2).map(|w| w[0].order() / w[1].order()).collect()
    }
}

/// Incremental subgroup closure.
pub(crate) struct ClosureBuilder<'a> {
    ambient: &'a Arc<AmbientDescriptor>,
    guard: usize,
    gens: Vec<GroupElement>,
    found: Vec<GroupElement>,
    parent: Vec<(u32, u32)>,
    seen: HashSet<GroupElement>,
}

impl<'a> ClosureBuilder<'a> {
    pub(crate) fn new(ambient: &'a Arc<AmbientDescriptor>, guard: usize) -> Self {
        let id = ambient.identity();
        let mut seen = HashSet::new();
        seen.insert(id);
        Self { ambient, guard, gens: Vec::new(), found: vec![id], parent: vec![(NO_PARENT, NO_PARENT)], seen }
    }

    /// Adds `g` as a generator unless it is already contained.
    pub(crate) fn add(&mut self, g: GroupElement) -> Result<()> {
        if self.seen.contains(&g) {
            return Ok(());
        }
        self.gens.push(g);
        let mut head = 0;
        while head < self.found.len() {
            let e = self.found[head];
            for (gi, gen) in self.gens.iter().enumerate() {
                let prod = self.ambient.mul(&e, gen);
                if self.seen.insert(prod) {
                    if self.found.len() >= self.guard {
                        return Err(Error::GuardExceeded { guard: self.guard });
                    }
                    self.found.push(prod);
                    self.parent.push((head as u32, gi as u32));
                }
            }
            head += 1;
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> FiniteGroup {
        let n = self.found.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_unstable_by_key(|&i| self.found[i as usize]);
        let mut rank = vec![0u32; n];
        for (pos, &i) in order.iter().enumerate() {
            rank[i as usize] = pos as u32;
        }
        let elements: Vec<GroupElement> = order.iter().map(|&i| self.found[i as usize]).collect();
        let mut parent = vec![(NO_PARENT, NO_PARENT); n];
        for (i, &(par, gen)) in self.parent.iter().enumerate() {
            if par != NO_PARENT {
                parent[rank[i] as usize] = (rank[par as usize], gen);
            }
        }
        FiniteGroup {
            ambient: Arc::clone(self.ambient),
            elements,
            generators: self.gens,
            parent,
            discovery: rank,
        }
    }
}
