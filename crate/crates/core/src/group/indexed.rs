//! Groups addressed by element index, independent of representation.
//!
//! `FiniteGroup`, Cayley tables and unit subgroups of a group algebra all
//! implement [`IndexedGroup`]; recognition and the isomorphism oracle are
//! written once against it.

use rayon::prelude::*;

use super::finite::FiniteGroup;

pub trait IndexedGroup: Sync {
    fn size(&self) -> usize;
    fn op(&self, a: usize, b: usize) -> usize;
    fn identity_index(&self) -> usize {
        0
    }
    fn generating_indices(&self) -> Vec<usize>;
    /// Prime dividing the order.
    fn prime(&self) -> u64;

    fn power(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = self.identity_index();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(acc, base);
            }
            base = self.op(base, base);
            e >>= 1;
        }
        acc
    }

    fn order_of(&self, a: usize) -> u64 {
        let id = self.identity_index();
        let mut h = a;
        let mut order = 1;
        while h != id {
            h = self.power(h, self.prime());
            order *= self.prime();
            if order > self.size() as u64 {
                break;
            }
        }
        order
    }

    fn inverse(&self, a: usize) -> usize {
        let o = self.order_of(a);
        self.power(a, o - 1)
    }

    fn commutator_of(&self, a: usize, b: usize) -> usize {
        let ab = self.op(a, b);
        let ba = self.op(b, a);
        // [a,b] = (ba)⁻¹(ab)
        self.op(self.inverse(ba), ab)
    }

    fn commutes(&self, a: usize, b: usize) -> bool {
        self.op(a, b) == self.op(b, a)
    }
}

/// Membership mask and element list of `⟨gens⟩`, by right multiplication.
pub fn generated<G: IndexedGroup + ?Sized>(group: &G, gens: &[usize]) -> (Vec<bool>, Vec<usize>) {
    let mut mask = vec![false; group.size()];
    let id = group.identity_index();
    mask[id] = true;
    let mut elems = vec![id];
    let mut active: Vec<usize> = Vec::new();
    for &g in gens {
        if mask[g] {
            continue;
        }
        active.push(g);
        let mut head = 0;
        while head < elems.len() {
            let e = elems[head];
            for &a in &active {
                let v = group.op(e, a);
                if !mask[v] {
                    mask[v] = true;
                    elems.push(v);
                }
            }
            head += 1;
        }
    }
    (mask, elems)
}

/// Derived subgroup as a membership mask, using the supplied generators.
pub fn derived_mask<G: IndexedGroup + ?Sized>(group: &G, gens: &[usize]) -> (Vec<bool>, Vec<usize>) {
    let comms: Vec<usize> =
        gens.iter().flat_map(|&a| (0..group.size()).map(move |h| (a, h))).map(|(a, h)| group.commutator_of(a, h)).collect();
    generated(group, &comms)
}

/// Dense Cayley table.
#[derive(Clone, Debug)]
pub struct TableGroup {
    n: usize,
    prime: u64,
    table: Vec<u32>,
    gens: Vec<usize>,
}

impl TableGroup {
    pub fn from_group<G: IndexedGroup + ?Sized>(group: &G) -> Self {
        let n = group.size();
        let mut table = vec![0u32; n * n];
        table.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = group.op(a, b) as u32;
            }
        });
        Self { n, prime: group.prime(), table, gens: group.generating_indices() }
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.n..(a + 1) * self.n]
    }
}

impl IndexedGroup for TableGroup {
    fn size(&self) -> usize {
        self.n
    }
    #[inline]
    fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }
    fn generating_indices(&self) -> Vec<usize> {
        self.gens.clone()
    }
    fn prime(&self) -> u64 {
        self.prime
    }
}

impl IndexedGroup for FiniteGroup {
    fn size(&self) -> usize {
        self.order()
    }
    fn op(&self, a: usize, b: usize) -> usize {
        let prod = self.ambient().mul(&self.element(a), &self.element(b));
        self.index_of(&prod).expect("subgroup is closed")
    }
    fn generating_indices(&self) -> Vec<usize> {
        self.generators().iter().map(|g| self.index_of(g).unwrap()).collect()
    }
    fn prime(&self) -> u64 {
        self.ambient().p() as u64
    }
    fn order_of(&self, a: usize) -> u64 {
        self.ambient().element_order(&self.element(a))
    }
    fn inverse(&self, a: usize) -> usize {
        self.index_of(&self.ambient().inv(&self.element(a))).unwrap()
    }
}
