//! Recognition of the counterexample group `G`, presentation search, and a
//! brute-force isomorphism oracle.

use rayon::prelude::*;
use serde::Serialize;

use super::indexed::{derived_mask, generated, IndexedGroup, TableGroup};
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_BOUND: usize = 1 << 12;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClauseCheck {
    pub clause: &'static str,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Recognition {
    pub recognized: bool,
    pub failing_clause: Option<&'static str>,
    pub clauses: Vec<ClauseCheck>,
}

/// Decides whether `(A, a, b)` meets the hypotheses that force `A ≅ G(n,m,k)`:
/// `a, b` generate `A`, `|A| = 2^{n+m+k-1}`, `|a| = 2^n`, `|b| = 2^m`, `a²`
/// and `b²` are central, `|A'| = 2^{k-1}` and `⟨a², b²⟩ ∩ A' = 1`.
///
/// Every clause is evaluated; `failing_clause` names the first one that fails.
pub fn recognize_g<A: IndexedGroup + ?Sized>(group: &A, a: usize, b: usize, n: u32, m: u32, k: u32) -> Recognition {
    let size = group.size();
    let (_, span) = generated(group, &[a, b]);
    let generation = span.len() == size;
    let expected_order = 1u128 << (n + m + k - 1).min(127);
    let a2 = group.op(a, a);
    let b2 = group.op(b, b);
    let all: Vec<usize> = (0..size).collect();
    let central = |g: usize| all.iter().all(|&h| group.commutes(g, h));
    let (derived, derived_elems) = derived_mask(group, &[a, b]);
    let (_, squares) = generated(group, &[a2, b2]);
    let meet_trivial = squares.iter().filter(|&&g| derived[g]).count() == 1;
    let checks = [
        ("generation", generation),
        ("group_order", size as u128 == expected_order),
        ("order_a", group.order_of(a) == 1u64 << n),
        ("order_b", group.order_of(b) == 1u64 << m),
        ("a_squared_central", central(a2)),
        ("b_squared_central", central(b2)),
        ("derived_order", derived_elems.len() as u64 == 1u64 << (k - 1)),
        ("squares_meet_derived_trivially", meet_trivial),
    ];
    let clauses: Vec<ClauseCheck> = checks.iter().map(|&(clause, pass)| ClauseCheck { clause, pass }).collect();
    let failing_clause = clauses.iter().find(|c| !c.pass).map(|c| c.clause);
    Recognition { recognized: failing_clause.is_none(), failing_clause, clauses }
}

/// Which relation set of the two-generator presentation to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relations {
    /// `u^b = u⁻¹`
    G,
    /// `u^b = u`
    H,
}

/// Searches `T` for `(a, b)` with `|a| = 2^n`, `|b| = 2^m` and `u = [b, a]`
/// satisfying `u^{2^{k-1}} = 1`, `b^a = bu`, `u^a = u⁻¹` and `u^b = u^{∓1}`,
/// with `⟨a, b⟩ = T`. Returns the first pair in canonical index order.
pub fn presentation_hom_search<T: IndexedGroup + ?Sized>(
    group: &T,
    n: u32,
    m: u32,
    k: u32,
    relations: Relations,
) -> Result<Option<(usize, usize)>> {
    let expected = 1usize << (n + m + k - 1);
    if group.size() != expected {
        return Err(Error::OrderMismatch { expected, got: group.size() });
    }
    let table = TableGroup::from_group(group);
    let orders: Vec<u64> = (0..table.size()).map(|g| table.order_of(g)).collect();
    let inverses: Vec<usize> = (0..table.size()).map(|g| table.inverse(g)).collect();
    let conj = |g: usize, h: usize| table.op(table.op(inverses[h], g), h);
    let a_cands: Vec<usize> = (0..table.size()).filter(|&g| orders[g] == 1 << n).collect();
    let b_cands: Vec<usize> = (0..table.size()).filter(|&g| orders[g] == 1 << m).collect();
    let found = a_cands.par_iter().find_map_first(|&a| {
        b_cands.iter().copied().find(|&b| {
            let u = table.op(table.op(inverses[b], inverses[a]), table.op(b, a));
            let u_inv = inverses[u];
            table.power(u, 1 << (k - 1)) == table.identity_index()
                && conj(b, a) == table.op(b, u)
                && conj(u, a) == u_inv
                && conj(u, b) == if relations == Relations::G { u_inv } else { u }
                && generated(&table, &[a, b]).1.len() == table.size()
        })
        .map(|b| (a, b))
    });
    Ok(found)
}

/// Spanning tree of `⟨gens⟩` in discovery order: `(node, parent, gen)`.
fn spanning_tree<G: IndexedGroup + ?Sized>(group: &G, gens: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut seen = vec![false; group.size()];
    let id = group.identity_index();
    seen[id] = true;
    let mut queue = vec![id];
    let mut tree = Vec::new();
    let mut head = 0;
    while head < queue.len() {
        let e = queue[head];
        head += 1;
        for (j, &g) in gens.iter().enumerate() {
            let v = group.op(e, g);
            if !seen[v] {
                seen[v] = true;
                queue.push(v);
                tree.push((v, e, j));
            }
        }
    }
    tree
}

/// Brute-force isomorphism oracle.
///
/// Fixes the stored generators of `a`, enumerates order-compatible image
/// tuples in `b`, extends each along a spanning tree of `a`, and accepts a
/// candidate that is bijective and satisfies `φ(g·s) = φ(g)·φ(s)` for every
/// element `g` and generator `s`.
pub fn isomorphic_bruteforce<A, B>(a: &A, b: &B, bound: usize) -> Result<bool>
where
    A: IndexedGroup + ?Sized,
    B: IndexedGroup + ?Sized,
{
    Ok(find_isomorphism(a, b, bound)?.is_some())
}

/// Like [`isomorphic_bruteforce`] but returns the map as `φ[i]` indices.
pub fn find_isomorphism<A, B>(a: &A, b: &B, bound: usize) -> Result<Option<Vec<usize>>>
where
    A: IndexedGroup + ?Sized,
    B: IndexedGroup + ?Sized,
{
    if a.size() > bound {
        return Err(Error::OracleBoundExceeded { order: a.size(), bound });
    }
    if a.size() != b.size() {
        return Ok(None);
    }
    let n = a.size();
    let gens = a.generating_indices();
    let tree = spanning_tree(a, &gens);
    if tree.len() + 1 != n {
        return Err(Error::NotGenerating);
    }
    let r = gens.len();
    let right: Vec<usize> = (0..n).flat_map(|g| gens.iter().map(move |&s| (g, s))).map(|(g, s)| a.op(g, s)).collect();
    let tb = TableGroup::from_group(b);
    let b_orders: Vec<u64> = (0..n).map(|g| tb.order_of(g)).collect();
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = a.order_of(g);
            (0..n).filter(|&h| b_orders[h] == o).collect()
        })
        .collect();
    if r == 0 {
        return Ok(Some(vec![tb.identity_index()]));
    }
    let a_id = a.identity_index();
    let b_id = tb.identity_index();
    let try_images = |images: &[usize]| -> Option<Vec<usize>> {
        let mut phi = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        phi[a_id] = b_id;
        hit[b_id] = true;
        for &(node, parent, j) in &tree {
            let v = tb.op(phi[parent], images[j]);
            if hit[v] {
                return None;
            }
            hit[v] = true;
            phi[node] = v;
        }
        for g in 0..n {
            for j in 0..r {
                if phi[right[g * r + j]] != tb.op(phi[g], images[j]) {
                    return None;
                }
            }
        }
        Some(phi)
    };
    let result = cands[0].par_iter().find_map_first(|&first| {
        let mut images = vec![first; r];
        search_tail(&cands, 1, &mut images, &try_images)
    });
    Ok(result)
}

fn search_tail<F>(cands: &[Vec<usize>], depth: usize, images: &mut Vec<usize>, f: &F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> Option<Vec<usize>>,
{
    if depth == cands.len() {
        return f(images);
    }
    for &c in &cands[depth] {
        images[depth] = c;
        if let Some(phi) = search_tail(cands, depth + 1, images, f) {
            return Some(phi);
        }
    }
    None
}
