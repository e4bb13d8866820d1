//! The unit `β ∈ F₂H`, the group basis `⟨x, β⟩ ≅ G` of `F₂H`, and the
//! certified algebra isomorphism `F₂G → F₂H`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::algebra::{aug_ideal_power_basis, AlgebraElement, FpMatrix, FpVector, GroupAlgebra, RowSpace};
use crate::error::{Error, Result};
use crate::family::FamilyInstance;
use crate::group::{recognize_g, GroupElement, IndexedGroup, Recognition, TableGroup};
use crate::report::VerificationReport;

/// `F₂G` and `F₂H` for a 2-case family instance.
#[derive(Clone, Debug)]
pub struct WitnessSetup {
    pub inst: FamilyInstance,
    pub fg: Arc<GroupAlgebra>,
    pub fh: Arc<GroupAlgebra>,
}

impl WitnessSetup {
    pub fn new(inst: FamilyInstance) -> Result<Self> {
        if !inst.is_two_case() {
            return Err(Error::Precondition("the witness needs a 2-case instance".into()));
        }
        let fg = Arc::new(GroupAlgebra::new(inst.g.clone()));
        let fh = Arc::new(GroupAlgebra::new(inst.h()?.clone()));
        Ok(Self { inst, fg, fh })
    }

    pub fn x(&self) -> AlgebraElement {
        self.fh.embed(&self.inst.x).expect("x ∈ H")
    }

    pub fn z(&self) -> AlgebraElement {
        self.fh.embed(&self.inst.z.expect("2-case")).expect("z ∈ H")
    }
}

/// `β = 1 + x(1 + z)`.
pub fn build_beta(fh: &GroupAlgebra, x: &GroupElement, z: &GroupElement) -> Result<AlgebraElement> {
    build_beta_general(fh, &fh.one(), x, z, u64::MAX)
}

/// `β = ζ + x̃(1 + z)` for a central unit `ζ` of order below `order_bound`
/// and an `x̃ ∈ H` with `z^{x̃} ≠ z`.
pub fn build_beta_general(
    fh: &GroupAlgebra,
    zeta: &AlgebraElement,
    x_t: &GroupElement,
    z: &GroupElement,
    order_bound: u64,
) -> Result<AlgebraElement> {
    let h = fh.group();
    let amb = h.ambient();
    if !h.contains(x_t) || !h.contains(z) {
        return Err(Error::NotInGroup);
    }
    if !fh.is_central(zeta) {
        return Err(Error::Precondition("zeta is not central".into()));
    }
    if !fh.is_unit(zeta) {
        return Err(Error::NotAUnit);
    }
    let order = fh.unit_order(zeta)?;
    if order >= order_bound {
        return Err(Error::Precondition(format!("zeta has order {order}, not below {order_bound}")));
    }
    if amb.conjugate(z, x_t) == *z {
        return Err(Error::Precondition("x~ centralizes z".into()));
    }
    let one_z = fh.from_terms(&[(1, amb.identity()), (1, *z)])?;
    let tail = fh.mul(&fh.embed(x_t)?, &one_z)?;
    fh.add(zeta, &tail)
}

/// `β = d² + zx[z, x](1 + z)`, available when `k = 3`.
pub fn build_beta_k3(fh: &GroupAlgebra, inst: &FamilyInstance) -> Result<AlgebraElement> {
    if inst.params.k != 3 {
        return Err(Error::InvalidParameters(format!("the k = 3 witness needs k = 3, got k = {}", inst.params.k)));
    }
    let amb = &inst.ambient;
    let (x, z) = (inst.x, inst.z()?);
    let d2 = amb.pow(&amb.d(), 2);
    let lead = amb.mul(&amb.mul(&z, &x), &amb.commutator(&z, &x));
    fh.from_terms(&[(1, d2), (1, lead), (1, amb.mul(&lead, &z))])
}

/// Central units of order below `order_bound`: images of central group
/// elements, and `1 + ν` for `ν` a random augmentation-zero combination of
/// class sums.
pub fn central_unit_candidates(fh: &GroupAlgebra, order_bound: u64, seed: u64, samples: usize) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    let classes = fh.group().conjugacy_classes();
    for c in classes.iter().filter(|c| c.len() == 1) {
        let u = fh.basis(c[0]);
        if fh.unit_order(&u).is_ok_and(|o| o < order_bound) {
            out.push(u);
        }
    }
    let sums = fh.class_sums();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut nu = fh.zero();
        for s in &sums {
            if rng.gen_bool(0.5) {
                nu = fh.add(&nu, s).expect("same algebra");
            }
        }
        if fh.augmentation(&nu) != 0 {
            nu = fh.sub(&nu, &fh.one()).expect("same algebra");
            nu = fh.sub(&nu, &fh.one()).expect("same algebra");
            if fh.augmentation(&nu) != 0 {
                continue;
            }
        }
        let u = fh.add(&fh.one(), &nu).expect("same algebra");
        if fh.unit_order(&u).is_ok_and(|o| o < order_bound) && !out.contains(&u) {
            out.push(u);
        }
    }
    out
}

/// A finite subgroup of the unit group, enumerated breadth-first from its
/// generators.
#[derive(Clone, Debug)]
pub struct UnitGroupSubgroup {
    algebra: Arc<GroupAlgebra>,
    elements: Vec<AlgebraElement>,
    /// `right[i * r + j]` is the index of `elements[i] · gens[j]`.
    right: Vec<u32>,
    parent: Vec<(u32, u32)>,
    gens: Vec<usize>,
}

pub fn unit_closure(alg: &Arc<GroupAlgebra>, gens: &[AlgebraElement], limit: usize) -> Result<UnitGroupSubgroup> {
    for g in gens {
        if !alg.is_unit(g) {
            return Err(Error::NotAUnit);
        }
    }
    let r = gens.len();
    let one = alg.one();
    let mut index: HashMap<AlgebraElement, u32> = HashMap::new();
    index.insert(one.clone(), 0);
    let mut elements = vec![one];
    let mut parent = vec![(u32::MAX, u32::MAX)];
    let mut right: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        for (j, g) in gens.iter().enumerate() {
            let prod = alg.mul(&elements[head], g)?;
            let idx = match index.get(&prod) {
                Some(&i) => i,
                None => {
                    if elements.len() >= limit {
                        return Err(Error::ClosureLimit { limit });
                    }
                    let i = elements.len() as u32;
                    index.insert(prod.clone(), i);
                    elements.push(prod);
                    parent.push((head as u32, j as u32));
                    i
                }
            };
            right.push(idx);
        }
        head += 1;
    }
    let gens_idx = (0..r).map(|j| if elements.len() == 1 { 0 } else { right[j] as usize }).collect();
    Ok(UnitGroupSubgroup { algebra: alg.clone(), elements, right, parent, gens: gens_idx })
}

impl UnitGroupSubgroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }
    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.algebra
    }
    /// Indices of the generators among the elements.
    pub fn generator_indices(&self) -> &[usize] {
        &self.gens
    }

    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut cur = i;
        while self.parent[cur].0 != u32::MAX {
            w.push(self.parent[cur].1 as usize);
            cur = self.parent[cur].0 as usize;
        }
        w.reverse();
        w
    }

    fn words(&self) -> Vec<Vec<u32>> {
        let mut words: Vec<Vec<u32>> = vec![Vec::new(); self.len()];
        for i in 1..self.len() {
            let (p, g) = self.parent[i];
            let mut w = words[p as usize].clone();
            w.push(g);
            words[i] = w;
        }
        words
    }

    /// Cayley table of the subgroup, products resolved by transporting the
    /// right factor's word through the generator table.
    pub fn table(&self) -> TableGroup {
        let words = self.words();
        TableGroup::from_group(&WordTransport { group: self, words: &words })
    }
}

struct WordTransport<'a> {
    group: &'a UnitGroupSubgroup,
    words: &'a [Vec<u32>],
}

impl IndexedGroup for WordTransport<'_> {
    fn size(&self) -> usize {
        self.group.len()
    }
    fn op(&self, a: usize, b: usize) -> usize {
        let r = self.group.gens.len();
        self.words[b].iter().fold(a, |acc, &g| self.group.right[acc * r + g as usize] as usize)
    }
    fn generating_indices(&self) -> Vec<usize> {
        self.group.gens.clone()
    }
    fn prime(&self) -> u64 {
        self.group.algebra.p() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessConfig {
    pub seed: u64,
    pub sample_size: usize,
    pub exhaustive: bool,
    /// Closure limit as a multiple of `|H|`.
    pub safety_factor: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self { seed: 0, sample_size: 1024, exhaustive: false, safety_factor: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Multiplicativity {
    pub exhaustive: bool,
    pub seed: u64,
    pub pairs: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsomorphismCertificate {
    pub valid: bool,
    pub failing_clause: Option<String>,
    pub beta_order: Option<u64>,
    pub rank: Option<usize>,
    pub multiplicativity: Option<Multiplicativity>,
    pub order_note: Option<String>,
    pub clauses: VerificationReport,
    /// Row `i` is the image of the `i`-th basis element of `F₂G`, as the
    /// little-endian bytes of its packed 64-bit words in lowercase hex.
    pub rows_hex: Vec<String>,
}

/// Images `φ(g)` of the basis of `F₂G` under `x ↦ x`, `y ↦ β`, built along
/// the breadth-first tree of `G`.
pub fn basis_images(setup: &WitnessSetup, beta: &AlgebraElement) -> Result<Vec<AlgebraElement>> {
    let g = &setup.inst.g;
    let fh = &setup.fh;
    if g.generators() != [setup.inst.x, setup.inst.y] {
        return Err(Error::Precondition("G must be stored with generators (x, y)".into()));
    }
    let gen_images = [setup.x(), beta.clone()];
    let mut images = vec![fh.zero(); g.order()];
    images[0] = fh.one();
    for &i in &g.discovery_order()[1..] {
        let (parent, gen) = g.tree_parent(i as usize).expect("non-identity");
        images[i as usize] = fh.mul(&images[parent], &gen_images[gen])?;
    }
    Ok(images)
}

/// Independence of `x + 1` and `β + 1` modulo `A²(F₂H)`.
pub fn independent_mod_a2(fh: &GroupAlgebra, vectors: &[AlgebraElement]) -> bool {
    let a2 = aug_ideal_power_basis(fh, 2);
    let mut space = RowSpace::new(fh.p(), fh.dim());
    for r in a2.rows() {
        space.insert(r);
    }
    let base = space.dim();
    for v in vectors {
        space.insert(v.coeffs());
    }
    space.dim() == base + vectors.len()
}

fn beta_plus_one(fh: &GroupAlgebra, u: &AlgebraElement) -> AlgebraElement {
    fh.add(u, &fh.one()).expect("same algebra")
}

fn check_pairs(setup: &WitnessSetup, images: &[AlgebraElement], pairs: &[(usize, usize)]) -> usize {
    let g = &setup.inst.g;
    let fh = &setup.fh;
    pairs
        .par_iter()
        .filter(|&&(a, b)| {
            let ab = g.index_of(&g.mul(&g.element(a), &g.element(b))).expect("closed");
            fh.mul(&images[a], &images[b]).expect("same algebra") != images[ab]
        })
        .count()
}

/// Checks `φ(g g') = φ(g) φ(g')` for every pair, using the left translates of
/// each `φ(g')` so each product is a sum of precomputed rows.
fn check_all_pairs(setup: &WitnessSetup, images: &[AlgebraElement]) -> usize {
    let g = &setup.inst.g;
    let fh = &setup.fh;
    let dim = fh.dim();
    let words = dim.div_ceil(64);
    let prod_index: Vec<u32> = (0..g.order() * g.order())
        .into_par_iter()
        .map(|ij| {
            let (a, b) = (ij / g.order(), ij % g.order());
            g.index_of(&g.mul(&g.element(a), &g.element(b))).expect("closed") as u32
        })
        .collect();
    let supports: Vec<Vec<usize>> = images.iter().map(|u| u.support()).collect();
    (0..g.order())
        .into_par_iter()
        .map(|b| {
            let mut translates = vec![0u64; dim * words];
            for h in 0..dim {
                let row = &mut translates[h * words..(h + 1) * words];
                for &j in &supports[b] {
                    let w = fh.product_index(h, j);
                    row[w >> 6] ^= 1 << (w & 63);
                }
            }
            let mut acc = vec![0u64; words];
            (0..g.order())
                .filter(|&a| {
                    acc.iter_mut().for_each(|w| *w = 0);
                    for &h in &supports[a] {
                        for (x, y) in acc.iter_mut().zip(&translates[h * words..(h + 1) * words]) {
                            *x ^= y;
                        }
                    }
                    acc[..] != *images[prod_index[a * g.order() + b] as usize].coeffs().words()
                })
                .count()
        })
        .sum()
}

/// Runs the certification clauses (a)–(g) in order.
pub fn verify_witness(setup: &WitnessSetup, beta: &AlgebraElement, config: &WitnessConfig) -> Result<IsomorphismCertificate> {
    let fh = &setup.fh;
    let inst = &setup.inst;
    let (n, m, k) = (inst.params.n, inst.params.m, inst.params.k);
    let h_order = fh.dim();
    let mut report = VerificationReport::new();
    let mut order_note = None;

    let beta_order = fh.unit_order(beta).ok();
    let pass = beta_order.is_some_and(|o| o.is_power_of_two());
    report.push("beta_order", "beta is a unit of 2-power order", pass, json!({"order": beta_order, "2^m": 1u64 << m, "2^k": 1u64 << k}));
    if let Some(o) = beta_order {
        if o != 1 << k {
            order_note = Some(format!("computed order of beta is {o} = 2^{}, stated 2^k = {}", o.trailing_zeros(), 1u64 << k));
        }
    }

    let beta_sq = fh.mul(beta, beta)?;
    report.push("beta_squared_central", "beta^2 ∈ Z(F2H)", fh.is_central(&beta_sq), json!({}));

    let closure = unit_closure(fh, &[setup.x(), beta.clone()], config.safety_factor * h_order);
    let closure_size = closure.as_ref().map(|c| c.len()).ok();
    report.push(
        "closure_order",
        "|<x, beta>| = |G|",
        closure_size == Some(inst.g.order()),
        json!({"order": closure_size, "expected": inst.g.order()}),
    );

    let recognition: Option<Recognition> = closure.as_ref().ok().map(|c| {
        let table = c.table();
        let gi = c.generator_indices();
        recognize_g(&table, gi[0], gi[1], n, m, k)
    });
    report.push(
        "recognition",
        "<x, beta> with a = x, b = beta meets |a| = 2^n, |b| = 2^m, a^2, b^2 central, |A'| = 2^{k-1}, <a^2, b^2> ∩ A' = 1",
        recognition.as_ref().is_some_and(|r| r.recognized),
        json!({"failing_clause": recognition.as_ref().and_then(|r| r.failing_clause), "clauses": recognition.as_ref().map(|r| &r.clauses)}),
    );

    let rank = closure.as_ref().ok().map(|c| {
        FpMatrix::from_rows(2, h_order, c.elements().iter().map(|e| e.coeffs().clone()).collect())
            .expect("rows of F2H")
            .rank()
    });
    report.push("spanning", "rank of <x, beta> in F2H = |H|", rank == Some(h_order), json!({"rank": rank}));

    let independent = independent_mod_a2(fh, &[beta_plus_one(fh, &setup.x()), beta_plus_one(fh, beta)]);
    report.push("independent_mod_a2", "x + 1, beta + 1 independent modulo A^2(F2H)", independent, json!({}));

    let images = basis_images(setup, beta)?;
    let image_matrix = FpMatrix::from_rows(2, h_order, images.iter().map(|e| e.coeffs().clone()).collect())?;
    let image_rank = image_matrix.rank();
    let g_order = inst.g.order();
    let mult = if config.exhaustive {
        Multiplicativity { exhaustive: true, seed: config.seed, pairs: g_order * g_order, mismatches: check_all_pairs(setup, &images) }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let pairs: Vec<(usize, usize)> =
            (0..config.sample_size).map(|_| (rng.gen_range(0..g_order), rng.gen_range(0..g_order))).collect();
        Multiplicativity { exhaustive: false, seed: config.seed, pairs: pairs.len(), mismatches: check_pairs(setup, &images, &pairs) }
    };
    report.push(
        "isomorphism",
        "g ↦ word_g(x, beta) is bijective F2G → F2H and phi(g g') = phi(g) phi(g')",
        image_rank == h_order && g_order == h_order && mult.mismatches == 0,
        json!({"rank": image_rank, "pairs": mult.pairs, "mismatches": mult.mismatches, "exhaustive": mult.exhaustive}),
    );

    let failing_clause = report.first_failure().map(|c| c.id.clone());
    Ok(IsomorphismCertificate {
        valid: failing_clause.is_none(),
        failing_clause,
        beta_order,
        rank,
        multiplicativity: Some(mult),
        order_note,
        clauses: report,
        rows_hex: images.iter().map(|e| e.coeffs().to_hex()).collect(),
    })
}

/// `[β, x] = 1 + β⁻¹xz([z, x] + 1)` and its order `2^{k-1}`, for `β = 1 + x(1 + z)`.
///
/// The data also records which of `(ts)^{±2}` the element `[z, x]` equals.
pub fn commutator_check(setup: &WitnessSetup, beta: &AlgebraElement) -> Result<VerificationReport> {
    let fh = &setup.fh;
    let amb = &setup.inst.ambient;
    let k = setup.inst.params.k;
    let (x, z) = (setup.inst.x, setup.inst.z()?);
    let comm = fh.unit_commutator(beta, &setup.x())?;
    let ts2 = amb.pow(&setup.inst.ts(), 2);
    let zx = amb.commutator(&z, &x);
    let beta_inv = fh.unit_inverse(beta)?;
    let lead = fh.mul(&beta_inv, &fh.embed(&amb.mul(&x, &z))?)?;
    let form = |w: GroupElement| -> Result<AlgebraElement> {
        let tail = fh.from_terms(&[(1, w), (1, amb.identity())])?;
        fh.add(&fh.one(), &fh.mul(&lead, &tail)?)
    };
    let order = fh.unit_order(&comm)?;
    let mut report = VerificationReport::new();
    report.push(
        "beta_x_commutator",
        "[beta, x] = 1 + beta^{-1} x z ([z, x] + 1)",
        comm == form(zx)?,
        json!({
            "z_x_commutator_is_ts_squared": zx == ts2,
            "z_x_commutator_is_ts_inverse_squared": zx == amb.inv(&ts2),
            "matches_ts_squared_form": comm == form(ts2)?,
        }),
    );
    report.push(
        "beta_x_commutator_order",
        "|[beta, x]| = 2^{k-1}",
        order == 1 << (k - 1),
        json!({"order": order, "expected": 1u64 << (k - 1)}),
    );
    Ok(report)
}

/// Compares `β^{2^{m-1}}` with
/// `1 + x^{2^{m-1}}(1 + z^{2^{m-2}}(1 + (st)^{2^{m-1}}) + z^{2^{m-1}})`
/// coefficient by coefficient, and checks `β^{2^m} = 1`.
///
/// The data also compares against the same expression with the last term
/// replaced by `d^{2^{m-1}}`, which is what `z^x z = d²` gives.
pub fn power_formula_check(setup: &WitnessSetup, beta: &AlgebraElement) -> Result<VerificationReport> {
    let fh = &setup.fh;
    let amb = &setup.inst.ambient;
    let m = setup.inst.params.m;
    let (x, z) = (setup.inst.x, setup.inst.z()?);
    let st = amb.mul(&amb.s(), &amb.t());
    let big_x = amb.pow(&x, 1 << (m - 1));
    let big_z = amb.pow(&z, 1 << (m - 2));
    let s_part = amb.pow(&st, 1 << (m - 1));
    let xz = amb.mul(&big_x, &big_z);
    let closed_form = |last: GroupElement| -> Result<AlgebraElement> {
        let terms = [amb.identity(), big_x, xz, amb.mul(&xz, &s_part), amb.mul(&big_x, &last)];
        fh.from_terms(&terms.iter().map(|g| (1, *g)).collect::<Vec<_>>())
    };
    let closed = closed_form(amb.pow(&z, 1 << (m - 1)))?;
    let with_d = closed_form(amb.pow(&amb.d(), 1 << (m - 1)))?;
    let half = fh.pow(beta, 1 << (m - 1))?;
    let full = fh.pow(beta, 1 << m)?;
    let diff: Vec<usize> = (0..fh.dim()).filter(|&i| half.coefficient(i) != closed.coefficient(i)).collect();
    let mut report = VerificationReport::new();
    report.push(
        "beta_half_power_formula",
        "beta^{2^{m-1}} = 1 + x^{2^{m-1}}(1 + z^{2^{m-2}}(1 + (st)^{2^{m-1}}) + z^{2^{m-1}})",
        diff.is_empty(),
        json!({
            "support": half.support(),
            "closed_form_support": closed.support(),
            "differing": diff,
            "matches_with_d_power_term": half == with_d,
        }),
    );
    report.push("beta_half_power_nontrivial", "beta^{2^{m-1}} ≠ 1", half != fh.one(), json!({}));
    report.push("beta_full_power", "beta^{2^m} = 1", full == fh.one(), json!({}));
    Ok(report)
}

/// `(β²)^x = β²`.
pub fn beta_square_fixed_by_x(setup: &WitnessSetup, beta: &AlgebraElement) -> Result<bool> {
    let fh = &setup.fh;
    let sq = fh.mul(beta, beta)?;
    let xi = fh.group().index_of(&setup.inst.x).ok_or(Error::NotInGroup)?;
    Ok(fh.conjugate_by_basis(&sq, xi) == sq)
}

/// Decodes certificate rows back into coefficient vectors.
pub fn decode_rows(rows: &[String], dim: usize) -> Result<Vec<FpVector>> {
    rows.iter().map(|r| FpVector::from_hex(2, dim, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_family, FamilyParams};
    use crate::group::{isomorphic_bruteforce, Variant, DEFAULT_ORACLE_BOUND};
    use std::sync::OnceLock;

    fn setup_433() -> &'static WitnessSetup {
        static S: OnceLock<WitnessSetup> = OnceLock::new();
        S.get_or_init(|| WitnessSetup::new(build_family(FamilyParams::two(Variant::Dihedral, 4, 3, 3)).unwrap()).unwrap())
    }

    fn beta(s: &WitnessSetup) -> AlgebraElement {
        build_beta(&s.fh, &s.inst.x, &s.inst.z.unwrap()).unwrap()
    }

    #[test]
    fn beta_shape() {
        let s = setup_433();
        let b = beta(s);
        let fh = &s.fh;
        assert_eq!(fh.augmentation(&b), 1);
        let amb = &s.inst.ambient;
        let xz = amb.mul(&s.inst.x, &s.inst.z.unwrap());
        let mut expect = vec![0, fh.group().index_of(&s.inst.x).unwrap(), fh.group().index_of(&xz).unwrap()];
        expect.sort_unstable();
        assert_eq!(b.support(), expect);
    }

    #[test]
    fn beta_square_closed_form() {
        let s = setup_433();
        let b = beta(s);
        let fh = &s.fh;
        let amb = &s.inst.ambient;
        let (x, z) = (s.inst.x, s.inst.z.unwrap());
        let zx = amb.conjugate(&z, &x);
        let d2 = amb.pow(&amb.d(), 2);
        assert_eq!(amb.mul(&zx, &z), d2);
        let x2 = amb.pow(&x, 2);
        // 1 + x²(1 + z + z^x + d²)
        let inner = fh.from_terms(&[(1, amb.identity()), (1, z), (1, zx), (1, d2)]).unwrap();
        let expect = fh.add(&fh.one(), &fh.mul(&fh.embed(&x2).unwrap(), &inner).unwrap()).unwrap();
        assert_eq!(fh.mul(&b, &b).unwrap(), expect);
        let comm_tz = amb.commutator(&z, &amb.t());
        let zz = fh.from_terms(&[(1, z), (1, zx)]).unwrap();
        let other = fh.from_terms(&[(1, z), (1, amb.mul(&z, &comm_tz))]).unwrap();
        assert_eq!(zz, other);
        assert!(beta_square_fixed_by_x(s, &b).unwrap());
    }

    #[test]
    fn unit_closure_examples() {
        let s = setup_433();
        let x = s.x();
        assert_eq!(unit_closure(&s.fh, &[x], 2048).unwrap().len(), 16);
        assert_eq!(unit_closure(&s.fh, &[s.fh.one()], 2048).unwrap().len(), 1);
        assert!(matches!(unit_closure(&s.fh, &[s.fh.zero()], 10), Err(Error::NotAUnit)));
        let c = unit_closure(&s.fh, &[s.x(), beta(s)], 100);
        assert!(matches!(c, Err(Error::ClosureLimit { limit: 100 })));
    }

    #[test]
    fn unit_subgroup_is_isomorphic_to_g() {
        let s = setup_433();
        let c = unit_closure(&s.fh, &[s.x(), beta(s)], 2048).unwrap();
        assert_eq!(c.len(), 512);
        assert!(c.elements().iter().all(|e| s.fh.augmentation(e) == 1));
        let table = c.table();
        assert!(isomorphic_bruteforce(&table, s.inst.g.as_ref(), DEFAULT_ORACLE_BOUND).unwrap());
        assert!(!isomorphic_bruteforce(&table, s.inst.h().unwrap().as_ref(), DEFAULT_ORACLE_BOUND).unwrap());
        for i in [0usize, 7, 300, 511] {
            let w = c.word(i);
            let prod = w.iter().fold(s.fh.one(), |acc, &g| s.fh.mul(&acc, &[s.x(), beta(s)][g]).unwrap());
            assert_eq!(&prod, &c.elements()[i]);
        }
    }

    #[test]
    fn certificate_at_reference() {
        let s = setup_433();
        let b = beta(s);
        let cert = verify_witness(s, &b, &WitnessConfig { exhaustive: true, ..Default::default() }).unwrap();
        assert!(cert.valid, "{:?}", cert.failing_clause);
        assert_eq!(cert.beta_order, Some(8));
        assert_eq!(cert.rank, Some(512));
        assert_eq!(cert.order_note, None);
        assert_eq!(cert.multiplicativity.as_ref().unwrap().pairs, 512 * 512);
        let rows = decode_rows(&cert.rows_hex, 512).unwrap();
        let images = basis_images(s, &b).unwrap();
        assert!(rows.iter().zip(&images).all(|(r, i)| r == i.coeffs()));
    }

    #[test]
    fn certificate_is_seed_independent() {
        let s = setup_433();
        let b = beta(s);
        for seed in [1u64, 99] {
            let cert = verify_witness(s, &b, &WitnessConfig { seed, sample_size: 256, ..Default::default() }).unwrap();
            assert!(cert.valid);
        }
    }

    #[test]
    fn z_is_not_a_witness() {
        let s = setup_433();
        let cert = verify_witness(s, &s.z(), &WitnessConfig { sample_size: 64, ..Default::default() }).unwrap();
        assert!(!cert.valid);
        assert!(cert.clauses.passed("closure_order"));
        assert_eq!(cert.failing_clause.as_deref(), Some("beta_squared_central"));
        assert!(!cert.clauses.passed("recognition"));
        assert_eq!(cert.clauses.get("recognition").unwrap().data["failing_clause"], "b_squared_central");
    }

    #[test]
    fn commutator_and_powers() {
        let s = setup_433();
        let b = beta(s);
        let r = commutator_check(s, &b).unwrap();
        assert!(r.all_pass(), "{:?}", r.first_failure());
        let r = power_formula_check(s, &b).unwrap();
        assert!(r.passed("beta_half_power_nontrivial"));
        assert!(r.passed("beta_full_power"));
        assert_eq!(r.get("beta_half_power_formula").unwrap().data["matches_with_d_power_term"], true);
    }

    #[test]
    fn power_formula_when_m_exceeds_k() {
        let s = WitnessSetup::new(build_family(FamilyParams::two(Variant::Dihedral, 5, 4, 3)).unwrap()).unwrap();
        let b = beta(&s);
        let r = power_formula_check(&s, &b).unwrap();
        assert!(r.all_pass(), "{:?}", r.first_failure());
        assert_eq!(s.fh.unit_order(&b).unwrap(), 16);
    }

    #[test]
    fn k3_and_general_variants() {
        let s = setup_433();
        let b = build_beta_k3(&s.fh, &s.inst).unwrap();
        assert_eq!(s.fh.augmentation(&b), 1);
        let cert = verify_witness(s, &b, &WitnessConfig::default()).unwrap();
        assert!(cert.valid, "{:?}", cert.failing_clause);

        let amb = &s.inst.ambient;
        let (x, z) = (s.inst.x, s.inst.z.unwrap());
        let bound = 1u64 << s.inst.params.m;
        let same = build_beta_general(&s.fh, &s.fh.one(), &x, &z, bound).unwrap();
        assert_eq!(same, beta(s));
        let c_top = s.fh.embed(&amb.pow(&amb.c(), 1 << (s.inst.params.n - 1))).unwrap();
        let b = build_beta_general(&s.fh, &c_top, &x, &z, bound).unwrap();
        assert!(verify_witness(s, &b, &WitnessConfig::default()).unwrap().valid);
        assert!(build_beta_general(&s.fh, &s.fh.one(), &z, &z, bound).is_err());
        let not_central = s.fh.embed(&x).unwrap();
        assert!(build_beta_general(&s.fh, &not_central, &x, &z, bound).is_err());
    }

    #[test]
    fn sampled_central_units_certify() {
        let s = setup_433();
        let bound = 1u64 << s.inst.params.m;
        let cands = central_unit_candidates(&s.fh, bound, 5, 4);
        assert!(!cands.is_empty());
        let (x, z) = (s.inst.x, s.inst.z.unwrap());
        for zeta in cands.iter().rev().take(2) {
            let b = build_beta_general(&s.fh, zeta, &x, &z, bound).unwrap();
            assert!(verify_witness(s, &b, &WitnessConfig { sample_size: 128, ..Default::default() }).unwrap().valid);
        }
    }

    #[test]
    fn k3_rejects_other_k() {
        let s = WitnessSetup::new(build_family(FamilyParams::two(Variant::Dihedral, 5, 4, 4)).unwrap()).unwrap();
        assert!(matches!(build_beta_k3(&s.fh, &s.inst), Err(Error::InvalidParameters(_))));
    }
}
