//! The group algebra `F_pG` over an enumerated `p`-group.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use super::fpvec::{inv_mod, FpVector};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// `F_pG` with basis in the canonical element order of `G`.
///
/// The Cayley table of `G` is precomputed, so products of basis elements are
/// table lookups.
#[derive(Debug)]
pub struct GroupAlgebra {
    id: u64,
    p: u32,
    group: Arc<FiniteGroup>,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    algebra: u64,
    coeffs: FpVector,
}

impl AlgebraElement {
    pub fn coeffs(&self) -> &FpVector {
        &self.coeffs
    }
    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }
    pub fn coefficient(&self, i: usize) -> u32 {
        self.coeffs.get(i)
    }
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.support_indices()
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
}

impl GroupAlgebra {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let p = group.ambient().p();
        let dim = group.order();
        let elems = group.elements();
        let amb = group.ambient().clone();
        let table: Vec<u32> = (0..dim)
            .into_par_iter()
            .flat_map_iter(|i| {
                let g = elems[i];
                let group = &group;
                let amb = &amb;
                (0..dim).map(move |j| group.index_of(&amb.mul(&g, &elems[j])).expect("closed") as u32)
            })
            .collect();
        let mut inverse = vec![0u32; dim];
        for i in 0..dim {
            for j in 0..dim {
                if table[i * dim + j] == 0 {
                    inverse[i] = j as u32;
                    break;
                }
            }
        }
        Self { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), p, group, table, inverse }
    }

    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.group.order()
    }
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Basis index of `g_i · g_j`.
    #[inline]
    pub fn product_index(&self, i: usize, j: usize) -> usize {
        self.table[i * self.dim() + j] as usize
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    fn wrap(&self, coeffs: FpVector) -> AlgebraElement {
        AlgebraElement { algebra: self.id, coeffs }
    }

    fn check(&self, u: &AlgebraElement) -> Result<()> {
        if u.algebra != self.id {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgebraElement {
        self.wrap(FpVector::zero(self.p, self.dim()))
    }

    pub fn one(&self) -> AlgebraElement {
        self.basis(0)
    }

    pub fn basis(&self, i: usize) -> AlgebraElement {
        self.wrap(FpVector::unit(self.p, self.dim(), i))
    }

    pub fn embed(&self, g: &GroupElement) -> Result<AlgebraElement> {
        let i = self.group.index_of(g).ok_or(Error::NotInGroup)?;
        Ok(self.basis(i))
    }

    /// `Σ c·g` over the given terms; repeated elements accumulate.
    pub fn from_terms(&self, terms: &[(u32, GroupElement)]) -> Result<AlgebraElement> {
        let mut v = FpVector::zero(self.p, self.dim());
        for (c, g) in terms {
            let i = self.group.index_of(g).ok_or(Error::NotInGroup)?;
            v.add_at(i, *c % self.p);
        }
        Ok(self.wrap(v))
    }

    pub fn from_coeffs(&self, coeffs: FpVector) -> Result<AlgebraElement> {
        if coeffs.p() != self.p {
            return Err(Error::AlgebraMismatch);
        }
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coeffs.len() });
        }
        Ok(self.wrap(coeffs))
    }

    /// Sum of all elements of the index set.
    pub fn subset_sum(&self, indices: &[usize]) -> AlgebraElement {
        let mut v = FpVector::zero(self.p, self.dim());
        for &i in indices {
            v.add_at(i, 1);
        }
        self.wrap(v)
    }

    pub fn add(&self, u: &AlgebraElement, v: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.wrap(u.coeffs.add(&v.coeffs)?))
    }

    pub fn sub(&self, u: &AlgebraElement, v: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.wrap(u.coeffs.sub(&v.coeffs)?))
    }

    pub fn scale(&self, c: u32, u: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(u)?;
        let mut v = u.coeffs.clone();
        v.scale(c % self.p);
        Ok(self.wrap(v))
    }

    pub fn mul(&self, u: &AlgebraElement, v: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.wrap(self.mul_raw(&u.coeffs, &v.coeffs)))
    }

    /// `u · g_j` for a basis element: a permutation of coefficients.
    pub fn mul_basis_right(&self, u: &AlgebraElement, j: usize) -> AlgebraElement {
        let mut out = FpVector::zero(self.p, self.dim());
        for (i, c) in u.coeffs.support() {
            out.set(self.product_index(i, j), c);
        }
        self.wrap(out)
    }

    /// `g_i · u` for a basis element.
    pub fn mul_basis_left(&self, i: usize, u: &AlgebraElement) -> AlgebraElement {
        let mut out = FpVector::zero(self.p, self.dim());
        for (j, c) in u.coeffs.support() {
            out.set(self.product_index(i, j), c);
        }
        self.wrap(out)
    }

    pub(crate) fn mul_raw(&self, u: &FpVector, v: &FpVector) -> FpVector {
        let dim = self.dim();
        let su = u.support();
        let sv = v.support();
        match u {
            FpVector::Binary { .. } => {
                let mut words = vec![0u64; dim.div_ceil(64)];
                for &(i, _) in &su {
                    let row = &self.table[i * dim..(i + 1) * dim];
                    for &(j, _) in &sv {
                        let w = row[j] as usize;
                        words[w >> 6] ^= 1u64 << (w & 63);
                    }
                }
                FpVector::Binary { len: dim, words }
            }
            FpVector::Odd { .. } => {
                let p = self.p as u64;
                let mut acc = vec![0u64; dim];
                for &(i, a) in &su {
                    let row = &self.table[i * dim..(i + 1) * dim];
                    for &(j, b) in &sv {
                        acc[row[j] as usize] += a as u64 * b as u64;
                    }
                }
                let mut out = FpVector::zero(self.p, dim);
                for (w, c) in acc.into_iter().enumerate() {
                    let c = (c % p) as u32;
                    if c != 0 {
                        out.set(w, c);
                    }
                }
                out
            }
        }
    }

    pub fn pow(&self, u: &AlgebraElement, mut e: u64) -> Result<AlgebraElement> {
        self.check(u)?;
        let mut acc = self.one().coeffs;
        let mut base = u.coeffs.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        Ok(self.wrap(acc))
    }

    pub fn augmentation(&self, u: &AlgebraElement) -> u32 {
        u.coeffs.support().iter().fold(0u32, |acc, &(_, c)| (acc + c) % self.p)
    }

    pub fn is_unit(&self, u: &AlgebraElement) -> bool {
        u.algebra == self.id && self.augmentation(u) != 0
    }

    fn hard_stop(&self) -> u64 {
        let p = self.p as u64;
        let mut e = 0u32;
        let mut q = 1u64;
        while q < self.dim() as u64 {
            q *= p;
            e += 1;
        }
        p.pow(e + 1)
    }

    /// Writes a unit as `α·w` with `α = aug(u)` and `aug(w) = 1`, and returns
    /// `(α, w, p^s)` where `p^s` is the order of `w`.
    fn unit_parts(&self, u: &AlgebraElement) -> Result<(u32, FpVector, u64)> {
        self.check(u)?;
        let alpha = self.augmentation(u);
        if alpha == 0 {
            return Err(Error::NotAUnit);
        }
        let mut w = u.coeffs.clone();
        w.scale(inv_mod(alpha, self.p));
        let one = self.one().coeffs;
        let stop = self.hard_stop();
        let mut order = 1u64;
        let mut cur = w.clone();
        while cur != one {
            if order >= stop {
                return Err(Error::OrderHardStop(stop));
            }
            cur = self.pow_raw(&cur, self.p as u64);
            order *= self.p as u64;
        }
        Ok((alpha, w, order))
    }

    fn pow_raw(&self, u: &FpVector, e: u64) -> FpVector {
        self.pow(&self.wrap(u.clone()), e).expect("same algebra").coeffs
    }

    pub fn unit_order(&self, u: &AlgebraElement) -> Result<u64> {
        let (alpha, _, order) = self.unit_parts(u)?;
        let mut alpha_order = 1u64;
        let mut a = alpha;
        while a != 1 {
            a = a * alpha % self.p;
            alpha_order += 1;
        }
        Ok(alpha_order * order)
    }

    pub fn unit_inverse(&self, u: &AlgebraElement) -> Result<AlgebraElement> {
        let (alpha, w, order) = self.unit_parts(u)?;
        let mut inv = self.pow_raw(&w, order - 1);
        inv.scale(inv_mod(alpha, self.p));
        Ok(self.wrap(inv))
    }

    /// `g⁻¹ u g` for a basis element `g_j`.
    pub fn conjugate_by_basis(&self, u: &AlgebraElement, j: usize) -> AlgebraElement {
        let left = self.mul_basis_left(self.inverse_index(j), u);
        self.mul_basis_right(&left, j)
    }

    /// `u⁻¹ v⁻¹ u v` for units.
    pub fn unit_commutator(&self, u: &AlgebraElement, v: &AlgebraElement) -> Result<AlgebraElement> {
        let ui = self.unit_inverse(u)?;
        let vi = self.unit_inverse(v)?;
        let a = self.mul(&ui, &vi)?;
        let b = self.mul(&a, u)?;
        self.mul(&b, v)
    }

    pub fn is_central(&self, u: &AlgebraElement) -> bool {
        if u.algebra != self.id {
            return false;
        }
        self.group.generators().iter().all(|g| {
            let j = self.group.index_of(g).expect("generator in group");
            self.mul_basis_right(u, j) == self.mul_basis_left(j, u)
        })
    }

    pub fn class_sums(&self) -> Vec<AlgebraElement> {
        self.group.conjugacy_classes().iter().map(|c| self.subset_sum(c)).collect()
    }

    /// Number of class sums `Ĉ` with `Ĉ = D̂^p` for some class sum `D̂ ≠ Ĉ`.
    pub fn class_sum_pth_power_count(&self) -> usize {
        let sums = self.class_sums();
        let lookup: HashMap<&FpVector, usize> = sums.iter().enumerate().map(|(i, s)| (&s.coeffs, i)).collect();
        let hits: Vec<Option<usize>> = sums
            .par_iter()
            .enumerate()
            .map(|(d, s)| {
                let power = self.pow_raw(&s.coeffs, self.p as u64);
                lookup.get(&power).copied().filter(|&c| c != d)
            })
            .collect();
        let mut found = vec![false; sums.len()];
        for c in hits.into_iter().flatten() {
            found[c] = true;
        }
        found.into_iter().filter(|&f| f).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FpMatrix;
    use crate::group::{AmbientDescriptor, Variant};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn d16_c2() -> GroupAlgebra {
        let amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 3, 1, 1).unwrap());
        let g = FiniteGroup::closure(&amb, &[amb.t(), amb.r(), amb.c()]).unwrap();
        GroupAlgebra::new(Arc::new(g))
    }

    fn heis() -> GroupAlgebra {
        let amb = Arc::new(AmbientDescriptor::new(3, Variant::Heisenberg, 1, 1, 1).unwrap());
        let g = FiniteGroup::closure(&amb, &[amb.s(), amb.s1()]).unwrap();
        GroupAlgebra::new(Arc::new(g))
    }

    fn random(alg: &GroupAlgebra, rng: &mut ChaCha8Rng) -> AlgebraElement {
        let coeffs: Vec<u32> = (0..alg.dim()).map(|_| rng.gen_range(0..alg.p())).collect();
        alg.from_coeffs(FpVector::from_coeffs(alg.p(), &coeffs)).unwrap()
    }

    fn naive_mul(alg: &GroupAlgebra, u: &AlgebraElement, v: &AlgebraElement) -> Vec<u32> {
        let dim = alg.dim();
        let g = alg.group();
        let mut out = vec![0u32; dim];
        for i in 0..dim {
            for j in 0..dim {
                let w = g.index_of(&g.mul(&g.element(i), &g.element(j))).unwrap();
                out[w] = (out[w] + u.coefficient(i) * v.coefficient(j)) % alg.p();
            }
        }
        out
    }

    #[test]
    fn convolution_matches_naive() {
        for alg in [d16_c2(), heis()] {
            assert!(alg.dim() <= 64);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..20 {
                let u = random(&alg, &mut rng);
                let v = random(&alg, &mut rng);
                let prod = alg.mul(&u, &v).unwrap();
                let expect = naive_mul(&alg, &u, &v);
                assert_eq!((0..alg.dim()).map(|i| prod.coefficient(i)).collect::<Vec<_>>(), expect);
            }
        }
    }

    #[test]
    fn basis_multiplicativity_and_squares() {
        let alg = d16_c2();
        let g = alg.group().clone();
        let amb = g.ambient().clone();
        let (a, b) = (amb.t(), amb.mul(&amb.r(), &amb.c()));
        assert_eq!(alg.mul(&alg.embed(&a).unwrap(), &alg.embed(&b).unwrap()).unwrap(), alg.embed(&amb.mul(&a, &b)).unwrap());
        let x = amb.mul(&amb.t(), &amb.c());
        let one_x = alg.add(&alg.one(), &alg.embed(&x).unwrap()).unwrap();
        let sq = alg.mul(&one_x, &one_x).unwrap();
        let expect = alg.add(&alg.one(), &alg.embed(&amb.mul(&x, &x)).unwrap()).unwrap();
        assert_eq!(sq, expect);
        assert!(!alg.is_unit(&one_x));
        assert!(alg.unit_inverse(&one_x).is_err());
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let a = d16_c2();
        let b = d16_c2();
        assert!(matches!(a.mul(&a.one(), &b.one()), Err(Error::AlgebraMismatch)));
        let amb = a.group().ambient().clone();
        let outside = amb.d();
        let small = FiniteGroup::closure(&amb, &[amb.t()]).unwrap();
        let alg = GroupAlgebra::new(Arc::new(small));
        assert!(matches!(alg.embed(&outside), Err(Error::NotInGroup)));
    }

    #[test]
    fn augmentation_examples() {
        let alg = d16_c2();
        let g = alg.group().clone();
        for i in [1usize, 5, 17] {
            let e = alg.sub(&alg.basis(i), &alg.one()).unwrap();
            assert_eq!(alg.augmentation(&e), 0);
        }
        for cls in g.conjugacy_classes().iter().filter(|c| c.len() == 2) {
            assert_eq!(alg.augmentation(&alg.subset_sum(cls)), 0);
        }
    }

    /// Rank of the right regular representation matrix of `u`.
    fn regular_rank(alg: &GroupAlgebra, u: &AlgebraElement) -> usize {
        let rows = (0..alg.dim()).map(|i| alg.mul_basis_left(i, u).coeffs().clone()).collect();
        FpMatrix::from_rows(alg.p(), alg.dim(), rows).unwrap().rank()
    }

    #[test]
    fn unit_criterion_matches_regular_representation() {
        let amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 3, 4, 3).unwrap());
        let x = amb.mul(&amb.t(), &amb.c());
        let y = amb.mul(&amb.s(), &amb.d());
        let big = GroupAlgebra::new(Arc::new(FiniteGroup::closure(&amb, &[x, y]).unwrap()));
        assert_eq!(big.dim(), 512);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut units = 0;
        for (alg, count) in [(&big, 40), (&d16_c2(), 30), (&heis(), 30)] {
            for _ in 0..count {
                let u = random(alg, &mut rng);
                let full = regular_rank(alg, &u) == alg.dim();
                assert_eq!(alg.is_unit(&u), full);
                if full {
                    units += 1;
                    let inv = alg.unit_inverse(&u).unwrap();
                    assert_eq!(alg.mul(&inv, &u).unwrap(), alg.one());
                    assert_eq!(alg.mul(&u, &inv).unwrap(), alg.one());
                }
            }
        }
        assert!(units > 20);
    }

    #[test]
    fn unit_orders() {
        let alg = heis();
        let u = alg.scale(2, &alg.one()).unwrap();
        assert_eq!(alg.unit_order(&u).unwrap(), 2);
        let g = alg.basis(5);
        let o = alg.group().ambient().element_order(&alg.group().element(5));
        assert_eq!(alg.unit_order(&g).unwrap(), o);
        let v = alg.scale(2, &g).unwrap();
        assert_eq!(alg.unit_order(&v).unwrap(), 2 * o);
    }

    #[test]
    fn center_is_spanned_by_class_sums() {
        for alg in [d16_c2(), heis()] {
            let sums = alg.class_sums();
            assert_eq!(sums.len(), alg.group().conjugacy_classes().len());
            assert!(sums.iter().all(|s| alg.is_central(s)));
            let dim = alg.dim();
            let p = alg.p();
            let basis = FpMatrix::from_rows(p, dim, sums.iter().map(|s| s.coeffs().clone()).collect()).unwrap();
            assert_eq!(basis.rank(), sums.len());
            // The centre is the kernel of u ↦ (u g − g u) over the generators.
            let gens: Vec<usize> = alg.group().generators().iter().map(|g| alg.group().index_of(g).unwrap()).collect();
            let rows = (0..dim)
                .map(|i| {
                    let e = alg.basis(i);
                    let mut row = Vec::with_capacity(dim * gens.len());
                    for &j in &gens {
                        let d = alg.sub(&alg.mul_basis_right(&e, j), &alg.mul_basis_left(j, &e)).unwrap();
                        row.extend((0..dim).map(|w| d.coefficient(w)));
                    }
                    FpVector::from_coeffs(p, &row)
                })
                .collect();
            let commutator_map = FpMatrix::from_rows(p, dim * gens.len(), rows).unwrap();
            assert_eq!(dim - commutator_map.rank(), sums.len());
        }
    }

    #[test]
    fn pth_power_count_abelian() {
        let amb = Arc::new(AmbientDescriptor::new(2, Variant::Dihedral, 1, 3, 1).unwrap());
        let g = FiniteGroup::closure(&amb, &[amb.c(), amb.d()]).unwrap();
        let alg = GroupAlgebra::new(Arc::new(g.clone()));
        // In an abelian group, ĝ^p = g^p; count elements that are p-th powers of other elements.
        let mut targets: Vec<usize> = (0..g.order())
            .filter_map(|i| {
                let q = amb.pow(&g.element(i), 2);
                let j = g.index_of(&q).unwrap();
                (j != i).then_some(j)
            })
            .collect();
        targets.sort_unstable();
        targets.dedup();
        assert_eq!(alg.class_sum_pth_power_count(), targets.len());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn ring_axioms(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for alg in [d16_c2(), heis()] {
                let (a, b, c) = (random(&alg, &mut rng), random(&alg, &mut rng), random(&alg, &mut rng));
                let ab_c = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
                let a_bc = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
                prop_assert_eq!(ab_c, a_bc);
                let left = alg.mul(&a, &alg.add(&b, &c).unwrap()).unwrap();
                let right = alg.add(&alg.mul(&a, &b).unwrap(), &alg.mul(&a, &c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
                let left = alg.mul(&alg.add(&a, &b).unwrap(), &c).unwrap();
                let right = alg.add(&alg.mul(&a, &c).unwrap(), &alg.mul(&b, &c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
                prop_assert_eq!(alg.mul(&alg.one(), &a).unwrap(), a.clone());
                prop_assert_eq!(alg.mul(&a, &alg.one()).unwrap(), a.clone());
                let ab = alg.mul(&a, &b).unwrap();
                prop_assert_eq!(alg.augmentation(&ab), alg.augmentation(&a) * alg.augmentation(&b) % alg.p());
                prop_assert_eq!(alg.augmentation(&alg.add(&a, &b).unwrap()), (alg.augmentation(&a) + alg.augmentation(&b)) % alg.p());
            }
        }
    }
}
