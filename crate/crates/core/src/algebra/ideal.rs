//! Powers of the augmentation ideal `A(F_pG)` and the Jennings dimension formula.

use super::fpvec::FpVector;
use super::group_algebra::GroupAlgebra;
use super::matrix::{FpMatrix, RowSpace};

/// The descending chain `A¹ ⊇ A² ⊇ … ⊇ A^t = 0`.
#[derive(Clone, Debug)]
pub struct AugmentationFiltration {
    /// `spaces[q - 1]` spans `A^q`.
    spaces: Vec<RowSpace>,
}

impl AugmentationFiltration {
    /// `dims()[q]` is `dim A^q`, starting from `A⁰ = F_pG` and ending at 0.
    pub fn dims(&self, dim: usize) -> Vec<usize> {
        std::iter::once(dim).chain(self.spaces.iter().map(RowSpace::dim)).collect()
    }

    /// Layer dimensions `dim A^q / A^{q+1}` for `q = 0, 1, …`.
    pub fn layer_dims(&self, dim: usize) -> Vec<usize> {
        let d = self.dims(dim);
        d.windows(2).map(|w| w[0] - w[1]).collect()
    }

    pub fn power(&self, q: usize) -> Option<&RowSpace> {
        if q == 0 {
            return None;
        }
        self.spaces.get(q - 1)
    }

    /// Nilpotency index: the least `t` with `A^t = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.spaces.len()
    }
}

fn generator_indices(alg: &GroupAlgebra) -> Vec<usize> {
    let g = alg.group();
    g.generators().iter().map(|s| g.index_of(s).expect("generator in group")).collect()
}

fn next_power(alg: &GroupAlgebra, prev: &RowSpace, gens: &[usize]) -> RowSpace {
    let p = alg.p();
    let mut space = RowSpace::new(p, alg.dim());
    for b in prev.basis() {
        let u = alg.from_coeffs(b.clone()).expect("same dimension");
        for &s in gens {
            let mut v = alg.mul_basis_right(&u, s).coeffs().clone();
            v.axpy_from(p - 1, b, 0);
            space.insert(&v);
        }
    }
    space
}

fn first_power(alg: &GroupAlgebra) -> RowSpace {
    let p = alg.p();
    let mut space = RowSpace::new(p, alg.dim());
    for i in 1..alg.dim() {
        let mut v = FpVector::unit(p, alg.dim(), i);
        v.set(0, p - 1);
        space.insert(&v);
    }
    space
}

/// Row basis of `A(F_pG)^q`, using `A^q = A^{q-1}·{s − 1 : s a generator}`.
pub fn aug_ideal_power_basis(alg: &GroupAlgebra, q: usize) -> FpMatrix {
    assert!(q >= 1, "power must be positive");
    let gens = generator_indices(alg);
    let mut space = first_power(alg);
    for _ in 1..q {
        if space.dim() == 0 {
            break;
        }
        space = next_power(alg, &space, &gens);
    }
    space.to_matrix()
}

pub fn aug_ideal_filtration(alg: &GroupAlgebra) -> AugmentationFiltration {
    let gens = generator_indices(alg);
    let mut spaces = vec![first_power(alg)];
    while spaces.last().unwrap().dim() > 0 {
        let next = next_power(alg, spaces.last().unwrap(), &gens);
        spaces.push(next);
    }
    AugmentationFiltration { spaces }
}

/// Coefficients of `∏_i (1 + X^i + … + X^{(p−1)i})^{d_i}` where
/// `d_i = log_p factor_orders[i − 1]`.
pub fn jennings_polynomial(p: u32, factor_orders: &[usize]) -> Vec<usize> {
    let mut poly = vec![1usize];
    for (idx, &order) in factor_orders.iter().enumerate() {
        let i = idx + 1;
        let mut d = 0;
        let mut o = order;
        while o > 1 {
            assert!(o % p as usize == 0, "factor order must be a power of p");
            o /= p as usize;
            d += 1;
        }
        for _ in 0..d {
            let mut next = vec![0usize; poly.len() + (p as usize - 1) * i];
            for (e, &c) in poly.iter().enumerate() {
                for j in 0..p as usize {
                    next[e + j * i] += c;
                }
            }
            poly = next;
        }
    }
    poly
}
