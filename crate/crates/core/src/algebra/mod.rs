//! Group algebras over `F_p` and dense linear algebra.

mod fpvec;
mod group_algebra;
mod ideal;
mod matrix;

pub use fpvec::FpVector;
pub use group_algebra::{AlgebraElement, GroupAlgebra};
pub use ideal::{aug_ideal_filtration, aug_ideal_power_basis, jennings_polynomial, AugmentationFiltration};
pub use matrix::{Echelon, FpMatrix, RowSpace};
