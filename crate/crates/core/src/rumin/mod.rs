//! The Rumin complex on ℍⁿ: bases of `E₀ʰ`, the projections `Π_{E₀}` and `Π_E`, `d_c`,
//! its adjoint, the Rumin Laplacians and Leibniz commutators.

pub mod basis;
pub mod bump;
pub mod complex;
pub mod leibniz;
pub mod operator;

pub use basis::{build_basis, RuminBasis};
pub use bump::{BumpPoly, BumpShape};
pub use complex::{RuminComplex, RuminForm};
pub use leibniz::{leibniz_decompose, LeibnizDecomposition, VarOperator};
pub use operator::{LeftInvariantOperator, NcPoly, Word};
