//! Floating-point Rumin forms on uniform lattices over ℍ¹.

pub mod compact;
pub mod consistency;
pub mod convolution;
pub mod field;
pub mod io;
pub mod norms;
pub mod ops;
pub mod pairing;
pub mod spec;

pub use compact::{CompactOperator, CompactStencil, CoordOperator};
pub use consistency::{dc_squared_residual, integration_by_parts_residual};
pub use convolution::{group_convolve, group_convolve_checked, mollifier, mollify, standard_bump};
pub use field::{discretize, discretize_bump, GridField, GridRuminForm};
pub use norms::{bl_norm, field_norm, norm};
pub use ops::{apply_letter, apply_operator, Boundary, DiscreteOperator, GridComplex};
pub use pairing::{integrate_wedge, wedge_matrix};
pub use spec::GridSpec;
