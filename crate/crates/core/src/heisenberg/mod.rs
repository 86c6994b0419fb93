//! Exact group-theoretic and differential primitives of ℍⁿ.

pub mod fields;
pub mod group;
pub mod poly;

pub type Rational = num_rational::BigRational;

pub use fields::{apply_field, apply_multi_index, apply_word, field_name, Coefficient, MultiIndex};
pub use group::{dilate, distance, group_inv, group_mul, koranyi_fourth, koranyi_norm, Point};
pub use poly::{rat, rat_int, rat_to_f64, Poly};

/// Homogeneous dimension `Q = 2n + 2`.
pub fn homogeneous_dimension(n: usize) -> usize {
    2 * n + 2
}
