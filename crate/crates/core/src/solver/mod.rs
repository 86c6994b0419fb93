//! Primitives of `d_c`-exact forms: homotopy on balls and the global Laplacian route.

pub mod checks;
pub mod homotopy;
pub mod kernel;
pub mod krylov;
pub mod laplace;
pub mod multigrid;
pub mod primitive;
