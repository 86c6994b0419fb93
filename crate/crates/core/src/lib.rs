pub mod error;
pub mod harness;
pub mod heisenberg;
pub mod exterior;
pub mod grid;
pub mod linalg;
pub mod rumin;
pub mod solver;

pub use error::{Error, Result};
pub mod verify;
