//! Consistency measures of the discrete complex: `d_c²` and integration by parts.

use super::field::GridRuminForm;
use super::norms::norm;
use super::ops::{Boundary, GridComplex};
use super::pairing::integrate_wedge;
use crate::error::Result;

/// `max |d_cd_cg| / max |d_cg|` two stencil widths inside the box.
pub fn dc_squared_residual(gc: &GridComplex, g: &GridRuminForm) -> Result<f64> {
    let mask = g.spec().interior_mask(4);
    let d = gc.d_c(g, Boundary::OneSided)?;
    let dd = gc.d_c(&d, Boundary::OneSided)?;
    let scale = d.restrict(&mask).max_abs();
    Ok(if scale > 0.0 { dd.restrict(&mask).max_abs() / scale } else { 0.0 })
}

/// `|∫d_cα∧φ − (−1)^{h+1}∫α∧d_cφ|` relative to `‖d_cα‖‖φ‖ + ‖α‖‖d_cφ‖` (`L²`), `h = deg α`.
pub fn integration_by_parts_residual(gc: &GridComplex, alpha: &GridRuminForm, phi: &GridRuminForm) -> Result<f64> {
    let da = gc.d_c(alpha, Boundary::OneSided)?;
    let dp = gc.d_c(phi, Boundary::OneSided)?;
    let lhs = integrate_wedge(gc, &da, phi)?;
    let rhs = integrate_wedge(gc, alpha, &dp)?;
    let sign = if alpha.degree % 2 == 0 { -1.0 } else { 1.0 };
    let scale = norm(&da, 2.0, None)? * norm(phi, 2.0, None)? + norm(alpha, 2.0, None)? * norm(&dp, 2.0, None)?;
    Ok(if scale > 0.0 { (lhs - sign * rhs).abs() / scale } else { 0.0 })
}
