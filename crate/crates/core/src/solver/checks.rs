//! Independent oracles for the discrete inverse Laplacian.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::laplace::{LaplaceOptions, LaplaceSolver};
use super::primitive::{commutation_check, CommutationReport};
use crate::error::Result;
use crate::grid::{discretize_bump, norm, GridComplex, GridField, GridSpec};
use crate::heisenberg::group::koranyi_f64;
use crate::rumin::{BumpPoly, RuminForm};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManufacturedReport {
    pub degree: usize,
    /// `‖u − g‖₂ / ‖g‖₂` over the data lattice.
    pub error: f64,
    pub iterations: usize,
    pub seconds: f64,
}

/// Solves `Δ_{ℍ,h}u = α` for `α = Δ_{ℍ,h}g` computed symbolically, and compares `u` with `g`.
pub fn manufactured_inverse(g: &RuminForm<BumpPoly>, spec: &GridSpec, opts: &LaplaceOptions) -> Result<ManufacturedReport> {
    let gc = GridComplex::get()?;
    let cx = gc.cx.clone();
    let h = g.degree;
    let alpha = RuminForm::new(1, h, cx.laplacian(h)?.apply(&g.coeffs));
    let exact = discretize_bump(&cx, g, spec);
    let rhs = discretize_bump(&cx, &alpha, spec);
    let t = Instant::now();
    let (u, out) = LaplaceSolver::new(gc, h, spec, opts.clone())?.solve(&rhs)?;
    let seconds = t.elapsed().as_secs_f64();
    Ok(ManufacturedReport { degree: h, error: norm(&u.sub(&exact), 2.0, None)? / norm(&exact, 2.0, None)?, iterations: out.iterations, seconds })
}

/// [`commutation_check`] on `α = Δ_{ℍ,h}g` for a compactly supported `g`.
///
/// On the whole group both sides then equal the corresponding derivative of `g`, which vanishes
/// near the faces of the box, so the Dirichlet problems on the box see the same solutions and
/// the difference measures the discretization alone. For a general `α` the box inverses differ
/// from the whole-group ones by boundary terms that do not vanish under refinement.
pub fn manufactured_commutation(g: &RuminForm<BumpPoly>, spec: &GridSpec, opts: &LaplaceOptions) -> Result<CommutationReport> {
    let cx = GridComplex::get()?.cx.clone();
    let alpha = RuminForm::new(1, g.degree, cx.laplacian(g.degree)?.apply(&g.coeffs));
    commutation_check(&discretize_bump(&cx, &alpha, spec), opts)
}

/// `max |Δ_{ℍ,0}ρ⁻²| / max |W₁²ρ⁻²|` over the annulus `3/4 ≤ ρ ≤ 5/4`, with the solver's stencil.
/// The analytic value is zero, `ρ⁻²` being a multiple of the fundamental solution on ℍ¹.
pub fn folland_residual(spec: &GridSpec) -> Result<f64> {
    let gc = GridComplex::get()?;
    let f = GridField::from_fn(spec, |p| {
        let r = koranyi_f64(p);
        if r > 0.0 {
            1.0 / (r * r)
        } else {
            0.0
        }
    });
    let lap = gc.compact[0].on(spec).apply(&f.data);
    let x1 = crate::grid::apply_letter(spec, 0, &f.data, crate::grid::Boundary::OneSided);
    let xx = crate::grid::apply_letter(spec, 0, &x1, crate::grid::Boundary::OneSided);
    let inner = spec.interior_mask(4);
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for i in 0..spec.len() {
        let r = koranyi_f64(spec.coords(i));
        if inner[i] && (0.75..=1.25).contains(&r) {
            num = num.max(lap[i].abs());
            den = den.max(xx[i].abs());
        }
    }
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folland_residual_shrinks() {
        let a = folland_residual(&GridSpec::cube(2.0, 1.0, 33).unwrap()).unwrap();
        let b = folland_residual(&GridSpec::cube(2.0, 1.0, 65).unwrap()).unwrap();
        assert!(b < 0.5 * a, "{a} → {b}");
    }
}
