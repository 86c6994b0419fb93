//! Iterative inverse of the discrete Rumin Laplacians with zero Dirichlet data on a padded box.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::krylov::{pcg, CgOutcome};
use super::multigrid::{Multigrid, MultigridOptions};
use crate::error::{Error, Result};
use crate::grid::{CompactStencil, GridComplex, GridField, GridRuminForm, GridSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Integer factor by which the solve box exceeds the data box (same steps); 1 solves on
    /// the data box itself.
    pub padding: usize,
    pub multigrid: bool,
}

impl Default for LaplaceOptions {
    fn default() -> Self {
        LaplaceOptions { tol: 1e-6, max_iter: 400, padding: 1, multigrid: true }
    }
}

/// Enlarge the box by an integer factor keeping the steps.
pub fn padded_spec(spec: &GridSpec, factor: usize) -> Result<GridSpec> {
    if factor == 0 {
        return Err(Error::Config("padding factor must be at least 1".into()));
    }
    let f = factor as f64;
    GridSpec::new(spec.half_widths.map(|a| a * f), spec.points.map(|p| (p - 1) * factor + 1))
}

fn offsets(inner: &GridSpec, outer: &GridSpec) -> [usize; 3] {
    let mut o = [0; 3];
    for a in 0..3 {
        o[a] = (outer.points[a] - inner.points[a]) / 2;
    }
    o
}

/// Copy samples into the center of a larger lattice.
pub fn embed_field(f: &GridField, outer: &GridSpec) -> GridField {
    let inner = &f.spec;
    let o = offsets(inner, outer);
    let mut out = GridField::zeros(outer);
    for i in 0..inner.points[0] {
        for j in 0..inner.points[1] {
            let src = inner.index(i, j, 0);
            let dst = outer.index(i + o[0], j + o[1], o[2]);
            out.data[dst..dst + inner.points[2]].copy_from_slice(&f.data[src..src + inner.points[2]]);
        }
    }
    out
}

/// Samples of the central sub-lattice.
pub fn extract_field(f: &GridField, inner: &GridSpec) -> GridField {
    let outer = &f.spec;
    let o = offsets(inner, outer);
    let mut out = GridField::zeros(inner);
    for i in 0..inner.points[0] {
        for j in 0..inner.points[1] {
            let dst = inner.index(i, j, 0);
            let src = outer.index(i + o[0], j + o[1], o[2]);
            out.data[dst..dst + inner.points[2]].copy_from_slice(&f.data[src..src + inner.points[2]]);
        }
    }
    out
}

pub fn embed_form(a: &GridRuminForm, outer: &GridSpec) -> GridRuminForm {
    GridRuminForm { n: a.n, degree: a.degree, coeffs: a.coeffs.iter().map(|c| embed_field(c, outer)).collect() }
}

pub fn extract_form(a: &GridRuminForm, inner: &GridSpec) -> GridRuminForm {
    GridRuminForm { n: a.n, degree: a.degree, coeffs: a.coeffs.iter().map(|c| extract_field(c, inner)).collect() }
}

/// Reusable solver for `Δ_{ℍ,h} u = α` on one data lattice.
pub struct LaplaceSolver {
    pub gc: Arc<GridComplex>,
    pub degree: usize,
    pub spec: GridSpec,
    pub solve_spec: GridSpec,
    pub opts: LaplaceOptions,
    op: CompactStencil,
    precond: Preconditioner,
}

/// Approximate inverse used inside CG.
enum Preconditioner {
    Identity,
    VCycle(Multigrid),
}

impl LaplaceSolver {
    pub fn new(gc: Arc<GridComplex>, degree: usize, spec: &GridSpec, opts: LaplaceOptions) -> Result<Self> {
        if degree > 3 {
            return Err(Error::DegreeOutOfRange { degree, max: 3 });
        }
        let solve_spec = padded_spec(spec, opts.padding)?;
        let compact = &gc.compact[degree];
        let op = compact.on(&solve_spec);
        let precond = if opts.multigrid {
            Preconditioner::VCycle(Multigrid::new(compact, &solve_spec, MultigridOptions::default()))
        } else {
            Preconditioner::Identity
        };
        Ok(LaplaceSolver { gc, degree, spec: spec.clone(), solve_spec, opts, op, precond })
    }

    /// Solution on the padded lattice.
    pub fn solve_padded(&self, alpha: &GridRuminForm) -> Result<(GridRuminForm, CgOutcome)> {
        if alpha.degree != self.degree {
            return Err(Error::DegreeMismatch(format!("solver is for degree {}, input has degree {}", self.degree, alpha.degree)));
        }
        if alpha.spec() != &self.spec {
            return Err(Error::InvalidGrid("input lattice differs from the solver lattice".into()));
        }
        let big = embed_form(alpha, &self.solve_spec);
        let b = big.flatten();
        let mut x = vec![0.0; b.len()];
        let apply = |v: &[f64]| self.op.apply(v);
        let out = match &self.precond {
            Preconditioner::Identity => pcg(apply, |r| r.to_vec(), &b, &mut x, self.opts.tol, self.opts.max_iter),
            Preconditioner::VCycle(mg) => pcg(apply, |r| mg.vcycle(r), &b, &mut x, self.opts.tol, self.opts.max_iter),
        };
        if !out.converged {
            return Err(Error::NoConvergence { iterations: out.iterations, residual: out.relative_residual });
        }
        Ok((GridRuminForm::from_flat(&self.solve_spec, self.degree, &x), out))
    }

    /// `Δ⁻¹α` restricted to the data lattice.
    pub fn solve(&self, alpha: &GridRuminForm) -> Result<(GridRuminForm, CgOutcome)> {
        let (u, out) = self.solve_padded(alpha)?;
        Ok((extract_form(&u, &self.spec), out))
    }
}

/// One-shot `Δ_{ℍ,h}⁻¹ α`.
pub fn laplacian_inverse(alpha: &GridRuminForm, opts: &LaplaceOptions) -> Result<(GridRuminForm, CgOutcome)> {
    let gc = GridComplex::get()?;
    LaplaceSolver::new(gc, alpha.degree, alpha.spec(), opts.clone())?.solve(alpha)
}
