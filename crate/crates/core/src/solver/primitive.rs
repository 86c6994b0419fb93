//! `d_cφ = ω` by the homotopy route or by `φ = d_c*Δ⁻¹ω`, and numerical commutation checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::homotopy::{closedness_residual, il_homotopy, HomotopyOptions};
use super::laplace::{embed_form, extract_form, LaplaceOptions, LaplaceSolver};
use crate::error::{Error, Result};
use crate::grid::{norm, Boundary, GridComplex, GridRuminForm, GridSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Homotopy,
    Laplacian,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Homotopy => "homotopy",
            Method::Laplacian => "laplacian",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "homotopy" => Ok(Method::Homotopy),
            "laplacian" => Ok(Method::Laplacian),
            other => Err(Error::Parse(format!("unknown method `{other}` (homotopy | laplacian)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub method: Method,
    /// Admissible relative residual of the discrete `d_cω`, both routes.
    pub closed_tol: f64,
    pub homotopy: HomotopyOptions,
    pub laplace: LaplaceOptions,
    /// Defect-correction sweeps of the Laplacian route: `φ += d_c*Δ⁻¹(ω − d_cφ)` with the
    /// residual taken on the interior lattice.
    pub corrections: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        let homotopy = HomotopyOptions::default();
        SolveOptions { method: Method::Laplacian, closed_tol: homotopy.closed_tol, homotopy, laplace: LaplaceOptions::default(), corrections: 2 }
    }
}

impl SolveOptions {
    pub fn with_method(method: Method) -> Self {
        SolveOptions { method, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: Method,
    pub degree: usize,
    /// `‖d_cφ − ω‖_{L^Q} / ‖ω‖_{L^Q}`, `Q = 4`.
    pub residual_lq: f64,
    /// Same ratio in `L^{Q/2}`.
    pub residual_lq_half: f64,
    pub residual_l2: f64,
    /// Relative residual of the closedness test on the input.
    pub closedness: f64,
    /// Krylov iterations; zero for the homotopy.
    pub iterations: usize,
    /// Final relative residual of the linear solve, if any.
    pub solver_residual: Option<f64>,
    pub points: [usize; 3],
    pub half_widths: [f64; 3],
    /// Where the residuals are measured.
    pub region: String,
}

/// Interior lattice points kept for residuals: two stencil widths from every face.
pub fn check_mask(spec: &GridSpec) -> Vec<bool> {
    spec.interior_mask(4)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Residual norms of `d_cφ − ω` with the numerator over `num_mask` and the denominator over `den_mask`.
pub fn residuals(gc: &GridComplex, phi: &GridRuminForm, omega: &GridRuminForm, num_mask: &[bool], den_mask: &[bool]) -> Result<[f64; 3]> {
    let diff = gc.d_c(phi, Boundary::OneSided)?.sub(omega);
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip([4.0, 2.0, 2.0]) {
        *o = ratio(norm(&diff, p, Some(num_mask))?, norm(omega, p, Some(den_mask))?);
    }
    Ok(out)
}

/// Primitive of a `d_c`-closed form of degree `1..=3`.
pub fn solve_primitive(omega: &GridRuminForm, opts: &SolveOptions) -> Result<(GridRuminForm, SolveReport)> {
    let h = omega.degree;
    if h == 0 || h > 3 {
        return Err(Error::DegreeOutOfRange { degree: h, max: 3 });
    }
    let gc = GridComplex::get()?;
    let spec = omega.spec().clone();
    let closedness = closedness_residual(&gc, omega)?;
    if closedness > opts.closed_tol {
        return Err(Error::NotClosed { residual: closedness, threshold: opts.closed_tol });
    }
    let (phi, iterations, solver_residual, num_mask, den_mask, region) = match opts.method {
        Method::Homotopy => {
            let hopts = HomotopyOptions { closed_tol: opts.closed_tol, ..opts.homotopy.clone() };
            let phi = il_homotopy(omega, &hopts)?;
            (phi, 0, None, spec.ball_mask(1.0), spec.ball_mask(hopts.lambda), format!("B(e,1) against B(e,{})", hopts.lambda))
        }
        Method::Laplacian => {
            let solver = LaplaceSolver::new(gc.clone(), h, &spec, opts.laplace.clone())?;
            let primitive = |w: &GridRuminForm| -> Result<(GridRuminForm, usize, f64)> {
                let (u, out) = solver.solve_padded(w)?;
                Ok((extract_form(&gc.d_c_star(&u, Boundary::OneSided)?, &spec), out.iterations, out.relative_residual))
            };
            let m = check_mask(&spec);
            let (mut phi, mut iterations, solver_residual) = primitive(omega)?;
            for _ in 0..opts.corrections {
                let defect = omega.sub(&gc.d_c(&phi, Boundary::OneSided)?).restrict(&m);
                let (dphi, it, _) = primitive(&defect)?;
                phi = phi.add(&dphi);
                iterations += it;
            }
            (phi, iterations, Some(solver_residual), m.clone(), m, "interior".to_string())
        }
    };
    let [lq, lq2, l2] = residuals(&gc, &phi, omega, &num_mask, &den_mask)?;
    let report = SolveReport {
        method: opts.method,
        degree: h,
        residual_lq: lq,
        residual_lq_half: lq2,
        residual_l2: l2,
        closedness,
        iterations,
        solver_residual,
        points: spec.points,
        half_widths: spec.half_widths,
        region,
    };
    Ok((phi, report))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub degree: usize,
    /// Which identity was checked, as `i`, `ii` or `iii`.
    pub identity: String,
    pub lhs_norm: f64,
    pub difference: f64,
    pub relative: f64,
    pub iterations: usize,
}

/// Both sides of the commutation of `d_c` with `Δ⁻¹` at degree `h ∈ {0, 1, 2}` on ℍ¹:
/// `d_cΔ₀⁻¹α = d_cd_c*Δ₁⁻¹d_cα`, `d_cΔ₁⁻¹α = Δ₂⁻¹d_cα` and `d_cd_c*d_cΔ₂⁻¹α = Δ₃⁻¹d_cα`.
/// Differences are measured in `L²` away from the faces of the data box.
pub fn commutation_check(alpha: &GridRuminForm, opts: &LaplaceOptions) -> Result<CommutationReport> {
    let h = alpha.degree;
    if h > 2 {
        return Err(Error::DegreeOutOfRange { degree: h, max: 2 });
    }
    let gc = GridComplex::get()?;
    let spec = alpha.spec().clone();
    let inv = |a: &GridRuminForm| -> Result<(GridRuminForm, usize)> {
        let s = LaplaceSolver::new(gc.clone(), a.degree, &spec, opts.clone())?;
        let (u, out) = s.solve_padded(a)?;
        Ok((u, out.iterations))
    };
    let dc = |a: &GridRuminForm| gc.d_c(a, Boundary::OneSided);
    let dcs = |a: &GridRuminForm| gc.d_c_star(a, Boundary::OneSided);
    let dalpha = extract_form(&dc(&embed_form(alpha, &super::laplace::padded_spec(&spec, opts.padding)?))?, &spec);
    let (u, i1) = inv(alpha)?;
    let (v, i2) = inv(&dalpha)?;
    let (lhs, rhs, identity) = match h {
        0 => (dc(&u)?, dc(&dcs(&v)?)?, "ii"),
        1 => (dc(&u)?, v, "i"),
        _ => (dc(&dcs(&dc(&u)?)?)?, v, "iii"),
    };
    let lhs = extract_form(&lhs, &spec);
    let rhs = extract_form(&rhs, &spec);
    let mask = check_mask(&spec);
    let lhs_norm = norm(&lhs, 2.0, Some(&mask))?;
    let difference = norm(&lhs.sub(&rhs), 2.0, Some(&mask))?;
    Ok(CommutationReport { degree: h, identity: identity.into(), lhs_norm, difference, relative: ratio(difference, lhs_norm), iterations: i1 + i2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_parses() {
        assert_eq!("Homotopy".parse::<Method>().unwrap(), Method::Homotopy);
        assert_eq!("laplacian".parse::<Method>().unwrap(), Method::Laplacian);
        assert!("cartan".parse::<Method>().is_err());
    }

    #[test]
    fn zero_has_zero_primitive() {
        let spec = GridSpec::cube(2.0, 1.0, 17).unwrap();
        for method in [Method::Homotopy, Method::Laplacian] {
            let omega = GridRuminForm::zeros(&spec, 3, 1);
            let (phi, rep) = solve_primitive(&omega, &SolveOptions::with_method(method)).unwrap();
            assert_eq!(phi.degree, 2);
            assert_eq!(phi.max_abs(), 0.0);
            assert_eq!(rep.residual_l2, 0.0);
        }
    }

    #[test]
    fn degree_zero_is_rejected() {
        let spec = GridSpec::cube(2.0, 1.0, 9).unwrap();
        let omega = GridRuminForm::zeros(&spec, 0, 1);
        assert!(matches!(solve_primitive(&omega, &SolveOptions::default()), Err(Error::DegreeOutOfRange { .. })));
    }
}
