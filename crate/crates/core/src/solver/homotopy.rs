//! Averaged cone homotopy `K = Π_{E₀}Π_E K_Euc Π_E` on Korányi balls of ℍ¹.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{basis_masks, mask_index, wedge_sign, Mask};
use crate::grid::{norm, standard_bump, Boundary, GridComplex, GridField, GridRuminForm, GridSpec};
use crate::heisenberg::group::koranyi_f64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyOptions {
    /// Ratio of the data ball to the unit ball.
    pub lambda: f64,
    /// Korányi radius of the base-point bump.
    pub base_radius: f64,
    pub quadrature_points: usize,
    /// Base points beyond this count are thinned by a lattice stride.
    pub max_base_points: usize,
    /// Admissible relative residual of the discrete `d_cω`.
    pub closed_tol: f64,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        HomotopyOptions { lambda: 2.0, base_radius: 0.5, quadrature_points: 8, max_base_points: 400, closed_tol: 0.1 }
    }
}

/// Nodes and weights of the Gauss–Legendre rule on `[0, 1]`.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Relative size of the discrete `d_cω` against the derivatives of the same order of `ω`,
/// measured two cells away from the faces.
pub fn closedness_residual(gc: &GridComplex, omega: &GridRuminForm) -> Result<f64> {
    if omega.degree >= 3 {
        return Ok(0.0);
    }
    let mask = omega.spec().interior_mask(4);
    let dw = gc.d_c(omega, Boundary::OneSided)?;
    let num = norm(&dw, 2.0, Some(&mask))?;
    let order = gc.cx.dc_weight(omega.degree);
    let mut words: Vec<GridRuminForm> = vec![omega.clone()];
    for _ in 0..order {
        words = words.iter().flat_map(|w| (0..2u8).map(move |j| gc.apply_field(j, w, Boundary::OneSided))).collect();
    }
    let mut den = 0.0;
    for w in &words {
        den += norm(w, 2.0, Some(&mask))?;
    }
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

/// Rewrite between the coframes `(dx, dy, θ)` and `(dx, dy, dt)`; `half = −½` goes to `dt`.
fn change_frame(fields: &[GridField], h: usize, half: f64) -> Vec<GridField> {
    let spec = &fields[0].spec;
    let masks = basis_masks(1, h);
    let theta: Mask = 0b100;
    let xs = GridField::from_fn(spec, |p| p[0]);
    let ys = GridField::from_fn(spec, |p| p[1]);
    let mut out = fields.to_vec();
    for (m, c) in masks.iter().zip(fields) {
        if m & theta == 0 {
            continue;
        }
        let rest = m & !theta;
        for (var, dir, sgn) in [(&xs, 0b010u32, half), (&ys, 0b001u32, -half)] {
            let s = wedge_sign(rest, dir);
            if s != 0 {
                let target = mask_index(1, rest | dir);
                let f = &mut out[target];
                for ((o, a), v) in f.data.iter_mut().zip(&c.data).zip(&var.data) {
                    *o += sgn * s as f64 * v * a;
                }
            }
        }
    }
    out
}

/// Base points with their normalized bump weights.
fn base_points(spec: &GridSpec, radius: f64, cap: usize) -> Vec<([f64; 3], f64)> {
    let inside: Vec<usize> = (0..spec.len()).filter(|&i| koranyi_f64(spec.coords(i)) < radius).collect();
    let stride = inside.len().div_ceil(cap.max(1)).max(1);
    let s = 1.0 / radius;
    let mut pts: Vec<([f64; 3], f64)> = inside
        .iter()
        .step_by(stride)
        .map(|&i| {
            let p = spec.coords(i);
            (p, standard_bump([s * p[0], s * p[1], s * s * p[2]]))
        })
        .filter(|(_, w)| *w > 0.0)
        .collect();
    let total: f64 = pts.iter().map(|(_, w)| w).sum();
    pts.iter_mut().for_each(|(_, w)| *w /= total);
    pts
}

/// `Σ_y w_y ∫₀¹ s^{h−1} ι_{x−y} F(y + s(x−y)) ds` on the lattice points of `mask`.
fn cone_homotopy(fields: &[GridField], h: usize, base: &[([f64; 3], f64)], nodes: &[(f64, f64)], mask: &[bool]) -> Vec<GridField> {
    let spec = fields[0].spec.clone();
    let src = basis_masks(1, h);
    let dst_dim = basis_masks(1, h - 1).len();
    // contraction table: source component → (target component, coordinate, sign)
    let table: Vec<Vec<(usize, usize, f64)>> = src
        .iter()
        .map(|&m| {
            (0..3)
                .filter(|&a| m & (1 << a) != 0)
                .enumerate()
                .map(|(pos, a)| (mask_index(1, m & !(1 << a)), a, if pos % 2 == 0 { 1.0 } else { -1.0 }))
                .collect()
        })
        .collect();
    let points: Vec<usize> = (0..spec.len()).filter(|&i| mask[i]).collect();
    let values: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&i| {
            let x = spec.coords(i);
            let mut acc = vec![0.0; dst_dim];
            let mut f = vec![0.0; src.len()];
            for (y, w) in base {
                let v = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
                f.iter_mut().for_each(|c| *c = 0.0);
                for &(s, g) in nodes {
                    let q = [y[0] + s * v[0], y[1] + s * v[1], y[2] + s * v[2]];
                    let ws = g * s.powi(h as i32 - 1);
                    for (c, field) in f.iter_mut().zip(fields) {
                        *c += ws * field.interpolate(q);
                    }
                }
                for (c, row) in f.iter().zip(&table) {
                    for &(t, a, sg) in row {
                        acc[t] += w * sg * v[a] * c;
                    }
                }
            }
            acc
        })
        .collect();
    let mut out = vec![GridField::zeros(&spec); dst_dim];
    for (&i, v) in points.iter().zip(&values) {
        for (o, x) in out.iter_mut().zip(v) {
            o.data[i] = *x;
        }
    }
    out
}

fn apply_pi_e(gc: &GridComplex, h: usize, fields: &[GridField]) -> Vec<GridField> {
    let spec = fields[0].spec.clone();
    let flat: Vec<f64> = fields.iter().flat_map(|f| f.data.iter().copied()).collect();
    let out = gc.pi_e[h].apply_flat(&spec, &flat, Boundary::OneSided);
    out.chunks(spec.len()).map(|c| GridField { spec: spec.clone(), data: c.to_vec() }).collect()
}

/// `Kω` for a `d_c`-closed form on `B(e, λ)`; the result is supported in `B(e, (1+λ)/2)`.
pub fn il_homotopy(omega: &GridRuminForm, opts: &HomotopyOptions) -> Result<GridRuminForm> {
    let h = omega.degree;
    if h == 0 || h > 3 {
        return Err(Error::DegreeOutOfRange { degree: h, max: 3 });
    }
    if !(opts.lambda > 1.0) || !(opts.base_radius > 0.0 && opts.base_radius < 1.0) || opts.quadrature_points == 0 {
        return Err(Error::Config(format!("homotopy needs λ > 1 and a base radius in (0, 1), got λ = {}, r = {}", opts.lambda, opts.base_radius)));
    }
    let spec = omega.spec().clone();
    if !spec.contains_ball(opts.lambda) {
        return Err(Error::BallOutsideGrid { radius: opts.lambda });
    }
    let gc = GridComplex::get()?;
    let residual = closedness_residual(&gc, omega)?;
    if residual > opts.closed_tol {
        return Err(Error::NotClosed { residual, threshold: opts.closed_tol });
    }
    let lifted = apply_pi_e(&gc, h, &gc.embed(omega));
    let coord = change_frame(&lifted, h, -0.5);
    let base = base_points(&spec, opts.base_radius, opts.max_base_points);
    let nodes = gauss_legendre(opts.quadrature_points);
    let out_mask = spec.ball_mask(0.5 * (1.0 + opts.lambda));
    let k = cone_homotopy(&coord, h, &base, &nodes, &out_mask);
    let back = change_frame(&k, h - 1, 0.5);
    Ok(gc.project(h - 1, &apply_pi_e(&gc, h - 1, &back)))
}

/// `‖d_cKω − ω‖_{L^Q(B)} / ‖ω‖_{L^Q(B_λ)}` with `Q = 4`.
pub fn reconstruction_residual(omega: &GridRuminForm, k_omega: &GridRuminForm, lambda: f64) -> Result<f64> {
    let gc = GridComplex::get()?;
    let spec = omega.spec();
    let d = gc.d_c(k_omega, Boundary::OneSided)?;
    let num = norm(&d.sub(omega), 4.0, Some(&spec.ball_mask(1.0)))?;
    let den = norm(omega, 4.0, Some(&spec.ball_mask(lambda)))?;
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_integrates_polynomials() {
        let rule = gauss_legendre(8);
        let w: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((w - 1.0).abs() < 1e-14);
        for k in 0..16 {
            let q: f64 = rule.iter().map(|(s, w)| w * s.powi(k)).sum();
            assert!((q - 1.0 / (k as f64 + 1.0)).abs() < 1e-13, "degree {k}");
        }
    }

    #[test]
    fn frame_change_round_trips() {
        let spec = GridSpec::cube(1.0, 1.0, 5).unwrap();
        for h in 1..=3 {
            let fields: Vec<GridField> = (0..basis_masks(1, h).len()).map(|c| GridField::from_fn(&spec, move |p| p[0] * (c as f64 + 1.0) - p[2])).collect();
            let back = change_frame(&change_frame(&fields, h, -0.5), h, 0.5);
            for (a, b) in fields.iter().zip(&back) {
                assert!(a.sub(b).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let spec = GridSpec::cube(2.0, 1.0, 17).unwrap();
        let omega = GridRuminForm::zeros(&spec, 2, 2);
        let k = il_homotopy(&omega, &HomotopyOptions::default()).unwrap();
        assert_eq!(k.degree, 1);
        assert_eq!(k.max_abs(), 0.0);
    }

    #[test]
    fn small_box_is_rejected() {
        let spec = GridSpec::cube(1.0, 1.0, 9).unwrap();
        let omega = GridRuminForm::zeros(&spec, 1, 2);
        assert!(matches!(il_homotopy(&omega, &HomotopyOptions::default()), Err(Error::BallOutsideGrid { .. })));
    }
}
