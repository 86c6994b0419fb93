use rayon::prelude::*;

use super::field::{GridField, GridRuminForm};
use super::spec::GridSpec;
use crate::error::{Error, Result};
use crate::heisenberg::group::{inv_f64, koranyi_f64, mul_f64};

/// Group convolution `f∗g(p) = ∫ f(q) g(q⁻¹·p) dq` sampled on `out`.
///
/// The sum runs over the nonzero samples of whichever factor has the smaller support; the
/// other factor is interpolated trilinearly and taken as zero outside its box. The flag
/// reports that the factor entering the sum touches the boundary of its box, in which case
/// part of its support was cut off.
pub fn group_convolve_checked(f: &GridField, g: &GridField, out: &GridSpec) -> (GridField, bool) {
    let supp = |a: &GridField| a.data.iter().filter(|v| **v != 0.0).count();
    let left_sum = supp(f) <= supp(g);
    let (summed, interp) = if left_sum { (f, g) } else { (g, f) };
    let cell = summed.spec.cell_volume();
    let nodes: Vec<([f64; 3], f64)> = summed.data.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (summed.spec.coords(i), *v * cell)).collect();
    let edge = summed.spec.interior_mask(1);
    let overflow = summed.data.iter().zip(&edge).any(|(v, inner)| *v != 0.0 && !inner);
    let data = (0..out.len())
        .into_par_iter()
        .map(|i| {
            let p = out.coords(i);
            let mut acc = 0.0;
            for (q, w) in &nodes {
                // left_sum: f(q) g(q⁻¹p); otherwise g(z) f(p z⁻¹)
                let arg = if left_sum { mul_f64(inv_f64(*q), p) } else { mul_f64(p, inv_f64(*q)) };
                acc += w * interp.interpolate(arg);
            }
            acc
        })
        .collect();
    (GridField { spec: out.clone(), data }, overflow)
}

pub fn group_convolve(f: &GridField, g: &GridField, out: &GridSpec) -> GridField {
    group_convolve_checked(f, g, out).0
}

/// Standard bump `exp(−1/(1−ρ⁴))` on the unit Korányi ball; even under `p ↦ p⁻¹`.
pub fn standard_bump(p: [f64; 3]) -> f64 {
    let r = koranyi_f64(p);
    let r4 = r * r * r * r;
    if r4 < 1.0 {
        (-1.0 / (1.0 - r4)).exp()
    } else {
        0.0
    }
}

/// `J_ε = ε^{−Q} J∘δ_{1/ε}` on a lattice with the steps of `spec`, normalized to unit discrete mass.
pub fn mollifier(spec: &GridSpec, eps: f64) -> Result<GridField> {
    let min = 2.0 * spec.max_step();
    if !(eps >= min) {
        return Err(Error::BelowResolution { eps, min });
    }
    let h = spec.steps();
    let reach = [eps, eps, eps * eps / 4.0];
    let mut points = [0usize; 3];
    let mut half = [0.0; 3];
    for a in 0..3 {
        let m = ((reach[a] / h[a]).ceil() as usize + 1).max(2);
        points[a] = 2 * m + 1;
        half[a] = m as f64 * h[a];
    }
    let js = GridSpec::new(half, points)?;
    let j = GridField::from_fn(&js, |p| standard_bump([p[0] / eps, p[1] / eps, p[2] / (eps * eps)]));
    let mass = j.integrate();
    Ok(j.scale(1.0 / mass))
}

/// Componentwise `J_ε ∗ a`; commutes with left-invariant operators.
pub fn mollify(a: &GridRuminForm, eps: f64) -> Result<GridRuminForm> {
    let spec = a.spec().clone();
    let j = mollifier(&spec, eps)?;
    Ok(GridRuminForm { n: a.n, degree: a.degree, coeffs: a.coeffs.iter().map(|c| group_convolve(&j, c, &spec)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_preservation() {
        let s = GridSpec::cube(1.0, 0.5, 17).unwrap();
        let one = GridRuminForm { n: 1, degree: 0, coeffs: vec![GridField::constant(&s, 1.0)] };
        let m = mollify(&one, 0.3).unwrap();
        let mask = s.interior_mask(6);
        for (v, inner) in m.coeffs[0].data.iter().zip(&mask) {
            if *inner {
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
        assert!(mollify(&one, 0.01).is_err());
    }
}
