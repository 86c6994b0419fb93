use super::field::{GridField, GridRuminForm};
use super::ops::{Boundary, GridComplex};
use crate::error::{Error, Result};

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

fn lp_of_pointwise(values: impl Iterator<Item = f64>, p: f64, cell: f64) -> f64 {
    if p.is_infinite() {
        return values.fold(0.0, f64::max);
    }
    (values.map(|v| v.powf(p)).sum::<f64>() * cell).powf(1.0 / p)
}

/// Riemann-sum `Lᵖ` norm of a scalar field, optionally over a mask.
pub fn field_norm(f: &GridField, p: f64, mask: Option<&[bool]>) -> Result<f64> {
    check_exponent(p)?;
    let cell = f.spec.cell_volume();
    Ok(match mask {
        None => lp_of_pointwise(f.data.iter().map(|v| v.abs()), p, cell),
        Some(m) => lp_of_pointwise(f.data.iter().zip(m).filter(|(_, &b)| b).map(|(v, _)| v.abs()), p, cell),
    })
}

/// `Lᵖ` norm of the pointwise Euclidean length of the coefficient vector.
pub fn norm(a: &GridRuminForm, p: f64, mask: Option<&[bool]>) -> Result<f64> {
    check_exponent(p)?;
    if a.coeffs.is_empty() {
        return Ok(0.0);
    }
    let cell = a.spec().cell_volume();
    let m = a.spec().len();
    let pointwise = (0..m).filter(|&i| mask.map_or(true, |mk| mk[i])).map(|i| a.coeffs.iter().map(|c| c.data[i] * c.data[i]).sum::<f64>().sqrt());
    Ok(lp_of_pointwise(pointwise, p, cell))
}

/// Beppo Levi norm `Σ_j ‖W_j a‖_p` over the horizontal fields.
pub fn bl_norm(gc: &GridComplex, a: &GridRuminForm, p: f64, mask: Option<&[bool]>, boundary: Boundary) -> Result<f64> {
    check_exponent(p)?;
    let mut s = 0.0;
    for j in 0..2u8 {
        s += norm(&gc.apply_field(j, a, boundary), p, mask)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn constant_norms() {
        let s = GridSpec::cube(1.0, 1.0, 5).unwrap();
        let f = GridField::constant(&s, 2.0);
        let vol = s.len() as f64 * s.cell_volume();
        assert!((field_norm(&f, 1.0, None).unwrap() - 2.0 * vol).abs() < 1e-12);
        assert_eq!(field_norm(&f, f64::INFINITY, None).unwrap(), 2.0);
        assert!(field_norm(&f, 0.5, None).is_err());
        let z = GridField::zeros(&s);
        assert_eq!(field_norm(&z, 3.0, None).unwrap(), 0.0);
    }
}
