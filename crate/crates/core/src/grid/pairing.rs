use super::field::GridRuminForm;
use super::ops::GridComplex;
use crate::error::{Error, Result};
use crate::exterior::{const_form, Form};
use crate::heisenberg::poly::rat_to_f64;
use crate::heisenberg::Rational;

/// `P_kl` = top coefficient of `ξ_k ∧ ξ_l` for orthonormal bases of `E₀ʰ` and `E₀^{3−h}`.
pub fn wedge_matrix(gc: &GridComplex, h: usize) -> Vec<Vec<f64>> {
    let cx = &gc.cx;
    let (a, b) = (cx.basis(h), cx.basis(3 - h));
    let sa = a.orthonormal_scales();
    let sb = b.orthonormal_scales();
    let lift = |f: Form<Rational>| Form::constant(1, &f);
    (0..a.dim())
        .map(|k| {
            let fk = lift(const_form(1, h, &a.vectors[k]));
            (0..b.dim())
                .map(|l| {
                    let fl = lift(const_form(1, 3 - h, &b.vectors[l]));
                    rat_to_f64(&fk.wedge(&fl).top_coefficient().constant_term()) / (sa[k] * sb[l])
                })
                .collect()
        })
        .collect()
}

/// `∫ α∧φ` as a Riemann sum.
pub fn integrate_wedge(gc: &GridComplex, alpha: &GridRuminForm, phi: &GridRuminForm) -> Result<f64> {
    if alpha.degree + phi.degree != 3 {
        return Err(Error::DegreeMismatch(format!("degrees {} and {} are not complementary", alpha.degree, phi.degree)));
    }
    let p = wedge_matrix(gc, alpha.degree);
    let m = alpha.spec().len();
    let mut acc = 0.0;
    for (k, row) in p.iter().enumerate() {
        for (l, w) in row.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let a = &alpha.coeffs[k].data;
            let b = &phi.coeffs[l].data;
            acc += w * (0..m).map(|i| a[i] * b[i]).sum::<f64>();
        }
    }
    Ok(acc * alpha.spec().cell_volume())
}
