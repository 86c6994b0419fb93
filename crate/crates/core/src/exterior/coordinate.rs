//! Conversion between the left-invariant coframe and the coordinate coframe
//! `{dx_i, dy_i, dt}`, and the coordinate de Rham differential.
//!
//! Coordinate forms reuse [`Form`] with mask bit `2n` standing for `dt`.

use super::{wedge_sign, Form, Mask};
use crate::heisenberg::poly::{rat, rat_int, Poly};
use crate::heisenberg::Coefficient;

/// Rewrite `θ = dt − ½Σ(x_j dy_j − y_j dx_j)`.
pub fn to_coordinate<C: Coefficient>(f: &Form<C>) -> Form<C> {
    substitute_last(f, rat(-1, 2))
}

/// Rewrite `dt = θ + ½Σ(x_j dy_j − y_j dx_j)`.
pub fn from_coordinate<C: Coefficient>(f: &Form<C>) -> Form<C> {
    substitute_last(f, rat(1, 2))
}

fn substitute_last<C: Coefficient>(f: &Form<C>, half: crate::heisenberg::Rational) -> Form<C> {
    let n = f.n;
    let nv = 2 * n + 1;
    let last: Mask = 1 << (2 * n);
    let mut r = Form::zero(n, f.degree);
    for (m, c) in &f.terms {
        if m & last == 0 {
            r.add_term(*m, c);
            continue;
        }
        r.add_term(*m, c);
        let rest = m & !last;
        for j in 0..n {
            // half · x_j ε^{rest} ∧ dy_j
            let dy: Mask = 1 << (n + j);
            let s = wedge_sign(rest, dy);
            if s != 0 {
                let coef = c.mul_poly(&Poly::var(nv, j)).scale(&(&half * rat_int(s as i64)));
                r.add_term(rest | dy, &coef);
            }
            // −half · y_j ε^{rest} ∧ dx_j
            let dx: Mask = 1 << j;
            let s = wedge_sign(rest, dx);
            if s != 0 {
                let coef = c.mul_poly(&Poly::var(nv, n + j)).scale(&(-&half * rat_int(s as i64)));
                r.add_term(rest | dx, &coef);
            }
        }
    }
    r
}

/// Euclidean exterior derivative of a coordinate-frame form.
pub fn coordinate_d(f: &Form<Poly>) -> Form<Poly> {
    let n = f.n;
    let mut r = Form::zero(n, f.degree + 1);
    for (m, c) in &f.terms {
        for i in 0..=2 * n {
            if m & (1 << i) != 0 {
                continue;
            }
            let s = wedge_sign(1 << i, *m);
            let dc = c.derivative(i);
            if !dc.is_zero() {
                r.add_term(m | (1 << i), &dc.scale(&rat_int(s as i64)));
            }
        }
    }
    r
}

/// de Rham `d` computed through the coordinate frame; an independent check of
/// [`Form::de_rham_d`].
pub fn de_rham_d_via_coordinates(f: &Form<Poly>) -> Form<Poly> {
    from_coordinate(&coordinate_d(&to_coordinate(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn roundtrip_and_d_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for n in 1..=2 {
            for h in 0..=2 * n {
                let a = Form::random(&mut rng, n, h, 3, 0.3);
                assert_eq!(from_coordinate(&to_coordinate(&a)), a);
                assert_eq!(de_rham_d_via_coordinates(&a), a.de_rham_d(), "n={n} h={h}");
            }
        }
    }
}
