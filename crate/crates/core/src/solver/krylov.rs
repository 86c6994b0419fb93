//! Preconditioned conjugate gradients with a fixed reduction order.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CgOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

/// Solve `A x = b` for symmetric positive `A`, starting from `x`.
pub fn pcg<A, M>(apply: A, precond: M, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> CgOutcome
where
    A: Fn(&[f64]) -> Vec<f64>,
    M: Fn(&[f64]) -> Vec<f64>,
{
    let bn = norm2(b);
    if bn == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return CgOutcome { iterations: 0, relative_residual: 0.0, converged: true };
    }
    let ax = apply(x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut rel = norm2(&r) / bn;
    if rel <= tol {
        return CgOutcome { iterations: 0, relative_residual: rel, converged: true };
    }
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 1..=max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return CgOutcome { iterations: it, relative_residual: rel, converged: false };
        }
        let alpha = rz / pap;
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rel = norm2(&r) / bn;
        if rel <= tol {
            return CgOutcome { iterations: it, relative_residual: rel, converged: true };
        }
        z = precond(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..p.len() {
            p[i] = z[i] + beta * p[i];
        }
    }
    CgOutcome { iterations: max_iter, relative_residual: rel, converged: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_spd() {
        // tridiagonal 1D Laplacian
        let n = 50;
        let apply = |v: &[f64]| -> Vec<f64> {
            (0..n).map(|i| 2.0 * v[i] - if i > 0 { v[i - 1] } else { 0.0 } - if i + 1 < n { v[i + 1] } else { 0.0 }).collect()
        };
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut x = vec![0.0; n];
        let out = pcg(apply, |r: &[f64]| r.to_vec(), &b, &mut x, 1e-12, 200);
        assert!(out.converged);
        let r = apply(&x);
        assert!(r.iter().zip(&b).all(|(a, b)| (a - b).abs() < 1e-9));
    }
}
