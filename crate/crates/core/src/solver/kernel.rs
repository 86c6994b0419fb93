//! Homogeneous convolution kernels and the fundamental solution of the sub-Laplacian on ℍ¹.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::heisenberg::group::koranyi_f64;
use crate::heisenberg::{apply_field, rat, Poly};

/// A kernel of type `μ`: smooth away from `e` and homogeneous of degree `μ − Q`.
#[derive(Clone)]
pub struct KernelSpec {
    pub mu: f64,
    /// Homogeneous dimension of the group.
    pub q: f64,
    eval: Arc<dyn Fn([f64; 3]) -> f64 + Send + Sync>,
}

impl fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelSpec").field("mu", &self.mu).field("q", &self.q).finish()
    }
}

impl KernelSpec {
    pub fn new(mu: f64, q: f64, eval: impl Fn([f64; 3]) -> f64 + Send + Sync + 'static) -> Self {
        KernelSpec { mu, q, eval: Arc::new(eval) }
    }

    /// `ρ^{2−Q}` on ℍ¹, the fundamental solution of `−(X² + Y²)` up to a constant.
    pub fn folland() -> Self {
        KernelSpec::new(2.0, 4.0, |p| {
            let r = koranyi_f64(p);
            1.0 / (r * r)
        })
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        (self.eval)(p)
    }

    pub fn degree(&self) -> f64 {
        self.mu - self.q
    }

    /// Largest relative deviation from `K(δ_r p) = r^{μ−Q} K(p)` over random `p ≠ e` and `r`.
    pub fn homogeneity_defect<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let p = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            if koranyi_f64(p) < 1e-3 {
                continue;
            }
            let r: f64 = rng.gen_range(0.1..10.0);
            let lhs = self.eval([r * p[0], r * p[1], r * r * p[2]]);
            let rhs = r.powf(self.degree()) * self.eval(p);
            let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
            worst = worst.max((lhs - rhs).abs() / scale);
        }
        worst
    }
}

/// `ρ⁴ = (x² + y²)² + 16t²` as an exact polynomial.
pub fn koranyi_fourth_poly() -> Poly {
    let x = Poly::var(3, 0);
    let y = Poly::var(3, 1);
    let t = Poly::var(3, 2);
    let r2 = x.mul(&x).add(&y.mul(&y));
    r2.mul(&r2).add(&t.mul(&t).scale(&rat(16, 1)))
}

/// `P·(X²+Y²)P − (3/2)|∇_H P|²` for `P = ρ⁴`.
///
/// For `s = −1/2`, `(X²+Y²)P^s = s P^{s−2} (P·(X²+Y²)P + (s−1)|∇_H P|²)`, so this polynomial
/// vanishes identically exactly when `ρ^{-2}` is harmonic for the sub-Laplacian off `e`.
pub fn folland_defect() -> Poly {
    let p = koranyi_fourth_poly();
    let field = |j: usize, f: &Poly| apply_field(1, j, f).expect("field index in range");
    let xp = field(1, &p);
    let yp = field(2, &p);
    let lp = field(1, &xp).add(&field(2, &yp));
    let grad2 = xp.mul(&xp).add(&yp.mul(&yp));
    p.mul(&lp).sub(&grad2.scale(&rat(3, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn folland_is_exactly_harmonic() {
        assert!(folland_defect().is_zero());
    }

    #[test]
    fn folland_kernel_is_homogeneous() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let k = KernelSpec::folland();
        assert_eq!(k.degree(), -2.0);
        assert!(k.homogeneity_defect(&mut rng, 200) < 1e-12);
    }

    #[test]
    fn wrong_type_is_detected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let k = KernelSpec::new(1.0, 4.0, |p| 1.0 / koranyi_f64(p).powi(2));
        assert!(k.homogeneity_defect(&mut rng, 50) > 0.1);
    }
}
