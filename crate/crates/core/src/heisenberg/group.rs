//! Points of ℍⁿ, the group law, dilations and the Korányi gauge.

use num_traits::{Signed, Zero};
use rand::Rng;

use super::poly::{rat, rat_to_f64, Poly};
use super::Rational;
use crate::error::{Error, Result};

/// Point in exponential coordinates `(x, y, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub t: Rational,
}

impl Point {
    pub fn new(x: Vec<Rational>, y: Vec<Rational>, t: Rational) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        Ok(Point { x, y, t })
    }

    pub fn identity(n: usize) -> Self {
        Point { x: vec![Rational::zero(); n], y: vec![Rational::zero(); n], t: Rational::zero() }
    }

    pub fn from_i64(x: &[i64], y: &[i64], t: i64) -> Result<Self> {
        Self::new(x.iter().map(|&v| rat(v, 1)).collect(), y.iter().map(|&v| rat(v, 1)).collect(), rat(t, 1))
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Coordinates in variable order `x_1..x_n, y_1..y_n, t`.
    pub fn coords(&self) -> Vec<Rational> {
        let mut v = self.x.clone();
        v.extend(self.y.iter().cloned());
        v.push(self.t.clone());
        v
    }

    pub fn from_coords(c: &[Rational]) -> Self {
        let n = (c.len() - 1) / 2;
        Point { x: c[..n].to_vec(), y: c[n..2 * n].to_vec(), t: c[2 * n].clone() }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords().iter().map(rat_to_f64).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.t.is_zero() && self.x.iter().chain(self.y.iter()).all(|v| v.is_zero())
    }

    /// Random point with coordinates `k/den`, `|k| <= range`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, range: i64, den: i64) -> Self {
        let mut g = || rat(rng.gen_range(-range..=range), den);
        let x = (0..n).map(|_| g()).collect();
        let y = (0..n).map(|_| g()).collect();
        Point { x, y, t: g() }
    }
}

pub fn group_mul(p: &Point, q: &Point) -> Result<Point> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), found: q.n() });
    }
    let half = rat(1, 2);
    let mut t = &p.t + &q.t;
    for j in 0..p.n() {
        t += &half * (&p.x[j] * &q.y[j] - &p.y[j] * &q.x[j]);
    }
    Ok(Point {
        x: p.x.iter().zip(&q.x).map(|(a, b)| a + b).collect(),
        y: p.y.iter().zip(&q.y).map(|(a, b)| a + b).collect(),
        t,
    })
}

pub fn group_inv(p: &Point) -> Point {
    Point { x: p.x.iter().map(|v| -v).collect(), y: p.y.iter().map(|v| -v).collect(), t: -p.t.clone() }
}

pub fn dilate(lambda: &Rational, p: &Point) -> Result<Point> {
    if !lambda.is_positive() {
        return Err(Error::NonPositiveDilation(lambda.to_string()));
    }
    Ok(Point {
        x: p.x.iter().map(|v| v * lambda).collect(),
        y: p.y.iter().map(|v| v * lambda).collect(),
        t: &p.t * lambda * lambda,
    })
}

/// Exact fourth power of the Korányi gauge, `|p'|⁴ + 16t²`.
pub fn koranyi_fourth(p: &Point) -> Rational {
    let mut r2 = Rational::zero();
    for v in p.x.iter().chain(p.y.iter()) {
        r2 += v * v;
    }
    &r2 * &r2 + rat(16, 1) * &p.t * &p.t
}

pub fn koranyi_norm(p: &Point) -> f64 {
    rat_to_f64(&koranyi_fourth(p)).powf(0.25)
}

/// Gauge distance `ρ(q⁻¹p)`.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    Ok(koranyi_norm(&group_mul(&group_inv(q), p)?))
}

/// Euclidean norm of the coordinate vector.
pub fn euclidean_norm(p: &Point) -> f64 {
    p.coords().iter().map(|v| rat_to_f64(v).powi(2)).sum::<f64>().sqrt()
}

/// Floating-point group law for `n = 1`, used by the grid layer.
#[inline]
pub fn mul_f64(p: [f64; 3], q: [f64; 3]) -> [f64; 3] {
    [p[0] + q[0], p[1] + q[1], p[2] + q[2] + 0.5 * (p[0] * q[1] - p[1] * q[0])]
}

#[inline]
pub fn inv_f64(p: [f64; 3]) -> [f64; 3] {
    [-p[0], -p[1], -p[2]]
}

#[inline]
pub fn koranyi_f64(p: [f64; 3]) -> f64 {
    let r2 = p[0] * p[0] + p[1] * p[1];
    (r2 * r2 + 16.0 * p[2] * p[2]).powf(0.25)
}

/// Coordinates of the left translate `q·p` as polynomials in `p`, for composing `f∘τ_q`.
pub fn left_translation_polys(q: &Point) -> Vec<Poly> {
    let n = q.n();
    let nv = 2 * n + 1;
    let mut out = Vec::with_capacity(nv);
    for i in 0..n {
        out.push(Poly::var(nv, i).add(&Poly::constant(nv, q.x[i].clone())));
    }
    for i in 0..n {
        out.push(Poly::var(nv, n + i).add(&Poly::constant(nv, q.y[i].clone())));
    }
    let mut t = Poly::var(nv, 2 * n).add(&Poly::constant(nv, q.t.clone()));
    let half = rat(1, 2);
    for j in 0..n {
        t.add_scaled(&Poly::var(nv, n + j), &(&half * &q.x[j]));
        t.add_scaled(&Poly::var(nv, j), &(-(&half * &q.y[j])));
    }
    out.push(t);
    out
}

/// Coordinates of `δ_λ p` as polynomials in `p`.
pub fn dilation_polys(n: usize, lambda: &Rational) -> Vec<Poly> {
    let nv = 2 * n + 1;
    (0..nv)
        .map(|i| {
            let c = if i == 2 * n { lambda * lambda } else { lambda.clone() };
            Poly::var(nv, i).scale(&c)
        })
        .collect()
}

/// Empirical constants in `c⁻²|p| ≤ ρ(p) ≤ |p|^{1/2}` over sample points near the identity.
///
/// Returns `(c0, upper_ok)` where `c0` is the smallest constant making the lower bound hold on
/// the sample and `upper_ok` tells whether the upper bound held at every sample.
pub fn empirical_c0(points: &[Point]) -> (f64, bool) {
    let mut worst: f64 = 1.0;
    let mut upper_ok = true;
    for p in points {
        let e = euclidean_norm(p);
        if e == 0.0 {
            continue;
        }
        let r = koranyi_norm(p);
        // c^{-2}|p| <= r  <=>  c >= sqrt(|p|/r)
        worst = worst.max((e / r).sqrt());
        if r > e.sqrt() * (1.0 + 1e-12) {
            upper_ok = false;
        }
    }
    (worst, upper_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn group_law_example() {
        let p = Point::from_i64(&[1], &[0], 0).unwrap();
        let q = Point::from_i64(&[0], &[1], 0).unwrap();
        let r = group_mul(&p, &q).unwrap();
        assert_eq!(r, Point::new(vec![rat(1, 1)], vec![rat(1, 1)], rat(1, 2)).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(group_mul(&Point::identity(1), &Point::identity(2)).is_err());
        assert!(dilate(&rat(0, 1), &Point::identity(1)).is_err());
        assert!(dilate(&rat(-1, 2), &Point::identity(1)).is_err());
    }

    #[test]
    fn gauge_values() {
        assert_eq!(koranyi_norm(&Point::identity(2)), 0.0);
        let p = Point::from_i64(&[0], &[0], 1).unwrap();
        assert!((koranyi_norm(&p) - 2.0).abs() < 1e-15);
        assert_eq!(dilate(&rat(2, 1), &Point::from_i64(&[1], &[1], 1).unwrap()).unwrap(), Point::from_i64(&[2], &[2], 4).unwrap());
    }

    #[test]
    fn translation_polys_match_group_law() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in 1..=2 {
            let q = Point::random(&mut rng, n, 9, 4);
            let p = Point::random(&mut rng, n, 9, 4);
            let polys = left_translation_polys(&q);
            let vals: Vec<Rational> = polys.iter().map(|f| f.eval(&p.coords())).collect();
            assert_eq!(Point::from_coords(&vals), group_mul(&q, &p).unwrap());
        }
    }

    #[test]
    fn f64_law_matches_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let p = Point::random(&mut rng, 1, 9, 4);
        let q = Point::random(&mut rng, 1, 9, 4);
        let pf = p.to_f64();
        let qf = q.to_f64();
        let r = mul_f64([pf[0], pf[1], pf[2]], [qf[0], qf[1], qf[2]]);
        let e = group_mul(&p, &q).unwrap().to_f64();
        for i in 0..3 {
            assert!((r[i] - e[i]).abs() < 1e-12);
        }
    }
}
