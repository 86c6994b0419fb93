//! Compactly supported coefficients `Σ_k b^k Q_k` with `b = 1 − ρ⁴/R⁴` cut off outside the
//! Korányi ball of radius `R`. Fields act exactly through `W(b^k Q) = k b^{k−1}(Wb)Q + b^k WQ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::exterior::Dilatable;
use crate::heisenberg::poly::{rat, rat_to_f64, PolyEval};
use crate::heisenberg::{Coefficient, Poly, Rational};

#[derive(Debug)]
pub struct BumpShape {
    pub n: usize,
    pub radius: Rational,
    pub b: Poly,
    pub wb: Vec<Poly>,
}

impl BumpShape {
    pub fn new(n: usize, radius: Rational) -> Arc<Self> {
        let nv = 2 * n + 1;
        let mut r2 = Poly::zero(nv);
        for i in 0..2 * n {
            r2.add_assign(&Poly::var(nv, i).pow(2));
        }
        let rho4 = r2.pow(2).add(&Poly::var(nv, 2 * n).pow(2).scale(&rat(16, 1)));
        let r4 = &radius * &radius * &radius * &radius;
        let b = Poly::one(nv).sub(&rho4.scale(&(Rational::from_integer(1.into()) / r4)));
        let wb = (0..nv).map(|j| b.apply_field0(n, j)).collect();
        Arc::new(BumpShape { n, radius, b, wb })
    }

    pub fn radius_f64(&self) -> f64 {
        rat_to_f64(&self.radius)
    }
}

#[derive(Clone, Debug)]
pub struct BumpPoly {
    pub shape: Arc<BumpShape>,
    pub terms: BTreeMap<u32, Poly>,
}

impl PartialEq for BumpPoly {
    fn eq(&self, other: &Self) -> bool {
        self.to_poly() == other.to_poly()
    }
}

impl BumpPoly {
    /// `b^k · q`.
    pub fn new(shape: Arc<BumpShape>, k: u32, q: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(k, q);
        }
        BumpPoly { shape, terms }
    }

    fn add_term(&mut self, k: u32, q: &Poly) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                v.add_assign(q);
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, q.clone());
            }
        }
    }

    /// Expanded polynomial valid inside the ball.
    pub fn to_poly(&self) -> Poly {
        let nv = 2 * self.shape.n + 1;
        let mut r = Poly::zero(nv);
        for (k, q) in &self.terms {
            r.add_assign(&self.shape.b.pow(*k).mul(q));
        }
        r
    }

    /// Lowest power of `b` present; smoothness across the sphere is `C^{k−1}`.
    pub fn min_power(&self) -> Option<u32> {
        self.terms.keys().next().cloned()
    }

    pub fn evaluator(&self) -> BumpEval {
        BumpEval { b: self.shape.b.evaluator(), terms: self.terms.iter().map(|(k, q)| (*k as i32, q.evaluator())).collect() }
    }
}

impl Coefficient for BumpPoly {
    fn zero_like(&self) -> Self {
        BumpPoly { shape: self.shape.clone(), terms: BTreeMap::new() }
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        for (k, q) in &other.terms {
            self.add_term(*k, q);
        }
    }
    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        BumpPoly { shape: self.shape.clone(), terms: self.terms.iter().map(|(k, q)| (*k, q.scale(c))).collect() }
    }
    fn apply_field0(&self, n: usize, j: usize) -> Self {
        let mut r = self.zero_like();
        for (k, q) in &self.terms {
            r.add_term(*k, &q.apply_field0(n, j));
            if *k > 0 {
                let t = self.shape.wb[j].mul(q).scale(&Rational::from_integer((*k as i64).into()));
                r.add_term(k - 1, &t);
            }
        }
        r
    }
    fn mul_poly(&self, p: &Poly) -> Self {
        let mut r = self.zero_like();
        for (k, q) in &self.terms {
            r.add_term(*k, &q.mul(p));
        }
        r
    }
}

/// `f∘δ_λ` is again a bump polynomial, on the ball of radius `R/λ`.
impl Dilatable for BumpPoly {
    fn dilate(&self, n: usize, lambda: &Rational) -> Self {
        let shape = BumpShape::new(n, &self.shape.radius / lambda);
        BumpPoly { shape, terms: self.terms.iter().map(|(k, q)| (*k, q.dilate(n, lambda))).collect() }
    }
}

/// Floating-point evaluator, zero outside the ball.
#[derive(Clone, Debug)]
pub struct BumpEval {
    b: PolyEval,
    terms: Vec<(i32, PolyEval)>,
}

impl BumpEval {
    pub fn eval(&self, p: &[f64]) -> f64 {
        let b = self.b.eval(p);
        if b <= 0.0 {
            return 0.0;
        }
        self.terms.iter().map(|(k, q)| b.powi(*k) * q.eval(p)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::fields::apply_word;

    #[test]
    fn fields_match_expansion() {
        let shape = BumpShape::new(1, rat(1, 1));
        let q = Poly::parse(3, "x1*y1 - t + 2").unwrap();
        let f = BumpPoly::new(shape, 3, q);
        let w = [0u8, 1, 2, 0];
        assert_eq!(apply_word(1, &w, &f).to_poly(), apply_word(1, &w, &f.to_poly()));
    }

    #[test]
    fn dilation_matches_expansion() {
        let shape = BumpShape::new(1, rat(3, 2));
        let f = BumpPoly::new(shape, 2, Poly::parse(3, "x1 - 3*t*y1").unwrap());
        let l = rat(5, 4);
        assert_eq!(f.dilate(1, &l).to_poly(), f.to_poly().dilate(1, &l));
        assert_eq!(f.dilate(1, &l).shape.radius, rat(6, 5));
    }

    #[test]
    fn vanishes_outside() {
        let shape = BumpShape::new(1, rat(1, 2));
        let f = BumpPoly::new(shape, 4, Poly::one(3));
        let e = f.evaluator();
        assert_eq!(e.eval(&[0.6, 0.0, 0.0]), 0.0);
        assert!((e.eval(&[0.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
    }
}
