//! Left-invariant vector fields `W_1..W_{2n+1}` and the multi-index operators `W^I`.
//!
//! Fields are numbered from 1 as `W_i = X_i`, `W_{i+n} = Y_i`, `W_{2n+1} = T` with
//! `X_i = ∂_{x_i} − ½ y_i ∂_t`, `Y_i = ∂_{y_i} + ½ x_i ∂_t`, `T = ∂_t`.

use super::poly::{rat, Poly};
use super::Rational;
use crate::error::{Error, Result};

/// Scalar payloads on which left-invariant fields act exactly.
pub trait Coefficient: Clone + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scale(&self, c: &Rational) -> Self;
    /// Apply `W_{j+1}` (zero-based field index `j`).
    fn apply_field0(&self, n: usize, j: usize) -> Self;
    fn mul_poly(&self, p: &Poly) -> Self;
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if !num_traits::Zero::is_zero(c) {
            self.add_assign(&other.scale(c));
        }
    }
}

impl Coefficient for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.nvars())
    }
    fn vanishes(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        Poly::add_assign(self, other)
    }
    fn scale(&self, c: &Rational) -> Self {
        Poly::scale(self, c)
    }
    fn apply_field0(&self, n: usize, j: usize) -> Self {
        field0(n, j, self)
    }
    fn mul_poly(&self, p: &Poly) -> Self {
        self.mul(p)
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        Poly::add_scaled(self, other, c)
    }
}

fn field0(n: usize, j: usize, f: &Poly) -> Poly {
    let tv = 2 * n;
    if j == tv {
        return f.derivative(tv);
    }
    let dt = f.derivative(tv);
    let mut r = f.derivative(j);
    if dt.is_zero() {
        return r;
    }
    if j < n {
        // X_j: − ½ y_j ∂_t
        r.add_scaled(&dt.mul_var(n + j), &rat(-1, 2));
    } else {
        // Y_j: + ½ x_j ∂_t
        r.add_scaled(&dt.mul_var(j - n), &rat(1, 2));
    }
    r
}

/// Apply `W_j`, `j` in `1..=2n+1`.
pub fn apply_field(n: usize, j: usize, f: &Poly) -> Result<Poly> {
    if j == 0 || j > 2 * n + 1 {
        return Err(Error::FieldIndex { index: j, max: 2 * n + 1 });
    }
    if f.nvars() != 2 * n + 1 {
        return Err(Error::DimensionMismatch { expected: n, found: (f.nvars() - 1) / 2 });
    }
    Ok(field0(n, j - 1, f))
}

/// Symbolic name of field `W_{j+1}`.
pub fn field_name(n: usize, j: usize) -> String {
    if j == 2 * n {
        "T".into()
    } else if j < n {
        format!("X{}", j + 1)
    } else {
        format!("Y{}", j - n + 1)
    }
}

/// Exponents `(i_1..i_{2n+1})` of `W^I = W_1^{i_1}⋯W_{2n+1}^{i_{2n+1}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pub exps: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex { exps }
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex { exps: vec![0; 2 * n + 1] }
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.exps[j - 1] = 1;
        m
    }

    pub fn n(&self) -> usize {
        (self.exps.len() - 1) / 2
    }

    /// `|I|`.
    pub fn order(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `d(I)`: horizontal exponents count once, the `T` exponent twice.
    pub fn homogeneity(&self) -> u32 {
        let last = self.exps.len() - 1;
        self.exps[..last].iter().sum::<u32>() + 2 * self.exps[last]
    }

    /// Letters of `W^I` left to right, zero-based.
    pub fn letters(&self) -> Vec<u8> {
        let mut w = Vec::new();
        for (j, &k) in self.exps.iter().enumerate() {
            for _ in 0..k {
                w.push(j as u8);
            }
        }
        w
    }
}

/// `W^I f`, the rightmost factor acting first.
pub fn apply_multi_index<C: Coefficient>(mi: &MultiIndex, f: &C) -> C {
    let n = mi.n();
    let mut r = f.clone();
    for j in mi.letters().into_iter().rev() {
        r = r.apply_field0(n, j as usize);
    }
    r
}

/// Apply a word of zero-based letters, rightmost first.
pub fn apply_word<C: Coefficient>(n: usize, word: &[u8], f: &C) -> C {
    let mut r = f.clone();
    for &j in word.iter().rev() {
        if r.vanishes() {
            break;
        }
        r = r.apply_field0(n, j as usize);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        let x1 = Poly::parse(3, "x1").unwrap();
        assert_eq!(apply_field(1, 1, &x1).unwrap(), Poly::one(3));
        let t = Poly::parse(3, "t").unwrap();
        assert_eq!(apply_field(1, 1, &t).unwrap(), Poly::parse(3, "-1/2*y1").unwrap());
        assert_eq!(apply_field(1, 2, &t).unwrap(), Poly::parse(3, "1/2*x1").unwrap());
        assert!(apply_field(1, 4, &t).is_err());
        assert!(apply_field(1, 0, &t).is_err());
    }

    #[test]
    fn homogeneity_drop() {
        let f = Poly::parse(3, "x1^2*t").unwrap();
        let mi = MultiIndex::new(vec![1, 0, 1]);
        assert_eq!(mi.homogeneity(), 3);
        let g = apply_multi_index(&mi, &f);
        assert_eq!(g.homogeneous_weight(), Some(1));
        assert_eq!(apply_multi_index(&MultiIndex::zero(1), &f), f);
        assert_eq!(apply_multi_index(&MultiIndex::unit(1, 3), &Poly::parse(3, "t").unwrap()), Poly::one(3));
    }
}
