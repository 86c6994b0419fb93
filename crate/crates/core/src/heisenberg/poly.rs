//! Exact multivariate polynomials with rational coefficients in the exponential
//! coordinates `(x_1..x_n, y_1..y_n, t)` of the Heisenberg group.
//!
//! Variable `i` is the coordinate dual to the field `W_{i+1}`: indices `0..n` are
//! the `x_i`, `n..2n` the `y_i` and `2n` is `t`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use smallvec::SmallVec;

use super::Rational;
use crate::error::{Error, Result};

pub type Exponents = SmallVec<[u8; 8]>;

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // very large numerator/denominator: scale down by shifting
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let a = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let b = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            a / b
        }
    }
}

/// Exact rational from a finite `f64` (dyadic expansion).
pub fn rat_from_f64(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(SmallVec::from_elem(0, nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        let mut e: Exponents = SmallVec::from_elem(0, nvars);
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn monomial(exps: &[u8], c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(SmallVec::from_slice(exps), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u8]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0u8; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&k| k as usize).sum()).max().unwrap_or(0)
    }

    /// Weight of a monomial under `δ_λ`: one per horizontal exponent, two per power of `t`.
    pub fn monomial_weight(e: &[u8]) -> usize {
        let last = e.len() - 1;
        e.iter().enumerate().map(|(i, &k)| if i == last { 2 * k as usize } else { k as usize }).sum()
    }

    /// `Some(w)` when every monomial has dilation weight `w`; `None` for mixed weights
    /// or the zero polynomial.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut weights = self.terms.keys().map(|e| Self::monomial_weight(e));
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    fn insert_add(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (e, c) in &other.terms {
            self.insert_add(e.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Poly) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (e, c) in &other.terms {
            self.insert_add(e.clone(), -c.clone());
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.insert_add(e.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), -v.clone())).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        r.sub_assign(other);
        r
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut r = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                r.insert_add(e, ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in coordinate `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            r.insert_add(e2, c * rat_int(e[i] as i64));
        }
        r
    }

    /// Multiply by the coordinate `i`.
    pub fn mul_var(&self, i: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[i] += 1;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Substitute `var_i -> subs[i]` for every variable.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs.first().map(|p| p.nvars).unwrap_or(self.nvars);
        let mut powers: Vec<Vec<Poly>> = subs.iter().map(|s| vec![Poly::one(s.nvars), s.clone()]).collect();
        let mut r = Poly::zero(nv);
        for (e, c) in &self.terms {
            let mut m = Poly::constant(nv, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                m = m.mul(&powers[i][k as usize]);
            }
            r.add_assign(&m);
        }
        r
    }

    /// Scale each variable by `factors[i]` (a diagonal linear substitution).
    pub fn scale_vars(&self, factors: &[Rational]) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    v *= &factors[i];
                }
            }
            r.insert_add(e.clone(), v);
        }
        r
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m *= &point[i];
                }
            }
            acc += m;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = rat_to_f64(c);
                for (i, &k) in e.iter().enumerate() {
                    m *= point[i].powi(k as i32);
                }
                m
            })
            .sum()
    }

    /// Compile into a floating-point evaluator for repeated evaluation.
    pub fn evaluator(&self) -> PolyEval {
        PolyEval::new(self)
    }

    /// Random polynomial of total degree `<= max_degree` with coefficients drawn
    /// uniformly from `{k/1000 : |k| <= 1000}`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_degree: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        for e in monomials_up_to(nvars, max_degree) {
            let k: i64 = rng.gen_range(-1000..=1000);
            p.insert_add(e, rat(k, 1000));
        }
        p
    }

    /// Sparse random polynomial: each monomial kept with probability `density`.
    pub fn random_sparse<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_degree: usize, density: f64) -> Poly {
        let mut p = Poly::zero(nvars);
        for e in monomials_up_to(nvars, max_degree) {
            if rng.gen::<f64>() < density {
                let k: i64 = rng.gen_range(-1000..=1000);
                p.insert_add(e, rat(k, 1000));
            }
        }
        p
    }

    pub fn var_name(nvars: usize, i: usize) -> String {
        let n = (nvars - 1) / 2;
        if i == nvars - 1 {
            "t".to_string()
        } else if i < n {
            format!("x{}", i + 1)
        } else {
            format!("y{}", i - n + 1)
        }
    }

    /// Parse the textual form produced by `Display`, e.g. `3/2*x1^2*t - y1 + 1`.
    pub fn parse(nvars: usize, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s == "0" {
            return Ok(Poly::zero(nvars));
        }
        let mut p = Poly::zero(nvars);
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for ch in s.chars() {
            match ch {
                '+' | '-' => {
                    if !cur.trim().is_empty() {
                        terms.push((neg, cur.trim().to_string()));
                    }
                    cur.clear();
                    neg = ch == '-';
                }
                ' ' => {}
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            terms.push((neg, cur.trim().to_string()));
        }
        if terms.is_empty() {
            return Err(Error::Parse(format!("empty polynomial '{s}'")));
        }
        for (neg, term) in terms {
            let mut coef = Rational::one();
            let mut e: Exponents = SmallVec::from_elem(0, nvars);
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in '{term}'")));
                }
                if factor.chars().next().unwrap().is_ascii_digit() {
                    coef *= parse_rational(factor)?;
                    continue;
                }
                let (name, pow) = match factor.split_once('^') {
                    Some((a, b)) => (a, b.parse::<u8>().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?),
                    None => (factor, 1),
                };
                let idx = (0..nvars)
                    .find(|&i| Self::var_name(nvars, i) == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
                e[idx] += pow;
            }
            if neg {
                coef = -coef;
            }
            p.insert_add(e, coef);
        }
        Ok(p)
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.parse().map_err(|_| bad())?;
            let b: BigInt = b.parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(a, b))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// All exponent vectors of total degree `<= max_degree`, in graded lexicographic order.
pub fn monomials_up_to(nvars: usize, max_degree: usize) -> Vec<Exponents> {
    fn rec(i: usize, left: usize, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k as u8;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur: Exponents = SmallVec::from_elem(0, nvars);
    rec(0, max_degree, &mut cur, &mut out);
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&x| x == 0);
            if !a.is_one() || is_const {
                parts.push(a.to_string());
            }
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => parts.push(Self::var_name(self.nvars, i)),
                    _ => parts.push(format!("{}^{}", Self::var_name(self.nvars, i), p)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Floating-point evaluator: flat list of `(coefficient, exponents)`.
#[derive(Clone, Debug)]
pub struct PolyEval {
    nvars: usize,
    max_exp: Vec<usize>,
    terms: Vec<(f64, Exponents)>,
}

impl PolyEval {
    pub fn new(p: &Poly) -> Self {
        let mut max_exp = vec![0usize; p.nvars];
        let terms = p
            .terms
            .iter()
            .map(|(e, c)| {
                for (i, &k) in e.iter().enumerate() {
                    max_exp[i] = max_exp[i].max(k as usize);
                }
                (rat_to_f64(c), e.clone())
            })
            .collect();
        PolyEval { nvars: p.nvars, max_exp, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        let mut pw: SmallVec<[SmallVec<[f64; 32]>; 8]> = SmallVec::new();
        for i in 0..self.nvars {
            let mut v: SmallVec<[f64; 32]> = SmallVec::with_capacity(self.max_exp[i] + 1);
            let mut acc = 1.0;
            v.push(acc);
            for _ in 0..self.max_exp[i] {
                acc *= point[i];
                v.push(acc);
            }
            pw.push(v);
        }
        let mut s = 0.0;
        for (c, e) in &self.terms {
            let mut m = *c;
            for (i, &k) in e.iter().enumerate() {
                m *= pw[i][k as usize];
            }
            s += m;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn ring_axioms_on_samples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = Poly::random_sparse(&mut rng, 3, 3, 0.4);
            let b = Poly::random_sparse(&mut rng, 3, 3, 0.4);
            let c = Poly::random_sparse(&mut rng, 3, 2, 0.4);
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert!(a.sub(&a).is_zero());
        }
    }

    #[test]
    fn derivative_leibniz() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = Poly::random(&mut rng, 3, 3);
        let b = Poly::random(&mut rng, 3, 2);
        for i in 0..3 {
            let lhs = a.mul(&b).derivative(i);
            let rhs = a.derivative(i).mul(&b).add(&a.mul(&b.derivative(i)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn display_parse_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for nv in [3, 5, 7] {
            let p = Poly::random_sparse(&mut rng, nv, 3, 0.3);
            let text = p.to_string();
            assert_eq!(Poly::parse(nv, &text).unwrap(), p, "{text}");
        }
        assert!(Poly::parse(3, "0").unwrap().is_zero());
        assert!(Poly::parse(3, "z^2").is_err());
    }

    #[test]
    fn weights() {
        let p = Poly::parse(3, "x1^2*t").unwrap();
        assert_eq!(p.homogeneous_weight(), Some(4));
        let q = Poly::parse(3, "x1 + t").unwrap();
        assert_eq!(q.homogeneous_weight(), None);
    }

    #[test]
    fn evaluator_matches_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let p = Poly::random(&mut rng, 3, 4);
        let pt = [0.3, -0.7, 0.25];
        let exact = p.eval(&pt.iter().map(|&v| rat_from_f64(v)).collect::<Vec<_>>());
        assert!((p.evaluator().eval(&pt) - rat_to_f64(&exact)).abs() < 1e-12);
    }
}
