//! Exterior algebra over the left-invariant coframe `{dx_1..dx_n, dy_1..dy_n, θ}`.
//!
//! A basis covector `ε^I` is a bitmask over coframe indices: `0..n` are the `dx_i`,
//! `n..2n` the `dy_i` and `2n` is `θ`. Increasing index tuples are the set bits in order.

pub mod coordinate;
pub mod text;

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::heisenberg::poly::{rat, rat_int, Poly};
use crate::heisenberg::{Coefficient, Rational};
use crate::linalg::RatMatrix;

pub type Mask = u32;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Masks of degree `h` in lexicographic order of their index tuples.
pub fn basis_masks(n: usize, h: usize) -> Vec<Mask> {
    let dim = 2 * n + 1;
    let mut out = Vec::with_capacity(binomial(dim, h));
    fn rec(start: usize, dim: usize, left: usize, cur: Mask, out: &mut Vec<Mask>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..dim {
            if dim - i < left {
                break;
            }
            rec(i + 1, dim, left - 1, cur | (1 << i), out);
        }
    }
    rec(0, dim, h, 0, &mut out);
    out
}

/// Position of `mask` in `basis_masks(n, popcount)`.
pub fn mask_index(n: usize, mask: Mask) -> usize {
    basis_masks(n, mask.count_ones() as usize).iter().position(|&m| m == mask).expect("mask in range")
}

pub fn indices(mask: Mask) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of `ε^a ∧ ε^b` relative to `ε^{a∪b}`; zero when they overlap.
pub fn wedge_sign(a: Mask, b: Mask) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inv = 0u32;
    for j in indices(b) {
        // elements of a greater than j must move past it
        inv += (a >> (j + 1)).count_ones();
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Dilation weight of a basis covector: 1 per horizontal index, 2 for `θ`.
pub fn mask_weight(n: usize, mask: Mask) -> usize {
    let h = mask.count_ones() as usize;
    if mask & (1 << (2 * n)) != 0 {
        h + 1
    } else {
        h
    }
}

pub fn theta_mask(n: usize) -> Mask {
    1 << (2 * n)
}

pub fn volume_mask(n: usize) -> Mask {
    (1 << (2 * n + 1)) - 1
}

pub fn is_horizontal_mask(n: usize, mask: Mask) -> bool {
    mask & theta_mask(n) == 0
}

pub fn covector_name(n: usize, i: usize) -> String {
    if i == 2 * n {
        "theta".into()
    } else if i < n {
        format!("dx{}", i + 1)
    } else {
        format!("dy{}", i - n + 1)
    }
}

/// Graded differential form with coefficients in `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct Form<C = Poly> {
    pub n: usize,
    pub degree: usize,
    pub terms: BTreeMap<Mask, C>,
}

impl<C: Coefficient> std::fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Form(n={}, h={}, {:?})", self.n, self.degree, self.terms)
    }
}

impl<C: Coefficient> Form<C> {
    pub fn zero(n: usize, degree: usize) -> Self {
        Form { n, degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, degree: usize, terms: impl IntoIterator<Item = (Mask, C)>) -> Self {
        let mut f = Self::zero(n, degree);
        for (m, c) in terms {
            debug_assert_eq!(m.count_ones() as usize, degree);
            f.add_term(m, &c);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: Mask) -> Option<&C> {
        self.terms.get(&mask)
    }

    pub fn add_term(&mut self, mask: Mask, c: &C) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(v) => {
                v.add_assign(c);
                if v.vanishes() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c.clone());
            }
        }
    }

    pub fn add_term_scaled(&mut self, mask: Mask, c: &C, s: &Rational) {
        if s.is_zero() || c.vanishes() {
            return;
        }
        self.add_term(mask, &c.scale(s));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(*m, c);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(*m, &c.scale(&rat(-1, 1)));
        }
        r
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut r = Self::zero(self.n, self.degree);
        for (m, c) in &self.terms {
            r.add_term(*m, &c.scale(s));
        }
        r
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut r = Self::zero(self.n, self.degree);
        for (m, c) in &self.terms {
            r.add_term(*m, &c.mul_poly(p));
        }
        r
    }

    /// Wedge with a constant-coefficient form on the left: `a ∧ self`.
    pub fn wedge_const_left(&self, a: &Form<Rational>) -> Self {
        let mut r = Self::zero(self.n, self.degree + a.degree);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &self.terms {
                let s = wedge_sign(*ma, *mb);
                if s != 0 {
                    r.add_term(ma | mb, &cb.scale(&(ca * rat_int(s as i64))));
                }
            }
        }
        r
    }

    pub fn hodge_star(&self) -> Self {
        let vol = volume_mask(self.n);
        let mut r = Self::zero(self.n, 2 * self.n + 1 - self.degree);
        for (m, c) in &self.terms {
            let comp = vol & !m;
            let s = wedge_sign(*m, comp);
            r.add_term(comp, &c.scale(&rat_int(s as i64)));
        }
        r
    }

    /// de Rham differential in the left-invariant coframe:
    /// `d(f ε^I) = Σ_j (W_j f) ε^j ∧ ε^I + f dε^I`.
    pub fn de_rham_d(&self) -> Self {
        let n = self.n;
        let mut r = Self::zero(n, self.degree + 1);
        if self.degree > 2 * n {
            return r;
        }
        for (m, c) in &self.terms {
            for j in 0..=2 * n {
                if m & (1 << j) != 0 {
                    continue;
                }
                let s = wedge_sign(1 << j, *m);
                let wf = c.apply_field0(n, j);
                r.add_term(m | (1 << j), &wf.scale(&rat_int(s as i64)));
            }
            for (mm, cc) in &structure_d(n, *m).terms {
                r.add_term(*mm, &c.scale(cc));
            }
        }
        r
    }

    /// `L = dθ ∧ ·`.
    pub fn lefschetz(&self) -> Self {
        self.wedge_const_left(&d_theta(self.n))
    }

    /// Metric adjoint of `L`.
    pub fn lefschetz_adjoint(&self) -> Self {
        let n = self.n;
        let mut r = Self::zero(n, self.degree.saturating_sub(2));
        if self.degree < 2 {
            return r;
        }
        let lt = lefschetz_matrix(n, self.degree - 2);
        let rows = basis_masks(n, self.degree);
        let cols = basis_masks(n, self.degree - 2);
        for (m, c) in &self.terms {
            let i = rows.iter().position(|x| x == m).unwrap();
            for (j, mj) in cols.iter().enumerate() {
                let v = lt.get(i, j);
                if !v.is_zero() {
                    r.add_term(*mj, &c.scale(v));
                }
            }
        }
        r
    }

    /// `δ_λ^*`: coefficients composed with `δ_λ`, basis covectors scaled by `λ^{weight}`.
    pub fn dilation_pullback(&self, lambda: &Rational) -> Result<Self>
    where
        C: Dilatable,
    {
        if *lambda <= Rational::zero() {
            return Err(Error::NonPositiveDilation(lambda.to_string()));
        }
        let mut r = Self::zero(self.n, self.degree);
        for (m, c) in &self.terms {
            let w = mask_weight(self.n, *m);
            let mut s = Rational::one();
            for _ in 0..w {
                s *= lambda;
            }
            r.add_term(*m, &c.dilate(self.n, lambda).scale(&s));
        }
        Ok(r)
    }

    /// Coefficients composed with `δ_λ`, basis untouched.
    pub fn dilate_coefficients(&self, lambda: &Rational) -> Self
    where
        C: Dilatable,
    {
        let mut r = Self::zero(self.n, self.degree);
        for (m, c) in &self.terms {
            r.add_term(*m, &c.dilate(self.n, lambda));
        }
        r
    }

    pub fn is_horizontal(&self) -> bool {
        self.terms.keys().all(|m| is_horizontal_mask(self.n, *m))
    }
}

/// Coefficients that can be composed with a dilation.
pub trait Dilatable {
    fn dilate(&self, n: usize, lambda: &Rational) -> Self;
}

impl Dilatable for Poly {
    fn dilate(&self, n: usize, lambda: &Rational) -> Self {
        let mut f = vec![lambda.clone(); 2 * n + 1];
        f[2 * n] = lambda * lambda;
        self.scale_vars(&f)
    }
}

impl Form<Poly> {
    pub fn nvars(&self) -> usize {
        2 * self.n + 1
    }

    /// Basis covector `ε^I` with coefficient 1.
    pub fn basis(n: usize, mask: Mask) -> Self {
        Self::from_terms(n, mask.count_ones() as usize, [(mask, Poly::one(2 * n + 1))])
    }

    pub fn constant(n: usize, c: &Form<Rational>) -> Self {
        let mut f = Self::zero(n, c.degree);
        for (m, v) in &c.terms {
            f.add_term(*m, &Poly::constant(2 * n + 1, v.clone()));
        }
        f
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut r = Self::zero(self.n, self.degree + other.degree);
        if self.degree + other.degree > 2 * self.n + 1 {
            return r;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let s = wedge_sign(*ma, *mb);
                if s != 0 {
                    r.add_term(ma | mb, &ca.mul(cb).scale(&rat_int(s as i64)));
                }
            }
        }
        r
    }

    /// Pointwise inner product `⟨a, b⟩` as a polynomial.
    pub fn inner(&self, other: &Self) -> Poly {
        let mut s = Poly::zero(self.nvars());
        for (m, c) in &self.terms {
            if let Some(d) = other.terms.get(m) {
                s.add_assign(&c.mul(d));
            }
        }
        s
    }

    /// Coefficient of `dV` in a top-degree form.
    pub fn top_coefficient(&self) -> Poly {
        self.terms.get(&volume_mask(self.n)).cloned().unwrap_or_else(|| Poly::zero(self.nvars()))
    }

    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, h: usize, max_degree: usize, density: f64) -> Self {
        let nv = 2 * n + 1;
        Self::from_terms(n, h, basis_masks(n, h).into_iter().map(|m| (m, Poly::random_sparse(rng, nv, max_degree, density))))
    }
}

impl Coefficient for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn apply_field0(&self, _n: usize, _j: usize) -> Self {
        Rational::zero()
    }
    fn mul_poly(&self, _p: &Poly) -> Self {
        panic!("constant coefficients cannot absorb a polynomial factor")
    }
}

/// `dθ`, obtained by differentiating `θ = dt − ½Σ(x_j dy_j − y_j dx_j)` in coordinates.
pub fn d_theta(n: usize) -> Form<Rational> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Form<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.read().unwrap().get(&n) {
        return f.clone();
    }
    let theta = Form::<Poly>::basis(n, theta_mask(n));
    let coord = coordinate::to_coordinate(&theta);
    let dcoord = coordinate::coordinate_d(&coord);
    let back = coordinate::from_coordinate(&dcoord);
    let mut r = Form::<Rational>::zero(n, 2);
    for (m, c) in &back.terms {
        assert!(c.is_constant(), "dθ has constant coefficients");
        r.add_term(*m, &c.constant_term());
    }
    cache.write().unwrap().insert(n, r.clone());
    r
}

/// `dε^I` for a basis covector: only `θ` contributes.
pub fn structure_d(n: usize, mask: Mask) -> Form<Rational> {
    let th = theta_mask(n);
    let mut r = Form::<Rational>::zero(n, mask.count_ones() as usize + 1);
    if mask & th == 0 {
        return r;
    }
    // ε^I = ε^{I'} ∧ θ with θ last, so dε^I = (−1)^{|I'|} ε^{I'} ∧ dθ
    let rest = mask & !th;
    let sgn = if rest.count_ones() % 2 == 0 { 1 } else { -1 };
    for (m, c) in &d_theta(n).terms {
        let s = wedge_sign(rest, *m);
        if s != 0 {
            r.add_term(rest | m, &(c * rat_int((s * sgn) as i64)));
        }
    }
    r
}

/// Matrix of `L: Λ^h → Λ^{h+2}` in the lexicographic bases.
pub fn lefschetz_matrix(n: usize, h: usize) -> RatMatrix {
    let src = basis_masks(n, h);
    let dst = basis_masks(n, h + 2);
    let mut m = RatMatrix::zeros(dst.len(), src.len());
    let dth = d_theta(n);
    for (j, &s) in src.iter().enumerate() {
        for (md, c) in &dth.terms {
            let sg = wedge_sign(*md, s);
            if sg != 0 {
                let i = dst.iter().position(|&x| x == md | s).unwrap();
                m.set(i, j, c * rat_int(sg as i64));
            }
        }
    }
    m
}

/// Matrix of `Λ: Λ^{h} → Λ^{h−2}`, the transpose of `L` in the orthonormal basis.
pub fn lefschetz_adjoint_matrix(n: usize, h: usize) -> RatMatrix {
    if h < 2 {
        return RatMatrix::zeros(0, binomial(2 * n + 1, h));
    }
    lefschetz_matrix(n, h - 2).transpose()
}

/// Matrix of the Hodge star `Λ^h → Λ^{2n+1−h}`.
pub fn star_matrix(n: usize, h: usize) -> RatMatrix {
    let src = basis_masks(n, h);
    let dst = basis_masks(n, 2 * n + 1 - h);
    let vol = volume_mask(n);
    let mut m = RatMatrix::zeros(dst.len(), src.len());
    for (j, &s) in src.iter().enumerate() {
        let c = vol & !s;
        let i = dst.iter().position(|&x| x == c).unwrap();
        m.set(i, j, rat_int(wedge_sign(s, c) as i64));
    }
    m
}

/// Constant form from a coordinate vector in the lexicographic basis.
pub fn const_form(n: usize, h: usize, v: &[Rational]) -> Form<Rational> {
    Form::from_terms(n, h, basis_masks(n, h).into_iter().zip(v.iter().cloned()))
}

pub fn const_vector(f: &Form<Rational>) -> Vec<Rational> {
    basis_masks(f.n, f.degree).iter().map(|m| f.terms.get(m).cloned().unwrap_or_else(Rational::zero)).collect()
}

/// Coefficient vector in the lexicographic basis.
pub fn coefficient_vector<C: Coefficient>(f: &Form<C>, zero: &C) -> Vec<C> {
    basis_masks(f.n, f.degree).iter().map(|m| f.terms.get(m).cloned().unwrap_or_else(|| zero.zero_like())).collect()
}

pub fn from_coefficient_vector<C: Coefficient>(n: usize, h: usize, v: Vec<C>) -> Form<C> {
    Form::from_terms(n, h, basis_masks(n, h).into_iter().zip(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn masks_and_signs() {
        assert_eq!(basis_masks(1, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(wedge_sign(0b001, 0b010), 1);
        assert_eq!(wedge_sign(0b010, 0b001), -1);
        assert_eq!(wedge_sign(0b001, 0b001), 0);
        assert_eq!(basis_masks(3, 3).len(), 35);
    }

    #[test]
    fn dtheta_is_minus_symplectic() {
        for n in 1..=3 {
            let dt = d_theta(n);
            assert_eq!(dt.terms.len(), n);
            for j in 0..n {
                assert_eq!(dt.terms[&((1 << j) | (1 << (n + j)))], rat(-1, 1));
            }
        }
    }

    #[test]
    fn wedge_example() {
        let n = 1;
        let x = Poly::parse(3, "x1").unwrap();
        let y = Poly::parse(3, "y1").unwrap();
        let a = Form::from_terms(n, 1, [(0b001, x.clone())]);
        let b = Form::from_terms(n, 1, [(0b010, y.clone()), (0b100, Poly::one(3))]);
        let w = a.wedge(&b);
        assert_eq!(w, Form::from_terms(n, 2, [(0b011, x.mul(&y)), (0b101, x)]));
        assert!(Form::basis(1, 1).wedge(&Form::basis(1, 1)).is_zero());
    }

    #[test]
    fn star_identities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for n in 1..=2 {
            for h in 0..=2 * n + 1 {
                let a = Form::random(&mut rng, n, h, 2, 0.3);
                assert_eq!(a.hodge_star().hodge_star(), a);
                for &m1 in &basis_masks(n, h) {
                    for &m2 in &basis_masks(n, h) {
                        let lhs = Form::basis(n, m1).wedge(&Form::basis(n, m2).hodge_star());
                        let expect = if m1 == m2 { Form::basis(n, volume_mask(n)) } else { Form::zero(n, 2 * n + 1) };
                        assert_eq!(lhs, expect);
                    }
                }
            }
        }
        assert_eq!(Form::<Poly>::basis(1, 0).hodge_star(), Form::basis(1, volume_mask(1)));
    }

    #[test]
    fn d_squared_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for n in 1..=2 {
            for h in 0..=2 * n {
                let a = Form::random(&mut rng, n, h, 3, 0.3);
                assert!(a.de_rham_d().de_rham_d().is_zero());
            }
        }
        let th = Form::<Poly>::basis(1, theta_mask(1));
        assert_eq!(th.de_rham_d(), Form::constant(1, &d_theta(1)));
    }

    #[test]
    fn lefschetz_commutator() {
        for n in 1..=3 {
            for h in 0..=2 * n {
                for &m in &basis_masks(n, h) {
                    if !is_horizontal_mask(n, m) {
                        continue;
                    }
                    let a = Form::<Poly>::basis(n, m);
                    let lam_l = a.lefschetz().lefschetz_adjoint();
                    let lhs = if h >= 2 { a.lefschetz_adjoint().lefschetz().sub(&lam_l) } else { lam_l.scale(&rat(-1, 1)) };
                    // [L, Λ] = (h − n) Id on horizontal h-forms
                    assert_eq!(lhs, a.scale(&rat_int(h as i64 - n as i64)), "n={n} h={h}");
                }
            }
        }
        let w = Form::<Poly>::basis(1, 0b011).lefschetz_adjoint();
        assert_eq!(w, Form::from_terms(1, 0, [(0, Poly::constant(3, rat(-1, 1)))]));
    }

    #[test]
    fn pullback() {
        let l = rat(3, 2);
        let th = Form::<Poly>::basis(1, theta_mask(1));
        assert_eq!(th.dilation_pullback(&l).unwrap(), th.scale(&(&l * &l)));
        let dv = Form::<Poly>::basis(2, volume_mask(2));
        assert_eq!(dv.dilation_pullback(&rat(2, 1)).unwrap(), dv.scale(&rat(64, 1)));
        assert!(th.dilation_pullback(&rat(0, 1)).is_err());
    }
}
