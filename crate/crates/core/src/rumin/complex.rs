//! The Rumin complex `(E₀•, d_c)` realized as matrices of left-invariant operators.
//!
//! The de Rham differential splits as `d = d₀ + D` with `d₀` algebraic (the `dθ` part)
//! and `D = Σ_j W_j ε^j∧`. With `b` the pseudo-inverse of `d₀`, the operator
//! `Q = Σ_k (−bD)^k b` is a finite sum (each `bD` raises covector weight), and
//! `Π_E = I − Qd − dQ`. Then `d_c = Π_{E₀} d Π_E Π_{E₀}`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use super::basis::{build_basis_with_limit, RuminBasis, DEFAULT_N_MAX};
use super::operator::{LeftInvariantOperator, NcPoly};
use crate::error::{Error, Result};
use crate::exterior::{basis_masks, binomial, coefficient_vector, from_coefficient_vector, structure_d, wedge_sign, Form};
use crate::heisenberg::poly::rat_int;
use crate::heisenberg::{Coefficient, Poly, Rational};
use crate::linalg::RatMatrix;

/// Form written in a basis of `E₀ʰ`: `Σ_k coeffs[k] · v_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuminForm<C = Poly> {
    pub n: usize,
    pub degree: usize,
    pub coeffs: Vec<C>,
}

impl<C: Coefficient> RuminForm<C> {
    pub fn new(n: usize, degree: usize, coeffs: Vec<C>) -> Self {
        RuminForm { n, degree, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.vanishes())
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                let mut a = a.clone();
                a.add_assign(b);
                a
            })
            .collect();
        RuminForm { n: self.n, degree: self.degree, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RuminForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        RuminForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(|x| x.mul_poly(p)).collect() }
    }

    /// Coefficients composed with `δ_λ`.
    pub fn dilate_coefficients(&self, lambda: &Rational) -> Self
    where
        C: crate::exterior::Dilatable,
    {
        RuminForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(|c| c.dilate(self.n, lambda)).collect() }
    }
}

impl RuminForm<Poly> {
    pub fn zero(n: usize, degree: usize, dim: usize) -> Self {
        RuminForm { n, degree, coeffs: vec![Poly::zero(2 * n + 1); dim] }
    }

    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, degree: usize, dim: usize, max_degree: usize, density: f64) -> Self {
        RuminForm { n, degree, coeffs: (0..dim).map(|_| Poly::random_sparse(rng, 2 * n + 1, max_degree, density)).collect() }
    }
}

pub struct RuminComplex {
    pub n: usize,
    pub bases: Vec<Arc<RuminBasis>>,
    /// Algebraic part `d₀: Λʰ → Λʰ⁺¹`.
    pub d0: Vec<RatMatrix>,
    /// Full de Rham differential `Λʰ → Λʰ⁺¹`.
    pub d_full: Vec<LeftInvariantOperator>,
    /// `Q_h: Λʰ⁺¹ → Λʰ`.
    pub homotopy: Vec<LeftInvariantOperator>,
    /// `Π_E` on `Λʰ`.
    pub pi_e: Vec<LeftInvariantOperator>,
    /// `d_c: E₀ʰ → E₀ʰ⁺¹` in basis coordinates.
    pub dc: Vec<LeftInvariantOperator>,
    /// Formal adjoint of `dc[h]`, `E₀ʰ⁺¹ → E₀ʰ`.
    pub dc_star: Vec<LeftInvariantOperator>,
    laplacians: Vec<OnceLock<LeftInvariantOperator>>,
}

impl RuminComplex {
    /// Shared complex for `n`, guarded by the default `n_max`.
    pub fn get(n: usize) -> Result<Arc<RuminComplex>> {
        Self::get_with_limit(n, DEFAULT_N_MAX)
    }

    pub fn get_with_limit(n: usize, n_max: usize) -> Result<Arc<RuminComplex>> {
        static CACHE: OnceLock<RwLock<HashMap<usize, Arc<RuminComplex>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.read().unwrap().get(&n) {
            return Ok(c.clone());
        }
        let c = Arc::new(Self::build(n, n_max)?);
        cache.write().unwrap().insert(n, c.clone());
        Ok(c)
    }

    fn build(n: usize, n_max: usize) -> Result<Self> {
        let top = 2 * n + 1;
        let bases: Vec<Arc<RuminBasis>> = (0..=top).map(|h| build_basis_with_limit(n, h, n_max)).collect::<Result<_>>()?;
        let mut d0 = Vec::new();
        let mut dd = Vec::new();
        let mut d_full = Vec::new();
        for h in 0..top {
            let (a, b) = de_rham_parts(n, h);
            d_full.push(LeftInvariantOperator::from_rat(n, h, h + 1, &a).add(&b));
            d0.push(a);
            dd.push(b);
        }
        let mut homotopy = Vec::new();
        for h in 0..top {
            let b = LeftInvariantOperator::from_rat(n, h + 1, h, &d0[h].pseudo_inverse());
            let bd = b.compose(&dd[h]);
            let mut term = b.clone();
            let mut q = b;
            for _ in 0..=2 * top {
                term = bd.compose(&term).scale(&-Rational::one());
                if term.is_zero() {
                    break;
                }
                q = q.add(&term);
            }
            homotopy.push(q);
        }
        let mut pi_e = Vec::new();
        for h in 0..=top {
            let dim = binomial(top, h);
            let mut p = LeftInvariantOperator::identity(n, h, dim);
            if h < top {
                p = p.sub(&homotopy[h].compose(&d_full[h]));
            }
            if h > 0 {
                p = p.sub(&d_full[h - 1].compose(&homotopy[h - 1]));
            }
            pi_e.push(p);
        }
        let mut dc = Vec::new();
        let mut dc_star = Vec::new();
        for h in 0..top {
            let src = &bases[h];
            let dst = &bases[h + 1];
            let v_src = RatMatrix::from_columns(src.ambient_dim(), &src.vectors);
            let mut w_dst = RatMatrix::from_columns(dst.ambient_dim(), &dst.vectors).transpose();
            for (j, q) in dst.sq_norms.iter().enumerate() {
                for i in 0..w_dst.cols {
                    let v = w_dst.get(j, i) / q;
                    w_dst.set(j, i, v);
                }
            }
            let inner = d_full[h].compose(&pi_e[h]).compose(&LeftInvariantOperator::from_rat(n, h, h, &v_src));
            let m = LeftInvariantOperator::from_rat(n, h + 1, h + 1, &w_dst).compose(&inner);
            let m = LeftInvariantOperator { source_degree: h, target_degree: h + 1, ..m };
            // (M*)_{kj} = (q_j / q_k) (M_{jk})†
            let adj = m.formal_adjoint();
            let inv_src: Vec<Rational> = src.sq_norms.iter().map(|q| Rational::one() / q).collect();
            let adj = adj.scale_rows_cols(&inv_src, &dst.sq_norms);
            dc.push(m);
            dc_star.push(adj);
        }
        Ok(RuminComplex { n, bases, d0, d_full, homotopy, pi_e, dc, dc_star, laplacians: (0..=top).map(|_| OnceLock::new()).collect() })
    }

    pub fn top(&self) -> usize {
        2 * self.n + 1
    }

    pub fn basis(&self, h: usize) -> &RuminBasis {
        &self.bases[h]
    }

    pub fn dim(&self, h: usize) -> usize {
        self.bases[h].dim()
    }

    fn check_degree(&self, h: usize) -> Result<()> {
        if h > self.top() {
            return Err(Error::DegreeOutOfRange { degree: h, max: self.top() });
        }
        Ok(())
    }

    /// `Σ_k c_k v_k`.
    pub fn to_form<C: Coefficient>(&self, a: &RuminForm<C>) -> Form<C> {
        let b = &self.bases[a.degree];
        let masks = basis_masks(self.n, a.degree);
        let mut f = Form::zero(self.n, a.degree);
        for (c, v) in a.coeffs.iter().zip(&b.vectors) {
            for (m, x) in masks.iter().zip(v) {
                if !x.is_zero() {
                    f.add_term(*m, &c.scale(x));
                }
            }
        }
        f
    }

    /// Orthogonal projection onto `E₀ʰ`, returned in basis coordinates.
    pub fn proj_e0<C: Coefficient>(&self, f: &Form<C>, zero: &C) -> RuminForm<C> {
        let b = &self.bases[f.degree];
        let masks = basis_masks(self.n, f.degree);
        let coeffs = b
            .vectors
            .iter()
            .zip(&b.sq_norms)
            .map(|(v, q)| {
                let mut acc = zero.zero_like();
                for (m, x) in masks.iter().zip(v) {
                    if let Some(c) = f.terms.get(m) {
                        if !x.is_zero() {
                            acc.add_assign(&c.scale(&(x / q)));
                        }
                    }
                }
                acc
            })
            .collect();
        RuminForm { n: self.n, degree: f.degree, coeffs }
    }

    /// `Π_{E₀}` as a map on forms.
    pub fn proj_e0_form<C: Coefficient>(&self, f: &Form<C>, zero: &C) -> Form<C> {
        self.to_form(&self.proj_e0(f, zero))
    }

    pub fn proj_e<C: Coefficient>(&self, f: &Form<C>, zero: &C) -> Form<C> {
        let v = coefficient_vector(f, zero);
        from_coefficient_vector(self.n, f.degree, self.pi_e[f.degree].apply(&v))
    }

    /// `d_c`; the top degree maps to the empty form of degree `2n+2`.
    pub fn d_c<C: Coefficient>(&self, a: &RuminForm<C>) -> Result<RuminForm<C>> {
        self.check_degree(a.degree)?;
        if a.degree == self.top() {
            return Ok(RuminForm { n: self.n, degree: self.top() + 1, coeffs: Vec::new() });
        }
        Ok(RuminForm { n: self.n, degree: a.degree + 1, coeffs: self.dc[a.degree].apply(&a.coeffs) })
    }

    /// Formal adjoint `d_c*: E₀ʰ → E₀ʰ⁻¹`.
    pub fn d_c_star<C: Coefficient>(&self, a: &RuminForm<C>) -> Result<RuminForm<C>> {
        self.check_degree(a.degree)?;
        if a.degree == 0 {
            return Err(Error::DegreeOutOfRange { degree: 0, max: self.top() });
        }
        Ok(RuminForm { n: self.n, degree: a.degree - 1, coeffs: self.dc_star[a.degree - 1].apply(&a.coeffs) })
    }

    /// `d_c` computed form by form as `Π_{E₀} d Π_E`, without the precomputed matrix.
    pub fn d_c_pipeline<C: Coefficient>(&self, a: &RuminForm<C>) -> RuminForm<C> {
        let zero = a.coeffs[0].zero_like();
        let f = self.to_form(a);
        let pe = self.proj_e(&f, &zero);
        self.proj_e0(&pe.de_rham_d(), &zero)
    }

    /// Hodge star `E₀ʰ → E₀^{2n+1−h}`, through the ambient exterior algebra.
    pub fn star<C: Coefficient>(&self, a: &RuminForm<C>) -> RuminForm<C> {
        let zero = a.coeffs[0].zero_like();
        self.proj_e0(&self.to_form(a).hodge_star(), &zero)
    }

    /// Matrix of `⋆` between basis coordinates of `E₀ʰ` and `E₀^{2n+1−h}`.
    pub fn star_coordinates(&self, h: usize) -> RatMatrix {
        let src = &self.bases[h];
        let dst = &self.bases[self.top() - h];
        let star = crate::exterior::star_matrix(self.n, h);
        let cols: Vec<Vec<Rational>> = src.vectors.iter().map(|v| dst.coordinates(&star.mul_vec(v))).collect();
        RatMatrix::from_columns(dst.dim(), &cols)
    }

    /// `Δ_{ℍ,h}`.
    pub fn laplacian(&self, h: usize) -> Result<&LeftInvariantOperator> {
        self.check_degree(h)?;
        Ok(self.laplacians[h].get_or_init(|| self.build_laplacian(h)))
    }

    /// `d_c d_c*` on `E₀ʰ` (zero operator for `h = 0`).
    pub fn down_up(&self, h: usize) -> LeftInvariantOperator {
        if h == 0 {
            let d = self.dim(0);
            return LeftInvariantOperator::zero(self.n, 0, 0, d, d);
        }
        self.dc[h - 1].compose(&self.dc_star[h - 1])
    }

    /// `d_c* d_c` on `E₀ʰ` (zero operator in top degree).
    pub fn up_down(&self, h: usize) -> LeftInvariantOperator {
        if h == self.top() {
            let d = self.dim(h);
            return LeftInvariantOperator::zero(self.n, h, h, d, d);
        }
        self.dc_star[h].compose(&self.dc[h])
    }

    fn build_laplacian(&self, h: usize) -> LeftInvariantOperator {
        let n = self.n;
        let a = self.down_up(h);
        let b = self.up_down(h);
        if h == n {
            a.compose(&a).add(&b)
        } else if h == n + 1 {
            a.add(&b.compose(&b))
        } else {
            a.add(&b)
        }
    }

    /// Dilation order of `Δ_{ℍ,h}`.
    pub fn laplacian_order(&self, h: usize) -> usize {
        if h == self.n || h == self.n + 1 {
            4
        } else {
            2
        }
    }

    /// Dilation weight of `d_c` on `E₀ʰ`.
    pub fn dc_weight(&self, h: usize) -> usize {
        if h == self.n {
            2
        } else {
            1
        }
    }

    pub fn zero_form(&self, h: usize) -> RuminForm<Poly> {
        RuminForm::zero(self.n, h, self.dim(h))
    }
}

/// `(d₀, D)` for `d: Λʰ → Λʰ⁺¹`.
fn de_rham_parts(n: usize, h: usize) -> (RatMatrix, LeftInvariantOperator) {
    let src = basis_masks(n, h);
    let dst = basis_masks(n, h + 1);
    let index: HashMap<u32, usize> = dst.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut d0 = RatMatrix::zeros(dst.len(), src.len());
    let mut dd = LeftInvariantOperator::zero(n, h, h + 1, dst.len(), src.len());
    for (col, &m) in src.iter().enumerate() {
        for j in 0..=2 * n {
            if m & (1 << j) != 0 {
                continue;
            }
            let s = wedge_sign(1 << j, m);
            let row = index[&(m | (1 << j))];
            dd.get_mut(row, col).add_assign(&NcPoly::letter(n, j).scale(&rat_int(s as i64)));
        }
        for (mm, c) in &structure_d(n, m).terms {
            let row = index[mm];
            let v = d0.get(row, col) + c;
            d0.set(row, col, v);
        }
    }
    (d0, dd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::poly::rat;

    #[test]
    fn worked_projection_n1_h1() {
        // Π_E(a dx + b dy + c θ) = a dx + b dy + (Xb − Ya) θ
        let cx = RuminComplex::get(1).unwrap();
        let a = Poly::parse(3, "x1*t + y1^2").unwrap();
        let b = Poly::parse(3, "x1^2*y1 - t").unwrap();
        let c = Poly::parse(3, "x1").unwrap();
        let f = Form::from_terms(1, 1, [(0b001, a.clone()), (0b010, b.clone()), (0b100, c)]);
        let p = cx.proj_e(&f, &Poly::zero(3));
        let xb = crate::heisenberg::apply_field(1, 1, &b).unwrap();
        let ya = crate::heisenberg::apply_field(1, 2, &a).unwrap();
        let expect = Form::from_terms(1, 1, [(0b001, a), (0b010, b), (0b100, xb.sub(&ya))]);
        assert_eq!(p, expect);
    }

    #[test]
    fn dc_of_x1() {
        let cx = RuminComplex::get(1).unwrap();
        let f = RuminForm::new(1, 0, vec![Poly::parse(3, "x1").unwrap()]);
        let g = cx.d_c(&f).unwrap();
        // basis of E₀¹ is (dx1, dy1)
        assert_eq!(cx.basis(1).vectors[0], vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(g.coeffs, vec![Poly::one(3), Poly::zero(3)]);
    }

    #[test]
    fn sub_laplacian_value() {
        let cx = RuminComplex::get(1).unwrap();
        let lap = cx.laplacian(0).unwrap();
        let v = lap.apply(&[Poly::parse(3, "x1^2").unwrap()]);
        assert_eq!(v[0], Poly::constant(3, rat(-2, 1)));
        assert_eq!(lap.weight(), Some(2));
    }
}
