//! Left-invariant bases of `E₀ʰ`.
//!
//! Orthonormal bases generally need square roots, so each element is stored as a
//! rational orthogonal vector `v_k` together with its squared length `q_k`; the
//! orthonormal element is `ξ_k = v_k / √q_k`. Coefficients of a [`RuminForm`](super::RuminForm)
//! refer to the `v_k`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{basis_masks, binomial, const_form, is_horizontal_mask, lefschetz_adjoint_matrix, star_matrix, Form};
use crate::heisenberg::poly::rat_to_f64;
use crate::heisenberg::Rational;
use crate::linalg::{dot, gram_schmidt, RatMatrix};

pub const DEFAULT_N_MAX: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuminBasis {
    pub n: usize,
    pub h: usize,
    /// Elements in the lexicographic coordinates of `Λʰ`.
    pub vectors: Vec<Vec<Rational>>,
    /// Squared lengths `q_k = |v_k|²`.
    pub sq_norms: Vec<Rational>,
}

impl RuminBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Ambient dimension `C(2n+1, h)`.
    pub fn ambient_dim(&self) -> usize {
        binomial(2 * self.n + 1, self.h)
    }

    pub fn element(&self, k: usize) -> Form<Rational> {
        const_form(self.n, self.h, &self.vectors[k])
    }

    /// Scale factors `√q_k` taking `v`-coefficients to orthonormal coefficients.
    pub fn orthonormal_scales(&self) -> Vec<f64> {
        self.sq_norms.iter().map(|q| rat_to_f64(q).sqrt()).collect()
    }

    /// Orthogonal projector onto `E₀ʰ` as a matrix on `Λʰ`.
    pub fn projector(&self) -> RatMatrix {
        let m = self.ambient_dim();
        let mut p = RatMatrix::zeros(m, m);
        for (v, q) in self.vectors.iter().zip(&self.sq_norms) {
            for i in 0..m {
                if v[i].is_zero() {
                    continue;
                }
                for j in 0..m {
                    if !v[j].is_zero() {
                        let x = p.get(i, j) + &v[i] * &v[j] / q;
                        p.set(i, j, x);
                    }
                }
            }
        }
        p
    }

    /// `v`-coordinates of the orthogonal projection of a constant covector.
    pub fn coordinates(&self, w: &[Rational]) -> Vec<Rational> {
        self.vectors.iter().zip(&self.sq_norms).map(|(v, q)| dot(v, w) / q).collect()
    }
}

/// Basis of `E₀ʰ`, cached per `(n, h)`.
pub fn build_basis(n: usize, h: usize) -> Result<Arc<RuminBasis>> {
    build_basis_with_limit(n, h, DEFAULT_N_MAX)
}

pub fn build_basis_with_limit(n: usize, h: usize, n_max: usize) -> Result<Arc<RuminBasis>> {
    if n == 0 {
        return Err(Error::DegreeMismatch("n must be at least 1".into()));
    }
    if n > n_max {
        return Err(Error::TooLarge { n, n_max });
    }
    if h > 2 * n + 1 {
        return Err(Error::DegreeOutOfRange { degree: h, max: 2 * n + 1 });
    }
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), Arc<RuminBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.read().unwrap().get(&(n, h)) {
        return Ok(b.clone());
    }
    let b = Arc::new(if h <= n { primitive_basis(n, h) } else { dual_basis(n, h)? });
    cache.write().unwrap().insert((n, h), b.clone());
    Ok(b)
}

/// `ker Λ` on horizontal `h`-covectors, `h ≤ n`.
fn primitive_basis(n: usize, h: usize) -> RuminBasis {
    let masks = basis_masks(n, h);
    let m = masks.len();
    let horiz: Vec<usize> = (0..m).filter(|&i| is_horizontal_mask(n, masks[i])).collect();
    let lam = lefschetz_adjoint_matrix(n, h);
    // restrict Λ to horizontal columns
    let mut restricted = RatMatrix::zeros(lam.rows, horiz.len());
    for (c, &i) in horiz.iter().enumerate() {
        for r in 0..lam.rows {
            restricted.set(r, c, lam.get(r, i).clone());
        }
    }
    let kernel: Vec<Vec<Rational>> = if lam.rows == 0 {
        (0..horiz.len()).map(|c| (0..horiz.len()).map(|r| if r == c { Rational::one() } else { Rational::zero() }).collect()).collect()
    } else {
        restricted.kernel()
    };
    let embed = |v: &Vec<Rational>| {
        let mut full = vec![Rational::zero(); m];
        for (c, &i) in horiz.iter().enumerate() {
            full[i] = v[c].clone();
        }
        full
    };
    let kfull: Vec<Vec<Rational>> = kernel.iter().map(embed).collect();
    // orthogonal projector onto the kernel: K (KᵀK)⁻¹ Kᵀ
    let k = RatMatrix::from_columns(m, &kfull);
    let proj = if kfull.is_empty() { RatMatrix::zeros(m, m) } else { k.mul(&k.transpose().mul(&k).inverse().expect("independent kernel basis")).mul(&k.transpose()) };
    // Gram–Schmidt over projections of e_1, e_2, … in lexicographic order
    let seq: Vec<Vec<Rational>> = (0..m).map(|j| proj.column(j)).collect();
    let vectors: Vec<Vec<Rational>> = gram_schmidt(&seq).into_iter().map(normalize_integral).collect();
    let sq_norms = vectors.iter().map(|v| dot(v, v)).collect();
    RuminBasis { n, h, vectors, sq_norms }
}

/// Basis for `h ≥ n+1`: Hodge stars of the basis in degree `2n+1−h`.
fn dual_basis(n: usize, h: usize) -> Result<RuminBasis> {
    let low = build_basis(n, 2 * n + 1 - h)?;
    let star = star_matrix(n, low.h);
    let vectors: Vec<Vec<Rational>> = low.vectors.iter().map(|v| star.mul_vec(v)).collect();
    let sq_norms = vectors.iter().map(|v| dot(v, v)).collect();
    Ok(RuminBasis { n, h, vectors, sq_norms })
}

/// Smallest integer multiple with positive first nonzero entry.
fn normalize_integral(v: Vec<Rational>) -> Vec<Rational> {
    let mut l = num_bigint::BigInt::one();
    for x in &v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = num_bigint::BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v;
    }
    let first_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if first_neg {
        g = -g;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_dimensional_profiles() {
        let dims: Vec<usize> = (0..=3).map(|h| build_basis(1, h).unwrap().dim()).collect();
        assert_eq!(dims, vec![1, 2, 2, 1]);
        assert_eq!(build_basis(2, 2).unwrap().dim(), 5);
        assert!(build_basis(4, 1).is_err());
        assert!(build_basis(1, 4).is_err());
    }

    #[test]
    fn orthogonal_and_positive() {
        for n in 1..=3 {
            for h in 0..=n {
                let b = build_basis(n, h).unwrap();
                for i in 0..b.dim() {
                    let first = b.vectors[i].iter().find(|x| !x.is_zero()).unwrap();
                    assert!(first.is_positive());
                    for j in 0..i {
                        assert!(dot(&b.vectors[i], &b.vectors[j]).is_zero());
                    }
                }
            }
        }
    }
}
