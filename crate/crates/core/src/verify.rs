//! Exact certificates for the symbolic layer, in rational arithmetic.

use std::time::Instant;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exterior::{basis_masks, binomial, from_coefficient_vector, is_horizontal_mask, star_matrix, Form};
use crate::heisenberg::poly::{monomials_up_to, rat};
use crate::heisenberg::{Poly, Rational};
use crate::linalg::RatMatrix;
use crate::rumin::{LeftInvariantOperator, RuminComplex, RuminForm, VarOperator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub n_max: usize,
    /// Random forms per `(n, degree)`.
    pub samples: usize,
    /// Total degree of the random coefficients.
    pub max_degree: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { n_max: 3, samples: 100, max_degree: 3, seed: 20240601 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn certify(id: &str, statement: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Certificate {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Certificate { id: id.into(), statement: statement.into(), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

/// About six monomials per coefficient.
fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_degree: usize) -> Poly {
    let nv = 2 * n + 1;
    let count = monomials_up_to(nv, max_degree).len() as f64;
    Poly::random_sparse(rng, nv, max_degree, (6.0 / count).min(1.0))
}

fn random_form(rng: &mut ChaCha8Rng, cx: &RuminComplex, h: usize, max_degree: usize) -> RuminForm<Poly> {
    RuminForm::new(cx.n, h, (0..cx.dim(h)).map(|_| random_poly(rng, cx.n, max_degree)).collect())
}

fn random_ambient(rng: &mut ChaCha8Rng, n: usize, h: usize, max_degree: usize) -> Vec<Poly> {
    (0..binomial(2 * n + 1, h)).map(|_| random_poly(rng, n, max_degree)).collect()
}

fn rat_op(n: usize, h: usize, m: &RatMatrix) -> LeftInvariantOperator {
    LeftInvariantOperator::from_rat(n, h, h, m)
}

fn rng_for(opts: &VerifyOptions, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// `d_c ∘ d_c = 0` as operators and on random forms.
pub fn chain_property(opts: &VerifyOptions) -> Certificate {
    certify("chain", "d_c∘d_c = 0 for every degree", || {
        let mut forms = 0;
        for n in 1..=opts.n_max {
            let cx = RuminComplex::get(n)?;
            let mut rng = rng_for(opts, n as u64);
            for h in 0..cx.top() - 1 {
                if !cx.dc[h + 1].compose(&cx.dc[h]).is_zero() {
                    return Ok((false, format!("operator d_c∘d_c ≠ 0 at n = {n}, h = {h}")));
                }
                for _ in 0..opts.samples {
                    let a = random_form(&mut rng, &cx, h, opts.max_degree);
                    if !cx.d_c(&cx.d_c(&a)?)?.is_zero() {
                        return Ok((false, format!("random form with d_c d_c α ≠ 0 at n = {n}, h = {h}")));
                    }
                    forms += 1;
                }
            }
        }
        Ok((true, format!("operator identity for n ≤ {} and {forms} random forms", opts.n_max)))
    })
}

/// `⋆⋆ = Id`, `⋆E₀ʰ = E₀^{2n+1−h}` and `d_c* = (−1)ʰ ⋆ d_c ⋆`.
pub fn star_identities(opts: &VerifyOptions) -> Certificate {
    certify("star", "⋆⋆ = Id, ⋆E₀ʰ = E₀^{2n+1−h}, d_c* = (−1)ʰ⋆d_c⋆", || {
        for n in 1..=opts.n_max {
            let cx = RuminComplex::get(n)?;
            let top = cx.top();
            for h in 0..=top {
                let star = star_matrix(n, h);
                let target = cx.basis(top - h).projector();
                for v in &cx.basis(h).vectors {
                    let w = star.mul_vec(v);
                    if target.mul_vec(&w) != w {
                        return Ok((false, format!("⋆ leaves E₀ at n = {n}, h = {h}")));
                    }
                }
                let s = cx.star_coordinates(h);
                let back = cx.star_coordinates(top - h);
                if back.mul(&s) != RatMatrix::identity(cx.dim(h)) {
                    return Ok((false, format!("⋆⋆ ≠ Id at n = {n}, h = {h}")));
                }
                if h >= 1 {
                    let sign = if h % 2 == 0 { Rational::one() } else { -Rational::one() };
                    let s_in = LeftInvariantOperator::from_rat(n, h, top - h, &s);
                    let s_out = LeftInvariantOperator::from_rat(n, top - h + 1, h - 1, &cx.star_coordinates(top - h + 1));
                    let rhs = s_out.compose(&cx.dc[top - h]).compose(&s_in).scale(&sign);
                    if !cx.dc_star[h - 1].sub(&rhs).is_zero() {
                        return Ok((false, format!("d_c* ≠ (−1)ʰ⋆d_c⋆ at n = {n}, h = {h}")));
                    }
                }
            }
        }
        Ok((true, format!("all degrees, n ≤ {}", opts.n_max)))
    })
}

/// `dΠ_E = Π_E d`, `Π_{E₀}Π_EΠ_{E₀} = Π_{E₀}`, `Π_EΠ_{E₀}Π_E = Π_E`.
pub fn projection_contract(opts: &VerifyOptions) -> Certificate {
    certify("projections", "dΠ_E = Π_E d, Π_E0 Π_E Π_E0 = Π_E0, Π_E Π_E0 Π_E = Π_E", || {
        let mut forms = 0;
        for n in 1..=opts.n_max.min(2) {
            let cx = RuminComplex::get(n)?;
            let top = cx.top();
            let mut rng = rng_for(opts, 100 + n as u64);
            for h in 0..=top {
                let pe = &cx.pi_e[h];
                let p0 = rat_op(n, h, &cx.basis(h).projector());
                if !p0.compose(pe).compose(&p0).sub(&p0).is_zero() {
                    return Ok((false, format!("Π_E0 Π_E Π_E0 ≠ Π_E0 at n = {n}, h = {h}")));
                }
                if !pe.compose(&p0).compose(pe).sub(pe).is_zero() {
                    return Ok((false, format!("Π_E Π_E0 Π_E ≠ Π_E at n = {n}, h = {h}")));
                }
                if h < top && !cx.d_full[h].compose(pe).sub(&cx.pi_e[h + 1].compose(&cx.d_full[h])).is_zero() {
                    return Ok((false, format!("dΠ_E ≠ Π_E d at n = {n}, h = {h}")));
                }
                for _ in 0..opts.samples {
                    let v = random_ambient(&mut rng, n, h, opts.max_degree);
                    let f = from_coefficient_vector(n, h, v.clone());
                    let zero = Poly::zero(2 * n + 1);
                    let pf = cx.proj_e(&f, &zero);
                    if h < top && pf.de_rham_d() != cx.proj_e(&f.de_rham_d(), &zero) {
                        return Ok((false, format!("dΠ_E ≠ Π_E d on a random form at n = {n}, h = {h}")));
                    }
                    let a = cx.proj_e0_form(&f, &zero);
                    if cx.proj_e0_form(&cx.proj_e(&a, &zero), &zero) != a {
                        return Ok((false, format!("Π_E0 Π_E Π_E0 ≠ Π_E0 on a random form at n = {n}, h = {h}")));
                    }
                    if cx.proj_e(&cx.proj_e0_form(&pf, &zero), &zero) != pf {
                        return Ok((false, format!("Π_E Π_E0 Π_E ≠ Π_E on a random form at n = {n}, h = {h}")));
                    }
                    forms += 1;
                }
            }
        }
        Ok((true, format!("operator identities and {forms} random forms, n ≤ {}", opts.n_max.min(2))))
    })
}

/// Dimension of `E₀ʰ` from ranks of the Lefschetz maps on horizontal covectors.
pub fn lefschetz_oracle(n: usize, h: usize) -> usize {
    let hor = |k: usize| -> Vec<u32> { basis_masks(n, k).into_iter().filter(|m| is_horizontal_mask(n, *m)).collect() };
    let rank_of = |src: &[u32], deg: usize, lower: bool| -> usize {
        let dst: Vec<u32> = hor(if lower { deg - 2 } else { deg + 2 });
        let mut m = RatMatrix::zeros(dst.len(), src.len());
        for (j, &s) in src.iter().enumerate() {
            let e = Form::<Rational>::from_terms(n, deg, [(s, Rational::one())]);
            let img = if lower { e.lefschetz_adjoint() } else { e.lefschetz() };
            for (mm, c) in &img.terms {
                if let Some(i) = dst.iter().position(|d| d == mm) {
                    m.set(i, j, c.clone());
                }
            }
        }
        m.rank()
    };
    if h <= n {
        let src = hor(h);
        if h < 2 {
            return src.len();
        }
        src.len() - rank_of(&src, h, true)
    } else {
        // θ ∧ ker(L) on horizontal (h−1)-covectors
        let src = hor(h - 1);
        if h + 1 > 2 * n {
            return src.len();
        }
        src.len() - rank_of(&src, h - 1, false)
    }
}

pub fn dimension_oracle(opts: &VerifyOptions) -> Certificate {
    certify("dimensions", "dim E₀ʰ equals the Lefschetz-kernel count", || {
        let mut profiles = Vec::new();
        for n in 1..=opts.n_max {
            let cx = RuminComplex::get(n)?;
            let dims: Vec<usize> = (0..=cx.top()).map(|h| cx.dim(h)).collect();
            let oracle: Vec<usize> = (0..=cx.top()).map(|h| lefschetz_oracle(n, h)).collect();
            if dims != oracle {
                return Ok((false, format!("n = {n}: basis {dims:?}, oracle {oracle:?}")));
            }
            profiles.push(format!("n={n} {dims:?}"));
        }
        let ok = RuminComplex::get(1)?.bases.iter().map(|b| b.dim()).collect::<Vec<_>>() == vec![1, 2, 2, 1];
        Ok((ok, profiles.join("; ")))
    })
}

/// `[d_c, ζ](uα) = u[d_c, ζ]α` off the middle degree; `[[d_c, ζ], u]` has order zero at `h = n`.
pub fn leibniz_structure(opts: &VerifyOptions) -> Certificate {
    certify("leibniz", "[d_c,ζ] is C^∞-linear for h ≠ n; [[d_c,ζ],u] is multiplication for h = n", || {
        let mut checked = 0;
        let per = (opts.samples / 5).max(1);
        for n in 1..=opts.n_max.min(2) {
            let cx = RuminComplex::get(n)?;
            let mut rng = rng_for(opts, 200 + n as u64);
            for h in 0..cx.top() {
                for _ in 0..per {
                    let zeta = random_poly(&mut rng, n, opts.max_degree);
                    let u = random_poly(&mut rng, n, opts.max_degree);
                    let a = random_form(&mut rng, &cx, h, opts.max_degree);
                    let c = VarOperator::commutator_of(&cx.dc[h], &zeta);
                    if h == n {
                        let cc = c.commutator(&u);
                        if cc.order() != 0 {
                            return Ok((false, format!("[[d_c,ζ],u] has order {} at n = {n}", cc.order())));
                        }
                    } else {
                        let ua: Vec<Poly> = a.coeffs.iter().map(|x| x.mul(&u)).collect();
                        let lhs = c.apply(&ua);
                        let rhs: Vec<Poly> = c.apply(&a.coeffs).iter().map(|x| x.mul(&u)).collect();
                        if lhs != rhs {
                            return Ok((false, format!("[d_c,ζ](uα) ≠ u[d_c,ζ]α at n = {n}, h = {h}")));
                        }
                    }
                    checked += 1;
                }
            }
        }
        Ok((true, format!("{checked} random triples (ζ, u, α), n ≤ {}", opts.n_max.min(2))))
    })
}

fn lap(cx: &RuminComplex, h: usize) -> Result<LeftInvariantOperator> {
    Ok(cx.laplacian(h)?.clone())
}

/// Commutation of `d_c` with the Rumin Laplacians, as exact operator identities.
///
/// Checked: `d_cΔ_h = Δ_{h+1}d_c` for `h ≠ n−1, n+1`; `d_cd_c*d_cΔ_{n−1} = Δ_nd_c`;
/// `d_cd_c*Δ_n = Δ_nd_cd_c*`; and at `h = n+1` the form `d_cΔ_{n+1} = Δ_{n+2}d_cd_c*d_c`.
/// Also confirms that `d_cΔ_{n+1} = Δ_{n+2}d_c` and `d_cΔ_n = d_cd_c*Δ_{n+1}d_c` are false:
/// both sides of the latter have different homogeneity.
pub fn laplacian_commutation(opts: &VerifyOptions) -> Certificate {
    certify("commutation", "d_c commutes with Δ_ℍ, with the corrected form at h = n+1", || {
        let mut notes = Vec::new();
        for n in 1..=opts.n_max.min(2) {
            let cx = RuminComplex::get(n)?;
            let top = cx.top();
            let dc = |h: usize| cx.dc[h].clone();
            let dcs = |h: usize| cx.dc_star[h - 1].clone();
            let mut plain = Vec::new();
            for h in 0..top {
                if h + 1 == n || h == n + 1 {
                    continue;
                }
                if !dc(h).compose(&lap(&cx, h)?).sub(&lap(&cx, h + 1)?.compose(&dc(h))).is_zero() {
                    return Ok((false, format!("d_cΔ_h ≠ Δ_{{h+1}}d_c at n = {n}, h = {h}")));
                }
                plain.push(h.to_string());
            }
            let lhs = dc(n - 1).compose(&dcs(n)).compose(&dc(n - 1)).compose(&lap(&cx, n - 1)?);
            if !lhs.sub(&lap(&cx, n)?.compose(&dc(n - 1))).is_zero() {
                return Ok((false, format!("d_cd_c*d_cΔ_{{n−1}} ≠ Δ_nd_c at n = {n}")));
            }
            let dd = dc(n - 1).compose(&dcs(n));
            if !dd.compose(&lap(&cx, n)?).sub(&lap(&cx, n)?.compose(&dd)).is_zero() {
                return Ok((false, format!("d_cd_c*Δ_n ≠ Δ_nd_cd_c* at n = {n}")));
            }
            let h = n + 1;
            let corrected = dc(h).compose(&lap(&cx, h)?).sub(&lap(&cx, h + 1)?.compose(&dc(h)).compose(&dcs(h + 1)).compose(&dc(h)));
            if !corrected.is_zero() {
                return Ok((false, format!("d_cΔ_{{n+1}} ≠ Δ_{{n+2}}d_cd_c*d_c at n = {n}")));
            }
            let literal_i = dc(h).compose(&lap(&cx, h)?).sub(&lap(&cx, h + 1)?.compose(&dc(h)));
            let literal_iii = dc(n).compose(&lap(&cx, n)?).sub(&dc(n).compose(&dcs(n + 1)).compose(&lap(&cx, n + 1)?).compose(&dc(n)));
            if literal_i.is_zero() || literal_iii.is_zero() {
                return Ok((false, format!("n = {n}: expected d_cΔ_{{n+1}} ≠ Δ_{{n+2}}d_c and d_cΔ_n ≠ d_cd_c*Δ_{{n+1}}d_c")));
            }
            notes.push(format!("n={n}: plain at h ∈ {{{}}}", plain.join(",")));
        }
        Ok((true, format!("{}; at h = n+1 only d_cΔ = Δd_cd_c*d_c holds", notes.join("; "))))
    })
}

/// `d_c(α∘δ_λ) = λ^w (d_cα)∘δ_λ` with `w = 1` off the middle degree and `w = 2` at `h = n`.
pub fn dilation_weights(opts: &VerifyOptions) -> Certificate {
    certify("dilation", "d_c has weight 1 for h ≠ n and 2 for h = n", || {
        let lambdas = [rat(2, 1), rat(3, 5), rat(7, 3)];
        let mut checked = 0;
        let per = (opts.samples / 10).max(1);
        for n in 1..=opts.n_max {
            let cx = RuminComplex::get(n)?;
            let mut rng = rng_for(opts, 300 + n as u64);
            for h in 0..cx.top() {
                let w = if h == n { 2 } else { 1 };
                if cx.dc[h].weight() != Some(w) || cx.dc_weight(h) != w {
                    return Ok((false, format!("operator weight {:?} at n = {n}, h = {h}", cx.dc[h].weight())));
                }
                for k in 0..per {
                    let l = &lambdas[k % lambdas.len()];
                    let a = random_form(&mut rng, &cx, h, opts.max_degree);
                    let lhs = cx.d_c(&a.dilate_coefficients(l))?;
                    let mut s = Rational::one();
                    for _ in 0..w {
                        s *= l;
                    }
                    let rhs = cx.d_c(&a)?.dilate_coefficients(l).scale(&s);
                    if lhs != rhs {
                        return Ok((false, format!("scaling fails at n = {n}, h = {h}")));
                    }
                    // the pullback of the full form commutes with d
                    let f = cx.to_form(&a);
                    let pulled = f.dilation_pullback(l)?;
                    if pulled.de_rham_d() != f.de_rham_d().dilation_pullback(l)? {
                        return Ok((false, format!("δ* does not commute with d at n = {n}, h = {h}")));
                    }
                    checked += 1;
                }
            }
        }
        Ok((true, format!("operator weights and {checked} random forms, n ≤ {}", opts.n_max)))
    })
}

/// Every certificate, in a fixed order.
pub fn verify_algebra(opts: &VerifyOptions) -> Vec<Certificate> {
    vec![
        chain_property(opts),
        star_identities(opts),
        projection_contract(opts),
        dimension_oracle(opts),
        leibniz_structure(opts),
        laplacian_commutation(opts),
        dilation_weights(opts),
    ]
}

pub fn render_table(certs: &[Certificate]) -> String {
    let mut s = String::new();
    for c in certs {
        s.push_str(&format!("{:<12} {:<4} {:>8.2}s  {}  ({})\n", c.id, if c.passed { "ok" } else { "FAIL" }, c.seconds, c.statement, c.detail));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyOptions {
        VerifyOptions { n_max: 1, samples: 10, ..Default::default() }
    }

    #[test]
    fn oracle_profile_n1() {
        assert_eq!((0..4).map(|h| lefschetz_oracle(1, h)).collect::<Vec<_>>(), vec![1, 2, 2, 1]);
        assert_eq!((0..6).map(|h| lefschetz_oracle(2, h)).collect::<Vec<_>>(), vec![1, 4, 5, 5, 4, 1]);
    }

    #[test]
    fn certificates_pass_for_n1() {
        for c in verify_algebra(&small()) {
            assert!(c.passed, "{}: {}", c.id, c.detail);
        }
    }
}
