//! Finite-difference realization of left-invariant operators on ℍ¹ lattices.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::compact::CompactOperator;
use super::field::{GridField, GridRuminForm};
use super::spec::GridSpec;
use crate::error::{Error, Result};
use crate::heisenberg::poly::rat_to_f64;
use crate::rumin::{LeftInvariantOperator, RuminComplex, Word};

/// Treatment of the outermost lattice layer by the central-difference stencils.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Second-order one-sided stencils.
    #[default]
    OneSided,
    /// Samples vanish outside the box; `∂` is then exactly skew-adjoint.
    ZeroExtension,
}

/// `W_letter f` with `X = ∂_x − ½y∂_t`, `Y = ∂_y + ½x∂_t`, `T = ∂_t`.
pub fn apply_letter(spec: &GridSpec, letter: u8, src: &[f64], boundary: Boundary) -> Vec<f64> {
    let [nx, ny, nt] = spec.points;
    let [hx, hy, ht] = spec.steps();
    let xs = spec.axis_coords(0);
    let ys = spec.axis_coords(1);
    let st = spec.strides();
    let mut out = vec![0.0; src.len()];
    let deriv = |idx: usize, p: usize, m: usize, s: usize, h: f64| -> f64 {
        if p > 0 && p + 1 < m {
            (src[idx + s] - src[idx - s]) / (2.0 * h)
        } else if p == 0 {
            match boundary {
                Boundary::OneSided => (-3.0 * src[idx] + 4.0 * src[idx + s] - src[idx + 2 * s]) / (2.0 * h),
                Boundary::ZeroExtension => src[idx + s] / (2.0 * h),
            }
        } else {
            match boundary {
                Boundary::OneSided => (3.0 * src[idx] - 4.0 * src[idx - s] + src[idx - 2 * s]) / (2.0 * h),
                Boundary::ZeroExtension => -src[idx - s] / (2.0 * h),
            }
        }
    };
    out.par_chunks_mut(st[0]).enumerate().for_each(|(i, slab)| {
        for j in 0..ny {
            for k in 0..nt {
                let idx = i * st[0] + j * st[1] + k;
                let v = match letter {
                    0 => deriv(idx, i, nx, st[0], hx) - 0.5 * ys[j] * deriv(idx, k, nt, 1, ht),
                    1 => deriv(idx, j, ny, st[1], hy) + 0.5 * xs[i] * deriv(idx, k, nt, 1, ht),
                    _ => deriv(idx, k, nt, 1, ht),
                };
                slab[j * nt + k] = v;
            }
        }
    });
    out
}

/// Matrix of words with real coefficients acting on orthonormal coordinates.
#[derive(Clone, Debug)]
pub struct DiscreteOperator {
    pub source_degree: usize,
    pub target_degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(Word, f64)>>,
}

impl DiscreteOperator {
    /// `S_dst M S_src⁻¹` with `S = diag(scales)`.
    pub fn from_left_invariant(op: &LeftInvariantOperator, src_scales: &[f64], dst_scales: &[f64]) -> Self {
        let mut entries = Vec::with_capacity(op.rows * op.cols);
        for i in 0..op.rows {
            for j in 0..op.cols {
                let f = dst_scales[i] / src_scales[j];
                entries.push(op.get(i, j).terms.iter().map(|(w, c)| (w.clone(), rat_to_f64(c) * f)).collect());
            }
        }
        DiscreteOperator { source_degree: op.source_degree, target_degree: op.target_degree, rows: op.rows, cols: op.cols, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &[(Word, f64)] {
        &self.entries[i * self.cols + j]
    }

    /// Transpose with reversed words; under [`Boundary::ZeroExtension`] this is the exact matrix transpose.
    pub fn adjoint(&self) -> Self {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(
                    self.get(i, j)
                        .iter()
                        .map(|(w, c)| {
                            let r: Word = w.iter().rev().cloned().collect();
                            (r, if w.len() % 2 == 1 { -c } else { *c })
                        })
                        .collect(),
                );
            }
        }
        DiscreteOperator { source_degree: self.target_degree, target_degree: self.source_degree, rows: self.cols, cols: self.rows, entries }
    }

    pub fn max_order(&self) -> usize {
        self.entries.iter().flat_map(|e| e.iter().map(|(w, _)| w.len())).max().unwrap_or(0)
    }

    /// Apply to component-major samples.
    pub fn apply_flat(&self, spec: &GridSpec, input: &[f64], boundary: Boundary) -> Vec<f64> {
        let m = spec.len();
        let mut out = vec![0.0; self.rows * m];
        for j in 0..self.cols {
            let src = &input[j * m..(j + 1) * m];
            let mut memo: HashMap<Word, Vec<f64>> = HashMap::new();
            for i in 0..self.rows {
                for (w, c) in self.get(i, j) {
                    let v = word_result(spec, w, src, boundary, &mut memo);
                    let dst = &mut out[i * m..(i + 1) * m];
                    match v {
                        None => dst.iter_mut().zip(src).for_each(|(d, s)| *d += c * s),
                        Some(v) => dst.iter_mut().zip(v.iter()).for_each(|(d, s)| *d += c * s),
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, a: &GridRuminForm, boundary: Boundary) -> Result<GridRuminForm> {
        if a.dim() != self.cols {
            return Err(Error::DegreeMismatch(format!("operator expects {} components, form has {}", self.cols, a.dim())));
        }
        let spec = a.spec().clone();
        let out = self.apply_flat(&spec, &a.flatten(), boundary);
        Ok(GridRuminForm::from_flat(&spec, self.target_degree, &out))
    }
}

/// Result of a word on `src`, sharing suffixes; `None` for the empty word.
fn word_result<'a>(spec: &GridSpec, w: &[u8], src: &[f64], boundary: Boundary, memo: &'a mut HashMap<Word, Vec<f64>>) -> Option<&'a Vec<f64>> {
    if w.is_empty() {
        return None;
    }
    let key: Word = w.iter().cloned().collect();
    if !memo.contains_key(&key) {
        let inner = match word_result(spec, &w[1..], src, boundary, memo) {
            None => apply_letter(spec, w[0], src, boundary),
            Some(v) => apply_letter(spec, w[0], v, boundary),
        };
        memo.insert(key.clone(), inner);
    }
    memo.get(&key)
}

/// Apply a symbolic operator between Rumin degrees to a grid form.
pub fn apply_operator(cx: &RuminComplex, op: &LeftInvariantOperator, a: &GridRuminForm, boundary: Boundary) -> Result<GridRuminForm> {
    if op.source_degree != a.degree {
        return Err(Error::DegreeMismatch(format!("operator acts on degree {}, form has degree {}", op.source_degree, a.degree)));
    }
    let src = cx.basis(op.source_degree).orthonormal_scales();
    let dst = cx.basis(op.target_degree).orthonormal_scales();
    DiscreteOperator::from_left_invariant(op, &src, &dst).apply(a, boundary)
}

/// Discrete Rumin complex on ℍ¹ in orthonormal coordinates.
pub struct GridComplex {
    pub cx: Arc<RuminComplex>,
    /// `d_c: E₀ʰ → E₀ʰ⁺¹`.
    pub dc: Vec<DiscreteOperator>,
    /// Transposes of `dc`.
    pub dcs: Vec<DiscreteOperator>,
    /// `Π_E` on `Λʰ`.
    pub pi_e: Vec<DiscreteOperator>,
    /// Orthonormal basis vectors of `E₀ʰ` in `Λʰ` coordinates.
    pub units: Vec<Vec<Vec<f64>>>,
    /// `Δ_{ℍ,h}` rewritten for compact stencils, used by the solvers.
    pub compact: Vec<CompactOperator>,
}

impl GridComplex {
    pub fn get() -> Result<Arc<GridComplex>> {
        static CELL: OnceLock<Arc<GridComplex>> = OnceLock::new();
        if let Some(g) = CELL.get() {
            return Ok(g.clone());
        }
        let cx = RuminComplex::get(1)?;
        let scales: Vec<Vec<f64>> = (0..=3).map(|h| cx.basis(h).orthonormal_scales()).collect();
        let dc: Vec<DiscreteOperator> = (0..3).map(|h| DiscreteOperator::from_left_invariant(&cx.dc[h], &scales[h], &scales[h + 1])).collect();
        let dcs = dc.iter().map(|d| d.adjoint()).collect();
        let pi_e = (0..=3)
            .map(|h| {
                let ones = vec![1.0; cx.pi_e[h].rows];
                DiscreteOperator::from_left_invariant(&cx.pi_e[h], &ones, &ones)
            })
            .collect();
        let units = (0..=3)
            .map(|h| {
                let b = cx.basis(h);
                b.vectors.iter().zip(&scales[h]).map(|(v, s)| v.iter().map(|x| rat_to_f64(x) / s).collect()).collect()
            })
            .collect();
        let compact = (0..=3).map(|h| Ok(CompactOperator::from_left_invariant(cx.laplacian(h)?, &scales[h]))).collect::<Result<_>>()?;
        let g = Arc::new(GridComplex { cx, dc, dcs, pi_e, units, compact });
        Ok(CELL.get_or_init(|| g).clone())
    }

    pub fn dim(&self, h: usize) -> usize {
        self.units[h].len()
    }

    pub fn d_c(&self, a: &GridRuminForm, boundary: Boundary) -> Result<GridRuminForm> {
        if a.degree >= 3 {
            return Err(Error::DegreeOutOfRange { degree: a.degree, max: 2 });
        }
        self.dc[a.degree].apply(a, boundary)
    }

    pub fn d_c_star(&self, a: &GridRuminForm, boundary: Boundary) -> Result<GridRuminForm> {
        if a.degree == 0 || a.degree > 3 {
            return Err(Error::DegreeOutOfRange { degree: a.degree, max: 3 });
        }
        self.dcs[a.degree - 1].apply(a, boundary)
    }

    /// `Δ_{ℍ,h}` on component-major samples, built from `dc` and its transpose.
    pub fn laplacian_flat(&self, h: usize, spec: &GridSpec, u: &[f64], boundary: Boundary) -> Vec<f64> {
        let down_up = |v: &[f64]| -> Option<Vec<f64>> {
            (h > 0).then(|| {
                let w = self.dcs[h - 1].apply_flat(spec, v, boundary);
                self.dc[h - 1].apply_flat(spec, &w, boundary)
            })
        };
        let up_down = |v: &[f64]| -> Option<Vec<f64>> {
            (h < 3).then(|| {
                let w = self.dc[h].apply_flat(spec, v, boundary);
                self.dcs[h].apply_flat(spec, &w, boundary)
            })
        };
        let twice = |f: &dyn Fn(&[f64]) -> Option<Vec<f64>>, v: &[f64]| f(v).and_then(|w| f(&w));
        let (a, b) = match h {
            1 => (twice(&down_up, u), up_down(u)),
            2 => (down_up(u), twice(&up_down, u)),
            _ => (down_up(u), up_down(u)),
        };
        match (a, b) {
            (Some(mut a), Some(b)) => {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            }
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => vec![0.0; u.len()],
        }
    }

    pub fn laplacian(&self, a: &GridRuminForm, boundary: Boundary) -> GridRuminForm {
        let spec = a.spec().clone();
        GridRuminForm::from_flat(&spec, a.degree, &self.laplacian_flat(a.degree, &spec, &a.flatten(), boundary))
    }

    /// `Σ_k a_k ξ_k` as `Λʰ` coordinate fields.
    pub fn embed(&self, a: &GridRuminForm) -> Vec<GridField> {
        let spec = a.spec();
        let amb = self.units[a.degree].first().map_or(0, |u| u.len());
        let mut out = vec![GridField::zeros(spec); amb];
        for (c, u) in a.coeffs.iter().zip(&self.units[a.degree]) {
            for (o, w) in out.iter_mut().zip(u) {
                if *w != 0.0 {
                    o.axpy(*w, c);
                }
            }
        }
        out
    }

    /// Orthogonal projection of `Λʰ` coordinate fields onto `E₀ʰ`.
    pub fn project(&self, h: usize, fields: &[GridField]) -> GridRuminForm {
        let spec = &fields[0].spec;
        let coeffs = self.units[h]
            .iter()
            .map(|u| {
                let mut c = GridField::zeros(spec);
                for (f, w) in fields.iter().zip(u) {
                    if *w != 0.0 {
                        c.axpy(*w, f);
                    }
                }
                c
            })
            .collect();
        GridRuminForm { n: 1, degree: h, coeffs }
    }

    /// `W_j` applied to every coefficient (`j` zero-based).
    pub fn apply_field(&self, j: u8, a: &GridRuminForm, boundary: Boundary) -> GridRuminForm {
        let coeffs = a.coeffs.iter().map(|f| GridField { spec: f.spec.clone(), data: apply_letter(&f.spec, j, &f.data, boundary) }).collect();
        GridRuminForm { n: a.n, degree: a.degree, coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::Poly;

    #[test]
    fn fields_on_quadratics_are_exact() {
        let s = GridSpec::cube(1.0, 1.0, 9).unwrap();
        let p = Poly::parse(3, "x1^2*y1 - 3*t*x1 + y1^2").unwrap();
        let f = GridField::from_poly(&s, &p);
        for j in 0..3u8 {
            let exact = GridField::from_poly(&s, &crate::heisenberg::apply_field(1, j as usize + 1, &p).unwrap());
            let num = apply_letter(&s, j, &f.data, Boundary::OneSided);
            let err = num.iter().zip(&exact.data).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-12, "letter {j}: {err}");
        }
    }

    #[test]
    fn zero_extension_is_skew() {
        let s = GridSpec::cube(1.0, 0.5, 7).unwrap();
        let u = GridField::from_fn(&s, |p| (p[0] * 3.1 + p[1] * p[2]).sin());
        let v = GridField::from_fn(&s, |p| (p[1] - 2.0 * p[2] * p[0]).cos());
        for j in 0..3u8 {
            let a: f64 = apply_letter(&s, j, &u.data, Boundary::ZeroExtension).iter().zip(&v.data).map(|(x, y)| x * y).sum();
            let b: f64 = apply_letter(&s, j, &v.data, Boundary::ZeroExtension).iter().zip(&u.data).map(|(x, y)| x * y).sum();
            assert!((a + b).abs() < 1e-10 * (a.abs() + 1.0));
        }
    }
}
