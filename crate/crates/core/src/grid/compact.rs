//! Compact-stencil discretization of left-invariant operators.
//!
//! Composing central first differences leaves the checkerboard modes of an odd lattice in the
//! kernel (every central difference annihilates the indicator of the even sub-lattice), so the
//! products `d_c* d_c` built from [`super::DiscreteOperator`] are singular. Here an operator is
//! first rewritten in coordinates as `Σ c_α(x,y) ∂^α` and each `∂^α` gets the narrowest
//! centered stencil on every axis. The result is symmetrized, so it is a symmetric matrix that
//! agrees with the operator to second order.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::spec::GridSpec;
use crate::heisenberg::{rat, rat_int, Poly, Rational};
use crate::rumin::{LeftInvariantOperator, NcPoly};

pub type Multi = [u8; 3];

/// `Σ c_α ∂^α` with coefficients on the left.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordOperator {
    pub terms: BTreeMap<Multi, Poly>,
}

fn binom(n: u8, k: u8) -> i64 {
    (0..k as i64).fold(1, |acc, i| acc * (n as i64 - i) / (i + 1))
}

impl CoordOperator {
    pub fn zero() -> Self {
        CoordOperator { terms: BTreeMap::new() }
    }

    fn add_term(&mut self, a: Multi, c: Poly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a).or_insert_with(|| Poly::zero(3));
        e.add_assign(&c);
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    /// `X = ∂_x − ½y∂_t`, `Y = ∂_y + ½x∂_t`, `T = ∂_t` on ℍ¹.
    pub fn letter(l: u8) -> Self {
        let mut op = Self::zero();
        match l {
            0 => {
                op.add_term([1, 0, 0], Poly::one(3));
                op.add_term([0, 0, 1], Poly::var(3, 1).scale(&rat(-1, 2)));
            }
            1 => {
                op.add_term([0, 1, 0], Poly::one(3));
                op.add_term([0, 0, 1], Poly::var(3, 0).scale(&rat(1, 2)));
            }
            _ => op.add_term([0, 0, 1], Poly::one(3)),
        }
        op
    }

    /// Composition `self ∘ other` by the Leibniz rule.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                for g0 in 0..=a[0] {
                    for g1 in 0..=a[1] {
                        for g2 in 0..=a[2] {
                            let mut dd = d.clone();
                            for (v, g) in [(0, g0), (1, g1), (2, g2)] {
                                for _ in 0..g {
                                    dd = dd.derivative(v);
                                }
                            }
                            if dd.is_zero() {
                                continue;
                            }
                            let k = binom(a[0], g0) * binom(a[1], g1) * binom(a[2], g2);
                            let coef = c.mul(&dd).scale(&rat_int(k));
                            out.add_term([a[0] - g0 + b[0], a[1] - g1 + b[1], a[2] - g2 + b[2]], coef);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn from_ncpoly(p: &NcPoly) -> Self {
        let mut out = Self::zero();
        for (w, c) in &p.terms {
            let mut op = Self::zero();
            op.add_term([0, 0, 0], Poly::one(3));
            for &l in w.iter() {
                op = op.compose(&Self::letter(l));
            }
            for (a, q) in op.terms {
                out.add_term(a, q.scale(c));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        if c.is_zero() {
            return out;
        }
        for (a, q) in &self.terms {
            out.add_term(*a, q.scale(c));
        }
        out
    }
}

/// 1D centered stencil for `d^e/dx^e` times `h^e`, as offsets from the center.
fn stencil(e: u8) -> &'static [f64] {
    match e {
        0 => &[1.0],
        1 => &[-0.5, 0.0, 0.5],
        2 => &[1.0, -2.0, 1.0],
        3 => &[-0.5, 1.0, 0.0, -1.0, 0.5],
        4 => &[1.0, -4.0, 6.0, -4.0, 1.0],
        _ => panic!("derivative order {e} has no stencil"),
    }
}

/// Nonzero taps of the tensor stencil for `∂^α`, including the `h^{-α}` factors.
fn taps(a: Multi, steps: [f64; 3]) -> Vec<([isize; 3], f64)> {
    let mut out = vec![([0isize; 3], 1.0)];
    for axis in 0..3 {
        let w = stencil(a[axis]);
        let r = (w.len() / 2) as isize;
        let scale = steps[axis].powi(a[axis] as i32).recip();
        let mut next = Vec::new();
        for (d, c) in &out {
            for (q, wq) in w.iter().enumerate() {
                if *wq != 0.0 {
                    let mut d2 = *d;
                    d2[axis] = q as isize - r;
                    next.push((d2, c * wq * scale));
                }
            }
        }
        out = next;
    }
    out
}

/// Square matrix of coordinate operators acting on component-major samples.
#[derive(Clone, Debug)]
pub struct CompactOperator {
    pub comps: usize,
    pub entries: Vec<CoordOperator>,
    /// Floating factor applied to each entry.
    pub factors: Vec<f64>,
}

impl CompactOperator {
    /// Rewrite a square left-invariant operator in orthonormal coordinates `S M S⁻¹`.
    pub fn from_left_invariant(op: &LeftInvariantOperator, scales: &[f64]) -> Self {
        assert_eq!(op.rows, op.cols, "compact discretization needs a square operator");
        let mut entries = Vec::with_capacity(op.rows * op.cols);
        let mut factors = Vec::with_capacity(op.rows * op.cols);
        for i in 0..op.rows {
            for j in 0..op.cols {
                entries.push(CoordOperator::from_ncpoly(op.get(i, j)));
                factors.push(scales[i] / scales[j]);
            }
        }
        CompactOperator { comps: op.rows, entries, factors }
    }

    pub fn get(&self, i: usize, j: usize) -> &CoordOperator {
        &self.entries[i * self.comps + j]
    }

    pub fn max_order(&self) -> u8 {
        self.entries.iter().flat_map(|e| e.terms.keys().map(|a| a.iter().copied().max().unwrap_or(0))).max().unwrap_or(0)
    }

    pub fn term_count(&self) -> usize {
        self.entries.iter().map(|e| e.terms.len()).sum()
    }

    /// Unsymmetrized stencil weights of entry `(i,j)`, one `(x,y)` table per offset.
    fn raw_weights(&self, i: usize, j: usize, spec: &GridSpec) -> BTreeMap<[isize; 3], Vec<f64>> {
        let xs = spec.axis_coords(0);
        let ys = spec.axis_coords(1);
        let plane = xs.len() * ys.len();
        let f = self.factors[i * self.comps + j];
        let mut out: BTreeMap<[isize; 3], Vec<f64>> = BTreeMap::new();
        for (a, c) in &self.get(i, j).terms {
            assert!(c.terms().all(|(ex, _)| ex[2] == 0), "coefficients must not depend on t");
            let ev = c.evaluator();
            let mut table = Vec::with_capacity(plane);
            for x in &xs {
                for y in &ys {
                    table.push(f * ev.eval(&[*x, *y, 0.0]));
                }
            }
            for (d, w) in taps(*a, spec.steps()) {
                let acc = out.entry(d).or_insert_with(|| vec![0.0; plane]);
                acc.iter_mut().zip(&table).for_each(|(acc, c)| *acc += w * c);
            }
        }
        out
    }

    /// Symmetrized weights `½(A + Aᵀ)` tabulated on a lattice.
    pub fn on(&self, spec: &GridSpec) -> CompactStencil {
        let [nx, ny, _] = spec.points;
        let raw: Vec<BTreeMap<[isize; 3], Vec<f64>>> =
            (0..self.comps * self.comps).map(|e| self.raw_weights(e / self.comps, e % self.comps, spec)).collect();
        let mut blocks = Vec::with_capacity(self.comps * self.comps);
        for i in 0..self.comps {
            for j in 0..self.comps {
                let direct = &raw[i * self.comps + j];
                let mirror = &raw[j * self.comps + i];
                let mut weights: BTreeMap<[isize; 3], Vec<f64>> = BTreeMap::new();
                for (d, w) in direct {
                    weights.insert(*d, w.iter().map(|v| 0.5 * v).collect());
                }
                // (Aᵀ)_{ij}(p, p+d) = A_{ji}(p+d, p): offset −d read at the column of p+d
                for (md, w) in mirror {
                    let d = [-md[0], -md[1], -md[2]];
                    let acc = weights.entry(d).or_insert_with(|| vec![0.0; nx * ny]);
                    for x in 0..nx {
                        let xs = x as isize + d[0];
                        if xs < 0 || xs >= nx as isize {
                            continue;
                        }
                        for y in 0..ny {
                            let ys = y as isize + d[1];
                            if ys < 0 || ys >= ny as isize {
                                continue;
                            }
                            acc[x * ny + y] += 0.5 * w[xs as usize * ny + ys as usize];
                        }
                    }
                }
                weights.retain(|_, w| w.iter().any(|v| *v != 0.0));
                let (offsets, weights) = weights.into_iter().unzip();
                blocks.push(Block { offsets, weights });
            }
        }
        CompactStencil { spec: spec.clone(), comps: self.comps, blocks }
    }
}

#[derive(Clone, Debug)]
struct Block {
    offsets: Vec<[isize; 3]>,
    /// Per offset, weights over the `(x,y)` plane (row-major `x`, `y`).
    weights: Vec<Vec<f64>>,
}

/// Symmetric variable-coefficient stencil of a [`CompactOperator`] on one lattice.
#[derive(Clone, Debug)]
pub struct CompactStencil {
    pub spec: GridSpec,
    pub comps: usize,
    blocks: Vec<Block>,
}

impl CompactStencil {
    /// Apply to component-major samples with zero values outside the box.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let m = self.spec.len();
        let [nx, ny, nt] = self.spec.points;
        let slab = ny * nt;
        let mut out = vec![0.0; self.comps * m];
        out.par_chunks_mut(slab).enumerate().for_each(|(chunk, dst)| {
            let (i, x) = (chunk / nx, chunk % nx);
            for y in 0..ny {
                let col = x * ny + y;
                let row = &mut dst[y * nt..(y + 1) * nt];
                for j in 0..self.comps {
                    let b = &self.blocks[i * self.comps + j];
                    for (d, w) in b.offsets.iter().zip(&b.weights) {
                        let c = w[col];
                        if c == 0.0 {
                            continue;
                        }
                        let (xs, ys) = (x as isize + d[0], y as isize + d[1]);
                        if xs < 0 || ys < 0 || xs >= nx as isize || ys >= ny as isize {
                            continue;
                        }
                        let start = j * m + (xs as usize * ny + ys as usize) * nt;
                        let src = &u[start..start + nt];
                        let k0 = (-d[2]).max(0) as usize;
                        let k1 = (nt as isize - d[2].max(0)) as usize;
                        let s0 = (k0 as isize + d[2]) as usize;
                        row[k0..k1].iter_mut().zip(&src[s0..s0 + (k1 - k0)]).for_each(|(r, v)| *r += c * v);
                    }
                }
            }
        });
        out
    }

    /// Diagonal of the matrix.
    pub fn diagonal(&self) -> Vec<f64> {
        let m = self.spec.len();
        let nt = self.spec.points[2];
        let mut out = vec![0.0; self.comps * m];
        for i in 0..self.comps {
            let b = &self.blocks[i * self.comps + i];
            if let Some(pos) = b.offsets.iter().position(|d| *d == [0, 0, 0]) {
                for idx in 0..m {
                    out[i * m + idx] = b.weights[pos][idx / nt];
                }
            }
        }
        out
    }

    /// Couplings of block `(i,j)` along a `t`-line: offset in `t` and weights over the plane.
    pub fn line_weights(&self, i: usize, j: usize) -> Vec<(isize, &[f64])> {
        let b = &self.blocks[i * self.comps + j];
        b.offsets.iter().zip(&b.weights).filter(|(d, _)| d[0] == 0 && d[1] == 0).map(|(d, w)| (d[2], w.as_slice())).collect()
    }

    /// Number of stored offsets over all blocks.
    pub fn offset_count(&self) -> usize {
        self.blocks.iter().map(|b| b.offsets.len()).sum()
    }
}

impl CoordOperator {
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|p| p.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{discretize, GridComplex};
    use crate::rumin::RuminForm;

    #[test]
    fn letters_compose_to_sub_laplacian() {
        // −(X² + Y²) = −∂x² − ∂y² + y∂x∂t − x∂y∂t − ¼(x² + y²)∂t²
        let xx = CoordOperator::letter(0).compose(&CoordOperator::letter(0));
        let yy = CoordOperator::letter(1).compose(&CoordOperator::letter(1));
        let mut sum = CoordOperator::zero();
        for (a, c) in xx.terms.iter().chain(yy.terms.iter()) {
            sum.add_term(*a, c.neg());
        }
        assert_eq!(sum.terms[&[2, 0, 0]], Poly::constant(3, rat(-1, 1)));
        assert_eq!(sum.terms[&[1, 0, 1]], Poly::var(3, 1));
        assert_eq!(sum.terms[&[0, 1, 1]], Poly::var(3, 0).neg());
        assert_eq!(sum.terms.len(), 5);
    }

    fn pseudo(i: usize) -> f64 {
        ((i as f64 * 12.9898).sin() * 43758.5453).fract()
    }

    #[test]
    fn symmetric_and_positive() {
        let gc = GridComplex::get().unwrap();
        let spec = GridSpec::cube(1.0, 1.0, 9).unwrap();
        for h in 0..4 {
            let st = gc.compact[h].on(&spec);
            let m = spec.len() * st.comps;
            let u: Vec<f64> = (0..m).map(pseudo).collect();
            let v: Vec<f64> = (0..m).map(|i| pseudo(i + 5000)).collect();
            let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            let (au, av) = (st.apply(&u), st.apply(&v));
            assert!((dot(&au, &v) - dot(&av, &u)).abs() < 1e-9 * dot(&au, &u).abs());
            assert!(dot(&au, &u) > 0.0);
        }
    }

    #[test]
    fn exact_on_low_degree_polynomials() {
        // interior values are exact when each variable appears with degree ≤ 2
        let gc = GridComplex::get().unwrap();
        let cx = gc.cx.clone();
        let spec = GridSpec::cube(1.0, 1.0, 11).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(4);
        for h in 0..4 {
            let coeffs: Vec<Poly> = (0..cx.dim(h))
                .map(|_| {
                    let p = Poly::random(&mut rng, 3, 2);
                    Poly::random(&mut rng, 3, 1).mul(&p)
                })
                .map(|p| {
                    // drop monomials with an exponent above 2
                    let mut q = Poly::zero(3);
                    for (e, c) in p.terms() {
                        if e.iter().all(|&k| k <= 2) {
                            q.add_assign(&Poly::monomial(e, c.clone()));
                        }
                    }
                    q
                })
                .collect();
            let a = RuminForm::new(1, h, coeffs);
            let exact = RuminForm::new(1, h, cx.laplacian(h).unwrap().apply(&a.coeffs));
            let u = discretize(&cx, &a, &spec).flatten();
            let want = discretize(&cx, &exact, &spec).flatten();
            let got = gc.compact[h].on(&spec).apply(&u);
            let mask = spec.interior_mask(2);
            let m = spec.len();
            for c in 0..gc.dim(h) {
                for idx in 0..m {
                    if mask[idx] {
                        let (g, w) = (got[c * m + idx], want[c * m + idx]);
                        assert!((g - w).abs() < 1e-8 * (1.0 + w.abs()), "h={h} comp {c}: {g} vs {w}");
                    }
                }
            }
        }
    }
}
