//! Geometric V-cycle for the discrete Rumin Laplacians, used as a CG preconditioner.
//!
//! The `t`-coupling of the Laplacians grows like `(x² + y²)` (squared at fourth order), so
//! point smoothers stall away from the axis. Smoothing is therefore a Chebyshev polynomial in
//! the operator preconditioned by exact solves along `t`-lines. Coarse levels double every
//! step and carry the rediscretized operator. All pieces are symmetric, so the cycle is a
//! valid CG preconditioner.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::krylov::{dot, pcg};
use crate::grid::{CompactOperator, CompactStencil, GridSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultigridOptions {
    pub smoothing_degree: usize,
    /// Smoothing targets the upper part `[λ_max/ratio, λ_max]` of the spectrum.
    pub eigen_ratio: f64,
    pub power_iterations: usize,
    /// Stop coarsening once the horizontal axes have at most this many points.
    pub coarsest_points: usize,
    pub coarse_tol: f64,
}

impl Default for MultigridOptions {
    fn default() -> Self {
        MultigridOptions { smoothing_degree: 6, eigen_ratio: 30.0, power_iterations: 15, coarsest_points: 9, coarse_tol: 1e-8 }
    }
}

/// Lanes of the batched line solves.
const LANES: usize = 8;

/// Cholesky factors of the `t`-line blocks, one per `(x,y)` column.
///
/// Unknowns of a column are interleaved as `k·comps + c`, which keeps the block banded.
/// Columns are packed in batches of [`LANES`] so the substitutions vectorize across columns.
struct LineSolver {
    comps: usize,
    nt: usize,
    band: usize,
    cols: usize,
    /// Per batch, entry `(r·(band+1) + q)·LANES + lane` holds `L[r][r−q]`, with `1/L[r][r]` at `q = 0`.
    batches: Vec<Vec<f64>>,
}

impl LineSolver {
    fn new(op: &CompactStencil) -> Self {
        let comps = op.comps;
        let [nx, ny, nt] = op.spec.points;
        let mut reach = 0usize;
        let mut lines = Vec::new();
        for i in 0..comps {
            for j in 0..comps {
                for (d, w) in op.line_weights(i, j) {
                    reach = reach.max(d.unsigned_abs());
                    lines.push((i, j, d, w));
                }
            }
        }
        let band = reach * comps + comps - 1;
        let n = comps * nt;
        let w = band + 1;
        let cols = nx * ny;
        let factor = |col: usize| -> Vec<f64> {
            let mut a = vec![0.0; n * w];
            if col >= cols {
                (0..n).for_each(|r| a[r * w] = 1.0);
                return a;
            }
            for &(i, j, d, wt) in &lines {
                let c = wt[col];
                if c == 0.0 {
                    continue;
                }
                for k in 0..nt {
                    let k2 = k as isize + d;
                    if k2 < 0 || k2 >= nt as isize {
                        continue;
                    }
                    let r = k * comps + i;
                    let s = k2 as usize * comps + j;
                    if s <= r {
                        a[r * w + (r - s)] += c;
                    }
                }
            }
            cholesky_band(&mut a, n, band);
            a
        };
        let batches = (0..cols.div_ceil(LANES))
            .into_par_iter()
            .map(|b| {
                let mut packed = vec![0.0; n * w * LANES];
                for lane in 0..LANES {
                    let f = factor(b * LANES + lane);
                    for (e, v) in f.iter().enumerate() {
                        packed[e * LANES + lane] = if e % w == 0 { 1.0 / v } else { *v };
                    }
                }
                packed
            })
            .collect();
        LineSolver { comps, nt, band, cols, batches }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (comps, nt, band) = (self.comps, self.nt, self.band);
        let m = rhs.len() / comps;
        let n = comps * nt;
        let w = band + 1;
        let solved: Vec<Vec<f64>> = self
            .batches
            .par_iter()
            .enumerate()
            .map(|(b, f)| {
                let mut v = vec![0.0; n * LANES];
                for lane in 0..LANES {
                    let col = b * LANES + lane;
                    if col >= self.cols {
                        continue;
                    }
                    for c in 0..comps {
                        let src = &rhs[c * m + col * nt..c * m + (col + 1) * nt];
                        for (k, x) in src.iter().enumerate() {
                            v[(k * comps + c) * LANES + lane] = *x;
                        }
                    }
                }
                for r in 0..n {
                    let mut acc = [0.0; LANES];
                    acc.copy_from_slice(&v[r * LANES..(r + 1) * LANES]);
                    for q in 1..=band.min(r) {
                        let l = &f[(r * w + q) * LANES..(r * w + q + 1) * LANES];
                        let x = &v[(r - q) * LANES..(r - q + 1) * LANES];
                        for i in 0..LANES {
                            acc[i] -= l[i] * x[i];
                        }
                    }
                    let d = &f[r * w * LANES..(r * w + 1) * LANES];
                    for i in 0..LANES {
                        v[r * LANES + i] = acc[i] * d[i];
                    }
                }
                for r in (0..n).rev() {
                    let mut acc = [0.0; LANES];
                    acc.copy_from_slice(&v[r * LANES..(r + 1) * LANES]);
                    for p in 1..=band.min(n - 1 - r) {
                        let l = &f[((r + p) * w + p) * LANES..((r + p) * w + p + 1) * LANES];
                        let x = &v[(r + p) * LANES..(r + p + 1) * LANES];
                        for i in 0..LANES {
                            acc[i] -= l[i] * x[i];
                        }
                    }
                    let d = &f[r * w * LANES..(r * w + 1) * LANES];
                    for i in 0..LANES {
                        v[r * LANES + i] = acc[i] * d[i];
                    }
                }
                v
            })
            .collect();
        let mut out = vec![0.0; rhs.len()];
        for (b, v) in solved.iter().enumerate() {
            for lane in 0..LANES {
                let col = b * LANES + lane;
                if col >= self.cols {
                    continue;
                }
                for c in 0..comps {
                    let dst = &mut out[c * m + col * nt..c * m + (col + 1) * nt];
                    for (k, x) in dst.iter_mut().enumerate() {
                        *x = v[(k * comps + c) * LANES + lane];
                    }
                }
            }
        }
        out
    }
}

/// In-place banded Cholesky `A = L Lᵀ` on lower-band storage; nonpositive pivots are clamped.
fn cholesky_band(a: &mut [f64], n: usize, band: usize) {
    let w = band + 1;
    for r in 0..n {
        for q in (0..=band.min(r)).rev() {
            let s = r - q;
            let mut sum = a[r * w + q];
            for p in 1..=band {
                if q + p > band || p > s {
                    break;
                }
                // L[r][s−p] · L[s][s−p]
                sum -= a[r * w + q + p] * a[s * w + p];
            }
            if q == 0 {
                a[r * w] = if sum > 0.0 { sum.sqrt() } else { 1e-300_f64.sqrt() };
            } else {
                a[r * w + q] = sum / a[s * w];
            }
        }
    }
}

struct Level {
    op: CompactStencil,
    lines: LineSolver,
    /// Largest eigenvalue of the line-preconditioned operator.
    lmax: f64,
}

pub struct Multigrid {
    levels: Vec<Level>,
    opts: MultigridOptions,
}

pub(crate) fn pseudo_random(i: usize) -> f64 {
    let mut z = (i as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
}

impl Multigrid {
    pub fn new(op: &CompactOperator, spec: &GridSpec, opts: MultigridOptions) -> Self {
        let mut specs = vec![spec.clone()];
        loop {
            let last = specs.last().unwrap();
            if last.points[0].max(last.points[1]) <= opts.coarsest_points {
                break;
            }
            match last.coarsened() {
                Some(c) => specs.push(c),
                None => break,
            }
        }
        let levels = specs
            .into_iter()
            .map(|s| {
                let st = op.on(&s);
                let lines = LineSolver::new(&st);
                let mut level = Level { op: st, lines, lmax: 0.0 };
                level.lmax = estimate_lmax(&level, opts.power_iterations);
                level
            })
            .collect();
        Multigrid { levels, opts }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn apply_level(&self, l: usize, v: &[f64]) -> Vec<f64> {
        self.levels[l].op.apply(v)
    }

    fn chebyshev(&self, l: usize, x: &mut [f64], b: &[f64]) {
        let level = &self.levels[l];
        let lmax = level.lmax;
        let lmin = lmax / self.opts.eigen_ratio;
        let theta = 0.5 * (lmax + lmin);
        let delta = 0.5 * (lmax - lmin);
        let sigma = theta / delta;
        let mut rho = 1.0 / sigma;
        let ax = level.op.apply(x);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let mut d: Vec<f64> = level.lines.solve(&r).iter().map(|v| v / theta).collect();
        x.iter_mut().zip(&d).for_each(|(x, d)| *x += d);
        for _ in 1..self.opts.smoothing_degree {
            let ad = level.op.apply(&d);
            r.iter_mut().zip(&ad).for_each(|(r, a)| *r -= a);
            let z = level.lines.solve(&r);
            let rho_new = 1.0 / (2.0 * sigma - rho);
            for i in 0..d.len() {
                d[i] = rho_new * rho * d[i] + 2.0 * rho_new / delta * z[i];
            }
            rho = rho_new;
            x.iter_mut().zip(&d).for_each(|(x, d)| *x += d);
        }
    }

    /// Approximate `A⁻¹ b` by one V-cycle from zero.
    pub fn vcycle(&self, b: &[f64]) -> Vec<f64> {
        self.cycle(0, b)
    }

    fn cycle(&self, l: usize, b: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; b.len()];
        if l + 1 == self.levels.len() {
            let level = &self.levels[l];
            pcg(|v| level.op.apply(v), |r| level.lines.solve(r), b, &mut x, self.opts.coarse_tol, 1000);
            return x;
        }
        self.chebyshev(l, &mut x, b);
        let ax = self.apply_level(l, &x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let (fine, coarse) = (&self.levels[l].op.spec, &self.levels[l + 1].op.spec);
        let rc = per_component(&r, fine.len(), coarse.len(), |src, dst| restrict(fine, coarse, src, dst));
        let ec = self.cycle(l + 1, &rc);
        let ef = per_component(&ec, coarse.len(), fine.len(), |src, dst| prolong(coarse, fine, src, dst));
        x.iter_mut().zip(&ef).for_each(|(x, e)| *x += e);
        self.chebyshev(l, &mut x, b);
        x
    }
}

fn estimate_lmax(level: &Level, iterations: usize) -> f64 {
    let m = level.op.spec.len() * level.op.comps;
    let mut v: Vec<f64> = (0..m).map(pseudo_random).collect();
    let mut lam = 0.0;
    for _ in 0..iterations {
        let nv = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= nv);
        let w = level.lines.solve(&level.op.apply(&v));
        lam = dot(&v, &w);
        v = w;
    }
    1.1 * lam
}

fn per_component(v: &[f64], m_in: usize, m_out: usize, f: impl Fn(&[f64], &mut [f64])) -> Vec<f64> {
    let comps = v.len() / m_in;
    let mut out = vec![0.0; comps * m_out];
    for c in 0..comps {
        f(&v[c * m_in..(c + 1) * m_in], &mut out[c * m_out..(c + 1) * m_out]);
    }
    out
}

/// Cubic interpolation weights from coarse nodes for fine node `i`; nodes outside `0..m` read as zero.
///
/// Linear transfers are too low-order for the fourth-order Laplacians (the sum of the
/// interpolation and restriction orders must exceed the operator order).
fn stencil(i: usize, m: usize) -> Vec<(usize, f64)> {
    if i % 2 == 0 {
        return vec![(i / 2, 1.0)];
    }
    let a = (i / 2) as isize;
    [(a - 1, -1.0 / 16.0), (a, 9.0 / 16.0), (a + 1, 9.0 / 16.0), (a + 2, -1.0 / 16.0)]
        .into_iter()
        .filter(|(c, _)| *c >= 0 && (*c as usize) < m)
        .map(|(c, w)| (c as usize, w))
        .collect()
}

/// Per-axis interpolation taps; an axis with equal point counts is copied.
fn stencils(fine: usize, coarse: usize) -> Vec<Vec<(usize, f64)>> {
    if fine == coarse {
        return (0..fine).map(|i| vec![(i, 1.0)]).collect();
    }
    (0..fine).map(|i| stencil(i, coarse)).collect()
}

fn invert(s: Vec<Vec<(usize, f64)>>, m: usize) -> Vec<Vec<(usize, f64)>> {
    let mut out = vec![Vec::new(); m];
    for (i, taps) in s.iter().enumerate() {
        for &(a, w) in taps {
            out[a].push((i, w));
        }
    }
    out
}

/// `out[.., i, ..] = Σ w · src[.., j, ..]` along one axis of a row-major `(x, y, t)` array.
fn axis_pass(src: &[f64], dims: [usize; 3], axis: usize, taps: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let (n_in, n_out) = (dims[axis], taps.len());
    let mut out = vec![0.0; outer * n_out * inner];
    out.par_chunks_mut(n_out * inner).enumerate().for_each(|(o, block)| {
        let base = o * n_in * inner;
        for (i, row) in block.chunks_mut(inner).enumerate() {
            for &(j, w) in &taps[i] {
                let s = &src[base + j * inner..base + (j + 1) * inner];
                row.iter_mut().zip(s).for_each(|(r, v)| *r += w * v);
            }
        }
    });
    out
}

fn separable(src: &[f64], from: &GridSpec, taps: [Vec<Vec<(usize, f64)>>; 3], dst: &mut [f64]) {
    let mut dims = from.points;
    let mut cur: Option<Vec<f64>> = None;
    for (axis, t) in taps.iter().enumerate() {
        if t.len() == dims[axis] && t.iter().enumerate().all(|(i, row)| row.len() == 1 && row[0] == (i, 1.0)) {
            continue;
        }
        let next = axis_pass(cur.as_deref().unwrap_or(src), dims, axis, t);
        dims[axis] = t.len();
        cur = Some(next);
    }
    match cur {
        Some(v) => dst.copy_from_slice(&v),
        None => dst.copy_from_slice(src),
    }
}

/// Tensor-product cubic interpolation along the coarsened axes.
pub fn prolong(coarse: &GridSpec, fine: &GridSpec, src: &[f64], dst: &mut [f64]) {
    let taps = [0, 1, 2].map(|a| stencils(fine.points[a], coarse.points[a]));
    separable(src, coarse, taps, dst);
}

/// Transpose of [`prolong`] divided by the ratio of lattice sizes.
pub fn restrict(fine: &GridSpec, coarse: &GridSpec, src: &[f64], dst: &mut [f64]) {
    let taps = [0, 1, 2].map(|a| {
        let (f, c) = (fine.points[a], coarse.points[a]);
        let scale = if f == c { 1.0 } else { 0.5 };
        invert(stencils(f, c), c).into_iter().map(|row| row.into_iter().map(|(i, w)| (i, w * scale)).collect()).collect()
    });
    separable(src, fine, taps, dst);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_band(l: &[f64], n: usize, band: usize, v: &mut [f64]) {
        let w = band + 1;
        for r in 0..n {
            for q in 1..=band.min(r) {
                v[r] -= l[r * w + q] * v[r - q];
            }
            v[r] /= l[r * w];
        }
        for r in (0..n).rev() {
            for p in 1..=band.min(n - 1 - r) {
                v[r] -= l[(r + p) * w + p] * v[r + p];
            }
            v[r] /= l[r * w];
        }
    }

    #[test]
    fn restriction_is_scaled_transpose() {
        let f = GridSpec::cube(1.0, 1.0, 9).unwrap();
        let c = f.coarsened().unwrap();
        let u: Vec<f64> = (0..c.len()).map(pseudo_random).collect();
        let v: Vec<f64> = (0..f.len()).map(|i| pseudo_random(i + 1000)).collect();
        let mut pu = vec![0.0; f.len()];
        prolong(&c, &f, &u, &mut pu);
        let mut rv = vec![0.0; c.len()];
        restrict(&f, &c, &v, &mut rv);
        assert!((dot(&pu, &v) / 8.0 - dot(&u, &rv)).abs() < 1e-12);
    }

    #[test]
    fn prolongation_reproduces_cubics() {
        let f = GridSpec::cube(1.0, 1.0, 17).unwrap();
        let c = f.coarsened().unwrap();
        let p = |x: [f64; 3]| x[0].powi(3) - 2.0 * x[0] * x[1] * x[1] + x[2];
        let u: Vec<f64> = (0..c.len()).map(|i| p(c.coords(i))).collect();
        let mut pu = vec![0.0; f.len()];
        prolong(&c, &f, &u, &mut pu);
        for idx in 0..f.len() {
            let m = f.multi_index(idx);
            if m.iter().all(|i| (2..15).contains(i)) {
                assert!((pu[idx] - p(f.coords(idx))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn banded_cholesky_solves() {
        // pentadiagonal SPD: 6 on the diagonal, −2 and 0.5 off it
        let (n, band) = (12, 2);
        let mut a = vec![0.0; n * (band + 1)];
        for r in 0..n {
            a[r * 3] = 6.0;
            if r >= 1 {
                a[r * 3 + 1] = -2.0;
            }
            if r >= 2 {
                a[r * 3 + 2] = 0.5;
            }
        }
        let dense = |x: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|r| {
                    let mut s = 6.0 * x[r];
                    for (q, c) in [(1, -2.0), (2, 0.5)] {
                        if r >= q {
                            s += c * x[r - q];
                        }
                        if r + q < n {
                            s += c * x[r + q];
                        }
                    }
                    s
                })
                .collect()
        };
        let b: Vec<f64> = (0..n).map(|i| pseudo_random(i)).collect();
        cholesky_band(&mut a, n, band);
        let mut x = b.clone();
        solve_band(&a, n, band, &mut x);
        let ax = dense(&x);
        assert!(ax.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-12));
    }
}
