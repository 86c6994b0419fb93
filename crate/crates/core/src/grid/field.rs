use rayon::prelude::*;

use super::spec::GridSpec;
use crate::error::{Error, Result};
use crate::heisenberg::Poly;
use crate::rumin::{BumpPoly, RuminComplex, RuminForm};

/// Real samples on a [`GridSpec`] lattice, row-major in `(x, y, t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub spec: GridSpec,
    pub data: Vec<f64>,
}

impl GridField {
    pub fn zeros(spec: &GridSpec) -> Self {
        GridField { spec: spec.clone(), data: vec![0.0; spec.len()] }
    }

    pub fn constant(spec: &GridSpec, c: f64) -> Self {
        GridField { spec: spec.clone(), data: vec![c; spec.len()] }
    }

    pub fn from_data(spec: &GridSpec, data: Vec<f64>) -> Result<Self> {
        if data.len() != spec.len() {
            return Err(Error::InvalidGrid(format!("expected {} samples, got {}", spec.len(), data.len())));
        }
        Ok(GridField { spec: spec.clone(), data })
    }

    pub fn from_fn<F: Fn([f64; 3]) -> f64 + Sync>(spec: &GridSpec, f: F) -> Self {
        let data = (0..spec.len()).into_par_iter().map(|i| f(spec.coords(i))).collect();
        GridField { spec: spec.clone(), data }
    }

    pub fn from_poly(spec: &GridSpec, p: &Poly) -> Self {
        let e = p.evaluator();
        Self::from_fn(spec, |c| e.eval(&c))
    }

    pub fn from_bump(spec: &GridSpec, b: &BumpPoly) -> Self {
        let e = b.evaluator();
        Self::from_fn(spec, |c| e.eval(&c))
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> Self {
        GridField { spec: self.spec.clone(), data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn axpy(&mut self, a: f64, x: &GridField) {
        for (y, v) in self.data.iter_mut().zip(&x.data) {
            *y += a * v;
        }
    }

    pub fn add(&self, other: &GridField) -> Self {
        let mut r = self.clone();
        r.axpy(1.0, other);
        r
    }

    pub fn sub(&self, other: &GridField) -> Self {
        let mut r = self.clone();
        r.axpy(-1.0, other);
        r
    }

    /// Riemann sum `Σ f · h_x h_y h_t`.
    pub fn integrate(&self) -> f64 {
        self.data.iter().sum::<f64>() * self.spec.cell_volume()
    }

    /// Trilinear interpolation; zero outside the box.
    pub fn interpolate(&self, p: [f64; 3]) -> f64 {
        let h = self.spec.steps();
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..3 {
            let u = (p[a] + self.spec.half_widths[a]) / h[a];
            let last = (self.spec.points[a] - 1) as f64;
            if !(u >= 0.0 && u <= last) {
                return 0.0;
            }
            let i = (u.floor() as usize).min(self.spec.points[a] - 2);
            base[a] = i;
            frac[a] = u - i as f64;
        }
        let st = self.spec.strides();
        let i0 = base[0] * st[0] + base[1] * st[1] + base[2];
        let mut acc = 0.0;
        for c in 0..8usize {
            let (dx, dy, dt) = (c >> 2 & 1, c >> 1 & 1, c & 1);
            let w = (if dx == 1 { frac[0] } else { 1.0 - frac[0] })
                * (if dy == 1 { frac[1] } else { 1.0 - frac[1] })
                * (if dt == 1 { frac[2] } else { 1.0 - frac[2] });
            if w != 0.0 {
                acc += w * self.data[i0 + dx * st[0] + dy * st[1] + dt];
            }
        }
        acc
    }

    /// Zero the samples outside a mask.
    pub fn restrict(&self, mask: &[bool]) -> Self {
        GridField { spec: self.spec.clone(), data: self.data.iter().zip(mask).map(|(v, &m)| if m { *v } else { 0.0 }).collect() }
    }
}

/// Rumin form with grid coefficients in orthonormal coordinates of `E₀ʰ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridRuminForm {
    pub n: usize,
    pub degree: usize,
    pub coeffs: Vec<GridField>,
}

impl GridRuminForm {
    pub fn zeros(spec: &GridSpec, degree: usize, dim: usize) -> Self {
        GridRuminForm { n: spec.n, degree, coeffs: vec![GridField::zeros(spec); dim] }
    }

    pub fn new(degree: usize, coeffs: Vec<GridField>) -> Result<Self> {
        if let Some(first) = coeffs.first() {
            if coeffs.iter().any(|c| c.spec != first.spec) {
                return Err(Error::InvalidGrid("coefficients live on different grids".into()));
            }
        }
        Ok(GridRuminForm { n: 1, degree, coeffs })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.coeffs[0].spec
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scale(&self, c: f64) -> Self {
        GridRuminForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        GridRuminForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GridRuminForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn restrict(&self, mask: &[bool]) -> Self {
        GridRuminForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(|f| f.restrict(mask)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, f| m.max(f.max_abs()))
    }

    /// Concatenated samples, component-major.
    pub fn flatten(&self) -> Vec<f64> {
        self.coeffs.iter().flat_map(|f| f.data.iter().cloned()).collect()
    }

    pub fn from_flat(spec: &GridSpec, degree: usize, data: &[f64]) -> Self {
        let m = spec.len();
        let coeffs = data.chunks(m).map(|c| GridField { spec: spec.clone(), data: c.to_vec() }).collect();
        GridRuminForm { n: spec.n, degree, coeffs }
    }
}

/// Sample a symbolic Rumin form; coefficients are rescaled to orthonormal coordinates.
pub fn discretize(cx: &RuminComplex, a: &RuminForm<Poly>, spec: &GridSpec) -> GridRuminForm {
    let scales = cx.basis(a.degree).orthonormal_scales();
    let coeffs = a.coeffs.iter().zip(&scales).map(|(p, s)| GridField::from_poly(spec, p).scale(*s)).collect();
    GridRuminForm { n: spec.n, degree: a.degree, coeffs }
}

pub fn discretize_bump(cx: &RuminComplex, a: &RuminForm<BumpPoly>, spec: &GridSpec) -> GridRuminForm {
    let scales = cx.basis(a.degree).orthonormal_scales();
    let coeffs = a.coeffs.iter().zip(&scales).map(|(p, s)| GridField::from_bump(spec, p).scale(*s)).collect();
    GridRuminForm { n: spec.n, degree: a.degree, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_exact_on_trilinear() {
        let s = GridSpec::cube(1.0, 1.0, 9).unwrap();
        let f = GridField::from_fn(&s, |p| 1.0 + 2.0 * p[0] - p[1] + 0.5 * p[0] * p[2]);
        let q = [0.13, -0.41, 0.77];
        assert!((f.interpolate(q) - (1.0 + 0.26 + 0.41 + 0.5 * 0.13 * 0.77)).abs() < 1e-12);
        assert_eq!(f.interpolate([1.5, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn odd_samples() {
        let s = GridSpec::cube(1.0, 1.0, 7).unwrap();
        let f = GridField::from_poly(&s, &Poly::var(3, 0));
        for idx in 0..s.len() {
            let m = s.multi_index(idx);
            let mirror = s.index(6 - m[0], m[1], m[2]);
            assert_eq!(f.data[idx], -f.data[mirror]);
        }
    }
}
