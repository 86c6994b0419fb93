use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform lattice over the box `[-a_x,a_x]×[-a_y,a_y]×[-a_t,a_t]` in ℍ¹, centered at `e`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub half_widths: [f64; 3],
    pub points: [usize; 3],
}

impl GridSpec {
    pub fn new(half_widths: [f64; 3], points: [usize; 3]) -> Result<Self> {
        let s = GridSpec { n: 1, half_widths, points };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n != 1 {
            return Err(Error::InvalidGrid(format!("lattices are three-dimensional (n = 1), got n = {}", self.n)));
        }
        for a in 0..3 {
            if self.points[a] < 5 || self.points[a] % 2 == 0 {
                return Err(Error::InvalidGrid(format!("axis {a}: need an odd number of points ≥ 5, got {}", self.points[a])));
            }
            if !(self.half_widths[a] > 0.0) || !self.half_widths[a].is_finite() {
                return Err(Error::InvalidGrid(format!("axis {a}: half-width must be positive")));
            }
        }
        Ok(())
    }

    /// Same number of points on each axis.
    pub fn cube(a_x: f64, a_t: f64, points: usize) -> Result<Self> {
        Self::new([a_x, a_x, a_t], [points; 3])
    }

    /// `h_t = h_x²`, matching the weight of `t` under dilations.
    pub fn parabolic(a_x: f64, points: usize, t_points: usize) -> Result<Self> {
        let hx = 2.0 * a_x / (points as f64 - 1.0);
        let a_t = hx * hx * (t_points as f64 - 1.0) / 2.0;
        Self::new([a_x, a_x, a_t], [points, points, t_points])
    }

    /// Box `|x|,|y| ≤ 2`, `|t| ≤ 1`, 65 points per axis.
    pub fn default_n1() -> Self {
        Self::cube(2.0, 1.0, 65).expect("valid default grid")
    }

    pub fn steps(&self) -> [f64; 3] {
        let mut h = [0.0; 3];
        for a in 0..3 {
            h[a] = 2.0 * self.half_widths[a] / (self.points[a] as f64 - 1.0);
        }
        h
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Strides of the row-major `(x, y, t)` layout.
    pub fn strides(&self) -> [usize; 3] {
        [self.points[1] * self.points[2], self.points[2], 1]
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.points[1] + j) * self.points[2] + k
    }

    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.points[2];
        let r = idx / self.points[2];
        [r / self.points[1], r % self.points[1], k]
    }

    /// Measured from the center so that the lattice is exactly symmetric.
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        (i as f64 - (self.points[axis] - 1) as f64 / 2.0) * self.steps()[axis]
    }

    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let m = self.multi_index(idx);
        [self.coord(0, m[0]), self.coord(1, m[1]), self.coord(2, m[2])]
    }

    pub fn axis_coords(&self, axis: usize) -> Vec<f64> {
        (0..self.points[axis]).map(|i| self.coord(axis, i)).collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.steps().iter().product()
    }

    pub fn max_step(&self) -> f64 {
        self.steps().iter().cloned().fold(0.0, f64::max)
    }

    /// Halved steps on the same box.
    pub fn refined(&self) -> Self {
        GridSpec { n: self.n, half_widths: self.half_widths, points: self.points.map(|p| 2 * p - 1) }
    }

    /// Doubled steps on the same box, when every axis allows it.
    pub fn coarsened(&self) -> Option<Self> {
        if self.points.iter().all(|&p| (p - 1) % 2 == 0 && p >= 9) {
            Some(GridSpec { n: self.n, half_widths: self.half_widths, points: self.points.map(|p| (p + 1) / 2) })
        } else {
            None
        }
    }

    /// Lattice points at least `margin` cells away from every face.
    pub fn interior_mask(&self, margin: usize) -> Vec<bool> {
        (0..self.len())
            .map(|idx| {
                let m = self.multi_index(idx);
                (0..3).all(|a| m[a] >= margin && m[a] + margin < self.points[a])
            })
            .collect()
    }

    /// Points of the closed Korányi ball `ρ(p) ≤ r`.
    pub fn ball_mask(&self, r: f64) -> Vec<bool> {
        (0..self.len()).map(|idx| crate::heisenberg::group::koranyi_f64(self.coords(idx)) <= r).collect()
    }

    /// Whether the Korányi ball of radius `r` fits in the box.
    pub fn contains_ball(&self, r: f64) -> bool {
        self.half_widths[0] >= r && self.half_widths[1] >= r && self.half_widths[2] >= r * r / 4.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trip() {
        let s = GridSpec::new([1.0, 2.0, 0.5], [5, 7, 9]).unwrap();
        for idx in [0, 17, s.len() - 1] {
            let m = s.multi_index(idx);
            assert_eq!(s.index(m[0], m[1], m[2]), idx);
        }
        assert_eq!(s.coords(s.index(2, 3, 4)), [0.0, 0.0, 0.0]);
        assert!(GridSpec::cube(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn refine_and_coarsen() {
        let s = GridSpec::default_n1();
        assert_eq!(s.refined().points, [129; 3]);
        assert_eq!(s.coarsened().unwrap().points, [33; 3]);
        let p = GridSpec::parabolic(1.0, 17, 9).unwrap();
        let h = p.steps();
        assert!((h[2] - h[0] * h[0]).abs() < 1e-15);
    }
}
