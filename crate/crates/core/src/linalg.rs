//! Small dense matrices over the rationals: row reduction, kernels, pseudo-inverses.

use num_traits::{One, Zero};

use crate::heisenberg::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.data[i * m.cols + j] = c[i].clone();
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut r = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        r.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                let mut s = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        s += a * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &RatMatrix) -> Self {
        let mut r = self.clone();
        for (a, b) in r.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        r
    }

    pub fn add(&self, other: &RatMatrix) -> Self {
        let mut r = self.clone();
        for (a, b) in r.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else { continue };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = Rational::one() / m.get(row, col).clone();
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for j in 0..m.cols {
                    let v = m.get(r, j) - &f * m.get(row, j);
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Moore–Penrose pseudo-inverse via a rank factorization `A = F G`.
    pub fn pseudo_inverse(&self) -> RatMatrix {
        let (r, pivots) = self.rref();
        let k = pivots.len();
        if k == 0 {
            return Self::zeros(self.cols, self.rows);
        }
        let f = RatMatrix::from_columns(self.rows, &pivots.iter().map(|&p| self.column(p)).collect::<Vec<_>>());
        let mut g = Self::zeros(k, self.cols);
        for i in 0..k {
            for j in 0..self.cols {
                g.set(i, j, r.get(i, j).clone());
            }
        }
        let ft = f.transpose();
        let gt = g.transpose();
        let ftf_inv = ft.mul(&f).inverse().expect("full column rank");
        let ggt_inv = g.mul(&gt).inverse().expect("full row rank");
        gt.mul(&ggt_inv).mul(&ftf_inv).mul(&ft)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Exact Gram–Schmidt without normalization; zero vectors are dropped.
pub fn gram_schmidt(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut norms: Vec<Rational> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (u, q) in out.iter().zip(&norms) {
            let c = dot(&w, u) / q;
            if c.is_zero() {
                continue;
            }
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= &c * ui;
            }
        }
        let q = dot(&w, &w);
        if !q.is_zero() {
            out.push(w);
            norms.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::poly::rat;

    fn m(rows: usize, cols: usize, v: &[i64]) -> RatMatrix {
        RatMatrix { rows, cols, data: v.iter().map(|&x| rat(x, 1)).collect() }
    }

    #[test]
    fn pseudo_inverse_axioms() {
        let a = m(3, 4, &[1, 2, 0, 1, 2, 4, 0, 2, 0, 1, 1, 0]);
        let p = a.pseudo_inverse();
        assert_eq!(a.mul(&p).mul(&a), a);
        assert_eq!(p.mul(&a).mul(&p), p);
        let ap = a.mul(&p);
        assert_eq!(ap.transpose(), ap);
        let pa = p.mul(&a);
        assert_eq!(pa.transpose(), pa);
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(2, 3, &[1, 1, 0, 0, 1, 1]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn gram_schmidt_orthogonal() {
        let vs: Vec<Vec<Rational>> = vec![vec![rat(1, 1), rat(1, 1), rat(0, 1)], vec![rat(1, 1), rat(0, 1), rat(1, 1)], vec![rat(2, 1), rat(1, 1), rat(1, 1)]];
        let o = gram_schmidt(&vs);
        assert_eq!(o.len(), 2);
        assert!(dot(&o[0], &o[1]).is_zero());
    }
}
