//! Commutators of left-invariant operators with multiplication by polynomials.

use std::collections::BTreeMap;

use super::complex::RuminComplex;
use super::operator::{LeftInvariantOperator, Word};
use crate::error::Result;
use crate::heisenberg::fields::apply_word;
use crate::heisenberg::poly::rat_int;
use crate::heisenberg::Poly;

/// Matrix of operators `Σ_w p_w(x) W^w` with polynomial coefficients on the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarOperator {
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BTreeMap<Word, Poly>>,
}

fn binom(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

/// `[W^K, u] = Σ_{0≠J≤K} (K choose J) (W^J u) W^{K−J}` for an ordered word `K`.
fn word_commutator(n: usize, w: &Word, u: &Poly) -> Vec<(Word, Poly)> {
    let mut exps = vec![0u32; 2 * n + 1];
    for &l in w.iter() {
        exps[l as usize] += 1;
    }
    let mut out = Vec::new();
    let mut j = vec![0u32; exps.len()];
    loop {
        // advance the mixed-radix counter j ≤ exps
        let mut i = 0;
        loop {
            if i == j.len() {
                return out;
            }
            if j[i] < exps[i] {
                j[i] += 1;
                break;
            }
            j[i] = 0;
            i += 1;
        }
        let mut c: i64 = 1;
        let mut jw: Word = Word::new();
        let mut rest: Word = Word::new();
        for (l, (&ji, &ki)) in j.iter().zip(&exps).enumerate() {
            c *= binom(ki, ji);
            for _ in 0..ji {
                jw.push(l as u8);
            }
            for _ in ji..ki {
                rest.push(l as u8);
            }
        }
        let coef = apply_word(n, &jw, u).scale(&rat_int(c));
        if !coef.is_zero() {
            out.push((rest, coef));
        }
    }
}

impl VarOperator {
    pub fn zero(n: usize, rows: usize, cols: usize) -> Self {
        VarOperator { n, rows, cols, entries: vec![BTreeMap::new(); rows * cols] }
    }

    fn add_term(&mut self, i: usize, j: usize, w: Word, p: &Poly) {
        let e = &mut self.entries[i * self.cols + j];
        match e.get_mut(&w) {
            Some(v) => {
                v.add_assign(p);
                if v.is_zero() {
                    e.remove(&w);
                }
            }
            None => {
                if !p.is_zero() {
                    e.insert(w, p.clone());
                }
            }
        }
    }

    /// `[op, ζ]` for a constant-coefficient operator.
    pub fn commutator_of(op: &LeftInvariantOperator, zeta: &Poly) -> Self {
        let mut r = Self::zero(op.n, op.rows, op.cols);
        for i in 0..op.rows {
            for j in 0..op.cols {
                for (w, c) in &op.get(i, j).terms {
                    for (rest, p) in word_commutator(op.n, w, zeta) {
                        r.add_term(i, j, rest, &p.scale(c));
                    }
                }
            }
        }
        r
    }

    /// `[self, u]`: coefficients commute with `u`, so only the words contribute.
    pub fn commutator(&self, u: &Poly) -> Self {
        let mut r = Self::zero(self.n, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (w, p) in &self.entries[i * self.cols + j] {
                    for (rest, q) in word_commutator(self.n, w, u) {
                        r.add_term(i, j, rest, &p.mul(&q));
                    }
                }
            }
        }
        r
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        let nv = 2 * self.n + 1;
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(nv);
                for (j, f) in v.iter().enumerate() {
                    for (w, p) in &self.entries[i * self.cols + j] {
                        acc.add_assign(&p.mul(&apply_word(self.n, w, f)));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn order(&self) -> usize {
        self.entries.iter().flat_map(|e| e.keys().map(|w| w.len())).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_empty())
    }

    /// Keep the words of a given length.
    pub fn part_of_order(&self, k: usize) -> Self {
        let mut r = self.clone();
        for e in r.entries.iter_mut() {
            e.retain(|w, _| w.len() == k);
        }
        r
    }
}

/// `[d_c, ζ] = P₁(Wζ) + P₀(W²ζ)`: `p0` collects the order-zero part, `p1` the rest.
#[derive(Clone, Debug)]
pub struct LeibnizDecomposition {
    pub degree: usize,
    pub p0: VarOperator,
    pub p1: VarOperator,
}

pub fn leibniz_decompose(cx: &RuminComplex, zeta: &Poly, h: usize) -> Result<LeibnizDecomposition> {
    if h >= cx.top() {
        return Err(crate::error::Error::DegreeOutOfRange { degree: h, max: cx.top() - 1 });
    }
    let comm = VarOperator::commutator_of(&cx.dc[h], zeta);
    let p0 = comm.part_of_order(0);
    let mut p1 = comm.clone();
    for e in p1.entries.iter_mut() {
        e.retain(|w, _| !w.is_empty());
    }
    Ok(LeibnizDecomposition { degree: h, p0, p1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::poly::rat;

    #[test]
    fn constant_commutes() {
        let cx = RuminComplex::get(1).unwrap();
        for h in 0..3 {
            let d = leibniz_decompose(&cx, &Poly::constant(3, rat(5, 2)), h).unwrap();
            assert!(d.p0.is_zero() && d.p1.is_zero());
        }
    }

    #[test]
    fn middle_degree_with_t() {
        let cx = RuminComplex::get(1).unwrap();
        let t = Poly::parse(3, "t").unwrap();
        let d = leibniz_decompose(&cx, &t, 1).unwrap();
        assert_eq!(d.p1.order(), 1);
        let full = VarOperator::commutator_of(&cx.dc[1], &t);
        let u = Poly::parse(3, "x1*y1 + t").unwrap();
        assert_eq!(full.commutator(&u).order(), 0);
    }

    #[test]
    fn matches_direct_commutator() {
        let cx = RuminComplex::get(1).unwrap();
        let zeta = Poly::parse(3, "x1^2*y1 + t*x1").unwrap();
        let a = vec![Poly::parse(3, "y1*t").unwrap(), Poly::parse(3, "x1^3 - 2*t").unwrap()];
        let comm = VarOperator::commutator_of(&cx.dc[1], &zeta);
        let za: Vec<Poly> = a.iter().map(|c| c.mul(&zeta)).collect();
        let lhs: Vec<Poly> = cx.dc[1].apply(&za).iter().zip(cx.dc[1].apply(&a)).map(|(x, y)| x.sub(&y.mul(&zeta))).collect();
        assert_eq!(comm.apply(&a), lhs);
    }
}
