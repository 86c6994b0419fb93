//! Constant-coefficient left-invariant operators: noncommutative polynomials in
//! `W_1..W_{2n+1}` kept in the ordered form `W_1^{i_1}⋯W_{2n+1}^{i_{2n+1}}`, and matrices of them.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::heisenberg::fields::{apply_word, field_name};
use crate::heisenberg::poly::{rat_int, rat_to_f64};
use crate::heisenberg::{Coefficient, Rational};
use crate::linalg::RatMatrix;

/// Letters left to right; the rightmost acts first.
pub type Word = SmallVec<[u8; 8]>;

thread_local! {
    static NORMAL_CACHE: RefCell<HashMap<(usize, Word), Vec<(Word, i64)>>> = RefCell::new(HashMap::new());
}

/// Rewrite a word in the ordered basis using `Y_i X_i = X_i Y_i − T` and the centrality of `T`.
/// Coefficients are integers.
pub fn normal_order(n: usize, w: &Word) -> Vec<(Word, i64)> {
    if w.windows(2).all(|p| p[0] <= p[1]) {
        return vec![(w.clone(), 1)];
    }
    if let Some(v) = NORMAL_CACHE.with(|c| c.borrow().get(&(n, w.clone())).cloned()) {
        return v;
    }
    let i = w.windows(2).position(|p| p[0] > p[1]).unwrap();
    let (a, b) = (w[i], w[i + 1]);
    let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
    let mut swapped = w.clone();
    swapped.swap(i, i + 1);
    for (ww, c) in normal_order(n, &swapped) {
        *acc.entry(ww).or_insert(0) += c;
    }
    if (b as usize) < n && a as usize == b as usize + n {
        // Y_b X_b = X_b Y_b − T
        let mut r: Word = SmallVec::new();
        r.extend_from_slice(&w[..i]);
        r.push((2 * n) as u8);
        r.extend_from_slice(&w[i + 2..]);
        for (ww, c) in normal_order(n, &r) {
            *acc.entry(ww).or_insert(0) -= c;
        }
    }
    let v: Vec<(Word, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    NORMAL_CACHE.with(|c| c.borrow_mut().insert((n, w.clone()), v.clone()));
    v
}

pub fn letter_weight(n: usize, l: u8) -> usize {
    if l as usize == 2 * n {
        2
    } else {
        1
    }
}

pub fn word_weight(n: usize, w: &[u8]) -> usize {
    w.iter().map(|&l| letter_weight(n, l)).sum()
}

/// Noncommutative polynomial in the fields with rational coefficients, always ordered.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly {
    pub n: usize,
    pub terms: BTreeMap<Word, Rational>,
}

impl NcPoly {
    pub fn zero(n: usize) -> Self {
        NcPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(SmallVec::new(), c);
        }
        p
    }

    /// The single field `W_{j+1}`.
    pub fn letter(n: usize, j: usize) -> Self {
        let mut p = Self::zero(n);
        p.terms.insert(SmallVec::from_slice(&[j as u8]), Rational::one());
        p
    }

    /// Build from an arbitrary word (normal-ordered on the way in).
    pub fn from_word(n: usize, w: &[u8], c: &Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_word(&SmallVec::from_slice(w), c);
        p
    }

    fn add_word(&mut self, w: &Word, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (ww, k) in normal_order(self.n, w) {
            *self.terms.entry(ww).or_insert_with(Rational::zero) += c * rat_int(k);
        }
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &NcPoly) {
        for (w, c) in &other.terms {
            let e = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                self.terms.remove(w);
            }
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.n);
        }
        NcPoly { n: self.n, terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                let c = ca * cb;
                for (ww, k) in normal_order(self.n, &w) {
                    *acc.entry(ww).or_insert_with(Rational::zero) += &c * rat_int(k);
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        NcPoly { n: self.n, terms: acc }
    }

    /// Formal `L²` adjoint: each field is skew-adjoint, so reverse words and multiply by `(−1)^len`.
    pub fn adjoint(&self) -> NcPoly {
        let mut r = NcPoly::zero(self.n);
        for (w, c) in &self.terms {
            let rev: Word = w.iter().rev().cloned().collect();
            let s = if w.len() % 2 == 0 { c.clone() } else { -c.clone() };
            r.add_word(&rev, &s);
        }
        r
    }

    /// Uniform weight of all monomials; `None` for zero or mixed weights.
    pub fn weight(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| word_weight(self.n, w));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn max_order(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn apply<C: Coefficient>(&self, f: &C) -> C {
        let mut r = f.zero_like();
        for (w, c) in &self.terms {
            let g = apply_word(self.n, w, f);
            r.add_scaled(&g, c);
        }
        r
    }

    /// Terms as `(word, f64 coefficient)` for numerical application.
    pub fn numeric_terms(&self) -> Vec<(Word, f64)> {
        self.terms.iter().map(|(w, c)| (w.clone(), rat_to_f64(c))).collect()
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let name: String = if w.is_empty() { "1".into() } else { w.iter().map(|&l| field_name(self.n, l as usize)).collect::<Vec<_>>().join("") };
                if c.is_one() {
                    name
                } else {
                    format!("{c}*{name}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self})")
    }
}

/// Matrix-valued left-invariant differential operator between two form spaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeftInvariantOperator {
    pub n: usize,
    pub source_degree: usize,
    pub target_degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<NcPoly>,
}

impl LeftInvariantOperator {
    pub fn zero(n: usize, source_degree: usize, target_degree: usize, rows: usize, cols: usize) -> Self {
        LeftInvariantOperator { n, source_degree, target_degree, rows, cols, entries: vec![NcPoly::zero(n); rows * cols] }
    }

    pub fn identity(n: usize, degree: usize, dim: usize) -> Self {
        let mut m = Self::zero(n, degree, degree, dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = NcPoly::constant(n, Rational::one());
        }
        m
    }

    pub fn from_rat(n: usize, source_degree: usize, target_degree: usize, m: &RatMatrix) -> Self {
        LeftInvariantOperator {
            n,
            source_degree,
            target_degree,
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|c| NcPoly::constant(n, c.clone())).collect(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &NcPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut NcPoly {
        &mut self.entries[i * self.cols + j]
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "operator shapes do not compose");
        let mut r = Self::zero(self.n, other.source_degree, self.target_degree, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.mul(b);
                    r.entries[i * other.cols + j].add_assign(&p);
                }
            }
        }
        r
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut r = self.clone();
        for (a, b) in r.entries.iter_mut().zip(&other.entries) {
            a.add_assign(b);
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut r = self.clone();
        for e in r.entries.iter_mut() {
            *e = e.scale(c);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Entrywise formal adjoint of the transpose, for orthonormal coordinates.
    pub fn formal_adjoint(&self) -> Self {
        let mut r = Self::zero(self.n, self.target_degree, self.source_degree, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                r.entries[j * self.rows + i] = self.get(i, j).adjoint();
            }
        }
        r
    }

    /// Common weight of all nonzero entries; `None` if the operator is zero or weights differ.
    pub fn weight(&self) -> Option<usize> {
        let mut w = None;
        for e in &self.entries {
            if e.is_zero() {
                continue;
            }
            let ew = e.weight()?;
            match w {
                None => w = Some(ew),
                Some(x) if x != ew => return None,
                _ => {}
            }
        }
        w
    }

    /// Largest weight over all monomials of all entries.
    pub fn max_weight(&self) -> usize {
        self.entries.iter().flat_map(|e| e.terms.keys().map(|w| word_weight(self.n, w))).max().unwrap_or(0)
    }

    pub fn max_order(&self) -> usize {
        self.entries.iter().map(|e| e.max_order()).max().unwrap_or(0)
    }

    pub fn apply<C: Coefficient>(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        let zero = v.first().map(|c| c.zero_like());
        (0..self.rows)
            .map(|i| {
                let mut acc = zero.clone().expect("non-empty input");
                for (j, f) in v.iter().enumerate() {
                    let e = self.get(i, j);
                    if !e.is_zero() && !f.vanishes() {
                        acc.add_assign(&e.apply(f));
                    }
                }
                acc
            })
            .collect()
    }

    /// Apply when the input may be empty, supplying the zero of the output.
    pub fn apply_with_zero<C: Coefficient>(&self, v: &[C], zero: &C) -> Vec<C> {
        if self.cols == 0 {
            return vec![zero.zero_like(); self.rows];
        }
        self.apply(v)
    }

    /// Congruence by a diagonal scaling: `diag(l) · self · diag(r)`.
    pub fn scale_rows_cols(&self, l: &[Rational], r: &[Rational]) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = &l[i] * &r[j];
                out.entries[i * self.cols + j] = self.get(i, j).scale(&c);
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{}", self.get(i, j))).collect();
            s.push_str(&format!("[{}]\n", row.join(" | ")));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::poly::rat;
    use crate::heisenberg::Poly;
    use rand::SeedableRng;

    #[test]
    fn commutator_is_t() {
        let n = 1;
        let x = NcPoly::letter(n, 0);
        let y = NcPoly::letter(n, 1);
        let comm = x.mul(&y).sub(&y.mul(&x));
        assert_eq!(comm, NcPoly::letter(n, 2));
        assert_eq!(y.mul(&x), NcPoly::from_word(n, &[0, 1], &rat(1, 1)).sub(&NcPoly::letter(n, 2)));
    }

    #[test]
    fn commutator_table() {
        for n in 1..=3 {
            for a in 0..=2 * n {
                for b in 0..=2 * n {
                    let p = NcPoly::letter(n, a).mul(&NcPoly::letter(n, b));
                    let q = NcPoly::letter(n, b).mul(&NcPoly::letter(n, a));
                    let c = p.sub(&q);
                    let expect = if a < n && b == a + n {
                        NcPoly::letter(n, 2 * n)
                    } else if b < n && a == b + n {
                        NcPoly::letter(n, 2 * n).scale(&rat(-1, 1))
                    } else {
                        NcPoly::zero(n)
                    };
                    assert_eq!(c, expect);
                }
            }
        }
    }

    #[test]
    fn normal_form_acts_like_word() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let f = Poly::random(&mut rng, 5, 4);
        let w: Vec<u8> = vec![3, 1, 4, 0, 2, 1];
        let p = NcPoly::from_word(2, &w, &rat(1, 1));
        assert_eq!(p.apply(&f), apply_word(2, &w, &f));
    }

    #[test]
    fn adjoint_involution() {
        let p = NcPoly::from_word(1, &[1, 0, 0], &rat(3, 2)).add(&NcPoly::letter(1, 2));
        assert_eq!(p.adjoint().adjoint(), p);
        assert_eq!(NcPoly::letter(1, 0).adjoint(), NcPoly::letter(1, 0).scale(&rat(-1, 1)));
    }
}
