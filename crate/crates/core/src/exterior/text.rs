//! Human-readable text form of polynomial forms, e.g. `(x1*y1) dx1^dy1 + (1) dx1^theta`.

use super::{covector_name, indices, Form, Mask};
use crate::error::{Error, Result};
use crate::heisenberg::Poly;

pub fn mask_name(n: usize, mask: Mask) -> String {
    if mask == 0 {
        return "1".into();
    }
    indices(mask).into_iter().map(|i| covector_name(n, i)).collect::<Vec<_>>().join("^")
}

fn parse_mask(n: usize, s: &str) -> Result<Mask> {
    if s == "1" {
        return Ok(0);
    }
    let mut m: Mask = 0;
    let mut prev: Option<usize> = None;
    for part in s.split('^') {
        let i = (0..=2 * n)
            .find(|&i| covector_name(n, i) == part)
            .ok_or_else(|| Error::Parse(format!("unknown covector '{part}'")))?;
        if prev.is_some_and(|p| p >= i) {
            return Err(Error::Parse(format!("covectors out of order in '{s}'")));
        }
        prev = Some(i);
        m |= 1 << i;
    }
    Ok(m)
}

pub fn to_text(f: &Form<Poly>) -> String {
    if f.terms.is_empty() {
        return format!("0[{}]", f.degree);
    }
    f.terms.iter().map(|(m, c)| format!("({}) {}", c, mask_name(f.n, *m))).collect::<Vec<_>>().join(" + ")
}

/// Inverse of [`to_text`]; `degree` is needed only for the zero form.
pub fn from_text(n: usize, s: &str) -> Result<Form<Poly>> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("0[") {
        let d: usize = rest.trim_end_matches(']').parse().map_err(|_| Error::Parse(format!("bad zero form '{s}'")))?;
        return Ok(Form::zero(n, d));
    }
    let nv = 2 * n + 1;
    let mut terms: Vec<(Mask, Poly)> = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        while i < bytes.len() && (bytes[i] == ' ' || bytes[i] == '+') {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        if bytes[i] != '(' {
            return Err(Error::Parse(format!("expected '(' at {i} in '{s}'")));
        }
        let mut depth = 0;
        let start = i + 1;
        let mut end = start;
        for (k, &ch) in bytes.iter().enumerate().skip(i) {
            if ch == '(' {
                depth += 1;
            } else if ch == ')' {
                depth -= 1;
                if depth == 0 {
                    end = k;
                    break;
                }
            }
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in '{s}'")));
        }
        let poly_text: String = bytes[start..end].iter().collect();
        i = end + 1;
        while i < bytes.len() && bytes[i] == ' ' {
            i += 1;
        }
        let bstart = i;
        while i < bytes.len() && bytes[i] != ' ' {
            i += 1;
        }
        let basis: String = bytes[bstart..i].iter().collect();
        terms.push((parse_mask(n, &basis)?, Poly::parse(nv, &poly_text)?));
    }
    let degree = terms.first().map(|(m, _)| m.count_ones() as usize).unwrap_or(0);
    if terms.iter().any(|(m, _)| m.count_ones() as usize != degree) {
        return Err(Error::Parse("mixed degrees in form".into()));
    }
    Ok(Form::from_terms(n, degree, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for n in 1..=3 {
            for h in 0..=2 * n + 1 {
                let a = Form::random(&mut rng, n, h, 2, 0.2);
                let t = to_text(&a);
                assert_eq!(from_text(n, &t).unwrap(), a, "{t}");
            }
        }
        assert!(from_text(1, "(1) dy1^dx1").is_err());
    }
}
