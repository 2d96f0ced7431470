//! Sparse multivariate polynomials over F_p.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::monomial::{Monomial, MonomialOrder};

/// A polynomial: nonzero terms sorted by strictly decreasing monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, u32)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    /// Builds a polynomial from terms in any order; duplicates are merged.
    pub fn from_terms(field: &PrimeField, terms: Vec<(Monomial, u32)>) -> Self {
        let mut map: HashMap<Monomial, u32> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            let e = map.entry(m).or_insert(0);
            *e = field.add(*e, c);
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    /// Wraps terms already sorted descending with nonzero coefficients.
    pub(crate) fn from_sorted(terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, u32)> {
        self.terms.first()
    }

    /// The coefficient of the constant monomial.
    pub fn constant_coeff(&self) -> u32 {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }
}

/// The ambient polynomial ring `F_p[x_1..x_n]` with a fixed monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: PrimeField,
    names: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(p: u64, names: &[&str], weights: Vec<u32>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Self::with_order(
            field,
            names.iter().map(|s| s.to_string()).collect(),
            MonomialOrder::grevlex(weights),
        )
    }

    pub fn with_order(field: PrimeField, names: Vec<String>, order: MonomialOrder) -> Result<Self> {
        if names.len() != order.nvars() {
            return Err(AlgebraError::Construction(
                "variable names and weights differ in length".into(),
            ));
        }
        if order.weights().contains(&0) {
            return Err(AlgebraError::Construction(
                "variable weights must be positive".into(),
            ));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(AlgebraError::Construction(format!(
                    "duplicate variable {n}"
                )));
            }
        }
        Ok(PolyRing {
            field,
            names,
            order,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.modulus()
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constant(&self, c: i64) -> Poly {
        let c = self.field.from_i64(c);
        if c == 0 {
            Poly::zero()
        } else {
            Poly::from_sorted(vec![(self.order.one(), c)])
        }
    }

    pub fn one(&self) -> Poly {
        self.constant(1)
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::from_sorted(vec![(self.order.var(i), 1)])
    }

    pub fn term(&self, exps: &[u32], c: i64) -> Poly {
        let c = self.field.from_i64(c);
        if c == 0 {
            return Poly::zero();
        }
        Poly::from_sorted(vec![(self.order.monomial(exps), c)])
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.combine(a, b, 1)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.combine(a, b, self.field.neg(1))
    }

    /// `a + s*b` by a sorted merge.
    pub fn combine(&self, a: &Poly, b: &Poly, s: u32) -> Poly {
        let f = &self.field;
        if s == 0 {
            return a.clone();
        }
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (ma, ca) = &a.terms[i];
            let (mb, cb) = &b.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Greater => {
                    out.push((ma.clone(), *ca));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((mb.clone(), f.mul(s, *cb)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(*ca, f.mul(s, *cb));
                    if c != 0 {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        out.extend(b.terms[j..].iter().map(|(m, c)| (m.clone(), f.mul(s, *c))));
        Poly::from_sorted(out)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.scale(a, self.field.neg(1))
    }

    pub fn scale(&self, a: &Poly, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly::from_sorted(
            a.terms
                .iter()
                .map(|(m, x)| (m.clone(), self.field.mul(*x, c)))
                .collect(),
        )
    }

    pub fn mul_term(&self, a: &Poly, m: &Monomial, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly::from_sorted(
            a.terms
                .iter()
                .map(|(x, k)| (x.mul(m), self.field.mul(*k, c)))
                .collect(),
        )
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return self.mul_term(large, m, *c);
        }
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                terms.push((ma.mul(mb), self.field.mul(*ca, *cb)));
            }
        }
        Poly::from_terms(&self.field, terms)
    }

    pub fn pow(&self, a: &Poly, mut n: u64) -> Poly {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The `q`-th power for `q` a power of the characteristic. Over F_p the
    /// coefficients are fixed by Frobenius, so this only scales exponents.
    pub fn frobenius(&self, a: &Poly, q: u32) -> Poly {
        Poly::from_sorted(a.terms.iter().map(|(m, c)| (m.pow(q), *c)).collect())
    }

    /// Maximum weighted degree of a term; `None` for zero.
    pub fn degree(&self, a: &Poly) -> Option<i64> {
        a.terms.iter().map(|(m, _)| self.order.degree(m)).max()
    }

    pub fn is_homogeneous(&self, a: &Poly) -> bool {
        let mut degs = a.terms.iter().map(|(m, _)| self.order.degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Evaluates the ring homomorphism `x_i -> images[i]` into `target`.
    pub fn substitute(&self, a: &Poly, images: &[Poly], target: &PolyRing) -> Poly {
        assert_eq!(images.len(), self.nvars());
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut acc = Vec::new();
        for (m, c) in &a.terms {
            let mut t = target.constant(*c as i64);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| target.pow(&images[i], e as u64))
                    .clone();
                t = target.mul(&t, &p);
            }
            acc.extend(t.into_terms());
        }
        Poly::from_terms(&target.field, acc)
    }

    /// Re-expresses `a` in `target`, sending variable `i` to variable `map[i]`.
    pub fn embed(&self, a: &Poly, target: &PolyRing, map: &[usize]) -> Poly {
        let terms = a
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; target.nvars()];
                for (i, &x) in m.exps().iter().enumerate() {
                    e[map[i]] += x;
                }
                (target.order.monomial(&e), *c)
            })
            .collect();
        Poly::from_terms(&target.field, terms)
    }

    pub fn format(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            let sc = self.field.to_signed(*c);
            let (neg, mag) = (sc < 0, sc.unsigned_abs());
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                let _ = write!(s, "{mag}");
            } else if mag == 1 {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{mag}*{mono}");
            }
        }
        s
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        parts.join("*")
    }

    /// Parses an infix polynomial: integers, variables, `+ - * ^` and parentheses.
    pub fn parse(&self, src: &str) -> Result<Poly> {
        let mut p = Parser {
            ring: self,
            src: src.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("offset {}: {msg}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    /// Summands are merged once at the end, so long sums parse in
    /// `O(n log n)`.
    fn expr(&mut self) -> Result<Poly> {
        let mut terms = self.term()?.into_terms();
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    terms.extend(self.term()?.into_terms());
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    terms.extend(self.ring.neg(&t).into_terms());
                }
                _ => break,
            }
        }
        Ok(Poly::from_terms(&self.ring.field, terms))
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            return Ok(self.ring.pow(&base, n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn base(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                let f = self.factor()?;
                Ok(self.ring.neg(&f))
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let p = self.ring.characteristic() as u128;
                let v = text
                    .bytes()
                    .fold(0u128, |acc, d| (acc * 10 + (d - b'0') as u128) % p);
                Ok(self.ring.constant(v as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.var_index(name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable '{name}'")))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(7, &["x", "y", "z"], vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let r = ring();
        let f = r.parse("x^3 + y^3 + z^3").unwrap();
        assert_eq!(r.format(&f), "x^3 + y^3 + z^3");
        let g = r.parse("(x+y)^7").unwrap();
        assert_eq!(g, r.parse("x^7+y^7").unwrap());
        let h = r.parse("-2*x*y + 9").unwrap();
        assert_eq!(r.format(&h), "-2*x*y + 2");
        assert!(r.parse("x + w").is_err());
        assert!(r.parse("x +").is_err());
    }

    #[test]
    fn frobenius_matches_power() {
        let r = ring();
        let f = r.parse("3*x^2*y - z + 5").unwrap();
        assert_eq!(r.frobenius(&f, 7), r.pow(&f, 7));
        assert_eq!(r.frobenius(&f, 49), r.pow(&f, 49));
    }

    #[test]
    fn substitute_is_a_ring_map() {
        let r = PolyRing::new(5, &["x", "y", "z"], vec![1, 1, 1]).unwrap();
        let s = PolyRing::new(5, &["u", "v"], vec![1, 1]).unwrap();
        let images = vec![
            s.parse("u^2").unwrap(),
            s.parse("v^2").unwrap(),
            s.parse("u*v").unwrap(),
        ];
        let f = r.parse("x*y - z^2").unwrap();
        assert!(r.substitute(&f, &images, &s).is_zero());
    }
}
