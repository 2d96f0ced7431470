//! Dense vectors of polynomials, the element representation of free modules.

use crate::poly::{Poly, PolyRing};

pub type Vector = Vec<Poly>;

pub fn zero(n: usize) -> Vector {
    vec![Poly::zero(); n]
}

pub fn unit(ring: &PolyRing, n: usize, i: usize) -> Vector {
    let mut v = zero(n);
    v[i] = ring.one();
    v
}

pub fn is_zero(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

pub fn add(ring: &PolyRing, a: &[Poly], b: &[Poly]) -> Vector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

pub fn sub(ring: &PolyRing, a: &[Poly], b: &[Poly]) -> Vector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()
}

pub fn neg(ring: &PolyRing, a: &[Poly]) -> Vector {
    a.iter().map(|x| ring.neg(x)).collect()
}

pub fn scale(ring: &PolyRing, c: &Poly, a: &[Poly]) -> Vector {
    a.iter().map(|x| ring.mul(c, x)).collect()
}

/// `sum_j coeffs[j] * cols[j]` for vectors of length `n`.
pub fn combine(ring: &PolyRing, n: usize, coeffs: &[Poly], cols: &[Vector]) -> Vector {
    assert_eq!(coeffs.len(), cols.len());
    let mut acc = zero(n);
    for (c, col) in coeffs.iter().zip(cols) {
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(col) {
            if !x.is_zero() {
                *a = ring.add(a, &ring.mul(c, x));
            }
        }
    }
    acc
}

pub fn dot(ring: &PolyRing, a: &[Poly], b: &[Poly]) -> Poly {
    assert_eq!(a.len(), b.len());
    let mut acc = Poly::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = ring.add(&acc, &ring.mul(x, y));
        }
    }
    acc
}

pub fn frobenius(ring: &PolyRing, a: &[Poly], q: u32) -> Vector {
    a.iter().map(|x| ring.frobenius(x, q)).collect()
}

pub fn format(ring: &PolyRing, a: &[Poly]) -> String {
    let parts: Vec<String> = a.iter().map(|x| ring.format(x)).collect();
    format!("[{}]", parts.join(", "))
}

/// Transpose of a matrix given by columns of length `rows`.
pub fn transpose(cols: &[Vector], rows: usize) -> Vec<Vector> {
    (0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}
