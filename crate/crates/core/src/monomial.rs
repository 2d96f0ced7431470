//! Exponent vectors and the monomial orders used by the Groebner engine.
//!
//! A [`Monomial`] carries, next to its exponents, a sort key built by a
//! [`MonomialOrder`]. The key is linear in the exponents, so products,
//! quotients and Frobenius powers update it without consulting the order,
//! and plain lexicographic comparison of keys is the monomial order.

use smallvec::SmallVec;
use std::cmp::Ordering;

pub type Exps = SmallVec<[u32; 8]>;
type Key = SmallVec<[i32; 10]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    key: Key,
    exps: Exps,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .cmp(&other.key)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            key: self
                .key
                .iter()
                .zip(&other.key)
                .map(|(a, b)| a + b)
                .collect(),
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            key: other
                .key
                .iter()
                .zip(&self.key)
                .map(|(a, b)| a - b)
                .collect(),
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Exponents multiplied by `q` (the monomial raised to the `q`-th power).
    pub fn pow(&self, q: u32) -> Monomial {
        Monomial {
            key: self.key.iter().map(|k| k * q as i32).collect(),
            exps: self.exps.iter().map(|e| e * q).collect(),
        }
    }
}

/// Weighted degree-reverse-lexicographic order, optionally split into
/// blocks compared one after another (an elimination order for the
/// earlier blocks).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    weights: Vec<u32>,
    blocks: Vec<usize>,
}

impl MonomialOrder {
    pub fn grevlex(weights: Vec<u32>) -> Self {
        let n = weights.len();
        MonomialOrder {
            weights,
            blocks: vec![n],
        }
    }

    /// Block order: monomials are compared by the grevlex order on the
    /// first `blocks[0]` variables, ties broken on the next block, etc.
    pub fn blocks(weights: Vec<u32>, blocks: Vec<usize>) -> Self {
        assert_eq!(blocks.iter().sum::<usize>(), weights.len());
        MonomialOrder { weights, blocks }
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.blocks
    }

    pub fn monomial(&self, exps: &[u32]) -> Monomial {
        debug_assert_eq!(exps.len(), self.weights.len());
        let mut key = Key::new();
        let mut start = 0;
        for &len in &self.blocks {
            let range = start..start + len;
            let deg: i64 = range
                .clone()
                .map(|i| exps[i] as i64 * self.weights[i] as i64)
                .sum();
            key.push(deg as i32);
            for i in range.rev() {
                key.push(-(exps[i] as i32));
            }
            start += len;
        }
        Monomial {
            key,
            exps: exps.iter().copied().collect(),
        }
    }

    pub fn one(&self) -> Monomial {
        self.monomial(&vec![0; self.nvars()])
    }

    pub fn var(&self, i: usize) -> Monomial {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.monomial(&e)
    }

    pub fn lcm(&self, a: &Monomial, b: &Monomial) -> Monomial {
        let e: Exps = a.exps.iter().zip(&b.exps).map(|(x, y)| *x.max(y)).collect();
        self.monomial(&e)
    }

    /// Total weighted degree.
    pub fn degree(&self, m: &Monomial) -> i64 {
        m.exps
            .iter()
            .zip(&self.weights)
            .map(|(e, w)| *e as i64 * *w as i64)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_on_three_variables() {
        let o = MonomialOrder::grevlex(vec![1, 1, 1]);
        let m = |e: [u32; 3]| o.monomial(&e);
        // x > y > z in degree one
        assert!(m([1, 0, 0]) > m([0, 1, 0]));
        assert!(m([0, 1, 0]) > m([0, 0, 1]));
        // degree first
        assert!(m([0, 0, 2]) > m([1, 0, 0]));
        // grevlex: x*z^2 < y^3 ... smaller last exponent wins
        assert!(m([0, 3, 0]) > m([1, 0, 2]));
        assert!(m([1, 1, 0]) > m([0, 0, 2]));
    }

    #[test]
    fn key_is_linear() {
        let o = MonomialOrder::blocks(vec![1, 2, 1], vec![2, 1]);
        let a = o.monomial(&[1, 2, 3]);
        let b = o.monomial(&[0, 4, 1]);
        assert_eq!(a.mul(&b), o.monomial(&[1, 6, 4]));
        assert_eq!(a.pow(5), o.monomial(&[5, 10, 15]));
        assert_eq!(a.quotient_of(&a.mul(&b)).unwrap(), b);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = MonomialOrder::blocks(vec![1, 1], vec![1, 1]);
        assert!(o.monomial(&[1, 0]) > o.monomial(&[0, 50]));
    }
}
