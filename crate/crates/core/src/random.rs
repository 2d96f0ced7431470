//! Seeded random homogeneous modules and submodule pairs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::module::{ModuleRef, PresentedModule, Submodule};
use crate::poly::{Poly, PolyRing};
use crate::ring::RingRef;
use crate::vector::{self, Vector};

pub const MAX_GENERATORS: usize = 4;
pub const MAX_RELATIONS: usize = 4;
pub const MAX_ENTRY_DEGREE: i64 = 3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponent vectors of weighted degree `d`.
pub fn monomials_of_degree(ring: &PolyRing, d: i64) -> Vec<Vec<u32>> {
    fn go(w: &[u32], i: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let wi = w[i] as i64;
        let mut e = 0;
        while e * wi <= left {
            cur.push(e as u32);
            go(w, i + 1, left - e * wi, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if d >= 0 {
        go(ring.order().weights(), 0, d, &mut Vec::new(), &mut out);
    }
    out
}

/// A homogeneous polynomial of degree `d` with one to three terms, reduced
/// modulo the ring's ideal (so it may be zero).
pub fn homogeneous(ring: &RingRef, d: i64, rng: &mut ChaCha8Rng) -> Poly {
    let poly = ring.poly();
    let monos = monomials_of_degree(poly, d);
    if monos.is_empty() {
        return Poly::zero();
    }
    let p = poly.characteristic() as i64;
    let terms = rng.gen_range(1..=3usize);
    let mut f = Poly::zero();
    for _ in 0..terms {
        let m = monos.choose(rng).unwrap();
        f = poly.add(&f, &poly.term(m, rng.gen_range(1..p)));
    }
    ring.reduce(&f)
}

fn homogeneous_vector(
    ring: &RingRef,
    degs: &[i64],
    total: i64,
    max_entry: i64,
    rng: &mut ChaCha8Rng,
) -> Vector {
    degs.iter()
        .map(|&d| {
            let e = total - d;
            if e < 0 || e > max_entry || rng.gen_bool(0.3) {
                Poly::zero()
            } else {
                homogeneous(ring, e, rng)
            }
        })
        .collect()
}

/// A module with at most four generators of degree 0 or 1 and at most four
/// homogeneous relations with entries of degree at most three.
pub fn random_module(ring: &RingRef, rng: &mut ChaCha8Rng) -> Result<ModuleRef> {
    let n = rng.gen_range(1..=MAX_GENERATORS);
    let degs: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
    let lo = degs.iter().max().unwrap() + 1;
    let hi = degs.iter().min().unwrap() + MAX_ENTRY_DEGREE;
    let k = rng.gen_range(0..=MAX_RELATIONS);
    let cols = (0..k)
        .map(|_| {
            let t = rng.gen_range(lo..=hi);
            homogeneous_vector(ring, &degs, t, MAX_ENTRY_DEGREE, rng)
        })
        .collect();
    PresentedModule::new(ring, n, cols, Some(degs))
}

/// A random homogeneous element of `m`.
pub fn random_element(m: &ModuleRef, rng: &mut ChaCha8Rng) -> Vector {
    let degs = m.degrees();
    let lo = *degs.iter().min().unwrap();
    let t = lo + rng.gen_range(0..=2);
    let v = homogeneous_vector(m.ring(), degs, t, 2, rng);
    if vector::is_zero(&v) {
        m.generator(rng.gen_range(0..m.ngens()))
    } else {
        v
    }
}

/// A module with submodules `small ⊆ large`.
#[derive(Clone, Debug)]
pub struct LawInstance {
    /// Seed it was generated from; `None` for hand-built instances.
    pub seed: Option<u64>,
    pub module: ModuleRef,
    pub small: Submodule,
    pub large: Submodule,
}

impl LawInstance {
    pub fn describe(&self) -> String {
        let shape = format!(
            "module with {} generators and {} relations",
            self.module.ngens(),
            self.module.relations().len()
        );
        match self.seed {
            Some(s) => format!("seed {s}: {shape}"),
            None => shape,
        }
    }
}

pub fn random_instance(ring: &RingRef, seed: u64) -> Result<LawInstance> {
    let mut rng = rng(seed);
    let module = random_module(ring, &mut rng)?;
    let k = rng.gen_range(1..=2);
    let mut gens: Vec<Vector> = (0..k).map(|_| random_element(&module, &mut rng)).collect();
    let small = Submodule::new(&module, gens.clone())?;
    gens.push(random_element(&module, &mut rng));
    let large = Submodule::new(&module, gens)?;
    Ok(LawInstance {
        seed: Some(seed),
        module,
        small,
        large,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn instances_are_seeded_and_bounded() {
        let r = fixtures::fermat();
        for seed in 0..20 {
            let a = random_instance(&r, seed).unwrap();
            let b = random_instance(&r, seed).unwrap();
            assert_eq!(a.module.relations(), b.module.relations());
            assert_eq!(a.small.gens(), b.small.gens());
            assert!(
                a.module.ngens() <= MAX_GENERATORS && a.module.relations().len() <= MAX_RELATIONS
            );
            assert!(a.module.is_homogeneous());
            assert!(a.large.contains_submodule(&a.small).unwrap());
        }
        assert_eq!(monomials_of_degree(r.poly(), 2).len(), 6);
    }
}
