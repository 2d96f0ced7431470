//! Graded quotient rings `F_p[x_1..x_n]/I` and maps between them.

use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::gb::ModuleGb;
use crate::poly::{Poly, PolyRing};

/// A positively graded ring `S/I`, `S = F_p[x_1..x_n]`, with `I` homogeneous.
///
/// Whether `S/I` is a domain is asserted by the caller and recorded as a
/// flag; it is never verified.
#[derive(Debug)]
pub struct GradedRing {
    poly: Arc<PolyRing>,
    ideal: Vec<Poly>,
    ideal_gb: ModuleGb,
    domain: bool,
}

pub type RingRef = Arc<GradedRing>;

impl PartialEq for GradedRing {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.ideal == other.ideal && self.domain == other.domain
    }
}

impl GradedRing {
    pub fn new(poly: PolyRing, ideal: Vec<Poly>, domain: bool) -> Result<RingRef> {
        for g in &ideal {
            if !poly.is_homogeneous(g) {
                return Err(AlgebraError::NonHomogeneous(format!(
                    "defining relation {} is not homogeneous",
                    poly.format(g)
                )));
            }
        }
        let poly = Arc::new(poly);
        let ideal: Vec<Poly> = ideal.into_iter().filter(|g| !g.is_zero()).collect();
        let ideal_gb = ModuleGb::ideal(&poly, &ideal)?;
        Ok(Arc::new(GradedRing {
            poly,
            ideal,
            ideal_gb,
            domain,
        }))
    }

    /// Polynomial ring with standard weights.
    pub fn polynomial(p: u64, names: &[&str]) -> Result<RingRef> {
        Self::new(
            PolyRing::new(p, names, vec![1; names.len()])?,
            Vec::new(),
            true,
        )
    }

    /// Standard-graded quotient ring, relations given as strings.
    pub fn quotient(p: u64, names: &[&str], rels: &[&str], domain: bool) -> Result<RingRef> {
        Self::weighted_quotient(p, names, vec![1; names.len()], rels, domain)
    }

    pub fn weighted_quotient(
        p: u64,
        names: &[&str],
        weights: Vec<u32>,
        rels: &[&str],
        domain: bool,
    ) -> Result<RingRef> {
        let poly = PolyRing::new(p, names, weights)?;
        let ideal = rels
            .iter()
            .map(|r| poly.parse(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(poly, ideal, domain)
    }

    pub fn poly(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn ideal(&self) -> &[Poly] {
        &self.ideal
    }

    pub fn ideal_gb(&self) -> &ModuleGb {
        &self.ideal_gb
    }

    pub fn is_domain(&self) -> bool {
        self.domain
    }

    pub fn characteristic(&self) -> u32 {
        self.poly.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn variables(&self) -> Vec<Poly> {
        (0..self.nvars()).map(|i| self.poly.var(i)).collect()
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        self.poly.parse(s)
    }

    /// Normal form modulo the defining ideal.
    pub fn reduce(&self, f: &Poly) -> Poly {
        if self.ideal.is_empty() {
            return f.clone();
        }
        self.ideal_gb
            .normal_form(std::slice::from_ref(f))
            .pop()
            .unwrap()
    }

    pub fn is_zero(&self, f: &Poly) -> bool {
        f.is_zero()
            || (!self.ideal.is_empty() && self.ideal_gb.reduces_to_zero(std::slice::from_ref(f)))
    }

    pub fn format(&self, f: &Poly) -> String {
        self.poly.format(f)
    }

    /// Jacobian ideal generators: partial derivatives of the defining
    /// equations, reduced and deduplicated (up to scalars).
    pub fn jacobian_generators(&self) -> Vec<Poly> {
        let f = self.poly.field();
        let mut out: Vec<Poly> = Vec::new();
        for g in &self.ideal {
            for i in 0..self.nvars() {
                let terms = g
                    .terms()
                    .iter()
                    .filter(|(m, _)| m.exps()[i] > 0)
                    .map(|(m, c)| {
                        let mut e = m.exps().to_vec();
                        let k = e[i];
                        e[i] -= 1;
                        (self.poly.order().monomial(&e), f.mul(*c, k % f.modulus()))
                    })
                    .collect();
                let d = self.reduce(&Poly::from_terms(f, terms));
                if d.is_zero() {
                    continue;
                }
                let monic = self.poly.scale(&d, f.inv(d.leading().unwrap().1));
                if !out.contains(&monic) {
                    out.push(monic);
                }
            }
        }
        out
    }
}

/// A ring homomorphism `source -> target` given by the images of the
/// source variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: RingRef,
    target: RingRef,
    images: Vec<Poly>,
}

impl RingMap {
    pub fn new(source: RingRef, target: RingRef, images: Vec<Poly>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(AlgebraError::Dimension(format!(
                "ring map needs {} variable images, got {}",
                source.nvars(),
                images.len()
            )));
        }
        if source.characteristic() != target.characteristic() {
            return Err(AlgebraError::RingMismatch(
                "ring map between different characteristics".into(),
            ));
        }
        let map = RingMap {
            source,
            target,
            images,
        };
        for g in map.source.ideal() {
            if !map.target.is_zero(&map.apply(g)) {
                return Err(AlgebraError::Construction(format!(
                    "ring map does not kill the defining relation {}",
                    map.source.format(g)
                )));
            }
        }
        Ok(map)
    }

    /// The quotient map `R -> R/J`.
    pub fn quotient(source: &RingRef, extra: &[Poly]) -> Result<Self> {
        let mut ideal = source.ideal().to_vec();
        ideal.extend(extra.iter().cloned());
        let target = GradedRing::new((**source.poly()).clone(), ideal, false)?;
        let images = source.variables();
        Self::new(source.clone(), target, images)
    }

    pub fn identity(ring: &RingRef) -> Self {
        RingMap {
            source: ring.clone(),
            target: ring.clone(),
            images: ring.variables(),
        }
    }

    pub fn source(&self) -> &RingRef {
        &self.source
    }

    pub fn target(&self) -> &RingRef {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        self.source
            .poly()
            .substitute(f, &self.images, self.target.poly())
    }

    /// True when the map is `S/I -> S/J` on the same polynomial ring with
    /// each variable sent to itself (so `I` is contained in `J`).
    pub fn is_surjection_onto_quotient(&self) -> bool {
        self.source.poly() == self.target.poly()
            && self
                .images
                .iter()
                .zip(self.source.variables())
                .all(|(a, b)| *a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_cubic_reductions() {
        let r = GradedRing::quotient(7, &["z", "x", "y"], &["x^3+y^3+z^3"], true).unwrap();
        let z3 = r.parse("z^3").unwrap();
        assert_eq!(r.reduce(&z3), r.parse("-x^3-y^3").unwrap());
        assert!(r.is_zero(&r.parse("x^3+y^3+z^3").unwrap()));
        assert_eq!(r.jacobian_generators().len(), 3);
    }

    #[test]
    fn rejects_inhomogeneous_relations_and_bad_maps() {
        assert!(GradedRing::quotient(7, &["x", "y"], &["x^2 - y"], true).is_err());
        let a1 = GradedRing::quotient(5, &["x", "y", "z"], &["x*y - z^2"], true).unwrap();
        let b = GradedRing::polynomial(5, &["u", "v"]).unwrap();
        let ok = ["u^2", "v^2", "u*v"].map(|s| b.parse(s).unwrap()).to_vec();
        assert!(RingMap::new(a1.clone(), b.clone(), ok).is_ok());
        let bad = ["u^2", "v^2", "u"].map(|s| b.parse(s).unwrap()).to_vec();
        assert!(RingMap::new(a1, b, bad).is_err());
    }
}
