//! Finitely presented modules over a graded quotient ring, their maps and
//! submodules.
//!
//! A module `M = coker(R^m -> R^n)` over `R = S/I` is handled through its
//! lift to the free `S`-module `S^n`: the relation submodule there is
//! generated by the relation columns together with `g * e_i` for every
//! defining equation `g` of `R` and every generator `e_i`.

use std::sync::{Arc, OnceLock};

use crate::error::{AlgebraError, Result};
use crate::gb::{homogeneous_shifts, ModuleGb};
use crate::poly::{Poly, PolyRing};
use crate::ring::RingRef;
use crate::vector::{self, Vector};

#[derive(Debug)]
pub struct PresentedModule {
    ring: RingRef,
    ngens: usize,
    relations: Vec<Vector>,
    degrees: Vec<i64>,
    rel_gb: OnceLock<ModuleGb>,
}

pub type ModuleRef = Arc<PresentedModule>;

impl PresentedModule {
    /// Module on `ngens` generators with the given relation columns. Entries
    /// are reduced modulo the defining ideal and zero columns are dropped.
    pub fn new(
        ring: &RingRef,
        ngens: usize,
        relations: Vec<Vector>,
        degrees: Option<Vec<i64>>,
    ) -> Result<ModuleRef> {
        for (k, col) in relations.iter().enumerate() {
            if col.len() != ngens {
                return Err(AlgebraError::Dimension(format!(
                    "relation column {k} has length {}, expected {ngens}",
                    col.len()
                )));
            }
        }
        let degrees = degrees.unwrap_or_else(|| vec![0; ngens]);
        if degrees.len() != ngens {
            return Err(AlgebraError::Dimension(
                "generator degree list has the wrong length".into(),
            ));
        }
        let relations = relations
            .into_iter()
            .map(|c| c.iter().map(|x| ring.reduce(x)).collect::<Vector>())
            .filter(|c| !vector::is_zero(c))
            .collect();
        Ok(Arc::new(PresentedModule {
            ring: ring.clone(),
            ngens,
            relations,
            degrees,
            rel_gb: OnceLock::new(),
        }))
    }

    pub fn free(ring: &RingRef, n: usize) -> ModuleRef {
        Self::new(ring, n, Vec::new(), None).unwrap()
    }

    pub fn free_graded(ring: &RingRef, degrees: Vec<i64>) -> ModuleRef {
        Self::new(ring, degrees.len(), Vec::new(), Some(degrees)).unwrap()
    }

    /// The cyclic module `R/J`.
    pub fn cyclic(ring: &RingRef, ideal: &[Poly]) -> ModuleRef {
        let cols = ideal.iter().map(|g| vec![g.clone()]).collect();
        Self::new(ring, 1, cols, None).unwrap()
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn poly(&self) -> &Arc<PolyRing> {
        self.ring.poly()
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Relation columns plus `I * e_i`, generating the relations in `S^n`.
    pub fn lifted_relations(&self) -> Vec<Vector> {
        let mut out = self.relations.clone();
        for i in 0..self.ngens {
            for g in self.ring.ideal() {
                let mut v = vector::zero(self.ngens);
                v[i] = g.clone();
                out.push(v);
            }
        }
        out
    }

    pub fn rel_gb(&self) -> Result<&ModuleGb> {
        if let Some(gb) = self.rel_gb.get() {
            return Ok(gb);
        }
        let gb = ModuleGb::compute(
            self.poly(),
            self.ngens,
            self.ngens,
            &self.lifted_relations(),
        )?;
        Ok(self.rel_gb.get_or_init(|| gb))
    }

    pub fn check_element(&self, u: &[Poly]) -> Result<()> {
        if u.len() != self.ngens {
            return Err(AlgebraError::Dimension(format!(
                "element of length {} in a module on {} generators",
                u.len(),
                self.ngens
            )));
        }
        Ok(())
    }

    pub fn normal_form(&self, u: &[Poly]) -> Result<Vector> {
        self.check_element(u)?;
        Ok(self.rel_gb()?.normal_form(u))
    }

    pub fn is_zero_element(&self, u: &[Poly]) -> Result<bool> {
        self.check_element(u)?;
        Ok(self.rel_gb()?.reduces_to_zero(u))
    }

    pub fn generator(&self, i: usize) -> Vector {
        vector::unit(self.poly(), self.ngens, i)
    }

    /// True when every relation column is homogeneous for the generator degrees.
    pub fn is_homogeneous(&self) -> bool {
        self.relations.iter().all(|c| self.column_degree(c).is_ok())
    }

    /// Degree of a homogeneous vector, `Ok(None)` for zero.
    pub fn column_degree(&self, col: &[Poly]) -> Result<Option<i64>> {
        let mut deg = None;
        for (i, x) in col.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !self.poly().is_homogeneous(x) {
                return Err(AlgebraError::NonHomogeneous("inhomogeneous entry".into()));
            }
            let d = self.poly().degree(x).unwrap() + self.degrees[i];
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(AlgebraError::NonHomogeneous(
                        "entries of different degrees".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn direct_sum(a: &ModuleRef, b: &ModuleRef) -> Result<ModuleRef> {
        same_ring(&a.ring, &b.ring)?;
        let n = a.ngens + b.ngens;
        let mut cols = Vec::new();
        for c in &a.relations {
            let mut v = c.clone();
            v.extend(vector::zero(b.ngens));
            cols.push(v);
        }
        for c in &b.relations {
            let mut v = vector::zero(a.ngens);
            v.extend(c.iter().cloned());
            cols.push(v);
        }
        let mut degs = a.degrees.clone();
        degs.extend(b.degrees.iter().copied());
        Self::new(&a.ring, n, cols, Some(degs))
    }

    pub fn format(&self) -> String {
        let cols: Vec<String> = self
            .relations
            .iter()
            .map(|c| vector::format(self.poly(), c))
            .collect();
        format!("R^{} / <{}>", self.ngens, cols.join(", "))
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(AlgebraError::RingMismatch(
            "objects live over different rings".into(),
        ))
    }
}

fn same_module(a: &ModuleRef, b: &ModuleRef) -> Result<()> {
    if Arc::ptr_eq(a, b) {
        return Ok(());
    }
    same_ring(&a.ring, &b.ring)?;
    if a.ngens == b.ngens && a.relations == b.relations {
        Ok(())
    } else {
        Err(AlgebraError::Dimension(
            "submodules of different ambient modules".into(),
        ))
    }
}

/// `{a in S^k : sum_j a_j images[j] in span(rels)}` for vectors of length `n`.
pub(crate) fn preimage_of_span(
    ring: &Arc<PolyRing>,
    n: usize,
    images: &[Vector],
    rels: &[Vector],
) -> Result<Vec<Vector>> {
    let k = images.len();
    let mut gens = Vec::with_capacity(k + rels.len());
    for (j, img) in images.iter().enumerate() {
        let mut v = img.clone();
        v.extend(vector::unit(ring, k, j));
        gens.push(v);
    }
    for r in rels {
        let mut v = r.clone();
        v.extend(vector::zero(k));
        gens.push(v);
    }
    let gb = ModuleGb::compute(ring, n + k, n, &gens)?;
    Ok(gb.tail_elements())
}

/// An exact linear identity `element = sum coefficients[i] * generators[i]`
/// in a free module over the polynomial ring. The first `n_stated`
/// generators are the ones the query was about; the rest are relations of
/// the ambient module (relation columns, then defining-ideal multiples).
#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub ring: Arc<PolyRing>,
    pub element: Vector,
    pub generators: Vec<Vector>,
    pub n_stated: usize,
    pub coefficients: Vec<Poly>,
}

impl MembershipCertificate {
    pub fn verify(&self) -> bool {
        if self.generators.len() != self.coefficients.len() {
            return false;
        }
        if self
            .generators
            .iter()
            .any(|g| g.len() != self.element.len())
        {
            return false;
        }
        let sum = vector::combine(
            &self.ring,
            self.element.len(),
            &self.coefficients,
            &self.generators,
        );
        sum == self.element
    }

    /// Coefficients on the stated generators only.
    pub fn stated_coefficients(&self) -> &[Poly] {
        &self.coefficients[..self.n_stated]
    }
}

/// A tracked basis for lifting `element`, truncated at its degree when the
/// input admits a grading.
fn lifting_basis(
    ring: &Arc<PolyRing>,
    element: &[Poly],
    rank: usize,
    n: usize,
    aug: &[Vector],
) -> Result<ModuleGb> {
    let mut padded = element.to_vec();
    padded.resize(rank, Poly::zero());
    let mut all = aug.to_vec();
    all.push(padded);
    if let Some(shifts) = homogeneous_shifts(ring, rank, &all) {
        if let Some((i, p)) = element.iter().enumerate().find(|(_, p)| !p.is_zero()) {
            let d = shifts[i] + ring.degree(p).unwrap_or(0);
            return ModuleGb::compute_truncated(ring, rank, n, aug, shifts, d);
        }
    }
    ModuleGb::compute(ring, rank, n, aug)
}

/// Expresses `element` through `stated` generators plus `relations`,
/// returning a verified certificate, or `None` if it is not in the span.
pub fn certify_in_span(
    ring: &Arc<PolyRing>,
    element: &[Poly],
    stated: &[Vector],
    relations: &[Vector],
) -> Result<Option<MembershipCertificate>> {
    let n = element.len();
    let mut generators: Vec<Vector> = stated.to_vec();
    generators.extend(relations.iter().cloned());
    let k = generators.len();
    let aug: Vec<Vector> = generators
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let mut v = g.clone();
            v.extend(vector::unit(ring, k, j));
            v
        })
        .collect();
    let gb = lifting_basis(ring, element, n + k, n, &aug)?;
    let Some(coefficients) = gb.lift(element) else {
        return Ok(None);
    };
    let cert = MembershipCertificate {
        ring: ring.clone(),
        element: element.to_vec(),
        generators,
        n_stated: stated.len(),
        coefficients,
    };
    assert!(cert.verify(), "membership certificate failed to re-expand");
    Ok(Some(cert))
}

/// A module homomorphism given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: ModuleRef,
    target: ModuleRef,
    images: Vec<Vector>,
}

impl ModuleMap {
    /// Checks sizes and that every source relation maps into the target's
    /// relations.
    pub fn new(source: &ModuleRef, target: &ModuleRef, images: Vec<Vector>) -> Result<Self> {
        same_ring(&source.ring, &target.ring)?;
        if images.len() != source.ngens {
            return Err(AlgebraError::Dimension(format!(
                "map needs {} generator images, got {}",
                source.ngens,
                images.len()
            )));
        }
        for img in &images {
            target.check_element(img)?;
        }
        let map = ModuleMap {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for (k, rel) in source.relations.iter().enumerate() {
            if !target.is_zero_element(&map.apply_unchecked(rel))? {
                return Err(AlgebraError::Construction(format!(
                    "map is not well defined: relation column {k} does not map to zero"
                )));
            }
        }
        Ok(map)
    }

    /// Map given by its matrix rows (`target.ngens` rows of length `source.ngens`).
    pub fn from_rows(source: &ModuleRef, target: &ModuleRef, rows: Vec<Vector>) -> Result<Self> {
        if rows.len() != target.ngens || rows.iter().any(|r| r.len() != source.ngens) {
            return Err(AlgebraError::Dimension(
                "matrix shape does not match the modules".into(),
            ));
        }
        Self::new(source, target, vector::transpose(&rows, source.ngens))
    }

    pub fn identity(m: &ModuleRef) -> Self {
        let images = (0..m.ngens).map(|i| m.generator(i)).collect();
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            images,
        }
    }

    pub fn source(&self) -> &ModuleRef {
        &self.source
    }

    pub fn target(&self) -> &ModuleRef {
        &self.target
    }

    pub fn images(&self) -> &[Vector] {
        &self.images
    }

    /// Matrix rows (target generators by source generators).
    pub fn rows(&self) -> Vec<Vector> {
        vector::transpose(&self.images, self.target.ngens)
    }

    fn apply_unchecked(&self, u: &[Poly]) -> Vector {
        vector::combine(self.source.poly(), self.target.ngens, u, &self.images)
    }

    pub fn apply(&self, u: &[Poly]) -> Result<Vector> {
        self.source.check_element(u)?;
        Ok(self.apply_unchecked(u))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ModuleMap) -> Result<ModuleMap> {
        same_module(&self.target, &next.source)?;
        let images = self
            .images
            .iter()
            .map(|v| next.apply_unchecked(v))
            .collect();
        Ok(ModuleMap {
            source: self.source.clone(),
            target: next.target.clone(),
            images,
        })
    }

    /// Equality as maps: images agree modulo the target relations.
    pub fn equals(&self, other: &ModuleMap) -> Result<bool> {
        same_module(&self.source, &other.source)?;
        same_module(&self.target, &other.target)?;
        for (a, b) in self.images.iter().zip(&other.images) {
            if !self
                .target
                .is_zero_element(&vector::sub(self.source.poly(), a, b))?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn kernel(&self) -> Result<Submodule> {
        let gens = preimage_of_span(
            self.source.poly(),
            self.target.ngens,
            &self.images,
            &self.target.lifted_relations(),
        )?;
        Submodule::new(&self.source, gens)
    }

    pub fn image(&self) -> Result<Submodule> {
        Submodule::new(&self.target, self.images.clone())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.is_zero())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let img = self.image()?;
        for i in 0..self.target.ngens {
            if !img.contains(&self.target.generator(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A submodule of a presented module, given by generators in `S^n`.
#[derive(Clone, Debug)]
pub struct Submodule {
    ambient: ModuleRef,
    gens: Vec<Vector>,
    gb: OnceLock<ModuleGb>,
}

impl Submodule {
    /// Generators are reduced modulo the ambient relations; those that
    /// vanish in the module are dropped.
    pub fn new(ambient: &ModuleRef, gens: Vec<Vector>) -> Result<Self> {
        let mut kept: Vec<Vector> = Vec::new();
        for g in gens {
            let nf = ambient.normal_form(&g)?;
            if !vector::is_zero(&nf) && !kept.contains(&nf) {
                kept.push(nf);
            }
        }
        Ok(Submodule {
            ambient: ambient.clone(),
            gens: kept,
            gb: OnceLock::new(),
        })
    }

    pub fn zero(ambient: &ModuleRef) -> Self {
        Submodule {
            ambient: ambient.clone(),
            gens: Vec::new(),
            gb: OnceLock::new(),
        }
    }

    pub fn whole(ambient: &ModuleRef) -> Result<Self> {
        let gens = (0..ambient.ngens).map(|i| ambient.generator(i)).collect();
        Self::new(ambient, gens)
    }

    /// Ideal of the ring, as a submodule of the free module of rank one.
    pub fn ideal(ring: &RingRef, gens: Vec<Poly>) -> Result<Self> {
        let r1 = PresentedModule::free(ring, 1);
        Self::new(&r1, gens.into_iter().map(|g| vec![g]).collect())
    }

    pub fn ambient(&self) -> &ModuleRef {
        &self.ambient
    }

    pub fn gens(&self) -> &[Vector] {
        &self.gens
    }

    pub fn ring(&self) -> &RingRef {
        &self.ambient.ring
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Groebner basis of the preimage of the submodule in `S^n`.
    pub fn gb(&self) -> Result<&ModuleGb> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let mut all = self.gens.clone();
        all.extend(self.ambient.lifted_relations());
        let n = self.ambient.ngens;
        let gb = ModuleGb::compute(self.ambient.poly(), n, n, &all)?;
        Ok(self.gb.get_or_init(|| gb))
    }

    pub fn contains(&self, u: &[Poly]) -> Result<bool> {
        self.ambient.check_element(u)?;
        Ok(self.gb()?.reduces_to_zero(u))
    }

    /// Decides membership and, for members, returns a certificate over the
    /// generators of the submodule and the ambient relations.
    pub fn membership(&self, u: &[Poly]) -> Result<Option<MembershipCertificate>> {
        if !self.contains(u)? {
            return Ok(None);
        }
        let cert = certify_in_span(
            self.ambient.poly(),
            u,
            &self.gens,
            &self.ambient.lifted_relations(),
        )?;
        debug_assert!(cert.is_some());
        Ok(cert)
    }

    pub fn contains_submodule(&self, other: &Submodule) -> Result<bool> {
        same_module(&self.ambient, &other.ambient)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Submodule) -> Result<bool> {
        Ok(self.contains_submodule(other)? && other.contains_submodule(self)?)
    }

    pub fn is_whole(&self) -> Result<bool> {
        for i in 0..self.ambient.ngens {
            if !self.contains(&self.ambient.generator(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        same_module(&self.ambient, &other.ambient)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::new(&self.ambient, gens)
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        same_module(&self.ambient, &other.ambient)?;
        let n = self.ambient.ngens;
        let ring = self.ambient.poly();
        let rels = self.ambient.lifted_relations();
        let mut gens = Vec::new();
        for p in self.gens.iter().chain(&rels) {
            let mut v = p.clone();
            v.extend(p.iter().cloned());
            gens.push(v);
        }
        for q in other.gens.iter().chain(&rels) {
            let mut v = q.clone();
            v.extend(vector::zero(n));
            gens.push(v);
        }
        let gb = ModuleGb::compute(ring, 2 * n, n, &gens)?;
        Submodule::new(&self.ambient, gb.tail_elements())
    }

    /// The quotient module `M/N`, on the same generators.
    pub fn quotient_module(&self) -> Result<ModuleRef> {
        let mut rels = self.ambient.relations.clone();
        rels.extend(self.gens.iter().cloned());
        PresentedModule::new(
            &self.ambient.ring,
            self.ambient.ngens,
            rels,
            Some(self.ambient.degrees.clone()),
        )
    }

    /// `(N :_M x) = {u in M : x u in N}`.
    pub fn colon(&self, x: &Poly) -> Result<Submodule> {
        if self.ring().is_zero(x) {
            return Err(AlgebraError::Precondition(
                "colon by the zero element".into(),
            ));
        }
        let n = self.ambient.ngens;
        let ring = self.ambient.poly();
        let images: Vec<Vector> = (0..n)
            .map(|i| {
                let mut v = vector::zero(n);
                v[i] = x.clone();
                v
            })
            .collect();
        let mut rels = self.gens.clone();
        rels.extend(self.ambient.lifted_relations());
        let gens = preimage_of_span(ring, n, &images, &rels)?;
        Submodule::new(&self.ambient, gens)
    }

    /// The ideal `(N :_R N') = {r in R : r N' ⊆ N}`.
    pub fn ideal_quotient(&self, other: &Submodule) -> Result<Submodule> {
        same_module(&self.ambient, &other.ambient)?;
        let ring = self.ambient.poly();
        let n = self.ambient.ngens;
        let k = other.gens.len();
        let r1 = PresentedModule::free(self.ring(), 1);
        if k == 0 {
            return Submodule::whole(&r1);
        }
        // R -> (M/N)^k, 1 -> (v_1, ..., v_k)
        let image: Vector = other.gens.iter().flat_map(|v| v.iter().cloned()).collect();
        let mut rels = Vec::new();
        let mut base = self.gens.clone();
        base.extend(self.ambient.lifted_relations());
        for b in 0..k {
            for r in &base {
                let mut v = vector::zero(n * k);
                for (i, x) in r.iter().enumerate() {
                    v[b * n + i] = x.clone();
                }
                rels.push(v);
            }
        }
        let gens = preimage_of_span(ring, n * k, &[image], &rels)?;
        Submodule::new(&r1, gens)
    }

    /// The generators of a reduced Groebner basis of the preimage that are
    /// nonzero in the module. Canonical for the submodule.
    pub fn canonical(&self) -> Result<Submodule> {
        let gb = self.gb()?;
        let gens = gb.elements();
        let mut kept = Vec::new();
        for g in gens {
            if !self.ambient.is_zero_element(&g)? {
                kept.push(g);
            }
        }
        Ok(Submodule {
            ambient: self.ambient.clone(),
            gens: kept,
            gb: OnceLock::new(),
        })
    }

    pub fn format(&self) -> String {
        let g: Vec<String> = self
            .gens
            .iter()
            .map(|v| vector::format(self.ambient.poly(), v))
            .collect();
        format!("<{}>", g.join(", "))
    }
}
