//! Closure operations on submodules of presented modules.
//!
//! Every kind evaluates `N ↦ N^cl_M` for a submodule `N` of its ambient
//! module `M`. All kinds except bounded tight closure are computed exactly;
//! bounded tight closure searches for test-element witnesses up to a fixed
//! Frobenius level and never claims exactness.

use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::gb::ModuleGb;
use crate::homological::{
    base_change, frobenius_element, frobenius_power, frobenius_submodule, tensor_presentation,
};
use crate::module::{
    certify_in_span, same_ring, MembershipCertificate, ModuleRef, PresentedModule, Submodule,
};
use crate::monomial::MonomialOrder;
use crate::poly::{Poly, PolyRing};
use crate::ring::{RingMap, RingRef};
use crate::vector::{self, Vector};

/// Stabilization cap for generated families.
pub const MAX_FAMILY_ROUNDS: usize = 64;

#[derive(Clone, Debug)]
pub enum ClosureOperation {
    Identity,
    /// `u ∈ N^cl` iff `s ⊗ u ∈ im(S ⊗ N → S ⊗ M)` for every generator `s` of `S`.
    Module(ModuleRef),
    /// Module closure for an algebra `S` whose first generator is `1`;
    /// only `s = 1` is tested.
    Algebra(ModuleRef),
    /// Sum of the module closures of a family asserted to be directed.
    DirectedFamily(Vec<ModuleRef>),
    /// Smallest submodule containing `N` that is closed under every member's
    /// module closure. With `stabilize = false` only one round is applied,
    /// which is not idempotent in general.
    GeneratedFamily {
        members: Vec<ModuleRef>,
        stabilize: bool,
    },
    /// `{u : u^{[p^e]} ∈ N^{[p^e]}}` at the fixed level `e`.
    Frobenius {
        e: u32,
    },
    /// Bounded tight closure test with explicit or default candidates.
    TightBounded {
        candidates: Option<Vec<Poly>>,
        e_max: u32,
    },
    /// Pullback of `inner` along a quotient map `R -> R/J`.
    Pullback {
        map: RingMap,
        inner: Box<ClosureOperation>,
    },
    Intersection(Vec<ClosureOperation>),
    /// Sum of the member closures, for a list asserted to be directed.
    Sum(Vec<ClosureOperation>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Exact,
    BoundedCertified { e_max: u32 },
    Unknown,
}

impl Status {
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            (Status::BoundedCertified { e_max: a }, Status::BoundedCertified { e_max: b }) => {
                Status::BoundedCertified { e_max: a.min(b) }
            }
            (s @ Status::BoundedCertified { .. }, _) | (_, s @ Status::BoundedCertified { .. }) => {
                s
            }
            _ => Status::Exact,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Exact => write!(f, "EXACT"),
            Status::BoundedCertified { .. } => write!(f, "BOUNDED_CERTIFIED"),
            Status::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// Evidence that an element lies in a closure: a list of exact identities,
/// plus the multiplier and Frobenius levels used by tight closure.
#[derive(Clone, Debug)]
pub struct ClosureWitness {
    pub element: Vector,
    pub identities: Vec<MembershipCertificate>,
    pub multiplier: Option<Poly>,
    pub levels: Vec<u32>,
}

impl ClosureWitness {
    fn plain(element: &[Poly], identities: Vec<MembershipCertificate>) -> Self {
        ClosureWitness {
            element: element.to_vec(),
            identities,
            multiplier: None,
            levels: Vec::new(),
        }
    }

    pub fn verify(&self) -> bool {
        self.identities.iter().all(MembershipCertificate::verify)
    }
}

#[derive(Clone, Debug)]
pub struct ClosureVerdict {
    pub closure: Submodule,
    pub status: Status,
    /// One witness per closure generator that is not already in `N`.
    pub witnesses: Vec<ClosureWitness>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum ElementVerdict {
    In(Option<ClosureWitness>),
    Out,
    LikelyOut { e_max: u32 },
    Unknown(String),
}

impl ElementVerdict {
    pub fn is_in(&self) -> bool {
        matches!(self, ElementVerdict::In(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            ElementVerdict::In(_) => "IN",
            ElementVerdict::Out => "OUT",
            ElementVerdict::LikelyOut { .. } => "LIKELY_OUT",
            ElementVerdict::Unknown(_) => "UNKNOWN",
        }
    }

    pub fn witness(&self) -> Option<&ClosureWitness> {
        match self {
            ElementVerdict::In(w) => w.as_ref(),
            _ => None,
        }
    }
}

struct Evaluated {
    closure: Submodule,
    status: Status,
    diagnostics: Vec<String>,
}

impl ClosureOperation {
    pub fn is_exact(&self) -> bool {
        match self {
            ClosureOperation::TightBounded { .. } => false,
            ClosureOperation::Pullback { inner, .. } => inner.is_exact(),
            ClosureOperation::Intersection(l) | ClosureOperation::Sum(l) => {
                l.iter().all(|c| c.is_exact())
            }
            _ => true,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ClosureOperation::Identity => "identity".into(),
            ClosureOperation::Module(s) => format!("module(rank {})", s.ngens()),
            ClosureOperation::Algebra(s) => format!("algebra(rank {})", s.ngens()),
            ClosureOperation::DirectedFamily(l) => format!("directed_family({})", l.len()),
            ClosureOperation::GeneratedFamily { members, stabilize } => {
                if *stabilize {
                    format!("generated_family({})", members.len())
                } else {
                    format!("generated_family_one_step({})", members.len())
                }
            }
            ClosureOperation::Frobenius { e } => format!("frobenius(e={e})"),
            ClosureOperation::TightBounded { e_max, .. } => format!("tight_bounded(e_max={e_max})"),
            ClosureOperation::Pullback { inner, .. } => format!("pullback({})", inner.name()),
            ClosureOperation::Intersection(l) => {
                format!(
                    "intersection({})",
                    l.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
                )
            }
            ClosureOperation::Sum(l) => format!(
                "sum({})",
                l.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
            ),
        }
    }

    fn check_ring(&self, ring: &RingRef) -> Result<()> {
        match self {
            ClosureOperation::Module(s) | ClosureOperation::Algebra(s) => same_ring(s.ring(), ring),
            ClosureOperation::DirectedFamily(l)
            | ClosureOperation::GeneratedFamily { members: l, .. } => {
                if l.is_empty() {
                    return Err(AlgebraError::Precondition("closure family is empty".into()));
                }
                l.iter().try_for_each(|s| same_ring(s.ring(), ring))
            }
            ClosureOperation::Pullback { map, .. } => {
                same_ring(map.source(), ring)?;
                if !map.is_surjection_onto_quotient() {
                    return Err(AlgebraError::Precondition(
                        "pullback closures are supported along quotient maps R -> R/J".into(),
                    ));
                }
                Ok(())
            }
            ClosureOperation::Intersection(l) | ClosureOperation::Sum(l) => {
                if l.is_empty() {
                    return Err(AlgebraError::Precondition("closure list is empty".into()));
                }
                l.iter().try_for_each(|c| c.check_ring(ring))
            }
            _ => Ok(()),
        }
    }

    /// `N^cl_M` without witnesses.
    pub fn closure(&self, n: &Submodule) -> Result<Submodule> {
        Ok(self.evaluate(n)?.closure)
    }

    /// `N^cl_M` with its status and diagnostics, without witnesses.
    pub fn evaluate_status(&self, n: &Submodule) -> Result<(Submodule, Status, Vec<String>)> {
        let ev = self.evaluate(n)?;
        Ok((ev.closure, ev.status, ev.diagnostics))
    }

    /// `N^cl_M` with a witness for every new generator.
    pub fn close(&self, n: &Submodule) -> Result<ClosureVerdict> {
        let ev = self.evaluate(n)?;
        let mut witnesses = Vec::new();
        for g in ev.closure.gens() {
            if n.contains(g)? {
                continue;
            }
            match self.witness(n, g)? {
                Some(w) => {
                    assert!(w.verify(), "closure witness failed to re-verify");
                    witnesses.push(w);
                }
                None => {
                    return Err(AlgebraError::Construction(format!(
                        "no witness for closure generator under {}",
                        self.name()
                    )))
                }
            }
        }
        Ok(ClosureVerdict {
            closure: ev.closure,
            status: ev.status,
            witnesses,
            diagnostics: ev.diagnostics,
        })
    }

    /// Decides `u ∈ N^cl_M` (three-valued for bounded kinds).
    pub fn contains(&self, n: &Submodule, u: &[Poly]) -> Result<ElementVerdict> {
        n.ambient().check_element(u)?;
        if let ClosureOperation::TightBounded { candidates, e_max } = self {
            let cands = tight_candidates(n.ring(), candidates.as_deref())?;
            return tight_element(n, u, &cands, *e_max);
        }
        let ev = self.evaluate(n)?;
        if ev.closure.contains(u)? {
            let w = if n.contains(u)? {
                Some(ClosureWitness::plain(
                    u,
                    n.membership(u)?.into_iter().collect(),
                ))
            } else {
                self.witness(n, u)?
            };
            if let Some(w) = &w {
                assert!(w.verify(), "closure witness failed to re-verify");
            }
            Ok(ElementVerdict::In(w))
        } else if ev.status == Status::Unknown {
            Ok(ElementVerdict::Unknown(
                "closure evaluation incomplete".into(),
            ))
        } else if ev.status == Status::Exact {
            Ok(ElementVerdict::Out)
        } else {
            Ok(ElementVerdict::LikelyOut {
                e_max: match ev.status {
                    Status::BoundedCertified { e_max } => e_max,
                    _ => 0,
                },
            })
        }
    }

    fn evaluate(&self, n: &Submodule) -> Result<Evaluated> {
        self.check_ring(n.ring())?;
        let exact = |closure| Evaluated {
            closure,
            status: Status::Exact,
            diagnostics: Vec::new(),
        };
        match self {
            ClosureOperation::Identity => Ok(exact(n.clone())),
            ClosureOperation::Module(s) => Ok(exact(module_closure_eval(s, n, false)?)),
            ClosureOperation::Algebra(s) => Ok(exact(module_closure_eval(s, n, true)?)),
            ClosureOperation::DirectedFamily(list) => {
                let ops: Vec<ClosureOperation> = list
                    .iter()
                    .map(|s| ClosureOperation::Module(s.clone()))
                    .collect();
                ClosureOperation::Sum(ops).evaluate(n)
            }
            ClosureOperation::GeneratedFamily { members, stabilize } => {
                let (closure, _) = generated_family_closure(members, n, *stabilize)?;
                Ok(exact(closure))
            }
            ClosureOperation::Frobenius { e } => Ok(exact(frobenius_closure(n, *e)?)),
            ClosureOperation::TightBounded { candidates, e_max } => {
                tight_closure(n, candidates.as_deref(), *e_max)
            }
            ClosureOperation::Pullback { map, inner } => {
                let (ns, _) = push_forward(map, n)?;
                let inner_ev = inner.evaluate(&ns)?;
                let gens = pull_back_gens(map, n.ambient(), inner_ev.closure.gens());
                Ok(Evaluated {
                    closure: Submodule::new(n.ambient(), gens)?,
                    status: inner_ev.status,
                    diagnostics: inner_ev.diagnostics,
                })
            }
            ClosureOperation::Intersection(list) => {
                let mut acc: Option<Submodule> = None;
                let mut status = Status::Exact;
                let mut diagnostics = Vec::new();
                for c in list {
                    let ev = c.evaluate(n)?;
                    status = status.combine(ev.status);
                    diagnostics.extend(ev.diagnostics);
                    acc = Some(match acc {
                        None => ev.closure,
                        Some(a) => a.intersect(&ev.closure)?,
                    });
                }
                Ok(Evaluated {
                    closure: acc.unwrap(),
                    status,
                    diagnostics,
                })
            }
            ClosureOperation::Sum(list) => {
                let mut acc = n.clone();
                let mut status = Status::Exact;
                let mut diagnostics = Vec::new();
                for c in list {
                    let ev = c.evaluate(n)?;
                    status = status.combine(ev.status);
                    diagnostics.extend(ev.diagnostics);
                    acc = acc.sum(&ev.closure)?;
                }
                // idempotence pass: a directed list is stable here
                let mut again = acc.clone();
                for c in list {
                    again = again.sum(&c.evaluate(&acc)?.closure)?;
                }
                if !again.equals(&acc)? {
                    diagnostics.push(format!(
                        "sum closure is not idempotent; the list is not directed. first pass {}, second pass {}",
                        acc.format(),
                        again.format()
                    ));
                }
                Ok(Evaluated {
                    closure: acc,
                    status,
                    diagnostics,
                })
            }
        }
    }

    fn witness(&self, n: &Submodule, u: &[Poly]) -> Result<Option<ClosureWitness>> {
        if n.contains(u)? {
            return Ok(Some(ClosureWitness::plain(
                u,
                n.membership(u)?.into_iter().collect(),
            )));
        }
        match self {
            ClosureOperation::Identity => Ok(None),
            ClosureOperation::Module(s) => module_closure_witness(s, n, u, false),
            ClosureOperation::Algebra(s) => module_closure_witness(s, n, u, true),
            ClosureOperation::DirectedFamily(list) => {
                let ops: Vec<ClosureOperation> = list
                    .iter()
                    .map(|s| ClosureOperation::Module(s.clone()))
                    .collect();
                ClosureOperation::Sum(ops).witness(n, u)
            }
            ClosureOperation::GeneratedFamily { members, stabilize } => {
                generated_family_witness(members, n, u, *stabilize)
            }
            ClosureOperation::Frobenius { e } => {
                let fn_ = frobenius_submodule(n, *e)?;
                let fu = frobenius_element(n.ring(), u, *e)?;
                let cert = certify_in_span(
                    n.ambient().poly(),
                    &fu,
                    fn_.gens(),
                    &fn_.ambient().lifted_relations(),
                )?;
                Ok(cert.map(|c| ClosureWitness {
                    element: u.to_vec(),
                    identities: vec![c],
                    multiplier: None,
                    levels: vec![*e],
                }))
            }
            ClosureOperation::TightBounded { candidates, e_max } => {
                let cands = tight_candidates(n.ring(), candidates.as_deref())?;
                Ok(tight_element(n, u, &cands, *e_max)?.witness().cloned())
            }
            ClosureOperation::Pullback { map, inner } => {
                let (ns, _) = push_forward(map, n)?;
                Ok(inner.witness(&ns, u)?.map(|mut w| {
                    w.element = u.to_vec();
                    w
                }))
            }
            ClosureOperation::Intersection(list) => {
                let mut ids = Vec::new();
                let mut mult = None;
                let mut levels = Vec::new();
                for c in list {
                    match c.witness(n, u)? {
                        Some(w) => {
                            ids.extend(w.identities);
                            mult = mult.or(w.multiplier);
                            levels.extend(w.levels);
                        }
                        None => return Ok(None),
                    }
                }
                Ok(Some(ClosureWitness {
                    element: u.to_vec(),
                    identities: ids,
                    multiplier: mult,
                    levels,
                }))
            }
            ClosureOperation::Sum(list) => {
                let mut parts: Vec<Vector> = Vec::new();
                for c in list {
                    parts.extend(c.closure(n)?.gens().iter().cloned());
                }
                sum_witness(n, u, &parts, |g| {
                    for c in list {
                        if c.closure(n)?.contains(g)? {
                            return c.witness(n, g);
                        }
                    }
                    Ok(None)
                })
            }
        }
    }
}

/// Expresses `u` through `parts` (plus `N` and the relations) and attaches
/// a witness for every part that is used.
fn sum_witness(
    n: &Submodule,
    u: &[Poly],
    parts: &[Vector],
    mut part_witness: impl FnMut(&Vector) -> Result<Option<ClosureWitness>>,
) -> Result<Option<ClosureWitness>> {
    let mut stated: Vec<Vector> = n.gens().to_vec();
    stated.extend(parts.iter().cloned());
    let Some(cert) = certify_in_span(
        n.ambient().poly(),
        u,
        &stated,
        &n.ambient().lifted_relations(),
    )?
    else {
        return Ok(None);
    };
    let mut identities = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        if cert.coefficients[n.gens().len() + k].is_zero() {
            continue;
        }
        match part_witness(part)? {
            Some(w) => identities.extend(w.identities),
            None => return Ok(None),
        }
    }
    identities.insert(0, cert);
    Ok(Some(ClosureWitness::plain(u, identities)))
}

/// `s_i ⊗ u` inside `S ⊗ M`.
fn tensor_vector(s_index: usize, ns: usize, u: &[Poly]) -> Vector {
    let nm = u.len();
    let mut v = vector::zero(ns * nm);
    for (j, x) in u.iter().enumerate() {
        v[s_index * nm + j] = x.clone();
    }
    v
}

fn tested_generators(s: &ModuleRef, unit_only: bool) -> Vec<usize> {
    if unit_only {
        vec![0]
    } else {
        (0..s.ngens()).collect()
    }
}

/// The module closure `{u ∈ M : s_i ⊗ u ∈ im(S ⊗ N → S ⊗ M) for all i}`,
/// computed as the kernel of `M -> (S⊗M / im(S⊗N))^t`.
pub fn module_closure_eval(s: &ModuleRef, n: &Submodule, unit_only: bool) -> Result<Submodule> {
    let m = n.ambient();
    same_ring(s.ring(), m.ring())?;
    if s.ngens() == 0 {
        return Submodule::whole(m);
    }
    let t = tensor_presentation(s, m)?;
    let ns = s.ngens();
    let nt = t.ngens();
    let mut quotient_rels: Vec<Vector> = t.lifted_relations();
    for i in 0..ns {
        for g in n.gens() {
            quotient_rels.push(tensor_vector(i, ns, g));
        }
    }
    let idx = tested_generators(s, unit_only);
    let blocks = idx.len();
    let mut images = Vec::with_capacity(m.ngens());
    for j in 0..m.ngens() {
        let mut v = vector::zero(blocks * nt);
        for (b, &i) in idx.iter().enumerate() {
            v[b * nt + i * m.ngens() + j] = m.poly().one();
        }
        images.push(v);
    }
    let mut rels = Vec::with_capacity(blocks * quotient_rels.len());
    for b in 0..blocks {
        for r in &quotient_rels {
            let mut v = vector::zero(blocks * nt);
            for (k, x) in r.iter().enumerate() {
                v[b * nt + k] = x.clone();
            }
            rels.push(v);
        }
    }
    let gens = crate::module::preimage_of_span(m.poly(), blocks * nt, &images, &rels)?;
    Submodule::new(m, gens)
}

fn module_closure_witness(
    s: &ModuleRef,
    n: &Submodule,
    u: &[Poly],
    unit_only: bool,
) -> Result<Option<ClosureWitness>> {
    let t = tensor_presentation(s, n.ambient())?;
    let ns = s.ngens();
    let mut identities = Vec::new();
    for i in tested_generators(s, unit_only) {
        let stated: Vec<Vector> = n
            .gens()
            .iter()
            .flat_map(|g| (0..ns).map(move |k| tensor_vector(k, ns, g)))
            .collect();
        let target = tensor_vector(i, ns, u);
        match certify_in_span(n.ambient().poly(), &target, &stated, &t.lifted_relations())? {
            Some(c) => identities.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(ClosureWitness::plain(u, identities)))
}

/// Iterates `N ↦ N + Σ_S N^{cl_S}` until the submodule stops growing.
/// Returns the fixed point and the sequence of stages.
pub fn generated_family_closure(
    members: &[ModuleRef],
    n: &Submodule,
    stabilize: bool,
) -> Result<(Submodule, Vec<Submodule>)> {
    if members.is_empty() {
        return Err(AlgebraError::Precondition("closure family is empty".into()));
    }
    let mut stages = vec![n.clone()];
    let mut current = n.clone();
    for _ in 0..MAX_FAMILY_ROUNDS {
        let next = family_step(members, &current)?;
        if next.equals(&current)? {
            return Ok((current, stages));
        }
        stages.push(next.clone());
        current = next;
        if !stabilize {
            return Ok((current, stages));
        }
    }
    Err(AlgebraError::Resource(format!(
        "generated family closure did not stabilize within {MAX_FAMILY_ROUNDS} rounds"
    )))
}

fn family_step(members: &[ModuleRef], n: &Submodule) -> Result<Submodule> {
    let mut acc = n.clone();
    for s in members {
        acc = acc.sum(&module_closure_eval(s, n, false)?)?;
    }
    Ok(acc)
}

fn generated_family_witness(
    members: &[ModuleRef],
    n: &Submodule,
    u: &[Poly],
    stabilize: bool,
) -> Result<Option<ClosureWitness>> {
    let (_, stages) = generated_family_closure(members, n, stabilize)?;
    // u lies in the last stage; each stage is certified from the previous one
    let mut identities = Vec::new();
    for k in 1..stages.len() {
        let prev = &stages[k - 1];
        let mut parts = Vec::new();
        for s in members {
            parts.extend(module_closure_eval(s, prev, false)?.gens().iter().cloned());
        }
        for g in stages[k].gens() {
            if prev.contains(g)? {
                continue;
            }
            let w = sum_witness(prev, g, &parts, |h| {
                for s in members {
                    if module_closure_eval(s, prev, false)?.contains(h)? {
                        return module_closure_witness(s, prev, h, false);
                    }
                }
                Ok(None)
            })?;
            match w {
                Some(w) => identities.extend(w.identities),
                None => return Ok(None),
            }
        }
    }
    let last = stages.last().unwrap();
    match last.membership(u)? {
        Some(c) => identities.insert(0, c),
        None => return Ok(None),
    }
    Ok(Some(ClosureWitness::plain(u, identities)))
}

/// Frobenius closure at level `e`: `{u ∈ M : u^{[q]} ∈ im(F^e N → F^e M)}`.
///
/// Since `u^{[q]}` is `u` with `x_i` replaced by `x_i^q`, this is the
/// preimage of a submodule under a substitution, computed by elimination in
/// `S[y]` with the relations `y_i - x_i^q`.
pub fn frobenius_closure(n: &Submodule, e: u32) -> Result<Submodule> {
    if e == 0 {
        return Ok(n.clone());
    }
    let m = n.ambient();
    let ring = m.ring();
    let poly = m.poly();
    let q = frobenius_power(ring.characteristic(), e)?;
    let fn_ = frobenius_submodule(n, e)?;
    let mut target_gens: Vec<Vector> = fn_.gens().to_vec();
    target_gens.extend(fn_.ambient().lifted_relations());

    let nv = poly.nvars();
    let mut weights = poly.order().weights().to_vec();
    weights.extend(poly.order().weights().iter().map(|w| w * q));
    let mut names: Vec<String> = poly.names().to_vec();
    names.extend(poly.names().iter().map(|s| format!("{s}__frob")));
    let big = Arc::new(PolyRing::with_order(
        *poly.field(),
        names,
        MonomialOrder::blocks(weights, vec![nv, nv]),
    )?);
    let xmap: Vec<usize> = (0..nv).collect();
    let r = m.ngens();
    let mut gens: Vec<Vector> = target_gens
        .iter()
        .map(|v| v.iter().map(|x| poly.embed(x, &big, &xmap)).collect())
        .collect();
    for i in 0..nv {
        let mut ex = vec![0u32; 2 * nv];
        ex[i] = q;
        let mut ey = vec![0u32; 2 * nv];
        ey[nv + i] = 1;
        let rel = big.sub(&big.term(&ey, 1), &big.term(&ex, 1));
        for j in 0..r {
            let mut v = vector::zero(r);
            v[j] = rel.clone();
            gens.push(v);
        }
    }
    let gb = ModuleGb::compute(&big, r, r, &gens)?;
    let mut back: Vec<Poly> = vec![Poly::zero(); nv];
    back.extend((0..nv).map(|i| poly.var(i)));
    let mut out = Vec::new();
    for g in gb.elements() {
        let x_free = g.iter().all(|p| {
            p.terms()
                .iter()
                .all(|(mono, _)| mono.exps()[..nv].iter().all(|e| *e == 0))
        });
        if x_free {
            out.push(g.iter().map(|p| big.substitute(p, &back, poly)).collect());
        }
    }
    out.extend(n.gens().iter().cloned());
    Submodule::new(m, out)
}

/// Default test-element candidates: the variables (by name), then the
/// Jacobian generators of the defining equations.
pub fn default_candidates(ring: &RingRef) -> Vec<Poly> {
    let mut vars: Vec<(String, Poly)> = ring
        .poly()
        .names()
        .iter()
        .cloned()
        .zip(ring.variables())
        .collect();
    vars.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<Poly> = vars.into_iter().map(|(_, v)| v).collect();
    for j in ring.jacobian_generators() {
        if !out.contains(&j) {
            out.push(j);
        }
    }
    out
}

pub fn tight_candidates(ring: &RingRef, given: Option<&[Poly]>) -> Result<Vec<Poly>> {
    let raw = match given {
        Some(c) => c.to_vec(),
        None => default_candidates(ring),
    };
    let out: Vec<Poly> = raw.into_iter().filter(|c| !ring.is_zero(c)).collect();
    if out.is_empty() {
        return Err(AlgebraError::Precondition(
            "no nonzero test-element candidates".into(),
        ));
    }
    Ok(out)
}

/// Frobenius image data at one level: `F^e(N)` inside `F^e(M)`.
struct Level {
    e: u32,
    sub: Submodule,
}

fn levels(n: &Submodule, e_max: u32) -> Result<Vec<Level>> {
    (0..=e_max)
        .map(|e| {
            Ok(Level {
                e,
                sub: frobenius_submodule(n, e)?,
            })
        })
        .collect()
}

/// Bounded tight-closure test for one element. `IN` needs a single
/// candidate `c` with `c u^{[q]} ∈ N^{[q]}` at every level `0..=e_max`.
pub fn tight_element(
    n: &Submodule,
    u: &[Poly],
    candidates: &[Poly],
    e_max: u32,
) -> Result<ElementVerdict> {
    n.ambient().check_element(u)?;
    if n.contains(u)? {
        let w = ClosureWitness {
            element: u.to_vec(),
            identities: n.membership(u)?.into_iter().collect(),
            multiplier: Some(n.ambient().poly().one()),
            levels: (0..=e_max).collect(),
        };
        return Ok(ElementVerdict::In(Some(w)));
    }
    let poly = n.ambient().poly().clone();
    let run = || -> Result<Option<Poly>> {
        let mut alive: Vec<Poly> = candidates.to_vec();
        for lvl in levels(n, e_max)? {
            let fu = frobenius_element(n.ring(), u, lvl.e)?;
            let gb = lvl.sub.gb()?;
            let r = gb.normal_form(&fu);
            alive.retain(|c| gb.reduces_to_zero(&vector::scale(&poly, c, &r)));
            if alive.is_empty() {
                return Ok(None);
            }
        }
        Ok(alive.into_iter().next())
    };
    let c = match run() {
        Ok(Some(c)) => c,
        Ok(None) => return Ok(ElementVerdict::LikelyOut { e_max }),
        Err(AlgebraError::Resource(msg)) => return Ok(ElementVerdict::Unknown(msg)),
        Err(e) => return Err(e),
    };
    let mut identities = Vec::new();
    for lvl in levels(n, e_max)? {
        let fu = frobenius_element(n.ring(), u, lvl.e)?;
        let target = vector::scale(&poly, &c, &fu);
        let cert = certify_in_span(
            &poly,
            &target,
            lvl.sub.gens(),
            &lvl.sub.ambient().lifted_relations(),
        )?
        .ok_or_else(|| {
            AlgebraError::Construction("tight closure witness failed to certify".into())
        })?;
        identities.push(cert);
    }
    Ok(ElementVerdict::In(Some(ClosureWitness {
        element: u.to_vec(),
        identities,
        multiplier: Some(c),
        levels: (0..=e_max).collect(),
    })))
}

/// `N` plus every generator of `N :_M m` that passes the bounded test.
fn tight_closure(n: &Submodule, candidates: Option<&[Poly]>, e_max: u32) -> Result<Evaluated> {
    let cands = tight_candidates(n.ring(), candidates)?;
    let mut probes: Option<Submodule> = None;
    for x in n.ring().variables() {
        if n.ring().is_zero(&x) {
            continue;
        }
        let c = n.colon(&x)?;
        probes = Some(match probes {
            None => c,
            Some(p) => p.intersect(&c)?,
        });
    }
    let mut gens = n.gens().to_vec();
    let mut status = Status::BoundedCertified { e_max };
    let mut diagnostics = Vec::new();
    if let Some(p) = probes {
        for g in p.gens() {
            if n.contains(g)? {
                continue;
            }
            match tight_element(n, g, &cands, e_max)? {
                ElementVerdict::In(_) => gens.push(g.clone()),
                ElementVerdict::Unknown(msg) => {
                    status = Status::Unknown;
                    diagnostics.push(msg);
                }
                _ => {}
            }
        }
    }
    Ok(Evaluated {
        closure: Submodule::new(n.ambient(), gens)?,
        status,
        diagnostics,
    })
}

/// `N` and `M` base-changed along a quotient map.
fn push_forward(map: &RingMap, n: &Submodule) -> Result<(Submodule, ModuleRef)> {
    let ms = base_change(n.ambient(), map)?;
    let ns = Submodule::new(&ms, n.gens().to_vec())?;
    Ok((ns, ms))
}

fn pull_back_gens(map: &RingMap, m: &ModuleRef, gens: &[Vector]) -> Vec<Vector> {
    let mut out = gens.to_vec();
    for g in map.target().ideal() {
        for i in 0..m.ngens() {
            let mut v = vector::zero(m.ngens());
            v[i] = g.clone();
            out.push(v);
        }
    }
    out
}

/// Finite approximation of the closure test ideal: the intersection of
/// `N :_R N^cl_M` over the given pairs. Adding pairs can only shrink it.
#[derive(Clone, Debug)]
pub struct TestIdealApprox {
    pub ideal: Submodule,
    pub used: usize,
    pub warnings: Vec<String>,
}

pub fn test_ideal_approx(cl: &ClosureOperation, pairs: &[Submodule]) -> Result<TestIdealApprox> {
    let first = pairs
        .first()
        .ok_or_else(|| AlgebraError::Precondition("test ideal needs at least one pair".into()))?;
    let ring = first.ring().clone();
    let mut ideal = Submodule::whole(&PresentedModule::free(&ring, 1))?;
    let mut used = 0;
    let mut warnings = Vec::new();
    for (k, n) in pairs.iter().enumerate() {
        same_ring(n.ring(), &ring)?;
        let v = cl.close(n)?;
        if v.status == Status::Unknown {
            warnings.push(format!("pair {k} skipped: closure verdict UNKNOWN"));
            continue;
        }
        let colon = n.ideal_quotient(&v.closure)?;
        ideal = ideal.intersect(&colon)?;
        used += 1;
    }
    Ok(TestIdealApprox {
        ideal,
        used,
        warnings,
    })
}

/// A commutative square `R -> S`, `B -> C` of algebras with `B` over `R`
/// and `C` over `S`, both presented with `1` as first generator. The map
/// `B -> C` is given by the images of the generators of `B`.
#[derive(Clone, Debug)]
pub struct AlgebraSquare {
    pub ring_map: RingMap,
    pub b: ModuleRef,
    pub c: ModuleRef,
    pub b_to_c: Vec<Vector>,
}

impl AlgebraSquare {
    /// Checks that `B -> C` is `R`-linear through `R -> S` and sends `1` to `1`.
    pub fn check(&self) -> Result<()> {
        same_ring(self.b.ring(), self.ring_map.source())?;
        same_ring(self.c.ring(), self.ring_map.target())?;
        if self.b_to_c.len() != self.b.ngens() {
            return Err(AlgebraError::Dimension(
                "B -> C needs an image per generator of B".into(),
            ));
        }
        let cpoly = self.c.poly();
        let one_diff = vector::sub(cpoly, &self.b_to_c[0], &self.c.generator(0));
        if !self.c.is_zero_element(&one_diff)? {
            return Err(AlgebraError::Precondition(
                "square does not commute: 1 is not sent to 1".into(),
            ));
        }
        for rel in self.b.relations() {
            let coeffs: Vec<Poly> = rel.iter().map(|x| self.ring_map.apply(x)).collect();
            let img = vector::combine(cpoly, self.c.ngens(), &coeffs, &self.b_to_c);
            if !self.c.is_zero_element(&img)? {
                return Err(AlgebraError::Precondition(
                    "square does not commute: B -> C is not R-linear".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Whether `u ∈ N^{cl_B}` implies `1 ⊗ u ∈ (S ⊗ N)^{cl_C}`.
pub fn persistence_check(square: &AlgebraSquare, n: &Submodule, u: &[Poly]) -> Result<bool> {
    square.check()?;
    same_ring(n.ring(), square.ring_map.source())?;
    let lhs = module_closure_eval(&square.b, n, true)?.contains(u)?;
    let ms = base_change(n.ambient(), &square.ring_map)?;
    let gens = n
        .gens()
        .iter()
        .map(|g| crate::homological::base_change_element(&square.ring_map, g))
        .collect();
    let ns = Submodule::new(&ms, gens)?;
    let us = crate::homological::base_change_element(&square.ring_map, u);
    let rhs = module_closure_eval(&square.c, &ns, true)?.contains(&us)?;
    Ok(!lhs || rhs)
}
