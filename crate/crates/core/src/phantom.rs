//! Phantom extensions `α: R -> M`, decided through their presentations.
//!
//! With `M` presented by an `n x m` matrix `ν1` whose first generator is
//! `α(1)`, let `φ` be the top row and `B ⊆ R^m` the span of the remaining
//! rows. Then `α` is cl-phantom iff `φ ∈ B^cl_{R^m}`.

use std::fmt;

use crate::closure::{tight_candidates, ClosureOperation, ClosureWitness, ElementVerdict, Status};
use crate::error::{AlgebraError, Result};
use crate::homological::{base_change, frobenius_power, hom_into_ring};
use crate::module::{certify_in_span, ModuleMap, ModuleRef, PresentedModule, Submodule};
use crate::poly::Poly;
use crate::ring::{RingMap, RingRef};
use crate::vector::{self, Vector};

/// An injective map `R -> M` with `α(1)` the first generator of `M`.
#[derive(Clone, Debug)]
pub struct PhantomInstance {
    pub ring: RingRef,
    pub module: ModuleRef,
    pub alpha: ModuleMap,
    pub nu1: Vec<Vector>,
    pub nu: Vec<Vector>,
    pub phi_row: Vector,
}

impl PhantomInstance {
    pub fn n(&self) -> usize {
        self.module.ngens()
    }

    pub fn m(&self) -> usize {
        self.nu1.len()
    }

    /// The span `B ⊆ R^m` of rows `2..n` of `ν1`.
    pub fn row_span(&self) -> Result<Submodule> {
        let free = PresentedModule::free(&self.ring, self.m());
        let rows = vector::transpose(&self.nu1, self.n());
        Submodule::new(&free, rows[1..].to_vec())
    }

    /// An equivalent instance with every column that has a unit entry
    /// below the top row eliminated together with that generator, and the
    /// isomorphism from this instance's module onto the trimmed one.
    pub fn trimmed(&self) -> Result<(PhantomInstance, ModuleMap)> {
        let poly = self.ring.poly();
        let field = poly.field();
        let n = self.n();
        let mut cols: Vec<Vector> = self.nu1.clone();
        let mut images: Vec<Vector> = (0..n).map(|j| vector::unit(poly, n, j)).collect();
        let mut degs = self.module.degrees().to_vec();
        loop {
            let pivot = cols.iter().enumerate().find_map(|(ci, c)| {
                c.iter()
                    .enumerate()
                    .skip(1)
                    .find(|(_, x)| x.is_constant() && !x.is_zero())
                    .map(|(r, x)| (ci, r, x.constant_coeff()))
            });
            let Some((ci, r, u)) = pivot else { break };
            let piv = cols.swap_remove(ci);
            let inv = field.inv(u);
            for c in cols.iter_mut().chain(images.iter_mut()) {
                if !c[r].is_zero() {
                    let s = poly.scale(&c[r], inv);
                    *c = vector::sub(poly, c, &vector::scale(poly, &s, &piv));
                }
                c.remove(r);
            }
            degs.remove(r);
        }
        let module = PresentedModule::new(&self.ring, degs.len(), cols, Some(degs))?;
        let iso = ModuleMap::new(&self.module, &module, images)?;
        Ok((instance_of(&module)?, iso))
    }

    /// The presentation of `Q = coker α`: `ν1` without its top row.
    pub fn quotient_module(&self) -> Result<ModuleRef> {
        let degs = self.module.degrees()[1..].to_vec();
        PresentedModule::new(&self.ring, self.n() - 1, self.nu.clone(), Some(degs))
    }
}

/// Builds the instance of an injective `α: R -> M`. If `α(1)` is not the
/// first generator of `M`, it is prepended as a new generator together
/// with the relation expressing it.
pub fn build_instance(alpha: &ModuleMap) -> Result<PhantomInstance> {
    let src = alpha.source();
    if src.ngens() != 1 || !src.relations().is_empty() {
        return Err(AlgebraError::Precondition(
            "source of α must be the free module R".into(),
        ));
    }
    if !alpha.is_injective()? {
        return Err(AlgebraError::Precondition("α is not injective".into()));
    }
    let m = alpha.target();
    let ring = m.ring().clone();
    let a1 = m.normal_form(&alpha.images()[0])?;
    let first = m.normal_form(&m.generator(0))?;
    let (module, alpha) = if a1 == first && m.degrees()[0] == 0 {
        (m.clone(), alpha.clone())
    } else {
        let poly = m.poly();
        let n = m.ngens();
        let v = &alpha.images()[0];
        let mut cols: Vec<Vector> = m
            .relations()
            .iter()
            .map(|c| {
                let mut w = vec![Poly::zero()];
                w.extend(c.iter().cloned());
                w
            })
            .collect();
        let mut link = vec![poly.one()];
        link.extend(v.iter().map(|x| poly.neg(x)));
        cols.push(link);
        let mut degs = vec![0];
        degs.extend(m.degrees().iter().copied());
        let module = PresentedModule::new(&ring, n + 1, cols, Some(degs))?;
        let alpha = ModuleMap::new(src, &module, vec![module.generator(0)])?;
        (module, alpha)
    };
    let nu1 = module.relations().to_vec();
    let nu = nu1.iter().map(|c| c[1..].to_vec()).collect();
    let phi_row = nu1.iter().map(|c| c[0].clone()).collect();
    Ok(PhantomInstance {
        ring,
        module,
        alpha,
        nu1,
        nu,
        phi_row,
    })
}

/// Instance for `R -> M`, `1 ↦ e_1`, given the module alone.
pub fn instance_of(module: &ModuleRef) -> Result<PhantomInstance> {
    let r = PresentedModule::free(module.ring(), 1);
    let alpha = ModuleMap::new(&r, module, vec![module.generator(0)])?;
    build_instance(&alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhantomOutcome {
    Phantom,
    NotPhantom,
    LikelyNotPhantom,
    Unknown,
}

impl fmt::Display for PhantomOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PhantomOutcome::Phantom => "PHANTOM",
            PhantomOutcome::NotPhantom => "NOT_PHANTOM",
            PhantomOutcome::LikelyNotPhantom => "LIKELY_NOT_PHANTOM",
            PhantomOutcome::Unknown => "UNKNOWN",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct PhantomVerdict {
    pub outcome: PhantomOutcome,
    pub status: Status,
    pub witness: Option<ClosureWitness>,
    /// `0^cl_R`, recorded alongside every verdict.
    pub zero_closure: Submodule,
}

impl PhantomVerdict {
    pub fn is_phantom(&self) -> bool {
        self.outcome == PhantomOutcome::Phantom
    }
}

fn status_of(cl: &ClosureOperation) -> Status {
    match cl {
        ClosureOperation::TightBounded { e_max, .. } => Status::BoundedCertified { e_max: *e_max },
        _ if cl.is_exact() => Status::Exact,
        _ => Status::BoundedCertified { e_max: 0 },
    }
}

/// Decides whether `φ ∈ B^cl_{R^m}`.
pub fn phantom_check(cl: &ClosureOperation, inst: &PhantomInstance) -> Result<PhantomVerdict> {
    let zero = Submodule::zero(&PresentedModule::free(&inst.ring, 1));
    let zero_closure = cl.closure(&zero)?;
    let status = status_of(cl);
    if inst.m() == 0 || vector::is_zero(&inst.phi_row) {
        return Ok(PhantomVerdict {
            outcome: PhantomOutcome::Phantom,
            status,
            witness: None,
            zero_closure,
        });
    }
    let b = inst.row_span()?;
    let v = cl.contains(&b, &inst.phi_row)?;
    let (outcome, status) = match &v {
        ElementVerdict::In(_) => (PhantomOutcome::Phantom, status),
        ElementVerdict::Out => (PhantomOutcome::NotPhantom, status),
        ElementVerdict::LikelyOut { .. } => (PhantomOutcome::LikelyNotPhantom, status),
        ElementVerdict::Unknown(_) => (PhantomOutcome::Unknown, Status::Unknown),
    };
    Ok(PhantomVerdict {
        outcome,
        status,
        witness: v.witness().cloned(),
        zero_closure,
    })
}

/// `{γ(e_1) : γ ∈ Hom_R(M, R)}` for a module whose first generator is `e_1`.
pub fn evaluation_ideal_at_first(module: &ModuleRef) -> Result<Submodule> {
    let dual = hom_into_ring(module)?;
    let gens = dual.evaluation_ideal(&module.generator(0))?;
    Submodule::ideal(module.ring(), gens)
}

/// The ideal of `c` such that `c α` splits, i.e. `{γ(α(1)) : γ ∈ Hom(M, R)}`.
pub fn split_multiplier_ideal(inst: &PhantomInstance) -> Result<Submodule> {
    evaluation_ideal_at_first(&inst.module)
}

/// `B^{[q]} :_R φ^{[q]}`, the split multiplier ideal of `F^e` of the instance.
pub fn frobenius_split_ideal(inst: &PhantomInstance, e: u32) -> Result<Submodule> {
    let q = frobenius_power(inst.ring.characteristic(), e)?;
    let poly = inst.ring.poly();
    let free = PresentedModule::free(&inst.ring, inst.m());
    let b = inst.row_span()?;
    let bq: Vec<Vector> = b
        .gens()
        .iter()
        .map(|g| vector::frobenius(poly, g, q))
        .collect();
    let bq = Submodule::new(&free, bq)?;
    let phiq = Submodule::new(&free, vec![vector::frobenius(poly, &inst.phi_row, q)])?;
    bq.ideal_quotient(&phiq)
}

#[derive(Clone, Debug)]
pub struct StarVerdict {
    pub outcome: PhantomOutcome,
    pub e_max: u32,
    /// `J_e` for `e = 0..=e_max`.
    pub ideals: Vec<Submodule>,
    pub intersection: Submodule,
    pub multiplier: Option<Poly>,
    pub witness: Option<ClosureWitness>,
}

/// Frobenius split-multiplier criterion: phantom (bounded) when one nonzero
/// `c` of degree at most the largest candidate degree lies in every `J_e`.
/// Candidates are tried first, then the basis of `∩ J_e`.
pub fn star_phantom_check(
    inst: &PhantomInstance,
    e_max: u32,
    candidates: Option<&[Poly]>,
) -> Result<StarVerdict> {
    let ring = &inst.ring;
    let poly = ring.poly();
    let cands = tight_candidates(ring, candidates)?;
    let bound = cands
        .iter()
        .filter_map(|c| poly.degree(c))
        .max()
        .unwrap_or(0);
    let mut ideals = Vec::new();
    for e in 0..=e_max {
        ideals.push(if inst.m() == 0 || vector::is_zero(&inst.phi_row) {
            Submodule::whole(&PresentedModule::free(ring, 1))?
        } else {
            frobenius_split_ideal(inst, e)?
        });
    }
    let mut inter = ideals[0].clone();
    for j in &ideals[1..] {
        inter = inter.intersect(j)?;
    }
    let one = poly.one();
    let mut c = if inter.contains(std::slice::from_ref(&one))? {
        Some(one)
    } else {
        cands
            .iter()
            .find(|c| inter.contains(&[(*c).clone()]).unwrap_or(false))
            .cloned()
    };
    if c.is_none() {
        for g in inter.canonical()?.gens() {
            let x = &g[0];
            if !ring.is_zero(x) && poly.degree(x).unwrap_or(i64::MAX) <= bound {
                c = Some(x.clone());
                break;
            }
        }
    }
    let Some(c) = c else {
        return Ok(StarVerdict {
            outcome: PhantomOutcome::LikelyNotPhantom,
            e_max,
            ideals,
            intersection: inter,
            multiplier: None,
            witness: None,
        });
    };
    let mut identities = Vec::new();
    if inst.m() > 0 {
        let b = inst.row_span()?;
        let lifts = PresentedModule::free(ring, inst.m()).lifted_relations();
        for e in 0..=e_max {
            let q = frobenius_power(ring.characteristic(), e)?;
            let bq: Vec<Vector> = b
                .gens()
                .iter()
                .map(|g| vector::frobenius(poly, g, q))
                .collect();
            let target = vector::scale(poly, &c, &vector::frobenius(poly, &inst.phi_row, q));
            let cert = certify_in_span(poly, &target, &bq, &lifts)?.ok_or_else(|| {
                AlgebraError::Construction("split multiplier failed to certify".into())
            })?;
            identities.push(cert);
        }
    }
    Ok(StarVerdict {
        outcome: PhantomOutcome::Phantom,
        e_max,
        ideals,
        intersection: inter,
        multiplier: Some(c.clone()),
        witness: Some(ClosureWitness {
            element: inst.phi_row.clone(),
            identities,
            multiplier: Some(c),
            levels: (0..=e_max).collect(),
        }),
    })
}

/// `Sym²(M)` with `α₂: R -> Sym²(M)`, `1 ↦ e_1 ⊗ e_1`.
#[derive(Clone, Debug)]
pub struct Sym2Instance {
    pub base: PhantomInstance,
    /// Generators `e_i ⊗ e_j`, index `i * n + j`.
    pub sym2: ModuleRef,
    pub alpha2: ModuleMap,
    pub canonical_matrix: Vec<Vector>,
    /// `B ⊗ B` columns followed by the symmetry columns.
    pub tensor_square_matrix: Vec<Vector>,
    pub symmetry_columns: usize,
}

impl Sym2Instance {
    /// The instance of `α₂`, or an error when `α₂` is not injective.
    pub fn instance(&self) -> Result<PhantomInstance> {
        build_instance(&self.alpha2)
    }
}

fn symmetry_columns(poly: &crate::poly::PolyRing, n: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vector::zero(n * n);
            v[i * n + j] = poly.one();
            v[j * n + i] = poly.neg(&poly.one());
            out.push(v);
        }
    }
    out
}

pub fn sym2_extension(inst: &PhantomInstance) -> Result<Sym2Instance> {
    let ring = &inst.ring;
    let poly = ring.poly();
    let n = inst.n();
    let mut canonical = Vec::new();
    for b in &inst.nu1 {
        for i in 0..n {
            let mut v = vector::zero(n * n);
            for (j, x) in b.iter().enumerate() {
                v[j * n + i] = x.clone();
            }
            canonical.push(v);
        }
    }
    let sym = symmetry_columns(poly, n);
    let symmetry_count = sym.len();
    canonical.extend(sym.iter().cloned());
    let mut tensor_square = Vec::new();
    for bk in &inst.nu1 {
        for bl in &inst.nu1 {
            let mut v = vector::zero(n * n);
            for i in 0..n {
                for j in 0..n {
                    v[i * n + j] = poly.mul(&bk[i], &bl[j]);
                }
            }
            tensor_square.push(v);
        }
    }
    tensor_square.extend(sym);
    let degs: Vec<i64> = (0..n * n)
        .map(|k| inst.module.degrees()[k / n] + inst.module.degrees()[k % n])
        .collect();
    let sym2 = PresentedModule::new(ring, n * n, canonical.clone(), Some(degs))?;
    let r = PresentedModule::free(ring, 1);
    let alpha2 = ModuleMap::new(&r, &sym2, vec![sym2.generator(0)])?;
    Ok(Sym2Instance {
        base: inst.clone(),
        sym2,
        alpha2,
        canonical_matrix: canonical,
        tensor_square_matrix: tensor_square,
        symmetry_columns: symmetry_count,
    })
}

/// `Sym^{≤2}(M) / (1 - e_1) Sym^{≤1}(M)` and its comparison with `Sym²(M)`.
#[derive(Clone, Debug)]
pub struct Symle2Quotient {
    /// Generators `1`, `e_i` (index `1 + i`), `e_i ⊗ e_j` (index `1 + n + i n + j`).
    pub module: ModuleRef,
    pub comparison: ModuleMap,
    pub is_iso: bool,
}

pub fn symle2_quotient(inst: &PhantomInstance) -> Result<Symle2Quotient> {
    let ring = &inst.ring;
    let poly = ring.poly();
    let n = inst.n();
    let total = 1 + n + n * n;
    let s2 = sym2_extension(inst)?;
    let mut cols = Vec::new();
    for b in &inst.nu1 {
        let mut v = vector::zero(total);
        for (i, x) in b.iter().enumerate() {
            v[1 + i] = x.clone();
        }
        cols.push(v);
    }
    for c in &s2.canonical_matrix {
        let mut v = vector::zero(total);
        for (k, x) in c.iter().enumerate() {
            v[1 + n + k] = x.clone();
        }
        cols.push(v);
    }
    let mut v = vector::zero(total);
    v[0] = poly.one();
    v[1] = poly.neg(&poly.one());
    cols.push(v);
    for i in 0..n {
        let mut v = vector::zero(total);
        v[1 + i] = poly.one();
        v[1 + n + i] = poly.neg(&poly.one());
        cols.push(v);
    }
    let d = inst.module.degrees();
    let mut degs = vec![0];
    degs.extend(d.iter().copied());
    degs.extend((0..n * n).map(|k| d[k / n] + d[k % n]));
    let module = PresentedModule::new(ring, total, cols, Some(degs))?;
    let mut images = vec![s2.sym2.generator(0)];
    images.extend((0..n).map(|i| s2.sym2.generator(i)));
    images.extend((0..n * n).map(|k| s2.sym2.generator(k)));
    let comparison = ModuleMap::new(&module, &s2.sym2, images)?;
    let is_iso = comparison.is_injective()? && comparison.is_surjective()?;
    Ok(Symle2Quotient {
        module,
        comparison,
        is_iso,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomVerdict {
    Vacuous,
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for AxiomVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomVerdict::Vacuous => "VACUOUS",
            AxiomVerdict::Holds => "HOLDS",
            AxiomVerdict::Fails => "FAILS",
            AxiomVerdict::Unknown => "UNKNOWN",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraAxiomReport {
    pub verdict: AxiomVerdict,
    pub base: PhantomVerdict,
    pub sym2: Option<PhantomVerdict>,
    pub reason: Option<String>,
}

/// If `α` is cl-phantom, checks that `α₂: R -> Sym²(M)` is cl-phantom too.
pub fn algebra_axiom_check(
    cl: &ClosureOperation,
    inst: &PhantomInstance,
) -> Result<AlgebraAxiomReport> {
    let base = phantom_check(cl, inst)?;
    match base.outcome {
        PhantomOutcome::Phantom => {}
        PhantomOutcome::Unknown => {
            return Ok(AlgebraAxiomReport {
                verdict: AxiomVerdict::Unknown,
                base,
                sym2: None,
                reason: Some("phantom verdict for α is UNKNOWN".into()),
            })
        }
        _ => {
            return Ok(AlgebraAxiomReport {
                verdict: AxiomVerdict::Vacuous,
                base,
                sym2: None,
                reason: None,
            })
        }
    }
    let s2 = sym2_extension(inst)?;
    let inst2 = match s2.instance() {
        Ok(i) => i,
        Err(AlgebraError::Precondition(msg)) => {
            return Ok(AlgebraAxiomReport {
                verdict: AxiomVerdict::Fails,
                base,
                sym2: None,
                reason: Some(format!("α₂ is not injective: {msg}")),
            })
        }
        Err(e) => return Err(e),
    };
    let v2 = phantom_check(cl, &inst2)?;
    let (verdict, reason) = match v2.outcome {
        PhantomOutcome::Phantom => (AxiomVerdict::Holds, None),
        PhantomOutcome::NotPhantom => (AxiomVerdict::Fails, Some("α₂ is not phantom".to_string())),
        PhantomOutcome::LikelyNotPhantom => (
            AxiomVerdict::Unknown,
            Some("no bounded witness for α₂".to_string()),
        ),
        PhantomOutcome::Unknown => (
            AxiomVerdict::Unknown,
            Some("phantom verdict for α₂ is UNKNOWN".into()),
        ),
    };
    Ok(AlgebraAxiomReport {
        verdict,
        base,
        sym2: Some(v2),
        reason,
    })
}

/// Whether `1` lies in the split multiplier ideal of `id_A ⊗ α` over `A`.
pub fn splits_after_base_change(inst: &PhantomInstance, map: &RingMap) -> Result<bool> {
    let ma = base_change(&inst.module, map)?;
    let ideal = evaluation_ideal_at_first(&ma)?;
    ideal.contains(&[map.target().poly().one()])
}

/// A copy of the instance presented with one redundant generator (a
/// combination of the others, with its defining relation) and one
/// redundant relation column (the sum of the existing ones).
pub fn padded_presentation(inst: &PhantomInstance) -> Result<PhantomInstance> {
    let ring = &inst.ring;
    let poly = ring.poly();
    let n = inst.n();
    let mut cols: Vec<Vector> = inst
        .nu1
        .iter()
        .map(|c| {
            let mut v = c.clone();
            v.push(Poly::zero());
            v
        })
        .collect();
    if !cols.is_empty() {
        let mut s = vector::zero(n + 1);
        for c in &cols {
            s = vector::add(poly, &s, c);
        }
        if !vector::is_zero(&s) {
            cols.push(s);
        }
    }
    // new generator w with w = e_n
    let mut link = vector::zero(n + 1);
    link[n] = poly.one();
    link[n - 1] = poly.neg(&poly.one());
    cols.push(link);
    let mut degs = inst.module.degrees().to_vec();
    degs.push(degs[n - 1]);
    let module = PresentedModule::new(ring, n + 1, cols, Some(degs))?;
    instance_of(&module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::GradedRing;

    fn fermat_instance() -> PhantomInstance {
        let f = GradedRing::quotient(7, &["z", "x", "y"], &["x^3+y^3+z^3"], true).unwrap();
        let p = |s: &str| f.parse(s).unwrap();
        let m = PresentedModule::new(
            &f,
            3,
            vec![vec![p("z^2"), p("-x"), p("-y")]],
            Some(vec![0, 1, 1]),
        )
        .unwrap();
        instance_of(&m).unwrap()
    }

    #[test]
    fn fermat_instance_extraction() {
        let inst = fermat_instance();
        let p = |s: &str| inst.ring.parse(s).unwrap();
        assert_eq!(inst.phi_row, vec![p("z^2")]);
        assert_eq!(inst.nu, vec![vec![p("-x"), p("-y")]]);
        let v = phantom_check(&ClosureOperation::Identity, &inst).unwrap();
        assert_eq!(v.outcome, PhantomOutcome::NotPhantom);
        let t = ClosureOperation::TightBounded {
            candidates: None,
            e_max: 2,
        };
        let v = phantom_check(&t, &inst).unwrap();
        assert_eq!(v.outcome, PhantomOutcome::Phantom);
        assert_eq!(v.witness.unwrap().multiplier.unwrap(), p("x"));
    }

    #[test]
    fn split_ideal_agrees_with_colon() {
        let inst = fermat_instance();
        let a = split_multiplier_ideal(&inst).unwrap();
        let b = frobenius_split_ideal(&inst, 0).unwrap();
        assert!(a.equals(&b).unwrap());
        assert!(!a.contains(&[inst.ring.poly().one()]).unwrap());
        let s = star_phantom_check(&inst, 2, None).unwrap();
        assert_eq!(s.outcome, PhantomOutcome::Phantom);
        assert_eq!(s.multiplier.unwrap(), inst.ring.parse("x").unwrap());
    }

    #[test]
    fn sym2_counts_and_symle2() {
        let inst = fermat_instance();
        let s2 = sym2_extension(&inst).unwrap();
        assert_eq!(s2.symmetry_columns, 3);
        assert_eq!(s2.canonical_matrix.len(), 6);
        assert_eq!(s2.sym2.ngens(), 9);
        assert!(symle2_quotient(&inst).unwrap().is_iso);
    }

    #[test]
    fn alpha_not_first_generator_is_reordered() {
        let r = GradedRing::polynomial(7, &["x"]).unwrap();
        let r1 = PresentedModule::free(&r, 1);
        let m = PresentedModule::free(&r, 2);
        let alpha = ModuleMap::new(&r1, &m, vec![m.generator(1)]).unwrap();
        let inst = build_instance(&alpha).unwrap();
        assert_eq!(inst.n(), 3);
        assert!(phantom_check(&ClosureOperation::Identity, &inst)
            .unwrap()
            .is_phantom());
        let torsion = PresentedModule::cyclic(&r, &[r.parse("x").unwrap()]);
        let bad = ModuleMap::new(&r1, &torsion, vec![torsion.generator(0)]).unwrap();
        assert!(build_instance(&bad).is_err());
    }
}
