//! Module and partial algebra modifications, the finite-stage builder that
//! alternates them with symmetric squares, and phantom checks along chains.

use std::fmt;
use std::sync::Arc;

use crate::closure::ClosureOperation;
use crate::error::{AlgebraError, Result};
use crate::gb::{spairs_used, with_spair_budget};
use crate::homological::{is_partial_sop_on, quotient_by_irrelevant};
use crate::module::{
    certify_in_span, MembershipCertificate, ModuleMap, ModuleRef, PresentedModule, Submodule,
};
use crate::phantom::{
    build_instance, instance_of, phantom_check, sym2_extension, PhantomInstance, PhantomOutcome,
    PhantomVerdict,
};
use crate::poly::Poly;
use crate::ring::RingRef;
use crate::vector::{self, Vector};

/// A relation `x_{k+1} u = Σ x_i m_i` in `M` with `u ∉ (x_1..x_k) M`.
#[derive(Clone, Debug)]
pub struct BadRelation {
    pub module: ModuleRef,
    pub sop: Vec<Poly>,
    pub witness: Vector,
    /// `m_1..m_k`.
    pub multipliers: Vec<Vector>,
    /// Normal form of `u` modulo `(x_1..x_k) M`; nonzero.
    pub residue: Vector,
    pub certificate: MembershipCertificate,
}

impl BadRelation {
    pub fn k(&self) -> usize {
        self.sop.len() - 1
    }

    /// Re-checks the equation and the non-membership.
    pub fn verify(&self) -> Result<bool> {
        let m = &self.module;
        let poly = m.poly();
        let k = self.k();
        let mut lhs = vector::scale(poly, &self.sop[k], &self.witness);
        for (x, mi) in self.sop[..k].iter().zip(&self.multipliers) {
            lhs = vector::sub(poly, &lhs, &vector::scale(poly, x, mi));
        }
        Ok(self.certificate.verify()
            && m.is_zero_element(&lhs)?
            && !prefix_submodule(m, &self.sop[..k])?.contains(&self.witness)?)
    }
}

/// `(x_1..x_k) M`.
fn prefix_submodule(m: &ModuleRef, xs: &[Poly]) -> Result<Submodule> {
    let gens = prefix_generators(m, xs);
    Submodule::new(m, gens)
}

fn prefix_generators(m: &ModuleRef, xs: &[Poly]) -> Vec<Vector> {
    let mut gens = Vec::new();
    for x in xs {
        for j in 0..m.ngens() {
            let mut v = vector::zero(m.ngens());
            v[j] = x.clone();
            gens.push(v);
        }
    }
    gens
}

/// The first Groebner-ordered generator of `(x_1..x_k)M :_M x_{k+1}` that
/// is not in `(x_1..x_k)M`, with the coefficients of its relation.
///
/// Requires `x_1..x_k` to be a partial system of parameters on `M` and
/// `x_{k+1}` to be a nonzero element of the irrelevant ideal.
pub fn find_bad_relation(m: &ModuleRef, sop: &[Poly]) -> Result<Option<BadRelation>> {
    let Some((last, prefix)) = sop.split_last() else {
        return Err(AlgebraError::Precondition(
            "empty parameter sequence".into(),
        ));
    };
    let ring = m.ring();
    if ring.is_zero(last) || ring.poly().degree(&ring.reduce(last)).unwrap_or(0) == 0 {
        return Err(AlgebraError::Precondition(
            "last parameter must be a nonzero element of the irrelevant ideal".into(),
        ));
    }
    if !is_partial_sop_on(m, prefix)? {
        return Err(AlgebraError::Precondition(
            "parameters are not part of a system of parameters on the module".into(),
        ));
    }
    let n = prefix_submodule(m, prefix)?;
    let colon = n.colon(last)?;
    let poly = m.poly();
    for u in colon.canonical()?.gens() {
        if n.contains(u)? {
            continue;
        }
        let target = vector::scale(poly, last, u);
        let stated = prefix_generators(m, prefix);
        let cert = certify_in_span(poly, &target, &stated, &m.lifted_relations())?
            .ok_or_else(|| AlgebraError::Construction("colon element failed to certify".into()))?;
        let nm = m.ngens();
        let multipliers = (0..prefix.len())
            .map(|i| cert.coefficients[i * nm..(i + 1) * nm].to_vec())
            .collect();
        let residue = n.gb()?.normal_form(u);
        return Ok(Some(BadRelation {
            module: m.clone(),
            sop: sop.to_vec(),
            witness: u.clone(),
            multipliers,
            residue,
            certificate: cert,
        }));
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct Modification {
    pub instance: PhantomInstance,
    /// `M -> M'`, `m ↦ m`.
    pub map: ModuleMap,
    pub relation: BadRelation,
}

/// `M' = M[X_1..X_k]_{≤1} / R F` with `F = m_{k+1} - Σ x_i X_i`.
///
/// Generators of `M'` are the `w_j` followed by the blocks `w_j X_i`
/// (index `(i + 1) n + j`). Relations are `ν1` on every block and the
/// column of `F`, which carries the coordinates of `m_{k+1}` on the first
/// block and `-x_i` at `w_1 X_i`.
pub fn partial_algebra_modification(
    inst: &PhantomInstance,
    rel: &BadRelation,
) -> Result<Modification> {
    let m = &inst.module;
    if !Arc::ptr_eq(m, &rel.module)
        && (m.ngens() != rel.module.ngens() || m.relations() != rel.module.relations())
    {
        return Err(AlgebraError::Precondition(
            "relation does not live on the instance's module".into(),
        ));
    }
    let k = rel.k();
    if k == 0 {
        return Err(AlgebraError::Precondition(
            "a modification needs k ≥ 1".into(),
        ));
    }
    let ring = &inst.ring;
    let poly = ring.poly();
    let n = m.ngens();
    let total = n * (k + 1);
    let mut cols = Vec::new();
    for block in 0..=k {
        for c in &inst.nu1 {
            let mut v = vector::zero(total);
            for (j, x) in c.iter().enumerate() {
                v[block * n + j] = x.clone();
            }
            cols.push(v);
        }
    }
    let mut f = vector::zero(total);
    for (j, x) in rel.witness.iter().enumerate() {
        f[j] = x.clone();
    }
    for (i, x) in rel.sop[..k].iter().enumerate() {
        f[(i + 1) * n] = poly.neg(x);
    }
    cols.push(f);
    let free = PresentedModule::free_graded(ring, m.degrees().to_vec());
    let du = free
        .column_degree(&rel.witness)?
        .ok_or_else(|| AlgebraError::Precondition("zero witness".into()))?;
    let mut degs = m.degrees().to_vec();
    for x in &rel.sop[..k] {
        let dx = poly.degree(x).unwrap_or(0);
        degs.extend(m.degrees().iter().map(|d| d + du - dx));
    }
    let module = PresentedModule::new(ring, total, cols, Some(degs))?;
    let images = (0..n).map(|j| module.generator(j)).collect();
    let map = ModuleMap::new(m, &module, images)?;
    let instance = instance_of(&module)?;
    Ok(Modification {
        instance,
        map,
        relation: rel.clone(),
    })
}

#[derive(Clone, Debug)]
pub struct SymStep {
    pub instance: PhantomInstance,
    /// `M -> Sym²(M)`, `m ↦ m ⊗ e_1`.
    pub map: ModuleMap,
}

/// The instance `R -> Sym²(M)`, `1 ↦ e_1 ⊗ e_1`.
pub fn sym_step(inst: &PhantomInstance) -> Result<SymStep> {
    let s2 = sym2_extension(inst)?;
    let n = inst.n();
    let images = (0..n).map(|j| s2.sym2.generator(j * n)).collect();
    let map = ModuleMap::new(&inst.module, &s2.sym2, images)?;
    Ok(SymStep {
        instance: s2.instance()?,
        map,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageKind {
    Start,
    Modify,
    Sym2,
}

impl fmt::Display for StageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageKind::Start => "START",
            StageKind::Modify => "MODIFY",
            StageKind::Sym2 => "SYM2",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub kind: StageKind,
    /// The stage module in trimmed form.
    pub instance: PhantomInstance,
    /// `M_{i-1} -> M_i`; absent for the starting stage.
    pub step_map: Option<ModuleMap>,
    /// `R -> M_i`, the composite of all step maps.
    pub map_from_ring: ModuleMap,
    /// Whether the image of `1` is outside `m M_i`.
    pub unit_outside_max: bool,
    pub phantom: PhantomVerdict,
    pub relation: Option<BadRelation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildStatus {
    Completed,
    /// `1 ∈ m M` at some stage.
    Failure(String),
    BudgetExhausted(String),
}

impl fmt::Display for BuildStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildStatus::Completed => f.write_str("COMPLETED"),
            BuildStatus::Failure(_) => f.write_str("FAILURE"),
            BuildStatus::BudgetExhausted(_) => f.write_str("BUDGET_EXHAUSTED"),
        }
    }
}

/// Limits for [`bcm_build`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildBudget {
    /// S-pairs over the whole build; also the per-basis limit.
    pub spairs: u64,
    /// Largest module (after trimming) a symmetric square may produce.
    pub max_generators: usize,
}

impl Default for BuildBudget {
    fn default() -> Self {
        BuildBudget {
            spairs: crate::gb::DEFAULT_SPAIR_BUDGET,
            max_generators: 64,
        }
    }
}

/// Stages of a truncated construction; evidence only, never a claim that
/// a big Cohen-Macaulay algebra has been built.
#[derive(Clone, Debug)]
pub struct BuildTrace {
    pub stages: Vec<Stage>,
    pub status: BuildStatus,
    pub spairs: u64,
    /// Parameter sequences skipped because their precondition failed.
    pub skipped: Vec<String>,
}

fn make_stage(
    kind: StageKind,
    cl: &ClosureOperation,
    raw: &PhantomInstance,
    step: Option<&ModuleMap>,
    prev: Option<&Stage>,
    relation: Option<BadRelation>,
) -> Result<Stage> {
    let (instance, iso) = raw.trimmed()?;
    let step_map = match step {
        Some(s) => Some(s.then(&iso)?),
        None => None,
    };
    let map_from_ring = match (&step_map, prev) {
        (Some(s), Some(p)) => p.map_from_ring.then(s)?,
        _ => raw.alpha.then(&iso)?,
    };
    let q = quotient_by_irrelevant(&instance.module)?;
    let unit_outside_max = q.is_nonzero(&map_from_ring.images()[0])?;
    let phantom = phantom_check(cl, &instance)?;
    Ok(Stage {
        kind,
        instance,
        step_map,
        map_from_ring,
        unit_outside_max,
        phantom,
        relation,
    })
}

/// Runs `rounds` modification sweeps with a symmetric-square step between
/// consecutive sweeps. A sweep applies the first bad relation found,
/// trying parameter sequences `x_1..x_{k+1}` (k ≥ 1) in the given order.
pub fn bcm_build(
    ring: &RingRef,
    cl: &ClosureOperation,
    sops: &[Vec<Poly>],
    rounds: usize,
    budget: BuildBudget,
) -> Result<BuildTrace> {
    if rounds == 0 {
        return Err(AlgebraError::Precondition(
            "rounds must be at least 1".into(),
        ));
    }
    if sops.iter().any(|s| s.len() < 2) {
        return Err(AlgebraError::Precondition(
            "each parameter sequence needs at least two elements".into(),
        ));
    }
    let start = spairs_used();
    let mut stages: Vec<Stage> = Vec::new();
    let mut skipped = Vec::new();
    let used = || spairs_used() - start;
    let exhausted = || BuildStatus::BudgetExhausted(format!("more than {} S-pairs", budget.spairs));
    let result = with_spair_budget(budget.spairs, || -> Result<BuildStatus> {
        let r = PresentedModule::free(ring, 1);
        stages.push(make_stage(
            StageKind::Start,
            cl,
            &instance_of(&r)?,
            None,
            None,
            None,
        )?);
        for round in 0..rounds {
            if round > 0 {
                let cur = stages.last().unwrap();
                let n = cur.instance.n();
                if n * n > budget.max_generators {
                    return Ok(BuildStatus::BudgetExhausted(format!(
                        "symmetric square would have {} generators (limit {})",
                        n * n,
                        budget.max_generators
                    )));
                }
                let ss = sym_step(&cur.instance)?;
                let st = make_stage(
                    StageKind::Sym2,
                    cl,
                    &ss.instance,
                    Some(&ss.map),
                    Some(cur),
                    None,
                )?;
                let bad = !st.unit_outside_max;
                stages.push(st);
                if bad {
                    return Ok(BuildStatus::Failure("image of 1 lies in mM".into()));
                }
                if used() > budget.spairs {
                    return Ok(exhausted());
                }
            }
            let cur = stages.last().unwrap();
            let mut found = None;
            for (si, sop) in sops.iter().enumerate() {
                match find_bad_relation(&cur.instance.module, sop) {
                    Ok(Some(rel)) => {
                        found = Some(rel);
                        break;
                    }
                    Ok(None) => {}
                    Err(AlgebraError::Precondition(msg)) => skipped.push(format!(
                        "stage {}, sequence {}: {msg}",
                        stages.len() - 1,
                        si + 1
                    )),
                    Err(e) => return Err(e),
                }
            }
            if let Some(rel) = found {
                let md = partial_algebra_modification(&cur.instance, &rel)?;
                let st = make_stage(
                    StageKind::Modify,
                    cl,
                    &md.instance,
                    Some(&md.map),
                    Some(cur),
                    Some(rel),
                )?;
                let bad = !st.unit_outside_max;
                stages.push(st);
                if bad {
                    return Ok(BuildStatus::Failure("image of 1 lies in mM".into()));
                }
            }
            if used() > budget.spairs {
                return Ok(exhausted());
            }
        }
        Ok(BuildStatus::Completed)
    });
    let status = match result {
        Ok(s) => s,
        Err(AlgebraError::Resource(msg)) => BuildStatus::BudgetExhausted(msg),
        Err(e) => return Err(e),
    };
    Ok(BuildTrace {
        stages,
        status,
        spairs: used(),
        skipped,
    })
}

#[derive(Clone, Debug)]
pub struct ChainVerdict {
    pub stages: Vec<PhantomVerdict>,
    /// 1-based index of the first stage that is not phantom.
    pub first_failure: Option<usize>,
}

impl ChainVerdict {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn composable(a: &ModuleRef, b: &ModuleRef) -> bool {
    Arc::ptr_eq(a, b) || (a.ngens() == b.ngens() && a.relations() == b.relations())
}

/// Phantom checks for every `R -> M_i` along `R -> M_1 -> ... -> M_t`.
/// Each check runs on a trimmed presentation of `M_i`.
pub fn chain_phantom_check(chain: &[ModuleMap], cl: &ClosureOperation) -> Result<ChainVerdict> {
    let first = chain
        .first()
        .ok_or_else(|| AlgebraError::Precondition("empty chain".into()))?;
    for w in chain.windows(2) {
        if !composable(w[0].target(), w[1].source()) {
            return Err(AlgebraError::Precondition(
                "chain maps do not compose".into(),
            ));
        }
    }
    let mut comp = first.clone();
    let mut verdicts = Vec::new();
    for (i, f) in chain.iter().enumerate() {
        if i > 0 {
            comp = comp.then(f)?;
        }
        let (inst, _) = build_instance(&comp)?.trimmed()?;
        verdicts.push(phantom_check(cl, &inst)?);
    }
    let first_failure = verdicts
        .iter()
        .position(|v| v.outcome != PhantomOutcome::Phantom)
        .map(|i| i + 1);
    Ok(ChainVerdict {
        stages: verdicts,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::GradedRing;

    fn fermat() -> RingRef {
        GradedRing::quotient(7, &["z", "x", "y"], &["x^3+y^3+z^3"], true).unwrap()
    }

    #[test]
    fn fermat_bad_relation_and_modification() {
        let f = fermat();
        let p = |s: &str| f.parse(s).unwrap();
        let r = PresentedModule::free(&f, 1);
        let rel = find_bad_relation(&r, &[p("x"), p("y"), p("z")])
            .unwrap()
            .unwrap();
        assert_eq!(rel.witness, vec![p("z^2")]);
        assert!(rel.verify().unwrap());
        let md = partial_algebra_modification(&instance_of(&r).unwrap(), &rel).unwrap();
        assert_eq!(md.instance.module.ngens(), 3);
        assert_eq!(md.instance.nu1, vec![vec![p("z^2"), p("-x"), p("-y")]]);
        assert!(md.map.is_injective().unwrap());
    }

    #[test]
    fn regular_ring_has_no_bad_relations() {
        let r = GradedRing::polynomial(7, &["x", "y"]).unwrap();
        let m = PresentedModule::free(&r, 1);
        let xs = r.variables();
        assert!(find_bad_relation(&m, &xs).unwrap().is_none());
        let q = PresentedModule::cyclic(&r, &[xs[0].clone()]);
        assert!(find_bad_relation(&q, &xs).is_err());
    }

    #[test]
    fn chains() {
        let f = fermat();
        let p = |s: &str| f.parse(s).unwrap();
        let r = PresentedModule::free(&f, 1);
        let id = ModuleMap::identity(&r);
        let v = chain_phantom_check(&[id.clone(), id.clone(), id], &ClosureOperation::Identity)
            .unwrap();
        assert!(v.holds());
        let rel = find_bad_relation(&r, &[p("x"), p("y"), p("z")])
            .unwrap()
            .unwrap();
        let md = partial_algebra_modification(&instance_of(&r).unwrap(), &rel).unwrap();
        let ss = sym_step(&md.instance).unwrap();
        let chain = vec![md.instance.alpha.clone(), ss.map.clone()];
        let v = chain_phantom_check(&chain, &ClosureOperation::Identity).unwrap();
        assert_eq!(v.first_failure, Some(1));
    }

    #[test]
    fn builds() {
        let r = GradedRing::polynomial(7, &["x", "y"]).unwrap();
        let tr = bcm_build(
            &r,
            &ClosureOperation::Identity,
            &[r.variables()],
            2,
            BuildBudget::default(),
        )
        .unwrap();
        assert_eq!(tr.status, BuildStatus::Completed);
        assert!(tr
            .stages
            .iter()
            .all(|s| s.kind != StageKind::Modify && s.unit_outside_max));

        let f = fermat();
        let p = |s: &str| f.parse(s).unwrap();
        let sops = vec![vec![p("x"), p("y")], vec![p("x"), p("y"), p("z")]];
        let tr = bcm_build(
            &f,
            &ClosureOperation::Identity,
            &sops,
            2,
            BuildBudget::default(),
        )
        .unwrap();
        let kinds: Vec<StageKind> = tr.stages.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            [
                StageKind::Start,
                StageKind::Modify,
                StageKind::Sym2,
                StageKind::Modify
            ]
        );
        assert_eq!(tr.stages[1].phantom.outcome, PhantomOutcome::NotPhantom);
        for w in tr.stages.windows(2) {
            let step = w[1].step_map.as_ref().unwrap();
            assert!(w[0]
                .map_from_ring
                .then(step)
                .unwrap()
                .equals(&w[1].map_from_ring)
                .unwrap());
            assert!(w[1].unit_outside_max);
        }
        let small = BuildBudget {
            max_generators: 4,
            ..BuildBudget::default()
        };
        let tr = bcm_build(&f, &ClosureOperation::Identity, &sops, 2, small).unwrap();
        assert!(matches!(tr.status, BuildStatus::BudgetExhausted(_)));
        assert_eq!(tr.stages.len(), 2);
    }
}
