//! Instance-level checks of the closure laws and of functoriality,
//! semi-residuality, faithfulness and generalized colon capturing.
//!
//! Every check is a refuter: PASS means no counterexample among the
//! tested instances. A FAIL carries a counterexample that can be re-checked
//! from its two submodules alone.

use std::fmt;

use crate::closure::{ClosureOperation, ClosureWitness, ElementVerdict, Status};
use crate::error::{AlgebraError, Result};
use crate::homological::is_partial_sop;
use crate::module::{MembershipCertificate, ModuleMap, PresentedModule, Submodule};
use crate::poly::Poly;
use crate::random::LawInstance;
use crate::ring::RingRef;
use crate::vector::{self, Vector};

/// Printed with every report.
pub const PASS_MEANING: &str = "PASS means no counterexample in the tested instances";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomOutcome {
    Pass,
    VacuousPass,
    Fail,
    Unknown,
}

impl fmt::Display for AxiomOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomOutcome::Pass => "PASS",
            AxiomOutcome::VacuousPass => "VACUOUS_PASS",
            AxiomOutcome::Fail => "FAIL",
            AxiomOutcome::Unknown => "UNKNOWN",
        })
    }
}

/// `element ∈ member_of` but `element ∉ excluded_from`, where the axiom
/// requires the first submodule to lie in the second.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub element: Vector,
    pub member_of: Submodule,
    pub membership: Option<MembershipCertificate>,
    /// Closure witness when `member_of` is itself a closure.
    pub witness: Option<ClosureWitness>,
    pub excluded_from: Submodule,
    pub seed: Option<u64>,
}

impl Counterexample {
    fn new(element: &[Poly], member_of: &Submodule, excluded_from: &Submodule) -> Result<Self> {
        Ok(Counterexample {
            element: element.to_vec(),
            membership: member_of.membership(element)?,
            member_of: member_of.clone(),
            witness: None,
            excluded_from: excluded_from.clone(),
            seed: None,
        })
    }

    /// Re-runs both memberships.
    pub fn recheck(&self) -> Result<bool> {
        let certified = self
            .membership
            .as_ref()
            .is_none_or(MembershipCertificate::verify)
            && self.witness.as_ref().is_none_or(ClosureWitness::verify);
        Ok(certified
            && self.member_of.contains(&self.element)?
            && !self.excluded_from.contains(&self.element)?)
    }
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub axiom: &'static str,
    pub instance: String,
    pub outcome: AxiomOutcome,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub detail: String,
}

impl AxiomReport {
    fn new(axiom: &'static str, instance: String, outcome: AxiomOutcome, status: Status) -> Self {
        AxiomReport {
            axiom,
            instance,
            outcome,
            status,
            counterexample: None,
            detail: String::new(),
        }
    }

    fn fail(mut self, cx: Counterexample, detail: impl Into<String>) -> Self {
        self.outcome = AxiomOutcome::Fail;
        self.counterexample = Some(cx);
        self.detail = detail.into();
        self
    }

    fn unknown(mut self, detail: impl Into<String>) -> Self {
        self.outcome = AxiomOutcome::Unknown;
        self.status = Status::Unknown;
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        matches!(self.outcome, AxiomOutcome::Pass | AxiomOutcome::VacuousPass)
    }
}

enum Lookup {
    In,
    Out,
    Undecided(String),
}

/// `u ∈ N^cl` given the computed closure, consulting the bounded test
/// directly when the closure is not exact.
fn lookup(
    cl: &ClosureOperation,
    n: &Submodule,
    closed: &Submodule,
    status: Status,
    u: &[Poly],
) -> Result<Lookup> {
    if closed.contains(u)? {
        return Ok(Lookup::In);
    }
    if status == Status::Exact {
        return Ok(Lookup::Out);
    }
    Ok(match cl.contains(n, u)? {
        ElementVerdict::In(_) => Lookup::In,
        ElementVerdict::Out => Lookup::Out,
        ElementVerdict::LikelyOut { e_max } => {
            Lookup::Undecided(format!("not found up to level {e_max}"))
        }
        ElementVerdict::Unknown(msg) => Lookup::Undecided(msg),
    })
}

/// `f(N^cl_M) ⊆ f(N)^cl_W`.
pub fn check_functoriality(
    cl: &ClosureOperation,
    f: &ModuleMap,
    n: &Submodule,
) -> Result<AxiomReport> {
    if !std::sync::Arc::ptr_eq(n.ambient(), f.source())
        && n.ambient().relations() != f.source().relations()
    {
        return Err(AlgebraError::Precondition(
            "submodule does not live in the source of the map".into(),
        ));
    }
    let (ncl, s1, _) = cl.evaluate_status(n)?;
    let w = f.target();
    let fn_ = Submodule::new(
        w,
        n.gens()
            .iter()
            .map(|g| f.apply(g))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let (fcl, s2, _) = cl.evaluate_status(&fn_)?;
    let status = s1.combine(s2);
    let inst = format!(
        "N with {} generators, map into a module with {} generators",
        n.gens().len(),
        w.ngens()
    );
    let report = AxiomReport::new("functoriality", inst, AxiomOutcome::Pass, status);
    if status == Status::Unknown {
        return Ok(report.unknown("closure evaluation incomplete"));
    }
    let image = Submodule::new(
        w,
        ncl.gens()
            .iter()
            .map(|g| f.apply(g))
            .collect::<Result<Vec<_>>>()?,
    )?;
    for v in image.gens() {
        match lookup(cl, &fn_, &fcl, status, v)? {
            Lookup::In => {}
            Lookup::Out => {
                let cx = Counterexample::new(v, &image, &fcl)?;
                return Ok(report.fail(cx, "image of a closure generator lies outside f(N)^cl"));
            }
            Lookup::Undecided(msg) => return Ok(report.unknown(msg)),
        }
    }
    Ok(report)
}

/// If `N^cl_M = N` then `0^cl_{M/N} = 0`.
pub fn check_semiresiduality(cl: &ClosureOperation, n: &Submodule) -> Result<AxiomReport> {
    let (ncl, s1, _) = cl.evaluate_status(n)?;
    let inst = format!(
        "N with {} generators in a module with {} generators",
        n.gens().len(),
        n.ambient().ngens()
    );
    let mut report = AxiomReport::new("semiresiduality", inst, AxiomOutcome::Pass, s1);
    if s1 == Status::Unknown {
        return Ok(report.unknown("closure evaluation incomplete"));
    }
    if !ncl.equals(n)? {
        report.outcome = AxiomOutcome::VacuousPass;
        report.detail = "N is not closed".into();
        return Ok(report);
    }
    let q = n.quotient_module()?;
    let zero = Submodule::zero(&q);
    let (zcl, s2, _) = cl.evaluate_status(&zero)?;
    report.status = s1.combine(s2);
    if report.status == Status::Unknown {
        return Ok(report.unknown("closure evaluation incomplete"));
    }
    Ok(match zcl.gens().first() {
        None => report,
        Some(g) => {
            let mut cx = Counterexample::new(g, &zcl, &zero)?;
            cx.witness = cl.contains(&zero, g)?.witness().cloned();
            report.fail(cx, "0 is not closed in M/N")
        }
    })
}

fn ring_report(cl: &ClosureOperation, axiom: &'static str, n: Submodule) -> Result<AxiomReport> {
    let (ncl, status, _) = cl.evaluate_status(&n)?;
    let report = AxiomReport::new(axiom, "R".into(), AxiomOutcome::Pass, status);
    if status == Status::Unknown {
        return Ok(report.unknown("closure evaluation incomplete"));
    }
    for g in ncl.gens() {
        if !n.contains(g)? {
            let mut cx = Counterexample::new(g, &ncl, &n)?;
            cx.witness = cl.contains(&n, g)?.witness().cloned();
            let what = if axiom == "faithfulness" {
                "m is not closed in R"
            } else {
                "0 is not closed in R"
            };
            return Ok(report.fail(cx, what));
        }
    }
    Ok(report)
}

/// `m^cl_R = m`.
pub fn check_faithfulness(cl: &ClosureOperation, ring: &RingRef) -> Result<AxiomReport> {
    let m = Submodule::ideal(ring, ring.variables())?;
    ring_report(cl, "faithfulness", m)
}

/// `0^cl_R = 0`.
pub fn check_zero_closed(cl: &ClosureOperation, ring: &RingRef) -> Result<AxiomReport> {
    let zero = Submodule::zero(&PresentedModule::free(ring, 1));
    ring_report(cl, "zero_closed", zero)
}

/// `(Rv)^cl_M ∩ ker f ⊆ (Jv)^cl_M` for `f: M -> R/J` onto, `J = (x_1..x_k)`
/// and `f(v) = x_{k+1} + J`.
pub fn check_gcc(
    cl: &ClosureOperation,
    xs: &[Poly],
    f: &ModuleMap,
    v: &[Poly],
) -> Result<AxiomReport> {
    let Some((last, prefix)) = xs.split_last() else {
        return Err(AlgebraError::Precondition(
            "empty parameter sequence".into(),
        ));
    };
    let m = f.source();
    let ring = m.ring();
    if !is_partial_sop(ring, xs)? {
        return Err(AlgebraError::Precondition(
            "not part of a system of parameters".into(),
        ));
    }
    let t = f.target();
    let j_rel: Vec<Poly> = t.relations().iter().map(|c| c[0].clone()).collect();
    if t.ngens() != 1
        || !Submodule::ideal(ring, j_rel)?.equals(&Submodule::ideal(ring, prefix.to_vec())?)?
    {
        return Err(AlgebraError::Precondition(
            "target must be R/(x_1..x_k)".into(),
        ));
    }
    if !f.is_surjective()? {
        return Err(AlgebraError::Precondition("map is not surjective".into()));
    }
    let diff = vector::sub(ring.poly(), &f.apply(v)?, std::slice::from_ref(last));
    if !t.is_zero_element(&diff)? {
        return Err(AlgebraError::Precondition(
            "f(v) differs from x_{k+1} modulo J".into(),
        ));
    }
    let rv = Submodule::new(m, vec![v.to_vec()])?;
    let (rvcl, s1, _) = cl.evaluate_status(&rv)?;
    let jv = Submodule::new(
        m,
        prefix
            .iter()
            .map(|x| vector::scale(ring.poly(), x, v))
            .collect(),
    )?;
    let (jvcl, s2, _) = cl.evaluate_status(&jv)?;
    let status = s1.combine(s2);
    let inst = format!("k = {}, module with {} generators", prefix.len(), m.ngens());
    let report = AxiomReport::new("gcc", inst, AxiomOutcome::Pass, status);
    if status == Status::Unknown {
        return Ok(report.unknown("closure evaluation incomplete"));
    }
    let lhs = rvcl.intersect(&f.kernel()?)?;
    for g in lhs.gens() {
        match lookup(cl, &jv, &jvcl, status, g)? {
            Lookup::In => {}
            Lookup::Out => {
                let cx = Counterexample::new(g, &lhs, &jvcl)?;
                return Ok(report.fail(cx, "element of (Rv)^cl ∩ ker f outside (Jv)^cl"));
            }
            Lookup::Undecided(msg) => return Ok(report.unknown(msg)),
        }
    }
    Ok(report)
}

fn law_check(
    cl: &ClosureOperation,
    inst: &LawInstance,
) -> Result<Option<(Counterexample, &'static str)>> {
    let ncl = cl.closure(&inst.small)?;
    for g in inst.small.gens() {
        if !ncl.contains(g)? {
            return Ok(Some((
                Counterexample::new(g, &inst.small, &ncl)?,
                "extension",
            )));
        }
    }
    let again = cl.closure(&ncl)?;
    for g in again.gens() {
        if !ncl.contains(g)? {
            return Ok(Some((Counterexample::new(g, &again, &ncl)?, "idempotence")));
        }
    }
    let lcl = cl.closure(&inst.large)?;
    for g in ncl.gens() {
        if !lcl.contains(g)? {
            return Ok(Some((
                Counterexample::new(g, &ncl, &lcl)?,
                "order preservation",
            )));
        }
    }
    Ok(None)
}

/// Extension, idempotence and order preservation on every instance. With
/// `parallel`, instances are split across threads; the first failure in
/// instance order is reported either way.
pub fn closure_law_suite(
    cl: &ClosureOperation,
    instances: &[LawInstance],
    parallel: bool,
) -> Result<AxiomReport> {
    let outcomes: Vec<Result<Option<(Counterexample, &'static str)>>> =
        if parallel && instances.len() > 1 {
            let threads = std::thread::available_parallelism()
                .map_or(1, |n| n.get())
                .min(instances.len());
            let chunk = instances.len().div_ceil(threads);
            std::thread::scope(|s| {
                let handles: Vec<_> = instances
                    .chunks(chunk)
                    .map(|part| {
                        s.spawn(move || part.iter().map(|i| law_check(cl, i)).collect::<Vec<_>>())
                    })
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("law check thread panicked"))
                    .collect()
            })
        } else {
            instances.iter().map(|i| law_check(cl, i)).collect()
        };
    let status = if cl.is_exact() {
        Status::Exact
    } else {
        match cl {
            ClosureOperation::TightBounded { e_max, .. } => {
                Status::BoundedCertified { e_max: *e_max }
            }
            _ => Status::BoundedCertified { e_max: 0 },
        }
    };
    let mut report = AxiomReport::new(
        "closure_laws",
        format!("{} instances", instances.len()),
        AxiomOutcome::Pass,
        status,
    );
    for (inst, out) in instances.iter().zip(outcomes) {
        match out {
            Ok(None) => {}
            Ok(Some((mut cx, law))) => {
                cx.seed = inst.seed;
                report.instance = inst.describe();
                return Ok(report.fail(cx, format!("{law} fails")));
            }
            Err(AlgebraError::Resource(msg)) => return Ok(report.unknown(msg)),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
