//! Executes compiled commands and turns their results into reports.

use std::time::Instant;

use clalg::axioms::{self, AxiomOutcome, AxiomReport, PASS_MEANING};
use clalg::closure::{test_ideal_approx, ClosureOperation, ElementVerdict, Status};
use clalg::error::{AlgebraError, Result};
use clalg::gb::{reset_spair_counter, spairs_used, with_spair_budget};
use clalg::modification::{
    bcm_build, chain_phantom_check, find_bad_relation, partial_algebra_modification, BuildBudget,
    BuildStatus,
};
use clalg::module::MembershipCertificate;
use clalg::phantom::{
    algebra_axiom_check, build_instance, instance_of, phantom_check, star_phantom_check,
    sym2_extension, symle2_quotient, PhantomInstance, PhantomVerdict,
};
use clalg::random::random_instance;
use clalg::vector;
use serde_json::json;

use crate::report::{Report, ReportBuilder, ReportStatus};
use crate::session::{Action, AxiomCheck, Command, InstanceSource, Session};
use crate::Flags;

fn instance(source: &InstanceSource) -> Result<PhantomInstance> {
    match source {
        InstanceSource::Module(m) => instance_of(m),
        InstanceSource::Map(f) => build_instance(f),
    }
}

fn element_status(cl: &ClosureOperation, v: &ElementVerdict) -> Status {
    match (v, cl) {
        (ElementVerdict::Unknown(_), _) => Status::Unknown,
        (_, ClosureOperation::TightBounded { e_max, .. }) => {
            Status::BoundedCertified { e_max: *e_max }
        }
        _ if cl.is_exact() => Status::Exact,
        _ => Status::BoundedCertified { e_max: 0 },
    }
}

fn phantom_details(
    b: &mut ReportBuilder,
    prefix: &str,
    inst: &PhantomInstance,
    v: &PhantomVerdict,
) {
    b.detail(&format!("{prefix}generators"), inst.n());
    b.detail(&format!("{prefix}relations"), inst.m());
    if let Some(c) = v.witness.as_ref().and_then(|w| w.multiplier.as_ref()) {
        b.detail(&format!("{prefix}multiplier"), inst.ring.format(c));
    }
    phantom_certificate(b, &format!("{prefix}phantom"), inst, v);
    b.detail(&format!("{prefix}zero_closure"), v.zero_closure.format());
}

/// The witness of a phantom verdict; when `φ` is zero (or there are no
/// relations) the certificate is the empty combination.
fn phantom_certificate(
    b: &mut ReportBuilder,
    label: &str,
    inst: &PhantomInstance,
    v: &PhantomVerdict,
) {
    if !v.is_phantom() {
        return;
    }
    match &v.witness {
        Some(w) => b.witness(label, inst.ring.poly(), w),
        None => b.membership(
            label,
            &MembershipCertificate {
                ring: inst.ring.poly().clone(),
                element: inst.phi_row.clone(),
                generators: Vec::new(),
                n_stated: 0,
                coefficients: Vec::new(),
            },
        ),
    }
}

fn axiom_report(r: AxiomReport) -> ReportBuilder {
    let verdict = match r.outcome {
        AxiomOutcome::Pass => "PASS",
        AxiomOutcome::VacuousPass => "VACUOUS_PASS",
        AxiomOutcome::Fail => "FAIL",
        AxiomOutcome::Unknown => "UNKNOWN",
    };
    let mut b = ReportBuilder::new(verdict, r.status);
    b.detail("axiom", r.axiom);
    b.detail("instance", &r.instance);
    if !r.detail.is_empty() {
        b.detail("detail", &r.detail);
    }
    if r.passed() {
        b.detail("meaning", PASS_MEANING);
    }
    if let Some(cx) = &r.counterexample {
        let poly = cx.member_of.ring().poly();
        if let Some(c) = &cx.membership {
            b.membership("counterexample_membership", c);
        }
        if let Some(w) = &cx.witness {
            b.witness("counterexample_witness", poly, w);
        }
        let v = json!({
            "kind": "counterexample",
            "element": cx.element.iter().map(|p| poly.format(p)).collect::<Vec<_>>(),
            "member_of": cx.member_of.format(),
            "excluded_from": cx.excluded_from.format(),
            "seed": cx.seed,
        });
        let ok = cx.recheck().unwrap_or(false);
        b.checked(v, ok);
    }
    b
}

fn execute(action: &Action, flags: &Flags) -> Result<ReportBuilder> {
    Ok(match action {
        Action::Gb(n) => {
            let gb = n.gb()?;
            let poly = n.ring().poly();
            let mut b = ReportBuilder::new("COMPUTED", Status::Exact);
            let elems: Vec<String> = gb
                .elements()
                .iter()
                .map(|g| vector::format(poly, g))
                .collect();
            b.detail("size", elems.len());
            b.detail("preimage_basis", format!("[{}]", elems.join(", ")));
            b
        }
        Action::Member(n, u) => match n.membership(u)? {
            Some(c) => {
                let mut b = ReportBuilder::new("IN", Status::Exact);
                b.membership("member", &c);
                b
            }
            None => ReportBuilder::new("OUT", Status::Exact),
        },
        Action::Close(cl, n, None) => {
            let v = cl.close(n)?;
            let poly = n.ring().poly();
            let mut b = ReportBuilder::new("COMPUTED", v.status);
            b.detail("closure", v.closure.format());
            b.detail("added", v.witnesses.len());
            b.detail("closed", v.witnesses.is_empty());
            if let Status::BoundedCertified { e_max } = v.status {
                b.detail("e_max", e_max);
            }
            for d in &v.diagnostics {
                b.detail("diagnostic", d);
            }
            for w in &v.witnesses {
                b.witness("closure", poly, w);
            }
            b
        }
        Action::Close(cl, n, Some(u)) => {
            let v = cl.contains(n, u)?;
            let mut b = ReportBuilder::new(v.label(), element_status(cl, &v));
            match &v {
                ElementVerdict::LikelyOut { e_max } => {
                    b.detail("e_max", e_max);
                }
                ElementVerdict::Unknown(msg) => {
                    b.detail("reason", msg);
                }
                _ => {}
            }
            if let Some(w) = v.witness() {
                if let Some(c) = &w.multiplier {
                    b.detail("multiplier", n.ring().format(c));
                }
                if !w.levels.is_empty() {
                    b.detail("levels", format!("{:?}", w.levels));
                }
                b.witness("closure", n.ring().poly(), w);
            }
            b
        }
        Action::Phantom(cl, src) => {
            let inst = instance(src)?;
            let v = phantom_check(cl, &inst)?;
            let mut b = ReportBuilder::new(v.outcome.to_string(), v.status);
            b.detail("closure", cl.name());
            phantom_details(&mut b, "", &inst, &v);
            b
        }
        Action::Star {
            source,
            e_max,
            candidates,
        } => {
            let inst = instance(source)?;
            let v = star_phantom_check(&inst, *e_max, candidates.as_deref())?;
            let mut b = ReportBuilder::new(
                v.outcome.to_string(),
                Status::BoundedCertified { e_max: *e_max },
            );
            b.detail("e_max", e_max);
            for (e, j) in v.ideals.iter().enumerate() {
                b.detail(&format!("J_{e}"), j.format());
            }
            b.detail("intersection", v.intersection.format());
            if let Some(c) = &v.multiplier {
                b.detail("multiplier", inst.ring.format(c));
            }
            if let Some(w) = &v.witness {
                b.witness("star", inst.ring.poly(), w);
            }
            b
        }
        Action::Sym2(src) => {
            let inst = instance(src)?;
            let s2 = sym2_extension(&inst)?;
            let q = symle2_quotient(&inst)?;
            let mut b = ReportBuilder::new(if q.is_iso { "ISO" } else { "NOT_ISO" }, Status::Exact);
            b.detail("generators", inst.n());
            b.detail("sym2_generators", s2.sym2.ngens());
            b.detail("sym2_relations", s2.canonical_matrix.len());
            b.detail("symmetry_columns", s2.symmetry_columns);
            b.detail("alpha2_injective", s2.alpha2.is_injective()?);
            b
        }
        Action::AlgebraAxiom(cl, src) => {
            let inst = instance(src)?;
            let r = algebra_axiom_check(cl, &inst)?;
            let status = r
                .sym2
                .as_ref()
                .map_or(r.base.status, |s| r.base.status.combine(s.status));
            let mut b = ReportBuilder::new(r.verdict.to_string(), status);
            b.detail("closure", cl.name());
            b.detail("alpha", r.base.outcome);
            if let Some(s) = &r.sym2 {
                b.detail("alpha2", s.outcome);
            }
            if let Some(reason) = &r.reason {
                b.detail("reason", reason);
            }
            phantom_certificate(&mut b, "alpha_phantom", &inst, &r.base);
            if let Some(s) = &r.sym2 {
                let inst2 = sym2_extension(&inst)?.instance()?;
                phantom_certificate(&mut b, "alpha2_phantom", &inst2, s);
            }
            b
        }
        Action::Modify(src, sop) => {
            let inst = instance(src)?;
            let ring = &inst.ring;
            match find_bad_relation(&inst.module, sop)? {
                None => {
                    let mut b = ReportBuilder::new("NO_BAD_RELATION", Status::Exact);
                    b.detail("sequence_length", sop.len());
                    b
                }
                Some(rel) => {
                    let md = partial_algebra_modification(&inst, &rel)?;
                    let poly = ring.poly();
                    let mut b = ReportBuilder::new("MODIFIED", Status::Exact);
                    b.detail("k", rel.k());
                    b.detail("witness", vector::format(poly, &rel.witness));
                    for (i, m) in rel.multipliers.iter().enumerate() {
                        b.detail(&format!("multiplier_{}", i + 1), vector::format(poly, m));
                    }
                    b.detail("generators", md.instance.n());
                    b.detail("relations", md.instance.m());
                    b.detail("map_injective", md.map.is_injective()?);
                    b.membership("bad_relation", &rel.certificate);
                    let ok = rel.verify()?;
                    b.checked(json!({"kind": "bad_relation_recheck"}), ok);
                    b
                }
            }
        }
        Action::Build {
            closure,
            ring,
            sops,
            rounds,
            max_generators,
        } => {
            let mut budget = BuildBudget {
                spairs: flags.budget,
                ..BuildBudget::default()
            };
            if let Some(g) = max_generators {
                budget.max_generators = *g;
            }
            let tr = bcm_build(ring, closure, sops, *rounds, budget)?;
            let status = tr
                .stages
                .iter()
                .fold(Status::Exact, |s, st| s.combine(st.phantom.status));
            let mut b = ReportBuilder::new(tr.status.to_string(), status);
            if let BuildStatus::Failure(m) | BuildStatus::BudgetExhausted(m) = &tr.status {
                b.detail("reason", m);
            }
            b.resource_abort = matches!(tr.status, BuildStatus::BudgetExhausted(_));
            b.detail("closure", closure.name());
            b.detail("stages", tr.stages.len());
            for (i, st) in tr.stages.iter().enumerate() {
                b.detail(
                    &format!("stage_{i}"),
                    format!(
                        "{} generators={} relations={} unit_outside_max={} phantom={}",
                        st.kind,
                        st.instance.n(),
                        st.instance.m(),
                        st.unit_outside_max,
                        st.phantom.outcome
                    ),
                );
                if let Some(rel) = &st.relation {
                    b.membership(&format!("stage_{i}_bad_relation"), &rel.certificate);
                }
                phantom_certificate(
                    &mut b,
                    &format!("stage_{i}_phantom"),
                    &st.instance,
                    &st.phantom,
                );
            }
            for s in &tr.skipped {
                b.detail("skipped", s);
            }
            b.detail(
                "note",
                "a finite truncation of the construction; evidence only",
            );
            b
        }
        Action::TestIdeal(cl, pairs) => {
            let t = test_ideal_approx(cl, pairs)?;
            let status = if t.used == 0 {
                Status::Unknown
            } else if cl.is_exact() {
                Status::Exact
            } else {
                Status::BoundedCertified { e_max: 0 }
            };
            let mut b = ReportBuilder::new("COMPUTED", status);
            b.detail("ideal", t.ideal.canonical()?.format());
            b.detail("pairs_used", t.used);
            for w in &t.warnings {
                b.detail("warning", w);
            }
            b
        }
        Action::Chain(cl, maps) => {
            let v = chain_phantom_check(maps, cl)?;
            let status = v
                .stages
                .iter()
                .fold(Status::Exact, |s, st| s.combine(st.status));
            let mut b = ReportBuilder::new(if v.holds() { "HOLDS" } else { "FAILS" }, status);
            if let Some(i) = v.first_failure {
                b.detail("first_failure", i);
            }
            let mut comp = maps[0].clone();
            for (i, st) in v.stages.iter().enumerate() {
                if i > 0 {
                    comp = comp.then(&maps[i])?;
                }
                b.detail(&format!("stage_{}", i + 1), st.outcome);
                if st.is_phantom() {
                    let (inst, _) = build_instance(&comp)?.trimmed()?;
                    phantom_certificate(&mut b, &format!("stage_{}_phantom", i + 1), &inst, st);
                }
            }
            b
        }
        Action::Axiom(cl, check) => {
            let r = match check {
                AxiomCheck::Functoriality(f, n) => axioms::check_functoriality(cl, f, n)?,
                AxiomCheck::Semiresiduality(n) => axioms::check_semiresiduality(cl, n)?,
                AxiomCheck::Faithfulness(ring) => axioms::check_faithfulness(cl, ring)?,
                AxiomCheck::ZeroClosed(ring) => axioms::check_zero_closed(cl, ring)?,
                AxiomCheck::Gcc { map, xs, v } => axioms::check_gcc(cl, xs, map, v)?,
                AxiomCheck::Laws { ring, count } => {
                    let instances = (0..*count)
                        .map(|i| random_instance(ring, flags.seed.wrapping_add(i)))
                        .collect::<Result<Vec<_>>>()?;
                    axioms::closure_law_suite(cl, &instances, flags.parallel)?
                }
            };
            let mut b = axiom_report(r);
            b.detail("closure", cl.name());
            b
        }
    })
}

/// Runs one command under the S-pair budget of `flags`.
pub fn run_command(cmd: &Command, flags: &Flags) -> Report {
    let start = Instant::now();
    reset_spair_counter();
    let result = with_spair_budget(flags.budget, || execute(&cmd.action, flags));
    let spairs = spairs_used();
    let mut report = match result {
        Ok(b) => b.finish(cmd.index, cmd.echo.clone(), spairs),
        Err(e) => {
            let resource = matches!(e, AlgebraError::Resource(_));
            let verdict = if resource {
                "RESOURCE_EXHAUSTED"
            } else {
                "ERROR"
            };
            let mut b = ReportBuilder::new(verdict, ReportStatus::Unknown);
            b.resource_abort = resource;
            let mut r = b.finish(cmd.index, cmd.echo.clone(), spairs);
            r.error = Some(e.to_string());
            r
        }
    };
    if flags.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// Runs every command; with `flags.parallel` commands are spread over
/// threads, and reports come back in command order either way.
pub fn run(session: &Session, flags: &Flags) -> Vec<Report> {
    let cmds = &session.commands;
    if !flags.parallel || cmds.len() < 2 {
        return cmds.iter().map(|c| run_command(c, flags)).collect();
    }
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(cmds.len());
    let mut slots: Vec<Option<Report>> = vec![None; cmds.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                s.spawn(move || {
                    cmds.iter()
                        .enumerate()
                        .skip(t)
                        .step_by(threads)
                        .map(|(i, c)| (i, run_command(c, flags)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("command thread panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every command ran"))
        .collect()
}
