//! Acceptance suite: one pass/fail line per criterion, with pinned time
//! limits. Exits nonzero if any blocking criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clalg::axioms::{closure_law_suite, AxiomOutcome};
use clalg::closure::{tight_element, ClosureOperation, ElementVerdict};
use clalg::fixtures::{self, NamedInstance};
use clalg::gb::ModuleGb;
use clalg::homological::syzygy;
use clalg::modification::{bcm_build, chain_phantom_check, BuildBudget, BuildStatus, StageKind};
use clalg::module::{ModuleMap, PresentedModule};
use clalg::phantom::{
    algebra_axiom_check, instance_of, padded_presentation, phantom_check, star_phantom_check,
    sym2_extension, symle2_quotient, AxiomVerdict, PhantomInstance, PhantomOutcome,
};
use clalg::random::{random_instance, random_module, rng, LawInstance};
use clalg::ring::{RingMap, RingRef};
use clalg_cli::{run_script, to_json, Flags};

const SEEDS: u64 = 100;
const FERMAT_SCRIPT: &str = include_str!("../../../scripts/fermat.clalg");

/// Result of one criterion. `digest` holds every computed verdict and is
/// compared across runs; it never contains timings.
struct Outcome {
    pass: bool,
    summary: String,
    digest: String,
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    limit: Duration,
    blocking: bool,
    /// Cheap enough to run twice for the determinism check.
    rerun: bool,
    run: fn() -> Outcome,
}

fn mins(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn outcome(pass: bool, summary: String, digest: String) -> Outcome {
    Outcome {
        pass,
        summary,
        digest,
    }
}

fn all_fixtures() -> Vec<(RingRef, NamedInstance)> {
    [
        fixtures::line(),
        fixtures::plane(),
        fixtures::fermat(),
        fixtures::a1(),
    ]
    .into_iter()
    .flat_map(|r| {
        fixtures::instances_over(&r)
            .into_iter()
            .map(move |i| (r.clone(), i))
    })
    .collect()
}

fn cyclics(ring: &RingRef) -> Vec<clalg::module::ModuleRef> {
    ring.variables()
        .iter()
        .map(|v| PresentedModule::cyclic(ring, std::slice::from_ref(v)))
        .collect()
}

fn exact_kinds(ring: &RingRef) -> Vec<ClosureOperation> {
    let vars = ring.variables();
    let cyc = cyclics(ring);
    vec![
        ClosureOperation::Identity,
        ClosureOperation::Module(cyc[0].clone()),
        ClosureOperation::Algebra(PresentedModule::free(ring, 1)),
        ClosureOperation::DirectedFamily(cyc.clone()),
        ClosureOperation::GeneratedFamily {
            members: cyc.clone(),
            stabilize: true,
        },
        ClosureOperation::Frobenius { e: 1 },
        ClosureOperation::Pullback {
            map: RingMap::quotient(ring, &vars).unwrap(),
            inner: Box::new(ClosureOperation::Identity),
        },
        ClosureOperation::Intersection(vec![
            ClosureOperation::Module(cyc[0].clone()),
            ClosureOperation::Module(cyc[cyc.len() - 1].clone()),
        ]),
    ]
}

fn every_kind(ring: &RingRef) -> Vec<ClosureOperation> {
    let mut out = exact_kinds(ring);
    let tight = ClosureOperation::TightBounded {
        candidates: None,
        e_max: 1,
    };
    out.push(tight.clone());
    out.push(ClosureOperation::Sum(vec![
        ClosureOperation::Identity,
        tight,
    ]));
    out
}

fn c1_closure_laws() -> Outcome {
    let mut digest = String::new();
    let mut failures = Vec::new();
    let mut kinds = 0;
    for ring in [fixtures::plane(), fixtures::fermat()] {
        let insts: Vec<LawInstance> = (0..SEEDS)
            .map(|s| random_instance(&ring, s).unwrap())
            .collect();
        for cl in exact_kinds(&ring) {
            assert!(cl.is_exact());
            let rep = closure_law_suite(&cl, &insts, true).unwrap();
            digest += &format!("{} {} {}\n", cl.name(), rep.outcome, rep.instance);
            if rep.outcome != AxiomOutcome::Pass {
                failures.push(format!("{}: {} ({})", cl.name(), rep.detail, rep.instance));
            }
            kinds += 1;
        }
    }
    let summary = format!(
        "{kinds} kind/ring pairs x {SEEDS} seeds, {} failures{}",
        failures.len(),
        fmt_failures(&failures)
    );
    outcome(failures.is_empty(), summary, digest)
}

fn fmt_failures(f: &[String]) -> String {
    if f.is_empty() {
        String::new()
    } else {
        format!(": {}", f.join("; "))
    }
}

fn c2_presentation_independence() -> Outcome {
    let mut insts: Vec<(RingRef, String, PhantomInstance)> = all_fixtures()
        .into_iter()
        .map(|(r, f)| (r, f.name.to_string(), f.instance))
        .collect();
    insts.push((
        fixtures::fermat(),
        "fermat_module".into(),
        fixtures::fermat_instance(),
    ));
    let mut digest = String::new();
    let mut disagreements = Vec::new();
    let mut comparisons = 0;
    for (ring, name, inst) in &insts {
        let padded = padded_presentation(inst).unwrap();
        let cyc = cyclics(ring);
        let closures = [
            ClosureOperation::Identity,
            ClosureOperation::Module(cyc[0].clone()),
            ClosureOperation::DirectedFamily(cyc.clone()),
            ClosureOperation::GeneratedFamily {
                members: cyc.clone(),
                stabilize: true,
            },
        ];
        for cl in &closures {
            let a = phantom_check(cl, inst).unwrap().outcome;
            let b = phantom_check(cl, &padded).unwrap().outcome;
            digest += &format!("{name} {} {a} {b}\n", cl.name());
            comparisons += 1;
            if a != b {
                disagreements.push(format!("{name} under {}", cl.name()));
            }
        }
    }
    let summary = format!(
        "{} fixtures x 2 presentations, {comparisons} comparisons, {} disagreements{}",
        insts.len(),
        disagreements.len(),
        fmt_failures(&disagreements)
    );
    outcome(
        insts.len() >= 5 && disagreements.is_empty(),
        summary,
        digest,
    )
}

fn c3_split_is_phantom() -> Outcome {
    let mut digest = String::new();
    let mut bad = Vec::new();
    let mut checks = 0;
    let mut split: Vec<(RingRef, String, PhantomInstance)> = all_fixtures()
        .into_iter()
        .filter(|(_, f)| f.split)
        .map(|(r, f)| (r, f.name.to_string(), f.instance))
        .collect();
    for r in [fixtures::plane(), fixtures::fermat(), fixtures::a1()] {
        split.push((
            r.clone(),
            "split_off_second".into(),
            fixtures::split_off_second(&r).unwrap(),
        ));
    }
    for (ring, name, inst) in &split {
        for cl in every_kind(ring) {
            let v = phantom_check(&cl, inst).unwrap();
            let certified = v.witness.as_ref().is_none_or(|w| w.verify());
            digest += &format!("{name} {} {}\n", cl.name(), v.outcome);
            checks += 1;
            if v.outcome != PhantomOutcome::Phantom || !certified {
                bad.push(format!("{name} under {}: {}", cl.name(), v.outcome));
            }
        }
    }
    let summary = format!(
        "{} split fixtures, {checks} checks, {} not phantom{}",
        split.len(),
        bad.len(),
        fmt_failures(&bad)
    );
    outcome(bad.is_empty(), summary, digest)
}

fn c4_fermat_tight() -> Outcome {
    let r = fixtures::fermat();
    let p = |s: &str| r.parse(s).unwrap();
    let poly = r.poly();
    let mut notes = Vec::new();
    let mut pass = true;

    // Direct oracle: x z^{2q} ∈ (x^q, y^q) for q = 7^e, e = 1..4.
    for e in 1..=4u32 {
        let q = 7u64.pow(e);
        let mut ideal = r.ideal().to_vec();
        ideal.push(poly.pow(&p("x"), q));
        ideal.push(poly.pow(&p("y"), q));
        let gb = ModuleGb::ideal(poly, &ideal).unwrap();
        let target = poly.mul(&p("x"), &poly.pow(&p("z"), 2 * q));
        if !gb.reduces_to_zero(&[target]) {
            pass = false;
            notes.push(format!("oracle fails at e={e}"));
        }
    }

    let n = clalg::module::Submodule::ideal(&r, vec![p("x"), p("y")]).unwrap();
    let cands = clalg::closure::default_candidates(&r);
    let z2 = tight_element(&n, &[p("z^2")], &cands, 4).unwrap();
    let z2_ok = match &z2 {
        ElementVerdict::In(Some(w)) => w.verify() && w.levels.len() == 5,
        _ => false,
    };
    let z1 = tight_element(&n, &[p("z")], &cands, 4).unwrap();
    let z1_ok = matches!(z1, ElementVerdict::LikelyOut { e_max: 4 });
    pass &= z2_ok && z1_ok;

    let inst = fixtures::fermat_instance();
    let star = star_phantom_check(&inst, 4, None).unwrap();
    let tight = phantom_check(
        &ClosureOperation::TightBounded {
            candidates: None,
            e_max: 4,
        },
        &inst,
    )
    .unwrap();
    let star_has_x = star.intersection.contains(&[p("x")]).unwrap();
    let agree = star.outcome == tight.outcome && star.outcome == PhantomOutcome::Phantom;
    let certified = star.witness.as_ref().is_some_and(|w| w.verify())
        && tight.witness.as_ref().is_some_and(|w| w.verify());
    pass &= star_has_x && agree && certified;
    let summary = format!(
        "z^2 {}, z {}, star {} / tight {}, x in all J_e: {star_has_x}{}",
        z2.label(),
        z1.label(),
        star.outcome,
        tight.outcome,
        fmt_failures(&notes)
    );
    let digest = summary.clone();
    outcome(pass, summary, digest)
}

fn c5_symmetric_square() -> Outcome {
    let mut insts: Vec<(String, PhantomInstance)> = all_fixtures()
        .into_iter()
        .map(|(_, f)| (f.name.to_string(), f.instance))
        .collect();
    insts.push(("fermat_module".into(), fixtures::fermat_instance()));
    let mut digest = String::new();
    let mut bad = Vec::new();
    for (name, inst) in &insts {
        let n = inst.n();
        let iso = symle2_quotient(inst).unwrap().is_iso;
        let cols = sym2_extension(inst).unwrap().symmetry_columns;
        digest += &format!("{name} n={n} iso={iso} symmetry={cols}\n");
        if !iso || cols != (n * n - n) / 2 {
            bad.push(name.clone());
        }
    }
    let fermat_cols = sym2_extension(&fixtures::fermat_instance())
        .unwrap()
        .symmetry_columns;
    let summary = format!(
        "{} fixtures, {} failures, Fermat n=3 symmetry columns = {fermat_cols}{}",
        insts.len(),
        bad.len(),
        fmt_failures(&bad)
    );
    outcome(bad.is_empty() && fermat_cols == 3, summary, digest)
}

fn c6_algebra_axiom() -> Outcome {
    let plane = fixtures::plane();
    let a1 = fixtures::a1();
    let cases = [
        (
            "R over plane",
            plane.clone(),
            ClosureOperation::Algebra(PresentedModule::free(&plane, 1)),
        ),
        (
            "R over A1",
            a1.clone(),
            ClosureOperation::Algebra(PresentedModule::free(&a1, 1)),
        ),
        (
            "R[t]/(t^2-x)",
            plane.clone(),
            ClosureOperation::Algebra(fixtures::quadratic_extension()),
        ),
        (
            "Veronese over A1",
            a1.clone(),
            ClosureOperation::Algebra(fixtures::veronese_extension()),
        ),
    ];
    let mut digest = String::new();
    let mut bad = Vec::new();
    let mut holds = 0;
    for (label, ring, cl) in &cases {
        let mut insts: Vec<(String, PhantomInstance)> = fixtures::instances_over(ring)
            .into_iter()
            .map(|f| (f.name.to_string(), f.instance))
            .collect();
        insts.push((
            "split_off_second".into(),
            fixtures::split_off_second(ring).unwrap(),
        ));
        let mut phantom = 0;
        for (name, inst) in &insts {
            let rep = algebra_axiom_check(cl, inst).unwrap();
            digest += &format!("{label} {name} {:?}\n", rep.verdict);
            if rep.base.is_phantom() {
                phantom += 1;
                if rep.verdict == AxiomVerdict::Holds {
                    holds += 1;
                } else {
                    bad.push(format!("{label} {name}: {:?}", rep.verdict));
                }
            }
        }
        if phantom == 0 {
            bad.push(format!("{label}: no phantom fixture"));
        }
    }
    let summary = format!(
        "{holds} phantom fixtures HOLD, {} failures{}",
        bad.len(),
        fmt_failures(&bad)
    );
    outcome(bad.is_empty(), summary, digest)
}

fn c7_modification_chain() -> Outcome {
    let f = fixtures::fermat();
    let p = |s: &str| f.parse(s).unwrap();
    let sops = [vec![p("x"), p("y")], vec![p("x"), p("y"), p("z")]];
    let cl = ClosureOperation::TightBounded {
        candidates: None,
        e_max: 3,
    };
    let tr = bcm_build(&f, &cl, &sops, 2, BuildBudget::default()).unwrap();
    let kinds: Vec<StageKind> = tr.stages.iter().map(|s| s.kind).collect();
    let shape_ok = kinds
        == [
            StageKind::Start,
            StageKind::Modify,
            StageKind::Sym2,
            StageKind::Modify,
        ];
    let phantom_ok = tr.stages.iter().all(|s| s.phantom.is_phantom());
    let unit_ok = tr.stages.iter().all(|s| s.unit_outside_max);
    let mut chain: Vec<ModuleMap> = vec![tr.stages[0].map_from_ring.clone()];
    chain.extend(tr.stages[1..].iter().map(|s| s.step_map.clone().unwrap()));
    let cv = chain_phantom_check(&chain, &cl).unwrap();
    let stages: Vec<String> = tr
        .stages
        .iter()
        .map(|s| format!("{}(n={}) {}", s.kind, s.instance.n(), s.phantom.outcome))
        .collect();
    let summary = format!(
        "{}: {}; 1 outside mM at every stage: {unit_ok}; chain holds: {}",
        tr.status,
        stages.join(", "),
        cv.holds()
    );
    let pass =
        tr.status == BuildStatus::Completed && shape_ok && phantom_ok && unit_ok && cv.holds();
    let digest = summary.clone();
    outcome(pass, summary, digest)
}

fn c8_f_regular_triviality() -> Outcome {
    let a1 = fixtures::a1();
    let cl = ClosureOperation::Algebra(fixtures::veronese_extension());
    let mut digest = String::new();
    let mut bad = Vec::new();
    for seed in 0..20 {
        let inst = random_instance(&a1, seed).unwrap();
        let c = cl.closure(&inst.small).unwrap();
        let same = c.equals(&inst.small).unwrap();
        digest += &format!("{seed} {same}\n");
        if !same {
            bad.push(format!("seed {seed}"));
        }
    }
    let summary = format!(
        "20 submodules over A1, {} enlarged{}",
        bad.len(),
        fmt_failures(&bad)
    );
    outcome(bad.is_empty(), summary, digest)
}

fn c9_syzygy_search() -> Outcome {
    let a1 = fixtures::a1();
    let k = PresentedModule::cyclic(&a1, &a1.variables());
    let cl = ClosureOperation::Module(syzygy(&k, 2).unwrap());
    let mut generated = 0;
    let mut phantom = 0;
    let mut fails = Vec::new();
    let mut unknown = 0;
    let mut digest = String::new();
    for seed in 0..50u64 {
        let Ok(m) = random_module(&a1, &mut rng(seed)) else {
            continue;
        };
        let Ok(inst) = instance_of(&m) else { continue };
        generated += 1;
        let rep = algebra_axiom_check(&cl, &inst).unwrap();
        digest += &format!("{seed} {:?}\n", rep.verdict);
        match rep.verdict {
            AxiomVerdict::Holds => phantom += 1,
            AxiomVerdict::Fails => {
                phantom += 1;
                // Re-verify from the raw presentation of α₂.
                let s2 = sym2_extension(&inst).unwrap();
                let confirmed = match s2.instance() {
                    Ok(i2) => {
                        phantom_check(&cl, &i2).unwrap().outcome == PhantomOutcome::NotPhantom
                    }
                    Err(_) => true,
                };
                fails.push(format!("seed {seed} (re-verified: {confirmed})"));
            }
            AxiomVerdict::Unknown => unknown += 1,
            AxiomVerdict::Vacuous => {}
        }
    }
    let summary = format!(
        "{generated} instances, {phantom} phantom, {} FAILS, {unknown} unknown{}",
        fails.len(),
        fmt_failures(&fails)
    );
    outcome(true, summary, digest)
}

fn script_reports(parallel: bool) -> String {
    let flags = Flags {
        parallel,
        ..Flags::default()
    };
    to_json(&run_script(FERMAT_SCRIPT, &flags).unwrap())
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: "c1",
            name: "closure laws for exact kinds",
            limit: mins(5),
            blocking: true,
            rerun: true,
            run: c1_closure_laws,
        },
        Criterion {
            id: "c2",
            name: "presentation independence",
            limit: mins(2),
            blocking: true,
            rerun: true,
            run: c2_presentation_independence,
        },
        Criterion {
            id: "c3",
            name: "split implies phantom",
            limit: mins(1),
            blocking: true,
            rerun: true,
            run: c3_split_is_phantom,
        },
        Criterion {
            id: "c4",
            name: "Fermat cubic tight closure",
            limit: mins(10),
            blocking: true,
            rerun: false,
            run: c4_fermat_tight,
        },
        Criterion {
            id: "c5",
            name: "symmetric square presentations",
            limit: mins(2),
            blocking: true,
            rerun: true,
            run: c5_symmetric_square,
        },
        Criterion {
            id: "c6",
            name: "algebra axiom for algebra closures",
            limit: mins(10),
            blocking: true,
            rerun: true,
            run: c6_algebra_axiom,
        },
        Criterion {
            id: "c7",
            name: "modification chain stays phantom",
            limit: mins(15),
            blocking: true,
            rerun: false,
            run: c7_modification_chain,
        },
        Criterion {
            id: "c8",
            name: "module-finite closure trivial on A1",
            limit: mins(10),
            blocking: true,
            rerun: true,
            run: c8_f_regular_triviality,
        },
        Criterion {
            id: "c9",
            name: "second syzygy closure search (exploratory)",
            limit: mins(60),
            blocking: false,
            rerun: false,
            run: c9_syzygy_search,
        },
    ]
}

fn main() -> ExitCode {
    let mut ok = true;
    let mut digests = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let out = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.limit;
        let verdict = match (c.blocking, out.pass && in_time) {
            (false, _) => "REPORTED",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        if c.blocking && !(out.pass && in_time) {
            ok = false;
        }
        println!(
            "{} {}: {verdict} ({}; {:.1}s, limit {}s)",
            c.id,
            c.name,
            out.summary,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
        if c.rerun {
            digests.push((c.run, out.digest));
        }
    }

    let start = Instant::now();
    let first = script_reports(false);
    let same_script = first == script_reports(false) && first == script_reports(true);
    let same_suite = digests.iter().all(|(run, d)| run().digest == *d);
    let pass = same_script && same_suite;
    ok &= pass;
    println!(
        "c10 deterministic reports: {} (script JSON {} bytes identical: {same_script}; {} criteria re-run identical: {same_suite}; {:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        first.len(),
        digests.len(),
        start.elapsed().as_secs_f64()
    );

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
