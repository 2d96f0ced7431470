use clalg::closure::ClosureOperation;
use clalg::fixtures;
use clalg::modification::{
    bcm_build, chain_phantom_check, find_bad_relation, partial_algebra_modification, sym_step,
    BuildBudget, BuildStatus,
};
use clalg::module::{PresentedModule, Submodule};
use clalg::phantom::{instance_of, phantom_check, PhantomOutcome};
use clalg::ring::RingMap;
use clalg::vector;

#[test]
fn modification_kills_the_bad_relation() {
    let f = fixtures::fermat();
    let p = |s: &str| f.parse(s).unwrap();
    let sops = [
        vec![p("x"), p("y")],
        vec![p("x"), p("y"), p("z")],
        vec![p("y"), p("x")],
    ];
    let r = PresentedModule::free(&f, 1);
    for sop in &sops {
        let Some(rel) = find_bad_relation(&r, sop).unwrap() else {
            continue;
        };
        assert!(rel.verify().unwrap());
        let md = partial_algebra_modification(&instance_of(&r).unwrap(), &rel).unwrap();
        assert!(md.map.is_injective().unwrap());
        let target = md.map.target();
        let u = md.map.apply(&rel.witness).unwrap();
        let k = rel.k();
        let mut gens = Vec::new();
        for x in &sop[..k] {
            for j in 0..target.ngens() {
                gens.push(vector::scale(f.poly(), x, &target.generator(j)));
            }
        }
        assert!(Submodule::new(target, gens).unwrap().contains(&u).unwrap());
        assert!(md.instance.alpha.is_injective().unwrap());
    }
}

#[test]
fn phantomness_survives_modification_and_symmetric_square() {
    let f = fixtures::fermat();
    let p = |s: &str| f.parse(s).unwrap();
    let closures = [
        ClosureOperation::TightBounded {
            candidates: None,
            e_max: 2,
        },
        ClosureOperation::Pullback {
            map: RingMap::quotient(&f, &f.variables()).unwrap(),
            inner: Box::new(ClosureOperation::Identity),
        },
    ];
    let r = PresentedModule::free(&f, 1);
    let rel = find_bad_relation(&r, &[p("x"), p("y"), p("z")])
        .unwrap()
        .unwrap();
    let md = partial_algebra_modification(&instance_of(&r).unwrap(), &rel).unwrap();
    let ss = sym_step(&md.instance).unwrap();
    let chain = [md.instance.alpha.clone(), ss.map.clone()];
    for cl in &closures {
        assert!(
            phantom_check(cl, &md.instance).unwrap().is_phantom(),
            "{}",
            cl.name()
        );
        let v = chain_phantom_check(&chain, cl).unwrap();
        assert!(v.holds(), "{}", cl.name());
    }
    let v = chain_phantom_check(&chain, &ClosureOperation::Identity).unwrap();
    assert_eq!(v.first_failure, Some(1));
    assert_eq!(v.stages[0].outcome, PhantomOutcome::NotPhantom);
}

#[test]
fn algebra_closure_builds_on_a1() {
    let a = fixtures::a1();
    let p = |s: &str| a.parse(s).unwrap();
    let cl = ClosureOperation::Algebra(fixtures::veronese_extension());

    // x, y is a full parameter system on a Cohen-Macaulay ring: nothing to modify.
    let tr = bcm_build(&a, &cl, &[vec![p("x"), p("y")]], 2, BuildBudget::default()).unwrap();
    assert_eq!(tr.status, BuildStatus::Completed);
    assert!(tr
        .stages
        .iter()
        .all(|s| s.relation.is_none() && s.unit_outside_max && s.phantom.is_phantom()));

    // x, z is not a parameter system, so its colon relation is not a
    // failure of colon capturing and the modification is not phantom.
    let tr = bcm_build(&a, &cl, &[vec![p("x"), p("z")]], 2, BuildBudget::default()).unwrap();
    assert_eq!(tr.status, BuildStatus::Completed);
    assert!(tr.stages[0].phantom.is_phantom());
    for st in &tr.stages {
        assert!(st.unit_outside_max);
        if let Some(rel) = &st.relation {
            assert!(rel.verify().unwrap());
            assert_eq!(st.phantom.outcome, PhantomOutcome::NotPhantom);
        }
    }
    assert!(tr.stages.iter().any(|s| s.relation.is_some()));
}

#[test]
fn build_is_deterministic() {
    let f = fixtures::fermat();
    let p = |s: &str| f.parse(s).unwrap();
    let sops = [vec![p("x"), p("y")], vec![p("x"), p("y"), p("z")]];
    let run = || {
        let tr = bcm_build(
            &f,
            &ClosureOperation::Identity,
            &sops,
            2,
            BuildBudget::default(),
        )
        .unwrap();
        tr.stages
            .iter()
            .map(|s| {
                (
                    s.kind,
                    s.instance.n(),
                    s.instance.nu1.clone(),
                    s.phantom.outcome,
                )
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}
