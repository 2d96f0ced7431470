use clalg::closure::ClosureOperation;
use clalg::fixtures::{self, NamedInstance};
use clalg::module::PresentedModule;
use clalg::phantom::{
    algebra_axiom_check, padded_presentation, phantom_check, split_multiplier_ideal,
    splits_after_base_change, star_phantom_check, sym2_extension, symle2_quotient, AxiomVerdict,
    PhantomOutcome,
};
use clalg::ring::{GradedRing, RingMap, RingRef};

fn rings() -> Vec<RingRef> {
    vec![
        fixtures::line(),
        fixtures::plane(),
        fixtures::fermat(),
        fixtures::a1(),
    ]
}

fn fixtures_all() -> Vec<(RingRef, NamedInstance)> {
    rings()
        .into_iter()
        .flat_map(|r| {
            fixtures::instances_over(&r)
                .into_iter()
                .map(move |i| (r.clone(), i))
        })
        .collect()
}

fn closures(ring: &RingRef) -> Vec<ClosureOperation> {
    let vars = ring.variables();
    let cyc: Vec<_> = vars
        .iter()
        .map(|v| PresentedModule::cyclic(ring, std::slice::from_ref(v)))
        .collect();
    vec![
        ClosureOperation::Identity,
        ClosureOperation::Module(cyc[0].clone()),
        ClosureOperation::Algebra(PresentedModule::free(ring, 1)),
        ClosureOperation::DirectedFamily(cyc.clone()),
        ClosureOperation::GeneratedFamily {
            members: cyc,
            stabilize: true,
        },
        ClosureOperation::Frobenius { e: 1 },
        ClosureOperation::TightBounded {
            candidates: None,
            e_max: 1,
        },
        ClosureOperation::Pullback {
            map: RingMap::quotient(ring, &vars).unwrap(),
            inner: Box::new(ClosureOperation::Identity),
        },
    ]
}

#[test]
fn verdicts_do_not_depend_on_presentation() {
    let mut checked = 0;
    for (ring, f) in fixtures_all() {
        let padded = padded_presentation(&f.instance).unwrap();
        assert_eq!(padded.n(), f.instance.n() + 1);
        for cl in closures(&ring).into_iter().take(5) {
            let a = phantom_check(&cl, &f.instance).unwrap().outcome;
            let b = phantom_check(&cl, &padded).unwrap().outcome;
            assert_eq!(a, b, "{} on {}", cl.name(), f.name);
            checked += 1;
        }
    }
    assert!(checked >= 25);
}

#[test]
fn split_maps_are_phantom_under_every_closure() {
    for (ring, f) in fixtures_all().into_iter().filter(|(_, f)| f.split) {
        for cl in closures(&ring) {
            let v = phantom_check(&cl, &f.instance).unwrap();
            assert_eq!(
                v.outcome,
                PhantomOutcome::Phantom,
                "{} on {}",
                cl.name(),
                f.name
            );
            if let Some(w) = &v.witness {
                assert!(w.verify());
            }
        }
    }
}

#[test]
fn identity_phantom_iff_unit_split_multiplier() {
    for (_, f) in fixtures_all() {
        let phantom = phantom_check(&ClosureOperation::Identity, &f.instance)
            .unwrap()
            .is_phantom();
        let ideal = split_multiplier_ideal(&f.instance).unwrap();
        assert_eq!(phantom, ideal.is_whole().unwrap(), "{}", f.name);
        assert_eq!(phantom, f.split, "{}", f.name);
    }
}

#[test]
fn star_criterion_agrees_with_tight_closure() {
    let mut instances = vec![fixtures::fermat_instance()];
    instances.extend(
        fixtures::instances_over(&fixtures::fermat())
            .into_iter()
            .map(|f| f.instance),
    );
    for inst in instances {
        let star = star_phantom_check(&inst, 2, None).unwrap();
        let tight = phantom_check(
            &ClosureOperation::TightBounded {
                candidates: None,
                e_max: 2,
            },
            &inst,
        )
        .unwrap();
        assert_eq!(star.outcome, tight.outcome);
        if let Some(w) = &star.witness {
            assert!(w.verify());
        }
    }
}

#[test]
fn symmetric_square_presentations() {
    let mut instances: Vec<_> = fixtures_all()
        .into_iter()
        .map(|(_, f)| f.instance)
        .collect();
    instances.push(fixtures::fermat_instance());
    for inst in instances {
        let n = inst.n();
        let s = sym2_extension(&inst).unwrap();
        assert_eq!(s.symmetry_columns, n * (n - 1) / 2);
        assert_eq!(s.sym2.ngens(), n * n);
        assert!(symle2_quotient(&inst).unwrap().is_iso);
    }
    assert_eq!(
        sym2_extension(&fixtures::fermat_instance())
            .unwrap()
            .symmetry_columns,
        3
    );
}

fn quadratic_ring() -> RingRef {
    GradedRing::weighted_quotient(7, &["x", "y", "t"], vec![2, 2, 1], &["t^2-x"], true).unwrap()
}

#[test]
fn algebra_closure_phantom_iff_split_after_base_change() {
    let r = fixtures::plane();
    let a = quadratic_ring();
    let map = RingMap::new(
        r.clone(),
        a.clone(),
        vec![a.parse("x").unwrap(), a.parse("y").unwrap()],
    )
    .unwrap();
    let cl = ClosureOperation::Algebra(fixtures::quadratic_extension());
    for f in fixtures::instances_over(&r) {
        let phantom = phantom_check(&cl, &f.instance).unwrap().is_phantom();
        assert_eq!(
            phantom,
            splits_after_base_change(&f.instance, &map).unwrap(),
            "{}",
            f.name
        );
    }
}

#[test]
fn algebra_axiom_holds_for_algebra_closures() {
    let cases = [
        (
            fixtures::plane(),
            ClosureOperation::Algebra(PresentedModule::free(&fixtures::plane(), 1)),
        ),
        (
            fixtures::plane(),
            ClosureOperation::Algebra(fixtures::quadratic_extension()),
        ),
        (
            fixtures::a1(),
            ClosureOperation::Algebra(fixtures::veronese_extension()),
        ),
    ];
    for (ring, cl) in cases {
        for f in fixtures::instances_over(&ring) {
            let rep = algebra_axiom_check(&cl, &f.instance).unwrap();
            let expected = if rep.base.is_phantom() {
                AxiomVerdict::Holds
            } else {
                AxiomVerdict::Vacuous
            };
            assert_eq!(rep.verdict, expected, "{} on {}", cl.name(), f.name);
        }
    }
}

#[test]
fn algebra_axiom_is_intersection_stable() {
    let r = fixtures::a1();
    let members = vec![
        ClosureOperation::Algebra(fixtures::veronese_extension()),
        ClosureOperation::Identity,
    ];
    let cl = ClosureOperation::Intersection(members.clone());
    for f in fixtures::instances_over(&r) {
        let each: Vec<_> = members
            .iter()
            .map(|m| algebra_axiom_check(m, &f.instance).unwrap().verdict)
            .collect();
        assert!(each
            .iter()
            .all(|v| matches!(v, AxiomVerdict::Holds | AxiomVerdict::Vacuous)));
        let v = algebra_axiom_check(&cl, &f.instance).unwrap().verdict;
        assert!(
            matches!(v, AxiomVerdict::Holds | AxiomVerdict::Vacuous),
            "{}",
            f.name
        );
    }
}
