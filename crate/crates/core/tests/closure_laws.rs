use clalg::axioms::{closure_law_suite, AxiomOutcome};
use clalg::closure::{test_ideal_approx, ClosureOperation};
use clalg::fixtures;
use clalg::module::{PresentedModule, Submodule};
use clalg::random::random_instance;
use clalg::ring::{RingMap, RingRef};
use proptest::prelude::*;

fn exact_kinds(ring: &RingRef) -> Vec<ClosureOperation> {
    let vars = ring.variables();
    let cyc = |i: usize| PresentedModule::cyclic(ring, &[vars[i].clone()]);
    let m = RingMap::quotient(ring, &vars).unwrap();
    vec![
        ClosureOperation::Identity,
        ClosureOperation::Module(cyc(0)),
        ClosureOperation::Algebra(PresentedModule::free(ring, 1)),
        ClosureOperation::DirectedFamily(vec![cyc(0), cyc(1)]),
        ClosureOperation::GeneratedFamily {
            members: vec![cyc(0), cyc(1)],
            stabilize: true,
        },
        ClosureOperation::Frobenius { e: 1 },
        ClosureOperation::Pullback {
            map: m,
            inner: Box::new(ClosureOperation::Identity),
        },
        ClosureOperation::Intersection(vec![
            ClosureOperation::Module(cyc(0)),
            ClosureOperation::Module(cyc(1)),
        ]),
    ]
}

fn rings() -> [RingRef; 2] {
    [fixtures::plane(), fixtures::fermat()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exact_kinds_satisfy_closure_laws(seed in any::<u64>(), which in 0usize..2) {
        let ring = &rings()[which];
        let inst = random_instance(ring, seed).unwrap();
        for cl in exact_kinds(ring) {
            prop_assert!(cl.is_exact());
            let r = closure_law_suite(&cl, std::slice::from_ref(&inst), false).unwrap();
            prop_assert_eq!(r.outcome, AxiomOutcome::Pass, "{} on {}", cl.name(), inst.describe());
        }
    }

    #[test]
    fn module_closure_of_ring_is_identity(seed in any::<u64>(), which in 0usize..2) {
        let ring = &rings()[which];
        let inst = random_instance(ring, seed).unwrap();
        let free = PresentedModule::free(ring, 1);
        for cl in [ClosureOperation::Module(free.clone()), ClosureOperation::Algebra(free)] {
            let c = cl.closure(&inst.small).unwrap();
            prop_assert!(c.equals(&inst.small).unwrap());
        }
    }

    #[test]
    fn algebra_closure_is_module_closure_at_unit(seed in any::<u64>()) {
        let ring = fixtures::a1();
        let inst = random_instance(&ring, seed).unwrap();
        let b = fixtures::veronese_extension();
        let a = ClosureOperation::Algebra(b.clone()).closure(&inst.small).unwrap();
        let m = ClosureOperation::Module(b).closure(&inst.small).unwrap();
        prop_assert!(m.equals(&a).unwrap());
        prop_assert!(a.contains_submodule(&inst.small).unwrap());
    }

    #[test]
    fn intersection_and_sum_bracket_members(seed in any::<u64>(), which in 0usize..2) {
        let ring = &rings()[which];
        let inst = random_instance(ring, seed).unwrap();
        let vars = ring.variables();
        let members = vec![
            ClosureOperation::Module(PresentedModule::cyclic(ring, &[vars[0].clone()])),
            ClosureOperation::Frobenius { e: 1 },
        ];
        let lo = ClosureOperation::Intersection(members.clone()).closure(&inst.small).unwrap();
        let hi = ClosureOperation::Sum(members.clone()).closure(&inst.small).unwrap();
        for m in &members {
            let c = m.closure(&inst.small).unwrap();
            prop_assert!(c.contains_submodule(&lo).unwrap());
            prop_assert!(hi.contains_submodule(&c).unwrap());
        }
    }

    #[test]
    fn family_closure_is_a_fixed_point(seed in any::<u64>(), which in 0usize..2) {
        let ring = &rings()[which];
        let inst = random_instance(ring, seed).unwrap();
        let vars = ring.variables();
        let cl = ClosureOperation::GeneratedFamily {
            members: vars.iter().map(|v| PresentedModule::cyclic(ring, std::slice::from_ref(v))).collect(),
            stabilize: true,
        };
        let once = cl.closure(&inst.small).unwrap();
        let twice = cl.closure(&once).unwrap();
        prop_assert!(once.equals(&twice).unwrap());
    }
}

#[test]
fn tight_closure_grows_with_e_max() {
    let r = fixtures::fermat();
    let p = |s: &str| r.parse(s).unwrap();
    let n = Submodule::ideal(&r, vec![p("x"), p("y")]).unwrap();
    let mut prev: Option<bool> = None;
    for e_max in 1..=3 {
        let cl = ClosureOperation::TightBounded {
            candidates: None,
            e_max,
        };
        let inside = cl.contains(&n, &[p("z^2")]).unwrap().is_in();
        if let Some(was) = prev {
            assert!(!was || inside);
        }
        prev = Some(inside);
    }
    assert_eq!(prev, Some(true));
}

#[test]
fn test_ideal_shrinks_with_more_pairs() {
    let r = fixtures::fermat();
    let p = |s: &str| r.parse(s).unwrap();
    let cl = ClosureOperation::TightBounded {
        candidates: None,
        e_max: 2,
    };
    let pairs = [Submodule::ideal(&r, vec![p("x"), p("y")]).unwrap(),
        Submodule::ideal(&r, vec![p("x^2"), p("y^2")]).unwrap(),
        Submodule::ideal(&r, vec![p("x"), p("z")]).unwrap()];
    let mut prev: Option<Submodule> = None;
    for k in 1..=pairs.len() {
        let t = test_ideal_approx(&cl, &pairs[..k]).unwrap().ideal;
        if let Some(q) = &prev {
            assert!(q.contains_submodule(&t).unwrap());
        }
        prev = Some(t);
    }
    let tau = prev.unwrap();
    assert!(tau.contains(&[p("x")]).unwrap());
    assert!(!tau.is_whole().unwrap());
}
