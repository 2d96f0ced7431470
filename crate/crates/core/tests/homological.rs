use clalg::fixtures;
use clalg::homological::{frobenius_module, hom_into_ring, tensor_presentation};
use clalg::module::{ModuleMap, ModuleRef, PresentedModule, Submodule};
use clalg::random::{random_module, rng};
use clalg::ring::RingRef;
use proptest::prelude::*;

fn rings() -> Vec<RingRef> {
    vec![fixtures::plane(), fixtures::fermat(), fixtures::a1()]
}

fn same_presentation(a: &ModuleRef, b: &ModuleRef) -> bool {
    a.ngens() == b.ngens() && a.relations() == b.relations() && a.degrees() == b.degrees()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn frobenius_zero_is_identity(seed in any::<u64>(), which in 0usize..3) {
        let m = random_module(&rings()[which], &mut rng(seed)).unwrap();
        prop_assert!(same_presentation(&frobenius_module(&m, 0).unwrap(), &m));
    }

    #[test]
    fn tensor_with_ring_is_identity(seed in any::<u64>(), which in 0usize..3) {
        let ring = &rings()[which];
        let m = random_module(ring, &mut rng(seed)).unwrap();
        let r1 = PresentedModule::free(ring, 1);
        let t = tensor_presentation(&m, &r1).unwrap();
        prop_assert_eq!(t.ngens(), m.ngens());
        let cmp = ModuleMap::new(&t, &m, (0..m.ngens()).map(|i| m.generator(i)).collect()).unwrap();
        prop_assert!(cmp.is_injective().unwrap());
        prop_assert!(cmp.is_surjective().unwrap());
    }
}

#[test]
fn frobenius_of_ring_is_ring() {
    for ring in rings() {
        let r1 = PresentedModule::free(&ring, 1);
        for e in 0..=4 {
            let f = frobenius_module(&r1, e).unwrap();
            assert_eq!(f.ngens(), 1);
            assert!(f.relations().is_empty());
        }
    }
}

#[test]
fn dual_of_free_module_is_perfect_pairing() {
    for ring in rings() {
        for n in 1..=3 {
            let f = PresentedModule::free(&ring, n);
            let d = hom_into_ring(&f).unwrap();
            assert_eq!(d.module.ngens(), n);
            assert!(d.module.relations().is_empty());
            assert!(Submodule::new(&f, d.maps.clone())
                .unwrap()
                .is_whole()
                .unwrap());
            for j in 0..n {
                let ev = d.evaluation_ideal(&f.generator(j)).unwrap();
                assert!(Submodule::ideal(&ring, ev).unwrap().is_whole().unwrap());
            }
        }
    }
}
