//! Named rings, modules and instances used by tests, the acceptance suite
//! and the shipped scripts.

use crate::error::Result;
use crate::module::{ModuleMap, ModuleRef, PresentedModule, Submodule};
use crate::phantom::{build_instance, instance_of, PhantomInstance};
use crate::random::LawInstance;
use crate::ring::{GradedRing, RingRef};

/// `F_7[z,x,y]/(x^3 + y^3 + z^3)`.
pub fn fermat() -> RingRef {
    GradedRing::quotient(7, &["z", "x", "y"], &["x^3+y^3+z^3"], true).expect("fermat cubic")
}

/// `F_7[x]`.
pub fn line() -> RingRef {
    GradedRing::polynomial(7, &["x"]).expect("line")
}

/// `F_7[x,y]`.
pub fn plane() -> RingRef {
    GradedRing::polynomial(7, &["x", "y"]).expect("plane")
}

/// `A_1 = F_5[x,y,z]/(xy - z^2)`.
pub fn a1() -> RingRef {
    GradedRing::quotient(5, &["x", "y", "z"], &["x*y-z^2"], true).expect("A_1")
}

fn module(
    ring: &RingRef,
    ngens: usize,
    rels: &[&[&str]],
    degrees: Option<Vec<i64>>,
) -> Result<ModuleRef> {
    let cols = rels
        .iter()
        .map(|c| c.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    PresentedModule::new(ring, ngens, cols, degrees)
}

/// `R^3 / (z^2, -x, -y)` over the Fermat cubic.
pub fn fermat_module() -> ModuleRef {
    let r = fermat();
    module(&r, 3, &[&["z^2", "-x", "-y"]], Some(vec![0, 1, 1])).expect("fermat module")
}

pub fn fermat_instance() -> PhantomInstance {
    instance_of(&fermat_module()).expect("fermat instance")
}

/// `R[t]/(t^2 - x)` over `F_7[x,y]`, free on `1, t`.
pub fn quadratic_extension() -> ModuleRef {
    PresentedModule::free_graded(&plane(), vec![0, 0])
}

/// `F_5[u,v]` over `A_1` via `x = u^2, y = v^2, z = uv`, generated by `1, u, v`.
pub fn veronese_extension() -> ModuleRef {
    let r = a1();
    module(
        &r,
        3,
        &[&["0", "z", "-x"], &["0", "y", "-z"]],
        Some(vec![0, 0, 0]),
    )
    .expect("veronese")
}

/// A named phantom instance.
#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub name: &'static str,
    pub instance: PhantomInstance,
    /// `α` splits, so every closure must call it phantom.
    pub split: bool,
}

fn named(name: &'static str, m: ModuleRef, split: bool) -> NamedInstance {
    NamedInstance {
        name,
        instance: instance_of(&m).expect("fixture instance"),
        split,
    }
}

/// Instances `R -> M`, `1 ↦ e_1`, over `ring`.
pub fn instances_over(ring: &RingRef) -> Vec<NamedInstance> {
    let vars: Vec<String> = ring.variables().iter().map(|v| ring.format(v)).collect();
    let x = vars[0].as_str();
    let y = vars.get(1).map(String::as_str).unwrap_or(x);
    let mut out = vec![
        named("free", PresentedModule::free(ring, 1), true),
        named(
            "plus_torsion",
            module(ring, 2, &[&["0", x]], Some(vec![0, 0])).unwrap(),
            true,
        ),
        named(
            "graph",
            module(
                ring,
                3,
                &[&[x, "-1", "0"], &["0", y, x]],
                Some(vec![0, 1, 1]),
            )
            .unwrap(),
            true,
        ),
    ];
    if vars.len() >= 2 {
        out.push(named(
            "koszul",
            module(ring, 3, &[&["0", y, "-1"]], Some(vec![0, 0, 1])).unwrap(),
            true,
        ));
        out.push(named(
            "twisted",
            module(ring, 2, &[&[y, x]], Some(vec![0, 0])).unwrap(),
            false,
        ));
        out.push(named(
            "nonsplit",
            module(ring, 3, &[&["1", x, y]], Some(vec![0, -1, -1])).unwrap(),
            false,
        ));
    }
    out
}

/// `α: R -> R ⊕ R`, `1 ↦ (x, 1)`, which splits through the second summand.
pub fn split_off_second(ring: &RingRef) -> Result<PhantomInstance> {
    let free = PresentedModule::free(ring, 2);
    let r = PresentedModule::free(ring, 1);
    let x = ring.variables()[0].clone();
    let alpha = ModuleMap::new(&r, &free, vec![vec![x, ring.poly().one()]])?;
    build_instance(&alpha)
}

/// The family `{R/(x) ⊕ R/(y), R/(x+y)}` over `F_7[x,y]` with the pair
/// `0 ⊆ R`, on which a single round of the generated closure is not
/// idempotent.
pub fn idempotence_control() -> (Vec<ModuleRef>, LawInstance) {
    let r = plane();
    let p = |s: &str| r.parse(s).unwrap();
    let a = PresentedModule::direct_sum(
        &PresentedModule::cyclic(&r, &[p("x")]),
        &PresentedModule::cyclic(&r, &[p("y")]),
    )
    .unwrap();
    let b = PresentedModule::cyclic(&r, &[p("x+y")]);
    let free = PresentedModule::free(&r, 1);
    let zero = Submodule::zero(&free);
    let inst = LawInstance {
        seed: None,
        module: free,
        small: zero.clone(),
        large: zero,
    };
    (vec![a, b], inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for r in [fermat(), line(), plane(), a1()] {
            assert!(instances_over(&r).len() >= 3);
        }
        assert_eq!(fermat_instance().n(), 3);
        assert_eq!(veronese_extension().ngens(), 3);
        assert!(split_off_second(&plane()).unwrap().n() >= 2);
    }
}
