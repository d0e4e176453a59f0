mod common;

use std::collections::BTreeSet;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use tatecoh::cohomology::{class_index, coboundary_of, h2, tate};
use tatecoh::extensions::{
    dagger, equivalent, middle_group, p_quotient, splitting_isomorphism, splitting_module, star, GroupExtensionData,
};
use tatecoh::gmodules::{augmentation_ideal, direct_sum, trivial_module, GModule};
use tatecoh::groups::GroupRef;
use tatecoh::theorems::census_kernels;

fn extensions(name: &str, bound: u64) -> Vec<GroupExtensionData> {
    let g = group(name);
    let mut out = Vec::new();
    for spec in census_kernels(&g, bound).unwrap() {
        let a = spec.build(&g).unwrap();
        for f in h2(&a, true).unwrap().representatives {
            out.push(GroupExtensionData::new(a.clone(), f).unwrap());
        }
    }
    out
}

/// Brute-force associativity and the exactness `A ↣ 𝒢 ↠ G` of the middle group.
#[test]
fn middle_groups_are_extensions() {
    for name in ["C2", "C3", "C4", "C2xC2", "D8"] {
        let g = group(name);
        for e in extensions(name, 4) {
            let mg = middle_group(&e).unwrap();
            let h = &mg.group;
            let na = e.kernel().small_order(4096).unwrap();
            assert_eq!(h.order(), na * g.order());
            for x in h.elements() {
                for y in h.elements() {
                    assert_eq!(mg.project[h.mul(x, y)], g.mul(mg.project[x], mg.project[y]));
                    for z in h.elements() {
                        assert_eq!(h.mul(h.mul(x, y), z), h.mul(x, h.mul(y, z)));
                    }
                }
            }
            let kernel: BTreeSet<usize> = h.elements().filter(|&x| mg.project[x] == g.identity()).collect();
            assert_eq!(kernel, mg.inject.iter().copied().collect());
            let trivial_action = (0..g.order()).all(|s| e.kernel().action(s).is_identity());
            assert_eq!(mg.kernel_is_central(), trivial_action || e.kernel().is_zero(), "{name}");
        }
    }
}

/// Distinct classes give inequivalent extensions; the class count matches `H²`.
#[test]
fn representatives_are_pairwise_inequivalent() {
    for name in ["C2", "C4", "C2xC2"] {
        let g = group(name);
        for spec in census_kernels(&g, 4).unwrap() {
            let a = spec.build(&g).unwrap();
            let desc = h2(&a, true).unwrap();
            let order: usize = desc.class_group.order().unwrap().try_into().unwrap();
            assert_eq!(desc.representatives.len(), order);
            let es: Vec<_> = desc
                .representatives
                .iter()
                .map(|f| GroupExtensionData::new(a.clone(), f.clone()).unwrap())
                .collect();
            for (i, x) in es.iter().enumerate() {
                for (j, y) in es.iter().enumerate() {
                    assert_eq!(equivalent(x, y).unwrap().equivalent, i == j);
                }
            }
        }
    }
}

#[test]
fn cyclic_of_order_four_from_nontrivial_class() {
    let g = group("C2");
    let a = trivial_module(g.clone(), &inv(&[2])).unwrap();
    let desc = h2(&a, true).unwrap();
    let orders: Vec<usize> = desc
        .representatives
        .iter()
        .map(|f| {
            let mg = middle_group(&GroupExtensionData::new(a.clone(), f.clone()).unwrap()).unwrap();
            mg.group.exponent()
        })
        .collect();
    assert_eq!(orders.iter().copied().collect::<BTreeSet<_>>(), BTreeSet::from([2, 4]));
}

#[test]
fn split_extension_gives_direct_sum() {
    for name in ["C2", "C3", "C2xC2"] {
        let g = group(name);
        let a = trivial_module(g.clone(), &inv(&[2])).unwrap();
        let m = splitting_module(&GroupExtensionData::split(a.clone()).unwrap()).unwrap();
        let sum = direct_sum(&a, &augmentation_ideal(g.clone()).unwrap()).unwrap();
        assert_eq!(m, sum);
        let back = dagger(&star(&GroupExtensionData::split(a).unwrap()).unwrap()).unwrap();
        assert!(back.cocycle().is_zero());
    }
}

#[test]
fn p_quotient_of_c2_by_z6() {
    let g = group("C2");
    let a = trivial_module(g, &inv(&[6])).unwrap();
    for f in h2(&a, true).unwrap().representatives {
        let e = GroupExtensionData::new(a.clone(), f).unwrap();
        let ep = p_quotient(&e, 2).unwrap();
        assert_eq!(ep.kernel().invariants(), inv(&[2]));
        let (m, mp) = (splitting_module(&e).unwrap(), splitting_module(&ep).unwrap());
        for i in -3..=3 {
            assert_eq!(tate(&m, i).unwrap(), tate(&mp, i).unwrap());
        }
    }
}

fn kernel_for(g: &GroupRef, k: usize) -> GModule {
    let specs = census_kernels(g, 4).unwrap();
    specs[k % specs.len()].build(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Shifting a cocycle by a random coboundary keeps its class, and the
    /// witness map between splitting modules is an isomorphism.
    #[test]
    fn coboundary_shift_is_harmless(
        gi in 0usize..4,
        k in 0usize..32,
        class in 0usize..64,
        raw in proptest::collection::vec(-3i64..=3, 64),
    ) {
        let g = group(["C2", "C3", "C4", "C2xC2"][gi]);
        let a = kernel_for(&g, k);
        let desc = h2(&a, true).unwrap();
        let f = desc.representatives[class % desc.representatives.len()].clone();
        let r = a.ambient_rank();
        let mut it = raw.iter().cycle();
        let c: Vec<Vec<BigInt>> = g
            .elements()
            .map(|s| (0..r).map(|_| if s == 0 { BigInt::from(0) } else { BigInt::from(*it.next().unwrap()) }).collect())
            .collect();
        let shifted = f.add_coboundary(&c).unwrap();
        prop_assert_eq!(class_index(&desc, &shifted).unwrap(), class_index(&desc, &f).unwrap());
        let e1 = GroupExtensionData::new(a.clone(), f.clone()).unwrap();
        let e2 = GroupExtensionData::new(a.clone(), shifted.clone()).unwrap();
        let eq = equivalent(&e1, &e2).unwrap();
        prop_assert!(eq.equivalent);
        let w = eq.witness.unwrap();
        prop_assert_eq!(f.add_coboundary(&w).unwrap(), shifted.clone());
        prop_assert_eq!(coboundary_of(&a, &w).unwrap().is_zero(), f == shifted);
        let phi = splitting_isomorphism(&e1, &e2, &w).unwrap();
        prop_assert!(phi.is_isomorphism().unwrap());
    }
}
