use std::sync::Arc;

use elliskit_core::algebra::{enumerate_subgroups, named_group, GroupName, Subgroup};
use elliskit_core::ellis::{check_ideal_structure, enveloping_semigroup, ideal_group, minimal_left_ideals};
use elliskit_core::flows::{make_ambit, Ambit, Flow};
use elliskit_core::grouplike::identify_quotient;
use elliskit_core::relations::{
    free_action_correspondence, invariant_relations, is_orbital, is_weakly_orbital, make_relation, EquivRelation,
};
use elliskit_core::Caps;
use proptest::prelude::*;

fn group(name: GroupName) -> Arc<elliskit_core::algebra::FiniteGroup> {
    Arc::new(named_group(name).unwrap())
}

#[test]
fn group_flows_have_themselves_as_semigroup() {
    let flow = Flow::natural(group(GroupName::Symmetric(4))).unwrap();
    let s = enveloping_semigroup(&flow, &Caps::default()).unwrap();
    assert_eq!(s.len(), 24);
    let ideals = minimal_left_ideals(&s);
    assert_eq!(ideals.len(), 1);
    assert_eq!(ideals[0].len(), 24);
    assert_eq!(ideals[0].idempotents(), &[s.identity()]);
    assert!(check_ideal_structure(&s).iter().all(|c| c.passed));
}

#[test]
fn constant_maps_form_the_minimal_ideals() {
    let flow = Flow::from_transformations(3, vec![vec![1, 2, 0], vec![0, 0, 0]]).unwrap();
    let s = enveloping_semigroup(&flow, &Caps::default()).unwrap();
    let ideals = minimal_left_ideals(&s);
    assert_eq!(ideals.len(), 1);
    let m = &ideals[0];
    assert_eq!(m.len(), 3);
    assert!(m.members().iter().all(|&f| s.map(f).iter().all(|&y| y == s.map(f)[0])));
    assert_eq!(m.idempotents().len(), 3);
    assert_eq!(ideal_group(&s, m, m.idempotents()[0]).unwrap().order(), 1);
}

#[test]
fn coset_ambit_identifies_with_the_quotient() {
    let g = group(GroupName::Symmetric(3));
    let h = Subgroup::from_members(&g, &[g.identity(), 3]).unwrap();
    let flow = Flow::coset_action(g.clone(), &h);
    let ambit = make_ambit(flow, 0).unwrap();
    let e = EquivRelation::equality(3);
    let id = identify_quotient(&ambit, &e, &Caps::default()).unwrap();
    assert_eq!(id.classes, 3);
    assert_eq!(id.classes * id.stabilizer.order(), id.ghat.quotient.order());
    assert_eq!(id.ghat.quotient.order(), 6);
    assert_eq!(id.coset_classes.len(), 3);
}

#[test]
fn regular_cyclic_relations_are_subgroup_cosets() {
    let g = group(GroupName::Cyclic(6));
    let flow = Flow::regular(g.clone());
    let rels = invariant_relations(&flow, 10).unwrap();
    let subs = enumerate_subgroups(&g, 6).unwrap();
    assert_eq!(rels.len(), subs.len());
    assert_eq!(free_action_correspondence(&flow, &Caps::default()).unwrap().len(), 4);
    for e in &rels {
        assert!(is_orbital(&flow, e).unwrap().is_orbital());
    }
    let ambit = Ambit::regular(g);
    let halves = make_relation(6, vec![vec![0, 2, 4], vec![1, 3, 5]], Some(ambit.flow())).unwrap();
    let id = identify_quotient(&ambit, &halves, &Caps::default()).unwrap();
    assert_eq!((id.classes, id.stabilizer.order(), id.ghat.quotient.order()), (2, 3, 6));
}

#[test]
fn square_relations_are_orbital() {
    let flow = Flow::natural(group(GroupName::Dihedral(4))).unwrap();
    let rels = invariant_relations(&flow, 10).unwrap();
    assert_eq!(rels.len(), 3);
    for e in &rels {
        assert!(is_orbital(&flow, e).unwrap().is_orbital());
        assert!(is_weakly_orbital(&flow, e, &Caps::default()).unwrap().is_weakly_orbital());
    }
}

fn transformation_flow() -> impl Strategy<Value = Flow> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0..n as u32, n), 1..=2)
            .prop_map(move |maps| Flow::from_transformations(n, maps).unwrap())
    })
}

proptest! {
    #[test]
    fn ideal_groups_in_one_ideal_share_an_order(flow in transformation_flow()) {
        let s = enveloping_semigroup(&flow, &Caps::default()).unwrap();
        prop_assert!(check_ideal_structure(&s).iter().all(|c| c.passed));
        let ideals = minimal_left_ideals(&s);
        let order = ideal_group(&s, &ideals[0], ideals[0].idempotents()[0]).unwrap().order();
        for m in &ideals {
            prop_assert_eq!(m.len() % order, 0);
            for &u in m.idempotents() {
                prop_assert_eq!(ideal_group(&s, m, u).unwrap().order(), order);
            }
            prop_assert_eq!(m.idempotents().len() * order, m.len());
        }
    }
}
