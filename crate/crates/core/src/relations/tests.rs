use super::*;
use crate::algebra::{named_group, subgroup_generated, GroupName};
use crate::flows::{disjoint_union_flow, make_flow, ActionSpec};
use proptest::prelude::*;
use std::sync::Arc;

fn group(name: GroupName) -> Arc<FiniteGroup> {
    Arc::new(named_group(name).unwrap())
}

fn caps() -> Caps {
    Caps::default()
}

fn subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    enumerate_subgroups(g, 360).unwrap()
}

/// `R_{H,X̃}` straight from the existential definition.
fn r_oracle(flow: &Flow, h: &Subgroup, support: &BitSet) -> BitSet {
    let n = flow.points();
    let mut out = BitSet::new(n * n);
    for x1 in 0..n as u32 {
        for x2 in 0..n as u32 {
            let hit = flow.group().elements().any(|g| {
                let y = flow.act(g, x1);
                support.contains(y as usize) && h.members().iter().any(|&k| flow.act(k, flow.act(g, x2)) == y)
            });
            if hit {
                out.insert(x1 as usize * n + x2 as usize);
            }
        }
    }
    out
}

/// Whether some pair `(H, X̃)` over all subgroups and all subsets gives `E`.
fn weak_oracle(flow: &Flow, e: &EquivRelation) -> bool {
    let n = flow.points();
    let target = e.pair_set();
    subgroups(flow.group()).iter().any(|h| {
        (0u32..1 << n).any(|bits| {
            let support = BitSet::from_iter(n, (0..n).filter(|&x| bits >> x & 1 == 1));
            r_oracle(flow, h, &support) == target
        })
    })
}

fn orbital_oracle(flow: &Flow, e: &EquivRelation) -> bool {
    subgroups(flow.group()).iter().any(|h| orbit_relation(flow, h) == *e)
}

/// Transitive actions and two-orbit unions with `|G| ≤ 8`, `|X| ≤ 6`.
fn small_actions() -> Vec<Flow> {
    let names = [
        GroupName::Cyclic(1),
        GroupName::Cyclic(2),
        GroupName::Cyclic(3),
        GroupName::Cyclic(4),
        GroupName::Cyclic(6),
        GroupName::Symmetric(3),
        GroupName::Dihedral(4),
        GroupName::Quaternion,
    ];
    let mut out = Vec::new();
    for name in names {
        let g = group(name);
        let cosets: Vec<Flow> =
            subgroups(&g).iter().map(|h| Flow::coset_action(g.clone(), h)).filter(|f| f.points() <= 6).collect();
        for (i, a) in cosets.iter().enumerate() {
            out.push(a.clone());
            for b in &cosets[i..] {
                if a.points() + b.points() <= 6 {
                    out.push(disjoint_union_flow(&[a.clone(), b.clone()]).unwrap());
                }
            }
        }
    }
    out
}

fn rel(points: usize, classes: &[&[u32]]) -> EquivRelation {
    make_relation(points, classes.iter().map(|c| c.to_vec()).collect(), None).unwrap()
}

#[test]
fn make_relation_examples() {
    let g = group(GroupName::Symmetric(3));
    let reg = Flow::regular(g.clone());
    let eq = make_relation(6, (0..6).map(|x| vec![x]).collect(), Some(&reg)).unwrap();
    assert_eq!(eq.invariance(), Some(Invariance::Invariant));
    let tot = make_relation(6, vec![(0..6).collect()], Some(&reg)).unwrap();
    assert_eq!(tot.invariance(), Some(Invariance::Invariant));
    // right cosets {Hx} of the non-normal H = {e, (01)}
    let h = Subgroup::from_members(&g, &[0, 1]).unwrap();
    assert!(!h.is_normal_in(&g));
    let labels: Vec<Vec<u32>> = g.elements().map(|x| { let mut c: Vec<u32> = h.members().iter().map(|&k| g.mul(k, x)).collect(); c.sort(); c }).collect();
    let right = EquivRelation::from_labels(&labels);
    assert_eq!(right.class_count(), 3);
    assert!(!invariance(&reg, &right).unwrap().is_invariant());
    assert!(matches!(make_relation(3, vec![vec![0, 1], vec![1, 2]], None), Err(RelationError::NotAPartition(_))));
    assert!(matches!(make_relation(3, vec![vec![0, 1]], None), Err(RelationError::NotAPartition(_))));
    assert!(matches!(make_relation(2, vec![vec![0, 5], vec![1]], None), Err(RelationError::NotAPartition(_))));
    assert_eq!(rel(4, &[&[3, 1], &[2, 0]]).classes(), &[vec![0, 2], vec![1, 3]]);
}

#[test]
fn kernel_group_examples() {
    let s3 = Flow::natural(group(GroupName::Symmetric(3))).unwrap();
    assert_eq!(kernel_group(&s3, &EquivRelation::equality(3)).unwrap().order(), 1);
    assert_eq!(kernel_group(&s3, &EquivRelation::total(3)).unwrap().order(), 6);
    let z4 = Flow::regular(group(GroupName::Cyclic(4)));
    assert_eq!(kernel_group(&z4, &rel(4, &[&[0, 2], &[1, 3]])).unwrap().members(), &[0, 2]);
    assert!(matches!(kernel_group(&s3, &rel(3, &[&[0, 1], &[2]])), Err(RelationError::NotInvariant { .. })));
}

#[test]
fn orbit_relation_examples() {
    let g = group(GroupName::Symmetric(3));
    let reg = Flow::regular(g.clone());
    assert_eq!(orbit_relation(&reg, &Subgroup::trivial(&g)), EquivRelation::equality(6));
    assert_eq!(orbit_relation(&reg, &Subgroup::whole(&g)), EquivRelation::total(6));
    let a3 = subgroups(&g).into_iter().find(|h| h.order() == 3).unwrap();
    let e = orbit_relation(&reg, &a3);
    assert_eq!(e.classes().iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3]);
    assert_eq!(e.invariance(), Some(Invariance::Invariant));
}

#[test]
fn r_relation_examples() {
    let g = group(GroupName::Dihedral(4));
    let reg = Flow::regular(g.clone());
    let n = subgroups(&g).into_iter().find(|h| h.order() == 4 && h.is_normal_in(&g)).unwrap();
    let e = orbit_relation(&reg, &n);
    let w = WitnessPair { subgroup: kernel_group(&reg, &e).unwrap(), support: BitSet::full(8) };
    assert_eq!(r_relation(&reg, &w).equivalence(), Some(&e));
    // singleton support with the class stabiliser on the square
    let sq = Flow::natural(group(GroupName::Dihedral(4))).unwrap();
    let pairs = rel(4, &[&[0, 2], &[1, 3]]);
    let mut pairs_bound = pairs.clone();
    assert!(pairs_bound.bind(&sq).unwrap().is_invariant());
    let stab = Subgroup::from_members(sq.group(), &class_stabilizer(&sq, &pairs, 0).to_u32_vec()).unwrap();
    let w = WitnessPair { subgroup: stab, support: BitSet::from_iter(4, [0]) };
    assert_eq!(r_relation(&sq, &w).equivalence(), Some(&pairs));
    // D4 on the cosets of a reflection, twisted by another reflection
    let subs = subgroups(&g);
    let k = subs.iter().find(|h| h.members() == [0, 4]).unwrap();
    let h = subs.iter().find(|h| h.members() == [0, 5]).unwrap();
    let f = Flow::coset_action(g.clone(), k);
    let w = WitnessPair { subgroup: h.clone(), support: BitSet::from_iter(4, [0]) };
    let r = r_relation(&f, &w);
    assert_eq!(r.pairs, r_oracle(&f, h, &w.support));
    match r.verdict {
        RVerdict::NotTransitive { x, y, z } => {
            assert!(r.related(x, y) && r.related(y, z) && !r.related(x, z));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn class_formula_examples() {
    let s3 = Flow::natural(group(GroupName::Symmetric(3))).unwrap();
    let g = s3.group();
    let h = subgroup_generated(g, &[g.elements().find(|&a| s3.element_map(a) == [1, 0, 2]).unwrap()]);
    let w = WitnessPair { subgroup: h, support: BitSet::from_iter(3, [0]) };
    let r = r_relation(&s3, &w);
    for x in 0..3 {
        assert_eq!(class_formula(&s3, &w, x), r.row(x));
    }
    let t = make_flow(group(GroupName::Cyclic(2)), 2, ActionSpec::Trivial, vec![]).unwrap();
    let w = WitnessPair { subgroup: Subgroup::whole(t.group()), support: BitSet::from_iter(2, [0]) };
    assert!(class_formula(&t, &w, 1).is_empty());
    assert_eq!(r_relation(&t, &w).verdict, RVerdict::NotReflexive { x: 1 });
    let z4 = Flow::regular(group(GroupName::Cyclic(4)));
    let h = Subgroup::from_members(z4.group(), &[0, 2]).unwrap();
    let w = WitnessPair { subgroup: h, support: BitSet::full(4) };
    assert_eq!(class_formula(&z4, &w, 1).to_u32_vec(), vec![1, 3]);
}

/// Alternating maximalisation written from the two defining formulas.
fn maximal_oracle(flow: &Flow, e: &EquivRelation, h: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let n = flow.points() as u32;
    let mut h = h.to_vec();
    loop {
        let xs: Vec<u32> = (0..n).filter(|&x| h.iter().all(|&k| e.related(x, flow.act(k, x)))).collect();
        let hs: Vec<u32> = flow.group().elements().filter(|&g| xs.iter().all(|&x| e.related(x, flow.act(g, x)))).collect();
        if hs == h {
            return (hs, xs);
        }
        h = hs;
    }
}

#[test]
fn maximal_witness_examples() {
    let g = group(GroupName::Dihedral(4));
    let reg = Flow::regular(g.clone());
    let n = subgroups(&g).into_iter().find(|h| h.order() == 2 && h.is_normal_in(&g)).unwrap();
    let e = orbit_relation(&reg, &n);
    let w = WitnessPair { subgroup: n.clone(), support: BitSet::full(8) };
    assert_eq!(maximal_witnesses(&reg, &e, &w).unwrap(), w);
    let sq = Flow::natural(group(GroupName::Dihedral(4))).unwrap();
    let e = rel(4, &[&[0, 2], &[1, 3]]);
    let stab = Subgroup::from_members(sq.group(), &class_stabilizer(&sq, &e, 0).to_u32_vec()).unwrap();
    let w = WitnessPair { subgroup: stab.clone(), support: BitSet::from_iter(4, [0]) };
    let m = maximal_witnesses(&sq, &e, &w).unwrap();
    let (hs, xs) = maximal_oracle(&sq, &e, stab.members());
    assert_eq!((m.subgroup.members().to_vec(), m.support.to_u32_vec()), (hs, xs));
    assert_eq!(e.saturate(&m.support), m.support);
    let bad = WitnessPair { subgroup: Subgroup::trivial(sq.group()), support: BitSet::full(4) };
    assert!(matches!(maximal_witnesses(&sq, &e, &bad), Err(RelationError::NotAWitness(_))));
}

#[test]
fn orbital_examples() {
    let g = group(GroupName::Symmetric(3));
    let reg = Flow::regular(g.clone());
    let a3 = subgroups(&g).into_iter().find(|h| h.order() == 3).unwrap();
    assert!(is_orbital(&reg, &orbit_relation(&reg, &a3)).unwrap().is_orbital());
    // left cosets xK of a non-normal K are invariant under left translation
    let k = Subgroup::from_members(&g, &[0, 1]).unwrap();
    let labels: Vec<Vec<u32>> = g.elements().map(|x| k.left_coset(&g, x).to_u32_vec()).collect();
    let left = EquivRelation::from_labels(&labels);
    let v = is_orbital(&reg, &left).unwrap();
    assert!(!v.is_orbital());
    assert_eq!(v.kernel().order(), 1);
    assert!(is_weakly_orbital(&reg, &left, &caps()).unwrap().is_weakly_orbital());
    // commutative transitive: every invariant relation is orbital
    let z6 = Flow::regular(group(GroupName::Cyclic(6)));
    for e in invariant_relations(&z6, 6).unwrap() {
        assert!(is_orbital(&z6, &e).unwrap().is_orbital());
    }
    let sq = Flow::natural(group(GroupName::Dihedral(4))).unwrap();
    for e in invariant_relations(&sq, 6).unwrap() {
        assert_eq!(is_orbital(&sq, &e).unwrap().is_orbital(), orbital_oracle(&sq, &e));
    }
}

#[test]
fn free_correspondence_examples() {
    let z4 = Flow::regular(group(GroupName::Cyclic(4)));
    assert_eq!(free_action_correspondence(&z4, &caps()).unwrap().len(), 3);
    let s3 = Flow::regular(group(GroupName::Symmetric(3)));
    let orders: Vec<usize> = free_action_correspondence(&s3, &caps()).unwrap().iter().map(|(n, _)| n.order()).collect();
    assert_eq!(orders, vec![1, 3, 6]);
    let one = Flow::regular(Arc::new(FiniteGroup::trivial()));
    assert_eq!(free_action_correspondence(&one, &caps()).unwrap().len(), 1);
    let nat = Flow::natural(group(GroupName::Symmetric(3))).unwrap();
    assert!(matches!(free_action_correspondence(&nat, &caps()), Err(RelationError::NotFree { .. })));
}

#[test]
fn invariant_relation_enumeration() {
    // Bell(4) = 15 partitions; the trivial action keeps all of them
    let t = make_flow(Arc::new(FiniteGroup::trivial()), 4, ActionSpec::Trivial, vec![]).unwrap();
    assert_eq!(invariant_relations(&t, 6).unwrap().len(), 15);
    let s3 = Flow::natural(group(GroupName::Symmetric(3))).unwrap();
    assert_eq!(invariant_relations(&s3, 6).unwrap().len(), 2);
}

#[test]
fn decisions_match_brute_force_on_small_actions() {
    let mut weak_false = 0;
    let mut checked = 0;
    for f in small_actions().iter().filter(|f| f.points() <= 4) {
        for e in invariant_relations(f, 6).unwrap() {
            let weak = is_weakly_orbital(f, &e, &caps()).unwrap();
            assert_eq!(weak.is_weakly_orbital(), weak_oracle(f, &e), "{e:?}");
            assert_eq!(is_orbital(f, &e).unwrap().is_orbital(), orbital_oracle(f, &e));
            if f.is_transitive() {
                assert!(weak.is_weakly_orbital());
            }
            weak_false += !weak.is_weakly_orbital() as usize;
            checked += 1;
        }
    }
    assert!(checked > 100);
    assert!(weak_false > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn r_relation_matches_definition(fi in 0usize..400, hi in 0usize..30, bits in any::<u32>()) {
        let flows = small_actions();
        let f = &flows[fi % flows.len()];
        let subs = subgroups(f.group());
        let h = &subs[hi % subs.len()];
        let n = f.points();
        let support = BitSet::from_iter(n, (0..n).filter(|&x| bits >> x & 1 == 1));
        let w = WitnessPair { subgroup: h.clone(), support: support.clone() };
        let r = r_relation(f, &w);
        prop_assert_eq!(&r.pairs, &r_oracle(f, h, &support));
        for x in 0..n as u32 {
            prop_assert_eq!(class_formula(f, &w, x), r.row(x));
        }
        if let Some(e) = r.equivalence() {
            let m = maximal_witnesses(f, e, &w).unwrap();
            prop_assert_eq!(maximal_witnesses(f, e, &m).unwrap(), m.clone());
            prop_assert!(h.is_subgroup_of(&m.subgroup) && support.is_subset(&m.support));
        }
    }

    #[test]
    fn orbital_iff_normal_or_full_witness(fi in 0usize..400, ri in 0usize..64) {
        let flows = small_actions();
        let f = &flows[fi % flows.len()];
        let rels = invariant_relations(f, 6).unwrap();
        let e = &rels[ri % rels.len()];
        let kernel = kernel_group(f, e).unwrap();
        prop_assert!(kernel.is_normal_in(f.group()));
        let orbital = is_orbital(f, e).unwrap().is_orbital();
        let subs = subgroups(f.group());
        let full = subs.iter().any(|h| witnesses(f, e, &WitnessPair { subgroup: h.clone(), support: BitSet::full(f.points()) }));
        let normal = subs.iter().filter(|h| h.is_normal_in(f.group())).any(|h| {
            witnesses(f, e, &WitnessPair { subgroup: h.clone(), support: maximal_support(f, e, h) })
        });
        prop_assert_eq!(orbital, full);
        prop_assert_eq!(orbital, normal);
        for h in &subs {
            let eh = orbit_relation(f, h);
            if h.is_normal_in(f.group()) {
                prop_assert!(eh.invariance().unwrap().is_invariant());
            }
            if f.freeness_witness().is_none() && eh.invariance().unwrap().is_invariant() {
                prop_assert!(h.is_normal_in(f.group()));
            }
        }
    }
}
