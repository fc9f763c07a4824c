use super::*;
use crate::algebra::{are_isomorphic, enumerate_subgroups, named_group, GroupName};
use crate::flows::{make_ambit, Flow};
use crate::relations::{invariant_relations, make_relation};
use proptest::prelude::*;
use std::sync::Arc;

fn group(name: GroupName) -> Arc<FiniteGroup> {
    Arc::new(named_group(name).unwrap())
}

fn caps() -> Caps {
    Caps::default()
}

fn subgroup_of_order(g: &FiniteGroup, order: usize) -> Subgroup {
    enumerate_subgroups(g, 360).unwrap().into_iter().find(|h| h.order() == order).unwrap()
}

fn left_cosets(g: &FiniteGroup, h: &Subgroup) -> EquivRelation {
    let labels: Vec<u32> = g.elements().map(|a| h.left_coset(g, a).first().unwrap() as u32).collect();
    EquivRelation::from_labels(&labels)
}

fn right_cosets(g: &FiniteGroup, h: &Subgroup) -> EquivRelation {
    let labels: Vec<u32> =
        g.elements().map(|a| h.members().iter().map(|&k| g.mul(k, a)).min().unwrap()).collect();
    EquivRelation::from_labels(&labels)
}

/// Group-like iff `([g·x₀], [x]) ↦ [g·x]` is well defined and every class is hit.
fn group_like_oracle(ambit: &Ambit, e: &EquivRelation) -> bool {
    let flow = ambit.flow();
    let g = flow.group();
    let x0 = ambit.basepoint();
    let n = flow.points() as u32;
    let hit: std::collections::HashSet<u32> = g.elements().map(|a| e.class_index(flow.act(a, x0))).collect();
    if hit.len() != e.class_count() {
        return false;
    }
    g.elements().all(|a| {
        g.elements().filter(|&b| e.related(flow.act(a, x0), flow.act(b, x0))).all(|b| {
            (0..n).all(|x| (0..n).filter(|&y| e.related(x, y)).all(|y| e.related(flow.act(a, x), flow.act(b, y))))
        })
    })
}

/// Elements of `G` acting trivially on `X`.
fn action_kernel_order(flow: &Flow) -> usize {
    let g = flow.group();
    g.elements().filter(|&a| (0..flow.points() as u32).all(|x| flow.act(a, x) == x)).count()
}

#[test]
fn right_cosets_in_s3_are_refuted() {
    let g = group(GroupName::Symmetric(3));
    let h = subgroup_of_order(&g, 2);
    let e = right_cosets(&g, &h);
    let v = check_group_like(&Ambit::regular(g.clone()), &e).unwrap();
    assert!(matches!(v, GroupLikeVerdict::NotGroupLike(Refutation::NotInvariant { .. })));
    let left = left_cosets(&g, &h);
    let v = check_group_like(&Ambit::regular(g), &left).unwrap();
    assert!(matches!(v, GroupLikeVerdict::NotGroupLike(Refutation::NotWellDefined { .. })));
}

#[test]
fn z6_modulo_order_two_gives_three_fibers() {
    let g = group(GroupName::Cyclic(6));
    let amb = Ambit::regular(g.clone());
    let e = EquivRelation::from_labels(&[0, 1, 2, 0, 1, 2]);
    let v = check_group_like(&amb, &e).unwrap();
    let cert = v.certificate().unwrap();
    assert_eq!(cert.kernel.members(), &[0, 3]);
    assert_eq!(cert.quotient_group.order(), 3);
    assert_eq!(cert.projection, vec![0, 1, 2, 0, 1, 2]);
    let s = ellis::enveloping_semigroup(amb.flow(), &caps()).unwrap();
    let r = orbit_map_r(cert, &s).unwrap();
    assert_eq!(r.fibers, 3);
    assert_eq!(r.kernel.len(), 2);
    let err = check_group_like(&amb, &EquivRelation::from_labels(&[0, 1, 2])).unwrap_err();
    assert_eq!(err, GroupLikeError::ShapeMismatch { relation: 3, ambit: 6 });
}

#[test]
fn natural_s3_quotient() {
    let g = group(GroupName::Symmetric(3));
    let amb = make_ambit(Flow::natural(g.clone()).unwrap(), 0).unwrap();
    let s = ellis::enveloping_semigroup(amb.flow(), &caps()).unwrap();
    let ig = default_ideal_group(&s).unwrap();
    let d = compute_d(&s, &ig, &amb).unwrap();
    assert_eq!(d.order(), 2);
    assert!(!d.is_normal_in(ig.group()));
    let gh = compute_ghat(&s, &ig, &amb).unwrap();
    assert_eq!(gh.h_um.order(), 1);
    assert_eq!(gh.core.order(), 1);
    assert!(are_isomorphic(gh.quotient.group(), &g).unwrap().is_isomorphic());
    let eq = EquivRelation::equality(3);
    assert!(!check_group_like(&amb, &eq).unwrap().is_group_like());
    let rep = identify_quotient(&amb, &eq, &caps()).unwrap();
    assert_eq!(rep.classes, 3);
    assert_eq!(rep.stabilizer.order(), 2);
    assert_eq!(rep.coset_classes.len(), 3);
    assert_eq!(rep.group_map.len(), 6);
}

#[test]
fn z6_index_two_identification() {
    let g = group(GroupName::Cyclic(6));
    let amb = Ambit::regular(g.clone());
    let e = EquivRelation::from_labels(&[0, 1, 0, 1, 0, 1]);
    let rep = identify_quotient(&amb, &e, &caps()).unwrap();
    assert_eq!(rep.classes, 2);
    assert_eq!(rep.ghat.quotient.order(), 6);
    assert_eq!(rep.stabilizer.order(), 3);
    assert!(are_isomorphic(rep.ghat.quotient.group(), &g).unwrap().is_isomorphic());
    let s3 = group(GroupName::Symmetric(3));
    let bad = right_cosets(&s3, &subgroup_of_order(&s3, 2));
    assert!(matches!(
        identify_quotient(&Ambit::regular(s3), &bad, &caps()),
        Err(GroupLikeError::NotWeaklyGroupLike(_))
    ));
}

#[test]
fn transformations_enter_group_likeness() {
    let swap = make_ambit(Flow::from_transformations(2, vec![vec![1, 0]]).unwrap(), 0).unwrap();
    assert_eq!(
        check_group_like(&swap, &EquivRelation::equality(2)).unwrap().certificate().map(|_| ()),
        None
    );
    assert!(matches!(
        check_group_like(&swap, &EquivRelation::equality(2)).unwrap(),
        GroupLikeVerdict::NotGroupLike(Refutation::ClassUnreached { class: 1 })
    ));
    assert!(check_group_like(&swap, &EquivRelation::total(2)).unwrap().is_group_like());
    let g = group(GroupName::Cyclic(2));
    let flow = crate::flows::make_flow(g, 4, crate::flows::ActionSpec::GeneratorImages(vec![vec![1, 0, 3, 2]]), vec![
        vec![2, 3, 0, 1],
        vec![0, 0, 2, 2],
    ])
    .unwrap();
    let amb = make_ambit(flow, 0).unwrap();
    let e = EquivRelation::from_labels(&[0, 0, 1, 1]);
    assert!(matches!(
        check_group_like(&amb, &e).unwrap(),
        GroupLikeVerdict::NotGroupLike(Refutation::ClassUnreached { .. })
    ));
    let e = EquivRelation::from_labels(&[0, 1, 0, 1]);
    assert!(matches!(
        check_group_like(&amb, &e).unwrap(),
        GroupLikeVerdict::NotGroupLike(Refutation::TransformationIncompatible { index: 1, x: 1 })
    ));
}

#[test]
fn domination_of_natural_s3() {
    let g = group(GroupName::Symmetric(3));
    let nat = make_ambit(Flow::natural(g.clone()).unwrap(), 0).unwrap();
    let reg = Ambit::regular(g.clone());
    let pm: Vec<u32> = g.elements().map(|a| nat.flow().act(a, 0)).collect();
    let morphism = FlowMorphism::same_group(&reg, &nat, pm);
    let w = DominationWitness {
        morphism: morphism.clone(),
        source_relation: EquivRelation::equality(6),
        target_relation: EquivRelation::equality(3),
    };
    match check_domination(&w).unwrap() {
        DominationVerdict::Dominates { induced } => {
            let mut sorted = induced.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![0, 0, 1, 1, 2, 2]);
        }
        other => panic!("{other:?}"),
    }
    let total = DominationWitness { source_relation: EquivRelation::total(6), ..w.clone() };
    assert!(matches!(check_domination(&total).unwrap(), DominationVerdict::NotRefining { z1: 0, .. }));
    let h = subgroup_of_order(&g, 2);
    let src = DominationWitness { source_relation: left_cosets(&g, &h), ..w.clone() };
    assert!(matches!(check_domination(&src).unwrap(), DominationVerdict::SourceNotGroupLike(_)));
    let id = FlowMorphism::identity(&reg);
    let skew = DominationWitness {
        morphism: id,
        source_relation: EquivRelation::equality(6),
        target_relation: right_cosets(&g, &h),
    };
    assert!(matches!(check_domination(&skew).unwrap(), DominationVerdict::NotLeftInvariant { .. }));
    let mut broken = morphism;
    broken.point_map = vec![0; 6];
    let bad = DominationWitness { morphism: broken, ..w };
    assert!(matches!(check_domination(&bad).unwrap(), DominationVerdict::MorphismInvalid(_)));
}

fn natural_witness(e: EquivRelation) -> ProperWitness {
    let g = group(GroupName::Symmetric(3));
    let nat = make_ambit(Flow::natural(g.clone()).unwrap(), 0).unwrap();
    let fiber_map = g.elements().map(|a| nat.flow().act(a, 0)).collect();
    ProperWitness { ambit: nat, relation: e, cover: (*g).clone(), fiber_map }
}

#[test]
fn proper_witness_clauses() {
    let rep = check_proper_witness(&natural_witness(EquivRelation::equality(3))).unwrap();
    assert_eq!(rep.unreached, None);
    assert_eq!(rep.homomorphism, Err(None));
    assert_eq!(rep.pseudocompleteness, None);
    assert_eq!(rep.f0.to_u32_vec(), vec![0]);
    assert!(!rep.is_valid());
    let rep = check_proper_witness(&natural_witness(EquivRelation::total(3))).unwrap();
    assert!(rep.is_valid());
    let mut pw = natural_witness(EquivRelation::total(3));
    pw.fiber_map = vec![0; 6];
    let rep = check_proper_witness(&pw).unwrap();
    assert_eq!(rep.unreached, Some(1));
    assert!(rep.pseudocompleteness.is_some());
}

/// `D_k`: pairs in the same class whose cyclic distance is at most `k`.
fn distance_family(n: usize, e: &EquivRelation, last: usize) -> Vec<BitSet> {
    (0..=last)
        .map(|k| {
            let pairs = (0..n * n).filter(|&p| {
                let (a, b) = (p / n, p % n);
                let d = (a + n - b) % n;
                e.related(a as u32, b as u32) && d.min(n - d) <= k
            });
            BitSet::from_iter(n * n, pairs)
        })
        .collect()
}

#[test]
fn uniform_witness_on_z6() {
    let g = group(GroupName::Cyclic(6));
    let e = EquivRelation::from_labels(&[0, 1, 0, 1, 0, 1]);
    let pw = ProperWitness { ambit: Ambit::regular(g.clone()), relation: e.clone(), cover: (*g).clone(), fiber_map: (0..6).collect() };
    assert!(check_proper_witness(&pw).unwrap().is_valid());
    let members = distance_family(6, &e, 3);
    let successor: Vec<usize> = (0..4).map(|k| (2 * k).min(3)).collect();
    let fam = UniformWitnessFamily { members: members.clone(), successor };
    assert_eq!(check_uniform_witness(&e, &fam, &pw).unwrap(), UniformVerdict::Valid);
    let shrink = UniformWitnessFamily { members: members.clone(), successor: vec![0, 0, 0, 0] };
    assert_eq!(check_uniform_witness(&e, &shrink, &pw).unwrap(), UniformVerdict::CompositionEscapes { member: 2 });
    let short = UniformWitnessFamily { members: members[..2].to_vec(), successor: vec![0, 1] };
    assert_eq!(check_uniform_witness(&e, &short, &pw).unwrap(), UniformVerdict::UnionMismatch);
    let mut holes = members.clone();
    holes[1].remove(7);
    let holed = UniformWitnessFamily { members: holes, successor: vec![0, 2, 3, 3] };
    assert_eq!(check_uniform_witness(&e, &holed, &pw).unwrap(), UniformVerdict::MissingDiagonal { member: 1 });
    let mut lopsided = members;
    lopsided[2].remove(2);
    let lop = UniformWitnessFamily { members: lopsided, successor: vec![0, 2, 3, 3] };
    assert_eq!(check_uniform_witness(&e, &lop, &pw).unwrap(), UniformVerdict::NotSymmetric { member: 2 });
}

#[test]
fn relations_on_small_cosets_match_oracle() {
    for name in [GroupName::Cyclic(4), GroupName::Symmetric(3), GroupName::Dihedral(4), GroupName::Quaternion] {
        let g = group(name);
        for h in enumerate_subgroups(&g, 360).unwrap() {
            let flow = Flow::coset_action(g.clone(), &h);
            if flow.points() > 6 {
                continue;
            }
            let amb = make_ambit(flow.clone(), 0).unwrap();
            let n = flow.points();
            for e in partitions(n) {
                let e = make_relation(n, e, None).unwrap();
                assert_eq!(check_group_like(&amb, &e).unwrap().is_group_like(), group_like_oracle(&amb, &e), "{e:?}");
            }
        }
    }
}

fn partitions(n: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<Vec<u32>>>) {
        if i == labels.len() {
            let k = labels.iter().max().map_or(0, |m| m + 1);
            let mut classes = vec![Vec::new(); k];
            for (x, &l) in labels.iter().enumerate() {
                classes[l].push(x as u32);
            }
            out.push(classes);
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(i + 1, max.max(l + 1), labels, out);
        }
    }
    if n > 0 {
        rec(1, 1, &mut labels, &mut out);
    }
    out
}

fn coset_strategy() -> impl Strategy<Value = (GroupName, usize)> {
    prop_oneof![
        Just(GroupName::Cyclic(6)),
        Just(GroupName::Cyclic(8)),
        Just(GroupName::Symmetric(3)),
        Just(GroupName::Dihedral(4)),
        Just(GroupName::Dihedral(5)),
        Just(GroupName::Quaternion),
        Just(GroupName::Symmetric(4)),
    ]
    .prop_flat_map(|n| (Just(n), 0usize..64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identification_on_group_flows((name, pick) in coset_strategy()) {
        let g = group(name);
        let subs = enumerate_subgroups(&g, 360).unwrap();
        let h = &subs[pick % subs.len()];
        let flow = Flow::coset_action(g.clone(), h);
        prop_assume!(flow.points() <= 8);
        let amb = make_ambit(flow.clone(), 0).unwrap();
        let kernel = action_kernel_order(&flow);
        for e in invariant_relations(&flow, 8).unwrap() {
            let rep = identify_quotient(&amb, &e, &caps()).unwrap();
            prop_assert_eq!(rep.ghat.quotient.order(), g.order() / kernel);
            prop_assert_eq!(rep.classes * rep.stabilizer.order(), rep.ghat.quotient.order());
            let gl = check_group_like(&amb, &e).unwrap();
            prop_assert_eq!(gl.is_group_like(), group_like_oracle(&amb, &e));
            if let Some(cert) = gl.certificate() {
                let s = ellis::enveloping_semigroup(&flow, &caps()).unwrap();
                let r = orbit_map_r(cert, &s).unwrap();
                prop_assert_eq!(r.fibers, e.class_count());
                prop_assert_eq!(r.kernel.len() * e.class_count(), s.len());
                prop_assert_eq!(rep.stabilizer.order(), rep.ghat.quotient.order() / e.class_count());
            }
        }
    }

    #[test]
    fn normal_cosets_are_group_like((name, pick) in coset_strategy()) {
        let g = group(name);
        let subs = enumerate_subgroups(&g, 360).unwrap();
        let h = &subs[pick % subs.len()];
        let e = left_cosets(&g, h);
        let v = check_group_like(&Ambit::regular(g.clone()), &e).unwrap();
        prop_assert_eq!(v.is_group_like(), h.is_normal_in(&g));
        if let Some(cert) = v.certificate() {
            prop_assert_eq!(cert.kernel.members(), h.members());
            prop_assert_eq!(cert.quotient_group.order() * h.order(), g.order());
        }
    }

    #[test]
    fn d_matches_stabilizer_on_transformation_ambits(maps in proptest::collection::vec(proptest::collection::vec(0u32..4, 4), 1..3)) {
        let flow = Flow::from_transformations(4, maps).unwrap();
        let reach = flow.reachable(0);
        prop_assume!(reach.is_full());
        let amb = make_ambit(flow.clone(), 0).unwrap();
        let s = ellis::enveloping_semigroup(&flow, &caps()).unwrap();
        let ig = default_ideal_group(&s).unwrap();
        let d = compute_d(&s, &ig, &amb).unwrap();
        let u0 = s.apply(ig.idempotent(), 0);
        let count = ig.members().iter().filter(|&&f| s.apply(f, 0) == u0).count();
        prop_assert_eq!(d.order(), count);
        let gh = compute_ghat(&s, &ig, &amb).unwrap();
        prop_assert_eq!(gh.quotient.order() * gh.core.order(), ig.order());
    }
}

/// `D_k`: pairs `(x, y)` with `y − x` a word of length at most `k` in `±step`.
fn word_family(n: usize, step: usize, last: usize) -> Vec<BitSet> {
    let mut length = vec![usize::MAX; n];
    let mut frontier = vec![0usize];
    length[0] = 0;
    while let Some(a) = frontier.pop() {
        for b in [(a + step) % n, (a + n - step) % n] {
            if length[b] > length[a] + 1 {
                length[b] = length[a] + 1;
                frontier.push(b);
            }
        }
    }
    (0..=last)
        .map(|k| BitSet::from_iter(n * n, (0..n * n).filter(|&p| length[(p % n + n - p / n) % n] <= k)))
        .collect()
}

#[test]
fn lascar_style_family_on_z12() {
    let g = group(GroupName::Cyclic(12));
    let labels: Vec<u32> = (0..12).map(|x| x % 3).collect();
    let e = EquivRelation::from_labels(&labels);
    let pw = ProperWitness { ambit: Ambit::regular(g.clone()), relation: e.clone(), cover: (*g).clone(), fiber_map: (0..12).collect() };
    let members = word_family(12, 3, 2);
    assert_eq!(members[2], e.pair_set());
    let fam = UniformWitnessFamily { members: members.clone(), successor: (0..3).map(|k| (2 * k + 2).min(2)).collect() };
    assert!(check_uniform_witness(&e, &fam, &pw).unwrap().is_valid());
    let single = UniformWitnessFamily { members: vec![e.pair_set()], successor: vec![0] };
    assert!(check_uniform_witness(&e, &single, &pw).unwrap().is_valid());
    let tight = UniformWitnessFamily { members, successor: vec![0, 1, 2] };
    assert!(matches!(
        check_uniform_witness(&e, &tight, &pw).unwrap(),
        UniformVerdict::CompositionEscapes { member: 1 }
    ));
}

#[test]
fn identification_carries_domination() {
    let g = group(GroupName::Cyclic(6));
    let amb = Ambit::regular(g);
    let e = EquivRelation::from_labels(&[0, 1, 2, 0, 1, 2]);
    let rep = identify_quotient(&amb, &e, &caps()).unwrap();
    assert_eq!(rep.domination, vec![0, 1, 2]);
    let w = regular_domination(&amb, &e).unwrap();
    assert_eq!(w.source_relation, e);
    let swap = make_ambit(Flow::from_transformations(2, vec![vec![1, 0]]).unwrap(), 0).unwrap();
    assert!(matches!(
        identify_quotient(&swap, &EquivRelation::equality(2), &caps()),
        Err(GroupLikeError::NotWeaklyGroupLike(_))
    ));
    let total = identify_quotient(&amb, &EquivRelation::total(6), &caps()).unwrap();
    assert_eq!(total.stabilizer.order(), total.ghat.quotient.order());
}
