use super::*;
use crate::algebra::{named_group, FiniteGroup, GroupName};
use crate::flows::disjoint_union_flow;
use crate::relations::{invariant_relations, is_weakly_orbital, r_relation};
use proptest::prelude::*;
use std::sync::Arc;

fn caps() -> Caps {
    Caps::default()
}

fn group(name: GroupName) -> Arc<FiniteGroup> {
    Arc::new(named_group(name).unwrap())
}

fn set(n: usize, xs: &[usize]) -> BitSet {
    BitSet::from_iter(n, xs.iter().copied())
}

/// Closure of a family under pairwise union and intersection, plus `∅` and the ground.
fn closure_oracle(n: usize, sets: &[BitSet]) -> HashSet<BitSet> {
    let mut out: HashSet<BitSet> = sets.iter().cloned().collect();
    out.insert(BitSet::new(n));
    out.insert(BitSet::full(n));
    loop {
        let cur: Vec<BitSet> = out.iter().cloned().collect();
        let before = out.len();
        for a in &cur {
            for b in &cur {
                out.insert(a.union(b));
                out.insert(a.intersection(b));
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

fn rectangles(a: &[BitSet], b: &[BitSet]) -> Vec<BitSet> {
    let m = b[0].capacity();
    let mut out = Vec::new();
    for s in a {
        for t in b {
            out.push(BitSet::from_iter(s.capacity() * m, s.iter().flat_map(|x| t.iter().map(move |y| x * m + y))));
        }
    }
    out
}

/// The literal axioms, quantifying over every pseudo-closed set of every lattice.
fn agreeable_oracle(inst: &StructuredInstance) -> [bool; 6] {
    let caps = caps();
    let sets = |g: Ground| -> HashSet<BitSet> { inst.lattice(g).sets(&caps).unwrap().into_iter().collect() };
    let flow = inst.flow();
    let (k, n) = (flow.group().order(), flow.points());
    let section = |s: &BitSet, m: usize, first: Option<usize>, second: Option<usize>| -> BitSet {
        match (first, second) {
            (Some(y), _) => BitSet::from_iter(m, (0..m).filter(|&z| s.contains(y * m + z))),
            (_, Some(z)) => BitSet::from_iter(s.capacity() / m, (0..s.capacity() / m).filter(|&y| s.contains(y * m + z))),
            _ => unreachable!(),
        }
    };
    let mut out = [true; 6];
    for ground in [Ground::GX, Ground::XX, Ground::XG] {
        let (fa, fb) = ground.factors().unwrap();
        let (sa, sb, sl) = (sets(fa), sets(fb), sets(ground));
        let m = inst.lattice(fb).size();
        let rows = inst.lattice(fa).size();
        for s in &sl {
            out[0] &= (0..rows).all(|y| sb.contains(&section(s, m, Some(y), None)))
                && (0..m).all(|z| sa.contains(&section(s, m, None, Some(z))));
        }
        let va: Vec<BitSet> = sa.into_iter().collect();
        let vb: Vec<BitSet> = sb.into_iter().collect();
        out[1] &= rectangles(&va, &vb).iter().all(|r| sl.contains(r));
    }
    let (sx, sxx, sgx, sxg) = (sets(Ground::X), sets(Ground::XX), sets(Ground::GX), sets(Ground::XG));
    for a in &sx {
        let pre = BitSet::from_iter(k * n, (0..k * n).filter(|&p| a.contains(flow.act((p / n) as u32, (p % n) as u32) as usize)));
        out[2] &= sgx.contains(&pre);
    }
    for a in &sxx {
        for g in flow.group().elements() {
            let pre = BitSet::from_iter(n, (0..n).filter(|&x| a.contains(x * n + flow.act(g, x as u32) as usize)));
            out[3] &= sx.contains(&pre);
        }
    }
    let eg = simultaneous_translation(flow);
    let xxxx = inst.lattice(Ground::XXXX);
    for bits in 0u64..1 << eg.len() {
        let s: Vec<usize> = (0..eg.len()).filter(|&i| bits >> i & 1 == 1).map(|i| eg[i]).collect();
        let closure = xxxx.closure(&BitSet::from_iter(xxxx.size(), s.iter().copied()));
        let relatively_closed = eg.iter().all(|&p| closure.contains(p) == s.contains(&p));
        if relatively_closed {
            out[4] &= sxx.contains(&BitSet::from_iter(n * n, s.iter().map(|&p| p / (n * n))));
        }
    }
    for a in &sxg {
        let image = BitSet::from_iter(n * n, a.iter().map(|q| (q / k) * n + flow.act((q % k) as u32, (q / k) as u32) as usize));
        out[5] &= sxx.contains(&image);
    }
    out
}

fn swap_flow() -> Flow {
    Flow::regular(group(GroupName::Cyclic(2)))
}

#[test]
fn lattice_construction() {
    let d = make_lattice(Ground::X, 2, &[set(2, &[]), set(2, &[0]), set(2, &[1]), set(2, &[0, 1])], false, &caps()).unwrap();
    assert!(d.lattice.is_discrete());
    let chain = make_lattice(Ground::X, 2, &[set(2, &[]), set(2, &[0]), set(2, &[0, 1])], false, &caps()).unwrap();
    assert!(chain.lattice.contains(&set(2, &[0])));
    assert!(!chain.lattice.contains(&set(2, &[1])));
    assert_eq!(chain.lattice.sets(&caps()).unwrap().len(), 3);
    let bad = [set(2, &[]), set(2, &[0]), set(2, &[1])];
    assert_eq!(
        make_lattice(Ground::X, 2, &bad, false, &caps()).unwrap_err(),
        StructuredError::NotALattice(LatticeDefect::MissingGround)
    );
    let completed = make_lattice(Ground::X, 2, &bad, true, &caps()).unwrap();
    assert_eq!(completed.added, vec![set(2, &[0, 1])]);
    let gap = [set(3, &[]), set(3, &[0]), set(3, &[1]), set(3, &[0, 1, 2])];
    assert_eq!(
        make_lattice(Ground::X, 3, &gap, false, &caps()).unwrap_err(),
        StructuredError::NotALattice(LatticeDefect::MissingUnion { a: vec![0], b: vec![1] })
    );
    assert!(matches!(
        make_lattice(Ground::X, 3, &[set(2, &[])], false, &caps()),
        Err(StructuredError::NotALattice(LatticeDefect::WrongSize { index: 0, .. }))
    ));
    let tight = Caps { max_lattice_sets: 10, ..caps() };
    assert!(matches!(
        PseudoClosedLattice::discrete(Ground::X, 5).sets(&tight),
        Err(StructuredError::SizeCapExceeded { .. })
    ));
}

#[test]
fn product_of_two_chains() {
    let a = [set(2, &[]), set(2, &[0]), set(2, &[0, 1])];
    let b = [set(2, &[]), set(2, &[1]), set(2, &[0, 1])];
    let la = PseudoClosedLattice::generated(Ground::X, 2, &a);
    let lb = PseudoClosedLattice::generated(Ground::X, 2, &b);
    let p = product_lattice(&la, &lb, Ground::XX, &caps()).unwrap();
    let got: HashSet<BitSet> = p.sets(&caps()).unwrap().into_iter().collect();
    let expected = closure_oracle(4, &rectangles(&a, &b));
    assert_eq!(got, expected);
    assert_eq!(got.len(), 6);
    let dd = product_lattice(
        &PseudoClosedLattice::discrete(Ground::X, 3),
        &PseudoClosedLattice::discrete(Ground::X, 3),
        Ground::XX,
        &caps(),
    )
    .unwrap();
    assert!(dd.is_discrete());
    let triv = product_lattice(&la, &PseudoClosedLattice::trivial(Ground::X, 2), Ground::XX, &caps()).unwrap();
    let got: HashSet<BitSet> = triv.sets(&caps()).unwrap().into_iter().collect();
    assert_eq!(got, [set(4, &[]), set(4, &[0, 1]), set(4, &[0, 1, 2, 3])].into_iter().collect());
    assert!(matches!(product_lattice(&la, &lb, Ground::GX, &caps()), Err(StructuredError::ShapeMismatch(_))));
    let small = Caps { max_points: 1, ..caps() };
    assert!(matches!(product_lattice(&la, &lb, Ground::XX, &small), Err(StructuredError::SizeCapExceeded { .. })));
}

#[test]
fn swap_with_a_chain_is_not_agreeable() {
    let chain = PseudoClosedLattice::generated(Ground::X, 2, &[set(2, &[0])]);
    let inst = StructuredInstance::with_defaults(swap_flow(), PseudoClosedLattice::discrete(Ground::G, 2), chain, None, &caps()).unwrap();
    let rep = is_agreeable(&inst);
    assert!(!rep.is_agreeable());
    let four = &rep.axioms[3];
    assert_eq!(four.axiom, 4);
    let f = four.failure.as_ref().unwrap();
    assert_eq!(f.ground, Ground::XX);
    let verdicts: Vec<bool> = rep.axioms.iter().map(AxiomResult::passed).collect();
    assert_eq!(verdicts, agreeable_oracle(&inst).to_vec());
    let disc = StructuredInstance::discrete(swap_flow(), &caps()).unwrap();
    assert!(is_agreeable(&disc).is_agreeable());
    assert_eq!(agreeable_oracle(&disc), [true; 6]);
}

#[test]
fn trivial_group_is_agreeable_only_on_discrete_spaces() {
    let flow = Flow::from_transformations(3, vec![]).unwrap();
    let x = PseudoClosedLattice::generated(Ground::X, 3, &[set(3, &[0]), set(3, &[0, 1])]);
    let inst = StructuredInstance::with_defaults(flow.clone(), PseudoClosedLattice::discrete(Ground::G, 1), x, None, &caps()).unwrap();
    let rep = is_agreeable(&inst);
    let failed: Vec<u8> = rep.axioms.iter().filter(|a| !a.passed()).map(|a| a.axiom).collect();
    assert_eq!(failed, vec![6]);
    assert_eq!(rep.axioms.iter().map(AxiomResult::passed).collect::<Vec<_>>(), agreeable_oracle(&inst).to_vec());
    assert!(is_agreeable(&StructuredInstance::discrete(flow, &caps()).unwrap()).is_agreeable());
}

/// `Z/4` on itself with both lattices generated by the cosets of `{0, 2}`.
fn z4_blocks() -> StructuredInstance {
    let blocks = [set(4, &[0, 2]), set(4, &[1, 3])];
    let g = PseudoClosedLattice::generated(Ground::G, 4, &blocks);
    let x = PseudoClosedLattice::generated(Ground::X, 4, &blocks);
    StructuredInstance::with_defaults(Flow::regular(group(GroupName::Cyclic(4))), g, x, None, &caps()).unwrap()
}

#[test]
fn orbital_equivalence_on_block_lattices() {
    let inst = z4_blocks();
    assert!(is_agreeable(&inst).is_agreeable());
    let eq = EquivRelation::equality(4);
    let rep = verify_thm_orb(&inst, &eq, &caps()).unwrap();
    assert_eq!(rep.conditions(), [false; 4]);
    let blocks = EquivRelation::from_labels(&[0, 1, 0, 1]);
    let rep = verify_thm_orb(&inst, &blocks, &caps()).unwrap();
    assert_eq!(rep.conditions(), [true; 4]);
    assert_eq!(rep.kernel.members(), &[0, 2]);
    let total = verify_thm_orb(&inst, &EquivRelation::total(4), &caps()).unwrap();
    assert!(total.holds() && total.relation_closed);
    let disc = StructuredInstance::discrete(Flow::regular(group(GroupName::Cyclic(4))), &caps()).unwrap();
    let rep = verify_thm_orb(&disc, &eq, &caps()).unwrap();
    assert_eq!(rep.conditions(), [true; 4]);
    assert_eq!(rep.closed_subgroup.unwrap().order(), 1);
    let chain = PseudoClosedLattice::generated(Ground::X, 2, &[set(2, &[0])]);
    let bad = StructuredInstance::with_defaults(swap_flow(), PseudoClosedLattice::discrete(Ground::G, 2), chain, None, &caps()).unwrap();
    assert!(matches!(
        verify_thm_orb(&bad, &EquivRelation::equality(2), &caps()),
        Err(StructuredError::NotAgreeable { .. })
    ));
}

/// `S₃` acting on two copies of itself, with `H = {e, (01)}` and `X̃ = {(c, 0), (e, 1)}`
/// for a three-cycle `c`.
fn two_level_instance() -> (Flow, Subgroup, BitSet) {
    let g = group(GroupName::Symmetric(3));
    let flow = disjoint_union_flow(&[Flow::regular(g.clone()), Flow::regular(g.clone())]).unwrap();
    let h = enumerate_subgroups(&g, 360).unwrap().into_iter().find(|h| h.order() == 2).unwrap();
    let c = g.elements().find(|&a| a != g.identity() && g.mul(a, g.mul(a, a)) == g.identity()).unwrap();
    (flow, h, set(12, &[c as usize, 6 + g.identity() as usize]))
}

#[test]
fn classes_alone_do_not_force_closedness_only_without_agreeability() {
    let (flow, h, support) = two_level_instance();
    let w = WitnessPair { subgroup: h.clone(), support };
    let e = r_relation(&flow, &w).equivalence().cloned().expect("R is an equivalence");
    let (k, n) = (6, 12);
    // X² lattice: each upper-level pair lies below its lower-level copy only.
    let principal: Vec<BitSet> = (0..n * n)
        .map(|p| {
            let (a, b) = (p / n, p % n);
            let mut s = set(n * n, &[p]);
            if a >= 6 && b >= 6 {
                s.insert((a - 6) * n + (b - 6));
            }
            s
        })
        .collect();
    let xx = PseudoClosedLattice::generated(Ground::XX, n * n, &principal);
    let inst = StructuredInstance::with_defaults(
        flow.clone(),
        PseudoClosedLattice::discrete(Ground::G, k),
        PseudoClosedLattice::discrete(Ground::X, n),
        Some(xx),
        &caps(),
    )
    .unwrap();
    let agree = is_agreeable(&inst);
    assert_eq!(agree.first_failure().unwrap().axiom, 2);
    let rep = evaluate_worb(&inst, &e, &caps()).unwrap();
    assert!(rep.classes_closed);
    assert!(!rep.relation_closed);
    assert!(rep.condition_two());
    assert!(!rep.holds());
    assert!(matches!(verify_thm_worb(&inst, &e, &caps()), Err(StructuredError::NotAgreeable { axiom: 2, .. })));
    // moving the limit into the X lattice instead breaks the orbit-map axiom, and
    // the conditions agree again
    let principal: Vec<BitSet> = (0..n).map(|x| if x >= 6 { set(n, &[x, x - 6]) } else { set(n, &[x]) }).collect();
    let x = PseudoClosedLattice::generated(Ground::X, n, &principal);
    let inst = StructuredInstance::with_defaults(flow, PseudoClosedLattice::discrete(Ground::G, k), x, None, &caps()).unwrap();
    assert_eq!(is_agreeable(&inst).first_failure().unwrap().axiom, 6);
    let rep = evaluate_worb(&inst, &e, &caps()).unwrap();
    assert!(!rep.classes_closed && !rep.relation_closed);
    assert!(rep.holds());
}

#[test]
fn weakly_orbital_discrete_and_total() {
    let (flow, h, support) = two_level_instance();
    let e = r_relation(&flow, &WitnessPair { subgroup: h, support }).equivalence().cloned().unwrap();
    let disc = StructuredInstance::discrete(flow.clone(), &caps()).unwrap();
    let rep = verify_thm_worb(&disc, &e, &caps()).unwrap();
    assert_eq!(rep.conditions(), [true; 4]);
    assert!(!rep.maximal.is_empty());
    let total = verify_thm_worb(&disc, &EquivRelation::total(12), &caps()).unwrap_err();
    assert_eq!(total, StructuredError::NotWeaklyOrbital);
    let g = group(GroupName::Symmetric(3));
    let reg = StructuredInstance::discrete(Flow::regular(g), &caps()).unwrap();
    let rep = verify_thm_worb(&reg, &EquivRelation::total(6), &caps()).unwrap();
    assert_eq!(rep.conditions(), [true; 4]);
    assert!(check_closure_lemma(&reg, &EquivRelation::total(6)).unwrap().is_empty());
}

/// Lattices on `G` from cosets of a normal subgroup `N` and on `X` from `N`-orbits.
fn block_instance(flow: &Flow, n: &Subgroup) -> StructuredInstance {
    let g = flow.group();
    let cosets: Vec<BitSet> = g.elements().map(|a| n.left_coset(g, a)).collect();
    let orbits: Vec<BitSet> = (0..flow.points() as u32)
        .map(|x| BitSet::from_iter(flow.points(), n.members().iter().map(|&h| flow.act(h, x) as usize)))
        .collect();
    StructuredInstance::with_defaults(
        flow.clone(),
        PseudoClosedLattice::generated(Ground::G, g.order(), &cosets),
        PseudoClosedLattice::generated(Ground::X, flow.points(), &orbits),
        None,
        &caps(),
    )
    .unwrap()
}

fn check_theorems(inst: &StructuredInstance) -> usize {
    let mut checked = 0;
    for e in invariant_relations(inst.flow(), 8).unwrap() {
        assert!(check_closure_lemma(inst, &e).unwrap().is_empty());
        if is_orbital(inst.flow(), &e).unwrap().is_orbital() {
            let rep = verify_thm_orb(inst, &e, &caps()).unwrap();
            assert!(rep.holds(), "orbital conditions diverge: {rep:?} for {e:?}");
            checked += 1;
        }
        if is_weakly_orbital(inst.flow(), &e, &caps()).unwrap().is_weakly_orbital() {
            let rep = verify_thm_worb(inst, &e, &caps()).unwrap();
            assert!(rep.holds(), "weakly orbital conditions diverge: {rep:?} for {e:?}");
            assert_eq!(rep.classes_closed, rep.condition_two());
            checked += 1;
        }
    }
    checked
}

#[test]
fn theorems_hold_on_block_catalog() {
    let mut nondiscrete = 0;
    for name in [GroupName::Cyclic(4), GroupName::Symmetric(3), GroupName::Dihedral(4), GroupName::Cyclic(6)] {
        let g = group(name);
        let subs = enumerate_subgroups(&g, 360).unwrap();
        for h in &subs {
            let flow = Flow::coset_action(g.clone(), h);
            let u = disjoint_union_flow(&[flow.clone(), Flow::coset_action(g.clone(), &Subgroup::whole(&g))]).unwrap();
            for base in [flow, u].into_iter().filter(|f| f.points() <= 8) {
                for n in subs.iter().filter(|n| n.is_normal_in(&g)) {
                    let inst = block_instance(&base, n);
                    if !is_agreeable(&inst).is_agreeable() {
                        continue;
                    }
                    if !inst.lattice(Ground::X).is_discrete() {
                        nondiscrete += check_theorems(&inst);
                    } else {
                        check_theorems(&inst);
                    }
                }
            }
        }
    }
    assert!(nondiscrete > 20, "{nondiscrete}");
}

fn small_flow() -> impl Strategy<Value = Flow> {
    prop_oneof![
        Just(Flow::regular(group(GroupName::Cyclic(2)))),
        Just(Flow::regular(group(GroupName::Cyclic(3)))),
        Just(disjoint_union_flow(&[Flow::regular(group(GroupName::Cyclic(2))), Flow::coset_action(group(GroupName::Cyclic(2)), &Subgroup::whole(&group(GroupName::Cyclic(2))))]).unwrap()),
        Just(Flow::from_transformations(3, vec![]).unwrap()),
    ]
}

/// Flows whose `E_G` is small enough for the literal projection axiom.
fn oracle_flow() -> impl Strategy<Value = Flow> {
    let z2 = group(GroupName::Cyclic(2));
    let fixed = Flow::coset_action(z2.clone(), &Subgroup::whole(&z2));
    prop_oneof![
        Just(Flow::regular(z2.clone())),
        Just(disjoint_union_flow(&[Flow::regular(z2), fixed]).unwrap()),
        Just(Flow::from_transformations(3, vec![]).unwrap()),
    ]
}

fn family(size: usize) -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(0u64..1 << size, 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn discrete_group_flows_are_agreeable(pick in 0usize..7) {
        let names = [GroupName::Cyclic(3), GroupName::Cyclic(4), GroupName::Symmetric(3), GroupName::Dihedral(4), GroupName::Quaternion, GroupName::Cyclic(6), GroupName::Dihedral(3)];
        let g = group(names[pick]);
        for h in enumerate_subgroups(&g, 360).unwrap() {
            let inst = StructuredInstance::discrete(Flow::coset_action(g.clone(), &h), &caps()).unwrap();
            prop_assert!(is_agreeable(&inst).is_agreeable());
        }
    }

    #[test]
    fn lattices_are_closed_and_match_oracle(bits in proptest::collection::vec(0u64..32, 0..5)) {
        let sets: Vec<BitSet> = bits.iter().map(|&b| BitSet::from_iter(5, (0..5).filter(|&i| b >> i & 1 == 1))).collect();
        let l = PseudoClosedLattice::generated(Ground::X, 5, &sets);
        let got: HashSet<BitSet> = l.sets(&caps()).unwrap().into_iter().collect();
        prop_assert_eq!(&got, &closure_oracle(5, &sets));
        for a in &got {
            prop_assert!(l.contains(a));
            for b in &got {
                prop_assert!(got.contains(&a.union(b)) && got.contains(&a.intersection(b)));
            }
        }
        let full = make_lattice(Ground::X, 5, &got.iter().cloned().collect::<Vec<_>>(), false, &caps()).unwrap();
        prop_assert_eq!(full.lattice.sets(&caps()).unwrap().len(), got.len());
    }

    #[test]
    fn theorems_hold_on_random_agreeable_lattices(flow in small_flow(), gbits in family(3), xbits in family(4)) {
        let (k, n) = (flow.group().order(), flow.points());
        let mk = |size: usize, bits: &[u64]| -> Vec<BitSet> {
            bits.iter().map(|&b| BitSet::from_iter(size, (0..size).filter(|&i| b >> i & 1 == 1))).collect()
        };
        let g = PseudoClosedLattice::generated(Ground::G, k, &mk(k, &gbits));
        let x = PseudoClosedLattice::generated(Ground::X, n, &mk(n, &xbits));
        let inst = StructuredInstance::with_defaults(flow, g, x, None, &caps()).unwrap();
        prop_assume!(is_agreeable(&inst).is_agreeable());
        check_theorems(&inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn axiom_scan_matches_literal_axioms(flow in oracle_flow(), gbits in family(3), xbits in family(4), xx in proptest::option::of(family(16))) {
        let (k, n) = (flow.group().order(), flow.points());
        let mk = |size: usize, bits: &[u64]| -> Vec<BitSet> {
            bits.iter().map(|&b| BitSet::from_iter(size, (0..size).filter(|&i| b >> i & 1 == 1))).collect()
        };
        let g = PseudoClosedLattice::generated(Ground::G, k, &mk(k, &gbits));
        let x = PseudoClosedLattice::generated(Ground::X, n, &mk(n, &xbits));
        let xx = xx.map(|b| PseudoClosedLattice::generated(Ground::XX, n * n, &mk(n * n, &b)));
        let inst = StructuredInstance::with_defaults(flow, g, x, xx, &caps()).unwrap();
        let got: Vec<bool> = is_agreeable(&inst).axioms.iter().map(AxiomResult::passed).collect();
        prop_assert_eq!(got, agreeable_oracle(&inst).to_vec());
    }
}
