//! Bundled fixtures. Every fixture runs its pipeline and asserts the expected shape
//! as verification verdicts.

use std::sync::Arc;
use std::time::Instant;

use elliskit_core::algebra::{
    are_isomorphic, enumerate_subgroups, named_group, named_group_capped, normal_core, FiniteGroup, GroupName, Subgroup,
};
use elliskit_core::ellis::{enveloping_semigroup, minimal_left_ideals};
use elliskit_core::flows::{
    disjoint_union_flow, independent_translates, is_independent_family, make_ambit, Flow, IndependenceOutcome,
};
use elliskit_core::grouplike::{compute_ghat, default_ideal_group, identify_quotient};
use elliskit_core::relations::{
    invariance, invariant_relations, is_orbital, maximal_witnesses, r_relation, EquivRelation, WitnessPair,
};
use elliskit_core::structured::{
    evaluate_worb, is_agreeable, verify_thm_worb, Ground, PseudoClosedLattice, StructuredError, StructuredInstance,
};
use elliskit_core::{BitSet, Caps};
use serde_json::{json, Value};

use crate::generate::group_catalog;
use crate::report::{Mode, Report};
use crate::suites::{
    block_instance, orbital_battery, product_battery, structured_battery, tower_demo, tower_summary, Check,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown example `{0}`; run `elliskit example --list`")]
pub struct UnknownExample(pub String);

pub const EXAMPLES: &[(&str, &str)] = &[
    ("s3-stabilizer", "S3 on three points: D is the non-normal point stabiliser and X/E ≅ Ĝ/D"),
    ("affine-f2", "AGL(3,2) on itself: two distinct maximal witness pairs for one relation"),
    ("worb-union-f2", "AGL(3,2) on two copies of itself: weakly orbital, not orbital, support meets one copy once"),
    ("product-demo", "enveloping semigroups of products of small flows"),
    ("tower-demo", "the reduction tower Z/6 → Z/3 → Z/1"),
    ("cube-independence", "independent translates of a half-cube under the hyperoctahedral group"),
    ("orbital-catalog", "orbital and weakly orbital verdicts on every small coset action against exhaustive search"),
    ("structured-catalog", "closedness equivalences on the bundled agreeable instances"),
    ("worb-counterexample", "a non-agreeable instance where closed classes do not force a closed relation"),
];

pub fn example_names() -> impl Iterator<Item = &'static str> {
    EXAMPLES.iter().map(|(n, _)| *n)
}

pub fn run_example(name: &str, caps: &Caps) -> Result<Report, UnknownExample> {
    let started = Instant::now();
    let mut r = Report::new(format!("example {name}"), Mode::Verification, caps);
    match name {
        "s3-stabilizer" => s3_stabilizer(&mut r, caps),
        "affine-f2" => affine_f2(&mut r, caps),
        "worb-union-f2" => worb_union_f2(&mut r, caps),
        "product-demo" => product_demo(&mut r, caps),
        "tower-demo" => tower(&mut r, caps),
        "cube-independence" => cube_independence(&mut r, caps),
        "orbital-catalog" => orbital_catalog(&mut r, caps),
        "structured-catalog" => structured_catalog(&mut r, caps),
        "worb-counterexample" => worb_counterexample(&mut r, caps),
        _ => return Err(UnknownExample(name.to_string())),
    }
    r.finish(started);
    Ok(r)
}

fn fail(r: &mut Report, name: &str, err: impl ToString) {
    r.check(name, false, Some(json!(err.to_string())));
}

fn push_checks(r: &mut Report, prefix: &str, checks: Vec<Check>) {
    for (name, res) in checks {
        let label = if prefix.is_empty() { name.to_string() } else { format!("{prefix}: {name}") };
        r.check(label, res.is_ok(), res.err());
    }
}

fn group(name: GroupName) -> Arc<FiniteGroup> {
    Arc::new(named_group(name).expect("fixture group"))
}

fn iso(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    are_isomorphic(a, b).is_ok_and(|v| v.is_isomorphic())
}

fn s3_stabilizer(r: &mut Report, caps: &Caps) {
    let g = group(GroupName::Symmetric(3));
    let flow = Flow::natural(g.clone()).expect("S3 has a natural action");
    let ambit = make_ambit(flow.clone(), 0).expect("transitive");
    let s = match enveloping_semigroup(&flow, caps) {
        Ok(s) => s,
        Err(e) => return fail(r, "enveloping-semigroup", e),
    };
    let ideals = minimal_left_ideals(&s);
    let idempotents: usize = ideals.iter().map(|m| m.idempotents().len()).sum();
    r.record("semigroup_size", s.len());
    r.check("semigroup-order-6", s.len() == 6, Some(json!(s.len())));
    r.check("unique-minimal-ideal-is-everything", ideals.len() == 1 && ideals[0].len() == s.len(), Some(json!(ideals.len())));
    r.check("unique-idempotent", idempotents == 1, Some(json!(idempotents)));
    let ig = match default_ideal_group(&s) {
        Ok(x) => x,
        Err(e) => return fail(r, "ideal-group", e),
    };
    r.check("ideal-group-is-s3", iso(ig.group(), &g), Some(json!(ig.order())));
    let ghat = match compute_ghat(&s, &ig, &ambit) {
        Ok(x) => x,
        Err(e) => return fail(r, "ghat", e),
    };
    let d_maps: Vec<Vec<u32>> = ghat.d.members().iter().map(|&p| s.map(ig.members()[p as usize]).to_vec()).collect();
    let mut stab_maps: Vec<Vec<u32>> = flow.stabilizer(0).members().iter().map(|&a| flow.element_map(a).to_vec()).collect();
    let mut sorted_d = d_maps.clone();
    sorted_d.sort();
    stab_maps.sort();
    r.record("D", &d_maps);
    r.check("d-is-point-stabilizer", ghat.d.order() == 2 && sorted_d == stab_maps, Some(json!(d_maps)));
    let witness = ghat.d.normality_witness(ig.group());
    r.check("d-not-normal", witness.is_some(), witness.map(|(g, h)| json!({ "conjugator": g, "element": h })));
    let core = normal_core(ig.group(), &ghat.d);
    r.check("core-of-d-trivial", core.order() == 1, Some(json!(core.members())));
    r.check("h-of-ideal-group-trivial", ghat.h_um.order() == 1, Some(json!(ghat.h_um.members())));
    r.check("ghat-is-s3", iso(ghat.quotient.group(), &g), Some(json!(ghat.quotient.order())));
    let e = EquivRelation::equality(3);
    match identify_quotient(&ambit, &e, caps) {
        Ok(rep) => {
            let d_in_ghat: Vec<u32> = {
                let mut v: Vec<u32> = ghat.d.members().iter().map(|&p| rep.ghat.quotient.project(p)).collect();
                v.sort_unstable();
                v
            };
            let classes: Vec<u32> = rep.coset_classes.iter().map(|(_, c)| *c).collect();
            let mut sorted = classes.clone();
            sorted.sort_unstable();
            r.check("three-classes", rep.classes == 3, Some(json!(rep.classes)));
            r.check("quotient-stabilizer-is-d", rep.stabilizer.members() == d_in_ghat.as_slice(), Some(json!(rep.stabilizer.members())));
            r.check("cosets-of-d-biject-with-classes", sorted == [0, 1, 2], Some(json!(rep.coset_classes)));
            r.record("coset_classes", &rep.coset_classes);
            r.record("ghat_order", rep.ghat.quotient.order());
        }
        Err(err) => fail(r, "identify-quotient", err),
    }
}

/// `AGL(3,2)` with the conventions of the named family: index `m·8 + v`.
struct Affine {
    g: Arc<FiniteGroup>,
    mat_identity: u32,
}

impl Affine {
    fn new(caps: &Caps) -> Result<Self, String> {
        let g = named_group_capped(GroupName::Affine { q: 2, dim: 3 }, caps.max_group_order).map_err(|e| e.to_string())?;
        let mat_identity = g.identity() / 8;
        Ok(Affine { g: Arc::new(g), mat_identity })
    }

    fn translation(&self, v: u32) -> u32 {
        self.mat_identity * 8 + v
    }

    fn conj(&self, x: u32, h: u32) -> u32 {
        let g = &self.g;
        g.mul(g.mul(g.inv(x), h), x)
    }

    fn subgroup(&self, codes: &[u32]) -> Subgroup {
        let m: Vec<u32> = codes.iter().map(|&v| self.translation(v)).collect();
        Subgroup::from_members(&self.g, &m).expect("translation subgroup")
    }
}

fn affine_f2(r: &mut Report, caps: &Caps) {
    let a = match Affine::new(caps) {
        Ok(a) => a,
        Err(e) => return fail(r, "affine-group", e),
    };
    let g = a.g.clone();
    let flow = Flow::regular(g.clone());
    let n = g.order();
    let h1 = a.subgroup(&[0, 1, 2, 3]);
    let h2 = a.subgroup(&[0, 1]);
    let x1 = BitSet::from_iter(n, g.elements().filter(|&x| h1.members().iter().all(|&h| h1.contains(a.conj(x, h)))).map(|x| x as usize));
    let e0 = a.translation(1);
    let x2 = BitSet::from_iter(n, g.elements().filter(|&x| h1.contains(a.conj(x, e0))).map(|x| x as usize));
    r.record("group_order", n);
    r.record("sizes", json!({ "H1": h1.order(), "H2": h2.order(), "X1": x1.count(), "X2": x2.count() }));
    let w1 = WitnessPair { subgroup: h1.clone(), support: x1.clone() };
    let w2 = WitnessPair { subgroup: h2.clone(), support: x2.clone() };
    let r1 = r_relation(&flow, &w1);
    let r2 = r_relation(&flow, &w2);
    let (e1, e2) = match (r1.equivalence(), r2.equivalence()) {
        (Some(e1), Some(e2)) => (e1.clone(), e2.clone()),
        _ => return fail(r, "r-relations-are-equivalences", format!("{:?} / {:?}", r1.verdict, r2.verdict).chars().take(200).collect::<String>()),
    };
    r.check("r-relations-are-equivalences", true, None);
    r.check(
        "r-relations-equal",
        e1 == e2,
        Some(json!({ "classes": [e1.class_count(), e2.class_count()] })),
    );
    let cosets = e1.classes().iter().all(|c| c.len() == 4 && h1.left_coset(&g, c[0]).to_u32_vec() == *c);
    r.check("classes-are-cosets-of-h1", cosets, Some(json!(e1.class_count())));
    for (label, w, e) in [("first", &w1, &e1), ("second", &w2, &e2)] {
        match maximal_witnesses(&flow, e, w) {
            Ok(m) => r.check(
                format!("{label}-pair-is-maximal"),
                m == *w,
                Some(json!({ "subgroup": m.subgroup.order(), "support": m.support.count() })),
            ),
            Err(err) => r.check(format!("{label}-pair-is-maximal"), false, Some(json!(err.to_string()))),
        };
    }
    r.check(
        "groups-strictly-nested",
        h2.is_subgroup_of(&h1) && h2.order() < h1.order(),
        Some(json!({ "H2": h2.members(), "H1": h1.members() })),
    );
    r.check(
        "supports-strictly-nested",
        x1.is_subset(&x2) && x1.count() < x2.count(),
        Some(json!({ "X1": x1.count(), "X2": x2.count() })),
    );
}

fn worb_union_f2(r: &mut Report, caps: &Caps) {
    let a = match Affine::new(caps) {
        Ok(a) => a,
        Err(e) => return fail(r, "affine-group", e),
    };
    let g = a.g.clone();
    let n = g.order();
    let flow = match disjoint_union_flow(&[Flow::regular(g.clone()), Flow::regular(g.clone())]) {
        Ok(f) => f,
        Err(e) => return fail(r, "union-flow", e),
    };
    let h = a.subgroup(&[0, 1]);
    let e0 = a.translation(1);
    let pure = |target: u32| {
        g.elements().find(|&x| x % 8 == 0 && a.conj(x, e0) == a.translation(target)).expect("GL(3,2) is transitive on nonzero vectors")
    };
    let (a1, a2) = (pure(2), pure(3));
    let mut support = BitSet::from_iter(2 * n, [g.identity() as usize, a1 as usize, a2 as usize]);
    support.insert(n + g.identity() as usize);
    r.record("support", support.to_u32_vec());
    let w = WitnessPair { subgroup: h.clone(), support: support.clone() };
    let rr = r_relation(&flow, &w);
    let Some(e) = rr.equivalence().cloned() else {
        return fail(r, "r-relation-is-equivalence", format!("{:?}", rr.verdict));
    };
    r.check("r-relation-is-equivalence", true, None);
    let inv = invariance(&flow, &e).map(|v| v.is_invariant()).unwrap_or(false);
    r.check("relation-invariant", inv, None);
    let size_on = |lo: usize, hi: usize| -> Vec<usize> {
        let mut s: Vec<usize> =
            e.classes().iter().filter(|c| (lo..hi).contains(&(c[0] as usize))).map(|c| c.len()).collect();
        s.dedup();
        s
    };
    let (first, second) = (size_on(0, n), size_on(n, 2 * n));
    r.record("class_sizes", json!({ "first_copy": first, "second_copy": second }));
    r.check("class-sizes-differ-across-copies", first == [4] && second == [2], Some(json!([first, second])));
    match is_orbital(&flow, &e) {
        Ok(v) => r.check("not-orbital", !v.is_orbital(), Some(json!({ "kernel_order": v.kernel().order() }))),
        Err(err) => r.check("not-orbital", false, Some(json!(err.to_string()))),
    };
    let on_second = support.iter().filter(|&x| x >= n).count();
    r.check("support-meets-second-copy-once", on_second == 1, Some(json!(on_second)));
    let mut reduced = support.clone();
    reduced.remove(n + g.identity() as usize);
    let without = r_relation(&flow, &WitnessPair { subgroup: h.clone(), support: reduced });
    r.check("second-copy-point-is-needed", without.equivalence() != Some(&e), None);
    match maximal_witnesses(&flow, &e, &w) {
        Ok(m) => {
            let grows = h.is_subgroup_of(&m.subgroup) && support.is_subset(&m.support);
            r.check(
                "maximal-witnesses-extend-the-pair",
                grows,
                Some(json!({ "subgroup": m.subgroup.order(), "support": m.support.count() })),
            );
        }
        Err(err) => fail(r, "maximal-witnesses-extend-the-pair", err),
    }
}

/// Factor flows of the product demo.
pub fn product_demo_pairs() -> Vec<(String, Flow, Flow)> {
    let c3 = Flow::regular(group(GroupName::Cyclic(3)));
    let s3 = Flow::natural(group(GroupName::Symmetric(3))).expect("natural");
    let shift = Flow::from_transformations(3, vec![vec![1, 2, 2], vec![0, 0, 1]]).expect("maps");
    let collapse = Flow::from_transformations(2, vec![vec![0, 0]]).expect("maps");
    vec![
        ("C3 x S3".into(), c3.clone(), s3.clone()),
        ("transformations x C3".into(), shift.clone(), c3),
        ("collapse x transformations".into(), collapse, shift),
    ]
}

fn product_demo(r: &mut Report, caps: &Caps) {
    for (label, a, b) in product_demo_pairs() {
        push_checks(r, &label, product_battery(&a, &b, caps));
    }
}

fn tower(r: &mut Report, caps: &Caps) {
    match tower_demo(caps) {
        Ok(t) => {
            let s = tower_summary(&t);
            r.check("ideal-group-orders", s["ideal_group_orders"] == json!([1, 3, 6]), Some(s["ideal_group_orders"].clone()));
            r.check("idempotents-chain", t.idempotent_chain.len() == 3, Some(json!(t.idempotent_chain)));
            r.record("tower", s);
        }
        Err(e) => fail(r, "tower-coherence", e),
    }
}

fn cube_independence(r: &mut Report, caps: &Caps) {
    let g = group(GroupName::Hyperoctahedral(3));
    let flow = Flow::natural(g.clone()).expect("cube action");
    let u = BitSet::from_iter(8, (0..8).filter(|v| v & 1 == 0));
    r.record("U", u.to_u32_vec());
    let translate = |a: u32| BitSet::from_iter(8, u.iter().map(|x| flow.act(a, x as u32) as usize));
    match independent_translates(&flow, &u, 3, caps) {
        Ok(IndependenceOutcome::Witness(w)) => {
            let sets: Vec<BitSet> = w.iter().map(|&a| translate(a)).collect();
            r.check("three-translates-independent", is_independent_family(8, &sets), Some(json!(w)));
            r.record("translates", sets.iter().map(BitSet::to_u32_vec).collect::<Vec<_>>());
        }
        Ok(other) => {
            r.check("three-translates-independent", false, Some(json!(format!("{other:?}"))));
        }
        Err(e) => {
            r.check("three-translates-independent", false, Some(json!(e.to_string())));
        }
    }
    match independent_translates(&flow, &u, 4, caps) {
        Ok(IndependenceOutcome::Exhausted { distinct_translates, checked }) => r.check(
            "four-translates-exhausted",
            true,
            Some(json!({ "distinct_translates": distinct_translates, "checked": checked })),
        ),
        Ok(other) => r.check("four-translates-exhausted", false, Some(json!(format!("{other:?}")))),
        Err(e) => r.check("four-translates-exhausted", false, Some(json!(e.to_string()))),
    };
}

/// Every coset action of a catalog group of order at most 8 on at most 6 points, and
/// every disjoint union of two of them within the same bound.
pub fn orbital_catalog_flows() -> Vec<(String, Flow)> {
    let mut out = Vec::new();
    for cg in group_catalog(8) {
        let actions: Vec<(String, Flow)> = cg
            .subgroups
            .iter()
            .filter(|h| cg.index(h) <= 6)
            .map(|h| (format!("{} on G/{:?}", cg.label, h.members()), Flow::coset_action(cg.group.clone(), h)))
            .collect();
        for (i, (la, fa)) in actions.iter().enumerate() {
            out.push((la.clone(), fa.clone()));
            for (lb, fb) in &actions[i..] {
                if fa.points() + fb.points() <= 6 {
                    let u = disjoint_union_flow(&[fa.clone(), fb.clone()]).expect("same group");
                    out.push((format!("{la} + {}", lb.split(" on ").nth(1).unwrap_or(lb)), u));
                }
            }
        }
    }
    out
}

fn orbital_catalog(r: &mut Report, caps: &Caps) {
    use rayon::prelude::*;
    let flows = orbital_catalog_flows();
    let results: Vec<(String, usize, Vec<Check>)> = flows
        .par_iter()
        .map(|(label, f)| {
            let relations = invariant_relations(f, 6).map(|v| v.len()).unwrap_or(0);
            (label.clone(), relations, orbital_battery(f, caps))
        })
        .collect();
    let relations: usize = results.iter().map(|(_, k, _)| k).sum();
    r.record("flows", flows.len());
    r.record("relations", relations);
    let mut names: Vec<&'static str> = Vec::new();
    for (_, _, checks) in &results {
        for (n, _) in checks {
            if !names.contains(n) {
                names.push(n);
            }
        }
    }
    for name in names {
        let failures: Vec<Value> = results
            .iter()
            .flat_map(|(label, _, checks)| {
                checks.iter().filter(|(n, r)| *n == name && r.is_err()).map(move |(_, r)| json!({ "flow": label, "witness": r.as_ref().err() }))
            })
            .collect();
        let witness = if failures.is_empty() { json!({ "flows": results.len() }) } else { json!({ "failed": failures.len(), "first": failures[0] }) };
        r.check(name, failures.is_empty(), Some(witness));
    }
}

fn set(n: usize, xs: &[usize]) -> BitSet {
    BitSet::from_iter(n, xs.iter().copied())
}

/// `Z/4` on itself with both lattices generated by the cosets of `{0, 2}`.
pub fn z4_blocks(caps: &Caps) -> Result<StructuredInstance, StructuredError> {
    let blocks = [set(4, &[0, 2]), set(4, &[1, 3])];
    StructuredInstance::with_defaults(
        Flow::regular(group(GroupName::Cyclic(4))),
        PseudoClosedLattice::generated(Ground::G, 4, &blocks),
        PseudoClosedLattice::generated(Ground::X, 4, &blocks),
        None,
        caps,
    )
}

/// `S₃` on two copies of itself with `E = R_{H,X̃}`, `H` of order 2 and `X̃` one point
/// on each copy: a three-cycle below, the identity above.
pub fn two_level(caps: &Caps) -> (Flow, EquivRelation) {
    let g = group(GroupName::Symmetric(3));
    let flow = disjoint_union_flow(&[Flow::regular(g.clone()), Flow::regular(g.clone())]).expect("same group");
    let h = enumerate_subgroups(&g, caps.max_enumeration_order)
        .expect("small group")
        .into_iter()
        .find(|h| h.order() == 2)
        .expect("S3 has involutions");
    let c = g.elements().find(|&a| a != g.identity() && g.mul(a, g.mul(a, a)) == g.identity()).expect("a three-cycle");
    let w = WitnessPair { subgroup: h, support: set(12, &[c as usize, 6 + g.identity() as usize]) };
    let e = r_relation(&flow, &w).equivalence().cloned().expect("R is an equivalence");
    (flow, e)
}

/// Block instances over C4, S3, D4 and C6: every coset action, its union with a fixed
/// point, and every normal subgroup, keeping only agreeable ones.
pub fn block_catalog(caps: &Caps) -> Vec<(String, StructuredInstance)> {
    let mut out = Vec::new();
    for name in [GroupName::Cyclic(4), GroupName::Symmetric(3), GroupName::Dihedral(4), GroupName::Cyclic(6)] {
        let g = group(name);
        let subs = enumerate_subgroups(&g, caps.max_enumeration_order).expect("small group");
        for h in &subs {
            let flow = Flow::coset_action(g.clone(), h);
            let union = disjoint_union_flow(&[flow.clone(), Flow::coset_action(g.clone(), &Subgroup::whole(&g))]).expect("same group");
            for (tag, base) in [("", flow), (" + point", union)] {
                if base.points() > 8 {
                    continue;
                }
                for n in subs.iter().filter(|n| n.is_normal_in(&g)) {
                    let Ok(inst) = block_instance(&base, n, caps) else { continue };
                    if is_agreeable(&inst).is_agreeable() {
                        out.push((format!("{name:?} on G/{:?}{tag}, blocks of {:?}", h.members(), n.members()), inst));
                    }
                }
            }
        }
    }
    out
}

fn structured_catalog(r: &mut Report, caps: &Caps) {
    let mut instances: Vec<(String, StructuredInstance, Vec<EquivRelation>)> = Vec::new();
    let all = |inst: &StructuredInstance| invariant_relations(inst.flow(), 8).unwrap_or_default();
    match z4_blocks(caps) {
        Ok(i) => {
            let rel = all(&i);
            instances.push(("z4-blocks".into(), i, rel));
        }
        Err(e) => fail(r, "z4-blocks", e),
    }
    for (label, inst) in block_catalog(caps) {
        let rel = all(&inst);
        instances.push((label, inst, rel));
    }
    let s3 = StructuredInstance::discrete(Flow::regular(group(GroupName::Symmetric(3))), caps).expect("discrete");
    let rel = all(&s3);
    instances.push(("s3-regular-discrete".into(), s3, rel));
    let (flow, e) = two_level(caps);
    let two = StructuredInstance::discrete(flow, caps).expect("discrete");
    let rel = vec![e, EquivRelation::equality(12), EquivRelation::total(12)];
    instances.push(("two-level-discrete".into(), two, rel));
    let mut examined = 0;
    let mut rows = Vec::new();
    for (label, inst, relations) in &instances {
        let agreeable = is_agreeable(inst).is_agreeable();
        r.check(format!("{label}: agreeable"), agreeable, None);
        if !agreeable {
            continue;
        }
        let (checks, k) = structured_battery(inst, relations, caps);
        examined += k;
        rows.push(json!({ "instance": label, "relations": relations.len(), "theorem_checks": k }));
        push_checks(r, label, checks);
    }
    r.record("instances", rows);
    r.record("theorem_checks", examined);
    r.check("theorems-exercised", examined > 0, Some(json!(examined)));
}

fn worb_counterexample(r: &mut Report, caps: &Caps) {
    let (flow, e) = two_level(caps);
    let (k, n) = (6, 12);
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
    let inst = match StructuredInstance::with_defaults(
        flow.clone(),
        PseudoClosedLattice::discrete(Ground::G, k),
        PseudoClosedLattice::discrete(Ground::X, n),
        Some(xx),
        caps,
    ) {
        Ok(i) => i,
        Err(err) => return fail(r, "instance", err),
    };
    r.record("relation", e.classes());
    let agree = is_agreeable(&inst);
    let first = agree.first_failure().map(|a| a.axiom);
    r.check("pair-lattice-breaks-rectangle-axiom", first == Some(2), Some(json!(first)));
    match evaluate_worb(&inst, &e, caps) {
        Ok(rep) => {
            r.record("conditions", rep.conditions());
            r.check("classes-closed", rep.classes_closed, None);
            r.check("relation-not-closed", !rep.relation_closed, None);
            r.check("condition-two-holds", rep.condition_two(), None);
            r.check("equivalence-breaks", !rep.holds(), Some(json!(rep.conditions())));
        }
        Err(err) => fail(r, "evaluate", err),
    }
    r.check(
        "theorem-refuses-non-agreeable",
        matches!(verify_thm_worb(&inst, &e, caps), Err(StructuredError::NotAgreeable { axiom: 2, .. })),
        None,
    );
    let principal: Vec<BitSet> = (0..n).map(|x| if x >= 6 { set(n, &[x, x - 6]) } else { set(n, &[x]) }).collect();
    let x = PseudoClosedLattice::generated(Ground::X, n, &principal);
    match StructuredInstance::with_defaults(flow, PseudoClosedLattice::discrete(Ground::G, k), x, None, caps) {
        Ok(inst) => {
            let first = is_agreeable(&inst).first_failure().map(|a| a.axiom);
            r.check("point-lattice-breaks-orbit-axiom", first == Some(6), Some(json!(first)));
            match evaluate_worb(&inst, &e, caps) {
                Ok(rep) => r.check("point-lattice-conditions-agree", rep.holds() && !rep.classes_closed, Some(json!(rep.conditions()))),
                Err(err) => r.check("point-lattice-conditions-agree", false, Some(json!(err.to_string()))),
            };
        }
        Err(err) => fail(r, "point-lattice", err),
    }
}
