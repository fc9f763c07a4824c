//! Seeded verification suites. Instances run in parallel; results are reduced in
//! instance order, so reports depend only on the seed, the bounds and the caps.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use elliskit_core::algebra::{enumerate_subgroups, Subgroup};
use elliskit_core::ellis::{
    check_circ_identities, check_ideal_structure, check_tau_axioms, enveloping_semigroup, h_subgroup, ideal_group,
    minimal_left_ideals, EllisSemigroup,
};
use elliskit_core::flows::{check_tower, make_ambit, product_flow, Ambit, Flow, FlowMorphism, TowerReport};
use elliskit_core::grouplike::{check_group_like, identify_quotient};
use elliskit_core::relations::{
    invariant_relations, is_orbital, is_weakly_orbital, maximal_group_set, maximal_support, maximal_witnesses,
    orbit_relation, EquivRelation, WeakVerdict,
};
use elliskit_core::structured::{
    check_closure_lemma, is_agreeable, verify_thm_orb, verify_thm_worb, Ground, PseudoClosedLattice, StructuredInstance,
};
use elliskit_core::{BitSet, Caps};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::generate::{
    coset_basepoint, group_catalog, instance_rng, random_action, random_flow, random_invariant_relation, CatalogGroup,
};
use crate::oracle;
use crate::report::{Mode, Report};
use crate::schema::FlowSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ellis,
    GroupLike,
    Orbital,
    Structured,
    Product,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Ellis, Suite::GroupLike, Suite::Orbital, Suite::Structured, Suite::Product];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ellis => "ellis",
            Suite::GroupLike => "grouplike",
            Suite::Orbital => "orbital",
            Suite::Structured => "structured",
            Suite::Product => "product",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub instances: usize,
    pub seed: u64,
    /// Bound on the points of generated flows.
    pub max_points: usize,
    /// Bound on the order of generated groups.
    pub max_group_order: usize,
    pub caps: Caps,
    /// Harness self-test: one check is deliberately wrong, so every instance fails it.
    pub corrupt: bool,
}

impl SuiteConfig {
    pub fn new(suite: Suite, instances: usize, seed: u64) -> Self {
        SuiteConfig { suite, instances, seed, max_points: 6, max_group_order: 24, caps: Caps::default(), corrupt: false }
    }
}

pub type Check = (&'static str, Result<(), Value>);

struct Outcome {
    label: String,
    spec: Value,
    checks: Vec<Check>,
}

fn ok_if(cond: bool, witness: impl FnOnce() -> Value) -> Result<(), Value> {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let started = Instant::now();
    let mut report = Report::new(format!("verify --suite {}", cfg.suite), Mode::Verification, &cfg.caps);
    report.seed = Some(cfg.seed);
    report.record("suite", cfg.suite.name());
    report.record("instances", cfg.instances);
    report.record("max_points", cfg.max_points);
    report.record("max_group_order", cfg.max_group_order);
    if cfg.instances == 0 {
        report.finish(started);
        return report;
    }
    let catalog = group_catalog(cfg.max_group_order.max(1));
    let outcomes: Vec<Outcome> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, i);
            match cfg.suite {
                Suite::Ellis => ellis_instance(&mut rng, &catalog, cfg),
                Suite::GroupLike => grouplike_instance(&mut rng, &catalog, cfg),
                Suite::Orbital => orbital_instance(&mut rng, &catalog, cfg),
                Suite::Structured => structured_instance(&mut rng, &catalog, cfg),
                Suite::Product => product_instance(&mut rng, &catalog, cfg),
            }
        })
        .collect();
    if cfg.suite == Suite::Product {
        let tower = tower_demo(&cfg.caps);
        let summary = tower.as_ref().map(tower_summary).map_err(|e| json!(e));
        report.check("tower-coherence", summary.as_ref().is_ok_and(|s| s["ideal_group_orders"] == json!([1, 3, 6])), Some(summary.unwrap_or_else(|e| e)));
    }
    aggregate(&mut report, &outcomes);
    report.finish(started);
    report
}

fn aggregate(report: &mut Report, outcomes: &[Outcome]) {
    const MAX_COUNTEREXAMPLES: usize = 50;
    let mut names: Vec<&'static str> = Vec::new();
    for o in outcomes {
        for (name, _) in &o.checks {
            if !names.contains(name) {
                names.push(name);
            }
        }
    }
    for name in names {
        let results: Vec<(usize, &Result<(), Value>)> = outcomes
            .iter()
            .enumerate()
            .flat_map(|(i, o)| o.checks.iter().filter(|(n, _)| *n == name).map(move |(_, r)| (i, r)))
            .collect();
        let failures: Vec<(usize, &Value)> = results.iter().filter_map(|(i, r)| r.as_ref().err().map(|w| (*i, w))).collect();
        let witness = match failures.first() {
            None => json!({ "checked": results.len() }),
            Some((i, w)) => json!({ "checked": results.len(), "failed": failures.len(), "first": { "instance": i, "detail": w } }),
        };
        report.check(name, failures.is_empty(), Some(witness));
    }
    for (i, o) in outcomes.iter().enumerate() {
        for (name, r) in &o.checks {
            if let Err(w) = r {
                if report.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    report.counterexamples.push(json!({
                        "instance": i,
                        "label": o.label,
                        "check": name,
                        "witness": w,
                        "input": o.spec,
                    }));
                }
            }
        }
    }
    let labels: Vec<&str> = outcomes.iter().map(|o| o.label.as_str()).collect();
    report.record("instance_labels", labels);
}

fn flow_value(flow: &Flow) -> Value {
    serde_json::to_value(FlowSpec::from_flow(flow)).expect("flow specs serialize")
}

fn random_subset(rng: &mut impl Rng, members: &[u32], len: usize) -> BitSet {
    BitSet::from_iter(len, members.iter().filter(|_| rng.gen_bool(0.5)).map(|&x| x as usize))
}

/// Minimal-ideal clauses, the ∘ identities, the τ-closure axioms and `H(uM) = {u}`.
pub fn ellis_battery(s: &EllisSemigroup, rng: &mut impl Rng) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    out.push(("closed-under-composition", ok_if(s.is_closed(), || json!("product leaves the semigroup"))));
    for c in check_ideal_structure(s) {
        let name = match c.clause {
            "generated-by-any-member" => "ideal-generated-by-any-member",
            "ideal-groups" => "ideal-groups",
            "partition-by-idempotents" => "ideal-partition-by-idempotents",
            "right-identity" => "ideal-right-identity",
            "left-translation-isomorphism" => "ideal-left-translation-isomorphism",
            "all-ideal-groups-isomorphic" => "ideal-groups-isomorphic",
            _ => "ideal-unknown-clause",
        };
        out.push((name, ok_if(c.passed, || json!(c.detail))));
    }
    let ideals = minimal_left_ideals(s);
    let got: HashSet<BitSet> = ideals.iter().map(|m| m.mask().clone()).collect();
    let want = oracle::minimal_left_ideals(s);
    out.push((
        "minimal-ideals-match-oracle",
        ok_if(got == want, || json!({ "library": got.len(), "oracle": want.len() })),
    ));
    let all: Vec<u32> = s.elements().collect();
    let k = s.len() as u32;
    let mut circ = Ok(());
    for _ in 0..8 {
        let (a, b, c) = (rng.gen_range(0..k), rng.gen_range(0..k), rng.gen_range(0..k));
        let (bs, cs) = (random_subset(rng, &all, s.len()), random_subset(rng, &all, s.len()));
        if let Err(e) = check_circ_identities(s, a, b, c, &bs, &cs) {
            circ = Err(json!(e));
            break;
        }
    }
    out.push(("circ-identities", circ));
    let mut tau = Ok(());
    let mut h = Ok(());
    for m in &ideals {
        for &u in m.idempotents().iter().take(4) {
            let g = match ideal_group(s, m, u) {
                Ok(g) => g,
                Err(e) => {
                    tau = Err(json!(e.to_string()));
                    continue;
                }
            };
            for _ in 0..2 {
                let a = random_subset(rng, g.members(), s.len());
                let b = random_subset(rng, g.members(), s.len());
                if let Err(e) = check_tau_axioms(s, &g, &a, &b) {
                    tau = Err(json!({ "idempotent": u, "error": e }));
                }
            }
            match h_subgroup(s, &g) {
                Ok(hs) if hs.order() == 1 => {}
                Ok(hs) => h = Err(json!({ "idempotent": u, "order": hs.order() })),
                Err(e) => h = Err(json!(e.to_string())),
            }
        }
    }
    out.push(("tau-closure-axioms", tau));
    out.push(("h-of-ideal-group-trivial", h));
    out
}

fn ellis_instance(rng: &mut impl Rng, catalog: &[CatalogGroup], cfg: &SuiteConfig) -> Outcome {
    let rf = random_flow(rng, catalog, cfg.max_points);
    let checks = ellis_battery(&rf.semigroup, rng);
    Outcome { label: format!("{} |S|={}", rf.label, rf.semigroup.len()), spec: flow_value(&rf.flow), checks }
}

/// A transitive ambit `G/K` with `K ≤ N ⊴ G`, and `E` the orbit relation of `N`.
pub struct QuotientInstance {
    pub label: String,
    pub ambit: Ambit,
    pub relation: EquivRelation,
    pub normal: Subgroup,
    pub group_index: usize,
    pub stabilizer: Subgroup,
}

pub fn random_quotient_instance(rng: &mut impl Rng, catalog: &[CatalogGroup], max_points: usize) -> QuotientInstance {
    use rand::seq::SliceRandom;
    loop {
        let gi = rng.gen_range(0..catalog.len());
        let cg = &catalog[gi];
        let normals: Vec<&Subgroup> = cg.normal_subgroups().collect();
        let n = *normals.choose(rng).expect("the whole group is normal");
        let below: Vec<&Subgroup> =
            cg.subgroups.iter().filter(|k| k.is_subgroup_of(n) && cg.index(k) <= max_points).collect();
        let Some(&k) = below.choose(rng) else { continue };
        let flow = Flow::coset_action(cg.group.clone(), k);
        let x0 = coset_basepoint(&flow, k);
        let relation = orbit_relation(&flow, n);
        let ambit = make_ambit(flow, x0).expect("coset actions are transitive");
        return QuotientInstance {
            label: format!("{} on G/{:?}, N={:?}", cg.label, k.members(), n.members()),
            ambit,
            relation,
            normal: n.clone(),
            group_index: gi,
            stabilizer: k.clone(),
        };
    }
}

/// Identification checks for one group-like instance.
pub fn quotient_battery(q: &QuotientInstance, caps: &Caps, corrupt: bool) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    let flow = q.ambit.flow();
    let g = flow.group();
    let e = &q.relation;
    let expected_classes = g.order() / q.normal.order().max(q.stabilizer.order()).max(1);
    let verdict = check_group_like(&q.ambit, e);
    out.push((
        "group-like",
        match &verdict {
            Ok(v) => match v.certificate() {
                Some(c) => ok_if(c.quotient_group.order() == e.class_count() && e.class_count() == expected_classes, || {
                    json!({ "quotient_order": c.quotient_group.order(), "classes": e.class_count(), "expected": expected_classes })
                }),
                None => Err(json!(format!("{v:?}"))),
            },
            Err(err) => Err(json!(err.to_string())),
        },
    ));
    let rep = match identify_quotient(&q.ambit, e, caps) {
        Ok(r) => r,
        Err(err) => {
            out.push(("quotient-identification", Err(json!(err.to_string()))));
            return out;
        }
    };
    out.push(("quotient-identification", Ok(())));
    let ghat = rep.ghat.quotient.order();
    let h = rep.stabilizer.order();
    let nc = rep.classes;
    let lhs = if corrupt { nc * h + 1 } else { nc * h };
    out.push(("classes-times-stabilizer-is-ghat", ok_if(lhs == ghat, || json!({ "classes": nc, "stabilizer": h, "ghat": ghat }))));
    let mut hit = vec![0usize; nc];
    for (coset, c) in &rep.coset_classes {
        if (*c as usize) < nc && coset.len() == h {
            hit[*c as usize] += 1;
        }
    }
    out.push((
        "coset-class-bijection",
        ok_if(rep.coset_classes.len() == nc && hit.iter().all(|&k| k == 1), || json!({ "coset_classes": rep.coset_classes })),
    ));
    let mut equivariant = Ok(());
    'outer: for a in g.elements() {
        let image = rep.group_map[a as usize] as usize;
        for (c, class) in e.classes().iter().enumerate() {
            let moved = e.class_index(flow.act(a, class[0]));
            if rep.action[image * nc + c] != moved {
                equivariant = Err(json!({ "g": a, "class": c }));
                break 'outer;
            }
        }
    }
    out.push(("g-equivariant", equivariant));
    let kernel = oracle::action_kernel(flow).len();
    out.push((
        "ghat-is-acting-group",
        ok_if(ghat * kernel == g.order(), || json!({ "ghat": ghat, "kernel": kernel, "group": g.order() })),
    ));
    out
}

fn grouplike_instance(rng: &mut impl Rng, catalog: &[CatalogGroup], cfg: &SuiteConfig) -> Outcome {
    let q = random_quotient_instance(rng, catalog, cfg.max_points);
    let mut checks = quotient_battery(&q, &cfg.caps, cfg.corrupt);
    let action = crate::generate::RandomAction {
        label: q.label.clone(),
        flow: q.ambit.flow().clone(),
        stabilizer: q.stabilizer.clone(),
        group_index: q.group_index,
    };
    let other = random_invariant_relation(rng, &catalog[q.group_index], &action);
    let expected = oracle::group_like(q.ambit.flow(), q.ambit.basepoint(), &other);
    checks.push((
        "group-like-matches-oracle",
        match check_group_like(&q.ambit, &other) {
            Ok(v) => ok_if(v.is_group_like() == expected, || json!({ "relation": other.classes(), "oracle": expected })),
            Err(e) => Err(json!(e.to_string())),
        },
    ));
    let spec = json!({
        "ambit": serde_json::to_value(crate::schema::AmbitSpec::from_ambit(&q.ambit)).expect("serializes"),
        "relation": q.relation.classes(),
    });
    Outcome { label: q.label, spec, checks }
}

/// Exhaustive relation and support enumeration stays below this many points.
pub const ORBITAL_ENUMERATION_POINTS: usize = 10;

/// Orbital and weakly orbital verdicts against exhaustive search, for every invariant
/// relation of `flow`.
pub fn orbital_battery(flow: &Flow, caps: &Caps) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    let subgroups = match enumerate_subgroups(flow.group(), caps.max_enumeration_order) {
        Ok(s) => s,
        Err(e) => return vec![("subgroups", Err(json!(e.to_string())))],
    };
    let relations = match invariant_relations(flow, ORBITAL_ENUMERATION_POINTS) {
        Ok(r) => r,
        Err(e) => return vec![("invariant-relations", Err(json!(e.to_string())))],
    };
    let mut brute: Vec<EquivRelation> =
        oracle::invariant_partitions(flow).iter().map(|l| EquivRelation::from_labels(l)).collect();
    brute.sort_by(|a, b| a.classes().cmp(b.classes()));
    let mut lib: Vec<EquivRelation> = relations.clone();
    lib.sort_by(|a, b| a.classes().cmp(b.classes()));
    out.push((
        "invariant-relations-complete",
        ok_if(lib == brute, || json!({ "library": lib.len(), "oracle": brute.len() })),
    ));
    let achievable = oracle::all_r_pair_sets(flow, &subgroups);
    let (mut weak, mut orbital, mut kernel_form, mut maximal) = (Ok(()), Ok(()), Ok(()), Ok(()));
    for e in &relations {
        let pairs = oracle::pair_matrix(e);
        let expected_weak = achievable.contains(&pairs);
        match is_weakly_orbital(flow, e, caps) {
            Ok(v) => {
                if v.is_weakly_orbital() != expected_weak && weak.is_ok() {
                    weak = Err(json!({ "relation": e.classes(), "oracle": expected_weak }));
                }
                if let WeakVerdict::Witness(w) = v {
                    match maximal_witnesses(flow, e, &w) {
                        Ok(m) => {
                            let support = maximal_support(flow, e, &m.subgroup);
                            let group = maximal_group_set(flow, e, &m.support);
                            let r = oracle::r_pairs(flow, m.subgroup.members(), &m.support.to_u32_vec());
                            if (support != m.support || group != *m.subgroup.mask() || r != pairs) && maximal.is_ok() {
                                maximal = Err(json!({ "relation": e.classes(), "subgroup": m.subgroup.members() }));
                            }
                        }
                        Err(err) => maximal = Err(json!(err.to_string())),
                    }
                }
            }
            Err(err) => weak = Err(json!(err.to_string())),
        }
        let expected_orbital = oracle::is_orbit_partition(flow, e, &subgroups);
        let fixer = oracle::class_fixer(flow, e);
        let kernel_orbits = EquivRelation::from_labels(&oracle::orbit_labels(flow, &fixer));
        match is_orbital(flow, e) {
            Ok(v) => {
                if v.is_orbital() != expected_orbital && orbital.is_ok() {
                    orbital = Err(json!({ "relation": e.classes(), "oracle": expected_orbital }));
                }
                if v.is_orbital() != (kernel_orbits == *e) && kernel_form.is_ok() {
                    kernel_form = Err(json!({ "relation": e.classes(), "kernel": fixer }));
                }
            }
            Err(err) => orbital = Err(json!(err.to_string())),
        }
    }
    out.push(("weakly-orbital-matches-exhaustive-search", weak));
    out.push(("orbital-matches-exhaustive-search", orbital));
    out.push(("orbital-iff-kernel-orbits", kernel_form));
    out.push(("maximal-witnesses-are-fixpoints", maximal));
    out
}

fn orbital_instance(rng: &mut impl Rng, catalog: &[CatalogGroup], cfg: &SuiteConfig) -> Outcome {
    let action = random_action(rng, catalog, cfg.max_points, |_| true);
    let checks = orbital_battery(&action.flow, &cfg.caps);
    Outcome { label: action.label, spec: flow_value(&action.flow), checks }
}

/// Lattices generated by the cosets of `n` on `G` and the `n`-orbits on `X`.
pub fn block_instance(flow: &Flow, n: &Subgroup, caps: &Caps) -> Result<StructuredInstance, String> {
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
        caps,
    )
    .map_err(|e| e.to_string())
}

/// The closedness theorems on the given invariant relations of an agreeable instance.
/// Returns the checks and the number of (relation, theorem) pairs examined.
pub fn structured_battery(inst: &StructuredInstance, relations: &[EquivRelation], caps: &Caps) -> (Vec<Check>, usize) {
    let flow = inst.flow();
    let (mut lemma, mut orb, mut worb, mut two) = (Ok(()), Ok(()), Ok(()), Ok(()));
    let mut examined = 0;
    for e in relations {
        match check_closure_lemma(inst, e) {
            Ok(f) if f.is_empty() => {}
            Ok(f) => lemma = Err(json!({ "relation": e.classes(), "failures": format!("{f:?}") })),
            Err(err) => lemma = Err(json!(err.to_string())),
        }
        if is_orbital(flow, e).is_ok_and(|v| v.is_orbital()) {
            examined += 1;
            match verify_thm_orb(inst, e, caps) {
                Ok(r) if r.holds() => {}
                Ok(r) => orb = Err(json!({ "relation": e.classes(), "conditions": r.conditions() })),
                Err(err) => orb = Err(json!(err.to_string())),
            }
        }
        if is_weakly_orbital(flow, e, caps).is_ok_and(|v| v.is_weakly_orbital()) {
            examined += 1;
            match verify_thm_worb(inst, e, caps) {
                Ok(r) => {
                    if !r.holds() {
                        worb = Err(json!({ "relation": e.classes(), "conditions": r.conditions() }));
                    }
                    if r.classes_closed != r.condition_two() {
                        two = Err(json!({ "relation": e.classes(), "classes_closed": r.classes_closed }));
                    }
                }
                Err(err) => worb = Err(json!(err.to_string())),
            }
        }
    }
    (
        vec![
            ("closure-lemma", lemma),
            ("orbital-equivalence", orb),
            ("weakly-orbital-equivalence", worb),
            ("classes-closed-iff-condition-two", two),
        ],
        examined,
    )
}

fn structured_instance(rng: &mut impl Rng, catalog: &[CatalogGroup], cfg: &SuiteConfig) -> Outcome {
    use rand::seq::SliceRandom;
    let action = random_action(rng, catalog, cfg.max_points, |c| c.group.order() <= 12);
    let cg = &catalog[action.group_index];
    let normals: Vec<&Subgroup> = cg.normal_subgroups().collect();
    let n = *normals.choose(rng).expect("the whole group is normal");
    let label = format!("{} blocks of {:?}", action.label, n.members());
    let spec = json!({ "flow": flow_value(&action.flow), "normal": n.members() });
    let inst = match block_instance(&action.flow, n, &cfg.caps) {
        Ok(i) => i,
        Err(e) => return Outcome { label, spec, checks: vec![("block-lattices", Err(json!(e)))] },
    };
    if !is_agreeable(&inst).is_agreeable() {
        return Outcome { label: format!("{label} (not agreeable)"), spec, checks: vec![] };
    }
    let checks = match invariant_relations(&action.flow, cfg.max_points) {
        Ok(relations) => structured_battery(&inst, &relations, &cfg.caps).0,
        Err(e) => vec![("invariant-relations", Err(json!(e.to_string())))],
    };
    Outcome { label, spec, checks }
}

/// The product of enveloping semigroups against the semigroup of the product flow.
pub fn product_battery(a: &Flow, b: &Flow, caps: &Caps) -> Vec<Check> {
    let semigroup = |f: &Flow| enveloping_semigroup(f, caps);
    let (sa, sb) = match (semigroup(a), semigroup(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return vec![("factor-semigroups", Err(json!(e.to_string())))],
    };
    let p = match product_flow(&[a.clone(), b.clone()], caps) {
        Ok(p) => p,
        Err(e) => return vec![("product-flow", Err(json!(e.to_string())))],
    };
    let sp = match semigroup(&p) {
        Ok(s) => s,
        Err(e) => return vec![("product-semigroup", Err(json!(e.to_string())))],
    };
    let mut out: Vec<Check> = Vec::new();
    out.push((
        "product-size",
        ok_if(sp.len() == sa.len() * sb.len(), || json!({ "product": sp.len(), "factors": [sa.len(), sb.len()] })),
    ));
    let nb = b.points();
    let mut pair_of = vec![None; sp.len()];
    let mut embed = Ok(());
    for f1 in sa.elements() {
        for f2 in sb.elements() {
            let map: Vec<u32> = (0..p.points())
                .map(|x| sa.apply(f1, (x / nb) as u32) * nb as u32 + sb.apply(f2, (x % nb) as u32))
                .collect();
            match sp.lookup(&map) {
                Some(k) => pair_of[k as usize] = Some((f1, f2)),
                None => {
                    embed = Err(json!({ "left": f1, "right": f2 }));
                }
            }
        }
    }
    let pair_of: Vec<(u32, u32)> = match (embed, pair_of.iter().copied().collect::<Option<Vec<_>>>()) {
        (Ok(()), Some(v)) => {
            out.push(("product-bijection", Ok(())));
            v
        }
        (Err(w), _) => {
            out.push(("product-bijection", Err(w)));
            return out;
        }
        (Ok(()), None) => {
            out.push(("product-bijection", Err(json!("product element outside the image"))));
            return out;
        }
    };
    let mut mul = Ok(());
    for p1 in sp.elements() {
        for p2 in sp.elements() {
            let (a1, b1) = pair_of[p1 as usize];
            let (a2, b2) = pair_of[p2 as usize];
            if pair_of[sp.mul(p1, p2) as usize] != (sa.mul(a1, a2), sb.mul(b1, b2)) {
                mul = Err(json!({ "p": p1, "q": p2 }));
                break;
            }
        }
        if mul.is_err() {
            break;
        }
    }
    out.push(("product-multiplication", mul));
    let (ia, ib, ip) = (minimal_left_ideals(&sa), minimal_left_ideals(&sb), minimal_left_ideals(&sp));
    let expected: HashSet<Vec<(u32, u32)>> = ia
        .iter()
        .flat_map(|m1| {
            ib.iter().map(move |m2| {
                let mut v: Vec<(u32, u32)> =
                    m1.members().iter().flat_map(|&x| m2.members().iter().map(move |&y| (x, y))).collect();
                v.sort_unstable();
                v
            })
        })
        .collect();
    let got: HashSet<Vec<(u32, u32)>> = ip
        .iter()
        .map(|m| {
            let mut v: Vec<(u32, u32)> = m.members().iter().map(|&x| pair_of[x as usize]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    out.push((
        "minimal-ideals-are-products",
        ok_if(got == expected, || json!({ "product_ideals": ip.len(), "expected": ia.len() * ib.len() })),
    ));
    let idem = |ideals: &[elliskit_core::ellis::MinimalIdeal]| -> Vec<u32> {
        let mut v: Vec<u32> = ideals.iter().flat_map(|m| m.idempotents().iter().copied()).collect();
        v.sort_unstable();
        v
    };
    let mut want: Vec<(u32, u32)> = idem(&ia).iter().flat_map(|&x| idem(&ib).into_iter().map(move |y| (x, y))).collect();
    want.sort_unstable();
    let mut have: Vec<(u32, u32)> = idem(&ip).iter().map(|&x| pair_of[x as usize]).collect();
    have.sort_unstable();
    out.push((
        "idempotents-are-pairs",
        ok_if(have == want, || json!({ "product": have.len(), "expected": want.len() })),
    ));
    let order = |s: &EllisSemigroup, ids: &[elliskit_core::ellis::MinimalIdeal]| {
        ideal_group(s, &ids[0], ids[0].idempotents()[0]).map(|g| g.order()).unwrap_or(0)
    };
    let (oa, ob, op) = (order(&sa, &ia), order(&sb, &ib), order(&sp, &ip));
    out.push(("ideal-group-orders-multiply", ok_if(op == oa * ob, || json!({ "product": op, "factors": [oa, ob] }))));
    out
}

fn product_instance(rng: &mut impl Rng, catalog: &[CatalogGroup], cfg: &SuiteConfig) -> Outcome {
    let per_factor = cfg.max_points.clamp(1, 4);
    let pick = |rng: &mut _| loop {
        let f = random_flow(rng, catalog, per_factor);
        if f.semigroup.len() <= 40 && f.flow.group().order() <= 24 {
            return f;
        }
    };
    let (a, b) = (pick(rng), pick(rng));
    let checks = product_battery(&a.flow, &b.flow, &cfg.caps);
    Outcome {
        label: format!("({}) x ({})", a.label, b.label),
        spec: json!([flow_value(&a.flow), flow_value(&b.flow)]),
        checks,
    }
}

/// Regular `Z/6 → Z/3 → Z/1` with reduction maps.
pub fn tower_demo(caps: &Caps) -> Result<TowerReport, String> {
    use elliskit_core::algebra::{named_group, GroupName};
    use std::sync::Arc;
    let level = |n: usize| Ambit::regular(Arc::new(named_group(GroupName::Cyclic(n)).expect("cyclic")));
    let levels = vec![level(1), level(3), level(6)];
    let reduce = |src: &Ambit, tgt: &Ambit| {
        let m = tgt.points() as u32;
        FlowMorphism {
            source: src.clone(),
            target: tgt.clone(),
            point_map: (0..src.points() as u32).map(|x| x % m).collect(),
            group_map: (0..src.points() as u32).map(|x| x % m).collect(),
            transformation_map: vec![],
        }
    };
    let connecting = vec![reduce(&levels[1], &levels[0]), reduce(&levels[2], &levels[1])];
    check_tower(&levels, &connecting, caps).map_err(|e| e.to_string())
}

pub fn tower_summary(t: &TowerReport) -> Value {
    json!({
        "points": t.levels.iter().map(|l| l.points).collect::<Vec<_>>(),
        "semigroup_sizes": t.levels.iter().map(|l| l.semigroup_size).collect::<Vec<_>>(),
        "ideal_group_orders": t.levels.iter().map(|l| l.ideal_group_order).collect::<Vec<_>>(),
        "ideal_images": t.ideal_images,
        "idempotent_chain": t.idempotent_chain,
    })
}
