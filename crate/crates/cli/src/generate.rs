//! Seeded random instances drawn from a fixed group catalog.
//!
//! Groups: cyclic of order at most 12, dihedral of order at most 12, S3, S4, Q8 and
//! pairwise direct products, all bounded by the requested order. Actions are coset
//! actions, occasionally disjoint unions of two. Relations are coset partitions of
//! intermediate subgroups, orbit relations and random invariant coarsenings.

use std::sync::Arc;

use elliskit_core::algebra::{enumerate_subgroups, named_group, FiniteGroup, GroupName, Subgroup};
use elliskit_core::ellis::{from_generator_maps, EllisSemigroup};
use elliskit_core::flows::{disjoint_union_flow, Flow};
use elliskit_core::relations::{orbit_relation, EquivRelation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator for instance `index` of a run with `seed`.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Debug, Clone)]
pub struct CatalogGroup {
    pub label: String,
    pub group: Arc<FiniteGroup>,
    pub subgroups: Vec<Subgroup>,
}

impl CatalogGroup {
    fn new(label: String, group: FiniteGroup) -> Self {
        let subgroups = enumerate_subgroups(&group, group.order()).expect("catalog groups are small");
        CatalogGroup { label, group: Arc::new(group), subgroups }
    }

    pub fn normal_subgroups(&self) -> impl Iterator<Item = &Subgroup> {
        self.subgroups.iter().filter(|s| s.is_normal_in(&self.group))
    }

    pub fn index(&self, h: &Subgroup) -> usize {
        self.group.order() / h.order()
    }
}

fn named(name: GroupName) -> FiniteGroup {
    named_group(name).expect("catalog group")
}

fn label(name: GroupName) -> String {
    match name {
        GroupName::Cyclic(n) => format!("C{n}"),
        GroupName::Dihedral(n) => format!("D{n}"),
        GroupName::Symmetric(n) => format!("S{n}"),
        GroupName::Quaternion => "Q8".into(),
        GroupName::Hyperoctahedral(d) => format!("B{d}"),
        GroupName::Affine { q, dim } => format!("AGL({dim},{q})"),
    }
}

/// Every catalog group of order at most `max_order`, in a fixed order.
pub fn group_catalog(max_order: usize) -> Vec<CatalogGroup> {
    let mut base: Vec<GroupName> = (1..=12).map(GroupName::Cyclic).collect();
    base.extend((3..=6).map(GroupName::Dihedral));
    base.extend([GroupName::Symmetric(3), GroupName::Symmetric(4), GroupName::Quaternion]);
    let mut out: Vec<CatalogGroup> = Vec::new();
    for &name in &base {
        let g = named(name);
        if g.order() <= max_order {
            out.push(CatalogGroup::new(label(name), g));
        }
    }
    let factors = [
        GroupName::Cyclic(2),
        GroupName::Cyclic(3),
        GroupName::Cyclic(4),
        GroupName::Symmetric(3),
        GroupName::Dihedral(4),
        GroupName::Quaternion,
    ];
    for (i, &a) in factors.iter().enumerate() {
        for &b in &factors[i..] {
            let (ga, gb) = (named(a), named(b));
            if ga.order() * gb.order() <= max_order {
                out.push(CatalogGroup::new(format!("{}x{}", label(a), label(b)), ga.direct_product(&gb)));
            }
        }
    }
    let c2 = named(GroupName::Cyclic(2));
    let c2cube = c2.direct_product(&c2).direct_product(&c2);
    if c2cube.order() <= max_order {
        out.push(CatalogGroup::new("C2xC2xC2".into(), c2cube));
    }
    out
}

/// The point of `flow` whose stabiliser is `k`, for a coset action of `k`.
pub fn coset_basepoint(flow: &Flow, k: &Subgroup) -> u32 {
    (0..flow.points() as u32).find(|&x| flow.stabilizer(x) == *k).expect("the coset of the identity")
}

#[derive(Debug, Clone)]
pub struct RandomAction {
    pub label: String,
    pub flow: Flow,
    /// The subgroup whose coset space is the first (or only) block.
    pub stabilizer: Subgroup,
    pub group_index: usize,
}

/// A coset action with at most `max_points` points, sometimes a union of two.
pub fn random_action(
    rng: &mut impl Rng,
    catalog: &[CatalogGroup],
    max_points: usize,
    allow: impl Fn(&CatalogGroup) -> bool,
) -> RandomAction {
    let allowed: Vec<usize> = (0..catalog.len()).filter(|&i| allow(&catalog[i])).collect();
    let gi = *allowed.choose(rng).expect("some catalog group is allowed");
    let cg = &catalog[gi];
    let fits: Vec<&Subgroup> = cg.subgroups.iter().filter(|h| cg.index(h) <= max_points).collect();
    let k = (*fits.choose(rng).expect("the whole group always fits")).clone();
    let first = Flow::coset_action(cg.group.clone(), &k);
    let room = max_points - first.points();
    if room > 0 && rng.gen_bool(0.25) {
        let more: Vec<&Subgroup> = cg.subgroups.iter().filter(|h| cg.index(h) <= room).collect();
        let k2 = *more.choose(rng).expect("the whole group always fits");
        let second = Flow::coset_action(cg.group.clone(), k2);
        let flow = disjoint_union_flow(&[first, second]).expect("same group");
        let label = format!("{} on G/{:?} + G/{:?}", cg.label, k.members(), k2.members());
        return RandomAction { label, flow, stabilizer: k, group_index: gi };
    }
    RandomAction { label: format!("{} on G/{:?}", cg.label, k.members()), flow: first, stabilizer: k, group_index: gi }
}

/// The least invariant equivalence relation containing `pairs`; generators suffice
/// because every group element is a positive word in them.
pub fn invariant_closure(flow: &Flow, base: &EquivRelation, pairs: &[(u32, u32)]) -> EquivRelation {
    let n = flow.points();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let mut queue: Vec<(u32, u32)> = pairs.to_vec();
    for c in base.classes() {
        queue.extend(c.windows(2).map(|w| (w[0], w[1])));
    }
    let gens = flow.group().generators().to_vec();
    while let Some((a, b)) = queue.pop() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        parent[ra as usize] = rb;
        for &g in &gens {
            queue.push((flow.act(g, a), flow.act(g, b)));
        }
    }
    let labels: Vec<u32> = (0..n as u32).map(|x| find(&mut parent, x)).collect();
    EquivRelation::from_labels(&labels)
}

/// An invariant relation: an orbit-relation closure, a block system of an intermediate
/// subgroup, or a random coarsening of either.
pub fn random_invariant_relation(rng: &mut impl Rng, cg: &CatalogGroup, action: &RandomAction) -> EquivRelation {
    let flow = &action.flow;
    let n = flow.points();
    let mut e = match rng.gen_range(0..3) {
        0 => {
            let h = cg.subgroups.choose(rng).expect("nonempty");
            let orbits = orbit_relation(flow, h);
            invariant_closure(flow, &orbits, &[])
        }
        1 if flow.is_transitive() => {
            let above: Vec<&Subgroup> = cg.subgroups.iter().filter(|l| action.stabilizer.is_subgroup_of(l)).collect();
            let l = *above.choose(rng).expect("the whole group contains the stabiliser");
            let x0 = coset_basepoint(flow, &action.stabilizer);
            let g = flow.group();
            let mut labels = vec![0u32; n];
            for a in g.elements() {
                labels[flow.act(a, x0) as usize] = l.left_coset(g, a).first().expect("cosets are nonempty") as u32;
            }
            EquivRelation::from_labels(&labels)
        }
        _ => EquivRelation::equality(n),
    };
    if n > 1 && rng.gen_bool(0.5) {
        let (a, b) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
        e = invariant_closure(flow, &e, &[(a, b)]);
    }
    e
}

/// A random map on `0..n`.
pub fn random_map(rng: &mut impl Rng, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..n as u32)).collect()
}

#[derive(Debug, Clone)]
pub struct RandomFlow {
    pub label: String,
    pub flow: Flow,
    pub semigroup: EllisSemigroup,
}

/// Enveloping semigroups of suite flows are kept below this size.
pub const SEMIGROUP_BUDGET: usize = 1500;

/// A flow with at most `max_points` points and at most three generating maps: either
/// random transformations with the trivial group, or a coset action with extra
/// transformations. Draws whose semigroup exceeds the budget are redrawn.
pub fn random_flow(rng: &mut impl Rng, catalog: &[CatalogGroup], max_points: usize) -> RandomFlow {
    let max_points = max_points.max(1);
    for _ in 0..64 {
        let (label, flow) = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=max_points);
            let k = rng.gen_range(1..=3);
            let maps: Vec<Vec<u32>> = (0..k).map(|_| random_map(rng, n)).collect();
            (format!("transformations {maps:?}"), Flow::from_transformations(n, maps).expect("valid maps"))
        } else {
            let action = random_action(rng, catalog, max_points, |c| c.group.generators().len() <= 3);
            let room = 3 - action.flow.group().generators().len().min(3);
            let extra = if room == 0 { 0 } else { rng.gen_range(0..=room) };
            let n = action.flow.points();
            let maps: Vec<Vec<u32>> = (0..extra).map(|_| random_map(rng, n)).collect();
            let flow = elliskit_core::flows::make_flow(
                action.flow.group_arc().clone(),
                n,
                elliskit_core::flows::ActionSpec::ElementMaps(action.flow.element_maps()),
                maps.clone(),
            )
            .expect("valid extension");
            let label = if maps.is_empty() { action.label } else { format!("{} with transformations {maps:?}", action.label) };
            (label, flow)
        };
        if let Ok(semigroup) = from_generator_maps(flow.points(), &flow.generator_maps(), SEMIGROUP_BUDGET) {
            return RandomFlow { label, flow, semigroup };
        }
    }
    let flow = Flow::from_transformations(1, vec![vec![0]]).expect("identity map");
    let semigroup = from_generator_maps(1, &flow.generator_maps(), SEMIGROUP_BUDGET).expect("one element");
    RandomFlow { label: "fallback identity".into(), flow, semigroup }
}
