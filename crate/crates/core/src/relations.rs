//! Invariant equivalence relations on finite G-sets: `H_E`, `E_H`, `R_{H,X̃}`,
//! maximal witnesses and the orbital / weakly orbital decisions.
//!
//! Relations are stored as partitions. `R_{H,X̃}` need not be an equivalence
//! relation, so it is computed as a pair set and classified afterwards.

use std::fmt;

use crate::algebra::{enumerate_subgroups, AlgebraError, FiniteGroup, Subgroup};
use crate::bitset::BitSet;
use crate::caps::Caps;
use crate::flows::Flow;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("relation is not invariant: {x1} ~ {x2} but g={g} separates them")]
    NotInvariant { g: u32, x1: u32, x2: u32 },
    #[error("relation has {relation} points, flow has {flow}")]
    ShapeMismatch { relation: usize, flow: usize },
    #[error("the pair does not witness the relation: {0}")]
    NotAWitness(String),
    #[error("action is not free: element {g} fixes point {x}")]
    NotFree { g: u32, x: u32 },
    #[error("structural fact violated: {0}")]
    FactViolated(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Outcome of the invariance check `x₁ ∼ x₂ ⟹ g·x₁ ∼ g·x₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariance {
    Invariant,
    /// `x1 ∼ x2` but `g·x1 ≁ g·x2`.
    Broken { g: u32, x1: u32, x2: u32 },
}

impl Invariance {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Invariance::Invariant)
    }
}

/// An equivalence relation on `0..points` as a canonical partition: classes sorted
/// internally and ordered by their least member.
#[derive(Clone)]
pub struct EquivRelation {
    classes: Vec<Vec<u32>>,
    class_of: Vec<u32>,
    invariance: Option<Invariance>,
}

impl PartialEq for EquivRelation {
    fn eq(&self, other: &Self) -> bool {
        self.classes == other.classes
    }
}

impl Eq for EquivRelation {}

impl fmt::Debug for EquivRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.classes).finish()
    }
}

pub fn make_relation(points: usize, classes: Vec<Vec<u32>>, flow: Option<&Flow>) -> Result<EquivRelation, RelationError> {
    let mut class_of = vec![u32::MAX; points];
    for (i, c) in classes.iter().enumerate() {
        if c.is_empty() {
            return Err(RelationError::NotAPartition(format!("class {i} is empty")));
        }
        for &x in c {
            let slot = class_of
                .get_mut(x as usize)
                .ok_or_else(|| RelationError::NotAPartition(format!("point {x} out of range 0..{points}")))?;
            if *slot != u32::MAX {
                return Err(RelationError::NotAPartition(format!("point {x} occurs twice")));
            }
            *slot = i as u32;
        }
    }
    if let Some(x) = class_of.iter().position(|&c| c == u32::MAX) {
        return Err(RelationError::NotAPartition(format!("point {x} is in no class")));
    }
    let mut rel = EquivRelation::from_labels(&class_of);
    if let Some(f) = flow {
        rel.bind(f)?;
    }
    Ok(rel)
}

impl EquivRelation {
    /// Builds the partition whose classes are the fibres of `labels`.
    pub fn from_labels<T: Clone + Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let mut classes: Vec<Vec<u32>> = Vec::new();
        let mut class_of = Vec::with_capacity(labels.len());
        for (x, l) in labels.iter().enumerate() {
            let id = *ids.entry(l.clone()).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[id].push(x as u32);
            class_of.push(id as u32);
        }
        EquivRelation { classes, class_of, invariance: None }
    }

    pub fn equality(points: usize) -> Self {
        Self::from_labels(&(0..points).collect::<Vec<_>>())
    }

    pub fn total(points: usize) -> Self {
        Self::from_labels(&vec![0u8; points])
    }

    /// Computes and caches the invariance verdict against `flow`.
    pub fn bind(&mut self, flow: &Flow) -> Result<Invariance, RelationError> {
        let v = invariance(flow, self)?;
        self.invariance = Some(v);
        Ok(v)
    }

    /// The cached invariance verdict, if the relation was bound to a flow.
    pub fn invariance(&self) -> Option<Invariance> {
        self.invariance
    }

    pub fn points(&self) -> usize {
        self.class_of.len()
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, x: u32) -> u32 {
        self.class_of[x as usize]
    }

    pub fn class_of(&self, x: u32) -> &[u32] {
        &self.classes[self.class_of[x as usize] as usize]
    }

    pub fn related(&self, x: u32, y: u32) -> bool {
        self.class_of[x as usize] == self.class_of[y as usize]
    }

    pub fn class_mask(&self, x: u32) -> BitSet {
        BitSet::from_iter(self.points(), self.class_of(x).iter().map(|&y| y as usize))
    }

    /// The relation as a subset of `X²`, indexed `x₁·n + x₂`.
    pub fn pair_set(&self) -> BitSet {
        let n = self.points();
        let mut out = BitSet::new(n * n);
        for c in &self.classes {
            for &a in c {
                for &b in c {
                    out.insert(a as usize * n + b as usize);
                }
            }
        }
        out
    }

    /// Whether `self ⊆ other` as sets of pairs.
    pub fn refines(&self, other: &EquivRelation) -> bool {
        self.classes.iter().all(|c| c.iter().all(|&x| other.related(c[0], x)))
    }

    /// `[x]_E` saturation of a point set.
    pub fn saturate(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.points());
        for x in set.iter() {
            for &y in self.class_of(x as u32) {
                out.insert(y as usize);
            }
        }
        out
    }
}

fn check_shape(flow: &Flow, e: &EquivRelation) -> Result<(), RelationError> {
    if flow.points() != e.points() {
        return Err(RelationError::ShapeMismatch { relation: e.points(), flow: flow.points() });
    }
    Ok(())
}

pub fn invariance(flow: &Flow, e: &EquivRelation) -> Result<Invariance, RelationError> {
    check_shape(flow, e)?;
    for &g in flow.group().generators() {
        for c in e.classes() {
            let rep = flow.act(g, c[0]);
            if let Some(&x2) = c.iter().find(|&&x| !e.related(flow.act(g, x), rep)) {
                return Ok(Invariance::Broken { g, x1: c[0], x2 });
            }
        }
    }
    Ok(Invariance::Invariant)
}

fn require_invariant(flow: &Flow, e: &EquivRelation) -> Result<(), RelationError> {
    match invariance(flow, e)? {
        Invariance::Invariant => Ok(()),
        Invariance::Broken { g, x1, x2 } => Err(RelationError::NotInvariant { g, x1, x2 }),
    }
}

/// `H_E = {g : g·x ∼ x for all x}`, checked to be normal.
pub fn kernel_group(flow: &Flow, e: &EquivRelation) -> Result<Subgroup, RelationError> {
    require_invariant(flow, e)?;
    let g = flow.group();
    let members: Vec<u32> = g.elements().filter(|&a| (0..e.points() as u32).all(|x| e.related(flow.act(a, x), x))).collect();
    let h = Subgroup::from_members(g, &members)?;
    if let Some((a, b)) = h.normality_witness(g) {
        return Err(RelationError::FactViolated(format!("H_E is not normal: {a} conjugates {b} outside")));
    }
    Ok(h)
}

/// `E_H`: lying in the same `H`-orbit, with its invariance verdict cached.
pub fn orbit_relation(flow: &Flow, h: &Subgroup) -> EquivRelation {
    let n = flow.points();
    let mut label = vec![u32::MAX; n];
    for x in 0..n as u32 {
        if label[x as usize] == u32::MAX {
            for &a in h.members() {
                label[flow.act(a, x) as usize] = x;
            }
        }
    }
    let mut rel = EquivRelation::from_labels(&label);
    rel.invariance = invariance(flow, &rel).ok();
    rel
}

/// `{g : x̃ ∼ g·x̃}`, the setwise stabiliser of `[x̃]_E`.
pub fn class_stabilizer(flow: &Flow, e: &EquivRelation, x: u32) -> BitSet {
    let g = flow.group();
    BitSet::from_iter(g.order(), g.elements().filter(|&a| e.related(x, flow.act(a, x))).map(|a| a as usize))
}

/// `{x : x ∼ h·x}`.
pub fn fix_set(flow: &Flow, e: &EquivRelation, h: u32) -> BitSet {
    BitSet::from_iter(e.points(), (0..e.points() as u32).filter(|&x| e.related(x, flow.act(h, x))).map(|x| x as usize))
}

/// A candidate `(H, X̃)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub subgroup: Subgroup,
    pub support: BitSet,
}

/// How `R_{H,X̃}` fails to be an equivalence relation, if it does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RVerdict {
    Equivalence(EquivRelation),
    NotReflexive { x: u32 },
    NotSymmetric { x: u32, y: u32 },
    NotTransitive { x: u32, y: u32, z: u32 },
}

/// `R_{H,X̃}` as a pair set on `X²` (index `x₁·n + x₂`) plus its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RRelation {
    pub points: usize,
    pub pairs: BitSet,
    pub verdict: RVerdict,
}

impl RRelation {
    pub fn related(&self, x: u32, y: u32) -> bool {
        self.pairs.contains(x as usize * self.points + y as usize)
    }

    pub fn equivalence(&self) -> Option<&EquivRelation> {
        match &self.verdict {
            RVerdict::Equivalence(e) => Some(e),
            _ => None,
        }
    }

    /// `{x : x₀ R x}`.
    pub fn row(&self, x0: u32) -> BitSet {
        BitSet::from_iter(self.points, (0..self.points).filter(|&y| self.related(x0, y as u32)))
    }
}

/// The smallest invariant relation containing `(x̃, h·x̃)` for `x̃ ∈ X̃`, `h ∈ H`:
/// the set of all `G`-translates of those seed pairs.
pub fn r_relation(flow: &Flow, w: &WitnessPair) -> RRelation {
    let n = flow.points();
    let g = flow.group();
    let mut seeds = BitSet::new(n * n);
    for x in w.support.iter() {
        for &h in w.subgroup.members() {
            seeds.insert(x * n + flow.act(h, x as u32) as usize);
        }
    }
    let mut pairs = BitSet::new(n * n);
    for s in seeds.iter() {
        let (a, b) = ((s / n) as u32, (s % n) as u32);
        for k in g.elements() {
            pairs.insert(flow.act(k, a) as usize * n + flow.act(k, b) as usize);
        }
    }
    let verdict = classify(n, &pairs);
    RRelation { points: n, pairs, verdict }
}

fn classify(n: usize, pairs: &BitSet) -> RVerdict {
    if let Some(x) = (0..n).find(|&x| !pairs.contains(x * n + x)) {
        return RVerdict::NotReflexive { x: x as u32 };
    }
    for p in pairs.iter() {
        let (x, y) = (p / n, p % n);
        if !pairs.contains(y * n + x) {
            return RVerdict::NotSymmetric { x: x as u32, y: y as u32 };
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in pairs.iter() {
        let (a, b) = (find(&mut parent, p / n), find(&mut parent, p % n));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let e = EquivRelation::from_labels(&roots);
    let full: usize = e.classes().iter().map(|c| c.len() * c.len()).sum();
    if full == pairs.count() {
        return RVerdict::Equivalence(e);
    }
    for x in 0..n {
        for y in (0..n).filter(|&y| pairs.contains(x * n + y)) {
            if let Some(z) = (0..n).find(|&z| pairs.contains(y * n + z) && !pairs.contains(x * n + z)) {
                return RVerdict::NotTransitive { x: x as u32, y: y as u32, z: z as u32 };
            }
        }
    }
    unreachable!("pair count differs from the closure but no intransitive triple exists")
}

/// `⋃ { g⁻¹Hg·x₀ : g·x₀ ∈ X̃ }`.
pub fn class_formula(flow: &Flow, w: &WitnessPair, x0: u32) -> BitSet {
    let g = flow.group();
    let mut out = BitSet::new(flow.points());
    for a in g.elements() {
        let y = flow.act(a, x0);
        if w.support.contains(y as usize) {
            let ainv = g.inv(a);
            for &h in w.subgroup.members() {
                out.insert(flow.act(ainv, flow.act(h, y)) as usize);
            }
        }
    }
    out
}

/// `X̃′ = {x : x ∼ h·x for all h ∈ H}`.
pub fn maximal_support(flow: &Flow, e: &EquivRelation, h: &Subgroup) -> BitSet {
    let mut out = BitSet::full(e.points());
    for &a in h.members() {
        out.intersect_with(&fix_set(flow, e, a));
    }
    out
}

/// `H′ = {g : x̃ ∼ g·x̃ for all x̃ ∈ X̃}` as a raw element set.
pub fn maximal_group_set(flow: &Flow, e: &EquivRelation, support: &BitSet) -> BitSet {
    let mut out = BitSet::full(flow.group().order());
    for x in support.iter() {
        out.intersect_with(&class_stabilizer(flow, e, x as u32));
    }
    out
}

/// Whether `E = R_{H,X̃}`.
pub fn witnesses(flow: &Flow, e: &EquivRelation, w: &WitnessPair) -> bool {
    r_relation(flow, w).equivalence() == Some(e)
}

/// Alternates the support and group maximalisations to a fixpoint.
pub fn maximal_witnesses(flow: &Flow, e: &EquivRelation, w: &WitnessPair) -> Result<WitnessPair, RelationError> {
    check_shape(flow, e)?;
    if !witnesses(flow, e, w) {
        return Err(RelationError::NotAWitness("E differs from R_{H,X̃}".into()));
    }
    let g = flow.group();
    let mut cur = w.clone();
    loop {
        let support = maximal_support(flow, e, &cur.subgroup);
        let hset = maximal_group_set(flow, e, &support);
        let subgroup = Subgroup::from_members(g, &hset.to_u32_vec())
            .map_err(|err| RelationError::FactViolated(format!("maximal group is not a subgroup: {err}")))?;
        let next = WitnessPair { subgroup, support };
        if !witnesses(flow, e, &next) {
            return Err(RelationError::FactViolated("maximalisation changed the relation".into()));
        }
        if next == cur {
            if e.saturate(&next.support) != next.support {
                return Err(RelationError::FactViolated("maximal support is not a union of classes".into()));
            }
            return Ok(next);
        }
        cur = next;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitalVerdict {
    Orbital { kernel: Subgroup },
    /// `x ∼ y` but `y ∉ H_E·x`.
    NotOrbital { kernel: Subgroup, x: u32, y: u32 },
}

impl OrbitalVerdict {
    pub fn is_orbital(&self) -> bool {
        matches!(self, OrbitalVerdict::Orbital { .. })
    }

    pub fn kernel(&self) -> &Subgroup {
        match self {
            OrbitalVerdict::Orbital { kernel } | OrbitalVerdict::NotOrbital { kernel, .. } => kernel,
        }
    }
}

/// `E` is orbital iff `E = E_{H_E}`.
pub fn is_orbital(flow: &Flow, e: &EquivRelation) -> Result<OrbitalVerdict, RelationError> {
    let kernel = kernel_group(flow, e)?;
    let eh = orbit_relation(flow, &kernel);
    if eh == *e {
        return Ok(OrbitalVerdict::Orbital { kernel });
    }
    for c in e.classes() {
        if let Some(&y) = c.iter().find(|&&y| !eh.related(c[0], y)) {
            return Ok(OrbitalVerdict::NotOrbital { kernel, x: c[0], y });
        }
    }
    Err(RelationError::FactViolated("E_{H_E} is not contained in E".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakVerdict {
    Witness(WitnessPair),
    Exhausted { subgroups_checked: usize },
}

impl WeakVerdict {
    pub fn is_weakly_orbital(&self) -> bool {
        matches!(self, WeakVerdict::Witness(_))
    }
}

/// Tries every subgroup `H` in canonical order with its maximal support
/// `X̃′_H = {x : x ∼ h·x, h ∈ H}`; `E` is weakly orbital iff one of them works.
pub fn is_weakly_orbital(flow: &Flow, e: &EquivRelation, caps: &Caps) -> Result<WeakVerdict, RelationError> {
    require_invariant(flow, e)?;
    let subs = enumerate_subgroups(flow.group(), caps.max_enumeration_order)?;
    for h in &subs {
        let support = maximal_support(flow, e, h);
        let w = WitnessPair { subgroup: h.clone(), support };
        if witnesses(flow, e, &w) {
            return Ok(WeakVerdict::Witness(w));
        }
    }
    Ok(WeakVerdict::Exhausted { subgroups_checked: subs.len() })
}

/// Checks the orbital/normal-subgroup bijection for a free action and returns the
/// pairs `(N, E_N)` over the normal subgroups in canonical order.
pub fn free_action_correspondence(flow: &Flow, caps: &Caps) -> Result<Vec<(Subgroup, EquivRelation)>, RelationError> {
    if let Some((g, x)) = flow.freeness_witness() {
        return Err(RelationError::NotFree { g, x });
    }
    let grp: &FiniteGroup = flow.group();
    let subs = enumerate_subgroups(grp, caps.max_enumeration_order)?;
    let mut out: Vec<(Subgroup, EquivRelation)> = Vec::new();
    for n in subs.iter().filter(|s| s.is_normal_in(grp)) {
        let en = orbit_relation(flow, n);
        if !en.invariance().is_some_and(|v| v.is_invariant()) {
            return Err(RelationError::FactViolated("E_N is not invariant for normal N".into()));
        }
        if kernel_group(flow, &en)? != *n {
            return Err(RelationError::FactViolated("H_{E_N} differs from N".into()));
        }
        out.push((n.clone(), en));
    }
    for h in &subs {
        let eh = orbit_relation(flow, h);
        if eh.invariance().is_some_and(|v| v.is_invariant()) && !out.iter().any(|(_, e)| *e == eh) {
            return Err(RelationError::FactViolated("an orbital relation has no normal subgroup".into()));
        }
    }
    Ok(out)
}

/// All invariant equivalence relations on a flow with at most `max_points` points,
/// in restricted-growth-string order.
pub fn invariant_relations(flow: &Flow, max_points: usize) -> Result<Vec<EquivRelation>, RelationError> {
    let n = flow.points();
    if n > max_points {
        return Err(RelationError::ShapeMismatch { relation: max_points, flow: n });
    }
    let mut out = Vec::new();
    let mut labels = vec![0u32; n];
    fn rec(flow: &Flow, labels: &mut [u32], i: usize, max: u32, out: &mut Vec<EquivRelation>) {
        if i == labels.len() {
            let mut e = EquivRelation::from_labels(labels);
            if e.bind(flow).is_ok_and(|v| v.is_invariant()) {
                out.push(e);
            }
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(flow, labels, i + 1, max.max(l + 1), out);
        }
    }
    if n == 0 {
        return Ok(vec![EquivRelation::from_labels::<u32>(&[])]);
    }
    rec(flow, &mut labels, 1, 1, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests;
