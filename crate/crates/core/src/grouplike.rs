//! Group-like relations on finite ambits: certificates, the orbit map `r`, the
//! subgroup `D`, the quotient `Ĝ`, domination, and proper/uniform witnesses.

use crate::algebra::{normal_core, quotient_group, AlgebraError, FiniteGroup, GroupQuotient, Subgroup};
use crate::bitset::BitSet;
use crate::caps::Caps;
use crate::ellis::{self, EllisError, EllisSemigroup, IdealGroup};
use crate::flows::{check_morphism, Ambit, FlowMorphism, MorphismVerdict};
use crate::relations::{invariance, EquivRelation, Invariance, RelationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupLikeError {
    #[error("relation has {relation} points, ambit has {ambit}")]
    ShapeMismatch { relation: usize, ambit: usize },
    #[error("not weakly group-like: {0}")]
    NotWeaklyGroupLike(String),
    #[error("structural fact violated: {0}")]
    FactViolated(String),
    #[error(transparent)]
    Ellis(#[from] EllisError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// Why a relation is not group-like.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// `x1 ∼ x2` but `g·x1 ≁ g·x2`.
    NotInvariant { g: u32, x1: u32, x2: u32 },
    /// `g·x₀ ∼ g2·x₀` but `g·x ≁ g2·x`.
    NotWellDefined { g: u32, g2: u32, x: u32 },
    /// No group element carries `x₀` into this class.
    ClassUnreached { class: u32 },
    /// Transformation `index` sends `x` outside `[t(x₀)]·[x]`.
    TransformationIncompatible { index: usize, x: u32 },
}

/// A verified group structure on `X/E` with `[g·x₀]·[x] = [g·x]`.
#[derive(Debug, Clone)]
pub struct GroupLikeCertificate {
    pub ambit: Ambit,
    pub relation: EquivRelation,
    /// Group on class indices of `relation`; the identity is the class of `x₀`.
    pub quotient_group: FiniteGroup,
    /// `K = {g : g·x₀ ∼ x₀}`.
    pub kernel: Subgroup,
    /// `g ↦ [g·x₀]` for every group element.
    pub projection: Vec<u32>,
}

impl GroupLikeCertificate {
    pub fn class_of_point(&self, x: u32) -> u32 {
        self.relation.class_index(x)
    }
}

#[derive(Debug, Clone)]
pub enum GroupLikeVerdict {
    GroupLike(Box<GroupLikeCertificate>),
    NotGroupLike(Refutation),
}

impl GroupLikeVerdict {
    pub fn certificate(&self) -> Option<&GroupLikeCertificate> {
        match self {
            GroupLikeVerdict::GroupLike(c) => Some(c),
            GroupLikeVerdict::NotGroupLike(_) => None,
        }
    }

    pub fn is_group_like(&self) -> bool {
        self.certificate().is_some()
    }
}

fn check_shape(ambit: &Ambit, e: &EquivRelation) -> Result<(), GroupLikeError> {
    if ambit.points() != e.points() {
        return Err(GroupLikeError::ShapeMismatch { relation: e.points(), ambit: ambit.points() });
    }
    Ok(())
}

pub fn check_group_like(ambit: &Ambit, e: &EquivRelation) -> Result<GroupLikeVerdict, GroupLikeError> {
    check_shape(ambit, e)?;
    let flow = ambit.flow();
    let g = flow.group();
    let x0 = ambit.basepoint();
    if let Invariance::Broken { g, x1, x2 } = invariance(flow, e)? {
        return Ok(GroupLikeVerdict::NotGroupLike(Refutation::NotInvariant { g, x1, x2 }));
    }
    let kernel_members: Vec<u32> = g.elements().filter(|&a| e.related(flow.act(a, x0), x0)).collect();
    let kernel = Subgroup::from_members(g, &kernel_members)?;
    for &k in kernel.members() {
        if let Some(x) = (0..flow.points() as u32).find(|&x| !e.related(flow.act(k, x), x)) {
            return Ok(GroupLikeVerdict::NotGroupLike(Refutation::NotWellDefined { g: g.identity(), g2: k, x }));
        }
    }
    let projection: Vec<u32> = g.elements().map(|a| e.class_index(flow.act(a, x0))).collect();
    let nc = e.class_count();
    let mut rep = vec![u32::MAX; nc];
    for a in g.elements() {
        let c = projection[a as usize] as usize;
        if rep[c] == u32::MAX {
            rep[c] = a;
        }
    }
    if let Some(c) = rep.iter().position(|&r| r == u32::MAX) {
        return Ok(GroupLikeVerdict::NotGroupLike(Refutation::ClassUnreached { class: c as u32 }));
    }
    let table: Vec<Vec<u32>> = (0..nc)
        .map(|c| (0..nc).map(|d| e.class_index(flow.act(rep[c], e.classes()[d][0]))).collect())
        .collect();
    let quotient = FiniteGroup::from_table(&table)
        .map_err(|err| GroupLikeError::FactViolated(format!("quotient operation is not a group: {err}")))?;
    if quotient.identity() != e.class_index(x0) {
        return Err(GroupLikeError::FactViolated("identity of X/E is not [x₀]".into()));
    }
    for a in g.elements() {
        for b in g.elements() {
            if projection[g.mul(a, b) as usize] != quotient.mul(projection[a as usize], projection[b as usize]) {
                return Err(GroupLikeError::FactViolated(format!("g ↦ [g·x₀] is not a homomorphism at ({a}, {b})")));
            }
        }
    }
    if let Some((a, b)) = kernel.normality_witness(g) {
        return Err(GroupLikeError::FactViolated(format!("kernel is not normal: {a}, {b}")));
    }
    for (index, t) in flow.transformations().iter().enumerate() {
        let tc = e.class_index(t[x0 as usize]);
        if let Some(x) = (0..flow.points() as u32).find(|&x| e.class_index(t[x as usize]) != quotient.mul(tc, e.class_index(x))) {
            return Ok(GroupLikeVerdict::NotGroupLike(Refutation::TransformationIncompatible { index, x }));
        }
    }
    Ok(GroupLikeVerdict::GroupLike(Box::new(GroupLikeCertificate {
        ambit: ambit.clone(),
        relation: e.clone(),
        quotient_group: quotient,
        kernel,
        projection,
    })))
}

/// `r(f) = [f(x₀)]_E` on the enveloping semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMap {
    /// Class index per semigroup element.
    pub map: Vec<u32>,
    /// Semigroup elements sent to `[x₀]`.
    pub kernel: Vec<u32>,
    pub fibers: usize,
}

/// Computes `r` and verifies it is a surjective homomorphism onto the quotient
/// group with every minimal-ideal idempotent in its kernel.
pub fn orbit_map_r(cert: &GroupLikeCertificate, s: &EllisSemigroup) -> Result<OrbitMap, GroupLikeError> {
    let x0 = cert.ambit.basepoint();
    let q = &cert.quotient_group;
    let map: Vec<u32> = s.elements().map(|f| cert.class_of_point(s.apply(f, x0))).collect();
    let hit = BitSet::from_iter(q.order(), map.iter().map(|&c| c as usize));
    if let Some(c) = hit.complement().first() {
        return Err(GroupLikeError::FactViolated(format!("r misses class {c}")));
    }
    if map[s.identity() as usize] != q.identity() {
        return Err(GroupLikeError::FactViolated("r(id) is not the identity".into()));
    }
    for &gen in s.generators() {
        for f in s.elements() {
            if map[s.mul(gen, f) as usize] != q.mul(map[gen as usize], map[f as usize]) {
                return Err(GroupLikeError::FactViolated(format!("r is not multiplicative at ({gen}, {f})")));
            }
        }
    }
    for m in ellis::minimal_left_ideals(s) {
        if let Some(&u) = m.idempotents().iter().find(|&&u| map[u as usize] != q.identity()) {
            return Err(GroupLikeError::FactViolated(format!("idempotent {u} is outside ker r")));
        }
    }
    let kernel = s.elements().filter(|&f| map[f as usize] == q.identity()).collect();
    Ok(OrbitMap { map, kernel, fibers: q.order() })
}

/// The first minimal ideal and its first idempotent's group.
pub fn default_ideal_group(s: &EllisSemigroup) -> Result<IdealGroup, GroupLikeError> {
    let ideals = ellis::minimal_left_ideals(s);
    let m = ideals.first().ok_or_else(|| GroupLikeError::FactViolated("no minimal ideal".into()))?;
    Ok(ellis::ideal_group(s, m, m.idempotents()[0])?)
}

/// `D = {f ∈ uM : f(x₀) = u(x₀)}` in the group view of `uM`, checked against
/// `f₁(x₀) = f₂(x₀) ⟺ f₁⁻¹f₂ ∈ D` on all pairs.
pub fn compute_d(s: &EllisSemigroup, g: &IdealGroup, ambit: &Ambit) -> Result<Subgroup, GroupLikeError> {
    let x0 = ambit.basepoint();
    let ux0 = s.apply(g.idempotent(), x0);
    let view = g.group();
    let eval: Vec<u32> = g.members().iter().map(|&f| s.apply(f, x0)).collect();
    let members: Vec<u32> = view.elements().filter(|&p| eval[p as usize] == ux0).collect();
    let d = Subgroup::from_members(view, &members)
        .map_err(|e| GroupLikeError::FactViolated(format!("D is not a subgroup: {e}")))?;
    for a in view.elements() {
        let ainv = view.inv(a);
        for b in view.elements() {
            if (eval[a as usize] == eval[b as usize]) != d.contains(view.mul(ainv, b)) {
                return Err(GroupLikeError::FactViolated(format!("f₁⁻¹f₂ ∈ D fails to match evaluation at ({a}, {b})")));
            }
        }
    }
    Ok(d)
}

/// `Ĝ = uM / Core(H(uM)·D)`.
#[derive(Debug, Clone)]
pub struct GHat {
    pub d: Subgroup,
    pub h_um: Subgroup,
    pub core: Subgroup,
    pub quotient: GroupQuotient,
}

pub fn compute_ghat(s: &EllisSemigroup, g: &IdealGroup, ambit: &Ambit) -> Result<GHat, GroupLikeError> {
    let d = compute_d(s, g, ambit)?;
    let h_um = ellis::h_subgroup(s, g)?;
    let view = g.group();
    let mut seeds = d.members().to_vec();
    seeds.extend_from_slice(h_um.members());
    let hd = crate::algebra::subgroup_generated(view, &seeds);
    let core = normal_core(view, &hd);
    let quotient = quotient_group(view, &core)?;
    Ok(GHat { d, h_um, core, quotient })
}

/// The identification `Ĝ/H ≅ X/E`.
#[derive(Debug, Clone)]
pub struct IdentificationReport {
    /// `Z/F → X/E` from the regular ambit with `F` the cosets of `H_E`.
    pub domination: Vec<u32>,
    pub ghat: GHat,
    /// `action[ĝ·classes + c]`: class of `f(x)` for `f` in coset `ĝ` and `x` in class `c`.
    pub action: Vec<u32>,
    /// Stabiliser of `[x₀]` in `Ĝ`.
    pub stabilizer: Subgroup,
    /// Class reached by each element of `Ĝ` from `[x₀]`.
    pub orbit_map: Vec<u32>,
    /// `[x₀]`-class image of each left coset of `H`, cosets ordered by least element.
    pub coset_classes: Vec<(Vec<u32>, u32)>,
    /// Image of each `g ∈ G` in `Ĝ` via `g ↦ u·g·u`.
    pub group_map: Vec<u32>,
    pub classes: usize,
}

/// Runs the identification pipeline. `E` must be invariant; the dominating relation is
/// the coset relation of `H_E` on the regular ambit.
pub fn identify_quotient(ambit: &Ambit, e: &EquivRelation, caps: &Caps) -> Result<IdentificationReport, GroupLikeError> {
    check_shape(ambit, e)?;
    let flow = ambit.flow();
    if let Invariance::Broken { g, x1, x2 } = invariance(flow, e)? {
        return Err(GroupLikeError::NotWeaklyGroupLike(format!("not invariant: {x1} ~ {x2} separated by {g}")));
    }
    let domination = match check_domination(&regular_domination(ambit, e)?)? {
        DominationVerdict::Dominates { induced } => induced,
        other => return Err(GroupLikeError::NotWeaklyGroupLike(format!("regular ambit does not dominate: {other:?}"))),
    };
    let s = ellis::enveloping_semigroup(flow, caps)?;
    let ig = default_ideal_group(&s)?;
    let ghat = compute_ghat(&s, &ig, ambit)?;
    let q = &ghat.quotient;
    let nc = e.class_count();
    let reps: Vec<u32> = q.cosets().iter().map(|c| ig.members()[c[0] as usize]).collect();
    let mut action = Vec::with_capacity(q.order() * nc);
    for (ci, coset) in q.cosets().iter().enumerate() {
        for class in e.classes() {
            let target = e.class_index(s.apply(reps[ci], class[0]));
            for &p in coset {
                let f = ig.members()[p as usize];
                if let Some(&x) = class.iter().find(|&&x| e.class_index(s.apply(f, x)) != target) {
                    return Err(GroupLikeError::NotWeaklyGroupLike(format!(
                        "action of Ĝ on X/E is not well defined at element {f}, point {x}"
                    )));
                }
            }
            action.push(target);
        }
    }
    let qg = q.group();
    for a in qg.elements() {
        for b in qg.elements() {
            for c in 0..nc {
                let lhs = action[qg.mul(a, b) as usize * nc + c];
                let rhs = action[a as usize * nc + action[b as usize * nc + c] as usize];
                if lhs != rhs {
                    return Err(GroupLikeError::FactViolated(format!("Ĝ does not act on X/E at ({a}, {b}, {c})")));
                }
            }
        }
    }
    let c0 = e.class_index(ambit.basepoint());
    let orbit_map: Vec<u32> = qg.elements().map(|a| action[a as usize * nc + c0 as usize]).collect();
    let stab: Vec<u32> = qg.elements().filter(|&a| orbit_map[a as usize] == c0).collect();
    let stabilizer = Subgroup::from_members(qg, &stab)?;
    let mut coset_classes: Vec<(Vec<u32>, u32)> = Vec::new();
    let mut seen = BitSet::new(qg.order());
    for a in qg.elements() {
        if seen.contains(a as usize) {
            continue;
        }
        let coset = stabilizer.left_coset(qg, a);
        seen.union_with(&coset);
        let class = orbit_map[a as usize];
        if let Some(b) = qg.elements().find(|&b| (orbit_map[b as usize] == class) != coset.contains(b as usize)) {
            return Err(GroupLikeError::FactViolated(format!("fibre of r̂ at class {class} differs from a left coset at {b}")));
        }
        coset_classes.push((coset.to_u32_vec(), class));
    }
    if coset_classes.len() != nc || nc * stabilizer.order() != qg.order() {
        return Err(GroupLikeError::FactViolated("|X/E|·|H| differs from |Ĝ|".into()));
    }
    let u = ig.idempotent();
    let g = flow.group();
    let mut group_map = Vec::with_capacity(g.order());
    for a in g.elements() {
        let ga = s.lookup(flow.element_map(a)).ok_or_else(|| GroupLikeError::FactViolated(format!("π_{a} missing from S")))?;
        let uau = s.mul(s.mul(u, ga), u);
        let p = ig.position(uau).ok_or_else(|| GroupLikeError::FactViolated(format!("u·{a}·u is outside uM")))?;
        let image = q.project(p);
        for c in 0..nc {
            let moved = e.class_index(flow.act(a, e.classes()[c][0]));
            if action[image as usize * nc + c] != moved {
                return Err(GroupLikeError::FactViolated(format!("g ↦ ugu is not equivariant at g={a}, class {c}")));
            }
        }
        group_map.push(image);
    }
    Ok(IdentificationReport { domination, ghat, action, stabilizer, orbit_map, coset_classes, group_map, classes: nc })
}

/// A candidate domination: `φ: (Z, z₀) → (X, x₀)` with `F` on `Z` and `E` on `X`.
#[derive(Debug, Clone)]
pub struct DominationWitness {
    pub morphism: FlowMorphism,
    pub source_relation: EquivRelation,
    pub target_relation: EquivRelation,
}

#[derive(Debug, Clone)]
pub enum DominationVerdict {
    /// `induced[c]` is the `E`-class receiving `F`-class `c`.
    Dominates { induced: Vec<u32> },
    MorphismInvalid(MorphismVerdict),
    SourceNotGroupLike(Refutation),
    /// `z1 F z2` but `φ(z1) ≁_E φ(z2)`.
    NotRefining { z1: u32, z2: u32 },
    /// `a ∼ b` in `E|_{Z/F}` but `c·a ≁ c·b`.
    NotLeftInvariant { c: u32, a: u32, b: u32 },
}

impl DominationVerdict {
    pub fn dominates(&self) -> bool {
        matches!(self, DominationVerdict::Dominates { .. })
    }
}

/// `H_E = {g : g·x ∼ x for all x}`.
pub fn class_fixer(ambit: &Ambit, e: &EquivRelation) -> Result<Subgroup, GroupLikeError> {
    let flow = ambit.flow();
    let g = flow.group();
    let members: Vec<u32> =
        g.elements().filter(|&a| (0..flow.points() as u32).all(|x| e.related(flow.act(a, x), x))).collect();
    Ok(Subgroup::from_members(g, &members)?)
}

/// The default candidate: `g ↦ g·x₀` from the regular ambit, `F` the left cosets of `H_E`.
pub fn regular_domination(ambit: &Ambit, e: &EquivRelation) -> Result<DominationWitness, GroupLikeError> {
    let flow = ambit.flow();
    let g = flow.group();
    let k = class_fixer(ambit, e)?;
    let labels: Vec<u32> = g.elements().map(|a| k.members().iter().map(|&b| g.mul(a, b)).min().unwrap_or(a)).collect();
    let regular = Ambit::regular(flow.group_arc().clone());
    let point_map = g.elements().map(|a| flow.act(a, ambit.basepoint())).collect();
    Ok(DominationWitness {
        morphism: FlowMorphism::same_group(&regular, ambit, point_map),
        source_relation: EquivRelation::from_labels(&labels),
        target_relation: e.clone(),
    })
}

pub fn check_domination(w: &DominationWitness) -> Result<DominationVerdict, GroupLikeError> {
    let m = &w.morphism;
    let v = check_morphism(m);
    if !v.is_valid() {
        return Ok(DominationVerdict::MorphismInvalid(v));
    }
    check_shape(&m.target, &w.target_relation)?;
    let cert = match check_group_like(&m.source, &w.source_relation)? {
        GroupLikeVerdict::GroupLike(c) => c,
        GroupLikeVerdict::NotGroupLike(r) => return Ok(DominationVerdict::SourceNotGroupLike(r)),
    };
    let (f, e) = (&w.source_relation, &w.target_relation);
    for c in f.classes() {
        if let Some(&z) = c.iter().find(|&&z| !e.related(m.point_map[c[0] as usize], m.point_map[z as usize])) {
            return Ok(DominationVerdict::NotRefining { z1: c[0], z2: z });
        }
    }
    let induced: Vec<u32> = f.classes().iter().map(|c| e.class_index(m.point_map[c[0] as usize])).collect();
    let q = &cert.quotient_group;
    for a in q.elements() {
        for b in q.elements().filter(|&b| induced[b as usize] == induced[a as usize]) {
            if let Some(c) = q.elements().find(|&c| induced[q.mul(c, a) as usize] != induced[q.mul(c, b) as usize]) {
                return Ok(DominationVerdict::NotLeftInvariant { c, a, b });
            }
        }
    }
    Ok(DominationVerdict::Dominates { induced })
}

/// A cover group `G̃` with `[g̃]_≡ = fiber_map[g̃]`.
#[derive(Debug, Clone)]
pub struct ProperWitness {
    pub ambit: Ambit,
    pub relation: EquivRelation,
    pub cover: FiniteGroup,
    pub fiber_map: Vec<u32>,
}

/// Each clause of a proper witness, checked independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperReport {
    /// A point missed by the fibre map.
    pub unreached: Option<u32>,
    /// `Ok` when `g̃ ↦ [[g̃]_≡]_E` is a homomorphism onto the group-like quotient;
    /// `Err` carries a failing pair, or `None` when `E` is not group-like.
    pub homomorphism: Result<(), Option<(u32, u32)>>,
    /// A pair `(g, p)` with no `g̃₁, g̃₂` covering `g·x₀`, `p` and `g·p`.
    pub pseudocompleteness: Option<(u32, u32)>,
    /// `F₀ = {[g̃₁⁻¹g̃₂]_≡ : g̃₁ ≡ g̃₂}`.
    pub f0: BitSet,
}

impl ProperReport {
    pub fn is_valid(&self) -> bool {
        self.unreached.is_none() && self.homomorphism.is_ok() && self.pseudocompleteness.is_none()
    }
}

pub fn check_proper_witness(pw: &ProperWitness) -> Result<ProperReport, GroupLikeError> {
    check_shape(&pw.ambit, &pw.relation)?;
    let n = pw.ambit.points();
    let cover = &pw.cover;
    if pw.fiber_map.len() != cover.order() || pw.fiber_map.iter().any(|&x| x as usize >= n) {
        return Err(GroupLikeError::FactViolated("fibre map has the wrong shape".into()));
    }
    let hit = BitSet::from_iter(n, pw.fiber_map.iter().map(|&x| x as usize));
    let unreached = hit.complement().first().map(|x| x as u32);
    let homomorphism = match check_group_like(&pw.ambit, &pw.relation)? {
        GroupLikeVerdict::NotGroupLike(_) => Err(None),
        GroupLikeVerdict::GroupLike(cert) => {
            let r = |a: u32| cert.class_of_point(pw.fiber_map[a as usize]);
            let q = &cert.quotient_group;
            let bad = cover
                .elements()
                .flat_map(|a| cover.elements().map(move |b| (a, b)))
                .find(|&(a, b)| r(cover.mul(a, b)) != q.mul(r(a), r(b)));
            bad.map_or(Ok(()), |p| Err(Some(p)))
        }
    };
    let mut fibers: Vec<Vec<u32>> = vec![Vec::new(); n];
    for a in cover.elements() {
        fibers[pw.fiber_map[a as usize] as usize].push(a);
    }
    let flow = pw.ambit.flow();
    let x0 = pw.ambit.basepoint();
    let mut pseudocompleteness = None;
    'outer: for g in flow.group().elements() {
        let gx0 = flow.act(g, x0);
        for p in 0..n as u32 {
            let gp = flow.act(g, p);
            let ok = fibers[gx0 as usize]
                .iter()
                .any(|&a| fibers[p as usize].iter().any(|&b| pw.fiber_map[cover.mul(a, b) as usize] == gp));
            if !ok {
                pseudocompleteness = Some((g, p));
                break 'outer;
            }
        }
    }
    let mut f0 = BitSet::new(n);
    for fib in &fibers {
        for &a in fib {
            let ainv = cover.inv(a);
            for &b in fib {
                f0.insert(pw.fiber_map[cover.mul(ainv, b) as usize] as usize);
            }
        }
    }
    Ok(ProperReport { unreached, homomorphism, pseudocompleteness, f0 })
}

/// A family `𝓔` of pair sets on `X²` (index `x₁·n + x₂`) with `successor[i]` naming `D′`.
#[derive(Debug, Clone)]
pub struct UniformWitnessFamily {
    pub members: Vec<BitSet>,
    pub successor: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniformVerdict {
    Valid,
    InvalidProperWitness,
    BadShape(String),
    NotSymmetric { member: usize },
    MissingDiagonal { member: usize },
    UnionMismatch,
    CompositionEscapes { member: usize },
    /// `(x₀, [g̃]) ∈ D` but `([g̃′], [g̃g̃′]) ∉ D′`.
    TranslationEscapes { member: usize, g: u32, g2: u32 },
}

impl UniformVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, UniformVerdict::Valid)
    }
}

pub fn check_uniform_witness(e: &EquivRelation, fam: &UniformWitnessFamily, pw: &ProperWitness) -> Result<UniformVerdict, GroupLikeError> {
    if !check_proper_witness(pw)?.is_valid() {
        return Ok(UniformVerdict::InvalidProperWitness);
    }
    let n = e.points();
    if fam.members.len() != fam.successor.len() || fam.successor.iter().any(|&j| j >= fam.members.len()) {
        return Ok(UniformVerdict::BadShape("successor list".into()));
    }
    if fam.members.iter().any(|d| d.capacity() != n * n) {
        return Ok(UniformVerdict::BadShape("member size".into()));
    }
    let mut union = BitSet::new(n * n);
    for (i, d) in fam.members.iter().enumerate() {
        if d.iter().any(|p| !d.contains((p % n) * n + p / n)) {
            return Ok(UniformVerdict::NotSymmetric { member: i });
        }
        if (0..n).any(|x| !d.contains(x * n + x)) {
            return Ok(UniformVerdict::MissingDiagonal { member: i });
        }
        union.union_with(d);
    }
    if union != e.pair_set() {
        return Ok(UniformVerdict::UnionMismatch);
    }
    let x0 = pw.ambit.basepoint() as usize;
    let cover = &pw.cover;
    for (i, d) in fam.members.iter().enumerate() {
        let next = &fam.members[fam.successor[i]];
        for p in d.iter() {
            let (a, b) = (p / n, p % n);
            if (0..n).any(|c| d.contains(b * n + c) && !next.contains(a * n + c)) {
                return Ok(UniformVerdict::CompositionEscapes { member: i });
            }
        }
        for g in cover.elements() {
            if !d.contains(x0 * n + pw.fiber_map[g as usize] as usize) {
                continue;
            }
            for g2 in cover.elements() {
                let pair = pw.fiber_map[g2 as usize] as usize * n + pw.fiber_map[cover.mul(g, g2) as usize] as usize;
                if !next.contains(pair) {
                    return Ok(UniformVerdict::TranslationEscapes { member: i, g, g2 });
                }
            }
        }
    }
    Ok(UniformVerdict::Valid)
}

#[cfg(test)]
mod tests;
