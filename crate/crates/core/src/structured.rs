//! Pseudo-closed lattices on the products of a finite group and the space it acts on,
//! agreeable actions, and the orbital / weakly orbital closedness equivalences.
//!
//! A finite family of sets closed under union and intersection and containing the
//! empty and full sets is exactly the family of down-sets of a preorder. Lattices are
//! stored that way: `principal[x]` is the least pseudo-closed set containing `x`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::algebra::{enumerate_subgroups, AlgebraError, Subgroup};
use crate::bitset::BitSet;
use crate::caps::Caps;
use crate::flows::Flow;
use crate::relations::{
    class_stabilizer, fix_set, invariance, is_orbital, kernel_group, maximal_support, maximal_witnesses,
    orbit_relation, witnesses, EquivRelation, Invariance, RelationError, WitnessPair,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructuredError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a lattice: {0}")]
    NotALattice(LatticeDefect),
    #[error("ground of size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("action is not agreeable: axiom ({axiom}) fails: {detail}")]
    NotAgreeable { axiom: u8, detail: String },
    #[error("relation is not orbital")]
    NotOrbital,
    #[error("relation is not weakly orbital")]
    NotWeaklyOrbital,
    #[error("relation is not invariant: {x1} ~ {x2} separated by {g}")]
    NotInvariant { g: u32, x1: u32, x2: u32 },
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeDefect {
    MissingEmpty,
    MissingGround,
    WrongSize { index: usize, len: usize, expected: usize },
    MissingUnion { a: Vec<u32>, b: Vec<u32> },
    MissingIntersection { a: Vec<u32>, b: Vec<u32> },
}

impl fmt::Display for LatticeDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeDefect::MissingEmpty => write!(f, "the empty set is missing"),
            LatticeDefect::MissingGround => write!(f, "the ground set is missing"),
            LatticeDefect::WrongSize { index, len, expected } => write!(f, "set {index} has size {len}, expected {expected}"),
            LatticeDefect::MissingUnion { a, b } => write!(f, "union of {a:?} and {b:?} is missing"),
            LatticeDefect::MissingIntersection { a, b } => write!(f, "intersection of {a:?} and {b:?} is missing"),
        }
    }
}

/// The six product spaces the agreeability axioms mention. Indices are row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ground {
    G,
    X,
    GX,
    XX,
    XXXX,
    XG,
}

impl Ground {
    pub const ALL: [Ground; 6] = [Ground::G, Ground::X, Ground::GX, Ground::XX, Ground::XXXX, Ground::XG];

    pub fn size(self, group: usize, points: usize) -> usize {
        match self {
            Ground::G => group,
            Ground::X => points,
            Ground::GX | Ground::XG => group * points,
            Ground::XX => points * points,
            Ground::XXXX => points.pow(4),
        }
    }

    pub fn factors(self) -> Option<(Ground, Ground)> {
        match self {
            Ground::G | Ground::X => None,
            Ground::GX => Some((Ground::G, Ground::X)),
            Ground::XX => Some((Ground::X, Ground::X)),
            Ground::XXXX => Some((Ground::XX, Ground::XX)),
            Ground::XG => Some((Ground::X, Ground::G)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ground::G => "G",
            Ground::X => "X",
            Ground::GX => "GxX",
            Ground::XX => "X^2",
            Ground::XXXX => "(X^2)^2",
            Ground::XG => "XxG",
        }
    }

    pub fn parse(s: &str) -> Option<Ground> {
        Ground::ALL.into_iter().find(|g| g.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Explicit(Vec<BitSet>),
    Product(Box<PseudoClosedLattice>, Box<PseudoClosedLattice>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoClosedLattice {
    ground: Ground,
    size: usize,
    repr: Repr,
}

impl PseudoClosedLattice {
    /// All subsets.
    pub fn discrete(ground: Ground, size: usize) -> Self {
        let principal = (0..size).map(|i| BitSet::from_iter(size, [i])).collect();
        PseudoClosedLattice { ground, size, repr: Repr::Explicit(principal) }
    }

    /// Only `∅` and the ground set.
    pub fn trivial(ground: Ground, size: usize) -> Self {
        PseudoClosedLattice { ground, size, repr: Repr::Explicit(vec![BitSet::full(size); size]) }
    }

    /// The lattice generated by `sets` together with `∅` and the ground set.
    pub fn generated(ground: Ground, size: usize, sets: &[BitSet]) -> Self {
        let mut principal = vec![BitSet::full(size); size];
        for s in sets {
            for x in s.iter() {
                principal[x].intersect_with(s);
            }
        }
        PseudoClosedLattice { ground, size, repr: Repr::Explicit(principal) }
    }

    pub fn ground(&self) -> Ground {
        self.ground
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `a` lies in every pseudo-closed set containing `b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        match &self.repr {
            Repr::Explicit(p) => p[b].contains(a),
            Repr::Product(l, r) => {
                let m = r.size;
                l.le(a / m, b / m) && r.le(a % m, b % m)
            }
        }
    }

    /// Members of the least pseudo-closed set containing `x`.
    pub fn principal_members(&self, x: usize) -> Vec<usize> {
        match &self.repr {
            Repr::Explicit(p) => p[x].to_vec(),
            Repr::Product(l, r) => {
                let m = r.size;
                let right = r.principal_members(x % m);
                l.principal_members(x / m).into_iter().flat_map(|a| right.iter().map(move |&b| a * m + b)).collect()
            }
        }
    }

    pub fn principal(&self, x: usize) -> BitSet {
        BitSet::from_iter(self.size, self.principal_members(x))
    }

    pub fn contains(&self, set: &BitSet) -> bool {
        set.capacity() == self.size && set.iter().all(|x| self.principal_members(x).into_iter().all(|y| set.contains(y)))
    }

    /// Least pseudo-closed superset.
    pub fn closure(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.size);
        for x in set.iter() {
            for y in self.principal_members(x) {
                out.insert(y);
            }
        }
        out
    }

    /// Greatest pseudo-closed subset.
    pub fn interior(&self, set: &BitSet) -> BitSet {
        BitSet::from_iter(self.size, set.iter().filter(|&x| self.principal_members(x).into_iter().all(|y| set.contains(y))))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.size).all(|x| self.principal_members(x) == [x])
    }

    /// Every pseudo-closed set, in order of discovery from `∅`.
    pub fn sets(&self, caps: &Caps) -> Result<Vec<BitSet>, StructuredError> {
        let principal: Vec<BitSet> = (0..self.size).map(|x| self.principal(x)).collect();
        let empty = BitSet::new(self.size);
        let mut seen: HashSet<BitSet> = HashSet::from([empty.clone()]);
        let mut queue = VecDeque::from([empty]);
        let mut out = Vec::new();
        while let Some(s) = queue.pop_front() {
            for (x, p) in principal.iter().enumerate() {
                if s.contains(x) {
                    continue;
                }
                let next = s.union(p);
                if seen.insert(next.clone()) {
                    if seen.len() > caps.max_lattice_sets {
                        return Err(StructuredError::SizeCapExceeded { size: seen.len(), cap: caps.max_lattice_sets });
                    }
                    queue.push_back(next);
                }
            }
            out.push(s);
        }
        Ok(out)
    }
}

/// A validated lattice and the sets added by completion, if requested.
#[derive(Debug, Clone)]
pub struct LatticeBuild {
    pub lattice: PseudoClosedLattice,
    pub added: Vec<BitSet>,
}

pub fn make_lattice(
    ground: Ground,
    size: usize,
    sets: &[BitSet],
    auto_complete: bool,
    caps: &Caps,
) -> Result<LatticeBuild, StructuredError> {
    if let Some((index, s)) = sets.iter().enumerate().find(|(_, s)| s.capacity() != size) {
        return Err(StructuredError::NotALattice(LatticeDefect::WrongSize { index, len: s.capacity(), expected: size }));
    }
    let lattice = PseudoClosedLattice::generated(ground, size, sets);
    if auto_complete {
        let given: HashSet<&BitSet> = sets.iter().collect();
        let added = lattice.sets(caps)?.into_iter().filter(|s| !given.contains(s)).collect();
        return Ok(LatticeBuild { lattice, added });
    }
    let given: HashSet<&BitSet> = sets.iter().collect();
    if !given.contains(&BitSet::new(size)) {
        return Err(StructuredError::NotALattice(LatticeDefect::MissingEmpty));
    }
    if !given.contains(&BitSet::full(size)) {
        return Err(StructuredError::NotALattice(LatticeDefect::MissingGround));
    }
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            let pair = || (a.to_u32_vec(), b.to_u32_vec());
            if !given.contains(&a.union(b)) {
                let (a, b) = pair();
                return Err(StructuredError::NotALattice(LatticeDefect::MissingUnion { a, b }));
            }
            if !given.contains(&a.intersection(b)) {
                let (a, b) = pair();
                return Err(StructuredError::NotALattice(LatticeDefect::MissingIntersection { a, b }));
            }
        }
    }
    Ok(LatticeBuild { lattice, added: Vec::new() })
}

/// The lattice generated by all rectangles `A × B`.
pub fn product_lattice(
    a: &PseudoClosedLattice,
    b: &PseudoClosedLattice,
    ground: Ground,
    caps: &Caps,
) -> Result<PseudoClosedLattice, StructuredError> {
    if ground.factors() != Some((a.ground, b.ground)) {
        return Err(StructuredError::ShapeMismatch(format!(
            "{} is not {} x {}",
            ground.name(),
            a.ground.name(),
            b.ground.name()
        )));
    }
    let size = a.size * b.size;
    let cap = caps.max_points.saturating_mul(caps.max_points);
    if size > cap {
        return Err(StructuredError::SizeCapExceeded { size, cap });
    }
    Ok(PseudoClosedLattice { ground, size, repr: Repr::Product(Box::new(a.clone()), Box::new(b.clone())) })
}

/// A flow with one lattice per ground space.
#[derive(Debug, Clone)]
pub struct StructuredInstance {
    flow: Flow,
    lattices: Vec<PseudoClosedLattice>,
}

impl StructuredInstance {
    /// `lattices` in the order of [`Ground::ALL`].
    pub fn new(flow: Flow, lattices: Vec<PseudoClosedLattice>) -> Result<Self, StructuredError> {
        if lattices.len() != Ground::ALL.len() {
            return Err(StructuredError::ShapeMismatch(format!("expected 6 lattices, got {}", lattices.len())));
        }
        let (k, n) = (flow.group().order(), flow.points());
        for (l, g) in lattices.iter().zip(Ground::ALL) {
            if l.ground != g || l.size != g.size(k, n) {
                return Err(StructuredError::ShapeMismatch(format!(
                    "lattice for {} has ground {} of size {}",
                    g.name(),
                    l.ground.name(),
                    l.size
                )));
            }
        }
        Ok(StructuredInstance { flow, lattices })
    }

    /// Product lattices generated from the `G` and `X` lattices, with `X²` optionally overridden.
    pub fn with_defaults(
        flow: Flow,
        g: PseudoClosedLattice,
        x: PseudoClosedLattice,
        xx: Option<PseudoClosedLattice>,
        caps: &Caps,
    ) -> Result<Self, StructuredError> {
        let gx = product_lattice(&g, &x, Ground::GX, caps)?;
        let xg = product_lattice(&x, &g, Ground::XG, caps)?;
        let xx = match xx {
            Some(l) => l,
            None => product_lattice(&x, &x, Ground::XX, caps)?,
        };
        let xxxx = product_lattice(&xx, &xx, Ground::XXXX, caps)?;
        StructuredInstance::new(flow, vec![g, x, gx, xx, xxxx, xg])
    }

    /// Every lattice discrete.
    pub fn discrete(flow: Flow, caps: &Caps) -> Result<Self, StructuredError> {
        let (k, n) = (flow.group().order(), flow.points());
        let g = PseudoClosedLattice::discrete(Ground::G, k);
        let x = PseudoClosedLattice::discrete(Ground::X, n);
        StructuredInstance::with_defaults(flow, g, x, None, caps)
    }

    pub fn flow(&self) -> &Flow {
        &self.flow
    }

    pub fn lattice(&self, ground: Ground) -> &PseudoClosedLattice {
        &self.lattices[Ground::ALL.iter().position(|&g| g == ground).unwrap()]
    }

    pub fn lattices(&self) -> &[PseudoClosedLattice] {
        &self.lattices
    }
}

/// A failing axiom: the pseudo-closed set whose image, preimage or section escapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub ground: Ground,
    pub set: Vec<u32>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomResult {
    pub axiom: u8,
    pub name: &'static str,
    pub failure: Option<AxiomFailure>,
}

impl AxiomResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreeabilityReport {
    pub axioms: Vec<AxiomResult>,
}

impl AgreeabilityReport {
    pub fn is_agreeable(&self) -> bool {
        self.axioms.iter().all(AxiomResult::passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| !a.passed())
    }
}

pub const AXIOM_NAMES: [&str; 6] = [
    "sections of pseudo-closed sets",
    "products of pseudo-closed sets",
    "action map pseudo-continuous",
    "graph maps x -> (x, gx) pseudo-continuous",
    "projection restricted to E_G pseudo-closed",
    "map (x, g) -> (x, gx) pseudo-closed",
];

fn failure(l: &PseudoClosedLattice, at: usize, detail: String) -> Option<AxiomFailure> {
    Some(AxiomFailure { ground: l.ground, set: l.principal(at).to_u32_vec(), detail })
}

fn check_sections(inst: &StructuredInstance) -> Option<AxiomFailure> {
    for ground in [Ground::GX, Ground::XX, Ground::XXXX, Ground::XG] {
        let l = inst.lattice(ground);
        let (fa, fb) = ground.factors().unwrap();
        let (a, b) = (inst.lattice(fa), inst.lattice(fb));
        let m = b.size;
        for p in 0..l.size {
            let (y, z) = (p / m, p % m);
            if let Some(z2) = b.principal_members(z).into_iter().find(|&z2| !l.le(y * m + z2, p)) {
                return failure(l, p, format!("section at first coordinate {y} omits {z2}"));
            }
            if let Some(y2) = a.principal_members(y).into_iter().find(|&y2| !l.le(y2 * m + z, p)) {
                return failure(l, p, format!("section at second coordinate {z} omits {y2}"));
            }
        }
    }
    None
}

fn check_products(inst: &StructuredInstance) -> Option<AxiomFailure> {
    for ground in [Ground::GX, Ground::XX, Ground::XXXX, Ground::XG] {
        let l = inst.lattice(ground);
        let (fa, fb) = ground.factors().unwrap();
        let (a, b) = (inst.lattice(fa), inst.lattice(fb));
        let m = b.size;
        for p in 0..l.size {
            let (y, z) = (p / m, p % m);
            if let Repr::Product(pa, pb) = &l.repr {
                if **pa == *a && **pb == *b {
                    continue;
                }
            }
            if let Some(q) = l.principal_members(p).into_iter().find(|&q| !(a.le(q / m, y) && b.le(q % m, z))) {
                let rect: Vec<u32> = a
                    .principal_members(y)
                    .into_iter()
                    .flat_map(|u| b.principal_members(z).into_iter().map(move |v| (u * m + v) as u32))
                    .collect();
                return Some(AxiomFailure {
                    ground,
                    set: rect,
                    detail: format!("rectangle through {p} is not pseudo-closed: it would need {q}"),
                });
            }
        }
    }
    None
}

fn check_action(inst: &StructuredInstance) -> Option<AxiomFailure> {
    let (flow, gx, x) = (&inst.flow, inst.lattice(Ground::GX), inst.lattice(Ground::X));
    let n = flow.points();
    for p in 0..gx.size {
        let target = flow.act((p / n) as u32, (p % n) as u32) as usize;
        if let Some(q) = gx.principal_members(p).into_iter().find(|&q| !x.le(flow.act((q / n) as u32, (q % n) as u32) as usize, target)) {
            return failure(x, target, format!("preimage of this set contains {p} but not {q}"));
        }
    }
    None
}

fn check_graphs(inst: &StructuredInstance) -> Option<AxiomFailure> {
    let (flow, x, xx) = (&inst.flow, inst.lattice(Ground::X), inst.lattice(Ground::XX));
    let n = flow.points();
    for g in flow.group().elements() {
        for p in 0..n {
            let image = p * n + flow.act(g, p as u32) as usize;
            if let Some(q) = x.principal_members(p).into_iter().find(|&q| !xx.le(q * n + flow.act(g, q as u32) as usize, image)) {
                return failure(xx, image, format!("preimage under x -> (x, {g}x) contains {p} but not {q}"));
            }
        }
    }
    None
}

/// `E_G = {((x₁,x₂),(gx₁,gx₂))}` as indices into `(X²)²`.
pub fn simultaneous_translation(flow: &Flow) -> Vec<usize> {
    let n = flow.points();
    let n2 = n * n;
    let mut out = BTreeSet::new();
    for g in flow.group().elements() {
        for x1 in 0..n as u32 {
            for x2 in 0..n as u32 {
                let a = x1 as usize * n + x2 as usize;
                let b = flow.act(g, x1) as usize * n + flow.act(g, x2) as usize;
                out.insert(a * n2 + b);
            }
        }
    }
    out.into_iter().collect()
}

fn check_projection(inst: &StructuredInstance) -> Option<AxiomFailure> {
    let (xx, xxxx) = (inst.lattice(Ground::XX), inst.lattice(Ground::XXXX));
    let n2 = xx.size;
    let eg = simultaneous_translation(&inst.flow);
    for &p in &eg {
        let mut image = BitSet::new(n2);
        for &q in &eg {
            if xxxx.le(q, p) {
                image.insert(q / n2);
            }
        }
        if let Some(m) = xx.principal_members(p / n2).into_iter().find(|&m| !image.contains(m)) {
            let set: Vec<u32> = eg.iter().filter(|&&q| xxxx.le(q, p)).map(|&q| q as u32).collect();
            return Some(AxiomFailure {
                ground: Ground::XXXX,
                set,
                detail: format!("image of this relatively pseudo-closed set contains {} but not {m}", p / n2),
            });
        }
    }
    None
}

fn check_orbit_map(inst: &StructuredInstance) -> Option<AxiomFailure> {
    let (flow, xg, xx) = (&inst.flow, inst.lattice(Ground::XG), inst.lattice(Ground::XX));
    let (n, k) = (flow.points(), flow.group().order());
    let image_of = |q: usize| (q / k) * n + flow.act((q % k) as u32, (q / k) as u32) as usize;
    for p in 0..xg.size {
        let image = BitSet::from_iter(n * n, xg.principal_members(p).into_iter().map(image_of));
        if let Some(m) = xx.principal_members(image_of(p)).into_iter().find(|&m| !image.contains(m)) {
            return failure(xg, p, format!("image contains {} but not {m}", image_of(p)));
        }
    }
    None
}

/// Checks all six axioms exhaustively; each is reduced to the least pseudo-closed
/// set through each point, which decides it for every pseudo-closed set.
pub fn is_agreeable(inst: &StructuredInstance) -> AgreeabilityReport {
    let checks: [fn(&StructuredInstance) -> Option<AxiomFailure>; 6] =
        [check_sections, check_products, check_action, check_graphs, check_projection, check_orbit_map];
    let axioms = checks
        .iter()
        .enumerate()
        .map(|(i, f)| AxiomResult { axiom: i as u8 + 1, name: AXIOM_NAMES[i], failure: f(inst) })
        .collect();
    AgreeabilityReport { axioms }
}

fn require_agreeable(inst: &StructuredInstance) -> Result<(), StructuredError> {
    match is_agreeable(inst).first_failure() {
        None => Ok(()),
        Some(a) => Err(StructuredError::NotAgreeable {
            axiom: a.axiom,
            detail: a.failure.as_ref().map(|f| f.detail.clone()).unwrap_or_default(),
        }),
    }
}

fn require_invariant(inst: &StructuredInstance, e: &EquivRelation) -> Result<(), StructuredError> {
    if e.points() != inst.flow.points() {
        return Err(StructuredError::ShapeMismatch(format!("relation on {} points, flow on {}", e.points(), inst.flow.points())));
    }
    match invariance(&inst.flow, e)? {
        Invariance::Broken { g, x1, x2 } => Err(StructuredError::NotInvariant { g, x1, x2 }),
        Invariance::Invariant => Ok(()),
    }
}

fn classes_closed(inst: &StructuredInstance, e: &EquivRelation) -> bool {
    let x = inst.lattice(Ground::X);
    e.classes().iter().all(|c| x.contains(&BitSet::from_iter(e.points(), c.iter().map(|&y| y as usize))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbReport {
    pub kernel: Subgroup,
    /// `E` is pseudo-closed in `X²`.
    pub relation_closed: bool,
    pub classes_closed: bool,
    pub kernel_closed: bool,
    /// A pseudo-closed `H` with `E = E_H`.
    pub closed_subgroup: Option<Subgroup>,
}

impl OrbReport {
    pub fn conditions(&self) -> [bool; 4] {
        [self.relation_closed, self.classes_closed, self.kernel_closed, self.closed_subgroup.is_some()]
    }

    pub fn holds(&self) -> bool {
        let c = self.conditions();
        c.iter().all(|&b| b == c[0])
    }
}

/// Evaluates the four conditions for an orbital `E` on an agreeable instance.
pub fn verify_thm_orb(inst: &StructuredInstance, e: &EquivRelation, caps: &Caps) -> Result<OrbReport, StructuredError> {
    require_invariant(inst, e)?;
    require_agreeable(inst)?;
    let flow = &inst.flow;
    let verdict = is_orbital(flow, e)?;
    if !verdict.is_orbital() {
        return Err(StructuredError::NotOrbital);
    }
    let kernel = verdict.kernel().clone();
    let g = inst.lattice(Ground::G);
    let closed_subgroup = enumerate_subgroups(flow.group(), caps.max_enumeration_order)?
        .into_iter()
        .find(|h| g.contains(h.mask()) && orbit_relation(flow, h) == *e);
    Ok(OrbReport {
        relation_closed: inst.lattice(Ground::XX).contains(&e.pair_set()),
        classes_closed: classes_closed(inst, e),
        kernel_closed: g.contains(kernel.mask()),
        kernel,
        closed_subgroup,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorbReport {
    pub relation_closed: bool,
    pub classes_closed: bool,
    /// Some pseudo-closed `X̃` with `E = R_{H,X̃}`.
    pub closed_support: Option<WitnessPair>,
    /// Both `H` and `X̃` pseudo-closed.
    pub closed_pair: Option<WitnessPair>,
    pub maximal: Vec<WitnessPair>,
    /// Every maximal witness has both components pseudo-closed.
    pub maximal_closed: bool,
}

impl WorbReport {
    /// Classes pseudo-closed and `E` weakly orbital by pseudo-closed.
    pub fn condition_two(&self) -> bool {
        self.classes_closed && self.closed_support.is_some()
    }

    pub fn conditions(&self) -> [bool; 4] {
        [self.relation_closed, self.condition_two(), self.closed_pair.is_some(), self.maximal_closed]
    }

    pub fn holds(&self) -> bool {
        let c = self.conditions();
        c.iter().all(|&b| b == c[0])
    }
}

/// Evaluates the weakly orbital conditions without requiring agreeability.
///
/// For each `H`, a pseudo-closed support exists iff the greatest pseudo-closed
/// subset of `X̃′_H` is one, since `R_{H,·}` is monotone and supports lie in `X̃′_H`.
pub fn evaluate_worb(inst: &StructuredInstance, e: &EquivRelation, caps: &Caps) -> Result<WorbReport, StructuredError> {
    require_invariant(inst, e)?;
    let flow = &inst.flow;
    let (gl, xl) = (inst.lattice(Ground::G), inst.lattice(Ground::X));
    let subs = enumerate_subgroups(flow.group(), caps.max_enumeration_order)?;
    let mut closed_support = None;
    let mut closed_pair = None;
    let mut maximal: Vec<WitnessPair> = Vec::new();
    for h in &subs {
        let support = maximal_support(flow, e, h);
        let full = WitnessPair { subgroup: h.clone(), support: support.clone() };
        if !witnesses(flow, e, &full) {
            continue;
        }
        let m = maximal_witnesses(flow, e, &full)?;
        if !maximal.contains(&m) {
            maximal.push(m);
        }
        let w = WitnessPair { subgroup: h.clone(), support: xl.interior(&support) };
        if witnesses(flow, e, &w) {
            if closed_support.is_none() {
                closed_support = Some(w.clone());
            }
            if closed_pair.is_none() && gl.contains(h.mask()) {
                closed_pair = Some(w);
            }
        }
    }
    if maximal.is_empty() {
        return Err(StructuredError::NotWeaklyOrbital);
    }
    let maximal_closed = maximal.iter().all(|w| gl.contains(w.subgroup.mask()) && xl.contains(&w.support));
    Ok(WorbReport {
        relation_closed: inst.lattice(Ground::XX).contains(&e.pair_set()),
        classes_closed: classes_closed(inst, e),
        closed_support,
        closed_pair,
        maximal,
        maximal_closed,
    })
}

pub fn verify_thm_worb(inst: &StructuredInstance, e: &EquivRelation, caps: &Caps) -> Result<WorbReport, StructuredError> {
    require_invariant(inst, e)?;
    require_agreeable(inst)?;
    evaluate_worb(inst, e, caps)
}

/// A failure of the closedness lemma for stabilisers of classes and fix sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaFailure {
    ClassStabilizer { point: u32 },
    FixSet { element: u32 },
}

/// `Stab_G{[x]_E}` is pseudo-closed when `[x]_E` is, and `{x : x E hx}` is
/// pseudo-closed when `E` is.
pub fn check_closure_lemma(inst: &StructuredInstance, e: &EquivRelation) -> Result<Vec<LemmaFailure>, StructuredError> {
    require_invariant(inst, e)?;
    let flow = &inst.flow;
    let (gl, xl) = (inst.lattice(Ground::G), inst.lattice(Ground::X));
    let mut out = Vec::new();
    for x in 0..flow.points() as u32 {
        if xl.contains(&e.class_mask(x)) && !gl.contains(&class_stabilizer(flow, e, x)) {
            out.push(LemmaFailure::ClassStabilizer { point: x });
        }
    }
    if inst.lattice(Ground::XX).contains(&e.pair_set()) {
        for h in flow.group().elements() {
            if !xl.contains(&fix_set(flow, e, h)) {
                out.push(LemmaFailure::FixSet { element: h });
            }
        }
    }
    Ok(out)
}

/// `H_E` for an invariant relation.
pub fn relation_kernel(inst: &StructuredInstance, e: &EquivRelation) -> Result<Subgroup, StructuredError> {
    Ok(kernel_group(&inst.flow, e)?)
}

#[cfg(test)]
mod tests;
