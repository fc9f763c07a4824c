//! Finite flows and ambits, their products and unions, morphisms, towers and
//! the independent-translates search.
//!
//! A flow is a finite group acting on `0..points`, optionally together with extra
//! non-invertible maps ("transformations"). The transformations stand in for limit
//! points of the enveloping semigroup, which a finite group action cannot produce on
//! its own. A purely transformation-generated flow uses the trivial group.

use std::sync::Arc;

use crate::algebra::{compose, FiniteGroup, Subgroup};
use crate::bitset::BitSet;
use crate::caps::Caps;
use crate::ellis::{self, EllisError, EllisSemigroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("not an action: a(g·h)(x) != a(g)(a(h)(x)) for g={g}, h={h}, x={x}")]
    NotAnAction { g: u32, h: u32, x: u32 },
    #[error("element {g} does not act bijectively")]
    NotBijective { g: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("group has no natural permutation action")]
    NoNaturalAction,
    #[error("transformation {index} is not a map on 0..{points}")]
    BadTransformation { index: usize, points: usize },
    #[error("orbit of the basepoint misses points {unreached:?}")]
    OrbitNotDense { unreached: Vec<u32> },
    #[error("basepoint {basepoint} out of range for {points} points")]
    BasepointOutOfRange { basepoint: u32, points: usize },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    SizeCapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("flows do not share one acting group")]
    GroupMismatch,
    #[error("flows carry different numbers of transformations")]
    TransformationMismatch,
    #[error("tower is incompatible at level {level}: {reason}")]
    IncompatibleTower { level: usize, reason: String },
    #[error("subset must be nonempty and proper")]
    DegenerateSubset,
    #[error(transparent)]
    Ellis(#[from] EllisError),
}

/// How a group acts on the points of a flow.
#[derive(Debug, Clone)]
pub enum ActionSpec {
    /// The group's own permutation representation.
    Natural,
    /// Left translation on the group itself.
    Regular,
    /// Every element acts as the identity.
    Trivial,
    /// One map per group element, in element order.
    ElementMaps(Vec<Vec<u32>>),
    /// One map per entry of `group.generators()`, extended along the Cayley graph.
    GeneratorImages(Vec<Vec<u32>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    group: Arc<FiniteGroup>,
    points: usize,
    action: Vec<u32>,
    transformations: Vec<Vec<u32>>,
}

pub fn make_flow(
    group: Arc<FiniteGroup>,
    points: usize,
    action: ActionSpec,
    transformations: Vec<Vec<u32>>,
) -> Result<Flow, FlowError> {
    let n = group.order();
    let action = match action {
        ActionSpec::Natural => {
            let nat = group.natural_action().ok_or(FlowError::NoNaturalAction)?;
            if nat.degree != points {
                return Err(FlowError::ShapeMismatch(format!(
                    "natural action has degree {}, flow has {points} points",
                    nat.degree
                )));
            }
            nat.images.clone()
        }
        ActionSpec::Regular => {
            if points != n {
                return Err(FlowError::ShapeMismatch(format!("regular action needs {n} points")));
            }
            (0..n as u32).flat_map(|g| (0..n as u32).map(move |x| (g, x))).map(|(g, x)| group.mul(g, x)).collect()
        }
        ActionSpec::Trivial => (0..n).flat_map(|_| 0..points as u32).collect(),
        ActionSpec::ElementMaps(maps) => {
            if maps.len() != n {
                return Err(FlowError::ShapeMismatch(format!("{} element maps for a group of order {n}", maps.len())));
            }
            check_maps(&maps, points)?;
            maps.concat()
        }
        ActionSpec::GeneratorImages(images) => extend_generator_images(&group, points, &images)?,
    };
    for (i, t) in transformations.iter().enumerate() {
        if t.len() != points || t.iter().any(|&y| y as usize >= points) {
            return Err(FlowError::BadTransformation { index: i, points });
        }
    }
    let flow = Flow { group, points, action, transformations };
    flow.validate_action()?;
    Ok(flow)
}

fn check_maps(maps: &[Vec<u32>], points: usize) -> Result<(), FlowError> {
    for (g, m) in maps.iter().enumerate() {
        if m.len() != points || m.iter().any(|&y| y as usize >= points) {
            return Err(FlowError::ShapeMismatch(format!("map for element {g} is not a map on 0..{points}")));
        }
    }
    Ok(())
}

fn extend_generator_images(group: &FiniteGroup, points: usize, images: &[Vec<u32>]) -> Result<Vec<u32>, FlowError> {
    let gens = group.generators();
    if images.len() != gens.len() {
        return Err(FlowError::ShapeMismatch(format!(
            "{} generator images for {} generators",
            images.len(),
            gens.len()
        )));
    }
    check_maps(images, points)?;
    let n = group.order();
    let mut maps: Vec<Option<Vec<u32>>> = vec![None; n];
    maps[group.identity() as usize] = Some((0..points as u32).collect());
    let mut queue = vec![group.identity()];
    let mut head = 0;
    while head < queue.len() {
        let g = queue[head];
        head += 1;
        for (&s, img) in gens.iter().zip(images) {
            let gs = group.mul(g, s);
            let m = compose(maps[g as usize].as_ref().expect("visited"), img);
            match &maps[gs as usize] {
                None => {
                    maps[gs as usize] = Some(m);
                    queue.push(gs);
                }
                Some(prev) => {
                    if let Some(x) = (0..points).find(|&x| prev[x] != m[x]) {
                        return Err(FlowError::NotAnAction { g, h: s, x: x as u32 });
                    }
                }
            }
        }
    }
    Ok(maps.into_iter().map(|m| m.expect("generators generate")).flatten().collect())
}

impl Flow {
    /// Checks bijectivity, `a(e) = id` and `a(g·s) = a(g)∘a(s)` for all `g` and
    /// generators `s`, which together give a homomorphism into the bijections.
    fn validate_action(&self) -> Result<(), FlowError> {
        let g = &self.group;
        for e in g.elements() {
            let m = self.element_map(e);
            let mut seen = BitSet::new(self.points);
            if !m.iter().all(|&y| seen.insert(y as usize)) {
                return Err(FlowError::NotBijective { g: e });
            }
        }
        let id = g.identity();
        if let Some(x) = (0..self.points).find(|&x| self.act(id, x as u32) != x as u32) {
            return Err(FlowError::NotAnAction { g: id, h: id, x: x as u32 });
        }
        for a in g.elements() {
            for &s in g.generators() {
                let as_ = g.mul(a, s);
                for x in 0..self.points as u32 {
                    if self.act(as_, x) != self.act(a, self.act(s, x)) {
                        return Err(FlowError::NotAnAction { g: a, h: s, x });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn natural(group: Arc<FiniteGroup>) -> Result<Flow, FlowError> {
        let degree = group.natural_action().ok_or(FlowError::NoNaturalAction)?.degree;
        make_flow(group, degree, ActionSpec::Natural, Vec::new())
    }

    pub fn regular(group: Arc<FiniteGroup>) -> Flow {
        let n = group.order();
        make_flow(group, n, ActionSpec::Regular, Vec::new()).expect("left translation is an action")
    }

    /// Left multiplication on the left cosets of `h`, ordered by smallest element.
    pub fn coset_action(group: Arc<FiniteGroup>, h: &Subgroup) -> Flow {
        let n = group.order();
        let mut coset_of = vec![u32::MAX; n];
        let mut count = 0u32;
        for a in group.elements() {
            if coset_of[a as usize] == u32::MAX {
                for x in h.left_coset(&group, a).iter() {
                    coset_of[x] = count;
                }
                count += 1;
            }
        }
        let mut reps = vec![0u32; count as usize];
        for a in group.elements().rev() {
            reps[coset_of[a as usize] as usize] = a;
        }
        let maps: Vec<Vec<u32>> = group
            .elements()
            .map(|g| reps.iter().map(|&r| coset_of[group.mul(g, r) as usize]).collect())
            .collect();
        make_flow(group, count as usize, ActionSpec::ElementMaps(maps), Vec::new()).expect("coset action")
    }

    /// Transformations acting on `degree` points with the trivial group.
    pub fn from_transformations(degree: usize, maps: Vec<Vec<u32>>) -> Result<Flow, FlowError> {
        make_flow(Arc::new(FiniteGroup::trivial()), degree, ActionSpec::Trivial, maps)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn act(&self, g: u32, x: u32) -> u32 {
        self.action[g as usize * self.points + x as usize]
    }

    pub fn element_map(&self, g: u32) -> &[u32] {
        let p = self.points;
        &self.action[g as usize * p..(g as usize + 1) * p]
    }

    pub fn element_maps(&self) -> Vec<Vec<u32>> {
        self.group.elements().map(|g| self.element_map(g).to_vec()).collect()
    }

    pub fn transformations(&self) -> &[Vec<u32>] {
        &self.transformations
    }

    pub fn has_transformations(&self) -> bool {
        !self.transformations.is_empty()
    }

    /// Maps of the group generators followed by the transformations.
    pub fn generator_maps(&self) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = self.group.generators().iter().map(|&g| self.element_map(g).to_vec()).collect();
        v.extend(self.transformations.iter().cloned());
        v
    }

    /// Points reachable from `x` under the monoid generated by all maps.
    pub fn reachable(&self, x: u32) -> BitSet {
        let gens = self.generator_maps();
        let mut seen = BitSet::new(self.points);
        seen.insert(x as usize);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for m in &gens {
                let z = m[y as usize];
                if seen.insert(z as usize) {
                    stack.push(z);
                }
            }
        }
        seen
    }

    /// Orbits of the group action, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = BitSet::new(self.points);
        let mut out = Vec::new();
        for x in 0..self.points as u32 {
            if seen.contains(x as usize) {
                continue;
            }
            let mut orbit: Vec<u32> = self.group.elements().map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen.insert(y as usize);
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.points as u32).all(|x| self.reachable(x).is_full())
    }

    /// A pair `(g, x)` with `g ≠ e` and `g x = x`, if the action is not free.
    pub fn freeness_witness(&self) -> Option<(u32, u32)> {
        let e = self.group.identity();
        self.group
            .elements()
            .filter(|&g| g != e)
            .find_map(|g| (0..self.points as u32).find(|&x| self.act(g, x) == x).map(|x| (g, x)))
    }

    pub fn stabilizer(&self, x: u32) -> Subgroup {
        let g = &self.group;
        Subgroup::from_mask_unchecked(BitSet::from_iter(
            g.order(),
            g.elements().filter(|&a| self.act(a, x) == x).map(|a| a as usize),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambit {
    flow: Flow,
    basepoint: u32,
}

pub fn make_ambit(flow: Flow, basepoint: u32) -> Result<Ambit, FlowError> {
    if basepoint as usize >= flow.points() {
        return Err(FlowError::BasepointOutOfRange { basepoint, points: flow.points() });
    }
    let reached = flow.reachable(basepoint);
    if !reached.is_full() {
        let unreached = reached.complement().to_u32_vec();
        return Err(FlowError::OrbitNotDense { unreached });
    }
    Ok(Ambit { flow, basepoint })
}

impl Ambit {
    pub fn flow(&self) -> &Flow {
        &self.flow
    }

    pub fn basepoint(&self) -> u32 {
        self.basepoint
    }

    pub fn points(&self) -> usize {
        self.flow.points()
    }

    pub fn regular(group: Arc<FiniteGroup>) -> Ambit {
        let e = group.identity();
        make_ambit(Flow::regular(group), e).expect("regular ambit")
    }
}

/// Coordinatewise product; points and group elements indexed row-major.
/// Transformations become `(t, id)` for the left factor, then `(id, t')`.
pub fn product_flow(flows: &[Flow], caps: &Caps) -> Result<Flow, FlowError> {
    let (first, rest) = flows.split_first().ok_or_else(|| FlowError::ShapeMismatch("empty product".into()))?;
    let mut acc = first.clone();
    for f in rest {
        acc = product_pair(&acc, f, caps)?;
    }
    Ok(acc)
}

fn product_pair(a: &Flow, b: &Flow, caps: &Caps) -> Result<Flow, FlowError> {
    let order = a.group.order() * b.group.order();
    if order > caps.max_group_order {
        return Err(FlowError::SizeCapExceeded { what: "product group", size: order, cap: caps.max_group_order });
    }
    let points = a.points * b.points;
    if points > caps.max_points {
        return Err(FlowError::SizeCapExceeded { what: "product point set", size: points, cap: caps.max_points });
    }
    let group = Arc::new(a.group.direct_product(&b.group));
    let m = b.group.order();
    let nb = b.points;
    let maps: Vec<Vec<u32>> = (0..order)
        .map(|g| {
            let (g1, g2) = ((g / m) as u32, (g % m) as u32);
            (0..points)
                .map(|x| {
                    let (x1, x2) = ((x / nb) as u32, (x % nb) as u32);
                    a.act(g1, x1) * nb as u32 + b.act(g2, x2)
                })
                .collect()
        })
        .collect();
    let mut ts = Vec::new();
    for t in &a.transformations {
        ts.push((0..points).map(|x| t[x / nb] * nb as u32 + (x % nb) as u32).collect());
    }
    for t in &b.transformations {
        ts.push((0..points).map(|x| (x / nb * nb) as u32 + t[x % nb]).collect());
    }
    make_flow(group, points, ActionSpec::ElementMaps(maps), ts)
}

/// Tagged union; block `i` occupies indices offset by the sizes of earlier blocks.
/// Transformations are paired by index across blocks.
pub fn disjoint_union_flow(flows: &[Flow]) -> Result<Flow, FlowError> {
    let (first, rest) = flows.split_first().ok_or_else(|| FlowError::ShapeMismatch("empty union".into()))?;
    if rest.iter().any(|f| !f.group.same_table(&first.group)) {
        return Err(FlowError::GroupMismatch);
    }
    let nt = first.transformations.len();
    if rest.iter().any(|f| f.transformations.len() != nt) {
        return Err(FlowError::TransformationMismatch);
    }
    let offsets: Vec<u32> = flows
        .iter()
        .scan(0u32, |acc, f| {
            let o = *acc;
            *acc += f.points as u32;
            Some(o)
        })
        .collect();
    let points: usize = flows.iter().map(|f| f.points).sum();
    let maps: Vec<Vec<u32>> = first
        .group
        .elements()
        .map(|g| {
            flows.iter().zip(&offsets).flat_map(|(f, &o)| f.element_map(g).iter().map(move |&y| y + o)).collect()
        })
        .collect();
    let ts: Vec<Vec<u32>> = (0..nt)
        .map(|i| {
            flows.iter().zip(&offsets).flat_map(|(f, &o)| f.transformations[i].iter().map(move |&y| y + o)).collect()
        })
        .collect();
    make_flow(first.group.clone(), points, ActionSpec::ElementMaps(maps), ts)
}

/// An ambit morphism with an explicit correspondence of acting generators.
#[derive(Debug, Clone)]
pub struct FlowMorphism {
    pub source: Ambit,
    pub target: Ambit,
    pub point_map: Vec<u32>,
    /// Image of each source group element in the target group.
    pub group_map: Vec<u32>,
    /// For each source transformation: the target transformation it corresponds to,
    /// or `None` when it should act as the identity on the target.
    pub transformation_map: Vec<Option<usize>>,
}

impl FlowMorphism {
    pub fn identity(ambit: &Ambit) -> FlowMorphism {
        let f = ambit.flow();
        FlowMorphism {
            source: ambit.clone(),
            target: ambit.clone(),
            point_map: (0..f.points() as u32).collect(),
            group_map: f.group().elements().collect(),
            transformation_map: (0..f.transformations().len()).map(Some).collect(),
        }
    }

    /// Same acting group on both sides, elements corresponding to themselves.
    pub fn same_group(source: &Ambit, target: &Ambit, point_map: Vec<u32>) -> FlowMorphism {
        FlowMorphism {
            source: source.clone(),
            target: target.clone(),
            point_map,
            group_map: source.flow().group().elements().collect(),
            transformation_map: (0..source.flow().transformations().len()).map(Some).collect(),
        }
    }

    /// Projection of a binary product ambit onto factor `which` (0 or 1).
    /// `product` must come from `product_flow(&[left, right])`.
    pub fn projection(product: &Ambit, left: &Ambit, right: &Ambit, which: usize) -> FlowMorphism {
        let nb = right.points() as u32;
        let m = right.flow().group().order() as u32;
        let nl = left.flow().transformations().len();
        let nr = right.flow().transformations().len();
        let (target, point_map, group_map, transformation_map) = if which == 0 {
            (
                left,
                (0..product.points() as u32).map(|x| x / nb).collect::<Vec<_>>(),
                product.flow().group().elements().map(|g| g / m).collect::<Vec<_>>(),
                (0..nl).map(Some).chain((0..nr).map(|_| None)).collect::<Vec<_>>(),
            )
        } else {
            (
                right,
                (0..product.points() as u32).map(|x| x % nb).collect(),
                product.flow().group().elements().map(|g| g % m).collect(),
                (0..nl).map(|_| None).chain((0..nr).map(Some)).collect(),
            )
        };
        FlowMorphism { source: product.clone(), target: target.clone(), point_map, group_map, transformation_map }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismVerdict {
    Valid,
    ShapeMismatch(String),
    NotSurjective { point: u32 },
    BasepointMismatch { image: u32, expected: u32 },
    GroupMapNotHomomorphism { g: u32, h: u32 },
    GroupMapNotSurjective { element: u32 },
    TransformationNotCovered { index: usize },
    /// `φ(g·x) ≠ ρ(g)·φ(x)` for group element `g`.
    NotEquivariant { g: u32, x: u32 },
    /// Same failure for source transformation `index`.
    TransformationNotEquivariant { index: usize, x: u32 },
}

impl MorphismVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, MorphismVerdict::Valid)
    }
}

pub fn check_morphism(m: &FlowMorphism) -> MorphismVerdict {
    let (sf, tf) = (m.source.flow(), m.target.flow());
    let (sg, tg) = (sf.group(), tf.group());
    if m.point_map.len() != sf.points() || m.point_map.iter().any(|&y| y as usize >= tf.points()) {
        return MorphismVerdict::ShapeMismatch("point map".into());
    }
    if m.group_map.len() != sg.order() || m.group_map.iter().any(|&y| y as usize >= tg.order()) {
        return MorphismVerdict::ShapeMismatch("group map".into());
    }
    if m.transformation_map.len() != sf.transformations().len()
        || m.transformation_map.iter().flatten().any(|&j| j >= tf.transformations().len())
    {
        return MorphismVerdict::ShapeMismatch("transformation map".into());
    }
    let hit = BitSet::from_iter(tf.points(), m.point_map.iter().map(|&y| y as usize));
    if let Some(point) = hit.complement().first() {
        return MorphismVerdict::NotSurjective { point: point as u32 };
    }
    let image = m.point_map[m.source.basepoint() as usize];
    if image != m.target.basepoint() {
        return MorphismVerdict::BasepointMismatch { image, expected: m.target.basepoint() };
    }
    for g in sg.elements() {
        for h in sg.elements() {
            let lhs = m.group_map[sg.mul(g, h) as usize];
            if lhs != tg.mul(m.group_map[g as usize], m.group_map[h as usize]) {
                return MorphismVerdict::GroupMapNotHomomorphism { g, h };
            }
        }
    }
    let ghit = BitSet::from_iter(tg.order(), m.group_map.iter().map(|&y| y as usize));
    if let Some(e) = ghit.complement().first() {
        return MorphismVerdict::GroupMapNotSurjective { element: e as u32 };
    }
    let thit = BitSet::from_iter(tf.transformations().len(), m.transformation_map.iter().flatten().copied());
    if let Some(index) = thit.complement().first() {
        return MorphismVerdict::TransformationNotCovered { index };
    }
    for g in sg.elements() {
        let rg = m.group_map[g as usize];
        for x in 0..sf.points() as u32 {
            if m.point_map[sf.act(g, x) as usize] != tf.act(rg, m.point_map[x as usize]) {
                return MorphismVerdict::NotEquivariant { g, x };
            }
        }
    }
    for (index, (t, corr)) in sf.transformations().iter().zip(&m.transformation_map).enumerate() {
        for x in 0..sf.points() {
            let px = m.point_map[x];
            let want = match corr {
                Some(j) => tf.transformations()[*j][px as usize],
                None => px,
            };
            if m.point_map[t[x] as usize] != want {
                return MorphismVerdict::TransformationNotEquivariant { index, x: x as u32 };
            }
        }
    }
    MorphismVerdict::Valid
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    pub points: usize,
    pub semigroup_size: usize,
    pub minimal_ideals: usize,
    pub idempotents: usize,
    pub ideal_group_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub levels: Vec<TowerLevel>,
    /// `ideal_images[i][k]`: index of the minimal ideal at level `i` that receives
    /// minimal ideal `k` of level `i + 1`.
    pub ideal_images: Vec<Vec<usize>>,
    /// A coherent chain of idempotents, one per level (element indices), obtained by
    /// pushing the first idempotent of the top level down the tower.
    pub idempotent_chain: Vec<u32>,
}

/// `connecting[i]` maps level `i + 1` onto level `i`.
pub fn check_tower(levels: &[Ambit], connecting: &[FlowMorphism], caps: &Caps) -> Result<TowerReport, FlowError> {
    if levels.is_empty() {
        return Err(FlowError::IncompatibleTower { level: 0, reason: "no levels".into() });
    }
    if connecting.len() + 1 != levels.len() {
        return Err(FlowError::IncompatibleTower {
            level: connecting.len().min(levels.len()),
            reason: format!("{} levels need {} connecting maps", levels.len(), levels.len() - 1),
        });
    }
    for (i, m) in connecting.iter().enumerate() {
        if m.source != levels[i + 1] || m.target != levels[i] {
            return Err(FlowError::IncompatibleTower { level: i, reason: "endpoints differ from the levels".into() });
        }
        let v = check_morphism(m);
        if !v.is_valid() {
            return Err(FlowError::IncompatibleTower { level: i, reason: format!("{v:?}") });
        }
    }
    let semis: Vec<EllisSemigroup> =
        levels.iter().map(|a| ellis::enveloping_semigroup(a.flow(), caps)).collect::<Result<_, _>>()?;
    let ideals: Vec<Vec<ellis::MinimalIdeal>> = semis.iter().map(ellis::minimal_left_ideals).collect();
    let mut report_levels = Vec::new();
    for (s, ids) in semis.iter().zip(&ideals) {
        let first = &ids[0];
        let u = first.idempotents()[0];
        let grp = ellis::ideal_group(s, first, u)?;
        report_levels.push(TowerLevel {
            points: s.points(),
            semigroup_size: s.len(),
            minimal_ideals: ids.len(),
            idempotents: ids.iter().map(|m| m.idempotents().len()).sum(),
            ideal_group_order: grp.order(),
        });
    }
    let mut maps = Vec::new();
    let mut ideal_images = Vec::new();
    for (i, m) in connecting.iter().enumerate() {
        let epi = ellis::induced_epimorphism(m, &semis[i + 1], &semis[i])
            .map_err(|e| FlowError::IncompatibleTower { level: i, reason: e.to_string() })?;
        ideal_images.push(epi.ideal_images.clone());
        maps.push(epi);
    }
    // push an idempotent down and check the composite of induced maps matches the
    // map induced by the composite point map
    let top = levels.len() - 1;
    let mut chain = vec![0u32; levels.len()];
    chain[top] = ideals[top][0].idempotents()[0];
    for i in (0..top).rev() {
        let e = maps[i].map[chain[i + 1] as usize];
        if !semis[i].is_idempotent(e) || !ideals[i].iter().any(|m| m.contains(e)) {
            return Err(FlowError::IncompatibleTower { level: i, reason: "idempotent image left the minimal ideals".into() });
        }
        chain[i] = e;
    }
    for i in 0..top.saturating_sub(1) {
        let point_map: Vec<u32> =
            connecting[i + 1].point_map.iter().map(|&y| connecting[i].point_map[y as usize]).collect();
        for f in 0..semis[i + 2].len() as u32 {
            let direct = ellis::push_forward(&semis[i + 2], &semis[i], &point_map, f)
                .map_err(|e| FlowError::IncompatibleTower { level: i, reason: e.to_string() })?;
            let stepwise = maps[i].map[maps[i + 1].map[f as usize] as usize];
            if direct != stepwise {
                return Err(FlowError::IncompatibleTower { level: i, reason: format!("composite mismatch at {f}") });
            }
        }
    }
    Ok(TowerReport { levels: report_levels, ideal_images, idempotent_chain: chain })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceOutcome {
    /// Group elements, increasing, whose translates form an independent family.
    Witness(Vec<u32>),
    /// No family exists; `checked` counts the candidate families visited.
    Exhausted { distinct_translates: usize, checked: u64 },
}

/// True iff every one of the `2^k` Boolean cells of `sets` is inhabited.
pub fn is_independent_family(points: usize, sets: &[BitSet]) -> bool {
    let k = sets.len();
    if k >= usize::BITS as usize - 1 || (1usize << k) > points {
        return false;
    }
    let mut hit = BitSet::new(1 << k);
    for x in 0..points {
        let sig = sets.iter().enumerate().fold(0usize, |acc, (i, s)| acc | (s.contains(x) as usize) << i);
        hit.insert(sig);
    }
    hit.is_full()
}

/// Searches translates `g U` lexicographically by element index for an independent family of size `k`.
pub fn independent_translates(flow: &Flow, u: &BitSet, k: usize, caps: &Caps) -> Result<IndependenceOutcome, FlowError> {
    if k > caps.max_independence {
        return Err(FlowError::SizeCapExceeded { what: "independence family", size: k, cap: caps.max_independence });
    }
    if u.capacity() != flow.points() || u.is_empty() || u.is_full() {
        return Err(FlowError::DegenerateSubset);
    }
    let mut reps: Vec<(u32, BitSet)> = Vec::new();
    for g in flow.group().elements() {
        let t = BitSet::from_iter(flow.points(), u.iter().map(|x| flow.act(g, x as u32) as usize));
        if !reps.iter().any(|(_, s)| *s == t) {
            reps.push((g, t));
        }
    }
    let mut chosen = Vec::new();
    let mut checked = 0u64;
    let cells = vec![BitSet::full(flow.points())];
    if search_independent(&reps, k, 0, &cells, &mut chosen, &mut checked) {
        return Ok(IndependenceOutcome::Witness(chosen.iter().map(|&i| reps[i].0).collect()));
    }
    Ok(IndependenceOutcome::Exhausted { distinct_translates: reps.len(), checked })
}

fn search_independent(
    reps: &[(u32, BitSet)],
    k: usize,
    start: usize,
    cells: &[BitSet],
    chosen: &mut Vec<usize>,
    checked: &mut u64,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    for i in start..reps.len() {
        *checked += 1;
        let s = &reps[i].1;
        let mut next = Vec::with_capacity(cells.len() * 2);
        let mut ok = true;
        for c in cells {
            let inside = c.intersection(s);
            let mut outside = c.clone();
            outside.difference_with(s);
            if inside.is_empty() || outside.is_empty() {
                ok = false;
                break;
            }
            next.push(inside);
            next.push(outside);
        }
        if !ok {
            continue;
        }
        chosen.push(i);
        if search_independent(reps, k, i + 1, &next, chosen, checked) {
            return true;
        }
        chosen.pop();
    }
    false
}
