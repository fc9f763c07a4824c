//! Enveloping semigroups of finite flows and their minimal-ideal structure.
//!
//! In a finite discrete space a net of maps converges only by being eventually
//! constant, so `a∘B` evaluates to `a·B`, the τ-topology on an ideal group is
//! discrete and `H(uM) = {u}`. The functions below still evaluate the defining
//! formulas literally; the degeneracy is checked, not assumed.

use std::collections::HashMap;

use crate::algebra::{FiniteGroup, Subgroup};
use crate::bitset::BitSet;
use crate::caps::Caps;
use crate::flows::{Flow, FlowMorphism};

/// Multiplication tables are cached up to this many elements.
const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllisError {
    #[error("closure exceeded the cap {cap} after {partial} elements")]
    ClosureCapExceeded { partial: usize, cap: usize },
    #[error("element {element} is not idempotent")]
    NotIdempotent { element: u32 },
    #[error("element {element} is not in the minimal ideal")]
    NotInIdeal { element: u32 },
    #[error("s -> vsv fails to be an isomorphism at ({a}, {b})")]
    IsomorphismViolated { a: u32, b: u32 },
    #[error("induced map not well defined: element {f} separates {z1} and {z2} with equal images")]
    NotWellDefined { f: u32, z1: u32, z2: u32 },
    #[error("induced image of element {f} is not in the target semigroup")]
    NotInTarget { f: u32 },
    #[error("induced map misses target element {element}")]
    NotSurjective { element: u32 },
    #[error("structural fact violated: {0}")]
    FactViolated(String),
}

#[derive(Debug, Clone)]
pub struct EllisSemigroup {
    points: usize,
    maps: Vec<u32>,
    index: HashMap<Box<[u32]>, u32>,
    generators: Vec<u32>,
    identity: u32,
    table: Option<Vec<u32>>,
}

/// Breadth-first closure of the flow's generator maps under composition,
/// starting from the identity map.
pub fn enveloping_semigroup(flow: &Flow, caps: &Caps) -> Result<EllisSemigroup, EllisError> {
    from_generator_maps(flow.points(), &flow.generator_maps(), caps.max_semigroup)
}

pub fn from_generator_maps(points: usize, gens: &[Vec<u32>], cap: usize) -> Result<EllisSemigroup, EllisError> {
    let id: Vec<u32> = (0..points as u32).collect();
    let mut index: HashMap<Box<[u32]>, u32> = HashMap::new();
    let mut maps: Vec<u32> = id.clone();
    index.insert(id.into_boxed_slice(), 0);
    let mut head = 0usize;
    let mut scratch = vec![0u32; points];
    while head * points < maps.len() {
        for s in gens {
            for x in 0..points {
                scratch[x] = s[maps[head * points + x] as usize];
            }
            if !index.contains_key(scratch.as_slice()) {
                let k = maps.len() / points;
                if k >= cap {
                    return Err(EllisError::ClosureCapExceeded { partial: k, cap });
                }
                index.insert(scratch.clone().into_boxed_slice(), k as u32);
                maps.extend_from_slice(&scratch);
            }
        }
        head += 1;
    }
    let generators = gens.iter().map(|s| index[s.as_slice()]).collect();
    let mut s = EllisSemigroup { points, maps, index, generators, identity: 0, table: None };
    if points == 0 {
        return Ok(s);
    }
    let n = s.len();
    if n <= TABLE_LIMIT {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                table.push(s.mul_slow(a, b));
            }
        }
        s.table = Some(table);
    }
    Ok(s)
}

impl EllisSemigroup {
    pub fn len(&self) -> usize {
        if self.points == 0 {
            1
        } else {
            self.maps.len() / self.points
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn map(&self, f: u32) -> &[u32] {
        let p = self.points;
        &self.maps[f as usize * p..(f as usize + 1) * p]
    }

    #[inline]
    pub fn apply(&self, f: u32, x: u32) -> u32 {
        self.maps[f as usize * self.points + x as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    /// Element indices of the generator maps, in flow order.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn lookup(&self, map: &[u32]) -> Option<u32> {
        self.index.get(map).copied()
    }

    fn mul_slow(&self, f: u32, g: u32) -> u32 {
        let m: Vec<u32> = (0..self.points as u32).map(|x| self.apply(f, self.apply(g, x))).collect();
        self.index[m.as_slice()]
    }

    /// `f·g`, the map `x ↦ f(g(x))`.
    #[inline]
    pub fn mul(&self, f: u32, g: u32) -> u32 {
        match &self.table {
            Some(t) => t[f as usize * self.len() + g as usize],
            None => self.mul_slow(f, g),
        }
    }

    pub fn is_idempotent(&self, f: u32) -> bool {
        self.mul(f, f) == f
    }

    pub fn is_bijective(&self, f: u32) -> bool {
        let mut seen = BitSet::new(self.points);
        self.map(f).iter().all(|&y| seen.insert(y as usize))
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.len() as u32
    }

    /// `S·a`.
    pub fn left_principal(&self, a: u32) -> BitSet {
        BitSet::from_iter(self.len(), self.elements().map(|s| self.mul(s, a) as usize))
    }

    /// One-step stability: multiplying by any generator stays inside.
    pub fn is_closed(&self) -> bool {
        self.elements().all(|f| self.generators.iter().all(|&s| (self.mul(s, f) as usize) < self.len()))
            && self.generators.iter().all(|&s| s < self.len() as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalIdeal {
    members: Vec<u32>,
    mask: BitSet,
    idempotents: Vec<u32>,
}

impl MinimalIdeal {
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn mask(&self) -> &BitSet {
        &self.mask
    }

    pub fn idempotents(&self) -> &[u32] {
        &self.idempotents
    }

    pub fn contains(&self, f: u32) -> bool {
        self.mask.contains(f as usize)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Sink strongly connected components of the left Cayley graph `f → s·f`,
/// ordered by smallest member.
pub fn minimal_left_ideals(s: &EllisSemigroup) -> Vec<MinimalIdeal> {
    let n = s.len();
    let gens = s.generators().to_vec();
    let succ = |f: u32, i: usize| s.mul(gens[i], f);
    let comp = tarjan(n, gens.len(), succ);
    let ncomp = comp.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut is_sink = vec![true; ncomp];
    for f in 0..n as u32 {
        for i in 0..gens.len() {
            if comp[succ(f, i) as usize] != comp[f as usize] {
                is_sink[comp[f as usize] as usize] = false;
            }
        }
    }
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); ncomp];
    for f in 0..n as u32 {
        if is_sink[comp[f as usize] as usize] {
            members[comp[f as usize] as usize].push(f);
        }
    }
    let mut out: Vec<MinimalIdeal> = members
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|m| {
            let mask = BitSet::from_iter(n, m.iter().map(|&f| f as usize));
            let idempotents = m.iter().copied().filter(|&f| s.is_idempotent(f)).collect();
            MinimalIdeal { members: m, mask, idempotents }
        })
        .collect();
    out.sort_by_key(|m| m.members[0]);
    out
}

/// Iterative Tarjan; returns a component id per node.
fn tarjan(n: usize, degree: usize, succ: impl Fn(u32, usize) -> u32) -> Vec<u32> {
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut call: Vec<(u32, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = 0u32;
    for root in 0..n as u32 {
        if index[root as usize] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&(v, edge)) = call.last() {
            if edge < degree {
                call.last_mut().expect("frame").1 += 1;
                let w = succ(v, edge);
                if index[w as usize] == UNSEEN {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w as usize] = false;
                        comp[w as usize] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// The ideal group `uM`, with a group view indexed by position in `members`.
#[derive(Debug, Clone)]
pub struct IdealGroup {
    idempotent: u32,
    members: Vec<u32>,
    group: FiniteGroup,
}

impl IdealGroup {
    pub fn idempotent(&self) -> u32 {
        self.idempotent
    }

    /// Elements of `uM` as semigroup indices, sorted.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn position(&self, f: u32) -> Option<u32> {
        self.members.binary_search(&f).ok().map(|i| i as u32)
    }

    pub fn mask(&self, semigroup_len: usize) -> BitSet {
        BitSet::from_iter(semigroup_len, self.members.iter().map(|&f| f as usize))
    }
}

/// Builds `uM`, checking left identity, left inverses and `s·u = s` on `M`.
pub fn ideal_group(s: &EllisSemigroup, m: &MinimalIdeal, u: u32) -> Result<IdealGroup, EllisError> {
    if !m.contains(u) {
        return Err(EllisError::NotInIdeal { element: u });
    }
    if !s.is_idempotent(u) {
        return Err(EllisError::NotIdempotent { element: u });
    }
    let mut members: Vec<u32> = m.members().iter().map(|&x| s.mul(u, x)).collect();
    members.sort_unstable();
    members.dedup();
    let pos = |f: u32| members.binary_search(&f).ok();
    let k = members.len();
    let mut mul = Vec::with_capacity(k * k);
    for &a in &members {
        for &b in &members {
            let ab = s.mul(a, b);
            let p = pos(ab).ok_or_else(|| EllisError::FactViolated(format!("uM not closed: {a}·{b} = {ab}")))?;
            mul.push(p as u32);
        }
    }
    for &a in &members {
        if s.mul(u, a) != a {
            return Err(EllisError::FactViolated(format!("u={u} is not a left identity at {a}")));
        }
        if !members.iter().any(|&b| s.mul(b, a) == u) {
            return Err(EllisError::FactViolated(format!("{a} has no left inverse in uM")));
        }
    }
    for &x in m.members() {
        if s.mul(x, u) != x {
            return Err(EllisError::FactViolated(format!("s·u != s for s={x}, u={u}")));
        }
    }
    let group =
        FiniteGroup::from_mul_trusted(k, mul).map_err(|e| EllisError::FactViolated(format!("uM is not a group: {e}")))?;
    Ok(IdealGroup { idempotent: u, members, group })
}

/// The map `s ↦ v·s·v` from `uM` to `vN`, as positions, verified to be an isomorphism.
pub fn ideal_group_isomorphism(s: &EllisSemigroup, gu: &IdealGroup, gv: &IdealGroup) -> Result<Vec<u32>, EllisError> {
    let v = gv.idempotent();
    let mut map = Vec::with_capacity(gu.order());
    for &x in gu.members() {
        let y = s.mul(s.mul(v, x), v);
        let p = gv.position(y).ok_or(EllisError::IsomorphismViolated { a: x, b: x })?;
        map.push(p);
    }
    if gu.order() != gv.order() {
        return Err(EllisError::IsomorphismViolated { a: gu.idempotent(), b: v });
    }
    let mut seen = BitSet::new(gv.order());
    for (i, &p) in map.iter().enumerate() {
        if !seen.insert(p as usize) {
            return Err(EllisError::IsomorphismViolated { a: gu.members()[i], b: gu.members()[i] });
        }
    }
    let (a, b) = (gu.group(), gv.group());
    for i in a.elements() {
        for j in a.elements() {
            if map[a.mul(i, j) as usize] != b.mul(map[i as usize], map[j as usize]) {
                return Err(EllisError::IsomorphismViolated { a: gu.members()[i as usize], b: gu.members()[j as usize] });
            }
        }
    }
    Ok(map)
}

/// `a∘B`, evaluated as `a·B`.
pub fn circ(s: &EllisSemigroup, a: u32, b: &BitSet) -> BitSet {
    BitSet::from_iter(s.len(), b.iter().map(|x| s.mul(a, x as u32) as usize))
}

/// `B·c`.
pub fn right_mul(s: &EllisSemigroup, b: &BitSet, c: u32) -> BitSet {
    BitSet::from_iter(s.len(), b.iter().map(|x| s.mul(x as u32, c) as usize))
}

/// `cl_τ(A) = u(u∘A) ∩ uM` for `A ⊆ uM`, given as semigroup indices.
pub fn tau_closure(s: &EllisSemigroup, g: &IdealGroup, a: &BitSet) -> BitSet {
    let u = g.idempotent();
    let ua = circ(s, u, a);
    let mut out = BitSet::from_iter(s.len(), ua.iter().map(|x| s.mul(u, x as u32) as usize));
    out.intersect_with(&g.mask(s.len()));
    out
}

/// `H(uM)`: the τ-closure of the smallest τ-open neighbourhood of `u`, as a normal
/// subgroup of the group view.
///
/// With an additive closure the smallest open set around `u` is `{y : u ∈ cl_τ{y}}`,
/// and every neighbourhood's closure contains its closure.
pub fn h_subgroup(s: &EllisSemigroup, g: &IdealGroup) -> Result<Subgroup, EllisError> {
    let n = s.len();
    let u = g.idempotent();
    let nbhd = BitSet::from_iter(
        n,
        g.members().iter().copied().filter(|&y| tau_closure(s, g, &BitSet::from_iter(n, [y as usize])).contains(u as usize)).map(|y| y as usize),
    );
    let h = tau_closure(s, g, &nbhd);
    let positions: Vec<u32> = h.iter().map(|f| g.position(f as u32).expect("closure stays in uM")).collect();
    let sub = Subgroup::from_members(g.group(), &positions)
        .map_err(|e| EllisError::FactViolated(format!("H(uM) is not a subgroup: {e}")))?;
    if !sub.is_normal_in(g.group()) {
        return Err(EllisError::FactViolated("H(uM) is not normal".into()));
    }
    Ok(sub)
}

/// The induced map on enveloping semigroups together with where ideals and idempotents go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epimorphism {
    pub map: Vec<u32>,
    /// Target minimal ideal receiving each source minimal ideal.
    pub ideal_images: Vec<usize>,
    /// `(source idempotent, image)` over all minimal-ideal idempotents.
    pub idempotent_images: Vec<(u32, u32)>,
}

/// `φ_*(f)`, defined by `φ_*(f)(φ(z)) = φ(f(z))`.
pub fn push_forward(src: &EllisSemigroup, tgt: &EllisSemigroup, point_map: &[u32], f: u32) -> Result<u32, EllisError> {
    const UNSET: u32 = u32::MAX;
    let mut img = vec![UNSET; tgt.points()];
    let mut from = vec![0u32; tgt.points()];
    for z in 0..src.points() as u32 {
        let pz = point_map[z as usize] as usize;
        let v = point_map[src.apply(f, z) as usize];
        if img[pz] == UNSET {
            img[pz] = v;
            from[pz] = z;
        } else if img[pz] != v {
            return Err(EllisError::NotWellDefined { f, z1: from[pz], z2: z });
        }
    }
    if img.contains(&UNSET) {
        return Err(EllisError::NotInTarget { f });
    }
    tgt.lookup(&img).ok_or(EllisError::NotInTarget { f })
}

pub fn induced_epimorphism(m: &FlowMorphism, src: &EllisSemigroup, tgt: &EllisSemigroup) -> Result<Epimorphism, EllisError> {
    let map: Vec<u32> = src.elements().map(|f| push_forward(src, tgt, &m.point_map, f)).collect::<Result<_, _>>()?;
    let hit = BitSet::from_iter(tgt.len(), map.iter().map(|&y| y as usize));
    if let Some(e) = hit.complement().first() {
        return Err(EllisError::NotSurjective { element: e as u32 });
    }
    for f in src.elements() {
        for &s in src.generators() {
            if map[src.mul(s, f) as usize] != tgt.mul(map[s as usize], map[f as usize]) {
                return Err(EllisError::FactViolated(format!("induced map not multiplicative at ({s}, {f})")));
            }
        }
    }
    let src_ideals = minimal_left_ideals(src);
    let tgt_ideals = minimal_left_ideals(tgt);
    let mut ideal_images = Vec::new();
    let mut idempotent_images = Vec::new();
    for (k, mi) in src_ideals.iter().enumerate() {
        let image = BitSet::from_iter(tgt.len(), mi.members().iter().map(|&f| map[f as usize] as usize));
        let j = tgt_ideals
            .iter()
            .position(|t| *t.mask() == image)
            .ok_or_else(|| EllisError::FactViolated(format!("image of minimal ideal {k} is not a minimal ideal")))?;
        ideal_images.push(j);
        for &u in mi.idempotents() {
            let v = map[u as usize];
            if !tgt.is_idempotent(v) {
                return Err(EllisError::FactViolated(format!("idempotent {u} maps to non-idempotent {v}")));
            }
            idempotent_images.push((u, v));
        }
    }
    Ok(Epimorphism { map, ideal_images, idempotent_images })
}

/// Outcome of one clause of the minimal-ideal structure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The six structural clauses of minimal left ideals, checked exhaustively:
/// generation by any member, groups `uM`, the partition by idempotents,
/// `s·u = s`, `s ↦ vs` within an ideal and `s ↦ vsv` across ideals.
pub fn check_ideal_structure(s: &EllisSemigroup) -> Vec<ClauseResult> {
    let ideals = minimal_left_ideals(s);
    let mut out = Vec::new();
    let mut push = |clause: &'static str, r: Result<(), String>| {
        out.push(ClauseResult { clause, passed: r.is_ok(), detail: r.err().unwrap_or_default() });
    };
    push(
        "generated-by-any-member",
        (|| {
            if ideals.is_empty() {
                return Err("no minimal ideal".to_string());
            }
            for (k, m) in ideals.iter().enumerate() {
                for &a in m.members() {
                    if s.left_principal(a) != *m.mask() {
                        return Err(format!("ideal {k}: S·{a} differs"));
                    }
                    let ma = BitSet::from_iter(s.len(), m.members().iter().map(|&x| s.mul(x, a) as usize));
                    if ma != *m.mask() {
                        return Err(format!("ideal {k}: M·{a} differs"));
                    }
                }
            }
            Ok(())
        })(),
    );
    let groups: Vec<Vec<Result<IdealGroup, EllisError>>> =
        ideals.iter().map(|m| m.idempotents().iter().map(|&u| ideal_group(s, m, u)).collect()).collect();
    push(
        "ideal-groups",
        groups.iter().flatten().find_map(|g| g.as_ref().err().map(|e| e.to_string())).map_or(Ok(()), Err),
    );
    push(
        "partition-by-idempotents",
        (|| {
            for (k, (m, gs)) in ideals.iter().zip(&groups).enumerate() {
                if gs.is_empty() {
                    return Err(format!("ideal {k} has no idempotent"));
                }
                let mut cover = BitSet::new(s.len());
                let mut total = 0;
                for g in gs.iter().flatten() {
                    total += g.order();
                    cover.union_with(&g.mask(s.len()));
                }
                if cover != *m.mask() || total != m.len() {
                    return Err(format!("ideal {k}: groups do not partition it"));
                }
            }
            Ok(())
        })(),
    );
    push(
        "right-identity",
        (|| {
            for m in &ideals {
                for &u in m.idempotents() {
                    if let Some(&x) = m.members().iter().find(|&&x| s.mul(x, u) != x) {
                        return Err(format!("{x}·{u} != {x}"));
                    }
                }
            }
            Ok(())
        })(),
    );
    push(
        "left-translation-isomorphism",
        (|| {
            for gs in &groups {
                let gs: Vec<&IdealGroup> = gs.iter().flatten().collect();
                for gu in &gs {
                    for gv in &gs {
                        let v = gv.idempotent();
                        let map: Vec<u32> = gu
                            .members()
                            .iter()
                            .map(|&x| gv.position(s.mul(v, x)).ok_or(format!("v·{x} outside vM")))
                            .collect::<Result<_, _>>()?;
                        if !crate::algebra::is_isomorphism(gu.group(), gv.group(), &map) {
                            return Err(format!("s -> {v}s is not an isomorphism"));
                        }
                    }
                }
            }
            Ok(())
        })(),
    );
    push(
        "all-ideal-groups-isomorphic",
        (|| {
            let all: Vec<&IdealGroup> = groups.iter().flatten().flatten().collect();
            let Some(first) = all.first() else { return Ok(()) };
            for g in &all {
                ideal_group_isomorphism(s, g, first).map_err(|e| e.to_string())?;
                ideal_group_isomorphism(s, first, g).map_err(|e| e.to_string())?;
            }
            Ok(())
        })(),
    );
    out
}

/// The ∘ identities on one sample: `(a∘B)c = a∘(Bc)`, `a∘(b∘B) ⊆ (ab)∘B`,
/// `aB ⊆ a∘B`, `a∘(B∪C) = a∘B ∪ a∘C`, `a∘(bC) ⊆ (ab)∘C` and `a(b∘C) ⊆ (ab)∘C`.
pub fn check_circ_identities(s: &EllisSemigroup, a: u32, b_el: u32, c: u32, b: &BitSet, cset: &BitSet) -> Result<(), String> {
    let ab = s.mul(a, b_el);
    if right_mul(s, &circ(s, a, b), c) != circ(s, a, &right_mul(s, b, c)) {
        return Err(format!("(a∘B)c != a∘(Bc) at a={a}, c={c}"));
    }
    if !circ(s, a, &circ(s, b_el, b)).is_subset(&circ(s, ab, b)) {
        return Err(format!("a∘(b∘B) not in (ab)∘B at a={a}, b={b_el}"));
    }
    let a_b = BitSet::from_iter(s.len(), b.iter().map(|x| s.mul(a, x as u32) as usize));
    if !a_b.is_subset(&circ(s, a, b)) {
        return Err(format!("aB not in a∘B at a={a}"));
    }
    if circ(s, a, &b.union(cset)) != circ(s, a, b).union(&circ(s, a, cset)) {
        return Err(format!("a∘(B∪C) != a∘B ∪ a∘C at a={a}"));
    }
    let b_c = BitSet::from_iter(s.len(), cset.iter().map(|x| s.mul(b_el, x as u32) as usize));
    let abc = circ(s, ab, cset);
    if !circ(s, a, &b_c).is_subset(&abc) {
        return Err(format!("a∘(bC) not in (ab)∘C at a={a}, b={b_el}"));
    }
    let a_bc = BitSet::from_iter(s.len(), circ(s, b_el, cset).iter().map(|x| s.mul(a, x as u32) as usize));
    if !a_bc.is_subset(&abc) {
        return Err(format!("a(b∘C) not in (ab)∘C at a={a}, b={b_el}"));
    }
    Ok(())
}

/// Closure-operator axioms for `cl_τ` on two subsets of `uM`, plus discreteness.
pub fn check_tau_axioms(s: &EllisSemigroup, g: &IdealGroup, a: &BitSet, b: &BitSet) -> Result<(), String> {
    let n = s.len();
    let cl = |x: &BitSet| tau_closure(s, g, x);
    if !cl(&BitSet::new(n)).is_empty() {
        return Err("cl(∅) != ∅".into());
    }
    let ca = cl(a);
    if !a.is_subset(&ca) {
        return Err("not extensive".into());
    }
    if cl(&ca) != ca {
        return Err("not idempotent".into());
    }
    if cl(&a.union(b)) != ca.union(&cl(b)) {
        return Err("not additive".into());
    }
    if ca != *a {
        return Err("τ-topology is not discrete".into());
    }
    let whole = g.mask(n);
    if cl(&whole) != whole {
        return Err("cl(uM) != uM".into());
    }
    Ok(())
}
