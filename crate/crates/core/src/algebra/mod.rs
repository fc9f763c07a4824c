//! Finite groups as multiplication tables, with subgroup and quotient algebra.

mod named;

pub use named::{affine_parts, named_group, named_group_capped, GroupName};

use std::collections::{HashMap, HashSet, VecDeque};

use crate::bitset::BitSet;
use crate::caps::Caps;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("group table is empty")]
    Empty,
    #[error("row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry at ({a}, {b}) is {value}, out of range")]
    EntryOutOfRange { a: u32, b: u32, value: u32 },
    #[error("multiplication is not associative on ({a}, {b}, {c})")]
    NotAssociative { a: u32, b: u32, c: u32 },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: u32 },
    #[error("generator {generator} is not a bijection")]
    NotBijective { generator: usize },
    #[error("group order {order} exceeds the cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("subgroup is not normal: conjugating {h} by {g} leaves it")]
    NotNormal { g: u32, h: u32 },
    #[error("element set is not a subgroup (witness {witness})")]
    NotASubgroup { witness: u32 },
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
}

/// An optional faithful permutation representation carried along with the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalAction {
    pub degree: usize,
    /// `images[g * degree + x]` is the image of point `x` under element `g`.
    pub images: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    mul: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    natural: Option<NaturalAction>,
}

impl FiniteGroup {
    /// Validates a full multiplication table: identity, inverses, then associativity.
    pub fn from_table(table: &[Vec<u32>]) -> Result<Self, AlgebraError> {
        Self::from_table_capped(table, Caps::default().max_group_order)
    }

    pub fn from_table_capped(table: &[Vec<u32>], cap: usize) -> Result<Self, AlgebraError> {
        let n = table.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        if n > cap {
            return Err(AlgebraError::GroupTooLarge { order: n, cap });
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(AlgebraError::NotSquare { row: a, len: row.len(), expected: n });
            }
            for (b, &v) in row.iter().enumerate() {
                if v as usize >= n {
                    return Err(AlgebraError::EntryOutOfRange { a: a as u32, b: b as u32, value: v });
                }
                mul.push(v);
            }
        }
        let g = Self::from_mul_trusted(n, mul)?;
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul_raw(a, b);
                for c in 0..n {
                    if g.mul_raw(ab, c) != g.mul_raw(a, g.mul_raw(b, c)) {
                        return Err(AlgebraError::NotAssociative { a: a as u32, b: b as u32, c: c as u32 });
                    }
                }
            }
        }
        Ok(g)
    }

    /// Builds from a table known to be associative (e.g. from composition of maps).
    /// Identity and inverses are still located and checked.
    pub(crate) fn from_mul_trusted(n: usize, mul: Vec<u32>) -> Result<Self, AlgebraError> {
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or(AlgebraError::NoIdentity)?;
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(AlgebraError::NoInverse { element: a as u32 })?;
            inverse[a] = b as u32;
        }
        let mut g = FiniteGroup { n, mul, identity: identity as u32, inverse, generators: Vec::new(), natural: None };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    /// Closure of permutation generators; elements in breadth-first discovery order.
    pub fn from_permutations(degree: usize, generators: &[Vec<u32>]) -> Result<Self, AlgebraError> {
        Self::from_permutations_capped(degree, generators, Caps::default().max_group_order)
    }

    pub fn from_permutations_capped(
        degree: usize,
        generators: &[Vec<u32>],
        cap: usize,
    ) -> Result<Self, AlgebraError> {
        for (i, p) in generators.iter().enumerate() {
            if p.len() != degree || !is_bijection(p) {
                return Err(AlgebraError::NotBijective { generator: i });
            }
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut perms: Vec<Vec<u32>> = vec![id.clone()];
        index.insert(id, 0);
        let mut head = 0;
        while head < perms.len() {
            for s in generators {
                let next = compose(&perms[head], s);
                if !index.contains_key(&next) {
                    if perms.len() >= cap {
                        return Err(AlgebraError::GroupTooLarge { order: perms.len() + 1, cap });
                    }
                    index.insert(next.clone(), perms.len() as u32);
                    perms.push(next);
                }
            }
            head += 1;
        }
        let n = perms.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &perms {
            for b in &perms {
                mul.push(index[&compose(a, b)]);
            }
        }
        let gen_idx: Vec<u32> = generators.iter().map(|s| index[s]).collect();
        let mut g = Self::from_mul_trusted(n, mul)?;
        g.generators = dedup_keep_order(gen_idx.into_iter().filter(|&s| s != g.identity));
        g.natural = Some(NaturalAction { degree, images: perms.concat() });
        Ok(g)
    }

    pub fn trivial() -> Self {
        Self::from_mul_trusted(1, vec![0]).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    fn mul_raw(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.n as u32
    }

    /// A generating set; empty for the trivial group.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn natural_action(&self) -> Option<&NaturalAction> {
        self.natural.as_ref()
    }

    pub(crate) fn with_natural(mut self, natural: NaturalAction) -> Self {
        self.natural = Some(natural);
        self
    }

    pub(crate) fn with_generators(mut self, generators: Vec<u32>) -> Self {
        self.generators = generators;
        self
    }

    pub fn table(&self) -> Vec<Vec<u32>> {
        self.mul.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Same multiplication table (ignores generators and natural action).
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.n == other.n && self.mul == other.mul
    }

    pub fn conj(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted `(order, multiplicity)` pairs.
    pub fn order_profile(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for a in self.elements() {
            *counts.entry(self.element_order(a)).or_default() += 1;
        }
        let mut v: Vec<_> = counts.into_iter().collect();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exhaustive axiom check, used by tests and suites.
    pub fn check_axioms(&self) -> Result<(), AlgebraError> {
        let n = self.n;
        let e = self.identity as usize;
        for a in 0..n {
            if self.mul_raw(e, a) != a || self.mul_raw(a, e) != a {
                return Err(AlgebraError::NoIdentity);
            }
            let ia = self.inverse[a] as usize;
            if self.mul_raw(a, ia) != e || self.mul_raw(ia, a) != e {
                return Err(AlgebraError::NoInverse { element: a as u32 });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul_raw(a, b);
                for c in 0..n {
                    if self.mul_raw(ab, c) != self.mul_raw(a, self.mul_raw(b, c)) {
                        return Err(AlgebraError::NotAssociative { a: a as u32, b: b as u32, c: c as u32 });
                    }
                }
            }
        }
        Ok(())
    }

    /// Closure of `seeds` under multiplication; a subgroup since the group is finite.
    pub fn closure(&self, seeds: &[u32]) -> BitSet {
        let mut mask = BitSet::new(self.n);
        mask.insert(self.identity as usize);
        let mut list = vec![self.identity];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            for &s in seeds {
                let y = self.mul(x, s);
                if mask.insert(y as usize) {
                    list.push(y);
                }
            }
            head += 1;
        }
        mask
    }

    fn greedy_generators(&self) -> Vec<u32> {
        let mut by_order: Vec<(usize, u32)> =
            self.elements().map(|a| (self.element_order(a), a)).collect();
        by_order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut gens = Vec::new();
        let mut span = self.closure(&[]);
        for (_, a) in by_order {
            if span.count() == self.n {
                break;
            }
            if !span.contains(a as usize) {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Direct product with row-major indexing `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.n, other.n);
        let mut mul = Vec::with_capacity(n * m * n * m);
        for a1 in 0..n {
            for b1 in 0..m {
                for a2 in 0..n {
                    for b2 in 0..m {
                        let a = self.mul_raw(a1, a2);
                        let b = other.mul_raw(b1, b2);
                        mul.push((a * m + b) as u32);
                    }
                }
            }
        }
        let identity = self.identity as usize * m + other.identity as usize;
        let inverse = (0..n * m)
            .map(|i| self.inverse[i / m] * m as u32 + other.inverse[i % m])
            .collect();
        let mut gens: Vec<u32> =
            self.generators.iter().map(|&a| a * m as u32 + other.identity).collect();
        gens.extend(other.generators.iter().map(|&b| self.identity * m as u32 + b));
        FiniteGroup { n: n * m, mul, identity: identity as u32, inverse, generators: gens, natural: None }
    }
}

fn is_bijection(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x as usize >= p.len() || seen[x as usize] {
            return false;
        }
        seen[x as usize] = true;
    }
    true
}

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn dedup_keep_order(it: impl Iterator<Item = u32>) -> Vec<u32> {
    let mut seen = HashSet::new();
    it.filter(|x| seen.insert(*x)).collect()
}

pub fn group_from_table(table: &[Vec<u32>]) -> Result<FiniteGroup, AlgebraError> {
    FiniteGroup::from_table(table)
}

pub fn group_from_permutations(degree: usize, generators: &[Vec<u32>]) -> Result<FiniteGroup, AlgebraError> {
    FiniteGroup::from_permutations(degree, generators)
}

/// A subgroup, stored as its sorted member list plus a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<u32>,
    mask: BitSet,
}

impl Subgroup {
    pub(crate) fn from_mask_unchecked(mask: BitSet) -> Self {
        Subgroup { members: mask.to_u32_vec(), mask }
    }

    /// Validates closure under multiplication (and hence inverses, by finiteness).
    pub fn from_members(g: &FiniteGroup, members: &[u32]) -> Result<Self, AlgebraError> {
        let mask = BitSet::from_iter(g.order(), members.iter().map(|&m| m as usize));
        if !mask.contains(g.identity() as usize) {
            return Err(AlgebraError::NotASubgroup { witness: g.identity() });
        }
        for a in mask.iter() {
            for b in mask.iter() {
                let ab = g.mul(a as u32, b as u32);
                if !mask.contains(ab as usize) {
                    return Err(AlgebraError::NotASubgroup { witness: ab });
                }
            }
        }
        Ok(Self::from_mask_unchecked(mask))
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self::from_mask_unchecked(BitSet::full(g.order()))
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self::from_mask_unchecked(BitSet::from_iter(g.order(), [g.identity() as usize]))
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn mask(&self) -> &BitSet {
        &self.mask
    }

    pub fn contains(&self, g: u32) -> bool {
        self.mask.contains(g as usize)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        self.normality_witness(g).is_none()
    }

    /// A pair `(g, h)` with `g h g⁻¹` outside the subgroup, if any.
    pub fn normality_witness(&self, g: &FiniteGroup) -> Option<(u32, u32)> {
        for &s in g.generators() {
            for &h in &self.members {
                if !self.contains(g.conj(s, h)) {
                    return Some((s, h));
                }
            }
        }
        None
    }

    /// Left coset `a H` as a mask.
    pub fn left_coset(&self, g: &FiniteGroup, a: u32) -> BitSet {
        BitSet::from_iter(g.order(), self.members.iter().map(|&h| g.mul(a, h) as usize))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Self::from_mask_unchecked(self.mask.intersection(&other.mask))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by `(order, member list)`.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order().cmp(&other.order()).then_with(|| self.members.cmp(&other.members))
    }
}

pub fn subgroup_generated(g: &FiniteGroup, seeds: &[u32]) -> Subgroup {
    Subgroup::from_mask_unchecked(g.closure(seeds))
}

/// Every subgroup exactly once, sorted by `(order, members)`.
///
/// Joins cyclic subgroups breadth-first. A join of `S` with an outside element is
/// all of `G` whenever `[G:S]` is prime, which skips most closures near the top.
pub fn enumerate_subgroups(g: &FiniteGroup, max_order_bound: usize) -> Result<Vec<Subgroup>, AlgebraError> {
    let n = g.order();
    if n > max_order_bound {
        return Err(AlgebraError::GroupTooLarge { order: n, cap: max_order_bound });
    }
    let mut cyclic: Vec<(u32, BitSet)> = Vec::new();
    let mut seen_cyclic: HashSet<BitSet> = HashSet::new();
    for a in g.elements() {
        let c = g.closure(&[a]);
        if seen_cyclic.insert(c.clone()) {
            cyclic.push((a, c));
        }
    }
    let whole = BitSet::full(n);
    let mut found: HashMap<BitSet, Vec<u32>> = HashMap::new();
    let mut queue: VecDeque<BitSet> = VecDeque::new();
    for (a, c) in &cyclic {
        found.insert(c.clone(), vec![*a]);
        queue.push_back(c.clone());
    }
    while let Some(s) = queue.pop_front() {
        let gens = found[&s].clone();
        let size = s.count();
        let prime_index = is_prime(n / size);
        for (a, c) in &cyclic {
            if c.is_subset(&s) {
                continue;
            }
            let join = if prime_index {
                whole.clone()
            } else {
                let mut seeds = gens.clone();
                seeds.push(*a);
                g.closure(&seeds)
            };
            if !found.contains_key(&join) {
                let mut seeds = gens.clone();
                seeds.push(*a);
                found.insert(join.clone(), seeds);
                queue.push_back(join);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_keys().map(Subgroup::from_mask_unchecked).collect();
    out.sort();
    Ok(out)
}

fn is_prime(k: usize) -> bool {
    k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| k % d != 0)
}

/// Intersection of all conjugates `g H g⁻¹`.
pub fn normal_core(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    let mut mask = h.mask().clone();
    for x in h.members() {
        if g.elements().any(|a| !h.contains(g.conj(g.inv(a), *x))) {
            mask.remove(*x as usize);
        }
    }
    Subgroup::from_mask_unchecked(mask)
}

#[derive(Debug, Clone)]
pub struct GroupQuotient {
    normal: Subgroup,
    cosets: Vec<Vec<u32>>,
    coset_of: Vec<u32>,
    group: FiniteGroup,
}

impl GroupQuotient {
    pub fn normal_subgroup(&self) -> &Subgroup {
        &self.normal
    }

    /// Cosets ordered by their smallest element.
    pub fn cosets(&self) -> &[Vec<u32>] {
        &self.cosets
    }

    pub fn project(&self, g: u32) -> u32 {
        self.coset_of[g as usize]
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<GroupQuotient, AlgebraError> {
    if let Some((a, h)) = n.normality_witness(g) {
        return Err(AlgebraError::NotNormal { g: a, h });
    }
    let mut coset_of = vec![u32::MAX; g.order()];
    let mut cosets: Vec<Vec<u32>> = Vec::new();
    for a in g.elements() {
        if coset_of[a as usize] != u32::MAX {
            continue;
        }
        let idx = cosets.len() as u32;
        let mut c: Vec<u32> = n.members().iter().map(|&h| g.mul(a, h)).collect();
        c.sort_unstable();
        for &x in &c {
            coset_of[x as usize] = idx;
        }
        cosets.push(c);
    }
    let k = cosets.len();
    let mut mul = Vec::with_capacity(k * k);
    for a in &cosets {
        for b in &cosets {
            mul.push(coset_of[g.mul(a[0], b[0]) as usize]);
        }
    }
    let mut group = FiniteGroup::from_mul_trusted(k, mul)?;
    let gens = dedup_keep_order(
        g.generators().iter().map(|&s| coset_of[s as usize]).filter(|&c| c != group.identity()),
    );
    group = group.with_generators(gens);
    Ok(GroupQuotient { normal: n.clone(), cosets, coset_of, group })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsomorphism {
    Order { left: usize, right: usize },
    ElementOrders { left: Vec<(usize, usize)>, right: Vec<(usize, usize)> },
    /// Every assignment of generator images was tried.
    Exhausted { generators: usize, candidates: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    /// `map[a]` is the image of `a`.
    Isomorphic { map: Vec<u32> },
    NotIsomorphic(NonIsomorphism),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }
}

pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> Result<IsoVerdict, AlgebraError> {
    are_isomorphic_capped(a, b, Caps::default().max_isomorphism_order)
}

/// Screens by order and element-order profile, then backtracks over generator images.
pub fn are_isomorphic_capped(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<IsoVerdict, AlgebraError> {
    for g in [a, b] {
        if g.order() > cap {
            return Err(AlgebraError::GroupTooLarge { order: g.order(), cap });
        }
    }
    if a.order() != b.order() {
        return Ok(IsoVerdict::NotIsomorphic(NonIsomorphism::Order { left: a.order(), right: b.order() }));
    }
    let (pa, pb) = (a.order_profile(), b.order_profile());
    if pa != pb {
        return Ok(IsoVerdict::NotIsomorphic(NonIsomorphism::ElementOrders { left: pa, right: pb }));
    }
    let gens = a.greedy_generators();
    let b_orders: Vec<usize> = b.elements().map(|x| b.element_order(x)).collect();
    let candidates: Vec<Vec<u32>> = gens
        .iter()
        .map(|&s| {
            let o = a.element_order(s);
            b.elements().filter(|&x| b_orders[x as usize] == o).collect()
        })
        .collect();
    let mut images = vec![0u32; gens.len()];
    let mut tried = 0u64;
    if let Some(map) = iso_search(a, b, &gens, &candidates, &mut images, 0, &mut tried) {
        return Ok(IsoVerdict::Isomorphic { map });
    }
    Ok(IsoVerdict::NotIsomorphic(NonIsomorphism::Exhausted { generators: gens.len(), candidates: tried }))
}

fn iso_search(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[u32],
    candidates: &[Vec<u32>],
    images: &mut Vec<u32>,
    depth: usize,
    tried: &mut u64,
) -> Option<Vec<u32>> {
    if depth == gens.len() {
        *tried += 1;
        return extend_to_isomorphism(a, b, gens, images);
    }
    for &c in &candidates[depth] {
        if images[..depth].contains(&c) {
            continue;
        }
        images[depth] = c;
        if let Some(m) = iso_search(a, b, gens, candidates, images, depth + 1, tried) {
            return Some(m);
        }
    }
    None
}

/// Extends generator images along the Cayley graph; every edge is checked once,
/// which makes the result a homomorphism when it succeeds.
fn extend_to_isomorphism(a: &FiniteGroup, b: &FiniteGroup, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
    const UNSET: u32 = u32::MAX;
    let mut map = vec![UNSET; a.order()];
    let mut used = BitSet::new(b.order());
    map[a.identity() as usize] = b.identity();
    used.insert(b.identity() as usize);
    let mut queue = vec![a.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (s, &img) in gens.iter().zip(images) {
            let y = a.mul(x, *s);
            let target = b.mul(map[x as usize], img);
            match map[y as usize] {
                UNSET => {
                    if !used.insert(target as usize) {
                        return None;
                    }
                    map[y as usize] = target;
                    queue.push(y);
                }
                v if v != target => return None,
                _ => {}
            }
        }
    }
    (queue.len() == a.order()).then_some(map)
}

/// Checks that `map` is a bijective homomorphism `a → b`.
pub fn is_isomorphism(a: &FiniteGroup, b: &FiniteGroup, map: &[u32]) -> bool {
    if map.len() != a.order() || a.order() != b.order() {
        return false;
    }
    let mut seen = BitSet::new(b.order());
    if !map.iter().all(|&y| (y as usize) < b.order() && seen.insert(y as usize)) {
        return false;
    }
    a.elements().all(|x| {
        a.elements().all(|y| map[a.mul(x, y) as usize] == b.mul(map[x as usize], map[y as usize]))
    })
}
