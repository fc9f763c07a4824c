//! Brute-force reference computations the suites compare the library against.
//! Nothing here calls the library's decision procedures.

use std::collections::HashSet;

use elliskit_core::algebra::Subgroup;
use elliskit_core::ellis::EllisSemigroup;
use elliskit_core::flows::Flow;
use elliskit_core::relations::EquivRelation;
use elliskit_core::BitSet;

/// Every partition of the points preserved by every group element.
pub fn invariant_partitions(flow: &Flow) -> Vec<Vec<u32>> {
    let n = flow.points();
    let maps = flow.element_maps();
    let mut out = Vec::new();
    let mut labels = vec![0u32; n];
    fn rec(maps: &[Vec<u32>], labels: &mut Vec<u32>, i: usize, next: u32, out: &mut Vec<Vec<u32>>) {
        if i == labels.len() {
            let ok = maps.iter().all(|m| {
                (0..labels.len()).all(|x| {
                    (0..labels.len()).all(|y| labels[x] != labels[y] || labels[m[x] as usize] == labels[m[y] as usize])
                })
            });
            if ok {
                out.push(labels.clone());
            }
            return;
        }
        for l in 0..=next {
            labels[i] = l;
            rec(maps, labels, i + 1, next.max(l + 1), out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(&maps, &mut labels, 1, 1, &mut out);
    out
}

/// `{(x, y) : x ∼ y}` as an `n × n` bit matrix.
pub fn pair_matrix(e: &EquivRelation) -> BitSet {
    let n = e.points();
    BitSet::from_iter(n * n, (0..n).flat_map(|x| (0..n).filter(move |&y| e.related(x as u32, y as u32)).map(move |y| x * n + y)))
}

/// `{(g·x̃, g·h·x̃)}` by direct enumeration.
pub fn r_pairs(flow: &Flow, h: &[u32], support: &[u32]) -> BitSet {
    let n = flow.points();
    let mut out = BitSet::new(n * n);
    for g in flow.group().elements() {
        for &x in support {
            for &k in h {
                let a = flow.act(g, x);
                let b = flow.act(g, flow.act(k, x));
                out.insert(a as usize * n + b as usize);
            }
        }
    }
    out
}

/// All pair sets `R_{H,X̃}` over the given subgroups and every subset `X̃`.
pub fn all_r_pair_sets(flow: &Flow, subgroups: &[Subgroup]) -> HashSet<BitSet> {
    let n = flow.points();
    assert!(n < 20, "exhaustive support search is for small flows");
    let mut out = HashSet::new();
    for h in subgroups {
        for bits in 0u32..1 << n {
            let support: Vec<u32> = (0..n as u32).filter(|&x| bits >> x & 1 == 1).collect();
            out.insert(r_pairs(flow, h.members(), &support));
        }
    }
    out
}

/// Labels of the orbits of `h`.
pub fn orbit_labels(flow: &Flow, h: &[u32]) -> Vec<u32> {
    (0..flow.points() as u32).map(|x| h.iter().map(|&k| flow.act(k, x)).min().unwrap_or(x)).collect()
}

/// `{g : g·x ∼ x for all x}`.
pub fn class_fixer(flow: &Flow, e: &EquivRelation) -> Vec<u32> {
    flow.group().elements().filter(|&g| (0..flow.points() as u32).all(|x| e.related(flow.act(g, x), x))).collect()
}

/// Whether some subgroup has exactly the classes of `e` as its orbits.
pub fn is_orbit_partition(flow: &Flow, e: &EquivRelation, subgroups: &[Subgroup]) -> bool {
    subgroups.iter().any(|h| EquivRelation::from_labels(&orbit_labels(flow, h.members())) == *e)
}

/// Group-likeness on a transitive group ambit: `g·x₀ ∼ g'·x₀` forces `g·x ∼ g'·x`.
pub fn group_like(flow: &Flow, basepoint: u32, e: &EquivRelation) -> bool {
    let g = flow.group();
    g.elements().all(|a| {
        g.elements().all(|b| {
            !e.related(flow.act(a, basepoint), flow.act(b, basepoint))
                || (0..flow.points() as u32).all(|x| e.related(flow.act(a, x), flow.act(b, x)))
        })
    })
}

/// Elements acting as the identity.
pub fn action_kernel(flow: &Flow) -> Vec<u32> {
    flow.group().elements().filter(|&g| (0..flow.points() as u32).all(|x| flow.act(g, x) == x)).collect()
}

/// Minimal left ideals as the inclusion-minimal sets among all `S·a`.
pub fn minimal_left_ideals(s: &EllisSemigroup) -> HashSet<BitSet> {
    let principal: Vec<BitSet> =
        s.elements().map(|a| BitSet::from_iter(s.len(), s.elements().map(|x| s.mul(x, a) as usize))).collect();
    let distinct: HashSet<BitSet> = principal.into_iter().collect();
    distinct.iter().filter(|l| !distinct.iter().any(|m| m != *l && m.is_subset(l))).cloned().collect()
}
