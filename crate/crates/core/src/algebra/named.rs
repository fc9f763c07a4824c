use super::{AlgebraError, FiniteGroup, NaturalAction};
use crate::caps::Caps;

/// Named group families.
///
/// Element orderings:
/// - `Cyclic(n)`: element `k` is rotation by `k`; natural action on `n` points.
/// - `Symmetric(n)`: breadth-first closure of `(0 1)` and `(0 1 … n-1)`.
/// - `Dihedral(n)`: order `2n`; index `e·n + k` is `r^k s^e`; natural action on the
///   `n`-gon for `n ≥ 3` with `r^k s^e : i ↦ k + (-1)^e i`.
/// - `Quaternion`: `1, -1, i, -i, j, -j, k, -k`.
/// - `Hyperoctahedral(d)`: symmetries of the cube `{0,1}^d` (point `v` encodes bit `i`
///   as coordinate `i`), generated by flipping bit 0, swapping bits 0 and 1, and
///   cycling the bits `i ↦ i+1`.
/// - `Affine { q, dim }`: pairs `(v, M)` with index `m·q^dim + v`, where `v` encodes
///   coordinates as `Σ v_i q^i` and `m` is the rank of `M` among invertible matrices
///   listed by increasing row-major base-`q` code. `(v,M)(w,N) = (v+Mw, MN)`; the
///   natural action on `F_q^dim` is `w ↦ v + Mw`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupName {
    Cyclic(usize),
    Symmetric(usize),
    Dihedral(usize),
    Quaternion,
    Hyperoctahedral(usize),
    Affine { q: usize, dim: usize },
}

pub fn named_group(name: GroupName) -> Result<FiniteGroup, AlgebraError> {
    named_group_capped(name, Caps::default().max_group_order)
}

pub fn named_group_capped(name: GroupName, cap: usize) -> Result<FiniteGroup, AlgebraError> {
    let too_large = |order: usize| AlgebraError::GroupTooLarge { order, cap };
    match name {
        GroupName::Cyclic(n) => {
            if n == 0 {
                return Err(AlgebraError::UnsupportedParameters("cyclic(0)".into()));
            }
            if n > cap {
                return Err(too_large(n));
            }
            let mul = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
            let g = FiniteGroup::from_mul_trusted(n, mul)?;
            let images = (0..n).flat_map(|k| (0..n).map(move |x| ((k + x) % n) as u32)).collect();
            let gens = if n > 1 { vec![1] } else { vec![] };
            Ok(g.with_generators(gens).with_natural(NaturalAction { degree: n, images }))
        }
        GroupName::Symmetric(n) => {
            if n == 0 {
                return Err(AlgebraError::UnsupportedParameters("symmetric(0)".into()));
            }
            let order: usize = (1..=n).product();
            if order > cap {
                return Err(too_large(order));
            }
            if n == 1 {
                return FiniteGroup::from_permutations(1, &[]);
            }
            let mut swap: Vec<u32> = (0..n as u32).collect();
            swap.swap(0, 1);
            let cycle: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
            FiniteGroup::from_permutations_capped(n, &[swap, cycle], cap)
        }
        GroupName::Dihedral(n) => {
            if n == 0 {
                return Err(AlgebraError::UnsupportedParameters("dihedral(0)".into()));
            }
            if 2 * n > cap {
                return Err(too_large(2 * n));
            }
            let m = 2 * n;
            let decode = |i: usize| (i % n, i / n);
            let mut mul = Vec::with_capacity(m * m);
            for a in 0..m {
                for b in 0..m {
                    let ((k1, e1), (k2, e2)) = (decode(a), decode(b));
                    let k = if e1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
                    mul.push(((e1 ^ e2) * n + k) as u32);
                }
            }
            let mut g = FiniteGroup::from_mul_trusted(m, mul)?;
            let gens = if n > 1 { vec![1, n as u32] } else { vec![1] };
            g = g.with_generators(gens);
            if n >= 3 {
                let mut images = Vec::with_capacity(m * n);
                for a in 0..m {
                    let (k, e) = decode(a);
                    for i in 0..n {
                        let j = if e == 0 { i } else { (n - i) % n };
                        images.push(((k + j) % n) as u32);
                    }
                }
                g = g.with_natural(NaturalAction { degree: n, images });
            }
            Ok(g)
        }
        GroupName::Quaternion => {
            // unit u in {1,i,j,k} as 0..4, sign bit s; index 2u + s
            const UNIT: [[(usize, bool); 4]; 4] = [
                [(0, false), (1, false), (2, false), (3, false)],
                [(1, false), (0, true), (3, false), (2, true)],
                [(2, false), (3, true), (0, true), (1, false)],
                [(3, false), (2, false), (1, true), (0, true)],
            ];
            let mut mul = Vec::with_capacity(64);
            for a in 0..8 {
                for b in 0..8 {
                    let (u, neg) = UNIT[a / 2][b / 2];
                    let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                    mul.push((2 * u + sign as usize) as u32);
                }
            }
            Ok(FiniteGroup::from_mul_trusted(8, mul)?.with_generators(vec![2, 4]))
        }
        GroupName::Hyperoctahedral(d) => {
            if !(1..=4).contains(&d) {
                return Err(AlgebraError::UnsupportedParameters(format!("hyperoctahedral({d}): need 1 <= d <= 4")));
            }
            let pts = 1u32 << d;
            let flip: Vec<u32> = (0..pts).map(|v| v ^ 1).collect();
            let bit = |v: u32, i: usize| (v >> i) & 1;
            let swap: Vec<u32> = (0..pts)
                .map(|v| if d < 2 { v } else { (v & !3) | bit(v, 0) << 1 | bit(v, 1) })
                .collect();
            let cycle: Vec<u32> =
                (0..pts).map(|v| (0..d).fold(0, |acc, i| acc | bit(v, i) << ((i + 1) % d))).collect();
            FiniteGroup::from_permutations_capped(pts as usize, &[flip, swap, cycle], cap)
        }
        GroupName::Affine { q, dim } => affine(q, dim, cap),
    }
}

/// Arithmetic in GF(q) for q in {2, 3, 4}; GF(4) elements are F₂-polynomials mod x²+x+1.
#[derive(Clone, Copy)]
struct Field {
    q: usize,
}

impl Field {
    fn add(self, a: usize, b: usize) -> usize {
        if self.q == 4 {
            a ^ b
        } else {
            (a + b) % self.q
        }
    }

    fn mul(self, a: usize, b: usize) -> usize {
        const GF4: [[usize; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
        if self.q == 4 {
            GF4[a][b]
        } else {
            (a * b) % self.q
        }
    }

    fn inv(self, a: usize) -> usize {
        (1..self.q).find(|&b| self.mul(a, b) == 1).expect("nonzero element")
    }

    fn neg(self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }
}

fn digits(mut code: usize, q: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = code % q;
            code /= q;
            d
        })
        .collect()
}

fn encode(ds: &[usize], q: usize) -> usize {
    ds.iter().rev().fold(0, |acc, &d| acc * q + d)
}

fn is_invertible(f: Field, m: &[usize], dim: usize) -> bool {
    let mut a = m.to_vec();
    for col in 0..dim {
        let Some(p) = (col..dim).find(|&r| a[r * dim + col] != 0) else {
            return false;
        };
        for c in 0..dim {
            a.swap(col * dim + c, p * dim + c);
        }
        let pinv = f.inv(a[col * dim + col]);
        for r in col + 1..dim {
            let factor = f.mul(a[r * dim + col], pinv);
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for c in 0..dim {
                a[r * dim + c] = f.add(a[r * dim + c], f.mul(nf, a[col * dim + c]));
            }
        }
    }
    true
}

fn mat_mul(f: Field, a: &[usize], b: &[usize], dim: usize) -> Vec<usize> {
    let mut out = vec![0; dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            out[r * dim + c] =
                (0..dim).fold(0, |acc, k| f.add(acc, f.mul(a[r * dim + k], b[k * dim + c])));
        }
    }
    out
}

fn mat_vec(f: Field, a: &[usize], v: &[usize], dim: usize) -> Vec<usize> {
    (0..dim)
        .map(|r| (0..dim).fold(0, |acc, k| f.add(acc, f.mul(a[r * dim + k], v[k]))))
        .collect()
}

fn affine(q: usize, dim: usize, cap: usize) -> Result<FiniteGroup, AlgebraError> {
    if ![2, 3, 4].contains(&q) || !(1..=3).contains(&dim) {
        return Err(AlgebraError::UnsupportedParameters(format!(
            "affine(q={q}, dim={dim}): need q in {{2,3,4}} and 1 <= dim <= 3"
        )));
    }
    let f = Field { q };
    let nv = q.pow(dim as u32);
    let gl_order: usize = (0..dim).map(|i| nv - q.pow(i as u32)).product();
    let order = nv * gl_order;
    if order > cap {
        return Err(AlgebraError::GroupTooLarge { order, cap });
    }
    let mut mats: Vec<Vec<usize>> = Vec::with_capacity(gl_order);
    let mut code_to_rank = std::collections::HashMap::new();
    for code in 0..q.pow((dim * dim) as u32) {
        let m = digits(code, q, dim * dim);
        if is_invertible(f, &m, dim) {
            code_to_rank.insert(code, mats.len());
            mats.push(m);
        }
    }
    debug_assert_eq!(mats.len(), gl_order);
    let vecs: Vec<Vec<usize>> = (0..nv).map(|c| digits(c, q, dim)).collect();
    let nm = mats.len();
    let mut gl_mul = vec![0usize; nm * nm];
    for (i, a) in mats.iter().enumerate() {
        for (j, b) in mats.iter().enumerate() {
            gl_mul[i * nm + j] = code_to_rank[&encode(&mat_mul(f, a, b, dim), q)];
        }
    }
    let mut act = vec![0usize; nm * nv];
    for (i, a) in mats.iter().enumerate() {
        for (w, v) in vecs.iter().enumerate() {
            act[i * nv + w] = encode(&mat_vec(f, a, v, dim), q);
        }
    }
    let mut vadd = vec![0usize; nv * nv];
    for (a, va) in vecs.iter().enumerate() {
        for (b, vb) in vecs.iter().enumerate() {
            let s: Vec<usize> = va.iter().zip(vb).map(|(&x, &y)| f.add(x, y)).collect();
            vadd[a * nv + b] = encode(&s, q);
        }
    }
    let mut mul = Vec::with_capacity(order * order);
    for x in 0..order {
        let (m, v) = (x / nv, x % nv);
        for y in 0..order {
            let (n, w) = (y / nv, y % nv);
            let nvec = vadd[v * nv + act[m * nv + w]];
            mul.push((gl_mul[m * nm + n] * nv + nvec) as u32);
        }
    }
    let mut images = Vec::with_capacity(order * nv);
    for x in 0..order {
        let (m, v) = (x / nv, x % nv);
        for w in 0..nv {
            images.push(vadd[v * nv + act[m * nv + w]] as u32);
        }
    }
    Ok(FiniteGroup::from_mul_trusted(order, mul)?.with_natural(NaturalAction { degree: nv, images }))
}

/// Splits an affine element index into `(vector code, matrix rank)`.
pub fn affine_parts(q: usize, dim: usize, element: u32) -> (usize, usize) {
    let nv = q.pow(dim as u32);
    (element as usize % nv, element as usize / nv)
}
