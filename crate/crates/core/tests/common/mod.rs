//! Oracles that share no code with the library: element sets, closure by
//! repeated addition, plain loops over matrices.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Pt = (u64, u64);
pub type ElemSet = Vec<Pt>;

pub fn omega(x: Pt, y: Pt, d: u64) -> u64 {
    (x.0 * y.1 % d + d - x.1 * y.0 % d) % d
}

/// Subgroup generated by `gens`, by closing under addition.
pub fn closure(gens: &[Pt], d: u64) -> ElemSet {
    let mut set: BTreeSet<Pt> = BTreeSet::from([(0, 0)]);
    let mut frontier = vec![(0, 0)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = ((x.0 + g.0) % d, (x.1 + g.1) % d);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// Every subgroup of order `d` whose elements pairwise pair to zero.
pub fn isotropic_lines(d: u64) -> BTreeSet<ElemSet> {
    let pts: Vec<Pt> = (0..d).flat_map(|q| (0..d).map(move |p| (q, p))).collect();
    let mut out = BTreeSet::new();
    for &x in &pts {
        for &y in &pts {
            if omega(x, y, d) != 0 {
                continue;
            }
            let s = closure(&[x, y], d);
            if s.len() as u64 == d && s.iter().all(|&a| s.iter().all(|&b| omega(a, b, d) == 0)) {
                out.insert(s);
            }
        }
    }
    out
}

pub type M = [u64; 4]; // [a, b, c, d] row-major

pub fn det(m: &M, d: u64) -> u64 {
    (m[0] * m[3] % d + d - m[1] * m[2] % d) % d
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn all_matrices(d: u64) -> impl Iterator<Item = M> {
    (0..d.pow(4)).map(move |i| [i / d.pow(3), (i / d.pow(2)) % d, (i / d) % d, i % d])
}

pub fn sl(d: u64) -> Vec<M> {
    all_matrices(d).filter(|m| det(m, d) == 1 % d).collect()
}

pub fn gl(d: u64) -> Vec<M> {
    all_matrices(d).filter(|m| gcd(det(m, d), d) == 1).collect()
}

pub fn apply(m: &M, x: Pt, d: u64) -> Pt {
    ((m[0] * x.0 + m[1] * x.1) % d, (m[2] * x.0 + m[3] * x.1) % d)
}

pub fn image(m: &M, s: &ElemSet, d: u64) -> ElemSet {
    let set: BTreeSet<Pt> = s.iter().map(|&x| apply(m, x, d)).collect();
    set.into_iter().collect()
}

pub fn matmul(x: &M, y: &M, d: u64) -> M {
    [
        (x[0] * y[0] + x[1] * y[2]) % d,
        (x[0] * y[1] + x[1] * y[3]) % d,
        (x[2] * y[0] + x[3] * y[2]) % d,
        (x[2] * y[1] + x[3] * y[3]) % d,
    ]
}

/// Orbit sizes of the isotropic lines under `SL(2, Z_d)`, ascending.
pub fn orbit_sizes(d: u64) -> Vec<usize> {
    let group = sl(d);
    let mut left = isotropic_lines(d);
    let mut sizes = Vec::new();
    while let Some(first) = left.iter().next().cloned() {
        let orbit: BTreeSet<ElemSet> = group.iter().map(|g| image(g, &first, d)).collect();
        for o in &orbit {
            left.remove(o);
        }
        sizes.push(orbit.len());
    }
    sizes.sort_unstable();
    sizes
}

/// Members of `GL(2, Z_{p^s})` carrying span(p^k e1, p^{s-k} e2) onto itself
/// when applied to the diagonal generators.
pub fn sigma(p: u64, s: u32, k: u32) -> Vec<M> {
    let q = p.pow(s);
    let (a, b) = (p.pow(k) % q, p.pow(s - k) % q);
    let m0 = closure(&[(a, 0), (0, b)], q);
    gl(q)
        .into_iter()
        .filter(|m| closure(&[apply(m, (a, 0), q), apply(m, (0, b), q)], q) == m0)
        .collect()
}

pub fn to_rows(m: &isolines::Mat2) -> M {
    [m.col1.0, m.col2.0, m.col1.1, m.col2.1]
}

pub fn line_elements(m: &isolines::Submodule) -> ElemSet {
    m.elements()
        .unwrap()
        .into_iter()
        .map(|v| (v.0, v.1))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
