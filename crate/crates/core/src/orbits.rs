//! Orbits of the isotropic lines under the left action of `SL(2, Z_d)`.
//!
//! Over `Z_{p^s}` the orbits are indexed by `k ∈ {0, …, ⌊s/2⌋}`, the
//! smallest valuation of a nonzero vector on the line. Over a general `d`
//! the index is the vector of those `k_i` across the Chinese factors.

use num_rational::Ratio;
use serde::Serialize;

use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lines::{crt_split, enumerate_lines, LineSet};
use crate::submodule::Submodule;
use crate::symplectic::{enumerate_sl_with, is_sl, Mat2};
use crate::zring::RingCtx;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitDescriptor {
    #[serde(rename = "k")]
    pub k_vector: Vec<u32>,
    pub size: u128,
    /// HNF-least member of the orbit.
    pub representative: Submodule,
    #[serde(skip)]
    pub members: Vec<Submodule>,
}

/// `S·M = { S x : x ∈ M }` for `S ∈ SL(2, Z_d)`.
pub fn act(s_mat: &Mat2, m: &Submodule) -> Result<Submodule> {
    let d = m.modulus();
    if !is_sl(s_mat, d) {
        return Err(Error::domain(format!("{s_mat} is not in SL(2,Z_{d})")));
    }
    Ok(m.image(s_mat))
}

/// Orbit index `(k_i)`: the smallest valuation in each Chinese projection.
pub fn orbit_index(ctx: &RingCtx, m: &Submodule) -> Result<Vec<u32>> {
    let parts = crt_split(ctx, m)?;
    parts
        .iter()
        .zip(ctx.factors())
        .map(|(part, &f)| part.min_valuation(f))
        .collect()
}

/// Union-find decomposition of all lines under every element of `SL(2, Z_d)`.
pub fn orbit_decompose(ctx: &RingCtx) -> Result<Vec<OrbitDescriptor>> {
    orbit_decompose_with(ctx, Execution::default())
}

pub fn orbit_decompose_with(ctx: &RingCtx, exec: Execution) -> Result<Vec<OrbitDescriptor>> {
    let d = ctx.modulus();
    let lines = enumerate_lines(ctx)?;
    let group = enumerate_sl_with(d, exec)?;
    let images = action_table(&lines, &group, exec);

    let mut uf = UnionFind::new(lines.len());
    for (i, row) in images.iter().enumerate() {
        for &j in row {
            uf.union(i, j);
        }
    }
    let mut out = uf
        .groups()
        .into_iter()
        .map(|group| {
            let members: Vec<Submodule> = group.iter().map(|&i| lines.lines()[i]).collect();
            let representative = members[0];
            Ok(OrbitDescriptor {
                k_vector: orbit_index(ctx, &representative)?,
                size: members.len() as u128,
                representative,
                members,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|x, y| {
        x.k_vector
            .cmp(&y.k_vector)
            .then(x.representative.cmp(&y.representative))
    });
    Ok(out)
}

/// For each line, the indices of its images under every group element.
pub fn action_table(lines: &LineSet, group: &[Mat2], exec: Execution) -> Vec<Vec<usize>> {
    exec.map_slice(lines.lines(), |m| {
        let mut row: Vec<usize> = group
            .iter()
            .map(|s| {
                lines
                    .position(&m.image(s))
                    .expect("SL action maps lines to lines")
            })
            .collect();
        row.sort_unstable();
        row.dedup();
        row
    })
}

/// `|O_k(p^s)|`: `p^{s−2k−1}(p+1)` when `2k < s`, and `1` when `2k = s`.
pub fn orbit_size_formula(p: u64, s: u32, k: u32) -> Result<u128> {
    if k > s / 2 {
        return Err(Error::domain(format!("k={k} exceeds floor(s/2)={}", s / 2)));
    }
    if 2 * k == s {
        // the generic expression is not an integer here, see `generic_orbit_size`
        return Ok(1);
    }
    let p = p as u128;
    Ok(p.pow(s - 2 * k - 1) * (p + 1))
}

/// The generic expression `(p^s − p^{s−2})/(p^{2k} − p^{2k−1})` evaluated
/// exactly over the rationals, for any `k ≥ 1` or `s ≥ 2`. It equals the
/// orbit size when `2k < s` but gives `(p+1)/p` at `2k = s`.
pub fn generic_orbit_size(p: u64, s: u32, k: u32) -> Ratio<i128> {
    let p = p as i128;
    let pow = |e: i64| -> Ratio<i128> {
        if e >= 0 {
            Ratio::from_integer(p.pow(e as u32))
        } else {
            Ratio::new(1, p.pow((-e) as u32))
        }
    };
    let (s, k) = (s as i64, k as i64);
    (pow(s) - pow(s - 2)) / (pow(2 * k) - pow(2 * k - 1))
}

/// `∏ (⌊s_i/2⌋ + 1)`.
pub fn orbit_count_formula(ctx: &RingCtx) -> u128 {
    ctx.factors()
        .iter()
        .map(|f| (f.s / 2 + 1) as u128)
        .product()
}

/// `∏ |O_{k_i}(p_i^{s_i})|`.
pub fn orbit_size_for(ctx: &RingCtx, k_vector: &[u32]) -> Result<u128> {
    if k_vector.len() != ctx.factors().len() {
        return Err(Error::domain(
            "k-vector length must match the number of prime factors",
        ));
    }
    ctx.factors()
        .iter()
        .zip(k_vector)
        .map(|(f, &k)| orbit_size_formula(f.p, f.s, k))
        .product()
}

/// All admissible k-vectors, lexicographic.
pub fn k_vectors(ctx: &RingCtx) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for f in ctx.factors() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=f.s / 2).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

/// For square-free `d`, the spans of single free vectors.
pub fn projective_points(ctx: &RingCtx) -> Result<LineSet> {
    if !ctx.is_square_free() {
        return Err(Error::domain(format!(
            "{} is not square-free",
            ctx.modulus()
        )));
    }
    let d = ctx.modulus();
    let out: Vec<Submodule> = (0..d * d)
        .map(|i| crate::symplectic::Vec2(i / d, i % d))
        .filter(|x| crate::zring::is_unit(num_integer::gcd(x.0, x.1), d))
        .map(|x| Submodule::span(&[x], d))
        .collect();
    Ok(LineSet::new(d, out))
}
