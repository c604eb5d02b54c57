//! Enumeration and counting of the isotropic lines of `Z_d^2`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::submodule::Submodule;
use crate::symplectic::{omega, vec_valuation, Vec2};
use crate::zring::RingCtx;

/// Largest `σ(d)·τ(d)` (size of the HNF triple scan) [`enumerate_lines`] accepts.
pub const MAX_TRIPLE_SCAN: u128 = 50_000_000;

/// Largest modulus the pairwise brute-force oracle accepts.
pub const MAX_ORACLE_MODULUS: u64 = 32;

/// All isotropic lines of `Z_d^2` (or a filtered subset), sorted by HNF triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LineSet {
    #[serde(skip)]
    d: u64,
    lines: Vec<Submodule>,
}

impl LineSet {
    pub(crate) fn new(d: u64, mut lines: Vec<Submodule>) -> Self {
        lines.sort_unstable();
        lines.dedup();
        LineSet { d, lines }
    }

    pub fn modulus(&self) -> u64 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[Submodule] {
        &self.lines
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Submodule> {
        self.lines.iter()
    }

    pub fn into_vec(self) -> Vec<Submodule> {
        self.lines
    }

    pub fn position(&self, m: &Submodule) -> Option<usize> {
        self.lines.binary_search(m).ok()
    }
}

impl<'a> IntoIterator for &'a LineSet {
    type Item = &'a Submodule;
    type IntoIter = std::slice::Iter<'a, Submodule>;

    fn into_iter(self) -> Self::IntoIter {
        self.lines.iter()
    }
}

fn divisors(d: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= d {
        if d.is_multiple_of(i) {
            small.push(i);
            if i * i != d {
                large.push(d / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Scan every HNF triple `(a, b, c)` and keep the Lagrangian submodules.
pub fn enumerate_lines(ctx: &RingCtx) -> Result<LineSet> {
    let d = ctx.modulus();
    let divs = divisors(d);
    let sigma: u128 = divs.iter().map(|&x| x as u128).sum();
    let needed = sigma * divs.len() as u128;
    if needed > MAX_TRIPLE_SCAN {
        return Err(Error::Resource {
            what: "HNF triple scan",
            needed,
            limit: MAX_TRIPLE_SCAN,
        });
    }
    let mut out = Vec::new();
    for &a in &divs {
        for &b in &divs {
            for c in 0..a {
                if let Ok(m) = Submodule::from_hnf(d, a, b, c) {
                    if m.is_lagrangian() {
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(LineSet::new(d, out))
}

/// Oracle: every subgroup of `Z_d^2` is generated by two elements, so span
/// every pair of points, list the span's elements by direct combination and
/// keep those with `d` elements whose pairwise symplectic products vanish.
pub fn brute_force_lines(ctx: &RingCtx) -> Result<LineSet> {
    brute_force_lines_with(ctx, Execution::default())
}

pub fn brute_force_lines_with(ctx: &RingCtx, exec: Execution) -> Result<LineSet> {
    let d = ctx.modulus();
    if d > MAX_ORACLE_MODULUS {
        return Err(Error::Resource {
            what: "pairwise line oracle",
            needed: d as u128,
            limit: MAX_ORACLE_MODULUS as u128,
        });
    }
    let n = d * d;
    // one task per first generator x; second generator y ranges over all points
    let found: Vec<BTreeSet<Vec<Vec2>>> = exec.filter_map_range(n, |ix| {
        let x = Vec2(ix / d, ix % d);
        let mut seen = BTreeSet::new();
        for iy in 0..n {
            let y = Vec2(iy / d, iy % d);
            let mut set: Vec<Vec2> = (0..d)
                .flat_map(|i| (0..d).map(move |j| (i, j)))
                .map(|(i, j)| x.scale(i, d).add(y.scale(j, d), d))
                .collect();
            set.sort_unstable();
            set.dedup();
            if set.len() as u64 != d || seen.contains(&set) {
                continue;
            }
            let isotropic = set
                .iter()
                .all(|&u| set.iter().all(|&v| omega(u, v, d) == 0));
            if isotropic {
                seen.insert(set);
            }
        }
        Some(seen)
    });
    let sets: BTreeSet<Vec<Vec2>> = found.into_iter().flatten().collect();
    let lines = sets.iter().map(|set| Submodule::span(set, d)).collect();
    Ok(LineSet::new(d, lines))
}

/// `n_L(d) = ∏ (p_i^{s_i+1} − 1)/(p_i − 1)`.
pub fn count_lines_formula(ctx: &RingCtx) -> u128 {
    ctx.factors()
        .iter()
        .map(|f| prime_power_line_count(f.p, f.s))
        .product()
}

/// `n_L(p^s) = (p^{s+1} − 1)/(p − 1)`.
pub fn prime_power_line_count(p: u64, s: u32) -> u128 {
    let p = p as u128;
    (p.pow(s + 1) - 1) / (p - 1)
}

/// The lines of `Z_d^2` containing `x`.
pub fn lines_through(ctx: &RingCtx, x: Vec2) -> Result<LineSet> {
    let all = enumerate_lines(ctx)?;
    Ok(filter_through(&all, x))
}

/// Filter an already enumerated line set by membership of `x`.
pub fn filter_through(all: &LineSet, x: Vec2) -> LineSet {
    let x = x.reduce(all.d);
    LineSet::new(
        all.d,
        all.iter().copied().filter(|m| m.contains(x)).collect(),
    )
}

/// `t_i = v_{p_i}(π_i(x))` for every prime factor.
pub fn point_valuations(ctx: &RingCtx, x: Vec2) -> Vec<u32> {
    ctx.factors()
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let xi = Vec2(ctx.crt_project(x.0, i), ctx.crt_project(x.1, i));
            vec_valuation(f, xi)
        })
        .collect()
}

/// `n_L(d; x) = ∏ (p_i^{t_i+1} − 1)/(p_i − 1)` with `t_i` the valuation of the `i`-th projection.
pub fn count_through_formula(ctx: &RingCtx, x: Vec2) -> u128 {
    ctx.factors()
        .iter()
        .zip(point_valuations(ctx, x))
        .map(|(f, t)| prime_power_line_count(f.p, t))
        .product()
}

fn require_lagrangian(m: &Submodule, d: u64) -> Result<()> {
    if m.modulus() != d {
        return Err(Error::domain(format!("{m} is not over Z_{d}")));
    }
    if !m.is_lagrangian() {
        return Err(Error::domain(format!("{m} is not Lagrangian")));
    }
    Ok(())
}

/// Chinese projections `π_i(ℓ)`, one Lagrangian submodule per prime-power factor.
pub fn crt_split(ctx: &RingCtx, line: &Submodule) -> Result<Vec<Submodule>> {
    require_lagrangian(line, ctx.modulus())?;
    Ok(ctx
        .factors()
        .iter()
        .map(|f| {
            let q = f.modulus();
            let gens = line.generators().map(|g| g.reduce(q));
            Submodule::span(&gens, q)
        })
        .collect())
}

/// The set `{ x ∈ Z_d^2 : π_i(x) ∈ parts[i] for all i }`.
pub fn crt_glue(ctx: &RingCtx, parts: &[Submodule]) -> Result<Submodule> {
    if parts.len() != ctx.factors().len() {
        return Err(Error::domain(format!(
            "expected {} parts, got {}",
            ctx.factors().len(),
            parts.len()
        )));
    }
    let k = parts.len();
    let mut gens = Vec::with_capacity(2 * k);
    for (i, (part, f)) in parts.iter().zip(ctx.factors()).enumerate() {
        require_lagrangian(part, f.modulus())?;
        // lift each generator to a vector that vanishes in every other factor
        for g in part.generators() {
            let mut r0 = vec![0; k];
            let mut r1 = vec![0; k];
            r0[i] = g.0;
            r1[i] = g.1;
            gens.push(Vec2(ctx.crt_lift(&r0)?, ctx.crt_lift(&r1)?));
        }
    }
    Ok(Submodule::span(&gens, ctx.modulus()))
}
