//! The group `Σ_D(M)` of invertible changes of basis `P` for which the columns
//! of `P · diag(p^k, p^{s−k})` still generate the Lagrangian submodule
//! `M = span(p^k e₁, p^{s−k} e₂)` of `Z_{p^s}^2`, and the unit actions on it:
//!
//! * `ρ₀(u) · P = (u P₁ | u⁻¹ P₂)`
//! * `ρ₁(u₁, u₂) · P = (u₁ P₁ | u₂ P₂)`
//! * `h(λ) · (u₁, u₂) = (λ u₁, λ⁻¹ u₂)` on pairs of units.
//!
//! The `ρ₀`-orbits, labelled by determinant and by `ρ₁`-orbit, partition the
//! group into cells `E_ij`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::submodule::Submodule;
use crate::symplectic::{gl_order, is_gl, scan_matrices, sl_order, Mat2};
use crate::zring::{inv_mod, is_unit, mul_mod, units, units_count, PrimePower};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaContext {
    pp: PrimePower,
    k: u32,
    diag: Mat2,
    m0: Submodule,
}

impl SigmaContext {
    pub fn new(p: u64, s: u32, k: u32) -> Result<Self> {
        let pp = PrimePower::new(p, s)?;
        if k > s / 2 {
            return Err(Error::domain(format!("k={k} exceeds floor(s/2)={}", s / 2)));
        }
        let q = pp.modulus();
        let diag = Mat2::diag(pp.power(k) % q, pp.power(s - k) % q);
        let m0 = Submodule::span(&[diag.col1, diag.col2], q);
        Ok(SigmaContext { pp, k, diag, m0 })
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.pp.modulus()
    }

    /// `diag(p^k, p^{s−k})`.
    pub fn diag(&self) -> Mat2 {
        self.diag
    }

    /// The submodule spanned by the columns of the diagonal matrix.
    pub fn lagrangian(&self) -> Submodule {
        self.m0
    }

    pub fn is_middle(&self) -> bool {
        2 * self.k == self.pp.s
    }

    /// Whether `P` is invertible and `P · D` generates the reference submodule.
    pub fn admits(&self, p_mat: &Mat2) -> bool {
        self.preserves(&Mat2::IDENTITY, p_mat)
    }

    /// Whether `span(S P D) = span(S D)`, with `P` invertible.
    pub fn preserves(&self, s_mat: &Mat2, p_mat: &Mat2) -> bool {
        let q = self.modulus();
        if !is_gl(p_mat, q) {
            return false;
        }
        let sd = s_mat.mul(&self.diag, q);
        let spd = s_mat.mul(&p_mat.mul(&self.diag, q), q);
        Submodule::span(&[spd.col1, spd.col2], q) == Submodule::span(&[sd.col1, sd.col2], q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaGroup {
    ctx: SigmaContext,
    members: Vec<Mat2>,
}

impl SigmaGroup {
    pub fn context(&self) -> &SigmaContext {
        &self.ctx
    }

    pub fn members(&self) -> &[Mat2] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.members.binary_search(m).is_ok()
    }

    /// `|Σ_D(M) ∩ SL(2, Z_{p^s})|`.
    pub fn sl_count(&self) -> usize {
        let q = self.ctx.modulus();
        self.members.iter().filter(|m| m.det(q) == 1).count()
    }
}

/// Filter `GL(2, Z_{p^s})` down to `Σ_D(M)`, lexicographic order.
pub fn sigma_enumerate(ctx: &SigmaContext) -> Result<SigmaGroup> {
    sigma_enumerate_with(ctx, Execution::default())
}

pub fn sigma_enumerate_with(ctx: &SigmaContext, exec: Execution) -> Result<SigmaGroup> {
    let members = scan_matrices(ctx.modulus(), exec, |m| ctx.admits(m))?;
    Ok(SigmaGroup {
        ctx: ctx.clone(),
        members,
    })
}

fn check_k(s: u32, k: u32) -> Result<()> {
    if k > s / 2 {
        return Err(Error::domain(format!("k={k} exceeds floor(s/2)={}", s / 2)));
    }
    Ok(())
}

/// `|Σ_D(M)|`: `(p^s − p^{s−1})²·p^{2k}·p^s` when `2k < s`, `|GL(2, Z_{p^s})|` when `2k = s`.
pub fn sigma_order_formula(p: u64, s: u32, k: u32) -> Result<u128> {
    check_k(s, k)?;
    if 2 * k == s {
        return Ok(gl_order(p, s));
    }
    let p128 = p as u128;
    Ok(units_count(p, s).pow(2) * p128.pow(2 * k) * p128.pow(s))
}

/// `|Σ_D(M) ∩ SL|`: `(p^s − p^{s−1})·p^{s+2k}` when `2k < s`, `|SL(2, Z_{p^s})|` when `2k = s`.
pub fn sigma_sl_order_formula(p: u64, s: u32, k: u32) -> Result<u128> {
    check_k(s, k)?;
    if 2 * k == s {
        return Ok(sl_order(p, s));
    }
    Ok(units_count(p, s) * (p as u128).pow(s + 2 * k))
}

/// Number of `ρ₁`-orbits: `p^{s+2k}` when `2k < s`, `p^{2s} + p^{2s−1}` when `2k = s`.
pub fn rho_orbit_count_formula(p: u64, s: u32, k: u32) -> Result<u128> {
    check_k(s, k)?;
    let p = p as u128;
    if 2 * k == s {
        Ok(p.pow(2 * s) + p.pow(2 * s - 1))
    } else {
        Ok(p.pow(s + 2 * k))
    }
}

fn require_unit(u: u64, q: u64) -> Result<()> {
    if !is_unit(u, q) {
        return Err(Error::domain(format!("{u} is not a unit mod {q}")));
    }
    Ok(())
}

/// `ρ₀(u) · P = (u P₁ | u⁻¹ P₂)`.
pub fn rho0_act(q: u64, u: u64, p_mat: &Mat2) -> Result<Mat2> {
    let inv = inv_mod(u, q)?;
    Ok(p_mat.scale_cols(u % q, inv, q))
}

/// `ρ₁(u₁, u₂) · P = (u₁ P₁ | u₂ P₂)`.
pub fn rho1_act(q: u64, u1: u64, u2: u64, p_mat: &Mat2) -> Result<Mat2> {
    require_unit(u1, q)?;
    require_unit(u2, q)?;
    Ok(p_mat.scale_cols(u1 % q, u2 % q, q))
}

/// `h(λ) · (u₁, u₂) = (λ u₁, λ⁻¹ u₂)`.
pub fn h_act(q: u64, lambda: u64, pair: (u64, u64)) -> Result<(u64, u64)> {
    require_unit(pair.0, q)?;
    require_unit(pair.1, q)?;
    let inv = inv_mod(lambda, q)?;
    Ok((mul_mod(lambda, pair.0, q), mul_mod(inv, pair.1, q)))
}

/// Orbits of `h` on `U(Z_q)²`, each sorted, ordered by least member.
pub fn h_orbits(q: u64) -> Vec<Vec<(u64, u64)>> {
    let us = units(q);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &u1 in &us {
        for &u2 in &us {
            if seen.contains(&(u1, u2)) {
                continue;
            }
            let orbit: BTreeSet<(u64, u64)> = us
                .iter()
                .map(|&l| h_act(q, l, (u1, u2)).expect("units"))
                .collect();
            seen.extend(orbit.iter().copied());
            out.push(orbit.into_iter().collect());
        }
    }
    out
}

/// The `ρ₀`-orbit of `P`, sorted.
pub fn rho0_orbit(q: u64, p_mat: &Mat2) -> Vec<Mat2> {
    let set: BTreeSet<Mat2> = units(q)
        .into_iter()
        .map(|u| rho0_act(q, u, p_mat).expect("unit"))
        .collect();
    set.into_iter().collect()
}

/// The `ρ₁`-orbit of `P`, sorted.
pub fn rho1_orbit(q: u64, p_mat: &Mat2) -> Vec<Mat2> {
    let us = units(q);
    let set: BTreeSet<Mat2> = us
        .iter()
        .flat_map(|&u1| us.iter().map(move |&u2| p_mat.scale_cols(u1, u2, q)))
        .collect();
    set.into_iter().collect()
}

/// Least element of the `ρ₀`-orbit.
fn rho0_key(q: u64, us: &[u64], p_mat: &Mat2) -> Mat2 {
    us.iter()
        .map(|&u| p_mat.scale_cols(u, inv_mod(u, q).expect("unit"), q))
        .min()
        .expect("nonempty unit group")
}

/// Least element of the `ρ₁`-orbit. The order compares the first column
/// first, so the minimum is taken independently per column.
fn rho1_key(q: u64, us: &[u64], p_mat: &Mat2) -> Mat2 {
    let c1 = us
        .iter()
        .map(|&u| p_mat.col1.scale(u, q))
        .min()
        .expect("units");
    let c2 = us
        .iter()
        .map(|&u| p_mat.col2.scale(u, q))
        .min()
        .expect("units");
    Mat2::from_cols(c1, c2)
}

/// The partition of `Σ_D(M)` into cells `E_ij`: `i` the determinant, `j` the
/// index of the `ρ₁`-orbit (orbits numbered by their least member).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPartition {
    pub cells: BTreeMap<(u64, usize), Vec<Mat2>>,
    /// Least member of each `ρ₁`-orbit; `j` indexes this list.
    pub rho1_representatives: Vec<Mat2>,
    /// Least member of the `ρ₀`-orbit of every cell.
    pub rho0_representatives: BTreeMap<(u64, usize), BTreeSet<Mat2>>,
}

impl EPartition {
    /// `n_ρ`, the number of distinct `j`.
    pub fn rho_orbit_count(&self) -> usize {
        self.rho1_representatives.len()
    }
}

pub fn partition_e(group: &SigmaGroup) -> EPartition {
    partition_e_with(group, Execution::default())
}

pub fn partition_e_with(group: &SigmaGroup, exec: Execution) -> EPartition {
    let q = group.ctx.modulus();
    let us = units(q);
    let keys: Vec<(u64, Mat2, Mat2)> = exec.map_slice(&group.members, |m| {
        (m.det(q), rho0_key(q, &us, m), rho1_key(q, &us, m))
    });
    let rho1_representatives: Vec<Mat2> = keys
        .iter()
        .map(|k| k.2)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut cells: BTreeMap<(u64, usize), Vec<Mat2>> = BTreeMap::new();
    let mut rho0_representatives: BTreeMap<(u64, usize), BTreeSet<Mat2>> = BTreeMap::new();
    for (m, (det, r0, r1)) in group.members.iter().zip(&keys) {
        let j = rho1_representatives.binary_search(r1).expect("key present");
        cells.entry((*det, j)).or_default().push(*m);
        rho0_representatives
            .entry((*det, j))
            .or_default()
            .insert(*r0);
    }
    EPartition {
        cells,
        rho1_representatives,
        rho0_representatives,
    }
}

/// Every `ρ₁`-orbit meets every determinant class `D_u` in exactly one `ρ₀`-orbit.
pub fn transversality_check(group: &SigmaGroup) -> bool {
    transversality_of(&partition_e(group), group.ctx.modulus())
}

pub fn transversality_of(part: &EPartition, q: u64) -> bool {
    let us = units(q);
    (0..part.rho_orbit_count()).all(|j| {
        us.iter().all(|&u| {
            part.rho0_representatives
                .get(&(u, j))
                .is_some_and(|reps| reps.len() == 1)
        })
    })
}

/// Number of members with each unit determinant.
pub fn det_class_counts(group: &SigmaGroup) -> BTreeMap<u64, usize> {
    let q = group.ctx.modulus();
    let mut out: BTreeMap<u64, usize> = units(q).into_iter().map(|u| (u, 0)).collect();
    for m in &group.members {
        *out.entry(m.det(q)).or_default() += 1;
    }
    out
}

/// Machine-readable summary of one `Σ_D(M)` computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaReport {
    pub p: u64,
    pub s: u32,
    pub k: u32,
    pub sigma_order: usize,
    #[serde(rename = "n_D")]
    pub n_d: usize,
    pub n_rho: usize,
    pub det_classes: BTreeMap<u64, usize>,
    pub transversal: bool,
}

impl SigmaReport {
    pub fn compute(ctx: &SigmaContext, exec: Execution) -> Result<SigmaReport> {
        let group = sigma_enumerate_with(ctx, exec)?;
        let part = partition_e_with(&group, exec);
        Ok(SigmaReport {
            p: ctx.pp.p,
            s: ctx.pp.s,
            k: ctx.k,
            sigma_order: group.len(),
            n_d: group.sl_count(),
            n_rho: part.rho_orbit_count(),
            det_classes: det_class_counts(&group),
            transversal: transversality_of(&part, ctx.modulus()),
        })
    }
}
