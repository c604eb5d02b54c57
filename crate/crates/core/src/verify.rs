//! Formula-versus-oracle verification matrix.
//!
//! Each [`Check`] pairs a closed-form value with the value obtained by an
//! exhaustive computation. A check passes only on exact equality.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lines::{
    brute_force_lines_with, count_lines_formula, count_through_formula, enumerate_lines,
    filter_through,
};
use crate::orbits::{
    orbit_count_formula, orbit_decompose_with, orbit_index, orbit_size_for, orbit_size_formula,
};
use crate::sigma::{
    det_class_counts, partition_e_with, rho0_orbit, rho_orbit_count_formula, sigma_enumerate_with,
    sigma_order_formula, sigma_sl_order_formula, transversality_of, SigmaContext,
};
use crate::symplectic::{sl_order, Vec2, MAX_GROUP_SCAN};
use crate::zring::{units_count, RingCtx};

/// Largest modulus the pairwise line oracle is run on.
pub const ORACLE_MAX_D: u64 = 16;
/// Largest modulus the orbit decomposition is run on.
pub const ORBIT_MAX_D: u64 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_d: u64,
    pub max_ps: u64,
    pub exec: Execution,
}

impl VerifyConfig {
    pub fn new(max_d: u64, max_ps: u64) -> Result<Self> {
        if max_d < 2 {
            return Err(Error::domain(format!(
                "max-d must be at least 2, got {max_d}"
            )));
        }
        if max_ps < 2 {
            return Err(Error::domain(format!(
                "max-ps must be at least 2, got {max_ps}"
            )));
        }
        Ok(VerifyConfig {
            max_d,
            max_ps,
            exec: Execution::default(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub params: String,
    pub formula_value: u128,
    pub oracle_value: u128,
    pub pass: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    /// Run `f`, which yields `(name, params, formula, oracle)` rows; the
    /// block's wall time is attributed to each row it produced.
    fn block<F>(&mut self, f: F) -> Result<()>
    where
        F: FnOnce() -> Result<Vec<(&'static str, String, u128, u128)>>,
    {
        let start = Instant::now();
        let rows = f()?;
        let elapsed = start.elapsed();
        self.checks.extend(
            rows.into_iter()
                .map(|(name, params, formula, oracle)| Check {
                    name,
                    params,
                    formula_value: formula,
                    oracle_value: oracle,
                    pass: formula == oracle,
                    elapsed,
                }),
        );
        Ok(())
    }
}

fn points(d: u64) -> impl Iterator<Item = Vec2> {
    (0..d * d).map(move |i| Vec2(i / d, i % d))
}

/// Prime powers `p^s ≤ max` whose `GL` scan fits the scan limit.
pub fn sigma_prime_powers(max: u64) -> Vec<(u64, u32)> {
    (2..=max)
        .filter(|&q| (q as u128).pow(4) <= MAX_GROUP_SCAN)
        .filter_map(|q| {
            let ctx = RingCtx::new(q).ok()?;
            ctx.is_prime_power()
                .then(|| (ctx.factors()[0].p, ctx.factors()[0].s))
        })
        .collect()
}

pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    let exec = config.exec;
    let mut rec = Recorder { checks: Vec::new() };

    for d in 2..=config.max_d {
        let ctx = RingCtx::new(d)?;
        rec.block(|| {
            let lines = enumerate_lines(&ctx)?;
            let mut rows = vec![(
                "line_count",
                format!("d={d}"),
                count_lines_formula(&ctx),
                lines.len() as u128,
            )];
            let agree = points(d)
                .filter(|&x| {
                    filter_through(&lines, x).len() as u128 == count_through_formula(&ctx, x)
                })
                .count();
            rows.push((
                "through_point",
                format!("d={d}"),
                (d * d) as u128,
                agree as u128,
            ));
            Ok(rows)
        })?;
        if d <= ORACLE_MAX_D {
            rec.block(|| {
                let lines: BTreeSet<_> = enumerate_lines(&ctx)?.into_vec().into_iter().collect();
                let oracle: BTreeSet<_> = brute_force_lines_with(&ctx, exec)?
                    .into_vec()
                    .into_iter()
                    .collect();
                Ok(vec![
                    (
                        "oracle_count",
                        format!("d={d}"),
                        count_lines_formula(&ctx),
                        oracle.len() as u128,
                    ),
                    (
                        "oracle_set_difference",
                        format!("d={d}"),
                        0,
                        lines.symmetric_difference(&oracle).count() as u128,
                    ),
                ])
            })?;
        }
        if d <= ORBIT_MAX_D {
            rec.block(|| orbit_rows(&ctx, exec))?;
        }
    }

    for (p, s) in sigma_prime_powers(config.max_ps) {
        for k in 0..=s / 2 {
            rec.block(|| sigma_rows(p, s, k, exec))?;
        }
    }

    let failed = rec.checks.iter().filter(|c| !c.pass).count();
    Ok(VerifyReport {
        summary: Summary {
            passed: rec.checks.len() - failed,
            failed,
        },
        checks: rec.checks,
    })
}

fn orbit_rows(ctx: &RingCtx, exec: Execution) -> Result<Vec<(&'static str, String, u128, u128)>> {
    let d = ctx.modulus();
    let orbits = orbit_decompose_with(ctx, exec)?;
    let mut rows = vec![(
        "orbit_count",
        format!("d={d}"),
        orbit_count_formula(ctx),
        orbits.len() as u128,
    )];
    for o in &orbits {
        rows.push((
            "orbit_size",
            format!("d={d} k={:?}", o.k_vector),
            orbit_size_for(ctx, &o.k_vector)?,
            o.size,
        ));
    }
    // an orbit is separated when all its members share its k-vector and no other orbit has it
    let ks: Vec<&Vec<u32>> = orbits.iter().map(|o| &o.k_vector).collect();
    let mut separated = 0u128;
    for o in &orbits {
        let uniform = o
            .members
            .iter()
            .map(|m| orbit_index(ctx, m))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|k| *k == o.k_vector);
        let unique = ks.iter().filter(|k| ***k == o.k_vector).count() == 1;
        separated += (uniform && unique) as u128;
    }
    rows.push((
        "orbit_k_separation",
        format!("d={d}"),
        orbits.len() as u128,
        separated,
    ));
    rows.push((
        "orbit_partition_total",
        format!("d={d}"),
        count_lines_formula(ctx),
        orbits.iter().map(|o| o.size).sum(),
    ));
    Ok(rows)
}

fn sigma_rows(
    p: u64,
    s: u32,
    k: u32,
    exec: Execution,
) -> Result<Vec<(&'static str, String, u128, u128)>> {
    let ctx = SigmaContext::new(p, s, k)?;
    let q = ctx.modulus();
    let params = format!("p={p} s={s} k={k}");
    let group = sigma_enumerate_with(&ctx, exec)?;
    let part = partition_e_with(&group, exec);
    let n_units = units_count(p, s);
    let sl_count = group.sl_count() as u128;

    let mut rows = vec![
        (
            "sigma_order",
            params.clone(),
            sigma_order_formula(p, s, k)?,
            group.len() as u128,
        ),
        (
            "sigma_sl_order",
            params.clone(),
            sigma_sl_order_formula(p, s, k)?,
            sl_count,
        ),
        (
            "rho_orbit_count",
            params.clone(),
            rho_orbit_count_formula(p, s, k)?,
            part.rho_orbit_count() as u128,
        ),
        (
            "transversality",
            params.clone(),
            1,
            transversality_of(&part, q) as u128,
        ),
    ];
    // |SL| / |Σ ∩ SL| is the orbit size
    let quotient = if sl_count > 0 && sl_order(p, s).is_multiple_of(sl_count) {
        sl_order(p, s) / sl_count
    } else {
        0
    };
    rows.push((
        "orbit_size_from_sigma",
        params.clone(),
        orbit_size_formula(p, s, k)?,
        quotient,
    ));

    let classes = det_class_counts(&group);
    let per_class = group.len() as u128 / n_units;
    let even = classes
        .values()
        .filter(|&&c| c as u128 == per_class)
        .count();
    rows.push(("det_classes_equal", params.clone(), n_units, even as u128));

    // each cell must be exactly one ρ₀-orbit of size |U|
    let good_cells = part
        .cells
        .values()
        .filter(|cell| {
            let orbit = rho0_orbit(q, &cell[0]);
            orbit.len() as u128 == n_units && orbit.iter().all(|m| group.contains(m)) && {
                let mut sorted = (*cell).clone();
                sorted.sort_unstable();
                sorted == orbit
            }
        })
        .count();
    rows.push((
        "rho0_cells",
        params,
        part.cells.len() as u128,
        good_cells as u128,
    ));
    Ok(rows)
}
