//! Acceptance criteria 1-9. Prints one line per criterion and exits non-zero
//! if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use isolines::lines::{
    brute_force_lines, count_lines_formula, count_through_formula, crt_glue, crt_split,
    enumerate_lines, lines_through, point_valuations, prime_power_line_count,
};
use isolines::orbits::{
    generic_orbit_size, orbit_count_formula, orbit_decompose, orbit_index, orbit_size_for,
    orbit_size_formula,
};
use isolines::sigma::{
    det_class_counts, h_act, h_orbits, partition_e, rho0_act, rho0_orbit, rho1_act,
    rho_orbit_count_formula, sigma_enumerate, sigma_order_formula, sigma_sl_order_formula,
    transversality_of,
};
use isolines::symplectic::sl_order;
use isolines::zring::{mul_mod, units, units_count};
use isolines::{RingCtx, SigmaContext, Vec2};
use num_rational::Ratio;

type Outcome = Result<(), String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ctx(d: u64) -> RingCtx {
    RingCtx::new(d).unwrap()
}

const SIGMA_PRIME_POWERS: [(u64, u32); 10] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (2, 4),
    (5, 2),
    (3, 3),
];

fn sigma_contexts() -> impl Iterator<Item = SigmaContext> {
    SIGMA_PRIME_POWERS
        .iter()
        .flat_map(|&(p, s)| (0..=s / 2).map(move |k| SigmaContext::new(p, s, k).unwrap()))
}

fn c1_line_counts() -> Outcome {
    for d in 2..=64 {
        let c = ctx(d);
        let n = enumerate_lines(&c).map_err(|e| e.to_string())?.len() as u128;
        ensure(n == count_lines_formula(&c), || {
            format!("d={d}: enumerated {n}, formula {}", count_lines_formula(&c))
        })?;
    }
    for (d, n) in [(4, 7), (9, 13), (12, 28), (36, 91)] {
        let got = enumerate_lines(&ctx(d)).unwrap().len();
        ensure(got == n, || format!("spot d={d}: {got} != {n}"))?;
    }
    Ok(())
}

fn c2_isotropic_is_lagrangian() -> Outcome {
    for d in 2..=16 {
        let c = ctx(d);
        let oracle = common::isotropic_lines(d);
        let lagrangian: BTreeSet<_> = enumerate_lines(&c)
            .unwrap()
            .iter()
            .map(common::line_elements)
            .collect();
        ensure(oracle == lagrangian, || {
            format!("d={d}: external oracle differs")
        })?;
        ensure(
            brute_force_lines(&c).unwrap() == enumerate_lines(&c).unwrap(),
            || format!("d={d}: library oracle differs"),
        )?;
        ensure(
            enumerate_lines(&c)
                .unwrap()
                .iter()
                .all(|m| m.is_lagrangian()),
            || format!("d={d}: non-Lagrangian line"),
        )?;
    }
    Ok(())
}

fn c3_through_point() -> Outcome {
    for d in 2..=16 {
        let c = ctx(d);
        let oracle = common::isotropic_lines(d);
        for q in 0..d {
            for p in 0..d {
                let x = Vec2(q, p);
                let got = lines_through(&c, x).unwrap().len() as u128;
                let formula = count_through_formula(&c, x);
                let external = oracle.iter().filter(|s| s.contains(&(q, p))).count() as u128;
                ensure(got == formula && got == external, || {
                    format!("d={d} x={x}: enumerated {got}, formula {formula}, oracle {external}")
                })?;
                let t = point_valuations(&c, x);
                if t.iter().all(|&v| v == 0) {
                    ensure(formula == 1, || {
                        format!("d={d} x={x}: free point not on one line")
                    })?;
                }
            }
        }
        ensure(
            count_through_formula(&c, Vec2(0, 0)) == count_lines_formula(&c),
            || format!("d={d}: null vector count"),
        )?;
    }
    Ok(())
}

fn c4_orbits() -> Outcome {
    for d in [2u64, 3, 4, 6, 8, 9, 12, 16] {
        let c = ctx(d);
        let orbits = orbit_decompose(&c).unwrap();
        ensure(orbits.len() as u128 == orbit_count_formula(&c), || {
            format!(
                "d={d}: {} orbits, formula {}",
                orbits.len(),
                orbit_count_formula(&c)
            )
        })?;
        let ks: BTreeSet<_> = orbits.iter().map(|o| o.k_vector.clone()).collect();
        ensure(ks.len() == orbits.len(), || {
            format!("d={d}: repeated k-vector")
        })?;
        for o in &orbits {
            let expected = orbit_size_for(&c, &o.k_vector).unwrap();
            ensure(o.size == expected, || {
                format!("d={d} k={:?}: size {} != {expected}", o.k_vector, o.size)
            })?;
            ensure(
                o.members
                    .iter()
                    .all(|m| orbit_index(&c, m).unwrap() == o.k_vector),
                || format!("d={d} k={:?}: member with another k", o.k_vector),
            )?;
        }
        let mut sizes: Vec<usize> = orbits.iter().map(|o| o.size as usize).collect();
        sizes.sort_unstable();
        ensure(sizes == common::orbit_sizes(d), || {
            format!("d={d}: external orbit sizes differ")
        })?;
    }
    Ok(())
}

fn c5_sigma_counts() -> Outcome {
    for ctx in sigma_contexts() {
        let pp = ctx.prime_power();
        let (p, s, k) = (pp.p, pp.s, ctx.k());
        let tag = format!("(p,s,k)=({p},{s},{k})");
        let group = sigma_enumerate(&ctx).unwrap();
        let order = sigma_order_formula(p, s, k).unwrap();
        ensure(group.len() as u128 == order, || {
            format!("{tag}: |Σ| {} != {order}", group.len())
        })?;
        let external: BTreeSet<_> = common::sigma(p, s, k).into_iter().collect();
        let mine: BTreeSet<_> = group.members().iter().map(common::to_rows).collect();
        ensure(external == mine, || format!("{tag}: external Σ differs"))?;
        let n_d = sigma_sl_order_formula(p, s, k).unwrap();
        ensure(group.sl_count() as u128 == n_d, || {
            format!("{tag}: |Σ∩SL| {} != {n_d}", group.sl_count())
        })?;
        let size = orbit_size_formula(p, s, k).unwrap();
        ensure(
            sl_order(p, s).is_multiple_of(n_d) && sl_order(p, s) / n_d == size,
            || format!("{tag}: |SL|/n_D != orbit size {size}"),
        )?;
        let q = pp.modulus();
        if q <= 16 {
            let orbit = orbit_decompose(&RingCtx::new(q).unwrap()).unwrap();
            let o = orbit.iter().find(|o| o.k_vector == [k]).unwrap();
            ensure(o.size == size, || {
                format!("{tag}: decomposed orbit size {}", o.size)
            })?;
        }
    }
    Ok(())
}

fn c6_actions() -> Outcome {
    for ctx in sigma_contexts() {
        let pp = ctx.prime_power();
        let (p, s, k) = (pp.p, pp.s, ctx.k());
        let q = pp.modulus();
        let tag = format!("(p,s,k)=({p},{s},{k})");
        let group = sigma_enumerate(&ctx).unwrap();
        let us = units(q);
        let probe: Vec<u64> = us.iter().copied().take(4).collect();
        for m in group.members() {
            for &u in &probe {
                let r0 = rho0_act(q, u, m).unwrap();
                ensure(group.contains(&r0) && r0.det(q) == m.det(q), || {
                    format!("{tag}: ρ₀ leaves Σ or changes det")
                })?;
                for &u2 in &probe {
                    let r1 = rho1_act(q, u, u2, m).unwrap();
                    ensure(group.contains(&r1), || format!("{tag}: ρ₁ leaves Σ"))?;
                    for &v in &probe {
                        let a = rho1_act(q, u, u2, &rho0_act(q, v, m).unwrap()).unwrap();
                        let b = rho0_act(q, v, &rho1_act(q, u, u2, m).unwrap()).unwrap();
                        ensure(a == b, || format!("{tag}: ρ₀ and ρ₁ do not commute at {m}"))?;
                    }
                }
            }
        }
        let part = partition_e(&group);
        let n_units = units_count(p, s) as usize;
        for cell in part.cells.values() {
            let orbit = rho0_orbit(q, &cell[0]);
            let mut sorted = cell.clone();
            sorted.sort_unstable();
            ensure(orbit.len() == n_units && sorted == orbit, || {
                format!("{tag}: cell is not one ρ₀-orbit of size |U|")
            })?;
            let det = cell[0].det(q);
            ensure(cell.iter().all(|m| m.det(q) == det), || {
                format!("{tag}: mixed determinants in a cell")
            })?;
        }
        ensure(transversality_of(&part, q), || {
            format!("{tag}: transversality fails")
        })?;
        let counts = det_class_counts(&group);
        let first = *counts.values().next().unwrap();
        ensure(
            counts.len() == n_units && counts.values().all(|&c| c == first),
            || format!("{tag}: uneven det classes"),
        )?;
        let n_rho = rho_orbit_count_formula(p, s, k).unwrap();
        let expected = if 2 * k < s {
            (p as u128).pow(s + 2 * k)
        } else {
            (p as u128).pow(2 * s) + (p as u128).pow(2 * s - 1)
        };
        ensure(
            n_rho == expected && part.rho_orbit_count() as u128 == n_rho,
            || {
                format!(
                    "{tag}: n_ρ {} vs {n_rho} vs {expected}",
                    part.rho_orbit_count()
                )
            },
        )?;
        // h: orbits are exactly the fibres of (u1, u2) ↦ u1·u2
        let orbits = h_orbits(q);
        ensure(orbits.len() == n_units, || {
            format!("{tag}: {} h-orbits", orbits.len())
        })?;
        for orbit in &orbits {
            let (u1, u2) = orbit[0];
            let product = mul_mod(u1, u2, q);
            ensure(
                orbit.iter().all(|&(a, b)| mul_mod(a, b, q) == product),
                || format!("{tag}: h changes u1·u2"),
            )?;
            let expected: BTreeSet<(u64, u64)> =
                us.iter().map(|&l| h_act(q, l, (u1, u2)).unwrap()).collect();
            let fibre: BTreeSet<(u64, u64)> = us
                .iter()
                .flat_map(|&a| us.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| mul_mod(a, b, q) == product)
                .collect();
            ensure(
                orbit.iter().copied().collect::<BTreeSet<_>>() == expected && expected == fibre,
                || format!("{tag}: h-orbit characterization fails at ({u1},{u2})"),
            )?;
        }
    }
    Ok(())
}

fn c7_half_boundary() -> Outcome {
    for p in [2u64, 3, 5, 7] {
        for s in [2u32, 4, 6] {
            let k = s / 2;
            let r = generic_orbit_size(p, s, k);
            ensure(
                r == Ratio::new(p as i128 + 1, p as i128) && !r.is_integer(),
                || format!("p={p} s={s}: generic expression gave {r}"),
            )?;
            ensure(orbit_size_formula(p, s, k).unwrap() == 1, || {
                format!("p={p} s={s}: guard missing")
            })?;
        }
    }
    for d in [4u64, 9, 16] {
        let c = ctx(d);
        let s = c.factors()[0].s;
        let o = orbit_decompose(&c).unwrap();
        let middle = o.iter().find(|o| o.k_vector == [s / 2]).unwrap();
        ensure(middle.size == 1, || {
            format!("d={d}: middle orbit has {} lines", middle.size)
        })?;
    }
    Ok(())
}

fn c8_crt() -> Outcome {
    for d in [6u64, 12, 36] {
        let c = ctx(d);
        let all = enumerate_lines(&c).unwrap();
        for m in &all {
            let parts = crt_split(&c, m).unwrap();
            ensure(crt_glue(&c, &parts).unwrap() == *m, || {
                format!("d={d}: round trip fails at {m}")
            })?;
        }
        let per: Vec<_> = (0..c.factors().len())
            .map(|i| enumerate_lines(&c.factor_ctx(i)).unwrap().into_vec())
            .collect();
        let mut glued = BTreeSet::new();
        let mut stack = vec![Vec::new()];
        for lines in &per {
            stack = stack
                .into_iter()
                .flat_map(|prefix: Vec<_>| {
                    lines.iter().map(move |l| {
                        let mut v = prefix.clone();
                        v.push(*l);
                        v
                    })
                })
                .collect();
        }
        for parts in &stack {
            glued.insert(crt_glue(&c, parts).unwrap());
        }
        let all_set: BTreeSet<_> = all.iter().copied().collect();
        ensure(glued == all_set, || {
            format!("d={d}: glue is not onto the lines")
        })?;
    }
    for d in 2..=64u64 {
        let c = ctx(d);
        let product: u128 = c
            .factors()
            .iter()
            .map(|f| prime_power_line_count(f.p, f.s))
            .product();
        let n = enumerate_lines(&c).unwrap().len() as u128;
        ensure(n == product, || format!("d={d}: {n} != product {product}"))?;
    }
    Ok(())
}

fn c9_verify_cli() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_isolines"))
        .args([
            "verify", "--max-d", "16", "--max-ps", "27", "--format", "json",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let failed = report["summary"]["failed"].as_u64();
    let passed = report["summary"]["passed"].as_u64().unwrap_or(0);
    let has_27 = report["checks"]
        .as_array()
        .is_some_and(|c| c.iter().any(|c| c["params"] == "p=3 s=3 k=1"));
    ensure(
        out.status.code() == Some(0) && failed == Some(0) && passed > 0 && has_27,
        || {
            format!(
                "exit {:?}, failed {failed:?}, passed {passed}, sigma through 27: {has_27}",
                out.status.code()
            )
        },
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "C1",
            "line counts, d in [2,64]",
            c1_line_counts,
            Duration::from_secs(5),
        ),
        (
            "C2",
            "isotropic lines = Lagrangian submodules, d <= 16",
            c2_isotropic_is_lagrangian,
            Duration::from_secs(30),
        ),
        (
            "C3",
            "lines through every point, d <= 16",
            c3_through_point,
            Duration::from_secs(30),
        ),
        (
            "C4",
            "SL orbit structure",
            c4_orbits,
            Duration::from_secs(60),
        ),
        (
            "C5",
            "sigma orders and n_D chain",
            c5_sigma_counts,
            Duration::from_secs(120),
        ),
        (
            "C6",
            "rho0/rho1/h action suite",
            c6_actions,
            Duration::from_secs(60),
        ),
        (
            "C7",
            "k = s/2 orbit-size guard",
            c7_half_boundary,
            Duration::from_secs(10),
        ),
        (
            "C8",
            "CRT bijection and multiplicativity",
            c8_crt,
            Duration::from_secs(10),
        ),
        (
            "C9",
            "verify --max-d 16 --max-ps 27",
            c9_verify_cli,
            Duration::from_secs(300),
        ),
    ];
    let mut failures = 0;
    for (id, name, f, budget) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            ensure(elapsed <= budget, || {
                format!("took {elapsed:.2?}, budget {budget:?}")
            })
        });
        match result {
            Ok(()) => println!("[acceptance] {id} {name} ... PASS ({elapsed:.2?})"),
            Err(why) => {
                failures += 1;
                println!("[acceptance] {id} {name} ... FAIL ({elapsed:.2?}): {why}");
            }
        }
    }
    println!("[acceptance] {} passed, {failures} failed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
