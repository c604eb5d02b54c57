//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a verification or consistency check failed,
//! `2` bad arguments (including values outside the mathematical domain or a
//! scan bound).

use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::exec::Execution;
use crate::lines::{
    count_lines_formula, count_through_formula, enumerate_lines, filter_through, point_valuations,
    prime_power_line_count, LineSet,
};
use crate::orbits::{orbit_count_formula, orbit_decompose, orbit_size_for};
use crate::sigma::{SigmaContext, SigmaReport};
use crate::symplectic::Vec2;
use crate::verify::{self, VerifyConfig};
use crate::zring::RingCtx;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default modulus bound for `enumerate`, `through` and `count --check`.
pub const DEFAULT_LINES_MAX_D: u64 = 64;
/// Default modulus bound for `orbits`.
pub const DEFAULT_ORBITS_MAX_D: u64 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "isolines",
    version,
    about = "Isotropic lines of Z_d^2: counts, enumeration, orbits and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of isotropic lines, with the per-prime breakdown.
    Count {
        #[arg(long)]
        d: u64,
        /// Also enumerate the lines and compare.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Largest d accepted for --check.
        #[arg(long, default_value_t = DEFAULT_LINES_MAX_D)]
        max_d: u64,
    },
    /// List every isotropic line as an HNF triple.
    Enumerate {
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_LINES_MAX_D)]
        max_d: u64,
    },
    /// Lines through a point "q,p" (coordinates reduced mod d).
    Through {
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_LINES_MAX_D)]
        max_d: u64,
    },
    /// Orbits of the lines under SL(2, Z_d).
    Orbits {
        #[arg(long)]
        d: u64,
        /// Compare orbit count and sizes with the closed forms.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_ORBITS_MAX_D)]
        max_d: u64,
    },
    /// The group of basis changes fixing span(p^k e1, p^(s-k) e2) over Z_(p^s).
    Sigma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the full formula-versus-oracle matrix.
    Verify {
        #[arg(long, default_value_t = 16)]
        max_d: u64,
        #[arg(long, default_value_t = 9)]
        max_ps: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli.command, err) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Count {
            d,
            check,
            format,
            max_d,
        } => cmd_count(d, check, format, max_d),
        Command::Enumerate { d, format, max_d } => cmd_enumerate(d, format, max_d),
        Command::Through {
            d,
            point,
            format,
            max_d,
        } => cmd_through(d, &point, format, max_d),
        Command::Orbits {
            d,
            check,
            format,
            max_d,
        } => cmd_orbits(d, check, format, max_d),
        Command::Sigma { p, s, k, format } => cmd_sigma(p, s, k, format),
        Command::Verify {
            max_d,
            max_ps,
            format,
        } => cmd_verify(max_d, max_ps, format, err),
    }
}

fn ring(d: u64, max_d: u64) -> std::result::Result<RingCtx, Failure> {
    let ctx = RingCtx::new(d)?;
    if d > max_d {
        return Err(usage(format!(
            "d={d} exceeds the bound {max_d} (raise it with --max-d)"
        )));
    }
    Ok(ctx)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_count(d: u64, check: bool, format: Format, max_d: u64) -> Outcome {
    let ctx = RingCtx::new(d)?;
    let total = count_lines_formula(&ctx);
    let enumerated = if check {
        Some(enumerate_lines(&ring(d, max_d)?)?.len() as u128)
    } else {
        None
    };
    let code = match enumerated {
        Some(n) if n != total => EXIT_CHECK_FAILED,
        _ => EXIT_OK,
    };
    let per_factor: Vec<(u64, u32, u128)> = ctx
        .factors()
        .iter()
        .map(|f| (f.p, f.s, prime_power_line_count(f.p, f.s)))
        .collect();
    let text = match format {
        Format::Json => {
            let mut v = json!({
                "d": d,
                "n_lines": total,
                "factors": per_factor.iter().map(|&(p, s, n)| json!({"p": p, "s": s, "n_lines": n})).collect::<Vec<_>>(),
            });
            if let Some(n) = enumerated {
                v["enumerated"] = json!(n);
            }
            to_json(&v)
        }
        Format::Csv => {
            let mut s = String::from("factor,n_lines\n");
            for (p, e, n) in &per_factor {
                let _ = writeln!(s, "{p}^{e},{n}");
            }
            let _ = writeln!(s, "total,{total}");
            if let Some(n) = enumerated {
                let _ = writeln!(s, "enumerated,{n}");
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:<12}{}\n", "factor", "lines");
            for (p, e, n) in &per_factor {
                let _ = writeln!(s, "{:<12}{n}", format!("{p}^{e}"));
            }
            let _ = writeln!(s, "{:<12}{total}", "total");
            if let Some(n) = enumerated {
                let _ = writeln!(s, "{:<12}{n}", "enumerated");
            }
            s
        }
    };
    Ok((text, code))
}

fn line_rows(lines: &LineSet, format: Format) -> String {
    match format {
        Format::Json => to_json(lines),
        Format::Csv => {
            let mut s = String::from("d,a,b,c\n");
            for m in lines {
                let (a, b, c) = m.hnf();
                let _ = writeln!(s, "{},{a},{b},{c}", m.modulus());
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:>6} {:>6} {:>6}  generators\n", "a", "b", "c");
            for m in lines {
                let (a, b, c) = m.hnf();
                let [g1, g2] = m.generators();
                let _ = writeln!(s, "{a:>6} {b:>6} {c:>6}  {g1} {g2}");
            }
            s
        }
    }
}

fn check_lines(lines: &LineSet) -> i32 {
    if lines.iter().all(|m| m.is_lagrangian()) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_enumerate(d: u64, format: Format, max_d: u64) -> Outcome {
    let ctx = ring(d, max_d)?;
    let lines = enumerate_lines(&ctx)?;
    let code = if lines.len() as u128 == count_lines_formula(&ctx) {
        check_lines(&lines)
    } else {
        EXIT_CHECK_FAILED
    };
    Ok((line_rows(&lines, format), code))
}

fn parse_point(text: &str, d: u64) -> std::result::Result<Vec2, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [q, p] = parts.as_slice() else {
        return Err(usage(format!("point must look like \"q,p\", got {text:?}")));
    };
    let parse = |s: &str| {
        s.parse::<i128>()
            .map_err(|_| usage(format!("bad coordinate {s:?} in point {text:?}")))
    };
    let (q, p) = (parse(q)?, parse(p)?);
    let d = d as i128;
    Ok(Vec2(q.rem_euclid(d) as u64, p.rem_euclid(d) as u64))
}

fn cmd_through(d: u64, point: &str, format: Format, max_d: u64) -> Outcome {
    let ctx = ring(d, max_d)?;
    let x = parse_point(point, d)?;
    let all = enumerate_lines(&ctx)?;
    let hits = filter_through(&all, x);
    let formula = count_through_formula(&ctx, x);
    let enumerated = hits.len() as u128;
    let code = if enumerated == formula {
        check_lines(&hits)
    } else {
        EXIT_CHECK_FAILED
    };
    let text = match format {
        Format::Json => to_json(&json!({
            "d": d,
            "point": [x.0, x.1],
            "valuations": point_valuations(&ctx, x),
            "lines": hits,
            "enumerated": enumerated,
            "formula": formula,
        })),
        Format::Csv => line_rows(&hits, Format::Csv),
        Format::Table => {
            let mut s = line_rows(&hits, Format::Table);
            let _ = writeln!(s, "point       {x}");
            let _ = writeln!(s, "enumerated  {enumerated}");
            let _ = writeln!(s, "formula     {formula}");
            s
        }
    };
    Ok((text, code))
}

fn cmd_orbits(d: u64, check: bool, format: Format, max_d: u64) -> Outcome {
    let ctx = ring(d, max_d)?;
    let orbits = orbit_decompose(&ctx)?;
    let mut code = EXIT_OK;
    if check {
        let count_ok = orbits.len() as u128 == orbit_count_formula(&ctx);
        let mut sizes_ok = true;
        for o in &orbits {
            sizes_ok &= orbit_size_for(&ctx, &o.k_vector)? == o.size;
        }
        if !(count_ok && sizes_ok) {
            code = EXIT_CHECK_FAILED;
        }
    }
    let join_k = |k: &[u32]| k.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
    let text = match format {
        Format::Json => to_json(&json!({ "d": d, "orbits": orbits })),
        Format::Csv => {
            let mut s = String::from("k,size,a,b,c\n");
            for o in &orbits {
                let (a, b, c) = o.representative.hnf();
                let _ = writeln!(s, "{},{},{a},{b},{c}", join_k(&o.k_vector), o.size);
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:<12}{:>8}  representative\n", "k", "size");
            for o in &orbits {
                let _ = writeln!(
                    s,
                    "{:<12}{:>8}  {}",
                    format!("({})", join_k(&o.k_vector)),
                    o.size,
                    o.representative
                );
            }
            s
        }
    };
    Ok((text, code))
}

fn cmd_sigma(p: u64, s: u32, k: u32, format: Format) -> Outcome {
    let ctx = SigmaContext::new(p, s, k)?;
    let report = SigmaReport::compute(&ctx, Execution::default())?;
    let code = if report.transversal {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    let rows = [
        ("p", report.p.to_string()),
        ("s", report.s.to_string()),
        ("k", report.k.to_string()),
        ("sigma_order", report.sigma_order.to_string()),
        ("n_D", report.n_d.to_string()),
        ("n_rho", report.n_rho.to_string()),
        ("transversal", report.transversal.to_string()),
    ];
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("key,value\n");
            for (key, v) in &rows {
                let _ = writeln!(out, "{key},{v}");
            }
            for (u, n) in &report.det_classes {
                let _ = writeln!(out, "det={u},{n}");
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for (key, v) in &rows {
                let _ = writeln!(out, "{key:<14}{v}");
            }
            for (u, n) in &report.det_classes {
                let _ = writeln!(out, "{:<14}{n}", format!("det={u}"));
            }
            out
        }
    };
    Ok((text, code))
}

fn cmd_verify(max_d: u64, max_ps: u64, format: Format, err: &mut dyn Write) -> Outcome {
    let config = VerifyConfig::new(max_d, max_ps)?;
    let report = verify::run(&config)?;
    // timings and diffs go to stderr so stdout stays reproducible
    for c in &report.checks {
        let _ = writeln!(err, "{:>10.2?}  {} {}", c.elapsed, c.name, c.params);
    }
    for c in report.failures() {
        let _ = writeln!(
            err,
            "FAIL {} {}: formula {} != oracle {}",
            c.name, c.params, c.formula_value, c.oracle_value
        );
    }
    let code = if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("status,name,params,formula,oracle\n");
            for c in &report.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    s,
                    "{status},{},{},{},{}",
                    c.name, c.params, c.formula_value, c.oracle_value
                );
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            for c in &report.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    s,
                    "{status}  {:<24}{:<20}formula={:<10}oracle={}",
                    c.name, c.params, c.formula_value, c.oracle_value
                );
            }
            let _ = writeln!(
                s,
                "passed {} failed {}",
                report.summary.passed, report.summary.failed
            );
            s
        }
    };
    Ok((text, code))
}
