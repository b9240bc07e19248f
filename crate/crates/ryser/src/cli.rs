//! Command-line front end.
//!
//! Exit codes: 0 = success / all checks pass, 1 = a check failed or the
//! input is not the kind of design the command needs, 2 = usage, file, or
//! parse errors.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::One;

use crate::classify::{classify_design, ClassificationReport, TwoBlockVerdict};
use crate::design::{catalog, DesignKind, IncidenceStructure};
use crate::error::Error;
use crate::linalg::{check_gram, gram_determinant, incidence_matrix, ryser_inverse, GramCheck};
use crate::params::{block_signatures, check_identities, ryser_profile};
use crate::scan::scan_params;

#[derive(Parser)]
#[command(
    name = "ryser",
    about = "Construct, verify, and classify Ryser designs with exact arithmetic",
    after_help = "Scanning starts at lambda = 2: the rho bounds used as filters assume \
                  a block intersection number larger than 1."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in symmetric designs.
    Catalog,
    /// Write a design file, from the catalog or from a difference set.
    Build {
        /// Catalog entry name (see `catalog`).
        #[arg(long, conflicts_with = "ds")]
        name: Option<String>,
        /// Difference set as `v:p1,p2,...`, developed modulo v.
        #[arg(long)]
        ds: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Complement a design with respect to one block.
    Complement {
        #[arg(short, long)]
        input: PathBuf,
        /// 0-based index of the block to keep.
        #[arg(long)]
        block: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Classify a design file as symmetric, Ryser, or invalid.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Print the full parameter profile, block signatures, and the exact
    /// identity report of a Ryser design.
    Params {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Run the Gram, determinant, and closed-form inverse checks.
    Invert {
        #[arg(short, long)]
        input: PathBuf,
        /// Also print the inverse matrix (rows follow the E1-first point
        /// order).
        #[arg(long)]
        dump: bool,
    },
    /// Run every Type-1 test, bound, and necessary condition.
    Classify {
        #[arg(short, long)]
        input: PathBuf,
        /// Emit one machine-readable JSON object instead of key=value
        /// lines.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate admissible parameter tuples (v, lambda, r, D).
    Scan {
        #[arg(long = "lam-max")]
        lam_max: i64,
        #[arg(long = "r-max")]
        r_max: i64,
        /// Restrict D to {0, -1}.
        #[arg(long = "type1-only")]
        type1_only: bool,
        /// One flat JSON object per candidate.
        #[arg(long)]
        json: bool,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // help/version are not errors
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Catalog => cmd_catalog(),
        Command::Build { name, ds, output } => cmd_build(name, ds, &output),
        Command::Complement {
            input,
            block,
            output,
        } => cmd_complement(&input, block, &output),
        Command::Verify { input } => cmd_verify(&input),
        Command::Params { input } => cmd_params(&input),
        Command::Invert { input, dump } => cmd_invert(&input, dump),
        Command::Classify { input, json } => cmd_classify(&input, json),
        Command::Scan {
            lam_max,
            r_max,
            type1_only,
            json,
        } => cmd_scan(lam_max, r_max, type1_only, json),
    }
}

fn fail(code: i32, msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    code
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Parse { .. } => 2,
        Error::InvalidInput(_) | Error::Inconsistency(_) => 1,
    }
}

fn load(path: &Path) -> Result<IncidenceStructure, Error> {
    let text = std::fs::read_to_string(path)?;
    IncidenceStructure::parse(&text)
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_indices(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_catalog() -> i32 {
    for e in catalog() {
        let base = e
            .base
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",");
        println!(
            "{}: v={} k={} lambda={} base={{{base}}}",
            e.name, e.v, e.expected_k, e.expected_lam_prime
        );
    }
    0
}

fn cmd_build(name: Option<String>, ds: Option<String>, output: &Path) -> i32 {
    let structure = match (name, ds) {
        (Some(name), None) => {
            let Some(entry) = catalog().into_iter().find(|e| e.name == name) else {
                return fail(2, format!("unknown catalog entry '{name}'"));
            };
            match entry.build() {
                Ok(s) => s,
                Err(err) => return fail(exit_code_for(&err), err),
            }
        }
        (None, Some(ds)) => {
            let Some((v_str, points_str)) = ds.split_once(':') else {
                return fail(2, "--ds expects 'v:p1,p2,...'");
            };
            let Ok(v) = v_str.trim().parse::<usize>() else {
                return fail(2, format!("invalid v in --ds: '{v_str}'"));
            };
            let mut base = Vec::new();
            for tok in points_str.split(',') {
                match tok.trim().parse::<usize>() {
                    Ok(p) => base.push(p),
                    Err(_) => return fail(2, format!("invalid point in --ds: '{tok}'")),
                }
            }
            match IncidenceStructure::from_difference_set(v, &base) {
                Ok(s) => s,
                Err(err) => return fail(exit_code_for(&err), err),
            }
        }
        _ => return fail(2, "exactly one of --name or --ds is required"),
    };
    if let Err(err) = std::fs::write(output, structure.to_des_string()) {
        return fail(2, err);
    }
    0
}

fn cmd_complement(input: &Path, block: usize, output: &Path) -> i32 {
    let s = match load(input) {
        Ok(s) => s,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    if block >= s.v() {
        return fail(2, format!("--block {block} out of range (v={})", s.v()));
    }
    let complemented = match s.complement(block) {
        Ok(c) => c,
        Err(err) => return fail(1, err),
    };
    if let Err(err) = std::fs::write(output, complemented.to_des_string()) {
        return fail(2, err);
    }
    0
}

fn cmd_verify(input: &Path) -> i32 {
    let s = match load(input) {
        Ok(s) => s,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    let kind = s.verify();
    println!("{kind}");
    match kind {
        DesignKind::Invalid { .. } => 1,
        _ => 0,
    }
}

fn cmd_params(input: &Path) -> i32 {
    let s = match load(input) {
        Ok(s) => s,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    let p = match ryser_profile(&s) {
        Ok(p) => p,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    println!(
        "profile: v={} lambda={} r1={} r2={} e1={} e2={} rho={}/{} g={} a={} D={} x={} y={}",
        p.v, p.lam, p.r1, p.r2, p.e1, p.e2, p.c, p.d, p.g, p.a, p.seress_d, p.x, p.y
    );
    let sigs = match block_signatures(&s, &p) {
        Ok(sigs) => sigs,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    for sig in &sigs {
        println!(
            "block {}: size={} t={} tau1={} tau2={}",
            sig.block_index, sig.size, sig.t, sig.tau1, sig.tau2
        );
    }
    let report = match check_identities(&s, &p) {
        Ok(r) => r,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    let mut failures = 0usize;
    for check in &report.checks {
        let status = if check.pass { "pass" } else { "FAIL" };
        println!(
            "identity {}: lhs={} rhs={} {status}",
            check.name,
            fmt_rat(&check.lhs),
            fmt_rat(&check.rhs)
        );
        if !check.pass {
            failures += 1;
        }
    }
    println!(
        "identities: {} pass, {failures} fail",
        report.checks.len() - failures
    );
    if failures == 0 {
        0
    } else {
        1
    }
}

fn cmd_invert(input: &Path, dump: bool) -> i32 {
    let s = match load(input) {
        Ok(s) => s,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    let p = match ryser_profile(&s) {
        Ok(p) => p,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    let mut all_pass = true;

    match check_gram(&s, &p) {
        GramCheck::Pass => {
            println!("gram identities: pass");
        }
        GramCheck::Fail { identity, row, col } => {
            println!("gram identities: FAIL ({identity} at entry ({row}, {col}))");
            all_pass = false;
        }
    }

    let (closed, direct) = gram_determinant(&s, &p);
    let det_ok = closed == direct;
    println!(
        "determinant: closed={} direct={} {}",
        fmt_rat(&closed),
        fmt_rat(&direct),
        if det_ok { "pass" } else { "FAIL" }
    );
    all_pass &= det_ok;

    match ryser_inverse(&s, &p) {
        Ok(inv) => {
            println!("closed-form inverse: verified (A*inv = inv*A = I)");
            let elim = incidence_matrix(&s, &p.e1_points)
                .matrix
                .inverse()
                .expect("determinant is nonzero");
            let elim_ok = inv == elim;
            println!(
                "inverse matches elimination: {}",
                if elim_ok { "pass" } else { "FAIL" }
            );
            all_pass &= elim_ok;
            if dump {
                print!("{}", inv.dump());
            }
        }
        Err(err) => {
            println!("closed-form inverse: FAIL ({err})");
            all_pass = false;
        }
    }
    if all_pass {
        0
    } else {
        1
    }
}

fn tri_state_str(report: &ClassificationReport) -> String {
    report.type1_by_columns.to_string()
}

fn cmd_classify(input: &Path, json: bool) -> i32 {
    let s = match load(input) {
        Ok(s) => s,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    let report = match classify_design(&s) {
        Ok(r) => r,
        Err(err) => return fail(exit_code_for(&err), err),
    };
    if json {
        println!("{}", classification_json(&report));
    } else {
        print_classification(&report);
    }
    if report.all_pass() {
        0
    } else {
        1
    }
}

fn print_classification(report: &ClassificationReport) {
    let p = &report.profile;
    println!("v={}", p.v);
    println!("lambda={}", p.lam);
    println!("r1={}", p.r1);
    println!("r2={}", p.r2);
    println!("e1={}", p.e1);
    println!("e2={}", p.e2);
    println!("rho={}/{}", p.c, p.d);
    println!("g={}", p.g);
    println!("a={}", p.a);
    println!("D={}", p.seress_d);
    println!("x={}", p.x);
    println!("y={}", p.y);
    println!("type1_by_columns={}", tri_state_str(report));
    println!("type1_by_D={}", report.type1_by_d);
    println!("necessary_sq_value={}", report.necessary.sq_value);
    println!("necessary_is_square={}", report.necessary.is_square);
    if let Some(root) = &report.necessary.root {
        println!("necessary_root={root}");
    }
    println!("necessary_v_formula_ok={}", report.necessary.v_formula_ok);
    if let Some((value, is_square)) = &report.necessary.special_square {
        println!("special_square_value={value}");
        println!("special_square_is_square={is_square}");
    }
    for b in &report.bounds {
        println!("bound.{}={}", b.name, b.outcome);
    }
    let u = &report.unique_block;
    println!(
        "unique_block.large_qualifiers={}",
        fmt_indices(&u.large_qualifiers)
    );
    println!(
        "unique_block.small_qualifiers={}",
        fmt_indices(&u.small_qualifiers)
    );
    println!("unique_block.large_unique_ok={}", u.large_unique_ok);
    println!("unique_block.small_unique_ok={}", u.small_unique_ok);
    println!("unique_block.hard_violation={}", u.hard_violation);
    match &report.two_block {
        Some(TwoBlockVerdict::Type1 {
            via_large,
            via_small,
            columns_agree,
        }) => {
            println!("two_block.verdict=type1");
            println!("two_block.via_large={via_large}");
            println!("two_block.via_small={via_small}");
            println!("two_block.columns_agree={columns_agree}");
        }
        Some(TwoBlockVerdict::ConditionNotMet) => {
            println!("two_block.verdict=condition-not-met");
        }
        None => {
            println!("two_block.verdict=not-applicable");
        }
    }
    println!(
        "result={}",
        if report.all_pass() { "all-pass" } else { "FAIL" }
    );
}

fn classification_json(report: &ClassificationReport) -> String {
    use serde_json::json;
    let p = &report.profile;
    let bounds: Vec<_> = report
        .bounds
        .iter()
        .map(|b| {
            json!({
                "name": b.name,
                "outcome": b.outcome.to_string(),
                "detail": b.detail,
            })
        })
        .collect();
    let two_block = match &report.two_block {
        Some(TwoBlockVerdict::Type1 {
            via_large,
            via_small,
            columns_agree,
        }) => json!({
            "verdict": "type1",
            "via_large": via_large,
            "via_small": via_small,
            "columns_agree": columns_agree,
        }),
        Some(TwoBlockVerdict::ConditionNotMet) => json!({"verdict": "condition-not-met"}),
        None => serde_json::Value::Null,
    };
    let value = json!({
        "v": p.v,
        "lambda": p.lam,
        "r1": p.r1,
        "r2": p.r2,
        "e1": p.e1,
        "e2": p.e2,
        "rho": format!("{}/{}", p.c, p.d),
        "g": p.g,
        "a": p.a,
        "D": p.seress_d,
        "x": p.x,
        "y": p.y,
        "type1_by_columns": tri_state_str(report),
        "type1_by_D": report.type1_by_d,
        "necessary": {
            "sq_value": report.necessary.sq_value.to_string(),
            "is_square": report.necessary.is_square,
            "root": report.necessary.root.as_ref().map(|r| r.to_string()),
            "v_formula_ok": report.necessary.v_formula_ok,
            "special_square": report.necessary.special_square.as_ref().map(|(value, ok)| {
                json!({"value": value.to_string(), "is_square": ok})
            }),
        },
        "bounds": bounds,
        "unique_block": {
            "large_qualifiers": report.unique_block.large_qualifiers,
            "small_qualifiers": report.unique_block.small_qualifiers,
            "large_unique_ok": report.unique_block.large_unique_ok,
            "small_unique_ok": report.unique_block.small_unique_ok,
            "hard_violation": report.unique_block.hard_violation,
        },
        "two_block": two_block,
        "all_pass": report.all_pass(),
    });
    value.to_string()
}

fn cmd_scan(lam_max: i64, r_max: i64, type1_only: bool, json: bool) -> i32 {
    let candidates = scan_params(lam_max, r_max, type1_only);
    if json {
        for c in &candidates {
            println!("{}", c.to_json());
        }
    } else {
        println!("v lambda r D rho e1 e2 x y conjecture");
        for c in &candidates {
            println!(
                "{} {} {} {} {}/{} {} {} {} {} {}",
                c.v,
                c.lam,
                c.r,
                c.seress_d,
                c.c,
                c.d,
                c.e1,
                c.e2,
                c.x,
                c.y,
                if c.conjecture_ok { "yes" } else { "no" }
            );
        }
    }
    0
}
