//! The `quasidet` command-line front-end.
//!
//! Exit status: 0 on success, 1 on a mathematical failure (singular,
//! undefined, not representable; reported as a single `fail: <Kind> (..)`
//! line), 2 on malformed input.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::format::{self, Context};
use crate::solver::{self, Classification, Method};

#[derive(Debug, Parser)]
#[command(name = "quasidet", version, about = "Exact matrices of linear mappings over associative algebras")]
pub struct Cli {
    /// Also write the machine-readable result to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Algebra for inputs that do not name one (`builtin:<name>` or a file).
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

/// Every input is a file path or inline JSON (anything starting with `{`,
/// `[` or `"`).
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check associativity and the unit of an algebra.
    CheckAlgebra { algebra: String },
    /// Multiply two elements.
    ElemMul { x: String, y: String },
    /// Apply a mapping to an element.
    MapApply { map: String, element: String },
    /// Compose two mappings (first after second).
    MapCompose { f: String, g: String },
    /// Invert a mapping.
    MapInvert { f: String },
    /// RC-product of two matrices.
    MatRcmul { a: String, b: String },
    /// CR-product of two matrices.
    MatCrmul { a: String, b: String },
    /// Quasideterminant at `--pivot p,q` (1-based), or the whole quasideterminant matrix.
    Quasidet {
        matrix: String,
        #[arg(long, value_parser = parse_pivot)]
        pivot: Option<(usize, usize)>,
    },
    /// RC-inverse of a matrix.
    MatInvert { matrix: String },
    /// Solve a linear system.
    Solve {
        system: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Quasidet,
    Reduction,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Quasidet => Method::Quasidet,
            MethodArg::Reduction => Method::Reduction,
            MethodArg::Both => Method::Both,
        }
    }
}

fn parse_pivot(s: &str) -> std::result::Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    let p: usize = p.trim().parse().map_err(|_| format!("bad row {p:?}"))?;
    let q: usize = q.trim().parse().map_err(|_| format!("bad column {q:?}"))?;
    if p == 0 || q == 0 {
        return Err("pivot indices are 1-based".into());
    }
    Ok((p, q))
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => Outcome {
            code: if e.use_stderr() { 2 } else { 0 },
            stdout: e.to_string(),
        },
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let mut stdout = String::new();
    let result = execute(cli, &mut stdout);
    let code = match result {
        Ok(code) => code,
        Err(e) if e.is_math_failure() => {
            stdout.push_str(&format!("fail: {} ({e})\n", e.kind()));
            1
        }
        Err(e) => {
            stdout.push_str(&format!("error: {} ({e})\n", e.kind()));
            2
        }
    };
    Outcome { code, stdout }
}

fn load(arg: &str) -> Result<(Value, Context)> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with(['{', '[', '"']) {
        let v = serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("inline JSON: {e}")))?;
        return Ok((v, Context::new(".")));
    }
    if arg.starts_with("builtin:") {
        return Ok((Value::String(arg.to_string()), Context::new(".")));
    }
    let path = Path::new(arg);
    let v = format::read_json(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((v, Context::new(base)))
}

fn write_out(cli: &Cli, text: &str) -> Result<()> {
    if let Some(path) = &cli.out {
        fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn execute(cli: &Cli, stdout: &mut String) -> Result<i32> {
    let default_algebra = match &cli.algebra {
        Some(a) => {
            let (v, ctx) = load(a)?;
            Some(format::algebra_from_json(&v, &ctx)?)
        }
        None => None,
    };
    let input = |arg: &str| -> Result<(Value, Context)> {
        let (v, mut ctx) = load(arg)?;
        ctx.default_algebra = default_algebra.clone();
        Ok((v, ctx))
    };
    let emit = |stdout: &mut String, v: &Value| -> Result<i32> {
        let text = format::to_text(v);
        write_out(cli, &text)?;
        stdout.push_str(&text);
        Ok(0)
    };

    match &cli.command {
        Command::CheckAlgebra { algebra } => {
            let (v, ctx) = input(algebra)?;
            let (dim, report) = format::check_algebra_json(&v, &ctx)?;
            write_out(cli, &format::to_text(&format::validation_to_json(dim, &report)))?;
            if report.is_ok() {
                stdout.push_str(&format!("ok: associative, unital, dim={dim}\n"));
                Ok(0)
            } else {
                Err(Error::InvalidAlgebra(report))
            }
        }
        Command::ElemMul { x, y } => {
            let (vx, cx) = input(x)?;
            let (vy, cy) = input(y)?;
            let x = format::standalone_element_from_json(&vx, &cx)?;
            let y = format::standalone_element_from_json(&vy, &cy)?;
            emit(stdout, &format::element_to_json(&x.mul(&y)?))
        }
        Command::MapApply { map, element } => {
            let (vf, cf) = input(map)?;
            let f = format::standalone_map_from_json(&vf, &cf)?;
            let (vx, mut cx) = input(element)?;
            cx.default_algebra.get_or_insert_with(|| f.algebra().clone());
            let x = format::standalone_element_from_json(&vx, &cx)?;
            emit(stdout, &format::element_to_json(&f.apply(&x)?))
        }
        Command::MapCompose { f, g } => {
            let (vf, cf) = input(f)?;
            let (vg, cg) = input(g)?;
            let f = format::standalone_map_from_json(&vf, &cf)?;
            let g = format::standalone_map_from_json(&vg, &cg)?;
            emit(stdout, &format::map_to_json(&f.compose(&g)?))
        }
        Command::MapInvert { f } => {
            let (vf, cf) = input(f)?;
            let f = format::standalone_map_from_json(&vf, &cf)?;
            emit(stdout, &format::map_to_json(&f.invert()?))
        }
        Command::MatRcmul { a, b } | Command::MatCrmul { a, b } => {
            let (va, ca) = input(a)?;
            let (vb, cb) = input(b)?;
            let a = format::matrix_from_json(&va, &ca)?;
            let b = format::matrix_from_json(&vb, &cb)?;
            let product = if matches!(cli.command, Command::MatRcmul { .. }) {
                a.rc_product(&b)?
            } else {
                a.cr_product(&b)?
            };
            emit(stdout, &format::matrix_to_json(&product))
        }
        Command::Quasidet { matrix, pivot } => {
            let (v, ctx) = input(matrix)?;
            let a = format::matrix_from_json(&v, &ctx)?;
            match pivot {
                Some((p, q)) => {
                    let r = a.quasideterminant(p - 1, q - 1)?;
                    emit(stdout, &format::map_to_json(&r.value))
                }
                None => emit(stdout, &format::quasidet_matrix_to_json(&a.quasideterminant_matrix()?)),
            }
        }
        Command::MatInvert { matrix } => {
            let (v, ctx) = input(matrix)?;
            let a = format::matrix_from_json(&v, &ctx)?;
            emit(stdout, &format::matrix_to_json(&a.rc_inverse()?.inverse))
        }
        Command::Solve { system, method } => {
            let (v, ctx) = input(system)?;
            let sys = format::system_from_json(&v, &ctx)?;
            let method = Method::from(*method);
            let report = solver::solve(&sys, method)?;
            write_out(cli, &format::to_text(&format::report_to_json(&report)))?;
            let compact = |x: &[crate::AlgElement]| {
                serde_json::to_string(&format::vector_to_json(x)).expect("serializable")
            };
            stdout.push_str(&format!("method: {}\n", method.as_str()));
            match report.status {
                Classification::Nonsingular => {
                    stdout.push_str("status: nonsingular\n");
                    let x = report.solution.as_deref().expect("nonsingular systems have a solution");
                    if method != Method::Quasidet {
                        stdout.push_str(&format!("solution (reduction): {}\n", compact(x)));
                    }
                    if method != Method::Reduction {
                        stdout.push_str(&format!("solution (quasidet): {}\n", compact(x)));
                        stdout.push_str(&format!(
                            "pivots: rows {:?} cols {:?}\n",
                            report.row_perm, report.col_perm
                        ));
                        stdout.push_str(&format!(
                            "componentwise form: {}\n",
                            if report.componentwise_checked { "agrees" } else { "undefined" }
                        ));
                    }
                    if report.methods_agree == Some(true) {
                        stdout.push_str("agree\n");
                    }
                    Ok(0)
                }
                Classification::Singular { rank, nullity } => {
                    stdout.push_str(&format!("status: singular rank={rank} nullity={nullity}\n"));
                    stdout.push_str(&format!("consistent: {}\n", report.consistent));
                    if let Some(p) = &report.particular {
                        stdout.push_str(&format!("particular: {}\n", compact(p)));
                    }
                    let null: Vec<Value> = report
                        .nullspace
                        .iter()
                        .map(|v| Value::Array(v.iter().map(format::scalar_to_json).collect()))
                        .collect();
                    stdout.push_str(&format!("nullspace: {}\n", Value::Array(null)));
                    Err(Error::Singular(format!("system has rank {rank}, nullity {nullity}")))
                }
            }
        }
    }
}
