//! Command-line interface.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse or validation error,
//! 3 domain error, 4 verification failure.

use super::expr::{parse, render_digits, ValueExpr};
use crate::closedforms::{load_fixtures, verify_identity};
use crate::error::{Error, Result};
use crate::indexcore::{index_to_word, word_to_index, Index};
use crate::lincomb::LinComb;
use crate::linrel::{dim_report, harvest};
use crate::numeval::{digits_from_env, s_index, t_index, NamedValue};
use crate::wordalg::{dual_word, shuffle, stuffle_indices};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "mmv-kit", version, about = "Multiple mixed values: evaluation, duality, products, relations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate an expression to D fractional digits (default $MMV_KIT_DIGITS or 50).
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Dual of an admissible MMV with odd innermost entry.
    Dual { value: String },
    /// Shuffle (sha) or stuffle (st) product of two admissible values.
    Product {
        #[arg(long, value_enum)]
        mode: Mode,
        left: String,
        right: String,
    },
    /// Harvest relations at one weight and emit them as JSON.
    Relations {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension upper bound at one weight, as JSON.
    Dim {
        #[arg(long)]
        weight: u32,
    },
    /// Check every identity of a JSON-lines fixture file.
    Verify { fixtures: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Sha,
    St,
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Validation(_) => 2,
        Error::Domain(_) => 3,
        Error::Verification(_) => 4,
        Error::Io(_) => 1,
    }
}

/// Run one command line (including the program name) and return the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return e.exit_code();
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn as_index(e: &ValueExpr) -> Result<Index> {
    match e.as_value() {
        Some(NamedValue::M(i)) => Ok(i.clone()),
        Some(NamedValue::T(k)) => t_index(k),
        Some(NamedValue::S(k)) => s_index(k),
        _ => Err(Error::Validation(format!("{e} is not a single M, T or S value"))),
    }
}

fn json<T: serde::Serialize>(x: &T) -> Result<String> {
    serde_json::to_string_pretty(x).map_err(|e| Error::Io(e.to_string()))
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Cmd::Eval { expr, digits } => {
            let d = digits.unwrap_or_else(digits_from_env);
            let v = parse(&expr)?.eval(d)?;
            writeln!(out, "{}", render_digits(&v, d)).map_err(io)
        }
        Cmd::Dual { value } => {
            let idx = as_index(&parse(&value)?)?;
            let lc = dual_word(&index_to_word(&idx)?)?;
            let mut res: LinComb<Index> = LinComb::zero();
            for (w, c) in lc.iter() {
                res.add_term(word_to_index(w)?, c.clone());
            }
            writeln!(out, "{res}").map_err(io)
        }
        Cmd::Product { mode, left, right } => {
            let a = as_index(&parse(&left)?)?;
            let b = as_index(&parse(&right)?)?;
            let res = match mode {
                Mode::St => stuffle_indices(&a, &b)?,
                Mode::Sha => {
                    let mut r = LinComb::zero();
                    for (w, c) in shuffle(&index_to_word(&a)?, &index_to_word(&b)?).iter() {
                        r.add_term(word_to_index(w)?, c.clone());
                    }
                    r
                }
            };
            writeln!(out, "{res}").map_err(io)
        }
        Cmd::Relations { weight, out: path } => {
            let rs = harvest(weight)?;
            let text = json(&rs.to_json())?;
            match path {
                Some(p) => {
                    std::fs::write(&p, text + "\n").map_err(io)?;
                    writeln!(out, "{} relations, bound {} written to {}", rs.relations.len(), rs.bound(), p.display())
                        .map_err(io)
                }
                None => writeln!(out, "{text}").map_err(io),
            }
        }
        Cmd::Dim { weight } => {
            let rep = dim_report(&harvest(weight)?)?;
            writeln!(out, "{}", json(&rep)?).map_err(io)
        }
        Cmd::Verify { fixtures } => {
            let list = load_fixtures(&fixtures)?;
            let mut failed = Vec::new();
            for f in &list {
                let lhs = parse(&f.lhs)?;
                let rhs = parse(&f.rhs)?;
                let v = verify_identity(&lhs, &rhs, f.digits)?;
                let status = if v.pass { "ok" } else { "FAIL" };
                writeln!(out, "{}: residual {:.3e} (tol 1e{}) {status}", f.name, v.residual.to_f64(), v.tolerance_exp)
                    .map_err(io)?;
                if !v.pass {
                    failed.push(f.name.clone());
                }
            }
            if failed.is_empty() {
                writeln!(out, "{} identities verified", list.len()).map_err(io)
            } else {
                Err(Error::Verification(failed.join(", ")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let mut full = vec!["mmv-kit"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn eval_and_codes() {
        let (c, o, _) = call(&["eval", "M(-2)", "--digits", "30"]);
        assert_eq!(c, 0);
        assert_eq!(o.trim(), "2.467401100272339654708622749969 (±1ulp)");
        assert_eq!(call(&["eval", "M(2,"]).0, 2);
        assert_eq!(call(&["eval", "M(2,1)"]).0, 3);
        assert_eq!(call(&["bogus"]).0, 2);
    }

    #[test]
    fn dual_example() {
        let (c, o, _) = call(&["dual", "M(-1,1,2)"]);
        assert_eq!(c, 0, "{o}");
        let got = parse(&o.trim().replace(' ', "")).unwrap().eval(30).unwrap();
        let want = parse("M(-1,1,2)").unwrap().eval(30).unwrap();
        assert!((&got - &want).abs_lt_pow10(-28));
    }
}
