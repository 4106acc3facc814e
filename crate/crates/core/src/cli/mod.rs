//! Command-line front end.

pub mod expr;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{fmt_exp, Den};
use crate::qseries::{Env, Param};
use crate::registry::{self, Status, VerificationReport, VerifyOptions};

use report::Tally;

#[derive(Parser, Debug)]
#[command(name = "qsverify", version, about = "Exact q-series identity verifier")]
pub struct Cli {
    /// Exponent denominator D: exponents are multiples of 1/D.
    #[arg(long, global = true, default_value_t = 2)]
    pub denominator: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the identity catalog.
    List,
    /// Verify one identity (every knob value unless --m is given).
    Verify {
        #[arg(long)]
        id: String,
        /// Order in whole powers of q (default: the record's default).
        #[arg(long)]
        order: Option<i64>,
        /// Parameter value, e.g. `x=q` or `y=-q^1/2`.
        #[arg(long = "set", value_name = "P=MONO")]
        set: Vec<String>,
        #[arg(long)]
        m: Option<i64>,
        /// Write the JSON report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verify the whole catalog and the derivation cross-checks.
    VerifyAll {
        /// Order in whole powers of q for every record.
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Expand a product expression.
    Expand {
        #[arg(long)]
        expr: String,
        /// Order in whole powers of q.
        #[arg(long)]
        order: i64,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a run: what to print and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs a parsed command. Errors are usage or configuration errors.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let den = Den::new(cli.denominator)?;
    match &cli.command {
        Command::List => Ok(Outcome { stdout: list_text(), code: EXIT_PASS }),
        Command::Verify { id, order, set, m, json } => {
            let env = parse_env(set, den)?;
            let rec = registry::find(id)?;
            let ms = match m {
                Some(v) => vec![Some(*v)],
                None => rec.knob_values(),
            };
            let order = order.unwrap_or(rec.default_order);
            // context errors are usage errors; check them all before running
            for &mm in &ms {
                registry::context(rec, order, &env, mm, den, VerifyOptions::default())?;
            }
            let reports: Vec<VerificationReport> = ms
                .par_iter()
                .map(|&mm| registry::verify_with(id, order, &env, mm, den, VerifyOptions::default()))
                .collect::<Result<_>>()?;
            finish(den, Some(order), &reports, &[], json.as_ref())
        }
        Command::VerifyAll { order, json } => {
            if let Some(n) = order {
                if *n < 0 {
                    return Err(Error::Config(format!("order must be nonnegative, got {n}")));
                }
            }
            let reports = registry::verify_all(*order, den);
            let check_order = order.unwrap_or(30);
            let mut checks = registry::cross_check(&registry::derivation_pairs(), check_order, den);
            checks.extend(registry::bisection_coherence(order.unwrap_or(40), den)?);
            finish(den, *order, &reports, &checks, json.as_ref())
        }
        Command::Expand { expr: text, order, json } => {
            if *order < 0 {
                return Err(Error::Config(format!("order must be nonnegative, got {order}")));
            }
            let ast = expr::parse_expr(text)?;
            let s = expr::evaluate(&ast, den, order * den.unit())?;
            let stdout = if *json {
                let mut out = serde_json::to_string_pretty(&report::expand_json(&expr::print(&ast), *order, &s))
                    .expect("serializable");
                out.push('\n');
                out
            } else {
                expand_text(&ast, *order, &s)
            };
            Ok(Outcome { stdout, code: EXIT_PASS })
        }
    }
}

fn parse_env(set: &[String], den: Den) -> Result<Env> {
    let mut env = Env::symbolic();
    for s in set {
        let (p, v) = s.split_once('=').ok_or_else(|| Error::Config(format!("--set expects P=MONO, got `{s}`")))?;
        let p = Param::parse(p.trim()).ok_or_else(|| Error::Config(format!("unknown parameter `{p}`")))?;
        env = env.with(p, expr::parse_mono(v)?.to_binding(den)?);
    }
    Ok(env)
}

fn list_text() -> String {
    let mut out = String::new();
    for r in registry::list_identities() {
        let params: Vec<&str> = r.params.iter().map(|p| p.name()).collect();
        let knob = r.knob.as_ref().map(|k| format!(" m={}..={}", k.start(), k.end())).unwrap_or_default();
        out.push_str(&format!(
            "{:<13} order {:>2}  [{}]{}  {}\n    {}\n",
            r.id,
            r.default_order,
            params.join(","),
            knob,
            r.reference,
            r.summary
        ));
    }
    out
}

fn report_line(r: &VerificationReport) -> String {
    let status = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    };
    let mut line = format!("{status:<5} {}", r.id);
    if let Some(m) = r.m {
        line.push_str(&format!(" m={m}"));
    }
    line.push_str(&format!(" order={}", r.order));
    if !r.environment.is_empty() {
        line.push_str(&format!(" [{}]", r.environment));
    }
    line.push_str(&format!(" ({} ms)", r.elapsed_ms));
    if let Some(mm) = &r.mismatch {
        let den = mm.lhs.den();
        line.push_str(&format!(
            "\n      first mismatch ({}) at q^{}: {} vs {}",
            mm.route,
            fmt_exp(mm.exponent, den),
            mm.lhs,
            mm.rhs
        ));
    }
    if let Some(e) = &r.error {
        line.push_str(&format!("\n      {e}"));
    }
    line.push('\n');
    line
}

fn finish(
    den: Den,
    order: Option<i64>,
    reports: &[VerificationReport],
    checks: &[VerificationReport],
    json: Option<&PathBuf>,
) -> Result<Outcome> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&report_line(r));
    }
    if !checks.is_empty() {
        out.push_str("cross-checks:\n");
        for r in checks {
            out.push_str(&report_line(r));
        }
    }
    let t = Tally::of(reports.iter().chain(checks));
    out.push_str(&format!("{} passed, {} failed, {} errors\n", t.pass, t.fail, t.error));
    if let Some(path) = json {
        let doc = report::run_json(den, order, reports, checks);
        let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Outcome { stdout: out, code: if t.all_pass() { EXIT_PASS } else { EXIT_FAIL } })
}

fn expand_text(ast: &expr::ExprAst, order: i64, s: &crate::qseries::QSeries) -> String {
    let den = s.den();
    let unit = den.unit();
    let mut out = format!("{}\n", expr::print(ast));
    let lo = s.valuation().unwrap_or(0).min(0);
    for e in lo..=order * unit {
        let c = s.coeff(e);
        if e % unit == 0 && e >= 0 || !c.is_zero() {
            out.push_str(&format!("{}\t{}\n", fmt_exp(e, den), c));
        }
    }
    out
}

/// Entry point of the binary: parses arguments, runs, prints, and returns
/// the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(o.stdout.as_bytes());
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
