//! The identity catalog and its verification drivers.
//!
//! Every record has two builders that compute the sides of an identity along
//! independent routes; integral records carry a third route. Verification
//! compares the sides coefficient by coefficient up to the requested order.

mod catalog;
mod ctx;

use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{Den, ParamPoly, ScaledExp};
use crate::qseries::{Env, Param, QMono, QSeries};
use crate::trace;

pub use ctx::Ctx;

/// Builds one side of an identity.
/// Predicate on an environment: true when the record excludes it.
pub type Exclusion = fn(&Env, Den) -> Result<bool>;

pub type Builder = fn(&Ctx) -> Result<QSeries>;

/// A catalog entry.
#[derive(Clone)]
pub struct IdentityRecord {
    pub id: &'static str,
    /// Citation of the displayed formula this record checks.
    pub reference: &'static str,
    pub summary: &'static str,
    /// Formal parameters the builders read from the environment.
    pub params: &'static [Param],
    /// Range of the integer knob `m`, for families.
    pub knob: Option<RangeInclusive<i64>>,
    /// Default truncation order in whole powers of q.
    pub default_order: i64,
    pub tags: &'static [&'static str],
    pub lhs: Builder,
    pub rhs: Builder,
    /// Third route (the lattice sum of an integral instance).
    pub aux: Option<Builder>,
    /// Fixed specialization selected by the knob, replacing the environment.
    pub specialize: Option<fn(i64, Den) -> Result<Env>>,
    /// Human-readable description of the knob's specialization.
    pub describe_knob: Option<fn(i64) -> String>,
    /// Environments the record excludes, with the reason.
    pub excludes: Option<(&'static str, Exclusion)>,
}

impl IdentityRecord {
    pub fn has_knob(&self) -> bool {
        self.knob.is_some()
    }

    /// Knob values to run when none is given.
    pub fn knob_values(&self) -> Vec<Option<i64>> {
        match &self.knob {
            Some(r) => r.clone().map(Some).collect(),
            None => vec![None],
        }
    }
}

/// All records, in catalog order.
pub fn list_identities() -> &'static [IdentityRecord] {
    catalog::records()
}

pub fn find(id: &str) -> Result<&'static IdentityRecord> {
    list_identities().iter().find(|r| r.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// First disagreement between two routes.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportMismatch {
    pub exponent: ScaledExp,
    pub lhs: ParamPoly,
    pub rhs: ParamPoly,
    /// Which pair of routes disagreed, e.g. `lhs/rhs` or `aux/lhs`.
    pub route: String,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub id: String,
    pub m: Option<i64>,
    /// Order in whole powers of q.
    pub order: i64,
    pub denominator: u32,
    pub environment: String,
    pub status: Status,
    pub mismatch: Option<ReportMismatch>,
    pub error: Option<String>,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Options controlling stop rules; the defaults are what `verify` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub margin: usize,
    pub window_scale: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { margin: 2, window_scale: 1 }
    }
}

/// Checks the environment and knob against the record and builds the context.
pub fn context(
    rec: &IdentityRecord,
    order: i64,
    env: &Env,
    m: Option<i64>,
    den: Den,
    opts: VerifyOptions,
) -> Result<Ctx> {
    if order < 0 {
        return Err(Error::Config(format!("order must be nonnegative, got {order}")));
    }
    for p in [Param::X, Param::Y] {
        if !env.is_symbolic(p) && !rec.params.contains(&p) {
            return Err(Error::Constraint(format!("{} has no parameter {p}", rec.id)));
        }
    }
    let m = match (&rec.knob, m) {
        (Some(r), Some(v)) if r.contains(&v) => v,
        (Some(r), Some(v)) => {
            return Err(Error::Constraint(format!("{}: m = {v} outside {}..={}", rec.id, r.start(), r.end())))
        }
        (Some(_), None) => return Err(Error::Constraint(format!("{} needs a value of m", rec.id))),
        (None, Some(_)) => return Err(Error::Constraint(format!("{} takes no m", rec.id))),
        (None, None) => 0,
    };
    if let Some((why, excluded)) = rec.excludes {
        if excluded(env, den)? {
            return Err(Error::Constraint(format!("{}: {why}", rec.id)));
        }
    }
    let env = match rec.specialize {
        Some(f) => {
            if *env != Env::symbolic() {
                return Err(Error::Constraint(format!(
                    "{} is checked at a fixed specialization list selected by m",
                    rec.id
                )));
            }
            f(m, den)?
        }
        None => env.clone(),
    };
    Ok(Ctx { env, den, n: order * den.unit(), m, margin: opts.margin, window_scale: opts.window_scale })
}

fn describe(rec: &IdentityRecord, ctx: &Ctx, m: Option<i64>) -> String {
    if let (Some(f), Some(m)) = (rec.describe_knob, m) {
        return f(m);
    }
    let parts: Vec<String> = rec.params.iter().map(|&p| format!("{p}={}", ctx.env.get(p).display(ctx.den))).collect();
    parts.join(", ")
}

fn compare(a: &QSeries, b: &QSeries, route: &str) -> Option<ReportMismatch> {
    a.first_mismatch(b).map(|mm| ReportMismatch {
        exponent: mm.exponent,
        lhs: mm.lhs,
        rhs: mm.rhs,
        route: route.to_string(),
    })
}

/// Builds both sides (and the third route, if any) and compares them.
pub fn verify_with(
    id: &str,
    order: i64,
    env: &Env,
    m: Option<i64>,
    den: Den,
    opts: VerifyOptions,
) -> Result<VerificationReport> {
    let rec = find(id)?;
    let ctx = context(rec, order, env, m, den, opts)?;
    let start = Instant::now();
    let outcome = run(rec, &ctx);
    let elapsed_ms = start.elapsed().as_millis();
    let mut report = VerificationReport {
        id: rec.id.to_string(),
        m,
        order,
        denominator: den.get(),
        environment: describe(rec, &ctx, m),
        status: Status::Pass,
        mismatch: None,
        error: None,
        elapsed_ms,
    };
    match outcome {
        Ok(None) => {}
        Ok(Some(mm)) => {
            report.status = Status::Fail;
            report.mismatch = Some(mm);
        }
        // an odd coefficient under an exact halving is a false identity
        Err(e @ Error::Exactness(_)) => {
            report.status = Status::Fail;
            report.error = Some(e.to_string());
        }
        Err(e) => {
            report.status = Status::Error;
            report.error = Some(e.to_string());
        }
    }
    Ok(report)
}

fn run(rec: &IdentityRecord, ctx: &Ctx) -> Result<Option<ReportMismatch>> {
    let n = ctx.n;
    let lhs = (rec.lhs)(ctx)?.require(n)?;
    let rhs = (rec.rhs)(ctx)?.require(n)?;
    if let Some(mm) = compare(&lhs, &rhs, "lhs/rhs") {
        return Ok(Some(mm));
    }
    if let Some(aux) = rec.aux {
        let third = aux(ctx)?.require(n)?;
        if let Some(mm) = compare(&third, &lhs, "aux/lhs") {
            return Ok(Some(mm));
        }
    }
    Ok(None)
}

/// Verifies a record at the given order (whole powers of q).
pub fn verify(id: &str, order: i64, env: &Env, m: Option<i64>) -> Result<VerificationReport> {
    verify_with(id, order, env, m, Den::DEFAULT, VerifyOptions::default())
}

/// Verifies every record (every knob value of families) at its default
/// order or at `order`, in parallel; reports come back in catalog order.
pub fn verify_all(order: Option<i64>, den: Den) -> Vec<VerificationReport> {
    let jobs: Vec<(&IdentityRecord, Option<i64>)> =
        list_identities().iter().flat_map(|r| r.knob_values().into_iter().map(move |m| (r, m))).collect();
    jobs.par_iter()
        .map(|&(rec, m)| {
            let order = order.unwrap_or(rec.default_order);
            verify_with(rec.id, order, &Env::symbolic(), m, den, VerifyOptions::default()).unwrap_or_else(|e| {
                VerificationReport {
                    id: rec.id.to_string(),
                    m,
                    order,
                    denominator: den.get(),
                    environment: String::new(),
                    status: Status::Error,
                    mismatch: None,
                    error: Some(e.to_string()),
                    elapsed_ms: 0,
                }
            })
        })
        .collect()
}

/// Both sides of a record under a specialization and knob value, optionally
/// multiplied by a binomial `1 + c q^e`.
#[derive(Clone, Debug)]
pub struct Target {
    pub id: &'static str,
    /// `(parameter, coefficient, exponent numerator, exponent denominator)`.
    pub bindings: Vec<(Param, i64, i64, i64)>,
    pub m: Option<i64>,
    pub times: Option<(i64, i64)>,
}

impl Target {
    pub fn new(id: &'static str) -> Target {
        Target { id, bindings: Vec::new(), m: None, times: None }
    }

    /// Binds `p` to `coeff * q^(num/den)`.
    pub fn env(mut self, p: Param, coeff: i64, num: i64, den: i64) -> Target {
        self.bindings.push((p, coeff, num, den));
        self
    }

    pub fn m(mut self, m: i64) -> Target {
        self.m = Some(m);
        self
    }

    /// Multiplies both sides by `1 + c q^e`.
    pub fn times(mut self, c: i64, e: i64) -> Target {
        self.times = Some((c, e));
        self
    }

    fn environment(&self, den: Den) -> Result<Env> {
        let mut env = Env::symbolic();
        for &(p, c, a, b) in &self.bindings {
            env = env.with(p, crate::qseries::Binding::value(c, den.scale(a, b)?));
        }
        Ok(env)
    }

    fn label(&self, den: Den) -> String {
        let mut s = self.id.to_string();
        if let Some(m) = self.m {
            s.push_str(&format!("[m={m}]"));
        }
        if let Ok(env) = self.environment(den) {
            let bound: Vec<String> =
                self.bindings.iter().map(|&(p, ..)| format!("{p}={}", env.get(p).display(den))).collect();
            if !bound.is_empty() {
                s.push_str(&format!("({})", bound.join(", ")));
            }
        }
        if let Some((c, e)) = self.times {
            s = format!("({}) * {s}", one_plus(c, e, den));
        }
        s
    }

    fn sides(&self, order: i64, den: Den) -> Result<(QSeries, QSeries)> {
        let rec = find(self.id)?;
        let ctx = context(rec, order, &self.environment(den)?, self.m, den, VerifyOptions::default())?;
        let lhs = (rec.lhs)(&ctx)?.require(ctx.n)?;
        let rhs = (rec.rhs)(&ctx)?.require(ctx.n)?;
        match self.times {
            None => Ok((lhs, rhs)),
            Some((c, e)) => {
                let f = one_plus(c, e, den);
                Ok((lhs.mul_to(&f, ctx.n)?, rhs.mul_to(&f, ctx.n)?))
            }
        }
    }
}

fn one_plus(c: i64, e: i64, den: Den) -> QSeries {
    let mut coeffs = vec![0; e.max(0) as usize + 1];
    coeffs[0] += 1;
    coeffs[e.max(0) as usize] += c;
    QSeries::from_ints(den, &coeffs)
}

/// The derivation arrows between records: a specialized record and the
/// record it reproduces.
pub fn derivation_pairs() -> Vec<(Target, Target)> {
    use Param::{X, Y};
    vec![
        (Target::new("thm11").env(X, 1, 1, 1).env(Y, 1, 1, 2), Target::new("uz1")),
        (Target::new("thm11").env(X, 1, 2, 1).env(Y, 1, 3, 2), Target::new("uz2")),
        (Target::new("thm11").env(X, 0, 0, 1), Target::new("cor12")),
        (Target::new("cor13").m(0), Target::new("slater98")),
        (Target::new("cor13").m(1), Target::new("slater96").times(-1, 1)),
        (Target::new("thm15").env(X, 1, -1, 1).env(Y, 1, 1, 1), Target::new("cw2").env(X, -1, 0, 1)),
        (Target::new("thm15").env(X, 1, 1, 1).env(Y, 1, -1, 1), Target::new("cw2").env(X, -1, -2, 1)),
        (Target::new("thm16").env(X, 1, 1, 1).env(Y, 1, -1, 1), Target::new("cw2").env(X, -1, -2, 1)),
        (Target::new("gst").m(0), Target::new("rr1")),
        (Target::new("gst").m(1), Target::new("rr2")),
    ]
}

/// Compares specialized sides with target sides, left with left and right
/// with right.
pub fn cross_check(pairs: &[(Target, Target)], order: i64, den: Den) -> Vec<VerificationReport> {
    pairs
        .par_iter()
        .map(|(src, dst)| {
            let start = Instant::now();
            let outcome = (|| -> Result<Option<ReportMismatch>> {
                let (sl, sr) = src.sides(order, den)?;
                let (dl, dr) = dst.sides(order, den)?;
                Ok(compare(&sl, &dl, "lhs/lhs").or_else(|| compare(&sr, &dr, "rhs/rhs")))
            })();
            let (status, mismatch, error) = match outcome {
                Ok(None) => (Status::Pass, None, None),
                Ok(Some(mm)) => (Status::Fail, Some(mm), None),
                Err(e) => (Status::Error, None, Some(e.to_string())),
            };
            VerificationReport {
                id: format!("{} -> {}", src.label(den), dst.label(den)),
                m: None,
                order,
                denominator: den.get(),
                environment: String::new(),
                status,
                mismatch,
                error,
                elapsed_ms: start.elapsed().as_millis(),
            }
        })
        .collect()
}

/// Even and odd parts of the second Cao-Wang sum at `x = q^{-1/2}` against
/// the two bisected sums.
pub fn bisection_coherence(order: i64, den: Den) -> Result<Vec<VerificationReport>> {
    let half = den.scale(-1, 2)?;
    let at = |c: i64| -> Result<QSeries> {
        let rec = find("cw2")?;
        let env = Env::symbolic().with(Param::X, crate::qseries::Binding::value(c, half));
        let ctx = context(rec, order, &env, None, den, VerifyOptions::default())?;
        (rec.lhs)(&ctx)?.require(ctx.n)
    };
    let plus = at(1)?;
    let minus = at(-1)?;
    let two = num_bigint::BigInt::from(2);
    let even = plus.try_add(&minus)?.div_exact_int(&two)?;
    let odd = plus.try_sub(&minus)?.div_exact_int(&two)?;
    let side = |id: &str| -> Result<QSeries> {
        let rec = find(id)?;
        let ctx = context(rec, order, &Env::symbolic(), None, den, VerifyOptions::default())?;
        (rec.lhs)(&ctx)?.require(ctx.n)
    };
    let a = side("thm41a")?;
    let b = side("thm41b")?.mul_mono(&QMono::q_pow(1, -half)).truncate(order * den.unit());
    let mk = |id: &str, mm: Option<ReportMismatch>| VerificationReport {
        id: id.to_string(),
        m: None,
        order,
        denominator: den.get(),
        environment: format!("x={}", QMono::q_pow(1, half).display(den)),
        status: if mm.is_none() { Status::Pass } else { Status::Fail },
        mismatch: mm,
        error: None,
        elapsed_ms: 0,
    };
    Ok(vec![
        mk("even part of cw2 -> thm41a", compare(&even.truncate(b.ncut().min(a.ncut())), &a, "even/thm41a")),
        mk("odd part of cw2 -> thm41b", compare(&odd.truncate(a.ncut().min(b.ncut())), &b, "odd/thm41b")),
    ])
}

/// Result of checking that the two sides of a record use disjoint calls.
#[derive(Clone, Debug)]
pub struct Audit {
    pub lhs: Vec<trace::Call>,
    pub rhs: Vec<trace::Call>,
    pub shared: Vec<trace::Call>,
}

/// Records the top-level primitive calls of each side.
pub fn audit(id: &str, order: i64, m: Option<i64>, den: Den) -> Result<Audit> {
    let rec = find(id)?;
    let ctx = context(rec, order, &Env::symbolic(), m, den, VerifyOptions::default())?;
    let (l, lhs) = trace::record(|| (rec.lhs)(&ctx));
    l?;
    let (r, rhs) = trace::record(|| (rec.rhs)(&ctx));
    r?;
    let shared = lhs.iter().filter(|c| rhs.contains(c)).cloned().collect();
    Ok(Audit { lhs, rhs, shared })
}
