//! JSON documents emitted by the CLI. Polynomials are lists of
//! `[coeff, x_num, y_num, D]` terms in ascending monomial order.

use std::str::FromStr;

use serde_json::{json, Number, Value};

use crate::exactalg::{Den, ParamPoly};
use crate::qseries::QSeries;
use crate::registry::{Status, VerificationReport};

fn big(c: &num_bigint::BigInt) -> Value {
    Value::Number(Number::from_str(&c.to_string()).expect("integer literal"))
}

pub fn poly_json(p: &ParamPoly) -> Value {
    let d = p.den().get();
    Value::Array(p.terms().map(|m| json!([big(&m.coeff), m.x, m.y, d])).collect())
}

pub fn report_json(r: &VerificationReport) -> Value {
    json!({
        "id": r.id,
        "m": r.m,
        "order": r.order,
        "denominator": r.denominator,
        "status": r.status,
        "environment": r.environment,
        "mismatch": r.mismatch.as_ref().map(|mm| json!({
            "exponent": mm.exponent,
            "route": mm.route,
            "lhs": poly_json(&mm.lhs),
            "rhs": poly_json(&mm.rhs),
        })),
        "error": r.error,
        "elapsed_ms": r.elapsed_ms as u64,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

impl Tally {
    pub fn of<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> Tally {
        let mut t = Tally::default();
        for r in reports {
            match r.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::Error => t.error += 1,
            }
        }
        t
    }

    pub fn all_pass(&self) -> bool {
        self.fail == 0 && self.error == 0
    }
}

/// The `verify` and `verify-all` document.
pub fn run_json(
    den: Den,
    order: Option<i64>,
    reports: &[VerificationReport],
    cross_checks: &[VerificationReport],
) -> Value {
    let t = Tally::of(reports.iter().chain(cross_checks));
    json!({
        "denominator": den.get(),
        "order": order,
        "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
        "cross_checks": cross_checks.iter().map(report_json).collect::<Vec<_>>(),
        "summary": { "pass": t.pass, "fail": t.fail, "error": t.error },
    })
}

/// The `expand` document: nonzero coefficients through the order.
pub fn expand_json(expr: &str, order: i64, s: &QSeries) -> Value {
    json!({
        "expr": expr,
        "order": order,
        "denominator": s.den().get(),
        "coefficients": s.iter().map(|(e, p)| json!([e, poly_json(p)])).collect::<Vec<_>>(),
    })
}

/// Drops fields that vary between runs (timings).
pub fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}
