//! Catalog structure, verification examples, constraint errors, the
//! independence audit and stop-rule stability.

mod common;

use std::collections::HashSet;

use common::{ints, partitions};
use qsverify::exactalg::Den;
use qsverify::qseries::{Binding, Env, Param, QSeries};
use qsverify::registry::{
    audit, context, cross_check, derivation_pairs, find, list_identities, verify, verify_all, verify_with, Status,
    VerifyOptions,
};
use qsverify::Error;

const D: Den = Den::DEFAULT;

const REQUIRED: &[&str] = &[
    "rr1",
    "rr2",
    "uz1",
    "uz2",
    "cw1",
    "cw2",
    "thm11",
    "ram532",
    "ram344",
    "cor12",
    "gst",
    "cor13",
    "slater98",
    "slater96",
    "thm14",
    "thm15",
    "thm16",
    "cor17",
    "cor18a",
    "cor18b",
    "cor18c",
    "cor19",
    "cor110a",
    "cor110b",
    "unit-rel",
    "euler-a",
    "euler-b",
    "jacobi",
    "qbinom",
    "heine-a",
    "heine-b",
    "threeterm-aa",
    "int-cc",
    "int-a3",
    "int-c3",
    "int-e3",
    "phi-even",
    "phi-odd",
    "phi-sq",
    "bisect-a",
    "bisect-b",
    "wcy-a",
    "wcy-b",
    "thm41a",
    "thm41b",
    "thm42a",
    "thm42b",
    "thm43a",
    "thm43b",
    "thm44a",
    "thm44b",
];

fn xy(x: (i64, i64), y: (i64, i64)) -> Env {
    Env::symbolic().with(Param::X, Binding::value(x.0, x.1)).with(Param::Y, Binding::value(y.0, y.1))
}

#[test]
fn catalog_structure() {
    let recs = list_identities();
    assert!(recs.len() >= 40, "only {} records", recs.len());
    let ids: HashSet<&str> = recs.iter().map(|r| r.id).collect();
    assert_eq!(ids.len(), recs.len(), "duplicate ids");
    for id in REQUIRED {
        assert!(ids.contains(id), "missing {id}");
    }
    for r in recs {
        assert!(!r.reference.trim().is_empty(), "{} has no reference", r.id);
        assert!(!r.summary.trim().is_empty(), "{} has no summary", r.id);
        assert!(r.default_order >= 30, "{} default order {}", r.id, r.default_order);
    }
}

#[test]
fn knob_ranges() {
    let range = |id: &str| find(id).unwrap().knob.clone().expect("knobbed");
    assert_eq!(range("gst"), 0..=5);
    for id in ["cor13", "cor17", "cor19", "thm42a", "thm42b"] {
        assert_eq!(range(id), 0..=4, "{id}");
    }
    assert!(find("rr1").unwrap().knob.is_none());
}

#[test]
fn catalog_order_is_deterministic() {
    let a: Vec<&str> = list_identities().iter().map(|r| r.id).collect();
    let b: Vec<&str> = list_identities().iter().map(|r| r.id).collect();
    assert_eq!(a, b);
}

#[test]
fn verify_uz1_order_6() {
    let r = verify("uz1", 6, &Env::symbolic(), None).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.mismatch.is_none() && r.error.is_none());
}

#[test]
fn verify_rr1_order_9_with_coefficients() {
    let r = verify("rr1", 9, &Env::symbolic(), None).unwrap();
    assert!(r.passed());
    let rec = find("rr1").unwrap();
    let ctx = context(rec, 9, &Env::symbolic(), None, D, VerifyOptions::default()).unwrap();
    let lhs = (rec.lhs)(&ctx).unwrap();
    assert_eq!(ints(&lhs, 9), partitions(9, |k| k % 5 == 1 || k % 5 == 4));
}

#[test]
fn verify_cw1_symbolic() {
    assert!(verify("cw1", 10, &Env::symbolic(), None).unwrap().passed());
}

#[test]
fn unknown_identity() {
    assert!(matches!(verify("nosuch", 10, &Env::symbolic(), None), Err(Error::UnknownIdentity(_))));
}

#[test]
fn constraint_violations() {
    let x_is_q = Env::symbolic().with(Param::X, Binding::value(1, 2));
    // rr1 has no parameters
    assert!(matches!(verify("rr1", 10, &x_is_q, None), Err(Error::Constraint(_))));
    // cw1 has x only
    let y_is_q = Env::symbolic().with(Param::Y, Binding::value(1, 2));
    assert!(matches!(verify("cw1", 10, &y_is_q, None), Err(Error::Constraint(_))));
    assert!(matches!(verify("gst", 10, &Env::symbolic(), Some(6)), Err(Error::Constraint(_))));
    assert!(matches!(verify("gst", 10, &Env::symbolic(), Some(-1)), Err(Error::Constraint(_))));
    assert!(matches!(verify("gst", 10, &Env::symbolic(), None), Err(Error::Constraint(_))));
    assert!(matches!(verify("rr1", 10, &Env::symbolic(), Some(0)), Err(Error::Constraint(_))));
    assert!(matches!(verify("rr1", -1, &Env::symbolic(), None), Err(Error::Config(_))));
}

#[test]
fn thm16_excludes_vanishing_divisor() {
    let bad = xy((1, -2), (1, 2));
    assert!(matches!(verify("thm16", 10, &bad, None), Err(Error::Constraint(_))));
    assert!(verify("thm16", 10, &xy((1, 2), (1, -2)), None).unwrap().passed());
}

#[test]
fn specialized_records_reject_an_environment() {
    let env = Env::symbolic().with(Param::X, Binding::value(1, 2));
    assert!(matches!(verify("threeterm-aa", 10, &env, Some(0)), Err(Error::Constraint(_))));
}

#[test]
fn sides_use_disjoint_primitive_calls() {
    for rec in list_identities() {
        for m in rec.knob_values() {
            let a = audit(rec.id, 10, m, D).unwrap();
            assert!(!a.lhs.is_empty(), "{} {:?}: no traced calls on the left", rec.id, m);
            assert!(a.shared.is_empty(), "{} {:?} shares {:?}", rec.id, m, a.shared);
        }
    }
}

#[test]
fn verify_all_is_in_catalog_order() {
    let expected: Vec<(String, Option<i64>)> = list_identities()
        .iter()
        .flat_map(|r| r.knob_values().into_iter().map(move |m| (r.id.to_string(), m)))
        .collect();
    for _ in 0..2 {
        let got: Vec<(String, Option<i64>)> = verify_all(Some(8), D).into_iter().map(|r| (r.id, r.m)).collect();
        assert_eq!(got, expected);
    }
}

#[test]
fn verify_all_passes_at_low_order() {
    for r in verify_all(Some(12), D) {
        assert!(r.passed(), "{} {:?}: {:?} {:?}", r.id, r.m, r.error, r.mismatch);
    }
}

#[test]
fn cross_checks_pass() {
    for r in cross_check(&derivation_pairs(), 20, D) {
        assert!(r.passed(), "{}: {:?} {:?}", r.id, r.error, r.mismatch);
    }
}

#[test]
fn other_denominators() {
    let d4 = Den::new(4).unwrap();
    for id in ["rr1", "uz1", "cw2", "thm11"] {
        let r = verify_with(id, 12, &Env::symbolic(), None, d4, VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{id} at D=4: {:?}", r.mismatch);
        assert_eq!(r.denominator, 4);
    }
    let d1 = Den::new(1).unwrap();
    assert!(verify_with("rr1", 12, &Env::symbolic(), None, d1, VerifyOptions::default()).unwrap().passed());
}

fn build(id: &str, which: usize, order: i64, opts: VerifyOptions) -> QSeries {
    let rec = find(id).unwrap();
    let ctx = context(rec, order, &Env::symbolic(), None, D, opts).unwrap();
    let b = [Some(rec.lhs), Some(rec.rhs), rec.aux][which].unwrap();
    b(&ctx).unwrap().require(ctx.n).unwrap()
}

#[test]
fn stop_rule_and_windows_are_stable() {
    let base = VerifyOptions::default();
    let wider = [
        VerifyOptions { margin: base.margin * 2, window_scale: 1 },
        VerifyOptions { margin: base.margin, window_scale: 2 },
        VerifyOptions { margin: base.margin * 2, window_scale: 4 },
    ];
    for id in ["int-cc", "int-a3", "int-c3", "int-e3"] {
        for which in [0, 2] {
            let reference = build(id, which, 16, base);
            for opts in wider {
                assert_eq!(build(id, which, 16, opts), reference, "{id} side {which} under {opts:?}");
            }
        }
    }
    for id in ["uz1", "thm11", "thm14"] {
        let reference = build(id, 0, 16, base);
        assert_eq!(build(id, 0, 16, wider[0]), reference, "{id}");
    }
}

#[test]
fn threeterm_specializations() {
    let rec = find("threeterm-aa").unwrap();
    let envs: Vec<String> = rec.knob_values().into_iter().map(|m| (rec.describe_knob.unwrap())(m.unwrap())).collect();
    for want in ["x=q, y=q^(1/2)", "x=q^3, y=q"] {
        assert!(envs.iter().any(|e| e == want), "{want} not in {envs:?}");
    }
}

#[test]
fn threeterm_at_q2_q3half_has_no_formal_sum() {
    use qsverify::qseries::QMono;
    use qsverify::summation::{phi_series, PhiSpec};
    // (x, y) = (q^2, q^(3/2)) sends -qx/y^2 to -1: sum (q^(1/2);q)_k (-1)^k/(q^2;q^2)_k
    let u = D.unit();
    let spec = PhiSpec {
        numer: vec![QMono::q_pow(1, u / 2), QMono::zero()],
        denom: vec![QMono::q_pow(-1, u)],
        step: u,
        arg: QMono::q_pow(-1, 0),
    };
    assert!(matches!(phi_series(&spec, D, 20 * u), Err(Error::Grading(_))));
}
