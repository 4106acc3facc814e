//! Acceptance criteria 1-8. Prints one `[PASS]`/`[FAIL]` line per criterion
//! and exits nonzero if any fails.
//!
//! Every comparison is exact coefficient equality; the only pinned tolerance
//! is the runtime budget of criterion 1.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{big, partitions, uz1_double_sum};
use num_bigint::BigInt;
use qsverify::exactalg::{Den, ParamMono, ParamPoly};
use qsverify::qseries::{euler_a, euler_b, jacobi_triple, poch, Env, FactorSpec, JacobiForm, QMono, QSeries};
use qsverify::registry::{
    bisection_coherence, context, cross_check, derivation_pairs, find, verify, verify_all, verify_with,
    VerificationReport, VerifyOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const D: Den = Den::DEFAULT;
/// Criterion 1 runtime budget.
const FULL_CATALOG_BUDGET: Duration = Duration::from_secs(180);
/// Criterion 8 sample size and seed.
const RANDOM_CHECKS: usize = 10_000;
const SEED: u64 = 0x5157_5645_5249_4659;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn failures(reports: &[VerificationReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} m={:?}: {:?} {:?}", r.id, r.m, r.error, r.mismatch.as_ref().map(|m| m.exponent)))
        .collect()
}

fn all_pass(reports: &[VerificationReport], what: &str) -> Check {
    let bad = failures(reports);
    if bad.is_empty() {
        Ok(format!("{} {what} pass", reports.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn run(id: &str, order: i64, m: Option<i64>) -> VerificationReport {
    verify(id, order, &Env::symbolic(), m).unwrap_or_else(|e| panic!("{id}: {e}"))
}

fn side(id: &str, order: i64, which: usize, opts: VerifyOptions) -> Result<QSeries, String> {
    let rec = find(id).map_err(|e| e.to_string())?;
    let ctx = context(rec, order, &Env::symbolic(), None, D, opts).map_err(|e| e.to_string())?;
    let b = [Some(rec.lhs), Some(rec.rhs), rec.aux][which].ok_or("no third route")?;
    b(&ctx).and_then(|s| s.require(ctx.n)).map_err(|e| e.to_string())
}

fn coeffs(id: &str, order: i64, which: usize) -> Result<Vec<BigInt>, String> {
    side(id, order, which, VerifyOptions::default())?.int_coeffs(order).ok_or_else(|| format!("{id}: not integral"))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let reports = verify_all(None, D);
    let elapsed = start.elapsed();
    let orders_ok = reports.iter().all(|r| r.order >= 30);
    all_pass(&reports, "catalog entries")?;
    if !orders_ok {
        return Err("an entry ran below order 30".into());
    }
    if elapsed > FULL_CATALOG_BUDGET {
        return Err(format!("took {elapsed:?}, budget {FULL_CATALOG_BUDGET:?}"));
    }
    Ok(format!("{} entries pass at default orders in {:.1} s", reports.len(), elapsed.as_secs_f64()))
}

fn criterion_2() -> Check {
    let want = big(&[1, 1, 1, 1, 2, 2, 3, 3, 4, 5]);
    for (id, residues) in [("rr1", [1, 4]), ("rr2", [2, 3])] {
        let oracle = big(&partitions(40, |k| residues.contains(&(k % 5))));
        if id == "rr1" && oracle[..10] != want[..] {
            return Err("partition oracle disagrees with the listed coefficients".into());
        }
        for which in [0, 1] {
            let got = coeffs(id, 40, which)?;
            if got != oracle {
                return Err(format!("{id} side {which} differs from the partition count"));
            }
        }
    }
    Ok("rr1, rr2 both sides match partition counts through q^40".into())
}

fn criterion_3() -> Check {
    let want = big(&[1, 1, 2, 1, 3, 3, 5]);
    let oracle = big(&uz1_double_sum(6));
    if oracle != want {
        return Err(format!("double-sum oracle gives {oracle:?}"));
    }
    for which in [0, 1] {
        if coeffs("uz1", 6, which)? != want {
            return Err(format!("uz1 side {which} differs"));
        }
    }
    if coeffs("uz1", 30, 0)? != big(&uz1_double_sum(30)) {
        return Err("uz1 differs from the double-sum oracle through q^30".into());
    }
    all_pass(&[run("uz1", 6, None), run("uz2", 40, None)], "")?;
    Ok("uz1 = [1,1,2,1,3,3,5] on both sides; uz2 passes through q^40".into())
}

fn criterion_4() -> Check {
    let ids = ["cw1", "cw2", "thm11", "thm14", "thm15", "thm16"];
    let reports: Vec<_> = ids.iter().map(|id| run(id, 30, None)).collect();
    all_pass(&reports, "")?;
    for id in ids {
        let s = side(id, 30, 0, VerifyOptions::default())?;
        if s.iter().all(|(_, p)| p.as_constant().is_some()) {
            return Err(format!("{id} has no parameter-dependent coefficient"));
        }
    }
    Ok(format!("{} pass symbolically to order 30", ids.join(", ")))
}

fn criterion_5() -> Check {
    let checks = cross_check(&derivation_pairs(), 30, D);
    all_pass(&checks, "")?;
    let gst: Vec<_> = (0..=5).map(|m| run("gst", 40, Some(m))).collect();
    all_pass(&gst, "")?;
    Ok(format!("{} derivation cross-checks and gst m=0..5 pass", checks.len()))
}

fn criterion_6() -> Check {
    let ids = ["int-cc", "int-a3", "int-c3", "int-e3"];
    let base = VerifyOptions::default();
    let wide = VerifyOptions { margin: base.margin * 2, window_scale: base.window_scale * 2 };
    for id in ids {
        for opts in [base, wide] {
            let r = verify_with(id, 30, &Env::symbolic(), None, D, opts).map_err(|e| e.to_string())?;
            all_pass(&[r], "")?;
        }
        for which in 0..3 {
            if side(id, 30, which, base)? != side(id, 30, which, wide)? {
                return Err(format!("{id} route {which} changes under doubled windows and margins"));
            }
        }
    }
    Ok("lattice sum = constant term = product to order 30, stable under x2 windows and margins".into())
}

fn criterion_7() -> Check {
    let mut reports = vec![run("wcy-a", 60, None), run("wcy-b", 60, None)];
    for id in ["thm41a", "thm41b", "thm43a", "thm43b", "thm44a", "thm44b"] {
        reports.push(run(id, 40, None));
    }
    for id in ["thm42a", "thm42b"] {
        reports.extend((0..=4).map(|m| run(id, 40, Some(m))));
    }
    all_pass(&reports, "")?;
    let coherence = bisection_coherence(40, D).map_err(|e| e.to_string())?;
    all_pass(&coherence, "")?;
    Ok(format!("{} bisection-layer checks and even/odd coherence pass", reports.len()))
}

fn random_poly(rng: &mut ChaCha8Rng) -> ParamPoly {
    let n = rng.gen_range(0..5);
    ParamPoly::from_terms(D, (0..n).map(|_| (rng.gen_range(-9i64..=9), rng.gen_range(-4..=4), rng.gen_range(-4..=4))))
}

fn ring_check(rng: &mut ChaCha8Rng) -> bool {
    let (a, b, c) = (random_poly(rng), random_poly(rng), random_poly(rng));
    let zero = ParamPoly::zero(D);
    let one = ParamPoly::one(D);
    let m = ParamMono::new(rng.gen_range(1i64..=9) * if rng.gen() { 1 } else { -1 }, rng.gen_range(-4..=4), 0);
    &a * &b == &b * &a
        && &(&a * &b) * &c == &a * &(&b * &c)
        && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
        && &(&a + &b) + &c == &a + &(&b + &c)
        && &a + &(-&a) == zero
        && &a * &one == a
        && a.mul_mono(&m).div_exact_mono(&m).ok() == Some(a.clone())
        && ((&a - &b).is_zero() == (a == b))
}

fn inverse_check(rng: &mut ChaCha8Rng) -> bool {
    let lo = rng.gen_range(-3i64..=3);
    let lead = ParamMono::new(if rng.gen() { 1 } else { -1 }, rng.gen_range(-4..=4), rng.gen_range(-4..=4));
    let ncut = lo + rng.gen_range(4..12);
    let mut terms = vec![(lo, ParamPoly::from_mono(D, &lead))];
    for e in lo + 1..=ncut {
        terms.push((e, random_poly(rng)));
    }
    let a = QSeries::from_coeffs(D, ncut, terms).unwrap();
    let Ok(inv) = a.invert() else { return false };
    let Ok(p) = a.try_mul(&inv) else { return false };
    p.ncut() >= ncut - lo && p == QSeries::one(D, qsverify::qseries::EXACT)
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    for i in 0..RANDOM_CHECKS {
        let ok = if i % 2 == 0 { ring_check(&mut rng) } else { inverse_check(&mut rng) };
        bad += usize::from(!ok);
    }
    if bad > 0 {
        return Err(format!("{bad} of {RANDOM_CHECKS} randomized checks failed"));
    }
    let n = 40 * D.unit();
    let u = D.unit();
    let e = |msg: &str, err: qsverify::Error| format!("{msg}: {err}");
    let zs = [
        QMono::q_pow(1, u),
        QMono::q_pow(1, 2 * u),
        QMono::q_pow(-1, u),
        QMono::new(1, u, 0, u),
        QMono::new(1, 0, 2 * u, u),
    ];
    for z in &zs {
        let label = z.display(D);
        let a = euler_a(z, D, n).map_err(|x| e(&label, x))?;
        let pa = poch(&FactorSpec::infinite(z.neg(), u).unwrap(), D, n).map_err(|x| e(&label, x))?;
        let b = euler_b(z, D, n).map_err(|x| e(&label, x))?;
        let pb = poch(&FactorSpec::infinite(z.clone(), u).unwrap(), D, n)
            .and_then(|s| s.invert_to(n))
            .map_err(|x| e(&label, x))?;
        if a.require(n).ok() != Some(pa.truncate(n)) || b.require(n).ok() != Some(pb.truncate(n)) {
            return Err(format!("Euler duality fails at z = {label}"));
        }
    }
    let ws = [
        QMono::q_pow(1, u),
        QMono::q_pow(-1, u),
        QMono::q_pow(1, 2 * u),
        QMono::q_pow(-1, 2 * u),
        QMono::new(1, u, 0, u),
        QMono::new(1, 0, u, 2 * u),
    ];
    for w in &ws {
        let label = w.display(D);
        let s = jacobi_triple(w, D, n, JacobiForm::Sum).map_err(|x| e(&label, x))?;
        let p = jacobi_triple(w, D, n, JacobiForm::Product).map_err(|x| e(&label, x))?;
        if s.truncate(n) != p.truncate(n) || p.ncut() < n {
            return Err(format!("Jacobi duality fails at w = {label}"));
        }
    }
    Ok(format!(
        "{RANDOM_CHECKS} seeded ring/inverse checks; Euler-a/b at {} and Jacobi at {} arguments to order 40",
        zs.len(),
        ws.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("full-catalog verification", criterion_1),
        ("Rogers-Ramanujan coefficients", criterion_2),
        ("Uncu-Zudilin double sums", criterion_3),
        ("parameterized identities", criterion_4),
        ("derivation cross-checks", criterion_5),
        ("integral instances", criterion_6),
        ("bisection layer", criterion_7),
        ("kernel properties", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f)
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("[PASS] criterion {}: {name}: {msg} ({secs:.2} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {msg} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
