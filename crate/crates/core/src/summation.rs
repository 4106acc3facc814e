//! Sum sides: basic hypergeometric series, shell-enumerated lattice sums and
//! the Schur polynomials of the Rogers-Ramanujan family.

use crate::error::{Error, Result};
use crate::exactalg::{Den, ScaledExp};
use crate::qseries::{poch_list, Count, FactorSpec, ProductTerm, QMono, QSeries};
use crate::trace;

/// `_{r+1}phi_r(a_1..a_{r+1}; b_1..b_r; q^s, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSpec {
    pub numer: Vec<QMono>,
    pub denom: Vec<QMono>,
    pub step: ScaledExp,
    pub arg: QMono,
}

impl PhiSpec {
    fn term(&self, k: u64) -> Result<ProductTerm> {
        let z = self.arg.pow(k as i64).expect("nonnegative power");
        let mut t = ProductTerm::new(z).over(FactorSpec::finite(QMono::q_pow(1, self.step), self.step, k)?);
        for a in &self.numer {
            t = t.times(FactorSpec::finite(a.clone(), self.step, k)?);
        }
        for b in &self.denom {
            t = t.over(FactorSpec::finite(b.clone(), self.step, k)?);
        }
        Ok(t)
    }

    /// Index of the first numerator factor equal to zero, if any: the sum
    /// stops there.
    fn terminating_index(&self) -> Option<u64> {
        self.numer
            .iter()
            .filter(|a| !a.has_params() && num_traits::One::is_one(a.coeff()) && a.q <= 0 && (-a.q) % self.step == 0)
            .map(|a| ((-a.q) / self.step) as u64)
            .min()
    }

    fn describe(&self, den: Den) -> String {
        let list = |v: &[QMono]| v.iter().map(|m| m.display(den)).collect::<Vec<_>>().join(",");
        format!(
            "phi[{};{}] base {} arg {}",
            list(&self.numer),
            list(&self.denom),
            QMono::q_pow(1, self.step).display(den),
            self.arg.display(den)
        )
    }
}

/// Expands a basic hypergeometric series through order `n`.
pub fn phi_series(spec: &PhiSpec, den: Den, n: ScaledExp) -> Result<QSeries> {
    let _t = trace::enter("phi_series", || spec.describe(den));
    if spec.step <= 0 {
        return Err(Error::Config("phi_series base step must be positive".into()));
    }
    if spec.arg.is_zero() {
        return Ok(QSeries::one(den, n));
    }
    let last = spec.terminating_index();
    let rate = spec.arg.q;
    if last.is_none() && rate <= 0 {
        return Err(Error::Grading(format!(
            "{} does not terminate and its argument has q-order {} <= 0",
            spec.describe(den),
            crate::exactalg::fmt_exp(rate, den)
        )));
    }
    // From index `settled` on, every factor has nonnegative q-order, so the
    // term bound grows by exactly `rate` per step.
    let settled = spec
        .numer
        .iter()
        .chain(&spec.denom)
        .filter(|m| !m.is_zero() && m.q < 0)
        .map(|m| ((-m.q) + spec.step - 1) / spec.step)
        .max()
        .unwrap_or(0) as u64;
    let guard = settled + 4 * (n.max(0) as u64 + 1) + 8;
    let mut out = QSeries::zero(den, n);
    let mut k = 0u64;
    loop {
        if let Some(l) = last {
            if k > l {
                break;
            }
        }
        if k > guard {
            return Err(Error::NonTermination(format!("{} after {k} terms", spec.describe(den))));
        }
        let term = spec.term(k)?;
        match term.low_bound()? {
            Some(low) if low <= n => {
                out = out.try_add(&term.evaluate(den, n)?)?;
            }
            Some(low) if k >= settled && rate > 0 && low > n => break,
            _ => {}
        }
        k += 1;
    }
    Ok(out)
}

/// The summand of a lattice sum over `dim` nonnegative indices. `term`
/// returns `None` for indices whose term vanishes identically.
pub struct LatticeSummand<'a> {
    pub dim: usize,
    pub label: String,
    #[allow(clippy::type_complexity)]
    pub term: Box<dyn Fn(&[i64]) -> Result<Option<ProductTerm>> + 'a>,
}

impl<'a> LatticeSummand<'a> {
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        term: impl Fn(&[i64]) -> Result<Option<ProductTerm>> + 'a,
    ) -> Self {
        LatticeSummand { dim, label: label.into(), term: Box::new(term) }
    }
}

/// Stop rule of [`lattice_sum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeOptions {
    /// Shells past the first one lying entirely above the order that must
    /// also lie above it before enumeration stops.
    pub margin: usize,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions { margin: 2 }
    }
}

fn for_each_in_shell(dim: usize, s: i64, f: &mut dyn FnMut(&[i64]) -> Result<()>) -> Result<()> {
    fn rec(idx: &mut Vec<i64>, dim: usize, left: i64, f: &mut dyn FnMut(&[i64]) -> Result<()>) -> Result<()> {
        if idx.len() + 1 == dim {
            idx.push(left);
            f(idx)?;
            idx.pop();
            return Ok(());
        }
        for v in 0..=left {
            idx.push(v);
            rec(idx, dim, left - v, f)?;
            idx.pop();
        }
        Ok(())
    }
    rec(&mut Vec::with_capacity(dim), dim, s, f)
}

/// Least lower bound of the terms on shell `s` (`None` if all vanish).
pub fn shell_minimum(summand: &LatticeSummand<'_>, s: i64) -> Result<Option<ScaledExp>> {
    let mut best: Option<ScaledExp> = None;
    for_each_in_shell(summand.dim, s, &mut |idx| {
        if let Some(t) = (summand.term)(idx)? {
            if let Some(b) = t.low_bound()? {
                best = Some(best.map_or(b, |c| c.min(b)));
            }
        }
        Ok(())
    })?;
    Ok(best)
}

/// Sums a lattice series through order `n`, shell by shell in the total
/// index.
pub fn lattice_sum(summand: &LatticeSummand<'_>, den: Den, n: ScaledExp, opts: LatticeOptions) -> Result<QSeries> {
    let _t = trace::enter("lattice_sum", || summand.label.clone());
    if !(1..=3).contains(&summand.dim) {
        return Err(Error::Config(format!("lattice dimension {} is not supported", summand.dim)));
    }
    let guard = 4 * (n.max(0) + 1);
    let mut acc = QSeries::zero(den, n);
    let mut quiet = 0usize;
    let mut s = 0i64;
    loop {
        if s > guard {
            return Err(Error::NonTermination(format!(
                "{}: shell minima still reach order {} after {guard} shells",
                summand.label,
                crate::exactalg::fmt_exp(n, den)
            )));
        }
        let mut shell_min: Option<ScaledExp> = None;
        for_each_in_shell(summand.dim, s, &mut |idx| {
            let Some(t) = (summand.term)(idx)? else {
                return Ok(());
            };
            let Some(b) = t.low_bound()? else {
                return Ok(());
            };
            shell_min = Some(shell_min.map_or(b, |c| c.min(b)));
            if b <= n {
                acc = acc.try_add(&t.evaluate(den, n)?)?;
            }
            Ok(())
        })?;
        if shell_min.is_none_or(|m| m > n) {
            quiet += 1;
            if quiet > opts.margin {
                break;
            }
        } else {
            quiet = 0;
        }
        s += 1;
    }
    Ok(acc)
}

/// The Schur polynomials `D_m` and `E_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurPair {
    pub m: i64,
    pub d: QSeries,
    pub e: QSeries,
}

/// `D_m`, `E_m` for `m >= -2`: forward recurrence from `D_0 = 1`,
/// `D_1 = 1 + q`, `E_0 = E_1 = 1`, backward division below zero.
pub fn schur(m: i64, den: Den) -> Result<SchurPair> {
    if m < -2 {
        return Err(Error::Unsupported(format!("Schur polynomials below index -2 (m = {m})")));
    }
    let unit = den.unit();
    let step = |prev: &QSeries, prev2: &QSeries, k: i64| -> Result<QSeries> {
        prev.try_add(&prev2.mul_mono(&QMono::q_pow(1, k * unit)))
    };
    let back = |cur: &QSeries, prev: &QSeries, k: i64| -> Result<QSeries> {
        cur.try_sub(prev)?.div_exact_mono(&QMono::q_pow(1, k * unit))
    };
    let (mut d0, mut d1) = (QSeries::from_ints(den, &[1]), QSeries::from_ints(den, &[1, 1]));
    let (mut e0, mut e1) = (QSeries::from_ints(den, &[1]), QSeries::from_ints(den, &[1]));
    if m < 0 {
        // P_{k-2} = (P_k - P_{k-1}) / q^k for k = 1, 0
        let (dm1, em1) = (back(&d1, &d0, 1)?, back(&e1, &e0, 1)?);
        if m == -1 {
            return Ok(SchurPair { m, d: dm1, e: em1 });
        }
        let (dm2, em2) = (back(&d0, &dm1, 0)?, back(&e0, &em1, 0)?);
        return Ok(SchurPair { m, d: dm2, e: em2 });
    }
    if m == 0 {
        return Ok(SchurPair { m, d: d0, e: e0 });
    }
    for k in 2..=m {
        let d2 = step(&d1, &d0, k)?;
        let e2 = step(&e1, &e0, k)?;
        (d0, d1, e0, e1) = (d1, d2, e1, e2);
    }
    Ok(SchurPair { m, d: d1, e: e1 })
}

/// Largest knob value of the generalized Rogers-Ramanujan product side.
pub const GST_MAX_M: i64 = 5;

/// `(-1)^m q^{-C(m,2)} [E_{m-2}/(q,q^4;q^5)_inf - D_{m-2}/(q^2,q^3;q^5)_inf]`.
pub fn gst_rhs(m: i64, den: Den, n: ScaledExp) -> Result<QSeries> {
    let _t = trace::enter("gst_rhs", || m.to_string());
    if !(0..=GST_MAX_M).contains(&m) {
        return Err(Error::Unsupported(format!("m = {m} outside 0..={GST_MAX_M}")));
    }
    let unit = den.unit();
    let shift = m * (m - 1) / 2 * unit;
    let work = n + shift;
    let pair = schur(m - 2, den)?;
    let five = |a: i64, b: i64| -> Result<QSeries> {
        let fs = [
            FactorSpec::new(QMono::q_pow(1, a * unit), 5 * unit, Count::Infinite)?,
            FactorSpec::new(QMono::q_pow(1, b * unit), 5 * unit, Count::Infinite)?,
        ];
        poch_list(&fs, den, work)?.invert_to(work)
    };
    let first = pair.e.mul_to(&five(1, 4)?, work)?;
    let second = pair.d.mul_to(&five(2, 3)?, work)?;
    let sign = if m % 2 == 0 { 1 } else { -1 };
    let bracket = first.try_sub(&second)?.truncate(work);
    let out = bracket.mul_mono(&QMono::q_pow(sign, -shift));
    out.require(n)
}
