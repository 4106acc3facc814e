//! Laurent series in a contour variable `z` and constant-term extraction.
//!
//! Each integrand factor is one of the four classical expansions, written in
//! terms of `v = u z^p`. The constant term of a product is unchanged by the
//! substitution `z -> z q^w`, which multiplies the `k`-th term of a factor by
//! `q^{w p k}`; a suitable `w` makes the q-order of every factor's terms grow
//! with `|k|`, so the product has finitely many contributions below any order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{Den, ScaledExp};
use crate::qseries::{FactorSpec, ProductTerm, QMono, QSeries};
use crate::trace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZKind {
    /// `sum_k q^{s C(k,2)} v^k / (q^s;q^s)_k = (-v; q^s)_inf`
    EulerA,
    /// `sum_k v^k / (q^s;q^s)_k = 1/(v; q^s)_inf`
    EulerB,
    /// `sum_k (a;q^s)_k / (q^s;q^s)_k v^k = (a v; q^s)_inf / (v; q^s)_inf`
    QBinom { a: QMono },
    /// `sum_{k in Z} q^{s C(k,2)} v^k = (q^s, -v, -q^s/v; q^s)_inf`
    Jacobi,
}

/// One integrand factor with `v = u z^p` and base `q^base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZFactor {
    pub kind: ZKind,
    pub base: ScaledExp,
    pub u: QMono,
    pub p: i64,
}

impl ZFactor {
    pub fn new(kind: ZKind, base: ScaledExp, u: QMono, p: i64) -> Result<ZFactor> {
        if base <= 0 {
            return Err(Error::Config(format!("factor base step must be positive, got {base}")));
        }
        Ok(ZFactor { kind, base, u, p })
    }

    fn rate(&self, w: i64) -> ScaledExp {
        self.u.q + w * self.p
    }

    fn two_sided(&self) -> bool {
        matches!(self.kind, ZKind::Jacobi)
    }

    /// True when the (a;q^s)_k numerator vanishes from some index on.
    fn terminates_at(&self) -> Option<i64> {
        match &self.kind {
            ZKind::QBinom { a }
                if !a.has_params() && num_traits::One::is_one(a.coeff()) && a.q <= 0 && (-a.q) % self.base == 0 =>
            {
                Some((-a.q) / self.base)
            }
            _ => None,
        }
    }

    /// The `k`-th term, as a coefficient of `z^{p k}`, after `z -> z q^w`.
    pub fn term(&self, k: i64, w: i64) -> Result<Option<ProductTerm>> {
        let v = self.u.shift_q(w * self.p);
        let s = self.base;
        let vk = match v.pow(k) {
            Some(m) => m,
            None => {
                return Err(Error::Inversion(format!("negative powers of the non-unit {}", v.display(Den::DEFAULT))))
            }
        };
        let tri = s * k * (k - 1) / 2;
        let qpoch = |n: i64| FactorSpec::finite(QMono::q_pow(1, s), s, n as u64);
        let t = match &self.kind {
            ZKind::EulerA | ZKind::EulerB | ZKind::QBinom { .. } if k < 0 => return Ok(None),
            ZKind::EulerA => ProductTerm::new(vk.shift_q(tri)).over(qpoch(k)?),
            ZKind::EulerB => ProductTerm::new(vk).over(qpoch(k)?),
            ZKind::QBinom { a } => {
                ProductTerm::new(vk).times(FactorSpec::finite(a.clone(), s, k as u64)?).over(qpoch(k)?)
            }
            ZKind::Jacobi => ProductTerm::new(vk.shift_q(tri)),
        };
        Ok(Some(t))
    }

    /// Lower bound on the q-order of term `k` (`None` if it vanishes).
    pub fn growth(&self, k: i64, w: i64) -> Result<Option<ScaledExp>> {
        match self.term(k, w)? {
            Some(t) => t.low_bound(),
            None => Ok(None),
        }
    }

    /// True when the growth is strictly increasing in `|k|` from `k` outward.
    fn settled(&self, k: i64, w: i64) -> bool {
        let r = self.rate(w);
        let s = self.base;
        match &self.kind {
            ZKind::EulerA => s * k + r > 0,
            ZKind::EulerB => r > 0,
            ZKind::QBinom { a } => r > 0 && a.q + s * k >= 0,
            ZKind::Jacobi if k >= 0 => s * k + r > 0,
            ZKind::Jacobi => s * (-k + 1) - r > 0,
        }
    }

    fn check_graded(&self, w: i64) -> Result<()> {
        if self.u.is_zero() {
            return Ok(());
        }
        let ungraded = match self.kind {
            ZKind::EulerB => self.rate(w) <= 0,
            ZKind::QBinom { .. } => self.rate(w) <= 0 && self.terminates_at().is_none(),
            _ => false,
        };
        if ungraded {
            return Err(Error::Grading(format!(
                "factor with argument {} has rate {} under z -> z q^({})",
                self.u.display(Den::DEFAULT),
                self.rate(w),
                w
            )));
        }
        Ok(())
    }

    /// Indices `k` (one direction) whose terms can reach order `bound`,
    /// walking `k = 0, dir, 2 dir, ...` until the growth is settled above it.
    fn reach(&self, w: i64, bound: ScaledExp, dir: i64) -> Result<Vec<(i64, ScaledExp)>> {
        self.check_graded(w)?;
        if self.u.is_zero() {
            let g = self.growth(0, w)?;
            return Ok(if dir > 0 && g.is_some_and(|g| g <= bound) { vec![(0, g.unwrap())] } else { vec![] });
        }
        let mut out = Vec::new();
        let mut k = if dir > 0 { 0 } else { -1 };
        let last = self.terminates_at();
        let mut steps = 0u64;
        loop {
            if last.is_some_and(|l| k > l) {
                break;
            }
            let g = self.growth(k, w)?;
            if let Some(g) = g {
                if g <= bound {
                    out.push((k, g));
                } else if self.settled(k, w) {
                    break;
                }
            } else if self.settled(k, w) && !matches!(self.kind, ZKind::QBinom { .. }) {
                break;
            }
            k += dir;
            steps += 1;
            if steps > 1_000_000 {
                return Err(Error::NonTermination("z-window search".into()));
            }
        }
        Ok(out)
    }

    /// Least q-order of any term.
    pub fn floor(&self, w: i64) -> Result<ScaledExp> {
        self.check_graded(w)?;
        if self.u.is_zero() {
            return Ok(self.growth(0, w)?.unwrap_or(0));
        }
        let mut best = ScaledExp::MAX;
        for dir in if self.two_sided() { vec![1, -1] } else { vec![1] } {
            let mut k = if dir > 0 { 0 } else { -1 };
            let last = self.terminates_at();
            loop {
                if last.is_some_and(|l| k > l) {
                    break;
                }
                if let Some(g) = self.growth(k, w)? {
                    best = best.min(g);
                    if self.settled(k, w) {
                        break;
                    }
                } else if self.settled(k, w) && !matches!(self.kind, ZKind::QBinom { .. }) {
                    break;
                }
                k += dir;
            }
        }
        Ok(best)
    }
}

/// A Laurent series in `z` with q-series coefficients.
///
/// Every coefficient (stored or not) has q-valuation at least `floor`;
/// stored coefficients are exact through `order`, and coefficients that are
/// not stored vanish through `order`.
#[derive(Clone, Debug)]
pub struct ZSeries {
    pub den: Den,
    pub order: ScaledExp,
    pub floor: ScaledExp,
    pub coeffs: BTreeMap<i64, QSeries>,
}

impl ZSeries {
    pub fn one(den: Den, order: ScaledExp) -> ZSeries {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, QSeries::one(den, order));
        ZSeries { den, order, floor: 0, coeffs }
    }

    pub fn coeff(&self, d: i64) -> QSeries {
        self.coeffs.get(&d).cloned().unwrap_or_else(|| QSeries::zero(self.den, self.order))
    }

    /// Inclusive range of stored z-degrees.
    pub fn window(&self) -> Option<(i64, i64)> {
        Some((*self.coeffs.keys().next()?, *self.coeffs.keys().next_back()?))
    }

    pub fn try_add(&self, other: &ZSeries) -> Result<ZSeries> {
        self.den.check(other.den)?;
        let order = self.order.min(other.order);
        let mut coeffs: BTreeMap<i64, QSeries> = BTreeMap::new();
        for (&d, s) in self.coeffs.iter().chain(&other.coeffs) {
            let next = match coeffs.remove(&d) {
                Some(prev) => prev.try_add(s)?,
                None => s.truncate(order),
            };
            coeffs.insert(d, next.truncate(order));
        }
        Ok(ZSeries { den: self.den, order, floor: self.floor.min(other.floor), coeffs })
    }
}

/// Expands one factor with `z -> z q^w`, keeping the terms that can reach
/// q-order `order`. `scale` widens the index window by that factor.
pub fn z_expand(f: &ZFactor, den: Den, order: ScaledExp, w: i64, scale: i64) -> Result<ZSeries> {
    let floor = f.floor(w)?;
    let mut ks: Vec<i64> = f.reach(w, order, 1)?.into_iter().map(|(k, _)| k).collect();
    if f.two_sided() {
        ks.extend(f.reach(w, order, -1)?.into_iter().map(|(k, _)| k));
    }
    if scale > 1 {
        let (lo, hi) = (ks.iter().copied().min().unwrap_or(0), ks.iter().copied().max().unwrap_or(0));
        let lo = if f.two_sided() { lo.min(-1) * scale } else { 0 };
        let hi = (hi.max(1) + 1) * scale;
        ks = (lo..=hi).collect();
        if let Some(l) = f.terminates_at() {
            ks.retain(|&k| k <= l);
        }
    }
    let mut coeffs: BTreeMap<i64, QSeries> = BTreeMap::new();
    for k in ks {
        let Some(t) = f.term(k, w)? else { continue };
        let s = t.evaluate(den, order)?;
        if s.is_zero() {
            continue;
        }
        let d = f.p * k;
        let next = match coeffs.remove(&d) {
            Some(prev) => prev.try_add(&s)?,
            None => s,
        };
        coeffs.insert(d, next);
    }
    Ok(ZSeries { den, order, floor, coeffs })
}

/// Product in `z`, complete to `min(order_a + floor_b, order_b + floor_a)`.
pub fn z_mul(a: &ZSeries, b: &ZSeries) -> Result<ZSeries> {
    a.den.check(b.den)?;
    let order = a.order.saturating_add(b.floor).min(b.order.saturating_add(a.floor));
    let mut coeffs: BTreeMap<i64, QSeries> = BTreeMap::new();
    for (&da, sa) in &a.coeffs {
        for (&db, sb) in &b.coeffs {
            let prod = sa.mul_to(sb, order)?;
            if prod.is_zero() {
                continue;
            }
            let next = match coeffs.remove(&(da + db)) {
                Some(prev) => prev.try_add(&prod)?,
                None => prod,
            };
            coeffs.insert(da + db, next);
        }
    }
    for s in coeffs.values_mut() {
        *s = s.truncate(order);
    }
    coeffs.retain(|_, s| !s.is_zero());
    Ok(ZSeries { den: a.den, order, floor: a.floor.saturating_add(b.floor), coeffs })
}

/// Options of [`constant_term`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContourOptions {
    /// Widening factor of every factor's index window.
    pub window_scale: i64,
    /// Fixed weight `w` of `z -> z q^w`; chosen automatically when `None`.
    pub weight: Option<i64>,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions { window_scale: 1, weight: None }
    }
}

/// Smallest `|w|` (ties to positive) under which every factor is graded.
pub fn choose_weight(factors: &[ZFactor]) -> Result<i64> {
    for mag in 0..=256i64 {
        for w in [mag, -mag] {
            if factors.iter().all(|f| f.check_graded(w).is_ok()) {
                return Ok(w);
            }
        }
    }
    Err(Error::Grading("no z-weight makes every factor graded".into()))
}

/// `[z^0]` of the product of `factors`, complete through order `n`.
pub fn constant_term(factors: &[ZFactor], den: Den, n: ScaledExp, opts: ContourOptions) -> Result<QSeries> {
    let _t = trace::enter("constant_term", || factors.iter().map(|f| format!("{:?}", f)).collect::<Vec<_>>().join(" "));
    let w = match opts.weight {
        Some(w) => w,
        None => choose_weight(factors)?,
    };
    if factors.is_empty() {
        return Ok(QSeries::one(den, n));
    }
    let floors: Vec<ScaledExp> = factors.iter().map(|f| f.floor(w)).collect::<Result<_>>()?;
    let total: ScaledExp = floors.iter().sum();
    let mut expanded = Vec::with_capacity(factors.len());
    for (f, &m) in factors.iter().zip(&floors) {
        expanded.push(z_expand(f, den, n - (total - m), w, opts.window_scale.max(1))?);
    }
    // suffix[i]: least q-valuation reachable at each z-degree by factors i..
    let mut suffix: Vec<BTreeMap<i64, ScaledExp>> = vec![BTreeMap::new(); factors.len() + 1];
    suffix[factors.len()].insert(0, 0);
    for i in (0..factors.len()).rev() {
        let mut next: BTreeMap<i64, ScaledExp> = BTreeMap::new();
        for (&d, s) in &expanded[i].coeffs {
            let v = s.lo();
            for (&e, &ve) in &suffix[i + 1] {
                if v + ve > n {
                    continue;
                }
                let slot = next.entry(d + e).or_insert(ScaledExp::MAX);
                *slot = (*slot).min(v + ve);
            }
        }
        suffix[i] = next;
    }
    let mut partial: BTreeMap<i64, QSeries> = BTreeMap::new();
    partial.insert(0, QSeries::one(den, crate::qseries::EXACT));
    for (i, z) in expanded.iter().enumerate() {
        let rest = &suffix[i + 1];
        let mut next: BTreeMap<i64, QSeries> = BTreeMap::new();
        for (&d, s) in &partial {
            for (&e, c) in &z.coeffs {
                let Some(&vr) = rest.get(&-(d + e)) else { continue };
                let limit = n - vr;
                if s.lo() + c.lo() > limit {
                    continue;
                }
                let prod = s.mul_to(c, limit)?;
                let slot = next.remove(&(d + e));
                let sum = match slot {
                    Some(prev) => prev.try_add(&prod)?,
                    None => prod,
                };
                next.insert(d + e, sum);
            }
        }
        partial = next;
    }
    let out = partial.remove(&0).unwrap_or_else(|| QSeries::zero(den, n));
    out.require(n)
}
