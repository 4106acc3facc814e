//! Truncated Laurent series in `q` with [`ParamPoly`] coefficients.
//!
//! A [`QSeries`] stores the coefficients up to its truncation order `ncut`
//! (inclusive). Every stored coefficient is complete: no omitted contribution
//! can change it. Arithmetic tracks `ncut` so that this stays true; a
//! finite polynomial carries the sentinel order [`EXACT`].

mod env;
mod expansions;
mod product;

pub use env::{Binding, Env, Param};
pub use expansions::{euler_a, euler_b, jacobi_triple, JacobiForm};
pub use product::{poch, poch_list, product_ratio, Binomial, Count, Factor, FactorSpec, ProductTerm};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{fmt_exp, fmt_mono_body, Den, ParamMono, ParamPoly, ScaledExp};

/// Truncation order of a series that is an exact (finite) polynomial.
pub const EXACT: ScaledExp = ScaledExp::MAX;

fn shift_cut(cut: ScaledExp, by: ScaledExp) -> ScaledExp {
    if cut == EXACT {
        EXACT
    } else {
        cut + by
    }
}

/// A monomial `c * x^a * y^b * q^e`, all exponents in scaled units.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMono {
    pub param: ParamMono,
    pub q: ScaledExp,
}

impl QMono {
    pub fn new(coeff: impl Into<BigInt>, x: ScaledExp, y: ScaledExp, q: ScaledExp) -> Self {
        QMono { param: ParamMono::new(coeff, x, y), q }
    }

    pub fn one() -> Self {
        QMono::new(1, 0, 0, 0)
    }

    pub fn zero() -> Self {
        QMono::new(0, 0, 0, 0)
    }

    /// `c * q^e`.
    pub fn q_pow(coeff: impl Into<BigInt>, q: ScaledExp) -> Self {
        QMono::new(coeff, 0, 0, q)
    }

    pub fn coeff(&self) -> &BigInt {
        &self.param.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.param.coeff.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.param.is_unit()
    }

    /// True when the monomial is exactly `1` (no parameters, no q-power).
    pub fn is_one(&self) -> bool {
        self.param.coeff.is_one() && self.param.x == 0 && self.param.y == 0 && self.q == 0
    }

    pub fn has_params(&self) -> bool {
        self.param.x != 0 || self.param.y != 0
    }

    pub fn mul(&self, other: &QMono) -> QMono {
        QMono { param: self.param.mul(&other.param), q: self.q + other.q }
    }

    pub fn neg(&self) -> QMono {
        QMono { param: ParamMono { coeff: -&self.param.coeff, ..self.param.clone() }, q: self.q }
    }

    /// Multiplies the q-exponent shift in.
    pub fn shift_q(&self, by: ScaledExp) -> QMono {
        QMono { param: self.param.clone(), q: self.q + by }
    }

    pub fn unit_inverse(&self) -> Option<QMono> {
        self.param.unit_inverse().map(|param| QMono { param, q: -self.q })
    }

    /// Exact quotient `self / other` where `other` is a unit monomial.
    pub fn div_unit(&self, other: &QMono) -> Option<QMono> {
        other.unit_inverse().map(|inv| self.mul(&inv))
    }

    /// Integer power; negative powers need a unit monomial.
    pub fn pow(&self, k: i64) -> Option<QMono> {
        let base = if k < 0 { self.unit_inverse()? } else { self.clone() };
        let n = k.unsigned_abs();
        let coeff = num_traits::pow(base.param.coeff.clone(), n as usize);
        let n = n as i64;
        Some(QMono::new(coeff, base.param.x * n, base.param.y * n, base.q * n))
    }

    pub fn display(&self, den: Den) -> String {
        struct D<'a>(&'a QMono, Den);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let m = self.0;
                if m.param.coeff.is_negative() {
                    f.write_str("-")?;
                }
                fmt_mono_body(f, &m.param.coeff.abs(), m.param.x, m.param.y, &[("q", m.q)], self.1)
            }
        }
        D(self, den).to_string()
    }
}

/// The first exponent at which two series disagree, with both coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: ScaledExp,
    pub lhs: ParamPoly,
    pub rhs: ParamPoly,
}

/// A truncated Laurent series in `q`.
#[derive(Clone, Debug)]
pub struct QSeries {
    den: Den,
    ncut: ScaledExp,
    coeffs: BTreeMap<ScaledExp, ParamPoly>,
}

impl QSeries {
    pub fn zero(den: Den, ncut: ScaledExp) -> Self {
        QSeries { den, ncut, coeffs: BTreeMap::new() }
    }

    pub fn one(den: Den, ncut: ScaledExp) -> Self {
        QSeries::from_mono(den, &QMono::one(), ncut)
    }

    pub fn from_mono(den: Den, m: &QMono, ncut: ScaledExp) -> Self {
        let mut s = QSeries::zero(den, ncut);
        if !m.is_zero() && m.q <= ncut {
            s.coeffs.insert(m.q, ParamPoly::from_mono(den, &m.param));
        }
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs; entries beyond
    /// `ncut` are dropped and repeated exponents are summed.
    pub fn from_coeffs<I>(den: Den, ncut: ScaledExp, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ScaledExp, ParamPoly)>,
    {
        let mut s = QSeries::zero(den, ncut);
        for (e, p) in coeffs {
            den.check(p.den())?;
            if e <= ncut {
                s.add_at(e, &p);
            }
        }
        Ok(s)
    }

    /// An exact polynomial in `q` with integer coefficients, listed from `q^0`
    /// in whole powers.
    pub fn from_ints(den: Den, ints: &[i64]) -> Self {
        let mut s = QSeries::zero(den, EXACT);
        for (i, &c) in ints.iter().enumerate() {
            s.add_at(i as i64 * den.unit(), &ParamPoly::constant(den, c));
        }
        s
    }

    fn add_at(&mut self, e: ScaledExp, p: &ParamPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(|| ParamPoly::zero(self.den));
        slot.add_assign_unchecked(p);
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn den(&self) -> Den {
        self.den
    }

    /// Inclusive truncation order.
    pub fn ncut(&self) -> ScaledExp {
        self.ncut
    }

    pub fn is_exact(&self) -> bool {
        self.ncut == EXACT
    }

    /// Least exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<ScaledExp> {
        self.coeffs.keys().next().copied()
    }

    /// Least exponent that can carry a nonzero coefficient: the valuation, or
    /// `ncut + 1` for a series known to vanish through its order.
    pub fn lo(&self) -> ScaledExp {
        self.valuation().unwrap_or_else(|| shift_cut(self.ncut, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: ScaledExp) -> ParamPoly {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| ParamPoly::zero(self.den))
    }

    pub fn coeff_ref(&self, e: ScaledExp) -> Option<&ParamPoly> {
        self.coeffs.get(&e)
    }

    /// Nonzero coefficients in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (ScaledExp, &ParamPoly)> {
        self.coeffs.iter().map(|(&e, p)| (e, p))
    }

    /// Integer coefficients at whole powers `q^0 ..= q^upto` of a
    /// parameter-free series; `None` if some coefficient has parameters or a
    /// fractional power is present in range.
    pub fn int_coeffs(&self, upto: i64) -> Option<Vec<BigInt>> {
        let unit = self.den.unit();
        if self.iter().any(|(e, _)| e <= upto * unit && e % unit != 0) {
            return None;
        }
        (0..=upto).map(|i| self.coeff(i * unit).as_constant()).collect()
    }

    pub fn truncate(&self, n: ScaledExp) -> QSeries {
        let ncut = self.ncut.min(n);
        QSeries { den: self.den, ncut, coeffs: self.coeffs.range(..=ncut).map(|(&e, p)| (e, p.clone())).collect() }
    }

    /// Truncates to `n`, failing if the series is not complete that far.
    pub fn require(&self, n: ScaledExp) -> Result<QSeries> {
        if self.ncut < n {
            return Err(Error::Precision { have: self.ncut, need: n });
        }
        Ok(self.truncate(n))
    }

    pub fn try_add(&self, other: &QSeries) -> Result<QSeries> {
        self.den.check(other.den)?;
        let ncut = self.ncut.min(other.ncut);
        let mut out = self.truncate(ncut);
        for (&e, p) in other.coeffs.range(..=ncut) {
            out.add_at(e, p);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &QSeries) -> Result<QSeries> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> QSeries {
        QSeries { den: self.den, ncut: self.ncut, coeffs: self.coeffs.iter().map(|(&e, p)| (e, -p)).collect() }
    }

    pub fn scale_int(&self, c: &BigInt) -> QSeries {
        if c.is_zero() {
            return QSeries::zero(self.den, EXACT);
        }
        QSeries { den: self.den, ncut: self.ncut, coeffs: self.coeffs.iter().map(|(&e, p)| (e, p.scale(c))).collect() }
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_exact_int(&self, d: &BigInt) -> Result<QSeries> {
        let mut coeffs = BTreeMap::new();
        for (&e, p) in &self.coeffs {
            let quotient = p.div_exact_int(d).map_err(|err| match err {
                Error::Exactness(msg) => Error::Exactness(format!("at q^{}: {msg}", fmt_exp(e, self.den))),
                other => other,
            })?;
            coeffs.insert(e, quotient);
        }
        Ok(QSeries { den: self.den, ncut: self.ncut, coeffs })
    }

    pub fn mul_mono(&self, m: &QMono) -> QSeries {
        if m.is_zero() {
            return QSeries::zero(self.den, EXACT);
        }
        QSeries {
            den: self.den,
            ncut: shift_cut(self.ncut, m.q),
            coeffs: self.coeffs.iter().map(|(&e, p)| (e + m.q, p.mul_mono(&m.param))).collect(),
        }
    }

    /// Exact division by a monomial.
    pub fn div_exact_mono(&self, m: &QMono) -> Result<QSeries> {
        if m.is_zero() {
            return Err(Error::Exactness("division by the zero monomial".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (&e, p) in &self.coeffs {
            coeffs.insert(e - m.q, p.div_exact_mono(&m.param)?);
        }
        Ok(QSeries { den: self.den, ncut: shift_cut(self.ncut, -m.q), coeffs })
    }

    /// Order to which a product with `other` is complete.
    fn product_cut(&self, other: &QSeries) -> ScaledExp {
        let a = if self.is_exact() { EXACT } else { self.ncut.saturating_add(other.lo()) };
        let b = if other.is_exact() { EXACT } else { other.ncut.saturating_add(self.lo()) };
        a.min(b)
    }

    pub fn try_mul(&self, other: &QSeries) -> Result<QSeries> {
        self.mul_to(other, EXACT)
    }

    /// Truncated product, computing coefficients only up to `limit`.
    pub fn mul_to(&self, other: &QSeries, limit: ScaledExp) -> Result<QSeries> {
        self.den.check(other.den)?;
        let ncut = self.product_cut(other).min(limit);
        let mut out = QSeries::zero(self.den, ncut);
        let Some(other_lo) = other.valuation() else {
            return Ok(out);
        };
        for (&ea, pa) in &self.coeffs {
            if ea.saturating_add(other_lo) > ncut {
                break;
            }
            for (&eb, pb) in other.coeffs.range(..=ncut.saturating_sub(ea)) {
                let slot = out.coeffs.entry(ea + eb).or_insert_with(|| ParamPoly::zero(self.den));
                slot.add_product_unchecked(pa, pb);
            }
        }
        out.coeffs.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// `self * (head + tail)`.
    pub fn mul_binomial(&self, b: &Binomial) -> QSeries {
        let lo_b = match b.low_order() {
            Some(o) => o,
            None => return QSeries::zero(self.den, EXACT),
        };
        let ncut = shift_cut(self.ncut, lo_b);
        let mut out = QSeries::zero(self.den, ncut);
        for m in [&b.head, &b.tail] {
            if m.is_zero() {
                continue;
            }
            for (&e, p) in &self.coeffs {
                let target = e + m.q;
                if target > ncut {
                    break;
                }
                let slot = out.coeffs.entry(target).or_insert_with(|| ParamPoly::zero(self.den));
                slot.add_scaled_unchecked(p, &m.param);
            }
        }
        out.coeffs.retain(|_, p| !p.is_zero());
        out
    }

    /// `self / (head + tail)`, computed up to `limit`. The lowest-order part of
    /// the binomial must be a unit monomial.
    pub fn div_binomial(&self, b: &Binomial, limit: ScaledExp) -> Result<QSeries> {
        let (low, high) = b.split_for_division(self.den)?;
        let inv = low
            .unit_inverse()
            .ok_or_else(|| Error::Inversion(format!("lowest term {} is not a unit", low.display(self.den))))?;
        let shifted = self.mul_mono(&inv);
        let ncut = shifted.ncut.min(limit);
        if ncut == EXACT {
            return Err(Error::Inversion("division of an exact series needs a finite limit".into()));
        }
        let Some(high) = high else {
            return Ok(shifted.truncate(ncut));
        };
        // shifted / (1 + r q^d): out[e] = shifted[e] - r * out[e - d]
        let r = high.mul(&inv);
        let d = r.q;
        debug_assert!(d > 0);
        let mut out = shifted.truncate(ncut);
        let Some(start) = out.valuation() else {
            return Ok(out);
        };
        let minus_r = r.param.mul(&ParamMono::constant(-1));
        let mut e = start + d;
        while e <= ncut {
            if let Some(prev) = out.coeffs.get(&(e - d)).cloned() {
                let slot = out.coeffs.entry(e).or_insert_with(|| ParamPoly::zero(self.den));
                slot.add_scaled_unchecked(&prev, &minus_r);
                if slot.is_zero() {
                    out.coeffs.remove(&e);
                }
            }
            e += 1;
        }
        Ok(out)
    }

    /// Multiplicative inverse, complete to the natural order `ncut - 2*lo`.
    pub fn invert(&self) -> Result<QSeries> {
        if self.is_exact() {
            return Err(Error::Inversion(
                "inverse of an exact polynomial needs an explicit limit; use invert_to".into(),
            ));
        }
        self.invert_to(EXACT)
    }

    /// Multiplicative inverse computed up to `limit`.
    pub fn invert_to(&self, limit: ScaledExp) -> Result<QSeries> {
        let lo = self.valuation().ok_or_else(|| Error::Inversion("series vanishes through its order".into()))?;
        let lead = self.coeffs[&lo].as_unit_mono().ok_or_else(|| {
            Error::Inversion(format!(
                "lowest coefficient {} at q^{} is not a unit monomial",
                self.coeffs[&lo],
                fmt_exp(lo, self.den)
            ))
        })?;
        let lead = QMono { param: lead, q: lo };
        let lead_inv = lead.unit_inverse().expect("unit");
        let ncut = shift_cut(self.ncut, -2 * lo).min(limit);
        if ncut == EXACT {
            return Err(Error::Inversion("inverse needs a finite limit".into()));
        }
        // u = self / lead has u_0 = 1; b = 1/u via b_n = -sum_{k>0} u_k b_{n-k}.
        let u = self.mul_mono(&lead_inv);
        let u_tail: Vec<(ScaledExp, &ParamPoly)> = u.coeffs.range(1..).map(|(&e, p)| (e, p)).collect();
        let rel_cut = ncut + lo; // b is needed up to ncut - (-lo)
        let mut b: BTreeMap<ScaledExp, ParamPoly> = BTreeMap::new();
        b.insert(0, ParamPoly::one(self.den));
        for n in 1..=rel_cut.max(0) {
            let mut acc = ParamPoly::zero(self.den);
            for &(k, uk) in &u_tail {
                if k > n {
                    break;
                }
                if let Some(bp) = b.get(&(n - k)) {
                    acc.add_product_unchecked(uk, bp);
                }
            }
            if !acc.is_zero() {
                b.insert(n, -&acc);
            }
        }
        let b = QSeries { den: self.den, ncut: rel_cut, coeffs: b };
        Ok(b.mul_mono(&lead_inv).truncate(ncut))
    }

    /// First exponent `<= min(ncut)` where the two series differ.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<Mismatch> {
        let upto = self.ncut.min(other.ncut);
        let keys: std::collections::BTreeSet<ScaledExp> =
            self.coeffs.range(..=upto).chain(other.coeffs.range(..=upto)).map(|(&e, _)| e).collect();
        keys.into_iter().find_map(|e| {
            let (a, b) = (self.coeff(e), other.coeff(e));
            (a != b).then_some(Mismatch { exponent: e, lhs: a, rhs: b })
        })
    }
}

/// Equality up to the smaller of the two truncation orders.
impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den && self.first_mismatch(other).is_none()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&e, p) in &self.coeffs {
            let term = if p.len() == 1 {
                let m = p.as_mono().unwrap();
                QMono { param: m, q: e }.display(self.den)
            } else {
                let qpart = QMono::q_pow(1, e).display(self.den);
                if e == 0 {
                    format!("({p})")
                } else {
                    format!("({p})*{qpart}")
                }
            };
            if first {
                f.write_str(&term)?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        if !self.is_exact() {
            write!(f, " + O(q^{})", fmt_exp(self.ncut + 1, self.den))?;
        }
        Ok(())
    }
}
