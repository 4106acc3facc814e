//! Pochhammer factors and products of binomials.
//!
//! Every product side in the catalog, and every term of every sum, is a
//! [`ProductTerm`]: a monomial times a ratio of binomial factors, some of
//! which may come from infinite Pochhammer products. Evaluation decides how
//! many factors of each infinite product are needed from a lower bound on the
//! valuation of the whole term.

use std::fmt;

use num_traits::One;

use super::{QMono, QSeries, EXACT};
use crate::error::{Error, Result};
use crate::exactalg::{Den, ScaledExp};
use crate::trace;

/// The sum `head + tail` of two monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub head: QMono,
    pub tail: QMono,
}

impl Binomial {
    pub fn new(head: QMono, tail: QMono) -> Self {
        Binomial { head, tail }
    }

    /// `1 - t`.
    pub fn one_minus(t: &QMono) -> Self {
        Binomial { head: QMono::one(), tail: t.neg() }
    }

    fn combined(&self) -> Option<QMono> {
        let (a, b) = (&self.head, &self.tail);
        (a.q == b.q && a.param.x == b.param.x && a.param.y == b.param.y)
            .then(|| QMono::new(&a.param.coeff + &b.param.coeff, a.param.x, a.param.y, a.q))
    }

    pub fn is_zero(&self) -> bool {
        match self.combined() {
            Some(m) => m.is_zero(),
            None => self.head.is_zero() && self.tail.is_zero(),
        }
    }

    /// Least q-order of a nonzero part, `None` for the zero binomial.
    pub fn low_order(&self) -> Option<ScaledExp> {
        if let Some(m) = self.combined() {
            return (!m.is_zero()).then_some(m.q);
        }
        [&self.head, &self.tail].iter().filter(|m| !m.is_zero()).map(|m| m.q).min()
    }

    /// Splits into the lowest-order monomial (which must stand alone at its
    /// order) and the remaining higher-order monomial.
    pub(super) fn split_for_division(&self, den: Den) -> Result<(QMono, Option<QMono>)> {
        if let Some(m) = self.combined() {
            if m.is_zero() {
                return Err(Error::Inversion("division by zero factor".into()));
            }
            return Ok((m, None));
        }
        let (a, b) = (&self.head, &self.tail);
        match (a.is_zero(), b.is_zero()) {
            (true, true) => return Err(Error::Inversion("division by zero factor".into())),
            (true, false) => return Ok((b.clone(), None)),
            (false, true) => return Ok((a.clone(), None)),
            _ => {}
        }
        if a.q == b.q {
            return Err(Error::Grading(format!(
                "factor {} + {} has two parameter terms at the same power of q",
                a.display(den),
                b.display(den)
            )));
        }
        Ok(if a.q < b.q { (a.clone(), Some(b.clone())) } else { (b.clone(), Some(a.clone())) })
    }
}

/// Number of factors in a Pochhammer product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}

/// The Pochhammer product `(t; q^s)_n = prod_{k<n} (1 - t q^{s k})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorSpec {
    pub arg: QMono,
    pub step: ScaledExp,
    pub count: Count,
}

impl FactorSpec {
    pub fn new(arg: QMono, step: ScaledExp, count: Count) -> Result<Self> {
        if step <= 0 {
            return Err(Error::Config(format!("Pochhammer base step must be positive, got {step}")));
        }
        Ok(FactorSpec { arg, step, count })
    }

    pub fn finite(arg: QMono, step: ScaledExp, n: u64) -> Result<Self> {
        FactorSpec::new(arg, step, Count::Finite(n))
    }

    pub fn infinite(arg: QMono, step: ScaledExp) -> Result<Self> {
        FactorSpec::new(arg, step, Count::Infinite)
    }

    /// The `k`-th factor `1 - t q^{s k}`.
    pub fn factor(&self, k: u64) -> Binomial {
        Binomial::one_minus(&self.arg.shift_q(self.step * k as i64))
    }

    /// q-order of the non-constant part of factor `k`.
    pub fn order(&self, k: u64) -> ScaledExp {
        self.arg.q + self.step * k as i64
    }

    /// Indices of the factors whose q-order is negative (all finite since the
    /// step is positive).
    fn negative_count(&self) -> u64 {
        if self.arg.q >= 0 || self.arg.is_zero() {
            return 0;
        }
        let n = ((-self.arg.q) + self.step - 1) / self.step;
        match self.count {
            Count::Finite(c) => c.min(n as u64),
            Count::Infinite => n as u64,
        }
    }

    /// Sum of the negative factor orders: a lower bound on the valuation.
    fn low_bound(&self) -> ScaledExp {
        (0..self.negative_count()).map(|k| self.order(k)).sum()
    }

    /// True when one factor is identically zero (`t q^{s k} = 1`).
    fn vanishes(&self) -> bool {
        if self.arg.has_params() || self.arg.q > 0 || !self.arg.param.coeff.is_one() {
            return false;
        }
        if (-self.arg.q) % self.step != 0 {
            return false;
        }
        let k = ((-self.arg.q) / self.step) as u64;
        match self.count {
            Count::Finite(n) => k < n,
            Count::Infinite => true,
        }
    }

    pub fn display(&self, den: Den) -> String {
        format!("({};{})_{}", self.arg.display(den), QMono::q_pow(1, self.step).display(den), self.count)
    }
}

/// A factor of a [`ProductTerm`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Binomial(Binomial),
    Poch(FactorSpec),
}

impl From<Binomial> for Factor {
    fn from(b: Binomial) -> Self {
        Factor::Binomial(b)
    }
}

impl From<FactorSpec> for Factor {
    fn from(f: FactorSpec) -> Self {
        Factor::Poch(f)
    }
}

/// `prefactor * prod(numer) / prod(denom)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductTerm {
    pub prefactor: QMono,
    pub numer: Vec<Factor>,
    pub denom: Vec<Factor>,
}

impl ProductTerm {
    pub fn new(prefactor: QMono) -> Self {
        ProductTerm { prefactor, numer: Vec::new(), denom: Vec::new() }
    }

    pub fn unit() -> Self {
        ProductTerm::new(QMono::one())
    }

    pub fn times(mut self, f: impl Into<Factor>) -> Self {
        self.numer.push(f.into());
        self
    }

    pub fn over(mut self, f: impl Into<Factor>) -> Self {
        self.denom.push(f.into());
        self
    }

    pub fn times_all<I: IntoIterator<Item = F>, F: Into<Factor>>(mut self, fs: I) -> Self {
        self.numer.extend(fs.into_iter().map(Into::into));
        self
    }

    pub fn over_all<I: IntoIterator<Item = F>, F: Into<Factor>>(mut self, fs: I) -> Self {
        self.denom.extend(fs.into_iter().map(Into::into));
        self
    }

    /// True if a numerator factor vanishes identically.
    pub fn vanishes(&self) -> bool {
        self.prefactor.is_zero()
            || self.numer.iter().any(|f| match f {
                Factor::Binomial(b) => b.is_zero(),
                Factor::Poch(p) => p.vanishes(),
            })
    }

    /// Lower bound on the valuation of the term (`None` if it vanishes).
    pub fn low_bound(&self) -> Result<Option<ScaledExp>> {
        if self.vanishes() {
            return Ok(None);
        }
        let mut bound = self.prefactor.q;
        for f in &self.numer {
            bound += match f {
                Factor::Binomial(b) => b.low_order().expect("nonzero"),
                Factor::Poch(p) => p.low_bound(),
            };
        }
        for f in &self.denom {
            bound -= match f {
                Factor::Binomial(b) => {
                    b.low_order().ok_or_else(|| Error::Inversion("division by zero factor".into()))?
                }
                Factor::Poch(p) => {
                    if p.vanishes() {
                        return Err(Error::Inversion(format!(
                            "division by the vanishing product {}",
                            p.display(Den::DEFAULT)
                        )));
                    }
                    p.low_bound()
                }
            };
        }
        Ok(Some(bound))
    }

    /// Expands to a series complete through order `n`.
    pub fn evaluate(&self, den: Den, n: ScaledExp) -> Result<QSeries> {
        let Some(low) = self.low_bound()? else {
            return Ok(QSeries::zero(den, EXACT));
        };
        if low > n {
            return Ok(QSeries::zero(den, n));
        }
        // Factors of infinite products of order above `n - low` cannot reach
        // order `n`.
        let reach = n - low;
        let expand = |fs: &[Factor]| -> Vec<Binomial> {
            let mut out = Vec::new();
            for f in fs {
                match f {
                    Factor::Binomial(b) => out.push(b.clone()),
                    Factor::Poch(p) => {
                        if p.arg.is_zero() {
                            continue;
                        }
                        let mut k = 0u64;
                        while p.order(k) <= reach {
                            if let Count::Finite(c) = p.count {
                                if k >= c {
                                    break;
                                }
                            }
                            out.push(p.factor(k));
                            k += 1;
                        }
                    }
                }
            }
            out
        };
        let numer = expand(&self.numer);
        let denom = expand(&self.denom);
        let headroom: ScaledExp = numer.iter().map(|b| (-b.low_order().unwrap()).max(0)).sum::<i64>()
            + denom.iter().map(|b| b.low_order().unwrap_or(0).max(0)).sum::<i64>();
        let work = n + headroom;
        let mut s = QSeries::from_mono(den, &self.prefactor, EXACT);
        for b in &numer {
            s = s.mul_binomial(b).truncate(work);
        }
        for b in &denom {
            s = s.div_binomial(b, work)?;
        }
        s.require(n)
    }
}

/// Expands a single Pochhammer product through order `n`.
pub fn poch(f: &FactorSpec, den: Den, n: ScaledExp) -> Result<QSeries> {
    let _t = trace::enter("poch", || f.display(den));
    ProductTerm::unit().times(f.clone()).evaluate(den, n)
}

/// Expands the product `(t_1, ..., t_m; q^s)_n` (or any list of factors)
/// through order `n`.
pub fn poch_list(factors: &[FactorSpec], den: Den, n: ScaledExp) -> Result<QSeries> {
    let _t = trace::enter("poch_list", || factors.iter().map(|f| f.display(den)).collect::<Vec<_>>().join(" "));
    ProductTerm::unit().times_all(factors.iter().cloned()).evaluate(den, n)
}

/// Expands `prod(numer) / prod(denom)` through order `n`.
pub fn product_ratio(numer: &[FactorSpec], denom: &[FactorSpec], den: Den, n: ScaledExp) -> Result<QSeries> {
    let _t = trace::enter("product_ratio", || {
        let list = |v: &[FactorSpec]| v.iter().map(|f| f.display(den)).collect::<Vec<_>>().join(" ");
        format!("{} / {}", list(numer), list(denom))
    });
    ProductTerm::unit().times_all(numer.iter().cloned()).over_all(denom.iter().cloned()).evaluate(den, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: Den = Den::DEFAULT;

    fn ints(s: &QSeries, upto: i64) -> Vec<i64> {
        s.int_coeffs(upto).unwrap().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    fn q(k: i64) -> QMono {
        QMono::q_pow(1, 2 * k)
    }

    #[test]
    fn finite_products() {
        let f = FactorSpec::finite(q(1), 2, 2).unwrap();
        assert_eq!(ints(&poch(&f, D, 20).unwrap(), 5), vec![1, -1, -1, 1, 0, 0]);
        let empty = FactorSpec::finite(q(1), 2, 0).unwrap();
        assert_eq!(poch(&empty, D, 10).unwrap(), QSeries::one(D, 10));
    }

    #[test]
    fn euler_function_is_pentagonal() {
        let f = FactorSpec::infinite(q(1), 2).unwrap();
        let s = poch(&f, D, 14).unwrap();
        assert_eq!(ints(&s, 7), vec![1, -1, -1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn euler_product_identity() {
        // (q, -q, -q^2; q^2)_inf = 1
        let fs = [
            FactorSpec::infinite(q(1), 4).unwrap(),
            FactorSpec::infinite(q(1).neg(), 4).unwrap(),
            FactorSpec::infinite(q(2).neg(), 4).unwrap(),
        ];
        assert_eq!(poch_list(&fs, D, 40).unwrap(), QSeries::one(D, 40));
    }

    #[test]
    fn negative_order_arguments() {
        // (q^-1; q)_2 = (1 - q^-1)(1 - 1) = 0
        let z = FactorSpec::finite(q(-1), 2, 2).unwrap();
        assert!(poch(&z, D, 10).unwrap().is_zero());
        // 1 / (q^-1; q)_1 = 1/(1 - q^-1) = -q - q^2 - ...
        let t = ProductTerm::unit().over(FactorSpec::finite(q(-1), 2, 1).unwrap());
        assert_eq!(ints(&t.evaluate(D, 8).unwrap(), 4), vec![0, -1, -1, -1, -1]);
        let bad = ProductTerm::unit().over(FactorSpec::infinite(q(-1), 2).unwrap());
        assert!(matches!(bad.evaluate(D, 8), Err(Error::Inversion(_))));
    }

    #[test]
    fn partition_generating_function() {
        let t = ProductTerm::unit().over(FactorSpec::infinite(q(1), 2).unwrap());
        let s = t.evaluate(D, 20).unwrap();
        assert_eq!(ints(&s, 10), vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn parameter_arguments() {
        // (x; q)_inf / (x; q)_1 = (xq; q)_inf
        let x = QMono::new(1, 2, 0, 0);
        let lhs = ProductTerm::unit()
            .times(FactorSpec::infinite(x.clone(), 2).unwrap())
            .over(FactorSpec::finite(x.clone(), 2, 1).unwrap());
        let rhs = FactorSpec::infinite(x.shift_q(2), 2).unwrap();
        assert!(matches!(lhs.evaluate(D, 10), Err(Error::Grading(_))));
        let rhs = poch(&rhs, D, 10).unwrap();
        assert_eq!(rhs.coeff(0), crate::exactalg::ParamPoly::one(D));
    }
}
