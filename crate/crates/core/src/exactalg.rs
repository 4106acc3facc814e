//! Exact arithmetic substrate.
//!
//! Exponents are stored as integer counts of `1/D` units ([`ScaledExp`]), where
//! the denominator `D` ([`Den`]) is fixed for a whole computation. Coefficients
//! are arbitrary-precision integers. [`ParamPoly`] is a sparse Laurent
//! polynomial in the two formal parameters `x` and `y`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exponent measured in units of `1/D`.
pub type ScaledExp = i64;

/// The global exponent denominator `D` of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Den(u32);

impl Den {
    pub const DEFAULT: Den = Den(2);

    pub fn new(d: u32) -> Result<Den> {
        if d == 0 {
            return Err(Error::Config("exponent denominator must be positive".into()));
        }
        Ok(Den(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of scaled units in one whole power.
    pub fn unit(self) -> i64 {
        i64::from(self.0)
    }

    /// Converts the rational exponent `num/den` into scaled units, failing when
    /// it is not representable with this denominator.
    pub fn scale(self, num: i64, den: i64) -> Result<ScaledExp> {
        if den == 0 {
            return Err(Error::Config("zero exponent denominator".into()));
        }
        let n = num * self.unit();
        if n % den != 0 {
            return Err(Error::Config(format!("exponent {num}/{den} is not a multiple of 1/{}", self.0)));
        }
        Ok(n / den)
    }

    pub fn check(self, other: Den) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DenominatorMismatch { left: self.0, right: other.0 })
        }
    }
}

impl Default for Den {
    fn default() -> Self {
        Den::DEFAULT
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Formats a scaled exponent as a reduced fraction, e.g. `3/2` or `-1`.
pub fn fmt_exp(value: ScaledExp, den: Den) -> String {
    let d = den.unit();
    let g = gcd(value, d).max(1);
    let (n, d) = (value / g, d / g);
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// A single term `coeff * x^(x/D) * y^(y/D)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamMono {
    pub coeff: BigInt,
    pub x: ScaledExp,
    pub y: ScaledExp,
}

impl ParamMono {
    pub fn new(coeff: impl Into<BigInt>, x: ScaledExp, y: ScaledExp) -> Self {
        ParamMono { coeff: coeff.into(), x, y }
    }

    pub fn constant(coeff: impl Into<BigInt>) -> Self {
        ParamMono::new(coeff, 0, 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeff.abs().is_one()
    }

    pub fn mul(&self, other: &ParamMono) -> ParamMono {
        ParamMono { coeff: &self.coeff * &other.coeff, x: self.x + other.x, y: self.y + other.y }
    }

    /// Inverse of a unit monomial (`coeff = ±1`).
    pub fn unit_inverse(&self) -> Option<ParamMono> {
        self.is_unit().then(|| ParamMono { coeff: self.coeff.clone(), x: -self.x, y: -self.y })
    }
}

/// Sparse Laurent polynomial in `x`, `y` with big-integer coefficients.
///
/// Terms are keyed by `(x exponent, y exponent)` in a `BTreeMap`, and zero
/// coefficients are never stored, so structural equality is mathematical
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    den: Den,
    terms: BTreeMap<(ScaledExp, ScaledExp), BigInt>,
}

impl ParamPoly {
    pub fn zero(den: Den) -> Self {
        ParamPoly { den, terms: BTreeMap::new() }
    }

    pub fn one(den: Den) -> Self {
        ParamPoly::constant(den, 1)
    }

    pub fn constant(den: Den, c: impl Into<BigInt>) -> Self {
        ParamPoly::from_mono(den, &ParamMono::constant(c))
    }

    pub fn from_mono(den: Den, m: &ParamMono) -> Self {
        let mut p = ParamPoly::zero(den);
        if !m.coeff.is_zero() {
            p.terms.insert((m.x, m.y), m.coeff.clone());
        }
        p
    }

    /// Builds a polynomial from `(coeff, x, y)` triples, merging duplicates.
    pub fn from_terms<I, C>(den: Den, terms: I) -> Self
    where
        I: IntoIterator<Item = (C, ScaledExp, ScaledExp)>,
        C: Into<BigInt>,
    {
        let mut p = ParamPoly::zero(den);
        for (c, x, y) in terms {
            p.add_mono(&ParamMono::new(c, x, y));
        }
        p
    }

    pub fn den(&self) -> Den {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order (ascending x exponent, then y exponent).
    pub fn terms(&self) -> impl Iterator<Item = ParamMono> + '_ {
        self.terms.iter().map(|(&(x, y), c)| ParamMono { coeff: c.clone(), x, y })
    }

    pub fn coeff(&self, x: ScaledExp, y: ScaledExp) -> BigInt {
        self.terms.get(&(x, y)).cloned().unwrap_or_default()
    }

    /// The single term of a one-term polynomial.
    pub fn as_mono(&self) -> Option<ParamMono> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// The polynomial as a single monomial with coefficient `±1`.
    pub fn as_unit_mono(&self) -> Option<ParamMono> {
        self.as_mono().filter(ParamMono::is_unit)
    }

    /// The value of a parameter-free polynomial.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.den.check(other.den)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.den.check(other.den)?;
        let mut out = self.clone();
        out.add_scaled_unchecked(other, &ParamMono::constant(-1));
        Ok(out)
    }

    pub fn try_mul(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.den.check(other.den)?;
        let mut out = ParamPoly::zero(self.den);
        out.add_product_unchecked(self, other);
        Ok(out)
    }

    pub fn add_mono(&mut self, m: &ParamMono) {
        if m.coeff.is_zero() {
            return;
        }
        accumulate(&mut self.terms, (m.x, m.y), m.coeff.clone());
    }

    /// `self += other` without the denominator check (callers guarantee it).
    pub(crate) fn add_assign_unchecked(&mut self, other: &ParamPoly) {
        for (&k, c) in &other.terms {
            accumulate(&mut self.terms, k, c.clone());
        }
    }

    /// `self += other * m`.
    pub(crate) fn add_scaled_unchecked(&mut self, other: &ParamPoly, m: &ParamMono) {
        if m.coeff.is_zero() {
            return;
        }
        for (&(x, y), c) in &other.terms {
            accumulate(&mut self.terms, (x + m.x, y + m.y), c * &m.coeff);
        }
    }

    /// `self += a * b`.
    pub(crate) fn add_product_unchecked(&mut self, a: &ParamPoly, b: &ParamPoly) {
        for (&(ax, ay), ac) in &a.terms {
            for (&(bx, by), bc) in &b.terms {
                accumulate(&mut self.terms, (ax + bx, ay + by), ac * bc);
            }
        }
    }

    pub fn mul_mono(&self, m: &ParamMono) -> ParamPoly {
        let mut out = ParamPoly::zero(self.den);
        out.add_scaled_unchecked(self, m);
        out
    }

    pub fn scale(&self, c: &BigInt) -> ParamPoly {
        self.mul_mono(&ParamMono { coeff: c.clone(), x: 0, y: 0 })
    }

    /// Exact division by a nonzero integer.
    pub fn div_exact_int(&self, d: &BigInt) -> Result<ParamPoly> {
        if d.is_zero() {
            return Err(Error::Exactness("division by zero".into()));
        }
        let mut out = ParamPoly::zero(self.den);
        for (&k, c) in &self.terms {
            if !(c % d).is_zero() {
                return Err(Error::Exactness(format!("coefficient {c} is not divisible by {d}")));
            }
            out.terms.insert(k, c / d);
        }
        Ok(out)
    }

    /// Exact division by a single monomial: exponents shift, coefficients divide.
    pub fn div_exact_mono(&self, m: &ParamMono) -> Result<ParamPoly> {
        if m.coeff.is_zero() {
            return Err(Error::Exactness("division by the zero monomial".into()));
        }
        let mut out = ParamPoly::zero(self.den);
        for (&(x, y), c) in &self.terms {
            if !(c % &m.coeff).is_zero() {
                return Err(Error::Exactness(format!("coefficient {c} is not divisible by {}", m.coeff)));
            }
            out.terms.insert((x - m.x, y - m.y), c / &m.coeff);
        }
        Ok(out)
    }

    /// Substitutes `x -> -x` (scaled exponents must be whole powers).
    pub fn negate_x(&self) -> Result<ParamPoly> {
        let unit = self.den.unit();
        let mut out = ParamPoly::zero(self.den);
        for (&(x, y), c) in &self.terms {
            if x % unit != 0 {
                return Err(Error::Config("x -> -x needs integral x exponents".into()));
            }
            let c = if (x / unit) % 2 == 0 { c.clone() } else { -c };
            out.terms.insert((x, y), c);
        }
        Ok(out)
    }
}

fn accumulate(terms: &mut BTreeMap<(ScaledExp, ScaledExp), BigInt>, key: (ScaledExp, ScaledExp), c: BigInt) {
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { den: self.den, terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_add(rhs).expect("ParamPoly addition with mismatched denominators")
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_sub(rhs).expect("ParamPoly subtraction with mismatched denominators")
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_mul(rhs).expect("ParamPoly multiplication with mismatched denominators")
    }
}

fn fmt_var(f: &mut fmt::Formatter<'_>, name: &str, e: ScaledExp, den: Den, first: &mut bool) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        f.write_str("*")?;
    }
    *first = false;
    if e == den.unit() {
        write!(f, "{name}")
    } else {
        let s = fmt_exp(e, den);
        if s.contains('/') || s.starts_with('-') {
            write!(f, "{name}^({s})")
        } else {
            write!(f, "{name}^{s}")
        }
    }
}

/// Writes `c*x^a*y^b` with sign handling left to the caller (`c` is printed as `|c|`).
pub(crate) fn fmt_mono_body(
    f: &mut fmt::Formatter<'_>,
    abs_coeff: &BigInt,
    x: ScaledExp,
    y: ScaledExp,
    extra: &[(&str, ScaledExp)],
    den: Den,
) -> fmt::Result {
    let no_vars = x == 0 && y == 0 && extra.iter().all(|&(_, e)| e == 0);
    let mut first = true;
    if !abs_coeff.is_one() || no_vars {
        write!(f, "{abs_coeff}")?;
        first = false;
    }
    fmt_var(f, "x", x, den, &mut first)?;
    fmt_var(f, "y", y, den, &mut first)?;
    for &(name, e) in extra {
        fmt_var(f, name, e, den, &mut first)?;
    }
    Ok(())
}

impl fmt::Display for ParamMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_negative() {
            f.write_str("-")?;
        }
        fmt_mono_body(f, &self.coeff.abs(), self.x, self.y, &[], Den::DEFAULT)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest total degree first reads most naturally.
        for (i, (&(x, y), c)) in self.terms.iter().rev().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            fmt_mono_body(f, &c.abs(), x, y, &[], self.den)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const D: Den = Den::DEFAULT;

    fn p(terms: &[(i64, i64, i64)]) -> ParamPoly {
        ParamPoly::from_terms(D, terms.iter().map(|&(c, x, y)| (c, x, y)))
    }

    #[test]
    fn add_cancels_to_empty() {
        let x = p(&[(1, 2, 0)]);
        let minus_x = p(&[(-1, 2, 0)]);
        let s = &x + &minus_x;
        assert!(s.is_zero());
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn add_constants_and_symmetric_pair() {
        assert_eq!(&ParamPoly::one(D) + &ParamPoly::one(D), ParamPoly::constant(D, 2));
        let a = p(&[(1, 2, 0), (1, 0, 2)]);
        let b = p(&[(1, 2, 0), (-1, 0, 2)]);
        assert_eq!(&a + &b, p(&[(2, 2, 0)]));
    }

    #[test]
    fn mul_examples() {
        let a = p(&[(1, 0, 0), (1, 2, 0)]);
        let b = p(&[(1, 0, 0), (-1, 2, 0)]);
        assert_eq!(&a * &b, p(&[(1, 0, 0), (-1, 4, 0)]));
        let yx = p(&[(1, 0, 2), (1, 2, 0)]);
        assert_eq!(&yx * &ParamPoly::one(D), yx);
        let root_x = p(&[(1, 1, 0)]);
        assert_eq!(&root_x * &root_x, p(&[(1, 2, 0)]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[(2, 0, 0), (2, 2, 0)]);
        assert_eq!(a.div_exact_int(&BigInt::from(2)).unwrap(), p(&[(1, 0, 0), (1, 2, 0)]));
        let b = p(&[(1, 2, 2), (1, 4, 0)]);
        let x = ParamMono::new(1, 2, 0);
        assert_eq!(b.div_exact_mono(&x).unwrap(), p(&[(1, 0, 2), (1, 2, 0)]));
        let odd = p(&[(1, 0, 0), (1, 2, 0)]);
        assert!(matches!(odd.div_exact_int(&BigInt::from(2)), Err(Error::Exactness(_))));
    }

    #[test]
    fn mismatched_denominator_is_config_error() {
        let a = ParamPoly::one(Den::new(2).unwrap());
        let b = ParamPoly::one(Den::new(3).unwrap());
        assert_eq!(a.try_add(&b), Err(Error::DenominatorMismatch { left: 2, right: 3 }));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn display_is_readable() {
        let a = p(&[(1, 0, 0), (-3, 2, 1), (1, -2, 0)]);
        assert_eq!(a.to_string(), "-3*x*y^(1/2) + 1 + x^(-1)");
        assert_eq!(ParamPoly::zero(D).to_string(), "0");
    }

    #[test]
    fn scaled_exponents() {
        assert_eq!(D.scale(1, 2).unwrap(), 1);
        assert_eq!(D.scale(-3, 1).unwrap(), -6);
        assert!(D.scale(1, 3).is_err());
        assert_eq!(fmt_exp(3, D), "3/2");
        assert_eq!(fmt_exp(-4, D), "-2");
    }

    fn small_poly() -> impl Strategy<Value = ParamPoly> {
        prop::collection::vec((-9i64..=9, -4i64..=4, -4i64..=4), 0..5).prop_map(|ts| ParamPoly::from_terms(D, ts))
    }

    fn small_mono() -> impl Strategy<Value = ParamMono> {
        (prop_oneof![-9i64..=-1, 1i64..=9], -4i64..=4, -4i64..=4).prop_map(|(c, x, y)| ParamMono::new(c, x, y))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
        }

        #[test]
        fn monomial_division_undoes_multiplication(a in small_poly(), m in small_mono()) {
            let prod = a.mul_mono(&m);
            prop_assert_eq!(prod.div_exact_mono(&m).unwrap(), a);
        }

        #[test]
        fn equality_agrees_with_subtraction(a in small_poly(), b in small_poly()) {
            prop_assert_eq!(a == b, (&a - &b).is_zero());
        }
    }
}
