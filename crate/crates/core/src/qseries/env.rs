use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::QMono;
use crate::error::{Error, Result};
use crate::exactalg::{fmt_exp, Den, ParamMono, ScaledExp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    X,
    Y,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::X => "x",
            Param::Y => "y",
        }
    }

    pub fn parse(s: &str) -> Option<Param> {
        match s {
            "x" => Some(Param::X),
            "y" => Some(Param::Y),
            _ => None,
        }
    }
}

/// What a parameter stands for: itself, or the monomial `coeff * q^q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binding {
    Symbolic,
    Value { coeff: BigInt, q: ScaledExp },
}

impl Binding {
    pub fn value(coeff: impl Into<BigInt>, q: ScaledExp) -> Binding {
        Binding::Value { coeff: coeff.into(), q }
    }

    pub fn display(&self, den: Den) -> String {
        match self {
            Binding::Symbolic => "symbolic".into(),
            Binding::Value { coeff, q } => QMono::q_pow(coeff.clone(), *q).display(den),
        }
    }
}

/// A specialization of the parameters, applied to monomials as builders
/// construct factors and summands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Env {
    pub x: Binding,
    pub y: Binding,
}

impl Default for Env {
    fn default() -> Self {
        Env::symbolic()
    }
}

impl Env {
    pub fn symbolic() -> Env {
        Env { x: Binding::Symbolic, y: Binding::Symbolic }
    }

    pub fn with(mut self, p: Param, b: Binding) -> Env {
        match p {
            Param::X => self.x = b,
            Param::Y => self.y = b,
        }
        self
    }

    pub fn get(&self, p: Param) -> &Binding {
        match p {
            Param::X => &self.x,
            Param::Y => &self.y,
        }
    }

    pub fn is_symbolic(&self, p: Param) -> bool {
        matches!(self.get(p), Binding::Symbolic)
    }

    /// Substitutes the bound parameters into `m`.
    pub fn apply(&self, m: &QMono, den: Den) -> Result<QMono> {
        let mut out = QMono { param: ParamMono::new(m.param.coeff.clone(), 0, 0), q: m.q };
        for (p, exp) in [(Param::X, m.param.x), (Param::Y, m.param.y)] {
            match self.get(p) {
                Binding::Symbolic => match p {
                    Param::X => out.param.x = exp,
                    Param::Y => out.param.y = exp,
                },
                Binding::Value { coeff, q } => {
                    let (c, e) = power(coeff, *q, exp, den, p)?;
                    out.param.coeff *= c;
                    out.q += e;
                }
            }
        }
        if out.param.coeff.is_zero() {
            return Ok(QMono::zero());
        }
        Ok(out)
    }

    /// Compact description, e.g. `x=q, y=q^(1/2)`.
    pub fn describe(&self, den: Den) -> String {
        format!("x={}, y={}", self.x.display(den), self.y.display(den))
    }
}

/// `(c q^e)^(a/D)` as a coefficient and a q-exponent.
fn power(c: &BigInt, e: ScaledExp, a: ScaledExp, den: Den, p: Param) -> Result<(BigInt, ScaledExp)> {
    if a == 0 {
        return Ok((BigInt::one(), 0));
    }
    let d = den.unit();
    if c.is_zero() {
        if a < 0 {
            return Err(Error::Constraint(format!(
                "{} = 0 appears with the negative exponent {}",
                p.name(),
                fmt_exp(a, den)
            )));
        }
        return Ok((BigInt::zero(), 0));
    }
    if (e * a) % d != 0 {
        return Err(Error::Config(format!(
            "{}^{} with {} = q^{} needs a finer exponent denominator than {}",
            p.name(),
            fmt_exp(a, den),
            p.name(),
            fmt_exp(e, den),
            d
        )));
    }
    let qexp = e * a / d;
    if a % d != 0 {
        if !c.is_one() {
            return Err(Error::Constraint(format!(
                "fractional power {}^{} of a value with coefficient {c}",
                p.name(),
                fmt_exp(a, den)
            )));
        }
        return Ok((BigInt::one(), qexp));
    }
    let k = a / d;
    if k < 0 && !c.abs().is_one() {
        return Err(Error::Constraint(format!("negative power {}^{k} of the non-unit coefficient {c}", p.name())));
    }
    let coeff = num_traits::pow(c.clone(), k.unsigned_abs() as usize);
    Ok((coeff, qexp))
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: Den = Den::DEFAULT;

    #[test]
    fn symbolic_env_is_identity() {
        let m = QMono::new(-3, 2, 1, 4);
        assert_eq!(Env::symbolic().apply(&m, D).unwrap(), m);
    }

    #[test]
    fn substitutes_values() {
        let env = Env::symbolic().with(Param::X, Binding::value(1, 2)).with(Param::Y, Binding::value(1, 1));
        // x^2 y / q  ->  q^2 q^(1/2) q^-1
        let m = QMono::new(1, 4, 2, -2);
        assert_eq!(env.apply(&m, D).unwrap(), QMono::q_pow(1, 3));
        // y^(1/2) with y = q^(1/2) needs D = 4
        assert!(matches!(env.apply(&QMono::new(1, 0, 1, 0), D), Err(Error::Config(_))));
    }

    #[test]
    fn signs_zero_and_negative_powers() {
        let env = Env::symbolic().with(Param::X, Binding::value(-1, 2));
        assert_eq!(env.apply(&QMono::new(1, -6, 0, 0), D).unwrap(), QMono::q_pow(-1, -6));
        let env = Env::symbolic().with(Param::X, Binding::value(0, 0));
        assert!(env.apply(&QMono::new(5, 2, 0, 0), D).unwrap().is_zero());
        assert!(matches!(env.apply(&QMono::new(1, -2, 0, 0), D), Err(Error::Constraint(_))));
        let env = Env::symbolic().with(Param::X, Binding::value(2, 0));
        assert_eq!(env.apply(&QMono::new(1, 4, 0, 0), D).unwrap(), QMono::q_pow(4, 0));
        assert!(env.apply(&QMono::new(1, -2, 0, 0), D).is_err());
        assert!(env.apply(&QMono::new(1, 1, 0, 0), D).is_err());
    }
}
