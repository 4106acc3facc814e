//! Pochhammer-product expressions.
//!
//! ```text
//! expr    := product ("/" product)?
//! product := factor ("*" factor)*
//! factor  := "(" mono ("," mono)* ";" mono ")" "_" ("inf" | integer) | mono
//! mono    := ["+" | "-"] atom ("*" atom)*
//! atom    := ("q" | "x" | "y") ("^" frac)? | integer
//! frac    := integer ("/" integer)?
//! ```
//!
//! A `/` after an exponent belongs to the exponent when an integer follows it.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::Den;
use crate::qseries::{Binding, Count, FactorSpec, ProductTerm, QMono, QSeries};

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Frac {
    pub num: i64,
    pub den: i64,
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Option<Frac> {
        if den == 0 {
            return None;
        }
        let g = num.gcd(&den);
        let s = if den < 0 { -1 } else { 1 };
        Some(Frac { num: s * num / g, den: s * den / g })
    }

    fn add(self, o: Frac) -> Option<Frac> {
        let num = self.num.checked_mul(o.den)?.checked_add(o.num.checked_mul(self.den)?)?;
        Frac::new(num, self.den.checked_mul(o.den)?)
    }

    /// Value in `1/D` units.
    pub fn scaled(self, den: Den) -> Result<i64> {
        den.scale(self.num, self.den)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `±c q^a x^b y^c` with `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoAst {
    pub negative: bool,
    pub coeff: BigInt,
    pub q: Frac,
    pub x: Frac,
    pub y: Frac,
}

impl MonoAst {
    pub fn to_qmono(&self, den: Den) -> Result<QMono> {
        let c = if self.negative { -self.coeff.clone() } else { self.coeff.clone() };
        Ok(QMono::new(c, self.x.scaled(den)?, self.y.scaled(den)?, self.q.scaled(den)?))
    }

    /// The value `±c q^a` bound to a parameter.
    pub fn to_binding(&self, den: Den) -> Result<Binding> {
        if self.x != Frac::ZERO || self.y != Frac::ZERO {
            return Err(Error::Config("a parameter value must be a monomial in q alone".into()));
        }
        let c = if self.negative { -self.coeff.clone() } else { self.coeff.clone() };
        Ok(Binding::value(c, self.q.scaled(den)?))
    }
}

impl fmt::Display for MonoAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        let mut parts = Vec::new();
        let vars = [("q", self.q), ("x", self.x), ("y", self.y)];
        let bare = vars.iter().all(|(_, e)| *e == Frac::ZERO);
        if !self.coeff.is_one() || bare {
            parts.push(self.coeff.to_string());
        }
        for (name, e) in vars {
            match e {
                Frac::ZERO => {}
                Frac { num: 1, den: 1 } => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        f.write_str(&parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FactorAst {
    Poch { args: Vec<MonoAst>, base: MonoAst, count: Count },
    Mono(MonoAst),
}

impl fmt::Display for FactorAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorAst::Mono(m) => write!(f, "{m}"),
            FactorAst::Poch { args, base, count } => {
                let list: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "({};{base})_{count}", list.join(","))
            }
        }
    }
}

/// A ratio of two factor lists; `denom` is empty when there is no `/`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExprAst {
    pub numer: Vec<FactorAst>,
    pub denom: Vec<FactorAst>,
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[FactorAst]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("*");
        f.write_str(&join(&self.numer))?;
        if !self.denom.is_empty() {
            write!(f, "/{}", join(&self.denom))?;
        }
        Ok(())
    }
}

/// Canonical text of an expression; parsing it gives back the same tree.
pub fn print(e: &ExprAst) -> String {
    e.to_string()
}

pub fn parse_expr(text: &str) -> Result<ExprAst> {
    let mut p = Parser::new(text);
    let numer = p.product()?;
    let denom = if p.eat("/") { p.product()? } else { Vec::new() };
    p.finish()?;
    Ok(ExprAst { numer, denom })
}

/// A single monomial, as used for parameter values (`q^1/2`, `-q^-1`).
pub fn parse_mono(text: &str) -> Result<MonoAst> {
    let mut p = Parser::new(text);
    let m = p.mono()?;
    p.finish()?;
    Ok(m)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    expected: BTreeSet<&'static str>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0, expected: BTreeSet::new() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn consumed(&mut self, n: usize) {
        self.pos += n;
        self.expected.clear();
    }

    /// Consumes `tok` if it comes next, otherwise records it as expected.
    fn eat(&mut self, tok: &'static str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.consumed(tok.len());
            true
        } else {
            self.expected.insert(tok);
            false
        }
    }

    fn fail<T>(&mut self) -> Result<T> {
        self.skip_ws();
        Err(Error::Syntax { offset: self.pos, expected: self.expected.iter().map(|s| s.to_string()).collect() })
    }

    fn require(&mut self, tok: &'static str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_none() {
            return Ok(());
        }
        self.expected.insert("end of input");
        self.fail()
    }

    fn digits_at(&self, from: usize) -> usize {
        self.src[from..].iter().take_while(|b| b.is_ascii_digit()).count()
    }

    fn unsigned(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let n = self.digits_at(self.pos);
        if n == 0 {
            self.expected.insert("integer");
            return None;
        }
        let s = std::str::from_utf8(&self.src[self.pos..self.pos + n]).expect("ascii digits");
        let v = s.parse().expect("digits");
        self.consumed(n);
        Some(v)
    }

    fn signed(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let start = self.pos;
        let Some(v) = self.unsigned() else { return self.fail() };
        let v = if neg { -v } else { v };
        match i64::try_from(&v) {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.expected = ["small integer"].into_iter().collect();
                self.fail()
            }
        }
    }

    /// True when `/` followed by an optionally signed integer comes next.
    fn frac_slash(&mut self) -> bool {
        if self.peek() != Some(b'/') {
            return false;
        }
        let mut i = self.pos + 1;
        while i < self.src.len() && self.src[i].is_ascii_whitespace() {
            i += 1;
        }
        if self.src.get(i) == Some(&b'-') {
            i += 1;
        }
        self.digits_at(i) > 0
    }

    fn frac(&mut self) -> Result<Frac> {
        let num = self.signed()?;
        let den = if self.frac_slash() {
            self.consumed(1);
            let at = self.pos;
            let d = self.signed()?;
            if d == 0 {
                self.pos = at;
                self.expected = ["nonzero integer"].into_iter().collect();
                return self.fail();
            }
            d
        } else {
            1
        };
        Ok(Frac::new(num, den).expect("nonzero denominator"))
    }

    fn mono(&mut self) -> Result<MonoAst> {
        let negative = if self.eat("+") { false } else { self.eat("-") };
        let mut m = MonoAst { negative, coeff: BigInt::one(), q: Frac::ZERO, x: Frac::ZERO, y: Frac::ZERO };
        loop {
            self.atom(&mut m)?;
            if !self.star_atom() {
                break;
            }
        }
        Ok(m)
    }

    /// Consumes a `*` that continues a monomial; a `*` before `(` joins
    /// factors instead.
    fn star_atom(&mut self) -> bool {
        if self.peek() != Some(b'*') {
            self.expected.insert("*");
            return false;
        }
        let mut i = self.pos + 1;
        while i < self.src.len() && self.src[i].is_ascii_whitespace() {
            i += 1;
        }
        if self.src.get(i) == Some(&b'(') {
            return false;
        }
        self.consumed(1);
        true
    }

    fn atom(&mut self, m: &mut MonoAst) -> Result<()> {
        for (name, slot) in [("q", 0), ("x", 1), ("y", 2)] {
            if self.eat(name) {
                let e = if self.eat("^") { self.frac()? } else { Frac { num: 1, den: 1 } };
                let target = match slot {
                    0 => &mut m.q,
                    1 => &mut m.x,
                    _ => &mut m.y,
                };
                let at = self.pos;
                *target = match target.add(e) {
                    Some(v) => v,
                    None => {
                        self.pos = at;
                        self.expected = ["smaller exponent"].into_iter().collect();
                        return self.fail();
                    }
                };
                return Ok(());
            }
        }
        let at = self.pos;
        match self.unsigned() {
            Some(c) if c.is_zero() => {
                self.pos = at;
                self.expected = ["nonzero integer"].into_iter().collect();
                self.fail()
            }
            Some(c) => {
                m.coeff *= c;
                Ok(())
            }
            None => self.fail(),
        }
    }

    fn factor(&mut self) -> Result<FactorAst> {
        if !self.eat("(") {
            return Ok(FactorAst::Mono(self.mono()?));
        }
        let mut args = vec![self.mono()?];
        while self.eat(",") {
            args.push(self.mono()?);
        }
        self.require(";")?;
        let base = self.mono()?;
        self.require(")")?;
        self.require("_")?;
        let count = if self.eat("inf") {
            Count::Infinite
        } else {
            let at = self.pos;
            match self.unsigned() {
                Some(n) => match u64::try_from(&n) {
                    Ok(n) => Count::Finite(n),
                    Err(_) => {
                        self.pos = at;
                        self.expected = ["small integer"].into_iter().collect();
                        return self.fail();
                    }
                },
                None => return self.fail(),
            }
        };
        Ok(FactorAst::Poch { args, base, count })
    }

    fn product(&mut self) -> Result<Vec<FactorAst>> {
        let mut out = vec![self.factor()?];
        while self.eat("*") {
            out.push(self.factor()?);
        }
        Ok(out)
    }
}

fn factor_specs(f: &FactorAst, den: Den) -> Result<Vec<FactorSpec>> {
    let FactorAst::Poch { args, base, count } = f else { return Ok(Vec::new()) };
    let b = base.to_qmono(den)?;
    if b.has_params() || !b.coeff().is_one() || b.q <= 0 {
        return Err(Error::Unsupported(format!("base {base} must be a positive power of q")));
    }
    args.iter().map(|a| FactorSpec::new(a.to_qmono(den)?, b.q, *count)).collect()
}

/// Expands the numerator product times the inverted denominator product
/// through order `n` (scaled).
pub fn evaluate(e: &ExprAst, den: Den, n: i64) -> Result<QSeries> {
    let mut pre = QMono::one();
    for f in &e.numer {
        if let FactorAst::Mono(m) = f {
            pre = pre.mul(&m.to_qmono(den)?);
        }
    }
    for f in &e.denom {
        if let FactorAst::Mono(m) = f {
            let m = m.to_qmono(den)?;
            pre = pre
                .div_unit(&m)
                .ok_or_else(|| Error::Inversion(format!("division by the non-unit {}", m.display(den))))?;
        }
    }
    let mut t = ProductTerm::new(pre);
    for f in &e.numer {
        t = t.times_all(factor_specs(f, den)?);
    }
    for f in &e.denom {
        t = t.over_all(factor_specs(f, den)?);
    }
    t.evaluate(den, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products() {
        let e = parse_expr("(q,q^4;q^5)_inf").unwrap();
        let FactorAst::Poch { args, base, count } = &e.numer[0] else { panic!() };
        assert_eq!(args.len(), 2);
        assert_eq!(base.q, Frac::new(5, 1).unwrap());
        assert_eq!(*count, Count::Infinite);
        assert!(e.denom.is_empty());
    }

    #[test]
    fn caret_is_required() {
        let err = parse_expr("(q3;q)_inf").unwrap_err();
        let Error::Syntax { offset, expected } = err else { panic!() };
        assert_eq!(offset, 2);
        assert!(expected.contains(&"^".to_string()) && expected.contains(&";".to_string()));
    }

    #[test]
    fn fraction_versus_division() {
        let e = parse_expr("q^1/2").unwrap();
        assert_eq!(e.numer, vec![FactorAst::Mono(parse_mono("q^1/2").unwrap())]);
        assert!(e.denom.is_empty());
        let e = parse_expr("q^1/(q;q)_inf").unwrap();
        assert_eq!(e.denom.len(), 1);
        let e = parse_expr("1 / (q , q^4 ; q^5)_inf").unwrap();
        assert_eq!(print(&e), "1/(q,q^4;q^5)_inf");
    }

    #[test]
    fn printing() {
        for (src, out) in [
            ("-2*q^3/2*x", "-2*q^3/2*x"),
            ("x*q^2*3", "3*q^2*x"),
            ("(q^-1*x;q^2)_5 * (y;q)_inf", "(q^-1*x;q^2)_5*(y;q)_inf"),
            ("q^2/4", "q^1/2"),
            ("+1", "1"),
        ] {
            assert_eq!(print(&parse_expr(src).unwrap()), out);
        }
    }
}
