use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// An element of `Q(t)` in canonical form.
///
/// Numerator and denominator are coprime with integer coefficients, the
/// combined content of both is 1 and the denominator's leading coefficient is
/// positive. Two values are equal as field elements iff they are structurally
/// equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn canonicalize(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (mut num, mut den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        // clear denominators, then divide out the shared integer content
        let (l1, _) = num.denom_lcm_num_gcd();
        let (l2, _) = den.denom_lcm_num_gcd();
        let l = num_integer::Integer::lcm(&l1, &l2);
        let lr = Rational::from_integer(l);
        num = num.scale(&lr);
        den = den.scale(&lr);
        let (_, gn) = num.denom_lcm_num_gcd();
        let (_, gd) = den.denom_lcm_num_gcd();
        let mut g = num_integer::Integer::gcd(&gn, &gd);
        if den.leading().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            let inv = Rational::new(BigInt::one(), g);
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn t() -> Self {
        Self::from_polynomial(Polynomial::t())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::canonicalize(Polynomial::constant(c), Polynomial::one()).expect("nonzero denominator")
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Self::canonicalize(p, Polynomial::one()).expect("nonzero denominator")
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some(c)` when the function is a constant rational `c`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.leading() / self.den.leading())
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::canonicalize(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::canonicalize(num, self.den.mul(&other.den)).unwrap()
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::canonicalize(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::canonicalize(self.num.scale(c), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        Self::canonicalize(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::canonicalize(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::canonicalize(self.num.pow(e), self.den.pow(e)).unwrap()
    }

    /// Ratio of the leading coefficients of numerator and denominator.
    pub fn leading_ratio(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        self.num.leading() / self.den.leading()
    }

    /// Parse the infix literal grammar: integers, `t`, `+ - * / ^`, parentheses.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = InfixParser {
            chars: text.chars().collect(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }

    fn simple_token(p: &Polynomial) -> bool {
        p.num_terms() == 1 && {
            let (_, c) = p.lowest().unwrap();
            c.is_one() || p.degree() == Some(0) && c.is_positive()
        }
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `num` alone when the denominator is 1, otherwise `num/den` with
/// parentheses around any multi-term side.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if Self::simple_token(&self.den) {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl FromStr for RationalFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> RationalFunction {
        RationalFunction::add(self, rhs)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: Self) -> RationalFunction {
        RationalFunction::sub(self, rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: Self) -> RationalFunction {
        RationalFunction::mul(self, rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

struct InfixParser {
    chars: Vec<char>,
    pos: usize,
}

impl InfixParser {
    fn err(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.div(&d)?;
                }
                // implicit multiplication, e.g. `2t` or `3(t+1)`
                Some(c) if c == 't' || c == '(' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a nonnegative integer exponent"));
            }
            let e: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = e.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                Ok(RationalFunction::t())
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let n: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RationalFunction::from_rational(Rational::from_integer(n)))
            }
            Some(c) => Err(self.err(&format!("unexpected `{c}` in rational-function literal"))),
            None => Err(self.err("unexpected end of rational-function literal")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    fn raw(num: &[i64], den: &[i64]) -> Result<RationalFunction> {
        RationalFunction::canonicalize(Polynomial::from_i64s(num), Polynomial::from_i64s(den))
    }

    #[test]
    fn canonicalize_reduces_content_and_gcd() {
        let a = raw(&[2, 2], &[0, 4]).unwrap();
        assert_eq!(a.num(), &Polynomial::from_i64s(&[1, 1]));
        assert_eq!(a.den(), &Polynomial::from_i64s(&[0, 2]));
        assert_eq!(raw(&[0], &[5]).unwrap(), RationalFunction::zero());
        assert_eq!(raw(&[-1, 0, 1], &[-1, 1]).unwrap(), rf("t+1"));
        assert_eq!(raw(&[1], &[0]), Err(Error::ZeroDenominator));
    }

    #[test]
    fn rational_coefficients_are_cleared() {
        let half_t = RationalFunction::t().scale(&Rational::new(1.into(), 2.into()));
        assert_eq!(half_t.num(), &Polynomial::from_i64s(&[0, 1]));
        assert_eq!(half_t.den(), &Polynomial::from_i64s(&[2]));
        assert_eq!(half_t.to_string(), "t/2");
    }

    #[test]
    fn negative_denominator_flips() {
        let a = raw(&[1], &[1, -1]).unwrap();
        assert_eq!(a.den().leading(), Rational::one());
        assert_eq!(a.to_string(), "-1/(-1+t)");
    }

    #[test]
    fn field_op_examples() {
        assert_eq!(rf("t/(t+1)").inv().unwrap(), rf("(t+1)/t"));
        assert_eq!(rf("t").mul(&rf("1/t")), RationalFunction::one());
        assert_eq!(rf("1/(t-1)").add(&rf("1/(t+1)")), rf("2t/(t^2-1)"));
        assert_eq!(RationalFunction::zero().inv(), Err(Error::ZeroDenominator));
        assert_eq!(rf("t").div(&RationalFunction::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn display_round_trips() {
        for s in ["t/(t+1)", "(1-t)/(1+t^2)", "2t/3", "-5", "1/t^2", "(3t-1)/(2t)", "t-100"] {
            let v = rf(s);
            assert_eq!(rf(&v.to_string()), v, "{s} printed as {v}");
        }
        assert_eq!(rf("1/t").to_string(), "1/t");
        assert_eq!(rf("(t+1)/(2t)").to_string(), "(1+t)/(2*t)");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(rf_err("t/0"), Error::ZeroDenominator);
        assert!(matches!(rf_err("t+"), Error::Parse { .. }));
        assert!(matches!(rf_err("x"), Error::Parse { .. }));
    }

    fn rf_err(s: &str) -> Error {
        RationalFunction::parse(s).unwrap_err()
    }
}
