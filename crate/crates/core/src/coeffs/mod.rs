//! Exact coefficients in ℚ(q, h), optionally extended by framing parameters.

mod factored;
mod gcd;
mod keyfrac;
mod poly;
mod sample;

pub use factored::{combine_like, reduce_sum, Cyclo, Factored, LMono, ModEval};
pub use gcd::gcd2;
pub use keyfrac::KeyFrac;
pub use poly::{default_name, Mono, Poly, MAX_GENS};
pub use sample::{
    mod_add, mod_inv, mod_mul, mod_pow, mod_sub, rat_mod, EvaluationPoint, PRIME, SAMPLE_HI,
    SAMPLE_LO,
};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Equality-testing mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Mode {
    Exact,
    Sampled { points: usize, seed: u64 },
}

impl Mode {
    pub const DEFAULT_POINTS: usize = 3;

    pub fn sampled(seed: u64) -> Mode {
        Mode::Sampled { points: Self::DEFAULT_POINTS, seed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// A quotient of polynomials, kept in canonical form when it has at most two
/// generators: numerator and denominator coprime, denominator's lex-least term
/// with coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coefficient {
    num: Poly,
    den: Poly,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Coefficient {
    pub fn new(num: Poly, den: Poly) -> Result<Coefficient> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    /// Build from a pair already known to be coprime; only the scalar is fixed.
    pub(crate) fn from_coprime(num: Poly, den: Poly) -> Coefficient {
        let arity = num.arity().max(den.arity()).max(2);
        let c = den.trailing().expect("nonzero denominator").1.clone();
        Coefficient { num: num.scale(&c.recip()).with_arity(arity), den: den.scale(&c.recip()).with_arity(arity) }
    }

    fn normalize(num: Poly, den: Poly) -> Coefficient {
        let arity = num.arity().max(den.arity()).max(2);
        if num.is_zero() {
            return Coefficient::zero(arity);
        }
        let m = num.mono_content().gcd(den.mono_content());
        let (mut num, mut den) = (num.div_mono(m), den.div_mono(m));
        if num.used_arity() <= 2 && den.used_arity() <= 2 {
            let g = gcd2(&num, &den);
            if g.total_degree() > 0 {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        Coefficient::from_coprime(num, den).with_arity(arity)
    }

    fn with_arity(self, arity: usize) -> Coefficient {
        Coefficient { num: self.num.with_arity(arity), den: self.den.with_arity(arity) }
    }

    pub fn zero(arity: usize) -> Coefficient {
        Coefficient { num: Poly::zero(arity), den: Poly::one(arity) }
    }

    pub fn one(arity: usize) -> Coefficient {
        Coefficient { num: Poly::one(arity), den: Poly::one(arity) }
    }

    pub fn from_int(n: i64) -> Coefficient {
        Coefficient::from_rational(rat(n))
    }

    pub fn from_rational(c: BigRational) -> Coefficient {
        Coefficient::from_poly(Poly::constant(2, c))
    }

    pub fn from_poly(p: Poly) -> Coefficient {
        let arity = p.arity().max(2);
        Coefficient { num: p.with_arity(arity), den: Poly::one(arity) }
    }

    pub fn q() -> Coefficient {
        Coefficient::from_poly(Poly::var(2, 0))
    }

    pub fn h() -> Coefficient {
        Coefficient::from_poly(Poly::var(2, 1))
    }

    /// Generator `i` (0 = q, 1 = h, then framing parameters).
    pub fn gen(i: usize) -> Coefficient {
        Coefficient::from_poly(Poly::var(i + 1, i))
    }

    /// `c q^a h^b` for possibly negative exponents.
    pub fn monomial(c: BigRational, qe: i64, he: i64) -> Coefficient {
        if c.is_zero() {
            return Coefficient::zero(2);
        }
        let mut e = [0i32; MAX_GENS];
        e[0] = qe as i32;
        e[1] = he as i32;
        Factored::monomial(c, LMono(e)).to_coefficient()
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn arity(&self) -> usize {
        self.num.arity().max(self.den.arity())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, o: &Coefficient) -> Coefficient {
        if self.den == o.den {
            return Self::normalize(self.num.add(&o.num), self.den.clone());
        }
        Self::normalize(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Coefficient) -> Coefficient {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Coefficient {
        Coefficient { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Coefficient) -> Coefficient {
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        Self::normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &Coefficient) -> Result<Coefficient> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn inv(&self) -> Result<Coefficient> {
        Coefficient::one(self.arity()).div(self)
    }

    pub fn pow(&self, k: i64) -> Result<Coefficient> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let k = k.unsigned_abs() as u32;
        Ok(Coefficient::from_coprime(base.num.pow(k), base.den.pow(k)))
    }

    pub fn scale(&self, c: &BigRational) -> Coefficient {
        if c.is_zero() {
            return Coefficient::zero(self.arity());
        }
        Coefficient { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Cross-multiplied difference `self.num * o.den - o.num * self.den`.
    pub fn cross_diff(&self, o: &Coefficient) -> Poly {
        self.num.mul(&o.den).sub(&o.num.mul(&self.den))
    }

    /// Value at a point, `None` when the denominator vanishes there.
    pub fn eval(&self, pt: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(pt);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(pt) / d)
        }
    }

    pub fn eval_mod(&self, pt: &[u64]) -> Option<u64> {
        let d = mod_inv(self.den.eval_mod(pt))?;
        Some(mod_mul(self.num.eval_mod(pt), d))
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        let wrap = |p: &Poly| {
            let s = p.fmt_with(names);
            if p.len() > 1 {
                format!("({})", s)
            } else {
                s
            }
        };
        if self.den.is_one() {
            self.num.fmt_with(names)
        } else {
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }

    /// Parse an expression in `+ - * / ^`, integers, parentheses and generator
    /// names resolved by `lookup`.
    pub fn parse_with(s: &str, lookup: &dyn Fn(&str) -> Option<usize>) -> Result<Coefficient> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0, lookup };
        let c = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in {:?}", s)));
        }
        Ok(c)
    }

    pub fn parse(s: &str) -> Result<Coefficient> {
        Self::parse_with(s, &default_lookup)
    }
}

/// Resolves `q`, `h`, and `g<k>` for generator `k`.
pub fn default_lookup(name: &str) -> Option<usize> {
    match name {
        "q" => Some(0),
        "h" => Some(1),
        _ => name.strip_prefix('g').and_then(|k| k.parse().ok()).filter(|&k| k >= 2 && k < MAX_GENS),
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_name))
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Coefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn coeff_arith(a: &Coefficient, b: &Coefficient, op: Op) -> Result<Coefficient> {
    Ok(match op {
        Op::Add => a.add(b),
        Op::Sub => a.sub(b),
        Op::Mul => a.mul(b),
        Op::Div => a.div(b)?,
    })
}

pub fn coeff_eq(a: &Coefficient, b: &Coefficient, mode: Mode) -> Result<bool> {
    match mode {
        Mode::Exact => {
            let arity = a.num.used_arity().max(a.den.used_arity()).max(b.num.used_arity()).max(b.den.used_arity());
            if arity > 2 {
                return Err(Error::UnsupportedMode { arity });
            }
            Ok(a.cross_diff(b).is_zero())
        }
        Mode::Sampled { points, seed } => {
            if points == 0 {
                return Err(Error::Domain("sampled mode needs at least one point".into()));
            }
            let arity = a.arity().max(b.arity());
            for k in 0..points as u64 {
                let pt = EvaluationPoint::sample(arity, seed, k);
                let lhs = a.num.eval(&pt.values) * b.den.eval(&pt.values);
                let rhs = b.num.eval(&pt.values) * a.den.eval(&pt.values);
                if lhs != rhs {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {:?}", c)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    lookup: &'a dyn Fn(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Coefficient> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Coefficient> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Coefficient> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: i64 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    return base.pow(if neg { -k } else { k });
                }
                _ => return Err(Error::Parse("expected exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Coefficient> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Coefficient::from_rational(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = (self.lookup)(&name).ok_or_else(|| Error::Parse(format!("unknown generator {}", name)))?;
                Ok(Coefficient::gen(i))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing )".into()));
                }
                Ok(e)
            }
            t => Err(Error::Parse(format!("unexpected token {:?}", t))),
        }
    }
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::zero(2)
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_int(n)
    }
}

/// Convenience: `1` as a rational.
pub fn rat_one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coefficient {
        Coefficient::parse(s).unwrap()
    }

    #[test]
    fn cancellation() {
        assert_eq!(c("(1-h)/(1-q)").mul(&c("1-q")), c("1-h"));
    }

    #[test]
    fn additive_identity() {
        let x = c("(1-h)/(1-q)");
        assert_eq!(x.add(&Coefficient::zero(2)), x);
    }

    #[test]
    fn common_denominator() {
        let s = c("(1-h)/(1-q)").add(&c("(1-h*q)/(1-q^2)"));
        assert_eq!(s.denom().to_string(), "1-q^2");
        assert_eq!(s.numer().to_string(), "2-h+q-2*q*h");
    }

    #[test]
    fn canonical_string() {
        assert_eq!(c("(h-1)/(q-1)").to_string(), "(1-h)/(1-q)");
        assert_eq!(c("(1-q^2)/(1-q)").to_string(), "1+q");
        assert_eq!(c("q/h").to_string(), "q/h");
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(c("q").div(&Coefficient::zero(2)), Err(Error::DivisionByZero));
    }

    #[test]
    fn equality_modes() {
        let s = Mode::sampled(0);
        assert!(coeff_eq(&c("(1-q^2)/(1-q)"), &c("1+q"), Mode::Exact).unwrap());
        assert!(coeff_eq(&c("(1-q^2)/(1-q)"), &c("1+q"), s).unwrap());
        assert!(!coeff_eq(&c("1-h"), &c("1-q"), s).unwrap());
        let a = Coefficient::gen(2);
        assert!(matches!(coeff_eq(&a, &a, Mode::Exact), Err(Error::UnsupportedMode { arity: 3 })));
        assert!(coeff_eq(&a, &a, s).unwrap());
    }
}
