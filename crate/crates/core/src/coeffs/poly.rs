//! Sparse multivariate polynomials over the rationals.
//!
//! Generator 0 is `q`, generator 1 is `h`; further generators are framing
//! parameters. Exponent vectors are packed into a `u128`, sixteen bits per
//! generator with generator 0 in the top bits, so integer order on the packed
//! word is lex order with `q > h > a...`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const MAX_GENS: usize = 8;
const BITS: u32 = 16;
const MASK: u128 = 0xffff;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(pub u128);

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(i: usize) -> u32 {
        BITS * (MAX_GENS - 1 - i) as u32
    }

    pub fn from_exps(exps: &[u32]) -> Mono {
        assert!(exps.len() <= MAX_GENS, "too many generators");
        let mut w = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= MASK as u32, "exponent overflow");
            w |= (e as u128) << Self::shift(i);
        }
        Mono(w)
    }

    pub fn var(i: usize, e: u32) -> Mono {
        let mut v = [0u32; MAX_GENS];
        v[i] = e;
        Mono::from_exps(&v)
    }

    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> Self::shift(i)) & MASK) as u32
    }

    pub fn exps(self, arity: usize) -> Vec<u32> {
        (0..arity).map(|i| self.exp(i)).collect()
    }

    pub fn degree(self) -> u32 {
        (0..MAX_GENS).map(|i| self.exp(i)).sum()
    }

    /// Number of generators actually used (index of the last nonzero + 1).
    pub fn support_len(self) -> usize {
        (0..MAX_GENS).rev().find(|&i| self.exp(i) > 0).map_or(0, |i| i + 1)
    }

    pub fn mul(self, o: Mono) -> Mono {
        for i in 0..MAX_GENS {
            assert!(self.exp(i) + o.exp(i) <= MASK as u32, "exponent overflow");
        }
        Mono(self.0 + o.0)
    }

    pub fn divides(self, o: Mono) -> bool {
        (0..MAX_GENS).all(|i| self.exp(i) <= o.exp(i))
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quo(self, o: Mono) -> Mono {
        debug_assert!(self.divides(o));
        Mono(o.0 - self.0)
    }

    pub fn gcd(self, o: Mono) -> Mono {
        let v: Vec<u32> = (0..MAX_GENS).map(|i| self.exp(i).min(o.exp(i))).collect();
        Mono::from_exps(&v)
    }

    pub fn pow(self, k: u32) -> Mono {
        let v: Vec<u32> = (0..MAX_GENS).map(|i| self.exp(i) * k).collect();
        Mono::from_exps(&v)
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps(self.support_len().max(1)))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Mono, BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero(arity: usize) -> Poly {
        Poly { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Poly {
        Poly::constant(arity, BigRational::one())
    }

    pub fn constant(arity: usize, c: BigRational) -> Poly {
        Poly::term(arity, Mono::ONE, c)
    }

    pub fn from_int(arity: usize, c: i64) -> Poly {
        Poly::constant(arity, rat(c))
    }

    pub fn term(arity: usize, m: Mono, c: BigRational) -> Poly {
        let mut p = Poly::zero(arity.max(m.support_len()));
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(arity: usize, i: usize) -> Poly {
        Poly::term(arity, Mono::var(i, 1), BigRational::one())
    }

    /// Build from `(exponents, coefficient)` pairs; repeated monomials add up.
    pub fn from_terms<I>(arity: usize, it: I) -> Poly
    where
        I: IntoIterator<Item = (Mono, BigRational)>,
    {
        let mut p = Poly::zero(arity);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn with_arity(mut self, arity: usize) -> Poly {
        assert!(arity >= self.used_arity(), "arity would drop a generator");
        self.arity = arity;
        self
    }

    /// Smallest arity that still holds every generator with nonzero exponent.
    pub fn used_arity(&self) -> usize {
        self.terms.keys().map(|m| m.support_len()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::ONE).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, m: Mono) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        self.arity = self.arity.max(m.support_len());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Lex-greatest term.
    pub fn leading(&self) -> Option<(Mono, &BigRational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    /// Lex-least term.
    pub fn trailing(&self) -> Option<(Mono, &BigRational)> {
        self.terms.iter().next().map(|(m, c)| (*m, c))
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Greatest monomial dividing every term.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.keys();
        match it.next() {
            None => Mono::ONE,
            Some(&first) => it.fold(first, |g, &m| g.gcd(m)),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: Mono) -> Poly {
        Poly {
            arity: self.arity.max(m.support_len()),
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x.clone())).collect(),
        }
    }

    /// Divide every term by `m`, which must divide the monomial content.
    pub fn div_mono(&self, m: Mono) -> Poly {
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, x)| (m.quo(*k), x.clone())).collect(),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r.arity = r.arity.max(o.arity);
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r.arity = r.arity.max(o.arity);
        for (m, c) in &o.terms {
            r.add_term(*m, -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        self.scale(&rat(-1))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let (a, b) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut r = Poly::zero(self.arity.max(o.arity));
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                r.add_term(ma.mul(*mb), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(self.arity);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    ///
    /// Single-divisor division by lex-leading terms: if `d | r` then
    /// `LT(d) | LT(r)`, so a non-divisible leading term proves `d ∤ self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (ld, lc) = d.leading()?;
        let lc = lc.clone();
        let mut r = self.clone();
        let mut q = Poly::zero(self.arity.max(d.arity));
        while let Some((lr, cr)) = r.leading() {
            if !ld.divides(lr) {
                return None;
            }
            let m = ld.quo(lr);
            let c = cr / &lc;
            for (md, cd) in &d.terms {
                r.add_term(md.mul(m), -(cd * &c));
            }
            q.add_term(m, c);
        }
        Some(q)
    }

    pub fn eval(&self, pt: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        let mut powers: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]; pt.len()];
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in pt.iter().enumerate() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e {
                    let next = pw.last().unwrap() * x;
                    pw.push(next);
                }
                t *= &pw[e];
            }
            acc += t;
        }
        acc
    }

    /// Evaluate modulo [`super::sample::PRIME`]; `pt` holds residues.
    pub fn eval_mod(&self, pt: &[u64]) -> u64 {
        use super::sample::{mod_mul, mod_pow, rat_mod};
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = rat_mod(c).expect("coefficient denominator divisible by the prime");
            for (i, &x) in pt.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t = mod_mul(t, mod_pow(x, e as u64));
                }
            }
            acc = super::sample::mod_add(acc, t);
        }
        acc
    }

    /// Multiply through by the lcm of coefficient denominators and divide by the
    /// gcd of numerators, giving a primitive integer polynomial with positive
    /// leading coefficient, together with the factor that was removed.
    pub fn primitive_integer(&self) -> (Poly, BigRational) {
        use num_integer::Integer;
        if self.is_zero() {
            return (self.clone(), BigRational::one());
        }
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        let mut f = BigRational::new(l, g);
        if self.leading().unwrap().1.is_negative() {
            f = -f;
        }
        (self.scale(&f), f.recip())
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut mono = Vec::new();
            for i in 0..MAX_GENS {
                match m.exp(i) {
                    0 => {}
                    1 => mono.push(names(i)),
                    e => mono.push(format!("{}^{}", names(i), e)),
                }
            }
            let mono = mono.join("*");
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono
            } else {
                format!("{}*{}", abs, mono)
            };
            if neg {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            out.push_str(&body);
        }
        out
    }
}

pub fn default_name(i: usize) -> String {
    match i {
        0 => "q".to_string(),
        1 => "h".to_string(),
        k => format!("g{}", k),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_name))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Poly {
        Poly::var(2, 0)
    }
    fn h() -> Poly {
        Poly::var(2, 1)
    }
    fn one() -> Poly {
        Poly::one(2)
    }

    #[test]
    fn packed_order_is_lex() {
        let a = Mono::from_exps(&[1, 0]);
        let b = Mono::from_exps(&[0, 5]);
        assert!(a > b);
        assert_eq!(a.mul(b).exps(2), vec![1, 5]);
    }

    #[test]
    fn display_is_ascending() {
        let p = one().sub(&h()).sub(&q()).add(&q().mul(&h()));
        assert_eq!(p.to_string(), "1-h-q+q*h");
    }

    #[test]
    fn exact_division() {
        let a = one().sub(&q().pow(3));
        let b = one().sub(&q());
        let c = a.div_exact(&b).unwrap();
        assert_eq!(c.to_string(), "1+q+q^2");
        assert!(a.div_exact(&one().sub(&h())).is_none());
    }

    #[test]
    fn evaluation() {
        let p = one().sub(&q().mul(&h()));
        let v = p.eval(&[rat(2), rat(3)]);
        assert_eq!(v, rat(-5));
    }
}
