//! Fractions whose denominator is a product of binomial keys and a monomial.
//!
//! Sums only need the lcm of two key multisets, and the reduced form is found
//! by trial division by those keys, so no polynomial gcd is ever taken.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factored::{Cyclo, Factored};
use super::poly::{Mono, Poly, MAX_GENS};
use super::Coefficient;

/// `num / (x^dmono ∏ key^e)`, reduced: no key and no variable of `dmono`
/// divides `num`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyFrac {
    num: Poly,
    dmono: Mono,
    den: BTreeMap<Cyclo, u32>,
}

impl KeyFrac {
    pub fn zero() -> KeyFrac {
        KeyFrac { num: Poly::zero(MAX_GENS), dmono: Mono::ONE, den: BTreeMap::new() }
    }

    pub fn one() -> KeyFrac {
        KeyFrac::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> KeyFrac {
        KeyFrac { num: Poly::constant(MAX_GENS, c), dmono: Mono::ONE, den: BTreeMap::new() }
    }

    pub fn from_factored(f: &Factored) -> KeyFrac {
        let (p, n) = f.mono().split();
        let mut num = Poly::term(MAX_GENS, p, f.scalar().clone());
        let mut den = BTreeMap::new();
        for (k, &e) in f.factors() {
            if e > 0 {
                num = num.mul(&k.poly().pow(e as u32));
            } else {
                den.insert(*k, (-e) as u32);
            }
        }
        KeyFrac { num: num.with_arity(MAX_GENS), dmono: n, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.dmono == Mono::ONE && self.den.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> KeyFrac {
        if c.is_zero() {
            return KeyFrac::zero();
        }
        KeyFrac { num: self.num.scale(c), ..self.clone() }
    }

    pub fn neg(&self) -> KeyFrac {
        KeyFrac { num: self.num.neg(), ..self.clone() }
    }

    fn reduce(mut self) -> KeyFrac {
        if self.num.is_zero() {
            return KeyFrac::zero();
        }
        for (k, e) in self.den.iter_mut() {
            let kp = k.poly();
            while *e > 0 {
                match self.num.div_exact(&kp) {
                    Some(q) => {
                        self.num = q.with_arity(MAX_GENS);
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|_, e| *e > 0);
        let g = self.num.mono_content().gcd(self.dmono);
        if g != Mono::ONE {
            self.num = self.num.div_mono(g);
            self.dmono = g.quo(self.dmono);
        }
        self
    }

    pub fn add(&self, o: &KeyFrac) -> KeyFrac {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (k, &e) in &o.den {
            let x = den.entry(*k).or_insert(0);
            *x = (*x).max(e);
        }
        let dmono = lcm_mono(self.dmono, o.dmono);
        let lift = |f: &KeyFrac| -> Poly {
            let mut p = f.num.mul_mono(f.dmono.quo(dmono));
            for (k, &e) in &den {
                let have = f.den.get(k).copied().unwrap_or(0);
                if e > have {
                    p = p.mul(&k.poly().pow(e - have));
                }
            }
            p
        };
        let num = lift(self).add(&lift(o)).with_arity(MAX_GENS);
        KeyFrac { num, dmono, den }.reduce()
    }

    pub fn sub(&self, o: &KeyFrac) -> KeyFrac {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &KeyFrac) -> KeyFrac {
        if self.is_zero() || o.is_zero() {
            return KeyFrac::zero();
        }
        let mut den = self.den.clone();
        for (k, &e) in &o.den {
            *den.entry(*k).or_insert(0) += e;
        }
        KeyFrac { num: self.num.mul(&o.num).with_arity(MAX_GENS), dmono: self.dmono.mul(o.dmono), den }.reduce()
    }

    pub fn mul_factored(&self, f: &Factored) -> KeyFrac {
        self.mul(&KeyFrac::from_factored(f))
    }

    pub fn to_coefficient(&self) -> Coefficient {
        if self.is_zero() {
            return Coefficient::zero(2);
        }
        let mut den = Poly::term(MAX_GENS, self.dmono, BigRational::one());
        for (k, &e) in &self.den {
            den = den.mul(&k.poly().pow(e));
        }
        let arity = self.num.used_arity().max(den.used_arity()).max(2);
        Coefficient::from_coprime(self.num.clone().with_arity(arity), den.with_arity(arity))
    }
}

fn lcm_mono(a: Mono, b: Mono) -> Mono {
    a.gcd(b).quo(a.mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::LMono;

    fn bin(qe: i32, he: i32, k: i32) -> Factored {
        let mut f = Factored::one();
        f.mul_binomial(LMono::qh(qe, he), k);
        f
    }

    #[test]
    fn matches_coefficient() {
        let a = KeyFrac::from_factored(&bin(1, 0, -1).mul(&bin(0, 1, 1)));
        let b = KeyFrac::from_factored(&bin(2, 0, -1));
        let s = a.add(&b);
        let want = a.to_coefficient().add(&b.to_coefficient());
        assert_eq!(s.to_coefficient(), want);
        assert_eq!(a.mul(&b).to_coefficient(), a.to_coefficient().mul(&b.to_coefficient()));
        // (1-q^2)/(1-q) - q = 1
        let c = KeyFrac::from_factored(&bin(2, 0, 1).mul(&bin(1, 0, -1)));
        let q = KeyFrac::from_factored(&Factored::monomial(BigRational::one(), LMono::qh(1, 0)));
        assert!(c.sub(&q).is_one());
        assert!(c.sub(&c).is_zero());
        let inv_q = KeyFrac::from_factored(&Factored::monomial(BigRational::one(), LMono::qh(-1, 0)));
        assert!(q.mul(&inv_q).is_one());
        assert_eq!(inv_q.add(&q).to_coefficient(), Coefficient::parse("(1+q^2)/q").unwrap());
    }
}
