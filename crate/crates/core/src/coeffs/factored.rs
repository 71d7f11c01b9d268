//! Products of binomials `1 - m` for Laurent monomials `m`.
//!
//! A binomial splits as `1 - x^g = ∏_{d | g} Φ_d(x)` over a primitive monomial
//! `x`, and `Φ_d(x)` stays irreducible under a primitive monomial substitution.
//! Keeping products in terms of these irreducible keys gives a canonical form
//! in which cancellation is exponent bookkeeping, and sums can be brought to a
//! reduced fraction by trial division only.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Mono, Poly, MAX_GENS};
use super::sample::{mod_inv, mod_mul, mod_pow, rat_mod};
use super::Coefficient;

/// Laurent monomial exponents.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LMono(pub [i32; MAX_GENS]);

impl LMono {
    pub const ONE: LMono = LMono([0; MAX_GENS]);

    pub fn var(i: usize, e: i32) -> LMono {
        let mut m = LMono::ONE;
        m.0[i] = e;
        m
    }

    pub fn qh(qe: i32, he: i32) -> LMono {
        let mut m = LMono::ONE;
        m.0[0] = qe;
        m.0[1] = he;
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(self, o: LMono) -> LMono {
        let mut r = self;
        for i in 0..MAX_GENS {
            r.0[i] += o.0[i];
        }
        r
    }

    pub fn div(self, o: LMono) -> LMono {
        self.mul(o.pow(-1))
    }

    pub fn pow(self, k: i32) -> LMono {
        let mut r = self;
        for e in r.0.iter_mut() {
            *e *= k;
        }
        r
    }

    pub fn support_len(&self) -> usize {
        (0..MAX_GENS).rev().find(|&i| self.0[i] != 0).map_or(0, |i| i + 1)
    }

    /// Positive and negative parts as ordinary monomials.
    pub fn split(&self) -> (Mono, Mono) {
        let p: Vec<u32> = self.0.iter().map(|&e| e.max(0) as u32).collect();
        let n: Vec<u32> = self.0.iter().map(|&e| (-e).max(0) as u32).collect();
        (Mono::from_exps(&p), Mono::from_exps(&n))
    }

    fn content(&self) -> i32 {
        self.0.iter().fold(0i32, |g, &e| g.gcd(&e))
    }

    fn first_sign(&self) -> i32 {
        self.0.iter().find(|&&e| e != 0).map_or(0, |e| e.signum())
    }

    pub fn to_coefficient(&self) -> Coefficient {
        let (p, n) = self.split();
        let arity = self.support_len().max(2);
        Coefficient::from_coprime(Poly::term(arity, p, BigRational::one()), Poly::term(arity, n, BigRational::one()))
    }
}

/// Irreducible key `Φ_d(x^dir)` with `dir` primitive and first nonzero entry positive.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cyclo {
    pub dir: LMono,
    pub d: u32,
}

thread_local! {
    static CYCLOTOMIC: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
    static KEY_POLY: RefCell<HashMap<Cyclo, Rc<Poly>>> = RefCell::new(HashMap::new());
}

/// Coefficients of `Φ_d`, with the convention `Φ_1(x) = 1 - x`.
pub fn cyclotomic(d: u32) -> Rc<Vec<i64>> {
    if let Some(c) = CYCLOTOMIC.with(|m| m.borrow().get(&d).cloned()) {
        return c;
    }
    let c = if d == 1 {
        vec![1, -1]
    } else {
        // x^d - 1 = -(1 - x) ∏_{e | d, 1 < e < d} Φ_e(x) Φ_d(x)
        let mut num = vec![0i64; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        let mut den = vec![-1i64, 1];
        for e in 2..d {
            if d % e == 0 {
                let f = cyclotomic(e);
                let mut r = vec![0i64; den.len() + f.len() - 1];
                for (i, a) in den.iter().enumerate() {
                    for (j, b) in f.iter().enumerate() {
                        r[i + j] += a * b;
                    }
                }
                den = r;
            }
        }
        // exact division by a monic polynomial
        let mut rem = num;
        let dq = rem.len() - den.len();
        let mut quo = vec![0i64; dq + 1];
        for k in (0..=dq).rev() {
            let c = rem[k + den.len() - 1];
            quo[k] = c;
            for (j, b) in den.iter().enumerate() {
                rem[k + j] -= c * b;
            }
        }
        debug_assert!(rem.iter().all(|&x| x == 0));
        quo
    };
    let c = Rc::new(c);
    CYCLOTOMIC.with(|m| m.borrow_mut().insert(d, c.clone()));
    c
}

fn phi_deg(d: u32) -> i32 {
    cyclotomic(d).len() as i32 - 1
}

impl Cyclo {
    /// The polynomial `Φ_d(x^dir) · x^{φ(d)·neg(dir)}`, which has no monomial factor.
    pub fn poly(&self) -> Rc<Poly> {
        if let Some(p) = KEY_POLY.with(|m| m.borrow().get(self).cloned()) {
            return p;
        }
        let c = cyclotomic(self.d);
        let phi = c.len() as i32 - 1;
        let neg = LMono(self.dir.0.map(|e| (-e).max(0)));
        let arity = self.dir.support_len().max(2);
        let mut p = Poly::zero(arity);
        for (k, &ck) in c.iter().enumerate() {
            let e = self.dir.pow(k as i32).mul(neg.pow(phi));
            let (pos, n) = e.split();
            debug_assert_eq!(n, Mono::ONE);
            p.add_term(pos, BigRational::from_integer(BigInt::from(ck)));
        }
        let p = Rc::new(p);
        KEY_POLY.with(|m| m.borrow_mut().insert(*self, p.clone()));
        p
    }

    fn small_terms(&self) -> Vec<(Mono, i64)> {
        self.poly()
            .terms()
            .map(|(m, c)| (*m, i64::try_from(c.numer().clone()).expect("small cyclotomic coefficient")))
            .collect()
    }
}

/// `scalar · x^mono · ∏ key^mult`, never zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Factored {
    scalar: BigRational,
    mono: LMono,
    factors: BTreeMap<Cyclo, i32>,
}

impl Default for Factored {
    fn default() -> Self {
        Factored::one()
    }
}

impl Factored {
    pub fn one() -> Factored {
        Factored { scalar: BigRational::one(), mono: LMono::ONE, factors: BTreeMap::new() }
    }

    pub fn monomial(c: BigRational, m: LMono) -> Factored {
        assert!(!c.is_zero(), "factored values are nonzero");
        Factored { scalar: c, mono: m, factors: BTreeMap::new() }
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn mono(&self) -> LMono {
        self.mono
    }

    pub fn factors(&self) -> &BTreeMap<Cyclo, i32> {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        let f = self.factors.keys().map(|k| k.dir.support_len()).max().unwrap_or(0);
        f.max(self.mono.support_len()).max(2)
    }

    pub fn is_one(&self) -> bool {
        self.scalar.is_one() && self.mono.is_one() && self.factors.is_empty()
    }

    pub fn scale(&mut self, c: &BigRational) {
        assert!(!c.is_zero());
        self.scalar *= c;
    }

    pub fn mul_mono(&mut self, m: LMono) {
        self.mono = self.mono.mul(m);
    }

    fn bump(&mut self, key: Cyclo, k: i32) {
        let e = self.factors.entry(key).or_insert(0);
        *e += k;
        if *e == 0 {
            self.factors.remove(&key);
        }
    }

    /// Multiply by `(1 - m)^k`; `m` must not be the monomial 1.
    pub fn mul_binomial(&mut self, m: LMono, k: i32) {
        assert!(!m.is_one(), "binomial 1 - 1 is zero");
        if k == 0 {
            return;
        }
        let g = m.content().abs();
        let mut prim = LMono(m.0.map(|e| e / g));
        if prim.first_sign() < 0 {
            // 1 - m = -m (1 - 1/m)
            if k % 2 != 0 {
                self.scalar = -self.scalar.clone();
            }
            self.mono = self.mono.mul(m.pow(k));
            prim = prim.pow(-1);
        }
        let neg = LMono(prim.0.map(|e| (-e).max(0)));
        for d in 1..=g as u32 {
            if g as u32 % d == 0 {
                self.bump(Cyclo { dir: prim, d }, k);
                self.mono = self.mono.mul(neg.pow(-phi_deg(d) * k));
            }
        }
    }

    pub fn mul(&self, o: &Factored) -> Factored {
        let mut r = self.clone();
        r.mul_assign(o);
        r
    }

    pub fn mul_assign(&mut self, o: &Factored) {
        self.scalar *= &o.scalar;
        self.mono = self.mono.mul(o.mono);
        for (k, &e) in &o.factors {
            self.bump(*k, e);
        }
    }

    pub fn pow(&self, k: i32) -> Factored {
        let scalar = if k >= 0 {
            num_traits::pow(self.scalar.clone(), k as usize)
        } else {
            num_traits::pow(self.scalar.recip(), (-k) as usize)
        };
        Factored {
            scalar,
            mono: self.mono.pow(k),
            factors: self.factors.iter().map(|(key, &e)| (*key, e * k)).collect(),
        }
    }

    pub fn inv(&self) -> Factored {
        self.pow(-1)
    }

    pub fn to_coefficient(&self) -> Coefficient {
        let arity = self.arity();
        let (p, n) = self.mono.split();
        let mut num = Poly::term(arity, p, self.scalar.clone());
        let mut den = Poly::term(arity, n, BigRational::one());
        for (key, &e) in &self.factors {
            let kp = key.poly();
            if e > 0 {
                num = num.mul(&kp.pow(e as u32));
            } else {
                den = den.mul(&kp.pow((-e) as u32));
            }
        }
        Coefficient::from_coprime(num, den)
    }

    pub fn eval_mod(&self, ev: &mut ModEval) -> Option<u64> {
        let mut acc = rat_mod(&self.scalar)?;
        acc = mod_mul(acc, ev.mono(self.mono)?);
        for (key, &e) in &self.factors {
            let v = ev.key(key);
            if e > 0 {
                acc = mod_mul(acc, mod_pow(v, e as u64));
            } else {
                acc = mod_mul(acc, mod_pow(mod_inv(v)?, (-e) as u64));
            }
        }
        Some(acc)
    }

    pub fn eval(&self, pt: &[BigRational]) -> Option<BigRational> {
        let mut acc = self.scalar.clone();
        for (i, &e) in self.mono.0.iter().enumerate() {
            if e != 0 {
                acc = mul_pow(acc, &pt[i], e);
            }
        }
        for (key, &e) in &self.factors {
            let v = key.poly().eval(pt);
            if v.is_zero() {
                if e < 0 {
                    return None;
                }
                return Some(BigRational::zero());
            }
            acc = mul_pow(acc, &v, e);
        }
        Some(acc)
    }
}

/// Merge terms that differ only in their scalar; drops cancelled terms.
pub fn combine_like(terms: Vec<Factored>) -> Vec<Factored> {
    let mut acc: BTreeMap<(LMono, Vec<(Cyclo, i32)>), BigRational> = BTreeMap::new();
    for t in terms {
        let key = (t.mono, t.factors.into_iter().collect());
        *acc.entry(key).or_insert_with(BigRational::zero) += t.scalar;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((mono, f), scalar)| Factored { scalar, mono, factors: f.into_iter().collect() })
        .collect()
}

fn mul_pow(acc: BigRational, x: &BigRational, e: i32) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        acc * p
    } else {
        acc / p
    }
}

/// Residues of the generators plus a cache of key values.
pub struct ModEval {
    vals: Vec<u64>,
    invs: Vec<Option<u64>>,
    cache: HashMap<Cyclo, u64>,
}

impl ModEval {
    pub fn new(vals: Vec<u64>) -> ModEval {
        let invs = vals.iter().map(|&v| mod_inv(v)).collect();
        ModEval { vals, invs, cache: HashMap::new() }
    }

    pub fn values(&self) -> &[u64] {
        &self.vals
    }

    fn mono(&self, m: LMono) -> Option<u64> {
        let mut acc = 1u64;
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                acc = mod_mul(acc, mod_pow(self.vals[i], e as u64));
            } else if e < 0 {
                acc = mod_mul(acc, mod_pow(self.invs[i]?, (-e) as u64));
            }
        }
        Some(acc)
    }

    fn key(&mut self, k: &Cyclo) -> u64 {
        if let Some(&v) = self.cache.get(k) {
            return v;
        }
        let v = k.poly().eval_mod(&self.vals);
        self.cache.insert(*k, v);
        v
    }

    /// Value of a sum of products, `None` if a denominator vanishes.
    pub fn sum(&mut self, terms: &[Factored]) -> Option<u64> {
        let mut acc = 0u64;
        for t in terms {
            acc = super::sample::mod_add(acc, t.eval_mod(self)?);
        }
        Some(acc)
    }
}

type IntAcc = HashMap<Mono, BigInt>;

fn mul_small(src: &IntAcc, f: &[(Mono, i64)]) -> IntAcc {
    let mut out: IntAcc = HashMap::with_capacity(src.len() * f.len());
    for (m, c) in src {
        for (fm, fc) in f {
            let e = out.entry(m.mul(*fm)).or_insert_with(BigInt::zero);
            *e += c * fc;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Sum of products as a reduced fraction.
///
/// Every term is brought over the common denominator built from the minimal
/// key exponents; the resulting numerator can only share factors with the keys
/// of that denominator and with monomials, so trial division finishes the
/// reduction.
pub fn reduce_sum(terms: &[Factored]) -> Coefficient {
    let arity = terms.iter().map(|t| t.arity()).max().unwrap_or(2);
    if terms.is_empty() {
        return Coefficient::zero(arity);
    }
    let mut keys: BTreeMap<Cyclo, i32> = BTreeMap::new();
    for t in terms {
        for k in t.factors.keys() {
            keys.entry(*k).or_insert(i32::MAX);
        }
    }
    for (k, g) in keys.iter_mut() {
        *g = terms.iter().map(|t| t.factors.get(k).copied().unwrap_or(0)).min().unwrap();
    }
    let mut low = terms[0].mono;
    for t in terms {
        for i in 0..MAX_GENS {
            low.0[i] = low.0[i].min(t.mono.0[i]);
        }
    }
    let mut l = BigInt::one();
    for t in terms {
        l = l.lcm(t.scalar.denom());
    }
    let small: HashMap<Cyclo, Vec<(Mono, i64)>> = keys.keys().map(|k| (*k, k.small_terms())).collect();
    let mut total: IntAcc = HashMap::new();
    for t in terms {
        let (shift, _) = t.mono.div(low).split();
        let c = (&t.scalar * BigRational::from_integer(l.clone())).to_integer();
        let mut acc: IntAcc = HashMap::from([(shift, c)]);
        for (k, g) in &keys {
            let e = t.factors.get(k).copied().unwrap_or(0) - g;
            for _ in 0..e {
                acc = mul_small(&acc, &small[k]);
            }
        }
        for (m, c) in acc {
            let e = total.entry(m).or_insert_with(BigInt::zero);
            *e += c;
        }
    }
    total.retain(|_, c| !c.is_zero());
    if total.is_empty() {
        return Coefficient::zero(arity);
    }
    let inv_l = BigRational::new(BigInt::one(), l);
    let mut s = Poly::from_terms(arity, total.into_iter().map(|(m, c)| (m, BigRational::from_integer(c) * &inv_l)));
    for (k, g) in keys.iter_mut() {
        while *g < 0 {
            match s.div_exact(&k.poly()) {
                Some(q) => {
                    s = q;
                    *g += 1;
                }
                None => break,
            }
        }
    }
    let content = s.mono_content();
    for i in 0..MAX_GENS {
        if low.0[i] < 0 {
            let t = (content.exp(i) as i32).min(-low.0[i]);
            if t > 0 {
                s = s.div_mono(Mono::var(i, t as u32));
                low.0[i] += t;
            }
        }
    }
    let (p, n) = low.split();
    let mut num = s.mul_mono(p);
    let mut den = Poly::term(arity, n, BigRational::one());
    for (k, &g) in &keys {
        if g > 0 {
            num = num.mul(&k.poly().pow(g as u32));
        } else if g < 0 {
            den = den.mul(&k.poly().pow((-g) as u32));
        }
    }
    Coefficient::from_coprime(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coefficient {
        Coefficient::parse(s).unwrap()
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(*cyclotomic(1), vec![1, -1]);
        assert_eq!(*cyclotomic(2), vec![1, 1]);
        assert_eq!(*cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn binomial_forms() {
        let mut f = Factored::one();
        f.mul_binomial(LMono::qh(2, 0), 1);
        assert_eq!(f.to_coefficient(), c("1-q^2"));
        let mut g = Factored::one();
        g.mul_binomial(LMono::qh(-1, 1), -1);
        assert_eq!(g.to_coefficient(), c("1/(1-h/q)"));
        let mut k = Factored::one();
        k.mul_binomial(LMono::qh(1, -2), 1);
        k.mul_binomial(LMono::qh(-2, 4), -1);
        assert_eq!(k.to_coefficient(), c("(1-q/h^2)/(1-h^4/q^2)"));
    }

    #[test]
    fn cancellation_is_bookkeeping() {
        let mut f = Factored::one();
        f.mul_binomial(LMono::qh(3, 0), 1);
        f.mul_binomial(LMono::qh(1, 0), -1);
        assert_eq!(f.factors().len(), 1);
        assert_eq!(f.to_coefficient(), c("1+q+q^2"));
    }

    #[test]
    fn sum_reduces() {
        let mut a = Factored::one();
        a.mul_binomial(LMono::qh(0, 1), 1);
        a.mul_binomial(LMono::qh(1, 0), -1);
        let mut b = Factored::one();
        b.mul_binomial(LMono::qh(1, 1), 1);
        b.mul_binomial(LMono::qh(2, 0), -1);
        let s = reduce_sum(&[a.clone(), b.clone()]);
        assert_eq!(s, a.to_coefficient().add(&b.to_coefficient()));
        let z = reduce_sum(&[a.clone(), a.pow(1).mul(&Factored::monomial(BigRational::from_integer((-1).into()), LMono::ONE))]);
        assert!(z.is_zero());
    }

    #[test]
    fn mod_and_rational_evaluation_agree() {
        let mut a = Factored::monomial(BigRational::new(3.into(), 2.into()), LMono::qh(-1, 2));
        a.mul_binomial(LMono::qh(2, -1), 2);
        a.mul_binomial(LMono::qh(0, 3), -1);
        let pt = super::super::EvaluationPoint::sample(2, 5, 0);
        let r = a.eval(&pt.values).unwrap();
        let mut ev = ModEval::new(pt.residues());
        assert_eq!(rat_mod(&r), a.eval_mod(&mut ev));
        assert_eq!(a.to_coefficient().eval(&pt.values), Some(r));
    }
}
