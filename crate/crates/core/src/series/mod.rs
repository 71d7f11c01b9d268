//! Truncated power series in the Kähler variables, q-Pochhammer symbols and
//! the q-binomial function.

mod lazy;

pub use lazy::{lazy_eq_sampled, LazySeries};

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::coeffs::{coeff_eq, default_name, Coefficient, Factored, LMono, Mode, MAX_GENS};
use crate::error::{Error, Result};

/// Exponent vector of `z_1..z_n`; ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct KMonomial(pub Vec<u32>);

impl KMonomial {
    pub fn one(n: usize) -> KMonomial {
        KMonomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> KMonomial {
        let mut e = vec![0; n];
        e[i] = 1;
        KMonomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, o: &KMonomial) -> KMonomial {
        KMonomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> KMonomial {
        KMonomial(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for KMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, e) })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// `coeff · z^monomial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Coefficient,
    pub monomial: KMonomial,
}

impl Term {
    pub fn new(coeff: Coefficient, monomial: KMonomial) -> Term {
        Term { coeff, monomial }
    }
}

/// The Laurent monomial `q^qexp h^hexp ∏ a_k^{aexps[k]}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PochArg {
    pub qexp: i32,
    pub hexp: i32,
    pub aexps: Vec<i32>,
}

impl PochArg {
    pub fn qh(qexp: i32, hexp: i32) -> PochArg {
        PochArg { qexp, hexp, aexps: Vec::new() }
    }

    pub fn to_lmono(&self) -> Result<LMono> {
        if self.aexps.len() + 2 > MAX_GENS {
            return Err(Error::Bound(format!("at most {} framing parameters", MAX_GENS - 2)));
        }
        let mut m = LMono::qh(self.qexp, self.hexp);
        for (k, &e) in self.aexps.iter().enumerate() {
            m.0[k + 2] = e;
        }
        Ok(m)
    }
}

/// A product of q-Pochhammer symbols in factored form.
///
/// Factors `1 - 1` are not stored; `zero_order` counts them, positive in the
/// numerator and negative in the denominator.
#[derive(Clone, Debug, Default)]
pub struct PochProduct {
    pub value: Factored,
    pub zero_order: i32,
}

impl PochProduct {
    pub fn one() -> PochProduct {
        PochProduct::default()
    }

    /// Multiply by `(1 - m)^k`.
    pub fn mul_binomial(&mut self, m: LMono, k: i32) {
        if m.is_one() {
            self.zero_order += k;
        } else {
            self.value.mul_binomial(m, k);
        }
    }

    /// Multiply by `(x)_d^k`.
    pub fn mul_poch(&mut self, x: LMono, d: i64, k: i32) {
        let q = LMono::qh(1, 0);
        if d >= 0 {
            for i in 0..d as i32 {
                self.mul_binomial(x.mul(q.pow(i)), k);
            }
        } else {
            for i in 1..=(-d) as i32 {
                self.mul_binomial(x.mul(q.pow(-i)), -k);
            }
        }
    }
}

/// `(x)_d` with the three-case definition.
pub fn qpoch(x: &PochArg, d: i64) -> Result<Coefficient> {
    let m = x.to_lmono()?;
    let q = LMono::qh(1, 0);
    let mut f = Factored::one();
    if d >= 0 {
        for i in 0..d as i32 {
            let t = m.mul(q.pow(i));
            if t.is_one() {
                return Ok(Coefficient::zero(2));
            }
            f.mul_binomial(t, 1);
        }
    } else {
        for i in 1..=(-d) {
            let t = m.mul(q.pow(-i as i32));
            if t.is_one() {
                return Err(Error::Pole { index: i });
            }
            f.mul_binomial(t, -1);
        }
    }
    Ok(f.to_coefficient())
}

/// `(h)_d / (q)_d` in factored form.
pub fn fbinom_coefficient(d: u32) -> Factored {
    let mut p = PochProduct::one();
    p.mul_poch(LMono::qh(0, 1), d as i64, 1);
    p.mul_poch(LMono::qh(1, 0), d as i64, -1);
    debug_assert_eq!(p.zero_order, 0);
    p.value
}

/// Truncated series: every stored monomial has total degree at most `cap`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    n: usize,
    cap: u32,
    terms: BTreeMap<KMonomial, Coefficient>,
}

impl TruncatedSeries {
    pub fn zero(n: usize, cap: u32) -> TruncatedSeries {
        TruncatedSeries { n, cap, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, cap: u32) -> TruncatedSeries {
        let mut s = Self::zero(n, cap);
        s.add_term(KMonomial::one(n), Coefficient::one(2));
        s
    }

    pub fn from_terms(n: usize, cap: u32, terms: impl IntoIterator<Item = (KMonomial, Coefficient)>) -> TruncatedSeries {
        let mut s = Self::zero(n, cap);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KMonomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &KMonomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Adds `c z^m`; monomials above the cap are dropped.
    pub fn add_term(&mut self, m: KMonomial, c: Coefficient) {
        assert_eq!(m.n(), self.n, "monomial length");
        if m.degree() > self.cap || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_n(o)?;
        let mut r = Self::zero(self.n, self.cap.min(o.cap));
        for (m, c) in self.terms.iter().chain(o.terms.iter()) {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn mul(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_n(o)?;
        let cap = self.cap.min(o.cap);
        let mut r = Self::zero(self.n, cap);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a.degree() + b.degree() <= cap {
                    r.add_term(a.mul(b), x.mul(y));
                }
            }
        }
        Ok(r)
    }

    /// Substitute `z_i -> z_{map[i]}` into a series with `n` variables.
    pub fn embed(&self, n: usize, map: &[usize]) -> TruncatedSeries {
        let mut r = Self::zero(n, self.cap);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            r.add_term(KMonomial(e), c.clone());
        }
        r
    }

    fn check_n(&self, o: &TruncatedSeries) -> Result<()> {
        if self.n != o.n {
            return Err(Error::Arity { left: self.n, right: o.n });
        }
        Ok(())
    }

    pub fn to_json_with(&self, names: &dyn Fn(usize) -> String) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| serde_json::json!({"exps": m.0, "coeff": c.fmt_with(names)}))
            .collect();
        serde_json::json!({"n": self.n, "cap": self.cap, "terms": terms})
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a BTreeMap<KMonomial, Coefficient>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (m, c) in self.0 {
                    seq.serialize_element(&serde_json::json!({"exps": m.0, "coeff": c.fmt_with(&default_name)}))?;
                }
                seq.end()
            }
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("cap", &self.cap)?;
        map.serialize_entry("terms", &Terms(&self.terms))?;
        map.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
}

pub fn series_arith(a: &TruncatedSeries, b: &TruncatedSeries, op: SeriesOp) -> Result<TruncatedSeries> {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Mul => a.mul(b),
    }
}

/// `Σ_d (h)_d/(q)_d (c z^m)^d` up to total degree `cap`.
pub fn fbinom_series(t: &Term, cap: u32) -> Result<TruncatedSeries> {
    let n = t.monomial.n();
    let step = t.monomial.degree();
    if step == 0 {
        return Err(Error::NonAdmissible);
    }
    let mut s = TruncatedSeries::one(n, cap);
    let mut c = Coefficient::one(2);
    let mut d = 1;
    while d * step <= cap {
        c = c.mul(&t.coeff);
        let f = fbinom_coefficient(d).to_coefficient();
        s.add_term(t.monomial.pow(d), f.mul(&c));
        d += 1;
    }
    Ok(s)
}

/// First disagreement found by [`series_eq`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub monomial: KMonomial,
    pub left: Coefficient,
    pub right: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesComparison {
    pub equal: bool,
    pub witness: Option<Witness>,
}

/// Coefficient-wise comparison; reports the lex-least disagreeing monomial.
pub fn series_eq(a: &TruncatedSeries, b: &TruncatedSeries, mode: Mode) -> Result<SeriesComparison> {
    a.check_n(b)?;
    if a.cap != b.cap {
        return Err(Error::Domain(format!("caps differ: {} vs {}", a.cap, b.cap)));
    }
    let mut keys: Vec<&KMonomial> = a.terms.keys().chain(b.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    for m in keys {
        let (x, y) = (a.coeff(m), b.coeff(m));
        if !coeff_eq(&x, &y, mode)? {
            return Ok(SeriesComparison {
                equal: false,
                witness: Some(Witness { monomial: m.clone(), left: x, right: y }),
            });
        }
    }
    Ok(SeriesComparison { equal: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coefficient {
        Coefficient::parse(s).unwrap()
    }

    fn z(n: usize, e: &[u32]) -> KMonomial {
        assert_eq!(e.len(), n);
        KMonomial(e.to_vec())
    }

    #[test]
    fn qpoch_cases() {
        assert!(qpoch(&PochArg::qh(0, 1), 0).unwrap().is_one());
        assert_eq!(qpoch(&PochArg::qh(0, 1), 2).unwrap(), c("(1-h)*(1-h*q)"));
        let neg = qpoch(&PochArg::qh(0, 1), -1).unwrap();
        assert_eq!(neg, c("1/(1-h/q)"));
        // (a;q)_{-n} = (-q/a)^n q^{n(n-1)/2} / (q/a;q)_n
        let other = c("(-q/h)").div(&qpoch(&PochArg::qh(1, -1), 1).unwrap()).unwrap();
        assert_eq!(neg, other);
    }

    #[test]
    fn qpoch_zero_and_pole() {
        assert!(qpoch(&PochArg::qh(-1, 0), 3).unwrap().is_zero());
        assert_eq!(qpoch(&PochArg::qh(2, 0), -3), Err(Error::Pole { index: 2 }));
    }

    #[test]
    fn qpoch_negative_index_identity() {
        for d in 1..5i64 {
            for (qe, he) in [(0, 1), (2, -1), (-1, 3)] {
                let lhs = qpoch(&PochArg::qh(qe, he), -d).unwrap();
                let a = Coefficient::monomial(crate::coeffs::rat_one(), qe as i64, he as i64);
                let pref = Coefficient::q().neg().div(&a).unwrap().pow(d).unwrap();
                let qb = Coefficient::q().pow(d * (d - 1) / 2).unwrap();
                let den = qpoch(&PochArg::qh(1 - qe, -he), d).unwrap();
                assert_eq!(lhs, pref.mul(&qb).div(&den).unwrap(), "d={d} x=q^{qe}h^{he}");
            }
        }
    }

    #[test]
    fn fbinom_two_terms() {
        let f = fbinom_series(&Term::new(Coefficient::one(2), z(1, &[1])), 2).unwrap();
        assert_eq!(f.coeff(&z(1, &[0])), c("1"));
        assert_eq!(f.coeff(&z(1, &[1])), c("(1-h)/(1-q)"));
        assert_eq!(f.coeff(&z(1, &[2])), c("(1-h)*(1-h*q)/((1-q)*(1-q^2))"));
        assert_eq!(fbinom_series(&Term::new(c("q/h"), z(2, &[1, 1])), 0).unwrap(), TruncatedSeries::one(2, 0));
        assert_eq!(fbinom_series(&Term::new(c("q"), z(2, &[0, 0])), 3), Err(Error::NonAdmissible));
    }

    #[test]
    fn arith_examples() {
        let mut a = TruncatedSeries::one(1, 1);
        a.add_term(z(1, &[1]), c("1"));
        let mut b = TruncatedSeries::one(1, 1);
        b.add_term(z(1, &[1]), c("-1"));
        assert_eq!(series_arith(&a, &b, SeriesOp::Mul).unwrap(), TruncatedSeries::one(1, 1));
        assert_eq!(series_arith(&a, &TruncatedSeries::one(1, 1), SeriesOp::Mul).unwrap(), a);
        let f1 = fbinom_series(&Term::new(c("1"), z(2, &[1, 0])), 2).unwrap();
        let f2 = fbinom_series(&Term::new(c("1"), z(2, &[0, 1])), 2).unwrap();
        let p = f1.mul(&f2).unwrap();
        assert_eq!(p.coeff(&z(2, &[1, 1])), c("((1-h)/(1-q))^2"));
        assert_eq!(a.mul(&TruncatedSeries::one(2, 1)), Err(Error::Arity { left: 1, right: 2 }));
    }

    #[test]
    fn eq_reports_witness() {
        let f = fbinom_series(&Term::new(c("1"), z(1, &[1])), 3).unwrap();
        assert!(series_eq(&f, &f, Mode::Exact).unwrap().equal);
        let r = series_eq(&f, &TruncatedSeries::one(1, 3), Mode::Exact).unwrap();
        assert!(!r.equal);
        assert_eq!(r.witness.unwrap().monomial, z(1, &[1]));
    }

    #[test]
    fn json_layout() {
        let f = fbinom_series(&Term::new(c("1"), z(1, &[1])), 1).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["n"], 1);
        assert_eq!(v["cap"], 1);
        assert_eq!(v["terms"][1]["coeff"], "(1-h)/(1-q)");
        assert_eq!(v["terms"][0]["exps"], serde_json::json!([0]));
    }
}
