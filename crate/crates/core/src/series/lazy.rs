//! Series whose coefficients are kept as unevaluated sums of factored terms.
//!
//! Exact coefficients are produced by [`reduce_sum`]; sampled comparison
//! evaluates the sums modulo a prime at the residues of the seeded points.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{fbinom_coefficient, KMonomial, SeriesComparison, TruncatedSeries, Witness};
use crate::coeffs::{combine_like, reduce_sum, EvaluationPoint, Factored, LMono, ModEval, MAX_GENS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LazySeries {
    n: usize,
    cap: u32,
    terms: BTreeMap<KMonomial, Vec<Factored>>,
}

impl LazySeries {
    pub fn zero(n: usize, cap: u32) -> LazySeries {
        LazySeries { n, cap, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, cap: u32) -> LazySeries {
        let mut s = Self::zero(n, cap);
        s.push(KMonomial::one(n), Factored::one());
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn monomials(&self) -> impl Iterator<Item = &KMonomial> {
        self.terms.keys()
    }

    pub fn summands(&self, m: &KMonomial) -> &[Factored] {
        self.terms.get(m).map_or(&[], |v| v.as_slice())
    }

    pub fn term_count(&self) -> usize {
        self.terms.values().map(|v| v.len()).sum()
    }

    pub fn push(&mut self, m: KMonomial, f: Factored) {
        assert_eq!(m.n(), self.n, "monomial length");
        if m.degree() <= self.cap {
            self.terms.entry(m).or_default().push(f);
        }
    }

    pub fn append(&mut self, o: LazySeries) {
        for (m, v) in o.terms {
            if m.degree() <= self.cap {
                self.terms.entry(m).or_default().extend(v);
            }
        }
    }

    /// `F(c z^m)` for a factored constant `c`.
    pub fn fbinom(n: usize, cap: u32, c: &Factored, m: &KMonomial) -> Result<LazySeries> {
        let step = m.degree();
        if step == 0 {
            return Err(Error::NonAdmissible);
        }
        let mut s = Self::one(n, cap);
        let mut d = 1;
        while d * step <= cap {
            s.push(m.pow(d), fbinom_coefficient(d).mul(&c.pow(d as i32)));
            d += 1;
        }
        Ok(s)
    }

    pub fn mul(&self, o: &LazySeries) -> LazySeries {
        assert_eq!(self.n, o.n, "variable count");
        let cap = self.cap.min(o.cap);
        let mut r = Self::zero(self.n, cap);
        for (a, xs) in &self.terms {
            for (b, ys) in &o.terms {
                if a.degree() + b.degree() > cap {
                    continue;
                }
                let slot = r.terms.entry(a.mul(b)).or_default();
                for x in xs {
                    for y in ys {
                        slot.push(x.mul(y));
                    }
                }
            }
        }
        r.compact();
        r
    }

    /// Multiply every summand by a constant.
    pub fn scale(&mut self, c: &Factored) {
        for v in self.terms.values_mut() {
            for f in v.iter_mut() {
                f.mul_assign(c);
            }
        }
    }

    pub fn mul_mono(&mut self, m: LMono) {
        for v in self.terms.values_mut() {
            for f in v.iter_mut() {
                f.mul_mono(m);
            }
        }
    }

    /// Merge summands that differ only by a scalar.
    pub fn compact(&mut self) {
        for v in self.terms.values_mut() {
            *v = combine_like(std::mem::take(v));
        }
        self.terms.retain(|_, v| !v.is_empty());
    }

    /// Substitute `z_i -> z_{map[i]}` into a series with `n` variables.
    pub fn embed(&self, n: usize, map: &[usize]) -> LazySeries {
        let mut r = Self::zero(n, self.cap);
        for (m, v) in &self.terms {
            let mut e = vec![0; n];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            r.terms.entry(KMonomial(e)).or_default().extend(v.iter().cloned());
        }
        r
    }

    pub fn exact_coeff(&self, m: &KMonomial) -> crate::coeffs::Coefficient {
        reduce_sum(self.summands(m))
    }

    /// Reduce every coefficient to canonical form.
    pub fn to_exact(&self) -> TruncatedSeries {
        let items: Vec<(&KMonomial, &Vec<Factored>)> = self.terms.iter().collect();
        let coeffs: Vec<_> = items.par_iter().map(|(m, v)| ((*m).clone(), reduce_sum(v))).collect();
        TruncatedSeries::from_terms(self.n, self.cap, coeffs)
    }

    /// Residues of all coefficients at the `index`-th point for `seed`;
    /// `None` where a denominator vanishes.
    pub fn residues(&self, seed: u64, index: u64) -> BTreeMap<KMonomial, Option<u64>> {
        let pt = EvaluationPoint::sample(MAX_GENS, seed, index);
        let vals = pt.residues();
        let items: Vec<(&KMonomial, &Vec<Factored>)> = self.terms.iter().collect();
        items
            .par_iter()
            .map_init(|| ModEval::new(vals.clone()), |ev, (m, v)| ((*m).clone(), ev.sum(v)))
            .collect()
    }
}

/// Compare two lazy series at `points` seeded evaluation points modulo the
/// prime. A disagreement is reported with exact coefficients.
pub fn lazy_eq_sampled(a: &LazySeries, b: &LazySeries, points: usize, seed: u64) -> Result<SeriesComparison> {
    if a.n != b.n {
        return Err(Error::Arity { left: a.n, right: b.n });
    }
    if points == 0 {
        return Err(Error::Domain("sampled mode needs at least one point".into()));
    }
    let mut keys: Vec<&KMonomial> = a.terms.keys().chain(b.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut bad: Option<KMonomial> = None;
    for k in 0..points as u64 {
        let (ra, rb) = (a.residues(seed, k), b.residues(seed, k));
        for m in &keys {
            let x = ra.get(*m).copied().unwrap_or(Some(0));
            let y = rb.get(*m).copied().unwrap_or(Some(0));
            let (Some(x), Some(y)) = (x, y) else {
                return Err(Error::Degenerate(k as usize + 1));
            };
            if x != y {
                if bad.as_ref().is_none_or(|b| *m < b) {
                    bad = Some((*m).clone());
                }
                break;
            }
        }
    }
    Ok(match bad {
        None => SeriesComparison { equal: true, witness: None },
        Some(m) => {
            let (left, right) = (a.exact_coeff(&m), b.exact_coeff(&m));
            SeriesComparison { equal: false, witness: Some(Witness { monomial: m, left, right }) }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Coefficient;
    use crate::series::{fbinom_series, Term};

    fn z(e: &[u32]) -> KMonomial {
        KMonomial(e.to_vec())
    }

    #[test]
    fn lazy_product_matches_eager() {
        let cap = 4;
        let mut c = Factored::one();
        c.mul_mono(LMono::qh(1, -1));
        let a = LazySeries::fbinom(2, cap, &c, &z(&[1, 0])).unwrap();
        let b = LazySeries::fbinom(2, cap, &Factored::one(), &z(&[1, 1])).unwrap();
        let lazy = a.mul(&b).to_exact();
        let ea = fbinom_series(&Term::new(Coefficient::parse("q/h").unwrap(), z(&[1, 0])), cap).unwrap();
        let eb = fbinom_series(&Term::new(Coefficient::one(2), z(&[1, 1])), cap).unwrap();
        assert_eq!(lazy, ea.mul(&eb).unwrap());
    }

    #[test]
    fn sampled_detects_difference() {
        let a = LazySeries::fbinom(1, 3, &Factored::one(), &z(&[1])).unwrap();
        let b = LazySeries::one(1, 3);
        let r = lazy_eq_sampled(&a, &b, 3, 0).unwrap();
        assert!(!r.equal);
        assert_eq!(r.witness.unwrap().monomial, z(&[1]));
        assert!(lazy_eq_sampled(&a, &a.clone(), 3, 0).unwrap().equal);
    }
}
