//! ν-tuple expansions of the fundamental-framing vertex for
//! `v = (2^{n−2}, 1, 1)` and `v = (1, 2^{n−3}, 1, 1)`, matched against
//! labelings of the fundamental poset.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::boxes::{phi_factored, psi_factored};
use super::partition::Partition;
use crate::coeffs::{Factored, LMono, Mode};
use crate::error::{domain, Result};
use crate::posets::FixedPoint;
use crate::roots::{eps_to_simple, kahler_exponents, kahler_factored};
use crate::series::{KMonomial, LazySeries};
use crate::vertex::{compare_lazy, summand, vertex_labelings, vertex_lazy, Descendant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NuVariant {
    /// `v = (2^{n−2}, 1, 1)`.
    Twos,
    /// `v = (1, 2^{n−3}, 1, 1)`.
    OneTwos,
}

impl NuVariant {
    pub fn dims(self, n: usize) -> Vec<u32> {
        let mut v = match self {
            NuVariant::Twos => vec![2; n - 2],
            NuVariant::OneTwos => {
                let mut v = vec![1];
                v.extend(std::iter::repeat_n(2, n - 3));
                v
            }
        };
        v.extend([1, 1]);
        v
    }

    /// Length of the rectangle `(a^k)` below `ν^0`.
    fn k(self, n: usize) -> usize {
        match self {
            NuVariant::Twos => n - 2,
            NuVariant::OneTwos => n - 3,
        }
    }

    /// The `x` index carrying `ν^0 → ν^1`.
    fn offset(self) -> usize {
        match self {
            NuVariant::Twos => 2,
            NuVariant::OneTwos => 3,
        }
    }

    /// The distinguished variable: `x_1` or `x_2`.
    fn target(self) -> usize {
        match self {
            NuVariant::Twos => 1,
            NuVariant::OneTwos => 2,
        }
    }
}

/// `ν^0 ≻ ν^1 ≻ … ≻ ν^s = ∅` with `l(ν^i) ≤ s − i`, together with `a`, and
/// `b` for the second variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuTuple {
    pub chain: Vec<Partition>,
    pub a: u32,
    pub b: Option<u32>,
}

impl NuTuple {
    pub fn validate(&self, n: usize, variant: NuVariant) -> Result<()> {
        let s = self.chain.len().wrapping_sub(1);
        if s != n - variant.offset() + 1 || !self.chain[s].is_empty() {
            return domain("the ν chain must end in ∅ after n − offset + 1 steps");
        }
        for (i, nu) in self.chain.iter().enumerate() {
            if nu.len() > s - i {
                return domain(format!("l(ν^{}) = {} exceeds {}", i, nu.len(), s - i));
            }
            if i > 0 && !self.chain[i - 1].interlaces_above(nu) {
                return domain(format!("ν^{} does not interlace above ν^{}", i - 1, i));
            }
        }
        let rect = Partition::rect(self.a, variant.k(n));
        if !self.chain[0].interlaces_above(&rect) {
            return domain("ν^0 must interlace above (a^k)");
        }
        let m = self.chain[0].size() - variant.k(n) as u32 * self.a;
        match (variant, self.b) {
            (NuVariant::Twos, None) => Ok(()),
            (NuVariant::OneTwos, Some(b)) if b >= m => Ok(()),
            _ => domain("b is required for the second variant, with b ≥ |ν^0| − k a"),
        }
    }

    /// Weight and `x`-exponents, `x_1..x_n`.
    pub fn weight(&self, n: usize, variant: NuVariant) -> Result<(Factored, Vec<i32>)> {
        self.validate(n, variant)?;
        let k = variant.k(n);
        let nu0 = &self.chain[0];
        let a = self.a as i32;
        let mut x = vec![0i32; n + 1];
        let mut coef = phi_factored(nu0, &Partition::rect(self.a, k))?;
        for xi in x.iter_mut().skip(variant.offset()) {
            *xi -= a;
        }
        // (h)_a / (q)_a
        for i in 0..a {
            coef.mul_binomial(LMono::qh(i, 1), 1);
            coef.mul_binomial(LMono::qh(i + 1, 0), -1);
        }
        x[variant.target()] += a;
        let m = nu0.size() as i32 - k as i32 * a;
        match self.b {
            None => x[1] += m,
            Some(b) => {
                x[2] += b as i32;
                x[1] += b as i32 - m;
                coef.mul_assign(&phi_factored(&Partition::rect(b, 1), &Partition::rect(m as u32, 1))?);
            }
        }
        for i in 0..self.chain.len() - 1 {
            coef.mul_assign(&psi_factored(&self.chain[i], &self.chain[i + 1])?);
            x[i + variant.offset()] += self.chain[i].size() as i32 - self.chain[i + 1].size() as i32;
        }
        Ok((coef, x[1..].to_vec()))
    }

    /// The labeling of the fundamental poset, keyed by element id; `None`
    /// when a value would be negative.
    pub fn labeling(&self, n: usize, variant: NuVariant) -> Option<BTreeMap<(usize, usize), u32>> {
        let s = self.chain.len() - 1;
        let padded: Vec<Vec<i64>> =
            (0..=s).map(|i| (1..=(s - i).max(self.chain[i].len())).map(|j| self.chain[i].part(j) as i64).collect()).collect();
        let first = |i: usize| padded[i][0];
        let last = |i: usize| *padded[i].last().unwrap();
        let mut pi: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        let a = self.a as i64;
        match variant {
            NuVariant::Twos => {
                let t = first(0) + last(0);
                pi.insert((1, 1), last(0));
                pi.insert((1, 2), first(0));
                for i in 2..=n - 2 {
                    pi.insert((i, 1), t - first(i - 1));
                    pi.insert((i, 2), t - last(i - 1));
                }
                pi.insert((n - 1, 1), t - first(n - 2));
                pi.insert((n, 1), t - a);
            }
            NuVariant::OneTwos => {
                let b = self.b? as i64;
                let ab = a + b;
                pi.insert((1, 1), ab - first(0) - last(0));
                pi.insert((2, 1), ab - first(0));
                pi.insert((2, 2), ab - last(0));
                for i in 3..=n - 2 {
                    pi.insert((i, 1), ab - first(i - 2));
                    pi.insert((i, 2), ab - last(i - 2));
                }
                pi.insert((n - 1, 1), ab - first(n - 3));
                pi.insert((n, 1), b);
            }
        }
        pi.into_iter().map(|(k, x)| u32::try_from(x).ok().map(|x| (k, x))).collect()
    }
}

/// Chains `top = ν^0 ≻ ν^1 ≻ … ≻ ν^steps` with `l(ν^i) ≤ steps − i`.
fn chains(top: &Partition, steps: usize) -> Vec<Vec<Partition>> {
    let mut out = Vec::new();
    fn rec(ch: &mut Vec<Partition>, steps: usize, out: &mut Vec<Vec<Partition>>) {
        let i = ch.len();
        if i == steps + 1 {
            out.push(ch.clone());
            return;
        }
        for mu in ch.last().unwrap().strips_below(steps - i) {
            ch.push(mu);
            rec(ch, steps, out);
            ch.pop();
        }
    }
    rec(&mut vec![top.clone()], steps, &mut out);
    out
}

/// Every tuple with `a, ν^0_1 ≤ 2D` and `b ≤ 6D`; those reaching total
/// degree `≤ D` are a superset of what the bijection needs.
pub fn nu_tuples(n: usize, variant: NuVariant, cap: u32) -> Vec<NuTuple> {
    let big = 2 * cap;
    let k = variant.k(n);
    let steps = n - variant.offset() + 1;
    let mut out = Vec::new();
    for a in 0..=big {
        for n1 in a..=big {
            for n2 in 0..=a {
                let mut parts = vec![n1];
                parts.extend(std::iter::repeat_n(a, k - 1));
                parts.push(n2);
                let nu0 = Partition::new(parts).expect("weakly decreasing by construction");
                if nu0.len() > steps {
                    continue;
                }
                for chain in chains(&nu0, steps) {
                    match variant {
                        NuVariant::Twos => out.push(NuTuple { chain, a, b: None }),
                        NuVariant::OneTwos => {
                            let m = nu0.size() - k as u32 * a;
                            for b in m..=3 * big {
                                out.push(NuTuple { chain: chain.clone(), a, b: Some(b) });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct NuReport {
    pub n: usize,
    pub variant: NuVariant,
    pub v: Vec<u32>,
    pub cap: u32,
    pub tuples: usize,
    /// Labelings of total degree `≤ D`.
    pub labelings: usize,
    /// Tuples whose labeling is invalid, repeated, or whose terms differ.
    pub bad: usize,
    pub first_bad: Option<String>,
    pub surjective: bool,
    pub sum_equals_vertex: bool,
    /// Number of `F` factors in the summed form.
    pub factors: usize,
    pub sum_equals_product: bool,
    pub passed: bool,
}

/// The roots of the summed form in `ε` coordinates.
pub fn summed_roots(n: usize, variant: NuVariant) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let t = variant.target();
    for i in 1..=n {
        if i == t {
            continue;
        }
        for s in [1, -1] {
            if s == -1 && i < t {
                continue;
            }
            let mut r = vec![0i32; n];
            r[t - 1] = 1;
            r[i - 1] = s;
            out.push(r);
        }
    }
    out
}

/// Term-by-term match of the ν-tuple expansion against localization, the
/// bijection onto labelings, and the summed `F` product.
pub fn fundamental_nu_check(n: usize, variant: NuVariant, cap: u32, mode: Mode) -> Result<NuReport> {
    if !(4..=6).contains(&n) {
        return domain(format!("fundamental_nu_check supports 4 <= n <= 6, got {}", n));
    }
    let v = variant.dims(n);
    let p = FixedPoint::single(n, 1, &v)?;
    let lp = p.local();
    let mut w = vec![0u32; n];
    w[0] = 1;
    let kahler = kahler_exponents(n, &v);
    let index: BTreeMap<(usize, usize), usize> = lp.elements.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
    let le = lp.order_matrix();
    let mut sum = LazySeries::zero(n, cap);
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let (mut bad, mut first_bad, mut count) = (0usize, None, 0usize);
    let mut flag = |msg: String, bad: &mut usize| {
        *bad += 1;
        first_bad.get_or_insert(msg);
    };
    for t in nu_tuples(n, variant, cap) {
        let (coef, x) = t.weight(n, variant)?;
        let Some(c) = eps_to_simple(n, &x) else {
            flag(format!("{:?}: exponent off the root lattice", x), &mut bad);
            continue;
        };
        if c.c.iter().map(|&y| y as i64).sum::<i64>() > cap as i64 {
            continue;
        }
        count += 1;
        if c.c.iter().any(|&y| y < 0) {
            flag(format!("{:?}: negative simple exponent", c.c), &mut bad);
            continue;
        }
        let key = KMonomial(c.c.iter().map(|&y| y as u32).collect());
        let e: i64 = kahler.iter().zip(&c.c).map(|(p, &q)| p * q as i64).sum();
        let mut val = coef;
        val.mul_mono(LMono::qh(e as i32, -e as i32));
        sum.push(key.clone(), val.clone());
        let Some(lab) = t.labeling(n, variant) else {
            flag(format!("{:?}: negative label", t), &mut bad);
            continue;
        };
        let mut pi = vec![0u32; lp.len()];
        let mut complete = lab.len() == lp.len();
        for (id, &x) in &lab {
            match index.get(id) {
                Some(&i) => pi[i] = x,
                None => complete = false,
            }
        }
        let monotone = (0..pi.len()).all(|i| (0..pi.len()).all(|j| !le[i][j] || pi[i] <= pi[j]));
        if !complete || !monotone || !seen.insert(pi.clone()) {
            flag(format!("{:?}: labeling {:?} invalid or repeated", t, lab), &mut bad);
            continue;
        }
        match summand(&lp, &v, &w, &Descendant::trivial(), &pi)? {
            Some((m, f)) if m == key && f == val => {}
            other => flag(format!("{:?}: localization term {:?}", t, other.map(|(m, _)| m.0)), &mut bad),
        }
    }
    sum.compact();
    let all: BTreeSet<Vec<u32>> = vertex_labelings(&lp, cap).into_iter().collect();
    let surjective = all == seen;
    let vx = vertex_lazy(&p, &Descendant::trivial(), cap)?;
    let sum_equals_vertex = compare_lazy(&sum, &vx, mode)?.0.equal;
    let roots = summed_roots(n, variant);
    let mut prod = LazySeries::one(n, cap);
    for r in &roots {
        let alpha = eps_to_simple(n, r).expect("ε_i ± ε_j is a root");
        let (c, m) = kahler_factored(n, &v, &alpha);
        prod = prod.mul(&LazySeries::fbinom(n, cap, &c, &m)?);
    }
    let sum_equals_product = compare_lazy(&sum, &prod, mode)?.0.equal;
    let passed = bad == 0 && surjective && sum_equals_vertex && sum_equals_product;
    Ok(NuReport {
        n,
        variant,
        v,
        cap,
        tuples: count,
        labelings: all.len(),
        bad,
        first_bad,
        surjective,
        sum_equals_vertex,
        factors: roots.len(),
        sum_equals_product,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_tuple() {
        for (variant, b) in [(NuVariant::Twos, None), (NuVariant::OneTwos, Some(0))] {
            let steps = 5 - variant.offset() + 1;
            let t = NuTuple { chain: vec![Partition::empty(); steps + 1], a: 0, b };
            let (c, x) = t.weight(5, variant).unwrap();
            assert!(c.is_one());
            assert_eq!(x, vec![0; 5]);
            assert!(t.labeling(5, variant).unwrap().values().all(|&x| x == 0));
        }
        let t = NuTuple { chain: vec![Partition::empty(); 4], a: 0, b: Some(0) };
        assert!(t.validate(5, NuVariant::Twos).is_err());
    }

    #[test]
    fn factor_counts() {
        assert_eq!(summed_roots(5, NuVariant::Twos).len(), 8);
        assert_eq!(summed_roots(5, NuVariant::OneTwos).len(), 7);
    }

    #[test]
    fn d4_both_variants() {
        for variant in [NuVariant::Twos, NuVariant::OneTwos] {
            let r = fundamental_nu_check(4, variant, 2, Mode::Exact).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
