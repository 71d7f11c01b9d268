//! Interlacing tuples for spin framings: their weights, and the term-by-term
//! identification with the localization summands.

use rayon::prelude::*;
use serde::Serialize;

use super::boxes::{b_el_factored, phi_factored, psi_factored};
use super::partition::{e_closure, Partition};
use crate::coeffs::{Factored, LMono, Mode};
use crate::error::{domain, Error, Result};
use crate::posets::{valid_dims, FixedPoint};
use crate::roots::{eps_to_simple, kahler_exponents, kahler_factored};
use crate::series::{KMonomial, LazySeries, PochProduct};
use crate::vertex::{b_vector, compare_lazy, vertex_lazy, Descendant};

/// `l_0..l_n` and `τ(1)..τ(n)` for a spin dimension vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignData {
    pub l: Vec<u32>,
    pub tau: Vec<i32>,
}

impl SignData {
    /// `τ(i)`, 1-based.
    pub fn tau(&self, i: usize) -> i32 {
        self.tau[i - 1]
    }
}

/// `l = (0, v_1, …, v_{n−2}, v_{n−1} + v_n, 0)`, `τ(i) = (−1)^{l_i − l_{i−1} − 1}`.
pub fn tau_sign(n: usize, v: &[u32]) -> Result<SignData> {
    if !valid_dims(n, n)?.iter().any(|x| x == v) {
        return domain(format!("v = {:?} is not a valid spin dimension vector for D{}", v, n));
    }
    let mut l = vec![0u32];
    l.extend(&v[..n - 2]);
    l.push(v[n - 2] + v[n - 1]);
    l.push(0);
    let tau = (1..=n).map(|i| if (l[i] as i64 - l[i - 1] as i64 - 1).rem_euclid(2) == 0 { 1 } else { -1 }).collect();
    Ok(SignData { l, tau })
}

/// `λ^0 = ∅, λ^1, …, λ^{n−1}` interlacing according to the signs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterlacingTuple {
    pub lams: Vec<Partition>,
    pub sign: SignData,
}

impl InterlacingTuple {
    pub fn n(&self) -> usize {
        self.sign.tau.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.lams.len() != n || !self.lams[0].is_empty() {
            return domain("an interlacing tuple has λ^0 = ∅ and n − 1 further partitions");
        }
        for i in 1..n {
            let (cur, prev) = (&self.lams[i], &self.lams[i - 1]);
            if cur.len() > self.sign.l[i] as usize {
                return domain(format!("l(λ^{}) = {} exceeds l_{} = {}", i, cur.len(), i, self.sign.l[i]));
            }
            let ok = if self.sign.tau(i) == 1 { cur.interlaces_above(prev) } else { prev.interlaces_above(cur) };
            if !ok {
                return domain(format!("λ^{} and λ^{} do not interlace as τ({}) requires", i, i - 1, i));
            }
        }
        Ok(())
    }

    pub fn total_size(&self) -> u32 {
        self.lams.iter().map(Partition::size).sum()
    }
}

/// All tuples with `Σ_i |λ^i| ≤ cap`.
pub fn interlacing_tuples(sign: &SignData, cap: u32) -> Vec<InterlacingTuple> {
    let n = sign.tau.len();
    let mut partial: Vec<(Vec<Partition>, u32)> = vec![(vec![Partition::empty()], 0)];
    for i in 1..n {
        let max_len = sign.l[i] as usize;
        let mut next = Vec::new();
        for (t, used) in partial {
            let prev = t.last().unwrap();
            let cands = if sign.tau(i) == 1 { prev.strips_above(max_len, cap - used) } else { prev.strips_below(max_len) };
            for lam in cands {
                let s = used + lam.size();
                if s <= cap {
                    let mut t2 = t.clone();
                    t2.push(lam);
                    next.push((t2, s));
                }
            }
        }
        partial = next;
    }
    partial.into_iter().map(|(lams, _)| InterlacingTuple { lams, sign: sign.clone() }).collect()
}

/// Weight of a tuple with every `x_i` a single variable: the `ψ`, `φ` and
/// `b^{el}` factors, and the exponents of `x_1..x_n`.
pub fn halfspace_weight(t: &InterlacingTuple) -> Result<(Factored, Vec<i32>)> {
    t.validate()?;
    let n = t.n();
    let mut coef = Factored::one();
    let mut x = vec![0i32; n];
    for i in 1..n {
        let (cur, prev) = (&t.lams[i], &t.lams[i - 1]);
        if t.sign.tau(i) == 1 {
            coef.mul_assign(&psi_factored(cur, prev)?);
            x[i - 1] += cur.size() as i32 - prev.size() as i32;
        } else {
            coef.mul_assign(&phi_factored(prev, cur)?);
            x[i - 1] += prev.size() as i32 - cur.size() as i32;
        }
    }
    let last = &t.lams[n - 1];
    let e = e_closure(last);
    coef.mul_assign(&b_el_factored(&e));
    coef.mul_assign(&psi_factored(&e, last)?);
    x[n - 1] += e.size() as i32 - last.size() as i32;
    Ok((coef, x))
}

/// `(q^a h^b)_m` into a running product.
fn poch(p: &mut PochProduct, a: i32, b: i32, m: i64, k: i32) {
    p.mul_poch(LMono::qh(a, b), m, k);
}

/// `α · ∏β · ∏γ · (q/h)^N` and the degree vector, from the padded parts.
fn abg(n: usize, v: &[u32], t: &InterlacingTuple) -> (PochProduct, Vec<u32>) {
    let l = &t.sign.l;
    let padded: Vec<Vec<i64>> = (0..n).map(|i| (1..=l[i] as usize).map(|j| t.lams[i].part(j) as i64).collect()).collect();
    let mut p = PochProduct::one();
    let ln = l[n - 1] as i32;
    for j in 1..=ln {
        if (ln - j) % 2 == 0 {
            let m = padded[n - 1][j as usize - 1];
            poch(&mut p, 0, ln - j + 1, m, 1);
            poch(&mut p, 1, ln - j, m, -1);
        }
    }
    for i in 1..n - 1 {
        for j in 1..=l[i] as i32 {
            for k in 1..=l[i + 1] as i32 {
                let m = padded[i + 1][k as usize - 1] - padded[i][j as usize - 1];
                let hh = l[i + 1] as i32 - l[i] as i32 - k + j;
                poch(&mut p, 0, hh, m, 1);
                poch(&mut p, 1, hh - 1, m, -1);
            }
        }
    }
    for i in 1..n {
        for j in 1..=l[i] as i32 {
            for k in 1..=l[i] as i32 {
                if i == n - 1 && (j - k) % 2 != 0 {
                    continue;
                }
                let m = padded[i][k as usize - 1] - padded[i][j as usize - 1];
                poch(&mut p, 1, j - k, m, 1);
                poch(&mut p, 0, j - k + 1, m, -1);
            }
        }
    }
    let mut deg: Vec<u32> = (1..n - 1).map(|i| t.lams[i].size()).collect();
    let lam = &padded[n - 1];
    let from_top = |start: i32| (1..=start).rev().step_by(2).map(|j| lam[j as usize - 1] as u32).sum::<u32>();
    deg.push(from_top(ln - 1));
    deg.push(from_top(ln));
    let mut w = vec![0u32; n];
    w[n - 1] = 1;
    let big_n: i64 = b_vector(n, v, &w).iter().zip(&deg).map(|(b, &d)| b * d as i64).sum();
    p.value.mul_mono(LMono::qh(big_n as i32, -big_n as i32));
    (p, deg)
}

#[derive(Clone, Debug, Serialize)]
pub struct HalfspaceReport {
    pub n: usize,
    pub v: Vec<u32>,
    pub cap: u32,
    pub sign: SignData,
    pub tuples: usize,
    /// Tuples whose root exponent has a negative simple coordinate.
    pub negative: usize,
    pub term_mismatches: usize,
    pub first_mismatch: Option<String>,
    pub sum_equals_vertex: bool,
    pub sum_equals_product: bool,
    pub passed: bool,
}

/// Every tuple's weight against `α ∏β ∏γ (q/h)^N z^λ` under
/// `x_i = e^{τ(i) ε_i}`, and the summed weights against both the vertex and
/// `∏_{i<j, τ(i)=1} F(x_i x_j)`.
pub fn lhs_identify_check(n: usize, v: &[u32], cap: u32, mode: Mode) -> Result<HalfspaceReport> {
    let sign = tau_sign(n, v)?;
    let tuples = interlacing_tuples(&sign, cap);
    let a = kahler_exponents(n, v);
    let results: Vec<Result<(Option<(KMonomial, Factored)>, Option<String>)>> = tuples
        .par_iter()
        .map(|t| {
            let (coef, x) = halfspace_weight(t)?;
            let beta: Vec<i32> = (0..n).map(|i| sign.tau[i] * x[i]).collect();
            let c = eps_to_simple(n, &beta).ok_or_else(|| Error::Invariant(format!("x-exponent {:?} is off the root lattice", beta)))?;
            if c.c.iter().any(|&x| x < 0) {
                return Ok((None, Some(format!("negative simple exponent {:?}", c.c))));
            }
            let e: i64 = a.iter().zip(&c.c).map(|(x, &y)| x * y as i64).sum();
            let mut val = coef;
            val.mul_mono(LMono::qh(e as i32, -e as i32));
            let key = KMonomial(c.c.iter().map(|&x| x as u32).collect());
            let (p, deg) = abg(n, v, t);
            let bad = if p.zero_order != 0 {
                Some(format!("{:?}: zero order {}", t.lams, p.zero_order))
            } else if deg != key.0 || p.value != val {
                Some(format!("{:?}: degree {:?} vs {:?}", t.lams.iter().map(|l| l.to_string()).collect::<Vec<_>>(), deg, key.0))
            } else {
                None
            };
            Ok((Some((key, val)), bad))
        })
        .collect();
    let mut sum = LazySeries::zero(n, cap);
    let (mut negative, mut mismatches, mut first) = (0, 0, None);
    for r in results {
        let (term, bad) = r?;
        let kept = term.is_some();
        match term {
            Some((k, f)) => sum.push(k, f),
            None => negative += 1,
        }
        if let Some(b) = bad {
            if kept {
                mismatches += 1;
            }
            first.get_or_insert(b);
        }
    }
    sum.compact();
    let vx = vertex_lazy(&FixedPoint::single(n, n, v)?, &Descendant::trivial(), cap)?;
    let sum_equals_vertex = compare_lazy(&sum, &vx, mode)?.0.equal;
    let mut prod = LazySeries::one(n, cap);
    for i in 1..=n {
        for j in i + 1..=n {
            if sign.tau(i) != 1 {
                continue;
            }
            let mut beta = vec![0i32; n];
            beta[i - 1] = 1;
            beta[j - 1] = sign.tau(j);
            let alpha = eps_to_simple(n, &beta).expect("ε_i ± ε_j is a root");
            let (c, m) = kahler_factored(n, v, &alpha);
            prod = prod.mul(&LazySeries::fbinom(n, cap, &c, &m)?);
        }
    }
    let sum_equals_product = compare_lazy(&sum, &prod, mode)?.0.equal;
    let passed = negative == 0 && mismatches == 0 && sum_equals_vertex && sum_equals_product;
    Ok(HalfspaceReport {
        n,
        v: v.to_vec(),
        cap,
        sign,
        tuples: tuples.len(),
        negative,
        term_mismatches: mismatches,
        first_mismatch: first,
        sum_equals_vertex,
        sum_equals_product,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &[u32]) -> Partition {
        Partition::new(x.to_vec()).unwrap()
    }

    #[test]
    fn signs() {
        let s = tau_sign(4, &[1, 2, 1, 1]).unwrap();
        assert_eq!(s.l, vec![0, 1, 2, 2, 0]);
        assert_eq!(s.tau, vec![1, 1, -1, -1]);
        let s = tau_sign(5, &[0, 0, 0, 0, 1]).unwrap();
        assert_eq!(s.tau(1), -1);
        for v in valid_dims(5, 5).unwrap() {
            let s = tau_sign(5, &v).unwrap();
            assert_eq!(s.tau(5), if s.l[4] % 2 == 1 { 1 } else { -1 });
        }
        assert!(tau_sign(4, &[2, 2, 1, 1]).is_err());
    }

    #[test]
    fn weights() {
        let s = tau_sign(4, &[1, 2, 1, 1]).unwrap();
        let empty = InterlacingTuple { lams: vec![Partition::empty(); 4], sign: s.clone() };
        let (c, x) = halfspace_weight(&empty).unwrap();
        assert!(c.is_one());
        assert_eq!(x, vec![0; 4]);
        // λ^1 = λ^2 = (1), λ^3 = (1): only the ℰ factor and x_1 survive
        let t = InterlacingTuple { lams: vec![Partition::empty(), p(&[1]), p(&[1]), p(&[1])], sign: s.clone() };
        let (c, x) = halfspace_weight(&t).unwrap();
        let e = e_closure(&p(&[1]));
        assert_eq!(e, p(&[1, 1]));
        let want = b_el_factored(&e).mul(&psi_factored(&e, &p(&[1])).unwrap());
        assert_eq!(c, want);
        assert_eq!(x, vec![1, 0, 0, 1]);
        let bad = InterlacingTuple { lams: vec![Partition::empty(), p(&[2]), p(&[1]), p(&[1])], sign: s };
        assert!(halfspace_weight(&bad).is_err());
    }

    #[test]
    fn d4_identification() {
        let r = lhs_identify_check(4, &[1, 2, 1, 1], 2, Mode::Exact).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.tuples > 1);
    }
}
