//! Partitions, box statistics and interlacing.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Weakly decreasing positive parts; `part(i) = 0` beyond the length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Partition {
        Partition::default()
    }

    /// Trailing zeros are dropped; anything else out of order is an error.
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("{:?} is not weakly decreasing", parts)));
        }
        Ok(Partition::trimmed(parts))
    }

    pub(crate) fn trimmed(mut parts: Vec<u32>) -> Partition {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// `(a^k)`.
    pub fn rect(a: u32, k: usize) -> Partition {
        Partition::trimmed(vec![a; k])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// 1-based part, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return u32::MAX;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(1);
        Partition::trimmed((1..=first).map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    pub fn contains_box(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && j as u32 <= self.part(i)
    }

    /// Boxes `(i, j)` row by row, 1-based.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (1..=p as usize).map(move |j| (i + 1, j)))
    }

    /// `(a(□), l(□)) = (λ_i − j, λ'_j − i)`.
    pub fn box_stats(&self, i: usize, j: usize) -> Result<(u32, u32)> {
        if !self.contains_box(i, j) {
            return Err(Error::Domain(format!("box ({}, {}) is not in {}", i, j, self)));
        }
        let leg = self.parts.iter().filter(|&&p| p as usize >= j).count() - i;
        Ok((self.part(i) - j as u32, leg as u32))
    }

    /// `self ≻ mu`: `λ_1 ≥ μ_1 ≥ λ_2 ≥ μ_2 ≥ …`.
    pub fn interlaces_above(&self, mu: &Partition) -> bool {
        let k = self.len().max(mu.len()) + 1;
        (1..=k).all(|i| self.part(i) >= mu.part(i) && mu.part(i) >= self.part(i + 1))
    }

    /// Partitions `μ` with `self ≻ μ` and at most `max_len` parts.
    pub fn strips_below(&self, max_len: usize) -> Vec<Partition> {
        let mut out = vec![Vec::new()];
        for i in 1..=self.len() {
            let (lo, hi) = (self.part(i + 1), self.part(i));
            out = out.into_iter().flat_map(|r: Vec<u32>| (lo..=hi).map(move |x| [r.clone(), vec![x]].concat())).collect();
        }
        out.into_iter().map(Partition::trimmed).filter(|p| p.len() <= max_len).collect()
    }

    /// Partitions `λ` with `λ ≻ self`, at most `max_len` parts and `|λ| ≤ max_size`.
    pub fn strips_above(&self, max_len: usize, max_size: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let k = (self.len() + 1).min(max_len);
        fn rec(mu: &Partition, i: usize, k: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if i > k {
                out.push(Partition::trimmed(cur.clone()));
                return;
            }
            let lo = mu.part(i);
            let hi = if i == 1 { lo as i64 + left } else { mu.part(i - 1) as i64 };
            let mut x = lo as i64;
            while x <= hi && x - lo as i64 <= left {
                cur.push(x as u32);
                rec(mu, i + 1, k, left - (x - lo as i64), cur, out);
                cur.pop();
                x += 1;
            }
        }
        if max_size >= self.size() && self.len() <= max_len {
            rec(self, 1, k, (max_size - self.size()) as i64, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Conjugate has only even parts, i.e. every part occurs an even number of times.
    pub fn has_even_conjugate(&self) -> bool {
        self.conjugate().parts.iter().all(|p| p % 2 == 0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `k`, in decreasing lex order.
pub fn partitions_of(k: u32) -> Vec<Partition> {
    partitions_bounded(k, usize::MAX).into_iter().filter(|p| p.size() == k).collect()
}

/// All partitions with size at most `max_size` and at most `max_len` parts,
/// each list in decreasing lex order, sizes ascending.
pub fn partitions_bounded(max_size: u32, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for k in 0..=max_size {
        fn rec(left: u32, max: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if left == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            if len == 0 {
                return;
            }
            for p in (1..=left.min(max)).rev() {
                cur.push(p);
                rec(left - p, p, len - 1, cur, out);
                cur.pop();
            }
        }
        rec(k, k, max_len, &mut Vec::new(), &mut out);
    }
    out
}

/// `μ ⊴ λ` in dominance order (same size assumed).
pub fn dominated_by(mu: &Partition, lam: &Partition) -> bool {
    let (mut a, mut b) = (0u32, 0u32);
    for i in 1..=mu.len().max(lam.len()) {
        a += mu.part(i);
        b += lam.part(i);
        if a > b {
            return false;
        }
    }
    true
}

/// The partition `e(λ)` with even conjugate and `λ ≺ e(λ)`: each odd-indexed
/// part is doubled.
pub fn e_closure(lam: &Partition) -> Partition {
    let mut out = Vec::with_capacity(lam.len() + 1);
    for k in (0..lam.len()).step_by(2) {
        out.push(lam.parts[k]);
        out.push(lam.parts[k]);
    }
    Partition::trimmed(out)
}

/// Every `μ ≻ λ` with even conjugate, by search.
pub fn e_closure_candidates(lam: &Partition) -> Vec<Partition> {
    let bound = lam.size() + lam.part(1);
    lam.strips_above(lam.len() + 1, bound).into_iter().filter(|m| m.has_even_conjugate()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &[u32]) -> Partition {
        Partition::new(x.to_vec()).unwrap()
    }

    #[test]
    fn box_examples() {
        assert_eq!(p(&[1]).box_stats(1, 1).unwrap(), (0, 0));
        assert_eq!(p(&[3, 2]).box_stats(1, 1).unwrap(), (2, 1));
        assert_eq!(p(&[3, 2]).box_stats(2, 2).unwrap(), (0, 0));
        assert!(p(&[3, 2]).box_stats(2, 3).is_err());
        assert_eq!(p(&[3, 2]).conjugate(), p(&[2, 2, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[2, 0, 0]).len(), 1);
    }

    #[test]
    fn enumeration() {
        let counts: Vec<usize> = (0..=10).map(|k| partitions_of(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions_bounded(4, 2).len(), 1 + 1 + 2 + 2 + 3);
    }

    #[test]
    fn strips() {
        let lam = p(&[3, 1]);
        for mu in lam.strips_below(5) {
            assert!(lam.interlaces_above(&mu));
        }
        assert_eq!(lam.strips_below(5).len(), 3 * 2);
        for big in p(&[2, 1]).strips_above(3, 6) {
            assert!(big.interlaces_above(&p(&[2, 1])), "{big}");
            assert!(big.size() <= 6);
        }
        let brute: Vec<Partition> = partitions_bounded(6, 3).into_iter().filter(|b| b.interlaces_above(&p(&[2, 1]))).collect();
        let mut got = p(&[2, 1]).strips_above(3, 6);
        got.sort();
        let mut want = brute;
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn closure_examples() {
        assert_eq!(e_closure(&Partition::empty()), Partition::empty());
        assert_eq!(e_closure(&p(&[2, 1])), p(&[2, 2]));
        assert_eq!(e_closure(&p(&[3])), p(&[3, 3]));
        assert_eq!(e_closure(&p(&[1])), p(&[1, 1]));
    }

    #[test]
    fn closure_matches_search() {
        for lam in partitions_bounded(10, usize::MAX) {
            assert_eq!(e_closure_candidates(&lam), vec![e_closure(&lam)], "{lam}");
        }
    }
}
