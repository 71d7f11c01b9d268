//! Root data of type D_n in doubled ε-coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::coeffs::{Factored, LMono};
use crate::error::{Error, Result};
use crate::series::{KMonomial, Term};

/// Edges `(o(e), i(e))`, 1-based: `i -> i+1` for `i <= n-2` and `n-2 -> n`.
pub fn edges(n: usize) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = (1..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if n >= 3 {
        e.push((n - 2, n));
    }
    e
}

/// Twice the ε-coordinates of a weight.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct RootVector {
    pub coords: Vec<i32>,
}

impl RootVector {
    pub fn zero(n: usize) -> RootVector {
        RootVector { coords: vec![0; n] }
    }

    pub fn add(&self, o: &RootVector) -> RootVector {
        RootVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: i32) -> RootVector {
        RootVector { coords: self.coords.iter().map(|a| a * k).collect() }
    }

    /// Four times the standard inner product.
    pub fn pairing4(&self, o: &RootVector) -> i64 {
        self.coords.iter().zip(&o.coords).map(|(&a, &b)| a as i64 * b as i64).sum()
    }

    /// Undoubled coordinates as rationals.
    pub fn eps(&self) -> Vec<BigRational> {
        self.coords.iter().map(|&c| BigRational::new(BigInt::from(c), BigInt::from(2))).collect()
    }
}

/// Coefficients of a weight in the simple roots.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct SimpleRootExpansion {
    pub c: Vec<i32>,
}

fn check_rank(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain(format!("unsupported rank D{}", n)));
    }
    Ok(())
}

/// `α_j` for `j = 1..n`.
pub fn simple_root(n: usize, j: usize) -> RootVector {
    let mut r = RootVector::zero(n);
    if j < n {
        r.coords[j - 1] = 2;
        r.coords[j] = -2;
    } else {
        r.coords[n - 2] = 2;
        r.coords[n - 1] = 2;
    }
    r
}

/// `ω_i` for `i = 1..n`.
pub fn fundamental_weight(n: usize, i: usize) -> RootVector {
    let mut r = RootVector::zero(n);
    if i <= n - 2 {
        for k in 0..i {
            r.coords[k] = 2;
        }
    } else {
        for k in 0..n {
            r.coords[k] = 1;
        }
        if i == n - 1 {
            r.coords[n - 1] = -1;
        }
    }
    r
}

/// Re-expand in ε-coordinates.
pub fn from_simple(n: usize, c: &SimpleRootExpansion) -> RootVector {
    (1..=n).fold(RootVector::zero(n), |acc, j| acc.add(&simple_root(n, j).scale(c.c[j - 1])))
}

/// Simple-root coefficients of an element of the root lattice given in
/// doubled coordinates; `None` if it is not in the root lattice.
pub fn to_simple(n: usize, r: &RootVector) -> Option<SimpleRootExpansion> {
    let b = &r.coords;
    if b.iter().any(|x| x % 2 != 0) {
        return None;
    }
    let b: Vec<i32> = b.iter().map(|x| x / 2).collect();
    let mut c = vec![0i32; n];
    let mut acc = 0;
    for k in 0..n - 2 {
        acc += b[k];
        c[k] = acc;
    }
    let s = b[n - 2] + b[n - 1] + c[n - 3];
    let t = b[n - 2] - b[n - 1] + c[n - 3];
    if s % 2 != 0 || t % 2 != 0 {
        return None;
    }
    c[n - 1] = s / 2;
    c[n - 2] = t / 2;
    Some(SimpleRootExpansion { c })
}

/// Simple expansion of `Σ β_i ε_i` for integer `β`.
pub fn eps_to_simple(n: usize, beta: &[i32]) -> Option<SimpleRootExpansion> {
    to_simple(n, &RootVector { coords: beta.iter().map(|x| 2 * x).collect() })
}

/// All `ε_i ± ε_j`, `i < j`, with their expansions.
pub fn positive_roots(n: usize) -> Result<Vec<(RootVector, SimpleRootExpansion)>> {
    check_rank(n)?;
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in i + 1..n {
            for s in [-2, 2] {
                let mut r = RootVector::zero(n);
                r.coords[i] = 2;
                r.coords[j] = s;
                let c = to_simple(n, &r).expect("roots lie in the root lattice");
                out.push((r, c));
            }
        }
    }
    Ok(out)
}

pub fn is_minuscule(n: usize, i: usize) -> bool {
    i == 1 || i == n - 1 || i == n
}

/// `μ = Σ w_i ω_i − Σ v_i α_i`.
pub fn weight_mu(n: usize, v: &[u32], w: &[u32]) -> Result<RootVector> {
    check_rank(n)?;
    if v.len() != n || w.len() != n {
        return Err(Error::Domain(format!("vectors must have length {}", n)));
    }
    if let Some(i) = (1..=n).find(|&i| w[i - 1] > 0 && !is_minuscule(n, i)) {
        return Err(Error::Domain(format!("framing at non-minuscule node {}", i)));
    }
    let mut mu = RootVector::zero(n);
    for i in 1..=n {
        mu = mu.add(&fundamental_weight(n, i).scale(w[i - 1] as i32));
        mu = mu.add(&simple_root(n, i).scale(-(v[i - 1] as i32)));
    }
    Ok(mu)
}

/// Positive roots with `(μ, α) < 0`, sorted by expansion.
pub fn phi_plus_mu(n: usize, mu: &RootVector) -> Result<Vec<SimpleRootExpansion>> {
    let mut r: Vec<SimpleRootExpansion> =
        positive_roots(n)?.into_iter().filter(|(a, _)| a.pairing4(mu) < 0).map(|(_, c)| c).collect();
    r.sort();
    Ok(r)
}

/// `a_j = v_j − Σ_{o(e)=j} v_{i(e)}`.
pub fn kahler_exponents(n: usize, v: &[u32]) -> Vec<i64> {
    let mut a: Vec<i64> = v.iter().map(|&x| x as i64).collect();
    for (o, i) in edges(n) {
        a[o - 1] -= v[i - 1] as i64;
    }
    a
}

/// `e^α = (q/h)^{a·c} z^c`, with the constant in factored form.
pub fn kahler_factored(n: usize, v: &[u32], alpha: &SimpleRootExpansion) -> (Factored, KMonomial) {
    let a = kahler_exponents(n, v);
    let e: i64 = a.iter().zip(&alpha.c).map(|(x, &c)| x * c as i64).sum();
    let mut f = Factored::one();
    f.mul_mono(LMono::qh(e as i32, -e as i32));
    (f, KMonomial(alpha.c.iter().map(|&c| c as u32).collect()))
}

pub fn kahler_term(n: usize, v: &[u32], alpha: &SimpleRootExpansion) -> Term {
    let (f, m) = kahler_factored(n, v, alpha);
    Term::new(f.to_coefficient(), m)
}

/// Roots as `{"eps": [...], "simple": [...]}`.
pub fn root_json(n: usize, c: &SimpleRootExpansion) -> serde_json::Value {
    let eps: Vec<i32> = from_simple(n, c).coords.iter().map(|x| x / 2).collect();
    serde_json::json!({"eps": eps, "simple": c.c})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Coefficient;

    fn s(c: &[i32]) -> SimpleRootExpansion {
        SimpleRootExpansion { c: c.to_vec() }
    }

    #[test]
    fn counts_and_roundtrip() {
        for n in 3..=12 {
            let r = positive_roots(n).unwrap();
            assert_eq!(r.len(), n * (n - 1));
            for (v, c) in &r {
                assert!(c.c.iter().all(|&x| x >= 0));
                assert_eq!(&from_simple(n, c), v);
            }
        }
        assert!(positive_roots(2).is_err());
    }

    #[test]
    fn expansions() {
        let e = from_simple(4, &s(&[1, 2, 1, 1]));
        assert_eq!(e.coords, vec![2, 2, 0, 0]);
        let mut top = RootVector::zero(5);
        top.coords[3] = 2;
        top.coords[4] = 2;
        assert_eq!(to_simple(5, &top).unwrap(), s(&[0, 0, 0, 0, 1]));
    }

    #[test]
    fn mu_examples() {
        let mu = weight_mu(4, &[1, 2, 1, 1], &[0, 0, 0, 1]).unwrap();
        assert_eq!(mu, fundamental_weight(4, 4).add(&fundamental_weight(4, 2).scale(-1)));
        let mu = weight_mu(5, &[2, 2, 2, 1, 1], &[1, 0, 0, 0, 0]).unwrap();
        assert_eq!(mu, fundamental_weight(5, 1).scale(-1));
        assert_eq!(weight_mu(5, &[0; 5], &[1, 0, 0, 0, 0]).unwrap(), fundamental_weight(5, 1));
        assert!(weight_mu(5, &[0; 5], &[0, 1, 0, 0, 0]).is_err());
    }

    #[test]
    fn phi_plus_examples() {
        let mu = weight_mu(4, &[1, 2, 1, 1], &[0, 0, 0, 1]).unwrap();
        let got = phi_plus_mu(4, &mu).unwrap();
        let mut want = vec![s(&[0, 1, 0, 0]), s(&[0, 1, 1, 0]), s(&[1, 1, 0, 0]), s(&[1, 1, 1, 0]), s(&[1, 2, 1, 1])];
        want.sort();
        assert_eq!(got, want);
        let rho = (1..=6).fold(RootVector::zero(6), |a, i| a.add(&fundamental_weight(6, i)));
        assert!(phi_plus_mu(6, &rho).unwrap().is_empty());
    }

    #[test]
    fn kahler_examples() {
        assert_eq!(kahler_exponents(4, &[1, 2, 1, 1]), vec![-1, 0, 1, 1]);
        let t = kahler_term(4, &[1, 2, 1, 1], &s(&[1, 1, 0, 0]));
        assert_eq!(t.coeff, Coefficient::parse("h/q").unwrap());
        assert_eq!(t.monomial.0, vec![1, 1, 0, 0]);
        assert!(kahler_term(4, &[1, 2, 1, 1], &s(&[0, 1, 0, 0])).coeff.is_one());
    }

    #[test]
    fn pairing_via_fundamental_weights() {
        // (ω_i, α_j) = δ_ij, so (μ, α) = Σ_i m_i c_i with m_i = (μ, α_i)
        for n in 3..=8 {
            for (v, w) in [(vec![1u32; n], 1usize), (vec![0; n], n)] {
                let mut wv = vec![0u32; n];
                wv[w - 1] = 1;
                let mu = weight_mu(n, &v, &wv).unwrap();
                let m: Vec<i64> = (1..=n).map(|i| mu.pairing4(&simple_root(n, i))).collect();
                for (r, c) in positive_roots(n).unwrap() {
                    let via: i64 = m.iter().zip(&c.c).map(|(x, &y)| x * y as i64).sum();
                    assert_eq!(r.pairing4(&mu), via);
                }
            }
        }
    }
}
