//! Symmetric polynomials over `ℚ(q,h)` and Macdonald `P` by Gram–Schmidt.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::boxes::{b_lambda, b_lambda_factored, phi_factored, psi_factored};
use super::partition::{partitions_bounded, partitions_of, Partition};
use crate::coeffs::{Coefficient, Factored, KeyFrac, LMono};
use crate::error::{Error, Result};

/// Default bound on `|λ|` for Gram–Schmidt.
pub const GS_BOUND: u32 = 8;

/// Laurent polynomial in `nvars` variables over `ℚ(q,h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i32>, Coefficient>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(c: Coefficient, exps: Vec<i32>) -> MPoly {
        let mut p = MPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn constant(nvars: usize, c: Coefficient) -> MPoly {
        MPoly::monomial(c, vec![0; nvars])
    }

    /// `c · x_i`.
    pub fn var(nvars: usize, i: usize, c: Coefficient) -> MPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(c, e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<i32>, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.scale(&Coefficient::from_int(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, x) in &self.terms {
            r.add_term(e.clone(), x.mul(c));
        }
        r
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                r.add_term(a.iter().zip(b).map(|(i, j)| i + j).collect(), x.mul(y));
            }
        }
        r
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone())).collect(),
        }
    }

    /// `x_i -> x_i^{-1}` for every variable.
    pub fn invert_vars(&self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone())).collect() }
    }

    /// Exact quotient by `x_j − x_k`; errors if the division leaves a remainder.
    pub fn div_difference(&self, j: usize, k: usize) -> Result<MPoly> {
        // group by the exponent of x_j
        let mut groups: BTreeMap<i32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let d = rest[j];
            rest[j] = 0;
            groups.entry(d).or_insert_with(|| MPoly::zero(self.nvars)).add_term(rest, c.clone());
        }
        let Some((&lo, _)) = groups.iter().next() else {
            return Ok(MPoly::zero(self.nvars));
        };
        let hi = *groups.keys().next_back().unwrap();
        let xk = MPoly::var(self.nvars, k, Coefficient::one(2));
        let mut quot = MPoly::zero(self.nvars);
        let mut carry = MPoly::zero(self.nvars);
        let mut d = hi;
        while d > lo {
            let pd = groups.get(&d).cloned().unwrap_or_else(|| MPoly::zero(self.nvars));
            carry = pd.add(&xk.mul(&carry));
            let mut e = vec![0; self.nvars];
            e[j] = d - 1;
            quot = quot.add(&carry.shift(&e));
            d -= 1;
        }
        let rem = groups.get(&lo).cloned().unwrap_or_else(|| MPoly::zero(self.nvars)).add(&xk.mul(&carry));
        if !rem.is_zero() {
            return Err(Error::Domain(format!("not divisible by x{} - x{}", j + 1, k + 1)));
        }
        Ok(quot)
    }

    /// Coefficients evaluated at `q = 0`.
    pub fn eval_q0(&self, h: &BigRational) -> BTreeMap<Vec<i32>, Option<BigRational>> {
        let pt = vec![BigRational::zero(), h.clone()];
        self.terms.iter().map(|(e, c)| (e.clone(), c.eval(&pt))).collect()
    }
}

/// A symmetric polynomial in `nvars` variables in the monomial basis `m_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Partition, Coefficient>,
}

impl SymPoly {
    pub fn zero(nvars: usize) -> SymPoly {
        SymPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, lam: Partition, c: Coefficient) {
        if lam.len() > self.nvars || c.is_zero() {
            return;
        }
        let x = self.terms.entry(lam.clone()).or_insert_with(|| Coefficient::zero(2));
        *x = x.add(&c);
        if x.is_zero() {
            self.terms.remove(&lam);
        }
    }

    pub fn add(&self, o: &SymPoly) -> SymPoly {
        let mut r = self.clone();
        for (l, c) in &o.terms {
            r.add_term(l.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Coefficient) -> SymPoly {
        let mut r = SymPoly::zero(self.nvars);
        for (l, x) in &self.terms {
            r.add_term(l.clone(), x.mul(c));
        }
        r
    }

    pub fn mul(&self, o: &SymPoly) -> SymPoly {
        SymPoly::from_mpoly(&self.to_mpoly().mul(&o.to_mpoly())).expect("products of symmetric polynomials are symmetric")
    }

    /// Expand each `m_λ` over the distinct permutations of `λ`.
    pub fn to_mpoly(&self) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (lam, c) in &self.terms {
            let mut e: Vec<i32> = (1..=self.nvars).map(|i| lam.part(i) as i32).collect();
            e.sort();
            loop {
                r.add_term(e.clone(), c.clone());
                if !next_permutation(&mut e) {
                    break;
                }
            }
        }
        r
    }

    /// Read off coefficients of sorted exponents; errors if `p` is not symmetric
    /// or has negative exponents.
    pub fn from_mpoly(p: &MPoly) -> Result<SymPoly> {
        let mut r = SymPoly::zero(p.nvars);
        for (e, c) in &p.terms {
            if e.windows(2).all(|w| w[0] >= w[1]) {
                if e.iter().any(|&x| x < 0) {
                    return Err(Error::Domain("negative exponent".into()));
                }
                r.add_term(Partition::new(e.iter().map(|&x| x as u32).collect())?, c.clone());
            }
        }
        if r.to_mpoly() != *p {
            return Err(Error::Domain("polynomial is not symmetric".into()));
        }
        Ok(r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> =
            self.terms.iter().map(|(l, c)| serde_json::json!({"m": l.parts(), "coeff": c.to_string()})).collect();
        serde_json::json!({"nvars": self.nvars, "terms": terms})
    }
}

fn next_permutation(v: &mut [i32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Coefficient of `x^μ` in `p_ρ`: ways to distribute the parts of `ρ` onto
/// the rows of `μ` with row sums `μ`.
pub fn p_in_m(rho: &Partition, mu: &Partition) -> BigInt {
    fn rec(parts: &[u32], rem: &mut Vec<u32>) -> BigInt {
        let Some((&first, rest)) = parts.split_first() else {
            return if rem.iter().all(|&x| x == 0) { BigInt::one() } else { BigInt::zero() };
        };
        let mut total = BigInt::zero();
        for j in 0..rem.len() {
            if rem[j] >= first {
                rem[j] -= first;
                total += rec(rest, rem);
                rem[j] += first;
            }
        }
        total
    }
    if rho.size() != mu.size() {
        return BigInt::zero();
    }
    rec(rho.parts(), &mut mu.parts().to_vec())
}

/// `z_ρ ∏ (1 − q^{ρ_i})/(1 − h^{ρ_i})`.
pub fn power_sum_norm_factored(rho: &Partition) -> Factored {
    let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
    for &p in rho.parts() {
        *mult.entry(p).or_default() += 1;
    }
    let mut z = BigInt::one();
    for (&p, &m) in &mult {
        for k in 1..=m {
            z *= BigInt::from(p) * BigInt::from(k);
        }
    }
    let mut f = Factored::monomial(BigRational::from_integer(z), LMono::ONE);
    for &p in rho.parts() {
        f.mul_binomial(LMono::qh(p as i32, 0), 1);
        f.mul_binomial(LMono::qh(0, p as i32), -1);
    }
    f
}

pub fn power_sum_norm(rho: &Partition) -> Coefficient {
    power_sum_norm_factored(rho).to_coefficient()
}

/// Linear extension of dominance used to order Gram–Schmidt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GsOrder {
    /// Ascending lex.
    Lex,
    /// Ascending `Σ λ_i²`, ties by descending lex.
    SquareSum,
}

/// Degree-`k` data: partitions, `m` in terms of `p`, and `P_λ` in terms of `m`.
#[derive(Debug)]
pub struct MacBasis {
    pub k: u32,
    pub parts: Vec<Partition>,
    /// Row `λ`: `m_λ = Σ_ρ m_to_p[λ][ρ] p_ρ`.
    pub m_to_p: Vec<Vec<BigRational>>,
    /// Row `λ`: `P_λ = Σ_μ p_coeffs[λ][μ] m_μ`.
    pub p_coeffs: Vec<Vec<Coefficient>>,
    /// `p_coeffs` before conversion, for fast arithmetic.
    pub p_keys: Vec<Vec<KeyFrac>>,
}

fn invert(mut a: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("transition matrix is invertible");
        a.swap(col, piv);
        inv.swap(col, piv);
        let c = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &c;
            inv[col][j] /= &c;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (a[col][j].clone(), inv[col][j].clone());
                    a[r][j] -= &f * x;
                    inv[r][j] -= &f * y;
                }
            }
        }
    }
    inv
}

impl MacBasis {
    /// Gram–Schmidt on `m_λ` in the given order. Each norm `⟨P_μ, P_μ⟩` is
    /// checked to be `1/b_μ` before it is divided out.
    pub fn build(k: u32, order: GsOrder) -> Result<MacBasis> {
        let mut parts = partitions_of(k);
        match order {
            GsOrder::Lex => parts.sort(),
            GsOrder::SquareSum => {
                parts.sort_by(|a, b| {
                    let s = |p: &Partition| p.parts().iter().map(|&x| x * x).sum::<u32>();
                    s(a).cmp(&s(b)).then(b.cmp(a))
                });
            }
        }
        let r: Vec<Vec<BigRational>> =
            parts.iter().map(|rho| parts.iter().map(|mu| BigRational::from_integer(p_in_m(rho, mu))).collect()).collect();
        // p = R m, so m = R^{-1} p
        let m_to_p = invert(r);
        let z: Vec<KeyFrac> = parts.iter().map(|p| KeyFrac::from_factored(&power_sum_norm_factored(p))).collect();
        let n = parts.len();
        let to_p = |v: &[KeyFrac]| -> Vec<KeyFrac> {
            (0..n)
                .map(|rho| {
                    v.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .fold(KeyFrac::zero(), |acc, (lam, c)| acc.add(&c.scale(&m_to_p[lam][rho])))
                })
                .collect()
        };
        let inner = |a: &[KeyFrac], b: &[KeyFrac]| -> KeyFrac {
            (0..n).fold(KeyFrac::zero(), |acc, rho| acc.add(&a[rho].mul(&b[rho]).mul(&z[rho])))
        };
        let mut coeffs: Vec<Vec<KeyFrac>> = Vec::with_capacity(n);
        let mut p_vecs: Vec<Vec<KeyFrac>> = Vec::with_capacity(n);
        let mut bs: Vec<Factored> = Vec::with_capacity(n);
        for lam in 0..n {
            let mut v: Vec<KeyFrac> = (0..n).map(|j| if j == lam { KeyFrac::one() } else { KeyFrac::zero() }).collect();
            let m_p = to_p(&v);
            for mu in 0..lam {
                let c = inner(&m_p, &p_vecs[mu]).mul_factored(&bs[mu]);
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    v[j] = v[j].sub(&c.mul(&coeffs[mu][j]));
                }
            }
            let vp = to_p(&v);
            let b = b_lambda_factored(&parts[lam]);
            if !inner(&vp, &vp).mul_factored(&b).is_one() {
                return Err(Error::Invariant(format!("<P, P> b != 1 for {}", parts[lam])));
            }
            p_vecs.push(vp);
            coeffs.push(v);
            bs.push(b);
        }
        let p_coeffs = coeffs.iter().map(|row| row.iter().map(KeyFrac::to_coefficient).collect()).collect();
        Ok(MacBasis { k, parts, m_to_p, p_coeffs, p_keys: coeffs })
    }

    pub fn index(&self, lam: &Partition) -> Option<usize> {
        self.parts.iter().position(|p| p == lam)
    }
}

static BASES: OnceLock<Mutex<HashMap<u32, Arc<MacBasis>>>> = OnceLock::new();

/// Cached lex-ordered basis of degree `k`.
pub fn mac_basis(k: u32) -> Result<Arc<MacBasis>> {
    let cache = BASES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&k) {
        return Ok(b.clone());
    }
    let b = Arc::new(MacBasis::build(k, GsOrder::Lex)?);
    Ok(cache.lock().unwrap().entry(k).or_insert(b).clone())
}

fn restrict(b: &MacBasis, lam: &Partition, nvars: usize) -> SymPoly {
    let i = b.index(lam).expect("partition of the basis degree");
    let mut s = SymPoly::zero(nvars);
    for (mu, c) in b.parts.iter().zip(&b.p_coeffs[i]) {
        s.add_term(mu.clone(), c.clone());
    }
    s
}

/// `P_λ(x_1..x_nvars)` by Gram–Schmidt, `|λ| ≤ bound`.
pub fn gram_schmidt_p_bounded(lam: &Partition, nvars: usize, bound: u32) -> Result<SymPoly> {
    if lam.size() > bound {
        return Err(Error::Bound(format!("|λ| = {} exceeds the Gram–Schmidt bound {}", lam.size(), bound)));
    }
    if nvars < lam.len() {
        return Ok(SymPoly::zero(nvars));
    }
    let b = mac_basis(lam.size())?;
    Ok(restrict(&b, lam, nvars))
}

pub fn gram_schmidt_p(lam: &Partition, nvars: usize) -> Result<SymPoly> {
    gram_schmidt_p_bounded(lam, nvars, GS_BOUND)
}

/// `Q_λ = b_λ P_λ`.
pub fn macdonald_q(lam: &Partition, nvars: usize) -> Result<SymPoly> {
    Ok(gram_schmidt_p(lam, nvars)?.scale(&b_lambda(lam)))
}

/// `Σ_i numer_i / ∏_{j≠i} (x_i − x_j)` as a polynomial.
fn symmetrize_over_differences(n: usize, numer: impl Fn(usize) -> MPoly) -> Result<MPoly> {
    let one = Coefficient::one(2);
    let mut total = MPoly::zero(n);
    for i in 0..n {
        // 1/∏_{j≠i}(x_i − x_j) = (−1)^i ∏_{j<k; j,k≠i}(x_j − x_k) / Δ
        let mut t = numer(i);
        if i % 2 == 1 {
            t = t.scale(&Coefficient::from_int(-1));
        }
        for j in 0..n {
            for k in j + 1..n {
                if j != i && k != i {
                    t = t.mul(&MPoly::var(n, j, one.clone()).sub(&MPoly::var(n, k, one.clone())));
                }
            }
        }
        total = total.add(&t);
    }
    for j in 0..n {
        for k in j + 1..n {
            total = total.div_difference(j, k)?;
        }
    }
    Ok(total)
}

/// `Σ_i x_i^a ∏_{j≠i} (x_i − h x_j)/(x_i − x_j)`.
pub fn one_row_p(a: u32, nvars: usize) -> Result<MPoly> {
    let n = nvars;
    symmetrize_over_differences(n, |i| {
        let mut e = vec![0; n];
        e[i] = a as i32;
        let mut t = MPoly::monomial(Coefficient::one(2), e);
        for j in (0..n).filter(|&j| j != i) {
            t = t.mul(&MPoly::var(n, i, Coefficient::one(2)).sub(&MPoly::var(n, j, Coefficient::h())));
        }
        t
    })
}

/// `Σ_i ∏_{j≠i} x_j^a (x_j − h x_i)/(x_j − x_i)`.
pub fn rect_p(a: u32, nvars: usize) -> Result<MPoly> {
    let n = nvars;
    symmetrize_over_differences(n, |i| {
        let e: Vec<i32> = (0..n).map(|j| if j == i { 0 } else { a as i32 }).collect();
        let mut t = MPoly::monomial(Coefficient::one(2), e);
        for j in (0..n).filter(|&j| j != i) {
            t = t.mul(&MPoly::var(n, j, Coefficient::one(2)).sub(&MPoly::var(n, i, Coefficient::h())));
        }
        // ∏_{j≠i}(x_j − x_i) = (−1)^{n−1} ∏_{j≠i}(x_i − x_j)
        if n % 2 == 0 {
            t = t.scale(&Coefficient::from_int(-1));
        }
        t
    })
}

/// Both sides of the inversion identity, for the Gram–Schmidt polynomials and
/// for the displayed closed forms.
#[derive(Clone, Debug, Serialize)]
pub struct InversionReport {
    pub nvars: usize,
    pub a: u32,
    pub gram_schmidt: bool,
    pub display: bool,
}

pub fn inversion_check(nvars: usize, a: u32) -> Result<InversionReport> {
    let shift = vec![a as i32; nvars];
    let lhs = gram_schmidt_p(&Partition::rect(a, 1), nvars)?.to_mpoly().invert_vars().shift(&shift);
    let rhs = gram_schmidt_p(&Partition::rect(a, nvars.saturating_sub(1)), nvars)?.to_mpoly();
    let dl = one_row_p(a, nvars)?.invert_vars().shift(&shift);
    let dr = rect_p(a, nvars)?;
    Ok(InversionReport { nvars, a, gram_schmidt: lhs == rhs, display: dl == dr })
}

/// Distinct rearrangements of `e`.
fn orbit(e: &[u32]) -> Vec<Vec<u32>> {
    let mut v = e.to_vec();
    v.sort();
    let mut out = vec![v.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { break };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
    out
}

/// `m_α m_β = Σ_γ c_γ m_γ` in `nvars` variables.
pub fn m_product(alpha: &Partition, beta: &Partition, nvars: usize) -> BTreeMap<Partition, u64> {
    let pad = |p: &Partition| {
        let mut v = p.parts().to_vec();
        v.resize(nvars, 0);
        v
    };
    let mut out = BTreeMap::new();
    if alpha.len() > nvars || beta.len() > nvars {
        return out;
    }
    let ob = orbit(&pad(beta));
    for a in orbit(&pad(alpha)) {
        for b in &ob {
            let g: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if g.windows(2).all(|w| w[0] >= w[1]) {
                *out.entry(Partition::trimmed(g)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// `P_λ` in `nvars` variables as `m`-coefficients.
fn p_row(lam: &Partition, nvars: usize) -> Result<BTreeMap<Partition, KeyFrac>> {
    if lam.size() > GS_BOUND {
        return Err(Error::Bound(format!("|λ| = {} exceeds the Gram–Schmidt bound {}", lam.size(), GS_BOUND)));
    }
    if nvars < lam.len() {
        return Ok(BTreeMap::new());
    }
    let b = mac_basis(lam.size())?;
    let i = b.index(lam).expect("partition of the basis degree");
    Ok(b.parts.iter().zip(&b.p_keys[i]).filter(|(p, c)| p.len() <= nvars && !c.is_zero()).map(|(p, c)| (p.clone(), c.clone())).collect())
}

fn add_into(acc: &mut BTreeMap<Partition, KeyFrac>, p: Partition, c: KeyFrac) {
    let e = acc.entry(p).or_insert_with(KeyFrac::zero);
    *e = e.add(&c);
}

/// `P_μ Q_(a) = Σ_{λ ≻ μ} φ_{λ/μ} P_λ` in `nvars` variables.
pub fn pieri_check(mu: &Partition, a: u32, nvars: usize) -> Result<bool> {
    let row = Partition::rect(a, 1);
    let b = b_lambda_factored(&row);
    let qa: Vec<(Partition, KeyFrac)> = p_row(&row, nvars)?.into_iter().map(|(p, c)| (p, c.mul_factored(&b))).collect();
    let mut lhs = BTreeMap::new();
    for (x, cx) in p_row(mu, nvars)? {
        for (y, cy) in &qa {
            let c = cx.mul(cy);
            for (g, k) in m_product(&x, y, nvars) {
                add_into(&mut lhs, g, c.scale(&BigRational::from_integer(BigInt::from(k))));
            }
        }
    }
    let mut rhs = BTreeMap::new();
    for lam in mu.strips_above(mu.len() + 1, mu.size() + a) {
        if lam.size() != mu.size() + a {
            continue;
        }
        let phi = phi_factored(&lam, mu)?;
        for (g, c) in p_row(&lam, nvars)? {
            add_into(&mut rhs, g, c.mul_factored(&phi));
        }
    }
    let keys: std::collections::BTreeSet<&Partition> = lhs.keys().chain(rhs.keys()).collect();
    let zero = KeyFrac::zero();
    let equal = keys.iter().all(|g| lhs.get(*g).unwrap_or(&zero).sub(rhs.get(*g).unwrap_or(&zero)).is_zero());
    Ok(equal)
}

/// `P_λ(x, z_1..z_m) = Σ_μ ψ_{λ/μ} x^{|λ|−|μ|} P_μ(z)` with `x` the first variable.
pub fn branching_check(lam: &Partition, m: usize) -> Result<bool> {
    let lhs = gram_schmidt_p(lam, m + 1)?.to_mpoly();
    let mut rhs = MPoly::zero(m + 1);
    for mu in lam.strips_below(m) {
        let psi = psi_factored(lam, &mu)?.to_coefficient();
        let inner = gram_schmidt_p(&mu, m)?.to_mpoly();
        for (e, c) in &inner.terms {
            let mut full = vec![(lam.size() - mu.size()) as i32];
            full.extend(e);
            rhs.add_term(full, c.mul(&psi));
        }
    }
    Ok(lhs == rhs)
}

/// Coefficients of `(hz;q)_∞/(z;q)_∞` through `z^d` from its logarithm
/// `Σ_m (1−h^m)/(1−q^m) z^m/m`, via `d g_d = Σ_m (1−h^m)/(1−q^m) g_{d−m}`.
pub fn fbinom_product_coeffs(d: u32) -> Vec<Coefficient> {
    fbinom_product_keys(d).iter().map(KeyFrac::to_coefficient).collect()
}

fn fbinom_product_keys(d: u32) -> Vec<KeyFrac> {
    let c: Vec<KeyFrac> = (0..=d)
        .map(|m| {
            if m == 0 {
                return KeyFrac::zero();
            }
            let mut f = Factored::one();
            f.mul_binomial(LMono::qh(0, m as i32), 1);
            f.mul_binomial(LMono::qh(m as i32, 0), -1);
            KeyFrac::from_factored(&f)
        })
        .collect();
    let mut g = vec![KeyFrac::one()];
    for k in 1..=d as usize {
        let s = (1..=k).fold(KeyFrac::zero(), |acc, m| acc.add(&c[m].mul(&g[k - m])));
        g.push(s.scale(&BigRational::new(BigInt::one(), BigInt::from(k))));
    }
    g
}

/// Checks the sum form of `F` against the logarithmic recursion through `z^d`
/// without building the product side: the sum-form coefficients `s_k` must
/// satisfy `k s_k = Σ_m (1−h^m)/(1−q^m) s_{k−m}`.
pub fn fbinom_sum_product_check(d: u32) -> bool {
    use crate::coeffs::reduce_sum;
    let s: Vec<Factored> = (0..=d).map(crate::series::fbinom_coefficient).collect();
    (1..=d as usize).all(|k| {
        let mut terms = Vec::with_capacity(k + 1);
        let mut lhs = s[k].clone();
        lhs.scale(&BigRational::from_integer(BigInt::from(-(k as i64))));
        terms.push(lhs);
        for m in 1..=k {
            let mut t = s[k - m].clone();
            t.mul_binomial(LMono::qh(0, m as i32), 1);
            t.mul_binomial(LMono::qh(m as i32, 0), -1);
            terms.push(t);
        }
        reduce_sum(&terms).is_zero()
    })
}

/// Result of the Cauchy identity check.
#[derive(Clone, Debug, Serialize)]
pub struct CauchyReport {
    pub nx: usize,
    pub ny: usize,
    pub cap: u32,
    pub equal: bool,
    pub partitions: usize,
}

/// `Σ_{|λ| ≤ D} P_λ(x) Q_λ(y)` against `∏_{i,j} (h x_i y_j)_∞/(x_i y_j)_∞`,
/// compared as series in `x_1..x_nx, y_1..y_ny` truncated at total degree `2D`.
pub fn cauchy_check(nx: usize, ny: usize, cap: u32) -> Result<CauchyReport> {
    type Series = BTreeMap<Vec<u32>, KeyFrac>;
    let n = nx + ny;
    let big = 2 * cap;
    let add = |s: &mut Series, e: Vec<u32>, c: KeyFrac| {
        let x = s.entry(e).or_insert_with(KeyFrac::zero);
        *x = x.add(&c);
    };
    // m_μ(x_1..x_k) as exponent vectors
    let expand = |row: BTreeMap<Partition, KeyFrac>, k: usize| -> Vec<(Vec<u32>, KeyFrac)> {
        let mut out = Vec::new();
        for (mu, c) in row {
            let mut e = mu.parts().to_vec();
            e.resize(k, 0);
            out.extend(orbit(&e).into_iter().map(|o| (o, c.clone())));
        }
        out
    };
    let mut lhs = Series::new();
    let lams = partitions_bounded(cap, nx.min(ny));
    for lam in &lams {
        let b = b_lambda_factored(lam);
        let px = expand(p_row(lam, nx)?, nx);
        let qy = expand(p_row(lam, ny)?.into_iter().map(|(m, c)| (m, c.mul_factored(&b))).collect(), ny);
        for (a, x) in &px {
            for (e, y) in &qy {
                add(&mut lhs, a.iter().chain(e).copied().collect(), x.mul(y));
            }
        }
    }
    let g = fbinom_product_keys(cap);
    let mut rhs = Series::from([(vec![0; n], KeyFrac::one())]);
    for i in 0..nx {
        for j in 0..ny {
            let mut next = Series::new();
            for (e, c) in &rhs {
                let deg: u32 = e.iter().sum();
                for (d, gd) in g.iter().enumerate() {
                    if deg + 2 * d as u32 > big {
                        break;
                    }
                    let mut f = e.clone();
                    f[i] += d as u32;
                    f[nx + j] += d as u32;
                    add(&mut next, f, c.mul(gd));
                }
            }
            rhs = next;
        }
    }
    let keys: std::collections::BTreeSet<&Vec<u32>> = lhs.keys().chain(rhs.keys()).collect();
    let zero = KeyFrac::zero();
    let equal = keys.iter().all(|e| lhs.get(*e).unwrap_or(&zero).sub(rhs.get(*e).unwrap_or(&zero)).is_zero());
    Ok(CauchyReport { nx, ny, cap, equal, partitions: lams.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &[u32]) -> Partition {
        Partition::new(x.to_vec()).unwrap()
    }

    fn c(s: &str) -> Coefficient {
        Coefficient::parse(s).unwrap()
    }

    #[test]
    fn transition_small() {
        assert_eq!(p_in_m(&p(&[1, 1]), &p(&[1, 1])), BigInt::from(2));
        assert_eq!(p_in_m(&p(&[1, 1]), &p(&[2])), BigInt::from(1));
        assert_eq!(p_in_m(&p(&[2]), &p(&[1, 1])), BigInt::from(0));
        assert_eq!(power_sum_norm(&p(&[1])), c("(1-q)/(1-h)"));
    }

    #[test]
    fn gs_examples() {
        let s = gram_schmidt_p(&p(&[1, 1]), 2).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert!(s.terms[&p(&[1, 1])].is_one());
        for r in 0..5 {
            let s = gram_schmidt_p(&Partition::rect(r, 1), 1).unwrap();
            assert_eq!(s.to_mpoly(), MPoly::monomial(Coefficient::one(2), vec![r as i32]));
        }
        let s = gram_schmidt_p(&p(&[2]), 2).unwrap();
        assert!(s.terms[&p(&[2])].is_one());
        assert_eq!(s.terms[&p(&[1, 1])], c("(1+q)*(1-h)/(1-q*h)"));
        assert!(gram_schmidt_p(&p(&[9]), 1).is_err());
        assert!(gram_schmidt_p(&p(&[1, 1, 1]), 2).unwrap().terms.is_empty());
    }

    #[test]
    fn order_independent() {
        for k in 0..=5 {
            let a = MacBasis::build(k, GsOrder::Lex).unwrap();
            let b = MacBasis::build(k, GsOrder::SquareSum).unwrap();
            for lam in &a.parts {
                let (i, j) = (a.index(lam).unwrap(), b.index(lam).unwrap());
                for mu in &a.parts {
                    assert_eq!(a.p_coeffs[i][a.index(mu).unwrap()], b.p_coeffs[j][b.index(mu).unwrap()], "{lam} {mu}");
                }
            }
        }
    }

    #[test]
    fn norms_are_inverse_b() {
        for k in 0..=6 {
            assert!(mac_basis(k).is_ok(), "{k}");
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(one_row_p(1, 2).unwrap(), SymPoly { nvars: 2, terms: BTreeMap::from([(p(&[1]), Coefficient::one(2))]) }.to_mpoly());
        for n in 1..=3 {
            for a in 0..=3 {
                let r = inversion_check(n, a).unwrap();
                assert!(r.gram_schmidt && r.display, "{n} {a}");
            }
        }
        // the displayed one-row form is the q = 0 specialization of P_(a)
        let h = BigRational::new(BigInt::from(3), BigInt::from(7));
        for n in 1..=3 {
            for a in 1..=3 {
                let gs = gram_schmidt_p(&Partition::rect(a, 1), n).unwrap().to_mpoly();
                let d = one_row_p(a, n).unwrap();
                assert_eq!(gs.eval_q0(&h), d.eval_q0(&h), "{n} {a}");
                assert_eq!(gs == d, a <= 1 || n == 1, "{n} {a}");
            }
        }
    }

    #[test]
    fn pieri_and_branching() {
        for mu in partitions_bounded(3, 3) {
            for a in 0..=(4 - mu.size()) {
                assert!(pieri_check(&mu, a, 3).unwrap(), "{mu} {a}");
            }
        }
        for lam in partitions_bounded(4, usize::MAX) {
            assert!(branching_check(&lam, 2).unwrap(), "{lam}");
        }
    }

    #[test]
    fn m_product_matches_expansion() {
        for x in partitions_bounded(3, 3) {
            for y in partitions_bounded(3, 3) {
                let mut a = SymPoly::zero(3);
                a.add_term(x.clone(), Coefficient::one(2));
                let mut b = SymPoly::zero(3);
                b.add_term(y.clone(), Coefficient::one(2));
                let mut want = SymPoly::zero(3);
                for (g, k) in m_product(&x, &y, 3) {
                    want.add_term(g, Coefficient::from_int(k as i64));
                }
                assert_eq!(a.mul(&b), want, "{x} {y}");
            }
        }
    }

    #[test]
    fn cauchy_small() {
        assert!(cauchy_check(1, 1, 4).unwrap().equal);
        assert!(cauchy_check(2, 2, 0).unwrap().equal);
        assert!(cauchy_check(2, 2, 2).unwrap().equal);
    }

    #[test]
    fn fbinom_log_recursion() {
        let g = fbinom_product_coeffs(5);
        for (d, x) in g.iter().enumerate() {
            assert_eq!(*x, crate::series::fbinom_coefficient(d as u32).to_coefficient());
        }
        assert!(fbinom_sum_product_check(8));
    }
}
