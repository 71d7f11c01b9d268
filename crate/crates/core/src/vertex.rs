//! The shifted vertex function by localization, the product of `F` over
//! `Φ⁺_μ`, and the comparison between the two.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{default_name, Factored, LMono, Mode, MAX_GENS};
use crate::error::{domain, Error, Result};
use crate::posets::{for_each_labeling, valid_dims, Direction, FixedPoint, LocalPoset, Rpp, Slot};
use crate::roots::{edges, kahler_factored, phi_plus_mu, weight_mu, SimpleRootExpansion};
use crate::series::{lazy_eq_sampled, series_eq, KMonomial, LazySeries, PochProduct, SeriesComparison, TruncatedSeries, Witness};

/// `b_j = Σ_{i(e)=j} v_{o(e)} − Σ_{o(e)=j} v_{i(e)} + w_j`.
pub fn b_vector(n: usize, v: &[u32], w: &[u32]) -> Vec<i64> {
    let mut b: Vec<i64> = w.iter().map(|&x| x as i64).collect();
    for (o, i) in edges(n) {
        b[i - 1] += v[o - 1] as i64;
        b[o - 1] -= v[i - 1] as i64;
    }
    b
}

/// `N` as a sum over edges and framings, and as `Σ b_j deg_j`.
fn n_forms(n: usize, v: &[u32], w: &[u32], deg: &[u32]) -> (i64, i64) {
    let d = |k: usize| deg[k - 1] as i64;
    let by_edges: i64 = edges(n).iter().map(|&(o, i)| v[o - 1] as i64 * d(i) - v[i - 1] as i64 * d(o)).sum::<i64>()
        + (1..=n).map(|k| w[k - 1] as i64 * d(k)).sum::<i64>();
    let by_b: i64 = b_vector(n, v, w).iter().zip(deg).map(|(b, &x)| b * x as i64).sum();
    (by_edges, by_b)
}

fn n_of(n: usize, v: &[u32], w: &[u32], deg: &[u32]) -> i64 {
    let (a, b) = n_forms(n, v, w, deg);
    assert_eq!(a, b, "the two forms of N disagree at degree {:?}", deg);
    a
}

/// `N(π)` for a labeling of the fixed point's poset.
pub fn n_pi(p: &FixedPoint, pi: &Rpp) -> i64 {
    n_of(p.n, &p.v, &p.w, &pi.degree(&p.local()))
}

/// A Laurent monomial in the Chern roots, one exponent per local element.
///
/// The `k`-th root of color `i` is the `k`-th element of color `i` in
/// local-element order, which sorts by slot and then by poset index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Descendant {
    pub exps: BTreeMap<usize, i32>,
}

impl Descendant {
    pub fn trivial() -> Descendant {
        Descendant::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.values().all(|&e| e == 0)
    }

    /// `x_{color,k}^e`, with `k` 1-based.
    pub fn root(lp: &LocalPoset, color: usize, k: usize, e: i32) -> Result<Descendant> {
        let idx = lp
            .elements
            .iter()
            .enumerate()
            .filter(|(_, x)| x.color == color)
            .nth(k.wrapping_sub(1))
            .map(|(i, _)| i)
            .ok_or_else(|| Error::Domain(format!("no Chern root x_{{{},{}}} at this point", color, k)))?;
        Ok(Descendant { exps: BTreeMap::from([(idx, e)]) })
    }

    pub fn mul(&self, o: &Descendant) -> Descendant {
        let mut exps = self.exps.clone();
        for (&k, &e) in &o.exps {
            *exps.entry(k).or_default() += e;
        }
        exps.retain(|_, e| *e != 0);
        Descendant { exps }
    }

    /// `τ` at `x = weight(x) q^{π(x)}`.
    pub fn eval(&self, lp: &LocalPoset, pi: &[u32]) -> LMono {
        let mut m = LMono::ONE;
        for (&x, &e) in &self.exps {
            m = m.mul(weight(lp, x).mul(LMono::qh(pi[x] as i32, 0)).pow(e));
        }
        m
    }
}

/// `a_{slot(x)} h^{hexp(x)}`.
fn weight(lp: &LocalPoset, x: usize) -> LMono {
    let e = &lp.elements[x];
    LMono::var(2 + e.slot, 1).mul(LMono::qh(0, e.hexp as i32))
}

/// Generator names: `q`, `h`, then the framing slots.
pub fn generator_names(slots: &[Slot]) -> impl Fn(usize) -> String + '_ {
    move |i| match i {
        0 | 1 => default_name(i),
        k if k - 2 < slots.len() => slots[k - 2].to_string(),
        k => default_name(k),
    }
}

fn local_dims(lp: &LocalPoset) -> (Vec<u32>, Vec<u32>) {
    let mut v = vec![0; lp.n];
    for e in &lp.elements {
        v[e.color - 1] += 1;
    }
    let mut w = vec![0; lp.n];
    for s in &lp.slots {
        w[s.node - 1] += 1;
    }
    (v, w)
}

/// One localization summand: `(q/h)^N τ(π) z^{deg π}` times the three
/// Pochhammer products, or `None` when a numerator factor vanishes.
pub(crate) fn summand(lp: &LocalPoset, v: &[u32], w: &[u32], tau: &Descendant, pi: &[u32]) -> Result<Option<(KMonomial, Factored)>> {
    let n = lp.n;
    let mut deg = vec![0u32; n];
    for (e, &p) in lp.elements.iter().zip(pi) {
        deg[e.color - 1] += p;
    }
    let big_n = n_of(n, v, w, &deg) as i32;
    let (q, h) = (LMono::qh(1, 0), LMono::qh(0, 1));
    let mut prod = PochProduct::one();
    let m = lp.len();
    for x in 0..m {
        let ex = &lp.elements[x];
        for (s, slot) in lp.slots.iter().enumerate() {
            if slot.node != ex.color {
                continue;
            }
            let r = weight(lp, x).div(LMono::var(2 + s, 1));
            prod.mul_poch(h.mul(r), pi[x] as i64, 1);
            prod.mul_poch(q.mul(r), pi[x] as i64, -1);
        }
    }
    for (o, i) in edges(n) {
        for x in (0..m).filter(|&x| lp.elements[x].color == o) {
            for y in (0..m).filter(|&y| lp.elements[y].color == i) {
                let r = weight(lp, y).div(weight(lp, x));
                let d = pi[y] as i64 - pi[x] as i64;
                prod.mul_poch(h.mul(r), d, 1);
                prod.mul_poch(q.mul(r), d, -1);
            }
        }
    }
    for x in 0..m {
        for y in 0..m {
            if x == y || lp.elements[x].color != lp.elements[y].color {
                continue;
            }
            let r = weight(lp, y).div(weight(lp, x));
            let d = pi[y] as i64 - pi[x] as i64;
            prod.mul_poch(q.mul(r), d, 1);
            prod.mul_poch(h.mul(r), d, -1);
        }
    }
    if prod.zero_order > 0 {
        return Ok(None);
    }
    if prod.zero_order < 0 {
        return Err(Error::Invariant(format!("localization summand has a pole at labeling {:?}", pi)));
    }
    let mut f = prod.value;
    f.mul_mono(LMono::qh(big_n, -big_n).mul(tau.eval(lp, pi)));
    Ok(Some((KMonomial(deg), f)))
}

/// Labelings summed by the localization formula: order-preserving on the
/// ideal, i.e. reverse plane partitions of the dual poset.
pub fn vertex_labelings(lp: &LocalPoset, cap: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for_each_labeling(lp, cap, Direction::Preserving, |v| out.push(v.to_vec()));
    out
}

/// Nonvanishing localization summands in labeling order.
pub fn vertex_terms(lp: &LocalPoset, tau: &Descendant, cap: u32) -> Result<Vec<(KMonomial, Factored)>> {
    if lp.slots.len() + 2 > MAX_GENS {
        return Err(Error::Bound(format!("at most {} framing slots", MAX_GENS - 2)));
    }
    let (v, w) = local_dims(lp);
    let labelings = vertex_labelings(lp, cap);
    let terms: Vec<Option<(KMonomial, Factored)>> =
        labelings.par_iter().map(|pi| summand(lp, &v, &w, tau, pi)).collect::<Result<_>>()?;
    Ok(terms.into_iter().flatten().collect())
}

pub fn vertex_lazy_local(lp: &LocalPoset, tau: &Descendant, cap: u32) -> Result<LazySeries> {
    let mut s = LazySeries::zero(lp.n, cap);
    for (m, f) in vertex_terms(lp, tau, cap)? {
        s.push(m, f);
    }
    s.compact();
    Ok(s)
}

pub fn vertex_lazy(p: &FixedPoint, tau: &Descendant, cap: u32) -> Result<LazySeries> {
    vertex_lazy_local(&p.local(), tau, cap)
}

/// The shifted vertex function restricted to `p`, truncated at total degree `cap`.
pub fn vertex_series(p: &FixedPoint, tau: &Descendant, cap: u32) -> Result<TruncatedSeries> {
    Ok(vertex_lazy(p, tau, cap)?.to_exact())
}

/// The framing node of a single minuscule framing, with `v` validated.
fn single_node(n: usize, v: &[u32], w: &[u32]) -> Result<usize> {
    weight_mu(n, v, w)?;
    if w.iter().sum::<u32>() != 1 {
        return domain("the product formula needs a single framing");
    }
    let node = w.iter().position(|&x| x == 1).unwrap() + 1;
    if !valid_dims(n, node)?.iter().any(|x| x == v) {
        return domain(format!("v = {:?} is not a valid dimension vector for node {}", v, node));
    }
    Ok(node)
}

/// `∏_{α ∈ Φ⁺_μ} F(e^α)` with coefficients left as sums of factored terms.
pub fn product_lazy(n: usize, v: &[u32], w: &[u32], cap: u32) -> Result<LazySeries> {
    single_node(n, v, w)?;
    let mu = weight_mu(n, v, w)?;
    let mut s = LazySeries::one(n, cap);
    for alpha in phi_plus_mu(n, &mu)? {
        let (c, m) = kahler_factored(n, v, &alpha);
        s = s.mul(&LazySeries::fbinom(n, cap, &c, &m)?);
    }
    Ok(s)
}

pub fn product_series(n: usize, v: &[u32], w: &[u32], cap: u32) -> Result<TruncatedSeries> {
    Ok(product_lazy(n, v, w, cap)?.to_exact())
}

/// Both sides compared at one truncation.
#[derive(Clone, Debug, Serialize)]
pub struct VertexReport {
    pub n: usize,
    pub v: Vec<u32>,
    pub w: Vec<u32>,
    pub cap: u32,
    pub mode: Mode,
    /// Exact series; omitted in sampled mode.
    pub localization: Option<TruncatedSeries>,
    pub product: Option<TruncatedSeries>,
    pub roots: Vec<SimpleRootExpansion>,
    pub equal: bool,
    pub witness: Option<Witness>,
}

/// Compare two lazy series in the given mode.
pub fn compare_lazy(a: &LazySeries, b: &LazySeries, mode: Mode) -> Result<(SeriesComparison, Option<(TruncatedSeries, TruncatedSeries)>)> {
    match mode {
        Mode::Exact => {
            let (x, y) = rayon::join(|| a.to_exact(), || b.to_exact());
            Ok((series_eq(&x, &y, Mode::Exact)?, Some((x, y))))
        }
        Mode::Sampled { points, seed } => Ok((lazy_eq_sampled(a, b, points, seed)?, None)),
    }
}

/// Localization against the root product for a single minuscule framing.
pub fn verify_product(n: usize, v: &[u32], w: &[u32], cap: u32, mode: Mode) -> Result<VertexReport> {
    let node = single_node(n, v, w)?;
    let p = FixedPoint::single(n, node, v)?;
    let lhs = vertex_lazy(&p, &Descendant::trivial(), cap)?;
    let rhs = product_lazy(n, v, w, cap)?;
    let (cmp, sides) = compare_lazy(&lhs, &rhs, mode)?;
    let (localization, product) = sides.unzip();
    Ok(VertexReport {
        n,
        v: v.to_vec(),
        w: w.to_vec(),
        cap,
        mode,
        localization,
        product,
        roots: phi_plus_mu(n, &weight_mu(n, v, w)?)?,
        equal: cmp.equal,
        witness: cmp.witness,
    })
}

impl VertexReport {
    pub fn to_json(&self) -> serde_json::Value {
        let names = |i: usize| if i == 2 { format!("a{}_1", self.w.iter().position(|&x| x > 0).map_or(1, |k| k + 1)) } else { default_name(i) };
        let side = |s: &Option<TruncatedSeries>| s.as_ref().map(|s| s.to_json_with(&names));
        let roots: Vec<serde_json::Value> = self.roots.iter().map(|r| crate::roots::root_json(self.n, r)).collect();
        serde_json::json!({
            "n": self.n,
            "v": self.v,
            "w": self.w,
            "cap": self.cap,
            "mode": self.mode,
            "localization": side(&self.localization),
            "product": side(&self.product),
            "roots": roots,
            "equal": self.equal,
            "witness": self.witness.as_ref().map(|w| serde_json::json!({
                "monomial": w.monomial.0,
                "left": w.left.fmt_with(&names),
                "right": w.right.fmt_with(&names),
            })),
        })
    }
}

/// Result of comparing `𝗩` with `F(e^β) 𝗩′` for a fundamental framing.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub n: usize,
    pub k: usize,
    pub v: Vec<u32>,
    /// `Φ⁺_μ` minus the embedded `Φ⁺_{μ′}`.
    pub extra_roots: Vec<SimpleRootExpansion>,
    pub equal: bool,
    pub witness: Option<Witness>,
}

/// `(1^k, 2^{n−k−2}, 1, 1)`.
pub fn reduction_dims(n: usize, k: usize) -> Vec<u32> {
    let mut v = vec![1u32; k];
    v.extend(std::iter::repeat_n(2, n - k - 2));
    v.extend([1, 1]);
    v
}

/// Peel off the first node of a fundamental framing: `𝗩` against
/// `F(e^β) 𝗩′(z_2, …, z_n)` where `𝗩′` is the rank `n−1` vertex for
/// `v[1..]` and `β` is the one root of `Φ⁺_μ` not coming from `Φ⁺_{μ′}`.
pub fn reduction_check(n: usize, k: usize, cap: u32, mode: Mode) -> Result<ReductionReport> {
    if n < 4 || k < 2 || k > n - 2 {
        return domain(format!("reduction needs n >= 4 and 2 <= k <= n-2, got n={} k={}", n, k));
    }
    let v = reduction_dims(n, k);
    let v1 = v[1..].to_vec();
    let mut w = vec![0; n];
    w[0] = 1;
    let mut w1 = vec![0; n - 1];
    w1[0] = 1;
    let big = phi_plus_mu(n, &weight_mu(n, &v, &w)?)?;
    let small: Vec<SimpleRootExpansion> = phi_plus_mu(n - 1, &weight_mu(n - 1, &v1, &w1)?)?
        .into_iter()
        .map(|r| SimpleRootExpansion { c: std::iter::once(0).chain(r.c).collect() })
        .collect();
    let extra: Vec<SimpleRootExpansion> = big.iter().filter(|r| !small.contains(r)).cloned().collect();
    if extra.len() != 1 || small.iter().any(|r| !big.contains(r)) {
        return Err(Error::Invariant(format!("root sets differ by {:?}, expected one extra root", extra)));
    }
    let lhs = vertex_lazy(&FixedPoint::single(n, 1, &v)?, &Descendant::trivial(), cap)?;
    let inner = vertex_lazy(&FixedPoint::single(n - 1, 1, &v1)?, &Descendant::trivial(), cap)?;
    let map: Vec<usize> = (1..n).collect();
    let (c, m) = kahler_factored(n, &v, &extra[0]);
    let rhs = LazySeries::fbinom(n, cap, &c, &m)?.mul(&inner.embed(n, &map));
    let (cmp, _) = compare_lazy(&lhs, &rhs, mode)?;
    Ok(ReductionReport { n, k, v, extra_roots: extra, equal: cmp.equal, witness: cmp.witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Coefficient;
    use crate::posets::rpp_enumerate;
    use crate::series::{fbinom_series, Term};

    fn fp(n: usize, node: usize, v: &[u32]) -> FixedPoint {
        FixedPoint::single(n, node, v).unwrap()
    }

    #[test]
    fn n_examples() {
        let (v, w) = ([1, 2, 1, 1], [0, 0, 0, 1]);
        assert_eq!(b_vector(4, &v, &w), vec![-2, -1, 2, 3]);
        assert_eq!(n_of(4, &v, &w, &[0; 4]), 0);
        assert_eq!(n_of(4, &v, &w, &[1, 0, 0, 0]), -2);
        assert_eq!(n_of(4, &v, &w, &[0, 0, 0, 1]), 3);
        let p = fp(4, 4, &v);
        for r in rpp_enumerate(&p, 3) {
            let deg = r.degree(&p.local());
            let (a, b) = n_forms(4, &v, &w, &deg);
            assert_eq!(a, b);
            assert_eq!(n_pi(&p, &r), a);
        }
    }

    #[test]
    fn one_node_is_fbinom() {
        let got = vertex_lazy_local(&LocalPoset::single(), &Descendant::trivial(), 5).unwrap().to_exact();
        let want = fbinom_series(&Term::new(Coefficient::parse("q/h").unwrap(), KMonomial(vec![1])), 5).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn one_node_descendant() {
        let lp = LocalPoset::single();
        let plain = vertex_lazy_local(&lp, &Descendant::trivial(), 4).unwrap().to_exact();
        let zero = Descendant { exps: BTreeMap::from([(0, 0)]) };
        assert_eq!(vertex_lazy_local(&lp, &zero, 4).unwrap().to_exact(), plain);
        let tau = Descendant::root(&lp, 1, 1, 1).unwrap();
        let got = vertex_lazy_local(&lp, &tau, 4).unwrap().to_exact();
        for d in 0..=4u32 {
            let m = KMonomial(vec![d]);
            let a = Coefficient::gen(2).mul(&Coefficient::q().pow(d as i64).unwrap());
            assert_eq!(got.coeff(&m), plain.coeff(&m).mul(&a));
        }
    }

    #[test]
    fn empty_point_is_one() {
        let p = fp(5, 5, &[0; 5]);
        assert_eq!(vertex_series(&p, &Descendant::trivial(), 4).unwrap(), TruncatedSeries::one(5, 4));
        assert_eq!(product_series(5, &[0; 5], &[0, 0, 0, 0, 1], 4).unwrap(), TruncatedSeries::one(5, 4));
    }

    #[test]
    fn d4_first_order() {
        let s = vertex_series(&fp(4, 4, &[1, 2, 1, 1]), &Descendant::trivial(), 1).unwrap();
        assert!(s.coeff(&KMonomial::one(4)).is_one());
        assert_eq!(s.coeff(&KMonomial(vec![0, 1, 0, 0])), Coefficient::parse("(1-h)/(1-q)").unwrap());
        for i in [0, 2, 3] {
            assert!(s.coeff(&KMonomial::var(4, i)).is_zero());
        }
    }

    #[test]
    fn d4_spin_sweep() {
        for v in valid_dims(4, 4).unwrap() {
            let r = verify_product(4, &v, &[0, 0, 0, 1], 3, Mode::Exact).unwrap();
            assert!(r.equal, "{v:?}: {:?}", r.witness);
            for (_, c) in r.localization.as_ref().unwrap().terms() {
                assert!(c.arity() <= 2);
            }
        }
    }

    #[test]
    fn product_rejects_bad_input() {
        assert!(verify_product(4, &[2, 1, 1, 1], &[0, 0, 0, 1], 2, Mode::Exact).is_err());
        assert!(product_lazy(4, &[0; 4], &[0, 0, 1, 1], 2).is_err());
    }

    #[test]
    fn sampled_agrees() {
        let r = verify_product(5, &[2, 2, 2, 1, 1], &[1, 0, 0, 0, 0], 3, Mode::sampled(7)).unwrap();
        assert!(r.equal);
        assert!(r.localization.is_none());
    }

    #[test]
    fn reduction_small() {
        let r = reduction_check(5, 2, 3, Mode::Exact).unwrap();
        assert_eq!(r.v, vec![1, 1, 2, 1, 1]);
        assert_eq!(r.extra_roots.len(), 1);
        assert_eq!(r.extra_roots[0].c, r.v.iter().map(|&x| x as i32).collect::<Vec<_>>());
        assert!(r.equal, "{:?}", r.witness);
        assert!(reduction_check(5, 1, 2, Mode::Exact).is_err());
    }

    #[test]
    fn multi_framing_constant_term() {
        let pts = crate::posets::fixed_points(4, &[1, 1, 1, 1], &[1, 0, 0, 1]).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            let s = vertex_series(p, &Descendant::trivial(), 2).unwrap();
            assert!(s.coeff(&KMonomial::one(4)).is_one());
        }
    }
}
