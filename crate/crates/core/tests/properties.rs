use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use dvertex::coeffs::{coeff_eq, Coefficient, Factored, KeyFrac, LMono, Mode};
use dvertex::macdonald::{dominated_by, fbinom_product_coeffs, gram_schmidt_p, partitions_of};
use dvertex::series::{fbinom_coefficient, KMonomial, TruncatedSeries};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `Σ c q^a h^b / ∏ (1 − q^i h^j)`.
fn coeff() -> impl Strategy<Value = Coefficient> {
    let num = prop::collection::vec((-3i64..=3, 0i64..3, 0i64..3), 1..3);
    let den = prop::collection::vec((0i64..3, 0i64..2).prop_filter("nonconstant", |&(a, b)| a + b > 0), 0..2);
    (num, den).prop_map(|(num, den)| {
        let n = num.iter().fold(Coefficient::zero(2), |acc, &(c, a, b)| acc.add(&Coefficient::monomial(rat(c), a, b)));
        let d = den.iter().fold(Coefficient::one(2), |acc, &(a, b)| {
            acc.mul(&Coefficient::one(2).sub(&Coefficient::monomial(rat(1), a, b)))
        });
        n.div(&d).unwrap()
    })
}

fn series(cap: u32) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0u32..3, 0u32..3, coeff()), 0..4)
        .prop_map(move |ts| TruncatedSeries::from_terms(2, cap, ts.into_iter().map(|(a, b, c)| (KMonomial(vec![a, b]), c))))
}

fn sampled() -> Mode {
    Mode::Sampled { points: 3, seed: 0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn field_axioms(a in coeff(), b in coeff(), c in coeff()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn normal_form_is_idempotent(a in coeff()) {
        let again = Coefficient::new(a.numer().clone(), a.denom().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        prop_assert_eq!(Coefficient::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn exact_and_sampled_agree(a in coeff(), b in coeff(), c in coeff()) {
        let l = a.mul(&b.add(&c));
        let r = a.mul(&b).add(&a.mul(&c));
        prop_assert!(coeff_eq(&l, &r, Mode::Exact).unwrap());
        prop_assert!(coeff_eq(&l, &r, sampled()).unwrap());
        let off = r.add(&Coefficient::one(2));
        prop_assert_eq!(coeff_eq(&l, &off, Mode::Exact).unwrap(), coeff_eq(&l, &off, sampled()).unwrap());
        prop_assert_eq!(coeff_eq(&a, &b, Mode::Exact).unwrap(), coeff_eq(&a, &b, sampled()).unwrap());
    }

    #[test]
    fn series_ring(a in series(3), b in series(3), c in series(3)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
    }

    /// `(1 − h z) F(q z) = (1 − z) F(z)` coefficientwise.
    #[test]
    fn fbinom_functional_equation(d in 1u32..16) {
        let f = |k: u32| KeyFrac::from_factored(&fbinom_coefficient(k));
        let mono = |qe: i32, he: i32| KeyFrac::from_factored(&Factored::monomial(rat(1), LMono::qh(qe, he)));
        let lhs = f(d).mul(&mono(d as i32, 0)).sub(&f(d - 1).mul(&mono(d as i32 - 1, 1)));
        let rhs = f(d).sub(&f(d - 1));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn fbinom_sum_matches_product(d in 0u32..9) {
        let g = fbinom_product_coeffs(d);
        prop_assert_eq!(&g[d as usize], &fbinom_coefficient(d).to_coefficient());
    }

    /// `P_λ` is unitriangular in `m` with respect to dominance.
    #[test]
    fn gram_schmidt_triangular(k in 0u32..6, pick in any::<prop::sample::Index>()) {
        let parts = partitions_of(k);
        let lam = pick.get(&parts);
        let p = gram_schmidt_p(lam, k as usize).unwrap();
        let m = p.to_mpoly();
        for mu in &parts {
            let mut e: Vec<i32> = mu.parts().iter().map(|&x| x as i32).collect();
            e.resize(k as usize, 0);
            let c = m.terms.get(&e).cloned().unwrap_or_else(|| Coefficient::zero(2));
            if mu == lam {
                prop_assert!(c.is_one());
            } else if !dominated_by(mu, lam) {
                prop_assert!(c.is_zero(), "{} has m_{} term", lam, mu);
            }
        }
    }
}
