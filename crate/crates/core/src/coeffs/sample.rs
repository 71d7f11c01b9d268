//! Pseudo-random evaluation points and arithmetic modulo a Mersenne prime.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 2^61 - 1.
pub const PRIME: u64 = (1u64 << 61) - 1;

/// Sample values are drawn as `num/den` with both parts in this range.
pub const SAMPLE_LO: u64 = 2;
pub const SAMPLE_HI: u64 = 1 << 31;

pub fn mod_add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

pub fn mod_sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

pub fn mod_mul(a: u64, b: u64) -> u64 {
    let p = (a as u128) * (b as u128);
    let lo = (p as u64) & PRIME;
    let hi = (p >> 61) as u64;
    mod_add(lo, hi)
}

pub fn mod_pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mod_mul(r, a);
        }
        a = mod_mul(a, a);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue.
pub fn mod_inv(a: u64) -> Option<u64> {
    if a == 0 {
        None
    } else {
        Some(mod_pow(a, PRIME - 2))
    }
}

fn int_mod(x: &BigInt) -> u64 {
    let m = BigInt::from(PRIME);
    let r = x % &m;
    let r = if r.sign() == Sign::Minus { r + &m } else { r };
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Image of a rational number, `None` if its denominator vanishes mod the prime.
pub fn rat_mod(x: &BigRational) -> Option<u64> {
    let n = int_mod(x.numer());
    let d = mod_inv(int_mod(x.denom()))?;
    Some(mod_mul(n, d))
}

/// A point at which every generator takes a nonzero rational value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationPoint {
    pub values: Vec<BigRational>,
    pub seed: u64,
    pub index: u64,
}

impl EvaluationPoint {
    /// The `index`-th point of the stream determined by `seed`.
    pub fn sample(arity: usize, seed: u64, index: u64) -> EvaluationPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let values = (0..arity)
            .map(|_| {
                let n = rng.random_range(SAMPLE_LO..=SAMPLE_HI);
                let d = rng.random_range(SAMPLE_LO..=SAMPLE_HI);
                BigRational::new(BigInt::from(n), BigInt::from(d))
            })
            .collect();
        EvaluationPoint { values, seed, index }
    }

    pub fn residues(&self) -> Vec<u64> {
        self.values
            .iter()
            .map(|v| rat_mod(v).expect("sample denominators are below the prime"))
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.values.iter().all(|v| !v.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        for a in [1u64, 2, 12345, PRIME - 1] {
            assert_eq!(mod_mul(a, mod_inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn rational_image() {
        let x = BigRational::new(BigInt::from(-3), BigInt::from(7));
        let r = rat_mod(&x).unwrap();
        assert_eq!(mod_mul(r, 7), mod_sub(0, 3));
    }

    #[test]
    fn points_are_reproducible() {
        let a = EvaluationPoint::sample(3, 9, 1);
        let b = EvaluationPoint::sample(3, 9, 1);
        assert_eq!(a, b);
        assert_ne!(a, EvaluationPoint::sample(3, 9, 2));
        assert!(a.is_valid());
    }
}
