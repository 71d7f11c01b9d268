//! Bivariate gcd over ℚ by primitive-part Euclid in `(ℚ[h])[q]`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Mono, Poly};

type UPoly = Vec<BigRational>;
type BPoly = Vec<UPoly>;

fn u_trim(mut a: UPoly) -> UPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn u_sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    u_trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn u_mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    u_trim(r)
}

fn u_divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b.last().expect("division by zero polynomial").clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        q[shift] = c;
        r = u_trim(r);
    }
    (u_trim(q), r)
}

fn u_monic(a: UPoly) -> UPoly {
    match a.last() {
        None => a,
        Some(l) => {
            let l = l.clone();
            a.into_iter().map(|c| c / &l).collect()
        }
    }
}

fn u_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = u_divrem(&a, &b);
        a = b;
        b = r;
    }
    u_monic(a)
}

fn to_b(p: &Poly) -> BPoly {
    let dq = p.degree_in(0) as usize;
    let mut b: BPoly = vec![Vec::new(); dq + 1];
    for (m, c) in p.terms() {
        let row = &mut b[m.exp(0) as usize];
        let e = m.exp(1) as usize;
        if row.len() <= e {
            row.resize(e + 1, BigRational::zero());
        }
        row[e] = c.clone();
    }
    b
}

fn from_b(b: &BPoly) -> Poly {
    let mut p = Poly::zero(2);
    for (i, row) in b.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            p.add_term(Mono::from_exps(&[i as u32, j as u32]), c.clone());
        }
    }
    p
}

fn b_trim(mut a: BPoly) -> BPoly {
    while a.last().is_some_and(|r| r.is_empty()) {
        a.pop();
    }
    a
}

fn content(a: &BPoly) -> UPoly {
    let mut g: UPoly = Vec::new();
    for row in a {
        if !row.is_empty() {
            g = u_gcd(&g, row);
            if g.len() == 1 {
                break;
            }
        }
    }
    g
}

fn primitive(a: &BPoly) -> BPoly {
    let c = content(a);
    a.iter()
        .map(|row| if row.is_empty() { Vec::new() } else { u_divrem(row, &c).0 })
        .collect()
}

/// Pseudo-remainder of `a` by `b` in `(ℚ[h])[q]`.
fn prem(a: &BPoly, b: &BPoly) -> BPoly {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        let mut next: BPoly = r.iter().map(|x| u_mul(x, &lb)).collect();
        for (j, y) in b.iter().enumerate() {
            let t = u_mul(&lr, y);
            next[shift + j] = u_sub(&next[shift + j], &t);
        }
        r = b_trim(next);
    }
    r
}

/// Greatest common divisor of two polynomials in `q, h`, up to a unit.
pub fn gcd2(a: &Poly, b: &Poly) -> Poly {
    debug_assert!(a.used_arity() <= 2 && b.used_arity() <= 2);
    if a.is_zero() {
        return b.clone().with_arity(2);
    }
    if b.is_zero() {
        return a.clone().with_arity(2);
    }
    let (ba, bb) = (b_trim(to_b(a)), b_trim(to_b(b)));
    let c = u_gcd(&content(&ba), &content(&bb));
    let (mut x, mut y) = (primitive(&ba), primitive(&bb));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    let g = loop {
        if y.len() == 1 {
            // constant in q and primitive: a unit
            break vec![vec![BigRational::one()]];
        }
        let r = prem(&x, &y);
        if r.is_empty() {
            break y;
        }
        x = y;
        y = primitive(&r);
    };
    let g: BPoly = g.iter().map(|row| u_mul(row, &c)).collect();
    from_b(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Poly {
        Poly::var(2, 0)
    }
    fn h() -> Poly {
        Poly::var(2, 1)
    }
    fn one() -> Poly {
        Poly::one(2)
    }

    fn assoc(a: &Poly, b: &Poly) -> bool {
        a.div_exact(b).is_some_and(|x| x.total_degree() == 0)
    }

    #[test]
    fn common_factor_found() {
        let f = one().sub(&q().mul(&h()));
        let a = f.mul(&one().sub(&q()));
        let b = f.mul(&one().add(&h())).mul(&f);
        assert!(assoc(&gcd2(&a, &b), &f));
    }

    #[test]
    fn content_in_h_found() {
        let f = one().sub(&h());
        let a = f.mul(&q());
        let b = f.mul(&one().add(&q()));
        assert!(assoc(&gcd2(&a, &b), &f));
    }

    #[test]
    fn coprime() {
        let a = one().sub(&q());
        let b = one().sub(&h());
        assert!(gcd2(&a, &b).total_degree() == 0);
    }
}
