//! Box products: `b_λ`, the even-leg variant, and the Pieri coefficients.

use std::collections::BTreeSet;

use super::Partition;
use crate::coeffs::{Coefficient, Factored, LMono};
use crate::error::{Error, Result};

/// `b_λ(s) = (1 − q^a h^{l+1}) / (1 − q^{a+1} h^l)`, and 1 for `s ∉ λ`.
pub fn b_box(lam: &Partition, i: usize, j: usize) -> Factored {
    let mut f = Factored::one();
    if let Ok((a, l)) = lam.box_stats(i, j) {
        f.mul_binomial(LMono::qh(a as i32, l as i32 + 1), 1);
        f.mul_binomial(LMono::qh(a as i32 + 1, l as i32), -1);
    }
    f
}

pub fn b_lambda_factored(lam: &Partition) -> Factored {
    lam.boxes().fold(Factored::one(), |acc, (i, j)| acc.mul(&b_box(lam, i, j)))
}

/// Product over boxes with even leg length.
pub fn b_el_factored(lam: &Partition) -> Factored {
    lam.boxes()
        .filter(|&(i, j)| lam.box_stats(i, j).map(|(_, l)| l % 2 == 0).unwrap_or(false))
        .fold(Factored::one(), |acc, (i, j)| acc.mul(&b_box(lam, i, j)))
}

pub fn b_lambda(lam: &Partition) -> Coefficient {
    b_lambda_factored(lam).to_coefficient()
}

pub fn b_el(lam: &Partition) -> Coefficient {
    b_el_factored(lam).to_coefficient()
}

/// Columns and rows of `λ` meeting `λ/μ`.
fn cols_rows(lam: &Partition, mu: &Partition) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let (mut c, mut r) = (BTreeSet::new(), BTreeSet::new());
    for (i, j) in lam.boxes() {
        if !mu.contains_box(i, j) {
            c.insert(j);
            r.insert(i);
        }
    }
    (c, r)
}

fn check_strip(lam: &Partition, mu: &Partition) -> Result<()> {
    if !lam.interlaces_above(mu) {
        return Err(Error::Domain(format!("{}/{} is not a horizontal strip", lam, mu)));
    }
    Ok(())
}

/// `φ_{λ/μ} = ∏_{s ∈ C} b_λ(s)/b_μ(s)`.
pub fn phi_factored(lam: &Partition, mu: &Partition) -> Result<Factored> {
    check_strip(lam, mu)?;
    let (c, _) = cols_rows(lam, mu);
    Ok(lam
        .boxes()
        .filter(|(_, j)| c.contains(j))
        .fold(Factored::one(), |acc, (i, j)| acc.mul(&b_box(lam, i, j)).mul(&b_box(mu, i, j).inv())))
}

/// `ψ_{λ/μ} = ∏_{s ∈ R − C} b_μ(s)/b_λ(s)`.
pub fn psi_factored(lam: &Partition, mu: &Partition) -> Result<Factored> {
    check_strip(lam, mu)?;
    let (c, r) = cols_rows(lam, mu);
    Ok(lam
        .boxes()
        .filter(|(i, j)| r.contains(i) && !c.contains(j))
        .fold(Factored::one(), |acc, (i, j)| acc.mul(&b_box(mu, i, j)).mul(&b_box(lam, i, j).inv())))
}

pub fn phi_psi(lam: &Partition, mu: &Partition) -> Result<(Coefficient, Coefficient)> {
    Ok((phi_factored(lam, mu)?.to_coefficient(), psi_factored(lam, mu)?.to_coefficient()))
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
    fn b_examples() {
        assert_eq!(b_lambda(&p(&[1])), c("(1-h)/(1-q)"));
        assert!(b_lambda(&Partition::empty()).is_one());
        assert_eq!(b_el(&p(&[1])), b_lambda(&p(&[1])));
        // (1,1): the top box has leg 1, only the bottom one counts
        assert_eq!(b_el(&p(&[1, 1])), c("(1-h)/(1-q)"));
        assert_eq!(b_lambda(&p(&[2])), c("(1-h)*(1-q*h)/((1-q)*(1-q^2))"));
    }

    #[test]
    fn phi_psi_examples() {
        let (phi, psi) = phi_psi(&p(&[1]), &Partition::empty()).unwrap();
        assert_eq!(phi, c("(1-h)/(1-q)"));
        assert!(psi.is_one());
        let l = p(&[3, 1]);
        let (phi, psi) = phi_psi(&l, &l).unwrap();
        assert!(phi.is_one() && psi.is_one());
        assert!(phi_psi(&p(&[2]), &p(&[1, 1])).is_err());
    }

    #[test]
    fn one_row_strip_matches_onevar() {
        // Q_(r)(x) = φ_{(r)/∅} x^r = (h)_r/(q)_r x^r
        for r in 0..6 {
            let phi = phi_factored(&Partition::rect(r, 1), &Partition::empty()).unwrap();
            assert_eq!(phi.to_coefficient(), crate::series::fbinom_coefficient(r).to_coefficient());
        }
    }
}
