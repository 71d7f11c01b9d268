//! Quiver representations built from posets, the moment map and stability.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{FixedPoint, LocalPoset};
use crate::roots::edges;

/// Dense matrix, rows of entries.
pub type Matrix = Vec<Vec<BigRational>>;

fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![BigRational::zero(); c]; r]
}

fn matmul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] += &row[k] * &b[k][j];
            }
        }
    }
    out
}

fn apply(m: &Matrix, v: &[BigRational]) -> Vec<BigRational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Representation `(X, Y, A, B)`: `x[e]: V_o -> V_i`, `y[e]: V_i -> V_o` for
/// edge `e = (o, i)`, `a[k]: W_k -> V_k`, `b[k]: V_k -> W_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    pub n: usize,
    pub dims: Vec<usize>,
    pub framing: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub x: Vec<Matrix>,
    pub y: Vec<Matrix>,
    pub a: Vec<Matrix>,
    pub b: Vec<Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepCheck {
    pub moment_ok: bool,
    pub stable: bool,
}

/// Basis of each `V_k` as local element indices, in element order.
fn bases(lp: &LocalPoset) -> Vec<Vec<usize>> {
    let mut b = vec![Vec::new(); lp.n];
    for (idx, e) in lp.elements.iter().enumerate() {
        b[e.color - 1].push(idx);
    }
    b
}

/// The 0/1 representative attached to a union of ideals.
///
/// With `signed`, the `Y` entry of the cover `d_{n,1} < d_{n-2,2}` in
/// fundamental components is `-1`; the plain 0/1 matrices miss the moment map
/// on the diamond above `d_{n-2,1}`.
pub fn rep_for_components(lp: &LocalPoset, signed: bool) -> QuiverRep {
    let n = lp.n;
    let es = edges(n);
    let basis = bases(lp);
    let pos = |idx: usize| {
        let c = lp.elements[idx].color - 1;
        basis[c].iter().position(|&x| x == idx).unwrap()
    };
    let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();
    let mut x: Vec<Matrix> = es.iter().map(|&(o, i)| zeros(dims[i - 1], dims[o - 1])).collect();
    let mut y: Vec<Matrix> = es.iter().map(|&(o, i)| zeros(dims[o - 1], dims[i - 1])).collect();
    for &(lo, up) in &lp.covers {
        let (cl, cu) = (lp.elements[lo].color, lp.elements[up].color);
        for (k, &(o, i)) in es.iter().enumerate() {
            if cl == o && cu == i {
                x[k][pos(up)][pos(lo)] = BigRational::one();
            } else if cl == i && cu == o {
                let e = &lp.elements[lo];
                let flip = signed
                    && lp.slots[e.slot].node == 1
                    && e.id == (n, 1)
                    && lp.elements[up].id == (n - 2, 2);
                let val = if flip { -BigRational::one() } else { BigRational::one() };
                y[k][pos(up)][pos(lo)] = val;
            }
        }
    }
    let mut framing = vec![0usize; n];
    for s in &lp.slots {
        framing[s.node - 1] += 1;
    }
    let mut a: Vec<Matrix> = (0..n).map(|k| zeros(dims[k], framing[k])).collect();
    let b: Vec<Matrix> = (0..n).map(|k| zeros(framing[k], dims[k])).collect();
    let mut seen = vec![0usize; n];
    for (s_idx, s) in lp.slots.iter().enumerate() {
        let col = seen[s.node - 1];
        seen[s.node - 1] += 1;
        // the minimal element of this component, if the ideal is nonempty
        let min = lp.elements.iter().enumerate().find(|(idx, e)| {
            e.slot == s_idx && !lp.covers.iter().any(|&(_, up)| up == *idx)
        });
        if let Some((idx, e)) = min {
            a[e.color - 1][pos(idx)][col] = BigRational::one();
        }
    }
    QuiverRep { n, dims, framing, edges: es, x, y, a, b }
}

impl QuiverRep {
    /// `Σ_{i(e)=k} X_e Y_e − Σ_{o(e)=k} Y_e X_e + A_k B_k` for each node.
    pub fn moment_map(&self) -> Vec<Matrix> {
        (1..=self.n)
            .map(|k| {
                let d = self.dims[k - 1];
                let mut m = matmul(&self.a[k - 1], &self.b[k - 1], self.framing[k - 1], d);
                for (e, &(o, i)) in self.edges.iter().enumerate() {
                    if i == k {
                        let t = matmul(&self.x[e], &self.y[e], self.dims[o - 1], d);
                        add_into(&mut m, &t, false);
                    }
                    if o == k {
                        let t = matmul(&self.y[e], &self.x[e], self.dims[i - 1], d);
                        add_into(&mut m, &t, true);
                    }
                }
                m
            })
            .collect()
    }

    /// Smallest `X, Y`-stable subspace collection containing `Im(A)` is everything.
    pub fn is_stable(&self) -> bool {
        let mut span: Vec<Echelon> = self.dims.iter().map(|_| Echelon::new()).collect();
        for k in 0..self.n {
            for c in 0..self.framing[k] {
                let col: Vec<BigRational> = self.a[k].iter().map(|r| r[c].clone()).collect();
                span[k].insert(col);
            }
        }
        loop {
            let mut grew = false;
            for (e, &(o, i)) in self.edges.iter().enumerate() {
                for v in span[o - 1].rows.clone() {
                    grew |= span[i - 1].insert(apply(&self.x[e], &v));
                }
                for v in span[i - 1].rows.clone() {
                    grew |= span[o - 1].insert(apply(&self.y[e], &v));
                }
            }
            if !grew {
                break;
            }
        }
        span.iter().zip(&self.dims).all(|(s, &d)| s.rows.len() == d)
    }

    pub fn check(&self) -> RepCheck {
        let moment_ok = self.moment_map().iter().all(|m| m.iter().flatten().all(|x| x.is_zero()));
        RepCheck { moment_ok, stable: self.is_stable() }
    }
}

fn add_into(m: &mut Matrix, t: &Matrix, negate: bool) {
    for (r, tr) in m.iter_mut().zip(t) {
        for (a, b) in r.iter_mut().zip(tr) {
            if negate {
                *a -= b;
            } else {
                *a += b;
            }
        }
    }
}

/// Row echelon basis of a subspace.
struct Echelon {
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon { rows: Vec::new(), pivots: Vec::new() }
    }

    /// Adds `v` to the span; returns whether the span grew.
    fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= &c * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let c = v[p].clone();
                for x in v.iter_mut() {
                    *x /= &c;
                }
                for (r, _) in self.rows.iter_mut().zip(&self.pivots) {
                    if !r[p].is_zero() {
                        let k = r[p].clone();
                        for (x, y) in r.iter_mut().zip(&v) {
                            *x -= &k * y;
                        }
                    }
                }
                self.rows.push(v);
                self.pivots.push(p);
                true
            }
        }
    }
}

/// Representative of a fixed point and its checks.
pub fn rep_and_check(p: &FixedPoint, signed: bool) -> (QuiverRep, RepCheck) {
    let rep = rep_for_components(&p.local(), signed);
    let check = rep.check();
    (rep, check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posets::{build_poset, valid_dims, FixedPoint};

    #[test]
    fn spin_ideals_pass() {
        for v in valid_dims(5, 5).unwrap() {
            let p = FixedPoint::single(5, 5, &v).unwrap();
            let (_, c) = rep_and_check(&p, false);
            assert!(c.moment_ok && c.stable, "{v:?}");
        }
        let p = FixedPoint::single(4, 4, &[0; 4]).unwrap();
        assert_eq!(rep_and_check(&p, false).1, RepCheck { moment_ok: true, stable: true });
    }

    #[test]
    fn mutant_is_unstable() {
        let p = FixedPoint::single(4, 4, &[1, 2, 1, 1]).unwrap();
        let (mut rep, c) = rep_and_check(&p, false);
        assert!(c.stable);
        // X on the edge 2 -> 3 carries d_{2,1} to d_{3,1}, the only way up to d_{3,1}
        let e = rep.edges.iter().position(|&e| e == (2, 3)).unwrap();
        for row in rep.x[e].iter_mut() {
            for x in row.iter_mut() {
                *x = BigRational::zero();
            }
        }
        assert!(!rep.check().stable);
    }

    #[test]
    fn fundamental_diamond_needs_sign() {
        let p = FixedPoint::single(5, 1, &[2, 2, 2, 1, 1]).unwrap();
        assert!(!rep_and_check(&p, false).1.moment_ok);
        let c = rep_and_check(&p, true).1;
        assert!(c.moment_ok && c.stable);
        assert_eq!(build_poset(5, 1).unwrap().minimum(), 0);
    }
}
