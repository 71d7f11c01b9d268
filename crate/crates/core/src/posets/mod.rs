//! Minuscule posets of type D_n, valid dimension vectors and order ideals.

mod fixed;
mod rep;
mod rpp;

pub use fixed::{fixed_points, taut_weights, FixedPoint, LocalElement, LocalPoset, Slot, TautWeight};
pub use rep::{rep_and_check, rep_for_components, Matrix, QuiverRep, RepCheck};
pub use rpp::{for_each_labeling, is_order_reversing, rpp_enumerate, Direction, Rpp};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{edges, is_minuscule};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Family {
    Spin,
    Fundamental,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct PosetElement {
    pub id: (usize, usize),
    pub color: usize,
    pub hexp: u32,
}

/// Minuscule poset with colors and ħ-exponents; `covers` holds `(lower, upper)`
/// index pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredPoset {
    pub n: usize,
    pub node: usize,
    pub elements: Vec<PosetElement>,
    pub covers: Vec<(usize, usize)>,
}

/// Downward-closed subset, as sorted element indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
pub struct Ideal {
    pub members: Vec<usize>,
}

impl Ideal {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

pub fn family(n: usize, node: usize) -> Result<Family> {
    if n < 3 {
        return Err(Error::Domain(format!("unsupported rank D{}", n)));
    }
    if node == 1 {
        Ok(Family::Fundamental)
    } else if node == n - 1 || node == n {
        Ok(Family::Spin)
    } else {
        Err(Error::Domain(format!("node {} is not minuscule in D{}", node, n)))
    }
}

fn spin_elements(n: usize) -> Vec<(usize, usize, u32)> {
    let mut el = Vec::new();
    for i in 1..=n - 2 {
        for j in 1..=i {
            el.push((i, j, (n + j - i - 2) as u32));
        }
    }
    for j in 1..=(n - 1) / 2 {
        el.push((n - 1, j, (2 * j - 1) as u32));
    }
    for j in 1..=n / 2 {
        el.push((n, j, (2 * j - 2) as u32));
    }
    el
}

fn spin_covers(n: usize) -> Vec<((usize, usize), (usize, usize))> {
    let mut c = Vec::new();
    for i in 1..n.saturating_sub(2) {
        for j in 1..=i {
            c.push(((i + 1, j), (i, j)));
            c.push(((i, j), (i + 1, j + 1)));
        }
    }
    for j in 1..n {
        c.push(((n - 1, j), (n - 2, 2 * j)));
        c.push(((n - 2, 2 * j - 1), (n - 1, j)));
        c.push(((n, j), (n - 2, 2 * j - 1)));
        if j >= 2 {
            c.push(((n - 2, 2 * j - 2), (n, j)));
        }
    }
    c
}

fn fundamental_elements(n: usize) -> Vec<(usize, usize, u32)> {
    let mut el = Vec::new();
    for i in 1..=n - 2 {
        el.push((i, 1, 0));
        el.push((i, 2, (n - i - 1) as u32));
    }
    el.push((n - 1, 1, 0));
    el.push((n, 1, 0));
    el
}

fn fundamental_covers(n: usize) -> Vec<((usize, usize), (usize, usize))> {
    let mut c = Vec::new();
    for i in 1..=n - 2 {
        c.push(((i, 1), (i + 1, 1)));
    }
    for i in 1..n - 2 {
        c.push(((i + 1, 2), (i, 2)));
    }
    c.push(((n - 2, 1), (n, 1)));
    c.push(((n, 1), (n - 2, 2)));
    c.push(((n - 1, 1), (n - 2, 2)));
    c
}

/// The full minuscule poset for framing at `node`.
///
/// Node `n-1` reuses the spin poset with colors `n-1` and `n` exchanged.
pub fn build_poset(n: usize, node: usize) -> Result<ColoredPoset> {
    let fam = family(n, node)?;
    let (raw, cov) = match fam {
        Family::Spin => (spin_elements(n), spin_covers(n)),
        Family::Fundamental => (fundamental_elements(n), fundamental_covers(n)),
    };
    let color = |i: usize| {
        if node == n - 1 && fam == Family::Spin && i >= n - 1 {
            2 * n - 1 - i
        } else {
            i
        }
    };
    let elements: Vec<PosetElement> =
        raw.iter().map(|&(i, j, h)| PosetElement { id: (i, j), color: color(i), hexp: h }).collect();
    let pos = |id: (usize, usize)| elements.iter().position(|e| e.id == id);
    let mut covers: Vec<(usize, usize)> =
        cov.into_iter().filter_map(|(lo, up)| Some((pos(lo)?, pos(up)?))).collect();
    covers.sort();
    covers.dedup();
    Ok(ColoredPoset { n, node, elements, covers })
}

impl ColoredPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn family(&self) -> Family {
        family(self.n, self.node).expect("validated at construction")
    }

    pub fn index_of(&self, id: (usize, usize)) -> Option<usize> {
        self.elements.iter().position(|e| e.id == id)
    }

    pub fn lower_covers(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == x).map(|c| c.0)
    }

    /// The element the framing maps to.
    pub fn minimum(&self) -> usize {
        let id = match self.family() {
            Family::Spin => (self.n, 1),
            Family::Fundamental => (1, 1),
        };
        self.index_of(id).expect("minimum exists")
    }

    /// Topological order, smallest index first among available elements.
    pub fn linear_extension(&self) -> Vec<usize> {
        topo_order(self.len(), &self.covers)
    }

    pub fn is_ideal(&self, members: &[usize]) -> bool {
        let mut inside = vec![false; self.len()];
        for &m in members {
            inside[m] = true;
        }
        self.covers.iter().all(|&(lo, up)| !inside[up] || inside[lo])
    }

    /// All order ideals, sorted.
    pub fn ideals(&self) -> Vec<Ideal> {
        let order = self.linear_extension();
        let lower: Vec<Vec<usize>> = (0..self.len()).map(|x| self.lower_covers(x).collect()).collect();
        let mut inside = vec![false; self.len()];
        let mut out = Vec::new();
        fn rec(k: usize, order: &[usize], lower: &[Vec<usize>], inside: &mut Vec<bool>, out: &mut Vec<Ideal>) {
            if k == order.len() {
                let members = (0..inside.len()).filter(|&i| inside[i]).collect();
                out.push(Ideal { members });
                return;
            }
            let x = order[k];
            rec(k + 1, order, lower, inside, out);
            if lower[x].iter().all(|&l| inside[l]) {
                inside[x] = true;
                rec(k + 1, order, lower, inside, out);
                inside[x] = false;
            }
        }
        rec(0, &order, &lower, &mut inside, &mut out);
        out.sort();
        out
    }

    /// Number of members of each color `1..=n`.
    pub fn counts(&self, ideal: &Ideal) -> Vec<u32> {
        let mut c = vec![0u32; self.n];
        for &m in &ideal.members {
            c[self.elements[m].color - 1] += 1;
        }
        c
    }

    pub fn to_json(&self) -> serde_json::Value {
        let el: Vec<serde_json::Value> = self
            .elements
            .iter()
            .map(|e| serde_json::json!({"id": [e.id.0, e.id.1], "color": e.color, "hexp": e.hexp}))
            .collect();
        let cov: Vec<[usize; 2]> = self.covers.iter().map(|&(a, b)| [a, b]).collect();
        serde_json::json!({"n": self.n, "node": self.node, "elements": el, "covers": cov})
    }
}

pub(crate) fn topo_order(len: usize, covers: &[(usize, usize)]) -> Vec<usize> {
    let mut indeg = vec![0usize; len];
    for &(_, up) in covers {
        indeg[up] += 1;
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..len).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(len);
    while let Some(x) = ready.pop_first() {
        order.push(x);
        for &(lo, up) in covers {
            if lo == x {
                indeg[up] -= 1;
                if indeg[up] == 0 {
                    ready.insert(up);
                }
            }
        }
    }
    assert_eq!(order.len(), len, "covering relation has a cycle");
    order
}

/// `2(Σ_e v_o v_i + Σ v_i w_i − Σ v_i²)`.
pub fn quiver_dim(n: usize, v: &[u32], w: &[u32]) -> i64 {
    let v: Vec<i64> = v.iter().map(|&x| x as i64).collect();
    let w: Vec<i64> = w.iter().map(|&x| x as i64).collect();
    let e: i64 = edges(n).iter().map(|&(o, i)| v[o - 1] * v[i - 1]).sum();
    let vw: i64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    let vv: i64 = v.iter().map(|a| a * a).sum();
    2 * (e + vw - vv)
}

/// Dimension vectors with a nonempty (zero-dimensional) quiver variety for
/// framing at `node`, from the explicit classification.
pub fn valid_dims(n: usize, node: usize) -> Result<Vec<Vec<u32>>> {
    let mut out = match family(n, node)? {
        Family::Spin => {
            let mut out = Vec::new();
            for mask in 0u32..1 << (n - 2) {
                // bit 0 is v_1, then the increments v_{i+1} - v_i
                let mut v = vec![mask & 1];
                for k in 1..n - 2 {
                    v.push(v[k - 1] + (mask >> k & 1));
                }
                for s in [v[n - 3], v[n - 3] + 1] {
                    let mut u = v.clone();
                    if node == n {
                        u.extend([s / 2, s.div_ceil(2)]);
                    } else {
                        u.extend([s.div_ceil(2), s / 2]);
                    }
                    out.push(u);
                }
            }
            out
        }
        Family::Fundamental => {
            let mut out: Vec<Vec<u32>> = (0..=n).map(|k| [vec![1; k], vec![0; n - k]].concat()).collect();
            for k in 0..=n - 3 {
                out.push([vec![1; k], vec![2; n - k - 2], vec![1, 1]].concat());
            }
            out.push([vec![1; n - 2], vec![0, 1]].concat());
            out
        }
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// The unique ideal with color counts `v`.
pub fn ideal_for_dim(poset: &ColoredPoset, v: &[u32]) -> Result<Ideal> {
    let hits: Vec<Ideal> = poset.ideals().into_iter().filter(|i| poset.counts(i) == v).collect();
    match hits.len() {
        1 => Ok(hits.into_iter().next().unwrap()),
        k => Err(Error::Bijection(format!("{} ideals of the D{} node-{} poset have counts {:?}", k, poset.n, poset.node, v))),
    }
}

/// Checks `w` is a framing vector supported on minuscule nodes.
pub fn check_framing(n: usize, w: &[u32]) -> Result<()> {
    if w.len() != n {
        return Err(Error::Domain(format!("framing vector must have length {}", n)));
    }
    match (1..=n).find(|&i| w[i - 1] > 0 && !is_minuscule(n, i)) {
        Some(i) => Err(Error::Domain(format!("framing at non-minuscule node {}", i))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexp(p: &ColoredPoset, id: (usize, usize)) -> u32 {
        p.elements[p.index_of(id).unwrap()].hexp
    }

    #[test]
    fn d4_spin_weights() {
        let p = build_poset(4, 4).unwrap();
        let h: Vec<u32> = [(1, 1), (2, 1), (3, 1), (4, 1)].iter().map(|&id| hexp(&p, id)).collect();
        assert_eq!(h, vec![2, 1, 1, 0]);
    }

    #[test]
    fn d5_fundamental() {
        let p = build_poset(5, 1).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(hexp(&p, (1, 2)), 3);
        assert_eq!(p.ideals().len(), 10);
    }

    #[test]
    fn ideal_counts_match_classification() {
        for n in 3..=8 {
            for node in [1, n - 1, n] {
                let p = build_poset(n, node).unwrap();
                let ideals = p.ideals();
                let want = if node == 1 { 2 * n } else { 1 << (n - 1) };
                assert_eq!(ideals.len(), want, "n={n} node={node}");
                let mut counts: Vec<Vec<u32>> = ideals.iter().map(|i| p.counts(i)).collect();
                counts.sort();
                assert_eq!(counts, valid_dims(n, node).unwrap(), "n={n} node={node}");
            }
        }
    }

    #[test]
    fn dims_have_zero_dimension() {
        for n in 3..=8 {
            for node in [1, n - 1, n] {
                let mut w = vec![0; n];
                w[node - 1] = 1;
                for v in valid_dims(n, node).unwrap() {
                    assert_eq!(quiver_dim(n, &v, &w), 0, "{v:?}");
                }
            }
        }
        // 2(170 + 11 - 179); the formula does not give 0 here
        assert_eq!(quiver_dim(6, &[3, 5, 7, 8, 4, 4], &[1, 0, 0, 0, 1, 1]), 4);
        assert_eq!(quiver_dim(4, &[1, 2, 1, 1], &[0, 0, 0, 1]), 0);
        assert_eq!(quiver_dim(4, &[0; 4], &[0, 0, 0, 1]), 0);
    }

    #[test]
    fn figure_ideals() {
        let p = build_poset(4, 4).unwrap();
        let i = ideal_for_dim(&p, &[1, 2, 1, 1]).unwrap();
        let mut ids: Vec<(usize, usize)> = i.members.iter().map(|&m| p.elements[m].id).collect();
        ids.sort();
        assert_eq!(ids, vec![(1, 1), (2, 1), (2, 2), (3, 1), (4, 1)]);
        assert!(ideal_for_dim(&p, &[0; 4]).unwrap().is_empty());
        let f = build_poset(5, 1).unwrap();
        assert_eq!(ideal_for_dim(&f, &[2, 2, 2, 1, 1]).unwrap().len(), 8);
        assert!(matches!(ideal_for_dim(&p, &[9, 9, 9, 9]), Err(Error::Bijection(_))));
    }

    #[test]
    fn node_swap_keeps_weights() {
        let a = build_poset(5, 5).unwrap();
        let b = build_poset(5, 4).unwrap();
        for (x, y) in a.elements.iter().zip(&b.elements) {
            assert_eq!((x.id, x.hexp), (y.id, y.hexp));
        }
        assert_eq!(a.covers, b.covers);
        assert_eq!(b.elements[b.index_of((5, 1)).unwrap()].color, 4);
    }

    #[test]
    fn bad_nodes() {
        assert!(build_poset(5, 2).is_err());
        assert!(build_poset(2, 1).is_err());
    }
}
