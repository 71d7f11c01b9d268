//! Torus fixed points for minuscule framings: one ideal per framing slot.

use std::fmt;

use serde::Serialize;

use super::{build_poset, check_framing, topo_order, ColoredPoset, Ideal};
use crate::error::{Error, Result};

/// Framing slot `(i, j)`: the `j`-th framing direction at node `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Slot {
    pub node: usize,
    pub j: usize,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}_{}", self.node, self.j)
    }
}

/// All framing slots of `w`, ordered by `(node, j)`.
pub fn slots(w: &[u32]) -> Vec<Slot> {
    let mut s = Vec::new();
    for (i, &k) in w.iter().enumerate() {
        for j in 1..=k as usize {
            s.push(Slot { node: i + 1, j });
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub n: usize,
    pub v: Vec<u32>,
    pub w: Vec<u32>,
    pub components: Vec<(Slot, ColoredPoset, Ideal)>,
}

/// One element of the disjoint union of the component ideals.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct LocalElement {
    /// Index into the fixed point's components.
    pub slot: usize,
    pub id: (usize, usize),
    pub color: usize,
    pub hexp: u32,
}

/// The disjoint union of the ideals of a fixed point as a colored poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPoset {
    pub n: usize,
    pub slots: Vec<Slot>,
    pub elements: Vec<LocalElement>,
    pub covers: Vec<(usize, usize)>,
}

impl LocalPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn linear_extension(&self) -> Vec<usize> {
        topo_order(self.len(), &self.covers)
    }

    /// Reflexive-transitive order relation as a matrix.
    pub fn order_matrix(&self) -> Vec<Vec<bool>> {
        let m = self.len();
        let mut le = vec![vec![false; m]; m];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for x in self.linear_extension() {
            for &(lo, up) in &self.covers {
                if up == x {
                    for k in 0..m {
                        if le[k][lo] {
                            le[k][x] = true;
                        }
                    }
                }
            }
        }
        le
    }

    /// A single-element poset of color 1 framed by one slot at node 1; used
    /// for the one-node quiver.
    pub fn single() -> LocalPoset {
        LocalPoset {
            n: 1,
            slots: vec![Slot { node: 1, j: 1 }],
            elements: vec![LocalElement { slot: 0, id: (1, 1), color: 1, hexp: 0 }],
            covers: Vec::new(),
        }
    }
}

impl FixedPoint {
    /// The fixed point for a single framing at `node` with dimension `v`.
    pub fn single(n: usize, node: usize, v: &[u32]) -> Result<FixedPoint> {
        let mut w = vec![0; n];
        if node == 0 || node > n {
            return Err(Error::Domain(format!("node {} out of range", node)));
        }
        w[node - 1] = 1;
        let pts = fixed_points(n, v, &w)?;
        pts.into_iter()
            .next()
            .ok_or_else(|| Error::Domain(format!("v = {:?} is not a valid dimension vector for node {}", v, node)))
    }

    pub fn slots(&self) -> Vec<Slot> {
        self.components.iter().map(|c| c.0).collect()
    }

    pub fn local(&self) -> LocalPoset {
        let mut elements = Vec::new();
        let mut covers = Vec::new();
        for (s, (_, poset, ideal)) in self.components.iter().enumerate() {
            let base = elements.len();
            for &m in &ideal.members {
                let e = poset.elements[m];
                elements.push(LocalElement { slot: s, id: e.id, color: e.color, hexp: e.hexp });
            }
            let local = |x: usize| ideal.members.binary_search(&x).ok().map(|k| base + k);
            for &(lo, up) in &poset.covers {
                if let (Some(a), Some(b)) = (local(lo), local(up)) {
                    covers.push((a, b));
                }
            }
        }
        LocalPoset { n: self.n, slots: self.slots(), elements, covers }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let comps: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|(s, p, i)| {
                let ids: Vec<[usize; 2]> = i.members.iter().map(|&m| [p.elements[m].id.0, p.elements[m].id.1]).collect();
                serde_json::json!({"slot": s.to_string(), "dims": p.counts(i), "elements": ids})
            })
            .collect();
        serde_json::json!({"n": self.n, "v": self.v, "w": self.w, "components": comps})
    }
}

/// All tuples of ideals, one per framing slot, whose color counts add to `v`.
pub fn fixed_points(n: usize, v: &[u32], w: &[u32]) -> Result<Vec<FixedPoint>> {
    check_framing(n, w)?;
    if v.len() != n {
        return Err(Error::Domain(format!("dimension vector must have length {}", n)));
    }
    let slots = slots(w);
    let mut choices = Vec::new();
    for s in &slots {
        let p = build_poset(n, s.node)?;
        let ideals: Vec<(Ideal, Vec<u32>)> = p.ideals().into_iter().map(|i| {
            let c = p.counts(&i);
            (i, c)
        }).collect();
        choices.push((p, ideals));
    }
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(
        k: usize,
        rest: Vec<i64>,
        choices: &[(ColoredPoset, Vec<(Ideal, Vec<u32>)>)],
        pick: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == choices.len() {
            if rest.iter().all(|&x| x == 0) {
                out.push(pick.clone());
            }
            return;
        }
        for (idx, (_, c)) in choices[k].1.iter().enumerate() {
            let r: Vec<i64> = rest.iter().zip(c).map(|(a, &b)| a - b as i64).collect();
            if r.iter().all(|&x| x >= 0) {
                pick.push(idx);
                rec(k + 1, r, choices, pick, out);
                pick.pop();
            }
        }
    }
    let mut picks = Vec::new();
    rec(0, v.iter().map(|&x| x as i64).collect(), &choices, &mut pick, &mut picks);
    for p in picks {
        let components = p
            .iter()
            .enumerate()
            .map(|(k, &idx)| (slots[k], choices[k].0.clone(), choices[k].1[idx].0.clone()))
            .collect();
        out.push(FixedPoint { n, v: v.to_vec(), w: w.to_vec(), components });
    }
    Ok(out)
}

/// `a_slot · h^hexp`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct TautWeight {
    pub slot: Slot,
    pub hexp: u32,
}

impl fmt::Display for TautWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hexp {
            0 => write!(f, "{}", self.slot),
            1 => write!(f, "{}*h", self.slot),
            k => write!(f, "{}*h^{}", self.slot, k),
        }
    }
}

/// Weights of the tautological bundles at `p`, per color `1..=n`, sorted.
pub fn taut_weights(p: &FixedPoint) -> Vec<Vec<TautWeight>> {
    let mut out = vec![Vec::new(); p.n];
    for (slot, poset, ideal) in &p.components {
        for &m in &ideal.members {
            let e = poset.elements[m];
            out[e.color - 1].push(TautWeight { slot: *slot, hexp: e.hexp });
        }
    }
    for c in out.iter_mut() {
        c.sort();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d6_example_splitting_present() {
        let pts = fixed_points(6, &[3, 5, 7, 8, 4, 4], &[1, 0, 0, 0, 1, 1]).unwrap();
        let want = vec![vec![1, 2, 2, 2, 1, 1], vec![1, 2, 3, 3, 2, 1], vec![1, 1, 2, 3, 1, 2]];
        let hit = pts.iter().any(|p| p.components.iter().map(|(_, po, i)| po.counts(i)).collect::<Vec<_>>() == want);
        assert!(hit);
    }

    #[test]
    fn single_framing_points() {
        for n in 3..=6 {
            for node in [1, n - 1, n] {
                let mut w = vec![0; n];
                w[node - 1] = 1;
                for v in super::super::valid_dims(n, node).unwrap() {
                    assert_eq!(fixed_points(n, &v, &w).unwrap().len(), 1);
                }
                let mut bad = vec![0; n];
                bad[0] = 5;
                assert!(fixed_points(n, &bad, &w).unwrap().is_empty());
            }
        }
        let pts = fixed_points(5, &[0; 5], &[1, 0, 0, 2, 1]).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(taut_weights(&pts[0]).iter().all(|c| c.is_empty()));
    }

    #[test]
    fn taut_cardinalities() {
        let pts = fixed_points(6, &[3, 5, 7, 8, 4, 4], &[1, 0, 0, 0, 1, 1]).unwrap();
        for p in &pts {
            let t = taut_weights(p);
            let c: Vec<u32> = t.iter().map(|x| x.len() as u32).collect();
            assert_eq!(c, p.v);
        }
    }
}
