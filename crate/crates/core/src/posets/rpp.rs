//! Monotone labelings of a local poset with bounded total.

use serde::Serialize;

use super::{FixedPoint, LocalPoset};

/// Reverse plane partition: `x <= y` implies `values[y] <= values[x]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Rpp {
    pub values: Vec<u32>,
}

impl Rpp {
    pub fn total(&self) -> u32 {
        self.values.iter().sum()
    }

    /// Sum of labels per color `1..=n`.
    pub fn degree(&self, lp: &LocalPoset) -> Vec<u32> {
        let mut d = vec![0; lp.n];
        for (e, &v) in lp.elements.iter().zip(&self.values) {
            d[e.color - 1] += v;
        }
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Labels weakly decrease going up.
    Reversing,
    /// Labels weakly increase going up.
    Preserving,
}

/// Calls `f` on every labeling in direction `dir` with total at most `cap`,
/// in lex order of the values read along the linear extension.
pub fn for_each_labeling(lp: &LocalPoset, cap: u32, dir: Direction, mut f: impl FnMut(&[u32])) {
    let order = lp.linear_extension();
    let m = lp.len();
    let lower: Vec<Vec<usize>> =
        (0..m).map(|x| lp.covers.iter().filter(|c| c.1 == x).map(|c| c.0).collect()).collect();
    let le = lp.order_matrix();
    let up_size: Vec<u32> = (0..m).map(|x| (0..m).filter(|&y| le[x][y]).count() as u32).collect();
    let mut vals = vec![0u32; m];
    struct Ctx<'a, F> {
        order: &'a [usize],
        lower: &'a [Vec<usize>],
        up_size: &'a [u32],
        dir: Direction,
        f: F,
    }
    fn rec<F: FnMut(&[u32])>(ctx: &mut Ctx<'_, F>, k: usize, left: u32, vals: &mut Vec<u32>) {
        if k == ctx.order.len() {
            (ctx.f)(vals);
            return;
        }
        let x = ctx.order[k];
        let (lo, hi) = match ctx.dir {
            Direction::Reversing => (0, ctx.lower[x].iter().map(|&l| vals[l]).min().unwrap_or(left).min(left)),
            Direction::Preserving => {
                let lo = ctx.lower[x].iter().map(|&l| vals[l]).max().unwrap_or(0);
                // everything above x will carry at least the same label
                (lo, left / ctx.up_size[x])
            }
        };
        let mut t = lo;
        while t <= hi {
            vals[x] = t;
            rec(ctx, k + 1, left - t, vals);
            t += 1;
        }
        vals[x] = 0;
    }
    let mut ctx = Ctx { order: &order, lower: &lower, up_size: &up_size, dir, f: &mut f };
    rec(&mut ctx, 0, cap, &mut vals);
}

/// Reverse plane partitions on the fixed point's poset with total at most `cap`.
pub fn rpp_enumerate(p: &FixedPoint, cap: u32) -> Vec<Rpp> {
    let lp = p.local();
    let mut out = Vec::new();
    for_each_labeling(&lp, cap, Direction::Reversing, |v| out.push(Rpp { values: v.to_vec() }));
    out
}

pub fn is_order_reversing(lp: &LocalPoset, r: &Rpp) -> bool {
    lp.covers.iter().all(|&(lo, up)| r.values[up] <= r.values[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posets::{LocalElement, Slot};

    fn chain(len: usize) -> LocalPoset {
        LocalPoset {
            n: 1,
            slots: vec![Slot { node: 1, j: 1 }],
            elements: (0..len).map(|k| LocalElement { slot: 0, id: (1, k + 1), color: 1, hexp: 0 }).collect(),
            covers: (1..len).map(|k| (k - 1, k)).collect(),
        }
    }

    fn collect(lp: &LocalPoset, cap: u32, dir: Direction) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for_each_labeling(lp, cap, dir, |v| out.push(v.to_vec()));
        out
    }

    #[test]
    fn small_examples() {
        assert_eq!(collect(&chain(1), 3, Direction::Reversing).len(), 4);
        let got = collect(&chain(2), 2, Direction::Reversing);
        assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 0]]);
        let got = collect(&chain(2), 2, Direction::Preserving);
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1]]);
    }

    #[test]
    fn d4_degree_one() {
        let p = FixedPoint::single(4, 4, &[1, 2, 1, 1]).unwrap();
        let lp = p.local();
        let rpps = rpp_enumerate(&p, 1);
        let maximal = (0..lp.len()).filter(|&x| !lp.covers.iter().any(|c| c.0 == x)).count();
        assert_eq!(rpps.len(), 1 + maximal);
        assert!(rpps.iter().all(|r| is_order_reversing(&lp, r)));
    }
}
