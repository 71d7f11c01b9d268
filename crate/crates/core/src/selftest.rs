//! The acceptance suite, shared by `dvertex selftest` and the integration test.
//!
//! Every comparison is exact unless it names the sampled mode, which uses
//! [`SAMPLE_POINTS`] random points from [`SAMPLE_SEED`].

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::Mode;
use crate::error::Result;
use crate::macdonald::{
    cauchy_check, e_closure, e_closure_candidates, fbinom_sum_product_check, fundamental_nu_check, inversion_check,
    lhs_identify_check, partitions_bounded, pieri_check, NuVariant,
};
use crate::posets::{build_poset, fixed_points, ideal_for_dim, rep_and_check, taut_weights, valid_dims, FixedPoint, Slot, TautWeight};
use crate::roots::{is_minuscule, phi_plus_mu, weight_mu};
use crate::vertex::{reduction_check, verify_product};

pub const SAMPLE_POINTS: usize = 3;
pub const SAMPLE_SEED: u64 = 0;

/// One printed acceptance line.
#[derive(Clone, Debug, Serialize)]
pub struct Line {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{} [{}] {} ({:.1}s)", tag, self.id, self.detail, self.seconds)
    }
}

/// Criteria whose literal statement is known not to hold; see the README.
pub const KNOWN_FAILING: &[&str] = &["5", "6"];

fn sampled() -> Mode {
    Mode::Sampled { points: SAMPLE_POINTS, seed: SAMPLE_SEED }
}

fn timed(id: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Line {
    let t = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {}", e)));
    Line { id: id.to_string(), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

fn delta(n: usize, node: usize) -> Vec<u32> {
    let mut w = vec![0; n];
    w[node - 1] = 1;
    w
}

/// One vertex-vs-product comparison in both modes.
#[derive(Clone, Debug)]
struct Pair {
    label: String,
    exact: bool,
    sampled: bool,
}

fn pair(n: usize, v: &[u32], w: &[u32], cap: u32) -> Result<Pair> {
    let exact = verify_product(n, v, w, cap, Mode::Exact)?.equal;
    let sampled = verify_product(n, v, w, cap, sampled())?.equal;
    Ok(Pair { label: format!("n={} v={:?} D={}", n, v, cap), exact, sampled })
}

fn worked_example(n: usize, v: &[u32], node: usize, cap: u32, factors: usize) -> Result<(bool, String, Pair)> {
    let w = delta(n, node);
    let roots = phi_plus_mu(n, &weight_mu(n, v, &w)?)?.len();
    let p = pair(n, v, &w, cap)?;
    let ok = roots == factors && p.exact;
    Ok((ok, format!("{} factors={} exact_equal={}", p.label, roots, p.exact), p))
}

fn sweep_cases(ns: std::ops::RangeInclusive<usize>) -> Result<Vec<(usize, Vec<u32>, Vec<u32>)>> {
    let mut out = Vec::new();
    for n in ns {
        for node in (1..=n).filter(|&i| is_minuscule(n, i)) {
            for v in valid_dims(n, node)? {
                out.push((n, v, delta(n, node)));
            }
        }
    }
    Ok(out)
}

/// Published tautological weights for the D₆ three-slot example, per color.
pub fn d6_listed_weights() -> Vec<Vec<TautWeight>> {
    let (a, b, c) = (Slot { node: 1, j: 1 }, Slot { node: 5, j: 1 }, Slot { node: 6, j: 1 });
    let lists: [&[(Slot, u32)]; 6] = [
        &[(a, 0), (b, 4), (c, 4)],
        &[(a, 0), (a, 4), (b, 3), (b, 4), (c, 3)],
        &[(a, 0), (a, 3), (b, 2), (b, 3), (b, 4), (c, 2), (c, 3)],
        &[(a, 0), (a, 2), (b, 1), (b, 2), (b, 3), (c, 1), (c, 2), (c, 3)],
        &[(a, 0), (b, 1), (c, 0), (c, 2)],
        &[(a, 0), (b, 0), (b, 2), (c, 1)],
    ];
    lists
        .iter()
        .map(|l| {
            let mut v: Vec<TautWeight> = l.iter().map(|&(slot, hexp)| TautWeight { slot, hexp }).collect();
            v.sort();
            v
        })
        .collect()
}

/// The D₆ fixed point with splitting `(1,2,2,2,1,1) + (1,2,3,3,2,1) + (1,1,2,3,1,2)`.
pub fn d6_example_point() -> Result<Option<FixedPoint>> {
    let want = [vec![1, 2, 2, 2, 1, 1], vec![1, 2, 3, 3, 2, 1], vec![1, 1, 2, 3, 1, 2]];
    let pts = fixed_points(6, &[3, 5, 7, 8, 4, 4], &[1, 0, 0, 0, 1, 1])?;
    Ok(pts.into_iter().find(|p| p.components.iter().map(|(_, po, i)| po.counts(i)).eq(want.iter().cloned())))
}

fn fmt_weights(ws: &[TautWeight]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" + ")
}

fn c4() -> Line {
    timed("4", || {
        let mut bad = Vec::new();
        for n in 3..=8 {
            let spin = valid_dims(n, n)?.len();
            let fund = valid_dims(n, 1)?.len();
            if spin != 1 << (n - 1) || fund != 2 * n {
                bad.push(format!("n={} spin={} fund={}", n, spin, fund));
            }
            for node in [1, n - 1, n] {
                let poset = build_poset(n, node)?;
                let dims = valid_dims(n, node)?;
                if poset.ideals().len() != dims.len() {
                    bad.push(format!("n={} node={} ideals={} dims={}", n, node, poset.ideals().len(), dims.len()));
                }
                for v in &dims {
                    if poset.counts(&ideal_for_dim(&poset, v)?) != *v {
                        bad.push(format!("n={} node={} v={:?}", n, node, v));
                    }
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "n=3..8, nodes 1,n-1,n".into() } else { bad.join("; ") }))
    })
}

fn c5() -> Line {
    timed("5", || {
        let Some(p) = d6_example_point()? else {
            return Ok((false, "fixed point with the stated splitting not found".into()));
        };
        let got = taut_weights(&p);
        let want = d6_listed_weights();
        let diff: Vec<usize> = (0..6).filter(|&i| got[i] != want[i]).collect();
        let detail = match diff.first() {
            None => "all six colors match".into(),
            Some(&i) => format!(
                "colors {:?} differ; color {}: computed {} vs listed {}",
                diff.iter().map(|i| i + 1).collect::<Vec<_>>(),
                i + 1,
                fmt_weights(&got[i]),
                fmt_weights(&want[i])
            ),
        };
        Ok((diff.is_empty(), detail))
    })
}

fn c6(signed: bool) -> Line {
    timed(if signed { "6-signed" } else { "6" }, || {
        let mut total = 0;
        let mut bad = Vec::new();
        for n in 3..=7 {
            for node in [1, n - 1, n] {
                for v in valid_dims(n, node)? {
                    let p = FixedPoint::single(n, node, &v)?;
                    let (_, chk) = rep_and_check(&p, signed);
                    total += 1;
                    if !(chk.moment_ok && chk.stable) {
                        bad.push(format!("n={} node={} v={:?}", n, node, v));
                    }
                }
            }
        }
        let kind = if signed { "signed representative" } else { "0/1 representative" };
        let first = bad.first().map(|s| format!(", first {}", s)).unwrap_or_default();
        Ok((bad.is_empty(), format!("{}: {}/{} ideals ok{}", kind, total - bad.len(), total, first)))
    })
}

fn c7() -> Vec<Line> {
    let cauchy = timed("7-cauchy", || {
        let mut out = Vec::new();
        for (nx, ny, d) in [(1, 1, 6), (2, 2, 4), (3, 2, 3)] {
            out.push((format!("({},{},{})", nx, ny, d), cauchy_check(nx, ny, d)?.equal));
        }
        let ok = out.iter().all(|x| x.1);
        Ok((ok, out.iter().map(|(s, e)| format!("{}={}", s, e)).collect::<Vec<_>>().join(" ")))
    });
    let pieri = timed("7-pieri", || {
        let mut cases = Vec::new();
        for mu in partitions_bounded(6, usize::MAX) {
            for a in 0..=(6 - mu.size()) {
                for nvars in 1..=4 {
                    cases.push((mu.clone(), a, nvars));
                }
            }
        }
        let bad: Vec<String> = cases
            .par_iter()
            .filter_map(|(mu, a, nv)| match pieri_check(mu, *a, *nv) {
                Ok(true) => None,
                Ok(false) => Some(format!("mu={} a={} nvars={}", mu, a, nv)),
                Err(e) => Some(format!("mu={} a={} nvars={}: {}", mu, a, nv, e)),
            })
            .collect();
        Ok((bad.is_empty(), format!("{} cases (|mu|+a<=6, nvars<=4), {} failures {:?}", cases.len(), bad.len(), bad.first())))
    });
    let inversion = timed("7-inversion", || {
        let mut bad = Vec::new();
        for n in 1..=3 {
            for a in 0..=3 {
                let r = inversion_check(n, a)?;
                if !(r.gram_schmidt && r.display) {
                    bad.push(format!("n={} a={} gs={} display={}", n, a, r.gram_schmidt, r.display));
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "n<=3, a<=3, Gram-Schmidt and closed forms".into() } else { bad.join("; ") }))
    });
    let fsum = timed("7-fbinom", || Ok((fbinom_sum_product_check(20), "sum form vs product form through z^20".into())));
    let closure = timed("7-e-closure", || {
        let lams = partitions_bounded(10, usize::MAX);
        let bad: Vec<String> = lams.iter().filter(|l| e_closure_candidates(l) != vec![e_closure(l)]).map(|l| l.to_string()).collect();
        Ok((bad.is_empty(), format!("{} partitions |lambda|<=10, {} disagreements", lams.len(), bad.len())))
    });
    vec![cauchy, pieri, inversion, fsum, closure]
}

fn c8() -> Vec<Line> {
    let half = timed("8-halfspace", || {
        let mut bad = Vec::new();
        let mut count = 0;
        for n in 4..=5 {
            for v in valid_dims(n, n)? {
                count += 1;
                if !lhs_identify_check(n, &v, 2, Mode::Exact)?.passed {
                    bad.push(format!("n={} v={:?}", n, v));
                }
            }
        }
        Ok((bad.is_empty(), format!("{} spin vectors n=4,5 D=2, failures {:?}", count, bad)))
    });
    let nu = timed("8-nu", || {
        let mut bad = Vec::new();
        for n in 4..=5 {
            for var in [NuVariant::Twos, NuVariant::OneTwos] {
                if !fundamental_nu_check(n, var, 2, Mode::Exact)?.passed {
                    bad.push(format!("n={} {:?}", n, var));
                }
            }
        }
        Ok((bad.is_empty(), format!("both variants n=4,5 D=2, failures {:?}", bad)))
    });
    let red = timed("8-reduction", || {
        let cases: Vec<(usize, usize)> = (4..=6).flat_map(|n| (2..=n - 2).map(move |k| (n, k))).collect();
        let bad: Vec<String> = cases
            .par_iter()
            .filter_map(|&(n, k)| match reduction_check(n, k, 3, Mode::Exact) {
                Ok(r) if r.equal => None,
                Ok(_) => Some(format!("n={} k={}", n, k)),
                Err(e) => Some(format!("n={} k={}: {}", n, k, e)),
            })
            .collect();
        Ok((bad.is_empty(), format!("{} cases n<=6 D=3, failures {:?}", cases.len(), bad)))
    });
    vec![half, nu, red]
}

/// Criteria 1–3 and 9, which share their comparisons.
fn c1239() -> Vec<Line> {
    let mut pairs: Vec<Pair> = Vec::new();
    let mut lines = Vec::new();
    for (id, n, v, node, cap, factors) in
        [("1", 4, vec![1, 2, 1, 1], 4, 6, 5), ("2", 5, vec![2, 2, 2, 1, 1], 1, 4, 8)]
    {
        let mut got = None;
        lines.push(timed(id, || {
            let (ok, detail, p) = worked_example(n, &v, node, cap, factors)?;
            got = Some(p);
            Ok((ok, detail))
        }));
        pairs.extend(got);
    }
    let mut exact_pairs = Vec::new();
    lines.push(timed("3-exact", || {
        let cases = sweep_cases(3..=6)?;
        let res: Vec<Result<Pair>> = cases.par_iter().map(|(n, v, w)| pair(*n, v, w, 3)).collect();
        let mut bad = Vec::new();
        for r in res {
            let p = r?;
            if !p.exact {
                bad.push(p.label.clone());
            }
            exact_pairs.push(p);
        }
        Ok((bad.is_empty(), format!("{} cases n=3..6 D=3 exact, failures {:?}", cases.len(), bad)))
    }));
    pairs.extend(exact_pairs);
    lines.push(timed("3-sampled", || {
        let cases = sweep_cases(3..=6)?;
        let res: Vec<Result<bool>> = cases.par_iter().map(|(n, v, w)| Ok(verify_product(*n, v, w, 4, sampled())?.equal)).collect();
        let mut bad = Vec::new();
        for (r, (n, v, _)) in res.into_iter().zip(&cases) {
            if !r? {
                bad.push(format!("n={} v={:?}", n, v));
            }
        }
        Ok((
            bad.is_empty(),
            format!("{} cases n=3..6 D=4 sampled ({} points, seed {}), failures {:?}", cases.len(), SAMPLE_POINTS, SAMPLE_SEED, bad),
        ))
    }));
    let disagree: Vec<&str> = pairs.iter().filter(|p| p.exact != p.sampled).map(|p| p.label.as_str()).collect();
    lines.push(Line {
        id: "9".into(),
        passed: disagree.is_empty() && !pairs.is_empty(),
        detail: format!("{} comparisons from criteria 1-3 rerun sampled, disagreements {:?}", pairs.len(), disagree),
        seconds: 0.0,
    });
    lines
}

/// Runs every criterion, calling `emit` as each line completes, and returns
/// the lines in criterion order.
pub fn run_all_with(mut emit: impl FnMut(&Line)) -> Vec<Line> {
    let mut out: Vec<Line> = Vec::new();
    let mut push = |ls: Vec<Line>, out: &mut Vec<Line>| {
        for l in ls {
            emit(&l);
            out.push(l);
        }
    };
    let mut first = c1239();
    let nine = first.pop().expect("criterion 9 line");
    push(first, &mut out);
    push(vec![c4(), c5()], &mut out);
    push(vec![c6(false)], &mut out);
    push(vec![c6(true)], &mut out);
    push(c7(), &mut out);
    push(c8(), &mut out);
    push(vec![nine], &mut out);
    out
}

pub fn run_all() -> Vec<Line> {
    run_all_with(|_| {})
}

/// Whether a failing line is one of the documented known failures.
pub fn is_known_failure(l: &Line) -> bool {
    !l.passed && KNOWN_FAILING.contains(&l.id.as_str())
}
