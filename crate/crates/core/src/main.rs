use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use dvertex::coeffs::Mode;
use dvertex::macdonald::{
    cauchy_check, fundamental_nu_check, gram_schmidt_p, lhs_identify_check, macdonald_q, phi_psi, NuVariant, Partition,
};
use dvertex::posets::{build_poset, check_framing, fixed_points, rep_and_check, taut_weights, valid_dims, FixedPoint};
use dvertex::roots::{phi_plus_mu, root_json, weight_mu};
use dvertex::selftest::{is_known_failure, run_all_with};
use dvertex::series::TruncatedSeries;
use dvertex::vertex::{generator_names, product_series, reduction_check, verify_product, vertex_series, Descendant};
use dvertex::{Error, Result};

#[derive(Parser)]
#[command(name = "dvertex", version, about = "Vertex functions of type D quiver varieties with minuscule framing")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Twos,
    OneTwos,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    n: usize,
    /// Framing node, 1-based; shorthand for a single framing `--w`.
    #[arg(long)]
    node: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    v: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    w: Option<Vec<u32>>,
    #[arg(long = "D", default_value_t = 3)]
    cap: u32,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = Mode::DEFAULT_POINTS)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Sampled => Mode::Sampled { points: self.points, seed: self.seed },
        }
    }

    fn w(&self) -> Result<Vec<u32>> {
        let w = match (&self.w, self.node) {
            (Some(w), _) => w.clone(),
            (None, Some(k)) if (1..=self.n).contains(&k) => {
                let mut w = vec![0; self.n];
                w[k - 1] = 1;
                w
            }
            (None, Some(k)) => return Err(Error::Domain(format!("node {} out of range 1..={}", k, self.n))),
            (None, None) => return Err(Error::Domain("one of --node or --w is required".into())),
        };
        if w.len() != self.n {
            return Err(Error::Domain(format!("--w has {} entries, expected {}", w.len(), self.n)));
        }
        check_framing(self.n, &w)?;
        Ok(w)
    }

    fn node(&self) -> Result<usize> {
        let w = self.w()?;
        if w.iter().sum::<u32>() != 1 {
            return Err(Error::Domain("this command needs a single framing".into()));
        }
        Ok(w.iter().position(|&x| x == 1).unwrap() + 1)
    }

    fn v(&self) -> Result<Vec<u32>> {
        match &self.v {
            Some(v) if v.len() == self.n => Ok(v.clone()),
            Some(v) => Err(Error::Domain(format!("--v has {} entries, expected {}", v.len(), self.n))),
            None => Err(Error::Domain("--v is required".into())),
        }
    }
}

#[derive(Args)]
struct MacArgs {
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<u32>>,
    #[arg(long, default_value_t = 2)]
    nvars: usize,
    #[arg(long, default_value_t = 2)]
    nx: usize,
    #[arg(long, default_value_t = 2)]
    ny: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    v: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value = "twos")]
    variant: VariantArg,
    #[arg(long = "D", default_value_t = 2)]
    cap: u32,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = Mode::DEFAULT_POINTS)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

impl MacArgs {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Sampled => Mode::Sampled { points: self.points, seed: self.seed },
        }
    }

    fn partition(&self, which: &str) -> Result<Partition> {
        let x = if which == "lambda" { &self.lambda } else { &self.mu };
        match x {
            Some(p) => Partition::new(p.clone()),
            None => Err(Error::Domain(format!("--{} is required", which))),
        }
    }

    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::Domain("--n is required".into()))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Positive roots with positive pairing against the weight of (v, w).
    Roots(Common),
    /// Valid dimension vectors for a single framing.
    Dims(Common),
    /// The colored poset of a minuscule framing.
    Poset(Common),
    FixedPoints(Common),
    TautWeights(Common),
    /// Moment map and stability of the representative at each fixed point.
    RepCheck {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        signed: bool,
    },
    /// The vertex function by localization.
    Vertex(Common),
    /// The product of q-binomial series over roots.
    Product(Common),
    /// Vertex against product; all valid v of the node when `--v` is omitted.
    Verify(Common),
    /// Peel off the first node of the fundamental framing `(1^k, 2^{n-k-2}, 1, 1)`.
    Reduction {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        k: usize,
    },
    Macdonald {
        #[command(subcommand)]
        cmd: MacCmd,
    },
    /// Runs the acceptance suite.
    Selftest {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum MacCmd {
    #[command(name = "P")]
    P(MacArgs),
    #[command(name = "Q")]
    Q(MacArgs),
    Phi(MacArgs),
    Psi(MacArgs),
    CauchyCheck(MacArgs),
    HalfspaceCheck(MacArgs),
    NuCheck(MacArgs),
}

/// A report and whether it records a verified inequality.
struct Out {
    value: Value,
    text: String,
    unequal: bool,
}

impl Out {
    fn ok(value: Value, text: String) -> Out {
        Out { value, text, unequal: false }
    }
}

fn series_text(s: &TruncatedSeries, names: &dyn Fn(usize) -> String) -> String {
    let mut out = Vec::new();
    for (m, c) in s.terms() {
        out.push(format!("{:?}: {}", m.0, c.fmt_with(names)));
    }
    out.join("\n")
}

fn lines(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().collect::<Vec<_>>().join("\n")
}

fn single_point(c: &Common) -> Result<FixedPoint> {
    let node = c.node()?;
    let v = c.v()?;
    if !valid_dims(c.n, node)?.contains(&v) {
        return Err(Error::Domain(format!("v = {:?} is not a valid dimension vector for node {}", v, node)));
    }
    FixedPoint::single(c.n, node, &v)
}

fn run(cmd: Cmd) -> Result<Out> {
    match cmd {
        Cmd::Roots(c) => {
            let (v, w) = (c.v()?, c.w()?);
            let roots = phi_plus_mu(c.n, &weight_mu(c.n, &v, &w)?)?;
            let js: Vec<Value> = roots.iter().map(|r| root_json(c.n, r)).collect();
            Ok(Out::ok(json!(js), lines(roots.iter().map(|r| format!("{:?}", r.c)))))
        }
        Cmd::Dims(c) => {
            let d = valid_dims(c.n, c.node()?)?;
            Ok(Out::ok(json!(d), lines(d.iter().map(|v| format!("{:?}", v)))))
        }
        Cmd::Poset(c) => {
            let p = build_poset(c.n, c.node()?)?;
            let js = p.to_json();
            Ok(Out::ok(js.clone(), serde_json::to_string_pretty(&js).unwrap()))
        }
        Cmd::FixedPoints(c) => {
            let pts = fixed_points(c.n, &c.v()?, &c.w()?)?;
            let js: Vec<Value> = pts.iter().map(FixedPoint::to_json).collect();
            let text = lines(pts.iter().map(|p| {
                let parts: Vec<String> = p.components.iter().map(|(s, po, i)| format!("{}: {:?}", s, po.counts(i))).collect();
                parts.join(", ")
            }));
            Ok(Out::ok(json!(js), text))
        }
        Cmd::TautWeights(c) => {
            let pts = fixed_points(c.n, &c.v()?, &c.w()?)?;
            let mut js = Vec::new();
            let mut text = Vec::new();
            for (k, p) in pts.iter().enumerate() {
                let tw = taut_weights(p);
                let strs: Vec<Vec<String>> = tw.iter().map(|c| c.iter().map(|x| x.to_string()).collect()).collect();
                text.push(format!("point {}", k));
                for (i, s) in strs.iter().enumerate() {
                    text.push(format!("  V{} = {}", i + 1, s.join(" + ")));
                }
                js.push(json!({ "point": p.to_json(), "weights": strs }));
            }
            Ok(Out::ok(json!(js), lines(text)))
        }
        Cmd::RepCheck { c, signed } => {
            let pts = fixed_points(c.n, &c.v()?, &c.w()?)?;
            let checks: Vec<_> = pts.iter().map(|p| rep_and_check(p, signed).1).collect();
            if pts.is_empty() {
                return Err(Error::Domain("no torus fixed points for this (v, w)".into()));
            }
            let ok = checks.iter().all(|r| r.moment_ok && r.stable);
            let text = lines(checks.iter().enumerate().map(|(k, r)| format!("point {}: moment_ok={} stable={}", k, r.moment_ok, r.stable)));
            Ok(Out { value: json!({ "signed": signed, "checks": checks }), text, unequal: !ok })
        }
        Cmd::Vertex(c) => {
            let p = single_point(&c)?;
            let s = vertex_series(&p, &Descendant::trivial(), c.cap)?;
            let slots = p.slots();
            let names = generator_names(&slots);
            let js = json!({ "n": c.n, "v": p.v, "w": p.w, "cap": c.cap, "series": s.to_json_with(&names) });
            Ok(Out::ok(js, series_text(&s, &names)))
        }
        Cmd::Product(c) => {
            let p = single_point(&c)?;
            let s = product_series(c.n, &p.v, &p.w, c.cap)?;
            let slots = p.slots();
            let names = generator_names(&slots);
            let roots: Vec<Value> = phi_plus_mu(c.n, &weight_mu(c.n, &p.v, &p.w)?)?.iter().map(|r| root_json(c.n, r)).collect();
            let js = json!({ "n": c.n, "v": p.v, "w": p.w, "cap": c.cap, "roots": roots, "series": s.to_json_with(&names) });
            Ok(Out::ok(js, series_text(&s, &names)))
        }
        Cmd::Verify(c) => {
            let (w, mode) = (c.w()?, c.mode());
            let vs = match &c.v {
                Some(_) => vec![c.v()?],
                None => valid_dims(c.n, c.node()?)?,
            };
            let reports: Vec<_> = vs.par_iter().map(|v| verify_product(c.n, v, &w, c.cap, mode)).collect::<Result<_>>()?;
            let unequal = reports.iter().any(|r| !r.equal);
            let text = lines(reports.iter().map(|r| {
                format!("{} v={:?} D={} factors={}", if r.equal { "equal" } else { "UNEQUAL" }, r.v, r.cap, r.roots.len())
            }));
            let js: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
            let value = if js.len() == 1 { js.into_iter().next().unwrap() } else { json!(js) };
            Ok(Out { value, text, unequal })
        }
        Cmd::Reduction { c, k } => {
            let r = reduction_check(c.n, k, c.cap, c.mode())?;
            let text = format!("{} n={} k={} v={:?}", if r.equal { "equal" } else { "UNEQUAL" }, r.n, r.k, r.v);
            Ok(Out { unequal: !r.equal, value: serde_json::to_value(&r).unwrap(), text })
        }
        Cmd::Macdonald { cmd } => run_mac(cmd),
        Cmd::Selftest { .. } => unreachable!("handled in main"),
    }
}

fn run_mac(cmd: MacCmd) -> Result<Out> {
    match cmd {
        MacCmd::P(a) | MacCmd::Q(a) if a.lambda.is_none() => Err(Error::Domain("--lambda is required".into())),
        MacCmd::P(a) => {
            let p = gram_schmidt_p(&a.partition("lambda")?, a.nvars)?;
            Ok(Out::ok(p.to_json(), serde_json::to_string_pretty(&p.to_json()).unwrap()))
        }
        MacCmd::Q(a) => {
            let p = macdonald_q(&a.partition("lambda")?, a.nvars)?;
            Ok(Out::ok(p.to_json(), serde_json::to_string_pretty(&p.to_json()).unwrap()))
        }
        MacCmd::Phi(a) | MacCmd::Psi(a) if a.lambda.is_none() || a.mu.is_none() => {
            Err(Error::Domain("--lambda and --mu are required".into()))
        }
        MacCmd::Phi(a) => {
            let (phi, _) = phi_psi(&a.partition("lambda")?, &a.partition("mu")?)?;
            Ok(Out::ok(json!({ "phi": phi.to_string() }), phi.to_string()))
        }
        MacCmd::Psi(a) => {
            let (_, psi) = phi_psi(&a.partition("lambda")?, &a.partition("mu")?)?;
            Ok(Out::ok(json!({ "psi": psi.to_string() }), psi.to_string()))
        }
        MacCmd::CauchyCheck(a) => {
            let r = cauchy_check(a.nx, a.ny, a.cap)?;
            let text = format!("{} nx={} ny={} D={}", if r.equal { "equal" } else { "UNEQUAL" }, r.nx, r.ny, r.cap);
            Ok(Out { unequal: !r.equal, value: serde_json::to_value(&r).unwrap(), text })
        }
        MacCmd::HalfspaceCheck(a) => {
            let n = a.n()?;
            let vs = match &a.v {
                Some(v) => vec![v.clone()],
                None => valid_dims(n, n)?,
            };
            let rs: Vec<_> = vs.iter().map(|v| lhs_identify_check(n, v, a.cap, a.mode())).collect::<Result<_>>()?;
            let text = lines(rs.iter().map(|r| format!("{} v={:?} tuples={}", if r.passed { "passed" } else { "FAILED" }, r.v, r.tuples)));
            Ok(Out { unequal: rs.iter().any(|r| !r.passed), value: serde_json::to_value(&rs).unwrap(), text })
        }
        MacCmd::NuCheck(a) => {
            let variant = match a.variant {
                VariantArg::Twos => NuVariant::Twos,
                VariantArg::OneTwos => NuVariant::OneTwos,
            };
            let r = fundamental_nu_check(a.n()?, variant, a.cap, a.mode())?;
            let text = format!("{} v={:?} tuples={} factors={}", if r.passed { "passed" } else { "FAILED" }, r.v, r.tuples, r.factors);
            Ok(Out { unequal: !r.passed, value: serde_json::to_value(&r).unwrap(), text })
        }
    }
}

fn jobs(cmd: &Cmd) -> Option<usize> {
    match cmd {
        Cmd::Roots(c)
        | Cmd::Dims(c)
        | Cmd::Poset(c)
        | Cmd::FixedPoints(c)
        | Cmd::TautWeights(c)
        | Cmd::Vertex(c)
        | Cmd::Product(c)
        | Cmd::Verify(c)
        | Cmd::RepCheck { c, .. }
        | Cmd::Reduction { c, .. } => c.jobs,
        Cmd::Macdonald { cmd } => match cmd {
            MacCmd::P(a)
            | MacCmd::Q(a)
            | MacCmd::Phi(a)
            | MacCmd::Psi(a)
            | MacCmd::CauchyCheck(a)
            | MacCmd::HalfspaceCheck(a)
            | MacCmd::NuCheck(a) => a.jobs,
        },
        Cmd::Selftest { jobs, .. } => *jobs,
    }
}

fn wants_json(cmd: &Cmd) -> bool {
    match cmd {
        Cmd::Roots(c)
        | Cmd::Dims(c)
        | Cmd::Poset(c)
        | Cmd::FixedPoints(c)
        | Cmd::TautWeights(c)
        | Cmd::Vertex(c)
        | Cmd::Product(c)
        | Cmd::Verify(c)
        | Cmd::RepCheck { c, .. }
        | Cmd::Reduction { c, .. } => c.json,
        Cmd::Macdonald { .. } => true,
        Cmd::Selftest { json, .. } => *json,
    }
}

/// Prints a line, ignoring a closed stdout.
fn say(s: &str) {
    let _ = writeln!(std::io::stdout(), "{}", s);
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = jobs(&cli.cmd) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    }
    let as_json = wants_json(&cli.cmd);
    if let Cmd::Selftest { .. } = cli.cmd {
        let ls = run_all_with(|l| if !as_json { say(&l.to_string()) });
        if as_json {
            say(&serde_json::to_string_pretty(&ls).unwrap());
        }
        let bad = ls.iter().any(|l| !l.passed && !is_known_failure(l));
        return ExitCode::from(if bad { 1 } else { 0 });
    }
    match run(cli.cmd) {
        Ok(out) => {
            if as_json {
                say(&serde_json::to_string_pretty(&out.value).unwrap());
            } else {
                say(&out.text);
            }
            ExitCode::from(if out.unequal { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
