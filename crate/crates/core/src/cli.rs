//! The `stablecoh` command line: argument grammar, dispatch and the text,
//! JSON and LaTeX emitters.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{CohPoly, Prime};
use crate::closed_form::series_h;
use crate::complexes::{build_c, duality_witness, twocol_stable_poly, CheckOutcome, WeightedComposition};
use crate::error::{invalid, Error, Result};
use crate::hooks::hook_poly;
use crate::koszul::{
    koszul_dims, koszul_dims_presented, predicted_tail, sample_certified_k, sample_generic_k,
    HilbertTail, KoszulInstance,
};
use crate::schur::{stable_cohomology, CohomologyReport, ShapeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stablecoh", version, about = "Stable cohomology of Schur functors of Omega in characteristic p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Report per-route wall time (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args, Debug, Clone, Copy)]
struct CrossFlags {
    /// Run every applicable independent route and compare (the default).
    #[arg(long, overrides_with = "no_cross")]
    cross: bool,
    /// Run only the primary route.
    #[arg(long = "no-cross", overrides_with = "cross")]
    no_cross: bool,
}

impl CrossFlags {
    fn enabled(self) -> bool {
        !self.no_cross
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stable cohomology polynomial of a shape, e.g. `sym:6`, `hook:4,3`,
    /// `twocol:6,3`, `ribbon:3,1,2`, `trunc:5`, `wedge:3`, `weight:-7,4,1,1,1`.
    Coh {
        #[arg(allow_hyphen_values = true)]
        shape: String,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        cross: CrossFlags,
    },
    /// Tables of stable cohomology.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long)]
        amax: u64,
        /// Comma-separated primes, one column each.
        #[arg(long)]
        primes: String,
        #[command(flatten)]
        cross: CrossFlags,
    },
    /// Coefficients `H_{a,b}` of the hook generating function, `1 <= a <= umax`.
    Series {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        umax: usize,
        #[command(flatten)]
        cross: CrossFlags,
    },
    /// Homology of the complex `C(w)` of a weighted composition.
    Complex {
        /// Comma-separated integer weights.
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        p: u64,
        /// Write the differentials to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Checks the two-column/hook duality for `(2^d, 1^(m-d))`.
    Duality {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
    },
    /// Hilbert function of a Koszul module `W(V, K)`.
    Koszul {
        #[arg(long)]
        n: Option<usize>,
        /// `dim K`; defaults to `2n - 3`.
        #[arg(long)]
        m: Option<usize>,
        /// Required unless `--import` supplies the instance.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Last degree computed; defaults to `2n - 6`.
        #[arg(long)]
        jmax: Option<usize>,
        /// Redraw `K` until `W_{2n-7}` vanishes.
        #[arg(long)]
        resample: bool,
        #[arg(long, value_enum, default_value_t = KoszulRoute::Brute)]
        route: KoszulRoute,
        /// Read `K` from a file written by `--export`.
        #[arg(long)]
        import: Option<PathBuf>,
        /// Write the instance `K` to a file.
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        cross: CrossFlags,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    /// `H_{a,0}`, the stable cohomology of `Sym^a`.
    Hsym,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KoszulRoute {
    /// Rank computations on `K (x) S_j -> V (x) S_{j+1} -> S_{j+2}`.
    Brute,
    /// Degree-by-degree quotients of the module presentation.
    Presented,
}

impl KoszulRoute {
    fn name(self) -> &'static str {
        match self {
            KoszulRoute::Brute => "brute_force",
            KoszulRoute::Presented => "presented",
        }
    }

    fn other(self) -> Self {
        match self {
            KoszulRoute::Brute => KoszulRoute::Presented,
            KoszulRoute::Presented => KoszulRoute::Brute,
        }
    }

    fn run(self, inst: &KoszulInstance, jmax: usize) -> Result<HilbertTail> {
        match self {
            KoszulRoute::Brute => koszul_dims(inst, jmax),
            KoszulRoute::Presented => koszul_dims_presented(inst, jmax),
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::RouteMismatch { .. } => EXIT_MISMATCH,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let msg = e.render().to_string();
            let msg = msg.trim_start_matches("error: ").trim_end();
            let _ = writeln!(err, "ERROR {EXIT_INVALID}: {msg}");
            return EXIT_INVALID;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INTERNAL;
            }
            EXIT_OK
        }
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "ERROR {code}: {e}");
            code
        }
    }
}

fn prime(p: u64) -> Result<Prime> {
    Prime::new(p)
}

fn millis(d: Duration, timings: bool) -> Value {
    if timings {
        json!(d.as_secs_f64() * 1e3)
    } else {
        Value::Null
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<String> {
    let (fmt, timings) = (cli.format, cli.timings);
    match &cli.command {
        Command::Coh { shape, p, cross } => {
            let shape: ShapeSpec = shape.parse()?;
            let report = stable_cohomology(&shape, prime(*p)?, cross.enabled())?;
            Ok(emit_report(&report, fmt, timings))
        }
        Command::Table { kind: TableKind::Hsym, amax, primes, cross } => {
            let primes = primes
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad prime {s:?}")))
                        .and_then(Prime::new)
                })
                .collect::<Result<Vec<_>>>()?;
            hsym_table(*amax, &primes, cross.enabled(), fmt)
        }
        Command::Series { b, p, umax, cross } => series(*b, prime(*p)?, *umax, cross.enabled(), fmt),
        Command::Complex { w, p, dump } => complex(w, prime(*p)?, dump.as_ref(), fmt),
        Command::Duality { m, d, p } => duality(*m, *d, prime(*p)?, fmt),
        Command::Koszul { n, m, p, seed, jmax, resample, route, import, export, cross } => {
            let inst = koszul_instance(*n, *m, *p, *seed, *resample, import.as_ref())?;
            if let Some(path) = export {
                std::fs::write(path, inst.to_text())?;
            }
            koszul(&inst, *jmax, *route, cross.enabled(), fmt, timings)
        }
    }
}

fn emit_report(r: &CohomologyReport, fmt: Format, timings: bool) -> String {
    match fmt {
        Format::Text => format!("{}\n", r.polynomial),
        Format::Latex => format!("{}\n", r.polynomial.to_latex()),
        Format::Json => {
            let routes: Vec<Value> = r
                .routes
                .iter()
                .map(|route| {
                    json!({
                        "name": route.name,
                        "polynomial": route.polynomial,
                        "millis": millis(route.elapsed, timings),
                    })
                })
                .collect();
            to_json(&json!({
                "query": r.shape.to_string(),
                "prime": r.prime,
                "polynomial": r.polynomial,
                "routes": routes,
                "match": r.agree(),
            }))
        }
    }
}

fn hsym_table(amax: u64, primes: &[Prime], cross: bool, fmt: Format) -> Result<String> {
    if amax == 0 {
        return invalid("--amax must be at least 1");
    }
    let mut rows: Vec<Vec<CohPoly>> = Vec::new();
    for a in 1..=amax {
        let row = primes
            .iter()
            .map(|&p| stable_cohomology(&ShapeSpec::Hook { a, b: 0 }, p, cross).map(|r| r.polynomial))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(match fmt {
        Format::Text => {
            let mut s = format!("a | {}\n", primes.iter().map(|p| format!("p={p}")).collect::<Vec<_>>().join(" | "));
            for (a, row) in (1..).zip(&rows) {
                let cells: Vec<String> = row.iter().map(CohPoly::to_string).collect();
                s.push_str(&format!("{a} | {}\n", cells.join(" | ")));
            }
            s
        }
        Format::Latex => {
            let mut s = format!("\\begin{{tabular}}{{|c|{}}}\n\\hline\n", "c|".repeat(primes.len()));
            let head: Vec<String> = primes.iter().map(|p| format!("$\\operatorname{{char}}(\\mathbf{{k}})={p}$")).collect();
            s.push_str(&format!(" & {} \\\\ \\hline\n", head.join(" & ")));
            for (a, row) in (1..).zip(&rows) {
                let cells: Vec<String> = row
                    .iter()
                    .map(|poly| if poly.is_zero() { "0".to_string() } else { format!("${}$", poly.to_latex()) })
                    .collect();
                s.push_str(&format!("$H_{{{a},0}}$ & {} \\\\ \\hline\n", cells.join(" & ")));
            }
            s.push_str("\\end{tabular}\n");
            s
        }
        Format::Json => {
            let rows: Vec<Value> = (1..)
                .zip(&rows)
                .map(|(a, row): (u64, &Vec<CohPoly>)| json!({"a": a, "entries": row}))
                .collect();
            to_json(&json!({
                "query": format!("table hsym amax={amax}"),
                "primes": primes,
                "rows": rows,
                "match": true,
            }))
        }
    })
}

fn series(b: u64, p: Prime, umax: usize, cross: bool, fmt: Format) -> Result<String> {
    let s = series_h(b, p, umax)?;
    let mut coeffs = Vec::with_capacity(umax);
    for a in 1..=umax {
        let c = s.coeff(a).to_coh()?;
        if cross {
            let h = hook_poly(a as u64, b, p);
            if h != c {
                return Err(Error::RouteMismatch {
                    query: format!("hook:{a},{b} at p={p}"),
                    left_name: "generating_function".into(),
                    left: c,
                    right_name: "hook_recursion".into(),
                    right: h,
                });
            }
        }
        coeffs.push(c);
    }
    Ok(match fmt {
        Format::Text => (1..).zip(&coeffs).map(|(a, c): (usize, _)| format!("u^{a}: {c}\n")).collect(),
        Format::Latex => {
            let terms: Vec<String> = (1..)
                .zip(&coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(a, c): (usize, &CohPoly)| {
                    let u = if a == 1 { "u".to_string() } else { format!("u^{{{a}}}") };
                    if c.terms().count() == 1 && c.total() == 1 {
                        format!("{}{u}", c.to_latex())
                    } else {
                        format!("({}){u}", c.to_latex())
                    }
                })
                .collect();
            let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            format!("{body} + O(u^{{{}}})\n", umax + 1)
        }
        Format::Json => {
            let rows: Vec<Value> = (1..)
                .zip(&coeffs)
                .map(|(a, c): (usize, &CohPoly)| json!({"a": a, "polynomial": c}))
                .collect();
            to_json(&json!({
                "query": format!("series b={b} umax={umax}"),
                "prime": p,
                "coefficients": rows,
                "match": true,
            }))
        }
    })
}

fn parse_weights(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad weight {x:?}"))))
        .collect()
}

fn complex(w: &str, p: Prime, dump: Option<&PathBuf>, fmt: Format) -> Result<String> {
    let w = WeightedComposition::new(parse_weights(w)?)?;
    let cx = build_c(&w, p)?;
    if let Some(path) = dump {
        std::fs::write(path, cx.dump())?;
    }
    let h = cx.homology();
    let ws: Vec<String> = w.weights().iter().map(i64::to_string).collect();
    Ok(match fmt {
        Format::Text => {
            let ranks: Vec<String> = h.ranks.iter().map(u64::to_string).collect();
            format!("ranks: {}\nP: {}\n", ranks.join(" "), h.poly)
        }
        Format::Latex => format!("{}\n", h.poly.to_latex()),
        Format::Json => to_json(&json!({
            "query": format!("complex w={}", ws.join(",")),
            "prime": p,
            "ranks": h.ranks,
            "polynomial": h.poly,
        })),
    })
}

fn duality(m: u64, d: usize, p: Prime, fmt: Format) -> Result<String> {
    let d64 = d as u64;
    if d64 > m {
        return invalid(format!("duality needs d <= m, got m={m} d={d}"));
    }
    let witness = duality_witness(m, d, p)?;
    if let CheckOutcome::Fails(why) = &witness {
        return Err(Error::Internal(format!("duality fails: {why}")));
    }
    let report = stable_cohomology(&ShapeSpec::TwoCol { m, d: d64 }, p, true)?;
    let direct = twocol_stable_poly(m, d64, p)?;
    Ok(match fmt {
        Format::Text => format!("duality m={m} d={d} p={p}: holds\ntwocol: {direct}\n"),
        Format::Latex => format!("{}\n", direct.to_latex()),
        Format::Json => {
            let routes: Vec<Value> = report
                .routes
                .iter()
                .map(|r| json!({"name": r.name, "polynomial": r.polynomial, "millis": Value::Null}))
                .collect();
            to_json(&json!({
                "query": format!("duality m={m} d={d}"),
                "prime": p,
                "polynomial": direct,
                "routes": routes,
                "witness": witness.holds(),
                "match": report.agree(),
            }))
        }
    })
}

fn koszul_instance(
    n: Option<usize>,
    m: Option<usize>,
    p: Option<u64>,
    seed: u64,
    resample: bool,
    import: Option<&PathBuf>,
) -> Result<KoszulInstance> {
    if let Some(path) = import {
        let inst = KoszulInstance::from_text(&std::fs::read_to_string(path)?)?;
        let clash = |given: Option<u64>, actual: u64, what: &str| match given {
            Some(g) if g != actual => invalid(format!("--{what} {g} disagrees with the imported K ({actual})")),
            _ => Ok(()),
        };
        clash(n.map(|x| x as u64), inst.n() as u64, "n")?;
        clash(m.map(|x| x as u64), inst.m() as u64, "m")?;
        clash(p, inst.prime().get(), "p")?;
        return Ok(inst);
    }
    let Some(n) = n else {
        return invalid("koszul needs --n (or --import)");
    };
    let Some(p) = p else {
        return invalid("koszul needs --p (or --import)");
    };
    let p = prime(p)?;
    let m = m.unwrap_or((2 * n).saturating_sub(3));
    if resample {
        let s = sample_certified_k(n, m, p, seed)?;
        if s.rejected > 0 {
            log::info!("seed {seed}: accepted derived seed {} after {} rejections", s.used_seed, s.rejected);
        }
        Ok(s.instance)
    } else {
        sample_generic_k(n, m, p, seed)
    }
}

fn koszul(
    inst: &KoszulInstance,
    jmax: Option<usize>,
    route: KoszulRoute,
    cross: bool,
    fmt: Format,
    timings: bool,
) -> Result<String> {
    let n = inst.n();
    let jmax = jmax.unwrap_or(2 * n - 6);
    let mut runs = Vec::new();
    let routes = if cross { vec![route, route.other()] } else { vec![route] };
    for r in routes {
        let start = Instant::now();
        let tail = r.run(inst, jmax)?;
        runs.push((r.name(), tail, start.elapsed()));
    }
    let dims = runs[0].1.dims.clone();
    if let Some((name, bad, _)) = runs[1..].iter().find(|(_, t, _)| t.dims != dims) {
        return Err(Error::RouteMismatch {
            query: koszul_query(inst),
            left_name: runs[0].0.to_string(),
            left: CohPoly::from_dense(&dims),
            right_name: name.to_string(),
            right: CohPoly::from_dense(&bad.dims),
        });
    }
    let predicted = if n >= 4 { Some(predicted_tail(n, inst.prime())?) } else { None };
    let certificate = predicted
        .filter(|t| t.vanishing_from <= jmax)
        .map(|t| dims[t.vanishing_from] == 0);
    Ok(match fmt {
        Format::Text => {
            let ds: Vec<String> = dims.iter().map(u64::to_string).collect();
            let mut s = format!("{}\ndim W_j, j = 0..{jmax}: {}\n", koszul_query(inst), ds.join(" "));
            if let Some(t) = predicted {
                s.push_str(&format!(
                    "predicted: dim W_{} = {} (generic K), W_j = 0 for j >= {}\n",
                    t.degree, t.dim, t.vanishing_from
                ));
            }
            if let Some(c) = certificate {
                s.push_str(&format!("vanishing certificate: {}\n", if c { "holds" } else { "fails" }));
            }
            s
        }
        Format::Latex => {
            let js: Vec<String> = (0..=jmax).map(|j| j.to_string()).collect();
            let ds: Vec<String> = dims.iter().map(u64::to_string).collect();
            format!(
                "\\begin{{array}}{{c|{}}}\nj & {} \\\\ \\hline\n\\dim W_j & {}\n\\end{{array}}\n",
                "c".repeat(jmax + 1),
                js.join(" & "),
                ds.join(" & ")
            )
        }
        Format::Json => {
            let routes: Vec<Value> = runs
                .iter()
                .map(|(name, t, e)| json!({"name": name, "dims": t.dims, "millis": millis(*e, timings)}))
                .collect();
            to_json(&json!({
                "query": koszul_query(inst),
                "prime": inst.prime(),
                "n": n,
                "m": inst.m(),
                "seed": inst.seed(),
                "dims": dims,
                "routes": routes,
                "predicted_tail": predicted,
                "vanishing_certificate": certificate,
                "match": true,
            }))
        }
    })
}

fn koszul_query(inst: &KoszulInstance) -> String {
    let seed = inst.seed().map_or_else(|| "imported".to_string(), |s| s.to_string());
    format!("koszul n={} m={} p={} seed={seed}", inst.n(), inst.m(), inst.prime())
}
