//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 partial failure, 3 failed
//! verification.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asymptotics::table::{load_coefficients, DATA_DIR_ENV};
use crate::asymptotics::{
    estimator::estimate_low_order_coeffs, large_d_limit, limits::p0_via_integral_from, limits::p0_via_primitive_from,
    p0_known, PadeEstimate,
};
use crate::combinatorics::{irrep_blocks, StringParams};
use crate::discrimination::{
    success_curve, CurvePoint, Method, Scenario, SolveOptions, DEFAULT_SDP_MAX_N, DEFAULT_SRM_MAX_N,
};
use crate::error::{BlockTag, Error};
use crate::gram::{gram_from_irrep_block, gram_from_known_block, known_blocks};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Fixed header of the curve CSV.
pub const CURVE_HEADER: &str = "N,d,scenario,method,p_success,gap,status";

#[derive(Debug, Parser)]
#[command(name = "qedge", version, about = "Optimal and square-root-measurement edge detection in qudit strings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Total success probability over a range of string lengths.
    Curve(CurveArgs),
    /// Large-N limits for one local dimension.
    Asymptote(AsymptoteArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    Unknown,
    Known,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Unknown => Scenario::UnknownUnknown,
            ScenarioArg::Known => Scenario::KnownUnknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Srm,
    Sdp,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Srm => Method::Srm,
            MethodArg::Sdp => Method::Sdp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Oracle,
    Tridiag,
    Holevo,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Tridiag => Suite::Tridiag,
            SuiteArg::Holevo => Suite::Holevo,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// Worker threads (default: available parallelism).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Progress on stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long, value_enum, default_value = "unknown")]
    scenario: ScenarioArg,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    /// Range spec `start:stop:step`, comma-separated segments.
    #[arg(long)]
    n: String,
    #[arg(long, value_enum, default_value = "srm")]
    method: MethodArg,
    /// Duality-gap target of the SDP.
    #[arg(long, default_value_t = 1e-8)]
    gap_tol: f64,
    /// Largest N accepted by the SDP method.
    #[arg(long, default_value_t = DEFAULT_SDP_MAX_N)]
    sdp_max_n: u32,
    /// Largest N accepted by the SRM method.
    #[arg(long, default_value_t = DEFAULT_SRM_MAX_N)]
    srm_max_n: u32,
    /// Also write every block's Gram matrix as CSV into this directory.
    #[arg(long)]
    dump_gram: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct AsymptoteArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    /// Also estimate a_1..a_3 numerically from finite-N data.
    #[arg(long)]
    estimate: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    suite: SuiteArg,
    #[command(flatten)]
    common: Common,
}

/// Parses `start:stop:step` segments joined by commas; `start` alone and
/// `start:stop` (step 1) are accepted. The result must be strictly increasing.
pub fn parse_range_spec(spec: &str) -> Result<Vec<u32>, String> {
    let mut out: Vec<u32> = Vec::new();
    for seg in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = seg.split(':').collect();
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| format!("bad number {s:?} in {seg:?}"));
        let (start, stop, step) = match parts.as_slice() {
            [a] => (num(a)?, num(a)?, 1),
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, s] => (num(a)?, num(b)?, num(s)?),
            _ => return Err(format!("segment {seg:?} is not start:stop:step")),
        };
        if step == 0 {
            return Err(format!("zero step in {seg:?}"));
        }
        if stop < start {
            return Err(format!("segment {seg:?} runs backwards"));
        }
        out.extend((start..=stop).step_by(step as usize));
    }
    if out.is_empty() {
        return Err("empty N list".into());
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err("N values must be strictly increasing across segments".into());
    }
    Ok(out)
}

/// `x` with 12 significant digits in positional notation.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (11 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Capacity { .. } => "capacity",
        Error::NumericalFailure(_) => "numerical_failure",
        Error::NotPsd { .. } => "not_psd",
        Error::MaxIterations { .. } => "max_iterations",
        Error::DegeneratePade { .. } | Error::NoAcceptedPade(_) => "pade",
        Error::NotTabulated(_) => "not_tabulated",
        Error::DataAsset(_) => "data_asset",
        Error::Block { source, .. } => status_of(source),
        Error::Blocks(v) => v.first().map(status_of).unwrap_or("error"),
    }
}

struct Io<'a> {
    stdout: &'a mut (dyn Write + Send),
    stderr: &'a mut (dyn Write + Send),
}

impl Io<'_> {
    fn emit(&mut self, out: Option<&Path>, text: &str) -> Result<(), String> {
        match out {
            Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
            None => self.stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
        }
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.stderr, "{msg}");
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Io { stdout, stderr };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = io.stdout.write_all(rendered.as_bytes());
            } else {
                let _ = io.stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let threads = match &cli.command {
        Command::Curve(a) => a.common.threads,
        Command::Asymptote(a) => a.common.threads,
        Command::Verify(a) => a.common.threads,
    };
    let pool = match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t as usize).build() {
            Ok(p) => Some(p),
            Err(e) => {
                io.note(&format!("error: cannot start {t} worker threads: {e}"));
                return EXIT_USAGE;
            }
        },
        None => None,
    };
    let body = move |io: &mut Io<'_>| match cli.command {
        Command::Curve(a) => cmd_curve(a, io),
        Command::Asymptote(a) => cmd_asymptote(a, io),
        Command::Verify(a) => cmd_verify(a, io),
    };
    match pool {
        Some(p) => p.install(|| body(&mut io)),
        None => body(&mut io),
    }
}

fn block_label(tag: BlockTag) -> String {
    match tag {
        BlockTag::Irrep(l) => format!("lambda{l}"),
        BlockTag::Excitations(e) => format!("excitations{e}"),
    }
}

fn dump_grams(dir: &Path, scenario: Scenario, n: u32, d: u32) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let params = StringParams::new(n, d).map_err(|e| e.to_string())?;
    let grams = match scenario {
        Scenario::UnknownUnknown => irrep_blocks(params).map(|b| b.iter().map(gram_from_irrep_block).collect()),
        Scenario::KnownUnknown => known_blocks(params).map(|b| b.iter().map(gram_from_known_block).collect::<Vec<_>>()),
    }
    .map_err(|e| e.to_string())?;
    for g in grams {
        let path = dir.join(format!("gram_N{n}_d{d}_{scenario}_{}.csv", block_label(g.tag())));
        fs::write(&path, g.to_csv()).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn curve_row(p: &CurvePoint, d: u32, scenario: Scenario, method: Method) -> (String, Value) {
    match &p.result {
        Ok(r) => {
            let gap = match method {
                Method::Sdp => format!("{:.3e}", r.max_gap()),
                Method::Srm => "0".to_string(),
            };
            let status = if r.all_converged() { "ok" } else { "max_iterations" };
            let csv = format!(
                "{},{d},{scenario},{method},{},{gap},{status}",
                p.n,
                format_sig12(r.total)
            );
            let per_block: serde_json::Map<String, Value> = r
                .per_block
                .iter()
                .map(|(t, v)| (block_label(*t), json!(v)))
                .collect();
            let js = json!({
                "N": p.n, "d": d, "scenario": scenario, "method": method,
                "p_success": r.total, "gap": if method == Method::Sdp { json!(r.max_gap()) } else { json!(0.0) },
                "status": status, "per_block": per_block,
            });
            (csv, js)
        }
        Err(e) => {
            let status = status_of(e);
            let csv = format!("{},{d},{scenario},{method},,,{status}", p.n);
            let js = json!({
                "N": p.n, "d": d, "scenario": scenario, "method": method,
                "p_success": null, "gap": null, "status": status, "error": e.to_string(),
            });
            (csv, js)
        }
    }
}

fn cmd_curve(a: CurveArgs, io: &mut Io<'_>) -> i32 {
    let ns = match parse_range_spec(&a.n) {
        Ok(ns) => ns,
        Err(e) => {
            io.note(&format!("error: --n: {e}\nusage: qedge curve --n START:STOP:STEP[,...] [options]"));
            return EXIT_USAGE;
        }
    };
    if !(a.gap_tol > 0.0 && a.gap_tol.is_finite()) {
        io.note("error: --gap-tol must be a positive number");
        return EXIT_USAGE;
    }
    let scenario: Scenario = a.scenario.into();
    let method: Method = a.method.into();
    let mut opts = SolveOptions::with_gap_tol(a.gap_tol);
    opts.sdp_max_n = a.sdp_max_n;
    opts.srm_max_n = a.srm_max_n;

    let mut points = Vec::with_capacity(ns.len());
    for &n in &ns {
        let mut pt = match success_curve(scenario, a.d, &[n], method, &opts) {
            Ok(p) => p,
            Err(e) => {
                io.note(&format!("error: {e}"));
                return EXIT_USAGE;
            }
        };
        let pt = pt.remove(0);
        if a.common.verbose {
            match &pt.result {
                Ok(r) => io.note(&format!("N={n}: {}", format_sig12(r.total))),
                Err(e) => io.note(&format!("N={n}: {e}")),
            }
        }
        points.push(pt);
    }
    let mut partial = points.iter().any(|p| p.result.is_err() || !p.result.as_ref().is_ok_and(|r| r.all_converged()));
    if let Some(dir) = &a.dump_gram {
        for &n in &ns {
            if let Err(e) = dump_grams(dir, scenario, n, a.d) {
                io.note(&format!("warning: N={n}: {e}"));
                partial = true;
            }
        }
    }

    let rows: Vec<(String, Value)> = points.iter().map(|p| curve_row(p, a.d, scenario, method)).collect();
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from(CURVE_HEADER);
            s.push('\n');
            for (line, _) in &rows {
                s.push_str(line);
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let doc = json!({
                "config": {
                    "command": "curve", "scenario": scenario, "d": a.d, "n": ns, "method": method,
                    "gap_tol": a.gap_tol, "sdp_max_n": a.sdp_max_n, "srm_max_n": a.srm_max_n,
                },
                "rows": rows.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON serialization"))
        }
    };
    if let Err(e) = io.emit(a.common.out.as_deref(), &text) {
        io.note(&format!("error: {e}"));
        return EXIT_PARTIAL;
    }
    if partial {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    }
}

/// The `asymptote` report for `d` as JSON, and whether any route failed
/// for a reason other than a missing table.
pub fn asymptote_report(d: u32, estimate: bool) -> (Value, bool) {
    let mut reasons = serde_json::Map::new();
    let mut failed = false;
    let mut note_err = |field: &str, e: &Error, reasons: &mut serde_json::Map<String, Value>| {
        if !matches!(e, Error::NotTabulated(_)) {
            failed = true;
        }
        reasons.insert(field.to_string(), json!(e.to_string()));
    };

    let set = load_coefficients();
    let table = set.as_ref().map_err(Clone::clone).and_then(|s| s.get(d).cloned());
    let (integral, primitive): (Result<PadeEstimate, Error>, Result<PadeEstimate, Error>) = match &table {
        Ok(t) => (p0_via_integral_from(t), p0_via_primitive_from(t)),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    let pick = |r: &Result<PadeEstimate, Error>| r.as_ref().ok().map(|p| (p.value, p.error, p.order));
    let (iv, pv) = (pick(&integral), pick(&primitive));
    if let Err(e) = &integral {
        note_err("p0_pade_integral", e, &mut reasons);
    }
    if let Err(e) = &primitive {
        note_err("p0_pade_primitive", e, &mut reasons);
    }
    let known = p0_known(d);
    if let Err(e) = &known {
        note_err("p0_known", e, &mut reasons);
    }
    let large = large_d_limit(d).ok();
    let cross = match (iv, pv) {
        (Some(a), Some(b)) => Some((a.0 - b.0).abs()),
        _ => None,
    };
    let order = |o: Option<(f64, f64, (usize, usize))>| o.map(|(_, _, (n, m))| format!("[{n}/{m}]"));
    let mut doc = json!({
        "d": d,
        "p0_pade_integral": iv.map(|v| v.0),
        "p0_pade_primitive": pv.map(|v| v.0),
        "p0_known": known.as_ref().ok(),
        "large_d": large,
        "error_estimates": {
            "pade_integral": iv.map(|v| v.1),
            "pade_primitive": pv.map(|v| v.1),
            "cross_route": cross,
            "known_quadrature_tolerance": crate::asymptotics::limits::KNOWN_QUAD_TOL,
        },
        "pade_orders": { "integral": order(iv), "primitive": order(pv) },
        "coefficient_source": set.as_ref().map(|s| s.source().to_string()).ok(),
    });
    if estimate {
        match estimate_low_order_coeffs(d, 3) {
            Ok(c) => doc["estimated_coefficients"] = json!(c),
            Err(e) => {
                note_err("estimated_coefficients", &e, &mut reasons);
                doc["estimated_coefficients"] = Value::Null;
            }
        }
    }
    if !reasons.is_empty() {
        doc["reasons"] = Value::Object(reasons);
    }
    (doc, failed)
}

fn cmd_asymptote(a: AsymptoteArgs, io: &mut Io<'_>) -> i32 {
    if a.common.verbose {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => io.note(&format!("coefficients from {}", dir.to_string_lossy())),
            None => io.note("coefficients from the embedded asset"),
        }
    }
    let (doc, failed) = asymptote_report(a.d, a.estimate);
    let text = match a.common.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON serialization")),
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            for key in ["p0_pade_integral", "p0_pade_primitive", "p0_known", "large_d"] {
                let v = doc[key].as_f64().map(format_sig12).unwrap_or_default();
                s.push_str(&format!("{key},{v}\n"));
            }
            s
        }
    };
    if let Err(e) = io.emit(a.common.out.as_deref(), &text) {
        io.note(&format!("error: {e}"));
        return EXIT_PARTIAL;
    }
    if failed {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    }
}

fn cmd_verify(a: VerifyArgs, io: &mut Io<'_>) -> i32 {
    let suite: Suite = a.suite.into();
    if a.common.verbose {
        io.note(&format!("running {suite}"));
    }
    let reports = run_suite(suite);
    let ok = reports.iter().all(|r| r.ok());
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let v: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({"suite": r.suite.as_str(), "passed": r.passed, "failed": r.failed,
                           "skipped": r.skipped, "first_failure": r.first_failure})
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&v).expect("JSON serialization"))
        }
        Format::Csv => reports.iter().map(|r| format!("{r}\n")).collect(),
    };
    if let Err(e) = io.emit(a.common.out.as_deref(), &text) {
        io.note(&format!("error: {e}"));
        return EXIT_PARTIAL;
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}
