//! `fht` — command-line front end for Toeplitz determinants with
//! Fisher–Hartwig symbols.
//!
//! A symbol is described by a small JSON file (singularity angles with their
//! α/β strengths plus the Fourier coefficients of the smooth part V); every
//! subcommand loads one or more such files and emits CSV or JSON:
//!
//! * `exact`     — ln D_n and the minor ratios χ² over an n-grid, by dense
//!   elimination and/or the Szegő recursion;
//! * `predict`   — the large-n prediction of ln D_n, term by term;
//! * `compare`   — exact vs predicted per n, with a log–log fit of the ratio
//!   error against the expected decay exponent;
//! * `sweep`     — `compare` across several symbol files;
//! * `verify-ab` — the differential identity for ∂ ln D_n in a singularity
//!   parameter (γ = α_ν or β_ν);
//! * `verify-t`  — the differential identity along the deformation
//!   f_t = f·(1 − t + t e^V)·e^{−V};
//! * `heine`     — D_n for n ≤ 3 by the direct n-fold circle integral.
//!
//! Exit codes: 0 success; 2 validation error (flags, grid, tolerance, or
//! symbol file); 3 numerical breakdown (vanishing minor or unmet quadrature
//! tolerance) — partial output is still written with the flagged order
//! marked. Output is deterministic: floats are printed with 17 significant
//! digits and row order is fixed, so identical configurations produce
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fh_toeplitz::{
    compute_moments, error_decay_fit, heine_direct, logdet_series_elimination,
    logdet_series_recursion, predict_logdet, verify_identity_alpha_beta, verify_identity_t,
    AsymptoticBreakdown, Complex64, DecayFit, DeterminantError, DeterminantSeries, DiffidError,
    FhSymbol, GammaKind, IdentityReport, Method, MomentError,
};
use serde_json::{json, Value};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

// ---------------------------------------------------------------------------
// Argument surface.
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "fht",
    version,
    about = "Toeplitz determinants with Fisher–Hartwig symbols: exact series, \
             large-n predictions, and differential-identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Large-n prediction of ln D_n, split into its five terms.
    Predict(PredictArgs),
    /// Exact ln D_n and minor ratios χ² over an n-grid.
    Exact(ExactArgs),
    /// Exact vs predicted ln D_n with a decay fit of the ratio error.
    Compare(CompareArgs),
    /// Compare across several symbol files.
    Sweep(SweepArgs),
    /// Check the differential identity in a singularity parameter.
    VerifyAb(VerifyAbArgs),
    /// Check the differential identity along the smooth-part deformation.
    VerifyT(VerifyTArgs),
    /// D_n for n ≤ 3 by the direct n-fold integral.
    Heine(HeineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    Elimination,
    Recursion,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesMethodArg {
    Elimination,
    Recursion,
}

impl From<SeriesMethodArg> for Method {
    fn from(m: SeriesMethodArg) -> Method {
        match m {
            SeriesMethodArg::Elimination => Method::Elimination,
            SeriesMethodArg::Recursion => Method::Recursion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GammaArg {
    Alpha,
    Beta,
}

impl From<GammaArg> for GammaKind {
    fn from(g: GammaArg) -> GammaKind {
        match g {
            GammaArg::Alpha => GammaKind::Alpha,
            GammaArg::Beta => GammaKind::Beta,
        }
    }
}

#[derive(clap::Args)]
struct PredictArgs {
    /// Symbol description (JSON).
    #[arg(long, value_name = "FILE")]
    symbol: PathBuf,
    /// Matrix dimension n ≥ 1.
    #[arg(long)]
    n: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExactArgs {
    /// Symbol description (JSON).
    #[arg(long, value_name = "FILE")]
    symbol: PathBuf,
    /// Single matrix dimension (alternative to --n-grid).
    #[arg(long)]
    n: Option<usize>,
    /// Dimensions to report: comma list and/or inclusive a..b ranges,
    /// strictly increasing (e.g. "1..8" or "16,32,64").
    #[arg(long = "n-grid", value_name = "GRID")]
    n_grid: Option<String>,
    /// Absolute quadrature tolerance per Fourier coefficient.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Determinant algorithm; `both` emits one block of rows per method.
    #[arg(long, value_enum, default_value = "elimination")]
    method: MethodChoice,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CompareArgs {
    /// Symbol description (JSON).
    #[arg(long, value_name = "FILE")]
    symbol: PathBuf,
    /// Single matrix dimension (alternative to --n-grid).
    #[arg(long)]
    n: Option<usize>,
    /// Dimensions to compare at (strictly increasing grid).
    #[arg(long = "n-grid", value_name = "GRID")]
    n_grid: Option<String>,
    /// Absolute quadrature tolerance per Fourier coefficient.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Exact-series algorithm backing the comparison.
    #[arg(long, value_enum, default_value = "elimination")]
    method: SeriesMethodArg,
    /// Fit the decay slope by the median of pairwise slopes instead of
    /// least squares (tames oscillatory error envelopes).
    #[arg(long = "robust-fit")]
    robust_fit: bool,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Symbol description (JSON); repeat the flag for each symbol.
    #[arg(long = "symbol", value_name = "FILE", required = true)]
    symbols: Vec<PathBuf>,
    /// Single matrix dimension (alternative to --n-grid).
    #[arg(long)]
    n: Option<usize>,
    /// Dimensions to compare at (strictly increasing grid).
    #[arg(long = "n-grid", value_name = "GRID")]
    n_grid: Option<String>,
    /// Absolute quadrature tolerance per Fourier coefficient.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Exact-series algorithm backing the comparison.
    #[arg(long, value_enum, default_value = "elimination")]
    method: SeriesMethodArg,
    /// Median-of-pairwise-slopes fit instead of least squares.
    #[arg(long = "robust-fit")]
    robust_fit: bool,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyAbArgs {
    /// Symbol description (JSON); must have V ≡ 0.
    #[arg(long, value_name = "FILE")]
    symbol: PathBuf,
    /// Matrix dimension n ≥ 1.
    #[arg(long)]
    n: usize,
    /// Index of the singularity whose parameter is differentiated.
    #[arg(long, visible_alias = "j", default_value_t = 0)]
    nu: usize,
    /// Which parameter of singularity ν plays γ.
    #[arg(long, value_enum)]
    gamma: GammaArg,
    /// Central finite-difference step for ∂/∂γ.
    #[arg(long = "fd-step", default_value_t = 1e-4)]
    fd_step: f64,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyTArgs {
    /// Symbol description (JSON); must have V ≢ 0.
    #[arg(long, value_name = "FILE")]
    symbol: PathBuf,
    /// Matrix dimension n ≥ 1.
    #[arg(long)]
    n: usize,
    /// Deformation parameter in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Central finite-difference step for ∂/∂t.
    #[arg(long = "fd-step", default_value_t = 1e-4)]
    fd_step: f64,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct HeineArgs {
    /// Symbol description (JSON).
    #[arg(long, value_name = "FILE")]
    symbol: PathBuf,
    /// Matrix dimension, n ∈ {1, 2, 3}.
    #[arg(long)]
    n: usize,
    /// Refinement tolerance on the value (absolute, scaled by max(1,|D_n|)).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Failure → exit-code mapping.
// ---------------------------------------------------------------------------

/// What went wrong, bucketed by exit code: validation problems exit 2,
/// numerical breakdowns exit 3.
#[derive(Debug)]
enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<MomentError> for Failure {
    fn from(e: MomentError) -> Failure {
        match e {
            MomentError::InvalidTolerance { .. } => Failure::Validation(e.to_string()),
            MomentError::ToleranceNotMet { .. } => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<DeterminantError> for Failure {
    fn from(e: DeterminantError) -> Failure {
        match e {
            DeterminantError::ToleranceNotMet { .. } => Failure::Numerical(e.to_string()),
            DeterminantError::NotEnoughMoments { .. } | DeterminantError::UnsupportedOrder { .. } => {
                Failure::Validation(e.to_string())
            }
        }
    }
}

impl From<DiffidError> for Failure {
    fn from(e: DiffidError) -> Failure {
        match e {
            DiffidError::PreconditionViolated { .. } | DiffidError::RegularizationRequired { .. } => {
                Failure::Validation(e.to_string())
            }
            DiffidError::MinorBreakdown { .. }
            | DiffidError::DeformationVanishes { .. }
            | DiffidError::ToleranceNotMet { .. } => Failure::Numerical(e.to_string()),
        }
    }
}

/// A finished run: the rendered payload, where it goes, and an optional
/// breakdown note that turns the exit code into 3 after the payload is
/// still written out.
struct Rendered {
    payload: String,
    output: Option<PathBuf>,
    flagged: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(r) => {
            if let Some(path) = &r.output {
                if let Err(e) = fs::write(path, &r.payload) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", r.payload);
            }
            match &r.flagged {
                Some(note) => {
                    eprintln!("numerical breakdown: {note}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical breakdown: {msg}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Rendered, Failure> {
    match cmd {
        Command::Predict(a) => run_predict(a),
        Command::Exact(a) => run_exact(a),
        Command::Compare(a) => run_compare(a),
        Command::Sweep(a) => run_sweep(a),
        Command::VerifyAb(a) => run_verify_ab(a),
        Command::VerifyT(a) => run_verify_t(a),
        Command::Heine(a) => run_heine(a),
    }
}

// ---------------------------------------------------------------------------
// Shared validation and plumbing.
// ---------------------------------------------------------------------------

fn load_symbol(path: &Path) -> Result<(FhSymbol, String), Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::Validation(format!("cannot read symbol file {}: {e}", path.display()))
    })?;
    let sym = FhSymbol::from_json_str(&text).map_err(|e| {
        Failure::Validation(format!("invalid symbol file {}: {e}", path.display()))
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "symbol".to_string());
    Ok((sym, stem))
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if (1e-14..=1e-6).contains(&tol) {
        Ok(())
    } else {
        Err(Failure::Validation(format!(
            "tol {tol:e} outside the admissible range [1e-14, 1e-6]"
        )))
    }
}

fn check_n(n: usize) -> Result<(), Failure> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Failure::Validation("n must be at least 1".to_string()))
    }
}

/// Parse "4", "1..8", "16,32,64", or mixtures like "1..4,8,16" into a
/// strictly increasing grid of dimensions ≥ 1.
fn parse_n_grid(text: &str) -> Result<Vec<usize>, String> {
    let mut grid: Vec<usize> = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(format!("empty entry in n-grid {text:?}"));
        }
        if let Some((lo, hi)) = piece.split_once("..") {
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad range start {lo:?} in n-grid"))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad range end {hi:?} in n-grid"))?;
            if lo > hi {
                return Err(format!("descending range {piece:?} in n-grid"));
            }
            grid.extend(lo..=hi);
        } else {
            grid.push(
                piece
                    .parse()
                    .map_err(|_| format!("bad entry {piece:?} in n-grid"))?,
            );
        }
    }
    if grid.is_empty() {
        return Err("n-grid is empty".to_string());
    }
    if grid[0] == 0 {
        return Err("n-grid entries must be at least 1".to_string());
    }
    for w in grid.windows(2) {
        if w[1] <= w[0] {
            return Err(format!(
                "n-grid must be strictly increasing ({} does not exceed {})",
                w[1], w[0]
            ));
        }
    }
    Ok(grid)
}

fn resolve_grid(n: Option<usize>, n_grid: Option<&str>) -> Result<Vec<usize>, Failure> {
    match (n, n_grid) {
        (Some(_), Some(_)) => Err(Failure::Validation(
            "pass either --n or --n-grid, not both".to_string(),
        )),
        (Some(n), None) => {
            check_n(n)?;
            Ok(vec![n])
        }
        (None, Some(g)) => parse_n_grid(g).map_err(Failure::Validation),
        (None, None) => Err(Failure::Validation(
            "one of --n or --n-grid is required".to_string(),
        )),
    }
}

/// Moments to ±n_max, then one determinant series by the chosen algorithm.
fn exact_series(
    sym: &FhSymbol,
    n_max: usize,
    tol: f64,
    method: Method,
) -> Result<DeterminantSeries, Failure> {
    let table = compute_moments(sym, n_max, tol)?;
    let series = match method {
        Method::Elimination => logdet_series_elimination(&table, n_max),
        Method::Recursion => logdet_series_recursion(&table, n_max),
    }?;
    Ok(series)
}

/// 17-significant-digit float rendering shared by every CSV writer.
fn c16(x: f64) -> String {
    format!("{x:.16e}")
}

/// Complex values serialize exactly like the library's own JSON dumps.
fn cx(z: Complex64) -> Value {
    serde_json::to_value(z).expect("complex serialization cannot fail")
}

fn finish_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("JSON rendering cannot fail");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

fn run_predict(a: PredictArgs) -> Result<Rendered, Failure> {
    check_n(a.n)?;
    let (sym, stem) = load_symbol(&a.symbol)?;
    let pred = predict_logdet(&sym, a.n);
    let payload = match a.format {
        Format::Json => finish_json(json!({
            "command": "predict",
            "symbol": stem,
            "n": a.n,
            "prediction": serde_json::to_value(pred).expect("prediction serializes"),
        })),
        Format::Csv => {
            let mut out = String::from("term,re,im\n");
            for (name, z) in [
                ("szego", pred.szego_term),
                ("wh", pred.wh_term),
                ("power", pred.power_term),
                ("pair", pred.pair_term),
                ("g", pred.g_term),
                ("total", pred.total),
            ] {
                writeln!(out, "{name},{},{}", c16(z.re), c16(z.im)).unwrap();
            }
            writeln!(out, "# error_exponent,{}", c16(pred.error_exponent)).unwrap();
            writeln!(out, "# valid,{}", pred.valid).unwrap();
            out
        }
    };
    Ok(Rendered {
        payload,
        output: a.output,
        flagged: None,
    })
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

fn run_exact(a: ExactArgs) -> Result<Rendered, Failure> {
    check_tol(a.tol)?;
    let (sym, stem) = load_symbol(&a.symbol)?;
    let grid = resolve_grid(a.n, a.n_grid.as_deref())?;
    let n_max = *grid.last().expect("grid is nonempty");
    let methods: Vec<Method> = match a.method {
        MethodChoice::Elimination => vec![Method::Elimination],
        MethodChoice::Recursion => vec![Method::Recursion],
        MethodChoice::Both => vec![Method::Elimination, Method::Recursion],
    };
    let mut series_list = Vec::new();
    for &m in &methods {
        series_list.push(exact_series(&sym, n_max, a.tol, m)?);
    }
    let flagged = flag_note(series_list.iter().map(|s| (None, s)));

    let payload = match a.format {
        Format::Csv => {
            let mut out = String::from("n,logdet_re,logdet_im,chi_sq_re,chi_sq_im,method\n");
            for s in &series_list {
                for &n in &grid {
                    if n > s.n_max {
                        break;
                    }
                    let ld = s.logdet_at(n);
                    let ch = s.chi_sq_at(n - 1);
                    writeln!(
                        out,
                        "{n},{},{},{},{},{}",
                        c16(ld.re),
                        c16(ld.im),
                        c16(ch.re),
                        c16(ch.im),
                        s.method
                    )
                    .unwrap();
                }
            }
            for s in &series_list {
                if let Some(k) = s.breakdown_at {
                    writeln!(out, "# breakdown_at,{},{k}", s.method).unwrap();
                }
            }
            out
        }
        Format::Json => {
            let series: Vec<Value> = series_list
                .iter()
                .map(|s| {
                    let rows: Vec<Value> = grid
                        .iter()
                        .filter(|&&n| n <= s.n_max)
                        .map(|&n| {
                            json!({
                                "n": n,
                                "logdet": cx(s.logdet_at(n)),
                                "chi_sq": cx(s.chi_sq_at(n - 1)),
                            })
                        })
                        .collect();
                    json!({
                        "method": s.method.to_string(),
                        "breakdown_at": s.breakdown_at,
                        "rows": rows,
                    })
                })
                .collect();
            finish_json(json!({
                "command": "exact",
                "symbol": stem,
                "tol": a.tol,
                "series": series,
            }))
        }
    };
    Ok(Rendered {
        payload,
        output: a.output,
        flagged,
    })
}

/// One shared breakdown message across series (and, for sweeps, symbols).
fn flag_note<'a, I>(series: I) -> Option<String>
where
    I: Iterator<Item = (Option<&'a str>, &'a DeterminantSeries)>,
{
    let mut notes = Vec::new();
    for (stem, s) in series {
        if let Some(k) = s.breakdown_at {
            notes.push(match stem {
                Some(name) => format!("{name}: {} series hit a vanishing minor at n = {k}", s.method),
                None => format!("{} series hit a vanishing minor at n = {k}", s.method),
            });
        }
    }
    if notes.is_empty() {
        None
    } else {
        Some(notes.join("; "))
    }
}

// ---------------------------------------------------------------------------
// compare / sweep
// ---------------------------------------------------------------------------

/// Everything one symbol contributes to a compare/sweep payload.
struct CompareRun {
    stem: String,
    series: DeterminantSeries,
    rows: Vec<(usize, Complex64, AsymptoticBreakdown, f64)>,
    expected_slope: f64,
    prediction_valid: bool,
    fit: Option<DecayFit>,
}

fn compare_run(
    sym: &FhSymbol,
    stem: String,
    grid: &[usize],
    tol: f64,
    method: Method,
    robust: bool,
) -> Result<CompareRun, Failure> {
    let n_max = *grid.last().expect("grid is nonempty");
    let series = exact_series(sym, n_max, tol, method)?;
    let probe = predict_logdet(sym, grid[0]);
    let mut rows = Vec::new();
    for &n in grid {
        if n > series.n_max {
            break;
        }
        let pred = predict_logdet(sym, n);
        let ld = series.logdet_at(n);
        let ratio_err = ((ld - pred.total).exp() - ONE).norm();
        rows.push((n, ld, pred, ratio_err));
    }
    let pts: Vec<(usize, f64)> = rows.iter().map(|r| (r.0, r.3)).collect();
    let fit = if pts.len() >= 4 && pts.iter().all(|&(_, e)| e.is_finite() && e > 0.0) {
        error_decay_fit(&pts, probe.error_exponent, robust).ok()
    } else {
        None
    };
    Ok(CompareRun {
        stem,
        series,
        rows,
        expected_slope: probe.error_exponent,
        prediction_valid: probe.valid,
        fit,
    })
}

fn compare_csv_rows(out: &mut String, run: &CompareRun, lead: Option<&str>) {
    for (n, ld, pred, ratio_err) in &run.rows {
        if let Some(stem) = lead {
            write!(out, "{stem},").unwrap();
        }
        writeln!(
            out,
            "{n},{},{},{},{},{}",
            c16(ld.re),
            c16(ld.im),
            c16(pred.total.re),
            c16(pred.total.im),
            c16(*ratio_err)
        )
        .unwrap();
    }
}

fn fit_fields(fit: &Option<DecayFit>) -> (String, String) {
    match fit {
        Some(f) => (c16(f.slope), c16(f.intercept)),
        None => ("unavailable".to_string(), "unavailable".to_string()),
    }
}

fn compare_json_object(run: &CompareRun, method: Method, robust: bool) -> Value {
    let rows: Vec<Value> = run
        .rows
        .iter()
        .map(|(n, ld, pred, ratio_err)| {
            json!({
                "n": n,
                "logdet": cx(*ld),
                "prediction": serde_json::to_value(pred).expect("prediction serializes"),
                "abs_ratio_err": ratio_err,
            })
        })
        .collect();
    json!({
        "symbol": run.stem,
        "method": method.to_string(),
        "robust": robust,
        "expected_slope": run.expected_slope,
        "prediction_valid": run.prediction_valid,
        "rows": rows,
        "fit": run
            .fit
            .map(|f| serde_json::to_value(f).expect("fit serializes"))
            .unwrap_or(Value::Null),
        "breakdown_at": run.series.breakdown_at,
    })
}

fn run_compare(a: CompareArgs) -> Result<Rendered, Failure> {
    check_tol(a.tol)?;
    let (sym, stem) = load_symbol(&a.symbol)?;
    let grid = resolve_grid(a.n, a.n_grid.as_deref())?;
    let method: Method = a.method.into();
    let run = compare_run(&sym, stem, &grid, a.tol, method, a.robust_fit)?;
    let flagged = flag_note(std::iter::once((None, &run.series)));

    let payload = match a.format {
        Format::Csv => {
            let mut out = String::from("n,logdet_re,logdet_im,pred_re,pred_im,abs_ratio_err\n");
            compare_csv_rows(&mut out, &run, None);
            let (slope, intercept) = fit_fields(&run.fit);
            writeln!(out, "# method,{method}").unwrap();
            writeln!(out, "# prediction_valid,{}", run.prediction_valid).unwrap();
            writeln!(out, "# expected_slope,{}", c16(run.expected_slope)).unwrap();
            writeln!(out, "# fitted_slope,{slope}").unwrap();
            writeln!(out, "# intercept,{intercept}").unwrap();
            writeln!(out, "# robust,{}", a.robust_fit).unwrap();
            if let Some(k) = run.series.breakdown_at {
                writeln!(out, "# breakdown_at,{method},{k}").unwrap();
            }
            out
        }
        Format::Json => {
            let mut obj = compare_json_object(&run, method, a.robust_fit);
            let map = obj.as_object_mut().expect("compare object is a map");
            map.insert("command".to_string(), json!("compare"));
            map.insert("tol".to_string(), json!(a.tol));
            finish_json(obj)
        }
    };
    Ok(Rendered {
        payload,
        output: a.output,
        flagged,
    })
}

fn run_sweep(a: SweepArgs) -> Result<Rendered, Failure> {
    check_tol(a.tol)?;
    let grid = resolve_grid(a.n, a.n_grid.as_deref())?;
    let method: Method = a.method.into();
    let mut runs = Vec::new();
    for path in &a.symbols {
        let (sym, stem) = load_symbol(path)?;
        runs.push(compare_run(&sym, stem, &grid, a.tol, method, a.robust_fit)?);
    }
    let flagged = flag_note(runs.iter().map(|r| (Some(r.stem.as_str()), &r.series)));

    let payload = match a.format {
        Format::Csv => {
            let mut out =
                String::from("symbol,n,logdet_re,logdet_im,pred_re,pred_im,abs_ratio_err\n");
            for run in &runs {
                compare_csv_rows(&mut out, run, Some(&run.stem));
            }
            writeln!(out, "# method,{method}").unwrap();
            writeln!(out, "# robust,{}", a.robust_fit).unwrap();
            for run in &runs {
                let (slope, intercept) = fit_fields(&run.fit);
                writeln!(
                    out,
                    "# fit,{},{},{slope},{intercept},{}",
                    run.stem,
                    c16(run.expected_slope),
                    run.prediction_valid
                )
                .unwrap();
            }
            for run in &runs {
                if let Some(k) = run.series.breakdown_at {
                    writeln!(out, "# breakdown_at,{},{method},{k}", run.stem).unwrap();
                }
            }
            out
        }
        Format::Json => {
            let objects: Vec<Value> = runs
                .iter()
                .map(|r| compare_json_object(r, method, a.robust_fit))
                .collect();
            finish_json(json!({
                "command": "sweep",
                "tol": a.tol,
                "method": method.to_string(),
                "robust": a.robust_fit,
                "runs": objects,
            }))
        }
    };
    Ok(Rendered {
        payload,
        output: a.output,
        flagged,
    })
}

// ---------------------------------------------------------------------------
// verify-ab / verify-t
// ---------------------------------------------------------------------------

fn render_report(
    command: &str,
    stem: &str,
    report: &IdentityReport,
    format: Format,
) -> String {
    match format {
        Format::Json => finish_json(json!({
            "command": command,
            "symbol": stem,
            "report": serde_json::to_value(report).expect("report serializes"),
        })),
        Format::Csv => {
            let mut out =
                String::from("lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,fd_step,quad_tol\n");
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                c16(report.lhs.re),
                c16(report.lhs.im),
                c16(report.rhs.re),
                c16(report.rhs.im),
                c16(report.abs_err),
                c16(report.rel_err),
                c16(report.fd_step),
                c16(report.quad_tol)
            )
            .unwrap();
            out
        }
    }
}

fn run_verify_ab(a: VerifyAbArgs) -> Result<Rendered, Failure> {
    check_n(a.n)?;
    let (sym, stem) = load_symbol(&a.symbol)?;
    let report = verify_identity_alpha_beta(&sym, a.n, a.nu, a.gamma.into(), a.fd_step)?;
    Ok(Rendered {
        payload: render_report("verify-ab", &stem, &report, a.format),
        output: a.output,
        flagged: None,
    })
}

fn run_verify_t(a: VerifyTArgs) -> Result<Rendered, Failure> {
    check_n(a.n)?;
    let (sym, stem) = load_symbol(&a.symbol)?;
    let report = verify_identity_t(&sym, a.n, a.t, a.fd_step)?;
    Ok(Rendered {
        payload: render_report("verify-t", &stem, &report, a.format),
        output: a.output,
        flagged: None,
    })
}

// ---------------------------------------------------------------------------
// heine
// ---------------------------------------------------------------------------

fn run_heine(a: HeineArgs) -> Result<Rendered, Failure> {
    check_n(a.n)?;
    check_tol(a.tol)?;
    let (sym, stem) = load_symbol(&a.symbol)?;
    let value = heine_direct(&sym, a.n, a.tol)?;
    let payload = match a.format {
        Format::Csv => {
            let mut out = String::from("n,re,im\n");
            writeln!(out, "{},{},{}", a.n, c16(value.re), c16(value.im)).unwrap();
            out
        }
        Format::Json => finish_json(json!({
            "command": "heine",
            "symbol": stem,
            "n": a.n,
            "tol": a.tol,
            "value": cx(value),
        })),
    };
    Ok(Rendered {
        payload,
        output: a.output,
        flagged: None,
    })
}

// ---------------------------------------------------------------------------
// Tests.
// ---------------------------------------------------------------------------
