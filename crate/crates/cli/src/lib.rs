//! Verification campaigns and data export for the focal Green function
//! kernel. [`run`] executes one parsed [`RunConfig`] and renders the report;
//! the binary only maps the outcome to an exit code.

use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use focal_green::coeffs::{convolution_oracle, verify_lemma3, CoeffTable};
use focal_green::export::{write_kernel_grid_csv, write_margin_csv, write_solution_csv};
use focal_green::kernels::{find_diagonal_max, kernel_grid, m_kernel, verify_diagonal_dominance};
use focal_green::ratios::{margin_rows, q_hat_at_one_exact, sweep_inequalities, tilde_hat_residual};
use focal_green::scalar::parse_rational;
use focal_green::solver::{boundary_residuals, solve_bvp, Endpoint, RightHandSide};
use focal_green::greenfn::green_eval;
use focal_green::{Error, Order, Rational, Scalar, UnitSquarePoint};
use serde::Serialize;
use serde_json::{json, Value};

/// Largest order whose coefficients are cross-checked against polynomial
/// products in `verify-lemma3`.
const ORACLE_MAX_M: u32 = 12;

/// Exit statuses.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const CHECK_FAILED: u8 = 2;
    pub const INTERNAL: u8 = 3;
}

/// Inclusive order range written `a..b`, or a single order `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRange {
    pub lo: u32,
    pub hi: u32,
}

impl MRange {
    pub fn single(m: u32) -> Self {
        Self { lo: m, hi: m }
    }

    pub fn iter(&self) -> RangeInclusive<u32> {
        self.lo..=self.hi
    }
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parse = |s: &str| s.trim().parse::<u32>().map_err(|_| format!("invalid order `{s}`"));
        let range = match text.split_once("..") {
            Some((lo, hi)) => Self { lo: parse(lo)?, hi: parse(hi.trim_start_matches('='))? },
            None => Self::single(parse(text)?),
        };
        if range.lo > range.hi {
            return Err(format!("empty order range `{text}`"));
        }
        Ok(range)
    }
}

impl fmt::Display for MRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "focal-green", version, about = "Green function of the even-order focal problem and its diagonal-maximum kernel")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Order m (n = 2m + 2), or an inclusive range `a..b`.
    #[arg(long, global = true)]
    pub m: Option<MRange>,
    /// Points per axis of the uniform grid on [0, 1].
    #[arg(long, global = true)]
    pub grid_n: Option<usize>,
    /// Tolerance of the check or search.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate G(t,s) exactly and M(t,s) in floating point.
    #[command(after_help = "CSV columns: m,t,s,G,G_exact,M")]
    Eval {
        /// Rational `p/q`, integer or decimal in [0, 1].
        #[arg(long)]
        t: String,
        #[arg(long)]
        s: String,
    },
    /// Locate the maximum of M(t,t) by golden-section search (m defaults to 0..8, tol to 1e-10).
    #[command(after_help = "CSV columns: m,t0,value")]
    Max,
    /// Check that M peaks on the diagonal over a grid (m 0..8, grid-n 401, tol 1e-12).
    #[command(after_help = "CSV columns: m,t,s,M (the full kernel grid)")]
    VerifyDiagonal,
    /// Check A_k/B_k strictly increasing in exact arithmetic (m 2..40).
    #[command(after_help = "CSV columns: m,k,margin where margin = A_{k+1}B_k - A_k B_{k+1}")]
    VerifyLemma3,
    /// Check Q̂(1) = 2 and Q̃ + 1 = Q̂ exactly (m 1..30).
    #[command(after_help = "CSV columns: m,q_hat_at_one,tilde_identity")]
    VerifyIdentities,
    /// Check both stationarity inequalities on grid pairs (m 1..8, grid-n 101).
    #[command(after_help = "CSV columns: m,s,t,l10,l11 (l10 empty at t = 1)")]
    VerifyInequalities,
    /// Solve the boundary value problem through the Green function (m 0, grid-n 101).
    #[command(after_help = "CSV columns: t,x\nThe --rhs-table file has a header row and columns t,f.")]
    Solve {
        /// Constant right-hand side.
        #[arg(long, conflicts_with = "rhs_table")]
        rhs: Option<f64>,
        /// CSV of samples of the right-hand side, interpolated linearly.
        #[arg(long)]
        rhs_table: Option<PathBuf>,
        /// Gauss–Legendre nodes on each side of the kink.
        #[arg(long, default_value_t = 16)]
        quad_nodes: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Max => "max",
            Command::VerifyDiagonal => "verify-diagonal",
            Command::VerifyLemma3 => "verify-lemma3",
            Command::VerifyIdentities => "verify-identities",
            Command::VerifyInequalities => "verify-inequalities",
            Command::Solve { .. } => "solve",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Internal(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_)
            | Error::Ordering(_)
            | Error::Unsupported(_)
            | Error::InvalidArgument(_)
            | Error::LengthMismatch { .. }
            | Error::InsufficientGrid { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn to_json<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

/// Rendered report and whether every check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub report: String,
    /// Human-readable lines describing failed checks.
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            exit::PASS
        } else {
            exit::CHECK_FAILED
        }
    }
}

/// Parameters after defaults are applied and validated.
struct Resolved {
    m: MRange,
    grid_n: usize,
    tol: f64,
}

fn resolve(common: &Common, m: MRange, grid_n: usize, tol: f64) -> Result<Resolved, CliError> {
    let r = Resolved { m: common.m.unwrap_or(m), grid_n: common.grid_n.unwrap_or(grid_n), tol: common.tol.unwrap_or(tol) };
    if r.grid_n < 3 {
        return Err(usage(format!("--grid-n must be at least 3, got {}", r.grid_n)));
    }
    if !(r.tol > 0.0 && r.tol.is_finite()) {
        return Err(usage(format!("--tol must be positive and finite, got {}", r.tol)));
    }
    Ok(r)
}

fn parse_coordinate(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| usage(format!("--{name} expects a rational like 1/3 or 0.25, got `{text}`")))
}

fn read_rhs_table(path: &Path) -> Result<RightHandSide, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (line_no, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || usage(format!("{}:{}: expected `t,f`", path.display(), line_no + 1));
        let (t, f) = line.split_once(',').ok_or_else(bad)?;
        nodes.push(t.trim().parse::<f64>().map_err(|_| bad())?);
        values.push(f.trim().parse::<f64>().map_err(|_| bad())?);
    }
    Ok(RightHandSide::sampled(nodes, values)?)
}

/// Runs one campaign and renders its report in the requested format.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let common = &config.common;
    let mut csv: Vec<u8> = Vec::new();
    let mut details: Vec<Value> = Vec::new();
    let mut violations: Vec<String> = Vec::new();
    let params;

    match &config.command {
        Command::Eval { t, s } => {
            let r = resolve(common, MRange::single(1), 3, 1.0)?;
            let (t, s) = (parse_coordinate("t", t)?, parse_coordinate("s", s)?);
            let p = UnitSquarePoint::new(t.clone(), s.clone())?;
            let pf = p.to_f64();
            params = json!({ "m": r.m.to_string(), "t": t.to_string(), "s": s.to_string() });
            writeln!(csv, "m,t,s,G,G_exact,M")?;
            for m in r.m.iter() {
                let g = green_eval(Order::new(m), &p);
                let kernel = m_kernel(Order::new(m), &pf)?;
                writeln!(csv, "{m},{t},{s},{},{g},{kernel}", g.as_f64())?;
                details.push(json!({ "m": m, "green": g.as_f64(), "green_exact": g.to_string(), "kernel": kernel }));
            }
        }
        Command::Max => {
            let r = resolve(common, MRange { lo: 0, hi: 8 }, 3, 1e-10)?;
            params = json!({ "m": r.m.to_string(), "tol": r.tol });
            writeln!(csv, "m,t0,value")?;
            for m in r.m.iter() {
                let d = find_diagonal_max(Order::new(m), r.tol)?;
                writeln!(csv, "{m},{},{}", d.t0, d.value)?;
                details.push(json!({ "m": m, "t0": d.t0, "value": d.value }));
            }
        }
        Command::VerifyDiagonal => {
            let r = resolve(common, MRange { lo: 0, hi: 8 }, 401, 1e-12)?;
            params = json!({ "m": r.m.to_string(), "grid_n": r.grid_n, "tol": r.tol });
            for m in r.m.iter() {
                let report = verify_diagonal_dominance(Order::new(m), r.grid_n, r.tol)?;
                if !report.passed() {
                    violations.push(format!(
                        "m={m}: {} off-diagonal points above the diagonal maximum, {} inequality failures",
                        report.violations.len(),
                        report.inequalities.as_ref().map_or(0, |i| i.failures.len())
                    ));
                }
                if common.format == Format::Csv {
                    write_kernel_grid_csv(&mut csv, m, &kernel_grid(Order::new(m), r.grid_n)?, m == r.m.lo)?;
                }
                details.push(to_json(&report)?);
            }
        }
        Command::VerifyLemma3 => {
            let r = resolve(common, MRange { lo: 2, hi: 40 }, 3, 1.0)?;
            params = json!({ "m": r.m.to_string() });
            writeln!(csv, "m,k,margin")?;
            for m in r.m.iter() {
                let result = verify_lemma3(m)?;
                let oracle = if m <= ORACLE_MAX_M { Some(CoeffTable::new(m)? == convolution_oracle(m)?) } else { None };
                if !result.holds {
                    violations.push(format!("m={m}: A_k/B_k not strictly increasing"));
                }
                if oracle == Some(false) {
                    violations.push(format!("m={m}: coefficient sums disagree with the polynomial products"));
                }
                for (k, margin) in result.margins.iter().enumerate() {
                    writeln!(csv, "{m},{k},{margin}")?;
                }
                let mut entry = to_json(&result)?;
                entry["oracle_agrees"] = json!(oracle);
                details.push(entry);
            }
        }
        Command::VerifyIdentities => {
            let r = resolve(common, MRange { lo: 1, hi: 30 }, 3, 1.0)?;
            params = json!({ "m": r.m.to_string() });
            writeln!(csv, "m,q_hat_at_one,tilde_identity")?;
            for m in r.m.iter() {
                let at_one: Rational = q_hat_at_one_exact(Order::new(m))?;
                let two = at_one == Rational::from_integer(2.into());
                let identity = tilde_hat_residual(Order::new(m)).is_zero();
                if !two {
                    violations.push(format!("m={m}: Q̂(1) = {at_one}"));
                }
                if !identity {
                    violations.push(format!("m={m}: Q̃ + 1 - Q̂ is not the zero polynomial"));
                }
                writeln!(csv, "{m},{at_one},{identity}")?;
                details.push(json!({ "m": m, "q_hat_at_one": at_one.to_string(), "tilde_identity": identity }));
            }
        }
        Command::VerifyInequalities => {
            let r = resolve(common, MRange { lo: 1, hi: 8 }, 101, 1.0)?;
            params = json!({ "m": r.m.to_string(), "grid_n": r.grid_n });
            for m in r.m.iter() {
                let sweep = sweep_inequalities(Order::new(m), r.grid_n)?;
                if !sweep.passed() {
                    violations.push(format!("m={m}: {} pairs with a non-positive margin", sweep.failures.len()));
                }
                if common.format == Format::Csv {
                    write_margin_csv(&mut csv, m, &margin_rows(Order::new(m), r.grid_n)?, m == r.m.lo)?;
                }
                details.push(to_json(&sweep)?);
            }
        }
        Command::Solve { rhs, rhs_table, quad_nodes } => {
            let r = resolve(common, MRange::single(0), 101, 1.0)?;
            if r.m.lo != r.m.hi {
                return Err(usage("solve takes a single order"));
            }
            let f = match rhs_table {
                Some(path) => read_rhs_table(path)?,
                None => RightHandSide::constant(rhs.unwrap_or(1.0)),
            };
            let order = Order::new(r.m.lo);
            let sol = solve_bvp(order, &f, r.grid_n, *quad_nodes)?;
            let residuals = boundary_residuals(&sol)?;
            for res in residuals.iter().filter(|res| !res.passed()) {
                violations.push(format!(
                    "x^({}) at t = {} is {:e}, tolerance {:e}",
                    res.derivative,
                    if res.endpoint == Endpoint::Left { 0 } else { 1 },
                    res.value,
                    res.tolerance
                ));
            }
            params = json!({
                "m": r.m.lo,
                "grid_n": r.grid_n,
                "quad_nodes": quad_nodes,
                "rhs": match rhs_table {
                    Some(path) => json!({ "table": path.display().to_string() }),
                    None => json!({ "constant": rhs.unwrap_or(1.0) }),
                },
            });
            write_solution_csv(&mut csv, &sol)?;
            details.push(json!({ "solution": to_json(&sol)?, "residuals": to_json(&residuals)? }));
        }
    }

    let pass = violations.is_empty();
    let report = match common.format {
        Format::Csv => String::from_utf8(csv).map_err(|e| CliError::Internal(e.to_string()))?,
        Format::Json => {
            let doc = json!({ "command": config.command.name(), "params": params, "pass": pass, "details": details });
            let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
            text.push('\n');
            text
        }
    };
    Ok(Outcome { pass, report, violations })
}

/// Runs the campaign and writes the report to `--output` or `out`.
pub fn execute(config: &RunConfig, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let outcome = run(config)?;
    match &config.common.output {
        Some(path) => std::fs::write(path, &outcome.report)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(outcome.report.as_bytes())?,
    }
    Ok(outcome)
}
