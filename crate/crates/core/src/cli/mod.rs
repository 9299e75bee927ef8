//! The `kummer` command-line tool.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input (config, G-spec,
//! flags), 3 unmet precondition, 4 formula/oracle disagreement, 5 failed
//! reproduction check.

mod report;
mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::code::{self, CodeError, LinearCode, DEFAULT_BUDGET};
use crate::curve::{CurveConfig, KummerCurve, Place};
use crate::onepoint::semigroup_at;
use crate::rr::{oracle_pure_gap, Divisor, RrError};
use crate::twopoint::{self, TwoPointError};

pub use report::{Format, Report, Table};

/// Environment variable overriding the brute-force budget.
pub const BUDGET_ENV: &str = "KUMMER_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "kummer", version, about = "Semigroups, pure gaps and AG codes on curves y^m = f(x)^lambda")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weierstrass semigroup at P_inf or at a ramified place
    Semigroup {
        #[command(flatten)]
        curve: CurveArg,
        /// `inf` or the index i of P_i
        #[arg(long, default_value = "inf")]
        place: String,
    },
    /// Two-point data at (P_inf, P_i)
    Twopoint(TwopointArgs),
    /// Build C_L(D, G) or its dual
    Code(CodeArgs),
    /// Re-check the bundled example curves
    VerifyPaper {
        /// Print criterion identifiers without running them
        #[arg(long)]
        list: bool,
        /// Directory holding replacement fixture configs
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CurveArg {
    /// Curve config file
    #[arg(long)]
    curve: PathBuf,
}

#[derive(Debug, Args)]
#[group(id = "what", required = true, multiple = false, args = ["gamma", "pure_gaps", "member"])]
struct TwopointArgs {
    #[command(flatten)]
    curve: CurveArg,
    /// Index i of the finite place P_i
    #[arg(long, default_value_t = 1)]
    place: usize,
    /// Print the gap graph
    #[arg(long)]
    gamma: bool,
    /// Pure gaps with both coordinates in [1, BOUND] (default 4g)
    #[arg(long, value_name = "BOUND", num_args = 0..=1, default_missing_value = "0")]
    pure_gaps: Option<u64>,
    /// Classify the pair (A, B)
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    member: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
struct CodeArgs {
    #[command(flatten)]
    curve: CurveArg,
    /// Divisor G, e.g. "19P_inf + 19P_1"
    #[arg(long = "divisor", short = 'G')]
    divisor: String,
    /// Build C_Omega instead of C_L
    #[arg(long)]
    omega: bool,
    /// Compute the minimum distance by enumeration
    #[arg(long)]
    exact_d: bool,
    /// Also shorten on the last S coordinates
    #[arg(long, value_name = "S")]
    shorten: Option<usize>,
    /// Brute-force budget in codewords (default from KUMMER_BUDGET or 2^24)
    #[arg(long)]
    budget: Option<u64>,
    /// Directory for the generator matrices and JSON summaries
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn io(message: impl Into<String>) -> CliError {
        CliError { code: 1, message: message.into() }
    }

    fn input(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    fn precondition(message: impl ToString) -> CliError {
        CliError { code: 3, message: message.to_string() }
    }

    fn disagreement(message: impl Into<String>) -> CliError {
        CliError { code: 4, message: message.into() }
    }
}

impl From<TwoPointError> for CliError {
    fn from(e: TwoPointError) -> CliError {
        match e {
            TwoPointError::Disagreement { .. } => CliError::disagreement(e.to_string()),
            _ => CliError::precondition(e),
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> CliError {
        match e {
            CodeError::TwoPoint(inner) => inner.into(),
            _ => CliError::precondition(e),
        }
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I: IntoIterator<Item = OsString>>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Text => Format::Text,
    };
    let mut notes = Vec::new();
    let result = match cli.command {
        Command::Semigroup { curve, place } => cmd_semigroup(&curve.curve, &place).map(|r| r.render(format)),
        Command::Twopoint(args) => cmd_twopoint(&args, &mut notes).map(|r| r.render(format)),
        Command::Code(args) => cmd_code(&args, &mut notes).map(|r| r.render(format)),
        Command::VerifyPaper { list: true, .. } => Ok(verify::ids().iter().map(|id| format!("{id}\n")).collect()),
        Command::VerifyPaper { fixtures, .. } => match verify::run(fixtures.as_deref()) {
            Ok(outcome) => {
                // the report is printed even when a criterion fails
                let _ = out.write_all(outcome.report.render(format).as_bytes());
                outcome.failure.map_or(Ok(String::new()), Err)
            }
            Err(e) => Err(e),
        },
    };
    for n in &notes {
        let _ = writeln!(err, "note: {n}");
    }
    match result {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: writing output: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub(crate) fn load_curve(path: &Path) -> Result<KummerCurve, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))?;
    curve_from_text(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub(crate) fn curve_from_text(text: &str) -> Result<KummerCurve, crate::curve::ConfigError> {
    CurveConfig::parse(text)?.build()
}

fn parse_place(c: &KummerCurve, s: &str) -> Result<Place, CliError> {
    let s = s.trim();
    let s = s.strip_prefix("P_").unwrap_or(s);
    if s == "inf" {
        return Ok(Place::Infinity);
    }
    let index: usize = s.parse().map_err(|_| CliError::input(format!("bad place selector {s:?}: expected inf or an index")))?;
    c.ramified(index).map_err(CliError::precondition)
}

fn list(v: &[u64]) -> Value {
    json!(v)
}

fn cmd_semigroup(path: &Path, place: &str) -> Result<Report, CliError> {
    let c = load_curve(path)?;
    let place = parse_place(&c, place)?;
    if c.genus() == 0 {
        return Err(CliError::precondition("curve has genus 0"));
    }
    let h = semigroup_at(&c, &place).map_err(CliError::precondition)?;
    let symmetric = h.is_symmetric().map_err(CliError::precondition)?;
    Ok(Report::new()
        .field("place", json!(place.to_string()))
        .field("generators", list(h.generators()))
        .field("gaps", list(h.gaps()))
        .field("genus", json!(h.genus()))
        .field("frobenius", json!(h.frobenius()))
        .field("conductor", json!(h.conductor()))
        .field("symmetric", json!(symmetric)))
}

fn cmd_twopoint(args: &TwopointArgs, notes: &mut Vec<String>) -> Result<Report, CliError> {
    let c = load_curve(&args.curve.curve)?;
    let index = args.place;
    c.ramified(index).map_err(CliError::precondition)?;
    if !c.is_rational_index(index) {
        return Err(CliError::precondition(format!("P_{index} is not rational")));
    }
    let head = Report::new().field("place", json!(format!("P_{index}")));
    if args.gamma {
        let gamma = twopoint::gamma_set(&c, index)?;
        let rows = gamma.pairs.iter().map(|&(a, b)| vec![json!(a), json!(b)]).collect();
        return Ok(head.field("size", json!(gamma.pairs.len())).table(Table::new("pairs", &["a", "b"], rows)));
    }
    if let Some(bound) = args.pure_gaps {
        let bound = if bound == 0 { twopoint::default_bound(&c) } else { bound };
        if c.lambda() != 1 {
            notes.push(format!("lambda = {}: pure gaps come from the Riemann-Roch oracle only", c.lambda()));
        }
        let set = twopoint::enumerate_pure_gaps(&c, index, bound)?;
        let method = match set.method {
            twopoint::PureGapMethod::Formula => "formula+oracle",
            twopoint::PureGapMethod::Oracle => "oracle",
        };
        let rows = set.pairs.iter().map(|&(a, b)| vec![json!(a), json!(b)]).collect();
        return Ok(head
            .field("bound", json!(bound))
            .field("method", json!(method))
            .field("count", json!(set.pairs.len()))
            .table(Table::new("pure_gaps", &["a", "b"], rows)));
    }
    let pair = args.member.as_deref().expect("clap group");
    let (a, b) = (pair[0], pair[1]);
    let member_formula = twopoint::TwoPointSemigroup::new(&c, index)?.contains(a, b);
    let member_oracle = crate::rr::oracle_two_point(&c, index, a, b).map_err(CliError::precondition)?;
    if member_formula != member_oracle {
        return Err(CliError::disagreement(format!(
            "membership of ({a}, {b}): lub closure says {member_formula}, Riemann-Roch says {member_oracle}"
        )));
    }
    let pure_oracle = a >= 1 && b >= 1 && oracle_pure_gap(&c, index, a, b).map_err(CliError::precondition)?;
    let pure_formula = if c.lambda() == 1 {
        let v = a >= 1 && b >= 1 && twopoint::is_pure_gap_formula(&c, index, a, b)?;
        if v != pure_oracle {
            return Err(CliError::disagreement(format!("pure gap ({a}, {b}): floor criterion says {v}, Riemann-Roch says {pure_oracle}")));
        }
        json!(v)
    } else {
        notes.push(format!("lambda = {}: pure-gap verdict from the Riemann-Roch oracle only", c.lambda()));
        Value::Null
    };
    let verdict = match (member_oracle, pure_oracle) {
        (true, _) => "member",
        (false, true) => "gap, pure",
        (false, false) => "gap",
    };
    Ok(head
        .field("a", json!(a))
        .field("b", json!(b))
        .field("member_formula", json!(member_formula))
        .field("member_oracle", json!(member_oracle))
        .field("pure_gap_formula", pure_formula)
        .field("pure_gap_oracle", json!(pure_oracle))
        .field("verdict", json!(verdict)))
}

fn budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::input(format!("{BUDGET_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// `C_Omega` with the pure-gap rectangle bound when `G` comes from one.
fn build_omega(c: &KummerCurve, g: &Divisor) -> Result<LinearCode, CliError> {
    if let Some(index) = g.support_indices().next() {
        if let Some(rect) = twopoint::rectangle_for(c, index, g.inf(), g.coeff(index))? {
            return Ok(code::build_comega_with_box(c, g, &rect)?);
        }
    }
    Ok(code::build_comega(c, g)?)
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))
}

fn summary_json(code: &LinearCode) -> String {
    let mut s = serde_json::to_string_pretty(&code.summary()).expect("serializable");
    s.push('\n');
    s
}

fn code_fields(mut report: Report, prefix: &str, code: &LinearCode) -> Report {
    report = report
        .field(&format!("{prefix}n"), json!(code.n()))
        .field(&format!("{prefix}k"), json!(code.k()))
        .field(&format!("{prefix}designed_d"), json!(code.designed_d))
        .field(&format!("{prefix}d_kind"), json!(code.d_kind.to_string()));
    if let Some(d) = code.exact_d {
        report = report.field(&format!("{prefix}exact_d"), json!(d));
    }
    report
}

fn cmd_code(args: &CodeArgs, notes: &mut Vec<String>) -> Result<Report, CliError> {
    let c = load_curve(&args.curve.curve)?;
    let g: Divisor = args.divisor.parse().map_err(|e: RrError| CliError::input(e.to_string()))?;
    let finite: Vec<usize> = g.support_indices().collect();
    if finite.len() > 1 {
        return Err(CliError::precondition(format!("G = {g} has more than one finite place")));
    }
    let budget = budget(args.budget)?;
    let mut code = if args.omega { build_omega(&c, &g)? } else { code::build_cl(&c, &g)? };
    let mut exact = |code: LinearCode, what: &str| {
        let code = code.with_exact_distance(budget);
        if code.exact_d.is_none() {
            notes.push(format!("{what}: {}^{} codewords exceed the budget {budget}; exact distance omitted", code.field.q(), code.k()));
        }
        code
    };
    if args.exact_d {
        code = exact(code, "code");
    }
    let shortened = match args.shorten {
        Some(s) => {
            let short = code::shorten(&code, s)?;
            Some(if args.exact_d { exact(short, "shortened code") } else { short })
        }
        None => None,
    };
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}: {e}", dir.display())))?;
        write_file(dir, "generator.txt", &code.gen.to_text())?;
        write_file(dir, "summary.json", &summary_json(&code))?;
        if let Some(short) = &shortened {
            write_file(dir, "shortened_generator.txt", &short.gen.to_text())?;
            write_file(dir, "shortened_summary.json", &summary_json(short))?;
        }
    }
    let mut report = Report::new().field("code", json!(if args.omega { "C_Omega" } else { "C_L" })).field("divisor", json!(g.to_string()));
    report = code_fields(report, "", &code);
    if let Some(short) = &shortened {
        report = report.field("shorten", json!(args.shorten));
        report = code_fields(report, "shortened_", short);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("kummer").chain(args.iter().copied()).map(OsString::from);
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn list_and_usage() {
        let (code, out, _) = run_args(&["verify-paper", "--list"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), verify::ids().len());
        let (code, _, err) = run_args(&["twopoint"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn missing_curve_file_is_io_error() {
        let (code, _, err) = run_args(&["semigroup", "--curve", "/nonexistent/curve.conf"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: reading"));
    }

    #[test]
    fn place_selectors() {
        let c = crate::testutil::ex52();
        assert_eq!(parse_place(&c, "inf").unwrap(), Place::Infinity);
        assert_eq!(parse_place(&c, "P_inf").unwrap(), Place::Infinity);
        assert!(matches!(parse_place(&c, "P_2").unwrap(), Place::Ramified { index: 2, .. }));
        assert_eq!(parse_place(&c, "9").unwrap_err().code, 3);
        assert_eq!(parse_place(&c, "x").unwrap_err().code, 2);
    }
}
