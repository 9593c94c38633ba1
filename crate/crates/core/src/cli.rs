//! Command-line front end.
//!
//! Every command writes CSV to the output sink and diagnostics to the error
//! sink, and returns an exit code: 0 on success, 2 when a requested
//! eigenvalue is not certified (rows are still written), 1 on failure.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::assemble::assemble_with;
use crate::eigen::{certify_with, solve_problem, Spectrum, DEFAULT_CERTIFY_TOL};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::grid::Domain;
use crate::interp::Eigenfunction;
use crate::par::Execution;
use crate::problem::{builtin, BoundaryCondition, Example, SLProblem};
use crate::reference::{reference_value, relative_error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNCONVERGED: i32 = 2;

/// Truncation half-width used for example 2 when `--d` is omitted.
pub const DEFAULT_TRUNCATION: f64 = 10.0;

pub const DEFAULT_SAMPLES: usize = 201;

#[derive(Debug, Parser)]
#[command(
    name = "chebsl",
    version,
    about = "Sturm-Liouville eigenproblems by Chebyshev collocation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified eigenvalues of a problem file or builtin example.
    Solve(SolveArgs),
    /// Builtin example eigenvalues next to their reference values.
    Example(SolveArgs),
    /// Regenerate one of the reference tables (1-4) as CSV.
    Table(TableArgs),
    /// Normalized eigenfunction samples of a builtin example.
    Eigenfunction(EigenfunctionArgs),
}

#[derive(Debug, Args, Clone)]
pub struct SourceArgs {
    /// Problem definition file (`key = value` lines).
    #[arg(long, conflicts_with = "example")]
    pub problem: Option<PathBuf>,
    /// Builtin example 1, 2 or 3.
    #[arg(long)]
    pub example: Option<u32>,
    /// Truncation half-width for example 2.
    #[arg(long)]
    pub d: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Base collocation order; certification also solves at twice this.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of eigenvalues to report.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = DEFAULT_CERTIFY_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct TableArgs {
    /// Table number, 1 to 4.
    pub which: u32,
    /// Include the N = 1000 block of table 2.
    #[arg(long)]
    pub large: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct EigenfunctionArgs {
    #[arg(long)]
    pub example: u32,
    #[arg(long)]
    pub d: Option<f64>,
    /// Mode number (from 0 for example 2, from 1 otherwise).
    #[arg(long)]
    pub index: usize,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_CERTIFY_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    Example,
    Table,
    Eigenfunction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    File(PathBuf),
    Builtin {
        example: Example,
        d: Option<f64>,
    },
    /// Tables pick their own problems.
    None,
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub source: ProblemSource,
    pub n: usize,
    pub count: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub samples: usize,
    pub index: usize,
    pub table: u32,
    pub large: bool,
}

/// Base order used by `solve`, `example` and `eigenfunction` when `--n` is
/// absent. Certification doubles it.
pub fn default_order(source: &ProblemSource) -> usize {
    match source {
        ProblemSource::Builtin { example, .. } => match example {
            Example::Weighted | Example::Quartic => 128,
            Example::Exact => 64,
        },
        _ => 64,
    }
}

fn builtin_source(example: u32, d: Option<f64>) -> Result<ProblemSource> {
    let example = Example::from_id(example)?;
    let d = match (example, d) {
        (Example::Quartic, d) => Some(d.unwrap_or(DEFAULT_TRUNCATION)),
        (_, Some(_)) => return Err(Error::Invalid("--d only applies to example 2".into())),
        (_, None) => None,
    };
    Ok(ProblemSource::Builtin { example, d })
}

fn check_common(n: usize, count: usize, tol: f64) -> Result<()> {
    if n < 8 {
        return Err(Error::InvalidOrder { got: n, min: 8 });
    }
    if count == 0 {
        return Err(Error::Invalid("--count must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Invalid(format!("--tol must be positive, got {tol}")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        match cli.command {
            Command::Solve(a) => Self::from_solve(CommandKind::Solve, a),
            Command::Example(a) => Self::from_solve(CommandKind::Example, a),
            Command::Table(a) => {
                if !(1..=4).contains(&a.which) {
                    return Err(Error::Invalid(format!(
                        "no table {}; expected 1-4",
                        a.which
                    )));
                }
                Ok(Self {
                    command: CommandKind::Table,
                    source: ProblemSource::None,
                    n: table_order(a.which),
                    count: 1,
                    tol: DEFAULT_CERTIFY_TOL,
                    out: a.out,
                    samples: DEFAULT_SAMPLES,
                    index: 0,
                    table: a.which,
                    large: a.large,
                })
            }
            Command::Eigenfunction(a) => {
                let source = builtin_source(a.example, a.d)?;
                let n = a.n.unwrap_or_else(|| default_order(&source));
                check_common(n, 1, a.tol)?;
                if a.samples < 2 {
                    return Err(Error::Invalid("--samples must be at least 2".into()));
                }
                Ok(Self {
                    command: CommandKind::Eigenfunction,
                    source,
                    n,
                    count: 1,
                    tol: a.tol,
                    out: a.out,
                    samples: a.samples,
                    index: a.index,
                    table: 0,
                    large: false,
                })
            }
        }
    }

    fn from_solve(command: CommandKind, a: SolveArgs) -> Result<Self> {
        let source = match (a.source.problem, a.source.example) {
            (Some(path), None) if command == CommandKind::Solve => ProblemSource::File(path),
            (None, Some(id)) => builtin_source(id, a.source.d)?,
            (Some(_), _) => {
                return Err(Error::Invalid(
                    "`example` compares against builtin references; use --example".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Invalid(
                    "one of --problem or --example is required".into(),
                ))
            }
        };
        let n = a.n.unwrap_or_else(|| default_order(&source));
        check_common(n, a.count, a.tol)?;
        Ok(Self {
            command,
            source,
            n,
            count: a.count,
            tol: a.tol,
            out: a.out,
            samples: DEFAULT_SAMPLES,
            index: 0,
            table: 0,
            large: false,
        })
    }
}

/// Parses argv-style arguments and runs the command.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_FAILURE
            } else {
                EXIT_OK
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match RunConfig::from_cli(cli) {
        Ok(config) => execute(&config, out, err),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Runs `config`, writing to `--out` when set and to `out` otherwise.
pub fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut buf = Vec::new();
    let result = match config.command {
        CommandKind::Solve => cmd_solve(config, &mut buf, err),
        CommandKind::Example => cmd_example(config, &mut buf, err),
        CommandKind::Table => cmd_table(config.table, config.large, &mut buf),
        CommandKind::Eigenfunction => cmd_eigenfunction(config, &mut buf, err),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let written = match &config.out {
        Some(path) => fs::write(path, &buf).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => out.write_all(&buf).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        }),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_FAILURE;
    }
    code
}

/// 15 significant digits, scientific, uppercase `E`.
pub fn fmt_sci(v: f64) -> String {
    format!("{v:.14E}")
}

fn load_source(source: &ProblemSource) -> Result<SLProblem> {
    match source {
        ProblemSource::File(path) => load_problem_file(path),
        ProblemSource::Builtin { example, d } => builtin(*example, *d),
        ProblemSource::None => Err(Error::Invalid("no problem given".into())),
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        message: e.to_string(),
    }
}

/// `n,lambda,residual,converged`, one row per requested eigenvalue.
pub fn cmd_solve(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let prob = load_source(&config.source)?;
    let spec = certify_with(&prob, config.n, config.tol, Execution::default())?;
    writeln!(out, "n,lambda,residual,converged").map_err(io_err)?;
    let shown = config.count.min(spec.len());
    for k in 0..shown {
        writeln!(
            out,
            "{},{},{},{}",
            spec.first_index() + k,
            fmt_sci(spec.eigenvalues()[k]),
            fmt_sci(spec.residuals()[k]),
            spec.converged()[k]
        )
        .map_err(io_err)?;
    }
    Ok(convergence_code(&spec, config.count, err))
}

fn convergence_code(spec: &Spectrum, count: usize, err: &mut dyn Write) -> i32 {
    if count > spec.len() {
        let _ = writeln!(
            err,
            "only {} eigenvalues available at N = {}; {count} requested",
            spec.len(),
            spec.n_grid()
        );
        return EXIT_UNCONVERGED;
    }
    let missing: Vec<usize> = (0..count)
        .filter(|&k| !spec.converged()[k])
        .map(|k| spec.first_index() + k)
        .collect();
    if missing.is_empty() {
        EXIT_OK
    } else {
        let _ = writeln!(err, "unconverged eigenvalues: {missing:?}");
        EXIT_UNCONVERGED
    }
}

/// `n,lambda,lambda_reference,relative_error,converged` for a builtin example.
pub fn cmd_example(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let ProblemSource::Builtin { example, .. } = config.source else {
        return Err(Error::Invalid("`example` needs --example".into()));
    };
    let prob = load_source(&config.source)?;
    let spec = certify_with(&prob, config.n, config.tol, Execution::default())?;
    writeln!(out, "n,lambda,lambda_reference,relative_error,converged").map_err(io_err)?;
    for k in 0..config.count.min(spec.len()) {
        let n = spec.first_index() + k;
        let reference = reference_value(example, n)?.value;
        let lambda = spec.eigenvalues()[k];
        writeln!(
            out,
            "{n},{},{},{},{}",
            fmt_sci(lambda),
            fmt_sci(reference),
            fmt_sci(relative_error(reference, lambda)?),
            spec.converged()[k]
        )
        .map_err(io_err)?;
    }
    Ok(convergence_code(&spec, config.count, err))
}

/// One block of a reference table: a problem solved at one order.
#[derive(Debug, Clone, PartialEq)]
pub struct TableBlock {
    pub example: Example,
    pub order: usize,
    pub modes: Vec<usize>,
}

/// Collocation order of the first block of each table.
pub fn table_order(which: u32) -> usize {
    match which {
        1 | 3 => 256,
        2 => 500,
        _ => 128,
    }
}

pub fn table_blocks(which: u32, large: bool) -> Result<Vec<TableBlock>> {
    let block = |example, order, modes: Vec<usize>| TableBlock {
        example,
        order,
        modes,
    };
    Ok(match which {
        1 => vec![block(Example::Weighted, 256, (1..=40).collect())],
        2 => {
            let mut blocks = vec![block(
                Example::Weighted,
                500,
                (100..=450).step_by(50).collect(),
            )];
            if large {
                blocks.push(block(
                    Example::Weighted,
                    1000,
                    (500..=950).step_by(50).collect(),
                ));
            }
            blocks
        }
        3 => vec![block(Example::Quartic, 256, (0..=29).collect())],
        4 => vec![block(Example::Exact, 128, (1..=30).collect())],
        other => return Err(Error::Invalid(format!("no table {other}; expected 1-4"))),
    })
}

/// A computed table row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub computed: f64,
    pub reference: f64,
    pub relative_error: f64,
}

/// Solves every block (concurrently when enabled) and returns rows in
/// block order.
pub fn compute_table(which: u32, large: bool) -> Result<Vec<TableRow>> {
    let blocks = table_blocks(which, large)?;
    let exec = Execution::default();
    let solved = exec.map(&blocks, |b| -> Result<Vec<TableRow>> {
        let d = (b.example == Example::Quartic).then_some(DEFAULT_TRUNCATION);
        let prob = builtin(b.example, d)?;
        let spec = solve_problem(&prob, b.order, exec)?;
        b.modes
            .iter()
            .map(|&n| {
                let computed = spec.mode(n).ok_or_else(|| {
                    Error::Invalid(format!("mode {n} not resolved at N = {}", b.order))
                })?;
                let reference = reference_value(b.example, n)?.value;
                Ok(TableRow {
                    n,
                    computed,
                    reference,
                    relative_error: relative_error(reference, computed)?,
                })
            })
            .collect()
    });
    let mut rows = Vec::new();
    for block in solved {
        rows.extend(block?);
    }
    Ok(rows)
}

/// `n,lambda_computed,lambda_reference,relative_error`.
pub fn cmd_table(which: u32, large: bool, out: &mut dyn Write) -> Result<i32> {
    let rows = compute_table(which, large)?;
    writeln!(out, "n,lambda_computed,lambda_reference,relative_error").map_err(io_err)?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.n,
            fmt_sci(r.computed),
            fmt_sci(r.reference),
            fmt_sci(r.relative_error)
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

/// Normalized eigenfunction of a builtin example, solved at `2N`.
pub fn eigenfunction_of(config: &RunConfig) -> Result<(Eigenfunction, bool)> {
    let prob = load_source(&config.source)?;
    let exec = Execution::default();
    let spec = certify_with(&prob, config.n, config.tol, exec)?;
    let k = spec
        .position_of_mode(config.index)
        .ok_or_else(|| Error::Invalid(format!("mode {} is not available", config.index)))?;
    // Assembly is deterministic, so this is the operator the eigenvectors came from.
    let evp = assemble_with(&prob, spec.n_grid(), exec)?;
    let f = Eigenfunction::from_spectrum(&evp, &spec, k)?.normalize(prob.w())?;
    Ok((f, spec.converged()[k]))
}

/// `x,y` samples of a normalized eigenfunction.
pub fn cmd_eigenfunction(
    config: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let (f, converged) = eigenfunction_of(config)?;
    if !converged {
        let _ = writeln!(
            err,
            "mode {} is not converged at N = {}; increase --n",
            config.index,
            2 * config.n
        );
        return Ok(EXIT_UNCONVERGED);
    }
    writeln!(out, "x,y").map_err(io_err)?;
    for (x, y) in f.sample(config.samples)? {
        writeln!(out, "{},{}", fmt_sci(x), fmt_sci(y)).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

const REQUIRED_KEYS: [&str; 5] = ["p", "q", "w", "a", "b"];
const OPTIONAL_KEYS: [&str; 5] = [
    "bc_left_c",
    "bc_left_d",
    "bc_right_c",
    "bc_right_d",
    "label",
];

/// Parses the `key = value` problem format. `#` starts a comment.
pub fn parse_problem_definition(text: &str) -> Result<SLProblem> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::ProblemFile {
                line: line_no,
                key: line.to_string(),
                message: "expected `key = value`".into(),
            });
        };
        let key = key.trim().to_string();
        if !REQUIRED_KEYS.contains(&key.as_str()) && !OPTIONAL_KEYS.contains(&key.as_str()) {
            return Err(Error::ProblemFile {
                line: line_no,
                key,
                message: "unknown key".into(),
            });
        }
        if entries.contains_key(&key) {
            return Err(Error::ProblemFile {
                line: line_no,
                key,
                message: "duplicate key".into(),
            });
        }
        entries.insert(key, (line_no, value.trim().to_string()));
    }
    for key in REQUIRED_KEYS {
        if !entries.contains_key(key) {
            return Err(Error::MissingKey(key.to_string()));
        }
    }

    let expr = |key: &str| -> Result<Expr> {
        let (line, value) = &entries[key];
        parse(value).map_err(|e| Error::ProblemFile {
            line: *line,
            key: key.to_string(),
            message: e.to_string(),
        })
    };
    let constant = |key: &str, default: f64| -> Result<f64> {
        let Some((line, _)) = entries.get(key) else {
            return Ok(default);
        };
        let e = expr(key)?;
        let bad = |message: String| Error::ProblemFile {
            line: *line,
            key: key.to_string(),
            message,
        };
        if !e.is_constant() {
            return Err(bad("must not depend on x".into()));
        }
        e.eval(0.0).map_err(|err| bad(err.to_string()))
    };

    let domain = Domain::new(constant("a", 0.0)?, constant("b", 0.0)?)?;
    let bc_left = BoundaryCondition::new(constant("bc_left_c", 1.0)?, constant("bc_left_d", 0.0)?)?;
    let bc_right =
        BoundaryCondition::new(constant("bc_right_c", 1.0)?, constant("bc_right_d", 0.0)?)?;
    let label = entries
        .get("label")
        .map_or_else(|| "problem".to_string(), |(_, v)| v.clone());
    SLProblem::new(
        expr("p")?,
        expr("q")?,
        expr("w")?,
        domain,
        bc_left,
        bc_right,
        label,
    )
}

pub fn load_problem_file(path: &Path) -> Result<SLProblem> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_problem_definition(&text)
}
