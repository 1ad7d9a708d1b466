//! `mlf` command-line front end.
//!
//! Every command produces a flat table written as CSV (header row, one row
//! per record) or JSON (`{"rows": [...]}` plus command-specific summary
//! fields such as `sup_abs`). Floats use the shortest representation that
//! round-trips. Exit status is 0 on success, 1 on domain or evaluation
//! errors, 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::calculus::caputo_l1_residual;
use crate::error::{Error, Result};
use crate::matrix::{eig_symmetric, matrix_defect, ml_matrix, Matrix};
use crate::mlf::{ml_at_time, ml_e2, MLParams, SeriesConfig};
use crate::semigroup::{
    classify_sup, defect, defect_grid, exponential_fit, semigroup_predicate, GridSpec, MlCurve, Verdict,
};

/// Environment variable overriding [`SeriesConfig::max_terms`].
pub const MAX_TERMS_ENV: &str = "ML_MAX_TERMS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Mittag-Leffler evaluation and semigroup-defect sweeps.
#[derive(Debug, Parser)]
#[command(name = "mlf", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    pub output_format: OutputFormat,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// E_{α,β}(z), or E_{α,β}(λt^α) with --lambda and --t.
    Eval(EvalArgs),
    /// Semigroup defect at one (t, s).
    Defect(DefectArgs),
    /// Semigroup defect over a square grid.
    Grid(GridArgs),
    /// HOLDS / FAILS verdict for the semigroup law.
    Classify(ClassifyArgs),
    /// E_α(At^α) for a symmetric matrix, or its semigroup defect with --s.
    Matrix(MatrixArgs),
    /// L1 residual of the Caputo problem D^α u = λu.
    CaputoCheck(CaputoArgs),
    /// Best exponential e^{ωt} with ω = ln E_α(λ).
    Fit(FitArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "t", conflicts_with_all = ["t", "lambda"])]
    pub z: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "t")]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "lambda")]
    pub t: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DefectArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub s: f64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub tmax: f64,
    /// Points per axis.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
    pub tmin: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub tmax: f64,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Row-major CSV of a real symmetric matrix.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CaputoArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub u0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub tmax: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub tmax: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(v) => json!(v),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Default)]
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    summary: Vec<(&'static str, Cell)>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    fn write(&self, format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
        match format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()
            }
            OutputFormat::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut doc = Map::new();
                doc.insert("rows".into(), Value::Array(rows));
                for (k, v) in &self.summary {
                    doc.insert(k.to_string(), v.json());
                }
                serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
                writeln!(out)
            }
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit status. Reads [`MAX_TERMS_ENV`] from the process environment.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(MAX_TERMS_ENV).ok();
    run_with_env(argv, env.as_deref(), out, err)
}

/// [`run`] with the `ML_MAX_TERMS` value passed explicitly.
pub fn run_with_env<I, T>(argv: I, max_terms: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if informational {
                let _ = write!(out, "{rendered}");
                return 0;
            }
            let _ = write!(err, "{rendered}");
            return 2;
        }
    };

    let mut cfg = SeriesConfig::default();
    if let Some(raw) = max_terms {
        match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => cfg.max_terms = n,
            _ => {
                let _ = writeln!(err, "error: {MAX_TERMS_ENV} must be a positive integer, got {raw:?}");
                return 2;
            }
        }
    }

    let table = match execute(&config.command, &cfg) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };

    let written = match &config.output {
        Some(path) => write_file(path, &table, config.output_format),
        None => table.write(config.output_format, out),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: writing output: {e}");
        return 1;
    }
    0
}

fn write_file(path: &Path, table: &Table, format: OutputFormat) -> io::Result<()> {
    let mut file = io::BufWriter::new(File::create(path)?);
    table.write(format, &mut file)?;
    file.flush()
}

/// Reads a row-major comma-separated matrix; blank lines are skipped.
pub fn read_matrix_csv(path: &Path) -> Result<Matrix> {
    let shape = |msg: String| Error::Shape(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| shape(e.to_string()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| shape(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field
                    .parse::<f64>()
                    .map_err(|_| shape(format!("row {i}, column {j}: {field:?} is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Matrix::from_rows(&rows)
}

fn execute(command: &Command, cfg: &SeriesConfig) -> Result<Table> {
    match command {
        Command::Eval(a) => {
            let (z, r) = match (a.z, a.lambda, a.t) {
                (Some(z), _, _) => (z, ml_e2(a.alpha, a.beta, z, cfg)?),
                (None, Some(lambda), Some(t)) => {
                    let p = MLParams::new(a.alpha, lambda).with_beta(a.beta);
                    let r = ml_at_time(&p, t, cfg)?;
                    (lambda * t.powf(a.alpha), r)
                }
                _ => unreachable!("clap enforces --z or --lambda with --t"),
            };
            let mut table = Table::new(&[
                "alpha",
                "beta",
                "z",
                "value",
                "error_estimate",
                "terms_used",
                "converged",
                "method",
            ]);
            table.rows.push(vec![
                Cell::Num(a.alpha),
                Cell::Num(a.beta),
                Cell::Num(z),
                Cell::Num(r.value),
                Cell::Num(r.error_estimate),
                Cell::Int(r.terms_used),
                Cell::Bool(r.converged),
                Cell::Text(r.method.to_string()),
            ]);
            Ok(table)
        }
        Command::Defect(a) => {
            let p = MLParams::new(a.alpha, a.lambda);
            let d = defect(&p, a.t, a.s, cfg)?;
            let mut table = Table::new(&["t", "s", "defect"]);
            table.rows.push(vec![Cell::Num(a.t), Cell::Num(a.s), Cell::Num(d)]);
            Ok(table)
        }
        Command::Grid(a) => {
            let p = MLParams::new(a.alpha, a.lambda);
            let axis = GridSpec {
                start: a.tmin,
                end: a.tmax,
                points: a.n,
            }
            .values()?;
            let grid = defect_grid(&p, &axis, &axis, cfg)?;
            let mut table = Table::new(&["t", "s", "defect"]);
            table.rows = grid
                .cells()
                .map(|(t, s, d)| vec![Cell::Num(t), Cell::Num(s), Cell::Num(d)])
                .collect();
            table.summary.push(("sup_abs", Cell::Num(grid.sup_abs)));
            Ok(table)
        }
        Command::Classify(a) => {
            let p = MLParams::new(a.alpha, a.lambda);
            if !(a.tol > 0.0) {
                return Err(crate::error::domain("tol", a.tol, "must be positive"));
            }
            if !(a.threshold > a.tol) {
                return Err(crate::error::domain("threshold", a.threshold, "must exceed tol"));
            }
            let axis = GridSpec {
                start: a.tmin,
                end: a.tmax,
                points: a.n,
            }
            .values()?;
            let grid = defect_grid(&p, &axis, &axis, cfg)?;
            let verdict = classify_sup(grid.sup_abs, a.tol, a.threshold)?;
            let expected = if semigroup_predicate(&p) {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
            let mut table = Table::new(&["alpha", "lambda", "sup_abs", "verdict", "expected"]);
            table.rows.push(vec![
                Cell::Num(a.alpha),
                Cell::Num(a.lambda),
                Cell::Num(grid.sup_abs),
                Cell::Text(verdict.to_string()),
                Cell::Text(expected.to_string()),
            ]);
            Ok(table)
        }
        Command::Matrix(a) => {
            let source = read_matrix_csv(&a.matrix)?;
            let spec = eig_symmetric(&source)?;
            match a.s {
                Some(s) => {
                    let d = matrix_defect(a.alpha, &spec, a.t, s, cfg)?;
                    let mut table = Table::new(&["t", "s", "defect"]);
                    table.rows.push(vec![Cell::Num(a.t), Cell::Num(s), Cell::Num(d)]);
                    Ok(table)
                }
                None => {
                    let m = ml_matrix(a.alpha, &spec, a.t, cfg)?;
                    let mut table = Table::new(&["i", "j", "value"]);
                    for (i, row) in m.rows().enumerate() {
                        for (j, &v) in row.iter().enumerate() {
                            table.rows.push(vec![Cell::Int(i), Cell::Int(j), Cell::Num(v)]);
                        }
                    }
                    Ok(table)
                }
            }
        }
        Command::CaputoCheck(a) => {
            let p = MLParams::new(a.alpha, a.lambda);
            let r = caputo_l1_residual(&p, a.u0, a.tmax, a.n, cfg)?;
            let mut table = Table::new(&["alpha", "lambda", "grid_steps", "max_residual", "empirical_order"]);
            table.rows.push(vec![
                Cell::Num(a.alpha),
                Cell::Num(a.lambda),
                Cell::Int(r.grid_steps),
                Cell::Num(r.max_residual),
                r.empirical_order.map_or(Cell::Missing, Cell::Num),
            ]);
            Ok(table)
        }
        Command::Fit(a) => {
            let curve = MlCurve::new(MLParams::new(a.alpha, a.lambda), *cfg);
            let fit = exponential_fit(&curve, a.tmax, a.samples)?;
            let mut table = Table::new(&["alpha", "lambda", "omega", "residual"]);
            table.rows.push(vec![
                Cell::Num(a.alpha),
                Cell::Num(a.lambda),
                Cell::Num(fit.omega),
                Cell::Num(fit.residual),
            ]);
            Ok(table)
        }
    }
}
