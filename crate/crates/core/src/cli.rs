//! Command-line front end.
//!
//! Without `--sample` the tool filters the input graph and prints a summary;
//! with `--sample N` it draws `N` graphs from the ensemble fitted to the
//! input and writes them in the batch dump format.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 unreadable input,
//! 4 malformed input, 5 ensemble construction, 6 numerical failure,
//! 7 unwritable output.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, ValueEnum};
use log::{info, warn};

use crate::ensemble::{omega_block, omega_custom, omega_uniform, Ensemble, OmegaMatrix, XiKind};
use crate::error::Error;
use crate::filter::{
    dyad_pvalues, significant_links, summarize, write_report_csv, write_report_json, Alpha,
    Correction, PValueOptions,
};
use crate::graph::{parse_edge_list, write_edge_list, MultiGraph};
use crate::sampling::{sample_biased, sample_unbiased, write_batch};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_PARSE: i32 = 4;
pub const EXIT_ENSEMBLE: i32 = 5;
pub const EXIT_NUMERIC: i32 = 6;
pub const EXIT_OUTPUT: i32 = 7;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn fail(code: i32, message: impl fmt::Display) -> CliError {
    CliError {
        code,
        message: message.to_string(),
    }
}

/// Code for input problems in a file that was opened successfully.
fn input_error(path: &Path, e: Error) -> CliError {
    let code = match e {
        Error::Io(_) => EXIT_INPUT,
        _ => EXIT_PARSE,
    };
    fail(code, format!("{}: {e}", path.display()))
}

fn computation_error(e: Error) -> CliError {
    let code = match e {
        Error::NonConvergent { .. } | Error::Overflow(_) | Error::DegenerateNormalization => {
            EXIT_NUMERIC
        }
        _ => EXIT_ENSEMBLE,
    };
    fail(code, e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum XiArg {
    Configuration,
    ErdosRenyi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CorrectionArg {
    None,
    Bonferroni,
    Bh,
}

impl From<CorrectionArg> for Correction {
    fn from(c: CorrectionArg) -> Self {
        match c {
            CorrectionArg::None => Correction::None,
            CorrectionArg::Bonferroni => Correction::Bonferroni,
            CorrectionArg::Bh => Correction::BenjaminiHochberg,
        }
    }
}

/// Source of the propensity matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum OmegaSpec {
    Uniform,
    /// Class file plus within- and between-class propensities.
    Block {
        path: PathBuf,
        within: f64,
        between: f64,
    },
    /// Dense CSV with node labels heading its rows and columns.
    Matrix(PathBuf),
}

fn parse_positive(raw: &str, what: &str) -> Result<f64, String> {
    match raw.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!(
            "{what} propensity must be a positive number, got `{raw}`"
        )),
    }
}

pub fn parse_omega_spec(s: &str) -> Result<OmegaSpec, String> {
    if s == "uniform" {
        return Ok(OmegaSpec::Uniform);
    }
    if let Some(rest) = s.strip_prefix("block:") {
        let parts: Vec<&str> = rest.rsplitn(3, ',').collect();
        let [between, within, path] = parts[..] else {
            return Err("expected block:<path>,<within>,<between>".into());
        };
        if path.is_empty() {
            return Err("block spec needs a class file".into());
        }
        return Ok(OmegaSpec::Block {
            path: PathBuf::from(path),
            within: parse_positive(within, "within-class")?,
            between: parse_positive(between, "between-class")?,
        });
    }
    if let Some(path) = s.strip_prefix("matrix:") {
        if path.is_empty() {
            return Err("matrix spec needs a file".into());
        }
        return Ok(OmegaSpec::Matrix(PathBuf::from(path)));
    }
    Err(format!(
        "unknown omega spec `{s}`; use uniform, block:<path>,<within>,<between> or matrix:<path>"
    ))
}

fn parse_alpha(s: &str) -> Result<Alpha, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    Alpha::new(v).map_err(|e| e.to_string())
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v < 1.0 => Ok(v),
        _ => Err(format!("tolerance must lie in (0, 1), got `{s}`")),
    }
}

/// Filter significant links of a multi-edge graph, or sample graphs from its
/// ensemble.
#[derive(Clone, Debug, Parser)]
#[command(name = "ghype", version)]
#[command(group(ArgGroup::new("direction").required(true).args(["directed", "undirected"])))]
pub struct RunConfig {
    /// Edge list: `source target [weight]` per line, `#` starts a comment.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub directed: bool,
    #[arg(long)]
    pub undirected: bool,
    #[arg(long, default_value = "0.01", value_parser = parse_alpha)]
    pub alpha: Alpha,
    /// uniform, block:<classes>,<within>,<between> or matrix:<path>.
    #[arg(long, default_value = "uniform", value_parser = parse_omega_spec)]
    pub omega: OmegaSpec,
    #[arg(long, value_enum, default_value = "configuration")]
    pub xi: XiArg,
    #[arg(long, value_enum, default_value = "none")]
    pub correction: CorrectionArg,
    /// Keep self-loops and let the ensemble generate them.
    #[arg(long)]
    pub allow_loops: bool,
    /// Relative tolerance of the numerical integrals.
    #[arg(long, default_value = "1e-10", value_parser = parse_tol)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Filtered edge list, or the sample dump with `--sample`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Per-dyad report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the report as JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Draw this many graphs instead of filtering.
    #[arg(long)]
    pub sample: Option<usize>,
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| fail(EXIT_OUTPUT, format!("cannot write {}: {e}", path.display())))
}

fn output_error(path: Option<&Path>) -> impl Fn(Error) -> CliError + '_ {
    move |e| {
        let target = path.map_or_else(|| "standard output".to_owned(), |p| p.display().to_string());
        fail(EXIT_OUTPUT, format!("cannot write {target}: {e}"))
    }
}

fn tokens(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Lines of a side file with comments and blank lines removed, paired with
/// their line numbers.
fn content_lines(path: &Path) -> Result<Vec<(usize, String)>, CliError> {
    let mut out = Vec::new();
    for (k, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| input_error(path, e.into()))?;
        let trimmed = line.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('#') {
            out.push((k + 1, trimmed.to_owned()));
        }
    }
    Ok(out)
}

fn parse_failure(path: &Path, line: usize, message: String) -> CliError {
    input_error(path, Error::Parse { line, message })
}

/// Reads `label class` lines; classes are numbered in first-appearance order.
pub fn read_classes(path: &Path, g: &MultiGraph) -> Result<Vec<usize>, CliError> {
    let mut class_ids: Vec<String> = Vec::new();
    let mut assignment: Vec<Option<usize>> = vec![None; g.node_count()];
    for (line, text) in content_lines(path)? {
        let t = tokens(&text);
        if t.len() != 2 {
            return Err(parse_failure(path, line, "expected `label class`".into()));
        }
        let Some(node) = g.node_index(t[0]) else {
            continue;
        };
        let class = match class_ids.iter().position(|c| c == t[1]) {
            Some(c) => c,
            None => {
                class_ids.push(t[1].to_owned());
                class_ids.len() - 1
            }
        };
        if assignment[node].is_some_and(|c| c != class) {
            return Err(parse_failure(
                path,
                line,
                format!("node `{}` assigned twice", t[0]),
            ));
        }
        assignment[node] = Some(class);
    }
    assignment
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| {
                fail(
                    EXIT_PARSE,
                    format!("{}: no class for node `{}`", path.display(), g.label(i)),
                )
            })
        })
        .collect()
}

/// Reads a dense CSV matrix whose first row and first column hold node
/// labels. Every node of `g` must appear in both.
pub fn read_omega_matrix(path: &Path, g: &MultiGraph) -> Result<OmegaMatrix, CliError> {
    let n = g.node_count();
    let lines = content_lines(path)?;
    let cells =
        |text: &str| -> Vec<String> { text.split(',').map(|c| c.trim().to_owned()).collect() };
    let Some((header_line, header)) = lines.first() else {
        return Err(input_error(path, Error::EmptyInput));
    };
    let node = |label: &str, line: usize| {
        g.node_index(label)
            .ok_or_else(|| parse_failure(path, line, format!("unknown node `{label}`")))
    };
    let columns = cells(header)
        .iter()
        .skip(1)
        .map(|label| node(label, *header_line))
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries = vec![f64::NAN; n * n];
    for (line, text) in &lines[1..] {
        let row = cells(text);
        if row.len() != columns.len() + 1 {
            return Err(parse_failure(
                path,
                *line,
                format!("expected {} values", columns.len()),
            ));
        }
        let i = node(&row[0], *line)?;
        for (&j, raw) in columns.iter().zip(&row[1..]) {
            entries[i * n + j] = raw
                .parse()
                .map_err(|_| parse_failure(path, *line, format!("bad propensity `{raw}`")))?;
        }
    }
    if let Some(k) = entries.iter().position(|v| v.is_nan()) {
        return Err(fail(
            EXIT_PARSE,
            format!(
                "{}: no entry for ({}, {})",
                path.display(),
                g.label(k / n),
                g.label(k % n)
            ),
        ));
    }
    omega_custom(n, entries).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn build_omega(spec: &OmegaSpec, g: &MultiGraph) -> Result<OmegaMatrix, CliError> {
    match spec {
        OmegaSpec::Uniform => Ok(omega_uniform(g.node_count())),
        OmegaSpec::Block {
            path,
            within,
            between,
        } => {
            let assignment = read_classes(path, g)?;
            omega_block(assignment, *within, *between).map_err(|e| fail(EXIT_CONFIG, e))
        }
        OmegaSpec::Matrix(path) => read_omega_matrix(path, g),
    }
}

/// Parses the input graph and builds its ensemble.
pub fn prepare(cfg: &RunConfig) -> Result<(MultiGraph, Ensemble), CliError> {
    let graph = parse_edge_list(open(&cfg.input)?, cfg.directed, true)
        .map_err(|e| input_error(&cfg.input, e))?;
    let graph = if cfg.allow_loops {
        graph
    } else {
        let (loop_free, dropped) = graph.without_loops();
        if dropped > 0 {
            warn!("dropped {dropped} self-loop multi-edges; pass --allow-loops to keep them");
        }
        loop_free
    };
    let omega = build_omega(&cfg.omega, &graph)?;
    let kind = match cfg.xi {
        XiArg::Configuration => XiKind::Configuration,
        XiArg::ErdosRenyi => XiKind::ErdosRenyi,
    };
    let ensemble =
        Ensemble::for_graph(&graph, kind, omega, cfg.allow_loops).map_err(computation_error)?;
    info!(
        "ensemble {}: n = {}, m = {}, M = {}",
        ensemble.fingerprint(),
        ensemble.n(),
        ensemble.m(),
        ensemble.total()
    );
    Ok((graph, ensemble))
}

/// Filters the input graph; the summary goes to `stdout`.
pub fn run_filter<W: Write>(cfg: &RunConfig, stdout: &mut W) -> Result<(), CliError> {
    let (graph, ensemble) = prepare(cfg)?;
    let options = PValueOptions {
        tol: cfg.tol,
        ..PValueOptions::default()
    };
    let report = dyad_pvalues(&graph, &ensemble, &options).map_err(computation_error)?;
    let filtered =
        significant_links(&report, cfg.alpha, cfg.correction.into()).map_err(computation_error)?;
    let summary = summarize(&graph, &filtered);
    if let Some(path) = &cfg.output {
        let mut out = create(path)?;
        write_edge_list(&filtered.graph, &mut out)
            .and_then(|_| out.flush().map_err(Error::from))
            .map_err(output_error(Some(path)))?;
    }
    if let Some(path) = &cfg.report {
        let mut out = create(path)?;
        let written = if cfg.json {
            write_report_json(&report, &filtered, &summary, &mut out)
        } else {
            write_report_csv(&report, &filtered, &summary, &mut out)
        };
        written
            .and_then(|_| out.flush().map_err(Error::from))
            .map_err(output_error(Some(path)))?;
    }
    writeln!(stdout, "{summary}").map_err(|e| output_error(None)(e.into()))?;
    Ok(())
}

/// Writes `--sample N` draws to `--output`, or to `stdout` without one.
pub fn run_sample<W: Write>(cfg: &RunConfig, stdout: &mut W) -> Result<(), CliError> {
    let count = cfg.sample.unwrap_or(0);
    let (_, ensemble) = prepare(cfg)?;
    let batch = if ensemble.is_unbiased() {
        sample_unbiased(&ensemble, count, cfg.seed)
    } else {
        sample_biased(&ensemble, count, cfg.seed)
    }
    .map_err(computation_error)?;
    match &cfg.output {
        Some(path) => {
            let mut out = create(path)?;
            write_batch(&batch, &mut out)
                .and_then(|_| out.flush().map_err(Error::from))
                .map_err(output_error(Some(path)))
        }
        None => write_batch(&batch, stdout).map_err(output_error(None)),
    }
}

pub fn run<W: Write>(cfg: &RunConfig, stdout: &mut W) -> Result<(), CliError> {
    if cfg.json && cfg.report.is_none() {
        return Err(fail(EXIT_CONFIG, "--json needs --report"));
    }
    if cfg.sample.is_some() {
        run_sample(cfg, stdout)
    } else {
        run_filter(cfg, stdout)
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cfg, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ghype: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_specs() {
        assert_eq!(parse_omega_spec("uniform"), Ok(OmegaSpec::Uniform));
        assert_eq!(
            parse_omega_spec("block:dir,with,commas/c.txt,2,1"),
            Ok(OmegaSpec::Block {
                path: "dir,with,commas/c.txt".into(),
                within: 2.0,
                between: 1.0
            })
        );
        assert_eq!(
            parse_omega_spec("matrix:m.txt"),
            Ok(OmegaSpec::Matrix("m.txt".into()))
        );
        assert!(parse_omega_spec("block:c.txt,2").is_err());
        assert!(parse_omega_spec("block:c.txt,0,1").is_err());
        assert!(parse_omega_spec("block:,2,1").is_err());
        assert!(parse_omega_spec("matrix:").is_err());
        assert!(parse_omega_spec("blocks").is_err());
    }

    #[test]
    fn config_validation() {
        let base = ["ghype", "--input", "x.edges"];
        let parse = |extra: &[&str]| RunConfig::try_parse_from(base.iter().chain(extra));
        assert!(parse(&[]).is_err());
        assert!(parse(&["--directed", "--undirected"]).is_err());
        let cfg = parse(&["--directed"]).unwrap();
        assert_eq!(cfg.alpha.get(), 0.01);
        assert_eq!(cfg.tol, 1e-10);
        assert_eq!(cfg.omega, OmegaSpec::Uniform);
        assert!(parse(&["--directed", "--alpha", "1.5"]).is_err());
        assert!(parse(&["--directed", "--alpha", "0"]).is_err());
        assert!(parse(&["--directed", "--tol", "-1"]).is_err());
        assert!(parse(&["--undirected", "--correction", "bh", "--xi", "erdos-renyi"]).is_ok());
    }

    #[test]
    fn alpha_out_of_range_is_a_config_error() {
        assert_eq!(
            main_with_args(["ghype", "--input", "x", "--directed", "--alpha", "1.5"]),
            EXIT_CONFIG
        );
    }
}
