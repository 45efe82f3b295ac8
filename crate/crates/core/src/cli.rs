//! Command-line front end. Every command prints a text summary to standard
//! output, or writes a JSON document to `--out`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::chromatic::optimal_colouring;
use crate::enchained::{mes_with, EnchainedError, MesOptions};
use crate::graph::{parse_graph, Graph, GraphError};
use crate::greyscale::{
    contrast_vector, gradation_vector, parse_greyscale, verify_max_conditions, Greyscale,
    GreyscaleError,
};
use crate::rational::Rational;
use crate::rmacg::{parse_fixed, solve_rmacg, RmacgError, RmacgMethod};
use crate::solver::{
    oracle_macg_with, solve_macg, MacgResult, SearchConfig, SolverError, ValueSet,
};

pub const SCHEMA_VERSION: u32 = 1;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  verify: the greyscale fails a necessary condition
  2  usage error
  3  input file not found
  4  other I/O error
  5  malformed input file
  6  input violates a precondition (e.g. non-bipartite graph for rmacg)
  7  node budget exceeded
  8  value set not representable for exact search";

#[derive(Debug, Parser)]
#[command(name = "greyscale", version, about = "Maximum-contrast greyscales of graphs", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contrast (or gradation) vector of a greyscale.
    Contrast {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        greyscale: PathBuf,
        /// Also report the gradation vector (descending).
        #[arg(long)]
        gradation: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum contrast vector and a canonical witness.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        /// `auto` (the enchained set for chi - 1) or a file of rationals.
        #[arg(long, default_value = "auto")]
        values: String,
        /// Exhaustive enumeration instead of branch and bound.
        #[arg(long)]
        oracle: bool,
        /// Node limit.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the witness in greyscale file format.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// The maximal 1/k-minimum-step-enchained set F_k.
    Fk {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        strata: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The {0,1}-restricted problem on a bipartite graph.
    Rmacg {
        #[arg(long)]
        graph: PathBuf,
        /// Fixed tones, lines `v 0` or `v 1`.
        #[arg(long)]
        fixed: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Necessary conditions for a maximum-contrast greyscale.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        greyscale: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact chromatic number.
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Oracle,
    Constructive,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: file not found")]
    NotFound(PathBuf),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Parse(PathBuf, String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Unrepresentable(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotFound(_) => 3,
            CliError::Io(..) => 4,
            CliError::Parse(..) => 5,
            CliError::Invalid(_) => 6,
            CliError::Budget(_) => 7,
            CliError::Unrepresentable(_) => 8,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::NotFound(_) => "not-found",
            CliError::Io(..) => "io",
            CliError::Parse(..) => "parse",
            CliError::Invalid(_) => "invalid",
            CliError::Budget(_) => "budget",
            CliError::Unrepresentable(_) => "unrepresentable",
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match &e {
            SolverError::BudgetExceeded {
                incumbent: Some(inc),
                ..
            } => CliError::Budget(format!("{e}; incumbent {}", tuple(inc.vector.tones()))),
            SolverError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            SolverError::Unrepresentable => CliError::Unrepresentable(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<RmacgError> for CliError {
    fn from(e: RmacgError) -> Self {
        match e {
            RmacgError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<EnchainedError> for CliError {
    fn from(e: EnchainedError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<GreyscaleError> for CliError {
    fn from(e: GreyscaleError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// A command's result: text for standard output, JSON for `--out`.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => CliError::NotFound(path.to_path_buf()),
        _ => CliError::Io(path.to_path_buf(), e),
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?)
        .map_err(|e: GraphError| CliError::Parse(path.to_path_buf(), e.to_string()))
}

fn load_greyscale(path: &Path, g: &Graph) -> Result<Greyscale, CliError> {
    parse_greyscale(&read(path)?, g.n()).map_err(|e| match e {
        GreyscaleError::Parse { .. } => CliError::Parse(path.to_path_buf(), e.to_string()),
        other => CliError::Invalid(format!("{}: {other}", path.display())),
    })
}

/// Rationals separated by whitespace or commas; `#` comments.
fn load_values(path: &Path) -> Result<Vec<Rational>, CliError> {
    let text = read(path)?;
    let mut values = Vec::new();
    for line in text.lines() {
        let l = line.trim();
        if l.starts_with('#') {
            continue;
        }
        for tok in l
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let v = tok
                .parse()
                .map_err(|e| CliError::Parse(path.to_path_buf(), format!("{tok}: {e}")))?;
            values.push(v);
        }
    }
    Ok(values)
}

fn tuple(tones: &[Rational]) -> String {
    let parts: Vec<String> = tones.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(", "))
}

fn set(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(Rational::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Vertex-to-tone object in vertex order.
struct Tones<'a>(&'a Greyscale);

impl Serialize for Tones<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, t) in self.0.tones().iter().enumerate() {
            map.serialize_entry(&v.to_string(), t)?;
        }
        map.end()
    }
}

fn tones_json(f: &Greyscale) -> Value {
    serde_json::to_value(Tones(f)).expect("string map")
}

fn witness_text(f: &Greyscale) -> String {
    let parts: Vec<String> = f
        .tones()
        .iter()
        .enumerate()
        .map(|(v, t)| format!("{v}={t}"))
        .collect();
    parts.join(" ")
}

fn contrast(graph: &Path, greyscale: &Path, gradation: bool) -> Result<Report, CliError> {
    let g = load_graph(graph)?;
    let f = load_greyscale(greyscale, &g)?;
    let cv = contrast_vector(&g, &f)?;
    let mut text = format!("contrast vector: {}\n", tuple(cv.tones()));
    let mut json = json!({ "schema_version": SCHEMA_VERSION, "command": "contrast", "vector": cv });
    if gradation {
        let gv = gradation_vector(&g, &f)?;
        let _ = writeln!(text, "gradation vector: {}", tuple(gv.tones()));
        json["gradation"] = serde_json::to_value(gv.tones()).expect("strings");
    }
    Ok(Report {
        text,
        json,
        exit: 0,
    })
}

fn macg_report(r: &MacgResult, oracle: bool) -> Report {
    let mut text = String::new();
    let _ = writeln!(text, "chromatic number: {}", r.chromatic_number);
    let _ = writeln!(text, "value set: {} values", r.value_set.len());
    let _ = writeln!(text, "vector: {}", tuple(r.vector.tones()));
    let _ = writeln!(text, "sum: {}", r.vector.sum());
    let _ = writeln!(text, "witness: {}", witness_text(&r.witness));
    let _ = writeln!(text, "nodes: {}", r.nodes);
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "solve",
        "mode": if oracle { "oracle" } else { "branch-and-bound" },
        "vector": r.vector,
        "witness": tones_json(&r.witness),
        "value_set": r.value_set,
        "nodes": r.nodes,
        "chromatic_number": r.chromatic_number,
    });
    Report {
        text,
        json,
        exit: 0,
    }
}

fn solve(
    graph: &Path,
    values: &str,
    oracle: bool,
    budget: Option<u64>,
    jobs: usize,
    witness: Option<&Path>,
) -> Result<Report, CliError> {
    let g = load_graph(graph)?;
    let value_set = match values {
        "auto" => ValueSet::Auto,
        path => ValueSet::Explicit(load_values(Path::new(path))?),
    };
    let r = if oracle {
        let values = match value_set {
            ValueSet::Auto => {
                let chi = crate::chromatic::chromatic_number(&g) as u64;
                if chi <= 2 {
                    crate::enchained::scale_set(1)
                } else {
                    mes_with(
                        chi - 1,
                        &MesOptions {
                            jobs,
                            ..Default::default()
                        },
                    )?
                    .values
                }
            }
            ValueSet::Explicit(v) => v,
        };
        oracle_macg_with(&g, &values, budget, jobs)?
    } else {
        solve_macg(
            &g,
            &SearchConfig {
                values: value_set,
                pruning: true,
                budget,
                jobs,
            },
        )?
    };
    if let Some(path) = witness {
        write(path, &r.witness.to_text())?;
    }
    Ok(macg_report(&r, oracle))
}

fn fk(k: u64, strata: bool, jobs: usize) -> Result<Report, CliError> {
    let f = mes_with(
        k,
        &MesOptions {
            strata,
            jobs,
            ..Default::default()
        },
    )?;
    let mut text = format!("{}\ncardinality: {}\n", set(&f.values), f.cardinality());
    let mut json = json!({
        "schema_version": SCHEMA_VERSION,
        "k": k,
        "values": f.values,
        "cardinality": f.cardinality(),
    });
    if let Some(layers) = &f.strata {
        for (i, layer) in layers.iter().enumerate() {
            let _ = writeln!(text, "A_{i}: {}", set(layer));
        }
        json["strata"] = serde_json::to_value(layers).expect("strings");
    }
    Ok(Report {
        text,
        json,
        exit: 0,
    })
}

fn rmacg(
    graph: &Path,
    fixed: &Path,
    method: MethodArg,
    witness: Option<&Path>,
) -> Result<Report, CliError> {
    let g = load_graph(graph)?;
    let inc = parse_fixed(&read(fixed)?, &g).map_err(|e| match e {
        RmacgError::Parse { .. } => CliError::Parse(fixed.to_path_buf(), e.to_string()),
        other => other.into(),
    })?;
    let method = match method {
        MethodArg::Auto => RmacgMethod::Auto,
        MethodArg::Oracle => RmacgMethod::Oracle,
        MethodArg::Constructive => RmacgMethod::Constructive,
    };
    let r = solve_rmacg(&g, &inc, method)?;
    if let Some(path) = witness {
        write(path, &r.witness.to_text())?;
    }
    let method_name = serde_json::to_value(r.method).expect("enum");
    let mut text = String::new();
    let _ = writeln!(text, "method: {}", method_name.as_str().unwrap_or_default());
    let _ = writeln!(text, "V_phi0: {:?}", r.partition.match_phi0);
    let _ = writeln!(text, "V_phi1: {:?}", r.partition.match_phi1);
    let _ = writeln!(text, "vector: {}", tuple(r.vector.tones()));
    let _ = writeln!(text, "witness: {}", witness_text(&r.witness));
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "rmacg",
        "method": method_name,
        "vc_partition": r.partition,
        "vector": r.vector,
        "witness": tones_json(&r.witness),
        "nodes": r.nodes,
    });
    Ok(Report {
        text,
        json,
        exit: 0,
    })
}

fn verify(graph: &Path, greyscale: &Path) -> Result<Report, CliError> {
    let g = load_graph(graph)?;
    let f = load_greyscale(greyscale, &g)?;
    let report = verify_max_conditions(&g, &f)?;
    let mut text = format!(
        "{} (k = {}; necessary conditions only)\n",
        if report.passed { "passed" } else { "failed" },
        report.k
    );
    for v in &report.violations {
        let condition = serde_json::to_value(v.condition).expect("enum");
        let witness = serde_json::to_value(&v.witness).expect("enum");
        let _ = writeln!(
            text,
            "  {}: {}",
            condition.as_str().unwrap_or_default(),
            witness
        );
    }
    let mut json = serde_json::to_value(&report).expect("report");
    json["schema_version"] = json!(SCHEMA_VERSION);
    json["command"] = json!("verify");
    Ok(Report {
        text,
        json,
        exit: if report.passed { 0 } else { 1 },
    })
}

fn chromatic(graph: &Path) -> Result<Report, CliError> {
    let g = load_graph(graph)?;
    let colouring = optimal_colouring(&g);
    let chi = colouring.iter().max().map_or(1, |&c| c + 1);
    let text = format!("{chi}\n");
    let json = json!({ "schema_version": SCHEMA_VERSION, "chromatic_number": chi, "colouring": colouring });
    Ok(Report {
        text,
        json,
        exit: 0,
    })
}

fn out_of(command: &Command) -> Option<&Path> {
    match command {
        Command::Contrast { out, .. }
        | Command::Solve { out, .. }
        | Command::Fk { out, .. }
        | Command::Rmacg { out, .. }
        | Command::Verify { out, .. }
        | Command::Chromatic { out, .. } => out.as_deref(),
    }
}

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let report = match &cli.command {
        Command::Contrast {
            graph,
            greyscale,
            gradation,
            ..
        } => contrast(graph, greyscale, *gradation)?,
        Command::Solve {
            graph,
            values,
            oracle,
            budget,
            jobs,
            witness,
            ..
        } => solve(graph, values, *oracle, *budget, *jobs, witness.as_deref())?,
        Command::Fk {
            k, strata, jobs, ..
        } => fk(*k, *strata, *jobs)?,
        Command::Rmacg {
            graph,
            fixed,
            method,
            witness,
            ..
        } => rmacg(graph, fixed, *method, witness.as_deref())?,
        Command::Verify {
            graph, greyscale, ..
        } => verify(graph, greyscale)?,
        Command::Chromatic { graph, .. } => chromatic(graph)?,
    };
    if let Some(path) = out_of(&cli.command) {
        let mut doc = serde_json::to_string_pretty(&report.json).expect("json");
        doc.push('\n');
        write(path, &doc)?;
    }
    Ok(report)
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            if out_of(&cli.command).is_none() {
                print!("{}", report.text);
            }
            report.exit
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            e.exit_code()
        }
    }
}
