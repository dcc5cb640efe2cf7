//! `turan`: densities, clique counts, constructions and bound checks for
//! (r+1)-partite r-graphs.
//!
//! Exit status: 0 on success, 1 on usage, input or domain errors, 2 when a
//! check reports a violated theorem (which would mean a library bug).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use turan_core::rational::{parse_rational, Rational};

use output::Format;

#[derive(Debug, Parser, Serialize)]
#[command(name = "turan", version, about = "Partite Turán densities for K_{r+1}^r")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Also show decimal approximations with this many digits (table and CSV only).
    #[arg(long, global = true, value_name = "N")]
    pub decimal: Option<usize>,

    /// Worker threads for parallel scans; 0 means one per core.
    #[arg(long, global = true, env = "TURAN_JOBS", default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Density vector rho(0..r) of an instance, or the density of one class subset.
    Density {
        /// Instance JSON file.
        input: PathBuf,
        /// Classes to delete instead of the full vector, e.g. `0,2`.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[command(flatten)]
        #[serde(flatten)]
        out: ReportOut,
    },
    /// Clique density C(G) and the lower bound sum(rho) - r.
    Cliques {
        /// Instance JSON file.
        input: PathBuf,
        /// Report up to this many clique transversals.
        #[arg(long, default_value_t = 0)]
        witnesses: usize,
        #[command(flatten)]
        #[serde(flatten)]
        out: ReportOut,
    },
    /// Density of transversals missing at most k edges.
    NearCliques {
        /// Instance JSON file.
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        witnesses: usize,
        #[command(flatten)]
        #[serde(flatten)]
        out: ReportOut,
    },
    /// Build a graph with the given densities and C = sum(rho) - r.
    Construct {
        /// Uniformity r; instances have r+1 classes.
        #[arg(long)]
        r: usize,
        /// Target densities, comma separated, e.g. `9/10,9/10,9/10,9/10`.
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, required = true)]
        #[serde(serialize_with = "ser_rationals")]
        rho: Vec<Rational>,
        /// Largest allowed per-class gap between target and achieved density.
        #[arg(long, value_parser = rational_arg, default_value = "0")]
        #[serde(serialize_with = "ser_rational")]
        tolerance: Rational,
        /// Base layout for r = 2: exact rationals, or six vertices with denominators up to 10^6.
        #[arg(long, value_enum, default_value_t = Layout::Exact)]
        layout: Layout,
        /// Instance output file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recipe output file; defaults to `<out>.recipe.json`.
        #[arg(long)]
        recipe: Option<PathBuf>,
    },
    /// Lift an ordinary r-graph `{"r":..,"n":..,"edges":[[..],..]}` to an (r+1)-partite one.
    Lift {
        /// Instance JSON file.
        input: PathBuf,
        /// Instance output file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace every vertex by unit-weight clones.
    Blowup {
        /// Instance JSON file.
        input: PathBuf,
        /// One scale for every class.
        #[arg(long, conflicts_with = "per_class")]
        scale: Option<u64>,
        /// One scale per class, comma separated.
        #[arg(long, value_delimiter = ',')]
        per_class: Option<Vec<u64>>,
        /// `raw` clones w(v)*scale times; `normalized` first rescales each class to coprime integers.
        #[arg(long, value_enum, default_value_t = BlowMode::Raw)]
        mode: BlowMode,
        /// Instance output file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strict balance of all partite tuples of one size, plus codegree statistics.
    Balance {
        /// Instance JSON file.
        input: PathBuf,
        #[arg(long)]
        tuple_size: usize,
        #[command(flatten)]
        #[serde(flatten)]
        out: ReportOut,
    },
    /// Degree-threshold certificate for K_{r+1}^r minus k edges.
    Threshold {
        /// Instance JSON file.
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Compute S(e) for every class, not only the maximizing one.
        #[arg(long)]
        all_classes: bool,
        #[command(flatten)]
        #[serde(flatten)]
        out: ReportOut,
    },
    /// Check C >= sum(rho) - r over small or random instances.
    VerifyBound(VerifyArgs),
    /// Build each density vector and report C - (sum(rho) - r).
    Tightness {
        /// Uniformity r; instances have r+1 classes.
        #[arg(long)]
        r: usize,
        /// One grid point per occurrence, e.g. `--rho 3/4,3/4,3/4 --rho 1,1,1`.
        #[arg(long, required = true, value_parser = rational_list_arg)]
        #[serde(serialize_with = "ser_rational_lists")]
        rho: Vec<Vec<Rational>>,
        #[command(flatten)]
        #[serde(flatten)]
        out: ReportOut,
    },
    /// Delta(a,b,c) and the region conditions.
    PosRegion {
        #[arg(value_parser = rational_arg)]
        #[serde(serialize_with = "ser_rational")]
        a: Rational,
        #[arg(value_parser = rational_arg)]
        #[serde(serialize_with = "ser_rational")]
        b: Rational,
        #[arg(value_parser = rational_arg)]
        #[serde(serialize_with = "ser_rational")]
        c: Rational,
        #[command(flatten)]
        #[serde(flatten)]
        out: ReportOut,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct ReportOut {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Uniformity r; instances have r+1 classes.
    #[arg(long)]
    pub r: usize,
    /// Class sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Every graph and weighting, random instances, or random instances meeting `--targets`.
    #[arg(long, value_enum, default_value_t = ScanMode::Exhaustive)]
    pub mode: ScanMode,
    /// Number of random instances.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Seed for random instances.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of instances an exhaustive scan may visit.
    #[arg(long, default_value_t = turan_core::search::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Vertex weights: all 1, random rationals, or a mix.
    #[arg(long, value_enum, default_value_t = Weights::Mixed)]
    pub weights: Weights,
    /// Largest denominator of random weights.
    #[arg(long, default_value_t = 8)]
    pub max_denominator: u64,
    /// Fixed edge probability for random mode.
    #[arg(long)]
    pub edge_probability: Option<f64>,
    /// Density lower bounds for constrained mode.
    #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
    #[serde(serialize_with = "ser_rationals_opt")]
    pub targets: Option<Vec<Rational>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: ReportOut,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    Exhaustive,
    Random,
    Constrained,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weights {
    Unit,
    Weighted,
    Mixed,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    Exact,
    SixVertex,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlowMode {
    Raw,
    Normalized,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn rational_list_arg(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(rational_arg).collect()
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    turan_core::rational::serde_str::serialize(x, s)
}

fn ser_rationals<S: serde::Serializer>(x: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    turan_core::rational::serde_str_vec::serialize(x, s)
}

fn ser_rationals_opt<S: serde::Serializer>(x: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    match x {
        None => s.serialize_none(),
        Some(v) => {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&turan_core::rational::format_rational(r))?;
            }
            seq.end()
        }
    }
}

fn ser_rational_lists<S: serde::Serializer>(x: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(x.len()))?;
    for v in x {
        let strs: Vec<String> = v.iter().map(turan_core::rational::format_rational).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::TheoremViolation(msg)) => {
            eprintln!("theorem violation: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
