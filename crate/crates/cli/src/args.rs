use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robust_rank::io::Format;
use robust_rank::pipeline::AggregatorFamily;

#[derive(Debug, Parser)]
#[command(
    name = "robust-rank",
    version,
    about = "Robust composite-index rankings: Choquet aggregation, SMAA, Condorcet/Schulze"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration; flags take precedence over its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Decision-matrix CSV. Relative paths are also looked up in $RR_DATA_DIR.
    #[arg(long, global = true, value_name = "FILE")]
    pub data: Option<PathBuf>,

    /// Min-max normalize every criterion before use.
    #[arg(long, global = true)]
    pub normalize: bool,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Write one file per report item into this directory instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a decision matrix and print its shape.
    IngestCheck {
        /// Also write the validated (and possibly normalized) matrix to this CSV file.
        #[arg(long, value_name = "FILE")]
        write: Option<PathBuf>,
    },
    /// Pearson correlations between criteria.
    Correlate,
    /// Learn interaction indices from the correlations.
    Learn {
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Score and rank the alternatives under fixed weights.
    Score {
        #[arg(long, value_enum)]
        agg: Option<Agg>,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Rank acceptability and pairwise winning indices under sampled weights.
    Smaa(SmaaArgs),
    /// Consensus ranking from pairwise winning indices.
    Condorcet {
        /// Pairwise winning matrix CSV; without it the matrix is computed by SMAA.
        #[arg(long, value_name = "FILE")]
        pairwise: Option<PathBuf>,
        #[command(flatten)]
        smaa: SmaaArgs,
    },
    /// Kendall tau distance between two ranking CSVs (position,alternative).
    Compare { first: PathBuf, second: PathBuf },
    /// Run a full methodology and emit all of its outputs.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        methodology: Option<u8>,
        /// Also emit raw per-sample tau values.
        #[arg(long)]
        raw_tau: bool,
        #[command(flatten)]
        smaa: SmaaArgs,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct FitArgs {
    /// Deterministic weights in criterion order, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "W1,W2,...")]
    pub weights: Option<Vec<f64>>,

    /// KKT tolerance of the u1 solver.
    #[arg(long, value_name = "TOL")]
    pub u1_tol: Option<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct SmaaArgs {
    /// Weight distribution.
    #[arg(long, value_enum)]
    pub weights: Option<WeightMode>,

    #[arg(long, value_enum)]
    pub agg: Option<Agg>,

    /// Criteria from most to least important (names or 1-based positions), for ordinal weights.
    #[arg(long, value_delimiter = ',', value_name = "C1,C2,...")]
    pub order: Option<Vec<String>>,

    /// Weights used as Shapley values when learning interaction indices.
    #[arg(long, value_delimiter = ',', value_name = "W1,W2,...")]
    pub reference_weights: Option<Vec<f64>>,

    /// Number of Monte Carlo samples.
    #[arg(long)]
    pub samples: Option<usize>,

    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_name = "TOL")]
    pub u1_tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    U1,
    U2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Agg {
    Ws,
    CiU1,
    CiU2,
}

impl Agg {
    pub fn family(self) -> AggregatorFamily {
        match self {
            Agg::Ws => AggregatorFamily::Ws,
            Agg::CiU1 => AggregatorFamily::CiU1,
            Agg::CiU2 => AggregatorFamily::CiU2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightMode {
    Uniform,
    Ordinal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

/// Parses a value given in the config file with the same spelling as the flag.
pub fn parse_choice<T: ValueEnum>(field: &str, value: &str) -> Result<T, String> {
    T::from_str(value, true).map_err(|_| {
        let options: Vec<String> =
            T::value_variants().iter().filter_map(|v| v.to_possible_value()).map(|p| p.get_name().to_owned()).collect();
        format!("config field `{field}`: `{value}` is not one of {}", options.join(", "))
    })
}
