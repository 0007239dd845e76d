//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "umlaut", version, about = "Umlaut information and zero-rate error exponents")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON input file (channel, joint distribution or Gaussian spec).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Solver tolerance.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Units::Nats)]
    pub units: Units,
    /// Seed for randomized restarts; decimal or 0x-prefixed hex.
    #[arg(long, global = true, default_value = "0xC0FFEE", value_parser = seed)]
    pub seed: u64,
    /// Output format; `figure-lu-sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Bsc,
    Bec,
}

/// A channel given by file or by a named family.
#[derive(Debug, Args)]
pub struct ChannelSource {
    #[arg(long, value_enum, requires = "q")]
    pub family: Option<Family>,
    /// Crossover or erasure probability of the family.
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Umlaut, lautum and mutual information of a joint distribution.
    DistUmlaut,
    /// Channel umlaut information with its certificate.
    ChannelUmlaut(ChannelSource),
    /// Rényi umlaut information of a joint distribution or a channel.
    Renyi {
        #[command(flatten)]
        source: ChannelSource,
        #[arg(long, value_parser = positive)]
        alpha: f64,
    },
    /// Sphere-packing exponent at rate r.
    SpherePacking {
        #[command(flatten)]
        source: ChannelSource,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
    },
    /// Unassisted zero-rate exponent.
    ExponentUnassisted(ChannelSource),
    /// List-decoding zero-rate exponent with its gap bound.
    ExponentList {
        #[command(flatten)]
        source: ChannelSource,
        #[arg(long = "L", alias = "list-size", value_parser = clap::value_parser!(u64).range(1..))]
        list_size: u64,
    },
    /// Non-signalling one-shot error by linear programming.
    NsError {
        #[command(flatten)]
        source: ChannelSource,
        #[arg(long = "M", value_parser = clap::value_parser!(u64).range(1..))]
        messages: u64,
        /// Blocklength; the channel is tensorized this many times.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Rényi bounds on the non-signalling exponent at blocklength n.
    NsSandwich {
        #[command(flatten)]
        source: ChannelSource,
        #[arg(long = "M", value_parser = clap::value_parser!(u64).range(2..))]
        messages: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0.999)]
        alpha_lo: f64,
        #[arg(long, default_value_t = 1.001)]
        alpha_hi: f64,
    },
    /// Doubly-nonnegative relaxation bound on the unassisted exponent.
    DnnBound(ChannelSource),
    /// Gaussian joint or linear Gaussian channel closed forms.
    Gaussian,
    /// Finite-blocklength Stein sandwich for a joint distribution.
    SteinSim {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 0.8)]
        alpha: f64,
    },
    /// Umlaut against lautum information on the binary symmetric family.
    FigureLuSweep {
        /// Crossover grid; defaults to 0.05, 0.10, ..., 0.45.
        #[arg(long, value_delimiter = ',')]
        q: Vec<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DistUmlaut => "dist-umlaut",
            Command::ChannelUmlaut(_) => "channel-umlaut",
            Command::Renyi { .. } => "renyi",
            Command::SpherePacking { .. } => "sphere-packing",
            Command::ExponentUnassisted(_) => "exponent-unassisted",
            Command::ExponentList { .. } => "exponent-list",
            Command::NsError { .. } => "ns-error",
            Command::NsSandwich { .. } => "ns-sandwich",
            Command::DnnBound(_) => "dnn-bound",
            Command::Gaussian => "gaussian",
            Command::SteinSim { .. } => "stein-sim",
            Command::FigureLuSweep { .. } => "figure-lu-sweep",
        }
    }
}

fn positive(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive finite number")),
        Err(e) => Err(e.to_string()),
    }
}

fn seed(text: &str) -> Result<u64, String> {
    let parsed = match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => text.parse(),
    };
    parsed.map_err(|e| e.to_string())
}
