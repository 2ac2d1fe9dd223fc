use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatrank::families::FamilyArgs;
use flatrank::rank::DEFAULT_DENSE_CAP;

#[derive(Parser, Debug)]
#[command(name = "flatrank", version, about = "Exact flattening, shifted-partial and Koszul ranks of explicit polynomials")]
pub struct Cli {
    /// Seed for the random primes and for generic polynomials.
    #[arg(long, global = true, env = "FLATRANK_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Number of random 62-bit primes used for modular ranks.
    #[arg(long, global = true, env = "FLATRANK_PRIMES", default_value_t = 2,
          value_parser = clap::value_parser!(u64).range(1..=64))]
    pub primes: u64,

    /// Size cap for generated polynomials, bases and matrices (module defaults when absent).
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// rows*cols limit for exact rational elimination.
    #[arg(long, global = true, env = "FLATRANK_DENSE_CAP", default_value_t = DEFAULT_DENSE_CAP)]
    pub dense_cap: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug, Default)]
pub struct FamilyParams {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Seed of the `generic` family (defaults to --seed).
    #[arg(long)]
    pub family_seed: Option<u64>,
}

impl FamilyParams {
    pub fn to_args(&self, global_seed: u64) -> FamilyArgs {
        FamilyArgs {
            n: self.n,
            d: self.d,
            k: self.k,
            m: self.m,
            seed: Some(self.family_seed.unwrap_or(global_seed)),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit a family member as polynomial JSON, or list the families.
    Family {
        #[arg(long)]
        list: bool,
        #[arg(long, required_unless_present = "list")]
        family: Option<String>,
        #[command(flatten)]
        params: FamilyParams,
    },
    /// Rank of the e-th catalecticant (every e when --e is absent).
    Catalecticant {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long)]
        e: Option<usize>,
    },
    /// Dimension of the span of degree-tau multiples of order-e partials.
    Shifted {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        tau: usize,
    },
    /// Koszul flattening rank, a-priori bound and border-rank bound.
    Koszul {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long, default_value_t = 1)]
        q: usize,
        /// Derivative order (defaults to floor(d/2)).
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        check_skew: bool,
    },
    /// Rank and definiteness of a Gessel-Viennot matrix.
    Lgv {
        /// JSON list of equal-length tuples, e.g. '[[0],[1],[2]]'.
        #[arg(long)]
        tuples: String,
    },
    /// Run a theorem-check suite; exit 0 iff every check passes.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Tabulate ranks against their bounds over parameter ranges.
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
        #[arg(long)]
        family: String,
        #[command(flatten)]
        ranges: SweepRanges,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Flattenings,
    Specializations,
    Lgv,
    Koszul,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Catalecticant,
    Koszul,
    Shifted,
}

/// Named so clap parses each flag as one value rather than a repeated list.
pub type Values = Vec<usize>;

/// Inclusive ranges: `3`, `1..5`, `1..=5` or `1,3,4`.
#[derive(Args, Clone, Debug, Default)]
pub struct SweepRanges {
    #[arg(long, value_parser = parse_range)]
    pub n: Option<Values>,
    #[arg(long, value_parser = parse_range)]
    pub d: Option<Values>,
    #[arg(long, value_parser = parse_range)]
    pub k: Option<Values>,
    #[arg(long, value_parser = parse_range)]
    pub m: Option<Values>,
    #[arg(long, value_parser = parse_range)]
    pub e: Option<Values>,
    #[arg(long, value_parser = parse_range)]
    pub tau: Option<Values>,
    #[arg(long, value_parser = parse_range)]
    pub q: Option<Values>,
    #[arg(long, value_parser = parse_range)]
    pub s: Option<Values>,
}

pub fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("{t:?} is not a nonnegative integer"));
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else {
        let values = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
        return Ok(values);
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo..=hi).collect())
}
