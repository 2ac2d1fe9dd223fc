//! Exact and certified rank computation.
//!
//! A rank modulo a prime never exceeds the rank over the rationals, so every
//! modular rank is a valid lower bound, and a modular rank equal to
//! `min(rows, cols)` certifies full rank outright. Deficient ranks are only
//! labelled exact after fraction-free rational elimination.

mod bareiss;
mod echelon;
mod markowitz;
mod matrix;
mod modular;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bareiss::{determinant, leading_principal_minors};
pub use echelon::{Field, Rationals, StreamingEchelon};
pub use matrix::{ExactMatrix, ModMatrix, SparseRow};
pub use modular::{is_prime, random_primes, PrimeField};

/// Default cap on `rows * cols` for dense rational elimination.
pub const DEFAULT_DENSE_CAP: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    /// Confirmed by rational elimination, a full-rank witness prime, or an
    /// empty matrix.
    Exact,
    /// Non-full rank on which at least three primes agree.
    ProbabilisticExact,
    CertifiedLowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    Trivial,
    Rational,
    Modular,
    ModularThenRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub certainty: Certainty,
    pub method: RankMethod,
    pub primes: Vec<u64>,
    /// Wall time; not serialized so outputs stay byte-reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RankReport {
    pub fn max_rank(&self) -> usize {
        self.rows.min(self.cols)
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.max_rank()
    }

    pub fn is_exact(&self) -> bool {
        self.certainty == Certainty::Exact
    }
}

/// Exact rank by fraction-free elimination; rows are first cleared of
/// denominators.
pub fn rank_exact_rational(m: &ExactMatrix, dense_cap: usize) -> Result<RankReport> {
    let start = Instant::now();
    if m.nrows().saturating_mul(m.ncols()) > dense_cap {
        return Err(Error::UseModularPath {
            rows: m.nrows(),
            cols: m.ncols(),
            cap: dense_cap,
        });
    }
    // Eliminating along the shorter side keeps the dense array small.
    let rank = if m.nrows() <= m.ncols() {
        bareiss::integer_rank(m.integer_rows(), m.ncols())
    } else {
        let t = m.transpose();
        bareiss::integer_rank(t.integer_rows(), t.ncols())
    };
    Ok(RankReport {
        rows: m.nrows(),
        cols: m.ncols(),
        rank,
        certainty: Certainty::Exact,
        method: RankMethod::Rational,
        primes: Vec::new(),
        elapsed: start.elapsed(),
    })
}

/// Rank of `m` reduced modulo the prime `p`.
pub fn rank_mod_p(m: &ExactMatrix, p: u64) -> Result<usize> {
    let field = PrimeField::new(p)?;
    let reduced = m.reduce_mod(&field)?;
    Ok(markowitz::sparse_rank(reduced))
}

/// Maximum modular rank over `primes`, skipping primes that divide a
/// denominator.
pub fn rank_certified(m: &ExactMatrix, primes: &[u64]) -> Result<RankReport> {
    let start = Instant::now();
    if primes.is_empty() {
        return Err(Error::InvalidParameter("at least one prime is required".into()));
    }
    let results: Vec<(u64, Result<usize>)> =
        primes.par_iter().map(|&p| (p, rank_mod_p(m, p))).collect();
    let mut used = Vec::new();
    let mut ranks = Vec::new();
    for (p, r) in results {
        match r {
            Ok(r) => {
                used.push(p);
                ranks.push(r);
            }
            Err(Error::BadPrime(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let Some(&rank) = ranks.iter().max() else {
        return Err(Error::AllPrimesBad);
    };
    let full = m.nrows().min(m.ncols());
    let certainty = if rank == full || m.is_zero() {
        Certainty::Exact
    } else if ranks.len() >= 3 && ranks.iter().all(|&r| r == rank) {
        Certainty::ProbabilisticExact
    } else {
        Certainty::CertifiedLowerBound
    };
    Ok(RankReport {
        rows: m.nrows(),
        cols: m.ncols(),
        rank,
        certainty,
        method: RankMethod::Modular,
        primes: used,
        elapsed: start.elapsed(),
    })
}

/// Rank computation policy shared by every module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankEngine {
    seed: u64,
    primes: Vec<u64>,
    /// `rows * cols` limit for rational elimination.
    pub dense_cap: usize,
    /// Confirm non-full modular ranks by rational elimination when the
    /// matrix fits under `dense_cap`.
    pub confirm_exact: bool,
}

impl Default for RankEngine {
    fn default() -> Self {
        Self::new(0, 2)
    }
}

impl RankEngine {
    pub fn new(seed: u64, prime_count: usize) -> Self {
        Self {
            seed,
            primes: random_primes(seed, prime_count.max(1)),
            dense_cap: DEFAULT_DENSE_CAP,
            confirm_exact: true,
        }
    }

    /// Reads `FLATRANK_SEED`, `FLATRANK_PRIMES` and `FLATRANK_DENSE_CAP`,
    /// falling back to the defaults.
    pub fn from_env() -> Result<Self> {
        fn var<T: std::str::FromStr>(name: &str, default: T) -> Result<T> {
            match std::env::var(name) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("{name}={v:?} is not a number"))),
                Err(_) => Ok(default),
            }
        }
        let mut engine = Self::new(var("FLATRANK_SEED", 0)?, var("FLATRANK_PRIMES", 2)?);
        engine.dense_cap = var("FLATRANK_DENSE_CAP", DEFAULT_DENSE_CAP)?;
        Ok(engine)
    }

    pub fn with_primes(primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() || primes.iter().any(|&p| !is_prime(p)) {
            return Err(Error::InvalidParameter("primes must be nonempty and prime".into()));
        }
        Ok(Self {
            seed: 0,
            primes,
            dense_cap: DEFAULT_DENSE_CAP,
            confirm_exact: true,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn rank(&self, m: &ExactMatrix) -> Result<RankReport> {
        let start = Instant::now();
        if m.nrows() == 0 || m.ncols() == 0 || m.is_zero() {
            return Ok(RankReport {
                rows: m.nrows(),
                cols: m.ncols(),
                rank: 0,
                certainty: Certainty::Exact,
                method: RankMethod::Trivial,
                primes: Vec::new(),
                elapsed: start.elapsed(),
            });
        }
        let mut report = rank_certified(m, &self.primes)?;
        if report.certainty != Certainty::Exact
            && self.confirm_exact
            && m.nrows().saturating_mul(m.ncols()) <= self.dense_cap
        {
            let exact = rank_exact_rational(m, self.dense_cap)?;
            debug_assert!(exact.rank >= report.rank);
            report.rank = exact.rank;
            report.certainty = Certainty::Exact;
            report.method = RankMethod::ModularThenRational;
        }
        report.elapsed = start.elapsed();
        Ok(report)
    }
}
