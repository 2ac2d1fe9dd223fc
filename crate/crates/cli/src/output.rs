use std::fs;
use std::io::{self, Write};
use std::path::Path;

use flatrank::families::Family;
use flatrank::RankEngine;
use serde::Serialize;

/// Bumped whenever the CSV columns change.
pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub seed: u64,
    pub prime_count: usize,
    pub primes: Vec<u64>,
    pub cap: Option<usize>,
    pub dense_cap: usize,
}

impl Config {
    pub fn new(engine: &RankEngine, cap: Option<usize>) -> Self {
        Self {
            seed: engine.seed(),
            prime_count: engine.primes().len(),
            primes: engine.primes().to_vec(),
            cap,
            dense_cap: engine.dense_cap,
        }
    }
}

/// Family name plus whichever parameters apply.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
}

impl Params {
    pub fn of(family: &Family) -> Self {
        let mut p = Params {
            family: Some(family_name(family).to_string()),
            ..Default::default()
        };
        match *family {
            Family::PowerSum { n, d }
            | Family::LinearPower { n, d }
            | Family::Complete { n, d }
            | Family::Elementary { n, d }
            | Family::Bierman { n, d }
            | Family::Imm { n, d }
            | Family::Pow { n, d } => (p.n, p.d) = (Some(n), Some(d)),
            Family::F { n, k } | Family::Ftilde { n, k } => (p.n, p.k) = (Some(n), Some(k)),
            Family::Perm { m } | Family::Det { m } => p.m = Some(m),
            Family::Generic { n, d, seed } => (p.n, p.d, p.family_seed) = (Some(n), Some(d), Some(seed)),
        }
        p
    }

    pub fn with(mut self, f: impl FnOnce(&mut Self)) -> Self {
        f(&mut self);
        self
    }
}

pub fn family_name(family: &Family) -> &'static str {
    match family {
        Family::PowerSum { .. } => "power-sum",
        Family::LinearPower { .. } => "linear-power",
        Family::Complete { .. } => "complete",
        Family::Elementary { .. } => "elementary",
        Family::F { .. } => "f",
        Family::Ftilde { .. } => "ftilde",
        Family::Bierman { .. } => "bierman",
        Family::Perm { .. } => "perm",
        Family::Det { .. } => "det",
        Family::Imm { .. } => "imm",
        Family::Pow { .. } => "pow",
        Family::Generic { .. } => "generic",
    }
}

/// One row of the fixed CSV schema; absent values are empty cells.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CsvRow {
    pub schema_version: u32,
    pub command: String,
    pub check: Option<String>,
    pub family: Option<String>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub e: Option<usize>,
    pub tau: Option<usize>,
    pub s: Option<usize>,
    pub q: Option<usize>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub rank: Option<usize>,
    pub bound: Option<String>,
    pub rank_equals_bound: Option<bool>,
    pub full_rank: Option<bool>,
    pub certainty: Option<String>,
    pub method: Option<String>,
    pub status: Option<String>,
    pub detail: Option<String>,
    pub seed: u64,
    pub prime_count: usize,
}

impl CsvRow {
    pub fn new(command: &str, params: &Params, config: &Config) -> Self {
        CsvRow {
            schema_version: CSV_SCHEMA_VERSION,
            command: command.to_string(),
            family: params.family.clone(),
            n: params.n,
            d: params.d,
            k: params.k,
            m: params.m,
            e: params.e,
            tau: params.tau,
            s: params.s,
            q: params.q,
            seed: config.seed,
            prime_count: config.prime_count,
            ..Default::default()
        }
    }
}

/// Kebab-case name of a serde unit variant, e.g. `Certainty::Exact`.
pub fn label<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub command: &'a str,
    pub config: &'a Config,
    pub results: T,
}

pub fn render_json<T: Serialize>(value: &T) -> io::Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(io::Error::other)?;
    buf.push(b'\n');
    Ok(buf)
}

pub fn render_csv(rows: &[CsvRow]) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.serialize(CsvRow::default()).map_err(io::Error::other)?;
        // header only: drop the placeholder record
        let data = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
        let header_end = data.iter().position(|&b| b == b'\n').map_or(data.len(), |i| i + 1);
        return Ok(data[..header_end].to_vec());
    }
    for row in rows {
        w.serialize(row).map_err(io::Error::other)?;
    }
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}
