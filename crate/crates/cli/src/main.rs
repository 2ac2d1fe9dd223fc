mod args;
mod commands;
mod output;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use flatrank::families::Family;
use flatrank::RankEngine;
use serde::Serialize;

use args::{Cli, Command, Format};
use commands::Ctx;
use output::{emit, render_csv, render_json, Config, CsvRow, Envelope};

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("flatrank: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let mut engine = RankEngine::new(cli.seed, cli.primes as usize);
    engine.dense_cap = cli.dense_cap;
    let config = Config::new(&engine, cli.cap);
    let ctx = Ctx { engine, cap: cli.cap, config };
    let out = cli.out.as_deref();
    let err = |e: flatrank::Error| e.to_string();

    let write = |command: &str, results: &dyn erased::Results, csv: Vec<CsvRow>| -> Result<(), String> {
        let bytes = match cli.format {
            Format::Json => results.render(command, &ctx.config),
            Format::Csv => render_csv(&csv),
        }
        .map_err(|e| e.to_string())?;
        emit(&bytes, out).map_err(|e| format!("cannot write output: {e}"))
    };

    match &cli.command {
        Command::Family { list, family, params } => {
            if cli.format == Format::Csv {
                return Err("the family command only emits JSON".into());
            }
            let results = if *list {
                commands::family_list()
            } else {
                let name = family.as_deref().unwrap_or_default();
                let fam = Family::from_name(name, &params.to_args(cli.seed)).map_err(err)?;
                let poly = ctx.build(&fam).map_err(err)?;
                let poly_json: serde_json::Value = serde_json::from_str(&poly.to_json()).map_err(|e| e.to_string())?;
                serde_json::json!({ "family": fam, "polynomial": poly_json })
            };
            write("family", &results, Vec::new())?;
        }
        Command::Catalecticant { family, params, e } => {
            let fam = Family::from_name(family, &params.to_args(cli.seed)).map_err(err)?;
            let records = commands::catalecticant(&ctx, &fam, *e).map_err(err)?;
            write("catalecticant", &records, commands::catalecticant_csv(&records, &ctx.config))?;
        }
        Command::Shifted { family, params, e, tau } => {
            let fam = Family::from_name(family, &params.to_args(cli.seed)).map_err(err)?;
            let record = commands::shifted(&ctx, &fam, *e, *tau).map_err(err)?;
            write("shifted", &record, vec![commands::shifted_csv(&record, &ctx.config)])?;
        }
        Command::Koszul { family, params, q, s, check_skew } => {
            let args = commands::koszul_family_args(params.to_args(cli.seed));
            let fam = Family::from_name(family, &args).map_err(err)?;
            let record = commands::koszul(&ctx, &fam, *s, *q, *check_skew).map_err(err)?;
            write("koszul", &record, vec![commands::koszul_csv(&record, &ctx.config)])?;
        }
        Command::Lgv { tuples } => {
            let tuples = commands::parse_tuples(tuples).map_err(err)?;
            let record = commands::lgv(&ctx, tuples).map_err(err)?;
            write("lgv", &record, vec![commands::lgv_csv(&record, &ctx.config)])?;
        }
        Command::Verify { suite } => {
            let report = verify::run(*suite, &ctx);
            let csv = report.csv_rows(&ctx);
            write("verify", &report, csv)?;
            for c in report.checks.iter().filter(|c| c.status == verify::Status::Fail) {
                eprintln!("FAIL {}/{} {}: {}", c.suite, c.check, serde_json::to_string(&c.params).unwrap_or_default(), c.detail);
            }
            if !report.all_passed() {
                return Ok(ExitCode::from(EXIT_FAILED));
            }
        }
        Command::Sweep { kind, family, ranges } => {
            let table = sweep::run(*kind, family, ranges, &ctx).map_err(err)?;
            write("sweep", &table, sweep::csv_rows(&table, &ctx))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

mod erased {
    use super::*;

    /// Object-safe wrapper so every command shares one output path.
    pub trait Results {
        fn render(&self, command: &str, config: &Config) -> std::io::Result<Vec<u8>>;
    }

    impl<T: Serialize> Results for T {
        fn render(&self, command: &str, config: &Config) -> std::io::Result<Vec<u8>> {
            render_json(&Envelope { command, config, results: self })
        }
    }
}
