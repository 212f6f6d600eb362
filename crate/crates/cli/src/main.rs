mod commands;
mod config;
mod suites;
mod table;

use clap::Parser;
use config::{Cli, Command, Common, Format};
use std::process::ExitCode;
use table::Table;

const USAGE: u8 = 2;
const FAILED: u8 = 1;

fn threads() -> Result<(), String> {
    let Ok(v) = std::env::var("FRACRADON_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or(format!("FRACRADON_THREADS must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn emit(table: &Table, common: &Common) -> Result<(), String> {
    let text = match common.out {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let err = |e: fracradon::Error| e.to_string();
    let (table, pass, common) = match &cli.command {
        Command::Transform(a) => (commands::transform(a).map_err(err)?, true, &a.common),
        Command::Fracint(a) => (commands::fracint(a).map_err(err)?, true, &a.common),
        Command::Norms(a) => {
            let (t, pass) = commands::norms(a).map_err(err)?;
            (t, pass, &a.common)
        }
        Command::Report(a) => (commands::report(a).map_err(err)?, true, &a.common),
        Command::Verify(a) => {
            let checks = suites::run(a.suite, a.tol_scale, a.common.seed, a.common.n).map_err(err)?;
            let mut t = suites::table(&checks);
            let cfg = config::RunConfig {
                subcommand: "verify".into(),
                function: "suite corpus".into(),
                n: a.common.n,
                seed: a.common.seed,
                format: Some(a.common.out),
                suite: Some(a.suite),
                tol_scale: Some(a.tol_scale),
                ..Default::default()
            };
            t.meta_from(&cfg);
            let failed: Vec<&str> = checks.iter().filter(|c| !c.pass()).map(|c| c.name.as_str()).collect();
            eprintln!("verify: {}/{} checks passed", checks.len() - failed.len(), checks.len());
            for name in &failed {
                eprintln!("  FAIL {name}");
            }
            (t, failed.is_empty(), &a.common)
        }
    };
    emit(&table, common)?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    if let Err(e) = threads() {
        eprintln!("error: {e}");
        return ExitCode::from(USAGE);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
