//! `cfier run | convergence | oracle-check`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cfier::cli::{self, ExperimentConfig, ReportRow};
use cfier::postproc::format_sci;

#[derive(Parser)]
#[command(name = "cfier", version, about = "Helmholtz impedance problems on domains with corners")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every size in a config and write the report CSV.
    Run { config: PathBuf },
    /// Like `run`, with an empirical order column (needs at least 3 sizes).
    Convergence { config: PathBuf },
    /// Re-verify the special functions against the bundled tables.
    OracleCheck,
}

fn progress(row: &ReportRow) {
    eprintln!(
        "k = {:<6} 2n = {:<5} iters = {:<4} residual = {} error = {} ({:.2} s){}",
        row.k,
        row.two_n,
        row.iterations,
        format_sci(row.residual),
        row.error.map(format_sci).unwrap_or_else(|| "-".into()),
        row.seconds,
        if row.converged { "" } else { "  [maxit]" }
    );
}

fn experiment(path: &Path, with_eoc: bool) -> cfier::Result<i32> {
    let cfg = ExperimentConfig::load(path)?;
    if with_eoc && cfg.problem.sizes.len() < 3 {
        return Err(cfier::Error::Config(format!("convergence needs at least 3 sizes, got {}", cfg.problem.sizes.len())));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    let report = cli::run_experiment(&cfg, stem, progress)?;
    let eoc = if with_eoc { Some(report.eoc()?) } else { None };
    print!("{}", report.to_csv(eoc.as_deref()));
    if let Some(csv) = &cfg.outputs.csv {
        report.write_csv(csv, eoc.as_deref())?;
    }
    Ok(if report.all_converged() { cli::EXIT_OK } else { cli::EXIT_MAXIT })
}

fn oracle() -> cfier::Result<i32> {
    let lines = cli::oracle_check()?;
    for l in &lines {
        println!("{} {:<13} {:>4} records  worst {}  tol {}", if l.pass() { "PASS" } else { "FAIL" }, l.table, l.records, format_sci(l.worst), format_sci(l.tol));
    }
    Ok(if lines.iter().all(|l| l.pass()) { cli::EXIT_OK } else { cli::EXIT_ORACLE })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let status = cli::configure_threads().and_then(|_| match &args.command {
        Command::Run { config } => experiment(config, false),
        Command::Convergence { config } => experiment(config, true),
        Command::OracleCheck => oracle(),
    });
    match status {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("cfier: {e}");
            ExitCode::from(cli::EXIT_ERROR as u8)
        }
    }
}
