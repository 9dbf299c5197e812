mod config;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use powergraph::arith::factorize;
use powergraph::inequalities::check_range;
use powergraph::theorem::{minimum_cutset, verify, verify_range, VerifyOptions};
use powergraph::{DivisorLattice, Error};

use config::{class_cap_from_env, default_workers, parse_order, Format, Oracle, SweepConfig};
use render::SelftestSummary;

#[derive(Parser)]
#[command(
    name = "powergraph",
    version,
    about = "Minimum cut-sets of power graphs of cyclic groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the connectivity and minimum cut-sets of P(C_n)
    Analyze(AnalyzeArgs),
    /// Check the formula against the graph oracles for every n in a range
    VerifyRange(VerifyRangeArgs),
    /// Evaluate the totient inequalities over a range of n
    Selftest(SelftestArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    #[arg(value_parser = parse_order)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Shorthand for `--format json`
    #[arg(long, conflicts_with = "format")]
    json: bool,
    #[arg(long, value_enum, default_value_t = Oracle::None)]
    oracle: Oracle,
    /// Largest number of divisor classes to build (env POWERGRAPH_CLASS_CAP)
    #[arg(long)]
    class_cap: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write measured times into JSON instead of 0
    #[arg(long)]
    timing: bool,
}

#[derive(clap::Args)]
struct VerifyRangeArgs {
    #[arg(value_parser = parse_order)]
    lo: u64,
    #[arg(value_parser = parse_order)]
    hi: u64,
    #[arg(long, value_enum, default_value_t = Oracle::Both)]
    oracle: Oracle,
    /// Largest number of divisor classes to build (env POWERGRAPH_CLASS_CAP)
    #[arg(long)]
    class_cap: Option<usize>,
    /// Worker threads, default one per logical CPU
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write measured times into JSON instead of 0
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SelftestFormat {
    Table,
    Json,
}

#[derive(clap::Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 2, value_parser = parse_order)]
    from: u64,
    #[arg(long, default_value_t = 5000, value_parser = parse_order)]
    to: u64,
    #[arg(long)]
    class_cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = SelftestFormat::Table)]
    format: SelftestFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Why a command failed, and the exit code that goes with it.
#[derive(Debug)]
enum Failure {
    /// Invalid input: 2.
    Usage(String),
    /// Arithmetic overflow or a size cap: 3.
    Limit(String),
    /// Could not write output: 4.
    Io(String),
    /// The formula and an oracle disagree, or an inequality fails: 1.
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Limit(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Limit(m) | Failure::Io(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::OrderTooSmall | Error::Parameter(_) => Failure::Usage(msg),
            Error::Overflow | Error::LatticeTooLarge { .. } | Error::ExhaustiveLimit { .. } => {
                Failure::Limit(msg)
            }
            _ => Failure::Mismatch(msg),
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    let written = match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| format!("stdout: {e}"))
        }
    };
    written.map_err(Failure::Io)
}

fn lattice(n: u64, class_cap: usize) -> Result<DivisorLattice, Failure> {
    Ok(DivisorLattice::new(factorize(n)?, class_cap)?)
}

fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let class_cap = class_cap_from_env(args.class_cap).map_err(Failure::Usage)?;
    let format = if args.json { Format::Json } else { args.format };
    let lat = lattice(args.n, class_cap)?;

    let (report, record) = match args.oracle {
        Oracle::None => (minimum_cutset(&lat)?, None),
        oracle => {
            let v = verify(&lat, VerifyOptions::new(oracle.into()))?;
            (v.report, Some(v.record))
        }
    };
    let text = match format {
        Format::Table => render::analyze_table(lat.factorization(), &report, record.as_ref()),
        Format::Json => render::analyze_json(&report, record.as_ref(), args.timing),
        Format::Csv => {
            render::csv([(&report, record.as_ref())]).map_err(|e| Failure::Io(e.to_string()))?
        }
    };
    emit(args.output.as_deref(), &text)?;
    match record {
        Some(rec) if !rec.is_ok() => Err(Failure::Mismatch(format!(
            "n = {}: verification failed",
            args.n
        ))),
        _ => Ok(()),
    }
}

fn verify_range_cmd(args: VerifyRangeArgs) -> Result<(), Failure> {
    let config = SweepConfig {
        range: args.lo..=args.hi,
        oracle: args.oracle,
        class_cap: class_cap_from_env(args.class_cap).map_err(Failure::Usage)?,
        workers: args.workers.unwrap_or_else(default_workers),
        output: args.output,
        format: args.format,
    };
    config.validate().map_err(Failure::Usage)?;

    let sweep = verify_range(
        config.range.clone(),
        VerifyOptions::new(config.oracle.into()),
        config.class_cap,
        config.workers,
        false,
    )?;
    let rows = sweep.entries.iter().map(|v| (&v.report, &v.record));
    let mismatches = sweep.failures();
    let summary = format!(
        "{} records, {} matched, {} mismatched\n",
        sweep.entries.len(),
        sweep.entries.len() - mismatches,
        mismatches
    );
    let text = match config.format {
        Format::Table => render::sweep_table(rows) + "\n" + &summary,
        Format::Json => render::json_lines(rows, args.timing),
        Format::Csv => render::csv(rows.map(|(rep, rec)| (rep, Some(rec))))
            .map_err(|e| Failure::Io(e.to_string()))?,
    };
    emit(config.output.as_deref(), &text)?;
    if config.format != Format::Table {
        eprint!("{summary}");
    }
    if mismatches > 0 {
        let first: Vec<String> = sweep
            .entries
            .iter()
            .filter(|v| !v.record.is_ok())
            .take(10)
            .map(|v| v.record.n.to_string())
            .collect();
        return Err(Failure::Mismatch(format!(
            "mismatch at n = {}",
            first.join(", ")
        )));
    }
    Ok(())
}

fn selftest(args: SelftestArgs) -> Result<(), Failure> {
    if args.from > args.to {
        return Err(Failure::Usage(format!(
            "empty range {}..={}",
            args.from, args.to
        )));
    }
    let class_cap = class_cap_from_env(args.class_cap).map_err(Failure::Usage)?;
    let rep = check_range(args.from..=args.to, class_cap)?;
    let summary = SelftestSummary::new(args.from, args.to, &rep);
    let text = match args.format {
        SelftestFormat::Table => summary.table(),
        SelftestFormat::Json => summary.json(),
    };
    emit(args.output.as_deref(), &text)?;
    if rep.is_clean() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "{} inequality violations",
            rep.violations.len()
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::VerifyRange(args) => verify_range_cmd(args),
        Command::Selftest(args) => selftest(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
