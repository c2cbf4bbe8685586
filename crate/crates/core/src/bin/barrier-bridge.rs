use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use barrier_bridge::harness::config::ConfigFile;
use barrier_bridge::harness::fit::{fit_convergence, gap_points_from_records, FitKind};
use barrier_bridge::harness::sweep::{read_records, records, run_sweep, to_json, CsvSink, SweepRow, SweepSpec};
use barrier_bridge::harness::tables::{reproduce_table_with, TableOptions};
use barrier_bridge::{price, Error};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(version, about = "Monte Carlo pricing of continuously monitored barrier options")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Exp,
    Power,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    paths: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Price one configuration (file path or shipped name such as table2).
    Price {
        config: String,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        alpha: Option<f64>,
        /// Number of equally spaced monitoring dates (default: the config grid).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Price a configuration for each number of monitoring dates.
    Sweep {
        config: String,
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Reproduce a published table and run its golden checks.
    Table {
        id: u8,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
    },
    /// Fit the convergence rate of Q_U - Q_L from a sweep CSV.
    Fit {
        csv: PathBuf,
        #[arg(long)]
        kind: Kind,
        /// Table label to select when the file holds several sweeps.
        #[arg(long)]
        table: Option<String>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
}

fn load(config: &str) -> Result<ConfigFile, Error> {
    if Path::new(config).exists() {
        ConfigFile::load(config)
    } else {
        ConfigFile::builtin(config.trim_end_matches(".json"))
    }
}

fn spec_for(cfg: &ConfigFile, run: &RunArgs) -> SweepSpec {
    let mut spec = SweepSpec::from_config(cfg);
    if let Some(p) = run.paths {
        spec.run.paths = p;
    }
    if let Some(s) = run.seed {
        spec.run.seed = s;
    }
    spec
}

fn emit_rows(label: &str, rows: &[SweepRow], format: Format, out: impl Write) -> Result<(), Error> {
    match format {
        Format::Json => {
            let mut out = out;
            writeln!(out, "{}", to_json(rows)?).map_err(|e| Error::Config(e.to_string()))
        }
        Format::Csv => {
            let mut sink = CsvSink::new(out);
            for r in rows {
                sink.write(label, r)?;
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Price { config, run, alpha, m } => {
            let cfg = load(&config)?;
            let mut spec = spec_for(&cfg, &run);
            if let Some(a) = alpha {
                spec.run.alpha = a;
            }
            let problem = match m {
                Some(m) => cfg.validated_with_steps(m)?,
                None => cfg.validated()?,
            };
            let row = SweepRow {
                m: problem.model().steps(),
                report: price(&problem, &spec.run)?,
            };
            match run.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&row)?),
                Format::Csv => emit_rows(&spec.label, &[row], Format::Csv, std::io::stdout().lock())?,
            }
            Ok(true)
        }
        Command::Sweep { config, m, run, output } => {
            let cfg = load(&config)?;
            let mut spec = spec_for(&cfg, &run);
            if let Some(m) = m {
                spec.m_values = m;
            }
            let out: Box<dyn Write> = match &output {
                Some(p) => Box::new(std::fs::File::create(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?),
                None => Box::new(std::io::stdout().lock()),
            };
            match run.format {
                Format::Csv => {
                    let mut sink = CsvSink::new(out);
                    run_sweep(&cfg, &spec, |row| sink.write(&spec.label, row))?;
                }
                Format::Json => {
                    let rows = run_sweep(&cfg, &spec, |row| {
                        eprintln!("M={} done", row.m);
                        Ok(())
                    })?;
                    emit_rows(&spec.label, &rows, Format::Json, out)?;
                }
            }
            Ok(true)
        }
        Command::Table { id, run, m } => {
            let opts = TableOptions {
                paths: run.paths,
                seed: run.seed,
                m_values: m,
            };
            let report = reproduce_table_with(id, &opts, |name, row| {
                eprintln!("{name} M={} done", row.m);
            })?;
            match run.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
                    for run in &report.runs {
                        for row in &run.rows {
                            for rec in records(&run.config, row) {
                                w.serialize(rec)?;
                            }
                        }
                    }
                    w.flush().map_err(|e| Error::Config(e.to_string()))?;
                    eprint!("{}", report.render());
                }
            }
            Ok(report.passed())
        }
        Command::Fit { csv, kind, table, format } => {
            let file = std::fs::File::open(&csv).map_err(|e| Error::Config(format!("{}: {e}", csv.display())))?;
            let recs = read_records(file)?;
            let kind = match kind {
                Kind::Exp => FitKind::Exponential,
                Kind::Power => FitKind::Power,
            };
            let fit = fit_convergence(&gap_points_from_records(&recs, table.as_deref()), kind)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&fit)?),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
                    w.write_record(["kind", "slope", "intercept", "r_squared", "points"])?;
                    w.write_record([
                        serde_json::to_value(fit.kind)?.as_str().unwrap_or_default().to_string(),
                        fit.slope.to_string(),
                        fit.intercept.to_string(),
                        fit.r_squared.to_string(),
                        fit.points.len().to_string(),
                    ])?;
                    w.flush().map_err(|e| Error::Config(e.to_string()))?;
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
