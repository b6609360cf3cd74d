use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hawkcast::decomposition::Method;
use hawkcast_cli::commands::{self, BenchmarkArgs, DecomposeArgs, EvaluateArgs, ForecastArgs};
use hawkcast_cli::ingest::ColumnSelector;
use hawkcast_cli::CliResult;

/// Decomposition-ensemble forecasting with multi-objective Harris hawks tuning.
#[derive(Parser)]
#[command(name = "hawkcast", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// CSV file with a header row.
    #[arg(long, short)]
    input: PathBuf,
    /// Column holding ISO dates (YYYY-MM-DD).
    #[arg(long)]
    date_column: Option<String>,
    /// Column holding the series; defaults to the first numeric non-date column.
    #[arg(long)]
    value_column: Option<String>,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
}

impl Input {
    fn selector(&self) -> ColumnSelector {
        ColumnSelector {
            date_column: self.date_column.clone(),
            value_column: self.value_column.clone(),
            delimiter: self.delimiter,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit the pipeline and score one-step forecasts on the test span.
    Forecast {
        #[command(flatten)]
        input: Input,
        #[arg(long, short)]
        config: Option<PathBuf>,
        #[arg(long, short, default_value = "out")]
        output: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Also run plain ELM and the EMD, CEEMD and ICEEMDAN variants.
        #[arg(long)]
        compare: bool,
    },
    /// Run MOHHO on the ZDT problems and report IGD statistics.
    Benchmark {
        #[arg(long, short)]
        config: Option<PathBuf>,
        #[arg(long, short, default_value = "benchmark")]
        output: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        population: Option<usize>,
        #[arg(long)]
        archive: Option<usize>,
    },
    /// Decompose a series and write its modes.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long, short)]
        config: Option<PathBuf>,
        #[arg(long, short, default_value = "modes")]
        output: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// emd, eemd, ceemd, ceemdan or iceemdan.
        #[arg(long, value_parser = parse_method)]
        method: Option<Method>,
    },
    /// Score a prediction column against an actual column.
    Evaluate {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, default_value = "actual")]
        actual_column: String,
        #[arg(long, default_value = "predicted")]
        predicted_column: String,
        #[arg(long, default_value = ",", value_parser = parse_delimiter)]
        delimiter: u8,
        #[arg(long, short, default_value = "evaluation")]
        output: PathBuf,
    },
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "\\t" | "tab" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be a single ASCII character, got `{s}`")),
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: hawkcast::Error| e.to_string())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Forecast { input, config, output, seed, compare } => {
            let args = ForecastArgs { config, input: input.input.clone(), selector: input.selector(), output, seed, compare };
            let runs = commands::forecast(&args)?;
            let rows: Vec<_> = runs.iter().map(|r| (r.model_name.clone(), r.metrics)).collect();
            print!("{}", commands::render_metrics(&rows));
            println!("wrote {}", args.output.display());
        }
        Command::Benchmark { config, output, seed, runs, iters, population, archive } => {
            let args = BenchmarkArgs { config, output, seed, runs, iterations: iters, population, archive };
            for c in commands::benchmark(&args)? {
                let s = c.stats;
                println!("{:<12} mean IGD {:.6}  std {:.6}  best {:.6}  worst {:.6}", c.problem.name(), s.mean, s.std, s.best, s.worst);
            }
            println!("wrote {}", args.output.display());
        }
        Command::Decompose { input, config, output, seed, method } => {
            let args = DecomposeArgs { config, input: input.input.clone(), selector: input.selector(), output, seed, method };
            commands::decompose(&args)?;
            println!("wrote {}", args.output.display());
        }
        Command::Evaluate { input, actual_column, predicted_column, delimiter, output } => {
            let args = EvaluateArgs { input, actual_column, predicted_column, delimiter, output };
            let (m, vr) = commands::evaluate(&args)?;
            print!("{}", commands::render_metrics(&[(args.predicted_column.clone(), m)]));
            println!("VR {vr:.6}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hawkcast: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
