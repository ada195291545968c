use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gme_core::criteria::{detect, CriterionParams};

use gme_cli::format::to_json_pretty;
use gme_cli::reproduce::{reproduce, Example};
use gme_cli::scan::{to_csv, to_json};
use gme_cli::{critical, find_critical, run_scan, CliError, Family, FamilyKind, FamilySpec, OutputFormat, Result, ScanGrid, Target};

/// Genuine multipartite entanglement detection with correlation-tensor trace-norm criteria.
#[derive(Parser)]
#[command(name = "gme", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every criterion on one state and print the report as JSON.
    Detect {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Visibility; defaults to 1 (the state itself).
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sweep the visibility over a uniform grid.
    Scan {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        #[arg(long, default_value_t = 1.0)]
        x_max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Bisect for the smallest visibility at which a verdict fires.
    Critical {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// gme-K, gme-J, or a bipartition such as 1|234.
        #[arg(long, default_value = "gme-K")]
        target: String,
        #[arg(long, default_value_t = critical::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recompute a worked example (table1, example2-bisep, example2-gme, all).
    Reproduce {
        #[arg(default_value = "all")]
        example: String,
    },
}

#[derive(Args)]
struct StateArgs {
    /// w-noise, ghz-noise, random or file.
    #[arg(long)]
    family: Option<String>,
    /// JSON density-matrix file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Seed for the random family.
    #[arg(long)]
    seed: Option<u64>,
}

impl StateArgs {
    fn family(&self) -> Result<Family> {
        let spec = FamilySpec {
            family: self.family.as_deref().map(str::parse::<FamilyKind>).transpose()?,
            input: self.input.clone(),
            n: self.n,
            d: self.d,
            seed: self.seed,
        };
        Family::resolve(&spec)
    }
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    beta: f64,
    /// Also apply the threshold for permutation-invariant states.
    #[arg(long)]
    use_pi: bool,
}

impl ParamArgs {
    fn params(&self) -> Result<CriterionParams> {
        Ok(CriterionParams::new(self.alpha, self.beta)?)
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Detect { state, params, x, output } => {
            let family = state.family()?;
            let rho = match x {
                Some(x) => family.state_at(x)?,
                None => family.base.clone(),
            };
            let report = detect(&rho, &params.params()?, params.use_pi)?;
            emit(output.as_ref(), &(to_json_pretty(&report) + "\n"))
        }
        Command::Scan { state, params, x_min, x_max, steps, format, output } => {
            let family = state.family()?;
            let grid = ScanGrid::new(x_min, x_max, steps)?;
            let format: OutputFormat = format.parse()?;
            let p = params.params()?;
            let rows = run_scan(&family, &p, &grid, params.use_pi)?;
            let text = match format {
                OutputFormat::Csv => to_csv(&rows),
                OutputFormat::Json => to_json(&family, &p, &rows) + "\n",
            };
            emit(output.as_ref(), &text)
        }
        Command::Critical { state, params, target, tol, output } => {
            let family = state.family()?;
            let target: Target = target.parse()?;
            let result = find_critical(&family, &target, &params.params()?, tol)?;
            emit(output.as_ref(), &(to_json_pretty(&result) + "\n"))
        }
        Command::Reproduce { example } => {
            let examples = if example == "all" { Example::ALL.to_vec() } else { vec![example.parse()?] };
            let mut failed = Vec::new();
            for ex in examples {
                let cmp = reproduce(ex)?;
                println!("{}", cmp.render());
                if !cmp.passed() {
                    failed.push(ex.to_string());
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Mismatch(failed.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
