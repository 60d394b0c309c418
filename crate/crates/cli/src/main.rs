use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use emq_cli::{converge, run_converge_to_file, run_verify, CliError, RunConfig, EXIT_FAIL, EXIT_PASS};

#[derive(Parser)]
#[command(name = "emq", version, about = "Checks for the quantized free electromagnetic field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write report.json and report.txt
    Verify(Common),
    /// Tabulate mode-sum convergence and write converge.csv
    Converge(Common),
}

#[derive(Args)]
struct Common {
    /// key = value configuration file, applied before the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite name or comma-separated list; repeatable
    #[arg(long)]
    suite: Vec<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Mode-sum cutoff; repeat to list converge cutoffs
    #[arg(long)]
    kmax: Vec<f64>,
    /// Extra key=value override; repeatable, applied last
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build_config(args: &Common, converging: bool) -> Result<RunConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if !args.suite.is_empty() {
        config.set("suite", &args.suite.join(","))?;
    }
    if let Some(out) = &args.out {
        config.out = out.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if converging {
        if !args.kmax.is_empty() {
            config.cutoffs = args.kmax.clone();
        }
    } else {
        match args.kmax.as_slice() {
            [] => {}
            [k] => config.k_max = Some(*k),
            _ => return Err(CliError::Config("verify takes at most one --kmax".into())),
        }
    }
    for item in &args.set {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got `{item}`")))?;
        config.set(key, value)?;
    }
    config.validate()?;
    Ok(config)
}

fn verify(args: &Common) -> Result<i32, CliError> {
    let config = build_config(args, false)?;
    let report = run_verify(&config)?;
    print!("{}", report.to_text());
    for (suite, check) in report.failures() {
        eprintln!("FAILED {suite}.{}: {} {:e} (bound {:e})", check.id, check.anchor, check.value, check.bound);
    }
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn run_converge(args: &Common) -> Result<i32, CliError> {
    let config = build_config(args, true)?;
    let (rows, checks) = run_converge_to_file(&config)?;
    print!("{}", converge::to_csv(&rows));
    let mut ok = true;
    for c in checks.iter().filter(|c| !c.passed) {
        ok = false;
        eprintln!("FAILED {}: {} {:e} (bound {:e})", c.id, c.anchor, c.value, c.bound);
    }
    Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Converge(args) => run_converge(args),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("emq: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
