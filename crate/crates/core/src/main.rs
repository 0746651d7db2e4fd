use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use strata_kit::cli::{execute, parse_input, parse_point, Command, ErrorReport, JobSpec, Report, VERSION};
use strata_kit::exact::parse_rational;
use strata_kit::Error;

/// Exact slopes and fundamental strata of formal flat G-bundles.
#[derive(Parser, Debug)]
#[command(name = "strata-kit", version)]
struct Cli {
    command: Command,
    /// Job file (JSON).
    file: PathBuf,
    /// Print the machine-readable report instead of the summary.
    #[arg(long)]
    json: bool,
    /// Cover degree for `pullback`.
    #[arg(long)]
    e: Option<u32>,
    /// Apartment point `a1,a2,...`; give twice for `associates`.
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    /// Stratum depth `p/q`.
    #[arg(long)]
    depth: Option<String>,
    /// Horizon of the boundedness trace.
    #[arg(long)]
    horizon: Option<usize>,
    /// Denominator of the depth-map grid.
    #[arg(long)]
    grid_denom: Option<u32>,
    /// Seed for the random cyclic-vector candidates.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(cli: &Cli) -> Result<JobSpec, Error> {
    let text = std::fs::read_to_string(&cli.file)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", cli.file.display())))?;
    let mut job = parse_input(&text)?;
    let p = &mut job.params;
    if cli.point.len() > 2 {
        return Err(Error::InvalidArgument("--point given more than twice".into()));
    }
    if let Some(x) = cli.point.first() {
        p.point = Some(parse_point(x)?);
    }
    if let Some(y) = cli.point.get(1) {
        p.other_point = Some(parse_point(y)?);
    }
    if let Some(d) = &cli.depth {
        p.depth = Some(parse_rational(d)?);
    }
    p.e = cli.e.or(p.e);
    p.horizon = cli.horizon.or(p.horizon);
    p.grid_denom = cli.grid_denom.or(p.grid_denom);
    p.seed = cli.seed.or(p.seed);
    Ok(job)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match load(&cli) {
        Ok(job) => execute(cli.command, &job),
        Err(e) => Report {
            version: VERSION.to_string(),
            command: cli.command.to_string(),
            job: serde_json::Value::Null,
            result: None,
            error: Some(ErrorReport::from(&e)),
            elapsed_us: 0,
        },
    };
    if cli.json {
        println!("{}", report.to_json());
    } else if let Some(e) = report.error.as_ref().filter(|_| report.job.is_null()) {
        eprintln!("error [{}]: {}", e.code, e.message);
    } else {
        print!("{}", report.summary());
    }
    if report.is_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
