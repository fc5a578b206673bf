use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fdsl::cli::{self, Emit, Overrides};

/// Eigenpairs of a Sturm-Liouville problem with a point interaction by the functional-discrete method.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// TOML configuration; the built-in reference problem is used when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Eigenpair indices, e.g. `1,2,5` or `1-10`.
    #[arg(long, value_parser = parse_list)]
    n: Option<Indices>,
    #[arg(long)]
    rank: Option<usize>,
    /// Decimal digits of working precision.
    #[arg(long)]
    precision: Option<u32>,
    /// Fixed number of sinc nodes per side; skips the parameter search.
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    /// Target accuracy of the parameter search.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, value_enum)]
    emit: Vec<Emit>,
    /// Cross-check every eigenvalue with the shooting solver.
    #[arg(long)]
    oracle_check: bool,
    #[arg(long, default_value = "fdsl-out")]
    out: PathBuf,
}

#[derive(Clone, Debug)]
struct Indices(Vec<u32>);

fn parse_list(text: &str) -> Result<Indices, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (a.parse().map_err(|_| format!("bad index `{a}`"))?, b.parse().map_err(|_| format!("bad index `{b}`"))?);
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| format!("bad index `{part}`"))?),
        }
    }
    Ok(Indices(out))
}

const REFERENCE_TOML: &str = include_str!("../../examples/reference.toml");

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let overrides = Overrides {
        n_list: args.n.map(|i| i.0),
        rank: args.rank,
        precision: args.precision,
        k: args.k,
        d: args.d,
        mu: args.mu,
        epsilon: args.epsilon,
        emit: args.emit,
        oracle_check: args.oracle_check,
    };
    let config = match &args.config {
        Some(path) => cli::load_config(path, &overrides),
        None => cli::config_from_str(REFERENCE_TOML, &overrides),
    };
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = cli::run(&config, &args.out);
    let report = match &result {
        Ok(r) => r.clone(),
        Err(_) => match cli::read_report(&args.out.join("report.json")) {
            Ok(r) => r,
            Err(_) => cli::Report { precision: config.precision, rank: config.rank, epsilon: config.epsilon.clone(), eigenpairs: Vec::new(), failure: None },
        },
    };
    if config.emit.contains(&Emit::Table) {
        print!("{}", cli::render_table(&report));
    }
    if config.emit.contains(&Emit::Analysis) {
        print!("\n{}", cli::render_analysis(&report));
    }
    if config.emit.contains(&Emit::Slopes) {
        print!("\n{}", cli::render_slopes(&report));
    }
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
