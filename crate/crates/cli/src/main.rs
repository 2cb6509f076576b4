use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pbcheck::{config::SuiteConfig, exit_status, output, run_suite};

/// Run the pseudo-boson check suite and write reports.
#[derive(Parser, Debug)]
#[command(name = "pbcheck", version)]
struct Args {
    /// TOML suite description; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated check names.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Comma-separated model kinds to keep.
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    /// Multiply every tolerance by this factor.
    #[arg(long)]
    tolerance_scale: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Upper bound on every truncation order.
    #[arg(long)]
    nmax: Option<usize>,
    /// Do not print the summary table.
    #[arg(long, short)]
    quiet: bool,
}

fn load(args: &Args) -> Result<SuiteConfig, pbcheck::ConfigError> {
    let mut cfg = match &args.config {
        Some(p) => SuiteConfig::load(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    if let Some(c) = &args.checks {
        cfg.checks = Some(c.clone());
    }
    if let Some(m) = &args.models {
        cfg.restrict_models(m)?;
    }
    if let Some(s) = args.tolerance_scale {
        cfg.tolerance_scale = s;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.nmax {
        cfg.caps.clamp(n);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("pbcheck: {e}");
            return ExitCode::from(2);
        }
    };
    let cells = match run_suite(&cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("pbcheck: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = output::write_all(&cfg.out, &cells, cfg.format, cfg.csv) {
        eprintln!("pbcheck: writing reports: {e:#}");
        return ExitCode::from(2);
    }
    if !args.quiet {
        print!("{}", output::summary(&cells));
    }
    ExitCode::from(exit_status(&cells) as u8)
}
