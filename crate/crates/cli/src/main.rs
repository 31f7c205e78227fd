use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hcl_core::report::{render_text, to_json};
use hcl_core::suite::{parse_checks, parse_families, parse_seed, run_suite, write_report, SuiteConfig};
use hcl_core::Error;

/// Runs the verification suite and reports one line per check.
///
/// Settings are layered: built-in defaults, then the config file, then
/// `HCL_SEED`, then command-line flags.
#[derive(Debug, Parser)]
#[command(name = "hcl", version)]
struct Args {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Families such as `su:3,2 sp:3 so:5,2 sostar:4`.
    #[arg(long, num_args = 1..)]
    families: Option<Vec<String>>,

    #[arg(long)]
    samples: Option<String>,

    #[arg(long)]
    seed: Option<String>,

    #[arg(long)]
    tol: Option<String>,

    /// Comma-separated subset of curvature,trace,youla,levi,reps,higgs.
    #[arg(long)]
    checks: Option<String>,

    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<String>,

    /// Print the JSON report on stdout instead of the text summary.
    #[arg(long)]
    json: bool,
}

fn build_config(args: &Args) -> hcl_core::Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::ConfigParse(format!("{}: {e}", path.display())))?;
        cfg = cfg.apply_text(&text)?;
    }
    if let Ok(s) = std::env::var("HCL_SEED") {
        cfg.seed = parse_seed(&s).map_err(|e| Error::ConfigParse(format!("HCL_SEED: {e}")))?;
    }
    if let Some(f) = &args.families {
        cfg.families = parse_families(&f.join(" "))?;
    }
    if let Some(s) = &args.samples {
        cfg.set("samples", s)?;
    }
    if let Some(s) = &args.seed {
        cfg.set("seed", s)?;
    }
    if let Some(t) = &args.tol {
        cfg.set("tol", t)?;
    }
    if let Some(c) = &args.checks {
        cfg.checks = parse_checks(c)?;
    }
    if let Some(o) = &args.out {
        cfg.output_path = Some(o.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match build_config(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("hcl: {e}");
            return ExitCode::from(2);
        }
    };
    let reports = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hcl: {e}");
            return ExitCode::from(2);
        }
    };
    if args.json {
        print!("{}", to_json(&reports));
    } else {
        print!("{}", render_text(&reports));
    }
    if let Some(path) = &cfg.output_path {
        if let Err(e) = write_report(path, &reports) {
            eprintln!("hcl: {e}");
            return ExitCode::from(2);
        }
    }
    if reports.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
