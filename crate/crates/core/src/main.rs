use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ringshaper::scenario::{emit_run, emit_sweep, run_scenario, sweep, verify_phase, Design, ScenarioConfig, SweepSection};
use ringshaper::{Error, Result};

/// Relative tolerance for `verify`.
const VERIFY_TOLERANCE: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "ringshaper", version, about = "Phase design for on-axis intensity shaping of ring beams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one design and write tables plus a manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "ringshaper-out")]
        out: PathBuf,
    },
    /// Run a parameter sweep; values override the [sweep] section.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        param: Option<String>,
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long, default_value = "ringshaper-out")]
        out: PathBuf,
    },
    /// Print the lower-bound report as JSON without solving.
    Bounds {
        #[arg(long)]
        config: PathBuf,
    },
    /// Recompute the error functional from a stored phase table.
    Verify {
        #[arg(long)]
        phase: PathBuf,
        /// Defaults to the config.toml stored next to the phase table.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("RINGSHAPER_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::config(format!("RINGSHAPER_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::config(e.to_string()))?;
    }
    Ok(())
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn execute(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Run { config, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let result = run_scenario(&cfg)?;
            let manifest = emit_run(&result, &out)?;
            let s = &result.summary;
            println!("kind            {}", cfg.kind.name());
            println!("I stationary    {:.6e} (normalized {:.4})", s.i_stationary, s.i_stationary_normalized);
            println!("I GS            {:.6e} (normalized {:.4})", s.i_gs, s.i_gs_normalized);
            println!("lower bound     {:.6e}", result.bounds.master_lower);
            println!("beta            {:.4}", result.bounds.beta);
            if s.bound_dominated {
                println!("regime          bound-dominated (beta < pi)");
            }
            println!("manifest        {} ({})", out.join("manifest.json").display(), manifest.hash);
        }
        Command::Sweep { config, param, values, out } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            match (param, values) {
                (Some(param), Some(values)) => cfg.sweep = Some(SweepSection { param, values }),
                (None, None) => {}
                _ => return Err(Error::config("--param and --values go together")),
            }
            let result = sweep(&cfg)?;
            let manifest = emit_sweep(&result, &out)?;
            println!("{:>12} {:>14} {:>14} {:>12} {:>12}", result.param, "I_stationary", "I_gs", "I_gs/|G|", "lower");
            for r in result.rows() {
                println!(
                    "{:>12} {:>14.6e} {:>14.6e} {:>12.4} {:>12.4e}",
                    r.value, r.i_stationary, r.i_gs, r.i_gs_normalized, r.master_lower
                );
            }
            println!("manifest {} ({})", out.join("manifest.json").display(), manifest.hash);
        }
        Command::Bounds { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            print_json(&Design::new(&cfg)?.bounds()?);
        }
        Command::Verify { phase, config } => {
            let cfg = config.as_deref().map(ScenarioConfig::load).transpose()?;
            let v = verify_phase(Path::new(&phase), cfg.as_ref())?;
            println!("stored      {:.17e}", v.stored);
            println!("recomputed  {:.17e}", v.recomputed);
            println!("relative    {:.3e}", v.relative_error);
            if !v.passes(VERIFY_TOLERANCE) {
                return Err(Error::Resolution(format!(
                    "recomputed error differs from the stored value by {:.3e} (tolerance {VERIFY_TOLERANCE:.0e})",
                    v.relative_error
                )));
            }
            println!("ok");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ringshaper: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
