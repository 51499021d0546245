use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cfxl::harness::{
    bench_runtime, emit_cdf, reproduce, resolve_output, run_experiment, ExperimentConfig, HarnessError,
    ReproduceOptions, Scale,
};

#[derive(Parser)]
#[command(name = "cfxl", version, about = "Cell-free XL-MIMO uplink power control experiments")]
#[command(after_help = "Relative output paths are resolved against $CFXL_OUTPUT_ROOT when it is set.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train and evaluate one experiment config.
    Run { config: PathBuf },
    /// Empirical CDF of the sum_se column over one or more logs.
    Cdf {
        #[arg(required = true)]
        logs: Vec<PathBuf>,
        #[arg(long, default_value = "cdf.csv")]
        out: PathBuf,
    },
    /// Mean per-episode wall time of the learned methods under both combiners.
    Bench {
        config: PathBuf,
        /// Defaults to the config's output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every method and combiner, with CDFs, power traces and runtimes.
    Reproduce {
        #[arg(long)]
        scale: Scale,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2000)]
        episodes: usize,
        #[arg(long, default_value_t = 200)]
        eval_layouts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn execute(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run { config } => {
            let run = run_experiment(&config)?;
            println!("wrote {}", run.out_dir.display());
            if let Some(v) = run.summary.final_mean_sum_se {
                println!("final mean sum-SE {v:.4}");
            }
            if let Some(v) = run.summary.eval_mean_sum_se {
                println!("evaluation mean sum-SE {v:.4}");
            }
        }
        Command::Cdf { logs, out } => {
            let out = resolve_output(&out);
            let points = emit_cdf(&logs, &out)?;
            println!("wrote {} ({} points)", out.display(), points.len());
        }
        Command::Bench { config, out } => {
            let config = ExperimentConfig::load(&config)?;
            let out = resolve_output(out.as_ref().unwrap_or(&config.output_dir));
            for row in bench_runtime(&config, &out)? {
                println!("{:<8} {:<6} {:>10.3} ms/episode", row.method, row.combiner.name(), row.mean_wall_ms);
            }
        }
        Command::Reproduce { scale, out, episodes, eval_layouts, seed } => {
            let out = resolve_output(&out);
            let options = ReproduceOptions { scale, episodes, eval_layouts, seed };
            let runs = reproduce(&options, &out)?;
            println!("wrote {} runs under {}", runs.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
