use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{emit_cdf, runtime_csv, run_config, write_file, ExperimentConfig, HarnessError, RunOutcome, RuntimeRow};
use crate::env::NetworkConfig;
use crate::receivers::Combiner;
use crate::trainers::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Desk,
    Paper,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            other => Err(format!("unknown scale `{other}` (expected desk or paper)")),
        }
    }
}

impl Scale {
    pub fn network(self) -> NetworkConfig {
        match self {
            Scale::Desk => NetworkConfig::desk_scale(),
            Scale::Paper => NetworkConfig::paper_scale(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceOptions {
    pub scale: Scale,
    pub episodes: usize,
    pub eval_layouts: usize,
    pub seed: u64,
}

impl ReproduceOptions {
    pub fn new(scale: Scale) -> Self {
        Self { scale, episodes: 2000, eval_layouts: 200, seed: 1 }
    }
}

fn power_traces_csv(runs: &[&RunOutcome]) -> String {
    let mut out = String::from("episode");
    for r in runs {
        let _ = write!(out, ",{}", r.summary.method);
    }
    out.push('\n');
    let n = runs.iter().map(|r| r.log.len()).min().unwrap_or(0);
    for e in 0..n {
        let _ = write!(out, "{e}");
        for r in runs {
            let _ = write!(out, ",{:e}", r.log.records[e].power_watts);
        }
        out.push('\n');
    }
    out
}

/// Runs every method with every combiner and writes, under `out`:
/// `runs/<method>_<combiner>/` (the per-run artifacts),
/// `cdf/<method>_<combiner>.csv` (evaluation sum-SE CDFs),
/// `power_traces_<combiner>.csv` (per-episode total power of each method)
/// and `runtime.csv` (mean training wall time of the learned methods).
pub fn reproduce(options: &ReproduceOptions, out: &Path) -> Result<Vec<RunOutcome>, HarnessError> {
    let mut runs = Vec::new();
    let mut runtime = Vec::new();
    for combiner in Combiner::ALL {
        for method in Method::ALL {
            let mut config = ExperimentConfig::new(options.scale.network(), method, combiner, options.episodes, options.seed);
            config.evaluation.layouts = options.eval_layouts;
            let tag = format!("{}_{}", method, combiner.name());
            config.output_dir = out.join("runs").join(&tag);
            let run = run_config(&config, &config.output_dir)?;
            if run.eval.is_some() {
                emit_cdf(&[run.out_dir.join("eval.csv")], &out.join("cdf").join(format!("{tag}.csv")))?;
            }
            if method.is_learned() {
                runtime.push(RuntimeRow {
                    method,
                    combiner,
                    episodes: run.log.len(),
                    mean_wall_ms: run.log.mean_wall_ms().unwrap_or(0.0),
                });
            }
            runs.push(run);
        }
        let these: Vec<&RunOutcome> = runs.iter().filter(|r| r.summary.combiner == combiner).collect();
        write_file(&out.join(format!("power_traces_{}.csv", combiner.name())), &power_traces_csv(&these))?;
    }
    write_file(&out.join("runtime.csv"), &runtime_csv(&runtime))?;
    Ok(runs)
}
