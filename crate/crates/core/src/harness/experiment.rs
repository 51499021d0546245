use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{write_file, ExperimentConfig, HarnessError};
use crate::receivers::Combiner;
use crate::seed::SeedSet;
use crate::trainers::{build_policy, evaluate, train, Environment, EvalLog, Method, TrainingLog};

/// Episodes averaged for the "final" training metric.
pub const FINAL_WINDOW: usize = 100;

/// Contents of `summary.json`. Everything here is deterministic given the
/// config; wall times live in `timing.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub method: Method,
    pub combiner: Combiner,
    pub seed: u64,
    pub episodes: usize,
    pub final_window: usize,
    pub final_mean_sum_se: Option<f64>,
    pub mean_power_watts: Option<f64>,
    pub eval_layouts: usize,
    pub eval_mean_sum_se: Option<f64>,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub log: TrainingLog,
    pub eval: Option<EvalLog>,
    pub summary: Summary,
}

/// Loads the config at `path` and runs it into its (resolved) output directory.
pub fn run_experiment(path: &Path) -> Result<RunOutcome, HarnessError> {
    let config = ExperimentConfig::load(path)?;
    let out = config.resolved_output_dir();
    run_config(&config, &out)
}

fn write_logs(out: &Path, log: &TrainingLog) -> Result<(), HarnessError> {
    write_file(&out.join("episodes.csv"), &log.episodes_csv())?;
    write_file(&out.join("timing.csv"), &log.timing_csv())
}

/// Trains, evaluates and writes `episodes.csv`, `timing.csv`, `eval.csv`,
/// `checkpoint.txt`, `config.json` and `summary.json` under `out`. If
/// training fails part-way the completed episodes are still written.
pub fn run_config(config: &ExperimentConfig, out: &Path) -> Result<RunOutcome, HarnessError> {
    config.validate()?;
    let seeds = SeedSet::from_master(config.seed);
    let train_err = |completed| move |source| HarnessError::Train { completed, source };
    let mut policy =
        build_policy(config.method, &config.network, config.fuzzy.m, &config.hyper, &seeds).map_err(train_err(0))?;
    let mut env = Environment::new(config.network.clone(), seeds.layout, seeds.channel).map_err(train_err(0))?;
    let mut log = TrainingLog::new(config.method, config.network.num_ue);
    let result = train(policy.as_mut(), &mut env, config.combiner, &config.training, &config.hyper, config.episodes, &mut log);
    write_logs(out, &log)?;
    result.map_err(train_err(log.len()))?;

    let eval = if config.evaluation.layouts > 0 {
        let eval = evaluate(
            policy.as_mut(),
            &config.network,
            config.combiner,
            config.evaluation.layouts,
            config.evaluation.n_mc,
            seeds.evaluation,
        )
        .map_err(train_err(log.len()))?;
        write_file(&out.join("eval.csv"), &eval.csv())?;
        Some(eval)
    } else {
        None
    };
    policy.checkpoint().save(&out.join("checkpoint.txt")).map_err(super::io_err(&out.join("checkpoint.txt")))?;

    let summary = Summary {
        method: config.method,
        combiner: config.combiner,
        seed: config.seed,
        episodes: log.len(),
        final_window: FINAL_WINDOW,
        final_mean_sum_se: log.final_mean_sum_se(FINAL_WINDOW),
        mean_power_watts: (!log.is_empty())
            .then(|| log.records.iter().map(|r| r.power_watts).sum::<f64>() / log.len() as f64),
        eval_layouts: eval.as_ref().map_or(0, |e| e.records.len()),
        eval_mean_sum_se: eval.as_ref().and_then(EvalLog::mean_sum_se),
        config: config.clone(),
    };
    write_file(&out.join("config.json"), &config.to_json())?;
    write_file(&out.join("summary.json"), &serde_json::to_string_pretty(&summary).expect("summary serializes"))?;
    Ok(RunOutcome { out_dir: out.to_path_buf(), log, eval, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::NetworkConfig;

    fn quick(method: Method) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(NetworkConfig::tiny(), method, Combiner::Mr, 2, 3);
        c.training.steps_per_episode = 3;
        c.training.n_mc = 2;
        c.evaluation.layouts = 3;
        c.evaluation.n_mc = 2;
        c.hyper.batch_size = 4;
        c
    }

    #[test]
    fn writes_every_artifact() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_config(&quick(Method::FlCtde), dir.path()).unwrap();
        for f in ["episodes.csv", "timing.csv", "eval.csv", "checkpoint.txt", "config.json", "summary.json"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        assert_eq!(out.log.len(), 2);
        let summary: Summary =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary, out.summary);
        assert_eq!(summary.config, quick(Method::FlCtde));
    }

    #[test]
    fn echoed_config_reproduces_the_log() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        run_config(&quick(Method::FlCtce), a.path()).unwrap();
        let echoed = ExperimentConfig::load(&a.path().join("config.json")).unwrap();
        run_config(&echoed, b.path()).unwrap();
        for f in ["episodes.csv", "eval.csv", "checkpoint.txt", "summary.json"] {
            assert_eq!(
                std::fs::read(a.path().join(f)).unwrap(),
                std::fs::read(b.path().join(f)).unwrap(),
                "{f}"
            );
        }
    }
}
