use std::fmt::Write as _;
use std::path::Path;

use super::{write_file, ExperimentConfig, HarnessError};
use crate::receivers::Combiner;
use crate::seed::SeedSet;
use crate::trainers::{build_policy, train_episode, Environment, Method, Policy, TrainingLog};

#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeRow {
    pub method: Method,
    pub combiner: Combiner,
    pub episodes: usize,
    pub mean_wall_ms: f64,
}

pub fn runtime_csv(rows: &[RuntimeRow]) -> String {
    let mut out = String::from("method,combiner,episodes,mean_wall_ms\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:.6}", r.method, r.combiner.name(), r.episodes, r.mean_wall_ms);
    }
    out
}

/// Trains each learned method with each combiner on `base`'s network for
/// `base.episodes` episodes and writes `runtime.csv` plus each run's
/// `episodes.csv`, `timing.csv` and `config.json` under
/// `out/<method>_<combiner>/`.
///
/// For each combiner the three methods advance one episode at a time in
/// turn, so slow phases of the machine hit all of them alike. Each run
/// keeps its own state and seeds, so its log equals that of a standalone
/// `run` of the same config.
pub fn bench_runtime(base: &ExperimentConfig, out: &Path) -> Result<Vec<RuntimeRow>, HarnessError> {
    let mut rows = Vec::new();
    for combiner in Combiner::ALL {
        let mut runs: Vec<(ExperimentConfig, Box<dyn Policy>, Environment, TrainingLog)> = Vec::new();
        for method in Method::LEARNED {
            let mut config = base.clone();
            config.method = method;
            config.combiner = combiner;
            config.evaluation.layouts = 0;
            config.output_dir = out.join(format!("{}_{}", method, combiner.name()));
            config.validate()?;
            let seeds = SeedSet::from_master(config.seed);
            let train_err = |source| HarnessError::Train { completed: 0, source };
            let policy = build_policy(method, &config.network, config.fuzzy.m, &config.hyper, &seeds).map_err(train_err)?;
            let env = Environment::new(config.network.clone(), seeds.layout, seeds.channel).map_err(train_err)?;
            let log = TrainingLog::new(method, config.network.num_ue);
            runs.push((config, policy, env, log));
        }
        let mut failure = None;
        'episodes: for episode in 0..base.episodes {
            for (config, policy, env, log) in &mut runs {
                let noise = config.hyper.noise_scale(episode, config.episodes);
                match train_episode(policy.as_mut(), env, combiner, &config.training, noise, episode) {
                    Ok(record) => log.records.push(record),
                    Err(source) => {
                        failure = Some(HarnessError::Train { completed: log.len(), source });
                        break 'episodes;
                    }
                }
            }
        }
        for (config, _, _, log) in &runs {
            write_file(&config.output_dir.join("episodes.csv"), &log.episodes_csv())?;
            write_file(&config.output_dir.join("timing.csv"), &log.timing_csv())?;
            write_file(&config.output_dir.join("config.json"), &config.to_json())?;
            rows.push(RuntimeRow {
                method: config.method,
                combiner,
                episodes: log.len(),
                mean_wall_ms: log.mean_wall_ms().unwrap_or(0.0),
            });
        }
        if let Some(e) = failure {
            return Err(e);
        }
    }
    write_file(&out.join("runtime.csv"), &runtime_csv(&rows))?;
    Ok(rows)
}
