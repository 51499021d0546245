use std::fmt::Write as _;

use super::Method;

/// Per-episode averages over the episode's steps.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub episode: usize,
    pub sum_se: f64,
    pub ue_se: Vec<f64>,
    /// Total transmit power `sum_k N_s p_k`, averaged over steps.
    pub power_watts: f64,
    /// Largest per-user total power `N_s p_k` seen in the episode.
    pub max_user_power: f64,
    pub critic_loss: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingLog {
    pub method: Method,
    pub num_ue: usize,
    pub records: Vec<EpisodeRecord>,
}

fn se_header(prefix: &str, num_ue: usize) -> String {
    let mut h = prefix.to_string();
    for k in 0..num_ue {
        let _ = write!(h, ",se_ue{k}");
    }
    h
}

impl TrainingLog {
    pub fn new(method: Method, num_ue: usize) -> Self {
        Self { method, num_ue, records: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Mean sum-SE over the last `n` episodes (all of them if fewer).
    pub fn final_mean_sum_se(&self, n: usize) -> Option<f64> {
        let tail = &self.records[self.records.len().saturating_sub(n)..];
        (!tail.is_empty()).then(|| tail.iter().map(|r| r.sum_se).sum::<f64>() / tail.len() as f64)
    }

    pub fn mean_wall_ms(&self) -> Option<f64> {
        (!self.is_empty()).then(|| self.records.iter().map(|r| r.wall_ms).sum::<f64>() / self.len() as f64)
    }

    /// Deterministic per-episode metrics. Wall time is kept out of this
    /// file so that identical runs produce identical bytes.
    pub fn episodes_csv(&self) -> String {
        let mut out = se_header("episode,sum_se", self.num_ue);
        out.push_str(",power_watts,max_user_power,critic_loss\n");
        for r in &self.records {
            let _ = write!(out, "{},{:e}", r.episode, r.sum_se);
            for se in &r.ue_se {
                let _ = write!(out, ",{se:e}");
            }
            let loss = r.critic_loss.map_or(String::new(), |l| format!("{l:e}"));
            let _ = writeln!(out, ",{:e},{:e},{loss}", r.power_watts, r.max_user_power);
        }
        out
    }

    pub fn timing_csv(&self) -> String {
        let mut out = String::from("episode,wall_ms\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{:.6}", r.episode, r.wall_ms);
        }
        out
    }
}

/// One frozen-policy evaluation layout.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub layout: usize,
    pub sum_se: f64,
    pub ue_se: Vec<f64>,
    pub power_watts: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalLog {
    pub method: Method,
    pub num_ue: usize,
    pub records: Vec<EvalRecord>,
}

impl EvalLog {
    pub fn new(method: Method, num_ue: usize) -> Self {
        Self { method, num_ue, records: Vec::new() }
    }

    pub fn mean_sum_se(&self) -> Option<f64> {
        (!self.records.is_empty())
            .then(|| self.records.iter().map(|r| r.sum_se).sum::<f64>() / self.records.len() as f64)
    }

    pub fn csv(&self) -> String {
        let mut out = se_header("layout,sum_se", self.num_ue);
        out.push_str(",power_watts\n");
        for r in &self.records {
            let _ = write!(out, "{},{:e}", r.layout, r.sum_se);
            for se in &r.ue_se {
                let _ = write!(out, ",{se:e}");
            }
            let _ = writeln!(out, ",{:e}", r.power_watts);
        }
        out
    }
}
