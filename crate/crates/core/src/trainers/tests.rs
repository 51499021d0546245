use super::*;
use crate::env::NetworkConfig;
use crate::fuzzy::FuzzyConfig;
use crate::receivers::Combiner;
use crate::rl::Hyperparams;
use crate::seed::SeedSet;

fn small_hyper() -> Hyperparams {
    Hyperparams { batch_size: 8, buffer_capacity: 200, ..Hyperparams::default() }
}

fn short() -> TrainingConfig {
    TrainingConfig { steps_per_episode: 4, n_mc: 4, ..TrainingConfig::default() }
}

fn run(method: Method, cfg: &NetworkConfig, m: usize, episodes: usize, seed: u64) -> (TrainingLog, Box<dyn Policy>) {
    let seeds = SeedSet::from_master(seed);
    let hyper = small_hyper();
    let mut policy = build_policy(method, cfg, m, &hyper, &seeds).unwrap();
    let mut env = Environment::new(cfg.clone(), seeds.layout, seeds.channel).unwrap();
    let mut log = TrainingLog::new(method, cfg.num_ue);
    train(policy.as_mut(), &mut env, Combiner::Mr, &short(), &hyper, episodes, &mut log).unwrap();
    (log, policy)
}

#[test]
fn fixed_seed_gives_identical_logs_and_checkpoints() {
    let cfg = NetworkConfig::tiny();
    for method in Method::ALL {
        let (a, pa) = run(method, &cfg, 2, 6, 11);
        let (b, pb) = run(method, &cfg, 2, 6, 11);
        assert_eq!(a.episodes_csv(), b.episodes_csv(), "{method}");
        assert_eq!(pa.checkpoint().encode(), pb.checkpoint().encode(), "{method}");
    }
    let (a, _) = run(Method::FlCtce, &cfg, 2, 6, 11);
    let (c, _) = run(Method::FlCtce, &cfg, 2, 6, 12);
    assert_ne!(a.episodes_csv(), c.episodes_csv());
}

#[test]
fn learners_update_once_the_buffer_fills() {
    let (log, _) = run(Method::FlCtde, &NetworkConfig::tiny(), 2, 5, 3);
    // 4 steps per episode, batch 8: first update in episode 1
    assert!(log.records[0].critic_loss.is_none());
    assert!(log.records[2..].iter().all(|r| r.critic_loss.is_some()));
}

#[test]
fn zero_episodes_give_empty_log_and_initial_checkpoint() {
    let (log, policy) = run(Method::FlCtce, &NetworkConfig::tiny(), 2, 0, 1);
    assert!(log.is_empty());
    let ck = policy.checkpoint();
    assert!(ck.get("actor.0.0.weight").is_some());
    assert!(ck.get("critic.2.bias").is_some());
}

#[test]
fn single_fuzzy_agent_makes_ctde_and_ctce_coincide() {
    let cfg = NetworkConfig::tiny();
    let (ce, pce) = run(Method::FlCtce, &cfg, 1, 6, 5);
    let (de, pde) = run(Method::FlCtde, &cfg, 1, 6, 5);
    assert_eq!(ce.episodes_csv(), de.episodes_csv());
    assert_eq!(pce.checkpoint(), pde.checkpoint());
}

#[test]
fn maddpg_with_one_user_is_single_agent_ddpg() {
    let cfg = NetworkConfig::with_sizes(2, 1, (2, 2), (1, 1));
    let (_, p) = run(Method::Maddpg, &cfg, 1, 0, 1);
    let ck = p.checkpoint();
    assert!(ck.get("actor.1.0.weight").is_none());
    assert_eq!(ck.mlp("actor.0").unwrap().input_dim(), 2);
    assert_eq!(ck.mlp("critic").unwrap().input_dim(), 3);
}

#[test]
fn every_method_respects_the_power_cap() {
    let cfg = NetworkConfig::with_sizes(2, 3, (2, 2), (2, 1));
    for method in Method::ALL {
        let (log, _) = run(method, &cfg, 2, 4, 8);
        for r in &log.records {
            assert!(r.max_user_power <= cfg.p_max, "{method}: {}", r.max_user_power);
            assert!(r.power_watts <= cfg.num_ue as f64 * cfg.p_max);
        }
    }
}

#[test]
fn full_power_trace_is_constant() {
    let cfg = NetworkConfig::tiny();
    let (log, _) = run(Method::FullPower, &cfg, 2, 3, 2);
    for r in &log.records {
        assert!((r.power_watts - 2.0 * cfg.p_max).abs() < 1e-12);
    }
}

#[test]
fn random_power_averages_half_the_budget() {
    let cfg = NetworkConfig::tiny();
    let seeds = SeedSet::from_master(9);
    let hyper = small_hyper();
    let mut policy = build_policy(Method::RandomPower, &cfg, 1, &hyper, &seeds).unwrap();
    let mut env = Environment::new(cfg.clone(), seeds.layout, seeds.channel).unwrap();
    let mut log = TrainingLog::new(Method::RandomPower, 2);
    let training = TrainingConfig { steps_per_episode: 1, n_mc: 1, ..TrainingConfig::default() };
    train(policy.as_mut(), &mut env, Combiner::Mr, &training, &hyper, 2000, &mut log).unwrap();
    let mean = log.records.iter().map(|r| r.power_watts).sum::<f64>() / log.len() as f64;
    // std of the mean: P_max * sqrt(2/12) / sqrt(2000)
    assert!((mean - cfg.p_max).abs() < 4.0 * cfg.p_max * (2.0f64 / 12.0 / 2000.0).sqrt(), "{mean}");
}

#[test]
fn fuzzy_agent_actions_stay_in_the_convex_hull() {
    let cfg = NetworkConfig::with_sizes(2, 3, (2, 2), (1, 1));
    let seeds = SeedSet::from_master(4);
    let hyper = small_hyper();
    let fuzzy = FuzzyConfig { m: 3, d_s: 2, d_a: 1 };
    let mut policy = FlCtce::new(3, fuzzy, &hyper, &seeds).unwrap();
    let mut env = Environment::new(cfg.clone(), seeds.layout, seeds.channel).unwrap();
    let mut obs = env.observations();
    policy.begin_episode(&obs).unwrap();
    for step in 0..30 {
        let actions = policy.act(&obs, 0.3).unwrap();
        let fa = policy.last_fuzzy_actions();
        let lo = fa.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = fa.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for a in &actions {
            assert!(*a >= lo - 1e-12 && *a <= hi + 1e-12, "step {step}: {a} outside [{lo}, {hi}]");
        }
        let p = action_to_power(&actions, &cfg, policy.action_floor()).unwrap();
        let out = env.step(&p, Combiner::Mr, 2, RewardKind::SumSe).unwrap();
        policy.observe(&out.rewards, &out.next_observations).unwrap();
        obs = out.next_observations;
    }
}

#[test]
fn evaluation_is_deterministic_and_frozen() {
    let cfg = NetworkConfig::tiny();
    let (_, mut policy) = run(Method::FlCtce, &cfg, 2, 3, 6);
    let before = policy.checkpoint();
    let a = evaluate(policy.as_mut(), &cfg, Combiner::Lmmse, 5, 8, 77).unwrap();
    assert_eq!(policy.checkpoint(), before);
    let mut full = FullPower::new(2);
    let f1 = evaluate(&mut full, &cfg, Combiner::Lmmse, 5, 8, 77).unwrap();
    let f2 = evaluate(&mut full, &cfg, Combiner::Lmmse, 5, 8, 77).unwrap();
    assert_eq!(f1, f2);
    assert_eq!(a.records.len(), 5);
    assert!(a.csv().starts_with("layout,sum_se,se_ue0,se_ue1,power_watts\n"));
}
