use proptest::prelude::*;

use super::*;
use crate::conditions::{ConditionSettings, Verdict};
use crate::config::{default_checkpoints, DEFAULT_MASTER_SEED};
use crate::dist::BaseDist;
use crate::generators::{XModel, XVariant, YModel, YVariant};
use crate::schedule::ScheduleRule;

fn config(
    x: XModel,
    y: YModel,
    schedule: ScheduleRule,
    mode: Mode,
    n: u64,
    m: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        x_model: x,
        y_model: y,
        schedule,
        positions_file: None,
        conditions: ConditionSettings {
            n_probe: 100,
            envelope_n_max: 100,
            ..Default::default()
        },
        mode,
        horizon: n,
        replicas: m,
        checkpoints: default_checkpoints(n),
        master_seed: DEFAULT_MASTER_SEED,
        quantile: 0.9,
        decay_factor: 2.0,
        budget: None,
    }
}

fn normal_x() -> XModel {
    XModel::iid(BaseDist::Normal { sigma: 1.0 }).unwrap()
}

fn pareto_y(variant: YVariant) -> YModel {
    YModel::new(variant, 0.5, 0.0).unwrap()
}

#[test]
fn tail_sup_examples() {
    assert_eq!(tail_sup_statistic(&[-0.5, 0.5, -0.5]), vec![0.5; 3]);
    assert_eq!(
        tail_sup_statistic(&[0.1, 0.01, 0.001]),
        vec![0.1, 0.01, 0.001]
    );
    assert_eq!(tail_sup_statistic(&[0.1, 0.01, 7.0]), vec![7.0; 3]);
}

proptest! {
    #[test]
    fn tail_sup_is_nonincreasing_envelope(v in prop::collection::vec(-1e6f64..1e6, 1..50)) {
        let t = tail_sup_statistic(&v);
        for w in t.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        for (a, b) in t.iter().zip(&v) {
            prop_assert!(*a >= b.abs());
        }
        prop_assert_eq!(*t.last().unwrap(), v.last().unwrap().abs());
    }
}

#[test]
fn zero_sources_converge() {
    let x = XModel::new(XVariant::Zero, 1).unwrap();
    let y = pareto_y(YVariant::Zero);
    let c = config(
        x,
        y,
        ScheduleRule::Power { rho: 0.5, c: 1.0 },
        Mode::Theorem,
        1000,
        4,
    );
    let r = run_experiment_with_budget(&c, u64::MAX).unwrap();
    assert!(r.marginal.iter().chain(&r.tail_sup).all(|q| q.q99 == 0.0));
    assert_eq!(r.verdict, ConvergenceVerdict::Converging);
}

#[test]
fn kolmogorov_quantile_small() {
    let n = 10_000;
    let c = config(
        normal_x(),
        pareto_y(YVariant::Zero),
        ScheduleRule::AllZeros,
        Mode::XOnly,
        n,
        400,
    );
    let r = run_experiment_with_budget(&c, u64::MAX).unwrap();
    let oracle = 1.644_853_626_951_472_2 / (n as f64).sqrt();
    let got = r.marginal.last().unwrap().q90;
    assert!(
        got / oracle < 1.3 && oracle / got < 1.3,
        "{got} vs {oracle}"
    );
    assert_eq!(r.s_over_n.len(), 400);
}

#[test]
fn dense_heavy_tails_diverge() {
    let c = config(
        normal_x(),
        pareto_y(YVariant::IidPareto { beta: 0.8 }),
        ScheduleRule::AllOnes,
        Mode::Counterexample,
        10_000,
        50,
    );
    let r = run_experiment_with_budget(&c, u64::MAX).unwrap();
    assert_eq!(
        r.verdict,
        ConvergenceVerdict::Diverging,
        "{}",
        r.verdict_reason
    );
    assert_eq!(r.conditions.overall, Verdict::Violated);
}

#[test]
fn decomposition_identity() {
    for rule in [
        ScheduleRule::Power { rho: 0.5, c: 1.0 },
        ScheduleRule::AllOnes,
        ScheduleRule::AllZeros,
    ] {
        let c = config(
            normal_x(),
            pareto_y(YVariant::IidPareto { beta: 0.8 }),
            rule.clone(),
            Mode::Theorem,
            5000,
            8,
        );
        let cmp = compare_modes(&c).unwrap();
        assert!(cmp.identity_holds, "{rule:?}: {}", cmp.max_residual_ulps);
        match rule {
            ScheduleRule::AllZeros => assert_eq!(cmp.theorem, cmp.x_only),
            ScheduleRule::AllOnes => assert_eq!(cmp.theorem, cmp.y_only),
            _ => {}
        }
        // the single-source modes draw the same streams
        for (mode, part) in [(Mode::XOnly, &cmp.x_only), (Mode::YOnly, &cmp.y_only)] {
            let r = run_experiment_with_budget(&ExperimentConfig { mode, ..c.clone() }, u64::MAX)
                .unwrap();
            assert_eq!(&r.s_over_n, part);
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let c = config(
        normal_x(),
        pareto_y(YVariant::FullyDependentPareto { beta: 0.8 }),
        ScheduleRule::Power { rho: 0.5, c: 1.0 },
        Mode::Theorem,
        3000,
        6,
    );
    let render = || {
        let r = run_experiment_with_budget(&c, u64::MAX).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_checkpoint_csv(&r, &mut a).unwrap();
        write_aggregate_csv(&r, &mut b).unwrap();
        (r.to_text(), a, b)
    };
    let first = render();
    assert_eq!(first, render());
    let csv = String::from_utf8(first.1).unwrap();
    assert!(csv.starts_with("replica,n,S_over_n,kappa_n,checkpoint_index\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().count(), 1 + 6 * c.checkpoints.len());
}

#[test]
fn different_seeds_differ() {
    let c = config(
        normal_x(),
        pareto_y(YVariant::Zero),
        ScheduleRule::AllZeros,
        Mode::XOnly,
        1000,
        3,
    );
    let a = run_experiment_with_budget(&c, u64::MAX).unwrap();
    let b = run_experiment_with_budget(
        &ExperimentConfig {
            master_seed: 7,
            ..c
        },
        u64::MAX,
    )
    .unwrap();
    assert_ne!(a.s_over_n, b.s_over_n);
}

#[test]
fn budget_guard() {
    let c = config(
        normal_x(),
        pareto_y(YVariant::Zero),
        ScheduleRule::AllZeros,
        Mode::XOnly,
        1_000_000,
        100,
    );
    match run_experiment_with_budget(&c, 10_000_000) {
        Err(Error::Budget {
            suggested_replicas,
            suggested_horizon,
            ..
        }) => {
            assert_eq!(suggested_replicas, 10);
            assert_eq!(suggested_horizon, 100_000);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(resolve_budget(Some(5), &c).unwrap(), 5);
}

#[test]
fn kappa_recorded_at_checkpoints() {
    let c = config(
        normal_x(),
        pareto_y(YVariant::IidPareto { beta: 2.0 }),
        ScheduleRule::Power { rho: 0.5, c: 1.0 },
        Mode::Theorem,
        1000,
        2,
    );
    let r = run_experiment_with_budget(&c, u64::MAX).unwrap();
    let s = build_schedule(c.schedule.clone(), 1000).unwrap();
    for k in &r.kappa {
        let want: Vec<u64> = c.checkpoints.iter().map(|&n| s.kappa(n)).collect();
        assert_eq!(k, &want);
    }
}
