//! Shared fixtures for the benchmarks.

use slln_core::config::default_checkpoints;
use slln_core::{BaseDist, ExperimentConfig, XModel, YModel, YVariant};

pub fn normal_x() -> XModel {
    XModel::iid(BaseDist::Normal { sigma: 1.0 }).unwrap()
}

pub fn comonotone_y() -> YModel {
    YModel::new(
        YVariant::ComonotoneScaled {
            beta: 0.8,
            scale_exponent: 0.3,
        },
        0.5,
        0.6,
    )
    .unwrap()
}

/// Baseline scenario shrunk to `horizon x replicas`.
pub fn small_experiment(horizon: u64, replicas: u64) -> ExperimentConfig {
    let text = format!(
        r#"
[x_model]
family = "iid"
dist = "normal:1"

[y_model]
family = "fully_dependent_pareto"
beta = 0.8
a = 0.5

[schedule]
rule = "power"
rho = 0.5

[diagnostics]
horizon = {horizon}
replicas = {replicas}
"#
    );
    let mut c = ExperimentConfig::from_toml_str(&text, None).unwrap();
    c.checkpoints = default_checkpoints(horizon);
    c
}
