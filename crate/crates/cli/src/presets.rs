//! Canned scenarios. Each is stored as config text so the catalogue
//! exercises the same parser users go through.

use slln_core::{ConvergenceVerdict, ExperimentConfig, Verdict};

#[derive(Debug, Clone)]
pub struct ScenarioPreset {
    pub name: &'static str,
    pub config: ExperimentConfig,
    /// Overall verdict of `check-conditions`.
    pub expected_conditions: Verdict,
    /// Verdict of `simulate`.
    pub expected_simulation: ConvergenceVerdict,
    pub note: &'static str,
}

struct Entry {
    name: &'static str,
    text: &'static str,
    conditions: Verdict,
    simulation: ConvergenceVerdict,
    note: &'static str,
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "baseline_theorem",
        text: r#"
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
horizon = 1000000
replicas = 200
"#,
        conditions: Verdict::Satisfied,
        simulation: ConvergenceVerdict::Converging,
        note: "iid normal X mixed with one shared Pareto draw at the squares",
    },
    Entry {
        name: "kolmogorov_iid",
        text: r#"
[x_model]
family = "iid"
dist = "normal:1"

[y_model]
family = "fully_dependent_pareto"
beta = 0.8
a = 0.5

[schedule]
rule = "all_zeros"

[diagnostics]
mode = "x_only"
horizon = 100000
replicas = 200
"#,
        conditions: Verdict::Satisfied,
        simulation: ConvergenceVerdict::Converging,
        note: "classical iid case; the 90% quantile of |S_n/n| tracks 1.645/sqrt(n)",
    },
    Entry {
        name: "x_only_pairwise",
        text: r#"
[x_model]
family = "walsh"
generators = 17

[y_model]
family = "fully_dependent_pareto"
beta = 0.8
a = 0.5

[schedule]
rule = "all_zeros"

[diagnostics]
mode = "x_only"
horizon = 100000
replicas = 200
"#,
        conditions: Verdict::Satisfied,
        simulation: ConvergenceVerdict::Converging,
        note: "pairwise independent Rademacher products from 17 signs",
    },
    Entry {
        name: "y_only_rare",
        text: r#"
[x_model]
family = "iid"
dist = "normal:1"

[y_model]
family = "iid_pareto"
beta = 0.8
a = 0.5

[schedule]
rule = "power"
rho = 0.4

[diagnostics]
mode = "y_only"
horizon = 1000000
replicas = 200
"#,
        conditions: Verdict::Satisfied,
        simulation: ConvergenceVerdict::Converging,
        note: "infinite-mean Y placed sparsely enough to be averaged away",
    },
    Entry {
        name: "counterexample_dense",
        text: r#"
[x_model]
family = "iid"
dist = "normal:1"

[y_model]
family = "iid_pareto"
beta = 0.8
a = 0.5

[schedule]
rule = "all_ones"

[diagnostics]
mode = "counterexample"
horizon = 100000
replicas = 100
"#,
        conditions: Verdict::Violated,
        simulation: ConvergenceVerdict::Diverging,
        note: "every position is Y; partial means of infinite-mean Pareto blow up",
    },
    Entry {
        name: "counterexample_no_moment",
        text: r#"
[x_model]
family = "iid"
dist = "normal:1"

[y_model]
family = "iid_pareto"
beta = 0.4
a = 0.5

[schedule]
rule = "power"
rho = 0.5

[diagnostics]
mode = "counterexample"
horizon = 100000
replicas = 400
quantile = 0.5
"#,
        conditions: Verdict::Violated,
        simulation: ConvergenceVerdict::Diverging,
        note:
            "tail index 0.4 below a; judged at the median since upper quantiles are unstable here",
    },
    Entry {
        name: "y_comonotone_growth",
        text: r#"
[x_model]
family = "iid"
dist = "centered_uniform:1"

[y_model]
family = "comonotone_scaled"
beta = 0.8
scale_exponent = 0.3
a = 0.5
eps = 0.6

[schedule]
rule = "power"
rho = 0.35

[diagnostics]
horizon = 100000
replicas = 200
"#,
        conditions: Verdict::Satisfied,
        simulation: ConvergenceVerdict::Converging,
        note: "growing Y scale k^0.3 paid for with eps = 0.6 and a sparser schedule",
    },
];

fn build(e: &Entry) -> ScenarioPreset {
    let config = ExperimentConfig::from_toml_str(e.text, None)
        .unwrap_or_else(|err| panic!("preset {} is malformed: {err}", e.name));
    ScenarioPreset {
        name: e.name,
        config,
        expected_conditions: e.conditions,
        expected_simulation: e.simulation,
        note: e.note,
    }
}

pub fn all() -> Vec<ScenarioPreset> {
    ENTRIES.iter().map(build).collect()
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn find(name: &str) -> Option<ScenarioPreset> {
    ENTRIES.iter().find(|e| e.name == name).map(build)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_round_trip() {
        let all = all();
        assert!(all.len() >= 6);
        for p in all {
            let text = p.config.to_toml_string();
            let back = ExperimentConfig::from_toml_str(&text, None).unwrap();
            assert_eq!(back, p.config, "{}", p.name);
            assert_eq!(back.to_toml_string(), text, "{}", p.name);
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(find("kolmogorov_iid").unwrap().config.horizon, 100_000);
        assert!(find("nope").is_none());
    }
}
