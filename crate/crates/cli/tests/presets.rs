//! Every bundled scenario reaches the verdicts it advertises.

use slln_cli::presets;
use slln_core::{full_condition_report, run_experiment};

#[test]
fn presets_meet_expected_verdicts() {
    for p in presets::all() {
        let conditions = full_condition_report(&p.config).unwrap();
        assert_eq!(conditions.overall, p.expected_conditions, "{}", p.name);
        // the baseline is covered by the acceptance suite
        if p.name == "baseline_theorem" {
            continue;
        }
        let report = run_experiment(&p.config).unwrap();
        assert_eq!(
            report.verdict, p.expected_simulation,
            "{}: {}",
            p.name, report.verdict_reason
        );
    }
}
