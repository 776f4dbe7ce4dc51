//! Strong law of large numbers for sequences that interleave a
//! pairwise-independent, Cesàro-integrable family `X` with a sparse
//! heavy-tailed family `Y` along a deterministic 0/1 schedule.
//!
//! The crate provides samplers for both families, schedule construction,
//! analytic and grid checks of the hypotheses ([`conditions`]), numerical
//! checks of the truncation argument ([`proof_validators`]) and replica
//! experiments with convergence verdicts ([`diagnostics`]).

pub mod conditions;
pub mod config;
pub mod diagnostics;
pub mod dist;
pub mod error;
pub mod generators;
pub mod proof_validators;
pub mod quadrature;
pub mod rng;
pub mod schedule;
pub mod stats;
pub mod summation;

pub use conditions::{
    condition_report, full_condition_report, Certification, ConditionEntry, ConditionId,
    ConditionReport, ConditionSettings, Verdict,
};
pub use config::{ExperimentConfig, Mode, DEFAULT_MASTER_SEED};
pub use diagnostics::{
    compare_modes, run_experiment, ConvergenceReport, ConvergenceVerdict, ModeComparison,
};
pub use dist::{BaseDist, InverseCdfTable};
pub use error::{Error, Result};
pub use generators::{
    OffsetRule, TailFamily, XModel, XSampler, XVariant, YModel, YSampler, YVariant,
};
pub use proof_validators::{validate_proof, ProofReport};
pub use quadrature::{QuadratureSpec, TailEnvelope};
pub use rng::{SeedStream, StreamTag};
pub use schedule::{build_schedule, MixSchedule, RarityVerdict, ScheduleRule};
