//! Sampling, estimation and hypothesis tests on finite counts.

pub mod counts;
pub mod estimate;
pub mod nosignal;
pub mod perturb;
pub mod rng;
pub mod sample;
pub mod validate;

pub use counts::{CountsTable, JobCounts, SettingGrid, OUTCOMES_A, SETTINGS};
pub use estimate::{estimate_matrix, score_dataset, score_with, DatasetScore};
pub use nosignal::{no_signaling_test, Comparison, MarginalEstimate, NoSignalingReport, Party, COMPARISONS};
pub use perturb::{
    mix_extra_level, perturb_counts, shift_signaling, strongest_extra_level, ExtraLevel, PerturbMode,
    SIGNALING_SETTING,
};
pub use rng::{derive_seed, multinomial, stream_rng};
pub use sample::{ideal_distribution, sample_counts, sample_job, OutcomeDistribution, SamplingPlan};
pub use validate::{replicate_reports, validate_error_formula, ErrorValidation};
