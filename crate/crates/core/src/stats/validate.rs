//! Monte Carlo checks of the asymptotic error formula.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_indices, Execution};
use crate::scenarios::{aggregate_b, matrix_from_settings_a, ScenarioSpec, Spectator};
use crate::witness::{witness_error, AdjugateMatrix, ProbabilityMatrix, WitnessReport};

use super::counts::SETTINGS;

use super::estimate::score_with;
use super::rng::derive_seed;
use super::sample::{ideal_distribution, sample_counts, OutcomeDistribution, SamplingPlan};

pub const MIN_REPLICATES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorValidation {
    pub shots: u64,
    pub replicates: usize,
    /// `ΔW` of the exact distribution at `shots`.
    pub analytic_delta: f64,
    pub empirical_mean: f64,
    pub empirical_std: f64,
    /// `empirical_std / analytic_delta`.
    pub ratio: f64,
    /// Mean and variance of the per-replicate `z = W/ΔW`.
    pub z_mean: f64,
    pub z_variance: f64,
    /// Scenario (a): first-order spread of `W` with marginals averaged over settings.
    pub delta_method: Option<f64>,
}

/// Matrix of a distribution; kind B uses the given spectator choice.
pub fn distribution_matrix(dist: &OutcomeDistribution, spectator: Option<Spectator>) -> Result<ProbabilityMatrix> {
    match dist {
        OutcomeDistribution::A(grid) => matrix_from_settings_a(grid),
        OutcomeDistribution::B(raw) => aggregate_b(raw, spectator.unwrap_or(Spectator::ALL[0])),
    }
}

/// Exact first-order standard deviation of `W` for scenario (a) estimates,
/// where each marginal is the mean of four per-setting frequencies and is
/// therefore correlated with the joint entry of the same setting.
pub fn delta_method_error_a(grid: &[[[f64; 4]; SETTINGS]; SETTINGS], shots: u64) -> Result<f64> {
    let p = matrix_from_settings_a(grid)?;
    let adj = AdjugateMatrix::of(p.entries())?;
    let a = adj.entries();
    let k = SETTINGS as f64;
    let mut var = 0.0;
    for i in 0..SETTINGS {
        for j in 0..SETTINGS {
            let row = a[(0, i + 1)] / k;
            let col = a[(j + 1, 0)] / k;
            let c = [a[(j + 1, i + 1)] + row + col, row, col, 0.0];
            let q = &grid[i][j];
            let m1: f64 = c.iter().zip(q).map(|(c, q)| c * q).sum();
            let m2: f64 = c.iter().zip(q).map(|(c, q)| c * c * q).sum();
            var += (m2 - m1 * m1).max(0.0);
        }
    }
    Ok((var / shots as f64).sqrt())
}

/// Scores `replicates` independent datasets drawn from `dist`, replicate `r`
/// seeded with `derive_seed(seed, r)`.
pub fn replicate_reports(
    spec: &ScenarioSpec,
    dist: &OutcomeDistribution,
    shots: u64,
    jobs: usize,
    replicates: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<WitnessReport>> {
    let spectator = match spec.kind {
        crate::witness::ScenarioKind::A => None,
        crate::witness::ScenarioKind::B => Some(spec.spectator.unwrap_or(Spectator::ALL[0])),
    };
    map_indices(exec, replicates, |r| {
        let plan = SamplingPlan {
            shots,
            jobs,
            repetitions: 1,
            seed: derive_seed(seed, r as u64),
        };
        let counts = sample_counts(spec, dist, &plan, Execution::Sequential)?;
        score_with(&counts, spectator)
    })
    .into_iter()
    .collect()
}

pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Resamples the ideal scenario and compares the spread of `W` with `ΔW`.
pub fn validate_error_formula(
    spec: &ScenarioSpec,
    shots: u64,
    replicates: usize,
    seed: u64,
    exec: Execution,
) -> Result<ErrorValidation> {
    if replicates < MIN_REPLICATES {
        return Err(Error::Argument(format!(
            "at least {MIN_REPLICATES} replicates required, got {replicates}"
        )));
    }
    let dist = ideal_distribution(spec)?;
    let exact = distribution_matrix(&dist, spec.spectator)?;
    let analytic_delta = witness_error(&exact, shots)?.delta;
    let reports = replicate_reports(spec, &dist, shots, 1, replicates, seed, exec)?;
    let ws: Vec<f64> = reports.iter().map(|r| r.w).collect();
    let zs: Vec<f64> = reports.iter().map(|r| r.z_score).collect();
    let (empirical_mean, var_w) = mean_and_variance(&ws);
    let (z_mean, z_variance) = mean_and_variance(&zs);
    let empirical_std = var_w.sqrt();
    let delta_method = match &dist {
        OutcomeDistribution::A(grid) => Some(delta_method_error_a(grid, shots)?),
        OutcomeDistribution::B(_) => None,
    };
    Ok(ErrorValidation {
        shots,
        replicates,
        analytic_delta,
        empirical_mean,
        empirical_std,
        ratio: empirical_std / analytic_delta,
        z_mean,
        z_variance,
        delta_method,
    })
}
