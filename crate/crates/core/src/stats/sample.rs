use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_indices, Execution};
use crate::scenarios::{ideal_raw_b, ideal_settings_a, ScenarioSpec, RAW_OUTCOMES_B};
use crate::witness::ScenarioKind;

use super::counts::{CountsTable, JobCounts, SettingGrid, SETTINGS};
use super::rng::{multinomial, stream_rng};

/// Outcome probabilities the sampler draws from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OutcomeDistribution {
    /// `(yy, yn, ny, nn)` per setting `(i, j)`.
    A(Box<[[[f64; 4]; SETTINGS]; SETTINGS]>),
    /// 64 raw outcomes `a₀a₁a₂b₀b₁b₂`.
    B(Vec<f64>),
}

impl OutcomeDistribution {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            OutcomeDistribution::A(_) => ScenarioKind::A,
            OutcomeDistribution::B(_) => ScenarioKind::B,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |probs: &[f64], what: &str| -> Result<()> {
            let sum: f64 = probs.iter().sum();
            if probs.iter().any(|p| !p.is_finite() || *p < -1e-12) || (sum - 1.0).abs() > 1e-10 {
                return Err(Error::Invariant(format!("{what}: not a probability distribution (sum {sum})")));
            }
            Ok(())
        };
        match self {
            OutcomeDistribution::A(grid) => {
                for (i, row) in grid.iter().enumerate() {
                    for (j, cell) in row.iter().enumerate() {
                        check(cell, &format!("setting ({}, {})", i + 1, j + 1))?;
                    }
                }
                Ok(())
            }
            OutcomeDistribution::B(raw) => {
                if raw.len() != RAW_OUTCOMES_B {
                    return Err(Error::Dimension(format!("{} raw outcomes", raw.len())));
                }
                check(raw, "raw distribution")
            }
        }
    }
}

/// The noiseless distribution of a scenario, from the circuit simulation.
pub fn ideal_distribution(spec: &ScenarioSpec) -> Result<OutcomeDistribution> {
    spec.validate()?;
    match spec.kind {
        ScenarioKind::A => Ok(OutcomeDistribution::A(Box::new(ideal_settings_a(spec)?))),
        ScenarioKind::B => Ok(OutcomeDistribution::B(ideal_raw_b()?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub shots: u64,
    pub jobs: usize,
    pub repetitions: u64,
    pub seed: u64,
}

impl SamplingPlan {
    pub fn single(shots: u64, seed: u64) -> Self {
        Self {
            shots,
            jobs: 1,
            repetitions: 1,
            seed,
        }
    }
}

/// Draws one job's counts; job `k` uses stream `k` of the plan's seed.
pub fn sample_job(dist: &OutcomeDistribution, trials: u64, seed: u64, job: usize) -> Result<JobCounts> {
    let mut rng = stream_rng(seed, job as u64);
    match dist {
        OutcomeDistribution::A(grid) => {
            let mut out: SettingGrid = [[[0; 4]; SETTINGS]; SETTINGS];
            for i in 0..SETTINGS {
                for j in 0..SETTINGS {
                    let draw = multinomial(&mut rng, trials, &clamp(&grid[i][j]))?;
                    out[i][j].copy_from_slice(&draw);
                }
            }
            Ok(JobCounts::A(Box::new(out)))
        }
        OutcomeDistribution::B(raw) => Ok(JobCounts::B(multinomial(&mut rng, trials, &clamp(raw))?)),
    }
}

// rounding can leave −1e-17 on structurally zero outcomes
fn clamp(p: &[f64]) -> Vec<f64> {
    p.iter().map(|v| v.max(0.0)).collect()
}

/// Synthetic counts drawn from `dist`, reproducible from `plan.seed`.
pub fn sample_counts(
    spec: &ScenarioSpec,
    dist: &OutcomeDistribution,
    plan: &SamplingPlan,
    exec: Execution,
) -> Result<CountsTable> {
    spec.validate()?;
    dist.validate()?;
    if dist.kind() != spec.kind {
        return Err(Error::Scenario("distribution does not match the scenario".into()));
    }
    if plan.shots == 0 || plan.repetitions == 0 || plan.jobs == 0 {
        return Err(Error::Argument("shots, jobs and repetitions must be positive".into()));
    }
    let trials = plan.shots * plan.repetitions;
    let jobs = map_indices(exec, plan.jobs, |k| sample_job(dist, trials, plan.seed, k))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    CountsTable::new(
        spec.kind,
        spec.set,
        plan.shots,
        plan.repetitions,
        jobs,
        Some(plan.seed),
        "simulator",
    )
}
