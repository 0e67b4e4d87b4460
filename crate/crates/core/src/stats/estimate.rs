use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scenarios::{OutcomeLabeling, Spectator};
use crate::witness::{
    ratio_or_zero, witness, witness_error, ProbabilityMatrix, ScenarioKind, WitnessReport,
};

use super::counts::{CountsTable, JobCounts, SETTINGS};

fn check_subset(counts: &CountsTable, jobs: &[usize]) -> Result<()> {
    if jobs.is_empty() {
        return Err(Error::Argument("job subset is empty".into()));
    }
    if let Some(&k) = jobs.iter().find(|&&k| k >= counts.job_count()) {
        return Err(Error::Argument(format!(
            "job {k} out of range ({} jobs)",
            counts.job_count()
        )));
    }
    Ok(())
}

/// Counts summed over `jobs`.
pub fn pool_a(counts: &CountsTable, jobs: &[usize]) -> Result<[[[u64; 4]; SETTINGS]; SETTINGS]> {
    check_subset(counts, jobs)?;
    let mut pooled = [[[0u64; 4]; SETTINGS]; SETTINGS];
    for &k in jobs {
        let JobCounts::A(grid) = &counts.jobs()[k] else {
            return Err(Error::Scenario("expected scenario a counts".into()));
        };
        for i in 0..SETTINGS {
            for j in 0..SETTINGS {
                for o in 0..4 {
                    pooled[i][j][o] += grid[i][j][o];
                }
            }
        }
    }
    Ok(pooled)
}

pub fn pool_b(counts: &CountsTable, jobs: &[usize]) -> Result<Vec<u64>> {
    check_subset(counts, jobs)?;
    let mut pooled = vec![0u64; 64];
    for &k in jobs {
        let JobCounts::B(raw) = &counts.jobs()[k] else {
            return Err(Error::Scenario("expected scenario b counts".into()));
        };
        for (p, c) in pooled.iter_mut().zip(raw) {
            *p += c;
        }
    }
    Ok(pooled)
}

/// Trials behind each setting (kind A) or in total (kind B) for `jobs`.
pub fn pooled_trials(counts: &CountsTable, jobs: &[usize]) -> u64 {
    counts.trials_per_job() * jobs.len() as u64
}

/// Empirical matrix from the jobs in `jobs`.
///
/// Kind A: `p_ij` from setting `(i, j)`; each marginal is averaged over the
/// four settings it appears in. Kind B: normalized aggregated counts for the
/// given spectator choice.
pub fn estimate_matrix(
    counts: &CountsTable,
    jobs: &[usize],
    spectator: Option<Spectator>,
) -> Result<ProbabilityMatrix> {
    match counts.kind() {
        ScenarioKind::A => {
            let pooled = pool_a(counts, jobs)?;
            let mut p = Matrix::zeros(SETTINGS + 1, SETTINGS + 1);
            p[(0, 0)] = 1.0;
            for i in 0..SETTINGS {
                for j in 0..SETTINGS {
                    let [yy, yn, ny, nn] = pooled[i][j];
                    let total = (yy + yn + ny + nn) as f64;
                    if total == 0.0 {
                        return Err(Error::Counts {
                            job: jobs[0],
                            setting: super::counts::setting_label(i, j),
                            message: "no trials".into(),
                        });
                    }
                    p[(i + 1, j + 1)] = yy as f64 / total;
                    p[(i + 1, 0)] += (yy + yn) as f64 / total / SETTINGS as f64;
                    p[(0, j + 1)] += (yy + ny) as f64 / total / SETTINGS as f64;
                }
            }
            for i in 1..=SETTINGS {
                // averaging four ratios can overshoot 1 by an ulp
                p[(i, 0)] = p[(i, 0)].min(1.0);
                p[(0, i)] = p[(0, i)].min(1.0);
            }
            ProbabilityMatrix::new(p, ScenarioKind::A)
        }
        ScenarioKind::B => {
            let spectator = spectator
                .ok_or_else(|| Error::Argument("scenario b needs a spectator choice".into()))?;
            let pooled = pool_b(counts, jobs)?;
            let total: u64 = pooled.iter().sum();
            if total == 0 {
                return Err(Error::Counts {
                    job: jobs[0],
                    setting: "raw".into(),
                    message: "no trials".into(),
                });
            }
            let labeling = OutcomeLabeling { spectator };
            let mut cells = [[0u64; 5]; 5];
            for (k, &c) in pooled.iter().enumerate() {
                let (i, j) = labeling.map(k);
                cells[i][j] += c;
            }
            let p = Matrix::from_fn(5, 5, |i, j| cells[i][j] as f64 / total as f64);
            ProbabilityMatrix::new(p, ScenarioKind::B)
        }
    }
}

/// Scores of one dataset: a single report for kind A, one per spectator
/// choice for kind B.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetScore {
    pub kind: ScenarioKind,
    pub reports: Vec<(Option<Spectator>, WitnessReport)>,
}

/// `W`, `ΔW` from the pooled counts and `W′ = mean_k W_k`,
/// `ΔW′ = sqrt(Σ_k ΔW_k²)/J` from the individual jobs.
pub fn score_with(counts: &CountsTable, spectator: Option<Spectator>) -> Result<WitnessReport> {
    let all: Vec<usize> = (0..counts.job_count()).collect();
    let pooled = estimate_matrix(counts, &all, spectator)?;
    let n_pooled = pooled_trials(counts, &all);
    let w = witness(&pooled);
    let err = witness_error(&pooled, n_pooled)?;
    let jobs = counts.job_count();
    let (w_prime, delta_w_prime) = if jobs == 1 {
        (w, err.delta)
    } else {
        let mut sum_w = 0.0;
        let mut sum_var = 0.0;
        for k in 0..jobs {
            let p = estimate_matrix(counts, &[k], spectator)?;
            sum_w += witness(&p);
            let e = witness_error(&p, counts.trials_per_job())?;
            sum_var += e.delta * e.delta;
        }
        (sum_w / jobs as f64, sum_var.sqrt() / jobs as f64)
    };
    Ok(WitnessReport {
        w,
        delta_w: err.delta,
        w_prime,
        delta_w_prime,
        z_score: ratio_or_zero(w, err.delta),
        z_score_prime: ratio_or_zero(w_prime, delta_w_prime),
        n_shots: n_pooled,
        job_count: jobs,
        reliable: err.reliable,
    })
}

pub fn score_dataset(counts: &CountsTable) -> Result<DatasetScore> {
    let reports = match counts.kind() {
        ScenarioKind::A => vec![(None, score_with(counts, None)?)],
        ScenarioKind::B => Spectator::ALL
            .iter()
            .map(|&s| Ok((Some(s), score_with(counts, Some(s))?)))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(DatasetScore {
        kind: counts.kind(),
        reports,
    })
}
