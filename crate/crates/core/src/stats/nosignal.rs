//! Pairwise comparison of each party's marginals across the other party's settings.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::witness::ScenarioKind;

use super::counts::{CountsTable, SETTINGS};
use super::estimate::pool_a;

/// `2 · 4 · C(4, 2)`.
pub const COMPARISONS: usize = 2 * SETTINGS * SETTINGS * (SETTINGS - 1) / 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

/// One party's marginal for its setting `setting` while the other party used `other`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalEstimate {
    pub party: Party,
    pub setting: usize,
    pub other: usize,
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub party: Party,
    pub setting: usize,
    pub other: (usize, usize),
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoSignalingReport {
    pub marginals: Vec<MarginalEstimate>,
    pub comparisons: Vec<Comparison>,
    pub max_abs_z: f64,
    /// `min(1, 48 · P(|Z| ≥ max |z|))`.
    pub bonferroni_p: f64,
}

impl NoSignalingReport {
    pub fn comparison_count(&self) -> usize {
        self.comparisons.len()
    }

    pub fn worst(&self) -> &Comparison {
        self.comparisons
            .iter()
            .max_by(|a, b| a.z.abs().total_cmp(&b.z.abs()))
            .expect("48 comparisons")
    }

    pub fn find(&self, party: Party, setting: usize, other: (usize, usize)) -> Option<&Comparison> {
        self.comparisons
            .iter()
            .find(|c| c.party == party && c.setting == setting && c.other == other)
    }

    /// Bonferroni-adjusted rejection at level `alpha`.
    pub fn rejects(&self, alpha: f64) -> bool {
        self.bonferroni_p < alpha
    }
}

pub fn two_sided_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

/// Compares `p_{i0,j}` across `j` for every `i`, and `p_{0j,i}` across `i`
/// for every `j`, on counts pooled over all jobs.
pub fn no_signaling_test(counts: &CountsTable) -> Result<NoSignalingReport> {
    if counts.kind() != ScenarioKind::A {
        return Err(Error::Scenario("the no-signaling test needs scenario a counts".into()));
    }
    let all: Vec<usize> = (0..counts.job_count()).collect();
    let pooled = pool_a(counts, &all)?;
    let mut marginals = Vec::with_capacity(2 * SETTINGS * SETTINGS);
    for party in [Party::A, Party::B] {
        for setting in 0..SETTINGS {
            for other in 0..SETTINGS {
                let (i, j) = match party {
                    Party::A => (setting, other),
                    Party::B => (other, setting),
                };
                let [yy, yn, ny, nn] = pooled[i][j];
                let total = (yy + yn + ny + nn) as f64;
                let yes = match party {
                    Party::A => yy + yn,
                    Party::B => yy + ny,
                } as f64;
                let p = yes / total;
                marginals.push(MarginalEstimate {
                    party,
                    setting,
                    other,
                    estimate: p,
                    std_error: (p * (1.0 - p) / total).sqrt(),
                });
            }
        }
    }
    let mut comparisons = Vec::with_capacity(COMPARISONS);
    for block in marginals.chunks(SETTINGS) {
        for x in 0..SETTINGS {
            for y in x + 1..SETTINGS {
                let (m1, m2) = (&block[x], &block[y]);
                let se = (m1.std_error.powi(2) + m2.std_error.powi(2)).sqrt();
                let diff = m1.estimate - m2.estimate;
                let z = if se > 0.0 {
                    diff / se
                } else if diff == 0.0 {
                    0.0
                } else {
                    f64::INFINITY.copysign(diff)
                };
                comparisons.push(Comparison {
                    party: m1.party,
                    setting: m1.setting,
                    other: (x, y),
                    z,
                });
            }
        }
    }
    let max_abs_z = comparisons.iter().map(|c| c.z.abs()).fold(0.0, f64::max);
    let bonferroni_p = (COMPARISONS as f64 * two_sided_p(max_abs_z)).min(1.0);
    Ok(NoSignalingReport {
        marginals,
        comparisons,
        max_abs_z,
        bonferroni_p,
    })
}
