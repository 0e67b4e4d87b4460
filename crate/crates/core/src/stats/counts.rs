use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenarios::{MeasurementSet, RawOutcome, RAW_OUTCOMES_B};
use crate::witness::ScenarioKind;

/// Settings per party in scenario (a).
pub const SETTINGS: usize = 4;

/// Outcome labels of one scenario (a) setting, in storage order.
pub const OUTCOMES_A: [&str; 4] = ["yy", "yn", "ny", "nn"];

/// `grid[i][j]` holds `(yy, yn, ny, nn)` for A's setting `i` and B's setting `j`.
pub type SettingGrid = [[[u64; 4]; SETTINGS]; SETTINGS];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum JobCounts {
    A(Box<SettingGrid>),
    /// Raw counts indexed by the outcome bits `a₀a₁a₂b₀b₁b₂`.
    B(Vec<u64>),
}

impl JobCounts {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            JobCounts::A(_) => ScenarioKind::A,
            JobCounts::B(_) => ScenarioKind::B,
        }
    }
}

pub fn setting_label(i: usize, j: usize) -> String {
    format!("({}, {})", i + 1, j + 1)
}

/// The experimental record: per-job outcome counts.
///
/// Every setting of every job was run `shots × repetitions` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    kind: ScenarioKind,
    set: MeasurementSet,
    shots: u64,
    repetitions: u64,
    seed: Option<u64>,
    device: String,
    jobs: Vec<JobCounts>,
}

impl CountsTable {
    pub fn new(
        kind: ScenarioKind,
        set: MeasurementSet,
        shots: u64,
        repetitions: u64,
        jobs: Vec<JobCounts>,
        seed: Option<u64>,
        device: impl Into<String>,
    ) -> Result<Self> {
        if shots == 0 || repetitions == 0 {
            return Err(Error::Argument("shots and repetitions must be positive".into()));
        }
        if jobs.is_empty() {
            return Err(Error::Argument("a counts table needs at least one job".into()));
        }
        match (kind, set) {
            (ScenarioKind::A, MeasurementSet::Tetrahedron) | (ScenarioKind::B, MeasurementSet::SetI | MeasurementSet::SetII) => {
                return Err(Error::Scenario(format!(
                    "measurement {set} does not belong to scenario {}",
                    kind.label()
                )))
            }
            _ => {}
        }
        let trials = shots
            .checked_mul(repetitions)
            .ok_or_else(|| Error::Argument("shots × repetitions overflows".into()))?;
        for (k, job) in jobs.iter().enumerate() {
            if job.kind() != kind {
                return Err(Error::Counts {
                    job: k,
                    setting: "-".into(),
                    message: format!("job holds scenario {} counts", job.kind().label()),
                });
            }
            match job {
                JobCounts::A(grid) => {
                    for (i, row) in grid.iter().enumerate() {
                        for (j, cell) in row.iter().enumerate() {
                            let sum: u64 = cell.iter().sum();
                            if sum != trials {
                                return Err(Error::Counts {
                                    job: k,
                                    setting: setting_label(i, j),
                                    message: format!("counts sum to {sum}, expected {trials}"),
                                });
                            }
                        }
                    }
                }
                JobCounts::B(raw) => {
                    if raw.len() != RAW_OUTCOMES_B {
                        return Err(Error::Counts {
                            job: k,
                            setting: "raw".into(),
                            message: format!("{} outcomes, expected {RAW_OUTCOMES_B}", raw.len()),
                        });
                    }
                    let sum: u64 = raw.iter().sum();
                    if sum != trials {
                        return Err(Error::Counts {
                            job: k,
                            setting: "raw".into(),
                            message: format!("counts sum to {sum}, expected {trials}"),
                        });
                    }
                }
            }
        }
        Ok(Self {
            kind,
            set,
            shots,
            repetitions,
            seed,
            device: device.into(),
            jobs,
        })
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn set(&self) -> MeasurementSet {
        self.set
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn repetitions(&self) -> u64 {
        self.repetitions
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn device(&self) -> &str {
        &self.device
    }

    pub fn jobs(&self) -> &[JobCounts] {
        &self.jobs
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    /// Trials of each setting (kind A) or of the single circuit (kind B) in one job.
    pub fn trials_per_job(&self) -> u64 {
        self.shots * self.repetitions
    }

    /// Labels of the raw outcomes of scenario (b), in storage order.
    pub fn raw_labels_b() -> Vec<String> {
        (0..RAW_OUTCOMES_B)
            .map(|k| RawOutcome::from_index(k).label())
            .collect()
    }

    pub(crate) fn with_jobs(&self, jobs: Vec<JobCounts>) -> Result<Self> {
        Self::new(
            self.kind,
            self.set,
            self.shots,
            self.repetitions,
            jobs,
            self.seed,
            self.device.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(trials: u64) -> Box<SettingGrid> {
        Box::new([[[trials, 0, 0, 0]; 4]; 4])
    }

    #[test]
    fn accepts_consistent_table() {
        let t = CountsTable::new(ScenarioKind::A, MeasurementSet::SetI, 5, 2, vec![JobCounts::A(grid(10))], None, "x")
            .unwrap();
        assert_eq!(t.trials_per_job(), 10);
        assert_eq!(t.job_count(), 1);
    }

    #[test]
    fn rejects_sum_mismatch_with_location() {
        let mut g = grid(10);
        g[2][1] = [3, 3, 3, 0];
        let err = CountsTable::new(ScenarioKind::A, MeasurementSet::SetI, 10, 1, vec![JobCounts::A(g)], None, "")
            .unwrap_err();
        match err {
            Error::Counts { job, setting, .. } => {
                assert_eq!(job, 0);
                assert_eq!(setting, "(3, 2)");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_kind_mismatch_and_empty() {
        assert!(CountsTable::new(ScenarioKind::B, MeasurementSet::Tetrahedron, 10, 1, vec![JobCounts::A(grid(10))], None, "").is_err());
        assert!(CountsTable::new(ScenarioKind::A, MeasurementSet::SetI, 10, 1, vec![], None, "").is_err());
        assert!(CountsTable::new(ScenarioKind::A, MeasurementSet::Tetrahedron, 10, 1, vec![JobCounts::A(grid(10))], None, "").is_err());
        assert!(CountsTable::new(ScenarioKind::B, MeasurementSet::Tetrahedron, 10, 1, vec![JobCounts::B(vec![0; 63])], None, "").is_err());
    }
}
