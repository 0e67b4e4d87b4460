//! Controlled departures from the ideal statistics, for power studies.
//!
//! *Signaling* moves A's marginal in one setting without touching the joint
//! `yy` cell or B's marginal. *Extra level* mixes in, with weight `w`, a
//! component living outside the qubit subspace that answers every
//! measurement deterministically; it raises the local dimension to three.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scenarios::{matrix_from_settings_a, aggregate_b, OutcomeLabeling, Spectator, RAW_OUTCOMES_B};
use crate::witness::{AdjugateMatrix, ProbabilityMatrix};

use super::counts::{CountsTable, JobCounts, SETTINGS};
use super::estimate::{estimate_matrix, pool_b};
use super::sample::OutcomeDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbMode {
    Signaling,
    ExtraDim,
}

impl std::str::FromStr for PerturbMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signaling" => Ok(PerturbMode::Signaling),
            "extra-dim" => Ok(PerturbMode::ExtraDim),
            other => Err(Error::Argument(format!("unknown perturbation mode `{other}`"))),
        }
    }
}

/// Deterministic answers of the extra level: scenario (a) yes/no per
/// setting, or a single raw outcome in scenario (b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtraLevel {
    A { alpha: [bool; SETTINGS], beta: [bool; SETTINGS] },
    B { raw: usize },
}

impl ExtraLevel {
    /// Outcome index `(yy, yn, ny, nn)` for setting `(i, j)`.
    fn outcome_a(alpha: &[bool; SETTINGS], beta: &[bool; SETTINGS], i: usize, j: usize) -> usize {
        2 * usize::from(!alpha[i]) + usize::from(!beta[j])
    }
}

/// Pattern maximizing the first-order witness `w·bᵀ 𝒜 a` for scenario (a),
/// with `a = (1, α)`, `b = (1, β)`; returns the pattern and `bᵀ 𝒜 a`.
pub fn strongest_extra_level_a(p: &ProbabilityMatrix) -> Result<(ExtraLevel, f64)> {
    let adj = AdjugateMatrix::of(p.entries())?;
    let adj = adj.entries();
    let bits = |mask: usize| -> [bool; SETTINGS] { std::array::from_fn(|k| mask >> k & 1 == 1) };
    let vector = |flags: &[bool; SETTINGS]| -> Vec<f64> {
        std::iter::once(1.0)
            .chain(flags.iter().map(|&f| f64::from(u8::from(f))))
            .collect()
    };
    let mut best = (ExtraLevel::A { alpha: [false; SETTINGS], beta: [false; SETTINGS] }, 0.0_f64);
    for ma in 0..1 << SETTINGS {
        for mb in 0..1 << SETTINGS {
            let (alpha, beta) = (bits(ma), bits(mb));
            let (a, b) = (vector(&alpha), vector(&beta));
            let mut v = 0.0;
            for r in 0..=SETTINGS {
                for c in 0..=SETTINGS {
                    v += b[r] * adj[(r, c)] * a[c];
                }
            }
            if v.abs() > best.1.abs() {
                best = (ExtraLevel::A { alpha, beta }, v);
            }
        }
    }
    Ok(best)
}

/// Raw outcome maximizing `Σ_s |𝒜_s[j, i]|` over the four spectator choices,
/// where `(i, j)` is the cell the outcome lands in for spectator `s`.
pub fn strongest_extra_level_b(matrices: &[(Spectator, ProbabilityMatrix)]) -> Result<(ExtraLevel, f64)> {
    let adjs = matrices
        .iter()
        .map(|(s, p)| Ok((*s, AdjugateMatrix::of(p.entries())?)))
        .collect::<Result<Vec<_>>>()?;
    let mut best = (ExtraLevel::B { raw: 0 }, -1.0);
    for raw in 0..RAW_OUTCOMES_B {
        let score: f64 = adjs
            .iter()
            .map(|(s, adj)| {
                let (i, j) = OutcomeLabeling { spectator: *s }.map(raw);
                adj.entries()[(j, i)].abs()
            })
            .sum();
        if score > best.1 {
            best = (ExtraLevel::B { raw }, score);
        }
    }
    Ok(best)
}

/// Strongest extra-level pattern for a distribution.
pub fn strongest_extra_level(dist: &OutcomeDistribution) -> Result<ExtraLevel> {
    match dist {
        OutcomeDistribution::A(grid) => Ok(strongest_extra_level_a(&matrix_from_settings_a(grid)?)?.0),
        OutcomeDistribution::B(raw) => {
            let ms = Spectator::ALL
                .iter()
                .map(|&s| Ok((s, aggregate_b(raw, s)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(strongest_extra_level_b(&ms)?.0)
        }
    }
}

fn check_weight(w: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Argument(format!("weight {w} outside [0, 1]")));
    }
    Ok(())
}

/// `(1 − w)·dist + w·(deterministic extra-level answers)`.
pub fn mix_extra_level(dist: &OutcomeDistribution, weight: f64, level: ExtraLevel) -> Result<OutcomeDistribution> {
    check_weight(weight)?;
    match (dist, level) {
        (OutcomeDistribution::A(grid), ExtraLevel::A { alpha, beta }) => {
            let mut out = **grid;
            for i in 0..SETTINGS {
                for j in 0..SETTINGS {
                    for v in out[i][j].iter_mut() {
                        *v *= 1.0 - weight;
                    }
                    out[i][j][ExtraLevel::outcome_a(&alpha, &beta, i, j)] += weight;
                }
            }
            Ok(OutcomeDistribution::A(Box::new(out)))
        }
        (OutcomeDistribution::B(raw), ExtraLevel::B { raw: k }) => {
            let mut out: Vec<f64> = raw.iter().map(|v| v * (1.0 - weight)).collect();
            out[k] += weight;
            Ok(OutcomeDistribution::B(out))
        }
        _ => Err(Error::Scenario("extra level does not match the distribution".into())),
    }
}

/// Raises A's marginal in setting `(i, j)` by `epsilon`, moving mass from
/// `nn` to `yn`.
pub fn shift_signaling(dist: &OutcomeDistribution, setting: (usize, usize), epsilon: f64) -> Result<OutcomeDistribution> {
    let OutcomeDistribution::A(grid) = dist else {
        return Err(Error::Scenario("signaling applies to scenario a".into()));
    };
    let (i, j) = setting;
    if i >= SETTINGS || j >= SETTINGS {
        return Err(Error::Argument(format!("setting ({i}, {j}) out of range")));
    }
    let mut out = **grid;
    let cell = &mut out[i][j];
    if epsilon > cell[3] || -epsilon > cell[1] {
        return Err(Error::Argument(format!(
            "shift {epsilon} exceeds the available probability in setting ({}, {})",
            i + 1,
            j + 1
        )));
    }
    cell[1] += epsilon;
    cell[3] -= epsilon;
    Ok(OutcomeDistribution::A(Box::new(out)))
}

/// Setting whose A marginal the counts-level signaling perturbation moves.
pub const SIGNALING_SETTING: (usize, usize) = (1, 0);

/// Deterministic counterpart on recorded counts: moves `round(ε·trials)`
/// counts per job in [`SIGNALING_SETTING`] (signaling), or replaces a
/// fraction `ε` of every setting's counts by the strongest extra-level answer.
pub fn perturb_counts(counts: &CountsTable, mode: PerturbMode, epsilon: f64) -> Result<CountsTable> {
    let trials = counts.trials_per_job();
    let moved = (epsilon.abs() * trials as f64).round() as u64;
    match mode {
        PerturbMode::Signaling => {
            let (i, j) = SIGNALING_SETTING;
            let jobs = counts
                .jobs()
                .iter()
                .enumerate()
                .map(|(k, job)| {
                    let JobCounts::A(grid) = job else {
                        return Err(Error::Scenario("signaling applies to scenario a".into()));
                    };
                    let mut g = grid.clone();
                    let (from, to) = if epsilon >= 0.0 { (3, 1) } else { (1, 3) };
                    if g[i][j][from] < moved {
                        return Err(Error::Counts {
                            job: k,
                            setting: super::counts::setting_label(i, j),
                            message: format!("cannot move {moved} counts"),
                        });
                    }
                    g[i][j][from] -= moved;
                    g[i][j][to] += moved;
                    Ok(JobCounts::A(g))
                })
                .collect::<Result<Vec<_>>>()?;
            counts.with_jobs(jobs)
        }
        PerturbMode::ExtraDim => {
            check_weight(epsilon)?;
            let all: Vec<usize> = (0..counts.job_count()).collect();
            let level = match counts.kind() {
                crate::witness::ScenarioKind::A => {
                    strongest_extra_level_a(&estimate_matrix(counts, &all, None)?)?.0
                }
                crate::witness::ScenarioKind::B => {
                    let pooled = pool_b(counts, &all)?;
                    let total: u64 = pooled.iter().sum();
                    let raw: Vec<f64> = pooled.iter().map(|&c| c as f64 / total as f64).collect();
                    strongest_extra_level(&OutcomeDistribution::B(raw))?
                }
            };
            let jobs = counts
                .jobs()
                .iter()
                .map(|job| match (job, level) {
                    (JobCounts::A(grid), ExtraLevel::A { alpha, beta }) => {
                        let mut g = grid.clone();
                        for i in 0..SETTINGS {
                            for j in 0..SETTINGS {
                                let target = ExtraLevel::outcome_a(&alpha, &beta, i, j);
                                mix_cell(&mut g[i][j], target, moved);
                            }
                        }
                        Ok(JobCounts::A(g))
                    }
                    (JobCounts::B(raw), ExtraLevel::B { raw: target }) => {
                        let mut r = raw.clone();
                        mix_cell(&mut r, target, moved);
                        Ok(JobCounts::B(r))
                    }
                    _ => Err(Error::Scenario("extra level does not match the counts".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            counts.with_jobs(jobs)
        }
    }
}

/// Removes `moved` counts proportionally (largest remainders) and adds them to `target`.
fn mix_cell(cell: &mut [u64], target: usize, moved: u64) {
    let total: u64 = cell.iter().sum();
    if total == 0 || moved == 0 {
        return;
    }
    let moved = moved.min(total);
    let exact: Vec<f64> = cell.iter().map(|&c| c as f64 * moved as f64 / total as f64).collect();
    let mut take: Vec<u64> = exact.iter().map(|e| e.floor() as u64).collect();
    let mut short = moved - take.iter().sum::<u64>();
    let mut order: Vec<usize> = (0..cell.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for k in order {
        if short == 0 {
            break;
        }
        if take[k] < cell[k] {
            take[k] += 1;
            short -= 1;
        }
    }
    for (c, t) in cell.iter_mut().zip(&take) {
        *c -= t;
    }
    cell[target] += moved;
}

/// First-order witness of a matrix mixed with an extra-level pattern:
/// `W ≈ w(1 − w)^n · bᵀ 𝒜 a`.
pub fn extra_level_witness(p: &ProbabilityMatrix, weight: f64, a: &[f64], b: &[f64]) -> Result<f64> {
    let adj = AdjugateMatrix::of(p.entries())?;
    let n = p.n() as i32;
    let bt = Matrix::from_fn(1, b.len(), |_, c| b[c]);
    let av = Matrix::from_fn(a.len(), 1, |r, _| a[r]);
    let v = bt.matmul(adj.entries())?.matmul(&av)?[(0, 0)];
    Ok(weight * (1.0 - weight).powi(n) * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix_cell_preserves_total() {
        let mut cell = [10, 7, 3, 0];
        mix_cell(&mut cell, 3, 5);
        assert_eq!(cell.iter().sum::<u64>(), 20);
        assert_eq!(cell[3], 5);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("signaling".parse::<PerturbMode>().unwrap(), PerturbMode::Signaling);
        assert_eq!("extra-dim".parse::<PerturbMode>().unwrap(), PerturbMode::ExtraDim);
        assert!("noise".parse::<PerturbMode>().is_err());
    }
}
