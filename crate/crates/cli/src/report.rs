use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use schmidt_core::extremal::ExtremalResult;
use schmidt_core::scenarios::Spectator;
use schmidt_core::stats::{no_signaling_test, score_dataset, CountsTable, NoSignalingReport, Party};
use schmidt_core::{Result, ScenarioKind, WitnessReport};

use crate::format::serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of the canonical serialization.
pub fn digest(table: &CountsTable) -> String {
    let hash = Sha256::digest(serialize(table).as_bytes());
    hash.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Reporting unit: 10⁻⁶ for scenario (a), 10⁻¹² for (b).
pub fn unit(kind: ScenarioKind) -> f64 {
    match kind {
        ScenarioKind::A => 1e-6,
        ScenarioKind::B => 1e-12,
    }
}

fn unit_label(kind: ScenarioKind) -> &'static str {
    match kind {
        ScenarioKind::A => "1e-6",
        ScenarioKind::B => "1e-12",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectatorReport {
    pub spectator: Option<Spectator>,
    pub report: WitnessReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub input_digest: String,
    pub scenario: ScenarioKind,
    pub set: String,
    pub device: String,
    pub jobs: usize,
    pub trials_per_job: u64,
    pub witness: Vec<SpectatorReport>,
    pub no_signaling: Option<NoSignalingReport>,
    pub wall_clock_ms: u128,
}

impl RunReport {
    pub fn build(table: &CountsTable) -> Result<Self> {
        let started = std::time::Instant::now();
        let score = score_dataset(table)?;
        let no_signaling = match table.kind() {
            ScenarioKind::A => Some(no_signaling_test(table)?),
            ScenarioKind::B => None,
        };
        Ok(Self {
            tool_version: TOOL_VERSION.to_string(),
            input_digest: digest(table),
            scenario: table.kind(),
            set: table.set().to_string(),
            device: table.device().to_string(),
            jobs: table.job_count(),
            trials_per_job: table.trials_per_job(),
            witness: score
                .reports
                .into_iter()
                .map(|(spectator, report)| SpectatorReport { spectator, report })
                .collect(),
            no_signaling,
            wall_clock_ms: started.elapsed().as_millis(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let u = unit(self.scenario);
        let _ = writeln!(out, "schmidt {}  input sha256:{}", self.tool_version, self.input_digest);
        let _ = writeln!(
            out,
            "scenario {}  set {}  device {}  jobs {}  trials/job {}",
            self.scenario.label(),
            self.set,
            self.device,
            self.jobs,
            self.trials_per_job
        );
        let _ = writeln!(out, "values in units of {}", unit_label(self.scenario));
        let _ = writeln!(
            out,
            "{:<12} {:>12} {:>12} {:>12} {:>12} {:>8} {:>8}",
            "spectator", "W", "ΔW", "W'", "ΔW'", "z", "z'"
        );
        for s in &self.witness {
            let r = &s.report;
            let label = s.spectator.map_or("-".to_string(), |sp| format!("{}{}", sp.a0, sp.b0));
            let _ = writeln!(
                out,
                "{:<12} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>8.3} {:>8.3}{}",
                label,
                r.w / u,
                r.delta_w / u,
                r.w_prime / u,
                r.delta_w_prime / u,
                r.z_score,
                r.z_score_prime,
                if r.reliable { "" } else { "  (adjugate vanishes)" }
            );
        }
        if let Some(ns) = &self.no_signaling {
            let w = ns.worst();
            let _ = writeln!(
                out,
                "no-signaling: max|z| {:.3} ({}), Bonferroni p {:.4}{}",
                ns.max_abs_z,
                describe(w.party, w.setting, w.other),
                ns.bonferroni_p,
                if ns.rejects(0.05) { "  REJECTED" } else { "" }
            );
        }
        let _ = writeln!(out, "wall clock {} ms", self.wall_clock_ms);
        out
    }
}

fn describe(party: Party, setting: usize, other: (usize, usize)) -> String {
    let (me, them) = match party {
        Party::A => ("A", "B"),
        Party::B => ("B", "A"),
    };
    format!("{me} setting {} across {them} settings {} vs {}", setting + 1, other.0 + 1, other.1 + 1)
}

/// All 48 comparisons, one per line.
pub fn no_signaling_text(report: &NoSignalingReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<6} {:>8} {:>10} {:>10}", "party", "setting", "compared", "z");
    for c in &report.comparisons {
        let party = match c.party {
            Party::A => "A",
            Party::B => "B",
        };
        let _ = writeln!(
            out,
            "{:<6} {:>8} {:>10} {:>10.3}",
            party,
            c.setting + 1,
            format!("{}-{}", c.other.0 + 1, c.other.1 + 1),
            c.z
        );
    }
    let _ = writeln!(
        out,
        "comparisons {}  max|z| {:.3}  Bonferroni p {:.4}  {}",
        report.comparison_count(),
        report.max_abs_z,
        report.bonferroni_p,
        if report.rejects(0.05) { "REJECTED at 0.05" } else { "consistent with no-signaling" }
    );
    out
}

pub fn extremal_text(r: &ExtremalResult) -> String {
    let mut out = String::new();
    let what = match r.problem.kind {
        ScenarioKind::A => "4^n·W",
        ScenarioKind::B => "W",
    };
    let _ = writeln!(out, "{}", r.problem);
    let _ = writeln!(out, "{what} = {:.12e}", r.value);
    match &r.reference {
        Some(reference) => {
            let _ = writeln!(
                out,
                "published {} = {:.12e}  deviation {:.3e}  tolerance {:.1e}  {}",
                reference.label,
                reference.value,
                (r.value - reference.value).abs(),
                reference.tolerance,
                if reference.accepts(r.value) { "MATCH" } else { "MISMATCH" }
            );
        }
        None => out.push_str("no published value\n"),
    }
    if r.rank_forced {
        out.push_str("rank-forced zero: n + 1 exceeds the dimension of the effect space\n");
    } else {
        let _ = writeln!(out, "restarts {}", r.restarts);
    }
    out
}
