//! Largest attainable witness values for bounded dimension, and the printed
//! configurations that reach them.
//!
//! Scenario (a) values are reported as `4ⁿ·W` (so the absolute bound is 1),
//! scenario (b) values as the raw `W`.

pub mod bounds;
pub mod caseb;
pub mod classical;
pub mod configs;
pub mod optimize;
pub mod quantum;
pub mod reference;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{determinant, Matrix};
use crate::par::Execution;
use crate::qsim::cmatrix::C64;
use crate::witness::ScenarioKind;

pub use bounds::{verify_absolute_bound, BoundCheck};
pub use caseb::max_b;
pub use classical::classical_max_a;
pub use configs::{verify_appendix_configs, ConfigCheck};
pub use quantum::quantum_max_a;
pub use reference::Reference;

pub const MAX_N: usize = 8;
pub const MIN_D: usize = 2;
pub const MAX_D: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    Classical,
    QuantumReal,
    QuantumComplex,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Classical => "classical",
            Model::QuantumReal => "real",
            Model::QuantumComplex => "complex",
        }
    }

    pub fn is_complex(self) -> bool {
        self == Model::QuantumComplex
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Model::Classical),
            "real" => Ok(Model::QuantumReal),
            "complex" => Ok(Model::QuantumComplex),
            other => Err(Error::Argument(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtremalProblem {
    pub n: usize,
    pub d: usize,
    pub model: Model,
    pub kind: ScenarioKind,
}

impl ExtremalProblem {
    pub fn new(n: usize, d: usize, model: Model, kind: ScenarioKind) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Argument(format!("n = {n} outside 1..={MAX_N}")));
        }
        if !(MIN_D..=MAX_D).contains(&d) {
            return Err(Error::Argument(format!("d = {d} outside {MIN_D}..={MAX_D}")));
        }
        Ok(Self { n, d, model, kind })
    }

    /// Scale applied to raw `W` when reporting.
    pub fn scale(&self) -> f64 {
        match self.kind {
            ScenarioKind::A => 4f64.powi(self.n as i32),
            ScenarioKind::B => 1.0,
        }
    }

    /// `W` vanishes identically when `n + 1` exceeds the dimension of the
    /// space the effects live in.
    pub fn rank_forced_zero(&self) -> bool {
        let span = match self.model {
            Model::Classical => self.d,
            Model::QuantumReal => self.d * (self.d + 1) / 2,
            Model::QuantumComplex => self.d * self.d,
        };
        self.n + 1 > span
    }
}

impl fmt::Display for ExtremalProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} n={} d={}", self.kind.label(), self.model, self.n, self.d)
    }
}

/// A configuration whose witness can be re-evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Parameters {
    /// Binary `A` (rows `1..=n`, row 0 of ones implicit), diagonal `ρ`, `B = Aᵀ`.
    Classical { rows: Vec<Vec<u8>>, weights: Vec<f64> },
    /// `Σ ψ_k |kk⟩` with `A_i = |v_i⟩⟨v_i|`, `B_i = A_i*`.
    Schmidt { psi: Vec<f64>, vectors: Vec<Vec<C64>> },
    /// Arbitrary state on `d × d` with `A_i = B_i = |v_i⟩⟨v_i|`.
    Bipartite { state: Vec<C64>, vectors: Vec<Vec<C64>> },
    /// Scenario (b): unnormalized rank-one effects `A′_i = |v_i⟩⟨v_i|`,
    /// `p = p′/Z` with `p′_ij = |⟨v_i|v_j⟩|²`.
    Effects { vectors: Vec<Vec<C64>> },
    /// Rank-forced zero: no configuration needed.
    Trivial { size: usize },
}

impl Parameters {
    pub fn matrix(&self) -> Result<Matrix> {
        match self {
            Parameters::Classical { rows, weights } => Ok(classical::classical_matrix(rows, weights)),
            Parameters::Schmidt { psi, vectors } => quantum::schmidt_matrix(psi, vectors),
            Parameters::Bipartite { state, vectors } => quantum::bipartite_matrix(state, vectors),
            Parameters::Effects { vectors } => caseb::effects_matrix(vectors),
            Parameters::Trivial { size } => Ok(Matrix::zeros(*size, *size)),
        }
    }

    /// Raw witness `det p`.
    pub fn witness(&self) -> Result<f64> {
        determinant(&self.matrix()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub problem: ExtremalProblem,
    /// Scaled value (see module docs).
    pub value: f64,
    pub parameters: Parameters,
    pub reference: Option<Reference>,
    pub restarts: usize,
    pub rank_forced: bool,
}

impl ExtremalResult {
    pub fn raw(&self) -> f64 {
        self.value / self.problem.scale()
    }

    /// Scaled witness of the stored parameters.
    pub fn reevaluate(&self) -> Result<f64> {
        Ok(self.parameters.witness()? * self.problem.scale())
    }

    pub fn deviation(&self) -> Option<f64> {
        self.reference.as_ref().map(|r| (self.value - r.target()).abs())
    }

    pub fn matches_reference(&self) -> Option<bool> {
        self.reference.as_ref().map(|r| r.accepts(self.value))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: 0,
            exec: Execution::Parallel,
        }
    }
}

/// Dispatches to the optimizer for the problem's scenario and model.
pub fn solve(problem: &ExtremalProblem, opts: &SearchOptions) -> Result<ExtremalResult> {
    match (problem.kind, problem.model) {
        (ScenarioKind::A, Model::Classical) => classical_max_a(problem.n, problem.d, opts),
        (ScenarioKind::A, model) => quantum_max_a(problem.n, problem.d, model, opts),
        (ScenarioKind::B, model) => max_b(problem.n, problem.d, model, opts),
    }
}
