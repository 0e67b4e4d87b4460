//! Determinant witness for the Schmidt number of bipartite states, with the
//! simulators, optimizers and statistics needed to test it.

pub mod error;
pub mod extremal;
pub mod linalg;
pub mod par;
pub mod qsim;
pub mod scenarios;
pub mod stats;
pub mod witness;

pub use error::{Error, Result};
pub use par::Execution;
pub use witness::{
    adjugate, first_order_shift, witness, witness_error, AdjugateMatrix, ProbabilityMatrix,
    ScenarioKind, WitnessError, WitnessReport,
};
