//! Dense statevector simulation on up to eight qubits.
//!
//! Qubit 0 is the most significant bit of every basis index. Two-qubit gates
//! take their targets in `(first, second)` order, matching `|ab⟩`.

pub mod circuit;
pub mod cmatrix;
pub mod gates;
pub mod identities;
pub mod measure;
pub mod state;

pub use circuit::{eta, gate_q, q_outcome, Circuit};
pub use cmatrix::{CMatrix, C64};
pub use gates::{
    gate_cnot, gate_cr, gate_ecr, gate_h, gate_pauli_z, gate_s, gate_s_theta, gate_x, gate_y,
    gate_y_pm, gate_z, gate_z_pm, Direction, Gate, Sign,
};
pub use identities::{verify_gate_identities, IdentityCheck};
pub use measure::{bloch_projector, joint_probability, tetrahedron_povm, tetrahedron_vectors, Observable, Povm};
pub use state::{StateVector, MAX_QUBITS};
