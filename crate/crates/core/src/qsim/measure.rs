use crate::error::{Error, Result};

use super::cmatrix::{hermitian_eigenvalues, real, CMatrix};
use super::gates::{pauli_x, pauli_y, pauli_z};
use super::state::StateVector;

/// Hermitian effect `0 ≤ A ≤ 1` on `log2(dim)` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.dim().is_power_of_two() || matrix.dim() < 2 {
            return Err(Error::Dimension(format!(
                "effect of size {} does not act on whole qubits",
                matrix.dim()
            )));
        }
        if !matrix.is_hermitian(1e-12) {
            return Err(Error::Invariant("effect is not Hermitian".into()));
        }
        let ev = hermitian_eigenvalues(&matrix);
        if ev.first().is_some_and(|&e| e < -1e-10) || ev.last().is_some_and(|&e| e > 1.0 + 1e-10) {
            return Err(Error::Invariant(format!(
                "effect eigenvalues {ev:?} leave [0, 1]"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(qubits: usize) -> Self {
        Self {
            matrix: CMatrix::identity(1 << qubits),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn qubit_count(&self) -> usize {
        self.matrix.dim().trailing_zeros() as usize
    }
}

/// Ordered effects on one register summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<Observable>,
}

impl Povm {
    pub fn new(effects: Vec<Observable>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::Argument("empty POVM".into()))?;
        let dim = first.matrix.dim();
        if effects.iter().any(|e| e.matrix.dim() != dim) {
            return Err(Error::Dimension("POVM effects differ in size".into()));
        }
        let total = effects
            .iter()
            .fold(CMatrix::zeros(dim), |acc, e| acc.add(&e.matrix));
        let dev = total.max_abs_diff(&CMatrix::identity(dim));
        if dev > 1e-12 {
            return Err(Error::Invariant(format!(
                "POVM effects sum to identity only within {dev:e}"
            )));
        }
        Ok(Self { effects })
    }

    pub fn effects(&self) -> &[Observable] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }
}

pub fn is_unit(v: [f64; 3], tol: f64) -> bool {
    ((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs() <= tol
}

/// `(1 + a·σ)/2` without the unit-norm check.
pub(crate) fn bloch_operator(a: [f64; 3]) -> CMatrix {
    CMatrix::identity(2)
        .add(&pauli_x().scale(real(a[0])))
        .add(&pauli_y().scale(real(a[1])))
        .add(&pauli_z().scale(real(a[2])))
        .scale(real(0.5))
}

/// Projector onto the `+1` eigenstate of `a·σ`.
pub fn bloch_projector(a: [f64; 3]) -> Result<Observable> {
    if !is_unit(a, 1e-12) {
        return Err(Error::Argument(format!("Bloch vector {a:?} is not a unit vector")));
    }
    Observable::new(bloch_operator(a))
}

/// Vertices `m_1 … m_4` of the tetrahedron used by the five-outcome measurement.
pub fn tetrahedron_vectors() -> [[f64; 3]; 4] {
    let s = (2.0_f64 / 3.0).sqrt();
    let t = 1.0 / 3.0_f64.sqrt();
    [[s, 0.0, -t], [0.0, s, t], [-s, 0.0, -t], [0.0, -s, t]]
}

/// `M_j = (1 + m_j·σ)/8` for `j = 1..4` and `M_5 = 1/2`.
pub fn tetrahedron_povm() -> Povm {
    let mut effects: Vec<Observable> = tetrahedron_vectors()
        .into_iter()
        .map(|m| Observable::new(bloch_operator(m).scale(real(0.25))).expect("valid effect"))
        .collect();
    effects.push(Observable::new(CMatrix::identity(2).scale(real(0.5))).expect("valid effect"));
    Povm::new(effects).expect("tetrahedron POVM is complete")
}

/// `⟨ψ|A ⊗ B|ψ⟩` with `A` on `a_qubits` and `B` on `b_qubits`.
pub fn joint_probability(
    state: &StateVector,
    a: &Observable,
    a_qubits: &[usize],
    b: &Observable,
    b_qubits: &[usize],
) -> Result<f64> {
    if a_qubits.iter().any(|q| b_qubits.contains(q)) {
        return Err(Error::Argument("observables act on overlapping registers".into()));
    }
    if a.qubit_count() != a_qubits.len() || b.qubit_count() != b_qubits.len() {
        return Err(Error::Dimension("observable size does not match its register".into()));
    }
    let targets: Vec<usize> = a_qubits.iter().chain(b_qubits).copied().collect();
    let ab = a.matrix().kron(b.matrix());
    Ok(state.expectation(&ab, &targets)?.re)
}
