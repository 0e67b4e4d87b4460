use crate::error::{Error, Result};

use super::gates::{gate_cnot, gate_s, gate_z, gate_z_pm, Direction, Gate, Sign};
use super::state::{check_targets, StateVector};

/// A gate list on a fixed register, started from `|0…0⟩` unless another
/// initial state is supplied to [`Circuit::run_from`].
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    qubits: usize,
    initial: String,
    ops: Vec<(Gate, Vec<usize>)>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            initial: "|0…0⟩".into(),
            ops: Vec::new(),
        }
    }

    pub fn with_initial_label(mut self, label: impl Into<String>) -> Self {
        self.initial = label.into();
        self
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn initial_label(&self) -> &str {
        &self.initial
    }

    pub fn ops(&self) -> &[(Gate, Vec<usize>)] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, gate: Gate, targets: &[usize]) -> Result<&mut Self> {
        check_targets(targets, self.qubits)?;
        if gate.arity() != targets.len() {
            return Err(Error::Argument(format!(
                "gate {} needs {} targets, got {}",
                gate.label(),
                gate.arity(),
                targets.len()
            )));
        }
        self.ops.push((gate, targets.to_vec()));
        Ok(self)
    }

    /// Appends `fragment`, sending its qubit `k` to `mapping[k]`.
    pub fn append(&mut self, fragment: &Circuit, mapping: &[usize]) -> Result<&mut Self> {
        if mapping.len() != fragment.qubits {
            return Err(Error::Argument(format!(
                "fragment on {} qubits mapped onto {} targets",
                fragment.qubits,
                mapping.len()
            )));
        }
        check_targets(mapping, self.qubits)?;
        for (gate, targets) in &fragment.ops {
            let mapped: Vec<usize> = targets.iter().map(|&t| mapping[t]).collect();
            self.push(gate.clone(), &mapped)?;
        }
        Ok(self)
    }

    pub fn run(&self) -> Result<StateVector> {
        self.run_from(StateVector::zero(self.qubits)?)
    }

    pub fn run_from(&self, initial: StateVector) -> Result<StateVector> {
        if initial.qubit_count() != self.qubits {
            return Err(Error::Dimension(format!(
                "circuit on {} qubits given a {}-qubit state",
                self.qubits,
                initial.qubit_count()
            )));
        }
        self.ops
            .iter()
            .try_fold(initial, |s, (g, t)| s.apply_gate(g, t))
    }
}

/// `acos √(1/3)`, the tilt of the tetrahedron vertices off the equator.
pub fn eta() -> f64 {
    (1.0_f64 / 3.0).sqrt().acos()
}

/// Two-qubit fragment mapping a working qubit (qubit 0) onto the four
/// tetrahedron projections with the help of an ancilla (qubit 1) in `|0⟩`.
///
/// Measured bits `(w, a)` = 00, 10, 01, 11 select `m_1 … m_4`, each with
/// probability `⟨φ|(1 + m_j·σ)|φ⟩/4`.
pub fn gate_q() -> Circuit {
    const W: usize = 0;
    const A: usize = 1;
    let mut c = Circuit::new(2).with_initial_label("|φ⟩|0⟩");
    let steps: [(Gate, &[usize]); 8] = [
        (gate_s(), &[A]),
        (gate_z(eta()), &[A]),
        (gate_s(), &[A]),
        (gate_z(std::f64::consts::FRAC_PI_4), &[A]),
        (gate_z(-std::f64::consts::FRAC_PI_4), &[W]),
        (gate_cnot(Direction::Down), &[A, W]),
        (gate_z_pm(Sign::Plus), &[A]),
        (gate_s(), &[A]),
    ];
    for (g, t) in steps {
        c.push(g, t).expect("fixed fragment is valid");
    }
    c
}

/// Index of the tetrahedron vertex selected by working bit `w` and ancilla bit `a`.
pub fn q_outcome(working: u8, ancilla: u8) -> usize {
    usize::from(working & 1) + 2 * usize::from(ancilla & 1)
}

#[cfg(test)]
mod tests {
    use super::super::gates::gate_x;
    use super::*;

    #[test]
    fn push_validates_targets() {
        let mut c = Circuit::new(3);
        assert!(c.push(gate_x(), &[3]).is_err());
        assert!(c.push(gate_cnot(Direction::Down), &[1, 1]).is_err());
        assert!(c.push(gate_x(), &[2]).is_ok());
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn append_remaps_fragment() {
        let mut c = Circuit::new(4);
        c.append(&gate_q(), &[3, 1]).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c.ops()[5].1, vec![1, 3]);
        assert!(c.append(&gate_q(), &[0]).is_err());
    }

    #[test]
    fn run_rejects_wrong_register() {
        let c = Circuit::new(2);
        assert!(c.run_from(StateVector::zero(3).unwrap()).is_err());
    }
}
