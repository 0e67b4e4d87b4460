use crate::error::{Error, Result};

use super::cmatrix::{CMatrix, C64, ONE, ZERO};
use super::gates::Gate;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 8;

/// Pure state on `q` qubits. Qubit 0 is the most significant bit of the
/// basis index, so `|ab⟩` has index `2a + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    qubits: usize,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(qubits: usize) -> Result<Self> {
        check_register(qubits)?;
        let mut amplitudes = vec![ZERO; 1 << qubits];
        amplitudes[0] = ONE;
        Ok(Self { amplitudes, qubits })
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_register(qubits)?;
        if index >= 1 << qubits {
            return Err(Error::Argument(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << qubits];
        amplitudes[index] = ONE;
        Ok(Self { amplitudes, qubits })
    }

    /// Rejects lengths that are not a power of two and norms off by more than 1e-12.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "state length {len} is not a power of two"
            )));
        }
        let qubits = len.trailing_zeros() as usize;
        check_register(qubits)?;
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!("state norm² is {norm}, expected 1")));
        }
        Ok(Self { amplitudes, qubits })
    }

    /// Normalizes `amplitudes` first.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Argument("cannot normalize a zero vector".into()));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::from_amplitudes(amplitudes)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_register(self.qubits + other.qubits)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            amplitudes,
            qubits: self.qubits + other.qubits,
        })
    }

    pub fn apply_gate(&self, gate: &Gate, targets: &[usize]) -> Result<StateVector> {
        if gate.arity() != targets.len() {
            return Err(Error::Argument(format!(
                "gate {} acts on {} qubits, got {} targets",
                gate.label(),
                gate.arity(),
                targets.len()
            )));
        }
        Ok(Self {
            amplitudes: self.apply_operator(gate.matrix(), targets)?,
            qubits: self.qubits,
        })
    }

    /// `M|ψ⟩` for an arbitrary operator on `targets` (the result need not be normalized).
    pub(crate) fn apply_operator(&self, m: &CMatrix, targets: &[usize]) -> Result<Vec<C64>> {
        check_targets(targets, self.qubits)?;
        let k = targets.len();
        if m.dim() != 1 << k {
            return Err(Error::Dimension(format!(
                "operator of size {} on {k} targets",
                m.dim()
            )));
        }
        let shifts: Vec<usize> = targets.iter().map(|&t| self.qubits - 1 - t).collect();
        let mask: usize = shifts.iter().map(|s| 1 << s).sum();
        let embed = |base: usize, local: usize| -> usize {
            shifts.iter().enumerate().fold(base, |acc, (pos, s)| {
                acc | (((local >> (k - 1 - pos)) & 1) << s)
            })
        };
        let mut out = vec![ZERO; self.amplitudes.len()];
        for base in (0..self.amplitudes.len()).filter(|i| i & mask == 0) {
            for row in 0..1 << k {
                let mut acc = ZERO;
                for col in 0..1 << k {
                    acc += m[(row, col)] * self.amplitudes[embed(base, col)];
                }
                out[embed(base, row)] = acc;
            }
        }
        Ok(out)
    }

    /// `⟨ψ|M|ψ⟩` for an operator on `targets`.
    pub fn expectation(&self, m: &CMatrix, targets: &[usize]) -> Result<C64> {
        let mv = self.apply_operator(m, targets)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&mv)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Born probabilities of every computational basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Joint distribution of measuring `qubits` in the computational basis;
    /// index bit order follows the order of `qubits` (first listed is most significant).
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        check_targets(qubits, self.qubits)?;
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, p) in self.probabilities().into_iter().enumerate() {
            let idx = qubits
                .iter()
                .fold(0, |acc, &q| (acc << 1) | ((i >> (self.qubits - 1 - q)) & 1));
            out[idx] += p;
        }
        Ok(out)
    }

    /// Reduced density matrix on `qubits`.
    pub fn reduced_density(&self, qubits: &[usize]) -> Result<CMatrix> {
        check_targets(qubits, self.qubits)?;
        let k = qubits.len();
        let shifts: Vec<usize> = qubits.iter().map(|&t| self.qubits - 1 - t).collect();
        let mask: usize = shifts.iter().map(|s| 1 << s).sum();
        let local = |full: usize| shifts.iter().fold(0, |acc, s| (acc << 1) | ((full >> s) & 1));
        let mut rho = CMatrix::zeros(1 << k);
        for i in 0..self.amplitudes.len() {
            for j in 0..self.amplitudes.len() {
                if i & !mask == j & !mask {
                    rho[(local(i), local(j))] += self.amplitudes[i] * self.amplitudes[j].conj();
                }
            }
        }
        Ok(rho)
    }
}

fn check_register(qubits: usize) -> Result<()> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::Argument(format!(
            "register of {qubits} qubits outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub(crate) fn check_targets(targets: &[usize], qubits: usize) -> Result<()> {
    for (pos, &t) in targets.iter().enumerate() {
        if t >= qubits {
            return Err(Error::QubitOutOfRange { index: t, qubits });
        }
        if targets[..pos].contains(&t) {
            return Err(Error::RepeatedTarget(t));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::gates::{gate_cnot, gate_h, gate_s, gate_x, Direction};
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn x_flips_zero() {
        let s = StateVector::zero(1).unwrap().apply_gate(&gate_x(), &[0]).unwrap();
        assert_eq!(s.probabilities(), vec![0.0, 1.0]);
    }

    #[test]
    fn s_twice_is_x_up_to_minus_i() {
        let s = StateVector::zero(1).unwrap();
        let s = s.apply_gate(&gate_s(), &[0]).unwrap().apply_gate(&gate_s(), &[0]).unwrap();
        assert!(s.amplitudes()[0].norm() < 1e-15);
        assert!((s.amplitudes()[1] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn cnot_makes_bell_pair() {
        let s = StateVector::zero(2)
            .unwrap()
            .apply_gate(&gate_h(), &[0])
            .unwrap()
            .apply_gate(&gate_cnot(Direction::Down), &[0, 1])
            .unwrap();
        let amps = s.amplitudes();
        assert!((amps[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((amps[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(amps[1].norm() + amps[2].norm() < 1e-15);
    }

    #[test]
    fn target_order_matters_for_two_qubit_gates() {
        // control on qubit 2, target qubit 0 of |001⟩
        let s = StateVector::basis(3, 0b001).unwrap();
        let out = s.apply_gate(&gate_cnot(Direction::Down), &[2, 0]).unwrap();
        assert_eq!(out.probabilities()[0b101], 1.0);
    }

    #[test]
    fn invalid_targets_are_rejected() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply_gate(&gate_x(), &[2]),
            Err(Error::QubitOutOfRange { index: 2, qubits: 2 })
        ));
        assert!(matches!(
            s.apply_gate(&gate_cnot(Direction::Down), &[1, 1]),
            Err(Error::RepeatedTarget(1))
        ));
        assert!(s.apply_gate(&gate_x(), &[0, 1]).is_err());
    }

    #[test]
    fn register_limits() {
        assert!(StateVector::zero(0).is_err());
        assert!(StateVector::zero(9).is_err());
        assert!(StateVector::from_amplitudes(vec![ONE, ONE]).is_err());
        assert!(StateVector::from_amplitudes(vec![ONE, ZERO, ZERO]).is_err());
    }

    #[test]
    fn marginal_orders_bits_as_listed() {
        let s = StateVector::basis(3, 0b100).unwrap();
        assert_eq!(s.marginal(&[2, 0]).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
    }
}
