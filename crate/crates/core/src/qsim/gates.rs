//! Named gates in the `|0⟩, |1⟩` basis.
//!
//! Rotations follow `V_θ = exp(−iθV/2) = cos(θ/2) − iV sin(θ/2)`. Two-qubit
//! gates act on `|ab⟩` with `a` the first target; the reversed direction is
//! defined by `⟨a′b′|G↑|ab⟩ = ⟨b′a′|G↓|ba⟩`, i.e. `G↑ = SWAP · G↓ · SWAP`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use super::cmatrix::{c, real, CMatrix, C64, I, ONE, ZERO};

/// A unitary on one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    matrix: CMatrix,
    arity: usize,
    label: String,
}

impl Gate {
    /// Panics if the matrix is not unitary within 1e-12 or is not 2×2 / 4×4.
    pub fn new(label: impl Into<String>, matrix: CMatrix) -> Self {
        let arity = match matrix.dim() {
            2 => 1,
            4 => 2,
            d => panic!("gate matrices must be 2×2 or 4×4, got {d}×{d}"),
        };
        let label = label.into();
        assert!(matrix.is_unitary(1e-12), "gate {label} is not unitary");
        Self { matrix, arity, label }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn inverse(&self) -> Gate {
        Gate::new(format!("{}†", self.label), self.matrix.adjoint())
    }

    /// The same two-qubit gate with its targets swapped.
    pub fn reversed(&self) -> Gate {
        assert_eq!(self.arity, 2, "only two-qubit gates have a direction");
        let sw = swap_matrix();
        Gate::new(format!("{}↑", self.label.trim_end_matches('↓')), &(&sw * &self.matrix) * &sw)
    }
}

/// Orientation of a two-qubit gate relative to its `(first, second)` targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Control / first role on the first target.
    Down,
    /// Roles exchanged.
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

pub fn pauli_i() -> CMatrix {
    CMatrix::identity(2)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]])
}

fn swap_matrix() -> CMatrix {
    CMatrix::from_fn(4, |i, j| {
        let swapped = ((i & 1) << 1) | (i >> 1);
        if swapped == j {
            ONE
        } else {
            ZERO
        }
    })
}

/// `exp(−iθV/2)` for an involutory `V`.
pub fn rotation(v: &CMatrix, theta: f64) -> CMatrix {
    CMatrix::identity(v.dim())
        .scale(real((theta / 2.0).cos()))
        .sub(&v.scale(c(0.0, (theta / 2.0).sin())))
}

/// Native π/2 rotation `S = √X = (σ0 − iσ1)/√2`.
pub fn gate_s() -> Gate {
    Gate::new("S", rotation(&pauli_x(), FRAC_PI_2))
}

/// `Z_θ = diag(e^{−iθ/2}, e^{iθ/2})`.
pub fn gate_z(theta: f64) -> Gate {
    Gate::new(
        format!("Z({theta:.6})"),
        CMatrix::diag(&[C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0)]),
    )
}

/// `S_θ = Z_θ† S Z_θ`, a π/2 rotation about the equatorial axis `(cos θ, −sin θ, 0)`.
pub fn gate_s_theta(theta: f64) -> Gate {
    let z = gate_z(theta).matrix;
    let s = gate_s().matrix;
    Gate::new(format!("S({theta:.6})"), &(&z.adjoint() * &s) * &z)
}

pub fn gate_x() -> Gate {
    Gate::new("X", pauli_x())
}

pub fn gate_y() -> Gate {
    Gate::new("Y", pauli_y())
}

pub fn gate_pauli_z() -> Gate {
    Gate::new("Z", pauli_z())
}

/// `H = (Z + X)/√2`.
pub fn gate_h() -> Gate {
    Gate::new("H", pauli_z().add(&pauli_x()).scale(real(FRAC_1_SQRT_2)))
}

/// `Y_± = Y_{±π/2}`.
pub fn gate_y_pm(sign: Sign) -> Gate {
    let theta = match sign {
        Sign::Plus => FRAC_PI_2,
        Sign::Minus => -FRAC_PI_2,
    };
    Gate::new(
        if sign == Sign::Plus { "Y+" } else { "Y-" },
        rotation(&pauli_y(), theta),
    )
}

/// `Z_± = Z_{±π/2}`.
pub fn gate_z_pm(sign: Sign) -> Gate {
    match sign {
        Sign::Plus => Gate::new("Z+", gate_z(FRAC_PI_2).matrix),
        Sign::Minus => Gate::new("Z-", gate_z(-FRAC_PI_2).matrix),
    }
}

/// `CNOT↓ = |0⟩⟨0|⊗I + |1⟩⟨1|⊗X` (control on the first target).
pub fn gate_cnot(direction: Direction) -> Gate {
    let down = Gate::new(
        "CNOT↓",
        CMatrix::from_rows([
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ONE, ZERO, ZERO],
            [ZERO, ZERO, ZERO, ONE],
            [ZERO, ZERO, ONE, ZERO],
        ]),
    );
    match direction {
        Direction::Down => down,
        Direction::Up => down.reversed(),
    }
}

/// `CR^± = (ZX)_{±π/4}`.
pub fn gate_cr(sign: Sign) -> Gate {
    let zx = pauli_z().kron(&pauli_x());
    match sign {
        Sign::Plus => Gate::new("CR+", rotation(&zx, FRAC_PI_4)),
        Sign::Minus => Gate::new("CR-", rotation(&zx, -FRAC_PI_4)),
    }
}

/// `ECR↓ = (XI − YX)/√2`.
pub fn gate_ecr(direction: Direction) -> Gate {
    let m = pauli_x()
        .kron(&pauli_i())
        .sub(&pauli_y().kron(&pauli_x()))
        .scale(real(FRAC_1_SQRT_2));
    let down = Gate::new("ECR↓", m);
    match direction {
        Direction::Down => down,
        Direction::Up => down.reversed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_theta_at_zero_is_s() {
        assert!(gate_s_theta(0.0).matrix().max_abs_diff(gate_s().matrix()) < 1e-15);
    }

    #[test]
    fn ecr_matches_printed_matrix() {
        let h = FRAC_1_SQRT_2;
        let printed = CMatrix::from_rows([
            [ZERO, ZERO, real(h), c(0.0, h)],
            [ZERO, ZERO, c(0.0, h), real(h)],
            [real(h), c(0.0, -h), ZERO, ZERO],
            [c(0.0, -h), real(h), ZERO, ZERO],
        ]);
        assert!(gate_ecr(Direction::Down).matrix().max_abs_diff(&printed) < 1e-15);
    }

    #[test]
    fn ecr_is_its_own_inverse() {
        let e = gate_ecr(Direction::Down);
        let sq = e.matrix() * e.matrix();
        assert!(sq.max_abs_diff(&CMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn ecr_from_cross_resonance() {
        let xi = pauli_x().kron(&pauli_i());
        let composed = &(gate_cr(Sign::Minus).matrix() * &xi) * gate_cr(Sign::Plus).matrix();
        assert!(composed.max_abs_diff(gate_ecr(Direction::Down).matrix()) < 1e-12);
    }

    #[test]
    fn ecr_up_closed_form() {
        let expected = pauli_i()
            .kron(&pauli_x())
            .sub(&pauli_x().kron(&pauli_y()))
            .scale(real(FRAC_1_SQRT_2));
        assert!(gate_ecr(Direction::Up).matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn h_is_an_involution() {
        let h = gate_h();
        assert!((h.matrix() * h.matrix()).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    #[should_panic(expected = "not unitary")]
    fn non_unitary_gate_is_rejected() {
        Gate::new("bad", CMatrix::from_rows([[ONE, ONE], [ZERO, ONE]]));
    }
}
