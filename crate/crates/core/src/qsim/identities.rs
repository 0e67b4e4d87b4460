use serde::Serialize;

use super::cmatrix::CMatrix;
use super::gates::{
    gate_cnot, gate_ecr, gate_h, gate_s, gate_x, gate_y_pm, gate_z_pm, gate_pauli_z, Direction,
    Sign,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    /// Max entrywise deviation after factoring out `phase`.
    pub deviation: f64,
    /// Global phase in radians, fit on the largest-modulus entry.
    pub phase: f64,
}

fn product(factors: &[CMatrix]) -> CMatrix {
    let mut it = factors.iter();
    let first = it.next().expect("non-empty product").clone();
    it.fold(first, |acc, m| &acc * m)
}

fn check(name: &'static str, lhs: CMatrix, rhs: CMatrix) -> IdentityCheck {
    let (deviation, phase) = lhs.deviation_up_to_phase(&rhs);
    IdentityCheck {
        name,
        deviation,
        phase,
    }
}

/// Decompositions of the native two-qubit gates and the single-qubit
/// relations they rely on. Products are written left to right as operators,
/// so the rightmost factor acts first.
pub fn verify_gate_identities() -> Vec<IdentityCheck> {
    let m = |g: super::gates::Gate| g.matrix().clone();
    let (h, s, x) = (m(gate_h()), m(gate_s()), m(gate_x()));
    let (zp, zm) = (m(gate_z_pm(Sign::Plus)), m(gate_z_pm(Sign::Minus)));
    let (yp, ym) = (m(gate_y_pm(Sign::Plus)), m(gate_y_pm(Sign::Minus)));
    let i2 = CMatrix::identity(2);
    let ecr = m(gate_ecr(Direction::Down));
    let ecr_up = m(gate_ecr(Direction::Up));
    let cnot = m(gate_cnot(Direction::Down));
    let cnot_up = m(gate_cnot(Direction::Up));
    let hh = h.kron(&h);

    vec![
        check("ECR↓·ECR↓ = I", &ecr * &ecr, CMatrix::identity(4)),
        check(
            "ECR↑ = (H⊗H)·ECR↓·(Y+⊗Y−)",
            ecr_up,
            product(&[hh.clone(), ecr.clone(), yp.kron(&ym)]),
        ),
        check(
            "CNOT↓ = (Z+⊗I)·ECR↓·(X⊗S)",
            cnot.clone(),
            product(&[zp.kron(&i2), ecr.clone(), x.kron(&s)]),
        ),
        check(
            "CNOT↑ = (H⊗H)·ECR↓·(S⊗S)·(Z−⊗H)",
            cnot_up.clone(),
            product(&[hh.clone(), ecr.clone(), s.kron(&s), zm.kron(&h)]),
        ),
        check(
            "CNOT↑ = (H⊗H)·CNOT↓·(H⊗H)",
            cnot_up,
            product(&[hh.clone(), cnot, hh]),
        ),
        check("H = Z+·S·Z+", h.clone(), product(&[zp.clone(), s.clone(), zp.clone()])),
        check("Y+ = Z+·S·Z−", yp.clone(), product(&[zp.clone(), s.clone(), zm.clone()])),
        check("Y− = Z−·S·Z+", ym.clone(), product(&[zm, s.clone(), zp])),
        check("Y+ = H·Z", yp, &h * &m(gate_pauli_z())),
        check("Y− = Z·H", ym, &m(gate_pauli_z()) * &h),
        check("S·S = X", &s * &s, x),
        check("H·H = I", &h * &h, i2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_identities_hold() {
        for c in verify_gate_identities() {
            assert!(c.deviation < 1e-12, "{} deviates by {}", c.name, c.deviation);
        }
    }

    #[test]
    fn ecr_square_is_exact_identity_without_phase() {
        let c = &verify_gate_identities()[0];
        assert_eq!(c.phase, 0.0);
    }

    #[test]
    fn s_squared_phase_is_minus_half_pi() {
        let c = verify_gate_identities()
            .into_iter()
            .find(|c| c.name == "S·S = X")
            .unwrap();
        assert!((c.phase + std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
