//! The determinant witness, its finite-statistics error and its first-order
//! sensitivity.
//!
//! Rows of a [`ProbabilityMatrix`] are indexed by outcomes of party A and
//! columns by outcomes of party B, in the canonical order produced by the
//! scenario builders. The witness is the signed determinant of that matrix;
//! reordering outcomes can flip its sign, never its magnitude.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Tolerance applied to the entry-range and normalization invariants.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Which of the two measurement protocols produced a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    /// `n` binary measurements per party; row/column 0 hold the marginals
    /// and the corner is fixed at 1.
    A,
    /// One measurement with `n + 1` outcomes per party; the entries form a
    /// single joint distribution.
    B,
}

impl ScenarioKind {
    pub fn label(self) -> &'static str {
        match self {
            ScenarioKind::A => "a",
            ScenarioKind::B => "b",
        }
    }
}

/// A validated `(n+1)×(n+1)` matrix of joint outcome probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityMatrix {
    entries: Matrix,
    kind: ScenarioKind,
}

impl ProbabilityMatrix {
    pub fn new(entries: Matrix, kind: ScenarioKind) -> Result<Self> {
        Self::with_tolerance(entries, kind, PROBABILITY_TOLERANCE)
    }

    pub fn with_tolerance(entries: Matrix, kind: ScenarioKind, tol: f64) -> Result<Self> {
        if !entries.is_square() || entries.rows() < 2 {
            return Err(Error::Dimension(format!(
                "probability matrix must be square with size ≥ 2, got {}×{}",
                entries.rows(),
                entries.cols()
            )));
        }
        if !entries.is_finite() {
            return Err(Error::Invariant("non-finite probability".into()));
        }
        let size = entries.rows();
        for i in 0..size {
            for j in 0..size {
                let v = entries[(i, j)];
                if v < -tol || v > 1.0 + tol {
                    return Err(Error::Invariant(format!(
                        "entry ({i},{j}) = {v} outside [0, 1]"
                    )));
                }
            }
        }
        match kind {
            ScenarioKind::A => {
                if (entries[(0, 0)] - 1.0).abs() > tol {
                    return Err(Error::Invariant(format!(
                        "kind A corner entry must be 1, got {}",
                        entries[(0, 0)]
                    )));
                }
            }
            ScenarioKind::B => {
                let total = entries.sum();
                if (total - 1.0).abs() > tol {
                    return Err(Error::Invariant(format!(
                        "kind B entries must sum to 1, got {total}"
                    )));
                }
            }
        }
        Ok(Self { entries, kind })
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    /// Matrix size `n + 1`.
    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    /// Number of measurements (kind A) or outcomes minus one (kind B).
    pub fn n(&self) -> usize {
        self.size() - 1
    }

    /// Same data with the parties exchanged.
    pub fn transposed(&self) -> Self {
        Self {
            entries: self.entries.transpose(),
            kind: self.kind,
        }
    }
}

/// Adjugate of a probability matrix, the sensitivity kernel of the witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjugateMatrix(Matrix);

impl AdjugateMatrix {
    pub fn of(m: &Matrix) -> Result<Self> {
        linalg::adjugate(m).map(Self)
    }

    pub fn entries(&self) -> &Matrix {
        &self.0
    }

    /// True when every cofactor vanishes relative to the scale of `p`, i.e.
    /// the rank of `p` is at least two below full.
    pub fn is_degenerate(&self, p: &Matrix) -> bool {
        let n = p.rows().saturating_sub(1) as i32;
        let scale = p.max_abs().max(f64::MIN_POSITIVE).powi(n);
        self.0.max_abs() <= 1e-12 * scale
    }
}

pub fn adjugate(m: &Matrix) -> Result<AdjugateMatrix> {
    AdjugateMatrix::of(m)
}

pub fn witness(p: &ProbabilityMatrix) -> f64 {
    linalg::determinant(p.entries()).expect("probability matrices are square")
}

/// One standard deviation of the witness under the null hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessError {
    pub delta: f64,
    /// False when the adjugate vanishes; the linearized error is then
    /// meaningless and second-order minors would be needed.
    pub reliable: bool,
}

/// `ΔW` from the delta method around `⟨W⟩ = 0`.
///
/// Kind A: `N ΔW² = Σ_kj 𝒜_jk² p_kj (1 − p_kj)`, every entry including the
/// marginals treated as an independent binomial estimate from `n_shots`
/// trials. With pooled marginals that is an upper estimate.
///
/// Kind B: `N ΔW² = Σ_kj 𝒜_jk² p_kj − (Σ_kj 𝒜_jk p_kj)²`, the multinomial
/// variance of `Tr(𝒜 p̂)` with `n_shots` total trials.
pub fn witness_error(p: &ProbabilityMatrix, n_shots: u64) -> Result<WitnessError> {
    if n_shots == 0 {
        return Err(Error::Argument("number of shots must be positive".into()));
    }
    let adj = AdjugateMatrix::of(p.entries())?;
    Ok(witness_error_with_adjugate(p, &adj, n_shots))
}

pub(crate) fn witness_error_with_adjugate(
    p: &ProbabilityMatrix,
    adj: &AdjugateMatrix,
    n_shots: u64,
) -> WitnessError {
    let m = p.entries();
    let a = adj.entries();
    let size = m.rows();
    let mut quad = 0.0;
    let mut lin = 0.0;
    for k in 0..size {
        for j in 0..size {
            let pkj = m[(k, j)];
            let ajk = a[(j, k)];
            match p.kind() {
                ScenarioKind::A => quad += ajk * ajk * pkj * (1.0 - pkj),
                ScenarioKind::B => {
                    quad += ajk * ajk * pkj;
                    lin += ajk * pkj;
                }
            }
        }
    }
    let var = match p.kind() {
        ScenarioKind::A => quad,
        ScenarioKind::B => quad - lin * lin,
    };
    WitnessError {
        delta: (var.max(0.0) / n_shots as f64).sqrt(),
        reliable: !adj.is_degenerate(m),
    }
}

/// First-order change of the witness, `δW = Tr(𝒜 δp)`.
pub fn first_order_shift(p: &ProbabilityMatrix, delta_p: &Matrix) -> Result<f64> {
    if delta_p.rows() != p.size() || delta_p.cols() != p.size() {
        return Err(Error::Dimension(format!(
            "perturbation is {}×{}, matrix is {}×{}",
            delta_p.rows(),
            delta_p.cols(),
            p.size(),
            p.size()
        )));
    }
    let adj = AdjugateMatrix::of(p.entries())?;
    Ok(adj.entries().matmul(delta_p)?.trace())
}

/// Witness, its error, and the job-averaged variants for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Signed witness from the pooled counts.
    pub w: f64,
    pub delta_w: f64,
    /// Mean of the per-job witnesses.
    pub w_prime: f64,
    pub delta_w_prime: f64,
    /// `w / delta_w` (zero when `delta_w` is zero).
    pub z_score: f64,
    pub z_score_prime: f64,
    /// Total trials per setting (kind A) or in total (kind B).
    pub n_shots: u64,
    pub job_count: usize,
    pub reliable: bool,
}

impl WitnessReport {
    pub fn abs_w(&self) -> f64 {
        self.w.abs()
    }
}

pub(crate) fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kind_b_from(raw: &[f64], size: usize) -> ProbabilityMatrix {
        let total: f64 = raw.iter().sum();
        let m = Matrix::from_fn(size, size, |i, j| raw[i * size + j] / total);
        ProbabilityMatrix::new(m, ScenarioKind::B).unwrap()
    }

    fn invertible_kind_b() -> ProbabilityMatrix {
        let raw: Vec<f64> = (0..25).map(|k| 1.0 + ((k * 7) % 5) as f64 + (k % 6 == 0) as u8 as f64 * 3.0).collect();
        kind_b_from(&raw, 5)
    }

    #[test]
    fn invariants_are_enforced() {
        let mut m = Matrix::identity(3);
        assert!(ProbabilityMatrix::new(m.clone(), ScenarioKind::A).is_ok());
        assert!(ProbabilityMatrix::new(m.clone(), ScenarioKind::B).is_err());
        m[(0, 0)] = 0.5;
        assert!(ProbabilityMatrix::new(m.clone(), ScenarioKind::A).is_err());
        m[(1, 2)] = 1.5;
        assert!(ProbabilityMatrix::new(m, ScenarioKind::A).is_err());
        assert!(ProbabilityMatrix::new(Matrix::zeros(2, 3), ScenarioKind::A).is_err());
    }

    #[test]
    fn uniform_kind_b_is_flagged_unreliable() {
        let p = kind_b_from(&[1.0; 25], 5);
        assert!(witness(&p).abs() < 1e-15);
        let err = witness_error(&p, 1000).unwrap();
        assert!(!err.reliable);
    }

    #[test]
    fn zero_shots_is_an_argument_error() {
        let p = invertible_kind_b();
        assert!(matches!(witness_error(&p, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn kind_a_error_formula_by_hand() {
        // 2×2: adj = [[d, -b], [-c, a]]; p = [[1, x], [y, z]]
        let (x, y, z) = (0.4, 0.3, 0.2);
        let p = ProbabilityMatrix::new(Matrix::from_rows(&[[1.0, x], [y, z]]).unwrap(), ScenarioKind::A).unwrap();
        // Σ_kj 𝒜_jk² p_kj(1-p_kj): 𝒜_00 = z pairs with p_00 = 1 (zero term),
        // 𝒜_10 = -y pairs with p_01 = x, 𝒜_01 = -x pairs with p_10 = y, 𝒜_11 = 1 pairs with p_11 = z
        let expected = (y * y * x * (1.0 - x) + x * x * y * (1.0 - y) + z * (1.0 - z)) / 100.0;
        let got = witness_error(&p, 100).unwrap();
        assert!((got.delta - expected.sqrt()).abs() < 1e-15);
        assert!(got.reliable);
    }

    #[test]
    fn zero_perturbation_has_zero_shift() {
        let p = invertible_kind_b();
        assert_eq!(first_order_shift(&p, &Matrix::zeros(5, 5)).unwrap(), 0.0);
        assert!(first_order_shift(&p, &Matrix::zeros(4, 4)).is_err());
    }

    #[test]
    fn identity_shift_matches_trace_of_adjugate_and_finite_difference() {
        let p = invertible_kind_b();
        let eps = 1e-6;
        let shift = first_order_shift(&p, &Matrix::identity(5).scale(eps)).unwrap();
        let adj = adjugate(p.entries()).unwrap();
        assert!((shift - eps * adj.entries().trace()).abs() < 1e-18);
        let perturbed = p.entries().add(&Matrix::identity(5).scale(eps)).unwrap();
        let fd = linalg::determinant(&perturbed).unwrap() - witness(&p);
        assert!((fd - shift).abs() < 1e-3 * shift.abs(), "fd {fd} vs shift {shift}");
    }

    fn random_kind_b() -> impl Strategy<Value = ProbabilityMatrix> {
        (2usize..6).prop_flat_map(|size| {
            prop::collection::vec(0.01f64..1.0, size * size).prop_map(move |raw| kind_b_from(&raw, size))
        })
    }

    proptest! {
        #[test]
        fn shift_is_the_directional_derivative(p in random_kind_b(), dir in prop::collection::vec(-1.0f64..1.0, 36)) {
            let n = p.size();
            let dp = Matrix::from_fn(n, n, |i, j| dir[i * n + j]);
            let h = 1e-5;
            let plus = linalg::determinant(&p.entries().add(&dp.scale(h)).unwrap()).unwrap();
            let minus = linalg::determinant(&p.entries().sub(&dp.scale(h)).unwrap()).unwrap();
            let central = (plus - minus) / (2.0 * h);
            let shift = first_order_shift(&p, &dp).unwrap();
            prop_assert!((central - shift).abs() < 1e-6);
        }

        #[test]
        fn error_is_symmetric_under_party_exchange(p in random_kind_b(), shots in 1u64..1_000_000) {
            let a = witness_error(&p, shots).unwrap();
            let b = witness_error(&p.transposed(), shots).unwrap();
            prop_assert!((a.delta - b.delta).abs() <= 1e-12 * a.delta.max(1e-300));
        }

        #[test]
        fn scaling_a_row_scales_the_witness(p in random_kind_b(), c in 0.0f64..1.0, row in 0usize..6) {
            let n = p.size();
            let row = row % n;
            let mut m = p.entries().clone();
            for j in 0..n {
                m[(row, j)] *= c;
            }
            let scaled = linalg::determinant(&m).unwrap();
            prop_assert!((scaled - c * witness(&p)).abs() < 1e-15);
        }
    }
}
