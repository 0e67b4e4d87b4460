//! Published maxima, scaled as in [`super::ExtremalResult::value`].

use serde::{Deserialize, Serialize};

use super::Model;

/// Absolute tolerance for values known exactly (zeros, ones, closed forms).
pub const EXACT_TOLERANCE: f64 = 1e-10;
/// Two-decimal classical entries: rounding plus optimizer shortfall.
pub const CLASSICAL_TOLERANCE: f64 = 0.005;
pub const QUANTUM_TOLERANCE: f64 = 0.01;
/// Scenario (b) values are of order 1e-5; compared absolutely.
pub const CASE_B_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    /// As printed, e.g. `0.74` or `16/27`.
    pub label: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Reference {
    fn new(label: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            value,
            tolerance,
        }
    }

    fn exact(label: impl Into<String>, value: f64) -> Self {
        Self::new(label, value, EXACT_TOLERANCE)
    }

    pub fn target(&self) -> f64 {
        self.value
    }

    pub fn accepts(&self, v: f64) -> bool {
        (v - self.value).abs() <= self.tolerance
    }
}

/// `(2437 + 340√10) / (2·3¹⁴)`.
pub fn real_pentagon_value() -> f64 {
    (2437.0 + 340.0 * 10f64.sqrt()) / (2.0 * 3f64.powi(14))
}

/// Classical scenario (a), `n = 1..=5`, `d = 2..=8`; empty cells are 1.
pub fn classical_a(n: usize, d: usize) -> Option<Reference> {
    if !(1..=5).contains(&n) || !(2..=8).contains(&d) {
        return None;
    }
    let s = 4f64.powi(n as i32);
    Some(match (n, d) {
        _ if n + 1 > d => Reference::exact("0", 0.0),
        (2, 3) => Reference::exact("0.59 (16/27)", 16.0 / 27.0),
        (4, 5) => Reference::exact("0.74 (2304/3125)", 2304.0 / 3125.0),
        (4, 6) => Reference::new("0.76", 0.76, CLASSICAL_TOLERANCE),
        (4, 7) => Reference::new("0.79", 0.79, CLASSICAL_TOLERANCE),
        (5, 6) => Reference::exact("0.55 (4⁵·5²/6⁶)", s * 25.0 / 6f64.powi(6)),
        (5, 7) => Reference::exact("0.59 (4⁵·12⁻³)", s / 12f64.powi(3)),
        _ => Reference::exact("1", 1.0),
    })
}

/// Quantum scenario (a), `n = 1..=8`, `d ∈ {2, 3}`.
pub fn quantum_a(n: usize, d: usize, model: Model) -> Option<Reference> {
    if !(1..=8).contains(&n) || !(2..=3).contains(&d) || model == Model::Classical {
        return None;
    }
    let s = 4f64.powi(n as i32);
    let complex = model.is_complex();
    let approx = |label: &str, v: f64| Some(Reference::new(label, v, QUANTUM_TOLERANCE));
    match (d, complex, n) {
        (_, _, 1 | 2) | (2, true, 3) | (3, true, 3) => Some(Reference::exact("1", 1.0)),
        (2, _, _) | (3, false, 6..) => Some(Reference::exact("0", 0.0)),
        (3, false, 3) => approx("0.85", s * 0.013208219549514474),
        (3, false, 4) => approx("0.55 (4⁴·27/12500)", s * 27.0 / 12500.0),
        (3, false, 5) => approx("0.38 (4⁵·(2437+340√10)/(2·3¹⁴))", s * real_pentagon_value()),
        (3, true, 4) => approx("0.78", s * 0.003065301182016068),
        (3, true, 5) => approx("0.69", s * 0.000674047929103352),
        (3, true, 6) => approx("0.54 (4⁶·4·27/7⁷)", s * 108.0 / 7f64.powi(7)),
        (3, true, 7) => approx("0.35", s * 0.0000215113826),
        (3, true, 8) => approx("0.25 (4⁸·5¹⁰/3²⁶)", s * 5f64.powi(10) / 3f64.powi(26)),
        _ => None,
    }
}

/// `[(d−1)/n]ⁿ / (n+1)ⁿ⁺¹`.
pub fn frame_bound(n: usize, d: usize) -> f64 {
    ((d as f64 - 1.0) / n as f64).powi(n as i32) / ((n + 1) as f64).powi(n as i32 + 1)
}

/// `(n+1)^−(n+1)`.
pub fn simplex_bound(n: usize) -> f64 {
    ((n + 1) as f64).powi(-(n as i32 + 1))
}

/// Largest root of `x⁴ + 2x³ − 11x² − 11x − 2`.
pub const QUARTIC_ROOT: f64 = 2.988_134_531_981_261;

pub fn quartic(x: f64) -> f64 {
    (((x + 2.0) * x - 11.0) * x - 11.0) * x - 2.0
}

/// Closed form of the complex `n = 4`, `d = 3` family in `x = r²/q²`.
pub fn complex_family_value(x: f64) -> f64 {
    let num = x * x * (1.0 + x).powi(6) * (1.0 + 2.0 * x).powi(6);
    let den = 27.0 * (x * x * (1.0 + x).powi(2) + 2.0 * (2.0 + 3.0 * x).powi(2)).powi(5);
    num / den
}

/// Scenario (b) maxima with a published value or closed form.
pub fn case_b(n: usize, d: usize, model: Model) -> Option<Reference> {
    let problem = super::ExtremalProblem::new(n, d, model, crate::witness::ScenarioKind::B).ok()?;
    if d > n {
        return Some(Reference::new("(n+1)^−(n+1)", simplex_bound(n), CASE_B_TOLERANCE));
    }
    if model == Model::Classical || problem.rank_forced_zero() {
        return Some(Reference::new("0", 0.0, CASE_B_TOLERANCE));
    }
    if super::caseb::frame_exists(n, d, model) {
        return Some(Reference::new("[(d−1)/n]ⁿ/(n+1)ⁿ⁺¹", frame_bound(n, d), CASE_B_TOLERANCE));
    }
    match (n, d, model) {
        (4, 3, Model::QuantumReal) => Some(Reference::new("1.6875e-5", 1.6875e-5, CASE_B_TOLERANCE)),
        (4, 3, Model::QuantumComplex) => Some(Reference::new(
            "1.874577768244e-5",
            complex_family_value(QUARTIC_ROOT),
            CASE_B_TOLERANCE,
        )),
        _ => None,
    }
}
