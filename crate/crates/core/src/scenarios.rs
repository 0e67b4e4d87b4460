//! The two measurement protocols and the product-state counterexample.
//!
//! Scenario (a): each party measures one of four binary observables on half
//! of a two-qubit maximally entangled pair. Outcome "yes" is the measured bit
//! 0 after two `S_θ` rotations; matrix row/column 0 carries the marginals.
//!
//! Scenario (b): each party runs the five-outcome tetrahedron measurement on
//! a working qubit, with a spectator qubit selecting which branch is active.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::exact::{self, Rational, RationalMatrix};
use crate::linalg::Matrix;
use crate::qsim::{
    bloch_projector, gate_cnot, gate_q, gate_s, gate_s_theta, gate_x, gate_z_pm, joint_probability,
    Circuit, Direction, Sign, StateVector, C64,
};
use crate::witness::{ProbabilityMatrix, ScenarioKind};

pub type Bloch = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasurementSet {
    SetI,
    SetII,
    Tetrahedron,
}

impl MeasurementSet {
    pub fn name(self) -> &'static str {
        match self {
            MeasurementSet::SetI => "set1",
            MeasurementSet::SetII => "set2",
            MeasurementSet::Tetrahedron => "tetrahedron",
        }
    }
}

impl fmt::Display for MeasurementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasurementSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "set1" => Ok(MeasurementSet::SetI),
            "set2" => Ok(MeasurementSet::SetII),
            "tetrahedron" => Ok(MeasurementSet::Tetrahedron),
            other => Err(Error::Scenario(format!("unknown measurement set `{other}`"))),
        }
    }
}

/// Values of the two spectator bits `(a₀, b₀)` that activate outcomes 1–4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spectator {
    pub a0: u8,
    pub b0: u8,
}

impl Spectator {
    pub const ALL: [Spectator; 4] = [
        Spectator { a0: 0, b0: 0 },
        Spectator { a0: 0, b0: 1 },
        Spectator { a0: 1, b0: 0 },
        Spectator { a0: 1, b0: 1 },
    ];

    pub fn new(a0: u8, b0: u8) -> Result<Self> {
        if a0 > 1 || b0 > 1 {
            return Err(Error::Scenario(format!("spectator bits ({a0}, {b0}) must be 0 or 1")));
        }
        Ok(Self { a0, b0 })
    }
}

impl fmt::Display for Spectator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a0={} b0={}", self.a0, self.b0)
    }
}

pub const MAX_MIDDLE_QUBITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub set: MeasurementSet,
    /// Qubits between the two measured ends (scenario a only).
    pub middle_qubits: usize,
    pub spectator: Option<Spectator>,
}

impl ScenarioSpec {
    pub fn a(set: MeasurementSet, middle_qubits: usize) -> Result<Self> {
        let spec = Self {
            kind: ScenarioKind::A,
            set,
            middle_qubits,
            spectator: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn b(spectator: Option<Spectator>) -> Self {
        Self {
            kind: ScenarioKind::B,
            set: MeasurementSet::Tetrahedron,
            middle_qubits: 1,
            spectator,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.kind, self.set) {
            (ScenarioKind::A, MeasurementSet::Tetrahedron) => Err(Error::Scenario(
                "scenario a needs measurement set1 or set2".into(),
            )),
            (ScenarioKind::B, s) if s != MeasurementSet::Tetrahedron => Err(Error::Scenario(
                "scenario b uses the tetrahedron measurement".into(),
            )),
            (ScenarioKind::A, _) if self.middle_qubits > MAX_MIDDLE_QUBITS => Err(Error::Scenario(
                format!(
                    "unsupported middle qubit count {} (0..={MAX_MIDDLE_QUBITS})",
                    self.middle_qubits
                ),
            )),
            _ => Ok(()),
        }
    }
}

/// `(±1, ±1, 1)/√3` in the order `(+,+), (+,−), (−,+), (−,−)`.
pub fn measurement_set_i() -> [Bloch; 4] {
    let t = 1.0 / 3.0_f64.sqrt();
    [[t, t, t], [t, -t, t], [-t, t, t], [-t, -t, t]]
}

/// `x`, `y`, `z`, then `(1, 1, 1)/√3`.
pub fn measurement_set_ii() -> [Bloch; 4] {
    let t = 1.0 / 3.0_f64.sqrt();
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [t, t, t]]
}

/// Party A's directions; party B measures the opposite vectors.
pub fn measurement_vectors(set: MeasurementSet) -> Result<[Bloch; 4]> {
    match set {
        MeasurementSet::SetI => Ok(measurement_set_i()),
        MeasurementSet::SetII => Ok(measurement_set_ii()),
        MeasurementSet::Tetrahedron => Err(Error::Scenario(
            "the tetrahedron measurement has no binary settings".into(),
        )),
    }
}

pub fn opposite(a: Bloch) -> Bloch {
    [-a[0], -a[1], -a[2]]
}

/// Angles `(θ₁, θ₂)` such that `S_θ₂·S_θ₁` maps the `+1` eigenstate of `a·σ` to `|0⟩`.
pub fn measurement_angles(a: Bloch) -> (f64, f64) {
    let delta = (-a[2]).clamp(-1.0, 1.0).acos();
    let theta1 = if delta.sin().abs() > 1e-15 {
        (-a[1]).atan2(a[0])
    } else {
        0.0
    };
    (theta1, theta1 + delta)
}

/// Entangling part of scenario (a): a pair created on the middle of the
/// chain and moved outward by CNOT pairs. Ends are qubits 0 and `m + 1`.
pub fn entangling_circuit_a(middle_qubits: usize) -> Result<Circuit> {
    if middle_qubits > MAX_MIDDLE_QUBITS {
        return Err(Error::Scenario(format!(
            "unsupported middle qubit count {middle_qubits} (0..={MAX_MIDDLE_QUBITS})"
        )));
    }
    let last = middle_qubits + 1;
    let mut c = Circuit::new(last + 1);
    let mut left = middle_qubits.div_ceil(2);
    let mut right = left + 1;
    c.push(gate_s(), &[left])?;
    c.push(gate_cnot(Direction::Down), &[left, right])?;
    while left > 0 || right < last {
        if left > 0 {
            c.push(gate_cnot(Direction::Down), &[left, left - 1])?;
            c.push(gate_cnot(Direction::Down), &[left - 1, left])?;
            left -= 1;
        }
        if right < last {
            c.push(gate_cnot(Direction::Down), &[right, right + 1])?;
            c.push(gate_cnot(Direction::Down), &[right + 1, right])?;
            right += 1;
        }
    }
    Ok(c)
}

/// A complete circuit for one setting plus the qubits to read out.
#[derive(Debug, Clone)]
pub struct SettingCircuit {
    pub circuit: Circuit,
    pub measured: [usize; 2],
}

/// Scenario (a) circuit for party A along `a` and party B along `b`
/// (the caller passes B's actual direction, already negated if required).
pub fn build_circuit_a(spec: &ScenarioSpec, a: Bloch, b: Bloch) -> Result<SettingCircuit> {
    if spec.kind != ScenarioKind::A {
        return Err(Error::Scenario("build_circuit_a needs a scenario a spec".into()));
    }
    spec.validate()?;
    let mut circuit = entangling_circuit_a(spec.middle_qubits)?;
    let end = spec.middle_qubits + 1;
    for (qubit, v) in [(0, a), (end, b)] {
        let (t1, t2) = measurement_angles(v);
        circuit.push(gate_s_theta(t1), &[qubit])?;
        circuit.push(gate_s_theta(t2), &[qubit])?;
    }
    Ok(SettingCircuit {
        circuit,
        measured: [0, end],
    })
}

/// Outcome probabilities `(yy, yn, ny, nn)` of scenario (a) for each
/// setting `(i, j)`, simulated through the full circuit.
pub fn ideal_settings_a(spec: &ScenarioSpec) -> Result<[[[f64; 4]; 4]; 4]> {
    let vs = measurement_vectors(spec.set)?;
    let mut out = [[[0.0; 4]; 4]; 4];
    for (i, &a) in vs.iter().enumerate() {
        for (j, &b) in vs.iter().enumerate() {
            let sc = build_circuit_a(spec, a, opposite(b))?;
            let dist = sc.circuit.run()?.marginal(&sc.measured)?;
            out[i][j].copy_from_slice(&dist);
        }
    }
    Ok(out)
}

/// Builds the 5×5 scenario (a) matrix from per-setting distributions.
/// Marginals are averaged over all settings they appear in.
pub fn matrix_from_settings_a(settings: &[[[f64; 4]; 4]; 4]) -> Result<ProbabilityMatrix> {
    let mut p = Matrix::zeros(5, 5);
    p[(0, 0)] = 1.0;
    for i in 0..4 {
        for j in 0..4 {
            let [yy, yn, ny, _] = settings[i][j];
            p[(i + 1, j + 1)] = yy;
            p[(i + 1, 0)] += (yy + yn) / 4.0;
            p[(0, j + 1)] += (yy + ny) / 4.0;
        }
    }
    ProbabilityMatrix::new(p, ScenarioKind::A)
}

pub fn ideal_matrix_a(spec: &ScenarioSpec) -> Result<ProbabilityMatrix> {
    matrix_from_settings_a(&ideal_settings_a(spec)?)
}

/// End-qubit state produced by the entangling circuit, `(|00⟩ − i|11⟩)/√2`.
pub fn ideal_pair_a() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_amplitudes(vec![
        C64::new(h, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, -h),
    ])
    .expect("normalized")
}

/// Same matrix computed directly as `⟨ψ|A_i ⊗ B_j|ψ⟩` on the two-qubit pair,
/// without any circuit.
pub fn direct_matrix_a(set: MeasurementSet) -> Result<ProbabilityMatrix> {
    let vs = measurement_vectors(set)?;
    let psi = ideal_pair_a();
    let id = crate::qsim::Observable::identity(1);
    let mut p = Matrix::zeros(5, 5);
    p[(0, 0)] = 1.0;
    for (i, &a) in vs.iter().enumerate() {
        let pa = bloch_projector(a)?;
        p[(i + 1, 0)] = joint_probability(&psi, &pa, &[0], &id, &[1])?;
        for (j, &b) in vs.iter().enumerate() {
            let pb = bloch_projector(opposite(b))?;
            p[(i + 1, j + 1)] = joint_probability(&psi, &pa, &[0], &pb, &[1])?;
            if i == 0 {
                p[(0, j + 1)] = joint_probability(&psi, &id, &[0], &pb, &[1])?;
            }
        }
    }
    ProbabilityMatrix::new(p, ScenarioKind::A)
}

/// Qubit roles in the seven-qubit scenario (b) register.
pub mod layout_b {
    pub const A0: usize = 0;
    pub const A1: usize = 1;
    pub const A2: usize = 2;
    pub const CONNECTOR: usize = 3;
    pub const B2: usize = 4;
    pub const B1: usize = 5;
    pub const B0: usize = 6;
    pub const QUBITS: usize = 7;
    /// Readout order giving raw index bits `a₀a₁a₂b₀b₁b₂` (a₀ most significant).
    pub const READOUT: [usize; 6] = [A0, A1, A2, B0, B1, B2];
}

/// Seven-qubit circuit: a Bell pair from the connector onto the working
/// qubits, spectator fan-out, then the tetrahedron fragment on each side
/// (working `a₁`/`b₁`, ancilla `a₂`/`b₂`).
pub fn build_circuit_b() -> Circuit {
    use layout_b::*;
    let mut c = Circuit::new(QUBITS);
    let cnot = || gate_cnot(Direction::Down);
    let steps: Vec<(crate::qsim::Gate, Vec<usize>)> = vec![
        (gate_s(), vec![CONNECTOR]),
        (cnot(), vec![CONNECTOR, A1]),
        (cnot(), vec![CONNECTOR, B1]),
        (cnot(), vec![A1, CONNECTOR]),
        (gate_z_pm(Sign::Minus), vec![B1]),
        (gate_x(), vec![B1]),
        (cnot(), vec![A1, A0]),
        (cnot(), vec![B1, B0]),
        (gate_z_pm(Sign::Plus), vec![A0]),
        (gate_s(), vec![A0]),
        (gate_z_pm(Sign::Plus), vec![B0]),
        (gate_s(), vec![B0]),
    ];
    for (g, t) in steps {
        c.push(g, &t).expect("fixed layout is valid");
    }
    c.append(&gate_q(), &[A1, A2]).expect("fixed layout is valid");
    c.append(&gate_q(), &[B1, B2]).expect("fixed layout is valid");
    c
}

pub const RAW_OUTCOMES_B: usize = 64;

/// Ideal distribution over the 64 raw outcomes `a₀a₁a₂b₀b₁b₂`.
pub fn ideal_raw_b() -> Result<Vec<f64>> {
    build_circuit_b().run()?.marginal(&layout_b::READOUT)
}

/// Bits of a raw scenario (b) outcome index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawOutcome {
    pub a: [u8; 3],
    pub b: [u8; 3],
}

impl RawOutcome {
    pub fn from_index(index: usize) -> Self {
        let bit = |k: usize| ((index >> (5 - k)) & 1) as u8;
        Self {
            a: [bit(0), bit(1), bit(2)],
            b: [bit(3), bit(4), bit(5)],
        }
    }

    pub fn index(&self) -> usize {
        self.a
            .iter()
            .chain(&self.b)
            .fold(0, |acc, &bit| (acc << 1) | usize::from(bit))
    }

    pub fn label(&self) -> String {
        format!(
            "{}{}{}{}{}{}",
            self.a[0], self.a[1], self.a[2], self.b[0], self.b[1], self.b[2]
        )
    }
}

/// Maps raw outcomes onto the five aggregated outcomes per party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomeLabeling {
    pub spectator: Spectator,
}

impl OutcomeLabeling {
    /// Row/column index 0..=4 of one party's `(spectator, working, ancilla)` bits.
    /// Working/ancilla bits 00, 10, 01, 11 give 0..=3; the other spectator value gives 4.
    pub fn party_outcome(spectator_value: u8, bits: [u8; 3]) -> usize {
        if bits[0] == spectator_value {
            crate::qsim::q_outcome(bits[1], bits[2])
        } else {
            4
        }
    }

    pub fn map(&self, raw: usize) -> (usize, usize) {
        let o = RawOutcome::from_index(raw);
        (
            Self::party_outcome(self.spectator.a0, o.a),
            Self::party_outcome(self.spectator.b0, o.b),
        )
    }
}

/// Lumps a raw 64-outcome distribution into the 5×5 scenario (b) matrix.
pub fn aggregate_b(raw: &[f64], spectator: Spectator) -> Result<ProbabilityMatrix> {
    if raw.len() != RAW_OUTCOMES_B {
        return Err(Error::Dimension(format!(
            "expected {RAW_OUTCOMES_B} raw outcomes, got {}",
            raw.len()
        )));
    }
    let total: f64 = raw.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Invariant(format!("raw distribution sums to {total}")));
    }
    let labeling = OutcomeLabeling { spectator };
    let mut p = Matrix::zeros(5, 5);
    for (k, &v) in raw.iter().enumerate() {
        let (i, j) = labeling.map(k);
        p[(i, j)] += v;
    }
    // absorb rounding so the sum invariant holds at 1e-12
    let sum = p.sum();
    ProbabilityMatrix::new(p.scale(1.0 / sum), ScenarioKind::B)
}

/// Integer Bloch vector along a coordinate axis (or its negative).
pub type AxisVector = [i64; 3];

const X: AxisVector = [1, 0, 0];
const Y: AxisVector = [0, 1, 0];
const Z: AxisVector = [0, 0, 1];

fn neg(v: AxisVector) -> AxisVector {
    [-v[0], -v[1], -v[2]]
}

fn dot(u: AxisVector, v: AxisVector) -> i64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Two independent qubits: product measurements `(c_i, d_i)` and product
/// states `(a_k, b_k)`; entries are `p(i|2j) − p(i|2j+1)` with
/// `p(i|k) = (1 + a_k·c_i)(1 + b_k·d_i)/4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFamily {
    pub c: [AxisVector; 7],
    pub d: [AxisVector; 7],
    pub a: [AxisVector; 14],
    pub b: [AxisVector; 14],
}

impl ProductFamily {
    /// The listed family. `a₈, a₁₀` appear twice in the listing; the
    /// `(0,1,0)` reading is the only one consistent with rows 0–5 of the
    /// printed matrix.
    pub fn listed() -> Self {
        let c = [X, X, X, Y, Y, Y, Z];
        let d = [X, Y, Z, X, Y, Z, X];
        let a_even = [X, X, X, Y, Y, Y, Z];
        let b_even = [X, Y, Z, X, Y, Z, X];
        let mut a = [X; 14];
        let mut b = [X; 14];
        for j in 0..7 {
            a[2 * j] = a_even[j];
            a[2 * j + 1] = neg(a_even[j]);
            b[2 * j] = b_even[j];
            b[2 * j + 1] = if j < 3 { neg(b_even[j]) } else { b_even[j] };
        }
        Self { c, d, a, b }
    }

    pub fn probability(&self, measurement: usize, state: usize) -> Rational {
        let left = 1 + dot(self.a[state], self.c[measurement]);
        let right = 1 + dot(self.b[state], self.d[measurement]);
        exact::ratio(left * right, 4)
    }

    pub fn matrix(&self) -> RationalMatrix {
        let rows = (0..7)
            .map(|i| {
                (0..7)
                    .map(|j| self.probability(i, 2 * j) - self.probability(i, 2 * j + 1))
                    .collect()
            })
            .collect();
        RationalMatrix::from_rows(rows).expect("7×7")
    }
}

/// The printed 7×7 matrix.
pub fn printed_counterexample() -> RationalMatrix {
    let h = || exact::ratio(1, 2);
    let o = || exact::integer(1);
    let z = || exact::integer(0);
    RationalMatrix::from_rows(vec![
        vec![o(), h(), h(), z(), z(), z(), z()],
        vec![h(), o(), h(), z(), z(), z(), z()],
        vec![h(), h(), o(), z(), z(), z(), z()],
        vec![h(), z(), z(), o(), h(), h(), z()],
        vec![z(), h(), z(), h(), o(), h(), z()],
        vec![z(), z(), h(), h(), h(), o(), z()],
        vec![h(), z(), z(), h(), z(), z(), h()],
    ])
    .expect("7×7")
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub constructed: RationalMatrix,
    pub constructed_det: Rational,
    pub printed: RationalMatrix,
    pub printed_det: Rational,
    /// `(row, col)` cells where the construction and the printed matrix differ.
    pub mismatches: Vec<(usize, usize)>,
}

impl Counterexample {
    pub fn matches_printed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Product-state counterexample to a vanishing determinant in the
/// prepare-and-measure setting, in exact arithmetic.
pub fn prepare_measure_counterexample() -> Counterexample {
    let constructed = ProductFamily::listed().matrix();
    let printed = printed_counterexample();
    let mismatches = (0..7)
        .flat_map(|i| (0..7).map(move |j| (i, j)))
        .filter(|&(i, j)| constructed.get(i, j) != printed.get(i, j))
        .collect();
    Counterexample {
        constructed_det: exact::determinant(&constructed),
        printed_det: exact::determinant(&printed),
        constructed,
        printed,
        mismatches,
    }
}
