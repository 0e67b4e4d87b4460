//! Scenario (b): one measurement with `n + 1` outcomes on each side.
//!
//! With rank-one unnormalized effects `A′_i = |v_i⟩⟨v_i|` the joint
//! distribution is `p_ij = |⟨v_i|v_j⟩|² / Z`, `Z = Σ_ij |⟨v_i|v_j⟩|²`.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{determinant, Matrix};
use crate::par::map_indices;
use crate::qsim::cmatrix::{c, C64, ZERO};
use crate::stats::rng::{derive_seed, stream_rng};
use crate::witness::ScenarioKind;

use super::optimize::{maximize, BfgsOptions};
use super::reference::case_b;
use super::{ExtremalProblem, ExtremalResult, Model, Parameters, SearchOptions};

pub const MAX_CASE_B_N: usize = 5;

fn gram(vectors: &[Vec<C64>]) -> Matrix {
    let k = vectors.len();
    Matrix::from_fn(k, k, |i, j| {
        vectors[i]
            .iter()
            .zip(&vectors[j])
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .norm_sqr()
    })
}

pub fn effects_matrix(vectors: &[Vec<C64>]) -> Result<Matrix> {
    let d = vectors.first().map_or(0, Vec::len);
    if d == 0 || vectors.iter().any(|v| v.len() != d) {
        return Err(Error::Dimension("effect vectors must share a nonzero length".into()));
    }
    let p = gram(vectors);
    let z = p.sum();
    if !(z > 0.0) {
        return Err(Error::Argument("all effect vectors vanish".into()));
    }
    Ok(p.scale(1.0 / z))
}

/// Whether `n + 1` equiangular lines spanning a tight frame exist in dimension `d`.
pub fn frame_exists(n: usize, d: usize, model: Model) -> bool {
    match model {
        Model::Classical => false,
        Model::QuantumReal => d == n || (n, d) == (5, 3),
        Model::QuantumComplex => d == n || (n, d) == (3, 2) || (n, d) == (5, 3),
    }
}

fn normalized(v: Vec<f64>) -> Vec<C64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| c(x / norm, 0.0)).collect()
}

/// `n + 1` unit vectors in `ℝⁿ` pointing at the vertices of a regular simplex.
pub fn simplex_vectors(n: usize) -> Vec<Vec<C64>> {
    let alpha = (1.0 - ((n + 1) as f64).sqrt()) / n as f64;
    let mut points: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
        .collect();
    points.push(vec![alpha; n]);
    let centre: Vec<f64> = (0..n)
        .map(|k| points.iter().map(|p| p[k]).sum::<f64>() / (n + 1) as f64)
        .collect();
    points
        .into_iter()
        .map(|p| normalized(p.iter().zip(&centre).map(|(a, b)| a - b).collect()))
        .collect()
}

/// Qubit states whose Bloch vectors form a regular tetrahedron.
pub fn tetrahedron_vectors() -> Vec<Vec<C64>> {
    let theta = (-1.0f64 / 3.0).acos();
    let mut out = vec![vec![c(1.0, 0.0), ZERO]];
    for k in 0..3 {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        out.push(vec![
            c((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
        ]);
    }
    out
}

/// The six diagonals of the icosahedron.
pub fn icosahedron_vectors() -> Vec<Vec<C64>> {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    [
        [0.0, 1.0, g],
        [0.0, -1.0, g],
        [1.0, g, 0.0],
        [-1.0, g, 0.0],
        [g, 0.0, 1.0],
        [g, 0.0, -1.0],
    ]
    .into_iter()
    .map(|v| normalized(v.to_vec()))
    .collect()
}

/// Equiangular tight frame with `n + 1` lines in dimension `d`, embedded in `ℂ^d`.
pub fn frame_vectors(n: usize, d: usize, model: Model) -> Option<Vec<Vec<C64>>> {
    if !frame_exists(n, d, model) {
        return None;
    }
    Some(match (n, d) {
        (3, 2) => tetrahedron_vectors(),
        (5, 3) => icosahedron_vectors(),
        _ => simplex_vectors(n),
    })
}

/// `e_0, …, e_n` in `ℂ^d`, `d > n`: the uniform diagonal distribution.
pub fn uniform_vectors(n: usize, d: usize) -> Vec<Vec<C64>> {
    (0..=n)
        .map(|i| (0..d).map(|k| if k == i { c(1.0, 0.0) } else { ZERO }).collect())
        .collect()
}

fn log_witness(vectors: &[Vec<C64>]) -> f64 {
    let p = gram(vectors);
    let z = p.sum();
    match determinant(&p) {
        Ok(v) if v > 0.0 && z > 0.0 => v.ln() - p.rows() as f64 * z.ln(),
        _ => f64::NEG_INFINITY,
    }
}

fn decode(x: &[f64], count: usize, d: usize, complex: bool) -> Vec<Vec<C64>> {
    let width = if complex { 2 * d } else { d };
    (0..count)
        .map(|i| {
            let raw = &x[i * width..(i + 1) * width];
            (0..d)
                .map(|k| C64::new(raw[k], if complex { raw[d + k] } else { 0.0 }))
                .collect()
        })
        .collect()
}

fn result(problem: ExtremalProblem, parameters: Parameters, restarts: usize, rank_forced: bool) -> Result<ExtremalResult> {
    let value = if rank_forced { 0.0 } else { parameters.witness()? };
    Ok(ExtremalResult {
        reference: case_b(problem.n, problem.d, problem.model),
        problem,
        value,
        parameters,
        restarts,
        rank_forced,
    })
}

/// Maximum of raw `W` in scenario (b).
pub fn max_b(n: usize, d: usize, model: Model, opts: &SearchOptions) -> Result<ExtremalResult> {
    let problem = ExtremalProblem::new(n, d, model, ScenarioKind::B)?;
    if n > MAX_CASE_B_N {
        return Err(Error::Argument(format!("scenario (b) search supports n ≤ {MAX_CASE_B_N}")));
    }
    if d > n {
        return result(problem, Parameters::Effects { vectors: uniform_vectors(n, d) }, 0, false);
    }
    if model == Model::Classical || problem.rank_forced_zero() {
        return result(problem, Parameters::Trivial { size: n + 1 }, 0, true);
    }
    if let Some(vectors) = frame_vectors(n, d, model) {
        return result(problem, Parameters::Effects { vectors }, 0, false);
    }
    let complex = model.is_complex();
    let count = n + 1;
    let dim = count * d * if complex { 2 } else { 1 };
    let objective = |x: &[f64]| log_witness(&decode(x, count, d, complex));
    let restarts = opts.restarts.max(1);
    let runs = map_indices(opts.exec, restarts, |r| {
        let mut rng = stream_rng(derive_seed(opts.seed, r as u64), 1);
        let x0: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        maximize(objective, x0, &BfgsOptions::default())
    });
    let best = runs
        .into_iter()
        .fold(None::<(Vec<f64>, f64)>, |best, run| match best {
            Some(b) if b.1 >= run.1 => Some(b),
            _ => Some(run),
        })
        .expect("at least one restart");
    let mut vectors = decode(&best.0, count, d, complex);
    // overall scale is free; fix Σ|v|² = count
    let total: f64 = vectors.iter().flatten().map(|z| z.norm_sqr()).sum();
    let s = (count as f64 / total).sqrt();
    for v in &mut vectors {
        for z in v.iter_mut() {
            *z *= s;
        }
    }
    result(problem, Parameters::Effects { vectors }, restarts, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::reference::{frame_bound, simplex_bound};

    #[test]
    fn frames_are_equiangular() {
        for (n, d, m) in [(3, 3, Model::QuantumReal), (3, 2, Model::QuantumComplex), (5, 3, Model::QuantumReal)] {
            let vs = frame_vectors(n, d, m).unwrap();
            let g = gram(&vs);
            let off = (n + 1 - d) as f64 / (d * n) as f64;
            for i in 0..=n {
                assert!((g[(i, i)] - 1.0).abs() < 1e-14);
                for j in 0..i {
                    assert!((g[(i, j)] - off).abs() < 1e-14, "{n} {d} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn closed_forms() {
        let w = determinant(&effects_matrix(&simplex_vectors(4)).unwrap()).unwrap();
        assert!((w - frame_bound(4, 4)).abs() < 1e-16);
        let w = determinant(&effects_matrix(&uniform_vectors(4, 5)).unwrap()).unwrap();
        assert!((w - simplex_bound(4)).abs() < 1e-16);
    }

    #[test]
    fn effects_matrix_is_a_distribution() {
        let p = effects_matrix(&tetrahedron_vectors()).unwrap();
        assert!((p.sum() - 1.0).abs() < 1e-14);
        assert!(effects_matrix(&[vec![ZERO]]).is_err());
    }
}
