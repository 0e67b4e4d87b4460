//! Quantum scenario (a) with a Schmidt-form state `Σ ψ_k |kk⟩` and rank-one
//! projectors `A_i = |v_i⟩⟨v_i|`, `B_i = A_i*`, for which
//! `p_ij = |Σ_k ψ_k v_ik v̄_jk|²` and `p_i0 = Σ_k ψ_k² |v_ik|²`.
//! This `p` is a Gram matrix, so `det p ≥ 0` and `log det p` is maximized.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{determinant, Matrix};
use crate::par::map_indices;
use crate::qsim::cmatrix::{C64, ZERO};
use crate::stats::rng::{derive_seed, stream_rng};
use crate::witness::ScenarioKind;

use super::optimize::{maximize, BfgsOptions};
use super::reference::quantum_a;
use super::{ExtremalProblem, ExtremalResult, Model, Parameters, SearchOptions};

fn check_vectors(vectors: &[Vec<C64>], d: usize) -> Result<()> {
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::Dimension(format!("vector of length {} in dimension {d}", v.len())));
    }
    Ok(())
}

pub fn schmidt_matrix(psi: &[f64], vectors: &[Vec<C64>]) -> Result<Matrix> {
    let d = psi.len();
    check_vectors(vectors, d)?;
    let n = vectors.len();
    let mut p = Matrix::zeros(n + 1, n + 1);
    p[(0, 0)] = psi.iter().map(|x| x * x).sum();
    for i in 0..n {
        let m: f64 = (0..d).map(|k| psi[k] * psi[k] * vectors[i][k].norm_sqr()).sum();
        p[(i + 1, 0)] = m;
        p[(0, i + 1)] = m;
        for j in i..n {
            let s: C64 = (0..d).map(|k| vectors[i][k] * vectors[j][k].conj() * psi[k]).sum();
            p[(i + 1, j + 1)] = s.norm_sqr();
            p[(j + 1, i + 1)] = s.norm_sqr();
        }
    }
    Ok(p)
}

/// `p_ij = ⟨ψ|A_i ⊗ A_j|ψ⟩` for a state on `d × d` (index `a·d + b`), `A_0 = 1`.
pub fn bipartite_matrix(state: &[C64], vectors: &[Vec<C64>]) -> Result<Matrix> {
    let d = vectors.first().map_or(0, Vec::len);
    if d == 0 || state.len() != d * d {
        return Err(Error::Dimension(format!("state of length {} for local dimension {d}", state.len())));
    }
    check_vectors(vectors, d)?;
    let n = vectors.len();
    let amp = |a: usize, b: usize| state[a * d + b];
    // (⟨v_i| ⊗ 1)|ψ⟩ and (1 ⊗ ⟨v_j|)|ψ⟩
    let left: Vec<Vec<C64>> = vectors
        .iter()
        .map(|v| (0..d).map(|b| (0..d).map(|a| v[a].conj() * amp(a, b)).sum()).collect())
        .collect();
    let right: Vec<Vec<C64>> = vectors
        .iter()
        .map(|v| (0..d).map(|a| (0..d).map(|b| v[b].conj() * amp(a, b)).sum()).collect())
        .collect();
    let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut p = Matrix::zeros(n + 1, n + 1);
    p[(0, 0)] = norm(state);
    for i in 0..n {
        p[(i + 1, 0)] = norm(&left[i]);
        p[(0, i + 1)] = norm(&right[i]);
        for j in 0..n {
            let s: C64 = (0..d).map(|b| left[i][b] * vectors[j][b].conj()).sum();
            p[(i + 1, j + 1)] = s.norm_sqr();
        }
    }
    Ok(p)
}

/// Unit vectors from raw coordinates: `d` reals, or `d` real and `d` imaginary parts.
pub(crate) fn decode_vectors(x: &[f64], count: usize, d: usize, complex: bool) -> Option<Vec<Vec<C64>>> {
    let width = if complex { 2 * d } else { d };
    (0..count)
        .map(|i| {
            let raw = &x[i * width..(i + 1) * width];
            let v: Vec<C64> = (0..d)
                .map(|k| C64::new(raw[k], if complex { raw[d + k] } else { 0.0 }))
                .collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (norm > 1e-9).then(|| v.iter().map(|z| z / norm).collect())
        })
        .collect()
}

fn decode(x: &[f64], n: usize, d: usize, complex: bool) -> Option<(Vec<f64>, Vec<Vec<C64>>)> {
    let norm = x[..d].iter().map(|t| t * t).sum::<f64>().sqrt();
    if norm < 1e-9 {
        return None;
    }
    let psi = x[..d].iter().map(|t| t / norm).collect();
    Some((psi, decode_vectors(&x[d..], n, d, complex)?))
}

fn log_det(p: &Matrix) -> f64 {
    match determinant(p) {
        Ok(v) if v > 0.0 => v.ln(),
        _ => f64::NEG_INFINITY,
    }
}

/// Maximum of `4ⁿ·det p` over Schmidt-form states and rank-one projectors.
pub fn quantum_max_a(n: usize, d: usize, model: Model, opts: &SearchOptions) -> Result<ExtremalResult> {
    if model == Model::Classical {
        return Err(Error::Argument("quantum search needs the real or complex model".into()));
    }
    let problem = ExtremalProblem::new(n, d, model, ScenarioKind::A)?;
    if !(2..=3).contains(&d) {
        return Err(Error::Argument(format!("quantum search supports d ∈ {{2, 3}}, got {d}")));
    }
    let reference = quantum_a(n, d, model);
    if problem.rank_forced_zero() {
        return Ok(ExtremalResult {
            problem,
            value: 0.0,
            parameters: Parameters::Trivial { size: n + 1 },
            reference,
            restarts: 0,
            rank_forced: true,
        });
    }
    let complex = model.is_complex();
    let dim = d + n * d * if complex { 2 } else { 1 };
    let objective = |x: &[f64]| match decode(x, n, d, complex) {
        Some((psi, vs)) => schmidt_matrix(&psi, &vs).map_or(f64::NEG_INFINITY, |p| log_det(&p)),
        None => f64::NEG_INFINITY,
    };
    let restarts = opts.restarts.max(1);
    let runs = map_indices(opts.exec, restarts, |r| {
        let mut rng = stream_rng(derive_seed(opts.seed, r as u64), 0);
        let x0: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        maximize(objective, x0, &BfgsOptions::default())
    });
    let (x, _) = runs
        .into_iter()
        .fold(None::<(Vec<f64>, f64)>, |best, run| match best {
            Some(b) if b.1 >= run.1 => Some(b),
            _ => Some(run),
        })
        .expect("at least one restart");
    let (psi, vectors) = decode(&x, n, d, complex)
        .ok_or_else(|| Error::Invariant("optimizer left the parameter domain".into()))?;
    let parameters = Parameters::Schmidt { psi, vectors };
    let value = parameters.witness()?.max(0.0) * problem.scale();
    Ok(ExtremalResult {
        problem,
        value,
        parameters,
        reference,
        restarts,
        rank_forced: false,
    })
}

/// Rank-one projector vectors with real entries.
pub fn real_vectors(rows: &[&[f64]]) -> Vec<Vec<C64>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
        .collect()
}

/// `(|ab⟩ − |ba⟩)/√2` style states from explicit amplitude pairs.
pub fn state_from(d: usize, terms: &[(usize, usize, C64)]) -> Vec<C64> {
    let mut s = vec![ZERO; d * d];
    for &(a, b, c) in terms {
        s[a * d + b] += c;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::cmatrix::c;

    #[test]
    fn schmidt_and_bipartite_forms_agree() {
        let psi = [0.6, 0.8];
        let vs = vec![vec![c(0.6, 0.0), c(0.0, 0.8)], vec![c(0.8, 0.0), c(-0.6, 0.0)]];
        let p1 = schmidt_matrix(&psi, &vs).unwrap();
        // B = A* on Σψ|kk⟩ equals A on the left and A* on the right
        let state = state_from(2, &[(0, 0, c(0.6, 0.0)), (1, 1, c(0.8, 0.0))]);
        let conj: Vec<Vec<C64>> = vs.iter().map(|v| v.iter().map(|z| z.conj()).collect()).collect();
        let n = vs.len();
        let mut p2 = Matrix::zeros(n + 1, n + 1);
        let full = bipartite_matrix(&state, &vs).unwrap();
        let mixed: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..2)
                            .flat_map(|a| (0..2).map(move |b| (a, b)))
                            .map(|(a, b)| vs[i][a].conj() * conj[j][b].conj() * state[a * 2 + b])
                            .sum::<C64>()
                            .norm_sqr()
                    })
                    .collect()
            })
            .collect();
        p2[(0, 0)] = 1.0;
        for i in 0..n {
            p2[(i + 1, 0)] = full[(i + 1, 0)];
            p2[(0, i + 1)] = full[(i + 1, 0)];
            for j in 0..n {
                p2[(i + 1, j + 1)] = mixed[i][j];
            }
        }
        assert!(p1.sub(&p2).unwrap().max_abs() < 1e-14);
    }
}
