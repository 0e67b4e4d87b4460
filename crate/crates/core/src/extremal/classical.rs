//! Classical scenario (a): `p = A ρ Aᵀ` with binary `A` and diagonal `ρ`.
//!
//! A column of `A` is a pattern in `{1} × {0,1}ⁿ`, stored as a bitmask over
//! rows `1..=n`. Duplicated columns never help, so a configuration is a set of
//! at most `d` distinct patterns with weights on the simplex. Complementing a
//! row (`row_i → row_0 − row_i`) leaves `|det p|` unchanged, so the all-zero
//! pattern can always be assumed present.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, Matrix};
use crate::par::map_indices;
use crate::stats::rng::{derive_seed, stream_rng};

use super::optimize::best_on_interval;
use super::reference::classical_a;
use super::{ExtremalProblem, ExtremalResult, Model, Parameters, SearchOptions};
use crate::witness::ScenarioKind;

/// Subsets enumerated exhaustively up to this count.
pub const EXHAUSTIVE_LIMIT: u64 = 250_000;

const MAX_CLASSICAL_N: usize = 5;

fn column(mask: u32, n: usize) -> Vec<f64> {
    std::iter::once(1.0)
        .chain((0..n).map(|r| f64::from((mask >> r) & 1)))
        .collect()
}

/// `A ρ Aᵀ` for explicit rows `1..=n` of `A`.
pub fn classical_matrix(rows: &[Vec<u8>], weights: &[f64]) -> Matrix {
    let n = rows.len();
    let entry = |r: usize, z: usize| if r == 0 { 1.0 } else { f64::from(rows[r - 1][z]) };
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        weights
            .iter()
            .enumerate()
            .map(|(z, w)| entry(i, z) * w * entry(j, z))
            .sum()
    })
}

fn moment(cols: &[Vec<f64>], weights: &[f64]) -> Matrix {
    let m = cols[0].len();
    let mut out = Matrix::zeros(m, m);
    for (a, &w) in cols.iter().zip(weights) {
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] += w * a[i] * a[j];
            }
        }
    }
    out
}

fn quad(minv: &Matrix, a: &[f64], b: &[f64]) -> f64 {
    let m = a.len();
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            s += a[i] * minv[(i, j)] * b[j];
        }
    }
    s
}

/// Weights maximizing `det(Σ ρ_z a_z a_zᵀ)` for fixed columns, and the
/// maximum. `log det` is concave in `ρ`, so the pairwise exchanges (exact
/// maximizers of the quadratic det ratio) converge to the optimum.
pub fn optimal_weights(cols: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let k = cols.len();
    let mut w = vec![1.0 / k as f64; k];
    let mut m = moment(cols, &w);
    let Some(mut minv) = inverse(&m).ok().flatten() else {
        return (w, 0.0);
    };
    if determinant(&m).unwrap_or(0.0) <= 1e-300 {
        return (w, 0.0);
    }
    let dim = cols[0].len() as f64;
    // multiplicative warm-up
    for _ in 0..30 {
        let lev: Vec<f64> = cols.iter().map(|a| quad(&minv, a, a)).collect();
        for (wz, l) in w.iter_mut().zip(&lev) {
            *wz = (*wz * l / dim).max(0.0);
        }
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        m = moment(cols, &w);
        match inverse(&m).ok().flatten() {
            Some(inv) => minv = inv,
            None => break,
        }
    }
    for _sweep in 0..10_000 {
        let mut improved = false;
        for u in 0..k {
            for v in 0..k {
                if u == v {
                    continue;
                }
                let duu = quad(&minv, &cols[u], &cols[u]);
                let dvv = quad(&minv, &cols[v], &cols[v]);
                let duv = quad(&minv, &cols[u], &cols[v]);
                // det ratio moving t from v to u: 1 + (duu − dvv) t + (duv² − duu dvv) t²
                let b = duu - dvv;
                let c = duv * duv - duu * dvv;
                let t = best_on_interval(b, c, -w[u].max(0.0), w[v].max(0.0));
                let ratio = 1.0 + b * t + c * t * t;
                if ratio > 1.0 + 1e-14 {
                    w[u] += t;
                    w[v] -= t;
                    w[v] = w[v].max(0.0);
                    w[u] = w[u].max(0.0);
                    m = moment(cols, &w);
                    match inverse(&m).ok().flatten() {
                        Some(inv) => minv = inv,
                        None => return (w, 0.0),
                    }
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    (w, determinant(&m).unwrap_or(0.0))
}

/// Upper bound on the optimum from the gradient at uniform weights:
/// `log det M* ≤ log det M + max_z a_zᵀM⁻¹a_z − (n+1)`.
fn screen(cols: &[Vec<f64>]) -> Option<(f64, f64)> {
    let k = cols.len();
    let w = vec![1.0 / k as f64; k];
    let m = moment(cols, &w);
    let det = determinant(&m).ok()?;
    if det <= 1e-300 {
        return None;
    }
    let minv = inverse(&m).ok().flatten()?;
    let max_lev = cols.iter().map(|a| quad(&minv, a, a)).fold(0.0, f64::max);
    Some((det, det * (max_lev - cols[0].len() as f64).exp()))
}

fn evaluate_subset(masks: &[u32], n: usize) -> (Vec<f64>, f64) {
    let cols: Vec<Vec<f64>> = masks.iter().map(|&m| column(m, n)).collect();
    optimal_weights(&cols)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Next `k`-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [u32], n: u32) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - (k - i) as u32 {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone)]
struct Best {
    value: f64,
    masks: Vec<u32>,
    weights: Vec<f64>,
}

impl Best {
    fn none() -> Self {
        Self {
            value: 0.0,
            masks: Vec::new(),
            weights: Vec::new(),
        }
    }

    fn offer(&mut self, value: f64, masks: &[u32], weights: Vec<f64>) {
        if value > self.value * (1.0 + 1e-12) {
            self.value = value;
            self.masks = masks.to_vec();
            self.weights = weights;
        }
    }
}

/// All subsets `{0} ∪ S`, `|S| = d − 1`, split by the first element of `S`.
fn exhaustive(n: usize, d: usize, opts: &SearchOptions) -> Best {
    let patterns = 1u32 << n;
    let k = d - 1;
    let branches = map_indices(opts.exec, (patterns - 1) as usize, |first| {
        let first = first as u32 + 1;
        let mut best = Best::none();
        let rest_k = k - 1;
        let pool: Vec<u32> = (first + 1..patterns).collect();
        if pool.len() < rest_k {
            return best;
        }
        let mut idx: Vec<u32> = (0..rest_k as u32).collect();
        loop {
            let mut masks = vec![0, first];
            masks.extend(idx.iter().map(|&i| pool[i as usize]));
            if let Some((_, upper)) = screen(&masks.iter().map(|&m| column(m, n)).collect::<Vec<_>>()) {
                if upper > best.value {
                    let (w, v) = evaluate_subset(&masks, n);
                    best.offer(v, &masks, w);
                }
            }
            if rest_k == 0 || !next_combination(&mut idx, pool.len() as u32) {
                break;
            }
        }
        best
    });
    let mut best = Best::none();
    for b in branches {
        if b.value > 0.0 {
            best.offer(b.value, &b.masks, b.weights);
        }
    }
    best
}

/// Random subsets improved by single-pattern swaps until no swap helps.
fn local_search(n: usize, d: usize, opts: &SearchOptions) -> Best {
    let patterns = 1u32 << n;
    let restarts = opts.restarts.max(1);
    let runs = map_indices(opts.exec, restarts, |r| {
        let mut rng = stream_rng(derive_seed(opts.seed, r as u64), 0);
        let mut masks: Vec<u32> = std::iter::once(0)
            .chain(sample(&mut rng, (patterns - 1) as usize, d - 1).into_iter().map(|i| i as u32 + 1))
            .collect();
        let (mut w, mut v) = evaluate_subset(&masks, n);
        loop {
            let mut best_swap: Option<(Vec<u32>, Vec<f64>, f64)> = None;
            let start = rng.random_range(0..patterns);
            for slot in 1..d {
                for off in 0..patterns {
                    let cand = (start + off) % patterns;
                    if masks.contains(&cand) {
                        continue;
                    }
                    let mut trial = masks.clone();
                    trial[slot] = cand;
                    let current = best_swap.as_ref().map_or(v, |b| b.2);
                    let cols: Vec<Vec<f64>> = trial.iter().map(|&m| column(m, n)).collect();
                    if screen(&cols).is_none_or(|(_, upper)| upper <= current) {
                        continue;
                    }
                    let (tw, tv) = optimal_weights(&cols);
                    if tv > current * (1.0 + 1e-12) {
                        best_swap = Some((trial, tw, tv));
                    }
                }
            }
            match best_swap {
                Some((m, tw, tv)) => {
                    masks = m;
                    w = tw;
                    v = tv;
                }
                None => break,
            }
        }
        Best {
            value: v,
            masks,
            weights: w,
        }
    });
    let mut best = Best::none();
    for b in runs {
        best.offer(b.value, &b.masks, b.weights);
    }
    best
}

fn rows_of(masks: &[u32], n: usize, d: usize) -> Vec<Vec<u8>> {
    (0..n)
        .map(|r| {
            (0..d)
                .map(|z| masks.get(z).map_or(0, |m| ((m >> r) & 1) as u8))
                .collect()
        })
        .collect()
}

/// Maximum of `4ⁿ·det p` over classical configurations of dimension `d`.
pub fn classical_max_a(n: usize, d: usize, opts: &SearchOptions) -> Result<ExtremalResult> {
    let problem = ExtremalProblem::new(n, d, Model::Classical, ScenarioKind::A)?;
    if n > MAX_CLASSICAL_N {
        return Err(Error::Argument(format!("classical search supports n ≤ {MAX_CLASSICAL_N}")));
    }
    let reference = classical_a(n, d);
    if problem.rank_forced_zero() {
        let weights = vec![1.0 / d as f64; d];
        return Ok(ExtremalResult {
            problem,
            value: 0.0,
            parameters: Parameters::Classical {
                rows: rows_of(&(0..d as u32).collect::<Vec<_>>(), n, d),
                weights,
            },
            reference,
            restarts: 0,
            rank_forced: true,
        });
    }
    let patterns = 1usize << n;
    let d_eff = d.min(patterns);
    let subsets = binomial(patterns as u64 - 1, d_eff as u64 - 1);
    let (best, restarts) = if subsets <= EXHAUSTIVE_LIMIT {
        (exhaustive(n, d_eff, opts), 0)
    } else {
        (local_search(n, d_eff, opts), opts.restarts.max(1))
    };
    let mut weights = best.weights.clone();
    weights.resize(d, 0.0);
    let parameters = Parameters::Classical {
        rows: rows_of(&best.masks, n, d),
        weights,
    };
    let value = parameters.witness()? * problem.scale();
    Ok(ExtremalResult {
        problem,
        value,
        parameters,
        reference,
        restarts,
        rank_forced: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerate_all() {
        let mut c = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut c, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
        assert_eq!(binomial(31, 6), 736_281);
    }

    #[test]
    fn square_support_has_uniform_weights() {
        let cols: Vec<Vec<f64>> = [0u32, 1, 2].iter().map(|&m| column(m, 2)).collect();
        let (w, v) = optimal_weights(&cols);
        for x in w {
            assert!((x - 1.0 / 3.0).abs() < 1e-9);
        }
        assert!((v - 1.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn screen_bounds_the_optimum() {
        let cols: Vec<Vec<f64>> = [0u32, 1, 2, 3, 5, 6].iter().map(|&m| column(m, 3)).collect();
        let (lower, upper) = screen(&cols).unwrap();
        let (_, v) = optimal_weights(&cols);
        assert!(lower <= v * (1.0 + 1e-12) && v <= upper * (1.0 + 1e-12));
    }
}
