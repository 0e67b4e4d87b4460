//! Local maximization with quasi-Newton steps on finite-difference gradients.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    pub max_iters: usize,
    /// Relative step of the central differences.
    pub step: f64,
    /// Stop once an iteration gains less than this (absolute).
    pub tolerance: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            step: 1e-6,
            tolerance: 1e-15,
        }
    }
}

fn gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            let h = step * x[k].abs().max(1.0);
            probe[k] = x[k] + h;
            let up = f(&probe);
            probe[k] = x[k] - h;
            let down = f(&probe);
            probe[k] = x[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximizes `f` from `x0`; returns the best point and value.
///
/// Non-finite values are treated as worse than any finite value.
pub fn maximize<F: Fn(&[f64]) -> f64>(f: F, x0: Vec<f64>, opts: &BfgsOptions) -> (Vec<f64>, f64) {
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };
    let n = x0.len();
    let identity = || {
        let mut h = vec![0.0; n * n];
        for k in 0..n {
            h[k * n + k] = 1.0;
        }
        h
    };
    let mut x = x0;
    let mut fx = eval(&x);
    if n == 0 {
        return (x, fx);
    }
    let mut g = gradient(&eval, &x, opts.step);
    let mut h = identity();
    let mut stalls = 0;
    for _ in 0..opts.max_iters {
        // ascent direction d = H g
        let mut dir: Vec<f64> = (0..n).map(|r| dot(&h[r * n..(r + 1) * n], &g)).collect();
        let mut slope = dot(&dir, &g);
        if !(slope > 0.0) {
            h = identity();
            dir = g.clone();
            slope = dot(&g, &g);
            if !(slope > 0.0) {
                break;
            }
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + alpha * di).collect();
            let ft = eval(&trial);
            if ft >= fx + 1e-4 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fxn)) = accepted else {
            if h == identity() {
                break;
            }
            h = identity();
            continue;
        };
        let gn = gradient(&eval, &xn, opts.step);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        // curvature of −f
        let y: Vec<f64> = g.iter().zip(&gn).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            let hy: Vec<f64> = (0..n).map(|r| dot(&h[r * n..(r + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for r in 0..n {
                for c in 0..n {
                    h[r * n + c] += (1.0 + yhy * rho) * rho * s[r] * s[c] - rho * (hy[r] * s[c] + s[r] * hy[c]);
                }
            }
        }
        let gain = fxn - fx;
        x = xn;
        fx = fxn;
        g = gn;
        if gain < opts.tolerance {
            stalls += 1;
            if stalls >= 3 {
                break;
            }
        } else {
            stalls = 0;
        }
    }
    (x, fx)
}

/// Maximizer of the concave quadratic `1 + b t + c t²` restricted to `[lo, hi]`.
pub fn best_on_interval(b: f64, c: f64, lo: f64, hi: f64) -> f64 {
    let q = |t: f64| b * t + c * t * t;
    let mut best = if q(lo) >= q(hi) { lo } else { hi };
    if c < 0.0 {
        let t = (-b / (2.0 * c)).clamp(lo, hi);
        if q(t) > q(best) {
            best = t;
        }
    }
    best
}
