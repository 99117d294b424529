//! Primal active-set method for the Euclidean projection onto a polyhedron:
//!
//! ```text
//!     minimize    1/2 ||x - y||^2
//!     subject to  G x <= h
//! ```
//!
//! Starts from a feasible point and keeps a linearly independent working
//! set of active constraints. Each iteration solves the equality-constrained
//! subproblem in closed form via the normal equations of the working set.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct Projection {
    pub x: Vec<f64>,
    /// One multiplier per constraint; zero outside the final working set.
    #[allow(dead_code)] // only inspected by tests
    pub multipliers: Vec<f64>,
    pub iterations: usize,
    /// Max of stationarity, primal/dual infeasibility and complementarity violations.
    pub kkt_residual: f64,
}

const STEP_EPS: f64 = 1e-14;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `a x = b` for a small dense symmetric positive-definite `a` by
/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() < 1e-13 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..k {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let tail: f64 = (r + 1..k).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Some(x)
}

fn kkt_residual(y: &[f64], g: &[Vec<f64>], h: &[f64], x: &[f64], lambda: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for (v, (xv, yv)) in x.iter().zip(y).enumerate() {
        let grad = xv - yv + g.iter().zip(lambda).map(|(row, l)| row[v] * l).sum::<f64>();
        worst = worst.max(grad.abs());
    }
    for ((row, hi), l) in g.iter().zip(h).zip(lambda) {
        let slack = hi - dot(row, x);
        worst = worst.max(-slack).max(-l).max((l * slack).abs());
    }
    worst
}

pub(crate) fn project(y: &[f64], g: &[Vec<f64>], h: &[f64], x0: Vec<f64>, max_iter: usize) -> Result<Projection> {
    let n = y.len();
    let mut x = x0;
    let mut working: Vec<usize> = Vec::new();

    for iter in 1..=max_iter {
        // multipliers of the working set from (A A^T) lambda = A (y - x)
        let diff: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        let gram: Vec<Vec<f64>> =
            working.iter().map(|&r| working.iter().map(|&s| dot(&g[r], &g[s])).collect()).collect();
        let rhs: Vec<f64> = working.iter().map(|&r| dot(&g[r], &diff)).collect();
        let lambda = solve_dense(gram, rhs)
            .ok_or_else(|| Error::DegenerateInput("working set became linearly dependent".into()))?;

        let mut step = diff;
        for (&r, l) in working.iter().zip(&lambda) {
            for v in 0..n {
                step[v] -= l * g[r][v];
            }
        }

        if step.iter().all(|s| s.abs() <= STEP_EPS) {
            let most_negative =
                lambda.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).filter(|(_, l)| **l < -STEP_EPS);
            match most_negative {
                Some((idx, _)) => {
                    working.remove(idx);
                }
                None => {
                    let mut multipliers = vec![0.0; g.len()];
                    for (&r, l) in working.iter().zip(&lambda) {
                        multipliers[r] = l.max(0.0);
                    }
                    let kkt_residual = kkt_residual(y, g, h, &x, &multipliers);
                    return Ok(Projection { x, multipliers, iterations: iter, kkt_residual });
                }
            }
            continue;
        }

        let mut alpha = 1.0;
        let mut blocking = None;
        for (r, (row, hi)) in g.iter().zip(h).enumerate() {
            if working.contains(&r) {
                continue;
            }
            let rate = dot(row, &step);
            if rate > STEP_EPS {
                let ratio = ((hi - dot(row, &x)) / rate).max(0.0);
                if ratio < alpha {
                    alpha = ratio;
                    blocking = Some(r);
                }
            }
        }
        for (xv, s) in x.iter_mut().zip(&step) {
            *xv += alpha * s;
        }
        if let Some(r) = blocking {
            working.push(r);
        }
    }
    Err(Error::NonConvergence { iterations: max_iter })
}
