//! Unsupervised learning of pairwise interaction indices from criteria
//! correlations, with the Shapley values fixed to given weights.
//!
//! Both methods push each `I_jk` towards `-rho_jk`: correlated (redundant)
//! criteria get negative interactions, anti-correlated ones positive.
//!
//! * [`fit_u1`] projects `-rho` onto the set of valid 2-additive capacities
//!   (least squares, solved by an active-set QP).
//! * [`fit_u2`] keeps the ratio `-I_jk / rho_jk` equal to one constant `t`
//!   for every pair and takes the largest feasible `t`.

use serde::{Deserialize, Serialize};

use crate::aggregate::Capacity2Additive;
use crate::domain::{CorrelationMatrix, WeightVector};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::qp;

/// Correlations smaller than this in magnitude yield a zero interaction.
pub const NEGLIGIBLE_CORRELATION: f64 = 1e-12;

/// Default KKT tolerance for [`fit_u1`].
pub const DEFAULT_U1_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub capacity: Capacity2Additive,
    /// Common ratio `-I/rho` (u2 only).
    pub ratio_t: Option<f64>,
    /// Final `sum_{j<k} (I_jk + rho_jk)^2` (u1 only).
    pub objective: Option<f64>,
    /// Criteria whose monotonicity constraint is tight.
    pub active_constraints: Vec<usize>,
}

fn check_inputs(rho: &CorrelationMatrix, phi: &WeightVector) -> Result<usize> {
    let n = rho.dim();
    if phi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: phi.len() });
    }
    if n < 2 {
        return Err(Error::DegenerateInput("need at least two criteria".into()));
    }
    Ok(n)
}

fn active_set(cap: &Capacity2Additive, tol: f64) -> Vec<usize> {
    (0..cap.num_criteria()).filter(|&j| cap.monotonicity_slack(j) <= tol).collect()
}

/// Consistent-ratio fit: `I = -t* rho` with
/// `t* = min(1, min_j 2 phi_j / sum_{k != j} |rho_jk|)`.
pub fn fit_u2(rho: &CorrelationMatrix, phi: &WeightVector) -> Result<FitReport> {
    let n = check_inputs(rho, phi)?;
    let mut t = 1.0_f64;
    for j in 0..n {
        let load: f64 =
            (0..n).filter(|&k| k != j).map(|k| rho.get(j, k).abs()).filter(|r| *r >= NEGLIGIBLE_CORRELATION).sum();
        if load > 0.0 {
            t = t.min(2.0 * phi[j] / load);
        }
    }
    let mut inter = SquareMatrix::zeros(n);
    for j in 0..n {
        for k in j + 1..n {
            let r = rho.get(j, k);
            if r.abs() >= NEGLIGIBLE_CORRELATION {
                inter[(j, k)] = -t * r;
                inter[(k, j)] = -t * r;
            }
        }
    }
    let capacity = Capacity2Additive::new(phi.to_vec(), inter)?;
    let active_constraints = active_set(&capacity, 1e-12);
    Ok(FitReport { capacity, ratio_t: Some(t), objective: None, active_constraints })
}

/// Least-squares fit of `I` to `-rho` under the capacity constraints.
///
/// Each interaction is restricted to the sign of `-rho_jk`, which turns
/// `|I_jk|` into a linear expression. With `x_jk = |I_jk|` the problem is the
/// projection of `|rho|` onto `{x >= 0, sum_{k} x_jk <= 2 phi_j for every j}`.
pub fn fit_u1(rho: &CorrelationMatrix, phi: &WeightVector, tol: f64) -> Result<FitReport> {
    let n = check_inputs(rho, phi)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidConfig(format!("u1 tolerance must be positive, got {tol}")));
    }

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .filter(|&(j, k)| rho.get(j, k).abs() >= NEGLIGIBLE_CORRELATION)
        .collect();
    let nv = pairs.len();
    let target: Vec<f64> = pairs.iter().map(|&(j, k)| rho.get(j, k).abs()).collect();

    let mut g = Vec::with_capacity(nv + n);
    let mut h = Vec::with_capacity(nv + n);
    for v in 0..nv {
        let mut row = vec![0.0; nv];
        row[v] = -1.0;
        g.push(row);
        h.push(0.0);
    }
    for j in 0..n {
        g.push(pairs.iter().map(|&(a, b)| if a == j || b == j { 1.0 } else { 0.0 }).collect());
        h.push(2.0 * phi[j]);
    }

    let max_iter = 50 * (nv + n + 1);
    let sol = qp::project(&target, &g, &h, vec![0.0; nv], max_iter)?;
    if sol.kkt_residual > tol {
        return Err(Error::NonConvergence { iterations: sol.iterations });
    }

    let mut inter = SquareMatrix::zeros(n);
    for (&(j, k), x) in pairs.iter().zip(&sol.x) {
        let v = -rho.get(j, k).signum() * x.max(0.0);
        inter[(j, k)] = v;
        inter[(k, j)] = v;
    }
    let mut objective = 0.0;
    for j in 0..n {
        for k in j + 1..n {
            objective += (inter[(j, k)] + rho.get(j, k)).powi(2);
        }
    }
    let capacity = Capacity2Additive::new(phi.to_vec(), inter)?;
    let active_constraints = active_set(&capacity, tol);
    Ok(FitReport { capacity, ratio_t: None, objective: Some(objective), active_constraints })
}
