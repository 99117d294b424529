//! Score aggregation: weighted sum, the 2-additive Choquet integral, and the
//! general Choquet integral over an explicitly enumerated capacity.
//!
//! A 2-additive capacity is stored in its Shapley form: the Shapley values
//! `phi` and the symmetric pairwise interaction matrix `I`. The general form
//! ([`CapacitySetFunction`]) holds one value per subset of criteria and is
//! only meant as a cross-check for small `n`.

use serde::{Deserialize, Serialize};

use crate::domain::{DecisionMatrix, ScoreVector, WeightVector};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Tolerance on the capacity axioms at construction.
pub const CAPACITY_TOL: f64 = 1e-9;

/// Largest `n` for which a capacity is enumerated subset by subset.
pub const MAX_ENUMERATED_CRITERIA: usize = 20;

const SYMMETRY_TOL: f64 = 1e-12;

/// 2-additive capacity given by Shapley values and pairwise interaction indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Capacity2Additive {
    phi: Vec<f64>,
    interaction: SquareMatrix,
    /// `phi_j - 1/2 sum_k |I_jk|`, the coefficient of `g_j` in the linear part.
    linear: Vec<f64>,
}

impl Capacity2Additive {
    pub fn new(phi: Vec<f64>, interaction: SquareMatrix) -> Result<Self> {
        let n = phi.len();
        if interaction.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: interaction.dim() });
        }
        if n == 0 {
            return Err(Error::InvalidCapacity("no criteria".into()));
        }
        if let Some(j) = phi.iter().position(|p| !p.is_finite() || *p < -CAPACITY_TOL) {
            return Err(Error::InvalidCapacity(format!("phi[{j}] = {} is negative or non-finite", phi[j])));
        }
        let total: f64 = phi.iter().sum();
        if (total - 1.0).abs() > CAPACITY_TOL {
            return Err(Error::InvalidCapacity(format!("Shapley values sum to {total}, expected 1")));
        }
        if interaction.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCapacity("non-finite interaction index".into()));
        }
        let asym = interaction.max_asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(Error::InvalidCapacity(format!("interaction matrix asymmetric by {asym:e}")));
        }
        let mut sym = SquareMatrix::zeros(n);
        for j in 0..n {
            if interaction[(j, j)].abs() > SYMMETRY_TOL {
                return Err(Error::InvalidCapacity(format!("nonzero diagonal interaction at {j}")));
            }
            for k in j + 1..n {
                let v = 0.5 * (interaction[(j, k)] + interaction[(k, j)]);
                if v.abs() > 1.0 + SYMMETRY_TOL {
                    return Err(Error::InvalidCapacity(format!("I[{j}][{k}] = {v} outside [-1, 1]")));
                }
                sym[(j, k)] = v;
                sym[(k, j)] = v;
            }
        }
        let linear: Vec<f64> = (0..n).map(|j| phi[j] - 0.5 * sym.row(j).iter().map(|v| v.abs()).sum::<f64>()).collect();
        if let Some(j) = linear.iter().position(|s| *s < -CAPACITY_TOL) {
            return Err(Error::InvalidCapacity(format!(
                "monotonicity violated for criterion {j}: phi - 1/2 sum|I| = {}",
                linear[j]
            )));
        }
        Ok(Self { phi, interaction: sym, linear })
    }

    /// Additive capacity: no interactions, `phi = w`.
    pub fn additive(w: &WeightVector) -> Self {
        Self::new(w.to_vec(), SquareMatrix::zeros(w.len())).expect("weight vectors are valid Shapley values")
    }

    pub fn num_criteria(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn interaction(&self) -> &SquareMatrix {
        &self.interaction
    }

    /// Slack of the monotonicity condition for criterion `j`.
    pub fn monotonicity_slack(&self, j: usize) -> f64 {
        self.linear[j]
    }

    /// 2-additive Choquet integral of one row.
    pub fn score_row(&self, row: &[f64]) -> f64 {
        let n = self.phi.len();
        debug_assert_eq!(row.len(), n);
        let mut acc = 0.0;
        for j in 0..n {
            for k in j + 1..n {
                let ijk = self.interaction[(j, k)];
                if ijk > 0.0 {
                    acc += row[j].min(row[k]) * ijk;
                } else if ijk < 0.0 {
                    acc += row[j].max(row[k]) * -ijk;
                }
            }
        }
        for (g, c) in row.iter().zip(&self.linear) {
            acc += g * c;
        }
        acc
    }
}

/// Capacity as an explicit set function, indexed by bitmask over criteria.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacitySetFunction {
    n: usize,
    mu: Vec<f64>,
}

impl CapacitySetFunction {
    /// `mu[mask]` is the capacity of the subset whose members are the set bits of `mask`.
    pub fn new(n: usize, mu: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_ENUMERATED_CRITERIA {
            return Err(Error::InvalidCapacity(format!(
                "enumerated capacities support 1..={MAX_ENUMERATED_CRITERIA} criteria, got {n}"
            )));
        }
        if mu.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: mu.len() });
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCapacity("non-finite capacity value".into()));
        }
        let full = (1usize << n) - 1;
        if mu[0].abs() > CAPACITY_TOL || (mu[full] - 1.0).abs() > CAPACITY_TOL {
            return Err(Error::InvalidCapacity(format!(
                "normalization violated: mu(empty) = {}, mu(N) = {}",
                mu[0], mu[full]
            )));
        }
        // Monotonicity on single-element extensions implies it for all A ⊆ B.
        for a in 0..=full {
            for j in 0..n {
                let bit = 1 << j;
                if a & bit == 0 && mu[a] > mu[a | bit] + CAPACITY_TOL {
                    return Err(Error::InvalidCapacity(format!(
                        "monotonicity violated: mu({a:#b}) = {} > mu({:#b}) = {}",
                        mu[a],
                        a | bit,
                        mu[a | bit]
                    )));
                }
            }
        }
        Ok(Self { n, mu })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        if n == 0 || n > MAX_ENUMERATED_CRITERIA {
            return Err(Error::InvalidCapacity(format!("unsupported number of criteria {n}")));
        }
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    /// `mu(A) = sum_{j in A} w_j`.
    pub fn additive(w: &[f64]) -> Result<Self> {
        Self::from_fn(w.len(), |mask| w.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, v)| v).sum())
    }

    pub fn num_criteria(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, mask: usize) -> f64 {
        self.mu[mask]
    }

    pub fn values(&self) -> &[f64] {
        &self.mu
    }
}

fn check_dims(dm: &DecisionMatrix, n: usize) -> Result<()> {
    if dm.num_criteria() != n {
        return Err(Error::DimensionMismatch { expected: dm.num_criteria(), found: n });
    }
    Ok(())
}

/// `s_i = sum_j w_j g_j(a_i)`.
pub fn weighted_sum_score(dm: &DecisionMatrix, w: &WeightVector) -> Result<ScoreVector> {
    check_dims(dm, w.len())?;
    ScoreVector::new(dm.rows().map(|row| weighted_sum_row(row, w)).collect())
}

#[inline]
pub(crate) fn weighted_sum_row(row: &[f64], w: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (wj, g) in w.iter().zip(row) {
        acc += wj * g;
    }
    acc
}

pub fn choquet_2additive_score(dm: &DecisionMatrix, cap: &Capacity2Additive) -> Result<ScoreVector> {
    check_dims(dm, cap.num_criteria())?;
    ScoreVector::new(dm.rows().map(|row| cap.score_row(row)).collect())
}

/// Discrete Choquet integral of `row` with respect to `mu`.
pub fn choquet_general_score(row: &[f64], mu: &CapacitySetFunction) -> Result<f64> {
    if row.len() != mu.num_criteria() {
        return Err(Error::DimensionMismatch { expected: mu.num_criteria(), found: row.len() });
    }
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
    Ok(choquet_with_order(row, mu, &order))
}

/// Choquet sum along a given ascending order of the criteria.
fn choquet_with_order(row: &[f64], mu: &CapacitySetFunction, ascending: &[usize]) -> f64 {
    let mut remaining = (1usize << row.len()) - 1;
    let mut prev = 0.0;
    let mut acc = 0.0;
    for &j in ascending {
        acc += (row[j] - prev) * mu.get(remaining);
        prev = row[j];
        remaining &= !(1 << j);
    }
    acc
}

/// Expands a 2-additive capacity into its full set function via the Möbius
/// representation `mu(A) = sum_{j in A} m_j + sum_{{j,k} ⊆ A} I_jk`.
pub fn capacity_from_2additive(cap: &Capacity2Additive) -> Result<CapacitySetFunction> {
    let n = cap.num_criteria();
    if n > MAX_ENUMERATED_CRITERIA {
        return Err(Error::InvalidCapacity(format!("cannot enumerate a capacity over {n} criteria")));
    }
    let inter = cap.interaction();
    let singleton: Vec<f64> = (0..n).map(|j| cap.phi()[j] - 0.5 * inter.row(j).iter().sum::<f64>()).collect();
    CapacitySetFunction::from_fn(n, |mask| {
        let mut acc = 0.0;
        for j in (0..n).filter(|j| mask >> j & 1 == 1) {
            acc += singleton[j];
            for k in (j + 1..n).filter(|k| mask >> k & 1 == 1) {
                acc += inter[(j, k)];
            }
        }
        acc
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Shapley value of every criterion.
pub fn shapley_from_capacity(mu: &CapacitySetFunction) -> Vec<f64> {
    let n = mu.num_criteria();
    // (n-|A|-1)! |A|! / n!  ==  1 / (n * C(n-1, |A|))
    let weight: Vec<f64> = (0..n).map(|s| 1.0 / (n as f64 * binomial(n - 1, s))).collect();
    let full = (1usize << n) - 1;
    (0..n)
        .map(|j| {
            let bit = 1 << j;
            (0..=full)
                .filter(|a| a & bit == 0)
                .map(|a| weight[a.count_ones() as usize] * (mu.get(a | bit) - mu.get(a)))
                .sum()
        })
        .collect()
}

/// Pairwise Shapley interaction indices; symmetric with zero diagonal.
pub fn interaction_from_capacity(mu: &CapacitySetFunction) -> SquareMatrix {
    let n = mu.num_criteria();
    let mut out = SquareMatrix::zeros(n);
    if n < 2 {
        return out;
    }
    // (n-|A|-2)! |A|! / (n-1)!  ==  1 / ((n-1) * C(n-2, |A|))
    let weight: Vec<f64> = (0..n - 1).map(|s| 1.0 / ((n - 1) as f64 * binomial(n - 2, s))).collect();
    let full = (1usize << n) - 1;
    for j in 0..n {
        for k in j + 1..n {
            let (bj, bk) = (1 << j, 1 << k);
            let v: f64 = (0..=full)
                .filter(|a| a & (bj | bk) == 0)
                .map(|a| {
                    weight[a.count_ones() as usize]
                        * (mu.get(a | bj | bk) - mu.get(a | bj) - mu.get(a | bk) + mu.get(a))
                })
                .sum();
            out[(j, k)] = v;
            out[(k, j)] = v;
        }
    }
    out
}
