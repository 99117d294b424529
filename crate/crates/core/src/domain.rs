//! Domain types shared by every stage: the decision matrix, weight and score
//! vectors, strict rankings, and correlation matrices.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Tolerance on `sum(w) == 1` for weight vectors.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Unvalidated labelled table, as read from an input file. Missing cells are `None`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawTable {
    pub alternatives: Vec<String>,
    pub criteria: Vec<String>,
    pub cells: Vec<Vec<Option<f64>>>,
}

/// Performance table: `values[i][j]` is the score of alternative `i` on criterion `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionMatrix {
    alternatives: Vec<String>,
    criteria: Vec<String>,
    values: Vec<f64>,
}

fn check_unique(ids: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateIdentifier(id.clone()));
        }
    }
    Ok(())
}

/// Checks shape, identifier uniqueness and finiteness of a raw table.
pub fn validate_matrix(raw: RawTable) -> Result<DecisionMatrix> {
    let m = raw.cells.len();
    let n = raw.criteria.len();
    if m < 2 || n < 2 {
        return Err(Error::TooFewRowsOrCols { rows: m, cols: n });
    }
    if raw.alternatives.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: raw.alternatives.len() });
    }
    check_unique(&raw.alternatives)?;
    check_unique(&raw.criteria)?;

    let mut values = Vec::with_capacity(m * n);
    for (row, cells) in raw.cells.iter().enumerate() {
        if cells.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: cells.len() });
        }
        for (col, cell) in cells.iter().enumerate() {
            match cell {
                Some(v) if v.is_finite() => values.push(*v),
                _ => return Err(Error::NonFinite { row, col }),
            }
        }
    }
    Ok(DecisionMatrix { alternatives: raw.alternatives, criteria: raw.criteria, values })
}

impl DecisionMatrix {
    pub fn new(alternatives: Vec<String>, criteria: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        validate_matrix(RawTable {
            alternatives,
            criteria,
            cells: rows.into_iter().map(|r| r.into_iter().map(Some).collect()).collect(),
        })
    }

    /// Matrix with generated labels `a1..am` and `g1..gn`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        let alternatives = (1..=rows.len()).map(|i| format!("a{i}")).collect();
        let criteria = (1..=n).map(|j| format!("g{j}")).collect();
        Self::new(alternatives, criteria, rows)
    }

    pub fn num_alternatives(&self) -> usize {
        self.alternatives.len()
    }

    pub fn num_criteria(&self) -> usize {
        self.criteria.len()
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn alternative_index(&self, id: &str) -> Option<usize> {
        self.alternatives.iter().position(|a| a == id)
    }

    pub fn criterion_index(&self, id: &str) -> Option<usize> {
        self.criteria.iter().position(|c| c == id)
    }

    #[inline]
    pub fn value(&self, alternative: usize, criterion: usize) -> f64 {
        self.values[alternative * self.criteria.len() + criterion]
    }

    pub fn row(&self, alternative: usize) -> &[f64] {
        let n = self.criteria.len();
        &self.values[alternative * n..(alternative + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.criteria.len())
    }

    pub fn column(&self, criterion: usize) -> Vec<f64> {
        self.rows().map(|r| r[criterion]).collect()
    }

    /// Rescales every column to `[0, 1]` by `(x - min) / (max - min)`.
    pub fn min_max_normalized(&self) -> Result<Self> {
        let mut out = self.clone();
        let n = self.num_criteria();
        for j in 0..n {
            let col = self.column(j);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = hi - lo;
            if span <= 0.0 {
                return Err(Error::ZeroVariance(self.criteria[j].clone()));
            }
            for i in 0..self.num_alternatives() {
                out.values[i * n + j] = (col[i] - lo) / span;
            }
        }
        Ok(out)
    }

    /// Same matrix with alternatives reordered so that new row `k` is old row `perm[k]`.
    pub fn permute_alternatives(&self, perm: &[usize]) -> Result<Self> {
        if !is_permutation(perm, self.num_alternatives()) {
            return Err(Error::InvalidConfig("not a permutation of the alternatives".into()));
        }
        Self::new(
            perm.iter().map(|&k| self.alternatives[k].clone()).collect(),
            self.criteria.clone(),
            perm.iter().map(|&k| self.row(k).to_vec()).collect(),
        )
    }
}

/// Criteria weights on the probability simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if let Some((j, v)) = w.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidWeights(format!("w[{j}] = {v} is not a finite non-negative number")));
        }
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self(w))
    }

    /// Equal weights `1/n`.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl std::ops::Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Aggregated score per alternative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if let Some((i, _)) = s.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self(s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Deref for ScoreVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn is_permutation(p: &[usize], m: usize) -> bool {
    if p.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &k in p {
        if k >= m || std::mem::replace(&mut seen[k], true) {
            return false;
        }
    }
    true
}

/// Strict total order over alternatives, best first.
///
/// `order[r]` is the (0-based) alternative at rank `r + 1`; `position(i)` is
/// the 1-based rank of alternative `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ranking {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl Ranking {
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        if !is_permutation(&order, order.len()) {
            return Err(Error::InvalidConfig(format!("{order:?} is not a permutation")));
        }
        let mut position = vec![0; order.len()];
        for (r, &a) in order.iter().enumerate() {
            position[a] = r + 1;
        }
        Ok(Self { order, position })
    }

    /// Ranking from 1-based positions (`position[i]` = rank of alternative `i`).
    pub fn from_positions(position: &[usize]) -> Result<Self> {
        let m = position.len();
        let mut order = vec![usize::MAX; m];
        for (a, &p) in position.iter().enumerate() {
            if p == 0 || p > m || order[p - 1] != usize::MAX {
                return Err(Error::InvalidConfig(format!("{position:?} is not a set of distinct ranks 1..{m}")));
            }
            order[p - 1] = a;
        }
        Self::from_order(order)
    }

    pub fn identity(m: usize) -> Self {
        Self { order: (0..m).collect(), position: (1..=m).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    /// 1-based rank of `alternative`.
    pub fn position(&self, alternative: usize) -> usize {
        self.position[alternative]
    }

    /// Alternative at 1-based `rank`.
    pub fn at(&self, rank: usize) -> usize {
        self.order[rank - 1]
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self::from_order(order).expect("reversal of a permutation")
    }
}

/// Sorts alternatives by decreasing score; equal scores keep ascending index order.
pub fn ranking_from_scores(scores: &[f64]) -> Ranking {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // stable sort keeps index order among ties
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    Ranking::from_order(order).expect("sorted indices form a permutation")
}

/// Symmetric unit-diagonal matrix of pairwise correlations between criteria.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix(SquareMatrix);

impl CorrelationMatrix {
    const TOL: f64 = 1e-12;

    pub fn new(rho: SquareMatrix) -> Result<Self> {
        let n = rho.dim();
        for i in 0..n {
            if (rho[(i, i)] - 1.0).abs() > Self::TOL {
                return Err(Error::InvalidMatrix(format!("rho[{i}][{i}] = {} != 1", rho[(i, i)])));
            }
            for j in 0..n {
                let v = rho[(i, j)];
                if !v.is_finite() || v.abs() > 1.0 + Self::TOL {
                    return Err(Error::InvalidMatrix(format!("rho[{i}][{j}] = {v} outside [-1, 1]")));
                }
                if (v - rho[(j, i)]).abs() > Self::TOL {
                    return Err(Error::InvalidMatrix(format!("rho not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self(rho))
    }

    /// Builds from the strict upper triangle `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn from_upper_triangle(n: usize, upper: &[f64]) -> Result<Self> {
        let mut m = SquareMatrix::from_upper_triangle(n, upper)
            .ok_or(Error::DimensionMismatch { expected: n * n.saturating_sub(1) / 2, found: upper.len() })?;
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
}
