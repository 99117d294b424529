//! Consensus ranking from pairwise winning probabilities.
//!
//! An edge `i -> k` of the majority graph means `c[i][k] > 0.5`. Cycles are
//! resolved with the Schulze method, using `c` itself as the link strength
//! for every ordered pair.

use serde::{Deserialize, Serialize};

use crate::domain::Ranking;
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::smaa::PairwiseWinningMatrix;

/// Directed graph with an edge `i -> k` whenever `c[i][k] > 0.5`.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorityGraph {
    m: usize,
    adjacency: Vec<bool>,
    strength: SquareMatrix,
}

impl MajorityGraph {
    pub fn new(c: &PairwiseWinningMatrix) -> Self {
        let m = c.dim();
        let adjacency = (0..m * m).map(|idx| c.get(idx / m, idx % m) > 0.5).collect();
        Self { m, adjacency, strength: c.matrix().clone() }
    }

    #[inline]
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adjacency[from * self.m + to]
    }

    pub fn edge_strength(&self, from: usize, to: usize) -> Option<f64> {
        self.has_edge(from, to).then(|| self.strength[(from, to)])
    }

    /// Number of alternatives each one beats by majority.
    pub fn copeland_scores(&self) -> Vec<usize> {
        (0..self.m).map(|i| (0..self.m).filter(|&k| self.has_edge(i, k)).count()).collect()
    }

    pub fn condorcet_winner(&self) -> Option<usize> {
        (0..self.m).find(|&i| (0..self.m).all(|k| k == i || self.has_edge(i, k)))
    }

    pub fn has_cycle(&self) -> bool {
        // Kahn: the graph is acyclic iff every node can be peeled off
        let mut indegree: Vec<usize> =
            (0..self.m).map(|k| (0..self.m).filter(|&i| self.has_edge(i, k)).count()).collect();
        let mut stack: Vec<usize> = (0..self.m).filter(|&k| indegree[k] == 0).collect();
        let mut removed = 0;
        while let Some(i) = stack.pop() {
            removed += 1;
            for k in 0..self.m {
                if self.has_edge(i, k) {
                    indegree[k] -= 1;
                    if indegree[k] == 0 {
                        stack.push(k);
                    }
                }
            }
        }
        removed < self.m
    }
}

/// Widest-path strengths: `p[i][k]` is the largest, over all paths from `i`
/// to `k`, of the weakest link along the path. Diagonal is zero.
pub fn schulze_strengths(c: &PairwiseWinningMatrix) -> SquareMatrix {
    let m = c.dim();
    let mut p = c.matrix().clone();
    for j in 0..m {
        for i in 0..m {
            if i == j {
                continue;
            }
            let via = p[(i, j)];
            for k in 0..m {
                if k != i && k != j {
                    let cand = via.min(p[(j, k)]);
                    if cand > p[(i, k)] {
                        p[(i, k)] = cand;
                    }
                }
            }
        }
    }
    p
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondorcetOutcome {
    pub ranking: Ranking,
    /// The majority graph contains a directed cycle.
    pub cycle: bool,
    pub condorcet_winner: Option<usize>,
    pub strengths: SquareMatrix,
    /// Number of alternatives each one beats under the Schulze relation.
    pub schulze_wins: Vec<usize>,
}

/// Complete ranking from pairwise winning indices.
///
/// Alternatives are ordered by how many others they beat under the Schulze
/// relation (`p[i][k] > p[k][i]`), then by Copeland score, then by index.
/// On an acyclic majority graph this is a topological order of it, and a
/// Condorcet winner always comes first.
pub fn condorcet_ranking(c: &PairwiseWinningMatrix) -> Result<CondorcetOutcome> {
    let m = c.dim();
    if m == 0 {
        return Err(Error::InvalidMatrix("empty pairwise matrix".into()));
    }
    let graph = MajorityGraph::new(c);
    let strengths = schulze_strengths(c);
    let schulze_wins: Vec<usize> =
        (0..m).map(|i| (0..m).filter(|&k| k != i && strengths[(i, k)] > strengths[(k, i)]).count()).collect();
    let copeland = graph.copeland_scores();

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| schulze_wins[b].cmp(&schulze_wins[a]).then(copeland[b].cmp(&copeland[a])).then(a.cmp(&b)));

    Ok(CondorcetOutcome {
        ranking: Ranking::from_order(order)?,
        cycle: graph.has_cycle(),
        condorcet_winner: graph.condorcet_winner(),
        strengths,
        schulze_wins,
    })
}
