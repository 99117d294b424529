//! Robust composite-index rankings.
//!
//! The crate turns a decision matrix (alternatives x criteria) into rankings
//! in three ways:
//!
//! * deterministic weights, aggregated by weighted sum or by a 2-additive
//!   Choquet integral whose interaction indices are learned from the
//!   correlations between criteria ([`capfit`]);
//! * Monte Carlo sampling of the weights ([`smaa`]), summarised by rank
//!   acceptability and pairwise winning indices;
//! * a weight-free consensus ranking from the pairwise winning indices via
//!   Condorcet/Schulze ([`social`]).
//!
//! [`pipeline`] chains these into the three end-to-end analyses, and [`io`]
//! reads CSV/JSON inputs and writes reports.

pub mod aggregate;
pub mod capfit;
pub mod domain;
pub mod error;
pub mod io;
pub mod matrix;
pub mod pipeline;
mod qp;
pub mod smaa;
pub mod social;
pub mod stats;

pub use aggregate::{
    capacity_from_2additive, choquet_2additive_score, choquet_general_score, interaction_from_capacity,
    shapley_from_capacity, weighted_sum_score, Capacity2Additive, CapacitySetFunction,
};
pub use capfit::{fit_u1, fit_u2, FitReport};
pub use domain::{
    ranking_from_scores, validate_matrix, CorrelationMatrix, DecisionMatrix, Ranking, RawTable, ScoreVector,
    WeightVector,
};
pub use error::{Error, Result};
pub use matrix::SquareMatrix;
pub use smaa::{
    run_smaa, sample_ordinal, sample_uniform_simplex, AcceptabilityMatrix, Aggregator, CentralWeightReport,
    PairwiseWinningMatrix, SmaaConfig, SmaaOutcome, WeightSampler,
};
pub use social::{condorcet_ranking, schulze_strengths, CondorcetOutcome, MajorityGraph};
pub use stats::{kendall_tau_distance, pearson_matrix};
