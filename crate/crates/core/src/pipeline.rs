//! End-to-end analyses.
//!
//! * Methodology 1: deterministic weights as Shapley values, interaction
//!   indices learned from correlations, Choquet rankings compared with the
//!   weighted-sum ranking.
//! * Methodology 2: SMAA acceptability for weighted sum, Choquet+u1 and
//!   Choquet+u2 under sampled weights.
//! * Methodology 3: Condorcet/Schulze rankings from the SMAA pairwise
//!   winning indices, plus Kendall tau comparisons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregate::{choquet_2additive_score, weighted_sum_score};
use crate::capfit::{fit_u1, fit_u2, FitReport};
use crate::domain::{ranking_from_scores, CorrelationMatrix, DecisionMatrix, Ranking, ScoreVector, WeightVector};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::smaa::{run_smaa, Aggregator, SmaaConfig, SmaaOutcome, WeightSampler};
use crate::social::{condorcet_ranking, CondorcetOutcome};
use crate::stats::{five_number_summary, kendall_tau_distance, pearson_matrix, FiveNumberSummary};

/// Reference setup of the 2023 Global AI Index.
pub mod gaii {
    /// Sub-pillars in column order.
    pub const CRITERIA: [&str; 7] = [
        "Infrastructure",
        "Operating Environment",
        "Talent",
        "Development",
        "Research",
        "Commercial Ventures",
        "Government Strategy",
    ];

    pub const WEIGHTS: [f64; 7] = [0.11, 0.06, 0.15, 0.14, 0.26, 0.24, 0.04];

    /// Most to least important criterion (0-based column indices), the order
    /// implied by [`WEIGHTS`].
    pub const PREFERENCE_ORDER: [usize; 7] = [4, 5, 2, 3, 0, 1, 6];

    /// Fixture file name looked up by the reproduction commands.
    pub const DATASET_FILE: &str = "gaii_2023.csv";
}

pub const GAII: &str = "GAII";
pub const CI_U2: &str = "CI_u2";
pub const CI_U1: &str = "CI_u1";
pub const WS_COND: &str = "WS-Cond";
pub const CI_U2_COND: &str = "CI_u2-Cond";
pub const CI_U1_COND: &str = "CI_u1-Cond";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Methodology {
    M1,
    M2,
    M3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregatorFamily {
    Ws,
    CiU1,
    CiU2,
}

impl AggregatorFamily {
    pub const ALL: [AggregatorFamily; 3] = [AggregatorFamily::Ws, AggregatorFamily::CiU2, AggregatorFamily::CiU1];

    /// Name of the deterministic ranking produced by this family.
    pub fn ranking_name(self) -> &'static str {
        match self {
            AggregatorFamily::Ws => GAII,
            AggregatorFamily::CiU1 => CI_U1,
            AggregatorFamily::CiU2 => CI_U2,
        }
    }

    /// Name of the Condorcet ranking derived from this family's SMAA run.
    pub fn condorcet_name(self) -> &'static str {
        match self {
            AggregatorFamily::Ws => WS_COND,
            AggregatorFamily::CiU1 => CI_U1_COND,
            AggregatorFamily::CiU2 => CI_U2_COND,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Deterministic(WeightVector),
    Uniform,
    Ordinal(Vec<usize>),
}

impl WeightMode {
    fn sampler(&self) -> Result<WeightSampler> {
        match self {
            WeightMode::Uniform => Ok(WeightSampler::Uniform),
            WeightMode::Ordinal(order) => Ok(WeightSampler::Ordinal(order.clone())),
            WeightMode::Deterministic(_) => {
                Err(Error::InvalidConfig("SMAA runs need a uniform or ordinal weight mode".into()))
            }
        }
    }
}

/// Settings shared by the Monte Carlo methodologies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmaaSettings {
    pub samples: usize,
    pub seed: u64,
    pub weights: WeightMode,
    /// KKT tolerance of the u1 fit.
    pub u1_tol: f64,
}

impl SmaaSettings {
    pub fn new(weights: WeightMode) -> Self {
        Self {
            samples: crate::smaa::DEFAULT_SAMPLES,
            seed: crate::smaa::DEFAULT_SEED,
            weights,
            u1_tol: crate::capfit::DEFAULT_U1_TOL,
        }
    }
}

/// One requested analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub methodology: Methodology,
    pub aggregators: Vec<AggregatorFamily>,
    pub weights: WeightMode,
    /// Deterministic weights used as Shapley values for the fits.
    pub reference_weights: WeightVector,
    pub samples: usize,
    pub seed: u64,
    pub u1_tol: f64,
    /// Pairs of named rankings to compare by Kendall tau.
    pub comparisons: Vec<(String, String)>,
}

impl RunSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.reference_weights.len() != n {
            return Err(Error::InvalidConfig(format!(
                "reference weights have {} entries, expected {n}",
                self.reference_weights.len()
            )));
        }
        match (&self.methodology, &self.weights) {
            (Methodology::M1, WeightMode::Deterministic(w)) if w.len() == n => {}
            (Methodology::M1, WeightMode::Deterministic(_)) => {
                return Err(Error::InvalidConfig("deterministic weights have the wrong length".into()))
            }
            (Methodology::M1, _) => {
                return Err(Error::InvalidConfig("methodology 1 uses deterministic weights".into()))
            }
            (_, WeightMode::Deterministic(_)) => {
                return Err(Error::InvalidConfig("methodologies 2 and 3 sample the weights".into()))
            }
            _ => {}
        }
        if self.aggregators.is_empty() {
            return Err(Error::InvalidConfig("no aggregator selected".into()));
        }
        if self.methodology != Methodology::M1 && self.samples == 0 {
            return Err(Error::InvalidConfig("at least one sample is required".into()));
        }
        Ok(())
    }

    pub fn smaa_settings(&self) -> SmaaSettings {
        SmaaSettings { samples: self.samples, seed: self.seed, weights: self.weights.clone(), u1_tol: self.u1_tol }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedRanking {
    pub name: String,
    pub ranking: Ranking,
}

/// Interaction indices learned once from the data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedInteractions {
    pub correlation: CorrelationMatrix,
    pub u1: FitReport,
    pub u2: FitReport,
}

impl FittedInteractions {
    pub fn learn(dm: &DecisionMatrix, phi: &WeightVector, u1_tol: f64) -> Result<Self> {
        let correlation = pearson_matrix(dm)?;
        let u1 = fit_u1(&correlation, phi, u1_tol)?;
        let u2 = fit_u2(&correlation, phi)?;
        Ok(Self { correlation, u1, u2 })
    }

    pub fn aggregator(&self, family: AggregatorFamily) -> Aggregator {
        match family {
            AggregatorFamily::Ws => Aggregator::WeightedSum,
            AggregatorFamily::CiU1 => Aggregator::Choquet { interaction: self.u1.capacity.interaction().clone() },
            AggregatorFamily::CiU2 => Aggregator::Choquet { interaction: self.u2.capacity.interaction().clone() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Methodology1 {
    pub fits: FittedInteractions,
    pub scores_ws: ScoreVector,
    pub scores_u1: ScoreVector,
    pub scores_u2: ScoreVector,
    pub gaii: Ranking,
    pub ci_u1: Ranking,
    pub ci_u2: Ranking,
    pub tau_gaii_u1: f64,
    pub tau_gaii_u2: f64,
}

impl Methodology1 {
    pub fn ranking(&self, family: AggregatorFamily) -> &Ranking {
        match family {
            AggregatorFamily::Ws => &self.gaii,
            AggregatorFamily::CiU1 => &self.ci_u1,
            AggregatorFamily::CiU2 => &self.ci_u2,
        }
    }
}

/// Weighted-sum and Choquet rankings under fixed weights `w`, which also act
/// as the Shapley values of the learned capacities.
pub fn run_methodology_1(dm: &DecisionMatrix, w: &WeightVector, u1_tol: f64) -> Result<Methodology1> {
    let fits = FittedInteractions::learn(dm, w, u1_tol)?;
    let scores_ws = weighted_sum_score(dm, w)?;
    let scores_u1 = choquet_2additive_score(dm, &fits.u1.capacity)?;
    let scores_u2 = choquet_2additive_score(dm, &fits.u2.capacity)?;
    let gaii = ranking_from_scores(&scores_ws);
    let ci_u1 = ranking_from_scores(&scores_u1);
    let ci_u2 = ranking_from_scores(&scores_u2);
    let tau_gaii_u1 = kendall_tau_distance(&gaii, &ci_u1)?;
    let tau_gaii_u2 = kendall_tau_distance(&gaii, &ci_u2)?;
    Ok(Methodology1 { fits, scores_ws, scores_u1, scores_u2, gaii, ci_u1, ci_u2, tau_gaii_u1, tau_gaii_u2 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Methodology2 {
    pub fits: FittedInteractions,
    pub runs: Vec<(AggregatorFamily, SmaaOutcome)>,
}

impl Methodology2 {
    pub fn outcome(&self, family: AggregatorFamily) -> Option<&SmaaOutcome> {
        self.runs.iter().find(|(f, _)| *f == family).map(|(_, o)| o)
    }
}

fn smaa_runs(
    dm: &DecisionMatrix,
    fits: &FittedInteractions,
    families: &[AggregatorFamily],
    settings: &SmaaSettings,
    record_rankings: bool,
) -> Result<Vec<(AggregatorFamily, SmaaOutcome)>> {
    let sampler = settings.weights.sampler()?;
    families
        .iter()
        .map(|&family| {
            // same seed for every family: all aggregators see the same weight draws
            let cfg = SmaaConfig {
                samples: settings.samples,
                seed: settings.seed,
                sampler: sampler.clone(),
                aggregator: fits.aggregator(family),
                record_rankings,
            };
            Ok((family, run_smaa(dm, &cfg)?))
        })
        .collect()
}

/// Rank acceptability analysis for each aggregator family. The interaction
/// indices are learned once, with `reference_weights` as Shapley values.
pub fn run_methodology_2(
    dm: &DecisionMatrix,
    reference_weights: &WeightVector,
    families: &[AggregatorFamily],
    settings: &SmaaSettings,
) -> Result<Methodology2> {
    let fits = FittedInteractions::learn(dm, reference_weights, settings.u1_tol)?;
    let runs = smaa_runs(dm, &fits, families, settings, false)?;
    Ok(Methodology2 { fits, runs })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauDistribution {
    /// Ranking compared against the per-simulation rankings.
    pub ranking: String,
    /// Aggregator whose simulations it was compared against.
    pub against: AggregatorFamily,
    pub summary: FiveNumberSummary,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Methodology3 {
    pub deterministic: Methodology1,
    pub smaa: Methodology2,
    pub condorcet: Vec<(AggregatorFamily, CondorcetOutcome)>,
    /// Kendall tau between every pair of named rankings, in `names` order.
    pub names: Vec<String>,
    pub tau_table: SquareMatrix,
    pub tau_distributions: Vec<TauDistribution>,
}

impl Methodology3 {
    pub fn condorcet(&self, family: AggregatorFamily) -> Option<&CondorcetOutcome> {
        self.condorcet.iter().find(|(f, _)| *f == family).map(|(_, o)| o)
    }

    pub fn named_rankings(&self) -> Vec<NamedRanking> {
        let mut out: Vec<NamedRanking> = AggregatorFamily::ALL
            .iter()
            .map(|&f| NamedRanking { name: f.ranking_name().into(), ranking: self.deterministic.ranking(f).clone() })
            .collect();
        for (f, c) in &self.condorcet {
            out.push(NamedRanking { name: f.condorcet_name().into(), ranking: c.ranking.clone() });
        }
        out
    }

    pub fn ranking(&self, name: &str) -> Option<Ranking> {
        self.named_rankings().into_iter().find(|r| r.name == name).map(|r| r.ranking)
    }

    pub fn tau_distribution(&self, ranking: &str) -> Option<&TauDistribution> {
        self.tau_distributions.iter().find(|d| d.ranking == ranking)
    }
}

/// Kendall tau of `reference` against every ranking in `samples`.
pub fn tau_against_samples(reference: &Ranking, samples: &[Ranking]) -> Result<Vec<f64>> {
    samples.par_iter().map(|s| kendall_tau_distance(reference, s)).collect()
}

/// Condorcet/Schulze consensus rankings from SMAA, with the deterministic
/// rankings of Methodology 1 for comparison.
///
/// Each named ranking (deterministic or Condorcet) is compared against the
/// per-simulation rankings of its own aggregator family.
pub fn run_methodology_3(
    dm: &DecisionMatrix,
    reference_weights: &WeightVector,
    families: &[AggregatorFamily],
    settings: &SmaaSettings,
) -> Result<Methodology3> {
    let deterministic = run_methodology_1(dm, reference_weights, settings.u1_tol)?;
    let fits = deterministic.fits.clone();
    let mut runs = smaa_runs(dm, &fits, families, settings, true)?;

    let mut condorcet = Vec::with_capacity(runs.len());
    let mut tau_distributions = Vec::new();
    for (family, outcome) in &mut runs {
        let cond = condorcet_ranking(&outcome.pairwise)?;
        let samples = outcome.sample_rankings.take().unwrap_or_default();
        for (name, reference) in
            [(family.ranking_name(), deterministic.ranking(*family)), (family.condorcet_name(), &cond.ranking)]
        {
            let values = tau_against_samples(reference, &samples)?;
            let summary = five_number_summary(&values)
                .ok_or_else(|| Error::InvalidConfig("no simulations to compare against".into()))?;
            tau_distributions.push(TauDistribution { ranking: name.into(), against: *family, summary, values });
        }
        condorcet.push((*family, cond));
    }

    let mut result = Methodology3 {
        deterministic,
        smaa: Methodology2 { fits, runs },
        condorcet,
        names: Vec::new(),
        tau_table: SquareMatrix::zeros(0),
        tau_distributions,
    };
    let named = result.named_rankings();
    let mut table = SquareMatrix::zeros(named.len());
    for (a, ra) in named.iter().enumerate() {
        for (b, rb) in named.iter().enumerate() {
            table[(a, b)] = kendall_tau_distance(&ra.ranking, &rb.ranking)?;
        }
    }
    result.names = named.into_iter().map(|r| r.name).collect();
    result.tau_table = table;
    Ok(result)
}

/// Kendall tau for each requested pair of named rankings.
pub fn compare_named(rankings: &[NamedRanking], pairs: &[(String, String)]) -> Result<Vec<(String, String, f64)>> {
    let find = |name: &str| {
        rankings
            .iter()
            .find(|r| r.name == name)
            .map(|r| &r.ranking)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown ranking `{name}`")))
    };
    pairs.iter().map(|(a, b)| Ok((a.clone(), b.clone(), kendall_tau_distance(find(a)?, find(b)?)?))).collect()
}
