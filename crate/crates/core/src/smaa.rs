//! Monte Carlo exploration of the weight space.
//!
//! Each simulation draws a weight vector, scores every alternative with the
//! configured aggregator and ranks them. Over `S` simulations this yields the
//! rank acceptability indices, the pairwise winning indices, and the central
//! weight vectors.
//!
//! Sample `s` always draws from its own ChaCha stream keyed by
//! `(seed, s)`, and samples are processed in fixed-size chunks merged in
//! index order, so outputs are bitwise identical at any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregate::{weighted_sum_row, Capacity2Additive};
use crate::domain::{is_permutation, ranking_from_scores, DecisionMatrix, Ranking, WeightVector};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 20_230_628;

const CHUNK: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSampler {
    /// Flat distribution on the simplex.
    Uniform,
    /// Flat distribution restricted to `w[order[0]] >= w[order[1]] >= ...`.
    Ordinal(Vec<usize>),
    /// Point mass.
    Fixed(WeightVector),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    WeightedSum,
    /// 2-additive Choquet integral with a fixed interaction matrix; the
    /// sampled weights act as Shapley values.
    Choquet {
        interaction: SquareMatrix,
    },
}

impl Aggregator {
    /// Scores every alternative under weights `w`.
    pub fn scores(&self, dm: &DecisionMatrix, w: &[f64]) -> Result<Vec<f64>> {
        match self {
            Aggregator::WeightedSum => Ok(dm.rows().map(|row| weighted_sum_row(row, w)).collect()),
            Aggregator::Choquet { interaction } => {
                let cap = shrink_to_feasible(w, interaction)?;
                Ok(dm.rows().map(|row| cap.score_row(row)).collect())
            }
        }
    }
}

/// 2-additive capacity with Shapley values `phi` and interactions `beta * I`,
/// where `beta = min(1, min_j 2 phi_j / sum_k |I_jk|)` is the largest factor
/// keeping every monotonicity constraint satisfied.
pub fn shrink_to_feasible(phi: &[f64], interaction: &SquareMatrix) -> Result<Capacity2Additive> {
    let n = phi.len();
    if interaction.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: interaction.dim() });
    }
    let mut beta = 1.0_f64;
    for j in 0..n {
        let load: f64 = interaction.row(j).iter().map(|v| v.abs()).sum();
        if load > 0.0 {
            beta = beta.min(2.0 * phi[j] / load);
        }
    }
    let scaled = if beta < 1.0 { interaction.scaled(beta) } else { interaction.clone() };
    Capacity2Additive::new(phi.to_vec(), scaled).map_err(|e| Error::InfeasibleCapacity(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmaaConfig {
    pub samples: usize,
    pub seed: u64,
    pub sampler: WeightSampler,
    pub aggregator: Aggregator,
    /// Keep the ranking of every simulation (needed for tau distributions).
    #[serde(default)]
    pub record_rankings: bool,
}

impl SmaaConfig {
    pub fn new(sampler: WeightSampler, aggregator: Aggregator) -> Self {
        Self { samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED, sampler, aggregator, record_rankings: false }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("at least one sample is required".into()));
        }
        if n < 2 {
            return Err(Error::InvalidConfig("need at least two criteria".into()));
        }
        match &self.sampler {
            WeightSampler::Uniform => {}
            WeightSampler::Ordinal(order) if !is_permutation(order, n) => {
                return Err(Error::InvalidConfig(format!(
                    "preference order {order:?} is not a permutation of {n} criteria"
                )));
            }
            WeightSampler::Ordinal(_) => {}
            WeightSampler::Fixed(w) if w.len() != n => {
                return Err(Error::InvalidConfig(format!("fixed weights have {} entries, expected {n}", w.len())));
            }
            WeightSampler::Fixed(_) => {}
        }
        if let Aggregator::Choquet { interaction } = &self.aggregator {
            if interaction.dim() != n {
                return Err(Error::InvalidConfig(format!(
                    "interaction matrix is {0}x{0}, expected {n}x{n}",
                    interaction.dim()
                )));
            }
            shrink_to_feasible(&vec![1.0 / n as f64; n], interaction)
                .map_err(|e| Error::InvalidConfig(format!("bad interaction matrix: {e}")))?;
        }
        Ok(())
    }
}

/// `b[i][s]`: probability that alternative `i` is ranked `s + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptabilityMatrix(SquareMatrix);

impl AcceptabilityMatrix {
    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    /// Probability that `alternative` takes 1-based `rank`.
    pub fn get(&self, alternative: usize, rank: usize) -> f64 {
        self.0[(alternative, rank - 1)]
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// `c[i][k]`: probability that alternative `i` scores above `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseWinningMatrix(SquareMatrix);

impl PairwiseWinningMatrix {
    pub const TOL: f64 = 1e-9;

    pub fn new(c: SquareMatrix) -> Result<Self> {
        let m = c.dim();
        for i in 0..m {
            if c[(i, i)] != 0.0 {
                return Err(Error::InvalidMatrix(format!("c[{i}][{i}] must be 0")));
            }
            for k in 0..m {
                let v = c[(i, k)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidMatrix(format!("c[{i}][{k}] = {v} outside [0, 1]")));
                }
                if i != k && (v + c[(k, i)] - 1.0).abs() > Self::TOL {
                    return Err(Error::InvalidMatrix(format!("c[{i}][{k}] + c[{k}][{i}] != 1")));
                }
            }
        }
        Ok(Self(c))
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.0[(i, k)]
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralWeight {
    /// Mean weight vector over the simulations ranking this alternative first.
    pub central_weight: Option<WeightVector>,
    pub confidence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralWeightReport {
    pub entries: Vec<CentralWeight>,
    /// Criteria are deterministic, so each confidence factor is a 0/1 indicator.
    pub confidence_is_indicator: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmaaOutcome {
    pub samples: usize,
    pub acceptability: AcceptabilityMatrix,
    pub pairwise: PairwiseWinningMatrix,
    pub central_weights: CentralWeightReport,
    /// Per-simulation rankings, in sample order, when requested.
    pub sample_rankings: Option<Vec<Ranking>>,
}

/// Flat simplex draw via sorted-uniform spacings.
pub fn sample_uniform_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WeightVector {
    assert!(n >= 1, "simplex dimension must be positive");
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut w = Vec::with_capacity(n);
    let mut prev = 0.0;
    for c in cuts {
        w.push(c - prev);
        prev = c;
    }
    w.push(1.0 - prev);
    WeightVector::new(w).expect("spacings lie on the simplex")
}

/// Flat simplex draw sorted so that `w[order[0]] >= w[order[1]] >= ...`.
pub fn sample_ordinal<R: Rng + ?Sized>(order: &[usize], rng: &mut R) -> WeightVector {
    let mut sorted = sample_uniform_simplex(order.len(), rng).into_inner();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut w = vec![0.0; order.len()];
    for (&criterion, v) in order.iter().zip(sorted) {
        w[criterion] = v;
    }
    WeightVector::new(w).expect("a permutation of simplex weights")
}

fn draw(sampler: &WeightSampler, n: usize, rng: &mut ChaCha8Rng) -> WeightVector {
    match sampler {
        WeightSampler::Uniform => sample_uniform_simplex(n, rng),
        WeightSampler::Ordinal(order) => sample_ordinal(order, rng),
        WeightSampler::Fixed(w) => w.clone(),
    }
}

/// Random stream for one simulation.
pub fn sample_rng(seed: u64, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample as u64);
    rng
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

struct Tally {
    m: usize,
    rank_counts: Vec<u64>,
    /// Twice the pairwise win count, so a tie credits 1 to each side.
    half_wins: Vec<u64>,
    first_counts: Vec<u64>,
    weight_sums: Vec<CompensatedSum>,
    rankings: Vec<Ranking>,
}

impl Tally {
    fn new(m: usize, n: usize) -> Self {
        Self {
            m,
            rank_counts: vec![0; m * m],
            half_wins: vec![0; m * m],
            first_counts: vec![0; m],
            weight_sums: vec![CompensatedSum::default(); m * n],
            rankings: Vec::new(),
        }
    }

    fn record(&mut self, scores: &[f64], w: &[f64], keep: bool) {
        let m = self.m;
        let ranking = ranking_from_scores(scores);
        for (i, &p) in ranking.positions().iter().enumerate() {
            self.rank_counts[i * m + p - 1] += 1;
        }
        for i in 0..m {
            for k in i + 1..m {
                if scores[i] > scores[k] {
                    self.half_wins[i * m + k] += 2;
                } else if scores[k] > scores[i] {
                    self.half_wins[k * m + i] += 2;
                } else {
                    self.half_wins[i * m + k] += 1;
                    self.half_wins[k * m + i] += 1;
                }
            }
        }
        let best = ranking.at(1);
        self.first_counts[best] += 1;
        let n = w.len();
        for (acc, v) in self.weight_sums[best * n..(best + 1) * n].iter_mut().zip(w) {
            acc.add(*v);
        }
        if keep {
            self.rankings.push(ranking);
        }
    }

    fn merge(&mut self, other: Tally) {
        for (a, b) in self.rank_counts.iter_mut().zip(other.rank_counts) {
            *a += b;
        }
        for (a, b) in self.half_wins.iter_mut().zip(other.half_wins) {
            *a += b;
        }
        for (a, b) in self.first_counts.iter_mut().zip(other.first_counts) {
            *a += b;
        }
        for (a, b) in self.weight_sums.iter_mut().zip(other.weight_sums) {
            a.add(b.sum);
            a.add(b.carry);
        }
        self.rankings.extend(other.rankings);
    }
}

/// Runs `cfg.samples` simulations over `dm`.
pub fn run_smaa(dm: &DecisionMatrix, cfg: &SmaaConfig) -> Result<SmaaOutcome> {
    let (m, n) = (dm.num_alternatives(), dm.num_criteria());
    cfg.validate(n)?;
    let chunks = cfg.samples.div_ceil(CHUNK);

    let partials: Vec<Result<Tally>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::new(m, n);
            for s in c * CHUNK..((c + 1) * CHUNK).min(cfg.samples) {
                let mut rng = sample_rng(cfg.seed, s);
                let w = draw(&cfg.sampler, n, &mut rng);
                let scores = cfg.aggregator.scores(dm, &w)?;
                tally.record(&scores, &w, cfg.record_rankings);
            }
            Ok(tally)
        })
        .collect();

    let mut total = Tally::new(m, n);
    for part in partials {
        total.merge(part?);
    }

    let s = cfg.samples as f64;
    let mut b = SquareMatrix::zeros(m);
    let mut c = SquareMatrix::zeros(m);
    for i in 0..m {
        for k in 0..m {
            b[(i, k)] = total.rank_counts[i * m + k] as f64 / s;
            c[(i, k)] = total.half_wins[i * m + k] as f64 / (2.0 * s);
        }
    }

    let mut entries = Vec::with_capacity(m);
    for i in 0..m {
        let count = total.first_counts[i];
        if count == 0 {
            entries.push(CentralWeight { central_weight: None, confidence: 0.0 });
            continue;
        }
        let mean: Vec<f64> =
            total.weight_sums[i * n..(i + 1) * n].iter().map(|acc| acc.value() / count as f64).collect();
        let central = WeightVector::new(mean)?;
        let scores = cfg.aggregator.scores(dm, &central)?;
        let confidence = if ranking_from_scores(&scores).at(1) == i { 1.0 } else { 0.0 };
        entries.push(CentralWeight { central_weight: Some(central), confidence });
    }

    Ok(SmaaOutcome {
        samples: cfg.samples,
        acceptability: AcceptabilityMatrix(b),
        pairwise: PairwiseWinningMatrix(c),
        central_weights: CentralWeightReport { entries, confidence_is_indicator: true },
        sample_rankings: cfg.record_rankings.then_some(total.rankings),
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn dm(rows: Vec<Vec<f64>>) -> DecisionMatrix {
        DecisionMatrix::from_rows(rows).unwrap()
    }

    fn ws_config(samples: usize, sampler: WeightSampler) -> SmaaConfig {
        SmaaConfig { samples, ..SmaaConfig::new(sampler, Aggregator::WeightedSum) }
    }

    fn within_3_sigma(estimate: f64, p: f64, draws: usize) -> bool {
        (estimate - p).abs() <= 3.0 * (p * (1.0 - p) / draws as f64).sqrt()
    }

    #[test]
    fn simplex_draws_are_on_the_simplex() {
        let mut rng = sample_rng(7, 0);
        for n in 2..9 {
            let w = sample_uniform_simplex(n, &mut rng);
            assert_eq!(w.len(), n);
            assert!(w.iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn two_criteria_uniform_first_component() {
        let mut rng = sample_rng(1, 0);
        let draws = 40_000;
        let xs: Vec<f64> = (0..draws).map(|_| sample_uniform_simplex(2, &mut rng)[0]).collect();
        let mean = xs.iter().sum::<f64>() / draws as f64;
        assert!((mean - 0.5).abs() <= 3.0 * (1.0 / 12.0 / draws as f64).sqrt());
        // uniform on [0, 1]: each decile holds ~10% of the draws
        for d in 0..10 {
            let frac = xs.iter().filter(|x| (**x * 10.0) as usize == d).count() as f64 / draws as f64;
            assert!(within_3_sigma(frac, 0.1, draws), "decile {d}: {frac}");
        }
    }

    #[test]
    fn seven_criteria_component_means() {
        let mut rng = sample_rng(4, 0);
        let draws = 100_000;
        let mut sums = [0.0; 7];
        for _ in 0..draws {
            for (s, v) in sums.iter_mut().zip(sample_uniform_simplex(7, &mut rng).iter()) {
                *s += v;
            }
        }
        // Dirichlet(1,...,1): var = (n-1) / (n^2 (n+1))
        let sigma = (6.0 / (49.0 * 8.0) / draws as f64).sqrt();
        for s in sums {
            assert!((s / draws as f64 - 1.0 / 7.0).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn ordinal_draws_respect_order() {
        let order = [4, 5, 2, 3, 0, 1, 6];
        let mut rng = sample_rng(11, 0);
        for _ in 0..1_000 {
            let w = sample_ordinal(&order, &mut rng);
            assert!(order.windows(2).all(|p| w[p[0]] >= w[p[1]]));
        }
    }

    #[test]
    fn ordinal_two_criteria_preferred_weight_is_uniform_on_upper_half() {
        let mut rng = sample_rng(5, 0);
        let draws = 40_000;
        let xs: Vec<f64> = (0..draws).map(|_| sample_ordinal(&[1, 0], &mut rng)[1]).collect();
        assert!(xs.iter().all(|x| (0.5..=1.0).contains(x)));
        let mean = xs.iter().sum::<f64>() / draws as f64;
        assert!((mean - 0.75).abs() <= 3.0 * (1.0 / 48.0 / draws as f64).sqrt());
        let below = xs.iter().filter(|x| **x < 0.625).count() as f64 / draws as f64;
        assert!(within_3_sigma(below, 0.25, draws));
    }

    #[test]
    fn symmetric_pair_splits_first_rank() {
        let out =
            run_smaa(&dm(vec![vec![1.0, 0.0], vec![0.0, 1.0]]), &ws_config(10_000, WeightSampler::Uniform)).unwrap();
        assert!(within_3_sigma(out.acceptability.get(0, 1), 0.5, 10_000));
    }

    #[test]
    fn literal_two_alternative_threshold() {
        // a1 wins iff w1 > 0.6 - 0.3 w1, i.e. w1 > 6/13
        let out =
            run_smaa(&dm(vec![vec![1.0, 0.0], vec![0.3, 0.6]]), &ws_config(10_000, WeightSampler::Uniform)).unwrap();
        assert!(within_3_sigma(out.pairwise.get(0, 1), 7.0 / 13.0, 10_000));
    }

    #[test]
    fn dominating_alternative_always_first() {
        let data = dm(vec![vec![9.0, 9.0, 9.0], vec![1.0, 5.0, 2.0], vec![3.0, 2.0, 8.0]]);
        let out = run_smaa(&data, &ws_config(2_000, WeightSampler::Uniform)).unwrap();
        assert_eq!(out.acceptability.get(0, 1), 1.0);
        assert_eq!(out.pairwise.get(0, 1), 1.0);
        assert_eq!(out.pairwise.get(0, 2), 1.0);
        assert_eq!(out.central_weights.entries[0].confidence, 1.0);
        assert!(out.central_weights.entries[1].central_weight.is_none());
    }

    #[test]
    fn single_fixed_draw_reproduces_deterministic_ranking() {
        let data = dm(vec![vec![3.0, 1.0], vec![1.0, 4.0], vec![2.0, 2.0]]);
        let w = WeightVector::new(vec![0.7, 0.3]).unwrap();
        let out = run_smaa(&data, &ws_config(1, WeightSampler::Fixed(w.clone()))).unwrap();
        let scores = Aggregator::WeightedSum.scores(&data, &w).unwrap();
        let ranking = ranking_from_scores(&scores);
        for i in 0..3 {
            for r in 1..=3 {
                let expected = if ranking.position(i) == r { 1.0 } else { 0.0 };
                assert_eq!(out.acceptability.get(i, r), expected);
            }
        }
        assert_eq!(out.central_weights.entries[ranking.at(1)].central_weight.as_ref(), Some(&w));
    }

    #[test]
    fn ties_credit_half() {
        let data = dm(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let out = run_smaa(&data, &ws_config(10, WeightSampler::Uniform)).unwrap();
        assert_eq!(out.pairwise.get(0, 1), 0.5);
        assert_eq!(out.acceptability.get(0, 1), 1.0);
    }

    #[test]
    fn choquet_shrinks_interaction_per_draw() {
        let inter = SquareMatrix::from_upper_triangle(3, &[-0.6, -0.2, 0.3]).unwrap();
        let cap = shrink_to_feasible(&[0.1, 0.5, 0.4], &inter).unwrap();
        // criterion 0: 2 * 0.1 / 0.8 = 0.25
        assert!((cap.interaction()[(0, 1)] + 0.15).abs() < 1e-15);
        assert!(cap.monotonicity_slack(0).abs() < 1e-15);
        let cfg = SmaaConfig {
            samples: 500,
            ..SmaaConfig::new(WeightSampler::Uniform, Aggregator::Choquet { interaction: inter })
        };
        let out = run_smaa(&dm(vec![vec![1.0, 2.0, 3.0], vec![3.0, 2.0, 1.0], vec![2.0, 2.0, 2.0]]), &cfg).unwrap();
        assert_eq!(out.samples, 500);
    }

    #[test]
    fn config_validation() {
        let data = dm(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!(run_smaa(&data, &ws_config(0, WeightSampler::Uniform)).is_err());
        assert!(run_smaa(&data, &ws_config(5, WeightSampler::Ordinal(vec![0, 0]))).is_err());
        let bad = SmaaConfig::new(WeightSampler::Uniform, Aggregator::Choquet { interaction: SquareMatrix::zeros(3) });
        assert!(matches!(run_smaa(&data, &bad), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn determinism_across_thread_counts() {
        let data = dm((0..12).map(|i| (0..5).map(|j| ((i * 31 + j * 17) % 23) as f64).collect()).collect());
        let cfg = SmaaConfig {
            samples: 3_000,
            record_rankings: true,
            ..SmaaConfig::new(WeightSampler::Uniform, Aggregator::WeightedSum)
        };
        let one =
            rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_smaa(&data, &cfg)).unwrap();
        let many =
            rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap().install(|| run_smaa(&data, &cfg)).unwrap();
        assert_eq!(one, many);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn descriptive_measures_are_consistent(
            rows in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 3), 2..7),
            seed in any::<u64>(),
        ) {
            let data = dm(rows);
            let m = data.num_alternatives();
            let cfg = SmaaConfig { samples: 300, seed, ..SmaaConfig::new(WeightSampler::Uniform, Aggregator::WeightedSum) };
            let out = run_smaa(&data, &cfg).unwrap();
            let b = out.acceptability.matrix();
            for i in 0..m {
                prop_assert!((b.row(i).iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                prop_assert!(((0..m).map(|r| b[(r, i)]).sum::<f64>() - 1.0).abs() <= 1e-9);
                for k in 0..m {
                    if i != k {
                        prop_assert!((out.pairwise.get(i, k) + out.pairwise.get(k, i) - 1.0).abs() <= 1e-15);
                    }
                }
                if let Some(w) = &out.central_weights.entries[i].central_weight {
                    prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                }
            }
            prop_assert!(PairwiseWinningMatrix::new(out.pairwise.matrix().clone()).is_ok());
        }

        #[test]
        fn weak_dominance_wins_every_draw(
            base in prop::collection::vec(0.0f64..10.0, 4),
            bumps in prop::collection::vec(0.0f64..3.0, 4),
            strict in 0usize..4,
        ) {
            let mut better = base.clone();
            for (b, d) in better.iter_mut().zip(&bumps) { *b += d; }
            better[strict] += 0.5;
            let data = dm(vec![base, better]);
            let out = run_smaa(&data, &ws_config(200, WeightSampler::Uniform)).unwrap();
            prop_assert_eq!(out.pairwise.get(1, 0), 1.0);
            let positive = WeightSampler::Fixed(WeightVector::uniform(4));
            prop_assert_eq!(run_smaa(&data, &ws_config(1, positive)).unwrap().pairwise.get(1, 0), 1.0);
        }
    }
}
