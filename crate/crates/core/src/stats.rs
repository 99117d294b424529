use serde::{Deserialize, Serialize};

use crate::domain::{CorrelationMatrix, DecisionMatrix, Ranking};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Pearson correlation between every pair of criterion columns.
pub fn pearson_matrix(dm: &DecisionMatrix) -> Result<CorrelationMatrix> {
    let n = dm.num_criteria();
    let m = dm.num_alternatives() as f64;
    let centered: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let col = dm.column(j);
            let mean = col.iter().sum::<f64>() / m;
            col.into_iter().map(|v| v - mean).collect()
        })
        .collect();
    let norms: Vec<f64> = centered.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    if let Some(j) = norms.iter().position(|s| *s == 0.0) {
        return Err(Error::ZeroVariance(dm.criteria()[j].clone()));
    }

    let mut rho = SquareMatrix::identity(n);
    for j in 0..n {
        for k in j + 1..n {
            let cov: f64 = centered[j].iter().zip(&centered[k]).map(|(a, b)| a * b).sum();
            let r = (cov / (norms[j] * norms[k])).clamp(-1.0, 1.0);
            rho[(j, k)] = r;
            rho[(k, j)] = r;
        }
    }
    CorrelationMatrix::new(rho)
}

/// Number of alternative pairs ordered differently by the two rankings.
pub fn discordant_pairs(r1: &Ranking, r2: &Ranking) -> Result<usize> {
    if r1.len() != r2.len() {
        return Err(Error::DimensionMismatch { expected: r1.len(), found: r2.len() });
    }
    let (p1, p2) = (r1.positions(), r2.positions());
    let mut count = 0;
    for q in 0..p1.len() {
        for u in q + 1..p1.len() {
            if (p1[q] < p1[u]) != (p2[q] < p2[u]) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Normalized Kendall tau distance in `[0, 1]`: 0 for identical rankings, 1 for reversed ones.
pub fn kendall_tau_distance(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let d = discordant_pairs(r1, r2)?;
    let m = r1.len();
    if m < 2 {
        return Ok(0.0);
    }
    Ok(2.0 * d as f64 / (m * (m - 1)) as f64)
}

/// Minimum, quartiles, median and maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiveNumberSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Quantile with linear interpolation between order statistics
/// (position `q (len - 1)` in the sorted sample).
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `None` for an empty sample.
pub fn five_number_summary(values: &[f64]) -> Option<FiveNumberSummary> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(FiveNumberSummary {
        min: sorted[0],
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q3: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn dm(rows: Vec<Vec<f64>>) -> DecisionMatrix {
        DecisionMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn duplicated_column_correlates_perfectly() {
        let rho = pearson_matrix(&dm(vec![vec![1.0, 1.0, 4.0], vec![3.0, 3.0, 1.0], vec![2.0, 2.0, 0.5]])).unwrap();
        assert!((rho.get(0, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reversed_column_anticorrelates() {
        let rho = pearson_matrix(&dm(vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]])).unwrap();
        assert!((rho.get(0, 1) + 1.0).abs() < 1e-15);
        assert_eq!(rho.get(0, 0), 1.0);
    }

    #[test]
    fn known_value() {
        // x = (1,2,3,4), y = (2,1,4,3): cov = 3, var_x = var_y = 5 -> 0.6
        let rho = pearson_matrix(&dm(vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 4.0], vec![4.0, 3.0]])).unwrap();
        assert!((rho.get(1, 0) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn constant_column_has_zero_variance() {
        let err = pearson_matrix(&dm(vec![vec![1.0, 5.0], vec![2.0, 5.0]])).unwrap_err();
        assert!(matches!(err, Error::ZeroVariance(c) if c == "g2"));
    }

    #[test]
    fn tau_examples() {
        let id = Ranking::identity(3);
        assert_eq!(kendall_tau_distance(&id, &id).unwrap(), 0.0);
        assert_eq!(kendall_tau_distance(&id, &id.reversed()).unwrap(), 1.0);
        let swapped = Ranking::from_order(vec![1, 0, 2]).unwrap();
        assert!((kendall_tau_distance(&id, &swapped).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(kendall_tau_distance(&id, &Ranking::identity(4)).is_err());
    }

    #[test]
    fn five_numbers() {
        let s = five_number_summary(&[5.0, 1.0, 3.0, 2.0, 4.0]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        let s = five_number_summary(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
        assert!(five_number_summary(&[]).is_none());
    }

    #[test]
    fn adjacent_swap_on_62() {
        let id = Ranking::identity(62);
        let mut order: Vec<usize> = (0..62).collect();
        order.swap(30, 31);
        let swapped = Ranking::from_order(order).unwrap();
        assert_eq!(kendall_tau_distance(&id, &swapped).unwrap(), 2.0 / (62.0 * 61.0));
    }

    fn permutation(m: usize) -> impl Strategy<Value = Ranking> {
        Just((0..m).collect::<Vec<_>>()).prop_shuffle().prop_map(|o| Ranking::from_order(o).unwrap())
    }

    proptest! {
        #[test]
        fn tau_is_a_metric((a, b, c) in (2usize..12).prop_flat_map(|m| (permutation(m), permutation(m), permutation(m)))) {
            let ab = kendall_tau_distance(&a, &b).unwrap();
            let ba = kendall_tau_distance(&b, &a).unwrap();
            let bc = kendall_tau_distance(&b, &c).unwrap();
            let ac = kendall_tau_distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn pearson_is_affine_invariant(
            cols in prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 6), 3),
            scale in 0.1f64..50.0,
            shift in -100.0f64..100.0,
            which in 0usize..3,
        ) {
            let rows: Vec<Vec<f64>> = (0..6).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
            let base = dm(rows.clone());
            let Ok(rho) = pearson_matrix(&base) else { return Ok(()) };
            let moved: Vec<Vec<f64>> = rows.iter().map(|r| {
                let mut r = r.clone();
                r[which] = scale * r[which] + shift;
                r
            }).collect();
            let rho2 = pearson_matrix(&dm(moved)).unwrap();
            for (a, b) in rho.matrix().as_slice().iter().zip(rho2.matrix().as_slice()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
