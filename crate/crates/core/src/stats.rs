//! Small statistical helpers shared by the experiment harnesses.

use statrs::distribution::{Binomial, Discrete, DiscreteCDF};

const Z95: f64 = 1.959963984540054;

/// Wilson 95% score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z95 / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Standard error of an empirical proportion.
pub fn proportion_se(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Standard error of a product of two proportions estimated from the same
/// trials, by the delta method with the (negative) covariance term dropped.
pub fn product_se(p1: f64, p2: f64, trials: usize) -> f64 {
    let n = trials as f64;
    ((p2 * p2 * p1 * (1.0 - p1) + p1 * p1 * p2 * (1.0 - p2)) / n).sqrt()
}

/// Sample mean and the standard error of the mean.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Exact `P(Bin(n, p) = j)` for `j = 0..=n`.
pub fn binomial_pmf_table(n: usize, p: f64) -> Vec<f64> {
    let dist = Binomial::new(p, n as u64).expect("probability in [0,1]");
    (0..=n as u64).map(|j| dist.pmf(j)).collect()
}

/// Exact `P(Bin(n, p) ≤ j)`.
pub fn binomial_cdf(n: usize, p: f64, j: i64) -> f64 {
    if j < 0 {
        return 0.0;
    }
    if j >= n as i64 {
        return 1.0;
    }
    Binomial::new(p, n as u64)
        .expect("probability in [0,1]")
        .cdf(j as u64)
}

/// Empirical lower quantile: smallest value with at least `q` mass at or
/// below it. `values` need not be sorted.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN quantiles"));
    let idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx]
}
