//! Statistical helpers for the replica harness: Wilson confidence limits,
//! Kolmogorov-Smirnov distance of a discrete law to the standard normal,
//! and a chi-square goodness-of-fit p-value.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_900_4;

/// Wilson score upper confidence limit for a binomial proportion.
pub fn wilson_upper(hits: usize, trials: usize, z: f64) -> f64 {
    assert!(trials > 0);
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center + half) / denom).min(1.0)
}

/// KS distance between the law of `(values - mean) / sd` and the standard
/// normal, evaluated on both sides of every jump.
pub fn ks_to_standard_normal(values: &[f64], probabilities: &[f64], mean: f64, sd: f64) -> f64 {
    assert!(sd > 0.0);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut cum = 0.0;
    let mut ks: f64 = 0.0;
    for (&x, &p) in values.iter().zip(probabilities) {
        let z = (x - mean) / sd;
        let target = normal.cdf(z);
        ks = ks.max((cum - target).abs());
        cum += p;
        ks = ks.max((cum - target).abs());
    }
    ks
}

/// Pearson chi-square p-value of observed counts against expected
/// probabilities. Cells with expected probability zero must be empty.
pub fn chi_square_p(observed: &[usize], expected_probs: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected_probs.len());
    let total: usize = observed.iter().sum();
    let mut stat = 0.0;
    let mut dof = 0usize;
    for (&o, &p) in observed.iter().zip(expected_probs) {
        if p == 0.0 {
            assert_eq!(o, 0, "observation in a zero-probability cell");
            continue;
        }
        let e = p * total as f64;
        stat += (o as f64 - e) * (o as f64 - e) / e;
        dof += 1;
    }
    assert!(dof >= 2, "need at least two cells");
    let chi = ChiSquared::new((dof - 1) as f64).unwrap();
    1.0 - chi.cdf(stat)
}
