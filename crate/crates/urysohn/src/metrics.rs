//! Evaluation metrics: Pearson correlation, (normalised) RMSE, sign-based
//! classification errors and Student-t confidence intervals.

use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::statistics::Statistics;

/// Pearson correlation coefficient between two equally long series.
///
/// Returns `NaN` when either series has zero variance (the coefficient is
/// undefined there), so a degenerate model shows up as a failed comparison
/// rather than a silently optimistic score.
///
/// # Panics
///
/// Panics if the series differ in length or hold fewer than two points.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "series must be equally long");
    assert!(a.len() >= 2, "correlation needs at least two points");
    let mean_a = a.mean();
    let mean_b = b.mean();
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    cov / (var_a * var_b).sqrt()
}

/// Root-mean-square error between predictions and actual values.
///
/// # Panics
///
/// Panics if the series differ in length or are empty.
pub fn rmse(predicted: &[f64], actual: &[f64]) -> f64 {
    assert_eq!(predicted.len(), actual.len(), "series must be equally long");
    assert!(!predicted.is_empty(), "RMSE of an empty series is undefined");
    let sq: f64 = predicted.iter().zip(actual).map(|(p, a)| (p - a) * (p - a)).sum();
    (sq / predicted.len() as f64).sqrt()
}

/// RMSE normalised by the spread of the actual values (`max - min`).
/// Returns infinity when the actual values are all equal.
pub fn nrmse(predicted: &[f64], actual: &[f64]) -> f64 {
    let range = actual.max() - actual.min();
    nrmse_with_range(predicted, actual, range)
}

/// RMSE normalised by an externally supplied spread, for comparing against
/// a range established on a larger set than the one being evaluated.
pub fn nrmse_with_range(predicted: &[f64], actual: &[f64], range: f64) -> f64 {
    rmse(predicted, actual) / range
}

/// Number of sign mismatches between predictions and `+1`/`-1` coded
/// actual values. A prediction of exactly zero takes neither sign and is
/// always counted as an error.
pub fn sign_errors(predicted: &[f64], actual: &[f64]) -> usize {
    assert_eq!(predicted.len(), actual.len(), "series must be equally long");
    predicted
        .iter()
        .zip(actual)
        .filter(|&(&p, &a)| !((p > 0.0 && a > 0.0) || (p < 0.0 && a < 0.0)))
        .count()
}

/// A two-sided 95% confidence interval, `mean ± half_width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub mean: f64,
    pub half_width: f64,
}

impl ConfidenceInterval {
    pub fn lo(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.mean + self.half_width
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo() && x <= self.hi()
    }
}

impl std::fmt::Display for ConfidenceInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.6} ± {:.6}", self.mean, self.half_width)
    }
}

/// 95% confidence interval of the mean of `samples` using the Student-t
/// quantile with `n - 1` degrees of freedom. With a single sample the
/// half-width is `NaN` (no spread information exists).
///
/// # Panics
///
/// Panics if `samples` is empty.
pub fn ci95(samples: &[f64]) -> ConfidenceInterval {
    assert!(!samples.is_empty(), "confidence interval of nothing");
    let n = samples.len();
    let mean = samples.mean();
    if n == 1 {
        return ConfidenceInterval { mean, half_width: f64::NAN };
    }
    let sd = samples.std_dev();
    if sd == 0.0 {
        return ConfidenceInterval { mean, half_width: 0.0 };
    }
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid Student-t parameters")
        .inverse_cdf(0.975);
    ConfidenceInterval { mean, half_width: t * sd / (n as f64).sqrt() }
}

/// All metrics of one evaluation pass in a single bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    /// Number of evaluated records.
    pub count: usize,
    pub pearson: f64,
    pub rmse: f64,
    /// RMSE over the spread of the evaluated actual values (or an external
    /// spread when one was supplied).
    pub nrmse: f64,
    /// Sign mismatches; only meaningful for `+1`/`-1` coded outputs.
    pub sign_errors: usize,
}

impl EvalReport {
    /// Metrics of predictions against actual values, normalising the RMSE
    /// by the actual values' own spread.
    pub fn from_pairs(predicted: &[f64], actual: &[f64]) -> Self {
        Self::from_pairs_with_range(predicted, actual, actual.max() - actual.min())
    }

    /// Metrics with an externally supplied normalisation spread.
    pub fn from_pairs_with_range(predicted: &[f64], actual: &[f64], range: f64) -> Self {
        EvalReport {
            count: predicted.len(),
            pearson: pearson(predicted, actual),
            rmse: rmse(predicted, actual),
            nrmse: nrmse_with_range(predicted, actual, range),
            sign_errors: sign_errors(predicted, actual),
        }
    }

    /// Fraction of records whose prediction carries the correct sign.
    pub fn sign_accuracy(&self) -> f64 {
        1.0 - self.sign_errors as f64 / self.count as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_matches_a_hand_computed_value() {
        // cov = 3, var_a = 2, var_b = 14/3 over n; r = 9 / sqrt(84)
        let r = pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]);
        assert!((r - 9.0 / 84.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn pearson_is_one_for_affine_images() {
        let a = [0.3, -1.2, 4.5, 2.2];
        let b: Vec<f64> = a.iter().map(|x| 3.0 * x + 7.0).collect();
        assert!((pearson(&a, &b) - 1.0).abs() < 1e-12);
        let c: Vec<f64> = a.iter().map(|x| -2.0 * x + 1.0).collect();
        assert!((pearson(&a, &c) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_of_a_constant_series_is_nan() {
        assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_nan());
    }

    #[test]
    fn nrmse_divides_by_the_actual_spread() {
        let predicted = [1.0, 2.0, 3.0];
        let actual = [1.0, 2.0, 4.0];
        let expected = (1.0f64 / 3.0).sqrt() / 3.0;
        assert!((nrmse(&predicted, &actual) - expected).abs() < 1e-14);
        assert!((nrmse_with_range(&predicted, &actual, 6.0) - expected / 2.0).abs() < 1e-14);
    }

    #[test]
    fn nrmse_of_constant_actuals_is_infinite() {
        assert!(nrmse(&[1.0, 2.0], &[3.0, 3.0]).is_infinite());
    }

    #[test]
    fn sign_errors_counts_mismatches_and_exact_zeros() {
        let actual = [1.0, -1.0, 1.0, -1.0];
        assert_eq!(sign_errors(&[0.5, -2.0, 3.0, -0.1], &actual), 0);
        assert_eq!(sign_errors(&[-0.5, -2.0, 3.0, 0.1], &actual), 2);
        assert_eq!(sign_errors(&[0.0, -2.0, 3.0, -0.1], &actual), 1);
    }

    #[test]
    fn ci95_matches_the_two_sample_student_t() {
        // mean 0.5, sd sqrt(0.5), t(0.975, df=1) = 12.70620...
        let ci = ci95(&[0.0, 1.0]);
        assert!((ci.mean - 0.5).abs() < 1e-15);
        assert!((ci.half_width - 6.35310236808906).abs() < 1e-9);
        assert!(ci.contains(0.5) && ci.contains(-5.0) && !ci.contains(7.0));
    }

    #[test]
    fn ci95_of_identical_samples_collapses() {
        let ci = ci95(&[2.0, 2.0, 2.0]);
        assert_eq!(ci.mean, 2.0);
        assert_eq!(ci.half_width, 0.0);
    }

    #[test]
    fn ci95_of_one_sample_has_unknown_width() {
        let ci = ci95(&[3.5]);
        assert_eq!(ci.mean, 3.5);
        assert!(ci.half_width.is_nan());
    }

    #[test]
    fn report_bundles_all_metrics() {
        let report = EvalReport::from_pairs(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]);
        assert_eq!(report.count, 3);
        assert!((report.pearson - 9.0 / 84.0f64.sqrt()).abs() < 1e-14);
        assert!((report.rmse - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert_eq!(report.sign_errors, 0);
        assert!((report.sign_accuracy() - 1.0).abs() < 1e-15);
    }
}
