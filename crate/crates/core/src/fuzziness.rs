//! Entropy- and metric-based fuzziness measures.
//!
//! Both families answer the same question, how far a fuzzy subset sits
//! from being crisp, and both satisfy the same contract: zero exactly on
//! crisp subsets, maximal exactly at the all-0.5 subset, monotone under
//! sharpening, and symmetric under complementation.
//!
//! The entropy route scores each element by the binary entropy of its
//! degree. The metric route measures the Minkowski distance between the
//! subset and its own complement, `D_rho = [sum |2d - 1|^rho]^(1/rho)`,
//! which crisp subsets maximize; rescaling by the crisp-set distance
//! `n^(1/rho)` and flipping gives a fuzziness index in `[0, 1]`.

use thiserror::Error;

use crate::fuzzy::FuzzySubset;

/// Probability vectors may miss an exact unit sum by at most this much;
/// within the band they are renormalized, beyond it rejected.
pub const PROBABILITY_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzinessError {
    #[error("not a probability vector: {detail}")]
    NotAProbabilityVector { detail: String },
    #[error("entropy scale k must be positive, got {scale_k}")]
    NonPositiveScale { scale_k: f64 },
    #[error("entropy log base must exceed 1, got {log_base}")]
    InvalidLogBase { log_base: f64 },
    #[error("Minkowski order must be at least 1, got {rho}")]
    InvalidOrder { rho: u32 },
}

/// Scale constant `k` and logarithm base of the entropy measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyConfig {
    scale_k: f64,
    log_base: f64,
}

impl EntropyConfig {
    pub fn new(scale_k: f64, log_base: f64) -> Result<Self, FuzzinessError> {
        if !(scale_k > 0.0) {
            return Err(FuzzinessError::NonPositiveScale { scale_k });
        }
        if !(log_base > 1.0) {
            return Err(FuzzinessError::InvalidLogBase { log_base });
        }
        Ok(Self { scale_k, log_base })
    }

    /// The normalizing config for an `n`-element subset: `k = 1/n`,
    /// base 2. Under it [`fuzz_entropy`] ranges over `[0, 1]` with the
    /// maximum exactly at the all-0.5 subset. `n` must be at least 1.
    pub fn normalized(n: usize) -> Self {
        assert!(n >= 1, "normalized entropy config needs n >= 1");
        Self {
            scale_k: 1.0 / n as f64,
            log_base: 2.0,
        }
    }

    pub fn scale_k(&self) -> f64 {
        self.scale_k
    }

    pub fn log_base(&self) -> f64 {
        self.log_base
    }
}

/// Minkowski order `rho >= 1` of the metric measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricOrder {
    rho: u32,
}

impl MetricOrder {
    /// Order 1, the Hamming metric.
    pub const HAMMING: MetricOrder = MetricOrder { rho: 1 };
    /// Order 2, the Euclidean metric.
    pub const EUCLIDEAN: MetricOrder = MetricOrder { rho: 2 };

    pub fn new(rho: u32) -> Result<Self, FuzzinessError> {
        if rho < 1 {
            return Err(FuzzinessError::InvalidOrder { rho });
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> u32 {
        self.rho
    }
}

/// `x ln x` extended by continuity: zero at `x = 0`.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Shannon entropy `-k sum p_i log(p_i)` in the configured base.
///
/// Entries must be non-negative and sum to 1 within
/// [`PROBABILITY_SUM_TOL`]; the vector is renormalized by its actual sum
/// before the entropy is taken.
pub fn shannon_entropy(p: &[f64], config: EntropyConfig) -> Result<f64, FuzzinessError> {
    for (i, &value) in p.iter().enumerate() {
        if !(value >= 0.0) {
            return Err(FuzzinessError::NotAProbabilityVector {
                detail: format!("entry {} is {}", i + 1, value),
            });
        }
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(FuzzinessError::NotAProbabilityVector {
            detail: format!("entries sum to {sum}, expected 1"),
        });
    }
    let nats: f64 = p.iter().map(|&v| xlnx(v / sum)).sum();
    Ok(-config.scale_k * nats / config.log_base.ln())
}

/// The uniform distribution over `n >= 1` outcomes, the entropy
/// maximizer among all probability vectors of that size.
pub fn max_entropy_distribution(n: usize) -> Vec<f64> {
    assert!(n >= 1, "a probability vector needs at least one outcome");
    vec![1.0 / n as f64; n]
}

/// Entropy-based fuzziness
/// `FUZ(F) = -k sum [d log d + (1 - d) log(1 - d)]` in the configured
/// base: each element contributes the entropy of its own membership
/// coin.
pub fn fuzz_entropy(f: &FuzzySubset, config: EntropyConfig) -> f64 {
    let nats: f64 = f
        .degrees()
        .iter()
        .map(|&d| xlnx(d) + xlnx(1.0 - d))
        .sum();
    -config.scale_k * nats / config.log_base.ln()
}

/// [`fuzz_entropy`] under the normalizing config for the subset's own
/// size, so the result lies in `[0, 1]`. Empty subsets score 0.
pub fn fuzz_entropy_normalized(f: &FuzzySubset) -> f64 {
    if f.is_empty() {
        return 0.0;
    }
    fuzz_entropy(f, EntropyConfig::normalized(f.len()))
}

/// Minkowski distance between a subset and its complement:
/// `D_rho = [sum |2d - 1|^rho]^(1/rho)`.
///
/// Order 1 returns the raw sum with no root, so
/// [`hamming_distance`] agrees with it bit for bit.
pub fn minkowski_distance(f: &FuzzySubset, order: MetricOrder) -> f64 {
    let sum: f64 = f
        .degrees()
        .iter()
        .map(|&d| (2.0 * d - 1.0).abs().powi(order.rho as i32))
        .sum();
    if order.rho == 1 {
        sum
    } else {
        sum.powf(1.0 / order.rho as f64)
    }
}

/// Hamming distance `sum |2d - 1|` between a subset and its complement.
pub fn hamming_distance(f: &FuzzySubset) -> f64 {
    minkowski_distance(f, MetricOrder::HAMMING)
}

/// Metric fuzziness `FUZ_rho(F) = 1 - D_rho(F, F^c) / n^(1/rho)`.
///
/// The normalizer `n^(1/rho)` is the distance a crisp subset attains, so
/// crisp subsets score exactly 0 and the all-0.5 subset exactly 1. The
/// normalizer mirrors the order-1 shortcut of [`minkowski_distance`] so
/// the crisp cancellation is exact for every order. Empty subsets
/// score 0.
pub fn fuzz_metric(f: &FuzzySubset, order: MetricOrder) -> f64 {
    let n = f.len();
    if n == 0 {
        return 0.0;
    }
    let normalizer = if order.rho == 1 {
        n as f64
    } else {
        (n as f64).powf(1.0 / order.rho as f64)
    };
    1.0 - minkowski_distance(f, order) / normalizer
}

/// Two-element cross-check of [`fuzz_metric`] at order 2 through the
/// root-mean-square deviation form `1 - sqrt(2) * (D_2 / 2)`. Agrees
/// with the direct route within 1e-12 whenever `n = 2`.
pub fn fuzz_metric_rmsd_route(f: &FuzzySubset) -> f64 {
    let rmsd = minkowski_distance(f, MetricOrder::EUCLIDEAN) / 2.0;
    1.0 - std::f64::consts::SQRT_2 * rmsd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::FuzzySubset;

    const TIGHT: f64 = 1e-12;

    fn subset(degrees: &[f64]) -> FuzzySubset {
        let labels: Vec<String> = (0..degrees.len()).map(|i| format!("r{i}")).collect();
        FuzzySubset::new(labels, degrees.to_vec()).unwrap()
    }

    fn bits() -> EntropyConfig {
        EntropyConfig::new(1.0, 2.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            EntropyConfig::new(0.0, 2.0),
            Err(FuzzinessError::NonPositiveScale { .. })
        ));
        assert!(matches!(
            EntropyConfig::new(f64::NAN, 2.0),
            Err(FuzzinessError::NonPositiveScale { .. })
        ));
        assert!(matches!(
            EntropyConfig::new(1.0, 1.0),
            Err(FuzzinessError::InvalidLogBase { .. })
        ));
        assert!(matches!(
            MetricOrder::new(0),
            Err(FuzzinessError::InvalidOrder { rho: 0 })
        ));
        assert_eq!(MetricOrder::new(1).unwrap(), MetricOrder::HAMMING);
        assert_eq!(MetricOrder::new(2).unwrap(), MetricOrder::EUCLIDEAN);
    }

    #[test]
    fn shannon_entropy_examples() {
        assert_eq!(shannon_entropy(&[1.0, 0.0], bits()).unwrap(), 0.0);
        assert!((shannon_entropy(&[0.5, 0.5], bits()).unwrap() - 1.0).abs() <= TIGHT);
        let got = shannon_entropy(&[0.25, 0.75], bits()).unwrap();
        assert!((got - 0.8112781244591328).abs() <= TIGHT);
        assert!((got - 0.811278).abs() <= 1e-6);
    }

    #[test]
    fn shannon_entropy_scales_with_config() {
        // Natural log and k = 3 against the hand value 3*ln(2).
        let cfg = EntropyConfig::new(3.0, std::f64::consts::E).unwrap();
        let got = shannon_entropy(&[0.5, 0.5], cfg).unwrap();
        assert!((got - 3.0 * std::f64::consts::LN_2).abs() <= TIGHT);
    }

    #[test]
    fn shannon_entropy_renormalizes_within_tolerance_only() {
        let h = shannon_entropy(&[0.5, 0.5 + 4e-10], bits()).unwrap();
        assert!((h - 1.0).abs() <= 1e-9);

        assert!(matches!(
            shannon_entropy(&[0.5, 0.52], bits()),
            Err(FuzzinessError::NotAProbabilityVector { .. })
        ));
        assert!(matches!(
            shannon_entropy(&[1.5, -0.5], bits()),
            Err(FuzzinessError::NotAProbabilityVector { .. })
        ));
        assert!(matches!(
            shannon_entropy(&[f64::NAN, 1.0], bits()),
            Err(FuzzinessError::NotAProbabilityVector { .. })
        ));
    }

    #[test]
    fn uniform_distribution_shapes() {
        assert_eq!(max_entropy_distribution(2), vec![0.5, 0.5]);
        assert_eq!(max_entropy_distribution(1), vec![1.0]);
        assert_eq!(max_entropy_distribution(4), vec![0.25; 4]);
    }

    #[test]
    fn fuzz_entropy_examples() {
        assert_eq!(fuzz_entropy_normalized(&subset(&[1.0, 0.0])), 0.0);

        let even = subset(&[0.5, 0.5]);
        assert!((fuzz_entropy_normalized(&even) - 1.0).abs() <= TIGHT);

        let got = fuzz_entropy_normalized(&subset(&[0.25, 0.75]));
        assert!((got - 0.8112781244591328).abs() <= TIGHT);
        assert!((got - 0.811278).abs() <= 1e-6);

        let profile = subset(&[0.7, 0.4, 0.2, 0.1]);
        assert!((fuzz_entropy_normalized(&profile) - 0.7607912955405013).abs() <= TIGHT);
    }

    #[test]
    fn fuzz_entropy_honors_the_config() {
        // Doubling k doubles the measure; switching the base rescales it
        // by ln(old)/ln(new).
        let f = subset(&[0.25, 0.75]);
        let unit = fuzz_entropy(&f, bits());
        let doubled = fuzz_entropy(&f, EntropyConfig::new(2.0, 2.0).unwrap());
        assert!((doubled - 2.0 * unit).abs() <= TIGHT);
        let natural = fuzz_entropy(&f, EntropyConfig::new(1.0, std::f64::consts::E).unwrap());
        assert!((natural - unit * std::f64::consts::LN_2).abs() <= TIGHT);
    }

    #[test]
    fn minkowski_examples() {
        let crisp = subset(&[1.0, 0.0]);
        for rho in 1..=3 {
            let want = 2.0_f64.powf(1.0 / rho as f64);
            let got = minkowski_distance(&crisp, MetricOrder::new(rho).unwrap());
            assert!((got - want).abs() <= TIGHT, "rho = {rho}");
        }

        let even = subset(&[0.5, 0.5]);
        assert_eq!(minkowski_distance(&even, MetricOrder::EUCLIDEAN), 0.0);

        let f = subset(&[0.25, 0.75]);
        let got = minkowski_distance(&f, MetricOrder::EUCLIDEAN);
        assert!((got - std::f64::consts::FRAC_1_SQRT_2).abs() <= TIGHT);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&subset(&[1.0, 0.0])), 2.0);
        assert_eq!(hamming_distance(&subset(&[0.5, 0.5])), 0.0);
        assert_eq!(hamming_distance(&subset(&[0.25, 0.75])), 1.0);
        let profile = subset(&[0.7, 0.4, 0.2, 0.1]);
        assert!((hamming_distance(&profile) - 2.0).abs() <= TIGHT);
    }

    #[test]
    fn hamming_is_order_one_minkowski_bit_for_bit() {
        for degrees in [
            vec![0.7, 0.4, 0.2, 0.1],
            vec![0.25, 0.75],
            vec![1.0, 0.0, 1.0],
            vec![0.5; 5],
            vec![0.1, 0.9, 0.3, 0.6, 0.5],
        ] {
            let f = subset(&degrees);
            assert_eq!(
                hamming_distance(&f),
                minkowski_distance(&f, MetricOrder::HAMMING)
            );
        }
    }

    #[test]
    fn fuzz_metric_examples() {
        let crisp = subset(&[1.0, 0.0]);
        for rho in 1..=3 {
            assert_eq!(fuzz_metric(&crisp, MetricOrder::new(rho).unwrap()), 0.0);
        }
        // Crisp cancellation stays exact away from n = 2.
        let crisp5 = subset(&[1.0, 0.0, 0.0, 1.0, 1.0]);
        for rho in 1..=4 {
            assert_eq!(fuzz_metric(&crisp5, MetricOrder::new(rho).unwrap()), 0.0);
        }

        let even = subset(&[0.5, 0.5]);
        assert_eq!(fuzz_metric(&even, MetricOrder::HAMMING), 1.0);
        assert_eq!(fuzz_metric(&even, MetricOrder::EUCLIDEAN), 1.0);

        let f = subset(&[0.25, 0.75]);
        assert!((fuzz_metric(&f, MetricOrder::EUCLIDEAN) - 0.5).abs() <= 1e-9);

        let profile = subset(&[0.7, 0.4, 0.2, 0.1]);
        assert!((fuzz_metric(&profile, MetricOrder::HAMMING) - 0.5).abs() <= TIGHT);
        assert!(
            (fuzz_metric(&profile, MetricOrder::EUCLIDEAN) - 0.4522774424948339).abs() <= TIGHT
        );
    }

    #[test]
    fn rmsd_route_matches_direct_route_for_two_elements() {
        for degrees in [[0.25, 0.75], [0.5, 0.5], [1.0, 0.0], [0.3, 0.9]] {
            let f = subset(&degrees);
            let direct = fuzz_metric(&f, MetricOrder::EUCLIDEAN);
            let rmsd = fuzz_metric_rmsd_route(&f);
            assert!(
                (direct - rmsd).abs() <= TIGHT,
                "degrees {degrees:?}: {direct} vs {rmsd}"
            );
        }
        // Worked reference for {0.25, 0.75}: D_2 = sqrt(2 * 0.5^2),
        // so D_2/2 = 0.35355 and the measure is 1 - sqrt(2)*0.35355 = 0.5.
        let f = subset(&[0.25, 0.75]);
        let rmsd = minkowski_distance(&f, MetricOrder::EUCLIDEAN) / 2.0;
        assert!((rmsd - 0.35355).abs() <= 1e-4);
        assert!((fuzz_metric_rmsd_route(&f) - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn empty_subsets_score_zero() {
        let empty = FuzzySubset::new(Vec::<String>::new(), vec![]).unwrap();
        assert_eq!(fuzz_entropy_normalized(&empty), 0.0);
        assert_eq!(fuzz_metric(&empty, MetricOrder::EUCLIDEAN), 0.0);
        assert_eq!(hamming_distance(&empty), 0.0);
    }

    #[test]
    fn complement_symmetry_spot_checks() {
        for degrees in [
            vec![0.7, 0.4, 0.2, 0.1],
            vec![0.25, 0.75],
            vec![0.05, 0.95, 0.5],
        ] {
            let f = subset(&degrees);
            let c = f.complement();
            assert!(
                (fuzz_entropy_normalized(&f) - fuzz_entropy_normalized(&c)).abs() <= TIGHT
            );
            for order in [MetricOrder::HAMMING, MetricOrder::EUCLIDEAN] {
                assert!((fuzz_metric(&f, order) - fuzz_metric(&c, order)).abs() <= TIGHT);
            }
        }
    }

    #[test]
    fn sharpening_cannot_raise_either_measure() {
        let base = subset(&[0.7, 0.4, 0.2, 0.1]);
        let sharp = subset(&[0.9, 0.2, 0.1, 0.0]);
        assert!(sharp.is_sharpened_version_of(&base).unwrap());
        assert!(fuzz_entropy_normalized(&sharp) <= fuzz_entropy_normalized(&base));
        for order in [MetricOrder::HAMMING, MetricOrder::EUCLIDEAN] {
            assert!(fuzz_metric(&sharp, order) <= fuzz_metric(&base, order));
        }
    }
}
