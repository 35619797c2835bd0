//! Fuzzy subsets over finite universes and reciprocal preference
//! relations.
//!
//! A [`FuzzySubset`] assigns each label a membership degree in `[0, 1]`;
//! the degree says how strongly the item belongs, with 0.5 the point of
//! maximal ambiguity. A [`PreferenceRelation`] is a square matrix
//! `mu[i][j]` grading how much option `i` is preferred to option `j`,
//! constrained by reciprocity `mu[i][j] + mu[j][i] = 1` off the diagonal
//! and perfect neutrality `mu[i][i] = 0.5` on it. Transitivity is
//! deliberately not enforced.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// Tolerance for the reciprocity and diagonal checks of a preference
/// relation.
pub const RECIPROCITY_TOL: f64 = 1e-12;

/// The investor risk-class universe, from most conservative to most
/// aggressive.
pub const RISK_CLASS_UNIVERSE: [&str; 4] = ["C", "B", "A", "A+"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzyError {
    #[error("degree {value} at position {index} is outside [0, 1]")]
    DegreeOutOfRange { index: usize, value: f64 },
    #[error("{labels} labels but {degrees} degrees")]
    LengthMismatch { labels: usize, degrees: usize },
    #[error("label {label:?} appears more than once")]
    DuplicateLabel { label: String },
    #[error("operation needs a non-empty subset")]
    EmptySubset,
    #[error("subsets are over different label lists")]
    LabelMismatch,
    #[error("matrix is not square: {rows} rows but row {row} has {len} entries")]
    NonSquare { rows: usize, row: usize, len: usize },
    #[error("entry {value} at ({row}, {col}) is outside [0, 1]")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },
    #[error("diagonal entry at ({index}, {index}) is {value}, expected 0.5")]
    DiagonalViolation { index: usize, value: f64 },
    #[error("reciprocity broken at ({row}, {col}): entries sum to {sum}, expected 1")]
    ReciprocityViolation { row: usize, col: usize, sum: f64 },
}

/// Fuzzy subset of a finite universe: distinct labels with membership
/// degrees in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySubset {
    labels: Vec<String>,
    degrees: Vec<f64>,
}

impl FuzzySubset {
    pub fn new<L: Into<String>>(labels: Vec<L>, degrees: Vec<f64>) -> Result<Self, FuzzyError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != degrees.len() {
            return Err(FuzzyError::LengthMismatch {
                labels: labels.len(),
                degrees: degrees.len(),
            });
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(FuzzyError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        for (index, &value) in degrees.iter().enumerate() {
            // Negated range check so NaN degrees are rejected as well.
            if !(0.0..=1.0).contains(&value) {
                return Err(FuzzyError::DegreeOutOfRange { index, value });
            }
        }
        Ok(Self { labels, degrees })
    }

    /// Subset over the fixed risk-class universe `{C, B, A, A+}`.
    pub fn risk_profile(degrees: [f64; 4]) -> Result<Self, FuzzyError> {
        Self::new(RISK_CLASS_UNIVERSE.to_vec(), degrees.to_vec())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Largest membership degree.
    pub fn height(&self) -> Result<f64, FuzzyError> {
        self.degrees
            .iter()
            .copied()
            .reduce(f64::max)
            .ok_or(FuzzyError::EmptySubset)
    }

    /// Labels with strictly positive degree, in original order.
    pub fn support(&self) -> Vec<&str> {
        self.labels
            .iter()
            .zip(&self.degrees)
            .filter(|(_, &d)| d > 0.0)
            .map(|(l, _)| l.as_str())
            .collect()
    }

    /// True iff some degree is exactly 1.
    pub fn is_normal(&self) -> bool {
        self.degrees.contains(&1.0)
    }

    /// Same labels, each degree replaced by `1 - d`.
    pub fn complement(&self) -> FuzzySubset {
        FuzzySubset {
            labels: self.labels.clone(),
            degrees: self.degrees.iter().map(|d| 1.0 - d).collect(),
        }
    }

    /// True iff `self` sharpens `base`: wherever `base` is at or above
    /// 0.5 the degree has not decreased, and wherever it is at or below
    /// 0.5 it has not increased. Degrees exactly at 0.5 must stay put.
    pub fn is_sharpened_version_of(&self, base: &FuzzySubset) -> Result<bool, FuzzyError> {
        if self.labels != base.labels {
            return Err(FuzzyError::LabelMismatch);
        }
        Ok(self
            .degrees
            .iter()
            .zip(&base.degrees)
            .all(|(&sharp, &b)| (b < 0.5 || sharp >= b) && (b > 0.5 || sharp <= b)))
    }
}

/// One broken constraint in a candidate preference matrix, with 1-based
/// coordinates for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PreferenceViolation {
    EntryOutOfRange { row: usize, col: usize, value: f64 },
    DiagonalNotNeutral { index: usize, value: f64 },
    ReciprocityBroken { row: usize, col: usize, sum: f64 },
}

impl fmt::Display for PreferenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PreferenceViolation::EntryOutOfRange { row, col, value } => {
                write!(f, "entry at ({row}, {col}) is {value}, outside [0, 1]")
            }
            PreferenceViolation::DiagonalNotNeutral { index, value } => {
                write!(f, "diagonal entry at ({index}, {index}) is {value}, expected 0.5")
            }
            PreferenceViolation::ReciprocityBroken { row, col, sum } => {
                write!(
                    f,
                    "reciprocity broken at ({row}, {col}): entries sum to {sum}, expected 1"
                )
            }
        }
    }
}

/// Reciprocal fuzzy preference relation over `size` options.
///
/// `mu[i][j]` grades the preference of option `i` over option `j`:
/// 1 means definite preference, 0.5 perfect neutrality. Instances are
/// only constructible through the validating [`PreferenceRelation::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceRelation {
    mu: Vec<Vec<f64>>,
}

impl PreferenceRelation {
    /// Validates and wraps a candidate matrix. The first violation in
    /// row-major order is reported; [`PreferenceRelation::violations`]
    /// lists them all.
    pub fn new(mu: Vec<Vec<f64>>) -> Result<Self, FuzzyError> {
        match Self::violations(&mu)?.first() {
            None => Ok(Self { mu }),
            Some(&PreferenceViolation::EntryOutOfRange { row, col, value }) => {
                Err(FuzzyError::EntryOutOfRange { row, col, value })
            }
            Some(&PreferenceViolation::DiagonalNotNeutral { index, value }) => {
                Err(FuzzyError::DiagonalViolation { index, value })
            }
            Some(&PreferenceViolation::ReciprocityBroken { row, col, sum }) => {
                Err(FuzzyError::ReciprocityViolation { row, col, sum })
            }
        }
    }

    /// All cell-level violations in `mu`, in row-major order with
    /// 1-based coordinates. A non-square matrix is a structural error,
    /// not a cell violation, and comes back as `Err`.
    pub fn violations(mu: &[Vec<f64>]) -> Result<Vec<PreferenceViolation>, FuzzyError> {
        let n = mu.len();
        for (i, row) in mu.iter().enumerate() {
            if row.len() != n {
                return Err(FuzzyError::NonSquare {
                    rows: n,
                    row: i + 1,
                    len: row.len(),
                });
            }
        }
        let mut out = Vec::new();
        for (i, row) in mu.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    out.push(PreferenceViolation::EntryOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        value,
                    });
                } else if i == j && (value - 0.5).abs() > RECIPROCITY_TOL {
                    out.push(PreferenceViolation::DiagonalNotNeutral {
                        index: i + 1,
                        value,
                    });
                } else if i < j {
                    let sum = value + mu[j][i];
                    if (sum - 1.0).abs() > RECIPROCITY_TOL {
                        out.push(PreferenceViolation::ReciprocityBroken {
                            row: i + 1,
                            col: j + 1,
                            sum,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn size(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[Vec<f64>] {
        &self.mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> FuzzySubset {
        FuzzySubset::risk_profile([0.7, 0.4, 0.2, 0.1]).unwrap()
    }

    #[test]
    fn construction_accepts_valid_profiles() {
        let f = profile();
        assert_eq!(f.labels(), ["C", "B", "A", "A+"]);
        assert_eq!(f.degrees(), [0.7, 0.4, 0.2, 0.1]);

        let crisp = FuzzySubset::new(vec!["X", "Y"], vec![1.0, 0.0]).unwrap();
        assert_eq!(crisp.len(), 2);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            FuzzySubset::new(vec!["X"], vec![1.2]),
            Err(FuzzyError::DegreeOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            FuzzySubset::new(vec!["X"], vec![-0.1]),
            Err(FuzzyError::DegreeOutOfRange { .. })
        ));
        assert!(matches!(
            FuzzySubset::new(vec!["X"], vec![f64::NAN]),
            Err(FuzzyError::DegreeOutOfRange { .. })
        ));
        assert!(matches!(
            FuzzySubset::new(vec!["X", "Y"], vec![0.5]),
            Err(FuzzyError::LengthMismatch {
                labels: 2,
                degrees: 1
            })
        ));
        assert!(matches!(
            FuzzySubset::new(vec!["X", "X"], vec![0.5, 0.5]),
            Err(FuzzyError::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn height_is_the_max_degree() {
        assert_eq!(profile().height().unwrap(), 0.7);
        let even = FuzzySubset::new(vec!["X", "Y"], vec![0.5, 0.5]).unwrap();
        assert_eq!(even.height().unwrap(), 0.5);
        let crisp = FuzzySubset::new(vec!["X", "Y"], vec![1.0, 0.0]).unwrap();
        assert_eq!(crisp.height().unwrap(), 1.0);

        let empty = FuzzySubset::new(Vec::<String>::new(), vec![]).unwrap();
        assert!(matches!(empty.height(), Err(FuzzyError::EmptySubset)));
    }

    #[test]
    fn support_keeps_positive_degrees_in_order() {
        assert_eq!(profile().support(), ["C", "B", "A", "A+"]);

        let crisp = FuzzySubset::new(vec!["X", "Y"], vec![1.0, 0.0]).unwrap();
        assert_eq!(crisp.support(), ["X"]);

        let zero = FuzzySubset::new(vec!["X", "Y"], vec![0.0, 0.0]).unwrap();
        assert!(zero.support().is_empty());
    }

    #[test]
    fn normality_requires_a_full_degree() {
        let normal = FuzzySubset::new(vec!["X", "Y"], vec![1.0, 0.3]).unwrap();
        assert!(normal.is_normal());
        let subnormal = FuzzySubset::new(vec!["X", "Y"], vec![0.99, 0.3]).unwrap();
        assert!(!subnormal.is_normal());
        assert!(!profile().is_normal());
    }

    #[test]
    fn complement_flips_degrees() {
        let even = FuzzySubset::new(vec!["X", "Y"], vec![0.5, 0.5]).unwrap();
        assert_eq!(even.complement(), even);

        let crisp = FuzzySubset::new(vec!["X", "Y"], vec![1.0, 0.0]).unwrap();
        assert_eq!(crisp.complement().degrees(), [0.0, 1.0]);

        let f = FuzzySubset::new(vec!["X", "Y"], vec![0.25, 0.75]).unwrap();
        assert_eq!(f.complement().degrees(), [0.75, 0.25]);
        assert_eq!(f.complement().labels(), f.labels());
    }

    #[test]
    fn sharpening_examples() {
        let base = FuzzySubset::new(vec!["X", "Y"], vec![0.7, 0.3]).unwrap();

        let away = FuzzySubset::new(vec!["X", "Y"], vec![0.9, 0.1]).unwrap();
        assert!(away.is_sharpened_version_of(&base).unwrap());

        // Reflexive: a subset sharpens itself.
        assert!(base.is_sharpened_version_of(&base).unwrap());

        let toward = FuzzySubset::new(vec!["X", "Y"], vec![0.6, 0.6]).unwrap();
        assert!(!toward.is_sharpened_version_of(&base).unwrap());
    }

    #[test]
    fn sharpening_pins_degrees_at_half() {
        let base = FuzzySubset::new(vec!["X"], vec![0.5]).unwrap();
        let stay = FuzzySubset::new(vec!["X"], vec![0.5]).unwrap();
        assert!(stay.is_sharpened_version_of(&base).unwrap());
        let moved = FuzzySubset::new(vec!["X"], vec![0.6]).unwrap();
        assert!(!moved.is_sharpened_version_of(&base).unwrap());
    }

    #[test]
    fn sharpening_requires_matching_labels() {
        let base = FuzzySubset::new(vec!["X", "Y"], vec![0.7, 0.3]).unwrap();
        let other = FuzzySubset::new(vec!["X", "Z"], vec![0.9, 0.1]).unwrap();
        assert!(matches!(
            other.is_sharpened_version_of(&base),
            Err(FuzzyError::LabelMismatch)
        ));
    }

    #[test]
    fn preference_accepts_valid_relations() {
        // Definite preference of option 1 over option 2.
        let definite = PreferenceRelation::new(vec![vec![0.5, 1.0], vec![0.0, 0.5]]).unwrap();
        assert_eq!(definite.size(), 2);
        assert_eq!(definite.mu()[0][1], 1.0);

        // Perfect neutrality everywhere.
        PreferenceRelation::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
    }

    #[test]
    fn preference_reports_first_reciprocity_break() {
        let err =
            PreferenceRelation::new(vec![vec![0.5, 0.8], vec![0.3, 0.5]]).unwrap_err();
        assert!(matches!(
            err,
            FuzzyError::ReciprocityViolation { row: 1, col: 2, .. }
        ));
    }

    #[test]
    fn preference_rejects_structural_and_cell_errors() {
        assert!(matches!(
            PreferenceRelation::new(vec![vec![0.5, 0.5]]),
            Err(FuzzyError::NonSquare { rows: 1, row: 1, len: 2 })
        ));
        assert!(matches!(
            PreferenceRelation::new(vec![vec![0.5, 1.1], vec![-0.1, 0.5]]),
            Err(FuzzyError::EntryOutOfRange { row: 1, col: 2, .. })
        ));
        assert!(matches!(
            PreferenceRelation::new(vec![vec![0.4, 0.6], vec![0.4, 0.5]]),
            Err(FuzzyError::DiagonalViolation { index: 1, .. })
        ));
    }

    #[test]
    fn violations_lists_every_broken_cell() {
        let mu = vec![
            vec![0.4, 0.8, 1.2],
            vec![0.3, 0.5, 0.9],
            vec![0.0, 0.2, 0.5],
        ];
        let got = PreferenceRelation::violations(&mu).unwrap();
        assert_eq!(
            got,
            vec![
                PreferenceViolation::DiagonalNotNeutral { index: 1, value: 0.4 },
                PreferenceViolation::ReciprocityBroken { row: 1, col: 2, sum: 1.1 },
                PreferenceViolation::EntryOutOfRange { row: 1, col: 3, value: 1.2 },
                PreferenceViolation::ReciprocityBroken { row: 2, col: 3, sum: 1.1 },
            ]
        );
    }

    #[test]
    fn reciprocity_tolerance_is_tight_but_not_exact() {
        let eps = 0.4e-12;
        PreferenceRelation::new(vec![vec![0.5, 0.7 + eps], vec![0.3, 0.5]]).unwrap();
        assert!(PreferenceRelation::new(vec![vec![0.5, 0.7 + 1e-11], vec![0.3, 0.5]]).is_err());
    }
}
