//! User-specific, time-varying reward functions: weighted sums of utilities
//! of a single outcome coordinate, the feature vector, and the action.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::posterior::FeatureVector;

/// Closed-form utility families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UtilityKind {
    /// `slope_below · y` for `y ≤ goal`, `slope_above · y + intercept_above`
    /// beyond it. Models a goal with a high slope before attainment.
    PiecewiseLinearGoal {
        slope_below: f64,
        slope_above: f64,
        intercept_above: f64,
        goal: f64,
    },
    /// `-coefficient · c²` where `c` is the penalized count read from
    /// `feature_index`, plus one when the evaluated action is non-control
    /// (sending the candidate notification adds to the burden it penalizes).
    QuadraticPenalty { coefficient: f64, feature_index: usize },
    /// `scale · preferences[action]`, independent of the outcome.
    ActionPreference { preferences: Vec<f64>, scale: f64 },
    /// The raw outcome.
    Identity,
}

/// A utility of one outcome coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilitySpec {
    pub outcome_index: usize,
    #[serde(flatten)]
    pub kind: UtilityKind,
}

impl UtilitySpec {
    pub fn identity(outcome_index: usize) -> Self {
        UtilitySpec {
            outcome_index,
            kind: UtilityKind::Identity,
        }
    }

    /// Evaluate the utility at outcome value `y_mk` under features `phi` and
    /// action index `action`.
    pub fn eval(&self, y_mk: f64, phi: &FeatureVector, action: usize) -> Result<f64> {
        match &self.kind {
            UtilityKind::PiecewiseLinearGoal {
                slope_below,
                slope_above,
                intercept_above,
                goal,
            } => {
                if y_mk <= *goal {
                    Ok(slope_below * y_mk)
                } else {
                    Ok(slope_above * y_mk + intercept_above)
                }
            }
            UtilityKind::QuadraticPenalty {
                coefficient,
                feature_index,
            } => {
                let base = phi.get(*feature_index).ok_or_else(|| {
                    Error::invalid_argument(format!(
                        "feature index {feature_index} out of range for dimension {}",
                        phi.dim()
                    ))
                })?;
                let count = base + if action != 0 { 1.0 } else { 0.0 };
                Ok(-coefficient * count * count)
            }
            UtilityKind::ActionPreference { preferences, scale } => {
                let pref = preferences.get(action).ok_or_else(|| {
                    Error::invalid_argument(format!(
                        "action {action} out of range for preference vector of length {}",
                        preferences.len()
                    ))
                })?;
                Ok(scale * pref)
            }
            UtilityKind::Identity => Ok(y_mk),
        }
    }

    /// Per-region Lipschitz constant in `y` and whether the utility is
    /// globally continuous in `y`.
    pub fn lipschitz_bound(&self) -> (f64, bool) {
        match &self.kind {
            UtilityKind::PiecewiseLinearGoal {
                slope_below,
                slope_above,
                intercept_above,
                goal,
            } => {
                let lower = slope_below * goal;
                let upper = slope_above * goal + intercept_above;
                let scale = 1.0_f64.max(lower.abs()).max(upper.abs());
                let continuous = (lower - upper).abs() <= 1e-12 * scale;
                (slope_below.abs().max(slope_above.abs()), continuous)
            }
            UtilityKind::QuadraticPenalty { .. } | UtilityKind::ActionPreference { .. } => {
                (0.0, true)
            }
            UtilityKind::Identity => (1.0, true),
        }
    }
}

/// A reward as `Σ_k w_k · U_k`, with weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(try_from = "RawRewardSpec", into = "RawRewardSpec")]
pub struct RewardSpec {
    terms: Vec<(f64, UtilitySpec)>,
}

impl RewardSpec {
    pub fn new(terms: Vec<(f64, UtilitySpec)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid_argument(
                "reward spec needs at least one utility term",
            ));
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if !total.is_finite() || (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid_argument(format!(
                "utility weights must sum to 1 (got {total})"
            )));
        }
        Ok(RewardSpec { terms })
    }

    /// A single identity utility with full weight: the reward reduces to the
    /// raw outcome.
    pub fn identity(outcome_index: usize) -> Self {
        RewardSpec {
            terms: vec![(1.0, UtilitySpec::identity(outcome_index))],
        }
    }

    pub fn terms(&self) -> &[(f64, UtilitySpec)] {
        &self.terms
    }

    /// `Σ_k w_k · U_k(y[m_k], φ, a)`.
    pub fn eval(&self, y: &[f64], phi: &FeatureVector, action: usize) -> Result<f64> {
        let mut total = 0.0;
        for (weight, utility) in &self.terms {
            let y_mk = *y.get(utility.outcome_index).ok_or_else(|| {
                Error::invalid_argument(format!(
                    "outcome index {} out of range for outcome vector of length {}",
                    utility.outcome_index,
                    y.len()
                ))
            })?;
            total += weight * utility.eval(y_mk, phi, action)?;
        }
        Ok(total)
    }
}

#[derive(Serialize, Deserialize)]
struct RawRewardSpec {
    terms: Vec<RawTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    weight: f64,
    #[serde(flatten)]
    utility: UtilitySpec,
}

impl TryFrom<RawRewardSpec> for RewardSpec {
    type Error = Error;

    fn try_from(raw: RawRewardSpec) -> Result<Self> {
        RewardSpec::new(raw.terms.into_iter().map(|t| (t.weight, t.utility)).collect())
    }
}

impl From<RewardSpec> for RawRewardSpec {
    fn from(spec: RewardSpec) -> Self {
        RawRewardSpec {
            terms: spec
                .terms
                .into_iter()
                .map(|(weight, utility)| RawTerm { weight, utility })
                .collect(),
        }
    }
}
