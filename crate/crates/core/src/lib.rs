//! Bandit engine and simulation harness for adaptive interventions with
//! user-specific reward functions.
//!
//! The engine models a cohort of users whose measurable outcomes (step
//! counts, gym visits) share a linear model, while each user's reward is a
//! weighted sum of personal utility functions of those outcomes. Thompson
//! sampling draws outcome parameters from a shared Bayesian posterior and
//! propagates them through each user's reward function before choosing an
//! action.
//!
//! The crate ships two simulators (a synthetic physical-activity environment
//! and a semi-synthetic gym-attendance environment), six baseline policies,
//! and a seeded trial runner that reports cumulative regret.

pub mod config;
pub mod data;
pub mod env;
pub mod error;
pub mod eval;
pub mod policy;
pub mod posterior;
pub mod reward;
pub mod sim_gym;
pub mod sim_stepcount;

pub use env::{Environment, SelectionObjective, UserStep};
pub use error::{Error, Result};
pub use policy::{AssignmentMode, Policy, PolicyKind};
pub use posterior::{FeatureVector, OutcomePosterior, ParameterDraw};
pub use reward::{RewardSpec, UtilityKind, UtilitySpec};
