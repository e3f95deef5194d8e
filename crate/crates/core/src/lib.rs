//! Balanced random survival forests for right-censored data.
//!
//! This crate trains random survival forests with log-rank splitting,
//! optionally rebalances the censored/event classes with SMOTE-style
//! synthetic minority generation, and evaluates models with the usual
//! survival metrics (Harrell's C-index, IPCW Brier score / prediction
//! error curves, integrated Brier score). A small numeric module checks
//! the closed-form idealized-split hazards and the balanced/unbalanced
//! Brier-score ratio that motivate balancing in the first place.
//!
//! The main entry points are:
//!
//! - [`data::Dataset`] and [`data::load_csv`] for right-censored data,
//! - [`balance::balance_dataset`] for synthetic minority generation,
//! - [`forest::grow_forest`] / [`forest::Forest`] for model fitting and
//!   prediction,
//! - [`metrics`] for evaluation,
//! - [`experiment::cv_evaluate`] for the cross-validated RSF-vs-BRSF
//!   comparison protocol,
//! - [`theory`] for the idealized-split hazard and Brier-ratio formulas.

pub mod balance;
pub mod config;
pub mod data;
pub mod error;
pub mod experiment;
pub mod forest;
pub mod metrics;
pub mod rng;
pub mod step;
pub mod theory;

pub use balance::{balance_dataset, BalancedDataset, SmoteConfig};
pub use data::{
    bootstrap_sample, load_csv, split_folds, BootstrapSample, CsvSchema, Dataset, FeatureKind,
    FeatureMeta, FoldAssignment, SurvivalRecord,
};
pub use error::{BalanceError, DataError, ExperimentError, ForestError, MetricsError, TheoryError};
pub use forest::{grow_forest, impute_adaptive, Forest, ForestParams};
pub use metrics::{
    brier_score, c_index, censoring_survival, ibs, kaplan_meier, pec, risk_score,
    PredictionErrorCurve,
};
pub use step::StepFunction;
