//! Random survival forests: log-rank split search, recursive tree
//! growth with a minimum-unique-deaths stopping rule, Nelson-Aalen
//! terminal hazards, bootstrap/OOB bookkeeping, and adaptive
//! missing-value imputation.
//!
//! Trees grow independently (and in parallel); per-tree RNG streams are
//! derived from `(seed, tree index)` so a forest is bit-reproducible
//! regardless of thread scheduling.

mod grow;
mod impute;
mod persist;
mod predict;
mod split;

pub use grow::{grow_forest, grow_tree};
pub use impute::{impute_adaptive, ImputationOutcome};
pub use persist::{load_forest, save_forest, FORMAT_VERSION};
pub use split::{best_split, log_rank_statistic, NodeMembers, SplitCandidate};

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, FeatureMeta};
use crate::error::ForestError;
use crate::step::StepFunction;

/// Forest hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    /// Number of trees (B).
    pub trees: usize,
    /// Candidate features drawn at each node (p).
    pub mtry: usize,
    /// Minimum unique death times each daughter must keep (d0).
    pub min_deaths: u32,
    pub seed: u64,
}

impl ForestParams {
    /// Defaults: 1000 trees, `mtry = ceil(sqrt(R))`, `min_deaths = 3`.
    pub fn with_defaults(n_features: usize, seed: u64) -> Self {
        ForestParams {
            trees: 1000,
            mtry: default_mtry(n_features),
            min_deaths: 3,
            seed,
        }
    }

    pub(crate) fn validate(&self, n_features: usize) -> Result<(), ForestError> {
        if self.trees == 0 {
            return Err(ForestError::BadParams("trees must be >= 1".into()));
        }
        if self.mtry == 0 || self.mtry > n_features {
            return Err(ForestError::BadParams(format!(
                "mtry {} out of range 1..={n_features}",
                self.mtry
            )));
        }
        if self.min_deaths == 0 {
            return Err(ForestError::BadParams("min_deaths must be >= 1".into()));
        }
        Ok(())
    }
}

/// `ceil(sqrt(R))`, clamped to at least 1.
pub fn default_mtry(n_features: usize) -> usize {
    ((n_features as f64).sqrt().ceil() as usize).max(1)
}

/// Split decision at an internal node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRule {
    pub feature: usize,
    pub value: SplitValue,
    /// Log-rank value of the chosen split (signed).
    pub statistic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitValue {
    /// Numeric: `x <= threshold` routes left (ties go left).
    Threshold(f64),
    /// Categorical: `x == level` routes left (one-vs-rest).
    Level(u32),
}

impl SplitRule {
    /// Does the value route to the left daughter?
    #[inline]
    pub fn goes_left(&self, v: f64) -> bool {
        match self.value {
            SplitValue::Threshold(t) => v <= t,
            SplitValue::Level(l) => v == l as f64,
        }
    }
}

/// A survival tree node: an internal split or a terminal hazard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        rule: SplitRule,
        /// In-bag observed values of the split feature at this node;
        /// missing values are drawn from this pool when routing.
        pool: Vec<f64>,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Terminal {
        /// Nelson-Aalen cumulative hazard of the in-bag members.
        chf: StepFunction,
        /// In-bag multiplicity total.
        members: u32,
        unique_deaths: u32,
    },
}

impl TreeNode {
    pub fn is_terminal(&self) -> bool {
        matches!(self, TreeNode::Terminal { .. })
    }

    /// Number of terminal nodes.
    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Terminal { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    /// Maximum node depth (root = 0).
    pub fn height(&self) -> usize {
        match self {
            TreeNode::Terminal { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.height().max(right.height()),
        }
    }

    /// Depth of the shallowest node splitting on `feature`.
    pub fn first_split_depth(&self, feature: usize) -> Option<usize> {
        match self {
            TreeNode::Terminal { .. } => None,
            TreeNode::Internal {
                rule, left, right, ..
            } => {
                if rule.feature == feature {
                    return Some(0);
                }
                let l = left.first_split_depth(feature);
                let r = right.first_split_depth(feature);
                match (l, r) {
                    (Some(a), Some(b)) => Some(1 + a.min(b)),
                    (Some(a), None) => Some(1 + a),
                    (None, Some(b)) => Some(1 + b),
                    (None, None) => None,
                }
            }
        }
    }

    /// Does any node split on `feature`?
    pub fn uses_feature(&self, feature: usize) -> bool {
        self.first_split_depth(feature).is_some()
    }

    /// Sum of terminal in-bag member counts.
    pub fn leaf_member_total(&self) -> u32 {
        match self {
            TreeNode::Terminal { members, .. } => *members,
            TreeNode::Internal { left, right, .. } => {
                left.leaf_member_total() + right.leaf_member_total()
            }
        }
    }
}

/// A trained forest with its in-bag bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub params: ForestParams,
    pub features: Vec<FeatureMeta>,
    pub trees: Vec<TreeNode>,
    /// `in_bag[b][i]` = multiplicity of record `i` in tree `b`'s
    /// bootstrap; 0 means the record is out-of-bag for that tree.
    pub in_bag: Vec<Vec<u32>>,
}

impl Forest {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn n_records(&self) -> usize {
        self.in_bag.first().map_or(0, |row| row.len())
    }

    pub fn is_oob(&self, tree: usize, record: usize) -> bool {
        self.in_bag[tree][record] == 0
    }
}

/// Nelson-Aalen cumulative hazard for a node's members, given as
/// `(time, status, weight)` triples. Knots sit at the unique death
/// times; each increment is deaths/at-risk with weighted counts.
pub fn node_chf(members: &[(f64, u8, u32)]) -> StepFunction {
    let mut death_times: Vec<f64> = members
        .iter()
        .filter(|(_, s, _)| *s == 1)
        .map(|(t, _, _)| *t)
        .collect();
    death_times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    death_times.dedup();
    if death_times.is_empty() {
        return StepFunction::zero();
    }
    let mut values = Vec::with_capacity(death_times.len());
    let mut h = 0.0;
    for &t in &death_times {
        let mut deaths = 0.0;
        let mut at_risk = 0.0;
        for &(time, status, w) in members {
            if time >= t {
                at_risk += w as f64;
            }
            if time == t && status == 1 {
                deaths += w as f64;
            }
        }
        h += deaths / at_risk;
        values.push(h);
    }
    StepFunction::new(death_times, values)
}
