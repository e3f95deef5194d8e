//! Routing covariate vectors through trained trees and averaging the
//! terminal hazards.
//!
//! Missing values encountered while routing are drawn from the split
//! node's stored pool of training values, seeded per `(route_seed,
//! tree)` so prediction stays deterministic and thread-safe.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{is_missing, Dataset};
use crate::error::ForestError;
use crate::forest::{Forest, TreeNode};
use crate::rng::{derive_seed, streams};
use crate::step::StepFunction;

fn route<'a>(mut node: &'a TreeNode, x: &[f64], rng: &mut ChaCha8Rng) -> &'a StepFunction {
    loop {
        match node {
            TreeNode::Terminal { chf, .. } => return chf,
            TreeNode::Internal {
                rule,
                pool,
                left,
                right,
            } => {
                let v = x[rule.feature];
                let v = if is_missing(v) {
                    pool[rng.gen_range(0..pool.len())]
                } else {
                    v
                };
                node = if rule.goes_left(v) { left } else { right };
            }
        }
    }
}

impl Forest {
    fn check_covariates(&self, x: &[f64]) -> Result<(), ForestError> {
        if x.len() != self.features.len() {
            return Err(ForestError::CovariateLength {
                found: x.len(),
                expected: self.features.len(),
            });
        }
        Ok(())
    }

    /// CHF of the terminal node that `x` reaches in tree `b`.
    pub fn tree_chf(&self, b: usize, x: &[f64], route_seed: u64) -> Result<&StepFunction, ForestError> {
        self.check_covariates(x)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(route_seed, streams::ROUTE));
        Ok(route(&self.trees[b], x, &mut rng))
    }

    /// Ensemble CHF: pointwise mean over all trees.
    pub fn ensemble_chf(&self, x: &[f64], route_seed: u64) -> Result<StepFunction, ForestError> {
        self.check_covariates(x)?;
        let chfs: Vec<&StepFunction> = self
            .trees
            .iter()
            .enumerate()
            .map(|(b, tree)| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                    derive_seed(route_seed, b as u64),
                    streams::ROUTE,
                ));
                route(tree, x, &mut rng)
            })
            .collect();
        Ok(StepFunction::average(chfs.iter().copied()))
    }

    /// Survival curve `exp(-H)` of the ensemble CHF.
    pub fn ensemble_survival(&self, x: &[f64], route_seed: u64) -> Result<StepFunction, ForestError> {
        Ok(StepFunction::survival_from_chf(&self.ensemble_chf(x, route_seed)?))
    }

    /// OOB ensemble CHF for training record `i`: the mean over exactly
    /// the trees whose bootstrap left the record out. `None` when the
    /// record is in-bag everywhere.
    pub fn oob_ensemble_chf(&self, data: &Dataset, i: usize) -> Option<StepFunction> {
        let x = &data.record(i).covariates;
        let chfs: Vec<&StepFunction> = self
            .trees
            .iter()
            .enumerate()
            .filter(|(b, _)| self.in_bag[*b][i] == 0)
            .map(|(b, tree)| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                    derive_seed(self.params.seed, oob_route_stream(b, i)),
                    streams::ROUTE,
                ));
                route(tree, x, &mut rng)
            })
            .collect();
        if chfs.is_empty() {
            None
        } else {
            Some(StepFunction::average(chfs.iter().copied()))
        }
    }

    /// OOB ensemble CHF with the record's value of one feature replaced
    /// (used by permutation importance). Tree `b` only contributes when
    /// record `i` is out of bag.
    pub(crate) fn oob_ensemble_chf_substituted(
        &self,
        data: &Dataset,
        i: usize,
        feature: usize,
        substituted: &[Option<f64>],
    ) -> Option<StepFunction> {
        let record = data.record(i);
        let mut x = record.covariates.clone();
        let chfs: Vec<&StepFunction> = self
            .trees
            .iter()
            .enumerate()
            .filter(|(b, _)| self.in_bag[*b][i] == 0)
            .map(|(b, tree)| {
                if let Some(v) = substituted[b] {
                    x[feature] = v;
                } else {
                    x[feature] = record.covariates[feature];
                }
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                    derive_seed(self.params.seed, oob_route_stream(b, i)),
                    streams::ROUTE,
                ));
                route(tree, &x, &mut rng)
            })
            .collect();
        if chfs.is_empty() {
            None
        } else {
            Some(StepFunction::average(chfs.iter().copied()))
        }
    }
}

fn oob_route_stream(tree: usize, record: usize) -> u64 {
    ((tree as u64) << 32) ^ record as u64 ^ 0x00B0_0B00
}
