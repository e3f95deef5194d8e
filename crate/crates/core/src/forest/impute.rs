//! Adaptive tree imputation.
//!
//! Grows a forest over the incomplete data; every missing cell gets a
//! draw at each node on the way down (reset and redrawn in each
//! daughter), and the draws recorded at the terminal nodes are
//! summarized per subject across the forest: the mean for numeric
//! features, the most frequent level for categorical ones.

use rayon::prelude::*;

use crate::data::{bootstrap_sample, is_missing, Dataset};
use crate::error::ForestError;
use crate::forest::grow::{build_dataset_pools, grow_tree_inner};
use crate::forest::ForestParams;
use crate::rng::derive_seed;

/// Result of adaptive imputation.
#[derive(Debug, Clone)]
pub struct ImputationOutcome {
    pub data: Dataset,
    /// Cells that were missing and received a summary value.
    pub cells_imputed: usize,
    /// Cells whose record was never in-bag at a terminal with a draw;
    /// filled from the dataset-wide distribution instead.
    pub cells_fallback: usize,
}

/// Impute missing covariates with the adaptive tree scheme.
///
/// Identity on complete data. Deterministic for fixed parameters.
pub fn impute_adaptive(
    data: &Dataset,
    params: &ForestParams,
) -> Result<ImputationOutcome, ForestError> {
    params.validate(data.n_features())?;
    if !data.has_missing() {
        return Ok(ImputationOutcome {
            data: data.clone(),
            cells_imputed: 0,
            cells_fallback: 0,
        });
    }
    let dataset_pools = build_dataset_pools(data);
    for (f, pool) in dataset_pools.iter().enumerate() {
        if pool.is_empty() {
            return Err(ForestError::FeatureAllMissing(
                data.features()[f].name.clone(),
            ));
        }
    }

    let per_tree_draws: Vec<Vec<crate::forest::grow::TerminalDraw>> = (0..params.trees)
        .into_par_iter()
        .map(|b| {
            let boot = bootstrap_sample(data, derive_seed(params.seed, b as u64));
            let tree_seed = derive_seed(params.seed, 0x6B0D ^ (b as u64).rotate_left(17));
            let (_, draws) = grow_tree_inner(data, &boot, params, tree_seed, &dataset_pools);
            draws
        })
        .collect();

    // Aggregate draws per (record, feature).
    let n = data.len();
    let r = data.n_features();
    let mut numeric_sum = vec![0.0f64; n * r];
    let mut numeric_count = vec![0u32; n * r];
    let mut level_counts: Vec<std::collections::BTreeMap<u32, u32>> = Vec::new();
    let categorical: Vec<bool> = data.features().iter().map(|f| f.is_categorical()).collect();
    let any_categorical = categorical.iter().any(|&c| c);
    if any_categorical {
        level_counts = vec![std::collections::BTreeMap::new(); n * r];
    }
    for draws in &per_tree_draws {
        for d in draws {
            let cell = d.record as usize * r + d.feature as usize;
            if categorical[d.feature as usize] {
                *level_counts[cell].entry(d.value as u32).or_insert(0) += 1;
            } else {
                numeric_sum[cell] += d.value;
                numeric_count[cell] += 1;
            }
        }
    }

    let mut cells_imputed = 0usize;
    let mut cells_fallback = 0usize;
    let covariates: Vec<Vec<f64>> = data
        .records()
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            rec.covariates
                .iter()
                .enumerate()
                .map(|(f, &v)| {
                    if !is_missing(v) {
                        return v;
                    }
                    cells_imputed += 1;
                    let cell = i * r + f;
                    if categorical[f] {
                        // Most frequent drawn level; ties break toward
                        // the smaller level index (BTreeMap order).
                        let winner = level_counts[cell]
                            .iter()
                            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                            .map(|(level, _)| *level as f64);
                        match winner {
                            Some(level) => level,
                            None => {
                                cells_fallback += 1;
                                mode_of(&dataset_pools[f])
                            }
                        }
                    } else if numeric_count[cell] > 0 {
                        numeric_sum[cell] / numeric_count[cell] as f64
                    } else {
                        cells_fallback += 1;
                        dataset_pools[f].iter().sum::<f64>() / dataset_pools[f].len() as f64
                    }
                })
                .collect()
        })
        .collect();

    Ok(ImputationOutcome {
        data: data.with_covariates(covariates),
        cells_imputed,
        cells_fallback,
    })
}

fn mode_of(values: &[f64]) -> f64 {
    let mut counts = std::collections::BTreeMap::new();
    for &v in values {
        *counts.entry(v as u32).or_insert(0u32) += 1;
    }
    counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(level, _)| *level as f64)
        .expect("non-empty pool")
}
