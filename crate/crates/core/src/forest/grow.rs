//! Recursive tree growth and forest assembly.
//!
//! A node stops splitting when its members hold fewer than `2*d0`
//! unique death times or no admissible split exists; terminals store
//! the Nelson-Aalen hazard of their in-bag members. Missing covariates
//! are imputed en route: at every node the needed cells are drawn from
//! the node's empirical distribution of observed in-bag values, the
//! daughters reset them to missing and redraw, and the draws made at
//! the terminal are recorded for summary imputation.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::{bootstrap_sample, is_missing, BootstrapSample, Dataset};
use crate::error::ForestError;
use crate::forest::split::{best_split, NodeMembers, SplitCandidate};
use crate::forest::{node_chf, Forest, ForestParams, TreeNode};
use crate::rng::derive_seed;

/// One imputation draw recorded at a terminal node.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TerminalDraw {
    pub record: u32,
    pub feature: u32,
    pub value: f64,
}

struct Member {
    record: u32,
    weight: u32,
}

struct TreeContext<'a> {
    data: &'a Dataset,
    d0: u32,
    mtry: usize,
    /// Per feature: observed in-bag values expanded by multiplicity.
    root_pools: Vec<Vec<f64>>,
    /// Per feature: all observed values in the dataset (fallback when a
    /// bootstrap misses every observed value of a feature).
    dataset_pools: &'a [Vec<f64>],
    feature_has_missing: Vec<bool>,
    draws: Vec<TerminalDraw>,
}

pub(crate) fn build_dataset_pools(data: &Dataset) -> Vec<Vec<f64>> {
    (0..data.n_features())
        .map(|f| {
            data.records()
                .iter()
                .map(|r| r.covariates[f])
                .filter(|v| !is_missing(*v))
                .collect()
        })
        .collect()
}

fn validate_pools(data: &Dataset, pools: &[Vec<f64>]) -> Result<(), ForestError> {
    for (f, pool) in pools.iter().enumerate() {
        if pool.is_empty() {
            return Err(ForestError::FeatureAllMissing(
                data.features()[f].name.clone(),
            ));
        }
    }
    Ok(())
}

/// Grow one survival tree from a bootstrap draw.
pub fn grow_tree(
    data: &Dataset,
    in_bag: &BootstrapSample,
    params: &ForestParams,
    tree_seed: u64,
) -> Result<TreeNode, ForestError> {
    params.validate(data.n_features())?;
    let dataset_pools = build_dataset_pools(data);
    validate_pools(data, &dataset_pools)?;
    let (node, _) = grow_tree_inner(data, in_bag, params, tree_seed, &dataset_pools);
    Ok(node)
}

pub(crate) fn grow_tree_inner(
    data: &Dataset,
    in_bag: &BootstrapSample,
    params: &ForestParams,
    tree_seed: u64,
    dataset_pools: &[Vec<f64>],
) -> (TreeNode, Vec<TerminalDraw>) {
    let members: Vec<Member> = in_bag
        .multiplicity()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(i, &m)| Member {
            record: i as u32,
            weight: m,
        })
        .collect();

    let feature_has_missing: Vec<bool> = (0..data.n_features())
        .map(|f| {
            members
                .iter()
                .any(|m| is_missing(data.record(m.record as usize).covariates[f]))
        })
        .collect();
    let root_pools: Vec<Vec<f64>> = (0..data.n_features())
        .map(|f| {
            let mut pool = Vec::new();
            for m in &members {
                let v = data.record(m.record as usize).covariates[f];
                if !is_missing(v) {
                    pool.extend(std::iter::repeat(v).take(m.weight as usize));
                }
            }
            pool
        })
        .collect();

    let mut ctx = TreeContext {
        data,
        d0: params.min_deaths,
        mtry: params.mtry,
        root_pools,
        dataset_pools,
        feature_has_missing,
        draws: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
    let node = grow_node(&mut ctx, &members, &mut rng);
    let draws = std::mem::take(&mut ctx.draws);
    (node, draws)
}

fn grow_node(ctx: &mut TreeContext, members: &[Member], rng: &mut ChaCha8Rng) -> TreeNode {
    let times: Vec<f64> = members
        .iter()
        .map(|m| ctx.data.record(m.record as usize).time)
        .collect();
    let statuses: Vec<u8> = members
        .iter()
        .map(|m| ctx.data.record(m.record as usize).status)
        .collect();
    let weights: Vec<u32> = members.iter().map(|m| m.weight).collect();

    if unique_death_times(&times, &statuses) < 2 * ctx.d0 {
        return make_terminal(ctx, members, &times, &statuses, &weights, rng);
    }

    // Fresh candidate draw at every node, in draw order.
    let candidates = draw_candidates(ctx.data.n_features(), ctx.mtry, rng);

    // Evaluated columns: original values with per-node imputation draws
    // for missing cells.
    let columns: Vec<Vec<f64>> = candidates
        .iter()
        .map(|&f| materialize_column(ctx, members, f, rng))
        .collect();

    let node_view = NodeMembers {
        times: &times,
        statuses: &statuses,
        weights: &weights,
    };
    let split_candidates: Vec<SplitCandidate> = candidates
        .iter()
        .zip(&columns)
        .map(|(&f, col)| SplitCandidate {
            feature: f,
            categorical: ctx.data.features()[f].is_categorical(),
            column: col,
        })
        .collect();

    let rule = match best_split(&node_view, &split_candidates, ctx.d0) {
        Some(rule) => rule,
        None => return make_terminal(ctx, members, &times, &statuses, &weights, rng),
    };

    // Routing pool for the split feature: observed values at this node,
    // falling back to the pools the draws themselves came from.
    let pool = node_pool(ctx, members, rule.feature);

    let column = &columns[candidates.iter().position(|&f| f == rule.feature).unwrap()];
    let mut left_members = Vec::new();
    let mut right_members = Vec::new();
    for (i, m) in members.iter().enumerate() {
        let side = rule.goes_left(column[i]);
        let member = Member {
            record: m.record,
            weight: m.weight,
        };
        if side {
            left_members.push(member);
        } else {
            right_members.push(member);
        }
    }
    debug_assert!(!left_members.is_empty() && !right_members.is_empty());

    let left = grow_node(ctx, &left_members, rng);
    let right = grow_node(ctx, &right_members, rng);
    TreeNode::Internal {
        rule,
        pool,
        left: Box::new(left),
        right: Box::new(right),
    }
}

fn unique_death_times(times: &[f64], statuses: &[u8]) -> u32 {
    let mut deaths: Vec<u64> = times
        .iter()
        .zip(statuses)
        .filter(|(_, s)| **s == 1)
        .map(|(t, _)| t.to_bits())
        .collect();
    deaths.sort_unstable();
    deaths.dedup();
    deaths.len() as u32
}

/// Ordered draw of `mtry` distinct feature indices (partial
/// Fisher-Yates); the order matters for split tie-breaking.
fn draw_candidates(n_features: usize, mtry: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..n_features).collect();
    for i in 0..mtry.min(n_features) {
        let j = rng.gen_range(i..n_features);
        indices.swap(i, j);
    }
    indices.truncate(mtry.min(n_features));
    indices
}

/// Member values of `feature` with missing cells drawn from the node's
/// empirical pool (falling back to the tree root pool, then the whole
/// dataset).
fn materialize_column(
    ctx: &TreeContext,
    members: &[Member],
    feature: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let mut column: Vec<f64> = members
        .iter()
        .map(|m| ctx.data.record(m.record as usize).covariates[feature])
        .collect();
    if !ctx.feature_has_missing[feature] || column.iter().all(|v| !is_missing(*v)) {
        return column;
    }
    // Weighted node-local pool of observed values.
    let pool: Vec<(f64, u32)> = members
        .iter()
        .filter_map(|m| {
            let v = ctx.data.record(m.record as usize).covariates[feature];
            if is_missing(v) {
                None
            } else {
                Some((v, m.weight))
            }
        })
        .collect();
    let total: u32 = pool.iter().map(|(_, w)| w).sum();
    for value in column.iter_mut() {
        if is_missing(*value) {
            *value = if total > 0 {
                weighted_draw(&pool, total, rng)
            } else {
                fallback_draw(ctx, 0, feature, rng)
            };
        }
    }
    column
}

fn weighted_draw(pool: &[(f64, u32)], total: u32, rng: &mut ChaCha8Rng) -> f64 {
    let mut x = rng.gen_range(0..total);
    for &(v, w) in pool {
        if x < w {
            return v;
        }
        x -= w;
    }
    unreachable!("weights sum to total")
}

fn fallback_draw(ctx: &TreeContext, _depth: usize, feature: usize, rng: &mut ChaCha8Rng) -> f64 {
    let root = &ctx.root_pools[feature];
    if !root.is_empty() {
        return root[rng.gen_range(0..root.len())];
    }
    let ds = &ctx.dataset_pools[feature];
    ds[rng.gen_range(0..ds.len())]
}

/// Observed split-feature values at this node (multiplicity expanded);
/// falls back like the imputation draws when the node observed none.
fn node_pool(ctx: &TreeContext, members: &[Member], feature: usize) -> Vec<f64> {
    let mut pool = Vec::new();
    for m in members {
        let v = ctx.data.record(m.record as usize).covariates[feature];
        if !is_missing(v) {
            pool.extend(std::iter::repeat(v).take(m.weight as usize));
        }
    }
    if pool.is_empty() {
        pool = if !ctx.root_pools[feature].is_empty() {
            ctx.root_pools[feature].clone()
        } else {
            ctx.dataset_pools[feature].clone()
        };
    }
    pool
}

fn make_terminal(
    ctx: &mut TreeContext,
    members: &[Member],
    times: &[f64],
    statuses: &[u8],
    weights: &[u32],
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    // Terminal imputation round: draw for every missing cell and record
    // the draws for summary imputation.
    for feature in 0..ctx.data.n_features() {
        if !ctx.feature_has_missing[feature] {
            continue;
        }
        let mut pool: Option<(Vec<(f64, u32)>, u32)> = None;
        for m in members {
            let v = ctx.data.record(m.record as usize).covariates[feature];
            if !is_missing(v) {
                continue;
            }
            let (p, total) = pool.get_or_insert_with(|| {
                let p: Vec<(f64, u32)> = members
                    .iter()
                    .filter_map(|mm| {
                        let vv = ctx.data.record(mm.record as usize).covariates[feature];
                        if is_missing(vv) {
                            None
                        } else {
                            Some((vv, mm.weight))
                        }
                    })
                    .collect();
                let t: u32 = p.iter().map(|(_, w)| w).sum();
                (p, t)
            });
            let value = if *total > 0 {
                weighted_draw(p, *total, rng)
            } else {
                fallback_draw(ctx, 0, feature, rng)
            };
            ctx.draws.push(TerminalDraw {
                record: m.record,
                feature: feature as u32,
                value,
            });
        }
    }

    let tuples: Vec<(f64, u8, u32)> = (0..members.len())
        .map(|i| (times[i], statuses[i], weights[i]))
        .collect();
    TreeNode::Terminal {
        chf: node_chf(&tuples),
        members: weights.iter().sum(),
        unique_deaths: unique_death_times(times, statuses),
    }
}

/// Grow a forest of independent trees. Tree `b` uses the bootstrap
/// sample derived from `(seed, b)`; growth parallelizes over trees and
/// is bit-reproducible for a fixed seed at any thread count.
pub fn grow_forest(data: &Dataset, params: &ForestParams) -> Result<Forest, ForestError> {
    params.validate(data.n_features())?;
    let dataset_pools = build_dataset_pools(data);
    if data.has_missing() {
        validate_pools(data, &dataset_pools)?;
    }
    let results: Vec<(TreeNode, Vec<u32>)> = (0..params.trees)
        .into_par_iter()
        .map(|b| {
            let boot = bootstrap_sample(data, derive_seed(params.seed, b as u64));
            let tree_seed = derive_seed(params.seed, 0x6B0D ^ (b as u64).rotate_left(17));
            let (node, _) = grow_tree_inner(data, &boot, params, tree_seed, &dataset_pools);
            (node, boot.multiplicity().to_vec())
        })
        .collect();
    let mut trees = Vec::with_capacity(params.trees);
    let mut in_bag = Vec::with_capacity(params.trees);
    for (tree, bag) in results {
        trees.push(tree);
        in_bag.push(bag);
    }
    Ok(Forest {
        params: *params,
        features: data.features().to_vec(),
        trees,
        in_bag,
    })
}
