//! Log-rank split statistic and the best-split search.
//!
//! The statistic compares deaths in the left daughter against their
//! hypergeometric expectation at each unique parent death time:
//!
//! ```text
//! L = sum_l (d_l1 - Y_l1 * d_l / Y_l)
//!     / sqrt( sum_l (Y_l1/Y_l)(1 - Y_l1/Y_l)((Y_l - d_l)/(Y_l - 1)) d_l )
//! ```
//!
//! where `l` runs over the unique death times of the parent node and
//! counts are bootstrap-multiplicity weighted. A zero-variance
//! candidate scores 0 so it loses to any informative split.

use crate::error::ForestError;
use crate::forest::{SplitRule, SplitValue};

/// Outcome data of the members of one node.
#[derive(Debug, Clone, Copy)]
pub struct NodeMembers<'a> {
    pub times: &'a [f64],
    pub statuses: &'a [u8],
    pub weights: &'a [u32],
}

impl<'a> NodeMembers<'a> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// One candidate feature at a node: its index, evaluated (imputed)
/// member values, and whether it splits by level rather than threshold.
#[derive(Debug)]
pub struct SplitCandidate<'a> {
    pub feature: usize,
    pub categorical: bool,
    pub column: &'a [f64],
}

/// Per-parent tallies shared by every candidate evaluation.
struct ParentTallies {
    /// Sorted unique death times.
    death_times: Vec<f64>,
    /// Weighted at-risk count Y_l per death time.
    at_risk_total: Vec<f64>,
    /// d_l / Y_l per death time.
    ratio: Vec<f64>,
    /// d_l (Y_l - d_l) / (Y_l^2 (Y_l - 1)) per death time (0 when the
    /// at-risk count is <= 1, where the variance term degenerates).
    var_coeff: Vec<f64>,
    /// Index into `death_times` for each member that died.
    death_rank: Vec<Option<usize>>,
    /// Number of death times <= the member's time: the member is at
    /// risk for exactly the first `at_risk_rank` death times.
    at_risk_rank: Vec<usize>,
    /// Death members (unweighted) per death time.
    rank_death_members: Vec<u32>,
}

impl ParentTallies {
    fn new(node: &NodeMembers) -> ParentTallies {
        let mut death_times: Vec<f64> = node
            .times
            .iter()
            .zip(node.statuses)
            .filter(|(_, s)| **s == 1)
            .map(|(t, _)| *t)
            .collect();
        death_times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
        death_times.dedup();
        let m = death_times.len();

        let mut deaths = vec![0.0f64; m];
        let mut at_risk_total = vec![0.0f64; m];
        let mut rank_death_members = vec![0u32; m];
        let mut death_rank = Vec::with_capacity(node.len());
        let mut at_risk_rank = Vec::with_capacity(node.len());
        for i in 0..node.len() {
            let (t, s, w) = (node.times[i], node.statuses[i], node.weights[i] as f64);
            let rank = death_times.partition_point(|&dt| dt <= t);
            at_risk_rank.push(rank);
            for slot in at_risk_total.iter_mut().take(rank) {
                *slot += w;
            }
            if s == 1 {
                let r = rank - 1; // own death time is the last one <= t
                debug_assert_eq!(death_times[r], t);
                deaths[r] += w;
                rank_death_members[r] += 1;
                death_rank.push(Some(r));
            } else {
                death_rank.push(None);
            }
        }

        let mut ratio = Vec::with_capacity(m);
        let mut var_coeff = Vec::with_capacity(m);
        for l in 0..m {
            let (d, y) = (deaths[l], at_risk_total[l]);
            ratio.push(d / y);
            if y > 1.0 {
                var_coeff.push(d * (y - d) / (y * y * (y - 1.0)));
            } else {
                var_coeff.push(0.0);
            }
        }
        ParentTallies {
            death_times,
            at_risk_total,
            ratio,
            var_coeff,
            death_rank,
            at_risk_rank,
            rank_death_members,
        }
    }

    fn n_death_times(&self) -> usize {
        self.death_times.len()
    }
}

/// Evaluate L from parent tallies and left-daughter tallies.
fn evaluate(parent: &ParentTallies, left_deaths: &[f64], left_at_risk: &[f64]) -> f64 {
    let mut numerator = 0.0;
    let mut variance = 0.0;
    for l in 0..parent.n_death_times() {
        let y1 = left_at_risk[l];
        numerator += left_deaths[l] - y1 * parent.ratio[l];
        variance += parent.var_coeff[l] * y1 * (parent.at_risk_total[l] - y1);
    }
    if variance <= 0.0 {
        return 0.0;
    }
    numerator / variance.sqrt()
}

/// Log-rank statistic for an explicit left/right partition of a node.
///
/// Returns 0 when the variance sum vanishes (so degenerate candidates
/// lose to any informative one).
pub fn log_rank_statistic(
    members: &[(f64, u8, u32)],
    left_mask: &[bool],
) -> Result<f64, ForestError> {
    assert_eq!(members.len(), left_mask.len());
    let n_left = left_mask.iter().filter(|&&l| l).count();
    if n_left == 0 || n_left == members.len() {
        return Err(ForestError::EmptySide);
    }
    if !members.iter().any(|(_, s, _)| *s == 1) {
        return Err(ForestError::NoDeaths);
    }
    let times: Vec<f64> = members.iter().map(|m| m.0).collect();
    let statuses: Vec<u8> = members.iter().map(|m| m.1).collect();
    let weights: Vec<u32> = members.iter().map(|m| m.2).collect();
    let node = NodeMembers {
        times: &times,
        statuses: &statuses,
        weights: &weights,
    };
    let tallies = ParentTallies::new(&node);
    let m = tallies.n_death_times();
    let mut left_deaths = vec![0.0; m];
    let mut left_at_risk = vec![0.0; m];
    for i in 0..members.len() {
        if !left_mask[i] {
            continue;
        }
        let w = weights[i] as f64;
        if let Some(r) = tallies.death_rank[i] {
            left_deaths[r] += w;
        }
        for slot in left_at_risk.iter_mut().take(tallies.at_risk_rank[i]) {
            *slot += w;
        }
    }
    Ok(evaluate(&tallies, &left_deaths, &left_at_risk))
}

/// Incremental left-daughter state during a sweep.
struct LeftState {
    deaths: Vec<f64>,
    at_risk: Vec<f64>,
    rank_death_members: Vec<u32>,
    distinct_left: u32,
    right_rank_members: Vec<u32>,
    distinct_right: u32,
    members: usize,
}

impl LeftState {
    fn new(parent: &ParentTallies) -> LeftState {
        let m = parent.n_death_times();
        let mut state = LeftState {
            deaths: vec![0.0; m],
            at_risk: vec![0.0; m],
            rank_death_members: vec![0; m],
            distinct_left: 0,
            right_rank_members: vec![0; m],
            distinct_right: 0,
            members: 0,
        };
        state.reset(parent);
        state
    }

    fn reset(&mut self, parent: &ParentTallies) {
        self.deaths.fill(0.0);
        self.at_risk.fill(0.0);
        self.rank_death_members.fill(0);
        self.distinct_left = 0;
        self.right_rank_members
            .copy_from_slice(&parent.rank_death_members);
        self.distinct_right = parent
            .rank_death_members
            .iter()
            .filter(|&&c| c > 0)
            .count() as u32;
        self.members = 0;
    }

    fn move_left(&mut self, parent: &ParentTallies, member: usize, weight: u32) {
        let w = weight as f64;
        if let Some(r) = parent.death_rank[member] {
            self.deaths[r] += w;
            if self.rank_death_members[r] == 0 {
                self.distinct_left += 1;
            }
            self.rank_death_members[r] += 1;
            self.right_rank_members[r] -= 1;
            if self.right_rank_members[r] == 0 {
                self.distinct_right -= 1;
            }
        }
        for slot in self.at_risk.iter_mut().take(parent.at_risk_rank[member]) {
            *slot += w;
        }
        self.members += 1;
    }

    fn admissible(&self, d0: u32, total_members: usize) -> bool {
        self.members > 0
            && self.members < total_members
            && self.distinct_left >= d0
            && self.distinct_right >= d0
    }
}

/// Exhaustive best-split search over the candidate features.
///
/// Numeric candidates enumerate midpoints of consecutive distinct
/// values in ascending order; categorical candidates enumerate
/// one-vs-rest level splits in ascending level order. A split is
/// admissible only when both daughters keep at least `d0` unique death
/// times. The first candidate achieving the maximum |L| wins
/// (enumeration order: candidate order, then threshold order), matching
/// the strict-improvement comparison of the selection loop.
pub fn best_split(node: &NodeMembers, candidates: &[SplitCandidate], d0: u32) -> Option<SplitRule> {
    let parent = ParentTallies::new(node);
    if parent.n_death_times() == 0 {
        return None;
    }
    let n = node.len();
    let mut best: Option<SplitRule> = None;
    let mut best_abs = 0.0f64;
    let mut state = LeftState::new(&parent);

    for cand in candidates {
        debug_assert_eq!(cand.column.len(), n);
        if cand.categorical {
            let mut levels: Vec<f64> = cand.column.to_vec();
            levels.sort_by(|a, b| a.partial_cmp(b).expect("imputed levels"));
            levels.dedup();
            if levels.len() < 2 {
                continue;
            }
            for &level in &levels {
                state.reset(&parent);
                for i in 0..n {
                    if cand.column[i] == level {
                        state.move_left(&parent, i, node.weights[i]);
                    }
                }
                if !state.admissible(d0, n) {
                    continue;
                }
                let l_stat = evaluate(&parent, &state.deaths, &state.at_risk);
                if l_stat.abs() > best_abs {
                    best_abs = l_stat.abs();
                    best = Some(SplitRule {
                        feature: cand.feature,
                        value: SplitValue::Level(level as u32),
                        statistic: l_stat,
                    });
                }
            }
        } else {
            let mut order: Vec<u32> = (0..n as u32).collect();
            order.sort_by(|&a, &b| {
                cand.column[a as usize]
                    .partial_cmp(&cand.column[b as usize])
                    .expect("imputed values")
                    .then(a.cmp(&b))
            });
            state.reset(&parent);
            let mut i = 0usize;
            while i < n {
                let v = cand.column[order[i] as usize];
                let mut j = i;
                while j < n && cand.column[order[j] as usize] == v {
                    let member = order[j] as usize;
                    state.move_left(&parent, member, node.weights[member]);
                    j += 1;
                }
                if j < n {
                    let next = cand.column[order[j] as usize];
                    let mid = 0.5 * (v + next);
                    // Keep the threshold strictly below the next value
                    // even when the midpoint rounds up to it.
                    let threshold = if mid >= next { v } else { mid };
                    if state.admissible(d0, n) {
                        let l_stat = evaluate(&parent, &state.deaths, &state.at_risk);
                        if l_stat.abs() > best_abs {
                            best_abs = l_stat.abs();
                            best = Some(SplitRule {
                                feature: cand.feature,
                                value: SplitValue::Threshold(threshold),
                                statistic: l_stat,
                            });
                        }
                    }
                }
                i = j;
            }
        }
    }
    best
}
