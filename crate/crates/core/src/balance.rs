//! Synthetic minority generation (SMOTE) for censored/event class
//! balancing.
//!
//! New minority records are sampled along the segment between a
//! minority record and one of its k nearest minority neighbors. The
//! nearest-neighbor distance is Euclidean over standardized numeric
//! features plus a 0/1 mismatch per categorical feature; zero-variance
//! features contribute nothing. Applies to training data only - test
//! folds must never see synthetic records.

use rand::Rng;

use crate::data::{is_missing, Dataset, SurvivalRecord};
use crate::error::BalanceError;
use crate::rng::{derive_seed, rng_for, streams};

/// How a synthetic record's survival time is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SyntheticTimeRule {
    /// Copy time and status from the seed minority record.
    #[default]
    CopySeed,
    /// Interpolate the time along the segment: `T_i + gamma (T_j - T_i)`.
    Interpolate,
}

#[derive(Debug, Clone)]
pub struct SmoteConfig {
    pub k_neighbors: usize,
    /// Desired minority/majority ratio in (0, 1].
    pub target_ratio: f64,
    pub seed: u64,
    /// Use the extrapolating form `x_i + gamma (x_i - x_j)` instead of
    /// segment interpolation.
    pub extrapolate: bool,
    pub time_rule: SyntheticTimeRule,
}

impl SmoteConfig {
    pub fn new(k_neighbors: usize, target_ratio: f64, seed: u64) -> Result<Self, BalanceError> {
        if k_neighbors == 0 {
            return Err(BalanceError::BadConfig("k_neighbors must be >= 1".into()));
        }
        if !(target_ratio > 0.0 && target_ratio <= 1.0) {
            return Err(BalanceError::BadConfig(format!(
                "target_ratio must be in (0, 1], got {target_ratio}"
            )));
        }
        Ok(SmoteConfig {
            k_neighbors,
            target_ratio,
            seed,
            extrapolate: false,
            time_rule: SyntheticTimeRule::CopySeed,
        })
    }
}

impl Default for SmoteConfig {
    fn default() -> Self {
        SmoteConfig::new(5, 1.0, 0).unwrap()
    }
}

/// A dataset extended with synthetic minority records.
#[derive(Debug, Clone)]
pub struct BalancedDataset {
    pub data: Dataset,
    /// Per-record flag; original records come first and are unmodified.
    pub synthetic_flags: Vec<bool>,
    /// Censored count before balancing (m1).
    pub censored_before: usize,
    /// Event count before balancing (m2).
    pub events_before: usize,
    /// Minority size after balancing (m2' when events are the minority,
    /// m1' when the censored class is).
    pub minority_after: usize,
    /// Status value of the minority class.
    pub minority_status: u8,
}

impl BalancedDataset {
    pub fn synthetic_count(&self) -> usize {
        self.synthetic_flags.iter().filter(|&&f| f).count()
    }
}

/// Standardization constants for the kNN distance: `None` for
/// categorical features, the population standard deviation otherwise.
fn feature_scales(data: &Dataset) -> Vec<Option<f64>> {
    data.features()
        .iter()
        .enumerate()
        .map(|(j, meta)| {
            if meta.is_categorical() {
                return None;
            }
            let values: Vec<f64> = data
                .records()
                .iter()
                .map(|r| r.covariates[j])
                .filter(|v| !is_missing(*v))
                .collect();
            if values.is_empty() {
                return Some(0.0);
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / values.len() as f64;
            Some(var.sqrt())
        })
        .collect()
}

fn distance(
    a: &SurvivalRecord,
    b: &SurvivalRecord,
    scales: &[Option<f64>],
    a_idx: usize,
) -> Result<f64, BalanceError> {
    let mut sum = 0.0;
    for (j, scale) in scales.iter().enumerate() {
        let (va, vb) = (a.covariates[j], b.covariates[j]);
        if is_missing(va) {
            return Err(BalanceError::MissingValue {
                record: a_idx,
                feature: j,
            });
        }
        if is_missing(vb) {
            return Err(BalanceError::MissingValue {
                record: usize::MAX,
                feature: j,
            });
        }
        match scale {
            None => {
                if va != vb {
                    sum += 1.0;
                }
            }
            Some(sd) => {
                if *sd > 0.0 {
                    let d = (va - vb) / sd;
                    sum += d * d;
                }
                // Zero-variance features contribute 0.
            }
        }
    }
    Ok(sum.sqrt())
}

fn minority_status_of(data: &Dataset) -> Result<u8, BalanceError> {
    let (censored, events) = data.class_counts();
    if censored == 0 || events == 0 {
        return Err(BalanceError::EmptyClass { censored, events });
    }
    Ok(if events <= censored { 1 } else { 0 })
}

/// Indices (into `data`) of the `k` minority-class records nearest to
/// `index`, excluding `index` itself. Distance ties break by index.
pub fn nearest_minority_neighbors(
    data: &Dataset,
    index: usize,
    k: usize,
) -> Result<Vec<usize>, BalanceError> {
    let minority = minority_status_of(data)?;
    if data.record(index).status != minority {
        return Err(BalanceError::NotMinority(index));
    }
    let members: Vec<usize> = (0..data.len())
        .filter(|&i| data.record(i).status == minority)
        .collect();
    if members.len() < k + 1 {
        return Err(BalanceError::MinorityTooSmall {
            size: members.len(),
            needed: k,
        });
    }
    let scales = feature_scales(data);
    let query = data.record(index);
    let mut scored: Vec<(f64, usize)> = Vec::with_capacity(members.len() - 1);
    for &i in &members {
        if i == index {
            continue;
        }
        let d = distance(query, data.record(i), &scales, index).map_err(|e| match e {
            BalanceError::MissingValue { record, feature } if record == usize::MAX => {
                BalanceError::MissingValue { record: i, feature }
            }
            other => other,
        })?;
        scored.push((d, i));
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    Ok(scored.into_iter().take(k).map(|(_, i)| i).collect())
}

/// Generate one synthetic covariate vector between two parents.
///
/// Numeric features interpolate along the segment (`x_i + gamma (x_j -
/// x_i)`); with `extrapolate` the displacement flips sign. Categorical
/// features copy the first parent's level when `gamma < 0.5`, else the
/// second's.
pub fn smote_generate(
    xi: &[f64],
    xj: &[f64],
    data: &Dataset,
    gamma: f64,
    extrapolate: bool,
) -> Result<Vec<f64>, BalanceError> {
    if xi.len() != xj.len() {
        return Err(BalanceError::LengthMismatch {
            left: xi.len(),
            right: xj.len(),
        });
    }
    let mut out = Vec::with_capacity(xi.len());
    for (j, meta) in data.features().iter().enumerate() {
        let (a, b) = (xi[j], xj[j]);
        if is_missing(a) || is_missing(b) {
            return Err(BalanceError::MissingValue {
                record: usize::MAX,
                feature: j,
            });
        }
        if meta.is_categorical() {
            out.push(if gamma < 0.5 { a } else { b });
        } else if extrapolate {
            out.push(a + gamma * (a - b));
        } else {
            out.push(a + gamma * (b - a));
        }
    }
    Ok(out)
}

/// Add synthetic minority records until `minority / majority` reaches
/// the target ratio (rounded down). Already-balanced input is returned
/// unchanged. Deterministic for a fixed seed.
pub fn balance_dataset(data: &Dataset, cfg: &SmoteConfig) -> Result<BalancedDataset, BalanceError> {
    if cfg.k_neighbors == 0 || !(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0) {
        return Err(BalanceError::BadConfig("invalid SMOTE config".into()));
    }
    let (censored_before, events_before) = data.class_counts();
    let minority_status = minority_status_of(data)?;
    let (minority_n, majority_n) = if minority_status == 1 {
        (events_before, censored_before)
    } else {
        (censored_before, events_before)
    };
    let target = (cfg.target_ratio * majority_n as f64).floor() as usize;
    let wanted = target.saturating_sub(minority_n);
    if wanted == 0 {
        return Ok(BalancedDataset {
            data: data.clone(),
            synthetic_flags: vec![false; data.len()],
            censored_before,
            events_before,
            minority_after: minority_n,
            minority_status,
        });
    }
    if minority_n <= cfg.k_neighbors {
        return Err(BalanceError::MinorityTooSmall {
            size: minority_n,
            needed: cfg.k_neighbors,
        });
    }
    let minority: Vec<usize> = (0..data.len())
        .filter(|&i| data.record(i).status == minority_status)
        .collect();
    let neighbors: Vec<Vec<usize>> = minority
        .iter()
        .map(|&i| nearest_minority_neighbors(data, i, cfg.k_neighbors))
        .collect::<Result<_, _>>()?;

    let mut synthetic = Vec::with_capacity(wanted);
    for s in 0..wanted {
        let mut rng = rng_for(derive_seed(cfg.seed, s as u64), streams::SMOTE);
        let pick = s % minority.len();
        let seed_idx = minority[pick];
        let nbr_idx = neighbors[pick][rng.gen_range(0..cfg.k_neighbors)];
        let gamma: f64 = rng.gen();
        let (xi, xj) = (data.record(seed_idx), data.record(nbr_idx));
        let covariates =
            smote_generate(&xi.covariates, &xj.covariates, data, gamma, cfg.extrapolate)?;
        let time = match cfg.time_rule {
            SyntheticTimeRule::CopySeed => xi.time,
            SyntheticTimeRule::Interpolate => xi.time + gamma * (xj.time - xi.time),
        };
        synthetic.push(SurvivalRecord {
            covariates,
            time,
            status: minority_status,
        });
    }
    let balanced = data
        .with_appended(synthetic)
        .expect("synthetic records satisfy dataset invariants");
    let mut synthetic_flags = vec![false; data.len()];
    synthetic_flags.extend(std::iter::repeat(true).take(wanted));
    Ok(BalancedDataset {
        data: balanced,
        synthetic_flags,
        censored_before,
        events_before,
        minority_after: minority_n + wanted,
        minority_status,
    })
}
