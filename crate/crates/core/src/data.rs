//! Right-censored survival datasets: loading, validation, fold splits
//! and bootstrap resampling.
//!
//! Covariates are stored as `f64` cells; `NaN` marks a missing value and
//! categorical features store their level index. [`FeatureMeta`] carries
//! the interpretation. Missing values are permitted in covariates only:
//! records with a missing time or status are rejected at load, because
//! evaluation needs true outcomes.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::DataError;
use crate::rng::{rng_for, streams};

/// Marker for a missing covariate cell.
pub const MISSING: f64 = f64::NAN;

/// Is this cell missing?
#[inline]
pub fn is_missing(v: f64) -> bool {
    v.is_nan()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Numeric,
    /// Levels in first-appearance order; cells store the level index.
    Categorical { levels: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMeta {
    pub name: String,
    pub kind: FeatureKind,
}

impl FeatureMeta {
    pub fn numeric(name: impl Into<String>) -> Self {
        FeatureMeta {
            name: name.into(),
            kind: FeatureKind::Numeric,
        }
    }

    pub fn categorical(name: impl Into<String>, levels: Vec<String>) -> Self {
        FeatureMeta {
            name: name.into(),
            kind: FeatureKind::Categorical { levels },
        }
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self.kind, FeatureKind::Categorical { .. })
    }

    pub fn levels(&self) -> Option<&[String]> {
        match &self.kind {
            FeatureKind::Numeric => None,
            FeatureKind::Categorical { levels } => Some(levels),
        }
    }
}

/// One observation: covariates, observed time, censoring status
/// (1 = event/death, 0 = right-censored).
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalRecord {
    pub covariates: Vec<f64>,
    pub time: f64,
    pub status: u8,
}

impl SurvivalRecord {
    pub fn is_event(&self) -> bool {
        self.status == 1
    }

    pub fn covariate(&self, feature: usize) -> Option<f64> {
        let v = self.covariates[feature];
        if is_missing(v) {
            None
        } else {
            Some(v)
        }
    }
}

/// An immutable right-censored dataset.
///
/// Shareable across worker threads; all randomized operations on it take
/// explicit seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<FeatureMeta>,
    records: Vec<SurvivalRecord>,
    event_times: Vec<f64>,
    time_col: String,
    status_col: String,
}

impl Dataset {
    /// Validate and assemble a dataset.
    pub fn new(
        features: Vec<FeatureMeta>,
        records: Vec<SurvivalRecord>,
        time_col: impl Into<String>,
        status_col: impl Into<String>,
    ) -> Result<Self, DataError> {
        if records.is_empty() {
            return Err(DataError::Empty);
        }
        let mut seen = HashSet::new();
        for f in &features {
            if !seen.insert(f.name.as_str()) {
                return Err(DataError::DuplicateFeature(f.name.clone()));
            }
        }
        for (i, r) in records.iter().enumerate() {
            if r.covariates.len() != features.len() {
                return Err(DataError::CovariateLength {
                    index: i,
                    found: r.covariates.len(),
                    expected: features.len(),
                });
            }
            if !(r.time > 0.0) {
                return Err(DataError::NonPositiveTime {
                    row: i,
                    value: r.time,
                });
            }
            if r.status > 1 {
                return Err(DataError::InvalidStatus {
                    row: i,
                    value: r.status.to_string(),
                });
            }
            for (j, f) in features.iter().enumerate() {
                if let Some(levels) = f.levels() {
                    let v = r.covariates[j];
                    if !is_missing(v) && (v < 0.0 || v.fract() != 0.0 || v as usize >= levels.len())
                    {
                        return Err(DataError::LevelOutOfRange {
                            index: i,
                            feature: f.name.clone(),
                            level: v as usize,
                        });
                    }
                }
            }
        }
        let event_times = unique_event_times(&records);
        Ok(Dataset {
            features,
            records,
            event_times,
            time_col: time_col.into(),
            status_col: status_col.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[FeatureMeta] {
        &self.features
    }

    pub fn records(&self) -> &[SurvivalRecord] {
        &self.records
    }

    pub fn record(&self, i: usize) -> &SurvivalRecord {
        &self.records[i]
    }

    /// Sorted unique times of records with status = 1.
    pub fn event_times(&self) -> &[f64] {
        &self.event_times
    }

    pub fn time_col(&self) -> &str {
        &self.time_col
    }

    pub fn status_col(&self) -> &str {
        &self.status_col
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// (censored count, event count).
    pub fn class_counts(&self) -> (usize, usize) {
        let events = self.records.iter().filter(|r| r.is_event()).count();
        (self.records.len() - events, events)
    }

    pub fn has_missing(&self) -> bool {
        self.records
            .iter()
            .any(|r| r.covariates.iter().any(|&v| is_missing(v)))
    }

    /// New dataset restricted to `indices` (in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset, DataError> {
        let records = indices.iter().map(|&i| self.records[i].clone()).collect();
        Dataset::new(
            self.features.clone(),
            records,
            self.time_col.clone(),
            self.status_col.clone(),
        )
    }

    /// New dataset keeping only the named feature columns.
    pub fn select_features(&self, keep: &[usize]) -> Result<Dataset, DataError> {
        let features = keep.iter().map(|&j| self.features[j].clone()).collect();
        let records = self
            .records
            .iter()
            .map(|r| SurvivalRecord {
                covariates: keep.iter().map(|&j| r.covariates[j]).collect(),
                time: r.time,
                status: r.status,
            })
            .collect();
        Dataset::new(
            features,
            records,
            self.time_col.clone(),
            self.status_col.clone(),
        )
    }

    /// Replace the covariates of every record (used by imputation).
    pub(crate) fn with_covariates(&self, covariates: Vec<Vec<f64>>) -> Dataset {
        assert_eq!(covariates.len(), self.records.len());
        let records = self
            .records
            .iter()
            .zip(covariates)
            .map(|(r, c)| SurvivalRecord {
                covariates: c,
                time: r.time,
                status: r.status,
            })
            .collect();
        Dataset {
            features: self.features.clone(),
            records,
            event_times: self.event_times.clone(),
            time_col: self.time_col.clone(),
            status_col: self.status_col.clone(),
        }
    }

    /// Append records (used by balancing). Times/statuses must be valid.
    pub(crate) fn with_appended(&self, extra: Vec<SurvivalRecord>) -> Result<Dataset, DataError> {
        let mut records = self.records.clone();
        records.extend(extra);
        Dataset::new(
            self.features.clone(),
            records,
            self.time_col.clone(),
            self.status_col.clone(),
        )
    }
}

fn unique_event_times(records: &[SurvivalRecord]) -> Vec<f64> {
    let mut times: Vec<f64> = records
        .iter()
        .filter(|r| r.is_event())
        .map(|r| r.time)
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    times.dedup();
    times
}

/// Column roles and parsing rules for CSV input.
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub time_col: String,
    pub status_col: String,
    /// Names of columns to treat as categorical.
    pub categorical: Vec<String>,
    /// Cell contents treated as missing.
    pub na_tokens: HashSet<String>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            time_col: "time".to_string(),
            status_col: "status".to_string(),
            categorical: Vec::new(),
            na_tokens: ["", "NA", "NaN"].iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Load a CSV file with a header row.
///
/// Every column other than the time and status columns becomes a
/// feature, in column order. Categorical levels are collected in
/// first-appearance order.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => DataError::Io {
                path: path.display().to_string(),
                source: std::io::Error::other(e.to_string()),
            },
            _ => DataError::Csv(e),
        })?;
    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let time_idx = headers
        .iter()
        .position(|h| *h == schema.time_col)
        .ok_or_else(|| DataError::MissingColumn(schema.time_col.clone()))?;
    let status_idx = headers
        .iter()
        .position(|h| *h == schema.status_col)
        .ok_or_else(|| DataError::MissingColumn(schema.status_col.clone()))?;

    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&i| i != time_idx && i != status_idx)
        .collect();
    let categorical: HashSet<&str> = schema.categorical.iter().map(|s| s.as_str()).collect();
    let mut levels: Vec<Vec<String>> = vec![Vec::new(); feature_cols.len()];

    let mut records = Vec::new();
    for (row_i, row) in reader.records().enumerate() {
        let row = row?;
        let row_no = row_i + 2; // 1-based, after header
        if row.len() != headers.len() {
            return Err(DataError::RowLength {
                row: row_no,
                expected: headers.len(),
                found: row.len(),
            });
        }
        let time_cell = row[time_idx].trim();
        if schema.na_tokens.contains(time_cell) {
            return Err(DataError::MissingOutcome {
                row: row_no,
                column: schema.time_col.clone(),
            });
        }
        let time: f64 = time_cell
            .parse()
            .map_err(|_| DataError::BadNumericCell {
                row: row_no,
                column: schema.time_col.clone(),
                value: time_cell.to_string(),
            })?;
        if !(time > 0.0) {
            return Err(DataError::NonPositiveTime {
                row: row_no,
                value: time,
            });
        }
        let status_cell = row[status_idx].trim();
        if schema.na_tokens.contains(status_cell) {
            return Err(DataError::MissingOutcome {
                row: row_no,
                column: schema.status_col.clone(),
            });
        }
        let status = match status_cell {
            "0" => 0u8,
            "1" => 1u8,
            other => {
                // Accept numeric spellings of 0/1 (e.g. "0.0").
                match other.parse::<f64>() {
                    Ok(v) if v == 0.0 => 0,
                    Ok(v) if v == 1.0 => 1,
                    _ => {
                        return Err(DataError::InvalidStatus {
                            row: row_no,
                            value: other.to_string(),
                        })
                    }
                }
            }
        };
        let mut covariates = Vec::with_capacity(feature_cols.len());
        for (j, &col) in feature_cols.iter().enumerate() {
            let cell = row[col].trim();
            if schema.na_tokens.contains(cell) {
                covariates.push(MISSING);
            } else if categorical.contains(headers[col].as_str()) {
                let idx = match levels[j].iter().position(|l| l == cell) {
                    Some(idx) => idx,
                    None => {
                        levels[j].push(cell.to_string());
                        levels[j].len() - 1
                    }
                };
                covariates.push(idx as f64);
            } else {
                let v: f64 = cell.parse().map_err(|_| DataError::BadNumericCell {
                    row: row_no,
                    column: headers[col].clone(),
                    value: cell.to_string(),
                })?;
                covariates.push(v);
            }
        }
        records.push(SurvivalRecord {
            covariates,
            time,
            status,
        });
    }

    let features = feature_cols
        .iter()
        .zip(levels)
        .map(|(&col, lv)| {
            if categorical.contains(headers[col].as_str()) {
                FeatureMeta::categorical(headers[col].clone(), lv)
            } else {
                FeatureMeta::numeric(headers[col].clone())
            }
        })
        .collect();
    Dataset::new(
        features,
        records,
        schema.time_col.clone(),
        schema.status_col.clone(),
    )
}

/// Write a dataset as CSV: feature columns in order, then time and
/// status. Missing cells are written as `NA`.
pub fn write_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut out = String::new();
    for f in data.features() {
        out.push_str(&csv_escape(&f.name));
        out.push(',');
    }
    let _ = writeln!(
        out,
        "{},{}",
        csv_escape(data.time_col()),
        csv_escape(data.status_col())
    );
    for r in data.records() {
        for (j, f) in data.features().iter().enumerate() {
            let v = r.covariates[j];
            if is_missing(v) {
                out.push_str("NA");
            } else if let Some(levels) = f.levels() {
                out.push_str(&csv_escape(&levels[v as usize]));
            } else {
                let _ = write!(out, "{v}");
            }
            out.push(',');
        }
        let _ = writeln!(out, "{},{}", r.time, r.status);
    }
    std::fs::write(path, out).map_err(|e| DataError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Assignment of every record to one of `k` cross-validation folds.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldAssignment {
    fold_of: Vec<u32>,
    k: u32,
}

impl FoldAssignment {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn fold_of(&self, record: usize) -> u32 {
        self.fold_of[record]
    }

    pub fn assignments(&self) -> &[u32] {
        &self.fold_of
    }

    pub fn test_indices(&self, fold: u32) -> Vec<usize> {
        (0..self.fold_of.len())
            .filter(|&i| self.fold_of[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: u32) -> Vec<usize> {
        (0..self.fold_of.len())
            .filter(|&i| self.fold_of[i] != fold)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k as usize];
        for &f in &self.fold_of {
            sizes[f as usize] += 1;
        }
        sizes
    }
}

/// Deterministic near-equal fold split (sizes differ by at most one).
pub fn split_folds(data: &Dataset, k: usize, seed: u64) -> Result<FoldAssignment, DataError> {
    let n = data.len();
    if k < 2 || k > n {
        return Err(DataError::FoldCountOutOfRange { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng: ChaCha8Rng = rng_for(seed, streams::FOLDS);
    order.shuffle(&mut rng);
    let mut fold_of = vec![0u32; n];
    for (pos, &rec) in order.iter().enumerate() {
        fold_of[rec] = (pos % k) as u32;
    }
    Ok(FoldAssignment {
        fold_of,
        k: k as u32,
    })
}

/// A bootstrap draw: per-record in-bag multiplicity; out-of-bag records
/// are exactly those with multiplicity zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapSample {
    multiplicity: Vec<u32>,
}

impl BootstrapSample {
    pub fn multiplicity(&self) -> &[u32] {
        &self.multiplicity
    }

    pub fn is_oob(&self, record: usize) -> bool {
        self.multiplicity[record] == 0
    }

    pub fn oob_indices(&self) -> Vec<usize> {
        (0..self.multiplicity.len())
            .filter(|&i| self.multiplicity[i] == 0)
            .collect()
    }

    pub fn in_bag_indices(&self) -> Vec<usize> {
        (0..self.multiplicity.len())
            .filter(|&i| self.multiplicity[i] > 0)
            .collect()
    }

    /// Total draws; always equals the dataset size.
    pub fn total(&self) -> u32 {
        self.multiplicity.iter().sum()
    }
}

/// Draw N records uniformly with replacement.
pub fn bootstrap_sample(data: &Dataset, seed: u64) -> BootstrapSample {
    let n = data.len();
    let mut rng = rng_for(seed, streams::BOOTSTRAP);
    let mut multiplicity = vec![0u32; n];
    for _ in 0..n {
        multiplicity[rng.gen_range(0..n)] += 1;
    }
    BootstrapSample { multiplicity }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn loads_missing_cells() {
        let f = write_temp("a,b,time,status\n1.5,2,3,1\n,4,5,0\n2.5,6,7,1\n");
        let d = load_csv(f.path(), &CsvSchema::default()).unwrap();
        assert_eq!(d.len(), 3);
        let missing: usize = d
            .records()
            .iter()
            .map(|r| r.covariates.iter().filter(|v| is_missing(**v)).count())
            .sum();
        assert_eq!(missing, 1);
        assert!(is_missing(d.record(1).covariates[0]));
    }

    #[test]
    fn rejects_non_positive_time() {
        let f = write_temp("a,time,status\n1,-1,1\n");
        let err = load_csv(f.path(), &CsvSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::NonPositiveTime { .. }));
    }

    #[test]
    fn rejects_bad_status() {
        let f = write_temp("a,time,status\n1,2,2\n");
        let err = load_csv(f.path(), &CsvSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::InvalidStatus { .. }));
    }

    #[test]
    fn rejects_short_row() {
        let f = write_temp("a,b,time,status\n1,2,3,1\n1,2\n");
        let err = load_csv(f.path(), &CsvSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::RowLength { row: 3, .. }));
    }

    #[test]
    fn rejects_unparseable_numeric() {
        let f = write_temp("a,time,status\nfoo,2,1\n");
        let err = load_csv(f.path(), &CsvSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::BadNumericCell { .. }));
    }

    #[test]
    fn rejects_missing_outcome() {
        let f = write_temp("a,time,status\n1,NA,1\n");
        let err = load_csv(f.path(), &CsvSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::MissingOutcome { .. }));
    }

    #[test]
    fn collects_levels_in_first_appearance_order() {
        let f = write_temp("cell,time,status\nb,1,1\na,2,0\nb,3,1\nc,4,1\n");
        let schema = CsvSchema {
            categorical: vec!["cell".into()],
            ..CsvSchema::default()
        };
        let d = load_csv(f.path(), &schema).unwrap();
        assert_eq!(
            d.features()[0].levels().unwrap(),
            &["b".to_string(), "a".to_string(), "c".to_string()]
        );
        assert_eq!(d.record(0).covariates[0], 0.0);
        assert_eq!(d.record(1).covariates[0], 1.0);
        assert_eq!(d.record(3).covariates[0], 2.0);
    }

    #[test]
    fn loads_veteran() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/veteran.csv");
        let schema = CsvSchema {
            categorical: vec!["celltype".into()],
            ..CsvSchema::default()
        };
        let d = load_csv(path, &schema).unwrap();
        assert_eq!(d.len(), 137);
        let (censored, events) = d.class_counts();
        assert_eq!(censored, 9);
        assert_eq!(events, 128);
        assert_eq!(d.n_features(), 7);
    }

    #[test]
    fn csv_round_trip_preserves_values() {
        let f = write_temp("a,cell,time,status\n1.25,x,3,1\nNA,y,5.5,0\n-0.125,x,7,1\n");
        let schema = CsvSchema {
            categorical: vec!["cell".into()],
            ..CsvSchema::default()
        };
        let d1 = load_csv(f.path(), &schema).unwrap();
        let out = tempfile::NamedTempFile::new().unwrap();
        write_csv(&d1, out.path()).unwrap();
        let d2 = load_csv(out.path(), &schema).unwrap();
        // NaN != NaN, so compare cell-by-cell.
        assert_eq!(d1.features(), d2.features());
        for (r1, r2) in d1.records().iter().zip(d2.records()) {
            assert_eq!(r1.time, r2.time);
            assert_eq!(r1.status, r2.status);
            for (a, b) in r1.covariates.iter().zip(&r2.covariates) {
                assert!((is_missing(*a) && is_missing(*b)) || a == b);
            }
        }
    }

    fn toy_dataset(n: usize) -> Dataset {
        let records = (0..n)
            .map(|i| SurvivalRecord {
                covariates: vec![i as f64],
                time: (i + 1) as f64,
                status: (i % 2) as u8,
            })
            .collect();
        Dataset::new(vec![FeatureMeta::numeric("x")], records, "time", "status").unwrap()
    }

    #[test]
    fn leave_one_out_folds() {
        let d = toy_dataset(10);
        let folds = split_folds(&d, 10, 7).unwrap();
        let mut sizes = folds.fold_sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1; 10]);
    }

    #[test]
    fn fold_sizes_for_267_records() {
        // 267 = 10 * 26 + 7: seven folds of 27, three of 26.
        let d = toy_dataset(267);
        let folds = split_folds(&d, 10, 3).unwrap();
        let sizes = folds.fold_sizes();
        assert_eq!(sizes.iter().filter(|&&s| s == 27).count(), 7);
        assert_eq!(sizes.iter().filter(|&&s| s == 26).count(), 3);
    }

    #[test]
    fn folds_deterministic_under_seed() {
        let d = toy_dataset(50);
        assert_eq!(split_folds(&d, 5, 9).unwrap(), split_folds(&d, 5, 9).unwrap());
        assert_ne!(split_folds(&d, 5, 9).unwrap(), split_folds(&d, 5, 10).unwrap());
    }

    #[test]
    fn fold_count_out_of_range() {
        let d = toy_dataset(5);
        assert!(matches!(
            split_folds(&d, 1, 0),
            Err(DataError::FoldCountOutOfRange { .. })
        ));
        assert!(matches!(
            split_folds(&d, 6, 0),
            Err(DataError::FoldCountOutOfRange { .. })
        ));
    }

    #[test]
    fn bootstrap_single_record() {
        let d = toy_dataset(1);
        let b = bootstrap_sample(&d, 11);
        assert_eq!(b.multiplicity(), &[1]);
        assert!(b.oob_indices().is_empty());
    }

    #[test]
    fn bootstrap_oob_fraction_near_one_over_e() {
        let d = toy_dataset(1000);
        let mut total = 0usize;
        for seed in 0..200u64 {
            total += bootstrap_sample(&d, seed).oob_indices().len();
        }
        let mean = total as f64 / 200.0 / 1000.0;
        assert!((0.35..=0.39).contains(&mean), "mean oob fraction {mean}");
    }

    proptest! {
        #[test]
        fn folds_partition_indices(n in 2usize..120, k in 2usize..10, seed in 0u64..50) {
            prop_assume!(k <= n);
            let d = toy_dataset(n);
            let folds = split_folds(&d, k, seed).unwrap();
            let sizes = folds.fold_sizes();
            prop_assert_eq!(sizes.iter().sum::<usize>(), n);
            let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            prop_assert!(max - min <= 1);
            // Every record appears in exactly one test fold.
            let mut seen = vec![false; n];
            for f in 0..k as u32 {
                for i in folds.test_indices(f) {
                    prop_assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            prop_assert!(seen.into_iter().all(|s| s));
        }

        #[test]
        fn bootstrap_multiplicity_sums_to_n(n in 1usize..200, seed in 0u64..100) {
            let d = toy_dataset(n);
            let b = bootstrap_sample(&d, seed);
            prop_assert_eq!(b.total() as usize, n);
            // In-bag multiplicity and OOB membership are complementary.
            for i in 0..n {
                prop_assert_eq!(b.is_oob(i), b.multiplicity()[i] == 0);
            }
        }
    }
}
