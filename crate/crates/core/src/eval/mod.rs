//! Metrics, ROC analysis and cross-validation protocols.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::{ClassifierConfig, ClassifierKind, Dataset, FitModel, Prediction};
use crate::error::{Error, Result};

mod metrics;
mod roc;
pub mod split;

pub use metrics::{confusion, rates, ConfusionCounts, Rates};
pub use roc::{auc, roc_curve, RocCurve, RocPoint};
pub use split::{holdout, leave_one_out, stratified_kfold, Fold};

/// Conventional positive class.
pub const MALIGNANT: &str = "malignant";

impl AsRef<str> for Prediction {
    fn as_ref(&self) -> &str {
        &self.label
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Protocol {
    /// Stratified k-fold cross-validation.
    KFold { k: usize, seed: u64 },
    /// Leave-one-out (jack-knife).
    Loocv,
    /// Stratified single split.
    Holdout { fraction: f64, seed: u64 },
}

impl Protocol {
    pub fn seed(&self) -> Option<u64> {
        match *self {
            Protocol::KFold { seed, .. } | Protocol::Holdout { seed, .. } => Some(seed),
            Protocol::Loocv => None,
        }
    }

    pub fn folds(&self, data: &Dataset) -> Result<Vec<Fold>> {
        match *self {
            Protocol::KFold { k, seed } => stratified_kfold(data, k, seed),
            Protocol::Loocv => leave_one_out(data),
            Protocol::Holdout { fraction, seed } => Ok(alloc::vec![holdout(data, fraction, seed)?]),
        }
    }
}

impl Default for Protocol {
    fn default() -> Self {
        Protocol::KFold { k: 10, seed: 42 }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Protocol::KFold { k, seed } => write!(f, "kfold(k={k},seed={seed})"),
            Protocol::Loocv => f.write_str("loocv"),
            Protocol::Holdout { fraction, seed } => {
                write!(f, "holdout(fraction={fraction},seed={seed})")
            }
        }
    }
}

/// An out-of-sample prediction.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HeldOut {
    pub id: String,
    pub fold: usize,
    pub truth: String,
    pub prediction: Prediction,
}

/// Metrics over every held-out prediction at once.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PooledMetrics {
    pub counts: ConfusionCounts,
    pub sensitivity: f64,
    pub specificity: f64,
    pub accuracy: f64,
    pub auc: f64,
}

/// Arithmetic mean of per-fold values over the folds where each is defined.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AveragedMetrics {
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub accuracy: f64,
    pub auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldResult {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub counts: ConfusionCounts,
    /// `None` when the fold has no positive test sample.
    pub sensitivity: Option<f64>,
    /// `None` when the fold has no negative test sample.
    pub specificity: Option<f64>,
    pub accuracy: f64,
    /// `None` unless the fold has both classes.
    pub auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub config: ClassifierConfig,
    pub protocol: Protocol,
    pub positive: String,
    pub pooled: PooledMetrics,
    pub averaged: AveragedMetrics,
    pub folds: Vec<FoldResult>,
    pub roc: RocCurve,
    /// Held-out predictions sorted by id.
    pub predictions: Vec<HeldOut>,
}

/// Evaluates `cfg` on `data` under `protocol`, with `positive` as the
/// positive class. Metrics are reported both pooled over all held-out
/// predictions and averaged over folds.
pub fn evaluate(
    data: &Dataset,
    cfg: &ClassifierConfig,
    protocol: &Protocol,
    positive: &str,
) -> Result<EvaluationReport> {
    cfg.validate()?;
    let pos_index = data
        .class_index(positive)
        .ok_or_else(|| Error::UnknownClass(positive.into()))?;
    let counts = data.class_counts();
    if counts[pos_index] == 0
        || counts
            .iter()
            .enumerate()
            .all(|(c, &n)| c == pos_index || n == 0)
    {
        return Err(Error::UndefinedMetric(
            "evaluation needs positive and negative samples",
        ));
    }

    let folds = protocol.folds(data)?;
    let mut predictions = Vec::with_capacity(data.len());
    let mut fold_results = Vec::with_capacity(folds.len());
    for (f, fold) in folds.iter().enumerate() {
        let model = FitModel::fit(&data.subset(&fold.train)?, *cfg)?;
        let mut held = Vec::with_capacity(fold.test.len());
        for id in &fold.test {
            let sample = data.sample(id).expect("fold ids come from the dataset");
            held.push(HeldOut {
                id: id.clone(),
                fold: f,
                truth: sample.label.clone(),
                prediction: model.predict(&sample.features)?,
            });
        }
        fold_results.push(fold_result(f, fold, &held, data, pos_index)?);
        predictions.extend(held);
    }
    predictions.sort_by(|a, b| a.id.cmp(&b.id));

    let (pooled, roc) = pooled_metrics(&predictions, data, pos_index)?;
    let averaged = AveragedMetrics {
        sensitivity: mean(fold_results.iter().filter_map(|f| f.sensitivity)),
        specificity: mean(fold_results.iter().filter_map(|f| f.specificity)),
        accuracy: mean(fold_results.iter().map(|f| f.accuracy)).expect("at least one fold"),
        auc: mean(fold_results.iter().filter_map(|f| f.auc)),
    };
    Ok(EvaluationReport {
        config: *cfg,
        protocol: *protocol,
        positive: positive.into(),
        pooled,
        averaged,
        folds: fold_results,
        roc,
        predictions,
    })
}

/// Leave-one-out evaluation. Classes with a single sample are allowed; that
/// sample is then predicted without any same-class training data.
pub fn loocv(data: &Dataset, cfg: &ClassifierConfig, positive: &str) -> Result<EvaluationReport> {
    evaluate(data, cfg, &Protocol::Loocv, positive)
}

fn split_scores(held: &[HeldOut], pos_index: usize, positive: &str) -> (Vec<f64>, Vec<bool>) {
    held.iter()
        .map(|h| (h.prediction.score_of(pos_index), h.truth == positive))
        .unzip()
}

fn fold_result(
    f: usize,
    fold: &Fold,
    held: &[HeldOut],
    data: &Dataset,
    pos_index: usize,
) -> Result<FoldResult> {
    let positive = &data.classes()[pos_index];
    let counts = held_out_counts(held, data, positive)?;
    let (scores, flags) = split_scores(held, pos_index, positive);
    Ok(FoldResult {
        fold: f,
        n_train: fold.train.len(),
        n_test: fold.test.len(),
        counts,
        sensitivity: counts.sensitivity(),
        specificity: counts.specificity(),
        accuracy: counts.accuracy().expect("folds are nonempty"),
        auc: auc(&scores, &flags).ok(),
    })
}

fn pooled_metrics(
    held: &[HeldOut],
    data: &Dataset,
    pos_index: usize,
) -> Result<(PooledMetrics, RocCurve)> {
    let positive = &data.classes()[pos_index];
    let counts = held_out_counts(held, data, positive)?;
    let r = rates(&counts)?;
    let (scores, flags) = split_scores(held, pos_index, positive);
    let roc = roc_curve(&scores, &flags)?;
    Ok((
        PooledMetrics {
            counts,
            sensitivity: r.sensitivity,
            specificity: r.specificity,
            accuracy: r.accuracy,
            auc: roc.auc,
        },
        roc,
    ))
}

fn held_out_counts(held: &[HeldOut], data: &Dataset, positive: &str) -> Result<ConfusionCounts> {
    let predicted: Vec<&Prediction> = held.iter().map(|h| &h.prediction).collect();
    let truth: Vec<&str> = held.iter().map(|h| h.truth.as_str()).collect();
    confusion(&predicted, &truth, data.classes(), positive)
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// One classifier's line in a comparison table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonRow {
    pub method: String,
    pub sensitivity: f64,
    pub specificity: f64,
    pub accuracy: f64,
    pub auc: f64,
}

/// Sensitivity, specificity, accuracy and AUC per classifier, in input order.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub const COLUMNS: [&'static str; 5] =
        ["method", "sensitivity", "specificity", "accuracy", "auc"];
}

impl fmt::Display for ComparisonTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .rows
            .iter()
            .map(|r| r.method.len())
            .chain(core::iter::once(Self::COLUMNS[0].len()))
            .max()
            .unwrap_or(0);
        write!(f, "{:<width$}", Self::COLUMNS[0])?;
        for col in &Self::COLUMNS[1..] {
            write!(f, "  {col:>11}")?;
        }
        writeln!(f)?;
        for r in &self.rows {
            write!(f, "{:<width$}", r.method)?;
            for v in [r.sensitivity, r.specificity, r.accuracy, r.auc] {
                write!(f, "  {v:>11.4}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Row labels: the classifier name, qualified with `k` (and then `m`, init)
/// only as far as needed to tell rows apart.
pub fn method_labels(configs: &[ClassifierConfig]) -> Vec<String> {
    let unique = |labels: &[String]| {
        labels
            .iter()
            .enumerate()
            .all(|(i, l)| !labels[..i].contains(l))
    };
    let plain: Vec<String> = configs
        .iter()
        .map(|c| String::from(c.kind.name()))
        .collect();
    if unique(&plain) {
        return plain;
    }
    let with_k: Vec<String> = configs
        .iter()
        .map(|c| format!("{} k={}", c.kind, c.k))
        .collect();
    if unique(&with_k) {
        return with_k;
    }
    configs
        .iter()
        .map(|c| format!("{} k={} m={} init={}", c.kind, c.k, c.m, c.init))
        .collect()
}

/// Evaluates each config under the same protocol and tabulates pooled metrics.
pub fn compare_classifiers(
    data: &Dataset,
    configs: &[ClassifierConfig],
    protocol: &Protocol,
    positive: &str,
) -> Result<(ComparisonTable, Vec<EvaluationReport>)> {
    if configs.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one classifier config is required".into(),
        ));
    }
    let reports = configs
        .iter()
        .map(|c| evaluate(data, c, protocol, positive))
        .collect::<Result<Vec<_>>>()?;
    let rows = method_labels(configs)
        .into_iter()
        .zip(&reports)
        .map(|(method, r)| ComparisonRow {
            method,
            sensitivity: r.pooled.sensitivity,
            specificity: r.pooled.specificity,
            accuracy: r.pooled.accuracy,
            auc: r.pooled.auc,
        })
        .collect();
    Ok((ComparisonTable { rows }, reports))
}

/// The four classifiers with shared hyperparameters.
pub fn all_kinds(base: ClassifierConfig) -> Vec<ClassifierConfig> {
    ClassifierKind::ALL
        .iter()
        .map(|&kind| ClassifierConfig { kind, ..base })
        .collect()
}
