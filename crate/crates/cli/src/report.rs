//! JSON and CSV artifacts written by `eval` and `compare`.

use mammotex_core::eval::{AveragedMetrics, FoldResult, PooledMetrics};
use mammotex_core::{ComparisonTable, EvaluationReport, Protocol, RocCurve};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A held-out prediction as written to the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub fold: usize,
    pub truth: String,
    pub predicted: String,
    /// Score of the positive class.
    pub score: f64,
}

/// The `eval` report with stable top-level keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub method: String,
    pub k: usize,
    pub m: f64,
    pub init: String,
    pub k_init: usize,
    pub normalize: bool,
    pub protocol: Protocol,
    pub seed: Option<u64>,
    pub positive: String,
    pub features: Vec<String>,
    pub n_samples: usize,
    pub sensitivity: f64,
    pub specificity: f64,
    pub accuracy: f64,
    pub auc: f64,
    pub pooled: PooledMetrics,
    pub averaged: AveragedMetrics,
    pub folds: Vec<FoldResult>,
    pub predictions: Vec<PredictionRecord>,
}

impl ReportJson {
    pub fn new(report: &EvaluationReport, features: &[String], classes: &[String]) -> Self {
        let cfg = &report.config;
        let pos = classes
            .iter()
            .position(|c| *c == report.positive)
            .unwrap_or(0);
        Self {
            method: cfg.kind.name().into(),
            k: cfg.k,
            m: cfg.m,
            init: cfg.init.name().into(),
            k_init: cfg.effective_k_init(),
            normalize: cfg.normalize,
            protocol: report.protocol,
            seed: report.protocol.seed(),
            positive: report.positive.clone(),
            features: features.to_vec(),
            n_samples: report.predictions.len(),
            sensitivity: report.pooled.sensitivity,
            specificity: report.pooled.specificity,
            accuracy: report.pooled.accuracy,
            auc: report.pooled.auc,
            pooled: report.pooled.clone(),
            averaged: report.averaged.clone(),
            folds: report.folds.clone(),
            predictions: report
                .predictions
                .iter()
                .map(|h| PredictionRecord {
                    id: h.id.clone(),
                    fold: h.fold,
                    truth: h.truth.clone(),
                    predicted: h.prediction.label.clone(),
                    score: h.prediction.score_of(pos),
                })
                .collect(),
        }
    }
}

/// The `compare` output: the table plus the shared evaluation settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareJson {
    pub protocol: Protocol,
    pub seed: Option<u64>,
    pub positive: String,
    pub features: Vec<String>,
    #[serde(flatten)]
    pub table: ComparisonTable,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// `threshold,fpr,tpr`; the opening point's threshold is written as `inf`.
pub fn roc_csv(curve: &RocCurve) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Internal(format!("writing ROC CSV: {e}"));
    w.write_record(["threshold", "fpr", "tpr"]).map_err(io)?;
    for p in &curve.points {
        w.write_record([
            p.threshold.to_string(),
            p.fpr.to_string(),
            p.tpr.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Plain-text summary of one evaluation: the pooled row followed by the
/// fold-averaged figures.
pub fn eval_table(label: &str, report: &EvaluationReport) -> String {
    let table = ComparisonTable {
        rows: vec![mammotex_core::eval::ComparisonRow {
            method: label.into(),
            sensitivity: report.pooled.sensitivity,
            specificity: report.pooled.specificity,
            accuracy: report.pooled.accuracy,
            auc: report.pooled.auc,
        }],
    };
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
    let a = &report.averaged;
    let c = &report.pooled.counts;
    format!(
        "{table}protocol {}: tp={} fp={} tn={} fn={}\nfold-averaged: sensitivity {} specificity {} accuracy {:.4} auc {}\n",
        report.protocol,
        c.true_pos,
        c.false_pos,
        c.true_neg,
        c.false_neg,
        fmt(a.sensitivity),
        fmt(a.specificity),
        a.accuracy,
        fmt(a.auc),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use mammotex_core::roc_curve;

    #[test]
    fn roc_csv_layout() {
        let c = roc_curve(&[0.9, 0.2], &[true, false]).unwrap();
        let text = roc_csv(&c).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "threshold,fpr,tpr");
        assert_eq!(lines[1], "inf,0,0");
        assert_eq!(lines.last().unwrap(), &"0.2,1,1");
    }
}
