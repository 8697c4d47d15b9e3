use alloc::string::String;

use crate::error::{Error, Result};

/// Binary confusion counts with respect to a designated positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionCounts {
    #[cfg_attr(feature = "serde", serde(rename = "tp"))]
    pub true_pos: usize,
    #[cfg_attr(feature = "serde", serde(rename = "fp"))]
    pub false_pos: usize,
    #[cfg_attr(feature = "serde", serde(rename = "tn"))]
    pub true_neg: usize,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub false_neg: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    pub fn positives(&self) -> usize {
        self.true_pos + self.false_neg
    }

    pub fn negatives(&self) -> usize {
        self.true_neg + self.false_pos
    }

    pub fn record(&mut self, predicted_positive: bool, actually_positive: bool) {
        match (predicted_positive, actually_positive) {
            (true, true) => self.true_pos += 1,
            (true, false) => self.false_pos += 1,
            (false, false) => self.true_neg += 1,
            (false, true) => self.false_neg += 1,
        }
    }

    /// `(tp + tn) / total`, `None` when nothing was counted.
    pub fn accuracy(&self) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| (self.true_pos + self.true_neg) as f64 / total as f64)
    }

    pub fn sensitivity(&self) -> Option<f64> {
        let p = self.positives();
        (p > 0).then(|| self.true_pos as f64 / p as f64)
    }

    pub fn specificity(&self) -> Option<f64> {
        let n = self.negatives();
        (n > 0).then(|| self.true_neg as f64 / n as f64)
    }
}

/// Sensitivity, specificity and accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rates {
    pub sensitivity: f64,
    pub specificity: f64,
    pub accuracy: f64,
}

/// Tallies predicted against true labels. Every class other than `positive`
/// counts as negative.
pub fn confusion<P, T>(
    predicted: &[P],
    truth: &[T],
    classes: &[String],
    positive: &str,
) -> Result<ConfusionCounts>
where
    P: AsRef<str>,
    T: AsRef<str>,
{
    if predicted.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: truth.len(),
        });
    }
    if !classes.iter().any(|c| c == positive) {
        return Err(Error::UnknownClass(positive.into()));
    }
    let mut counts = ConfusionCounts::default();
    for (p, t) in predicted.iter().zip(truth) {
        counts.record(p.as_ref() == positive, t.as_ref() == positive);
    }
    Ok(counts)
}

/// Errors when either population is empty rather than reporting 0.
pub fn rates(c: &ConfusionCounts) -> Result<Rates> {
    Ok(Rates {
        sensitivity: c.sensitivity().ok_or(Error::UndefinedMetric(
            "sensitivity needs at least one positive sample",
        ))?,
        specificity: c.specificity().ok_or(Error::UndefinedMetric(
            "specificity needs at least one negative sample",
        ))?,
        accuracy: c.accuracy().expect("both populations are nonempty"),
    })
}
