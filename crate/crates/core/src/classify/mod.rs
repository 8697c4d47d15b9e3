//! Nearest-neighbour classifiers.
//!
//! All four predictors share one [`FitModel`]: memorized (optionally
//! min-max normalized) training vectors plus a fuzzy membership vector per
//! training sample.
//!
//! * K-NN: plurality vote of the `k` nearest samples.
//! * FK-NN: inverse-distance weighted average of the neighbours' memberships.
//! * K-NNE: `k` nearest samples *per class*; the class with the smallest
//!   mean distance wins.
//! * FK-NNE: per-class pools as in K-NNE, scored by inverse-distance weighted
//!   memberships in the pool's own class.
//!
//! Ordering is total everywhere: neighbours sort by `(distance, id)` and
//! score ties resolve to the earlier class in [`Dataset::classes`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::texture::FeatureVector;

mod model;
mod predict;

pub use model::{FitModel, Neighbor};

/// One labeled feature vector.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sample {
    pub id: String,
    pub features: Vec<f64>,
    pub label: String,
}

impl Sample {
    pub fn new(id: impl Into<String>, features: Vec<f64>, label: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            features,
            label: label.into(),
        }
    }
}

/// Labeled samples sharing one feature schema.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    feature_names: Vec<String>,
    samples: Vec<Sample>,
    classes: Vec<String>,
}

impl Dataset {
    /// Builds a dataset whose class order is the sorted set of labels.
    pub fn new(feature_names: Vec<String>, samples: Vec<Sample>) -> Result<Self> {
        let classes: BTreeSet<&str> = samples.iter().map(|s| s.label.as_str()).collect();
        let classes = classes.into_iter().map(String::from).collect();
        Self::with_classes(feature_names, samples, classes)
    }

    /// Builds a dataset with an explicit class order. Every class needs a sample.
    pub fn with_classes(
        feature_names: Vec<String>,
        samples: Vec<Sample>,
        classes: Vec<String>,
    ) -> Result<Self> {
        let ds = Self::unchecked(feature_names, samples, classes)?;
        if let Some(c) = ds
            .classes
            .iter()
            .find(|c| !ds.samples.iter().any(|s| &s.label == *c))
        {
            return Err(Error::InvalidDataset(format!("class {c:?} has no samples")));
        }
        Ok(ds)
    }

    fn unchecked(
        feature_names: Vec<String>,
        samples: Vec<Sample>,
        classes: Vec<String>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidDataset("no samples".into()));
        }
        if feature_names.is_empty() {
            return Err(Error::InvalidDataset("no features".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &feature_names {
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate feature name {n:?}"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for c in &classes {
            if !seen.insert(c.as_str()) {
                return Err(Error::InvalidDataset(format!("duplicate class {c:?}")));
            }
        }
        let mut ids = BTreeSet::new();
        for s in &samples {
            if !ids.insert(s.id.as_str()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate sample id {:?}",
                    s.id
                )));
            }
            if s.features.len() != feature_names.len() {
                return Err(Error::InvalidDataset(format!(
                    "sample {:?} has {} features, schema has {}",
                    s.id,
                    s.features.len(),
                    feature_names.len()
                )));
            }
            if s.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "sample {:?} has a non-finite feature",
                    s.id
                )));
            }
            if !classes.contains(&s.label) {
                return Err(Error::InvalidDataset(format!(
                    "sample {:?} has label {:?} outside the class set",
                    s.id, s.label
                )));
            }
        }
        Ok(Self {
            feature_names,
            samples,
            classes,
        })
    }

    /// Collects `(id, features, label)` triples that share one schema.
    pub fn from_feature_vectors<I, S, L>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, FeatureVector, L)>,
        S: Into<String>,
        L: Into<String>,
    {
        let mut names: Option<Vec<String>> = None;
        let mut samples = Vec::new();
        for (id, fv, label) in rows {
            let (n, values) = fv.into_parts();
            match &names {
                None => names = Some(n),
                Some(existing) if *existing != n => {
                    return Err(Error::InvalidDataset("feature schemas differ".into()))
                }
                Some(_) => {}
            }
            samples.push(Sample::new(id, values, label));
        }
        Self::new(names.unwrap_or_default(), samples)
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    pub fn sample(&self, id: &str) -> Option<&Sample> {
        self.samples.iter().find(|s| s.id == id)
    }

    /// Number of samples per class, in class order.
    pub fn class_counts(&self) -> Vec<usize> {
        self.classes
            .iter()
            .map(|c| self.samples.iter().filter(|s| &s.label == c).count())
            .collect()
    }

    /// Samples with the given ids, in the order given. The class list is kept
    /// as is, so a subset may leave some classes without samples.
    pub fn subset<S: AsRef<str>>(&self, ids: &[S]) -> Result<Self> {
        let samples = ids
            .iter()
            .map(|id| {
                self.sample(id.as_ref()).cloned().ok_or_else(|| {
                    Error::InvalidDataset(format!("unknown sample id {:?}", id.as_ref()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::unchecked(self.feature_names.clone(), samples, self.classes.clone())
    }

    /// Keeps only the named features, in the order given.
    pub fn select_features<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let unknown: Vec<&str> = names
            .iter()
            .map(AsRef::as_ref)
            .filter(|n| !self.feature_names.iter().any(|f| f == n))
            .collect();
        if !unknown.is_empty() {
            return Err(Error::InvalidDataset(format!(
                "unknown features: {}",
                unknown.join(",")
            )));
        }
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.feature_names
                    .iter()
                    .position(|f| f == n.as_ref())
                    .unwrap()
            })
            .collect();
        let samples = self
            .samples
            .iter()
            .map(|s| Sample {
                id: s.id.clone(),
                features: idx.iter().map(|&i| s.features[i]).collect(),
                label: s.label.clone(),
            })
            .collect();
        Self::unchecked(
            names.iter().map(|n| n.as_ref().to_string()).collect(),
            samples,
            self.classes.clone(),
        )
    }

    /// Multiplies every feature of every sample by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.samples {
            for v in &mut s.features {
                *v *= factor;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ClassifierKind {
    Knn,
    Fknn,
    Knne,
    Fknne,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 4] = [
        ClassifierKind::Knn,
        ClassifierKind::Fknn,
        ClassifierKind::Knne,
        ClassifierKind::Fknne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Knn => "knn",
            ClassifierKind::Fknn => "fknn",
            ClassifierKind::Knne => "knne",
            ClassifierKind::Fknne => "fknne",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "knn" => Ok(ClassifierKind::Knn),
            "fknn" => Ok(ClassifierKind::Fknn),
            "knne" => Ok(ClassifierKind::Knne),
            "fknne" => Ok(ClassifierKind::Fknne),
            _ => Err(Error::InvalidParameter(format!("unknown classifier {s:?}"))),
        }
    }
}

/// How training memberships are initialised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum MembershipInit {
    /// One-hot on the sample's own label.
    Crisp,
    /// `0.51 + 0.49 n_c/K` for the own class, `0.49 n_c/K` otherwise, from the
    /// class counts among the sample's `k_init` nearest other samples.
    Keller,
}

impl MembershipInit {
    pub fn name(self) -> &'static str {
        match self {
            MembershipInit::Crisp => "crisp",
            MembershipInit::Keller => "keller",
        }
    }
}

impl fmt::Display for MembershipInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MembershipInit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "crisp" => Ok(MembershipInit::Crisp),
            "keller" => Ok(MembershipInit::Keller),
            _ => Err(Error::InvalidParameter(format!(
                "unknown membership init {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Metric {
    #[default]
    Euclidean,
}

impl Metric {
    #[inline]
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => {
                libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    pub k: usize,
    /// Fuzzifier; weights are `d^(-2/(m-1))`.
    pub m: f64,
    pub init: MembershipInit,
    /// Neighbourhood size for Keller initialisation; `None` means `k`.
    pub k_init: Option<usize>,
    pub metric: Metric,
    /// Min-max scale each feature using the training range.
    pub normalize: bool,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            kind: ClassifierKind::Fknne,
            k: 3,
            m: 2.0,
            init: MembershipInit::Keller,
            k_init: None,
            metric: Metric::Euclidean,
            normalize: true,
        }
    }
}

impl ClassifierConfig {
    pub fn new(kind: ClassifierKind, k: usize) -> Self {
        Self {
            kind,
            k,
            ..Self::default()
        }
    }

    pub fn with_init(mut self, init: MembershipInit) -> Self {
        self.init = init;
        self
    }

    pub fn with_m(mut self, m: f64) -> Self {
        self.m = m;
        self
    }

    pub fn with_normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn effective_k_init(&self) -> usize {
        self.k_init.unwrap_or(self.k)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if !self.m.is_finite() || self.m <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "fuzzifier m must be > 1, got {}",
                self.m
            )));
        }
        if self.k_init == Some(0) {
            return Err(Error::InvalidParameter("k_init must be >= 1".into()));
        }
        Ok(())
    }
}

/// Predicted label with per-class scores aligned to [`Dataset::classes`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Prediction {
    pub label: String,
    pub label_index: usize,
    pub scores: Vec<f64>,
}

impl Prediction {
    pub fn score_of(&self, class_index: usize) -> f64 {
        self.scores[class_index]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("f{i}")).collect()
    }

    #[test]
    fn dataset_validation() {
        let ok = vec![
            Sample::new("a", vec![1.0], "x"),
            Sample::new("b", vec![2.0], "y"),
        ];
        let ds = Dataset::new(names(1), ok.clone()).unwrap();
        assert_eq!(ds.classes(), &["x".to_string(), "y".to_string()]);

        let dup = vec![
            Sample::new("a", vec![1.0], "x"),
            Sample::new("a", vec![2.0], "y"),
        ];
        assert!(Dataset::new(names(1), dup).is_err());
        assert!(Dataset::new(names(2), ok.clone()).is_err());
        assert!(Dataset::new(names(1), vec![]).is_err());
        assert!(Dataset::with_classes(names(1), ok.clone(), vec!["x".into()]).is_err());
        assert!(Dataset::with_classes(
            names(1),
            ok.clone(),
            vec!["x".into(), "y".into(), "z".into()]
        )
        .is_err());
        let ds = Dataset::with_classes(names(1), ok, vec!["y".into(), "x".into()]).unwrap();
        assert_eq!(ds.class_index("y"), Some(0));
    }

    #[test]
    fn subset_keeps_classes() {
        let ds = Dataset::new(
            names(1),
            vec![
                Sample::new("a", vec![1.0], "x"),
                Sample::new("b", vec![2.0], "y"),
            ],
        )
        .unwrap();
        let sub = ds.subset(&["b"]).unwrap();
        assert_eq!(sub.len(), 1);
        assert_eq!(sub.classes().len(), 2);
        assert!(ds.subset(&["zzz"]).is_err());
    }

    #[test]
    fn select_features_by_name() {
        let ds = Dataset::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![Sample::new("s", vec![1.0, 2.0, 3.0], "x")],
        )
        .unwrap();
        let sel = ds.select_features(&["c", "a"]).unwrap();
        assert_eq!(sel.samples()[0].features, vec![3.0, 1.0]);
        let err = ds.select_features(&["a", "nope"]).unwrap_err();
        assert!(format!("{err}").contains("nope"));
    }

    #[test]
    fn config_validation() {
        assert!(ClassifierConfig::new(ClassifierKind::Knn, 0)
            .validate()
            .is_err());
        assert!(ClassifierConfig::default().with_m(1.0).validate().is_err());
        assert!(ClassifierConfig::default()
            .with_m(f64::NAN)
            .validate()
            .is_err());
        assert!(ClassifierConfig::default().validate().is_ok());
        assert_eq!(
            "FK-NNE".parse::<ClassifierKind>().unwrap(),
            ClassifierKind::Fknne
        );
        assert!("svm".parse::<ClassifierKind>().is_err());
    }
}
