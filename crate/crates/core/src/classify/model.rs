use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{ClassifierConfig, Dataset, MembershipInit};
use crate::error::{Error, Result};
use crate::texture::FeatureVector;

/// A training sample found by a neighbour search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor<'a> {
    pub id: &'a str,
    /// Position in [`FitModel::training`].
    pub index: usize,
    pub distance: f64,
}

/// Memorized training data plus per-sample class memberships.
///
/// Immutable after [`FitModel::fit`]; share it freely across threads.
#[derive(Debug, Clone)]
pub struct FitModel {
    config: ClassifierConfig,
    /// Training samples sorted by id.
    training: Dataset,
    norm: Option<Vec<(f64, f64)>>,
    points: Vec<Vec<f64>>,
    labels: Vec<usize>,
    memberships: Vec<Vec<f64>>,
    k_init_clamped: bool,
}

impl FitModel {
    pub fn fit(data: &Dataset, config: ClassifierConfig) -> Result<Self> {
        config.validate()?;
        if data.is_empty() {
            return Err(Error::InvalidDataset("cannot fit an empty dataset".into()));
        }
        let mut training = data.clone();
        // index order doubles as id order for tie-breaking
        training.samples.sort_by(|a, b| a.id.cmp(&b.id));

        let norm = config.normalize.then(|| {
            (0..training.dim())
                .map(|f| {
                    training
                        .samples
                        .iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                            (lo.min(s.features[f]), hi.max(s.features[f]))
                        })
                })
                .collect::<Vec<_>>()
        });
        let points = training
            .samples
            .iter()
            .map(|s| apply_norm(norm.as_deref(), &s.features))
            .collect();
        let labels = training
            .samples
            .iter()
            .map(|s| {
                training
                    .class_index(&s.label)
                    .expect("label validated by Dataset")
            })
            .collect();

        let mut model = Self {
            config,
            training,
            norm,
            points,
            labels,
            memberships: Vec::new(),
            k_init_clamped: false,
        };
        model.init_memberships();
        Ok(model)
    }

    fn init_memberships(&mut self) {
        let n = self.points.len();
        let n_classes = self.training.classes.len();
        let one_hot = |label: usize| {
            let mut u = vec![0.0; n_classes];
            u[label] = 1.0;
            u
        };
        let requested = self.config.effective_k_init();
        if self.config.init == MembershipInit::Crisp {
            self.memberships = self.labels.iter().map(|&l| one_hot(l)).collect();
            return;
        }
        self.k_init_clamped = requested >= n;
        let k_init = requested.min(n - 1);
        if k_init == 0 {
            self.memberships = self.labels.iter().map(|&l| one_hot(l)).collect();
            return;
        }
        self.memberships = (0..n)
            .map(|j| {
                let mut counts = vec![0usize; n_classes];
                for (i, _) in self
                    .ranked(&self.points[j], None, Some(j))
                    .into_iter()
                    .take(k_init)
                {
                    counts[self.labels[i]] += 1;
                }
                (0..n_classes)
                    .map(|c| {
                        let share = 0.49 * counts[c] as f64 / k_init as f64;
                        if c == self.labels[j] {
                            0.51 + share
                        } else {
                            share
                        }
                    })
                    .collect()
            })
            .collect();
    }

    pub fn config(&self) -> &ClassifierConfig {
        &self.config
    }

    /// Training data, sorted by sample id.
    pub fn training(&self) -> &Dataset {
        &self.training
    }

    pub fn classes(&self) -> &[alloc::string::String] {
        self.training.classes()
    }

    /// Per-feature `(min, max)` of the training data when normalizing.
    pub fn norm_params(&self) -> Option<&[(f64, f64)]> {
        self.norm.as_deref()
    }

    /// Membership vector of training sample `index`, aligned with the classes.
    pub fn membership(&self, index: usize) -> &[f64] {
        &self.memberships[index]
    }

    pub fn memberships(&self) -> &[Vec<f64>] {
        &self.memberships
    }

    /// True when Keller initialisation had to shrink `k_init` to `N - 1`.
    pub fn k_init_clamped(&self) -> bool {
        self.k_init_clamped
    }

    pub(super) fn label_of(&self, index: usize) -> usize {
        self.labels[index]
    }

    /// Maps a raw query into model space.
    pub(super) fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.training.dim() {
            return Err(Error::SchemaMismatch {
                expected: self.training.dim(),
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "query has a non-finite feature".into(),
            ));
        }
        Ok(apply_norm(self.norm.as_deref(), x))
    }

    /// Checks names as well as length.
    pub(super) fn check_schema(&self, x: &FeatureVector) -> Result<()> {
        if x.names() != self.training.feature_names() {
            return Err(Error::SchemaMismatch {
                expected: self.training.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// All training samples (optionally one class, optionally minus one index)
    /// ordered by `(distance, id)`.
    pub(super) fn ranked(
        &self,
        q: &[f64],
        class: Option<usize>,
        exclude: Option<usize>,
    ) -> Vec<(usize, f64)> {
        let mut all: Vec<(usize, f64)> = self
            .points
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != exclude && class.is_none_or(|c| self.labels[i] == c))
            .map(|(i, p)| (i, self.config.metric.distance(q, p)))
            .collect();
        all.sort_by(neighbor_order);
        all
    }

    /// Exact `k` nearest training samples to the raw query `x`, ordered by
    /// `(distance, id)`. Returns everything available when fewer than `k` exist.
    pub fn kneighbors(
        &self,
        x: &[f64],
        k: usize,
        class_filter: Option<&str>,
    ) -> Result<Vec<Neighbor<'_>>> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        let q = self.transform(x)?;
        let class = class_filter
            .map(|c| {
                self.training
                    .class_index(c)
                    .ok_or_else(|| Error::UnknownClass(c.into()))
            })
            .transpose()?;
        Ok(self
            .ranked(&q, class, None)
            .into_iter()
            .take(k)
            .map(|(index, distance)| Neighbor {
                id: &self.training.samples[index].id,
                index,
                distance,
            })
            .collect())
    }
}

pub(super) fn neighbor_order(a: &(usize, f64), b: &(usize, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then(a.0.cmp(&b.0))
}

fn apply_norm(norm: Option<&[(f64, f64)]>, x: &[f64]) -> Vec<f64> {
    match norm {
        None => x.to_vec(),
        Some(params) => x
            .iter()
            .zip(params)
            .map(|(&v, &(lo, hi))| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
            .collect(),
    }
}
