use alloc::vec;
use alloc::vec::Vec;

use super::model::FitModel;
use super::{ClassifierKind, Prediction};
use crate::error::Result;
use crate::texture::FeatureVector;

impl FitModel {
    /// Dispatches on the configured classifier kind.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        match self.config().kind {
            ClassifierKind::Knn => self.predict_knn(x),
            ClassifierKind::Fknn => self.predict_fknn(x),
            ClassifierKind::Knne => self.predict_knne(x),
            ClassifierKind::Fknne => self.predict_fknne(x),
        }
    }

    /// Like [`FitModel::predict`] but also checks feature names.
    pub fn predict_features(&self, x: &FeatureVector) -> Result<Prediction> {
        self.check_schema(x)?;
        self.predict(x.values())
    }

    /// Plurality vote of the `k` nearest samples. Vote ties go to the class whose
    /// voters have the smaller summed distance, then to class order.
    pub fn predict_knn(&self, x: &[f64]) -> Result<Prediction> {
        let q = self.transform(x)?;
        let n_classes = self.classes().len();
        let neighbours: Vec<_> = self
            .ranked(&q, None, None)
            .into_iter()
            .take(self.config().k)
            .collect();
        let mut votes = vec![0usize; n_classes];
        let mut dist_sum = vec![0.0; n_classes];
        for &(i, d) in &neighbours {
            let c = self.label_of(i);
            votes[c] += 1;
            dist_sum[c] += d;
        }
        let mut best = 0;
        for c in 1..n_classes {
            if votes[c] > votes[best] || (votes[c] == votes[best] && dist_sum[c] < dist_sum[best]) {
                best = c;
            }
        }
        let total = neighbours.len() as f64;
        let scores = votes.iter().map(|&v| v as f64 / total).collect();
        Ok(self.prediction(best, scores))
    }

    /// Memberships of the `k` nearest samples averaged with weights `d^(-2/(m-1))`.
    /// Exact matches (distance 0) take over: their memberships are averaged alone.
    pub fn predict_fknn(&self, x: &[f64]) -> Result<Prediction> {
        let q = self.transform(x)?;
        let neighbours: Vec<_> = self
            .ranked(&q, None, None)
            .into_iter()
            .take(self.config().k)
            .collect();
        let scores = match self.exact_match_scores(&neighbours) {
            Some(s) => s,
            None => {
                let weights = self.inverse_distance_weights(&neighbours);
                let total: f64 = weights.iter().sum();
                let mut scores = vec![0.0; self.classes().len()];
                for (&(i, _), w) in neighbours.iter().zip(&weights) {
                    for (s, u) in scores.iter_mut().zip(self.membership(i)) {
                        *s += u * w;
                    }
                }
                scores.iter_mut().for_each(|s| *s /= total);
                scores
            }
        };
        Ok(self.prediction(argmax(&scores), scores))
    }

    /// `k` nearest samples per class; the class with the smallest mean distance
    /// wins. Scores are normalized inverse mean distances, or uniform over the
    /// classes whose mean distance is zero.
    pub fn predict_knne(&self, x: &[f64]) -> Result<Prediction> {
        let q = self.transform(x)?;
        let means: Vec<f64> = self
            .class_pools(&q)
            .iter()
            .map(|pool| {
                if pool.is_empty() {
                    f64::INFINITY
                } else {
                    pool.iter().map(|&(_, d)| d).sum::<f64>() / pool.len() as f64
                }
            })
            .collect();

        let mut best = 0;
        for c in 1..means.len() {
            if means[c] < means[best] {
                best = c;
            }
        }
        let zero = means.iter().filter(|&&m| m == 0.0).count();
        let scores = if zero > 0 {
            means
                .iter()
                .map(|&m| if m == 0.0 { 1.0 / zero as f64 } else { 0.0 })
                .collect()
        } else {
            let inv: Vec<f64> = means.iter().map(|&m| 1.0 / m).collect();
            let total: f64 = inv.iter().sum();
            inv.iter().map(|v| v / total).collect()
        };
        Ok(self.prediction(best, scores))
    }

    /// `k` nearest samples per class, each class scored by the inverse-distance
    /// weighted memberships of its own pool in that class.
    pub fn predict_fknne(&self, x: &[f64]) -> Result<Prediction> {
        let q = self.transform(x)?;
        let pools = self.class_pools(&q);
        let scores = self.fuzzy_equality_scores(&pools);
        Ok(self.prediction(argmax(&scores), scores))
    }

    /// Per-class score rule of FK-NNE; `pools[c]` holds class `c`'s nearest samples.
    fn fuzzy_equality_scores(&self, pools: &[Vec<(usize, f64)>]) -> Vec<f64> {
        let union: Vec<(usize, f64)> = pools.iter().flatten().copied().collect();
        if let Some(s) = self.exact_match_scores(&union) {
            return s;
        }
        let weights = self.inverse_distance_weights(&union);
        let mut raw = vec![0.0; pools.len()];
        let mut w = weights.iter();
        for (c, pool) in pools.iter().enumerate() {
            for &(i, _) in pool {
                raw[c] += self.membership(i)[c] * w.next().expect("one weight per pooled sample");
            }
        }
        let total: f64 = raw.iter().sum();
        if total > 0.0 {
            raw.iter().map(|r| r / total).collect()
        } else {
            vec![1.0 / raw.len() as f64; raw.len()]
        }
    }

    fn class_pools(&self, q: &[f64]) -> Vec<Vec<(usize, f64)>> {
        let ranked = self.ranked(q, None, None);
        let k = self.config().k;
        let mut pools = vec![Vec::with_capacity(k); self.classes().len()];
        for (i, d) in ranked {
            let pool = &mut pools[self.label_of(i)];
            if pool.len() < k {
                pool.push((i, d));
            }
        }
        pools
    }

    /// Mean membership of zero-distance neighbours, if there are any.
    fn exact_match_scores(&self, neighbours: &[(usize, f64)]) -> Option<Vec<f64>> {
        let exact: Vec<usize> = neighbours
            .iter()
            .filter(|n| n.1 == 0.0)
            .map(|n| n.0)
            .collect();
        if exact.is_empty() {
            return None;
        }
        let mut scores = vec![0.0; self.classes().len()];
        for &i in &exact {
            for (s, u) in scores.iter_mut().zip(self.membership(i)) {
                *s += u;
            }
        }
        scores.iter_mut().for_each(|s| *s /= exact.len() as f64);
        Some(scores)
    }

    /// `d^(-2/(m-1))` rescaled by the smallest distance so the largest weight is 1.
    /// The rescaling cancels in every normalized score and keeps small `m` from overflowing.
    fn inverse_distance_weights(&self, neighbours: &[(usize, f64)]) -> Vec<f64> {
        let exponent = 2.0 / (self.config().m - 1.0);
        let d_min = neighbours.iter().map(|n| n.1).fold(f64::INFINITY, f64::min);
        neighbours
            .iter()
            .map(|&(_, d)| libm::pow(d_min / d, exponent))
            .collect()
    }

    fn prediction(&self, label_index: usize, scores: Vec<f64>) -> Prediction {
        Prediction {
            label: self.classes()[label_index].clone(),
            label_index,
            scores,
        }
    }
}

/// First index of the maximum.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (c, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = c;
        }
    }
    best
}
