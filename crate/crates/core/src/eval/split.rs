//! Train/test partitions.
//!
//! Assignments depend only on the seed and the sample ids: ids are sorted
//! per class before a seeded ChaCha8 shuffle, so input order never matters.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::Dataset;
use crate::error::{Error, Result};

/// One train/test split; both id lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fold {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// Sorted and seeded-shuffled ids of each class, in class order.
fn shuffled_by_class(data: &Dataset, seed: u64) -> Vec<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    data.classes()
        .iter()
        .map(|c| {
            let mut ids: Vec<String> = data
                .samples()
                .iter()
                .filter(|s| &s.label == c)
                .map(|s| s.id.clone())
                .collect();
            ids.sort();
            ids.shuffle(&mut rng);
            ids
        })
        .collect()
}

fn complement(data: &Dataset, test: &[String]) -> Vec<String> {
    let mut train: Vec<String> = data
        .samples()
        .iter()
        .map(|s| s.id.clone())
        .filter(|id| test.binary_search(id).is_err())
        .collect();
    train.sort();
    train
}

/// Deals each class's shuffled ids round-robin into `k` folds. The dealing
/// position carries over between classes so fold sizes differ by at most one.
pub fn stratified_kfold(data: &Dataset, k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k-fold needs k >= 2, got {k}"
        )));
    }
    for (class, count) in data.classes().iter().zip(data.class_counts()) {
        if count < k {
            return Err(Error::InvalidDataset(format!(
                "class {class:?} has {count} samples, fewer than {k} folds"
            )));
        }
    }
    let mut tests: Vec<Vec<String>> = alloc::vec![Vec::new(); k];
    let mut next = 0;
    for ids in shuffled_by_class(data, seed) {
        for id in ids {
            tests[next].push(id);
            next = (next + 1) % k;
        }
    }
    Ok(tests
        .into_iter()
        .map(|mut test| {
            test.sort();
            let train = complement(data, &test);
            Fold { train, test }
        })
        .collect())
}

/// One fold per sample.
pub fn leave_one_out(data: &Dataset) -> Result<Vec<Fold>> {
    if data.len() < 2 {
        return Err(Error::InvalidDataset(
            "leave-one-out needs at least 2 samples".into(),
        ));
    }
    let mut ids: Vec<String> = data.samples().iter().map(|s| s.id.clone()).collect();
    ids.sort();
    Ok(ids
        .iter()
        .map(|id| {
            let test = alloc::vec![id.clone()];
            let train = complement(data, &test);
            Fold { train, test }
        })
        .collect())
}

/// Stratified single split holding out `round(fraction * n_c)` samples of
/// each class, always leaving at least one of each class for training.
pub fn holdout(data: &Dataset, fraction: f64, seed: u64) -> Result<Fold> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "holdout fraction must be in (0, 1), got {fraction}"
        )));
    }
    let mut test = Vec::new();
    for ids in shuffled_by_class(data, seed) {
        let n = ids.len();
        let take = (libm::round(fraction * n as f64) as usize).min(n.saturating_sub(1));
        test.extend(ids.into_iter().take(take));
    }
    if test.is_empty() {
        return Err(Error::InvalidDataset(
            "holdout fraction leaves an empty test set".into(),
        ));
    }
    test.sort();
    let train = complement(data, &test);
    Ok(Fold { train, test })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Sample;
    use alloc::vec;

    fn balanced(n_pos: usize, n_neg: usize) -> Dataset {
        let samples = (0..n_pos)
            .map(|i| Sample::new(format!("p{i:02}"), vec![i as f64], "malignant"))
            .chain((0..n_neg).map(|i| Sample::new(format!("n{i:02}"), vec![-(i as f64)], "benign")))
            .collect();
        Dataset::new(vec!["x".into()], samples).unwrap()
    }

    #[test]
    fn exact_stratification_when_divisible() {
        let folds = stratified_kfold(&balanced(10, 10), 5, 1).unwrap();
        assert_eq!(folds.len(), 5);
        for f in &folds {
            assert_eq!(f.test.iter().filter(|id| id.starts_with('p')).count(), 2);
            assert_eq!(f.test.iter().filter(|id| id.starts_with('n')).count(), 2);
            assert_eq!(f.train.len(), 16);
        }
    }

    #[test]
    fn partition_property() {
        let ds = balanced(13, 8);
        let folds = stratified_kfold(&ds, 4, 99).unwrap();
        let mut all: Vec<String> = folds.iter().flat_map(|f| f.test.clone()).collect();
        all.sort();
        let mut expected: Vec<String> = ds.samples().iter().map(|s| s.id.clone()).collect();
        expected.sort();
        assert_eq!(all, expected);
        let sizes: Vec<usize> = folds.iter().map(|f| f.test.len()).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn seeded_determinism() {
        let ds = balanced(10, 10);
        assert_eq!(
            stratified_kfold(&ds, 5, 7).unwrap(),
            stratified_kfold(&ds, 5, 7).unwrap()
        );
        assert_ne!(
            stratified_kfold(&ds, 5, 7).unwrap(),
            stratified_kfold(&ds, 5, 8).unwrap()
        );
    }

    #[test]
    fn input_order_does_not_matter() {
        let ds = balanced(6, 6);
        let mut rev = ds.samples().to_vec();
        rev.reverse();
        let ds_rev = Dataset::new(vec!["x".into()], rev).unwrap();
        assert_eq!(
            stratified_kfold(&ds, 3, 5).unwrap(),
            stratified_kfold(&ds_rev, 3, 5).unwrap()
        );
    }

    #[test]
    fn errors() {
        assert!(stratified_kfold(&balanced(4, 4), 1, 0).is_err());
        assert!(stratified_kfold(&balanced(4, 2), 3, 0).is_err());
        assert!(holdout(&balanced(4, 4), 1.0, 0).is_err());
        assert!(leave_one_out(
            &Dataset::new(vec!["x".into()], vec![Sample::new("a", vec![0.0], "c")]).unwrap()
        )
        .is_err());
    }

    #[test]
    fn holdout_half() {
        let f = holdout(&balanced(2, 2), 0.5, 3).unwrap();
        assert_eq!(f.test.len(), 2);
        assert_eq!(f.train.len(), 2);
    }
}
