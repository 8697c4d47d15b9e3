//! Seeded two-cluster data with the texture feature schema.

use mammotex_core::texture::feature_names;
use mammotex_core::{Dataset, Sample, MALIGNANT};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    /// Total sample count, split evenly (benign gets the odd one).
    pub samples: usize,
    /// Number of features, taken from the start of the texture schema.
    pub dims: usize,
    /// Offset of the malignant centre from the benign one, per feature.
    pub separation: f64,
    /// Per-feature standard deviation of both clusters.
    pub spread: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            samples: 60,
            dims: 25,
            separation: 10.0,
            spread: 0.5,
            seed: 7,
        }
    }
}

/// Benign samples centre on 0 and malignant ones on `separation` in every
/// feature. Ids are `syn000`, `syn001`, ... with classes interleaved.
pub fn two_clusters(cfg: &SynthConfig) -> Result<Dataset> {
    let names = feature_names();
    if cfg.dims == 0 || cfg.dims > names.len() {
        return Err(CliError::Argument(format!(
            "dims must be in 1..={}",
            names.len()
        )));
    }
    if cfg.samples < 2 {
        return Err(CliError::Argument("at least 2 samples are needed".into()));
    }
    if !(cfg.separation.is_finite() && cfg.spread.is_finite() && cfg.spread > 0.0) {
        return Err(CliError::Argument(
            "separation must be finite and spread positive".into(),
        ));
    }
    let noise = Normal::new(0.0, cfg.spread).map_err(|e| CliError::Argument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = (0..cfg.samples)
        .map(|i| {
            let malignant = i % 2 == 1;
            let centre = if malignant { cfg.separation } else { 0.0 };
            let features = (0..cfg.dims)
                .map(|_| centre + noise.sample(&mut rng))
                .collect();
            Sample::new(
                format!("syn{i:03}"),
                features,
                if malignant { MALIGNANT } else { "benign" },
            )
        })
        .collect();
    Ok(Dataset::new(names[..cfg.dims].to_vec(), samples)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_and_seeded() {
        let cfg = SynthConfig::default();
        let a = two_clusters(&cfg).unwrap();
        assert_eq!(a.class_counts(), [30, 30]);
        assert_eq!(a, two_clusters(&cfg).unwrap());
        assert_ne!(a, two_clusters(&SynthConfig { seed: 8, ..cfg }).unwrap());
        assert!(two_clusters(&SynthConfig { dims: 26, ..cfg }).is_err());
    }
}
