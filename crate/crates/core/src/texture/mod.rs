//! Texture matrices and their scalar features.
//!
//! [`extract_all`] is the pipeline entry point: it quantizes a raw ROI,
//! builds a GLCM, GLRLM and GLDM for each configured direction, averages
//! every feature across directions and returns one namespaced vector:
//!
//! | prefix  | features                                  |
//! |---------|-------------------------------------------|
//! | `glcm.` | [`glcm::HARALICK_NAMES`] (13)             |
//! | `rl.`   | [`glrlm::RUN_LENGTH_NAMES`] (7)           |
//! | `gldm.` | [`gldm::DIFFERENCE_NAMES`] (5)            |
//!
//! The order above is fixed, so every ROI yields the same schema.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{quantize, GrayImage};

pub mod glcm;
pub mod gldm;
pub mod glrlm;

pub use glcm::{compute_glcm, haralick_features, Glcm};
pub use gldm::{compute_gldm, gldm_features, Gldm};
pub use glrlm::{compute_glrlm, runlength_features, Glrlm, RUN_DIRECTIONS};

/// Largest gray-level count accepted by the matrix builders.
pub const MAX_MATRIX_LEVELS: usize = 64;

/// Named real-valued features in a fixed order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector {
    names: Vec<String>,
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite feature value {v}"
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate feature name {n:?}"
                )));
            }
        }
        Ok(Self { names, values })
    }

    pub(crate) fn from_static(names: &[&str], values: Vec<f64>) -> Self {
        debug_assert_eq!(names.len(), values.len());
        Self {
            names: names.iter().map(|n| n.to_string()).collect(),
            values,
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.values.iter().copied())
    }

    fn prefixed(self, prefix: &str) -> Self {
        Self {
            names: self
                .names
                .into_iter()
                .map(|n| format!("{prefix}.{n}"))
                .collect(),
            values: self.values,
        }
    }

    fn append(&mut self, other: Self) {
        self.names.extend(other.names);
        self.values.extend(other.values);
    }

    pub fn into_parts(self) -> (Vec<String>, Vec<f64>) {
        (self.names, self.values)
    }
}

/// Parameters of [`extract_all`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtractionConfig {
    /// Gray levels after quantization.
    pub levels: usize,
    /// Pixel distance for co-occurrence and difference offsets.
    pub distance: u32,
    /// Count each co-occurrence pair in both orders.
    pub symmetric: bool,
    /// Unit directions; each must be one of [`RUN_DIRECTIONS`].
    pub directions: Vec<(i32, i32)>,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            levels: 16,
            distance: 1,
            symmetric: false,
            directions: RUN_DIRECTIONS.to_vec(),
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_MATRIX_LEVELS).contains(&self.levels) {
            return Err(Error::InvalidParameter(format!(
                "levels must be in 2..={MAX_MATRIX_LEVELS}, got {}",
                self.levels
            )));
        }
        if self.distance == 0 {
            return Err(Error::InvalidParameter("distance must be >= 1".into()));
        }
        if self.directions.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one direction is required".into(),
            ));
        }
        if let Some(&(dx, dy)) = self.directions.iter().find(|d| !RUN_DIRECTIONS.contains(d)) {
            return Err(Error::UnsupportedDirection(dx, dy));
        }
        Ok(())
    }
}

/// Feature names produced by [`extract_all`], in output order.
pub fn feature_names() -> Vec<String> {
    let glcm = glcm::HARALICK_NAMES.iter().map(|n| format!("glcm.{n}"));
    let rl = glrlm::RUN_LENGTH_NAMES.iter().map(|n| format!("rl.{n}"));
    let gldm = gldm::DIFFERENCE_NAMES.iter().map(|n| format!("gldm.{n}"));
    glcm.chain(rl).chain(gldm).collect()
}

/// Quantizes `roi` and returns the direction-averaged texture features.
pub fn extract_all(roi: &GrayImage, cfg: &ExtractionConfig) -> Result<FeatureVector> {
    cfg.validate()?;
    let img = quantize(roi, cfg.levels)?;
    let dist = cfg.distance as i32;

    let mut glcm_sum = vec![0.0; glcm::HARALICK_NAMES.len()];
    let mut rl_sum = vec![0.0; glrlm::RUN_LENGTH_NAMES.len()];
    let mut gldm_sum = vec![0.0; gldm::DIFFERENCE_NAMES.len()];
    for &(dx, dy) in &cfg.directions {
        let (ox, oy) = (dx * dist, dy * dist);
        accumulate(
            &mut glcm_sum,
            &haralick_features(&compute_glcm(&img, ox, oy, cfg.symmetric)?),
        );
        accumulate(
            &mut rl_sum,
            &runlength_features(&compute_glrlm(&img, dx, dy)?)?,
        );
        accumulate(&mut gldm_sum, &gldm_features(&compute_gldm(&img, ox, oy)?));
    }

    let n = cfg.directions.len() as f64;
    let average = |sums: Vec<f64>, names: &[&str], prefix: &str| {
        FeatureVector::from_static(names, sums.into_iter().map(|s| s / n).collect())
            .prefixed(prefix)
    };
    let mut out = average(glcm_sum, &glcm::HARALICK_NAMES, "glcm");
    out.append(average(rl_sum, &glrlm::RUN_LENGTH_NAMES, "rl"));
    out.append(average(gldm_sum, &gldm::DIFFERENCE_NAMES, "gldm"));
    if let Some((name, v)) = out.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "feature {name} is not finite ({v})"
        )));
    }
    Ok(out)
}

fn accumulate(sums: &mut [f64], fv: &FeatureVector) {
    for (s, v) in sums.iter_mut().zip(fv.values()) {
        *s += v;
    }
}

/// `p ln p`, with `0 ln 0 = 0`.
#[inline]
pub(crate) fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        p * libm::log(p)
    } else {
        0.0
    }
}

/// Gray-level count of an image that is ready for matrix construction.
pub(crate) fn check_quantized(img: &GrayImage) -> Result<usize> {
    let levels = img.levels();
    if levels > MAX_MATRIX_LEVELS {
        return Err(Error::InvalidParameter(format!(
            "image has {levels} gray levels; quantize to at most {MAX_MATRIX_LEVELS} first"
        )));
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_is_fixed() {
        let names = feature_names();
        assert_eq!(names.len(), 25);
        assert_eq!(names[0], "glcm.asm");
        assert_eq!(names[13], "rl.sre");
        assert_eq!(names[24], "gldm.idm");

        let a =
            GrayImage::new(6, 5, 255, (0..30).map(|i| (i * 37 % 256) as u16).collect()).unwrap();
        let b = GrayImage::constant(9, 9, 255, 12).unwrap();
        let cfg = ExtractionConfig::default();
        assert_eq!(extract_all(&a, &cfg).unwrap().names(), names.as_slice());
        assert_eq!(extract_all(&b, &cfg).unwrap().names(), names.as_slice());
    }

    #[test]
    fn constant_roi_features() {
        let img = GrayImage::constant(4, 4, 255, 200).unwrap();
        let f = extract_all(&img, &ExtractionConfig::default()).unwrap();
        assert_eq!(f.get("glcm.contrast"), Some(0.0));
        assert_eq!(f.get("glcm.asm"), Some(1.0));
        // horizontal and vertical: 4 runs / 16 px; each diagonal family: 7 runs / 16 px
        let expected = (0.25 + 0.25 + 7.0 / 16.0 + 7.0 / 16.0) / 4.0;
        assert!((f.get("rl.rp").unwrap() - expected).abs() < 1e-12);
        assert_eq!(f.get("gldm.entropy"), Some(0.0));
    }

    #[test]
    fn rejects_bad_config() {
        let img = GrayImage::constant(4, 4, 255, 0).unwrap();
        let mut cfg = ExtractionConfig {
            levels: 65,
            ..Default::default()
        };
        assert!(extract_all(&img, &cfg).is_err());
        cfg.levels = 8;
        cfg.directions = vec![(2, 0)];
        assert_eq!(
            extract_all(&img, &cfg),
            Err(Error::UnsupportedDirection(2, 0))
        );
        cfg.directions = vec![(1, 0)];
        cfg.distance = 0;
        assert!(extract_all(&img, &cfg).is_err());
    }

    #[test]
    fn feature_vector_validation() {
        assert!(FeatureVector::new(vec!["a".into()], vec![]).is_err());
        assert!(FeatureVector::new(vec!["a".into(), "a".into()], vec![1.0, 2.0]).is_err());
        assert!(FeatureVector::new(vec!["a".into()], vec![f64::NAN]).is_err());
        let fv = FeatureVector::new(vec!["a".into(), "b".into()], vec![1.0, 2.0]).unwrap();
        assert_eq!(fv.get("b"), Some(2.0));
        assert_eq!(fv.get("c"), None);
    }
}
