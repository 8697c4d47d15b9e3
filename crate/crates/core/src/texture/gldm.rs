//! Gray-level difference statistics.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_quantized, entropy_term, FeatureVector};
use crate::error::{Error, Result};
use crate::image::GrayImage;

pub const DIFFERENCE_NAMES: [&str; 5] = ["mean", "contrast", "asm", "entropy", "idm"];

/// `d(k)`: probability that two pixels at the offset differ by exactly `k` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Gldm {
    d: Vec<f64>,
    offset: (i32, i32),
}

impl Gldm {
    /// Builds a difference distribution directly, e.g. for testing features.
    pub fn from_probabilities(d: Vec<f64>, offset: (i32, i32)) -> Result<Self> {
        if d.len() < 2 {
            return Err(Error::InvalidParameter(
                "difference histogram needs >= 2 levels".into(),
            ));
        }
        if d.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidParameter(
                "difference probabilities must be >= 0".into(),
            ));
        }
        let total: f64 = d.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "difference probabilities must sum to 1".into(),
            ));
        }
        Ok(Self { d, offset })
    }

    pub fn levels(&self) -> usize {
        self.d.len()
    }

    pub fn offset(&self) -> (i32, i32) {
        self.offset
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.d
    }
}

pub fn compute_gldm(img: &GrayImage, dx: i32, dy: i32) -> Result<Gldm> {
    if (dx, dy) == (0, 0) {
        return Err(Error::InvalidParameter(
            "difference offset must be nonzero".into(),
        ));
    }
    let levels = check_quantized(img)?;
    let mut counts = vec![0u64; levels];
    let mut total = 0u64;
    for y in 0..img.height() as i64 {
        for x in 0..img.width() as i64 {
            if let Some(nb) = img.get_signed(x + i64::from(dx), y + i64::from(dy)) {
                counts[img.get(x as usize, y as usize).abs_diff(nb) as usize] += 1;
                total += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::EmptyCooccurrence);
    }
    Ok(Gldm {
        d: counts
            .into_iter()
            .map(|c| c as f64 / total as f64)
            .collect(),
        offset: (dx, dy),
    })
}

/// Mean, contrast, angular second moment, entropy and inverse difference moment.
pub fn gldm_features(gldm: &Gldm) -> FeatureVector {
    let mut mean = 0.0;
    let mut contrast = 0.0;
    let mut asm = 0.0;
    let mut entropy = 0.0;
    let mut idm = 0.0;
    for (k, &p) in gldm.d.iter().enumerate() {
        let k = k as f64;
        mean += k * p;
        contrast += k * k * p;
        asm += p * p;
        entropy -= entropy_term(p);
        idm += p / (k * k + 1.0);
    }
    FeatureVector::from_static(&DIFFERENCE_NAMES, vec![mean, contrast, asm, entropy, idm])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_all_zero_difference() {
        let img = GrayImage::constant(3, 3, 7, 4).unwrap();
        let g = compute_gldm(&img, 1, 1).unwrap();
        assert_eq!(g.probabilities()[0], 1.0);
        let f = gldm_features(&g);
        assert_eq!(f.values(), &[0.0, 0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn row_with_two_step_differences() {
        let img = GrayImage::from_rows(&[&[0, 2, 0]], 2).unwrap();
        let g = compute_gldm(&img, 1, 0).unwrap();
        assert_eq!(g.probabilities(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn checkerboard_unit_difference() {
        let pixels = (0..16).map(|i| ((i % 4 + i / 4) % 2) as u16).collect();
        let img = GrayImage::new(4, 4, 1, pixels).unwrap();
        let g = compute_gldm(&img, 1, 0).unwrap();
        assert_eq!(g.probabilities(), &[0.0, 1.0]);
        let f = gldm_features(&g);
        assert_eq!(f.get("mean"), Some(1.0));
        assert_eq!(f.get("contrast"), Some(1.0));
        assert_eq!(f.get("idm"), Some(0.5));
    }

    #[test]
    fn uniform_two_cell_entropy() {
        let g = Gldm::from_probabilities(vec![0.5, 0.5], (1, 0)).unwrap();
        let f = gldm_features(&g);
        assert!((f.get("entropy").unwrap() - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let img = GrayImage::constant(1, 1, 1, 0).unwrap();
        assert!(compute_gldm(&img, 0, 0).is_err());
        assert_eq!(compute_gldm(&img, 1, 0), Err(Error::EmptyCooccurrence));
    }
}
