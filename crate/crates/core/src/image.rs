//! Gray images, annotated regions of interest and intensity transforms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Rectangular grid of integer intensities in `0..=max_val`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    max_val: u16,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, max_val: u16, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if max_val == 0 {
            return Err(Error::InvalidImage("max_val must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(&v) = pixels.iter().find(|&&v| v > max_val) {
            return Err(Error::InvalidImage(format!(
                "pixel value {v} exceeds max_val {max_val}"
            )));
        }
        Ok(Self {
            width,
            height,
            max_val,
            pixels,
        })
    }

    /// Builds an image from rows of equal length.
    pub fn from_rows(rows: &[&[u16]], max_val: u16) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidImage("ragged rows".into()));
        }
        let pixels = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(width, height, max_val, pixels)
    }

    /// Image of one repeated value.
    pub fn constant(width: usize, height: usize, max_val: u16, value: u16) -> Result<Self> {
        Self::new(width, height, max_val, alloc::vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn max_val(&self) -> u16 {
        self.max_val
    }

    /// Number of representable gray levels, `max_val + 1`.
    pub fn levels(&self) -> usize {
        self.max_val as usize + 1
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u16> {
        self.pixels
    }

    /// Pixel at column `x`, row `y`.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }

    /// Pixel at signed coordinates, `None` when out of bounds.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> Option<u16> {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            None
        } else {
            Some(self.get(x as usize, y as usize))
        }
    }

    /// Rotates the image a quarter turn clockwise.
    pub fn rotate90(&self) -> Self {
        let (w, h) = (self.width, self.height);
        let mut pixels = Vec::with_capacity(w * h);
        // new image is h wide and w tall; new(x, y) = old(y, h - 1 - x)
        for y in 0..w {
            for x in 0..h {
                pixels.push(self.get(y, h - 1 - x));
            }
        }
        Self {
            width: h,
            height: w,
            max_val: self.max_val,
            pixels,
        }
    }
}

/// Diagnostic class of an annotated abnormality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Severity {
    Benign,
    Malignant,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Benign => "benign",
            Severity::Malignant => "malignant",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One annotated abnormality, in top-left raster coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoiSpec {
    /// Unique per annotation; repeated abnormalities on one image get a suffix.
    pub id: String,
    /// Name of the image the annotation refers to.
    pub image: String,
    pub center_x: i64,
    pub center_y: i64,
    pub radius: u32,
    pub label: Severity,
}

/// Crops a square window centered on the ROI.
///
/// The side is `side` when given, else `2 * radius + 1`. The window is
/// clamped to the image, so crops near the border come out smaller.
pub fn crop_roi(img: &GrayImage, roi: &RoiSpec, side: Option<usize>) -> Result<GrayImage> {
    let (cx, cy) = (roi.center_x, roi.center_y);
    if img.get_signed(cx, cy).is_none() {
        return Err(Error::RoiOutOfBounds {
            x: cx,
            y: cy,
            width: img.width(),
            height: img.height(),
        });
    }
    let side = match side {
        Some(0) => return Err(Error::InvalidParameter("crop side must be positive".into())),
        Some(s) => s as i64,
        None => 2 * i64::from(roi.radius) + 1,
    };
    let half = side / 2;
    let x0 = (cx - half).max(0) as usize;
    let y0 = (cy - half).max(0) as usize;
    let x1 = ((cx - half + side - 1).min(img.width() as i64 - 1)) as usize;
    let y1 = ((cy - half + side - 1).min(img.height() as i64 - 1)) as usize;

    let (w, h) = (x1 - x0 + 1, y1 - y0 + 1);
    let mut pixels = Vec::with_capacity(w * h);
    for y in y0..=y1 {
        pixels.extend_from_slice(&img.pixels()[y * img.width() + x0..=y * img.width() + x1]);
    }
    GrayImage::new(w, h, img.max_val(), pixels)
}

/// Rescales values linearly onto `[0, 1]`. A constant input maps to all zeros.
pub fn minmax_normalize(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput("minmax_normalize"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "non-finite value in normalization input".into(),
        ));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = hi - lo;
    if range == 0.0 {
        return Ok(alloc::vec![0.0; values.len()]);
    }
    Ok(values.iter().map(|&v| (v - lo) / range).collect())
}

/// Maps `0..=max_val` onto `levels` equal-width bins: `g * levels / (max_val + 1)`.
pub fn quantize(img: &GrayImage, levels: usize) -> Result<GrayImage> {
    if levels < 2 {
        return Err(Error::InvalidParameter(format!(
            "levels must be >= 2, got {levels}"
        )));
    }
    if levels > img.levels() {
        return Err(Error::InvalidParameter(format!(
            "levels {levels} exceeds the image's {} gray levels",
            img.levels()
        )));
    }
    let denom = img.levels() as u64;
    let pixels = img
        .pixels()
        .iter()
        .map(|&g| (u64::from(g) * levels as u64 / denom) as u16)
        .collect();
    GrayImage::new(img.width(), img.height(), (levels - 1) as u16, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn roi(x: i64, y: i64, r: u32) -> RoiSpec {
        RoiSpec {
            id: "r".into(),
            image: "img".into(),
            center_x: x,
            center_y: y,
            radius: r,
            label: Severity::Benign,
        }
    }

    fn ramp(w: usize, h: usize) -> GrayImage {
        let pixels = (0..w * h).map(|i| (i % 256) as u16).collect();
        GrayImage::new(w, h, 255, pixels).unwrap()
    }

    #[test]
    fn rejects_bad_images() {
        assert!(GrayImage::new(0, 1, 255, vec![]).is_err());
        assert!(GrayImage::new(1, 1, 0, vec![0]).is_err());
        assert!(GrayImage::new(2, 1, 255, vec![0]).is_err());
        assert!(GrayImage::new(1, 1, 3, vec![4]).is_err());
    }

    #[test]
    fn crop_centered() {
        let img = ramp(10, 10);
        let c = crop_roi(&img, &roi(5, 5, 2), None).unwrap();
        assert_eq!((c.width(), c.height()), (5, 5));
        for y in 0..5 {
            for x in 0..5 {
                assert_eq!(c.get(x, y), img.get(x + 3, y + 3));
            }
        }
    }

    #[test]
    fn crop_clamps_at_corner() {
        let img = ramp(10, 10);
        let c = crop_roi(&img, &roi(0, 0, 2), None).unwrap();
        assert_eq!((c.width(), c.height()), (3, 3));
        assert_eq!(c.get(2, 2), img.get(2, 2));
    }

    #[test]
    fn crop_explicit_side() {
        let img = ramp(10, 10);
        let c = crop_roi(&img, &roi(5, 5, 2), Some(3)).unwrap();
        assert_eq!((c.width(), c.height()), (3, 3));
        assert_eq!(c.get(0, 0), img.get(4, 4));
    }

    #[test]
    fn crop_outside_is_error() {
        let img = ramp(10, 10);
        assert!(matches!(
            crop_roi(&img, &roi(20, 20, 2), None),
            Err(Error::RoiOutOfBounds { .. })
        ));
        assert!(crop_roi(&img, &roi(-1, 3, 2), None).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            minmax_normalize(&[2.0, 4.0, 6.0]).unwrap(),
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!(minmax_normalize(&[5.0, 5.0, 5.0]).unwrap(), vec![0.0; 3]);
        assert_eq!(
            minmax_normalize(&[]),
            Err(Error::EmptyInput("minmax_normalize"))
        );
    }

    #[test]
    fn quantize_examples() {
        let img = GrayImage::from_rows(&[&[0, 255, 64, 128]], 255).unwrap();
        let q = quantize(&img, 4).unwrap();
        assert_eq!(q.pixels(), &[0, 3, 1, 2]);
        assert_eq!(q.max_val(), 3);
        assert!(quantize(&img, 1).is_err());
        assert!(quantize(&img, 257).is_err());

        let flat = GrayImage::constant(3, 3, 255, 77).unwrap();
        let q = quantize(&flat, 16).unwrap();
        assert!(q.pixels().iter().all(|&p| p == 77 * 16 / 256));
    }

    #[test]
    fn quantize_is_surjective_on_full_range() {
        let img = GrayImage::new(256, 1, 255, (0..256).collect()).unwrap();
        for levels in [2usize, 3, 7, 16, 64, 256] {
            let q = quantize(&img, levels).unwrap();
            let mut seen = vec![false; levels];
            let mut prev = 0;
            for &p in q.pixels() {
                assert!(p >= prev);
                prev = p;
                seen[p as usize] = true;
            }
            assert!(seen.iter().all(|&s| s), "levels {levels}");
        }
    }

    #[test]
    fn rotate_four_times_is_identity() {
        let img = ramp(5, 3);
        let r = img.rotate90();
        assert_eq!((r.width(), r.height()), (3, 5));
        assert_eq!(r.get(0, 0), img.get(0, 2));
        assert_eq!(r.rotate90().rotate90().rotate90(), img);
    }
}
