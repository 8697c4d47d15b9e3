//! Gray-level run-length matrix.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_quantized, FeatureVector};
use crate::error::{Error, Result};
use crate::image::GrayImage;

pub const RUN_LENGTH_NAMES: [&str; 7] = ["sre", "lre", "gln", "rln", "rp", "lgre", "hgre"];

/// Directions along which runs are traced: 0°, 90°, 45° and 135°.
pub const RUN_DIRECTIONS: [(i32, i32); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];

/// `r(g, l)`: number of maximal runs of level `g` with length exactly `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glrlm {
    levels: usize,
    max_run: usize,
    counts: Vec<u64>,
    direction: (i32, i32),
    n_pixels: usize,
}

impl Glrlm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn max_run(&self) -> usize {
        self.max_run
    }

    pub fn direction(&self) -> (i32, i32) {
        self.direction
    }

    pub fn n_pixels(&self) -> usize {
        self.n_pixels
    }

    /// Run count for level `g` and run length `len` (1-based).
    #[inline]
    pub fn count(&self, g: usize, len: usize) -> u64 {
        if len == 0 || len > self.max_run {
            0
        } else {
            self.counts[g * self.max_run + len - 1]
        }
    }

    pub fn total_runs(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Traces maximal constant-level runs along `(dx, dy)`.
pub fn compute_glrlm(img: &GrayImage, dx: i32, dy: i32) -> Result<Glrlm> {
    if !RUN_DIRECTIONS.contains(&(dx, dy)) {
        return Err(Error::UnsupportedDirection(dx, dy));
    }
    let levels = check_quantized(img)?;
    let (w, h) = (img.width(), img.height());
    let max_run = match (dx, dy) {
        (1, 0) => w,
        (0, 1) => h,
        _ => w.min(h),
    };
    let mut counts = vec![0u64; levels * max_run];
    let (dx, dy) = (i64::from(dx), i64::from(dy));

    for y in 0..h as i64 {
        for x in 0..w as i64 {
            // a line starts where the previous step falls off the image
            if img.get_signed(x - dx, y - dy).is_some() {
                continue;
            }
            let (mut cx, mut cy) = (x, y);
            let mut current = img.get(x as usize, y as usize);
            let mut len = 0usize;
            while let Some(g) = img.get_signed(cx, cy) {
                if g == current {
                    len += 1;
                } else {
                    counts[current as usize * max_run + len - 1] += 1;
                    current = g;
                    len = 1;
                }
                cx += dx;
                cy += dy;
            }
            counts[current as usize * max_run + len - 1] += 1;
        }
    }

    Ok(Glrlm {
        levels,
        max_run,
        counts,
        direction: (dx as i32, dy as i32),
        n_pixels: w * h,
    })
}

/// Seven run-length statistics. Gray levels enter LGRE/HGRE as `g + 1`.
pub fn runlength_features(glrlm: &Glrlm) -> Result<FeatureVector> {
    let total = glrlm.total_runs();
    if total == 0 {
        return Err(Error::EmptyInput("run-length matrix"));
    }
    let total = total as f64;
    let mut sre = 0.0;
    let mut lre = 0.0;
    let mut lgre = 0.0;
    let mut hgre = 0.0;
    let mut gln = 0.0;
    let mut per_length = vec![0.0; glrlm.max_run];
    for g in 0..glrlm.levels {
        let level = (g + 1) as f64;
        let mut per_level = 0.0;
        for len in 1..=glrlm.max_run {
            let r = glrlm.count(g, len) as f64;
            if r == 0.0 {
                continue;
            }
            let l = len as f64;
            sre += r / (l * l);
            lre += r * l * l;
            lgre += r / (level * level);
            hgre += r * level * level;
            per_level += r;
            per_length[len - 1] += r;
        }
        gln += per_level * per_level;
    }
    let rln: f64 = per_length.iter().map(|r| r * r).sum();
    let values = vec![
        sre / total,
        lre / total,
        gln / total,
        rln / total,
        total / glrlm.n_pixels as f64,
        lgre / total,
        hgre / total,
    ];
    Ok(FeatureVector::from_static(&RUN_LENGTH_NAMES, values))
}
