//! Gray-level co-occurrence matrix and the Haralick statistics.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_quantized, entropy_term, FeatureVector};
use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Names of the Haralick statistics, in output order.
pub const HARALICK_NAMES: [&str; 13] = [
    "asm",
    "contrast",
    "correlation",
    "sum_of_squares_variance",
    "idm",
    "sum_average",
    "sum_variance",
    "sum_entropy",
    "entropy",
    "difference_variance",
    "difference_entropy",
    "imc1",
    "imc2",
];

/// Joint probability of gray pairs `(g(p), g(p + offset))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    p: Vec<f64>,
    offset: (i32, i32),
    symmetric: bool,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn offset(&self) -> (i32, i32) {
        self.offset
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Probability of reference level `i` paired with neighbour level `j`.
    #[inline]
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }

    /// Row-major probabilities.
    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }
}

/// Counts every in-bounds pair `(p, p + (dx, dy))` and normalizes to probabilities.
/// With `symmetric` the reversed pair is counted too.
pub fn compute_glcm(img: &GrayImage, dx: i32, dy: i32, symmetric: bool) -> Result<Glcm> {
    if (dx, dy) == (0, 0) {
        return Err(Error::InvalidParameter(
            "co-occurrence offset must be nonzero".into(),
        ));
    }
    let levels = check_quantized(img)?;
    let mut counts = vec![0u64; levels * levels];
    let mut total = 0u64;
    for y in 0..img.height() as i64 {
        for x in 0..img.width() as i64 {
            let Some(nb) = img.get_signed(x + i64::from(dx), y + i64::from(dy)) else {
                continue;
            };
            let g = img.get(x as usize, y as usize) as usize;
            let nb = nb as usize;
            counts[g * levels + nb] += 1;
            total += 1;
            if symmetric {
                counts[nb * levels + g] += 1;
                total += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::EmptyCooccurrence);
    }
    let total = total as f64;
    Ok(Glcm {
        levels,
        p: counts.into_iter().map(|c| c as f64 / total).collect(),
        offset: (dx, dy),
        symmetric,
    })
}

/// The 13 Haralick statistics (maximal correlation coefficient omitted).
///
/// Gray levels are indexed from 0. Logs are natural with `0 ln 0 = 0`.
/// Correlation is 0 when either marginal is degenerate, and both
/// information measures are 0 when the marginal entropies vanish.
/// Sum-of-squares variance averages the two marginal variances so the value
/// does not depend on which pixel of a pair is the reference.
pub fn haralick_features(glcm: &Glcm) -> FeatureVector {
    let n = glcm.levels;
    let mut px = vec![0.0; n];
    let mut py = vec![0.0; n];
    let mut p_sum = vec![0.0; 2 * n - 1];
    let mut p_diff = vec![0.0; n];

    let mut asm = 0.0;
    let mut contrast = 0.0;
    let mut idm = 0.0;
    let mut entropy = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = glcm.p(i, j);
            if p == 0.0 {
                continue;
            }
            let d = i.abs_diff(j);
            px[i] += p;
            py[j] += p;
            p_sum[i + j] += p;
            p_diff[d] += p;
            asm += p * p;
            contrast += (d * d) as f64 * p;
            idm += p / (1.0 + (d * d) as f64);
            entropy -= entropy_term(p);
        }
    }

    let mean_x: f64 = px.iter().enumerate().map(|(i, &p)| i as f64 * p).sum();
    let mean_y: f64 = py.iter().enumerate().map(|(j, &p)| j as f64 * p).sum();
    let var_x: f64 = px
        .iter()
        .enumerate()
        .map(|(i, &p)| sq(i as f64 - mean_x) * p)
        .sum();
    let var_y: f64 = py
        .iter()
        .enumerate()
        .map(|(j, &p)| sq(j as f64 - mean_y) * p)
        .sum();

    let mut cov = 0.0;
    let mut hxy1 = 0.0;
    let mut hxy2 = 0.0;
    for (i, &pi) in px.iter().enumerate() {
        for (j, &pj) in py.iter().enumerate() {
            let pxy = pi * pj;
            let p = glcm.p(i, j);
            if p > 0.0 {
                cov += (i as f64 - mean_x) * (j as f64 - mean_y) * p;
                // p(i,j) > 0 implies px(i) > 0 and py(j) > 0
                hxy1 -= p * libm::log(pxy);
            }
            hxy2 -= entropy_term(pxy);
        }
    }
    let correlation = if var_x > 0.0 && var_y > 0.0 {
        (cov / libm::sqrt(var_x * var_y)).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let sum_of_squares_variance = 0.5 * (var_x + var_y);

    let sum_average: f64 = p_sum.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
    let sum_variance: f64 = p_sum
        .iter()
        .enumerate()
        .map(|(k, &p)| sq(k as f64 - sum_average) * p)
        .sum();
    let sum_entropy: f64 = -p_sum.iter().map(|&p| entropy_term(p)).sum::<f64>();

    let diff_mean: f64 = p_diff.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
    let difference_variance: f64 = p_diff
        .iter()
        .enumerate()
        .map(|(k, &p)| sq(k as f64 - diff_mean) * p)
        .sum();
    let difference_entropy: f64 = -p_diff.iter().map(|&p| entropy_term(p)).sum::<f64>();

    let hx: f64 = -px.iter().map(|&p| entropy_term(p)).sum::<f64>();
    let hy: f64 = -py.iter().map(|&p| entropy_term(p)).sum::<f64>();
    let (imc1, imc2) = if hx == 0.0 && hy == 0.0 {
        (0.0, 0.0)
    } else {
        let imc1 = (entropy - hxy1) / hx.max(hy);
        let imc2 = libm::sqrt((1.0 - libm::exp(-2.0 * (hxy2 - entropy))).max(0.0));
        (imc1, imc2)
    };

    let values = vec![
        asm,
        contrast,
        correlation,
        sum_of_squares_variance,
        idm,
        sum_average,
        sum_variance,
        sum_entropy,
        entropy,
        difference_variance,
        difference_entropy,
        imc1,
        imc2,
    ];
    FeatureVector::from_static(&HARALICK_NAMES, values)
}

#[inline]
fn sq(v: f64) -> f64 {
    v * v
}
