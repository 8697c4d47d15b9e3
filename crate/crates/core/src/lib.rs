//! Mammographic mass classification kernels.
//!
//! This crate holds the numeric half of the pipeline and runs without `std`
//! (it needs `alloc`):
//!
//! * [`image`]: gray images, ROI cropping, min-max normalization and
//!   gray-level quantization.
//! * [`texture`]: co-occurrence (GLCM), run-length (GLRLM) and
//!   gray-level difference (GLDM) matrices with their scalar features.
//! * [`classify`]: K-NN, fuzzy K-NN, K-NN equality and fuzzy K-NN equality
//!   classifiers sharing one fitted model.
//! * [`eval`]: confusion counts, rates, ROC/AUC, stratified folds,
//!   leave-one-out and multi-classifier comparison.
//!
//! File formats, the CLI and everything else that touches the file system
//! live in the `mammotex` crate.
#![no_std]

extern crate alloc;

pub mod classify;
pub mod error;
pub mod eval;
pub mod image;
pub mod texture;

pub use classify::{
    ClassifierConfig, ClassifierKind, Dataset, FitModel, MembershipInit, Metric, Neighbor,
    Prediction, Sample,
};
pub use error::{Error, Result};
pub use eval::{
    all_kinds, auc, compare_classifiers, confusion, evaluate, loocv, rates, roc_curve,
    stratified_kfold, ComparisonRow, ComparisonTable, ConfusionCounts, EvaluationReport, Fold,
    Protocol, Rates, RocCurve, RocPoint, MALIGNANT,
};
pub use image::{crop_roi, minmax_normalize, quantize, GrayImage, RoiSpec, Severity};
pub use texture::{extract_all, ExtractionConfig, FeatureVector};
