//! RBF-kernel SVM, feature standardization, stratified cross-validation and
//! the PCA-pair grid search.

pub mod cv;
pub mod grid;
pub mod standardize;
pub mod svm;

pub use cv::{kfold_cv, stratified_folds, CvConfig, CvReport, FoldOutcome};
pub use grid::{all_pairs, grid_search_pca_pair, score_table_csv, GridItem, GridResult, PairScore};
pub use standardize::{standardize_fit, Standardizer};
pub use svm::{label_of, max_kkt_violation, svm_fit_raw, svm_train, SvmFit, SvmModel, SvmParams};
