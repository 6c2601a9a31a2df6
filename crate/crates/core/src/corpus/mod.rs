//! Image decoding, dataset manifests, the feature store and model files.

pub mod features_csv;
pub mod image;
pub mod image_io;
pub mod manifest;
pub mod model_store;
pub mod numfmt;

pub use features_csv::{read_features, write_features, FeatureRecord, FEATURE_COLUMNS};
pub use image::{Image, Raster, CHANNELS};
pub use image_io::{load_image, save_png, save_ppm, write_pgm};
pub use manifest::{read_manifest, write_manifest, ClassCounts, DatasetManifest, Label, ManifestEntry, Role};
pub use model_store::{load_model, save_model, MODEL_FORMAT_TAG};
