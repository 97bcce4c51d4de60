//! Container files for fields, sinograms and zero tables, plus PGM and CSV
//! export.
//!
//! A container is a magic line, a one-line JSON header and a raw payload:
//!
//! ```text
//! patseries-container <major>.<minor>\n
//! {"dtype":"<f8","extra":{...},"kind":"sinogram","meta":{...},"shape":[300,1600]}\n
//! <product(shape) little-endian f64 values, row-major>
//! ```
//!
//! `kind` is `field` (shape `[ny, nx]`), `sinogram` (shape
//! `[n_theta, n_t]`, meta `radius`, `t_final`, `c1`, `c2`) or `roots`
//! (shape `[max_order + 1, roots_per_order]`). `extra` holds free-form
//! provenance such as seeds and noise levels. Readers accept any minor
//! version of major 1.

mod container;
mod image;

pub use container::{
    decode, encode, load, load_field, load_roots, load_sinogram, save, Header, Kind, Stored,
    FORMAT_MAJOR, FORMAT_MINOR, MAGIC,
};
pub use image::{export_csv, export_image, import_csv, pgm_bytes};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("payload holds {found} values, header shape needs {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("unsupported container version {found} (this reader handles {FORMAT_MAJOR}.x)")]
    VersionMismatch { found: String },
    #[error("expected a {expected} container, found {found}")]
    KindMismatch { expected: Kind, found: Kind },
    #[error("invalid content: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, IoError>;

pub(crate) fn file_error(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::File {
        path: path.display().to_string(),
        source,
    }
}
