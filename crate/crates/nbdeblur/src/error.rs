use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("patch out of bounds: top={top} left={left} size={size} on {height}x{width} image")]
    PatchOutOfBounds {
        top: usize,
        left: usize,
        size: usize,
        height: usize,
        width: usize,
    },

    #[error("kernel {kh}x{kw} does not fit {h}x{w} grid")]
    KernelOversize {
        kh: usize,
        kw: usize,
        h: usize,
        w: usize,
    },

    #[error("non-physical spectrum: max imaginary residue {residue:.3e} exceeds {limit:.3e}")]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error("non-finite values in {0}")]
    NonFinite(String),

    #[error("kernel format: {0}")]
    KernelFormat(String),

    #[error("manifest format: {0}")]
    ManifestFormat(String),

    #[error("checkpoint format: {0}")]
    CheckpointFormat(String),

    #[error("checkpoint version {found} not supported (expected {expected})")]
    CheckpointVersion { expected: u16, found: u16 },

    #[error("checkpoint checksum mismatch in tensor `{0}`")]
    CheckpointChecksum(String),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        source: image::ImageError,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
