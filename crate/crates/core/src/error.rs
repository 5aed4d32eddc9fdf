use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Which of the three trapezoidal frames an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameId {
    Opening,
    Stanzas,
    Closing,
}

impl FrameId {
    pub const ALL: [FrameId; 3] = [FrameId::Opening, FrameId::Stanzas, FrameId::Closing];

    /// Roman numeral suffix used in feature names.
    pub fn numeral(self) -> &'static str {
        match self {
            FrameId::Opening => "I",
            FrameId::Stanzas => "II",
            FrameId::Closing => "III",
        }
    }
}

impl fmt::Display for FrameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FrameId::Opening => "opening",
            FrameId::Stanzas => "stanzas",
            FrameId::Closing => "closing",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid audio: {0}")]
    InvalidAudio(&'static str),

    #[error("frame fractions ({opening}, {closing}) must be positive and sum to less than 1")]
    BadFractions { opening: f64, closing: f64 },

    #[error("signal of {len} samples is too short to split into three non-empty frames")]
    TooShort { len: usize },

    #[error("frame has {len} samples, at least {min} required")]
    FrameTooShort { len: usize, min: usize },

    #[error("frame has zero standard deviation, standardized moments are undefined")]
    DegenerateFrame,

    #[error("{frame} frame: {source}")]
    Frame {
        frame: FrameId,
        #[source]
        source: Box<Error>,
    },

    #[error("samples must have equal lengths ({left} vs {right})")]
    UnequalLengths { left: usize, right: usize },

    #[error("pooled variance is zero")]
    ZeroPooledVariance,

    #[error("length mismatch ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input")]
    Empty,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("feature {name:?} is constant")]
    ConstantFeature { name: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("within-class scatter matrix is singular")]
    SingularWithinScatter,

    #[error("covariance matrix is singular")]
    SingularCovariance,

    #[error("training data contains a single class")]
    SingleClassData,

    #[error("zero vector has no cosine distance")]
    ZeroVector,

    #[error("constant vector has no correlation distance")]
    ConstantVector,

    #[error("k = {k} exceeds the {rows} training rows")]
    KTooLarge { k: usize, rows: usize },

    #[error("SMO did not converge within {iterations} iterations (violation {violation:e})")]
    Nonconvergence { iterations: usize, violation: f64 },

    #[error("least-squares SVM system is singular")]
    SingularSystem,

    #[error("could not draw a split with both classes present after {attempts} attempts")]
    DegenerateSplit { attempts: usize },

    #[error("unknown feature {0:?}")]
    UnknownFeature(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn in_frame(self, frame: FrameId) -> Self {
        Error::Frame {
            frame,
            source: Box::new(self),
        }
    }
}
