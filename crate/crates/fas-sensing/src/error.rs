//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the sensing library.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument was outside the function's domain.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// Vector/matrix dimensions do not conform.
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: String,
        got: String,
    },

    /// A path index was outside `1..=L_r`.
    #[error("path index {index} out of range 1..={count}")]
    PathIndex { index: usize, count: usize },

    /// The receive beamformer is not unit-norm.
    #[error("beamforming vector is not unit-norm: |w| = {norm}")]
    UnnormalizedBeamformer { norm: f64 },

    /// The channel vector vanished; no beamforming direction exists.
    #[error("degenerate channel: |h| = 0")]
    DegenerateChannel,

    /// Two antennas coincide, so the spacing constraint cannot be linearized.
    #[error("infeasible anchor: antennas {n} and {v} coincide")]
    InfeasibleAnchor { n: usize, v: usize },

    /// The projection found no feasible candidate (caller bug).
    #[error("projection infeasible: no candidate satisfies the constraints")]
    ProjectionInfeasible,

    /// Random placement failed to find a feasible configuration.
    #[error("packing error: no feasible placement after {attempts} attempts")]
    Packing { attempts: usize },

    /// Invalid configuration value or combination.
    #[error("configuration error: {0}")]
    Config(String),

    /// File I/O failure, with the offending path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON in a config file.
    #[error("json error in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
