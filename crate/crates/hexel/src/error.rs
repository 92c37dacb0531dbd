//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid geometry: edge lengths must be positive and finite, got a={a}, b={b}, c={c}")]
    InvalidEdgeLengths { a: f64, b: f64, c: f64 },
    #[error("natural point ({xi}, {eta}, {mu}) outside [-1, 1]^3")]
    NaturalPointOutOfRange { xi: f64, eta: f64, mu: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaterialError {
    #[error("singular material: poisson ratio {poisson} outside the open interval (-1, 0.5)")]
    SingularPoisson { poisson: f64 },
    #[error("young's modulus must be positive and finite, got {youngs}")]
    InvalidYoungs { youngs: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorizationError {
    #[error("matrix is not positive definite: leading minor {leading_minor} is not positive")]
    NotPositiveDefinite { leading_minor: usize },
    #[error("matrix is not symmetric: max |M - M^T| = {asymmetry}")]
    NotSymmetric { asymmetry: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecompositionError {
    #[error("provenance mismatch: stiffness parts were built from different geometry or material")]
    ProvenanceMismatch,
    #[error(
        "higher-order kernel reconstruction residual {residual:e} exceeds tolerance {tolerance:e}"
    )]
    KernelReconstruction { residual: f64, tolerance: f64 },
    #[error(transparent)]
    Factorization(#[from] FactorizationError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BendingError {
    #[error("bending probe requires a nonzero curvature")]
    ZeroCurvature,
    #[error("energy ratio is not finite: element energy {element_energy}, reference energy {reference_energy}")]
    NonFiniteRatio {
        element_energy: f64,
        reference_energy: f64,
    },
    #[error("aspect ratios must be finite, positive and strictly increasing")]
    InvalidAspectRatios,
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TemplateError {
    #[error("template parameter {index} must be positive and finite, got {value}")]
    NonPositiveParameter { index: usize, value: f64 },
    #[error("objective needs at least one bending sample")]
    EmptySamples,
    #[error("optimizer budget must be at least 1")]
    ZeroBudget,
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Bending(#[from] BendingError),
}

/// Parse failures for the matrix file formats, sweep ranges and run configs.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("dimension mismatch: header says {rows}x{cols} but {actual} values present")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        actual: usize,
    },
    #[error("matrix dimensions {rows}x{cols} exceed the supported size")]
    TooLarge { rows: usize, cols: usize },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid sweep range {spec:?}: {reason}")]
    Range { spec: String, reason: String },
}
