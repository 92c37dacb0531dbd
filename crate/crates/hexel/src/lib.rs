//! Assumed-stress 8-node brick element.
//!
//! The element lives on a rectangular hexahedron with edge lengths a, b, c
//! and interpolates an 18-parameter, identically divergence-free stress
//! field instead of displacement gradients. Its stiffness is assembled from
//! boundary work alone:
//!
//! ```text
//! K = A F^-1 A^T
//! ```
//!
//! with A the 24x18 equilibrium matrix of face tractions and F the stress
//! flexibility. [`stress`] builds these, [`decomposition`] splits K into the
//! constant-stress part K_b and a rank-12 higher-order remainder condensed
//! onto a 12x12 kernel, [`bending`] scores the element against beam theory,
//! [`template`] rescales the kernel channels and tunes them against the
//! bending benchmark, [`verify`] re-checks every structural identity, and
//! [`io`] serializes the matrices.
//!
//! # Example
//!
//! ```
//! use hexel::{BrickGeometry, Decomposition, IsotropicMaterial};
//!
//! let geometry = BrickGeometry::new(3.0, 2.0, 1.0)?;
//! let material = IsotropicMaterial::new(210e9, 0.3)?;
//! let d = Decomposition::compute(&geometry, &material)?;
//! assert_eq!(d.element.physical_stiffness.nrows(), 24);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub use nalgebra;

pub mod bending;
pub mod decomposition;
pub mod error;
pub mod geometry;
pub mod io;
pub mod material;
pub mod stress;
pub mod template;
pub mod verify;

pub use bending::{aspect_sweep, BendingCase, BendingPlane, StiffnessKind, SweepRow, SweepTable};
pub use decomposition::{BasicStiffness, Decomposition, HigherOrderKernel, RankReport};
pub use error::{
    BendingError, DecompositionError, FactorizationError, GeometryError, MaterialError, ParseError,
    TemplateError,
};
pub use geometry::{BrickGeometry, FaceId, NaturalPoint};
pub use material::IsotropicMaterial;
pub use stress::{ElementMatrices, Provenance, StressAmplitudes};
pub use template::{
    optimize, templated_stiffness, ObjectiveContext, ObjectiveSpec, OptimizationReport,
    TemplateParams,
};
pub use verify::{run_invariants, VerificationReport};
