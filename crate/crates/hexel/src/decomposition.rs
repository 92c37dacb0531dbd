//! Split of the physical stiffness into basic and higher-order parts.
//!
//! The basic part carries exactly the constant-stress response,
//!
//! ```text
//! K_b = L E L^T / V
//! ```
//!
//! where L collects the constant columns of the equilibrium matrix (the
//! force lumping of a uniform stress state) and E is the elasticity matrix.
//! The remainder K_h = K - K_b has rank 12 and annihilates all rigid and
//! constant-strain displacement patterns, so it can be condensed onto the
//! twelve higher-order deformation modes spanned by the projector H:
//!
//! ```text
//! K_h = V H^T X H,    X = (H H^T)^-1 H K_h H^T (H H^T)^-1 / V
//! ```
//!
//! X is the 12x12 kernel that stiffness templates rescale; R = W^-1 X W^-1
//! is its dimensionless form under the diagonal mode weights W.

use crate::error::DecompositionError;
use crate::geometry::{BrickGeometry, DOF_COUNT, NODE_COUNT, NODE_SIGNS};
use crate::material::{voigt_index, IsotropicMaterial, VOIGT_DIM};
use crate::stress::{spd_inverse, symmetrized, ElementMatrices, Provenance};
use nalgebra::{DMatrix, DVector};

/// Number of higher-order deformation modes.
pub const HO_MODE_COUNT: usize = 12;

/// Number of basic displacement patterns (rigid plus constant strain).
pub const BASIC_MODE_COUNT: usize = 12;

/// Relative singular value cutoff for numeric rank decisions.
pub const RANK_TOLERANCE_FACTOR: f64 = 1e-10;

/// Relative residual allowed when rebuilding K_h from its kernel.
pub const KERNEL_RECONSTRUCTION_TOL: f64 = 1e-9;

/// 24x6 force lumping matrix L of the six constant stress modes.
///
/// Row group of node i, with node signs (xi, eta, mu) and quarter face
/// areas (bc/4, ac/4, ab/4):
///
/// ```text
/// x: ( xi bc/4,        0,       0,  eta ac/4,        0,  mu ab/4 )
/// y: (       0, eta ac/4,       0,   xi bc/4,  mu ab/4,        0 )
/// z: (       0,        0, mu ab/4,         0, eta ac/4, xi bc/4 )
/// ```
pub fn lumping_matrix(g: &BrickGeometry) -> DMatrix<f64> {
    let quarter = [
        g.b() * g.c() / 4.0,
        g.a() * g.c() / 4.0,
        g.a() * g.b() / 4.0,
    ];
    let mut l = DMatrix::zeros(DOF_COUNT, VOIGT_DIM);
    for (node, signs) in NODE_SIGNS.iter().enumerate() {
        for d in 0..3 {
            for j in 0..3 {
                l[(3 * node + d, voigt_index(d, j))] = signs[j] * quarter[j];
            }
        }
    }
    l
}

/// 12x24 higher-order projector H.
///
/// Columns group three DOFs per node; with node signs (xi, eta, mu) the
/// nonzero column entries are built from the quarter-area pair products
/// P_ab = xi eta ab/4, P_ac = xi mu ac/4, P_bc = eta mu bc/4 and the
/// volume product T = xi eta mu abc/8:
///
/// ```text
/// x: rows (1, 2, 7, 10) = (-P_ab, -P_ac, P_bc, T)
/// y: rows (3, 4, 8, 11) = (-P_ab, -P_bc, P_ac, T)
/// z: rows (5, 6, 9, 12) = (-P_ac, -P_bc, P_ab, T)
/// ```
///
/// Rows 1 to 6 are the bending modes, 7 to 9 warping, 10 to 12 torsion.
pub fn higher_order_projector(g: &BrickGeometry) -> DMatrix<f64> {
    let (a, b, c) = (g.a(), g.b(), g.c());
    let mut h = DMatrix::zeros(HO_MODE_COUNT, DOF_COUNT);
    for (node, s) in NODE_SIGNS.iter().enumerate() {
        let (xi, eta, mu) = (s[0], s[1], s[2]);
        let p_ab = xi * eta * a * b / 4.0;
        let p_ac = xi * mu * a * c / 4.0;
        let p_bc = eta * mu * b * c / 4.0;
        let t = xi * eta * mu * a * b * c / 8.0;
        let x = 3 * node;
        h[(0, x)] = -p_ab;
        h[(1, x)] = -p_ac;
        h[(6, x)] = p_bc;
        h[(9, x)] = t;
        h[(2, x + 1)] = -p_ab;
        h[(3, x + 1)] = -p_bc;
        h[(7, x + 1)] = p_ac;
        h[(10, x + 1)] = t;
        h[(4, x + 2)] = -p_ac;
        h[(5, x + 2)] = -p_bc;
        h[(8, x + 2)] = p_ab;
        h[(11, x + 2)] = t;
    }
    h
}

/// Diagonal weights making the kernel dimensionless, one per mode.
pub fn weight_diagonal(g: &BrickGeometry) -> [f64; HO_MODE_COUNT] {
    let ab = g.a() * g.b();
    let ac = g.a() * g.c();
    let bc = g.b() * g.c();
    let abc = g.volume();
    [
        1.0 / ab,
        1.0 / ac,
        1.0 / ab,
        1.0 / bc,
        1.0 / ac,
        1.0 / ac,
        1.0 / bc,
        1.0 / bc,
        1.0 / ab,
        1.0 / abc,
        1.0 / abc,
        1.0 / abc,
    ]
}

/// 12x12 diagonal weight matrix W.
pub fn weight_matrix(g: &BrickGeometry) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_row_slice(&weight_diagonal(g)))
}

/// 24x12 basic displacement patterns: three unit translations, three unit
/// rotations, six unit strains (symmetric shear split), evaluated at the
/// center-relative node coordinates.
pub fn basic_modes(g: &BrickGeometry) -> DMatrix<f64> {
    let mut modes = DMatrix::zeros(DOF_COUNT, BASIC_MODE_COUNT);
    for node in 0..NODE_COUNT {
        let [x, y, z] = g.node_coords(node);
        let r = 3 * node;
        #[rustfmt::skip]
        let patterns: [[f64; 3]; BASIC_MODE_COUNT] = [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0,  -z,   y],
            [  z, 0.0,  -x],
            [ -y,   x, 0.0],
            [  x, 0.0, 0.0],
            [0.0,   y, 0.0],
            [0.0, 0.0,   z],
            [y / 2.0, x / 2.0, 0.0],
            [0.0, z / 2.0, y / 2.0],
            [z / 2.0, 0.0, x / 2.0],
        ];
        for (col, p) in patterns.iter().enumerate() {
            for d in 0..3 {
                modes[(r + d, col)] = p[d];
            }
        }
    }
    modes
}

/// Numeric rank report of one matrix, SVD-based.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub name: String,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub rank: usize,
    pub expected: usize,
}

impl RankReport {
    pub fn pass(&self) -> bool {
        self.rank == self.expected
    }
}

/// Counts singular values above max(dims) * sigma_max * tolerance factor.
pub fn numeric_rank(m: &DMatrix<f64>, name: &str, expected: usize) -> RankReport {
    let svd = m.clone().svd(false, false);
    let mut singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular_values.sort_by(|x, y| y.partial_cmp(x).expect("singular values are finite"));
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let threshold = m.nrows().max(m.ncols()) as f64 * sigma_max * RANK_TOLERANCE_FACTOR;
    let rank = singular_values.iter().filter(|s| **s > threshold).count();
    RankReport {
        name: name.to_owned(),
        singular_values,
        threshold,
        rank,
        expected,
    }
}

/// The constant-stress (basic) stiffness K_b = L E L^T / V, rank 6.
#[derive(Debug, Clone)]
pub struct BasicStiffness {
    pub matrix: DMatrix<f64>,
    pub provenance: Provenance,
}

pub fn basic_stiffness(g: &BrickGeometry, m: &IsotropicMaterial) -> BasicStiffness {
    let l = lumping_matrix(g);
    let e = m.elasticity_matrix();
    BasicStiffness {
        matrix: symmetrized(&l * e * l.transpose() / g.volume()),
        provenance: Provenance::of(g, m),
    }
}

/// K_h = K - K_b; refuses to mix matrices from different elements.
pub fn higher_order_stiffness(
    element: &ElementMatrices,
    basic: &BasicStiffness,
) -> Result<DMatrix<f64>, DecompositionError> {
    if element.provenance != basic.provenance {
        return Err(DecompositionError::ProvenanceMismatch);
    }
    Ok(&element.physical_stiffness - &basic.matrix)
}

/// Condensed higher-order kernel X and its weighted form R.
#[derive(Debug, Clone)]
pub struct HigherOrderKernel {
    /// 12x12 kernel X with K_h = V H^T X H.
    pub kernel: DMatrix<f64>,
    /// Dimensionless kernel R = W^-1 X W^-1.
    pub weighted: DMatrix<f64>,
    /// Largest entry of V H^T X H - K_h actually observed.
    pub reconstruction_residual: f64,
}

/// Projects K_h onto the higher-order modes and verifies the projection
/// loses nothing: the column space of K_h must lie inside span(H^T).
pub fn extract_ho_kernel(
    g: &BrickGeometry,
    higher_order: &DMatrix<f64>,
) -> Result<HigherOrderKernel, DecompositionError> {
    let h = higher_order_projector(g);
    let gram_inv = spd_inverse(&symmetrized(&h * h.transpose()))?;
    let kernel =
        symmetrized(&gram_inv * &h * higher_order * h.transpose() * &gram_inv) / g.volume();
    let rebuilt = h.transpose() * &kernel * &h * g.volume();
    let reconstruction_residual = (&rebuilt - higher_order).amax();
    let tolerance = KERNEL_RECONSTRUCTION_TOL * higher_order.amax().max(f64::MIN_POSITIVE);
    if reconstruction_residual > tolerance {
        return Err(DecompositionError::KernelReconstruction {
            residual: reconstruction_residual,
            tolerance,
        });
    }
    let w = weight_diagonal(g);
    let weighted = DMatrix::from_fn(HO_MODE_COUNT, HO_MODE_COUNT, |i, j| {
        kernel[(i, j)] / (w[i] * w[j])
    });
    Ok(HigherOrderKernel {
        kernel,
        weighted,
        reconstruction_residual,
    })
}

/// Full decomposition of one element: K = K_b + V H^T X H.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub geometry: BrickGeometry,
    pub material: IsotropicMaterial,
    pub element: ElementMatrices,
    pub basic: BasicStiffness,
    pub higher_order: DMatrix<f64>,
    pub lumping: DMatrix<f64>,
    pub projector: DMatrix<f64>,
    pub weights: DMatrix<f64>,
    pub basic_mode_matrix: DMatrix<f64>,
    pub kernel: DMatrix<f64>,
    pub weighted_kernel: DMatrix<f64>,
    pub reconstruction_residual: f64,
}

impl Decomposition {
    pub fn compute(g: &BrickGeometry, m: &IsotropicMaterial) -> Result<Self, DecompositionError> {
        let element = ElementMatrices::compute(g, m)?;
        let basic = basic_stiffness(g, m);
        let higher_order = higher_order_stiffness(&element, &basic)?;
        let ho_kernel = extract_ho_kernel(g, &higher_order)?;
        Ok(Self {
            geometry: *g,
            material: *m,
            element,
            basic,
            higher_order,
            lumping: lumping_matrix(g),
            projector: higher_order_projector(g),
            weights: weight_matrix(g),
            basic_mode_matrix: basic_modes(g),
            kernel: ho_kernel.kernel,
            weighted_kernel: ho_kernel.weighted,
            reconstruction_residual: ho_kernel.reconstruction_residual,
        })
    }
}
