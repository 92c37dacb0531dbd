//! Assumed stress field and the element matrices built from it.
//!
//! The stress field inside the brick carries 18 amplitudes. In Voigt order
//! (xx, yy, zz, xy, yz, zx) and natural coordinates:
//!
//! ```text
//! s_xx = b1  + b2  eta + b3  mu  + b4  eta mu
//! s_yy = b5  + b6  xi  + b7  mu  + b8  xi  mu
//! s_zz = b9  + b10 xi  + b11 eta + b12 xi  eta
//! s_xy = b13 + b14 mu
//! s_yz = b15 + b16 xi
//! s_zx = b17 + b18 eta
//! ```
//!
//! Every component of div(sigma) vanishes identically: each row only depends
//! on the coordinates it is *not* differentiated against. Each amplitude is
//! therefore a self-equilibrated boundary load, and the element is assembled
//! from surface work alone:
//!
//! ```text
//! A  = 24x18 equilibrium matrix, face integrals of N_face^T (sigma n)
//! F  = 18x18 flexibility, volume integral of N^T C N   (SPD)
//! S  = F^-1 generalized stiffness
//! K  = A S A^T physical stiffness, rank 18
//! ```

use crate::error::FactorizationError;
use crate::geometry::{BrickGeometry, FaceId, NaturalPoint, DOF_COUNT, NODE_SIGNS};
use crate::material::{voigt_index, IsotropicMaterial, VOIGT_DIM};
use nalgebra::{DMatrix, DVector};

pub const STRESS_PARAM_COUNT: usize = 18;

/// (Voigt row, natural-coordinate exponents) of each stress amplitude column.
#[rustfmt::skip]
pub const STRESS_COLUMNS: [(usize, [u8; 3]); STRESS_PARAM_COUNT] = [
    (0, [0, 0, 0]), (0, [0, 1, 0]), (0, [0, 0, 1]), (0, [0, 1, 1]),
    (1, [0, 0, 0]), (1, [1, 0, 0]), (1, [0, 0, 1]), (1, [1, 0, 1]),
    (2, [0, 0, 0]), (2, [1, 0, 0]), (2, [0, 1, 0]), (2, [1, 1, 0]),
    (3, [0, 0, 0]), (3, [0, 0, 1]),
    (4, [0, 0, 0]), (4, [1, 0, 0]),
    (5, [0, 0, 0]), (5, [0, 1, 0]),
];

/// Column indices of the six constant stress modes, in Voigt row order.
pub const CONSTANT_COLUMNS: [usize; VOIGT_DIM] = [0, 4, 8, 12, 14, 16];

/// Conversion factor to the alternative face-force convention that absorbs
/// the full face area instead of the area/4 surface Jacobian used here.
/// Historical tabulations of these blocks often carry this extra factor.
pub const FULL_AREA_JACOBIAN_SCALE: f64 = 4.0;

/// The 18 stress amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StressAmplitudes(pub [f64; STRESS_PARAM_COUNT]);

impl StressAmplitudes {
    pub fn zeros() -> Self {
        Self([0.0; STRESS_PARAM_COUNT])
    }

    /// Unit amplitude on column `k`, zero elsewhere.
    pub fn basis(k: usize) -> Self {
        assert!(k < STRESS_PARAM_COUNT, "amplitude index {k} out of range");
        let mut a = [0.0; STRESS_PARAM_COUNT];
        a[k] = 1.0;
        Self(a)
    }

    pub fn as_vector(&self) -> DVector<f64> {
        DVector::from_row_slice(&self.0)
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        assert_eq!(v.len(), STRESS_PARAM_COUNT);
        let mut a = [0.0; STRESS_PARAM_COUNT];
        a.copy_from_slice(v.as_slice());
        Self(a)
    }
}

fn monomial(co: [f64; 3], exps: [u8; 3]) -> f64 {
    let mut v = 1.0;
    for ax in 0..3 {
        if exps[ax] == 1 {
            v *= co[ax];
        }
    }
    v
}

/// 6x18 interpolation matrix N with sigma = N beta.
pub fn stress_interpolation(p: NaturalPoint) -> DMatrix<f64> {
    let co = p.coords();
    let mut n = DMatrix::zeros(VOIGT_DIM, STRESS_PARAM_COUNT);
    for (col, &(row, exps)) in STRESS_COLUMNS.iter().enumerate() {
        n[(row, col)] = monomial(co, exps);
    }
    n
}

/// Derivatives of N with respect to the three natural coordinates.
pub fn stress_interpolation_gradient(p: NaturalPoint) -> [DMatrix<f64>; 3] {
    let co = p.coords();
    core::array::from_fn(|axis| {
        let mut d = DMatrix::zeros(VOIGT_DIM, STRESS_PARAM_COUNT);
        for (col, &(row, exps)) in STRESS_COLUMNS.iter().enumerate() {
            if exps[axis] == 1 {
                let mut rest = exps;
                rest[axis] = 0;
                d[(row, col)] = monomial(co, rest);
            }
        }
        d
    })
}

/// Voigt stress at a natural point.
pub fn stress_at(amplitudes: &StressAmplitudes, p: NaturalPoint) -> [f64; VOIGT_DIM] {
    let mut s = [0.0; VOIGT_DIM];
    let co = p.coords();
    for (col, &(row, exps)) in STRESS_COLUMNS.iter().enumerate() {
        s[row] += amplitudes.0[col] * monomial(co, exps);
    }
    s
}

/// div(sigma) in physical coordinates; identically zero for this field.
pub fn divergence_residual(
    amplitudes: &StressAmplitudes,
    p: NaturalPoint,
    g: &BrickGeometry,
) -> [f64; 3] {
    let grad = stress_interpolation_gradient(p);
    let beta = &amplitudes.0;
    let mut r = [0.0; 3];
    for (d, rd) in r.iter_mut().enumerate() {
        for (j, dn) in grad.iter().enumerate() {
            // d sigma_dj / d x_j = (2/edge_j) d sigma_dj / d natural_j
            let row = voigt_index(d, j);
            let chain = 2.0 / g.edge(j);
            for col in 0..STRESS_PARAM_COUNT {
                *rd += chain * dn[(row, col)] * beta[col];
            }
        }
    }
    r
}

/// Work-equivalent nodal forces of the unit stress amplitudes on one face:
/// a 12x18 block of f = integral of N_face^T (sigma n) dA, rows grouped as
/// three force components per face corner in `face.nodes()` order.
///
/// The integrand is bilinear in the in-plane coordinates, so the closed-form
/// monomial integrals used here are exact: each in-plane factor contributes
/// 1 (constant) or sign/3 (linear).
pub fn face_force_block(face: FaceId, g: &BrickGeometry) -> DMatrix<f64> {
    let k = face.normal_axis();
    let s = face.normal_sign();
    let [p, q] = face.in_plane_axes();
    let jac = face.jacobian(g);
    let mut block = DMatrix::zeros(12, STRESS_PARAM_COUNT);
    for (fi, &node) in face.nodes().iter().enumerate() {
        let signs = NODE_SIGNS[node];
        for (col, &(row, exps)) in STRESS_COLUMNS.iter().enumerate() {
            // traction component d picking up this stress row on this face
            let Some(d) = (0..3).find(|&d| voigt_index(d, k) == row) else {
                continue;
            };
            // the fixed coordinate equals the face sign
            let fixed = if exps[k] == 1 { s } else { 1.0 };
            let f = |axis: usize| {
                if exps[axis] == 1 {
                    signs[axis] / 3.0
                } else {
                    1.0
                }
            };
            block[(3 * fi + d, col)] = s * fixed * jac * f(p) * f(q);
        }
    }
    block
}

/// 24x18 equilibrium matrix A: all six face blocks scattered to element DOFs.
///
/// A given (DOF, amplitude) pair receives a contribution from exactly one
/// face, so assembly is exact.
pub fn equilibrium_matrix(g: &BrickGeometry) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(DOF_COUNT, STRESS_PARAM_COUNT);
    for face in FaceId::ALL {
        let block = face_force_block(face, g);
        for (fi, &node) in face.nodes().iter().enumerate() {
            for d in 0..3 {
                for col in 0..STRESS_PARAM_COUNT {
                    let v = block[(3 * fi + d, col)];
                    if v != 0.0 {
                        a[(3 * node + d, col)] += v;
                    }
                }
            }
        }
    }
    a
}

pub(crate) fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// 18x18 flexibility F = integral of N^T C N over the element, by 2x2x2
/// Gauss quadrature (exact: the integrand is at most quadratic per axis).
///
/// The eight point contributions are accumulated pairwise per axis so that
/// odd-parity entries cancel exactly in floating point instead of leaving
/// 1-ulp residue; the zero pattern of F is load-bearing for tests.
pub fn flexibility_matrix(g: &BrickGeometry, m: &IsotropicMaterial) -> DMatrix<f64> {
    let c = m.compliance_matrix();
    let gp = 1.0 / 3.0_f64.sqrt();
    let q = |sx: f64, sy: f64, sz: f64| -> DMatrix<f64> {
        let p = NaturalPoint {
            xi: sx * gp,
            eta: sy * gp,
            mu: sz * gp,
        };
        let n = stress_interpolation(p);
        symmetrized(n.transpose() * &c * n)
    };
    let f = ((q(-1.0, -1.0, -1.0) + q(1.0, -1.0, -1.0)) + (q(-1.0, 1.0, -1.0) + q(1.0, 1.0, -1.0)))
        + ((q(-1.0, -1.0, 1.0) + q(1.0, -1.0, 1.0)) + (q(-1.0, 1.0, 1.0) + q(1.0, 1.0, 1.0)));
    f * (g.volume() / 8.0)
}

/// Flexibility by plain tensor-product Gauss quadrature with 2 or 3 points
/// per axis; the 3-point rule is the redundant cross-check of the production
/// 2-point rule.
pub fn flexibility_matrix_gauss(
    g: &BrickGeometry,
    m: &IsotropicMaterial,
    points_per_axis: usize,
) -> DMatrix<f64> {
    let rule: &[(f64, f64)] = match points_per_axis {
        2 => &[(-0.5773502691896257, 1.0), (0.5773502691896257, 1.0)],
        3 => &[
            (-0.7745966692414834, 5.0 / 9.0),
            (0.0, 8.0 / 9.0),
            (0.7745966692414834, 5.0 / 9.0),
        ],
        _ => panic!("unsupported Gauss rule: {points_per_axis} points per axis"),
    };
    let c = m.compliance_matrix();
    let mut f = DMatrix::zeros(STRESS_PARAM_COUNT, STRESS_PARAM_COUNT);
    for &(xi, wx) in rule {
        for &(eta, wy) in rule {
            for &(mu, wz) in rule {
                let n = stress_interpolation(NaturalPoint { xi, eta, mu });
                f += n.transpose() * &c * n * (wx * wy * wz);
            }
        }
    }
    f * (g.volume() / 8.0)
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
///
/// Unlike a library factorization this reports *which* leading minor fails,
/// which is the diagnostic callers want when a flexibility matrix goes bad.
pub fn cholesky_lower(m: &DMatrix<f64>) -> Result<DMatrix<f64>, FactorizationError> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "cholesky needs a square matrix");
    let asymmetry = (m - m.transpose()).amax();
    if asymmetry > 1e-12 * m.amax().max(f64::MIN_POSITIVE) {
        return Err(FactorizationError::NotSymmetric { asymmetry });
    }
    let mut l = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut d = m[(k, k)];
        for j in 0..k {
            d -= l[(k, j)] * l[(k, j)];
        }
        if d <= 0.0 || d.is_nan() {
            return Err(FactorizationError::NotPositiveDefinite {
                leading_minor: k + 1,
            });
        }
        let dk = d.sqrt();
        l[(k, k)] = dk;
        for i in k + 1..n {
            let mut s = m[(i, k)];
            for j in 0..k {
                s -= l[(i, j)] * l[(k, j)];
            }
            l[(i, k)] = s / dk;
        }
    }
    Ok(l)
}

/// Symmetry-preserving inverse of an SPD matrix via Cholesky.
pub fn spd_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>, FactorizationError> {
    let l = cholesky_lower(m)?;
    let id = DMatrix::identity(m.nrows(), m.ncols());
    let y = l
        .solve_lower_triangular(&id)
        .expect("cholesky factor has positive diagonal");
    let x = l
        .transpose()
        .solve_upper_triangular(&y)
        .expect("cholesky factor has positive diagonal");
    Ok(symmetrized(x))
}

/// Generalized stiffness S = F^-1.
pub fn generalized_stiffness(
    flexibility: &DMatrix<f64>,
) -> Result<DMatrix<f64>, FactorizationError> {
    spd_inverse(flexibility)
}

/// Physical stiffness K = A S A^T, symmetrized to remove product roundoff.
pub fn physical_stiffness(
    equilibrium: &DMatrix<f64>,
    generalized_stiffness: &DMatrix<f64>,
) -> DMatrix<f64> {
    symmetrized(equilibrium * generalized_stiffness * equilibrium.transpose())
}

/// Geometry and material a matrix set was built from; compared exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub youngs: f64,
    pub poisson: f64,
}

impl Provenance {
    pub fn of(g: &BrickGeometry, m: &IsotropicMaterial) -> Self {
        Self {
            a: g.a(),
            b: g.b(),
            c: g.c(),
            youngs: m.youngs(),
            poisson: m.poisson(),
        }
    }
}

/// The assembled element matrices for one geometry/material pair.
#[derive(Debug, Clone)]
pub struct ElementMatrices {
    pub equilibrium: DMatrix<f64>,
    pub flexibility: DMatrix<f64>,
    pub generalized_stiffness: DMatrix<f64>,
    pub physical_stiffness: DMatrix<f64>,
    pub provenance: Provenance,
}

impl ElementMatrices {
    pub fn compute(g: &BrickGeometry, m: &IsotropicMaterial) -> Result<Self, FactorizationError> {
        let equilibrium = equilibrium_matrix(g);
        let flexibility = flexibility_matrix(g, m);
        let generalized = generalized_stiffness(&flexibility)?;
        let physical = physical_stiffness(&equilibrium, &generalized);
        Ok(Self {
            equilibrium,
            flexibility,
            generalized_stiffness: generalized,
            physical_stiffness: physical,
            provenance: Provenance::of(g, m),
        })
    }

    /// Stress amplitudes induced by nodal displacements: beta = S A^T u.
    pub fn amplitudes_for(&self, u: &DVector<f64>) -> StressAmplitudes {
        assert_eq!(u.len(), DOF_COUNT);
        let beta = &self.generalized_stiffness * (self.equilibrium.transpose() * u);
        StressAmplitudes::from_vector(&beta)
    }

    /// Nodal forces f = A beta; equals K u up to the symmetrization of K.
    pub fn nodal_forces(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.equilibrium * self.amplitudes_for(u).as_vector()
    }

    /// Strain energy u^T K u / 2.
    pub fn strain_energy(&self, u: &DVector<f64>) -> f64 {
        0.5 * (u.transpose() * &self.physical_stiffness * u)[(0, 0)]
    }
}
