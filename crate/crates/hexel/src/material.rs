//! Isotropic linear elasticity in engineering (Voigt) notation.
//!
//! Component order is (xx, yy, zz, xy, yz, zx) with engineering shear
//! strains, so the elasticity matrix E and the compliance C = E^-1 are
//! both symmetric 6x6 and block-diagonal between normal and shear parts.

use crate::error::MaterialError;
use nalgebra::DMatrix;

pub const VOIGT_DIM: usize = 6;

/// Voigt index of the symmetric tensor component (i, j).
pub fn voigt_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (1, 2) => 4,
        (0, 2) => 5,
        _ => panic!("tensor index ({i}, {j}) out of range"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicMaterial {
    youngs: f64,
    poisson: f64,
}

impl IsotropicMaterial {
    /// Requires E > 0 and -1 < nu < 1/2; both bounds keep E and C finite and
    /// positive definite.
    pub fn new(youngs: f64, poisson: f64) -> Result<Self, MaterialError> {
        if !(youngs.is_finite() && youngs > 0.0) {
            return Err(MaterialError::InvalidYoungs { youngs });
        }
        if !(poisson.is_finite() && poisson > -1.0 && poisson < 0.5) {
            return Err(MaterialError::SingularPoisson { poisson });
        }
        Ok(Self { youngs, poisson })
    }

    pub fn youngs(&self) -> f64 {
        self.youngs
    }

    pub fn poisson(&self) -> f64 {
        self.poisson
    }

    pub fn shear_modulus(&self) -> f64 {
        self.youngs / (2.0 * (1.0 + self.poisson))
    }

    /// Stiffness matrix: diagonal normal terms E(1-nu)/d, off-diagonal
    /// E nu/d, shear E(1/2-nu)/d with d = (1-2nu)(1+nu).
    pub fn elasticity_matrix(&self) -> DMatrix<f64> {
        let (e, nu) = (self.youngs, self.poisson);
        let d = (1.0 - 2.0 * nu) * (1.0 + nu);
        let mut m = DMatrix::zeros(VOIGT_DIM, VOIGT_DIM);
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = if i == j {
                    e * (1.0 - nu) / d
                } else {
                    e * nu / d
                };
            }
            m[(3 + i, 3 + i)] = e * (0.5 - nu) / d;
        }
        m
    }

    /// Compliance in closed form: 1/E and -nu/E normal blocks, 2(1+nu)/E shear.
    pub fn compliance_matrix(&self) -> DMatrix<f64> {
        let (e, nu) = (self.youngs, self.poisson);
        let mut m = DMatrix::zeros(VOIGT_DIM, VOIGT_DIM);
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = if i == j { 1.0 / e } else { -nu / e };
            }
            m[(3 + i, 3 + i)] = 2.0 * (1.0 + nu) / e;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(IsotropicMaterial::new(0.0, 0.3).is_err());
        assert!(IsotropicMaterial::new(-1.0, 0.3).is_err());
        assert!(IsotropicMaterial::new(1.0, 0.5).is_err());
        assert!(IsotropicMaterial::new(1.0, -1.0).is_err());
        assert!(IsotropicMaterial::new(1.0, f64::NAN).is_err());
        assert!(IsotropicMaterial::new(1.0, 0.499).is_ok());
    }

    #[test]
    fn elasticity_entries_at_reference_poisson() {
        let m = IsotropicMaterial::new(1.0, 0.3).unwrap();
        let e = m.elasticity_matrix();
        // 0.7 / (0.4 * 1.3)
        assert_relative_eq!(e[(0, 0)], 1.3461538461538463, epsilon = 1e-15);
        assert_relative_eq!(e[(0, 1)], 0.3 / 0.52, epsilon = 1e-15);
        assert_relative_eq!(e[(3, 3)], m.shear_modulus(), epsilon = 1e-15);
    }

    #[test]
    fn zero_poisson_elasticity_is_diagonal() {
        let m = IsotropicMaterial::new(1.0, 0.0).unwrap();
        let e = m.elasticity_matrix();
        for i in 0..3 {
            assert_eq!(e[(i, i)], 1.0);
            assert_eq!(e[(3 + i, 3 + i)], 0.5);
            for j in 0..3 {
                if i != j {
                    assert_eq!(e[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn compliance_closed_form() {
        let m = IsotropicMaterial::new(2.0, 0.25).unwrap();
        let c = m.compliance_matrix();
        assert_eq!(c[(0, 1)], -0.125);
        assert_eq!(c[(0, 0)], 0.5);
        assert_eq!(c[(4, 4)], 1.25);
    }

    #[test]
    fn compliance_inverts_elasticity() {
        for (e, nu) in [
            (1.0, 0.0),
            (1.0, 0.3),
            (210e9, 0.29),
            (7.5, -0.4),
            (3.0, 0.45),
        ] {
            let m = IsotropicMaterial::new(e, nu).unwrap();
            let prod = m.compliance_matrix() * m.elasticity_matrix();
            let id = DMatrix::<f64>::identity(VOIGT_DIM, VOIGT_DIM);
            let err = (&prod - &id).amax();
            assert!(
                err <= 1e-13,
                "C*E deviates from identity by {err:e} at E={e}, nu={nu}"
            );
        }
    }

    #[test]
    fn voigt_index_is_symmetric() {
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(voigt_index(i, j), voigt_index(j, i));
            }
        }
        assert_eq!(voigt_index(0, 1), 3);
        assert_eq!(voigt_index(1, 2), 4);
        assert_eq!(voigt_index(0, 2), 5);
    }
}
