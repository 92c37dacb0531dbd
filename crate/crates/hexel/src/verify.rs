//! Self-check of the element invariants for one geometry/material pair.
//!
//! Runs every structural identity the construction promises and reports one
//! pass/fail line per check. All tolerances live here as named constants.

use crate::decomposition::{numeric_rank, Decomposition};
use crate::error::DecompositionError;
use crate::geometry::{BrickGeometry, NaturalPoint};
use crate::material::{IsotropicMaterial, VOIGT_DIM};
use crate::stress::{
    divergence_residual, flexibility_matrix_gauss, StressAmplitudes, STRESS_PARAM_COUNT,
};
use nalgebra::DMatrix;
use std::fmt;

/// Relative tolerance for orthogonality and nullspace responses.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Relative tolerance for the flexibility inverse.
pub const INVERSE_TOL: f64 = 1e-12;

/// Relative tolerance for the lumping/strain-mode pairing.
pub const PAIRING_TOL: f64 = 1e-13;

/// Relative tolerance between the 2-point and 3-point quadratures.
pub const QUADRATURE_TOL: f64 = 1e-13;

/// Relative bound on the most negative stiffness eigenvalue.
pub const SEMIDEFINITE_TOL: f64 = 1e-12;

/// Relative tolerance for the kernel reconstruction residual.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// One verification line.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub label: String,
    pub detail: String,
    pub pass: bool,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {}",
            self.label,
            self.detail,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// All verification lines for one element.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<CheckLine>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        if self.all_pass() {
            write!(f, "all {} invariants hold", self.checks.len())
        } else {
            write!(
                f,
                "{} of {} invariants failed",
                self.failures(),
                self.checks.len()
            )
        }
    }
}

/// Zero prints as a plain 0 so exact cancellations are visible as such.
fn amount(v: f64) -> String {
    if v == 0.0 {
        "0".to_owned()
    } else {
        format!("{v:.3e}")
    }
}

/// Runs every invariant check on one element.
pub fn run_invariants(
    g: &BrickGeometry,
    m: &IsotropicMaterial,
) -> Result<VerificationReport, DecompositionError> {
    let d = Decomposition::compute(g, m)?;
    let k = &d.element.physical_stiffness;
    let k_scale = k.amax();
    let mut checks = Vec::new();

    for (matrix, name, expected) in [
        (k, "K", STRESS_PARAM_COUNT),
        (&d.basic.matrix, "Kb", VOIGT_DIM),
        (&d.higher_order, "Kh", 12),
    ] {
        let report = numeric_rank(matrix, name, expected);
        checks.push(CheckLine {
            label: format!("rank({name})"),
            detail: format!("= {} expected {}", report.rank, report.expected),
            pass: report.pass(),
        });
    }

    let asym = (k - k.transpose()).amax();
    checks.push(CheckLine {
        label: "K symmetry".to_owned(),
        detail: format!("max |K - K^T| = {}", amount(asym)),
        pass: asym <= ORTHOGONALITY_TOL * k_scale,
    });

    let eigen = k.clone().symmetric_eigen();
    let min_eig = eigen.eigenvalues.min();
    checks.push(CheckLine {
        label: "K positive semidefinite".to_owned(),
        detail: format!("min eigenvalue = {}", amount(min_eig)),
        pass: min_eig >= -SEMIDEFINITE_TOL * k_scale,
    });

    let rigid = d.basic_mode_matrix.columns(0, 6);
    let rigid_response = (k * rigid).amax();
    checks.push(CheckLine {
        label: "K rigid response".to_owned(),
        detail: format!("max |K r| = {}", amount(rigid_response)),
        pass: rigid_response <= ORTHOGONALITY_TOL * k_scale,
    });

    let id = DMatrix::<f64>::identity(STRESS_PARAM_COUNT, STRESS_PARAM_COUNT);
    let inverse_residual = (&d.element.generalized_stiffness * &d.element.flexibility - id).amax();
    checks.push(CheckLine {
        label: "S F inverse".to_owned(),
        detail: format!("max |S F - I| = {}", amount(inverse_residual)),
        pass: inverse_residual <= INVERSE_TOL,
    });

    let patch = (&d.higher_order * &d.basic_mode_matrix).amax();
    checks.push(CheckLine {
        label: "Kh patch response".to_owned(),
        detail: format!("max |Kh G| = {}", amount(patch)),
        pass: patch <= ORTHOGONALITY_TOL * k_scale,
    });

    let hh_grc = (&d.projector * &d.basic_mode_matrix).amax();
    checks.push(CheckLine {
        label: "HhGrc".to_owned(),
        detail: format!("max |entry| = {}", amount(hh_grc)),
        pass: hh_grc <= ORTHOGONALITY_TOL * d.projector.amax(),
    });

    let recon_rel = d.reconstruction_residual / d.higher_order.amax().max(f64::MIN_POSITIVE);
    checks.push(CheckLine {
        label: "kernel reconstruction".to_owned(),
        detail: format!("relative residual = {}", amount(recon_rel)),
        pass: recon_rel <= RECONSTRUCTION_TOL,
    });

    let strain = d.basic_mode_matrix.columns(6, VOIGT_DIM);
    let pairing = d.lumping.transpose() * strain;
    let v = g.volume();
    let pairing_residual = (&pairing - DMatrix::<f64>::identity(VOIGT_DIM, VOIGT_DIM) * v).amax();
    checks.push(CheckLine {
        label: "lumping pairing".to_owned(),
        detail: format!("max |L^T Gc - V I| = {}", amount(pairing_residual)),
        pass: pairing_residual <= PAIRING_TOL * v,
    });

    let f3 = flexibility_matrix_gauss(g, m, 3);
    let quad = (&d.element.flexibility - &f3).amax();
    checks.push(CheckLine {
        label: "quadrature".to_owned(),
        detail: format!("max |F2 - F3| = {}", amount(quad)),
        pass: quad <= QUADRATURE_TOL * f3.amax(),
    });

    let amps = StressAmplitudes(core::array::from_fn(|i| 1.0 + 0.5 * i as f64));
    let mut worst_div = 0.0f64;
    for p in [
        NaturalPoint::center(),
        NaturalPoint::new(0.5, -0.5, 0.25).unwrap(),
        NaturalPoint::corner(6),
    ] {
        let r = divergence_residual(&amps, p, g);
        worst_div = worst_div.max(r.iter().fold(0.0f64, |acc, v| acc.max(v.abs())));
    }
    checks.push(CheckLine {
        label: "stress divergence".to_owned(),
        detail: format!("max residual = {}", amount(worst_div)),
        pass: worst_div == 0.0,
    });

    Ok(VerificationReport { checks })
}
