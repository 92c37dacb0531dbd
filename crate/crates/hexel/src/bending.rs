//! Pure-bending benchmark: the element against Euler beam theory.
//!
//! The probe displaces the nodes by the plane-bending field
//!
//! ```text
//! u_p = kappa p q
//! u_q = -kappa (p^2 + nu q^2) / 2
//! u_r = 0
//! ```
//!
//! where p runs along the beam, q across the bent fibers and kappa is the
//! imposed curvature. The matching beam stores
//!
//! ```text
//! U = E I kappa^2 L / 2,    I = t d^3 / 12
//! ```
//!
//! with L the beam length, d the thickness along q and t the width. The
//! reported quality measure is the energy ratio r = U_element / U_beam.
//!
//! At the corners of the brick the quadratic terms of the probe take one
//! common value per sign pattern, so the nodal probe collapses onto a single
//! bending mode of the higher-order projector plus a rigid shift. Its basic
//! energy is therefore exactly zero and the full and higher-order ratios
//! coincide.

use crate::decomposition::Decomposition;
use crate::error::BendingError;
use crate::geometry::{BrickGeometry, DOF_COUNT, NODE_COUNT};
use crate::material::IsotropicMaterial;
use nalgebra::DVector;
use std::fmt;
use std::str::FromStr;

/// Bending plane: first letter is the beam axis, second the deflection axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BendingPlane {
    Xy,
    Yx,
    Xz,
    Zx,
    Yz,
    Zy,
}

impl BendingPlane {
    pub const ALL: [Self; 6] = [Self::Xy, Self::Yx, Self::Xz, Self::Zx, Self::Yz, Self::Zy];

    /// Axis the beam spans (the lengthwise direction).
    pub fn beam_axis(self) -> usize {
        match self {
            Self::Xy | Self::Xz => 0,
            Self::Yx | Self::Yz => 1,
            Self::Zx | Self::Zy => 2,
        }
    }

    /// Axis the beam deflects along (across the bent fibers).
    pub fn deflection_axis(self) -> usize {
        match self {
            Self::Yx | Self::Zx => 0,
            Self::Xy | Self::Zy => 1,
            Self::Xz | Self::Yz => 2,
        }
    }

    /// The remaining axis (the beam width).
    pub fn width_axis(self) -> usize {
        3 - self.beam_axis() - self.deflection_axis()
    }

    pub fn token(self) -> &'static str {
        match self {
            Self::Xy => "xy",
            Self::Yx => "yx",
            Self::Xz => "xz",
            Self::Zx => "zx",
            Self::Yz => "yz",
            Self::Zy => "zy",
        }
    }
}

impl fmt::Display for BendingPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for BendingPlane {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown bending plane {s:?}, expected one of xy yx xz zx yz zy")
            })
    }
}

/// Which stiffness the energy ratio is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StiffnessKind {
    /// Element energy over beam energy.
    Full,
    /// Higher-order energy over beam energy net of the basic part.
    HigherOrder,
}

impl StiffnessKind {
    pub const ALL: [Self; 2] = [Self::Full, Self::HigherOrder];

    pub fn token(self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::HigherOrder => "higher_order",
        }
    }
}

impl fmt::Display for StiffnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for StiffnessKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown stiffness kind {s:?}, expected full or higher_order"))
    }
}

/// Nodal displacements of the bending probe.
pub fn bending_displacements(
    g: &BrickGeometry,
    plane: BendingPlane,
    curvature: f64,
    poisson_in_field: f64,
) -> DVector<f64> {
    let p_axis = plane.beam_axis();
    let q_axis = plane.deflection_axis();
    let mut u = DVector::zeros(DOF_COUNT);
    for node in 0..NODE_COUNT {
        let x = g.node_coords(node);
        let (p, q) = (x[p_axis], x[q_axis]);
        u[3 * node + p_axis] = curvature * p * q;
        u[3 * node + q_axis] = -0.5 * curvature * (p * p + poisson_in_field * q * q);
    }
    u
}

/// Beam energy E I kappa^2 L / 2 of the matching cross-section.
pub fn beam_reference_energy(
    g: &BrickGeometry,
    m: &IsotropicMaterial,
    plane: BendingPlane,
    curvature: f64,
) -> f64 {
    let length = g.edge(plane.beam_axis());
    let depth = g.edge(plane.deflection_axis());
    let width = g.edge(plane.width_axis());
    let inertia = width * depth.powi(3) / 12.0;
    0.5 * m.youngs() * inertia * curvature * curvature * length
}

/// One evaluated bending probe.
#[derive(Debug, Clone)]
pub struct BendingCase {
    pub plane: BendingPlane,
    pub curvature: f64,
    pub poisson_in_field: f64,
    pub displacements: DVector<f64>,
    pub reference_energy: f64,
    pub basic_energy: f64,
    pub higher_order_energy: f64,
    pub element_energy: f64,
}

impl BendingCase {
    pub fn compute(
        d: &Decomposition,
        plane: BendingPlane,
        curvature: f64,
    ) -> Result<Self, BendingError> {
        if !curvature.is_finite() || curvature == 0.0 {
            return Err(BendingError::ZeroCurvature);
        }
        let nu = d.material.poisson();
        let u = bending_displacements(&d.geometry, plane, curvature, nu);
        let energy = |k: &nalgebra::DMatrix<f64>| 0.5 * (u.transpose() * k * &u)[(0, 0)];
        Ok(Self {
            plane,
            curvature,
            poisson_in_field: nu,
            reference_energy: beam_reference_energy(&d.geometry, &d.material, plane, curvature),
            basic_energy: energy(&d.basic.matrix),
            higher_order_energy: energy(&d.higher_order),
            element_energy: energy(&d.element.physical_stiffness),
            displacements: u,
        })
    }

    /// Energy ratio for the requested stiffness kind.
    pub fn energy_ratio(&self, kind: StiffnessKind) -> Result<f64, BendingError> {
        let (num, den) = match kind {
            StiffnessKind::Full => (self.element_energy, self.reference_energy),
            StiffnessKind::HigherOrder => (
                self.higher_order_energy,
                self.reference_energy - self.basic_energy,
            ),
        };
        let ratio = num / den;
        if ratio.is_finite() {
            Ok(ratio)
        } else {
            Err(BendingError::NonFiniteRatio {
                element_energy: num,
                reference_energy: den,
            })
        }
    }
}

/// One row of an aspect ratio sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub aspect_ratio: f64,
    pub poisson: f64,
    pub stiffness_kind: StiffnessKind,
    pub plane: BendingPlane,
    pub energy_ratio: f64,
}

/// Energy ratios over a family of beam slendernesses.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Sweeps the beam aspect ratio: the beam axis is stretched to
/// `aspect * thickness` over a unit-thickness cross-section.
pub fn aspect_sweep(
    m: &IsotropicMaterial,
    plane: BendingPlane,
    kind: StiffnessKind,
    aspects: &[f64],
    curvature: f64,
) -> Result<SweepTable, BendingError> {
    let increasing = aspects.windows(2).all(|w| w[0] < w[1]);
    if aspects.is_empty() || !increasing || !aspects.iter().all(|r| r.is_finite() && *r > 0.0) {
        return Err(BendingError::InvalidAspectRatios);
    }
    let mut rows = Vec::with_capacity(aspects.len());
    for &aspect in aspects {
        let g = BrickGeometry::unit_cube()
            .with_edge(plane.beam_axis(), aspect)
            .expect("validated aspect ratio");
        let d = Decomposition::compute(&g, m)?;
        let case = BendingCase::compute(&d, plane, curvature)?;
        rows.push(SweepRow {
            aspect_ratio: aspect,
            poisson: m.poisson(),
            stiffness_kind: kind,
            plane,
            energy_ratio: case.energy_ratio(kind)?,
        });
    }
    Ok(SweepTable { rows })
}

/// Least-squares coefficient alpha of the model r = 1 + alpha aspect^2,
/// fitted through the origin in the shifted variable r - 1.
pub fn fitted_aspect_coefficient(samples: &[(f64, f64)]) -> f64 {
    let num: f64 = samples.iter().map(|(rho, r)| (r - 1.0) * rho * rho).sum();
    let den: f64 = samples.iter().map(|(rho, _)| rho.powi(4)).sum();
    num / den
}
