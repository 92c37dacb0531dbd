//! Stiffness templates: rescaling the higher-order kernel per mode.
//!
//! The decomposition K = K_b + V H^T X H exposes twelve independent
//! higher-order stiffness channels. A template scales them without touching
//! the basic response, which keeps consistency (the constant-stress patch
//! behavior) intact by construction:
//!
//! ```text
//! K(gamma) = K_b + V H^T D X D H,    D = diag(gamma)
//! ```
//!
//! The tuning objective drives the bending energy ratios of a family of
//! probe cases to 1, i.e. minimizes J = sum (r_i - 1)^2 over the sample
//! grid of aspect ratios, Poisson ratios and bending planes.

use crate::bending::{beam_reference_energy, bending_displacements, BendingPlane};
use crate::decomposition::{Decomposition, HO_MODE_COUNT};
use crate::error::TemplateError;
use crate::geometry::BrickGeometry;
use crate::material::IsotropicMaterial;
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Per-mode scale factors of the higher-order kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateParams(pub [f64; HO_MODE_COUNT]);

impl TemplateParams {
    /// All ones: reproduces the untouched element.
    pub fn identity() -> Self {
        Self([1.0; HO_MODE_COUNT])
    }

    pub fn new(values: [f64; HO_MODE_COUNT]) -> Result<Self, TemplateError> {
        let params = Self(values);
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), TemplateError> {
        for (index, &value) in self.0.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(TemplateError::NonPositiveParameter { index, value });
            }
        }
        Ok(())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// K(gamma) for one decomposed element.
pub fn templated_stiffness(d: &Decomposition, params: &TemplateParams) -> DMatrix<f64> {
    let g = &params.0;
    let scaled = DMatrix::from_fn(HO_MODE_COUNT, HO_MODE_COUNT, |i, j| {
        g[i] * d.kernel[(i, j)] * g[j]
    });
    let ho = d.projector.transpose() * scaled * &d.projector * d.geometry.volume();
    &d.basic.matrix + ho
}

/// The probe grid the objective is evaluated on.
#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    pub aspect_ratios: Vec<f64>,
    pub poissons: Vec<f64>,
    pub planes: Vec<BendingPlane>,
    pub youngs: f64,
    pub curvature: f64,
}

impl Default for ObjectiveSpec {
    fn default() -> Self {
        Self {
            aspect_ratios: vec![1.0, 2.0, 4.0, 8.0],
            poissons: vec![0.0, 0.3],
            planes: BendingPlane::ALL.to_vec(),
            youngs: 1.0,
            curvature: 1.0,
        }
    }
}

/// One precomputed probe: everything needed to evaluate its energy ratio
/// under any template without rebuilding element matrices.
#[derive(Debug, Clone)]
pub struct ObjectiveSample {
    pub aspect_ratio: f64,
    pub poisson: f64,
    pub plane: BendingPlane,
    pub volume: f64,
    pub kernel: DMatrix<f64>,
    /// Modal amplitudes H u of the probe displacements.
    pub modal: DVector<f64>,
    pub basic_energy: f64,
    pub reference_energy: f64,
}

impl ObjectiveSample {
    /// Full-stiffness energy ratio under the given template.
    pub fn energy_ratio(&self, params: &TemplateParams) -> f64 {
        let scaled = DVector::from_fn(HO_MODE_COUNT, |i, _| params.0[i] * self.modal[i]);
        let ho = 0.5 * self.volume * (scaled.transpose() * &self.kernel * &scaled)[(0, 0)];
        (self.basic_energy + ho) / self.reference_energy
    }
}

/// Precomputed objective over the full sample grid.
#[derive(Debug, Clone)]
pub struct ObjectiveContext {
    pub samples: Vec<ObjectiveSample>,
}

impl ObjectiveContext {
    pub fn prepare(spec: &ObjectiveSpec) -> Result<Self, TemplateError> {
        let mut samples = Vec::new();
        for &poisson in &spec.poissons {
            let material = IsotropicMaterial::new(spec.youngs, poisson)?;
            for &plane in &spec.planes {
                for &aspect in &spec.aspect_ratios {
                    if !aspect.is_finite() || aspect <= 0.0 {
                        return Err(TemplateError::Bending(
                            crate::error::BendingError::InvalidAspectRatios,
                        ));
                    }
                    let geometry = BrickGeometry::unit_cube()
                        .with_edge(plane.beam_axis(), aspect)
                        .expect("validated aspect ratio");
                    let d = Decomposition::compute(&geometry, &material)
                        .map_err(crate::error::BendingError::from)?;
                    let u = bending_displacements(&geometry, plane, spec.curvature, poisson);
                    let basic_energy = 0.5 * (u.transpose() * &d.basic.matrix * &u)[(0, 0)];
                    let reference_energy =
                        beam_reference_energy(&geometry, &material, plane, spec.curvature);
                    samples.push(ObjectiveSample {
                        aspect_ratio: aspect,
                        poisson,
                        plane,
                        volume: geometry.volume(),
                        kernel: d.kernel.clone(),
                        modal: &d.projector * u,
                        basic_energy,
                        reference_energy,
                    });
                }
            }
        }
        if samples.is_empty() {
            return Err(TemplateError::EmptySamples);
        }
        Ok(Self { samples })
    }
}

/// J(gamma) = sum over samples of (r - 1)^2.
pub fn ratio_objective(ctx: &ObjectiveContext, params: &TemplateParams) -> f64 {
    ctx.samples
        .iter()
        .map(|s| {
            let r = s.energy_ratio(params);
            (r - 1.0) * (r - 1.0)
        })
        .sum()
}

/// Result of one optimizer run.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizationReport {
    pub initial_parameters: Vec<f64>,
    pub final_parameters: Vec<f64>,
    pub objective_initial: f64,
    pub objective_final: f64,
    /// Accepted objective values, starting with the initial one.
    pub objective_trace: Vec<f64>,
    pub evaluations: usize,
    pub samples: usize,
    pub seed: u64,
    pub budget: usize,
}

/// Step size the coordinate search starts from, in log-parameter space.
pub const INITIAL_STEP: f64 = 0.25;

/// Step size below which the search stops.
pub const MIN_STEP: f64 = 1e-6;

/// Derivative-free coordinate search over log parameters.
///
/// Each sweep visits the twelve coordinates in a freshly shuffled order and
/// accepts the first improving move of +-step per coordinate; a sweep with
/// no improvement halves the step. Stops below the minimal step or when the
/// evaluation budget is spent. Fully deterministic for a fixed seed.
pub fn optimize(
    ctx: &ObjectiveContext,
    initial: &TemplateParams,
    budget: usize,
    seed: u64,
) -> Result<OptimizationReport, TemplateError> {
    initial.validate()?;
    if budget == 0 {
        return Err(TemplateError::ZeroBudget);
    }
    let params_of = |z: &[f64; HO_MODE_COUNT]| TemplateParams(core::array::from_fn(|i| z[i].exp()));
    let mut z: [f64; HO_MODE_COUNT] = core::array::from_fn(|i| initial.0[i].ln());
    let mut evaluations = 0usize;
    let eval = |z: &[f64; HO_MODE_COUNT], evaluations: &mut usize| {
        *evaluations += 1;
        ratio_objective(ctx, &params_of(z))
    };
    let mut best = eval(&z, &mut evaluations);
    let objective_initial = best;
    let mut trace = vec![best];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..HO_MODE_COUNT).collect();
    let mut step = INITIAL_STEP;
    'search: while step >= MIN_STEP {
        order.shuffle(&mut rng);
        let mut improved = false;
        for &i in &order {
            for direction in [1.0, -1.0] {
                if evaluations >= budget {
                    break 'search;
                }
                let mut candidate = z;
                candidate[i] += direction * step;
                let value = eval(&candidate, &mut evaluations);
                if value < best {
                    z = candidate;
                    best = value;
                    trace.push(value);
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let final_params = params_of(&z);
    Ok(OptimizationReport {
        initial_parameters: initial.0.to_vec(),
        final_parameters: final_params.0.to_vec(),
        objective_initial,
        objective_final: best,
        objective_trace: trace,
        evaluations,
        samples: ctx.samples.len(),
        seed,
        budget,
    })
}
