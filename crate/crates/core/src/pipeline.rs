//! End-to-end helpers: synthesize data for a scatterer, perturb it, image it.

use crate::error::{DsmError, Result};
use crate::forward_model::{
    far_field_samples, near_field_samples, solve_with_refinement, ForwardSolution, RefinementPolicy, ShapeSpec,
};
use crate::green_kernel::{Direction, WaveContext};
use crate::indicator::{multi_incident_indicator, IndicatorGrid, SamplingGrid};
use crate::measurement::{add_noise, far_angles, near_circle_geometry, FieldSamples, NoiseSpec, SampleKind};

/// Measurement protocol and forward discretization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthesisParams {
    pub policy: RefinementPolicy,
    pub near_radius: f64,
    pub near_count: usize,
    pub far_count: usize,
}

impl SynthesisParams {
    /// 50 points on a circle of radius 4λ, 50 far-field directions, and the
    /// standard refinement policy.
    pub fn standard(ctx: &WaveContext) -> Self {
        Self {
            policy: RefinementPolicy::standard(ctx),
            near_radius: 4.0 * ctx.lambda(),
            near_count: 50,
            far_count: 50,
        }
    }
}

/// Clean near- and far-field data for one incident wave.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidentData {
    pub incident: Direction,
    pub near: FieldSamples,
    pub far: FieldSamples,
}

impl IncidentData {
    pub fn samples(&self, kind: SampleKind) -> &FieldSamples {
        match kind {
            SampleKind::Near => &self.near,
            SampleKind::Far => &self.far,
        }
    }
}

pub struct Synthesis {
    pub solution: ForwardSolution,
    pub data: Vec<IncidentData>,
}

/// Solves the forward problem once per incident direction and samples the
/// scattered field on both measurement geometries.
pub fn synthesize(
    ctx: &WaveContext,
    shapes: &[ShapeSpec],
    incidents: &[Direction],
    params: &SynthesisParams,
) -> Result<Synthesis> {
    let solution = solve_with_refinement(ctx, shapes, incidents, &params.policy)?;
    let points = near_circle_geometry(ctx, params.near_radius, params.near_count)?;
    let dirs = far_angles(params.far_count)?;
    let data = incidents
        .iter()
        .zip(&solution.currents)
        .map(|(d, cur)| {
            Ok(IncidentData {
                incident: *d,
                near: near_field_samples(ctx, &solution.grid, cur, params.near_radius, &points, *d)?,
                far: far_field_samples(ctx, &solution.grid, cur, &dirs, *d)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Synthesis { solution, data })
}

/// Seed used for the `index`-th incident direction, so that repeated
/// incidents under one user seed receive independent noise.
pub fn incident_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

/// Noisy copies of one field type for every incident.
pub fn noisy_samples(data: &[IncidentData], kind: SampleKind, epsilon: f64, seed: u64) -> Result<Vec<FieldSamples>> {
    data.iter()
        .enumerate()
        .map(|(l, d)| add_noise(d.samples(kind), &NoiseSpec::new(epsilon, incident_seed(seed, l))?))
        .collect()
}

/// Normalized indicator from one dataset per incident, max-combined.
pub fn reconstruct(ctx: &WaveContext, datasets: &[FieldSamples], grid: &SamplingGrid) -> Result<IndicatorGrid> {
    if datasets.is_empty() {
        return Err(DsmError::InvalidArgument("no datasets to image".into()));
    }
    multi_incident_indicator(ctx, datasets, grid)
}
