//! Mesh refinement driver for the forward solver.

use super::{discretize, scattered_far, CellGrid, InducedCurrent, LippmannSchwinger, ShapeSpec};
use crate::error::{DsmError, Result};
use crate::green_kernel::{Direction, WaveContext};
use crate::measurement::far_angles;

/// Start at `initial_h`, halve the cell width while the far field on the
/// probe directions still changes by more than `tolerance` (relative, max
/// norm), and stop before a level would exceed `max_cells`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefinementPolicy {
    pub initial_h: f64,
    pub tolerance: f64,
    pub max_cells: usize,
    pub probe_count: usize,
}

impl RefinementPolicy {
    /// `h = λ/50`, 0.1% tolerance, at most 2000 cells.
    pub fn standard(ctx: &WaveContext) -> Self {
        Self {
            initial_h: ctx.lambda() / 50.0,
            tolerance: 1e-3,
            max_cells: 2000,
            probe_count: 32,
        }
    }

    /// A single solve at cell width `h`.
    pub fn fixed(h: f64) -> Self {
        Self {
            initial_h: h,
            tolerance: f64::INFINITY,
            max_cells: usize::MAX,
            probe_count: 32,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ForwardSolution {
    pub grid: CellGrid,
    pub incidents: Vec<Direction>,
    pub currents: Vec<InducedCurrent>,
    /// Whether the last refinement step met the tolerance.
    pub converged: bool,
    /// Relative far-field change of the last refinement step.
    pub last_change: Option<f64>,
    pub pivot_ratio: f64,
}

struct Level {
    grid: CellGrid,
    currents: Vec<InducedCurrent>,
    far: Vec<num_complex::Complex64>,
    pivot_ratio: f64,
}

fn solve_level(
    ctx: &WaveContext,
    shapes: &[ShapeSpec],
    incidents: &[Direction],
    probes: &[Direction],
    h: f64,
) -> Result<Level> {
    let grid = discretize(ctx, shapes, h)?;
    let ls = LippmannSchwinger::new(ctx, &grid)?;
    let currents = incidents.iter().map(|d| ls.solve(d)).collect::<Result<Vec<_>>>()?;
    let mut far = Vec::with_capacity(probes.len() * currents.len());
    for cur in &currents {
        for p in probes {
            far.push(scattered_far(ctx, &grid, cur, p)?);
        }
    }
    Ok(Level {
        grid,
        currents,
        far,
        pivot_ratio: ls.pivot_ratio(),
    })
}

fn relative_change(old: &[num_complex::Complex64], new: &[num_complex::Complex64]) -> f64 {
    let scale = new.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let diff = old.iter().zip(new).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if scale > 0.0 {
        diff / scale
    } else {
        0.0
    }
}

/// Solves the forward problem for every incident direction, refining the
/// discretization according to `policy`.
pub fn solve_with_refinement(
    ctx: &WaveContext,
    shapes: &[ShapeSpec],
    incidents: &[Direction],
    policy: &RefinementPolicy,
) -> Result<ForwardSolution> {
    if incidents.is_empty() {
        return Err(DsmError::InvalidArgument("no incident directions".into()));
    }
    let probes = far_angles(policy.probe_count.max(1))?;
    let mut h = policy.initial_h;
    let mut level = solve_level(ctx, shapes, incidents, &probes, h)?;
    let mut last_change = None;
    let mut converged = policy.tolerance.is_infinite();
    while !converged {
        let next_h = 0.5 * h;
        // lattice cells scale with the area, so a halving roughly
        // quadruples the count
        if level.grid.len() * 4 > policy.max_cells {
            break;
        }
        let next = solve_level(ctx, shapes, incidents, &probes, next_h)?;
        if next.grid.len() > policy.max_cells {
            break;
        }
        let change = relative_change(&level.far, &next.far);
        last_change = Some(change);
        converged = change < policy.tolerance;
        level = next;
        h = next_h;
    }
    Ok(ForwardSolution {
        grid: level.grid,
        incidents: incidents.to_vec(),
        currents: level.currents,
        converged,
        last_change,
        pivot_ratio: level.pivot_ratio,
    })
}
