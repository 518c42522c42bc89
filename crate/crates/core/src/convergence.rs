//! Error of the integrators against the exact solution on a refinement ladder.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::field::{initial_state, l2_norm_sq, Branch, SpinorField};
use crate::grid::SpatialGrid;
use crate::integrator::{evolve, Method};
use crate::oracle::exact_on_grid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub method: Method,
    pub dt: f64,
    pub dz: f64,
    pub l2_error: f64,
}

/// L2 distance of one component from the exact solution at the state's time.
pub fn component_error(state: &SpinorField, g: f64, branch: Branch) -> Result<f64> {
    let exact = exact_on_grid(state.grid(), state.time(), g, branch)?;
    let diff: Vec<_> = state
        .component(branch)
        .iter()
        .zip(&exact)
        .map(|(a, b)| a - b)
        .collect();
    Ok((l2_norm_sq(&diff) * state.grid().dz()).sqrt())
}

/// L2 distance of the spinor `(ψ₊|↑⟩ + ψ₋|↓⟩)/√2` from the exact spinor.
pub fn l2_error_vs_oracle(state: &SpinorField, g: f64) -> Result<f64> {
    let p = component_error(state, g, Branch::Plus)?;
    let m = component_error(state, g, Branch::Minus)?;
    Ok((0.5 * (p * p + m * m)).sqrt())
}

/// How the ladder refines space alongside time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceRefinement {
    /// Keep the base grid on every rung.
    Fixed,
    /// Double the point count whenever `dt` halves, so `dz ∝ dt`.
    WithTime,
}

impl SpaceRefinement {
    /// The spectral scheme's spatial error is negligible on the base grid; the
    /// three-point Laplacian of the implicit scheme is second order in `dz` and
    /// has to be refined with `dt` for the error to keep falling.
    pub fn for_method(method: Method) -> Self {
        match method {
            Method::Spectral => SpaceRefinement::Fixed,
            Method::Implicit => SpaceRefinement::WithTime,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Ladder {
    pub base_grid: SpatialGrid,
    pub t_final: f64,
    pub g: f64,
    pub dt_coarse: f64,
    pub rungs: usize,
}

impl Ladder {
    pub fn rung(&self, method: Method, refinement: SpaceRefinement, r: usize) -> Result<ConvergenceRow> {
        let dt = self.dt_coarse / (1u64 << r) as f64;
        let grid = match refinement {
            SpaceRefinement::Fixed => self.base_grid,
            SpaceRefinement::WithTime => self.base_grid.refined(1 << r)?,
        };
        let (state, _) = evolve(&initial_state(&grid), self.t_final, dt, self.g, method)?;
        Ok(ConvergenceRow {
            method,
            dt,
            dz: grid.dz(),
            l2_error: l2_error_vs_oracle(&state, self.g)?,
        })
    }

    /// All rungs for every method, computed in parallel, sorted by method then `dt`.
    pub fn run(&self, methods: &[Method]) -> Result<Vec<ConvergenceRow>> {
        if self.rungs == 0 {
            return Err(invalid("rungs", "must be at least 1"));
        }
        let jobs: Vec<(Method, usize)> = methods
            .iter()
            .flat_map(|&m| (0..self.rungs).map(move |r| (m, r)))
            .collect();
        let mut rows = jobs
            .par_iter()
            .map(|&(m, r)| self.rung(m, SpaceRefinement::for_method(m), r))
            .collect::<Result<Vec<_>>>()?;
        rows.sort_by(|a, b| {
            a.method
                .as_str()
                .cmp(b.method.as_str())
                .then(a.dt.total_cmp(&b.dt))
        });
        Ok(rows)
    }
}

/// Ratios `error(dt) / error(dt/2)` for consecutive rungs of one method.
pub fn successive_ratios(rows: &[ConvergenceRow], method: Method) -> Vec<f64> {
    let mut mine: Vec<&ConvergenceRow> = rows.iter().filter(|r| r.method == method).collect();
    mine.sort_by(|a, b| b.dt.total_cmp(&a.dt));
    mine.windows(2).map(|w| w[0].l2_error / w[1].l2_error).collect()
}
