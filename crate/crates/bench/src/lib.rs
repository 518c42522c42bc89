//! Shared setup for the integrator benchmarks: the error-versus-cost table
//! that motivates choosing one scheme over the other.

use std::time::{Duration, Instant};

use twisted_spin::convergence::l2_error_vs_oracle;
use twisted_spin::{evolve, initial_state, make_grid, Method, SpatialGrid};

pub const GRADIENT: f64 = 3.0;

pub fn default_grid() -> SpatialGrid {
    make_grid(-16.0, 16.0, 2048).expect("valid grid")
}

#[derive(Debug, Clone, Copy)]
pub struct CostPoint {
    pub method: Method,
    pub n_points: usize,
    pub dt: f64,
    pub l2_error: f64,
    pub wall_time: Duration,
}

/// Evolves to `t = 1` for each `(method, n_points, dt)` and records error and time.
pub fn error_vs_cost(cases: &[(Method, usize, f64)]) -> Vec<CostPoint> {
    cases
        .iter()
        .map(|&(method, n_points, dt)| {
            let grid = make_grid(-16.0, 16.0, n_points).expect("valid grid");
            let start = Instant::now();
            let (state, _) = evolve(&initial_state(&grid), 1.0, dt, GRADIENT, method).expect("evolution");
            let wall_time = start.elapsed();
            CostPoint {
                method,
                n_points,
                dt,
                l2_error: l2_error_vs_oracle(&state, GRADIENT).expect("oracle"),
                wall_time,
            }
        })
        .collect()
}

pub fn format_table(points: &[CostPoint]) -> String {
    let mut out = String::from("method     n_points  dt        l2_error    wall_ms\n");
    for p in points {
        out.push_str(&format!(
            "{:<10} {:>8}  {:<8.1e}  {:<10.3e}  {:>8.2}\n",
            p.method,
            p.n_points,
            p.dt,
            p.l2_error,
            p.wall_time.as_secs_f64() * 1e3
        ));
    }
    out
}
