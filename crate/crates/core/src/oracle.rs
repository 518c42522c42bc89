//! Closed-form solution of the component equations for the Gaussian start.
//!
//! A constant force `F` is removed by the accelerated-frame (Avron–Herbst)
//! transformation
//!
//! ```text
//! ψ(z, t) = exp(i (F t z - F² t³ / 6)) φ(z - F t² / 2, t)
//! ```
//!
//! where `φ` is the free evolution of `exp(-z²)/(π/2)^{1/4}`, known exactly
//! through its complex width `1 + 2 i t`. The plus component feels `F = g`; the
//! minus component is its mirror image, `ψ₋(z, t) = ψ₊(-z, t)`.
//!
//! Nothing here goes through the integrators. The form is certified by a
//! high-order finite-difference residual of the PDE, see [`residual_certificate`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::field::Branch;
use crate::grid::SpatialGrid;
use crate::texture::{bloch_vector, Vec3};

/// Density variance of the initial Gaussian, `|exp(-z²)|² = exp(-z²/(2·¼))`.
pub const SIGMA0_SQ: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub g: f64,
    pub sigma0_sq: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            g: 3.0,
            sigma0_sq: SIGMA0_SQ,
        }
    }
}

impl OracleParams {
    /// Mean position of the plus component, `g t² / 2`.
    pub fn drift(&self, t: f64) -> f64 {
        0.5 * self.g * t * t
    }

    /// Density variance `σ₀² (1 + (t / 2σ₀²)²)`.
    pub fn variance(&self, t: f64) -> f64 {
        let r = t / (2.0 * self.sigma0_sq);
        self.sigma0_sq * (1.0 + r * r)
    }

    /// Quadratic phase coefficient of the free packet: `arg φ(y, t) = chirp·y² + const`.
    pub fn chirp(&self, t: f64) -> f64 {
        let a = 1.0 / (4.0 * self.sigma0_sq);
        // -a y² / (1 + 2iat) has imaginary part 2a²t y² / (1 + 4a²t²)
        2.0 * a * a * t / (1.0 + 4.0 * a * a * t * t)
    }

    /// Slope of the relative phase `arg ψ₋ - arg ψ₊` in z: `-2gt + 4·chirp·drift`.
    pub fn twist_rate(&self, t: f64) -> f64 {
        -2.0 * self.g * t + 4.0 * self.chirp(t) * self.drift(t)
    }
}

fn free_gaussian(y: f64, t: f64) -> Complex64 {
    let width = Complex64::new(1.0, 2.0 * t);
    (2.0 / PI).powf(0.25) / width.sqrt() * (-(y * y) / width).exp()
}

/// Plus branch for any real `t`, including negative times (used by the
/// residual stencils at `t = 0`).
fn plus_branch(z: f64, t: f64, g: f64) -> Complex64 {
    let phase = g * t * z - g * g * t * t * t / 6.0;
    Complex64::from_polar(1.0, phase) * free_gaussian(z - 0.5 * g * t * t, t)
}

fn branch_value(z: f64, t: f64, g: f64, branch: Branch) -> Complex64 {
    match branch {
        Branch::Plus => plus_branch(z, t, g),
        Branch::Minus => plus_branch(-z, t, g),
    }
}

pub fn exact_component(z: f64, t: f64, g: f64, branch: Branch) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(invalid("t", format!("{t} must be non-negative")));
    }
    Ok(branch_value(z, t, g, branch))
}

/// Exact component sampled on every grid point.
pub fn exact_on_grid(grid: &SpatialGrid, t: f64, g: f64, branch: Branch) -> Result<Vec<Complex64>> {
    grid.points().map(|z| exact_component(z, t, g, branch)).collect()
}

/// Spin direction of the exact solution at `(z, t)`.
pub fn exact_bloch(z: f64, t: f64, g: f64) -> Result<Vec3> {
    let up = exact_component(z, t, g, Branch::Plus)?;
    let down = exact_component(z, t, g, Branch::Minus)?;
    bloch_vector(up, down)
}

// Eighth-order central stencils, offsets -4..=4.
const D1: [f64; 9] = [
    1.0 / 280.0,
    -4.0 / 105.0,
    1.0 / 5.0,
    -4.0 / 5.0,
    0.0,
    4.0 / 5.0,
    -1.0 / 5.0,
    4.0 / 105.0,
    -1.0 / 280.0,
];
const D2: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -1.0 / 5.0,
    8.0 / 5.0,
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];

/// Residual `i ψ_t + ½ ψ_zz ± g z ψ` at one point relative to `|ψ|`, with
/// derivatives from eighth-order central differences of step `hz`, `ht`.
pub fn relative_residual(z: f64, t: f64, g: f64, branch: Branch, hz: f64, ht: f64) -> f64 {
    let f = |z: f64, t: f64| branch_value(z, t, g, branch);
    let mut dt = Complex64::new(0.0, 0.0);
    let mut dzz = Complex64::new(0.0, 0.0);
    for (i, (c1, c2)) in D1.iter().zip(D2.iter()).enumerate() {
        let off = i as f64 - 4.0;
        if *c1 != 0.0 {
            dt += *c1 * f(z, t + off * ht);
        }
        dzz += *c2 * f(z + off * hz, t);
    }
    let dt = dt / ht;
    let dzz = dzz / (hz * hz);
    let psi = f(z, t);
    let residual = Complex64::i() * dt + 0.5 * dzz - branch.potential(g, z) * psi;
    residual.norm() / psi.norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualCertificate {
    pub max_relative_residual: f64,
    pub worst_z: f64,
    pub worst_t: f64,
    pub samples: usize,
}

/// Maximum relative PDE residual over an `nz × nt` lattice covering
/// `[-z_extent, z_extent] × [0, t_max]`, both branches.
pub fn residual_certificate(g: f64, z_extent: f64, t_max: f64, nz: usize, nt: usize) -> ResidualCertificate {
    const HZ: f64 = 5e-3;
    const HT: f64 = 1e-4;
    let points: Vec<(f64, f64)> = (0..nt)
        .flat_map(|i| {
            let t = t_max * i as f64 / (nt - 1) as f64;
            (0..nz).map(move |j| (-z_extent + 2.0 * z_extent * j as f64 / (nz - 1) as f64, t))
        })
        .collect();
    let (max, z, t) = points
        .par_iter()
        .map(|&(z, t)| {
            let r = relative_residual(z, t, g, Branch::Plus, HZ, HT)
                .max(relative_residual(z, t, g, Branch::Minus, HZ, HT));
            (r, z, t)
        })
        .reduce(
            || (0.0, 0.0, 0.0),
            |a, b| if b.0 > a.0 { b } else { a },
        );
    ResidualCertificate {
        max_relative_residual: max,
        worst_z: z,
        worst_t: t,
        samples: points.len() * 2,
    }
}
