use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::spectral_derivative;
use crate::grid::SpatialGrid;

/// Spin component of the spinor. `Plus` is the coefficient of |↑⟩ and feels
/// the potential `-g z`; `Minus` feels `+g z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    /// Sign of the force on this component: `+1` for `Plus`, `-1` for `Minus`.
    pub fn force_sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    /// Potential energy `∓ g z` at `z`.
    pub fn potential(self, g: f64, z: f64) -> f64 {
        -self.force_sign() * g * z
    }
}

/// Pair of complex components sampled on a grid at one instant.
///
/// Each component is normalized to one on its own; the physical spinor is
/// `(ψ₊ |↑⟩ + ψ₋ |↓⟩) / √2`, with the `1/√2` never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    grid: SpatialGrid,
    psi_plus: Vec<Complex64>,
    psi_minus: Vec<Complex64>,
    time: f64,
}

impl SpinorField {
    pub fn new(
        grid: SpatialGrid,
        psi_plus: Vec<Complex64>,
        psi_minus: Vec<Complex64>,
        time: f64,
    ) -> Result<Self> {
        if psi_plus.len() != grid.len() || psi_minus.len() != grid.len() {
            return Err(Error::CorruptState(format!(
                "component lengths ({}, {}) do not match grid size {}",
                psi_plus.len(),
                psi_minus.len(),
                grid.len()
            )));
        }
        Ok(SpinorField {
            grid,
            psi_plus,
            psi_minus,
            time,
        })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn psi_plus(&self) -> &[Complex64] {
        &self.psi_plus
    }

    pub fn psi_minus(&self) -> &[Complex64] {
        &self.psi_minus
    }

    pub fn component(&self, branch: Branch) -> &[Complex64] {
        match branch {
            Branch::Plus => &self.psi_plus,
            Branch::Minus => &self.psi_minus,
        }
    }

    pub(crate) fn into_parts(self) -> (SpatialGrid, Vec<Complex64>, Vec<Complex64>, f64) {
        (self.grid, self.psi_plus, self.psi_minus, self.time)
    }

    /// `∫|ψ|² dz` for one component.
    pub fn norm(&self, branch: Branch) -> f64 {
        l2_norm_sq(self.component(branch)) * self.grid.dz()
    }

    pub fn is_finite(&self) -> bool {
        self.psi_plus
            .iter()
            .chain(&self.psi_minus)
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest deviation `|ψ₋(z) - ψ₊(-z)|` over grid points with an on-grid mirror.
    pub fn mirror_deviation(&self) -> f64 {
        (1..self.grid.len())
            .map(|k| {
                let j = self.grid.mirror_index(k).expect("k > 0");
                (self.psi_minus[k] - self.psi_plus[j]).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn l2_norm_sq(psi: &[Complex64]) -> f64 {
    psi.iter().map(|c| c.norm_sqr()).sum()
}

/// Normalized Gaussian `exp(-z²) / (π/2)^{1/4}` shared by both components at `t = 0`.
pub fn initial_amplitude(z: f64) -> f64 {
    (-z * z).exp() / (PI / 2.0).powf(0.25)
}

/// Both components set to the normalized Gaussian `exp(-z²)/(π/2)^{1/4}`; spin along +1.
pub fn initial_state(grid: &SpatialGrid) -> SpinorField {
    let psi: Vec<Complex64> = grid
        .points()
        .map(|z| Complex64::new(initial_amplitude(z), 0.0))
        .collect();
    SpinorField {
        grid: *grid,
        psi_plus: psi.clone(),
        psi_minus: psi,
        time: 0.0,
    }
}

/// Position, momentum, energy and norm of each component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub mean_z_plus: f64,
    pub mean_z_minus: f64,
    pub mean_p_plus: f64,
    pub mean_p_minus: f64,
    pub energy_plus: f64,
    pub energy_minus: f64,
    pub norm_plus: f64,
    pub norm_minus: f64,
}

#[derive(Debug, Clone, Copy)]
struct ComponentMoments {
    mean_z: f64,
    mean_p: f64,
    energy: f64,
    norm: f64,
}

fn moments(grid: &SpatialGrid, psi: &[Complex64], branch: Branch, g: f64) -> ComponentMoments {
    let dz = grid.dz();
    let dpsi = spectral_derivative(grid, psi);
    let mut norm = 0.0;
    let mut mean_z = 0.0;
    let mut mean_p = 0.0;
    let mut kinetic = 0.0;
    let mut potential = 0.0;
    for (k, (p, d)) in psi.iter().zip(&dpsi).enumerate() {
        let z = grid.z(k);
        let rho = p.norm_sqr();
        norm += rho;
        mean_z += z * rho;
        mean_p += (p.conj() * d).im;
        kinetic += 0.5 * d.norm_sqr();
        potential += branch.potential(g, z) * rho;
    }
    ComponentMoments {
        mean_z: mean_z * dz,
        mean_p: mean_p * dz,
        energy: (kinetic + potential) * dz,
        norm: norm * dz,
    }
}

/// Expectation values of each component under gradient strength `g`.
///
/// Momentum and kinetic energy use the spectral derivative.
pub fn observables(state: &SpinorField, g: f64) -> Result<Observables> {
    if !state.is_finite() {
        return Err(Error::CorruptState("non-finite amplitude".into()));
    }
    for branch in [Branch::Plus, Branch::Minus] {
        let n = state.norm(branch);
        if (n - 1.0).abs() > 1e-6 {
            return Err(Error::CorruptState(format!(
                "{branch:?} component norm {n} is not within 1e-6 of 1"
            )));
        }
    }
    let plus = moments(&state.grid, &state.psi_plus, Branch::Plus, g);
    let minus = moments(&state.grid, &state.psi_minus, Branch::Minus, g);
    Ok(Observables {
        mean_z_plus: plus.mean_z,
        mean_z_minus: minus.mean_z,
        mean_p_plus: plus.mean_p,
        mean_p_minus: minus.mean_p,
        energy_plus: plus.energy,
        energy_minus: minus.energy,
        norm_plus: plus.norm,
        norm_minus: minus.norm,
    })
}
