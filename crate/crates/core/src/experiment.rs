//! Aperture post-selection: the spin state of the particles that pass a hole
//! at height `z_center`, and the statistics an analyzer behind it would see.
//!
//! The hole is an ideal window on the grid. Each grid point `z_k` stands for
//! the cell `[z_k - dz/2, z_k + dz/2)` and contributes in proportion to how
//! much of that cell the window covers, so adjacent windows add up exactly.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::SpinorField;
use crate::texture::{dot, length, Vec3};

/// Reduced spin density matrix behind the hole, basis (|↑⟩, |↓⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalState {
    pub rho: [[Complex64; 2]; 2],
    pub passage_probability: f64,
    pub bloch: Vec3,
}

impl ConditionalState {
    /// Pure or mixed state with the given Bloch vector.
    pub fn from_bloch(bloch: Vec3, passage_probability: f64) -> Self {
        let half = 0.5;
        let rho = [
            [
                Complex64::new(half * (1.0 + bloch[2]), 0.0),
                Complex64::new(half * bloch[0], -half * bloch[1]),
            ],
            [
                Complex64::new(half * bloch[0], half * bloch[1]),
                Complex64::new(half * (1.0 - bloch[2]), 0.0),
            ],
        ];
        ConditionalState {
            rho,
            passage_probability,
            bloch,
        }
    }

    pub fn trace(&self) -> f64 {
        self.rho[0][0].re + self.rho[1][1].re
    }

    /// `tr(ρ²)`, between 1/2 (fully mixed) and 1 (pure).
    pub fn purity(&self) -> f64 {
        let r = &self.rho;
        r[0][0].norm_sqr() + r[1][1].norm_sqr() + r[0][1].norm_sqr() + r[1][0].norm_sqr()
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = length(&self.bloch);
        [0.5 * (1.0 - r), 0.5 * (1.0 + r)]
    }
}

/// Fraction of cell `k` covered by `[lo, hi]`.
fn coverage(cell_lo: f64, cell_hi: f64, lo: f64, hi: f64) -> f64 {
    ((cell_hi.min(hi) - cell_lo.max(lo)) / (cell_hi - cell_lo)).max(0.0)
}

/// Probability of reaching the window `[z_center - half_width, z_center + half_width]`
/// together with the unnormalized density-matrix integrals.
fn window_integrals(
    state: &SpinorField,
    z_center: f64,
    half_width: f64,
) -> Result<(f64, f64, Complex64, f64)> {
    if !(half_width > 0.0 && half_width.is_finite() && z_center.is_finite()) {
        return Err(invalid(
            "half_width",
            format!("{half_width} must be positive and finite"),
        ));
    }
    let grid = state.grid();
    let dz = grid.dz();
    let lo = z_center - half_width;
    let hi = z_center + half_width;
    let support_lo = grid.z_min() - 0.5 * dz;
    let support_hi = grid.z(grid.len() - 1) + 0.5 * dz;
    if hi <= support_lo || lo >= support_hi {
        return Err(Error::ZeroPassage { lo, hi });
    }
    let first = grid.nearest_index(lo).saturating_sub(1);
    let last = (grid.nearest_index(hi) + 1).min(grid.len() - 1);
    let (mut uu, mut dd, mut ud) = (0.0, 0.0, Complex64::new(0.0, 0.0));
    let mut covered = 0.0;
    for k in first..=last {
        let z = grid.z(k);
        let w = coverage(z - 0.5 * dz, z + 0.5 * dz, lo, hi);
        if w == 0.0 {
            continue;
        }
        covered += w;
        let u = state.psi_plus()[k];
        let d = state.psi_minus()[k];
        uu += w * u.norm_sqr();
        dd += w * d.norm_sqr();
        ud += w * u * d.conj();
    }
    if covered == 0.0 {
        return Err(Error::ZeroPassage { lo, hi });
    }
    // spinor weights 1/√2 on each component
    let scale = 0.5 * dz;
    Ok((uu * scale, dd * scale, ud * scale, (uu + dd) * scale))
}

/// Conditional spin state of the particles passing the window.
pub fn aperture_postselect(
    state: &SpinorField,
    z_center: f64,
    half_width: f64,
) -> Result<ConditionalState> {
    let (uu, dd, ud, passage) = window_integrals(state, z_center, half_width)?;
    if !(passage >= 1e-12) {
        return Err(Error::UndefinedConditional(passage));
    }
    let rho = [
        [Complex64::new(uu / passage, 0.0), ud / passage],
        [ud.conj() / passage, Complex64::new(dd / passage, 0.0)],
    ];
    let bloch = [
        2.0 * rho[0][1].re,
        2.0 * rho[1][0].im,
        rho[0][0].re - rho[1][1].re,
    ];
    Ok(ConditionalState {
        rho,
        passage_probability: passage,
        bloch,
    })
}

/// Probability of passing the window, without conditioning.
pub fn passage_probability(state: &SpinorField, z_center: f64, half_width: f64) -> Result<f64> {
    window_integrals(state, z_center, half_width).map(|r| r.3)
}

fn check_axis(axis: &Vec3) -> Result<()> {
    let n = length(axis);
    if !((n - 1.0).abs() <= 1e-9) {
        return Err(invalid("axis", format!("|axis| = {n} is not 1")));
    }
    Ok(())
}

/// Probability of the "up along `axis`" outcome, `(1 + axis·bloch)/2`.
pub fn measurement_probability(cond: &ConditionalState, axis: &Vec3) -> Result<f64> {
    check_axis(axis)?;
    // 0.5 + 0.5x keeps p(axis) + p(-axis) == 1 exactly in floating point
    Ok((0.5 + 0.5 * dot(axis, &cond.bloch)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClickCounts {
    pub up: u64,
    pub down: u64,
}

/// Draws `shots` analyzer outcomes from the conditional state.
pub fn sample_clicks<R: Rng + ?Sized>(
    cond: &ConditionalState,
    axis: &Vec3,
    shots: u64,
    rng: &mut R,
) -> Result<ClickCounts> {
    let p = measurement_probability(cond, axis)?;
    let up = (0..shots).filter(|_| rng.gen::<f64>() < p).count() as u64;
    Ok(ClickCounts {
        up,
        down: shots - up,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub z_center: f64,
    pub passage_probability: Option<f64>,
    pub bloch: Option<Vec3>,
    pub purity: Option<f64>,
}

/// One aperture per entry of `z_centers`. Rows whose conditional state is
/// undefined keep their passage probability (if any) and leave the rest empty.
pub fn scan_hole(state: &SpinorField, z_centers: &[f64], half_width: f64) -> Result<Vec<ScanRow>> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(invalid("half_width", format!("{half_width} must be positive")));
    }
    Ok(z_centers
        .iter()
        .map(|&z_center| match aperture_postselect(state, z_center, half_width) {
            Ok(c) => ScanRow {
                z_center,
                passage_probability: Some(c.passage_probability),
                bloch: Some(c.bloch),
                purity: Some(c.purity()),
            },
            Err(_) => ScanRow {
                z_center,
                passage_probability: passage_probability(state, z_center, half_width).ok(),
                bloch: None,
                purity: None,
            },
        })
        .collect())
}
