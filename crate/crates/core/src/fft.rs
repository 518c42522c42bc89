//! Thin wrapper over `rustfft` with cached plans and unnormalized forward,
//! normalized inverse transforms.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::SpatialGrid;

pub(crate) struct Transform {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    inv_n: f64,
}

impl Transform {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Transform {
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); len],
            inv_n: 1.0 / n as f64,
        }
    }

    pub(crate) fn forward(&mut self, data: &mut [Complex64]) {
        self.forward.process_with_scratch(data, &mut self.scratch);
    }

    pub(crate) fn inverse(&mut self, data: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, &mut self.scratch);
        for v in data.iter_mut() {
            *v *= self.inv_n;
        }
    }
}

/// First derivative by multiplication with `i k` in transform space. The
/// Nyquist mode has no well-defined odd derivative and is dropped.
pub(crate) fn spectral_derivative(grid: &SpatialGrid, psi: &[Complex64]) -> Vec<Complex64> {
    let n = grid.len();
    let mut t = Transform::new(n);
    let mut buf = psi.to_vec();
    t.forward(&mut buf);
    for (j, (v, k)) in buf.iter_mut().zip(grid.wavenumbers()).enumerate() {
        *v = if j == n / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            *v * Complex64::new(0.0, k)
        };
    }
    t.inverse(&mut buf);
    buf
}
