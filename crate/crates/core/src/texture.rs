//! Position-dependent spin direction of a spinor field.
//!
//! Spin-space axes are labelled 1, 2, 3 (x, y, z). For `up = a + ic` and
//! `down = b + id` the direction is
//! `(2(ab + cd), 2(ad - bc), a² - b² + c² - d²) / (a² + b² + c² + d²)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::SpinorField;

pub type Vec3 = [f64; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn length(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Angle between two non-zero vectors, robust near 0 and π.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    length(&cross).atan2(dot(a, b))
}

/// Unit spin direction of the pure state `up |↑⟩ + down |↓⟩`.
pub fn bloch_vector(up: Complex64, down: Complex64) -> Result<Vec3> {
    let (a, c) = (up.re, up.im);
    let (b, d) = (down.re, down.im);
    let total = a * a + b * b + c * c + d * d;
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::UndefinedDirection);
    }
    Ok([
        2.0 * (a * b + c * d) / total,
        2.0 * (a * d - b * c) / total,
        (a * a - b * b + c * c - d * d) / total,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochSample {
    pub z: f64,
    pub s: Vec3,
    /// Local density `(|ψ₊|² + |ψ₋|²) / 2`.
    pub weight: f64,
    pub reliable: bool,
}

/// One sample per grid point. A sample is reliable when its weight is at
/// least `epsilon` times the peak weight; zero-density points get `s = 0`.
pub fn texture(state: &SpinorField, epsilon: f64) -> Result<Vec<BlochSample>> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid("epsilon", format!("{epsilon} must be positive")));
    }
    let grid = state.grid();
    let weights: Vec<f64> = state
        .psi_plus()
        .iter()
        .zip(state.psi_minus())
        .map(|(u, d)| 0.5 * (u.norm_sqr() + d.norm_sqr()))
        .collect();
    let peak = weights.iter().cloned().fold(0.0, f64::max);
    let threshold = epsilon * peak;
    Ok(weights
        .iter()
        .enumerate()
        .map(|(k, &weight)| {
            let s = bloch_vector(state.psi_plus()[k], state.psi_minus()[k]).unwrap_or([0.0; 3]);
            BlochSample {
                z: grid.z(k),
                s,
                weight,
                reliable: peak > 0.0 && weight >= threshold,
            }
        })
        .collect())
}

/// Helix coordinates of the reliable samples: azimuth about the 3-axis,
/// unwrapped and anchored to zero nearest `z = 0`, and polar angle from +3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistProfile {
    pub z: Vec<f64>,
    pub azimuth: Vec<f64>,
    pub polar: Vec<f64>,
}

impl TwistProfile {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Least-squares slope of the azimuth over samples with `|z| <= half_span`.
    pub fn azimuth_slope_near_origin(&self, half_span: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .z
            .iter()
            .zip(&self.azimuth)
            .filter(|(z, _)| z.abs() <= half_span)
            .map(|(&z, &p)| (z, p))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mz = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let mp = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mz) * (p.1 - mp)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mz).powi(2)).sum();
        Some(sxy / sxx)
    }
}

fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    x - two_pi * (x / two_pi).round()
}

pub fn twist_profile(samples: &[BlochSample]) -> Result<TwistProfile> {
    let reliable: Vec<&BlochSample> = samples.iter().filter(|s| s.reliable).collect();
    if reliable.len() < 2 {
        return Err(invalid(
            "samples",
            format!("{} reliable samples, need at least 2", reliable.len()),
        ));
    }
    let n = reliable.len();
    let raw: Vec<f64> = reliable.iter().map(|s| s.s[1].atan2(s.s[0])).collect();
    let anchor = (0..n)
        .min_by(|&a, &b| reliable[a].z.abs().total_cmp(&reliable[b].z.abs()))
        .expect("non-empty");

    let mut azimuth = vec![0.0; n];
    for k in anchor + 1..n {
        azimuth[k] = azimuth[k - 1] + wrap_to_pi(raw[k] - raw[k - 1]);
    }
    for k in (0..anchor).rev() {
        azimuth[k] = azimuth[k + 1] + wrap_to_pi(raw[k] - raw[k + 1]);
    }
    Ok(TwistProfile {
        z: reliable.iter().map(|s| s.z).collect(),
        azimuth,
        polar: reliable.iter().map(|s| s.s[2].clamp(-1.0, 1.0).acos()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::initial_state;
    use crate::grid::make_grid;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn basis_directions() {
        assert!(close(bloch_vector(c(1.0, 0.0), c(0.0, 0.0)).unwrap(), [0.0, 0.0, 1.0], 1e-15));
        assert!(close(bloch_vector(c(0.0, 0.0), c(1.0, 0.0)).unwrap(), [0.0, 0.0, -1.0], 1e-15));
        let h = FRAC_1_SQRT_2;
        assert!(close(bloch_vector(c(h, 0.0), c(h, 0.0)).unwrap(), [1.0, 0.0, 0.0], 1e-15));
        assert!(close(bloch_vector(c(h, 0.0), c(0.0, h)).unwrap(), [0.0, 1.0, 0.0], 1e-15));
    }

    #[test]
    fn zero_spinor_has_no_direction() {
        assert!(matches!(
            bloch_vector(c(0.0, 0.0), c(0.0, 0.0)),
            Err(Error::UndefinedDirection)
        ));
    }

    #[test]
    fn initial_texture_points_along_one() {
        let grid = make_grid(-16.0, 16.0, 2048).unwrap();
        let samples = texture(&initial_state(&grid), 1e-6).unwrap();
        assert_eq!(samples.len(), 2048);
        assert!(samples.iter().filter(|s| s.reliable).count() > 100);
        for s in samples.iter().filter(|s| s.reliable) {
            assert!(close(s.s, [1.0, 0.0, 0.0], 1e-15));
        }
        let profile = twist_profile(&samples).unwrap();
        assert!(profile.azimuth.iter().all(|&p| p == 0.0));
        assert!(profile.polar.iter().all(|&t| (t - PI / 2.0).abs() < 1e-15));
    }

    #[test]
    fn twist_needs_two_reliable_samples() {
        let one = [BlochSample {
            z: 0.0,
            s: [1.0, 0.0, 0.0],
            weight: 1.0,
            reliable: true,
        }];
        assert!(twist_profile(&one).is_err());
        assert!(texture(&initial_state(&make_grid(-4.0, 4.0, 64).unwrap()), 0.0).is_err());
    }

    #[test]
    fn unwrapping_removes_branch_cuts() {
        // azimuth decreasing by 0.3 rad per sample through several turns
        let samples: Vec<BlochSample> = (-40..=40)
            .map(|k| {
                let phi = -0.3 * k as f64;
                BlochSample {
                    z: k as f64 * 0.1,
                    s: [phi.cos(), phi.sin(), 0.0],
                    weight: 1.0,
                    reliable: true,
                }
            })
            .collect();
        let p = twist_profile(&samples).unwrap();
        for (k, phi) in (-40..=40).zip(&p.azimuth) {
            assert!((phi - -0.3 * k as f64).abs() < 1e-12);
        }
        assert!((p.azimuth_slope_near_origin(1.0).unwrap() + 3.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn unit_length_and_scale_invariance(
            a in -1.0f64..1.0, b in -1.0f64..1.0, cc in -1.0f64..1.0, d in -1.0f64..1.0,
            lr in 0.1f64..10.0, lphase in -PI..PI,
        ) {
            prop_assume!(a * a + b * b + cc * cc + d * d > 1e-6);
            let up = c(a, cc);
            let down = c(b, d);
            let s = bloch_vector(up, down).unwrap();
            prop_assert!((length(&s) - 1.0).abs() < 1e-12);
            let lambda = Complex64::from_polar(lr, lphase);
            let t = bloch_vector(lambda * up, lambda * down).unwrap();
            prop_assert!(close(s, t, 1e-12));
            // complex form: s1 + i s2 = 2 conj(up) down / total
            let total = up.norm_sqr() + down.norm_sqr();
            let w = 2.0 * up.conj() * down / total;
            prop_assert!((w.re - s[0]).abs() < 1e-12 && (w.im - s[1]).abs() < 1e-12);
        }
    }
}
