use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[z_min, z_max)`, symmetric about the origin.
///
/// Points are `z_k = z_min + k * dz` for `k = 0..n_points`; `z_max` itself is
/// excluded. With an even number of points `z = 0` lies exactly on the grid at
/// index `n_points / 2`, and the mirror of index `k > 0` is `n_points - k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    z_min: f64,
    z_max: f64,
    n_points: usize,
    dz: f64,
}

/// Builds a grid, rejecting asymmetric domains and sizes the FFT cannot use.
pub fn make_grid(z_min: f64, z_max: f64, n_points: usize) -> Result<SpatialGrid> {
    if !(z_min.is_finite() && z_max.is_finite()) {
        return Err(Error::InvalidGrid("domain bounds must be finite".into()));
    }
    if z_max <= 0.0 {
        return Err(Error::InvalidGrid(format!("z_max = {z_max} must be positive")));
    }
    if z_min != -z_max {
        return Err(Error::InvalidGrid(format!(
            "domain [{z_min}, {z_max}] is not symmetric about 0"
        )));
    }
    if n_points < 8 || !n_points.is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "n_points = {n_points} must be a power of two and at least 8"
        )));
    }
    Ok(SpatialGrid {
        z_min,
        z_max,
        n_points,
        dz: (z_max - z_min) / n_points as f64,
    })
}

impl SpatialGrid {
    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn z(&self, k: usize) -> f64 {
        self.z_min + k as f64 * self.dz
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.z(k))
    }

    /// Index of the grid point `z = 0`.
    pub fn origin_index(&self) -> usize {
        self.n_points / 2
    }

    /// Index `j` with `z_j = -z_k`, or `None` for `k = 0` whose mirror is `z_max`.
    pub fn mirror_index(&self, k: usize) -> Option<usize> {
        (k > 0 && k < self.n_points).then(|| self.n_points - k)
    }

    /// Index of the grid point closest to `z` (clamped to the grid).
    pub fn nearest_index(&self, z: f64) -> usize {
        let k = ((z - self.z_min) / self.dz).round();
        k.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Angular wavenumbers in discrete-transform order: `2πj/(N dz)` for
    /// `j < N/2`, then the negative frequencies `2π(j - N)/(N dz)`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points;
        let scale = 2.0 * std::f64::consts::PI / (n as f64 * self.dz);
        (0..n)
            .map(|j| {
                let j = if j < n / 2 { j as isize } else { j as isize - n as isize };
                scale * j as f64
            })
            .collect()
    }

    /// Same domain with `factor` times as many points.
    pub fn refined(&self, factor: usize) -> Result<SpatialGrid> {
        make_grid(self.z_min, self.z_max, self.n_points * factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spacing() {
        let g = make_grid(-8.0, 8.0, 1024).unwrap();
        assert_eq!(g.dz(), 0.015625);
        assert_eq!(g.z(0), -8.0);
        assert_eq!(g.z(g.origin_index()), 0.0);
        assert_eq!(g.z(1023), 8.0 - 0.015625);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(make_grid(-8.0, 8.0, 12), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(-4.0, 8.0, 1024), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(0.0, 0.0, 1024), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(8.0, -8.0, 1024), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(-8.0, 8.0, 4), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn mirror_indices_reflect_coordinates() {
        let g = make_grid(-4.0, 4.0, 64).unwrap();
        assert_eq!(g.mirror_index(0), None);
        for k in 1..64 {
            let j = g.mirror_index(k).unwrap();
            assert_eq!(g.z(j), -g.z(k));
        }
    }

    #[test]
    fn wavenumber_layout() {
        let g = make_grid(-4.0, 4.0, 8).unwrap();
        let k = g.wavenumbers();
        let dk = 2.0 * std::f64::consts::PI / 8.0;
        let expected = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0].map(|j| j * dk);
        for (a, b) in k.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
