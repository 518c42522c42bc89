//! Thomas algorithm for complex tridiagonal systems.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Tridiagonal matrix with constant coefficients row by row, LU-factorized once
/// so repeated right-hand sides cost one forward and one backward sweep.
///
/// Row `k` reads `sub[k] x[k-1] + diag[k] x[k] + sup[k] x[k+1] = rhs[k]`;
/// `sub[0]` and `sup[n-1]` are ignored.
#[derive(Debug, Clone)]
pub struct FactorizedTridiagonal {
    sub: Vec<Complex64>,
    // modified super-diagonal c'_k = sup_k / denom_k
    c_prime: Vec<Complex64>,
    inv_denom: Vec<Complex64>,
}

impl FactorizedTridiagonal {
    pub fn new(sub: &[Complex64], diag: &[Complex64], sup: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() != n || sup.len() != n {
            return Err(invalid(
                "tridiagonal",
                format!(
                    "band lengths ({}, {}, {}) must be equal and non-zero",
                    sub.len(),
                    n,
                    sup.len()
                ),
            ));
        }
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_denom = vec![Complex64::new(0.0, 0.0); n];
        let mut prev_c = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let denom = if k == 0 { diag[0] } else { diag[k] - sub[k] * prev_c };
            if denom.norm() < f64::MIN_POSITIVE || !denom.re.is_finite() || !denom.im.is_finite() {
                return Err(invalid("tridiagonal", format!("zero pivot in row {k}")));
            }
            let inv = denom.inv();
            inv_denom[k] = inv;
            prev_c = if k + 1 < n { sup[k] * inv } else { Complex64::new(0.0, 0.0) };
            c_prime[k] = prev_c;
        }
        Ok(FactorizedTridiagonal {
            sub: sub.to_vec(),
            c_prime,
            inv_denom,
        })
    }

    pub fn len(&self) -> usize {
        self.inv_denom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_denom.is_empty()
    }

    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [Complex64]) {
        let n = self.len();
        assert_eq!(rhs.len(), n, "rhs length must match the matrix");
        rhs[0] *= self.inv_denom[0];
        for k in 1..n {
            rhs[k] = (rhs[k] - self.sub[k] * rhs[k - 1]) * self.inv_denom[k];
        }
        for k in (0..n - 1).rev() {
            let next = rhs[k + 1];
            rhs[k] -= self.c_prime[k] * next;
        }
    }
}

/// One-shot tridiagonal solve.
pub fn solve_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let m = FactorizedTridiagonal::new(sub, diag, sup)?;
    if rhs.len() != m.len() {
        return Err(invalid("rhs", "length does not match the matrix"));
    }
    let mut x = rhs.to_vec();
    m.solve_in_place(&mut x);
    Ok(x)
}
