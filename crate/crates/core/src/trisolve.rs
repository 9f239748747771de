//! Tri-diagonal systems and the Thomas algorithm.

use crate::error::{Error, Result};

/// Pivots smaller than this are treated as singular.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// `lower[i]` couples row `i + 1` to column `i`; `upper[i]` couples row `i`
/// to column `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiagonalSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TriDiagonalSystem {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let sys = TriDiagonalSystem {
            lower,
            diag,
            upper,
            rhs,
        };
        sys.check_bands()?;
        Ok(sys)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn check_bands(&self) -> Result<()> {
        let n = self.diag.len();
        if n == 0 {
            return Err(Error::param("n", "system must have at least one row"));
        }
        for len in [self.lower.len(), self.upper.len()] {
            if len != n - 1 {
                return Err(Error::LengthMismatch {
                    expected: n - 1,
                    actual: len,
                });
            }
        }
        if self.rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: self.rhs.len(),
            });
        }
        Ok(())
    }

    /// `A x` for the banded matrix.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Max-row-sum norm of the matrix.
    pub fn norm_inf(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut r = self.diag[i].abs();
                if i > 0 {
                    r += self.lower[i - 1].abs();
                }
                if i + 1 < n {
                    r += self.upper[i].abs();
                }
                r
            })
            .fold(0.0, f64::max)
    }
}

/// Solve without pivoting. The input is left untouched.
pub fn thomas_solve(sys: &TriDiagonalSystem) -> Result<Vec<f64>> {
    sys.check_bands()?;
    let mut x = sys.rhs.clone();
    let mut scratch = vec![0.0; sys.len()];
    thomas_in_place(&sys.lower, &sys.diag, &sys.upper, &mut x, &mut scratch)?;
    Ok(x)
}

/// Allocation-free Thomas sweep: `rhs` is overwritten by the solution and
/// `scratch` (same length) holds the modified upper band. Bands are assumed
/// consistent.
pub(crate) fn thomas_in_place(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let n = diag.len();
    let mut pivot = diag[0];
    if pivot.abs() < PIVOT_FLOOR {
        return Err(Error::Singular { row: 0, pivot });
    }
    rhs[0] /= pivot;
    for i in 1..n {
        scratch[i - 1] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i - 1] * scratch[i - 1];
        if pivot.abs() < PIVOT_FLOOR || !pivot.is_finite() {
            return Err(Error::Singular { row: i, pivot });
        }
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
    Ok(())
}

/// `min_i (|diag_i| - |lower_{i-1}| - |upper_i|)`; positive means strictly
/// diagonally dominant.
pub fn dominance_margin(sys: &TriDiagonalSystem) -> f64 {
    let n = sys.len();
    (0..n)
        .map(|i| {
            let mut off = 0.0;
            if i > 0 {
                off += sys.lower[i - 1].abs();
            }
            if i + 1 < n {
                off += sys.upper[i].abs();
            }
            sys.diag[i].abs() - off
        })
        .fold(f64::INFINITY, f64::min)
}
