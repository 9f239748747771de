//! Grünwald–Letnikov (GMMP) weights and the discrete Caputo derivative.

use crate::error::{Error, Result};

/// `omega_k = (-1)^k binom(alpha, k)` for `k = 0..=n`, with running partial sums.
#[derive(Debug, Clone, PartialEq)]
pub struct GmmpWeights {
    alpha: f64,
    omega: Vec<f64>,
    partial_sums: Vec<f64>,
}

impl GmmpWeights {
    /// Builds the weights with the multiplicative recursion
    /// `omega_k = omega_{k-1} (k - 1 - alpha) / k`; Gamma ratios overflow past k ~ 170.
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        check_order(alpha)?;
        let mut omega = Vec::with_capacity(n + 1);
        let mut partial_sums = Vec::with_capacity(n + 1);
        let mut w = 1.0;
        let mut sum = 0.0;
        for k in 0..=n {
            if k > 0 {
                let kf = k as f64;
                w *= (kf - 1.0 - alpha) / kf;
            }
            sum += w;
            omega.push(w);
            partial_sums.push(sum);
        }
        Ok(GmmpWeights {
            alpha,
            omega,
            partial_sums,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Highest index stored.
    pub fn len(&self) -> usize {
        self.omega.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// Entry `m` is `omega_0 + ... + omega_m`.
    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }
}

pub(crate) fn check_order(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("fractional order must lie in (0, 1), got {alpha}")))
    }
}

/// Shorthand for [`GmmpWeights::new`].
pub fn gmmp_weights(alpha: f64, n: usize) -> Result<GmmpWeights> {
    GmmpWeights::new(alpha, n)
}

/// Discrete Caputo derivative at `t_n` from samples `f(t_0), ..., f(t_n)`:
/// `tau^-alpha (sum_k omega_k f(t_{n-k}) - sum_k omega_k f0)`.
pub fn caputo_gmmp(samples: &[f64], f0: f64, tau: f64, weights: &GmmpWeights) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::LengthMismatch {
            expected: 1,
            actual: 0,
        });
    }
    let n = samples.len() - 1;
    if weights.len() < n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: weights.len(),
        });
    }
    if !(tau > 0.0) {
        return Err(Error::param("tau", format!("time step must be positive, got {tau}")));
    }
    let omega = weights.omega();
    let history: f64 = (0..=n).map(|k| omega[k] * (samples[n - k] - f0)).sum();
    Ok(history / tau.powf(weights.alpha()))
}
