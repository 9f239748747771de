//! Error norms, order estimation, von Neumann growth factor, boundary flux.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::solver::{reconstruct, solve, CoefficientHistory, Discretization, ProblemSpec};

/// Discrete norms of `u - u_N` over the interior nodes `x_1..x_{M-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `sqrt(h sum_j e_j^2)`
    pub l2: f64,
    pub linf: f64,
    pub t: f64,
    pub m: usize,
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
}

pub fn error_norms(history: &CoefficientHistory, spec: &ProblemSpec, level: usize) -> Result<ErrorReport> {
    let exact = spec.exact.as_ref().ok_or(Error::MissingExact)?;
    let disc = history.disc();
    let t = disc.time(level);
    let nodal = history.nodal_values(level)?;
    let (mut sq, mut max) = (0.0, 0.0f64);
    for (j, u) in nodal.iter().enumerate().take(disc.m).skip(1) {
        let e = (exact(disc.node(j as isize), t) - u).abs();
        sq += e * e;
        max = max.max(e);
    }
    Ok(ErrorReport {
        l2: (disc.h * sq).sqrt(),
        linf: max,
        t,
        m: disc.m,
        n: disc.n,
        p: disc.p,
        alpha: spec.alpha,
    })
}

/// `|u(x, t_n) - u_N(x, t_n)|` at an arbitrary point of `[a, b]`.
pub fn pointwise_error(history: &CoefficientHistory, spec: &ProblemSpec, level: usize, x: f64) -> Result<f64> {
    let exact = spec.exact.as_ref().ok_or(Error::MissingExact)?;
    let approx = reconstruct(history, level, x)?;
    Ok((exact(x, history.time(level)) - approx).abs())
}

fn check_pairs(pairs: &[(f64, f64)]) -> Result<()> {
    if pairs.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: pairs.len(),
        });
    }
    if pairs.iter().any(|&(s, e)| !(s > 0.0 && e > 0.0 && s.is_finite() && e.is_finite())) {
        return Err(Error::param("pairs", "steps and errors must be positive and finite"));
    }
    Ok(())
}

/// Least-squares slope of `log(error)` against `log(step)`.
pub fn convergence_order(pairs: &[(f64, f64)]) -> Result<f64> {
    check_pairs(pairs)?;
    let k = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("pairs", "all step sizes are equal"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Orders between consecutive pairs, for reporting next to the regression.
pub fn pairwise_orders(pairs: &[(f64, f64)]) -> Result<Vec<f64>> {
    check_pairs(pairs)?;
    Ok(pairs
        .windows(2)
        .map(|w| (w[1].1 / w[0].1).ln() / (w[1].0 / w[0].0).ln())
        .collect())
}

/// Amplification of the Fourier mode `exp(i upsilon x)` over one step of the
/// homogeneous scheme, taking `omega_0 = 1`:
/// `G = (d1 cos(vh) + d2) / (tau^a kappa p^2 s (1 - cos(vh)) + d1 cos(vh) + d2)`.
pub fn growth_factor(upsilon: f64, disc: &Discretization, spec: &ProblemSpec) -> Result<f64> {
    let w = disc.basis()?.weights();
    let cos = (upsilon * disc.h).cos();
    let diffusion = disc.tau.powf(spec.alpha) * spec.kappa;
    let num = w.d1 * cos + w.d2;
    Ok(num / (diffusion * w.p2s * (1.0 - cos) + num))
}

/// Sign convention for the boundary flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxSign {
    /// `q = -kappa u_x`
    #[default]
    Fick,
    /// `q = +kappa u_x`
    Plain,
}

/// Forward-difference flux `q_n = -kappa (u_N(x_1) - u_N(x_0)) / h` at every level.
pub fn heat_flux_at_left(history: &CoefficientHistory, spec: &ProblemSpec, sign: FluxSign) -> Result<Vec<(f64, f64)>> {
    let disc = history.disc();
    let factor = match sign {
        FluxSign::Fick => -spec.kappa,
        FluxSign::Plain => spec.kappa,
    };
    (0..history.len())
        .map(|n| {
            let c = history.level(n)?;
            let v = history.weights().neighbour_value();
            let u0 = v * c[0] + c[1] + v * c[2];
            let u1 = v * c[1] + c[2] + v * c[3];
            Ok((disc.time(n), factor * (u1 - u0) / disc.h))
        })
        .collect()
}

/// `max_n max_j |u_N(x_j, t_n)| / max_j |u_N(x_j, 0)|`; a zero start gives 0.
pub fn amplification_ratio(history: &CoefficientHistory) -> Result<f64> {
    let start = nodal_max(history, 0)?;
    let mut peak = start;
    for n in 1..history.len() {
        peak = peak.max(nodal_max(history, n)?);
    }
    Ok(if start == 0.0 { 0.0 } else { peak / start })
}

fn nodal_max(history: &CoefficientHistory, n: usize) -> Result<f64> {
    Ok(history.nodal_values(n)?.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Outcome of [`perturbation_decay_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    pub seed: u64,
    pub ratios: Vec<f64>,
}

impl PerturbationReport {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
}

/// Number of sine modes in each random perturbation.
pub const PERTURBATION_MODES: usize = 8;

/// Evolves seeded random perturbations through the homogeneous scheme
/// (zero source and boundary data; only `alpha`, `kappa`, the domain and the
/// horizon of `spec` are used) and records the amplification ratio of each.
pub fn perturbation_decay_check(
    spec: &ProblemSpec,
    disc: &Discretization,
    trials: usize,
    seed: u64,
) -> Result<PerturbationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, len) = (spec.a, spec.b - spec.a);
    let mut ratios = Vec::with_capacity(trials);
    for _ in 0..trials {
        let amps: Vec<f64> = (0..PERTURBATION_MODES).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let phi_amps = amps.clone();
        let series = move |x: f64| {
            phi_amps
                .iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64 * PI * (x - a) / len).sin())
                .sum::<f64>()
        };
        let slope = move |x: f64| {
            amps.iter()
                .enumerate()
                .map(|(k, c)| {
                    let w = (k + 1) as f64 * PI / len;
                    c * w * (w * (x - a)).cos()
                })
                .sum::<f64>()
        };
        let homogeneous = ProblemSpec::new(spec.alpha, spec.kappa, (spec.a, spec.b), spec.horizon)
            .with_initial(series, slope);
        ratios.push(amplification_ratio(&solve(&homogeneous, disc)?)?);
    }
    Ok(PerturbationReport { seed, ratios })
}
