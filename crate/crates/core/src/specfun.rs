//! Special functions used by the benchmark problems.
//!
//! * [`mittag_leffler`]: one-parameter `E_alpha(z)` for real `z`.
//! * [`erfcx`]: `exp(z^2) erfc(z)` for `z >= 0`, never forming `exp(z^2)` for large `z`.
//! * [`heaviside`]: left-closed unit step.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use crate::error::{Error, Result};

/// Negative arguments with `|z|` above this use the integral representation;
/// the alternating series loses roughly `log10(max term / result)` digits.
pub const ML_NEGATIVE_SERIES_LIMIT: f64 = 1.0;

const ML_MAX_TERMS: usize = 10_000;

/// Evaluation controls for [`mittag_leffler`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub alpha: f64,
    /// Target relative accuracy.
    pub tol: f64,
    /// Largest `|z|` for which the power series is used.
    pub series_radius: f64,
}

impl MLParams {
    pub fn new(alpha: f64) -> Self {
        MLParams {
            alpha,
            tol: 1e-12,
            series_radius: 5.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::param("alpha", format!("must lie in (0, 1], got {}", self.alpha)));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-6) {
            return Err(Error::param("tol", format!("must lie in (0, 1e-6], got {}", self.tol)));
        }
        if !(self.series_radius > 0.0) {
            return Err(Error::param("series_radius", "must be positive"));
        }
        Ok(())
    }
}

/// `E_alpha(z) = sum_k z^k / Gamma(alpha k + 1)`.
///
/// Supported region: every `z <= 0`, and `0 < z <= series_radius`.
/// Positive arguments beyond the radius return [`Error::Range`].
pub fn mittag_leffler(params: MLParams, z: f64) -> Result<f64> {
    params.validate()?;
    if z.is_nan() {
        return Err(Error::Range {
            value: z,
            reason: "NaN argument",
        });
    }
    if params.alpha == 1.0 {
        return Ok(z.exp());
    }
    if z > params.series_radius {
        return Err(Error::Range {
            value: z,
            reason: "positive argument beyond the series radius",
        });
    }
    if z >= -ML_NEGATIVE_SERIES_LIMIT.min(params.series_radius) {
        Ok(ml_series(params.alpha, z, params.tol))
    } else {
        Ok(ml_negative_integral(params.alpha, -z, params.tol))
    }
}

fn ml_series(alpha: f64, z: f64, tol: f64) -> f64 {
    if z == 0.0 {
        return 1.0;
    }
    let ln_abs = z.abs().ln();
    let mut sum = 1.0;
    let mut prev = 1.0;
    for k in 1..ML_MAX_TERMS {
        let kf = k as f64;
        let mag = (kf * ln_abs - libm::lgamma(alpha * kf + 1.0)).exp();
        let term = if z < 0.0 && k % 2 == 1 { -mag } else { mag };
        sum += term;
        if mag <= tol * 1e-3 * sum.abs() && mag < prev {
            break;
        }
        prev = mag;
    }
    sum
}

/// `E_alpha(-x)` for `0 < alpha < 1`, `x > 0`, from the completely monotone
/// representation
/// `sin(alpha pi)/(alpha pi) * int_0^inf exp(-(x s)^{1/alpha}) / (s^2 + 2 s cos(alpha pi) + 1) ds`.
fn ml_negative_integral(alpha: f64, x: f64, tol: f64) -> f64 {
    let inv_alpha = 1.0 / alpha;
    let cos_ap = (alpha * PI).cos();
    let integrand = |s: f64| {
        let decay = (-(x * s).powf(inv_alpha)).exp();
        decay / (s * s + 2.0 * s * cos_ap + 1.0)
    };
    // exp(-60) is far below any representable relative contribution.
    let upper = 60f64.powf(alpha) / x;
    let eps = tol * 1e-2;
    let value = if upper > 1.0 {
        gauss_kronrod_adaptive(&integrand, 0.0, 1.0, eps) + gauss_kronrod_adaptive(&integrand, 1.0, upper, eps)
    } else {
        gauss_kronrod_adaptive(&integrand, 0.0, upper, eps)
    };
    (alpha * PI).sin() / (alpha * PI) * value
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for nodes GK_NODES[1], [3], [5], [7].
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += GK_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive bisection with a 7/15-point Gauss-Kronrod pair; `rel_tol` is
/// relative to the running integral estimate.
fn gauss_kronrod_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (whole, _) = gk15(f, a, b);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(f, lo, hi);
        let width_share = (hi - lo) / (b - a);
        if err <= rel_tol * scale * width_share.max(1e-3) || depth >= 40 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Above this argument the asymptotic series of erfcx is accurate to better
/// than `exp(-36)`.
pub const ERFCX_ASYMPTOTIC_FROM: f64 = 6.0;
/// Below this argument the power series is used.
pub const ERFCX_SERIES_TO: f64 = 1.0;

/// Scaled complementary error function `exp(z^2) erfc(z)` for `z >= 0`.
pub fn erfcx(z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Range {
            value: z,
            reason: "erfcx is implemented for z >= 0",
        });
    }
    Ok(if z <= ERFCX_SERIES_TO {
        erfcx_series(z)
    } else if z < ERFCX_ASYMPTOTIC_FROM {
        erfcx_continued_fraction(z)
    } else {
        erfcx_asymptotic(z)
    })
}

/// `exp(z^2) - (2/sqrt(pi)) sum_n 2^n z^{2n+1} / (2n+1)!!`
fn erfcx_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut n = 0.0;
    while term > f64::EPSILON * 1e-2 * sum {
        n += 1.0;
        term *= 2.0 * z2 / (2.0 * n + 1.0);
        sum += term;
    }
    z2.exp() - FRAC_2_SQRT_PI * sum
}

/// Laplace continued fraction
/// `1 / sqrt(pi) / (z + (1/2) / (z + 1 / (z + (3/2) / (z + ...))))`,
/// evaluated with the modified Lentz algorithm.
fn erfcx_continued_fraction(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for k in 1..20_000 {
        let a = 0.5 * k as f64;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

/// `1/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(2z^2)^2 - 15/(2z^2)^3 + ...)`,
/// truncated at the smallest term.
fn erfcx_asymptotic(z: f64) -> f64 {
    let lead = 1.0 / (z * PI.sqrt());
    if z > 1e8 {
        return lead;
    }
    let inv = 1.0 / (2.0 * z * z);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let next = -term * (2.0 * k - 1.0) * inv;
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    lead * sum
}

/// Unit step with `H(0) = 1`.
pub fn heaviside(t: f64) -> f64 {
    if t >= 0.0 {
        1.0
    } else {
        0.0
    }
}
