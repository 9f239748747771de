//! The five benchmark problems with their published error tables.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::solver::{Discretization, ProblemSpec};
use crate::specfun::{erfcx, heaviside, mittag_leffler, MLParams};
use crate::splinebasis::BasisMode;

/// Where a published error is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    /// `|u - u_N|` at `x`.
    Pointwise { x: f64 },
    L2,
    LInf,
}

/// One published entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableTarget {
    pub alpha: f64,
    pub m: usize,
    /// The table's `N`; see [`BenchmarkCase::disc`] for how it maps to steps.
    pub n: usize,
    pub t: f64,
    pub metric: Metric,
    pub mode: BasisMode,
    pub expected: f64,
}

#[derive(Debug, Clone)]
pub struct BenchmarkCase {
    pub id: u8,
    pub spec: ProblemSpec,
    pub default_disc: Discretization,
    pub table_targets: Vec<TableTarget>,
}

pub const TABLE_POINTS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Default fractional order of each case.
pub fn default_alpha(id: u8) -> Result<f64> {
    match id {
        1 => Ok(0.3),
        2 => Ok(0.9),
        3 => Ok(0.5),
        4 => Ok(0.6),
        5 => Ok(0.5),
        _ => Err(Error::UnknownBenchmark(id)),
    }
}

/// Tension used by each case.
pub fn default_tension(id: u8) -> Result<f64> {
    match id {
        1 => Ok(1.18),
        2 => Ok(1.52),
        3 => Ok(0.01),
        4 => Ok(2.53),
        5 => Ok(1.0),
        _ => Err(Error::UnknownBenchmark(id)),
    }
}

pub fn benchmark(id: u8) -> Result<BenchmarkCase> {
    benchmark_with_alpha(id, default_alpha(id)?)
}

/// Case `id` at a caller-chosen order. Case 3 is tied to `alpha = 1/2` by its
/// exact solution; other orders are accepted but carry no exact solution.
pub fn benchmark_with_alpha(id: u8, alpha: f64) -> Result<BenchmarkCase> {
    let spec = problem_spec(id, alpha)?;
    let (m, n) = match id {
        1 => (128, 3200),
        2 => (50, 2500),
        3 => (32, 4000),
        4 => (50, 2500),
        _ => (500, 125),
    };
    let mut case = BenchmarkCase {
        id,
        default_disc: Discretization::new(&spec, m, n, default_tension(id)?)?,
        spec,
        table_targets: table_targets(id),
    };
    case.default_disc = case.disc(m, n)?;
    Ok(case)
}

impl BenchmarkCase {
    /// Discretization for a table's `(M, N)`. Case 3 runs `N` steps per unit
    /// time over `[0, 3]`, which is how its table is reproduced.
    pub fn disc(&self, m: usize, n: usize) -> Result<Discretization> {
        let steps = if self.id == 3 { 3 * n } else { n };
        Discretization::new(&self.spec, m, steps, default_tension(self.id)?)
    }

    /// Targets for one fractional order and basis mode.
    pub fn targets_for(&self, alpha: f64, mode: BasisMode) -> impl Iterator<Item = &TableTarget> {
        self.table_targets
            .iter()
            .filter(move |t| t.alpha == alpha && t.mode == mode)
    }
}

fn problem_spec(id: u8, alpha: f64) -> Result<ProblemSpec> {
    let unit = |kappa: f64, horizon: f64| ProblemSpec::new(alpha, kappa, (0.0, 1.0), horizon);
    let spec = match id {
        1 => {
            let mu = 2.0 + alpha;
            let kappa = 1.0;
            let coeff = libm::tgamma(mu + 1.0) / libm::tgamma(mu + 1.0 - alpha);
            unit(kappa, 1.0)
                .with_source(move |x, t| {
                    coeff * t.powf(mu - alpha) * x.powi(3) * (1.0 - x) - 6.0 * kappa * t.powf(mu) * x * (1.0 - 2.0 * x)
                })
                .with_exact(move |x, t| t.powf(mu) * x.powi(3) * (1.0 - x))
        }
        2 => {
            let ml = MLParams::new(alpha);
            let decay = move |t: f64| mittag_leffler(ml, -t.powf(alpha)).unwrap_or(f64::NAN);
            unit(4.0 / (PI * PI), 1.0)
                .with_initial(|x| (PI * x / 2.0).sin(), |x| PI / 2.0 * (PI * x / 2.0).cos())
                .with_boundary(|_| 0.0, decay)
                .with_exact(move |x, t| decay(t) * (PI * x / 2.0).sin())
        }
        3 => {
            let lambda = 36.0 * PI * PI;
            let edge = move |t: f64| erfcx(lambda * t.sqrt()).unwrap_or(f64::NAN);
            let spec = unit(1.0, 3.0)
                .with_initial(|x| (6.0 * PI * x).cos(), |x| -6.0 * PI * (6.0 * PI * x).sin())
                .with_boundary(edge, edge);
            if alpha == 0.5 {
                spec.with_exact(move |x, t| (6.0 * PI * x).cos() * edge(t))
            } else {
                spec
            }
        }
        4 => {
            let kappa = 2.0;
            let coeff = 2.0 / libm::tgamma(3.0 - alpha);
            unit(kappa, 1.0)
                .with_source(move |x, t| {
                    let ex = x.exp();
                    coeff * t.powf(2.0 - alpha) * x * (1.0 - x) * ex + kappa * t * t * x * (x + 3.0) * ex
                })
                .with_exact(|x, t| t * t * x * (1.0 - x) * x.exp())
        }
        5 => unit(1.0, 1.0).with_boundary(|_| 0.0, |t| heaviside(t - 0.2) - heaviside(t - 0.6)),
        _ => return Err(Error::UnknownBenchmark(id)),
    };
    spec.validate()?;
    Ok(spec)
}

fn pointwise(alpha: f64, m: usize, n: usize, mode: BasisMode, values: &[f64; 9]) -> Vec<TableTarget> {
    TABLE_POINTS
        .iter()
        .zip(values)
        .map(|(&x, &expected)| TableTarget {
            alpha,
            m,
            n,
            t: 1.0,
            metric: Metric::Pointwise { x },
            mode,
            expected,
        })
        .collect()
}

const TABLE1: [(f64, usize, usize, [f64; 9]); 6] = [
    (0.3, 128, 3200, [4.8077e-6, 8.8365e-6, 1.1667e-5, 1.3323e-5, 1.3817e-5, 1.3252e-5, 1.1547e-5, 8.7289e-6, 4.8491e-6]),
    (0.6, 128, 3200, [4.9205e-6, 9.0944e-6, 1.2103e-5, 1.3957e-5, 1.4637e-5, 1.4187e-5, 1.2493e-5, 9.5223e-6, 5.3116e-6]),
    (0.9, 128, 3200, [5.1822e-6, 9.6736e-6, 1.3046e-5, 1.5284e-5, 1.6304e-5, 1.6052e-5, 1.4349e-5, 1.1061e-5, 6.2017e-6]),
    (0.3, 256, 6400, [1.2909e-6, 2.3330e-6, 3.0516e-6, 3.5061e-6, 3.6600e-6, 3.5199e-6, 3.0707e-6, 2.3479e-6, 1.3059e-6]),
    (0.6, 256, 6400, [1.3984e-6, 2.5585e-6, 3.3966e-6, 3.9726e-6, 4.2262e-6, 4.1375e-6, 3.6688e-6, 2.8378e-6, 1.5864e-6]),
    (0.9, 256, 6400, [1.6069e-6, 2.9931e-6, 4.0561e-6, 4.8565e-6, 5.2909e-6, 5.2916e-6, 4.7805e-6, 3.7446e-6, 2.1042e-6]),
];

const TABLE2: [(f64, usize, usize, [f64; 9]); 6] = [
    (0.3, 50, 2500, [2.6511e-6, 5.1402e-6, 7.3057e-6, 8.9870e-6, 1.0024e-5, 1.0259e-5, 9.5339e-6, 7.6895e-6, 4.5661e-6]),
    (0.6, 50, 2500, [1.7151e-6, 3.3299e-6, 4.7433e-6, 5.8526e-6, 6.5525e-6, 6.7351e-6, 6.2885e-6, 5.0973e-6, 3.0421e-6]),
    (0.9, 50, 2500, [1.3626e-7, 2.5439e-7, 3.3856e-7, 3.7746e-7, 3.6624e-7, 3.0810e-7, 2.1542e-7, 1.1038e-7, 2.4885e-8]),
    (0.3, 100, 10000, [6.6926e-7, 1.2977e-6, 1.8445e-6, 2.2693e-6, 2.5317e-6, 2.5915e-6, 2.4088e-6, 1.9433e-6, 1.1543e-6]),
    (0.6, 100, 10000, [4.3003e-7, 8.3493e-7, 1.1893e-6, 1.4674e-6, 1.6429e-6, 1.6886e-6, 1.5766e-6, 1.2779e-6, 7.6266e-7]),
    (0.9, 100, 10000, [3.3909e-8, 6.3294e-8, 8.4212e-8, 9.3849e-8, 9.0999e-8, 7.6468e-8, 5.3358e-8, 2.7210e-8, 6.0045e-9]),
];

/// `(M, N, [L2 at t = 1, 2, 3], [LInf at t = 1, 2, 3])`
const TABLE3: [(usize, usize, [f64; 3], [f64; 3]); 8] = [
    (32, 4000, [5.4324e-5, 3.8735e-5, 3.1716e-5], [8.8587e-5, 6.3211e-5, 5.1768e-5]),
    (64, 4000, [1.3203e-5, 9.6132e-6, 7.9258e-6], [2.1878e-5, 1.5795e-5, 1.2985e-5]),
    (128, 9000, [3.0826e-6, 2.3273e-6, 1.9418e-6], [5.2449e-6, 3.8791e-6, 3.2140e-6]),
    (256, 9000, [5.3117e-7, 4.7773e-7, 4.2641e-7], [9.5837e-7, 8.4372e-7, 7.3492e-7]),
    (1024, 250, [5.9928e-6, 2.1116e-6, 1.1412e-6], [9.4652e-6, 3.3298e-6, 1.7970e-6]),
    (1024, 500, [3.6171e-6, 1.2685e-6, 6.8189e-7], [5.6050e-6, 1.9593e-6, 1.0500e-6]),
    (2048, 1000, [2.2589e-6, 7.9847e-7, 4.3255e-7], [3.4336e-6, 1.2092e-6, 6.5273e-7]),
    (2048, 2000, [1.4133e-6, 4.9781e-7, 2.6867e-7], [2.1044e-6, 7.3642e-7, 3.9486e-7]),
];

const TABLE4: [(usize, usize, BasisMode, [f64; 9]); 4] = [
    (25, 625, BasisMode::CubicLimit, [7.4297e-5, 1.7128e-4, 2.2488e-4, 2.8563e-4, 3.1076e-4, 3.2060e-4, 3.0518e-4, 2.4201e-4, 1.6825e-4]),
    (25, 625, BasisMode::Exponential, [1.7521e-5, 3.1447e-5, 3.3028e-5, 2.5425e-5, 1.5134e-5, 4.5617e-6, 1.7614e-5, 3.0270e-5, 2.8820e-5]),
    (50, 2500, BasisMode::CubicLimit, [2.2881e-5, 4.2725e-5, 5.9053e-5, 7.1249e-5, 7.8544e-5, 7.9982e-5, 7.4401e-5, 6.0392e-5, 3.6264e-5]),
    (50, 2500, BasisMode::Exponential, [5.2238e-6, 7.8796e-6, 8.1580e-6, 6.3822e-6, 3.0497e-6, 1.1163e-6, 5.1068e-6, 7.5532e-6, 6.6400e-6]),
];

fn table_targets(id: u8) -> Vec<TableTarget> {
    match id {
        1 | 2 => {
            let table = if id == 1 { &TABLE1 } else { &TABLE2 };
            table
                .iter()
                .flat_map(|(alpha, m, n, v)| pointwise(*alpha, *m, *n, BasisMode::Exponential, v))
                .collect()
        }
        3 => TABLE3
            .iter()
            .flat_map(|&(m, n, l2, linf)| {
                (0..3).flat_map(move |i| {
                    let t = (i + 1) as f64;
                    [(Metric::L2, l2[i]), (Metric::LInf, linf[i])].map(|(metric, expected)| TableTarget {
                        alpha: 0.5,
                        m,
                        n,
                        t,
                        metric,
                        mode: BasisMode::Exponential,
                        expected,
                    })
                })
            })
            .collect(),
        4 => TABLE4
            .iter()
            .flat_map(|(m, n, mode, v)| pointwise(0.6, *m, *n, *mode, v))
            .collect(),
        _ => Vec::new(),
    }
}
