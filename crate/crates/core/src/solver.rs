//! Fully discrete exponential B-spline collocation scheme.
//!
//! The approximation at `t_n` is `u_N(x, t_n) = sum_{j=-1}^{M+1} alpha_j^n B_j(x)`.
//! Collocating the GMMP-discretised equation at the `M + 1` nodes and
//! eliminating the two ghost coefficients through the Dirichlet conditions
//! leaves one tri-diagonal system per time level:
//!
//! ```text
//! A alpha^n = -sum_{k=1}^{n-1} w_k B alpha^{n-k} + (sum_{k=0}^{n-1} w_k) B alpha^0 + F^n
//! ```
//!
//! with interior rows of `A` equal to `(A, A', A)`,
//! `A = -tau^a kappa p^2 s + d1`, `A' = 2 tau^a kappa p^2 s + 2 d2`, and the
//! two boundary rows reduced to the single entry `2 tau^a kappa p^3 h s (c-1)`.
//! `B` has interior rows `(d1, 2 d2, d1)` and zero boundary rows.
//!
//! The starting vector comes from interpolating `phi` at the nodes together
//! with `phi'` at both ends.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fractime::{check_order, GmmpWeights};
use crate::splinebasis::{BasisMode, CollocationWeights, Order, SplineBasis, SplineShape};
use crate::trisolve::{thomas_in_place, TriDiagonalSystem};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `D_t^alpha u - kappa u_xx = f` on `(a, b) x (0, T]` with
/// `u(x, 0) = phi(x)`, `u(a, t) = g1(t)`, `u(b, t) = g2(t)`.
#[derive(Clone)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub kappa: f64,
    pub a: f64,
    pub b: f64,
    pub horizon: f64,
    pub phi: ScalarFn,
    /// Exact `phi'`. When absent a one-sided finite difference is used and
    /// the resulting history is flagged with [`SlopeSource::FiniteDifference`].
    pub phi_prime: Option<ScalarFn>,
    pub g1: ScalarFn,
    pub g2: ScalarFn,
    pub source: FieldFn,
    pub exact: Option<FieldFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha)
            .field("kappa", &self.kappa)
            .field("domain", &(self.a, self.b))
            .field("horizon", &self.horizon)
            .field("phi_prime", &self.phi_prime.is_some())
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// A problem with all data identically zero.
    pub fn new(alpha: f64, kappa: f64, domain: (f64, f64), horizon: f64) -> Self {
        let zero: ScalarFn = Arc::new(|_| 0.0);
        ProblemSpec {
            alpha,
            kappa,
            a: domain.0,
            b: domain.1,
            horizon,
            phi: zero.clone(),
            phi_prime: Some(zero.clone()),
            g1: zero.clone(),
            g2: zero,
            source: Arc::new(|_, _| 0.0),
            exact: None,
        }
    }

    pub fn with_initial(
        mut self,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        phi_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.phi = Arc::new(phi);
        self.phi_prime = Some(Arc::new(phi_prime));
        self
    }

    /// Initial data without a derivative (tabulated data, for instance).
    pub fn with_initial_values(mut self, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.phi = Arc::new(phi);
        self.phi_prime = None;
        self
    }

    pub fn with_boundary(
        mut self,
        g1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.g1 = Arc::new(g1);
        self.g2 = Arc::new(g2);
        self
    }

    pub fn with_source(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Arc::new(f);
        self
    }

    pub fn with_exact(mut self, u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(u));
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.alpha)?;
        if !(self.kappa > 0.0) {
            return Err(Error::param("kappa", format!("must be positive, got {}", self.kappa)));
        }
        if !(self.a < self.b) {
            return Err(Error::param("domain", format!("need a < b, got ({}, {})", self.a, self.b)));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::param("horizon", format!("must be positive, got {}", self.horizon)));
        }
        Ok(())
    }

    /// Mismatches between `phi` and the boundary data at `t = 0`, which for
    /// left-closed step data is the right limit. Reported, not rejected.
    pub fn compatibility_warnings(&self) -> Vec<String> {
        let t0 = 0.0;
        let mut warnings = Vec::new();
        for (name, x, g) in [("left", self.a, &self.g1), ("right", self.b, &self.g2)] {
            let phi = (self.phi)(x);
            let g0 = g(t0);
            if (phi - g0).abs() > 1e-10 * (1.0 + phi.abs()) {
                warnings.push(format!("{name} boundary: phi({x}) = {phi} but g(0+) = {g0}"));
            }
        }
        warnings
    }
}

/// Mesh and step counts. `n = 0` is allowed and yields only the initial level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discretization {
    /// Number of spatial intervals.
    pub m: usize,
    /// Number of time steps.
    pub n: usize,
    pub p: f64,
    pub mode: BasisMode,
    pub a: f64,
    pub horizon: f64,
    pub h: f64,
    pub tau: f64,
}

impl Discretization {
    pub fn new(spec: &ProblemSpec, m: usize, n: usize, p: f64) -> Result<Self> {
        spec.validate()?;
        if m < 2 {
            return Err(Error::param("M", format!("need at least 2 intervals, got {m}")));
        }
        let h = (spec.b - spec.a) / m as f64;
        let disc = Discretization {
            m,
            n,
            p,
            mode: BasisMode::Exponential,
            a: spec.a,
            horizon: spec.horizon,
            h,
            tau: if n == 0 { spec.horizon } else { spec.horizon / n as f64 },
        };
        disc.basis()?;
        Ok(disc)
    }

    pub fn with_mode(mut self, mode: BasisMode) -> Result<Self> {
        self.mode = mode;
        self.basis()?;
        Ok(self)
    }

    pub fn cubic_limit(self) -> Self {
        Discretization {
            mode: BasisMode::CubicLimit,
            ..self
        }
    }

    pub fn shape(&self) -> Result<SplineShape> {
        SplineShape::new(self.p, self.h)
    }

    pub fn basis(&self) -> Result<SplineBasis> {
        SplineBasis::new(self.shape()?, self.mode)
    }

    /// `x_j = a + j h`; `j` may be `-1` or `M + 1`.
    pub fn node(&self, j: isize) -> f64 {
        self.a + j as f64 * self.h
    }

    /// `t_n = T n / N`, exact at the endpoints and at rational fractions of `T`.
    pub fn time(&self, level: usize) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.horizon * level as f64 / self.n as f64
        }
    }

    /// Level whose time is closest to `t`.
    pub fn level_at(&self, t: f64) -> usize {
        if self.n == 0 {
            return 0;
        }
        ((t / self.horizon) * self.n as f64).round().clamp(0.0, self.n as f64) as usize
    }
}

/// How `phi'` at the two ends was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeSource {
    Exact,
    FiniteDifference,
}

/// Time-independent matrices of the scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledOperators {
    /// Left-hand matrix `A`; the `rhs` field is unused (zero).
    pub a_matrix: TriDiagonalSystem,
    /// Interior row of `B`: `(d1, 2 d2, d1)`.
    pub b_stencil: [f64; 3],
    pub a_scalar: f64,
    pub aprime_scalar: f64,
    /// `2 tau^alpha kappa p^3 h s (c - 1)`.
    pub boundary_diag: f64,
    pub weights: CollocationWeights,
    /// `tau^alpha`
    pub tau_alpha: f64,
    /// `tau^alpha kappa`
    pub diffusion: f64,
}

pub fn assemble_operators(spec: &ProblemSpec, disc: &Discretization) -> Result<AssembledOperators> {
    let weights = disc.basis()?.weights();
    assemble_with_weights(spec, disc, weights)
}

/// Same as [`assemble_operators`] with caller-supplied collocation weights.
pub fn assemble_with_weights(
    spec: &ProblemSpec,
    disc: &Discretization,
    weights: CollocationWeights,
) -> Result<AssembledOperators> {
    spec.validate()?;
    let tau_alpha = disc.tau.powf(spec.alpha);
    let diffusion = tau_alpha * spec.kappa;
    let CollocationWeights { d1, d2, p2s, pc1, h } = weights;
    let a_scalar = -diffusion * p2s + d1;
    let aprime_scalar = 2.0 * diffusion * p2s + 2.0 * d2;
    let boundary_diag = 2.0 * diffusion * p2s * h * pc1;

    let size = disc.m + 1;
    let mut lower = vec![a_scalar; size - 1];
    let mut diag = vec![aprime_scalar; size];
    let mut upper = vec![a_scalar; size - 1];
    diag[0] = boundary_diag;
    diag[size - 1] = boundary_diag;
    upper[0] = 0.0;
    lower[size - 2] = 0.0;
    Ok(AssembledOperators {
        a_matrix: TriDiagonalSystem {
            lower,
            diag,
            upper,
            rhs: vec![0.0; size],
        },
        b_stencil: [d1, 2.0 * d2, d1],
        a_scalar,
        aprime_scalar,
        boundary_diag,
        weights,
        tau_alpha,
        diffusion,
    })
}

/// All coefficient vectors `(alpha_{-1}^n, ..., alpha_{M+1}^n)` for `n = 0..`,
/// plus the cached products `B alpha^n` used by the history sums.
#[derive(Debug, Clone)]
pub struct CoefficientHistory {
    disc: Discretization,
    weights: CollocationWeights,
    basis: SplineBasis,
    slope_source: SlopeSource,
    /// Row-major, `M + 3` per level.
    coefficients: Vec<f64>,
    /// Row-major, `M + 1` per level; rows 0 and M are zero.
    b_products: Vec<f64>,
    /// `(u(a, t_n), u(b, t_n))` as imposed; level 0 holds `(phi(a), phi(b))`.
    boundary: Vec<[f64; 2]>,
}

/// A freshly computed time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    /// `M + 3` coefficients including both ghosts.
    pub coefficients: Vec<f64>,
    /// Boundary values imposed at this level.
    pub boundary: [f64; 2],
}

impl CoefficientHistory {
    fn new(disc: Discretization, weights: CollocationWeights, slope_source: SlopeSource) -> Result<Self> {
        let levels = disc.n + 1;
        Ok(CoefficientHistory {
            basis: disc.basis()?,
            disc,
            weights,
            slope_source,
            coefficients: Vec::with_capacity(levels * (disc.m + 3)),
            b_products: Vec::with_capacity(levels * (disc.m + 1)),
            boundary: Vec::with_capacity(levels),
        })
    }

    /// Number of stored levels.
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn disc(&self) -> &Discretization {
        &self.disc
    }

    pub fn weights(&self) -> &CollocationWeights {
        &self.weights
    }

    pub fn basis(&self) -> &SplineBasis {
        &self.basis
    }

    pub fn slope_source(&self) -> SlopeSource {
        self.slope_source
    }

    /// Full coefficient vector of level `n`, ghosts included (index 0 is `alpha_{-1}`).
    pub fn level(&self, n: usize) -> Result<&[f64]> {
        if n >= self.len() {
            return Err(Error::MissingLevel(n));
        }
        let w = self.disc.m + 3;
        Ok(&self.coefficients[n * w..(n + 1) * w])
    }

    /// Cached `B alpha^n` (length `M + 1`).
    pub fn b_product(&self, n: usize) -> Result<&[f64]> {
        if n >= self.len() {
            return Err(Error::MissingLevel(n));
        }
        let w = self.disc.m + 1;
        Ok(&self.b_products[n * w..(n + 1) * w])
    }

    pub fn boundary_values(&self, n: usize) -> Result<[f64; 2]> {
        self.boundary.get(n).copied().ok_or(Error::MissingLevel(n))
    }

    pub fn time(&self, n: usize) -> f64 {
        self.disc.time(n)
    }

    /// `u_N(x_j, t_n)` for `j = 0..=M`, from the knot stencil.
    pub fn nodal_values(&self, n: usize) -> Result<Vec<f64>> {
        let coeffs = self.level(n)?;
        let v = self.weights.neighbour_value();
        Ok(coeffs
            .windows(3)
            .map(|w| v * w[0] + w[1] + v * w[2])
            .collect())
    }

    pub fn push(&mut self, level: Level) -> Result<()> {
        let m = self.disc.m;
        if level.coefficients.len() != m + 3 {
            return Err(Error::LengthMismatch {
                expected: m + 3,
                actual: level.coefficients.len(),
            });
        }
        let CollocationWeights { d1, d2, .. } = self.weights;
        let c = &level.coefficients;
        self.b_products.push(0.0);
        // c[j + 1] is alpha_j.
        self.b_products
            .extend((1..m).map(|j| d1 * c[j] + 2.0 * d2 * c[j + 1] + d1 * c[j + 2]));
        self.b_products.push(0.0);
        self.coefficients.extend_from_slice(c);
        self.boundary.push(level.boundary);
        Ok(())
    }

    /// Recompute both ghosts of level `n >= 1` from the stored boundary values.
    pub fn recovered_ghosts(&self, n: usize) -> Result<[f64; 2]> {
        let c = self.level(n)?;
        let [left, right] = self.boundary_values(n)?;
        Ok(recover_ghosts(&c[1..c.len() - 1], left, right, &self.weights))
    }
}

fn recover_ghosts(interior: &[f64], left: f64, right: f64, weights: &CollocationWeights) -> [f64; 2] {
    let v = weights.neighbour_value();
    let m = interior.len() - 1;
    [
        (left - interior[0]) / v - interior[1],
        (right - interior[m]) / v - interior[m - 1],
    ]
}

/// One-sided fourth-order first derivative at `x0` stepping by `h` (negative
/// `h` steps to the left); second order when fewer than five nodes exist.
fn one_sided_slope(phi: &ScalarFn, x0: f64, h: f64, m: usize) -> f64 {
    let f = |k: f64| phi(x0 + k * h);
    if m >= 4 {
        (-25.0 * f(0.0) + 48.0 * f(1.0) - 36.0 * f(2.0) + 16.0 * f(3.0) - 3.0 * f(4.0)) / (12.0 * h)
    } else {
        (-3.0 * f(0.0) + 4.0 * f(1.0) - f(2.0)) / (2.0 * h)
    }
}

pub fn slope_source(spec: &ProblemSpec) -> SlopeSource {
    if spec.phi_prime.is_some() {
        SlopeSource::Exact
    } else {
        SlopeSource::FiniteDifference
    }
}

/// Level-0 coefficients (ghosts included) from
/// `u_N(x_j, 0) = phi(x_j)`, `u_N'(a, 0) = phi'(a)`, `u_N'(b, 0) = phi'(b)`.
pub fn initial_coefficients(spec: &ProblemSpec, disc: &Discretization) -> Result<Vec<f64>> {
    let weights = disc.basis()?.weights();
    initial_with_weights(spec, disc, &weights)
}

fn initial_with_weights(spec: &ProblemSpec, disc: &Discretization, weights: &CollocationWeights) -> Result<Vec<f64>> {
    spec.validate()?;
    let m = disc.m;
    let CollocationWeights { d1, d2, pc1, .. } = *weights;
    let phi: Vec<f64> = (0..=m).map(|j| (spec.phi)(disc.node(j as isize))).collect();
    let (slope_a, slope_b) = match &spec.phi_prime {
        Some(dphi) => (dphi(spec.a), dphi(spec.b)),
        None => (
            one_sided_slope(&spec.phi, spec.a, disc.h, m),
            one_sided_slope(&spec.phi, spec.b, -disc.h, m),
        ),
    };

    let mut diag = vec![2.0 * d2; m + 1];
    diag[0] = d2;
    diag[m] = d2;
    let mut rhs: Vec<f64> = phi.iter().map(|&v| 2.0 * d2 * v).collect();
    rhs[0] = d2 * (phi[0] + d1 * slope_a / pc1);
    rhs[m] = d2 * (phi[m] - d1 * slope_b / pc1);
    let off = vec![d1; m];
    let mut scratch = vec![0.0; m + 1];
    thomas_in_place(&off, &diag, &off, &mut rhs, &mut scratch)?;

    let mut full = Vec::with_capacity(m + 3);
    full.push(rhs[1] - 2.0 * d2 * slope_a / pc1);
    full.extend_from_slice(&rhs);
    full.push(rhs[m - 1] + 2.0 * d2 * slope_b / pc1);
    Ok(full)
}

/// Compute level `n` from levels `0..n`. `n` must equal `history.len()`.
pub fn advance(
    history: &CoefficientHistory,
    n: usize,
    ops: &AssembledOperators,
    weights: &GmmpWeights,
    spec: &ProblemSpec,
) -> Result<Level> {
    if n == 0 || n != history.len() {
        return Err(Error::param(
            "n",
            format!("next level must be {} (have {} levels)", history.len(), history.len()),
        ));
    }
    if weights.len() < n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: weights.len(),
        });
    }
    let disc = history.disc();
    let m = disc.m;
    let width = m + 1;
    let omega = weights.omega();
    let start_weight = weights.partial_sums()[n - 1];
    let CollocationWeights { d1, d2, p2s, .. } = ops.weights;
    let t = disc.time(n);

    // sum_{k=0}^{n-1} w_k B alpha^0 - sum_{k=1}^{n-1} w_k B alpha^{n-k}
    let mut rhs: Vec<f64> = history.b_products[..width].iter().map(|v| start_weight * v).collect();
    let older = history.b_products[width..n * width].chunks_exact(width).rev();
    for (&w, row) in omega[1..n].iter().zip(older) {
        for (r, b) in rhs.iter_mut().zip(row) {
            *r -= w * b;
        }
    }

    let tau_alpha = ops.tau_alpha;
    for (j, r) in rhs.iter_mut().enumerate().take(m).skip(1) {
        *r += 2.0 * tau_alpha * d2 * (spec.source)(disc.node(j as isize), t);
    }

    let g1 = (spec.g1)(t);
    let g2 = (spec.g2)(t);
    let [phi_a, phi_b] = history.boundary[0];
    // sum_{k=0}^{n-1} w_k g^{n-k}, where g^n is the value being imposed now.
    let boundary_history = |side: usize, current: f64| {
        let older = history.boundary[1..n].iter().rev();
        current + omega[1..n].iter().zip(older).map(|(w, g)| w * g[side]).sum::<f64>()
    };
    let d_left = -2.0 * d1 * boundary_history(0, g1) + 2.0 * d1 * start_weight * phi_a + 2.0 * ops.diffusion * p2s * g1;
    let d_right = -2.0 * d1 * boundary_history(1, g2) + 2.0 * d1 * start_weight * phi_b + 2.0 * ops.diffusion * p2s * g2;
    rhs[0] = d2 * (2.0 * tau_alpha * d1 * (spec.source)(spec.a, t) + d_left);
    rhs[m] = d2 * (2.0 * tau_alpha * d1 * (spec.source)(spec.b, t) + d_right);

    let mut scratch = vec![0.0; width];
    let a = &ops.a_matrix;
    thomas_in_place(&a.lower, &a.diag, &a.upper, &mut rhs, &mut scratch)?;

    let [ghost_left, ghost_right] = recover_ghosts(&rhs, g1, g2, &ops.weights);
    let mut coefficients = Vec::with_capacity(m + 3);
    coefficients.push(ghost_left);
    coefficients.extend_from_slice(&rhs);
    coefficients.push(ghost_right);
    Ok(Level {
        coefficients,
        boundary: [g1, g2],
    })
}

/// Run the scheme from the initial level through `t_N`.
pub fn solve(spec: &ProblemSpec, disc: &Discretization) -> Result<CoefficientHistory> {
    let ops = assemble_operators(spec, disc)?;
    solve_with_operators(spec, disc, &ops)
}

/// [`solve`] with pre-assembled (possibly rescaled) operators.
pub fn solve_with_operators(
    spec: &ProblemSpec,
    disc: &Discretization,
    ops: &AssembledOperators,
) -> Result<CoefficientHistory> {
    spec.validate()?;
    let gmmp = GmmpWeights::new(spec.alpha, disc.n)?;
    let mut history = CoefficientHistory::new(*disc, ops.weights, slope_source(spec))?;
    let initial = initial_with_weights(spec, disc, &ops.weights)?;
    history.push(Level {
        coefficients: initial,
        boundary: [(spec.phi)(spec.a), (spec.phi)(spec.b)],
    })?;
    for n in 1..=disc.n {
        let level = advance(&history, n, ops, &gmmp, spec)?;
        history.push(level)?;
    }
    Ok(history)
}

/// `u_N(x, t_n)` using the (at most four) basis functions supported at `x`.
pub fn reconstruct(history: &CoefficientHistory, n: usize, x: f64) -> Result<f64> {
    let disc = history.disc();
    let b = disc.a + disc.m as f64 * disc.h;
    let slack = 1e-12 * (b - disc.a);
    if !(x >= disc.a - slack && x <= b + slack) {
        return Err(Error::Range {
            value: x,
            reason: "reconstruction point outside [a, b]",
        });
    }
    let coeffs = history.level(n)?;
    let m = disc.m as isize;
    let cell = (((x - disc.a) / disc.h).floor() as isize).clamp(0, m - 1);
    let basis = history.basis();
    let mut value = 0.0;
    for j in (cell - 1).max(-1)..=(cell + 2).min(m + 1) {
        let bj = basis.eval(disc.node(j), x, Order::Value);
        value += coeffs[(j + 1) as usize] * bj;
    }
    Ok(value)
}
