//! Exponential (tension) B-splines on a uniform mesh.
//!
//! Each basis function `B_j` is supported on `[x_{j-2}, x_{j+2}]`, is `C^2`,
//! and lies piecewise in `span{1, x, e^{px}, e^{-px}}`. As `p -> 0` the family
//! degenerates to the cubic B-splines (scaled by 3/2), which is exposed as
//! [`BasisMode::CubicLimit`].
//!
//! All quantities that are differences of nearly equal hyperbolic terms
//! (`sinh(ph) - ph`, `ph cosh(ph) - sinh(ph)`, `cosh(ph) - 1`) are evaluated by
//! series or half-angle forms so that they keep full relative accuracy for
//! small `ph`.

use crate::error::{Error, Result};

/// Below this value of `ph` the differences `s - ph` and `phc - s` are summed
/// from their Taylor series instead of being formed by subtraction.
pub const SERIES_THRESHOLD: f64 = 1.0;

/// Above this `ph` the inner pieces switch to the cancellation-free blend.
const INNER_BLEND_FROM: f64 = 2.0;

/// `sinh` overflows long before this matters, but `p^3 h s (c-1)` does not.
pub const MAX_PH: f64 = 350.0;

/// `sinh(x) - x`, accurate to a few ulps for all `x >= 0`.
pub fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        // x^3/3! + x^5/5! + ...
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        let mut k = 1.0;
        while term.abs() > f64::EPSILON * 0.01 * sum.abs() {
            term *= x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// `x cosh(x) - sinh(x)`, accurate to a few ulps for all `x >= 0`.
pub fn x_cosh_minus_sinh(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        // sum_{k>=1} 2k x^{2k+1} / (2k+1)!
        let x2 = x * x;
        let mut power_over_fact = x * x2 / 6.0;
        let mut sum = 2.0 * power_over_fact;
        let mut k = 1.0;
        loop {
            power_over_fact *= x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            k += 1.0;
            let term = 2.0 * k * power_over_fact;
            sum += term;
            if term.abs() <= f64::EPSILON * 0.01 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        x * x.cosh() - x.sinh()
    }
}

/// `cosh(x) - 1` via the half-angle identity.
pub fn cosh_minus_one(x: f64) -> f64 {
    let sh = (0.5 * x).sinh();
    2.0 * sh * sh
}

/// Tension and mesh constants shared by every basis function on the mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineShape {
    /// Tension parameter.
    pub p: f64,
    /// Mesh spacing.
    pub h: f64,
    /// `sinh(ph)`
    pub s: f64,
    /// `cosh(ph)`
    pub c: f64,
    /// `s - ph`
    pub d1: f64,
    /// `phc - s`
    pub d2: f64,
    /// `c - 1`
    pub cm1: f64,
}

impl SplineShape {
    pub fn new(p: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::param("h", format!("mesh spacing must be positive, got {h}")));
        }
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::param("p", format!("tension must be nonnegative, got {p}")));
        }
        let x = p * h;
        if x > MAX_PH {
            return Err(Error::Range {
                value: x,
                reason: "ph exceeds the overflow threshold",
            });
        }
        Ok(SplineShape {
            p,
            h,
            s: x.sinh(),
            c: x.cosh(),
            d1: sinh_minus_x(x),
            d2: x_cosh_minus_sinh(x),
            cm1: cosh_minus_one(x),
        })
    }

    pub fn ph(&self) -> f64 {
        self.p * self.h
    }
}

/// Shorthand for [`SplineShape::new`].
pub fn make_shape(p: f64, h: f64) -> Result<SplineShape> {
    SplineShape::new(p, h)
}

/// Which member of the spline family is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisMode {
    #[default]
    Exponential,
    /// The `p -> 0` limit: classical cubic B-splines scaled by 3/2.
    CubicLimit,
}

/// Derivative order for basis evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Value,
    First,
    Second,
}

impl TryFrom<u8> for Order {
    type Error = Error;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            0 => Ok(Order::Value),
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::param("order", format!("expected 0, 1 or 2, got {order}"))),
        }
    }
}

/// Values and derivatives of `B_j` at `x_{j-1}, x_j, x_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnotStencils {
    pub value: [f64; 3],
    pub deriv1: [f64; 3],
    pub deriv2: [f64; 3],
}

/// The four scalars the collocation scheme is built from, up to a common
/// positive factor: `d1 = s - ph`, `d2 = phc - s`, `p2s = p^2 s`,
/// `pc1 = p (c - 1)`.
///
/// In cubic-limit mode these are the leading Taylor coefficients after
/// dividing by `(ph)^3`, so every ratio the scheme uses is the exact limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollocationWeights {
    pub d1: f64,
    pub d2: f64,
    pub p2s: f64,
    pub pc1: f64,
    pub h: f64,
}

impl CollocationWeights {
    /// Multiply every weight by `factor`; ratios (and hence the stencils) are unchanged.
    pub fn scaled(&self, factor: f64) -> Self {
        CollocationWeights {
            d1: self.d1 * factor,
            d2: self.d2 * factor,
            p2s: self.p2s * factor,
            pc1: self.pc1 * factor,
            h: self.h,
        }
    }

    /// Knot value of a neighbouring basis function, `d1 / (2 d2)`.
    pub fn neighbour_value(&self) -> f64 {
        self.d1 / (2.0 * self.d2)
    }

    pub fn stencils(&self) -> KnotStencils {
        let v = self.neighbour_value();
        let g = self.pc1 / (2.0 * self.d2);
        let q = self.p2s / (2.0 * self.d2);
        KnotStencils {
            value: [v, 1.0, v],
            deriv1: [g, 0.0, -g],
            deriv2: [q, -2.0 * q, q],
        }
    }
}

/// A validated basis: a shape together with the mode it is evaluated in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineBasis {
    shape: SplineShape,
    mode: BasisMode,
}

impl SplineBasis {
    pub fn new(shape: SplineShape, mode: BasisMode) -> Result<Self> {
        if mode == BasisMode::Exponential && shape.p == 0.0 {
            return Err(Error::ZeroTension);
        }
        Ok(SplineBasis { shape, mode })
    }

    pub fn shape(&self) -> &SplineShape {
        &self.shape
    }

    pub fn mode(&self) -> BasisMode {
        self.mode
    }

    pub fn h(&self) -> f64 {
        self.shape.h
    }

    pub fn weights(&self) -> CollocationWeights {
        let sh = &self.shape;
        match self.mode {
            BasisMode::Exponential => CollocationWeights {
                d1: sh.d1,
                d2: sh.d2,
                p2s: sh.p * sh.p * sh.s,
                pc1: sh.p * sh.cm1,
                h: sh.h,
            },
            BasisMode::CubicLimit => CollocationWeights {
                d1: 1.0 / 6.0,
                d2: 1.0 / 3.0,
                p2s: 1.0 / (sh.h * sh.h),
                pc1: 0.5 / sh.h,
                h: sh.h,
            },
        }
    }

    pub fn stencils(&self) -> KnotStencils {
        self.weights().stencils()
    }

    /// `B_j(x)` (or a derivative) for the basis function centred at `center = x_j`.
    /// Exactly zero outside `(x_{j-2}, x_{j+2})`.
    pub fn eval(&self, center: f64, x: f64, order: Order) -> f64 {
        let h = self.shape.h;
        let r = x - center;
        let dist = r.abs();
        if dist >= 2.0 * h {
            return 0.0;
        }
        let piece = match (r < 0.0, dist <= h) {
            (true, true) => Piece::InnerLeft,
            (false, true) => Piece::InnerRight,
            (true, false) => Piece::OuterLeft,
            (false, false) => Piece::OuterRight,
        };
        self.eval_piece(piece, center, x, order)
    }

    /// Evaluate one of the four pieces at `x` regardless of whether `x` lies in
    /// that piece's interval. Used to check continuity at the junctions.
    pub fn eval_piece(&self, piece: Piece, center: f64, x: f64, order: Order) -> f64 {
        let h = self.shape.h;
        let r = x - center;
        // Everything is expressed through the distance from the centre; odd
        // derivatives pick up the sign of r.
        let (dist, sign) = match piece {
            Piece::InnerLeft | Piece::OuterLeft => (-r, -1.0),
            Piece::InnerRight | Piece::OuterRight => (r, 1.0),
        };
        let inner = matches!(piece, Piece::InnerLeft | Piece::InnerRight);
        let [f0, f1, f2] = match self.mode {
            BasisMode::Exponential => {
                if inner {
                    self.exp_inner(dist)
                } else {
                    self.exp_outer(2.0 * h - dist)
                }
            }
            BasisMode::CubicLimit => {
                if inner {
                    cubic_inner(dist / h, h)
                } else {
                    cubic_outer(2.0 - dist / h, h)
                }
            }
        };
        match order {
            Order::Value => f0,
            Order::First => sign * f1,
            Order::Second => f2,
        }
    }

    /// Inner piece as a function of distance `y` from the centre.
    fn exp_inner(&self, y: f64) -> [f64; 3] {
        if self.shape.ph() > INNER_BLEND_FROM {
            self.inner_blend(y)
        } else {
            self.inner_direct(y)
        }
    }

    /// `1 - (s/d2)(cosh(py) - 1) + ((1 + 2c)/(2 d2))(sinh(py) - py)`
    fn inner_direct(&self, y: f64) -> [f64; 3] {
        let SplineShape { p, s, c, d2, .. } = self.shape;
        let py = p * y;
        let k1 = s / d2;
        let k2 = (1.0 + 2.0 * c) / (2.0 * d2);
        [
            1.0 - k1 * cosh_minus_one(py) + k2 * sinh_minus_x(py),
            p * (-k1 * py.sinh() + k2 * cosh_minus_one(py)),
            p * p * (-k1 * py.cosh() + k2 * py.sinh()),
        ]
    }

    /// The same function written as `(sinh(py)/2 - sinh(p(h-y)))/d2` plus the
    /// linear part fixing the knot values. The direct form cancels terms of
    /// size `e^{ph}/ph` when `ph` is large; this one does not.
    fn inner_blend(&self, y: f64) -> [f64; 3] {
        let SplineShape { p, h, s, d1, d2, .. } = self.shape;
        let (near, far) = (p * (h - y), p * y);
        let ratio = s / d2;
        let slope = (0.5 * d1 / d2 - 0.5 * ratio - 1.0 - ratio) / h;
        [
            (0.5 * far.sinh() - near.sinh()) / d2 + (1.0 + ratio) + slope * y,
            p * (0.5 * far.cosh() + near.cosh()) / d2 + slope,
            p * p * (0.5 * far.sinh() - near.sinh()) / d2,
        ]
    }

    /// Outer piece as a function of `z`, the distance to the support end:
    /// `(sinh(pz) - pz) / (2 d2)`. Derivatives are with respect to distance
    /// from the centre, hence the sign flip on the first one.
    fn exp_outer(&self, z: f64) -> [f64; 3] {
        let SplineShape { p, d2, .. } = self.shape;
        let pz = p * z;
        let inv = 0.5 / d2;
        [
            inv * sinh_minus_x(pz),
            -inv * p * cosh_minus_one(pz),
            inv * p * p * pz.sinh(),
        ]
    }
}

fn cubic_inner(t: f64, h: f64) -> [f64; 3] {
    [
        1.0 - 1.5 * t * t + 0.75 * t * t * t,
        (-3.0 * t + 2.25 * t * t) / h,
        (-3.0 + 4.5 * t) / (h * h),
    ]
}

fn cubic_outer(u: f64, h: f64) -> [f64; 3] {
    [0.25 * u * u * u, -0.75 * u * u / h, 1.5 * u / (h * h)]
}

/// The four polynomial-exponential pieces of a basis function, left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    OuterLeft,
    InnerLeft,
    InnerRight,
    OuterRight,
}

/// Knot stencils of `B_j` for the given shape and mode.
pub fn knot_stencils(shape: &SplineShape, mode: BasisMode) -> Result<KnotStencils> {
    Ok(SplineBasis::new(*shape, mode)?.stencils())
}

/// `B_j(x)`, `B_j'(x)` or `B_j''(x)` with `center = x_j`.
pub fn eval_basis(basis: &SplineBasis, center: f64, x: f64, order: Order) -> f64 {
    basis.eval(center, x, order)
}

/// Closed-form piece coefficients in the classical McCartin parametrisation.
///
/// On `[x_j, x_{j+1}]` (with `y = x - x_j`) and mirrored on `[x_{j-1}, x_j]`:
/// `qa + qb y + qc e^{py} + qd e^{-py}`; on the outer intervals with
/// `z = x - x_{j+2}` (mirrored on the left): `qe z - (qe/p) sinh(pz)`.
///
/// These lose precision as `ph -> 0` (the terms cancel); [`SplineBasis::eval`]
/// uses an equivalent cancellation-free form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplinePieceCoefficients {
    pub qa: f64,
    pub qb: f64,
    pub qc: f64,
    pub qd: f64,
    pub qe: f64,
}

impl SplinePieceCoefficients {
    pub fn new(shape: &SplineShape) -> Result<Self> {
        if shape.p == 0.0 {
            return Err(Error::ZeroTension);
        }
        let SplineShape { p, s, c, d2, .. } = *shape;
        let x = shape.ph();
        let one_minus_c = -shape.cm1;
        let denom = d2 * one_minus_c;
        let em = (-x).exp();
        let ep = x.exp();
        Ok(SplinePieceCoefficients {
            qe: p / (2.0 * d2),
            qa: x * c / d2,
            qb: 0.5 * p * (c * shape.cm1 + s * s) / denom,
            qc: 0.25 * (em * one_minus_c + s * (em - 1.0)) / denom,
            qd: 0.25 * (ep * shape.cm1 + s * (ep - 1.0)) / denom,
        })
    }

    /// Evaluate `piece` of the basis function centred at `center`.
    pub fn eval(&self, shape: &SplineShape, piece: Piece, center: f64, x: f64, order: Order) -> f64 {
        let p = shape.p;
        let h = shape.h;
        let (y, sign) = match piece {
            Piece::InnerLeft | Piece::OuterLeft => (center - x, -1.0),
            Piece::InnerRight | Piece::OuterRight => (x - center, 1.0),
        };
        let derivs = match piece {
            Piece::InnerLeft | Piece::InnerRight => {
                let ep = (p * y).exp();
                let em = (-p * y).exp();
                [
                    self.qa + self.qb * y + self.qc * ep + self.qd * em,
                    self.qb + p * (self.qc * ep - self.qd * em),
                    p * p * (self.qc * ep + self.qd * em),
                ]
            }
            Piece::OuterLeft | Piece::OuterRight => {
                let z = y - 2.0 * h;
                [
                    self.qe * z - self.qe / p * (p * z).sinh(),
                    self.qe - self.qe * (p * z).cosh(),
                    -self.qe * p * (p * z).sinh(),
                ]
            }
        };
        match order {
            Order::Value => derivs[0],
            Order::First => sign * derivs[1],
            Order::Second => derivs[2],
        }
    }
}
