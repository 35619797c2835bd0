//! Constrained utility maximization and investor classification.
//!
//! The investor maximizes `U(x, y) = a*x^2 - b*y^2` subject to
//! `x + y = 1`, where `x` is the market fraction (kept non-negative) and
//! `y` the risk-free fraction (negative `y` means borrowing). The
//! Lagrangian first-order system
//!
//! ```text
//! 2a*x - lambda = 0,   -2b*y - lambda = 0,   1 - x - y = 0
//! ```
//!
//! has the closed-form stationary point implemented by
//! [`solve_allocation`]; the bordered Hessian `2(b - a)` decides whether
//! it is a maximum, and [`classify`] reads the investor class off the
//! optimal fractions.

use std::fmt;

use thiserror::Error;

/// Coefficients are treated as degenerate when `|a - b|` is at or below
/// this bound; the first-order system then has no solution.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Magnitude under which a derivative is treated as zero.
pub const ZERO_SLOPE_TOL: f64 = 1e-12;

/// Default width of the neutral (class B) tie band in [`classify`].
pub const CLASS_B_TIE_TOL: f64 = 1e-9;

/// Relative step for all finite-difference probes.
const FD_STEP: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UtilityError {
    #[error("coefficients a = {a} and b = {b} coincide; the allocation problem is degenerate")]
    DegenerateCoefficients { a: f64, b: f64 },
    #[error("finite-difference probe returned a non-finite value near ({x}, {y})")]
    NonFiniteDerivative { x: f64, y: f64 },
    #[error("marginal utility in y vanishes at ({x}, {y}); the indifference-curve slope is undefined")]
    DivisionByZeroSlope { x: f64, y: f64 },
    #[error("marginal utility vanishes at w = {w}; risk aversion is undefined")]
    ZeroMarginalUtility { w: f64 },
    #[error("variance must be non-negative, got {variance}")]
    NegativeVariance { variance: f64 },
}

/// Coefficients of the allocation utility `U(x, y) = a*x^2 - b*y^2`.
///
/// `a` weighs the market fraction, `b` penalizes the risk-free fraction.
/// Any pair is representable; operations that need `a != b` or `b > a`
/// report it through errors or flags rather than at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticUtilityParams {
    pub a: f64,
    pub b: f64,
}

impl QuadraticUtilityParams {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// Utility of an arbitrary split `(x, y)`.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.a * x * x - self.b * y * y
    }
}

/// Diagnostics attached to an [`AllocationSolution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionFlags {
    /// The bordered Hessian `2(b - a)` is positive, so the stationary
    /// point is a constrained maximum.
    pub is_maximum: bool,
    /// `x* >= 0`: the market fraction respects its sign constraint.
    pub is_feasible: bool,
    /// Disagreement between the two first-order expressions for the
    /// multiplier, `|2a*x* - (-2b*y*)|`. Zero up to rounding; anything
    /// above 1e-9 signals an internal inconsistency.
    pub lambda_residual: f64,
}

/// Stationary point of the constrained allocation problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationSolution {
    /// Optimal market fraction `x* = -b/(a - b)`.
    pub x_star: f64,
    /// Optimal risk-free fraction `y* = a/(a - b)`.
    pub y_star: f64,
    /// Multiplier `lambda* = 2a*x*`.
    pub lambda_star: f64,
    /// Optimal utility `U* = -a*b/(a - b)`.
    pub u_star: f64,
    pub flags: SolutionFlags,
}

/// Solves `max a*x^2 - b*y^2` subject to `x + y = 1`.
///
/// Returns the closed-form stationary point. A non-positive bordered
/// Hessian or a negative `x*` does not reject the solution; both are
/// reported through [`SolutionFlags`] so callers can still inspect the
/// stationary point itself.
pub fn solve_allocation(
    params: &QuadraticUtilityParams,
) -> Result<AllocationSolution, UtilityError> {
    let QuadraticUtilityParams { a, b } = *params;
    let d = a - b;
    if !(d.abs() > DEGENERACY_TOL) {
        return Err(UtilityError::DegenerateCoefficients { a, b });
    }
    let x_star = -b / d;
    let y_star = a / d;
    let lambda_star = 2.0 * a * x_star;
    let lambda_residual = (lambda_star - (-2.0 * b * y_star)).abs();
    Ok(AllocationSolution {
        x_star,
        y_star,
        lambda_star,
        u_star: -(a * b) / d,
        flags: SolutionFlags {
            is_maximum: bordered_hessian(params) > 0.0,
            is_feasible: x_star >= 0.0,
            lambda_residual,
        },
    })
}

/// Bordered Hessian of the quadratic problem: `2(b - a)`.
///
/// Positive means the stationary point of [`solve_allocation`] is a
/// constrained maximum.
pub fn bordered_hessian(params: &QuadraticUtilityParams) -> f64 {
    2.0 * (params.b - params.a)
}

/// Probe points exactly symmetric about `center`.
///
/// The mirrored point `2*center - plus` is exact in IEEE arithmetic
/// (doubling is exact and the subtraction falls under Sterbenz's lemma),
/// so both realized offsets agree to the last bit and no first-derivative
/// term leaks into second differences.
fn symmetric_probes(center: f64, h: f64) -> (f64, f64, f64) {
    let plus = center + h;
    let minus = 2.0 * center - plus;
    (plus, minus, plus - center)
}

fn fd_step(scale: f64) -> f64 {
    FD_STEP * scale.max(1.0)
}

/// Bordered Hessian `2*f_xy - f_xx - f_yy` of an arbitrary utility under
/// the budget constraint, estimated by central differences at `(x, y)`
/// with step `1e-5 * max(1, |x|, |y|)`.
pub fn bordered_hessian_general<F>(f: F, x: f64, y: f64) -> Result<f64, UtilityError>
where
    F: Fn(f64, f64) -> f64,
{
    let h = fd_step(x.abs().max(y.abs()));
    let (xp, xm, hx) = symmetric_probes(x, h);
    let (yp, ym, hy) = symmetric_probes(y, h);
    let f00 = f(x, y);
    let fxx = ((f(xp, y) - f00) + (f(xm, y) - f00)) / (hx * hx);
    let fyy = ((f(x, yp) - f00) + (f(x, ym) - f00)) / (hy * hy);
    let fxy = (f(xp, yp) - f(xp, ym) - f(xm, yp) + f(xm, ym)) / (4.0 * hx * hy);
    let value = 2.0 * fxy - fxx - fyy;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(UtilityError::NonFiniteDerivative { x, y })
    }
}

/// Marginal rate of substitution `-f_x/f_y` at `(x, y)`, by central
/// differences with step `1e-5 * max(1, |x|, |y|)`.
pub fn marginal_rate_of_substitution<F>(f: F, x: f64, y: f64) -> Result<f64, UtilityError>
where
    F: Fn(f64, f64) -> f64,
{
    let h = fd_step(x.abs().max(y.abs()));
    let (xp, xm, hx) = symmetric_probes(x, h);
    let (yp, ym, hy) = symmetric_probes(y, h);
    let fx = (f(xp, y) - f(xm, y)) / (2.0 * hx);
    let fy = (f(x, yp) - f(x, ym)) / (2.0 * hy);
    if !fx.is_finite() || !fy.is_finite() {
        return Err(UtilityError::NonFiniteDerivative { x, y });
    }
    if fy.abs() < ZERO_SLOPE_TOL {
        return Err(UtilityError::DivisionByZeroSlope { x, y });
    }
    Ok(-fx / fy)
}

/// Investor class read off the optimal fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvestorClass {
    /// `y* < x*` with `y* <= 0`: borrows at the risk-free rate to hold a
    /// leveraged market position. Code `A+`.
    OvertlyAggressive,
    /// `y* < x*` with `y* > 0`: tilts toward the market. Code `A`.
    Aggressive,
    /// `y* = x*` within the tie tolerance. Code `B`.
    Neutral,
    /// `y* > x*`: tilts toward the risk-free asset. Code `C`.
    Conservative,
}

impl InvestorClass {
    /// Short report code: `A+`, `A`, `B`, or `C`.
    pub fn code(&self) -> &'static str {
        match self {
            InvestorClass::OvertlyAggressive => "A+",
            InvestorClass::Aggressive => "A",
            InvestorClass::Neutral => "B",
            InvestorClass::Conservative => "C",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            InvestorClass::OvertlyAggressive => "overtly aggressive (leveraged market position)",
            InvestorClass::Aggressive => "aggressive (market-leaning split)",
            InvestorClass::Neutral => "neutral (even split)",
            InvestorClass::Conservative => "conservative (risk-free-leaning split)",
        }
    }
}

impl fmt::Display for InvestorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Classifies an investor from the optimal split.
///
/// The neutral band takes precedence: `|y* - x*| <= tie_tol` (scaled by
/// `max(1, |x*|, |y*|)` so the band stays meaningful for large leveraged
/// fractions) is class B regardless of sign. Outside the band, `y* < x*`
/// splits into A+ (`y* <= 0`) and A (`y* > 0`); `y* > x*` is C.
pub fn classify(solution: &AllocationSolution, tie_tol: f64) -> InvestorClass {
    let x = solution.x_star;
    let y = solution.y_star;
    let scale = 1.0_f64.max(x.abs()).max(y.abs());
    if (y - x).abs() <= tie_tol * scale {
        InvestorClass::Neutral
    } else if y < x {
        if y <= 0.0 {
            InvestorClass::OvertlyAggressive
        } else {
            InvestorClass::Aggressive
        }
    } else {
        InvestorClass::Conservative
    }
}

/// One-dimensional wealth utility `u(w)` over `w > 0`, tagged by family.
///
/// Tagged families get closed-form risk aversion; `Custom` maps are
/// probed by central differences at `w` and `w +- h` with
/// `h = 1e-5 * max(1, |w|)`.
pub enum UtilityFunction1D {
    /// `u(w) = ln(w)`.
    Logarithmic,
    /// `u(w) = -exp(-c*w)` with `c` the constant absolute risk aversion.
    Exponential { coefficient: f64 },
    /// Arbitrary twice-differentiable utility.
    Custom(Box<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl UtilityFunction1D {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        UtilityFunction1D::Custom(Box::new(f))
    }

    pub fn evaluate(&self, w: f64) -> f64 {
        match self {
            UtilityFunction1D::Logarithmic => w.ln(),
            UtilityFunction1D::Exponential { coefficient } => -(-coefficient * w).exp(),
            UtilityFunction1D::Custom(f) => f(w),
        }
    }
}

impl fmt::Debug for UtilityFunction1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UtilityFunction1D::Logarithmic => f.write_str("Logarithmic"),
            UtilityFunction1D::Exponential { coefficient } => f
                .debug_struct("Exponential")
                .field("coefficient", coefficient)
                .finish(),
            UtilityFunction1D::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Absolute risk aversion `ARA(w) = -u''(w)/u'(w)`.
///
/// Logarithmic yields `1/w`, exponential the constant `c`; `Custom`
/// utilities are probed by finite differences and rejected when the
/// marginal utility vanishes.
pub fn absolute_risk_aversion(u: &UtilityFunction1D, w: f64) -> Result<f64, UtilityError> {
    match u {
        UtilityFunction1D::Logarithmic => Ok(1.0 / w),
        UtilityFunction1D::Exponential { coefficient } => Ok(*coefficient),
        UtilityFunction1D::Custom(f) => {
            let h = fd_step(w.abs());
            let (wp, wm, hr) = symmetric_probes(w, h);
            let (fp, f0, fm) = (f(wp), f(w), f(wm));
            if !fp.is_finite() || !f0.is_finite() || !fm.is_finite() {
                return Err(UtilityError::NonFiniteDerivative { x: w, y: w });
            }
            let du = (fp - fm) / (2.0 * hr);
            if du.abs() < ZERO_SLOPE_TOL {
                return Err(UtilityError::ZeroMarginalUtility { w });
            }
            let d2u = ((fp - f0) + (fm - f0)) / (hr * hr);
            Ok(-d2u / du)
        }
    }
}

/// Risk premium `p = (variance/2) * ARA(w)` the investor would pay to
/// shed a small zero-mean gamble with the given variance.
pub fn risk_premium(u: &UtilityFunction1D, w: f64, variance: f64) -> Result<f64, UtilityError> {
    if !(variance >= 0.0) {
        return Err(UtilityError::NegativeVariance { variance });
    }
    Ok(0.5 * variance * absolute_risk_aversion(u, w)?)
}
