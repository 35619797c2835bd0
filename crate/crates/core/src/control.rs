//! Time path of the allocation under the optimal-control formulation.
//!
//! The performance index `J = integral of a*x^2 - b*y^2 dt` with
//! Hamiltonian `H = (a*x^2 - b*y^2) + lambda*y` yields the costate
//! relation `lambda = 2b*y` and collapses to the scalar linear ODE
//!
//! ```text
//! dy/dt = -(a/b) * x,   x = 1 - y,   y(0) = 1 - x0
//! ```
//!
//! whose closed form is `x(t) = x0 * exp((a/b) * t)`. `a < 0` drifts the
//! investor toward the risk-free asset, `a > 0` compounds the market
//! position, `a = 0` freezes it.
//!
//! The problem is treated as an initial-value problem from the given
//! `x0`; no terminal state or transversality condition is imposed, and
//! trajectories are not clipped at `x = 0`. A crossing into negative
//! market fractions is reported by
//! [`Trajectory::first_time_market_fraction_negative`] instead.

use thiserror::Error;

use crate::utility::QuadraticUtilityParams;

/// Sample times within this relative tolerance of an exact multiple of
/// the step count as uniform (the last step is then pinned to the
/// horizon rather than emitted as a sliver).
const CLEAN_DIVISION_TOL: f64 = 1e-12;

/// Gap tolerance of the uniform-spacing check in [`performance_index`].
const UNIFORM_SPACING_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("b must be non-zero; the costate relation divides by it")]
    ZeroRiskCoefficient,
    #[error("horizon must be positive and finite, got {horizon}")]
    InvalidHorizon { horizon: f64 },
    #[error("step must satisfy 0 < step <= horizon, got step {step} with horizon {horizon}")]
    InvalidStep { step: f64, horizon: f64 },
    #[error("a, b, and x0 must all be finite")]
    NonFiniteInput,
    #[error("|a/b| * step = {product} exceeds 1; shrink the step")]
    StepTooLarge { product: f64 },
    #[error("sample spacing is not uniform: gap {got} after sample {index}, expected {expected}")]
    NonUniformSpacing { index: usize, got: f64, expected: f64 },
    #[error("performance index needs at least one sample")]
    EmptyTrajectory,
}

/// Initial-value problem for the allocation path: integrand
/// coefficients, initial market fraction, horizon, and integrator step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlProblem {
    params: QuadraticUtilityParams,
    x0: f64,
    horizon_t: f64,
    step: f64,
}

impl ControlProblem {
    pub fn new(
        params: QuadraticUtilityParams,
        x0: f64,
        horizon_t: f64,
        step: f64,
    ) -> Result<Self, ControlError> {
        if !params.a.is_finite() || !params.b.is_finite() || !x0.is_finite() {
            return Err(ControlError::NonFiniteInput);
        }
        if params.b == 0.0 {
            return Err(ControlError::ZeroRiskCoefficient);
        }
        if !(horizon_t > 0.0) || !horizon_t.is_finite() {
            return Err(ControlError::InvalidHorizon { horizon: horizon_t });
        }
        if !(step > 0.0) || !(step <= horizon_t) {
            return Err(ControlError::InvalidStep {
                step,
                horizon: horizon_t,
            });
        }
        Ok(Self {
            params,
            x0,
            horizon_t,
            step,
        })
    }

    /// Same problem with the step defaulted to `horizon_t / 1000`.
    pub fn with_default_step(
        params: QuadraticUtilityParams,
        x0: f64,
        horizon_t: f64,
    ) -> Result<Self, ControlError> {
        Self::new(params, x0, horizon_t, horizon_t / 1000.0)
    }

    pub fn params(&self) -> QuadraticUtilityParams {
        self.params
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn horizon_t(&self) -> f64 {
        self.horizon_t
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Exponential rate `a/b` of the closed-form solution.
    pub fn growth_rate(&self) -> f64 {
        self.params.a / self.params.b
    }

    /// Sample grid `0, step, 2*step, ..., horizon_t`.
    ///
    /// When the step divides the horizon (within 1e-12 relative) the
    /// last sample is pinned to the horizon exactly; otherwise a final
    /// partial step closes the remaining gap.
    fn sample_times(&self) -> Vec<f64> {
        let t_end = self.horizon_t;
        let h = self.step;
        let ratio = t_end / h;
        let rounded = ratio.round();
        let clean =
            rounded >= 1.0 && (rounded * h - t_end).abs() <= CLEAN_DIVISION_TOL * t_end.max(1.0);
        let n = if clean { rounded } else { ratio.floor() } as usize;
        let mut times: Vec<f64> = (0..=n).map(|k| k as f64 * h).collect();
        if clean {
            times[n] = t_end;
        } else if times[n] < t_end {
            times.push(t_end);
        }
        times
    }

    /// Closed-form trajectory `x(t) = x0 * exp((a/b) * t)` on the sample
    /// grid.
    pub fn analytic_trajectory(&self) -> Trajectory {
        let g = self.growth_rate();
        let samples = self
            .sample_times()
            .into_iter()
            .map(|t| {
                let x = if t == 0.0 { self.x0 } else { self.x0 * (g * t).exp() };
                TrajectorySample { t, x, y: 1.0 - x }
            })
            .collect();
        Trajectory { samples }
    }

    /// Classical fixed-step 4th-order Runge-Kutta integration of
    /// `dy/dt = -(a/b) * (1 - y)` from `y(0) = 1 - x0`, sampled on the
    /// same grid as [`ControlProblem::analytic_trajectory`].
    pub fn integrate_trajectory(&self) -> Result<Trajectory, ControlError> {
        let g = self.growth_rate();
        let product = g.abs() * self.step;
        if product > 1.0 {
            return Err(ControlError::StepTooLarge { product });
        }
        let f = |y: f64| -g * (1.0 - y);
        let times = self.sample_times();
        let mut samples = Vec::with_capacity(times.len());
        let mut y = 1.0 - self.x0;
        // The first sample carries x0 as given; 1 - (1 - x0) can lose
        // the low bits of a tiny x0.
        samples.push(TrajectorySample {
            t: times[0],
            x: self.x0,
            y,
        });
        for w in times.windows(2) {
            let h = w[1] - w[0];
            let k1 = f(y);
            let k2 = f(y + 0.5 * h * k1);
            let k3 = f(y + 0.5 * h * k2);
            let k4 = f(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            samples.push(TrajectorySample {
                t: w[1],
                x: 1.0 - y,
                y,
            });
        }
        Ok(Trajectory { samples })
    }
}

/// Hamiltonian `H = (a*x^2 - b*y^2) + lambda*y` of the control problem.
pub fn hamiltonian(params: &QuadraticUtilityParams, x: f64, y: f64, lambda: f64) -> f64 {
    params.evaluate(x, y) + lambda * y
}

/// Costate along the optimal path, `lambda = 2b*y` (the stationarity of
/// the Hamiltonian in the control `y`).
pub fn costate(params: &QuadraticUtilityParams, y: f64) -> f64 {
    2.0 * params.b * y
}

/// Allocation path sample: time, market fraction, risk-free fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// Ordered allocation path from `t = 0` to the horizon inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
}

impl Trajectory {
    /// Wraps externally produced samples, e.g. to integrate a hand-built
    /// path. Operations validate the properties they rely on.
    pub fn from_samples(samples: Vec<TrajectorySample>) -> Self {
        Self { samples }
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn final_sample(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    /// Time of the first sample with a negative market fraction, if the
    /// path crosses the `x = 0` boundary.
    pub fn first_time_market_fraction_negative(&self) -> Option<f64> {
        self.samples.iter().find(|s| s.x < 0.0).map(|s| s.t)
    }
}

/// Composite-trapezoid approximation of
/// `J = integral of a*x(t)^2 - b*y(t)^2 dt` over the trajectory samples.
///
/// The samples must be uniformly spaced (gap within
/// `1e-9 * max(1, gap)` of the first gap); a single-sample trajectory
/// integrates to 0.
pub fn performance_index(
    params: &QuadraticUtilityParams,
    trajectory: &Trajectory,
) -> Result<f64, ControlError> {
    let samples = trajectory.samples();
    if samples.is_empty() {
        return Err(ControlError::EmptyTrajectory);
    }
    if samples.len() == 1 {
        return Ok(0.0);
    }
    let expected = samples[1].t - samples[0].t;
    for (index, w) in samples.windows(2).enumerate() {
        let got = w[1].t - w[0].t;
        if (got - expected).abs() > UNIFORM_SPACING_TOL * expected.max(1.0) {
            return Err(ControlError::NonUniformSpacing {
                index,
                got,
                expected,
            });
        }
    }
    let mut j = 0.0;
    for w in samples.windows(2) {
        let f0 = params.evaluate(w[0].x, w[0].y);
        let f1 = params.evaluate(w[1].x, w[1].y);
        j += 0.5 * (f0 + f1) * (w[1].t - w[0].t);
    }
    Ok(j)
}
