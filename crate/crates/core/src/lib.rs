//! Fund allocation between a market portfolio and a risk-free asset.
//!
//! The model splits one unit of capital into a market fraction `x` and a
//! risk-free fraction `y = 1 - x`, maximizing the quadratic utility
//! `U(x, y) = a*x^2 - b*y^2` under the budget constraint. From the
//! closed-form optimum the crate derives:
//!
//! * a four-way investor classification (A+, A, B, C) read off the
//!   ordering and signs of the optimal fractions ([`utility`]),
//! * the induced point on the capital market line ([`capm`]),
//! * fuzzy risk profiles over the class universe together with
//!   entropy- and metric-based fuzziness measures ([`fuzzy`],
//!   [`fuzziness`]),
//! * and the time-dependent allocation path of the equivalent
//!   optimal-control problem, both in closed form and by fixed-step
//!   RK4 integration ([`control`]).
//!
//! All functions are pure and operate on plain `f64` data, so values can
//! be used freely across threads.

// Validation guards are written `!(x > 0.0)` rather than `x <= 0.0` on
// purpose: the negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capm;
pub mod control;
pub mod fuzziness;
pub mod fuzzy;
pub mod utility;

pub use capm::MarketParams;
pub use control::{ControlProblem, Trajectory, TrajectorySample};
pub use fuzziness::{EntropyConfig, MetricOrder};
pub use fuzzy::{FuzzySubset, PreferenceRelation};
pub use utility::{
    classify, solve_allocation, AllocationSolution, InvestorClass, QuadraticUtilityParams,
    UtilityFunction1D,
};
