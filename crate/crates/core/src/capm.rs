//! Capital-market-line quantities implied by an allocation.
//!
//! A split `(x, y)` between the market portfolio and the risk-free asset
//! has expected return `x*E(Rm) + y*Rf` and standard deviation
//! `x*Sm` (the risk-free asset contributes no variance). Eliminating
//! `x` gives the capital market line
//!
//! ```text
//! E(Rp) = Rf + (E(Rm) - Rf) * Sp/Sm
//! ```
//!
//! so any portfolio produced here lies on the line by construction.

use thiserror::Error;

use crate::utility::AllocationSolution;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CapmError {
    #[error("market standard deviation must be positive, got {stdev}")]
    NonPositiveMarketStdev { stdev: f64 },
    #[error("expected market return {expected_market_return} must exceed the risk-free rate {risk_free_rate}")]
    NonPositiveExcessReturn {
        expected_market_return: f64,
        risk_free_rate: f64,
    },
}

/// Market environment: expected market return, risk-free rate, and
/// market standard deviation. Construction validates `Sm > 0` and
/// `E(Rm) > Rf`; the fields stay private so every instance is valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    expected_market_return: f64,
    risk_free_rate: f64,
    market_stdev: f64,
}

impl MarketParams {
    pub fn new(
        expected_market_return: f64,
        risk_free_rate: f64,
        market_stdev: f64,
    ) -> Result<Self, CapmError> {
        // Negated comparisons so NaN inputs fail validation too.
        if !(market_stdev > 0.0) {
            return Err(CapmError::NonPositiveMarketStdev {
                stdev: market_stdev,
            });
        }
        if !(expected_market_return > risk_free_rate) {
            return Err(CapmError::NonPositiveExcessReturn {
                expected_market_return,
                risk_free_rate,
            });
        }
        Ok(Self {
            expected_market_return,
            risk_free_rate,
            market_stdev,
        })
    }

    pub fn expected_market_return(&self) -> f64 {
        self.expected_market_return
    }

    pub fn risk_free_rate(&self) -> f64 {
        self.risk_free_rate
    }

    pub fn market_stdev(&self) -> f64 {
        self.market_stdev
    }

    /// Expected return of the split `(x*, y*)`:
    /// `E(Rp) = x*E(Rm) + y*Rf`.
    pub fn portfolio_expected_return(&self, solution: &AllocationSolution) -> f64 {
        solution.x_star * self.expected_market_return + solution.y_star * self.risk_free_rate
    }

    /// Standard deviation of the optimal portfolio, `Sp* = Sm * x*`.
    ///
    /// Only the market leg carries variance, so the portfolio risk is
    /// proportional to the market fraction.
    pub fn optimal_portfolio_risk(&self, solution: &AllocationSolution) -> f64 {
        self.market_stdev * solution.x_star
    }

    /// Capital-market-line return at portfolio risk `sp`.
    pub fn cml_return(&self, sp: f64) -> f64 {
        self.risk_free_rate
            + (self.expected_market_return - self.risk_free_rate) * (sp / self.market_stdev)
    }
}
