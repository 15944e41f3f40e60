//! Kelly criterion for a two-outcome bet.
//!
//! Staking a fraction `x` of capital wins `L·x` with probability `p` and loses
//! `M·x` otherwise. The growth rate `p·ln(1 + Lx) + q·ln(1 − Mx)` is concave
//! and peaks at `x* = (Lp − Mq) / (LM)`.

use alloc::vec::Vec;

use crate::math::ln;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KellyParams {
    p: f64,
    l_gain: f64,
    m_loss: f64,
}

impl KellyParams {
    /// `p ∈ [0, 1]`, `l_gain > 0`, `m_loss ∈ (0, 1]`.
    pub fn new(p: f64, l_gain: f64, m_loss: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams("win probability must lie in [0, 1]"));
        }
        if !(l_gain.is_finite() && l_gain > 0.0) {
            return Err(Error::InvalidParams("gain multiple L must be positive"));
        }
        if !(m_loss > 0.0 && m_loss <= 1.0) {
            return Err(Error::InvalidParams("loss multiple M must lie in (0, 1]"));
        }
        Ok(Self { p, l_gain, m_loss })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn l_gain(&self) -> f64 {
        self.l_gain
    }

    pub fn m_loss(&self) -> f64 {
        self.m_loss
    }

    /// Odds `b = L / M`.
    pub fn odds(&self) -> f64 {
        self.l_gain / self.m_loss
    }

    /// Largest stake for which the loss branch stays strictly positive.
    fn domain_end(&self) -> f64 {
        if self.m_loss < 1.0 {
            1.0
        } else {
            1.0 - 1e-6
        }
    }
}

/// Expected natural-log growth of staking fraction `x`.
pub fn expected_log_return(x: f64, params: &KellyParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError("stake fraction must lie in [0, 1]"));
    }
    let keep = 1.0 - params.m_loss * x;
    if keep <= 0.0 {
        return Err(Error::DomainError(
            "stake wipes out capital on a loss (1 - Mx <= 0)",
        ));
    }
    let win = params.p * ln(1.0 + params.l_gain * x);
    let loss = if params.q() == 0.0 {
        0.0
    } else {
        params.q() * ln(keep)
    };
    Ok(win + loss)
}

/// Closed-form optimal stake, clamped to `[0, 1]`.
pub fn optimal_fraction(params: &KellyParams) -> f64 {
    let (l, m) = (params.l_gain, params.m_loss);
    let x = (l * params.p - m * params.q()) / (l * m);
    x.clamp(0.0, 1.0)
}

/// `grid_points` evenly spaced stakes from 0 to just inside the domain, with
/// their expected log growth.
pub fn kelly_curve(params: &KellyParams, grid_points: usize) -> Result<Vec<(f64, f64)>> {
    if grid_points < 2 {
        return Err(Error::InvalidParams(
            "kelly curve needs at least 2 grid points",
        ));
    }
    let x_max = params.domain_end();
    let step = x_max / (grid_points - 1) as f64;
    (0..grid_points)
        .map(|k| {
            let x = if k + 1 == grid_points {
                x_max
            } else {
                k as f64 * step
            };
            expected_log_return(x, params).map(|g| (x, g))
        })
        .collect()
}
