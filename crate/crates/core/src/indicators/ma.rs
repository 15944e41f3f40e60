use alloc::vec;
use alloc::vec::Vec;

use super::{check_smoothing, non_empty, nonzero, AmaParams, AmaType, IndicatorSeries};
use crate::math::window_mean;
use crate::Result;

/// Smallest noise value the efficiency ratio divides by.
pub const ER_NOISE_FLOOR: f64 = 1e-4;

/// Simple moving average. Entries before the first full window pass the input through.
pub fn sma(input: &[f64], n: usize) -> Result<IndicatorSeries> {
    nonzero(n)?;
    non_empty(input)?;
    let out = input
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if i + 1 < n {
                x
            } else {
                window_mean(&input[i + 1 - n..=i])
            }
        })
        .collect();
    Ok(IndicatorSeries::new(out, n - 1))
}

/// Exponential moving average with `K = s / (n + 1)`, seeded with the first input.
pub fn ema(input: &[f64], n: usize, s: f64) -> Result<IndicatorSeries> {
    nonzero(n)?;
    check_smoothing(s)?;
    non_empty(input)?;
    let k = s / (n as f64 + 1.0);
    if k >= 1.0 {
        return Ok(IndicatorSeries::new(input.to_vec(), 0));
    }
    let mut out = Vec::with_capacity(input.len());
    let mut prev = input[0];
    out.push(prev);
    for &x in &input[1..] {
        prev += k * (x - prev);
        out.push(prev);
    }
    Ok(IndicatorSeries::new(out, 1))
}

/// Signed efficiency ratio over an `m`-bar look-back: net change divided by
/// the summed absolute bar-to-bar changes (floored at [`ER_NOISE_FLOOR`]).
/// Zero for the first `m` bars.
pub fn efficiency_ratio(input: &[f64], m: usize) -> Result<IndicatorSeries> {
    nonzero(m)?;
    let out = (0..input.len())
        .map(|i| {
            if i < m {
                return 0.0;
            }
            let signal = input[i] - input[i - m];
            let noise: f64 = (i + 1 - m..=i)
                .map(|k| (input[k] - input[k - 1]).abs())
                .sum();
            (signal / noise.max(ER_NOISE_FLOOR)).clamp(-1.0, 1.0)
        })
        .collect();
    Ok(IndicatorSeries::new(out, m))
}

/// Effective SMA period for an adaptive SMA at a given efficiency ratio:
/// `N₂ + |ER|·(N₁ − N₂)`, truncated, at least 1.
pub fn ama_effective_period(er: f64, params: &AmaParams) -> usize {
    let span = (params.long - params.short) as f64;
    let period = params.short as f64 + er.abs() * span;
    (period as usize).clamp(1, params.long)
}

/// Adaptive moving average.
///
/// `AmaType::Ema` runs `AMA[i] = AMA[i-1] + SSC² (x[i] - AMA[i-1])` with
/// `SSC = |ER|·(fast − slow) + slow`, `fast = 2/(N₂+1)`, `slow = 2/(N₁+1)`.
///
/// `AmaType::Sma` passes the input through for `i < N₁`, then averages
/// `x[i-p..=i]` where `p` is [`ama_effective_period`] (so `p + 1` values).
pub fn ama(input: &[f64], params: &AmaParams) -> Result<IndicatorSeries> {
    params.validate()?;
    non_empty(input)?;
    let er = efficiency_ratio(input, params.ada_win)?;
    match params.matype {
        AmaType::Ema => {
            let slow = 2.0 / (params.long as f64 + 1.0);
            let fast = 2.0 / (params.short as f64 + 1.0);
            let diff = fast - slow;
            let mut out = vec![input[0]; input.len()];
            for i in 1..input.len() {
                let ssc = slow + er[i].abs() * diff;
                out[i] = out[i - 1] + ssc * ssc * (input[i] - out[i - 1]);
            }
            Ok(IndicatorSeries::new(out, params.ada_win))
        }
        AmaType::Sma => {
            let out = input
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    if i < params.long {
                        x
                    } else {
                        let p = ama_effective_period(er[i], params);
                        window_mean(&input[i - p..=i])
                    }
                })
                .collect();
            Ok(IndicatorSeries::new(out, params.long))
        }
    }
}
