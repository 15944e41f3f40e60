//! Small numeric helpers shared by the kernels.

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Mean of a window, anchored at its first element so that a constant window
/// reproduces its value exactly. The result is clamped into the window range.
pub(crate) fn window_mean(window: &[f64]) -> f64 {
    let anchor = window[0];
    let mut lo = anchor;
    let mut hi = anchor;
    let mut dev = 0.0;
    for &x in window {
        dev += x - anchor;
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (anchor + dev / window.len() as f64).clamp(lo, hi)
}

/// Population standard deviation of a window around its own mean.
pub(crate) fn window_std(window: &[f64]) -> f64 {
    let m = window_mean(window);
    let var = window.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / window.len() as f64;
    sqrt(var)
}
