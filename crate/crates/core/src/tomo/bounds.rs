use log::warn;

use super::TomoError;

/// Logarithms in the sample bounds are natural.
pub const LOG_BASE: f64 = std::f64::consts::E;

/// Which guarantee to size the shot budget for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleBound {
    /// Every pair window of every layer: `m = 4`, `d · C(n, 2)` windows.
    AllLayers { n: u64, d: u64 },
    /// All `C(n, m)` windows of size `m` of one state.
    SingleState { m: u32, n: u64 },
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `ceil(scale · 2^5 · 10^m · eps^-2 · ln(2 · windows / delta))`.
pub fn required_samples(bound: SampleBound, eps: f64, delta: f64, scale: f64) -> Result<u64, TomoError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(TomoError::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(TomoError::InvalidParameter(format!("delta = {delta} must be in (0, 1)")));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(TomoError::InvalidParameter(format!("scale = {scale} must be positive")));
    }
    let (m, windows) = match bound {
        SampleBound::AllLayers { n, d } => {
            if n < 2 || d < 1 {
                return Err(TomoError::InvalidParameter(format!("need n ≥ 2 and d ≥ 1, got n = {n}, d = {d}")));
            }
            (4u32, d as f64 * binomial(n, 2) as f64)
        }
        SampleBound::SingleState { m, n } => {
            if m < 1 || m as u64 > n {
                return Err(TomoError::InvalidParameter(format!("need 1 ≤ m ≤ n, got m = {m}, n = {n}")));
            }
            (m, binomial(n, m as u64) as f64)
        }
    };
    if scale < 1.0 {
        warn!("sample bound scaled by {scale}; the guarantee no longer applies");
    }
    let n = scale * 32.0 * 10f64.powi(m as i32) / (eps * eps) * (2.0 * windows / delta).ln();
    Ok(n.ceil() as u64)
}
