use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc_inv;

use crate::error::{BanzhafError, Result};

/// Absolute tolerance of the bisection on `t`.
pub const T_QUANTILE_TOL: f64 = 1e-9;

/// Degrees of freedom from which the normal quantile is used instead.
const NORMAL_FALLBACK_DF: f64 = 1e7;

/// `P(T > t)` for Student's t with `df` degrees of freedom, `t >= 0`.
pub fn student_upper_tail(t: f64, df: f64) -> f64 {
    if t <= 0.0 {
        return 0.5;
    }
    0.5 * beta_reg(df / 2.0, 0.5, df / (df + t * t))
}

/// Upper quantile `t_alpha` with `P(T > t_alpha) = alpha`, found by bisecting
/// the incomplete-beta tail.
pub fn student_upper_quantile(alpha: f64, df: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(BanzhafError::InvalidParameter(format!(
            "tail probability {alpha} must lie in (0, 1)"
        )));
    }
    if df.is_nan() || df <= 0.0 {
        return Err(BanzhafError::InvalidParameter(format!(
            "degrees of freedom {df} must be positive"
        )));
    }
    if alpha > 0.5 {
        return student_upper_quantile(1.0 - alpha, df).map(|t| -t);
    }
    if alpha == 0.5 {
        return Ok(0.0);
    }
    if df >= NORMAL_FALLBACK_DF {
        return normal_upper_quantile(alpha);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while student_upper_tail(hi, df) > alpha {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(BanzhafError::InvalidParameter(format!(
                "t quantile for alpha={alpha}, df={df} does not fit in f64"
            )));
        }
    }
    while hi - lo > T_QUANTILE_TOL {
        let mid = 0.5 * (lo + hi);
        if student_upper_tail(mid, df) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Standard normal upper quantile `z_alpha`.
pub fn normal_upper_quantile(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(BanzhafError::InvalidParameter(format!(
            "tail probability {alpha} must lie in (0, 1)"
        )));
    }
    Ok(std::f64::consts::SQRT_2 * erfc_inv(2.0 * alpha))
}
