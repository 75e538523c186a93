use crate::error::{Error, Result};

const MAX_ITER: usize = 50;

/// Principal branch of the Lambert W function on `[0, ∞)`: the unique
/// `w >= 0` with `w e^w = z`.
///
/// Halley's iteration, started from `z(1-z)` near zero, `ln(1+z)` below `e`
/// and the asymptotic `ln z - ln ln z + ln ln z / ln z` above.
pub fn lambert_w(z: f64) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::InvalidArgument(format!("lambert_w needs a finite z >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut w = if z < 0.25 {
        z * (1.0 - z)
    } else if z < std::f64::consts::E {
        z.ln_1p()
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 1e-15 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// `W(x)/x`, continuous at `x = 0` where it equals 1.
pub(crate) fn w_over_x(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        lambert_w(x).expect("nonnegative finite argument") / x
    }
}
