use libm::{lgamma_r, sin, tgamma};

/// sin(pi x) with exact argument reduction.
///
/// Computing sin(PI * x) directly loses one digit per decade of x
/// because PI * x rounds before the sine sees it. Reducing x to a
/// half-integer offset first keeps the result accurate for any x that
/// is exactly representable.
pub(crate) fn sinpi(x: f64) -> f64 {
    let k = x.round();
    let r = x - k; // exact for |x| < 2^52
    let s = sin(std::f64::consts::PI * r);
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Reciprocal gamma 1/Gamma(x), defined as 0 at the poles x = 0, -1, -2, ...
///
/// This is the convention under which Wright-type series simply drop
/// the terms whose gamma factor sits on a pole.
pub(crate) fn rgamma(x: f64) -> f64 {
    if x >= 0.5 {
        if x <= 170.0 {
            return 1.0 / tgamma(x);
        }
        // 1/Gamma underflows smoothly; exp(-lgamma) is exact enough here
        // because the result has no leading digits to lose.
        let (lg, _) = lgamma_r(x);
        return (-lg).exp();
    }
    // Reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi.
    if x == x.floor() {
        return 0.0; // pole
    }
    let s = sinpi(x);
    let y = 1.0 - x;
    if y <= 170.0 {
        tgamma(y) * s / std::f64::consts::PI
    } else {
        let (lg, _) = lgamma_r(y);
        let m = lg + s.abs().ln() - std::f64::consts::PI.ln();
        let v = m.exp();
        if s >= 0.0 {
            v
        } else {
            -v
        }
    }
}
