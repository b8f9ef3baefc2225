use crate::specfun::{sinpi, tgamma};
use crate::{Error, Result};

/// Leading long-time coefficients shared by the fractional laws.
///
/// As t grows, Psi(t) ~ survival * t^{-beta} and
/// phi(t) ~ density * t^{-1-beta}, with the next correction a factor
/// t^{-beta} smaller. At beta = 1/4 that correction still sits near 18%
/// of the leading term at t = 1000; these constants describe the limit,
/// not a uniform approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailConstants {
    pub beta: f64,
    /// Coefficient of t^{-beta} in the survival function,
    /// 1/Gamma(1-beta) = Gamma(beta) sin(beta pi) / pi.
    pub survival: f64,
    /// Coefficient of t^{-1-beta} in the waiting density,
    /// beta/Gamma(1-beta) = Gamma(beta+1) sin(beta pi) / pi.
    pub density: f64,
}

/// Tail constants for order beta in (0, 1). The boundary beta = 1 is
/// rejected: the exponential law has no power tail.
pub fn tail_constants(beta: f64) -> Result<TailConstants> {
    if !(beta > 0.0 && beta < 1.0) || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "tail constants exist for order in (0, 1), got {beta}"
        )));
    }
    let survival = tgamma(beta) * sinpi(beta) / std::f64::consts::PI;
    Ok(TailConstants {
        beta,
        survival,
        density: beta * survival,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_closed_form() {
        // 1/Gamma(1/2) = 1/sqrt(pi).
        let c = tail_constants(0.5).unwrap();
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        assert!((c.survival - inv_sqrt_pi).abs() < 1e-15);
        assert!((c.density - 0.5 * inv_sqrt_pi).abs() < 1e-15);
    }

    #[test]
    fn reflection_identity() {
        // Gamma(b) sin(pi b)/pi must equal 1/Gamma(1-b).
        for &b in &[0.1, 0.25, 0.75, 0.9] {
            let c = tail_constants(b).unwrap();
            let direct = 1.0 / tgamma(1.0 - b);
            assert!(((c.survival - direct) / direct).abs() < 1e-14);
        }
    }

    #[test]
    fn boundary_rejected() {
        assert!(tail_constants(1.0).is_err());
        assert!(tail_constants(0.0).is_err());
    }
}
