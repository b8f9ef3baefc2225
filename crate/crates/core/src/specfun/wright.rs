//! Wright functions of the second kind,
//!     Phi_{lam, mu}(z) = sum_{n>=0} z^n / (n! Gamma(lam n + mu)),
//! restricted to -1 < lam < 0, where they carry the waiting-time and
//! scaling-limit densities of this crate.
//!
//! Terms whose gamma argument sits on a pole vanish (reciprocal-gamma
//! convention). For z < 0 the series alternates and the partial sums
//! cancel; the f64 attempt measures how many digits that costs and
//! escalates to multiprecision when the requested tolerance is at risk.
//! There is no asymptotic route here on purpose: the exponentially
//! small large-|z| regime is handled by the waiting-law layer, which
//! knows the saddle-point form appropriate to its own parameters.

use super::hiprec::{self, HP_TERM_FACTOR};
use super::series::wright_series;
use super::EvalPolicy;
use crate::{Error, Result};
use libm::exp;

const SQRT_PI: f64 = 1.772453850905516027298167483341;

/// Phi_{lam, mu}(z) for -1 < lam < 0.
pub fn wright_phi(lam: f64, mu: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    policy.validate()?;
    if !(lam > -1.0 && lam < 0.0) || !lam.is_finite() {
        return Err(Error::Domain(format!(
            "Wright parameter lam must lie in (-1, 0), got {lam}"
        )));
    }
    if !mu.is_finite() || !z.is_finite() {
        return Err(Error::Domain(format!("non-finite mu or z: mu={mu}, z={z}")));
    }
    let s = wright_series(lam, mu, z, policy.max_terms);
    if s.certifies(policy.rel_tol) {
        return Ok(s.value);
    }
    hiprec::escalated(
        |d| hiprec::wright_hp(lam, mu, z, d, policy.max_terms * HP_TERM_FACTOR),
        s.digits_needed(policy.rel_tol),
        policy,
        lam,
        z,
    )
    .map(|o| o.value)
}

/// The M function M_nu(y) = Phi_{-nu, 1-nu}(-y), nu in (0, 1), y >= 0.
///
/// At nu = 1/2 it is exactly a Gaussian in y, exp(-y^2/4)/sqrt(pi).
pub fn m_function(nu: f64, y: f64, policy: &EvalPolicy) -> Result<f64> {
    if !(nu > 0.0 && nu < 1.0) || !nu.is_finite() {
        return Err(Error::Domain(format!(
            "M function order must lie in (0, 1), got {nu}"
        )));
    }
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!(
            "M function argument must be finite and >= 0, got {y}"
        )));
    }
    if nu == 0.5 {
        policy.validate()?;
        return Ok(exp(-0.25 * y * y) / SQRT_PI);
    }
    wright_phi(-nu, 1.0 - nu, -y, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> EvalPolicy {
        EvalPolicy::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // All references below are frozen 50-to-400-digit evaluations of the
    // defining series.

    #[test]
    fn plain_f64_region() {
        assert!(rel(
            wright_phi(-0.25, 1.0, -2.0, &pol()).unwrap(),
            0.16285047571988361
        ) < 1e-13);
        assert!(rel(
            wright_phi(-0.25, 0.0, -2.0, &pol()).unwrap(),
            0.080625541727292928
        ) < 1e-13);
        assert!(rel(
            wright_phi(-0.75, 0.25, -1.5, &pol()).unwrap(),
            0.54873786222645633
        ) < 1e-13);
        assert!(rel(
            wright_phi(-0.6, 0.4, -3.0, &pol()).unwrap(),
            0.040521472224541048
        ) < 1e-12);
    }

    #[test]
    fn escalated_region_against_closed_forms() {
        // Phi_{-1/2, 0}(-y) = y exp(-y^2/4) / (2 sqrt(pi)).
        let y = 10.0f64;
        let want = y * exp(-0.25 * y * y) / (2.0 * SQRT_PI);
        let got = wright_phi(-0.5, 0.0, -y, &pol()).unwrap();
        assert!(rel(got, want) < 1e-12, "{got} vs {want}");
        assert!(rel(got, 3.9177166327543340e-11) < 1e-12);

        // Phi_{-1/2, 1}(-y) = erfc(y / 2).
        let got = wright_phi(-0.5, 1.0, -y, &pol()).unwrap();
        assert!(rel(got, 1.5374597944280349e-12) < 1e-12);

        // Deeper cancellation at lam = -1/4.
        let got = wright_phi(-0.25, 1.0, -16.9, &pol()).unwrap();
        assert!(rel(got, 2.1590155854991308e-10) < 1e-12);
    }

    #[test]
    fn m_function_values_and_half_order_identity() {
        assert!(rel(m_function(0.25, 0.5, &pol()).unwrap(), 0.56796881884076957) < 1e-13);
        assert!(rel(m_function(0.25, 2.0, &pol()).unwrap(), 0.16125108345458586) < 1e-13);
        assert!(rel(m_function(0.25, 10.0, &pol()).unwrap(), 1.2708213116565745e-5) < 1e-12);
        assert!(rel(m_function(0.25, 20.0, &pol()).unwrap(), 1.9429889447659159e-12) < 1e-12);
        assert!(rel(m_function(0.375, 1.5, &pol()).unwrap(), 0.27870912670276363) < 1e-13);
        // nu = 1/2 closed form...
        assert!(rel(m_function(0.5, 1.0, &pol()).unwrap(), 0.43939128946772240) < 1e-14);
        // ...and the general series, forced through lam = -1/2 directly,
        // must land on the same number.
        let general = wright_phi(-0.5, 0.5, -1.0, &pol()).unwrap();
        assert!(rel(general, 0.43939128946772240) < 1e-13);
    }

    #[test]
    fn domain_checks() {
        assert!(wright_phi(-1.0, 1.0, -1.0, &pol()).is_err());
        assert!(wright_phi(0.0, 1.0, -1.0, &pol()).is_err());
        assert!(m_function(0.5, -0.1, &pol()).is_err());
        assert!(m_function(1.0, 0.1, &pol()).is_err());
    }
}
