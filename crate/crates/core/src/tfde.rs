//! Self-similar solution of the diffusion equation with a fractional
//! time derivative of order beta in (0, 1], on the whole line, started
//! from a point source.
//!
//! The density is a rescaled M function of order nu = beta/2,
//!
//!   u(x, t) = M_nu(|x| t^{-nu}) / (2 t^nu),
//!
//! which is also the long-wave limit profile of the heavy-tailed jump
//! walks in [`crate::compound`]; [`diffusion_distance`] measures how
//! far a walk still is from it. beta = 1 is the classical Gaussian
//! kernel with diffusion constant 1.

use crate::compound::{CompoundSnapshot, JumpLaw};
use crate::processes::WrightLaw;
use crate::renewal::WaitingTimeLaw;
use crate::specfun::{erf, m_function, tgamma, EvalPolicy, OrderParam};
use crate::{Error, Result};

/// Point-source solution of the order-beta time-fractional diffusion
/// equation, evaluated as a density or distribution function.
#[derive(Debug, Clone)]
pub struct TfdeSolution {
    beta: OrderParam,
    policy: EvalPolicy,
    /// Waiting law of order nu = beta/2, carried because the integrated
    /// profile Int_0^y M_nu is exactly its survival function at y^{-1/nu}
    /// (integrate the profile series term by term and compare). Its
    /// stretched-exponential small-time branch is what keeps deep-tail
    /// cdf queries cheap.
    profile: Option<WrightLaw>,
}

impl TfdeSolution {
    pub fn new(beta: f64) -> Result<Self> {
        Self::with_policy(beta, EvalPolicy::default())
    }

    pub fn with_policy(beta: f64, policy: EvalPolicy) -> Result<Self> {
        policy.validate()?;
        let beta = OrderParam::new(beta)?;
        let profile = if beta.is_one() {
            // Classical kernel: cdf is erf.
            None
        } else {
            Some(WrightLaw::with_policy(beta.get() / 2.0, policy)?)
        };
        Ok(TfdeSolution {
            beta,
            policy,
            profile,
        })
    }

    /// G(y) = Int_0^y M_nu, clamped into [0, 1].
    fn profile_integral(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        let nu = self.beta.get() / 2.0;
        let arg = y.powf(-1.0 / nu);
        if !arg.is_finite() {
            return Ok(0.0);
        }
        self.profile.as_ref().unwrap().survival(arg)
    }

    pub fn beta(&self) -> f64 {
        self.beta.get()
    }

    fn check_time(t: f64) -> Result<()> {
        if t.is_finite() && t > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "the point source spreads only for t > 0, got {t}"
            )))
        }
    }

    /// u(x, t).
    pub fn pdf(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let nu = self.beta.get() / 2.0;
        let s = t.powf(nu);
        Ok(m_function(nu, x.abs() / s, &self.policy)? / (2.0 * s))
    }

    /// U(x, t) = P(X_t <= x); symmetric about the origin.
    pub fn cdf(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if self.beta.is_one() {
            return Ok(0.5 * (1.0 + erf(x / (2.0 * t.sqrt()))));
        }
        let nu = self.beta.get() / 2.0;
        let y = x.abs() / t.powf(nu);
        let g = self.profile_integral(y)?;
        Ok(0.5 + 0.5 * x.signum() * g)
    }

    /// Second moment, 2 t^beta / Gamma(1 + beta).
    pub fn variance(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let b = self.beta.get();
        Ok(2.0 * t.powf(b) / tgamma(1.0 + b))
    }
}

/// The space-time scaling under which jump walks converge to the
/// fractional kernel: time steps tau and jump sizes h shrink together,
/// tied by tau^beta = c h^2. The constant c is free; it fixes the
/// diffusion coefficient of the limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRelation {
    beta: f64,
    c: f64,
}

impl ScalingRelation {
    pub fn new(beta: f64, c: f64) -> Result<Self> {
        let beta = OrderParam::new(beta)?.get();
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("scaling constant must be positive, got {c}")));
        }
        Ok(ScalingRelation { beta, c })
    }

    pub fn tau_for(&self, h: f64) -> f64 {
        (self.c * h * h).powf(1.0 / self.beta)
    }

    pub fn h_for(&self, tau: f64) -> f64 {
        (tau.powf(self.beta) / self.c).sqrt()
    }

    pub fn holds(&self, tau: f64, h: f64, rel_tol: f64) -> bool {
        (tau.powf(self.beta) - self.c * h * h).abs() <= rel_tol * self.c * h * h
    }
}

/// sup over the given positions of |P(x, t) - U(x, t)|, the Kolmogorov
/// distance (on a grid) between a jump walk and the fractional kernel
/// it converges to.
pub fn diffusion_distance<L: WaitingTimeLaw, J: JumpLaw>(
    law: &L,
    jumps: &J,
    solution: &TfdeSolution,
    t: f64,
    xs: &[f64],
    tail_tol: f64,
) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Grid("need at least one probe position".into()));
    }
    let snap = CompoundSnapshot::new(law, jumps, t, tail_tol)?;
    let mut worst = 0.0f64;
    for &x in xs {
        let d = (snap.cdf(x) - solution.cdf(x, t)?).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compound::GaussianJumpLaw;
    use crate::processes::MittagLefflerLaw;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Frozen 50-digit references at beta = 1/2, x = 1, t = 2.
    #[test]
    fn half_order_point_values() {
        let sol = TfdeSolution::new(0.5).unwrap();
        assert!(rel(sol.pdf(1.0, 2.0).unwrap(), 0.18322183050288338) < 1e-11);
        assert!(rel(sol.cdf(1.0, 2.0).unwrap(), 0.75674331294703503) < 1e-11);
    }

    #[test]
    fn cdf_is_symmetric_and_normalized() {
        let sol = TfdeSolution::new(0.5).unwrap();
        for &x in &[0.0, 0.3, 1.7, 9.0] {
            let up = sol.cdf(x, 1.0).unwrap();
            let dn = sol.cdf(-x, 1.0).unwrap();
            assert!((up + dn - 1.0).abs() < 1e-12, "x={x}");
        }
        assert!((sol.cdf(1e6, 1.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(sol.cdf(-1e6, 1.0).unwrap() < 1e-10);
    }

    #[test]
    fn classical_limit_is_gaussian() {
        let sol = TfdeSolution::new(1.0).unwrap();
        let t = 3.0f64;
        let x = 1.2f64;
        let want = (-x * x / (4.0 * t)).exp() / (2.0 * (std::f64::consts::PI * t).sqrt());
        assert!(rel(sol.pdf(x, t).unwrap(), want) < 1e-13);
        let want = 0.5 * (1.0 + erf(x / (2.0 * t.sqrt())));
        assert!(rel(sol.cdf(x, t).unwrap(), want) < 1e-14);
    }

    #[test]
    fn variance_matches_frozen_moment() {
        let sol = TfdeSolution::new(0.5).unwrap();
        assert!(rel(sol.variance(1.0).unwrap(), 2.2567583341910251) < 1e-13);
    }

    #[test]
    fn profile_integral_matches_quadrature() {
        // The closed-form cdf must agree with direct quadrature of the
        // density: U(b) - U(a) = Int_a^b u for any interval.
        // Intervals stay on one side of the origin: |x| gives the
        // density a corner there that quadrature converges on slowly.
        use crate::specfun::quad::integrate;
        for &beta in &[0.25, 0.5, 0.75] {
            let sol = TfdeSolution::new(beta).unwrap();
            let t = 2.0;
            let pdf = |x: f64| sol.pdf(x, t).unwrap();
            for &(a, b) in &[(-0.8, 0.0), (0.0, 0.4), (0.4, 1.6), (1.6, 3.0)] {
                let quad = integrate(&pdf, a, b, 1e-13, 1e-15).unwrap();
                let diff = sol.cdf(b, t).unwrap() - sol.cdf(a, t).unwrap();
                assert!((diff - quad).abs() < 1e-11, "beta={beta}: {diff} vs {quad}");
            }
        }
    }

    #[test]
    fn profile_integral_saturates_at_both_ends() {
        // Unit mass on the half line: G pins to 1 once the tail falls
        // under f64 resolution, and to 0 when the mapped argument leaves
        // the representable range near y = 0.
        let sol = TfdeSolution::new(0.5).unwrap();
        assert_eq!(sol.profile_integral(60.0).unwrap(), 1.0);
        assert_eq!(sol.profile_integral(1e12).unwrap(), 1.0);
        assert_eq!(sol.profile_integral(1e-300).unwrap(), 0.0);
        assert_eq!(sol.profile_integral(0.0).unwrap(), 0.0);
    }

    #[test]
    fn scaling_relation_round_trips() {
        let s = ScalingRelation::new(0.5, 2.0).unwrap();
        let h = 0.01;
        let tau = s.tau_for(h);
        assert!(rel(s.h_for(tau), h) < 1e-12);
        assert!(s.holds(tau, h, 1e-12));
        assert!(!s.holds(tau * 1.01, h, 1e-3));
    }

    #[test]
    fn walk_converges_toward_kernel() {
        let law = MittagLefflerLaw::new(0.5).unwrap();
        let sol = TfdeSolution::new(0.5).unwrap();
        let xs: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.25).collect();
        let d1 = diffusion_distance(&law, &GaussianJumpLaw, &sol, 1.0, &xs, 1e-10).unwrap();
        let d10 = diffusion_distance(&law, &GaussianJumpLaw, &sol, 10.0, &xs, 1e-10).unwrap();
        assert!(d10 < d1, "d(1)={d1}, d(10)={d10}");
        // The atom alone keeps the walk this far away at t = 1.
        assert!(d1 > 0.05 && d1 < 0.5, "{d1}");
    }
}
