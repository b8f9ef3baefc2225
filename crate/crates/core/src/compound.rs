//! Processes that jump at the renewal epochs of a waiting law.
//!
//! The position after time t is X(t) = sum of N(t) iid jumps, so its
//! distribution function splits into an atom at the origin (no jump
//! yet, weight Psi(t)) and a counting-weighted mixture of k-fold jump
//! convolutions:
//!
//!   P(x, t) = Psi(t) Theta(x) + sum_{k>=1} v_k(t) W_k(x).

use crate::renewal::{counting_series, CountingSeries, WaitingTimeLaw};
use crate::specfun::quad;
use crate::specfun::sum::NeumaierSum;
use crate::specfun::erf;
use crate::{Error, Result};
use libm::exp;

const SQRT_PI: f64 = 1.772453850905516027298167483341;

/// Jump amplitude distribution, exposed through its k-fold convolution
/// cdf. Implementations must satisfy W_1 = cdf and the semigroup
/// property in distribution; nothing here checks it.
pub trait JumpLaw: Send + Sync {
    /// Cdf of the sum of k iid jumps, k >= 1.
    fn kfold_cdf(&self, k: usize, x: f64) -> f64;

    /// Cdf of a single jump.
    fn cdf(&self, x: f64) -> f64 {
        self.kfold_cdf(1, x)
    }

    /// Density of a single jump, when the law has one.
    fn density(&self, _x: f64) -> Option<f64> {
        None
    }
}

/// Centered Gaussian jumps with variance 2, so that k jumps spread as
/// W_k(x) = (1 + erf(x / (2 sqrt(k)))) / 2 and the walk variance is
/// exactly twice the renewal function.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianJumpLaw;

impl JumpLaw for GaussianJumpLaw {
    fn kfold_cdf(&self, k: usize, x: f64) -> f64 {
        0.5 * (1.0 + erf(x / (2.0 * (k as f64).sqrt())))
    }

    fn density(&self, x: f64) -> Option<f64> {
        Some(exp(-0.25 * x * x) / (2.0 * SQRT_PI))
    }
}

/// Jumps of size zero. The compound process never leaves the origin;
/// useful as a degenerate check that counting weights carry total mass.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroJumpLaw;

impl JumpLaw for ZeroJumpLaw {
    fn kfold_cdf(&self, _k: usize, x: f64) -> f64 {
        if x >= 0.0 {
            1.0
        } else {
            0.0
        }
    }
}

/// The compound distribution at one fixed time: counting weights
/// computed once, then evaluated at any number of positions.
pub struct CompoundSnapshot<'a, J: JumpLaw> {
    series: CountingSeries,
    jumps: &'a J,
}

impl<'a, J: JumpLaw> CompoundSnapshot<'a, J> {
    /// Truncates the counting series once its unaccounted tail drops
    /// below `tail_tol`; that tail bounds the cdf error uniformly in x.
    pub fn new<L: WaitingTimeLaw>(
        law: &L,
        jumps: &'a J,
        t: f64,
        tail_tol: f64,
    ) -> Result<Self> {
        let series = counting_series(law, t, tail_tol)?;
        Ok(CompoundSnapshot { series, jumps })
    }

    pub fn time(&self) -> f64 {
        self.series.t
    }

    /// Weight of the atom at the origin (no jump has happened yet).
    pub fn atom(&self) -> f64 {
        self.series.probs[0]
    }

    pub fn series(&self) -> &CountingSeries {
        &self.series
    }

    /// P(X(t) <= x). Right-continuous: the atom counts from x = 0 on.
    pub fn cdf(&self, x: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        if x >= 0.0 {
            acc.add(self.series.probs[0]);
        }
        for (k, v) in self.series.probs.iter().enumerate().skip(1) {
            acc.add(v * self.jumps.kfold_cdf(k, x));
        }
        acc.value().clamp(0.0, 1.0)
    }
}

/// One-off evaluation of the compound cdf P(x, t).
pub fn sojourn_cdf<L: WaitingTimeLaw, J: JumpLaw>(
    law: &L,
    jumps: &J,
    x: f64,
    t: f64,
    tail_tol: f64,
) -> Result<f64> {
    Ok(CompoundSnapshot::new(law, jumps, t, tail_tol)?.cdf(x))
}

/// Residual of the Markov master equation for the compound Poisson
/// process with rate `lambda`:
///
///   dP/dt (x,t) = lambda [ Int P(x - y, t) w(y) dy - P(x, t) ],
///
/// with the time derivative taken as a central difference of width
/// `dt`. For other waiting laws this equation does not hold and the
/// residual measures exactly how non-Markov the process is, so the
/// function takes the rate explicitly rather than guessing it.
pub fn kf_residual<J: JumpLaw>(
    lambda: f64,
    jumps: &J,
    x: f64,
    t: f64,
    dt: f64,
) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("rate must be positive, got {lambda}")));
    }
    if !(dt > 0.0 && t - dt > 0.0) {
        return Err(Error::Domain(format!(
            "need 0 < dt < t for the central difference, got dt={dt}, t={t}"
        )));
    }
    if jumps.density(0.0).is_none() {
        return Err(Error::Domain(
            "master-equation residual needs a jump density".into(),
        ));
    }
    let law = crate::processes::PoissonLaw::new(lambda)?;
    let tail_tol = 1e-12;
    let plus = CompoundSnapshot::new(&law, jumps, t + dt, tail_tol)?;
    let minus = CompoundSnapshot::new(&law, jumps, t - dt, tail_tol)?;
    let here = CompoundSnapshot::new(&law, jumps, t, tail_tol)?;

    let lhs = (plus.cdf(x) - minus.cdf(x)) / (2.0 * dt);

    // The gain integral Int P(x - y, t) w(y) dy, split at y = x where
    // P's atom makes the integrand jump.
    let quad_rel = 1e-9;
    let gain_left = |y: f64| here.cdf(x - y) * jumps.density(y).unwrap();
    let gain_right = |y: f64| here.cdf(x + y) * jumps.density(-y).unwrap();
    let mut gain = quad::integrate_to_inf(gain_right, 0.0, quad_rel, 1e-14)?;
    if x > 0.0 {
        gain += quad::integrate(gain_left, 0.0, x, quad_rel, 1e-14)?;
        gain += quad::integrate_to_inf(gain_left, x, quad_rel, 1e-14)?;
    } else {
        gain += quad::integrate_to_inf(gain_left, 0.0, quad_rel, 1e-14)?;
    }

    Ok(lhs - lambda * (gain - here.cdf(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{MittagLefflerLaw, PoissonLaw, WrightLaw};

    // Frozen 50-digit references for the Mittag-Leffler walk with
    // Gaussian jumps at t = 1, beta = 1/2.
    #[test]
    fn mittag_leffler_gaussian_walk() {
        let law = MittagLefflerLaw::new(0.5).unwrap();
        let jumps = GaussianJumpLaw;
        let snap = CompoundSnapshot::new(&law, &jumps, 1.0, 1e-12).unwrap();
        let want = [
            (0.0, 0.71379178807790350),
            (0.5, 0.77749297752991496),
            (1.0, 0.83550407766733362),
        ];
        for (x, w) in want {
            let got = snap.cdf(x);
            assert!(((got - w) / w).abs() < 1e-10, "x={x}: {got} vs {w}");
        }
        // Just left of the origin the atom is excluded.
        let left = snap.cdf(-1e-12);
        assert!((snap.cdf(0.0) - left - snap.atom()).abs() < 1e-12);
    }

    #[test]
    fn zero_jumps_recover_total_mass() {
        let law = PoissonLaw::new(2.0).unwrap();
        let snap = CompoundSnapshot::new(&law, &ZeroJumpLaw, 3.0, 1e-12).unwrap();
        assert!((snap.cdf(0.0) - 1.0).abs() < 1e-11);
        assert_eq!(snap.cdf(-0.5), 0.0);
    }

    #[test]
    fn symmetric_jumps_give_median_at_origin() {
        // P(0, t) = Psi + (1 - Psi)/2 = (1 + Psi)/2 for symmetric jumps.
        let law = PoissonLaw::new(1.0).unwrap();
        let snap = CompoundSnapshot::new(&law, &GaussianJumpLaw, 2.0, 1e-12).unwrap();
        let psi = law.survival(2.0).unwrap();
        assert!((snap.cdf(0.0) - 0.5 * (1.0 + psi)).abs() < 1e-11);
    }

    #[test]
    fn master_equation_holds_for_poisson() {
        let r = kf_residual(1.0, &GaussianJumpLaw, 0.7, 2.0, 1e-4).unwrap();
        // Central difference error is O(dt^2) ~ 1e-8 against terms of
        // order one.
        assert!(r.abs() < 1e-6, "{r}");
    }

    #[test]
    fn master_equation_fails_for_heavy_tails() {
        // The same residual evaluated with Mittag-Leffler counting
        // weights is macroscopic: the process is not Markov in t.
        let law = MittagLefflerLaw::new(0.5).unwrap();
        let jumps = GaussianJumpLaw;
        let t = 2.0;
        let dt = 1e-4;
        let x = 0.7;
        let plus = CompoundSnapshot::new(&law, &jumps, t + dt, 1e-12).unwrap();
        let minus = CompoundSnapshot::new(&law, &jumps, t - dt, 1e-12).unwrap();
        let here = CompoundSnapshot::new(&law, &jumps, t, 1e-12).unwrap();
        let lhs = (plus.cdf(x) - minus.cdf(x)) / (2.0 * dt);
        let gain_right = |y: f64| here.cdf(x + y) * jumps.density(-y).unwrap();
        let gain_left = |y: f64| here.cdf(x - y) * jumps.density(y).unwrap();
        let mut gain = quad::integrate_to_inf(gain_right, 0.0, 1e-9, 1e-14).unwrap();
        gain += quad::integrate(gain_left, 0.0, x, 1e-9, 1e-14).unwrap();
        gain += quad::integrate_to_inf(gain_left, x, 1e-9, 1e-14).unwrap();
        let r = lhs - (gain - here.cdf(x));
        assert!(r.abs() > 1e-3, "{r}");
    }

    #[test]
    fn clock_walk_is_pure_convolution_power() {
        // beta = 1 Wright walk: at time t the position is exactly the
        // floor(t)-fold jump convolution.
        let law = WrightLaw::new(1.0).unwrap();
        let jumps = GaussianJumpLaw;
        let snap = CompoundSnapshot::new(&law, &jumps, 2.5, 1e-12).unwrap();
        for &x in &[-1.0, 0.0, 0.8, 3.0] {
            let want = jumps.kfold_cdf(2, x);
            assert!((snap.cdf(x) - want).abs() < 1e-14, "x={x}");
        }
    }
}
