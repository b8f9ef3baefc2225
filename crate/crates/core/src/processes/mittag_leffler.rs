use crate::renewal::WaitingTimeLaw;
use crate::specfun::sum::NeumaierSum;
use crate::specfun::{
    erfcx, lgamma_r, mittag_leffler_deriv_ln, mittag_leffler_neg, rgamma, sinpi, tgamma,
    EvalPolicy, OrderParam,
};
use crate::{Error, Result};
use libm::{exp, log};

const SQRT_PI: f64 = 1.772453850905516027298167483341;

/// Waiting law with survival Psi(t) = E_beta(-t^beta).
///
/// The memorable property: the whole counting distribution lives on one
/// function, v_k(t) = t^{k beta} E^{(k)}_beta(-t^beta) / k!. At beta = 1
/// the law is the unit-rate exponential and the counting process is
/// Poisson; at beta = 1/2 every quantity reduces to (repeated integrals
/// of) erfc, which is what the fast paths use. The `_general` variants
/// skip those shortcuts and run the order-generic machinery, so the two
/// can be cross-validated against each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MittagLefflerLaw {
    beta: OrderParam,
    policy: EvalPolicy,
}

impl MittagLefflerLaw {
    pub fn new(beta: f64) -> Result<Self> {
        Self::with_policy(beta, EvalPolicy::default())
    }

    pub fn with_policy(beta: f64, policy: EvalPolicy) -> Result<Self> {
        policy.validate()?;
        Ok(MittagLefflerLaw {
            beta: OrderParam::new(beta)?,
            policy,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta.get()
    }

    pub fn policy(&self) -> &EvalPolicy {
        &self.policy
    }

    fn check_time(t: f64) -> Result<()> {
        if t.is_finite() && t >= 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("time must be finite and >= 0, got {t}")))
        }
    }

    /// Survival through the order-generic routes (series, tail
    /// expansion, spectral integral), with no half-order shortcut.
    pub fn survival_general(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(1.0);
        }
        mittag_leffler_neg(self.beta.get(), t.powf(self.beta.get()), &self.policy)
    }

    /// Density through the order-generic routes; see
    /// [`Self::survival_general`].
    pub fn density_general(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let b = self.beta.get();
        if t == 0.0 {
            return Ok(if b == 1.0 { 1.0 } else { f64::INFINITY });
        }
        let x = t.powf(b);
        if x <= 1.0 {
            return self.density_series(t, x);
        }
        if let Some(v) = self.density_tail(t) {
            return Ok(v);
        }
        self.density_integral(t)
    }

    /// phi(t) = t^{beta-1} sum_{n>=0} (-t^beta)^n / Gamma(beta n + beta),
    /// for t^beta <= 1 where the alternation costs at most a digit.
    fn density_series(&self, t: f64, x: f64) -> Result<f64> {
        let b = self.beta.get();
        let ln_x = log(x);
        let mut acc = NeumaierSum::new();
        let mut max_abs = 0.0f64;
        for n in 0..self.policy.max_terms {
            let (lg, _) = lgamma_r(b * n as f64 + b);
            let ln_term = if n == 0 { -lg } else { n as f64 * ln_x - lg };
            let mut term = exp(ln_term);
            if n % 2 == 1 {
                term = -term;
            }
            acc.add(term);
            max_abs = max_abs.max(term.abs());
            if n > 4 && term.abs() <= max_abs * f64::EPSILON * 0.125 {
                let sum = acc.value();
                if max_abs * f64::EPSILON * 64.0 <= self.policy.rel_tol * sum.abs() {
                    return Ok(t.powf(b - 1.0) * sum);
                }
                break;
            }
        }
        // x <= 1 keeps the ratio near 1; reaching this means the policy
        // was given an unusually small term budget.
        Err(Error::NonConvergence {
            order: b,
            arg: -x,
            max_terms: self.policy.max_terms,
        })
    }

    /// phi(t) ~ sum_{n>=1} (-1)^{n+1} beta n t^{-beta n - 1} / Gamma(1 - beta n),
    /// three nonzero terms, first-omitted-term certification.
    fn density_tail(&self, t: f64) -> Option<f64> {
        let b = self.beta.get();
        let mut sum = 0.0f64;
        let mut kept = 0;
        let mut last = f64::INFINITY;
        for n in 1..=12 {
            let r = rgamma(1.0 - b * n as f64);
            if r == 0.0 {
                continue;
            }
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * b * n as f64 * t.powf(-b * n as f64 - 1.0) * r;
            if kept == 3 {
                return if term.abs() < last && term.abs() <= self.policy.rel_tol * sum.abs() {
                    Some(sum)
                } else {
                    None
                };
            }
            if term.abs() >= last {
                return None;
            }
            sum += term;
            last = term.abs();
            kept += 1;
        }
        None
    }

    /// phi(t) = sin(beta pi)/(beta pi) *
    ///     Int_0^inf s^{1/beta} exp(-s^{1/beta} t) / (s^2 + 2 s cos(beta pi) + 1) ds.
    fn density_integral(&self, t: f64) -> Result<f64> {
        let b = self.beta.get();
        let cosb = (b * std::f64::consts::PI).cos();
        let inv_b = 1.0 / b;
        let pref = sinpi(b) / (b * std::f64::consts::PI);
        let v = crate::specfun::quad::integrate_to_inf(
            move |s| {
                let p = s.powf(inv_b);
                let e = p * t;
                if e > 745.0 {
                    0.0
                } else {
                    p * exp(-e) / (s * (s + 2.0 * cosb) + 1.0)
                }
            },
            0.0,
            self.policy.rel_tol * 0.1,
            0.0,
        )?;
        Ok(pref * v)
    }

    /// ln v_k(t) for t > 0.
    fn ln_counting_fractional(&self, k: usize, t: f64) -> Result<f64> {
        let b = self.beta.get();
        if b == 0.5 {
            // v_k = (2 sqrt(t))^k s_k(sqrt(t)), s_k the scaled repeated
            // erfc integral: the exponents of the two factors cancel,
            // which is why both arrive in log form.
            let rt = t.sqrt();
            let ln_s = crate::specfun::erfc_repeated_scaled_ln(k, rt)?;
            return Ok(k as f64 * log(2.0 * rt) + ln_s);
        }
        let (lf, _) = lgamma_r(k as f64 + 1.0);
        let ln_deriv = mittag_leffler_deriv_ln(b, k as u32, -t.powf(b), &self.policy)?;
        Ok(k as f64 * b * log(t) - lf + ln_deriv)
    }
}

impl WaitingTimeLaw for MittagLefflerLaw {
    fn survival(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let b = self.beta.get();
        if t == 0.0 {
            return Ok(1.0);
        }
        if b == 1.0 {
            return Ok(exp(-t));
        }
        if b == 0.5 {
            return Ok(erfcx(t.sqrt()));
        }
        self.survival_general(t)
    }

    fn density(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let b = self.beta.get();
        if b == 1.0 {
            return Ok(exp(-t));
        }
        if t == 0.0 {
            return Ok(f64::INFINITY);
        }
        if b == 0.5 {
            return Ok(1.0 / (SQRT_PI * t.sqrt()) - erfcx(t.sqrt()));
        }
        self.density_general(t)
    }

    fn counting_prob(&self, k: usize, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(if k == 0 { 1.0 } else { 0.0 });
        }
        if k == 0 {
            // v_0 IS the survival probability; sharing its code path
            // keeps the identity exact instead of ulp-close.
            return self.survival(t);
        }
        let b = self.beta.get();
        if b == 1.0 {
            let (lf, _) = lgamma_r(k as f64 + 1.0);
            return Ok(exp(-t + k as f64 * log(t) - lf));
        }
        Ok(exp(self.ln_counting_fractional(k, t)?))
    }

    fn kfold_cdf(&self, k: usize, t: f64) -> Result<f64> {
        if k == 0 {
            return Err(Error::Domain("k-fold cdf needs k >= 1".into()));
        }
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let mut head = NeumaierSum::new();
        for n in 0..k {
            head.add(self.counting_prob(n, t)?);
        }
        Ok((1.0 - head.value()).clamp(0.0, 1.0))
    }

    fn kfold_density(&self, k: usize, t: f64) -> Result<f64> {
        if k == 0 {
            return Err(Error::Domain("k-fold density needs k >= 1".into()));
        }
        Self::check_time(t)?;
        let b = self.beta.get();
        if b == 1.0 {
            if k == 1 {
                return Ok(exp(-t));
            }
            if t == 0.0 {
                return Ok(0.0);
            }
            let (lf, _) = lgamma_r(k as f64);
            return Ok(exp((k as f64 - 1.0) * log(t) - t - lf));
        }
        if t == 0.0 {
            // t^{k beta - 1} decides the limit.
            let kb = k as f64 * b;
            return Ok(if kb > 1.0 {
                0.0
            } else if kb < 1.0 {
                f64::INFINITY
            } else {
                1.0
            });
        }
        // f_k = beta t^{k beta - 1} E^{(k)}(-t^beta) / (k-1)!
        let (lf, _) = lgamma_r(k as f64);
        let ln_deriv = mittag_leffler_deriv_ln(b, k as u32, -t.powf(b), &self.policy)?;
        Ok(b * exp((k as f64 * b - 1.0) * log(t) - lf + ln_deriv))
    }

    fn renewal_function(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let b = self.beta.get();
        if b == 1.0 {
            return Ok(t);
        }
        Ok(t.powf(b) / tgamma(1.0 + b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Frozen 50-digit references throughout.

    #[test]
    fn counting_distribution_beta_three_quarters() {
        let law = MittagLefflerLaw::new(0.75).unwrap();
        let want = [
            0.24368204572017258,
            0.25464802541716349,
            0.20758701743522880,
            0.14004314272215208,
            0.081147069665443470,
        ];
        for (k, w) in want.iter().enumerate() {
            let got = law.counting_prob(k, 2.0).unwrap();
            assert!(rel(got, *w) < 1e-11, "k={k}: {got} vs {w}");
        }
        // v_0 is the survival function.
        assert!(rel(law.survival(2.0).unwrap(), want[0]) < 1e-12);
    }

    #[test]
    fn counting_distribution_beta_quarter_large_t() {
        let law = MittagLefflerLaw::new(0.25).unwrap();
        let want = [
            0.32391608439568132,
            0.22469108957828608,
            0.15346983117287283,
            0.10337634943516159,
        ];
        for (k, w) in want.iter().enumerate() {
            let got = law.counting_prob(k, 10.0).unwrap();
            assert!(rel(got, *w) < 1e-11, "k={k}: {got} vs {w}");
        }
    }

    #[test]
    fn half_order_shortcuts_meet_general_machinery() {
        let law = MittagLefflerLaw::new(0.5).unwrap();
        for &t in &[0.01, 0.4, 1.0, 7.0, 100.0] {
            let fast = law.survival(t).unwrap();
            let general = law.survival_general(t).unwrap();
            assert!(
                ((fast - general) / fast).abs() < 1e-12,
                "survival t={t}: {fast} vs {general}"
            );
            let fast = law.density(t).unwrap();
            let general = law.density_general(t).unwrap();
            assert!(
                ((fast - general) / fast).abs() < 1e-12,
                "density t={t}: {fast} vs {general}"
            );
        }
    }

    #[test]
    fn classical_limit_is_unit_poisson() {
        let law = MittagLefflerLaw::new(1.0).unwrap();
        assert!(rel(law.survival(2.0).unwrap(), (-2.0f64).exp()) < 1e-15);
        assert!(rel(
            law.counting_prob(3, 2.0).unwrap(),
            8.0 / 6.0 * (-2.0f64).exp()
        ) < 1e-14);
        assert_eq!(law.renewal_function(5.0).unwrap(), 5.0);
    }

    #[test]
    fn renewal_function_closed_form() {
        let law = MittagLefflerLaw::new(0.5).unwrap();
        assert!(rel(law.renewal_function(4.0).unwrap(), 2.2567583341910251) < 1e-14);
    }

    #[test]
    fn kfold_density_origin_limits() {
        let law = MittagLefflerLaw::new(0.5).unwrap();
        assert_eq!(law.kfold_density(2, 0.0).unwrap(), 1.0);
        assert_eq!(law.kfold_density(3, 0.0).unwrap(), 0.0);
        assert_eq!(law.kfold_density(1, 0.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn counting_sums_to_one_with_derivative_route() {
        // beta = 0.75 exercises series-with-escalation; the sum over a
        // generous k range must reproduce total mass.
        let law = MittagLefflerLaw::new(0.75).unwrap();
        let mut sum = 0.0;
        for k in 0..60 {
            sum += law.counting_prob(k, 2.0).unwrap();
        }
        assert!((sum - 1.0).abs() < 1e-11, "{sum}");
    }
}
