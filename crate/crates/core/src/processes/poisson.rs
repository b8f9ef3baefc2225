use crate::renewal::WaitingTimeLaw;
use crate::specfun::lgamma_r;
use crate::specfun::sum::NeumaierSum;
use crate::{Error, Result};
use libm::{exp, log};

/// Exponential waiting times with rate lambda; the induced counting
/// process is Poisson. Everything here is closed form, evaluated in
/// log space so that deep tail entries (t >> 1/lambda, k far from
/// lambda t) keep full relative accuracy instead of underflowing
/// through intermediate factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonLaw {
    lambda: f64,
}

impl PoissonLaw {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(PoissonLaw { lambda })
        } else {
            Err(Error::Domain(format!(
                "rate must be positive and finite, got {lambda}"
            )))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn check_time(t: f64) -> Result<()> {
        if t.is_finite() && t >= 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("time must be finite and >= 0, got {t}")))
        }
    }

    /// ln v_k(t) = -lambda t + k ln(lambda t) - ln k!
    fn ln_counting(&self, k: usize, t: f64) -> f64 {
        let lt = self.lambda * t;
        let (lf, _) = lgamma_r(k as f64 + 1.0);
        -lt + k as f64 * log(lt) - lf
    }
}

impl WaitingTimeLaw for PoissonLaw {
    fn survival(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(exp(-self.lambda * t))
    }

    fn density(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(self.lambda * exp(-self.lambda * t))
    }

    fn cdf(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(-f64::exp_m1(-self.lambda * t))
    }

    fn counting_prob(&self, k: usize, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(if k == 0 { 1.0 } else { 0.0 });
        }
        Ok(exp(self.ln_counting(k, t)))
    }

    fn kfold_cdf(&self, k: usize, t: f64) -> Result<f64> {
        if k == 0 {
            return Err(Error::Domain("k-fold cdf needs k >= 1".into()));
        }
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let lt = self.lambda * t;
        if (k as f64) <= lt {
            // Head is small relative to 1: complement loses nothing.
            let mut head = NeumaierSum::new();
            for n in 0..k {
                head.add(exp(self.ln_counting(n, t)));
            }
            Ok((1.0 - head.value()).clamp(0.0, 1.0))
        } else {
            // Right tail, summed upward while terms still matter. Terms
            // decay at least geometrically once n > lambda t.
            let mut acc = NeumaierSum::new();
            let mut n = k;
            loop {
                let term = exp(self.ln_counting(n, t));
                acc.add(term);
                if term <= acc.value() * 1e-18 || term == 0.0 {
                    return Ok(acc.value());
                }
                n += 1;
            }
        }
    }

    fn kfold_density(&self, k: usize, t: f64) -> Result<f64> {
        if k == 0 {
            return Err(Error::Domain("k-fold density needs k >= 1".into()));
        }
        Self::check_time(t)?;
        if k == 1 {
            return self.density(t);
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        // Erlang: lambda^k t^{k-1} e^{-lambda t} / (k-1)!
        let (lf, _) = lgamma_r(k as f64);
        Ok(exp(
            k as f64 * log(self.lambda) + (k as f64 - 1.0) * log(t) - self.lambda * t - lf,
        ))
    }

    fn renewal_function(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(self.lambda * t)
    }
}
