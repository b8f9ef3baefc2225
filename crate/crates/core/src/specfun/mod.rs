//! Special functions underlying heavy-tailed renewal theory.
//!
//! The route chosen for each evaluation (series, quadrature, asymptotic
//! expansion, multiprecision escalation) is an internal detail; the
//! public functions promise relative accuracy near [`EvalPolicy::rel_tol`]
//! or an explicit error.

mod erf;
mod gamma;
mod hiprec;
mod mittag_leffler;
pub(crate) mod quad;
mod series;
pub(crate) mod sum;
mod wright;

pub use erf::{erfc_repeated, erfcx};
pub use mittag_leffler::{mittag_leffler_deriv, mittag_leffler_neg};
pub use wright::{m_function, wright_phi};

pub(crate) use erf::erfc_repeated_scaled_ln;
pub(crate) use gamma::{rgamma, sinpi};
pub(crate) use mittag_leffler::mittag_leffler_deriv_ln;

pub use libm::{erf, erfc, lgamma_r, tgamma};

/// Knobs shared by every numerical routine in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    /// Target relative error of function evaluations.
    pub rel_tol: f64,
    /// Absolute floor below which values are allowed to be reported as 0.
    pub abs_tol: f64,
    /// Term budget for f64 series attempts.
    pub max_terms: usize,
    /// Working precision, in decimal digits, of the first escalated pass.
    pub highprec_digits: u32,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_terms: 500,
            highprec_digits: 50,
        }
    }
}

impl EvalPolicy {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(crate::Error::Domain(format!(
                "rel_tol must lie in (0,1), got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(crate::Error::Domain("abs_tol must be >= 0".into()));
        }
        if self.max_terms == 0 {
            return Err(crate::Error::Domain("max_terms must be positive".into()));
        }
        if self.highprec_digits < 20 {
            return Err(crate::Error::Domain(
                "highprec_digits below 20 cannot beat f64".into(),
            ));
        }
        Ok(())
    }
}

/// Hard ceiling on escalated working precision. Evaluations that would
/// need more digits than this error out instead of spinning.
pub(crate) const DIGIT_CAP: u32 = 600;

/// Fractional order confined to (0, 1].
///
/// The boundary value 1 is admitted and marks the classical
/// (exponential / deterministic-clock) degeneration; callers branch on
/// [`OrderParam::is_one`] before touching any fractional machinery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParam(f64);

impl OrderParam {
    pub fn new(beta: f64) -> crate::Result<Self> {
        if beta.is_finite() && beta > 0.0 && beta <= 1.0 {
            Ok(OrderParam(beta))
        } else {
            Err(crate::Error::Domain(format!(
                "order must lie in (0, 1], got {beta}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    /// True when the order is exactly 1/2, where every quantity in this
    /// crate collapses to erfc-family closed forms.
    #[inline]
    pub fn is_half(self) -> bool {
        self.0 == 0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_param_rejects_out_of_range() {
        assert!(OrderParam::new(0.0).is_err());
        assert!(OrderParam::new(-0.3).is_err());
        assert!(OrderParam::new(1.0 + 1e-12).is_err());
        assert!(OrderParam::new(f64::NAN).is_err());
        assert!(OrderParam::new(1.0).unwrap().is_one());
        assert!(OrderParam::new(0.5).unwrap().is_half());
    }

    #[test]
    fn policy_validation() {
        assert!(EvalPolicy::default().validate().is_ok());
        let mut p = EvalPolicy::default();
        p.rel_tol = 0.0;
        assert!(p.validate().is_err());
        let mut p = EvalPolicy::default();
        p.max_terms = 0;
        assert!(p.validate().is_err());
        let mut p = EvalPolicy::default();
        p.highprec_digits = 10;
        assert!(p.validate().is_err());
    }
}
