//! f64 power-series attempts with cancellation accounting.
//!
//! Every sum here reports the largest term magnitude it saw. The ratio
//! of that to the final value measures how many leading digits were
//! destroyed by alternation, and drives the escalation decision made by
//! the callers.

use super::gamma::rgamma;
use super::sum::NeumaierSum;
use libm::{exp, lgamma_r, log};

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: f64,
    pub max_abs_term: f64,
    pub converged: bool,
}

impl SeriesSum {
    /// True when f64 roundoff at the observed cancellation level fits
    /// within rel_tol of the value.
    pub fn certifies(&self, rel_tol: f64) -> bool {
        self.converged
            && self.value.abs() > 0.0
            && self.max_abs_term * f64::EPSILON * 64.0 <= rel_tol * self.value.abs()
    }

    /// Decimal digits of working precision a rerun would need.
    pub fn digits_needed(&self, rel_tol: f64) -> u32 {
        let ratio = if self.value != 0.0 && self.value.is_finite() {
            (self.max_abs_term / self.value.abs()).max(1.0)
        } else {
            self.max_abs_term.max(1.0)
        };
        let tol_digits = (-rel_tol.log10()).ceil().max(0.0);
        (ratio.log10().ceil().max(0.0) + tol_digits + 8.0) as u32
    }
}

/// Terms below max_abs_term * EPS/8 cannot move the f64 sum at all.
fn noise_floor(max_abs_term: f64) -> f64 {
    max_abs_term * (f64::EPSILON * 0.125)
}

/// Wright-type series sum_{n>=0} z^n / (n! Gamma(lam*n + mu)).
///
/// Terms whose gamma argument lands on a pole contribute zero
/// (reciprocal-gamma convention). lam in (-1, 0) makes the gamma factor
/// eventually oscillate in sign even for z < 0, so the sign pattern is
/// taken from rgamma, not assumed.
pub(crate) fn wright_series(lam: f64, mu: f64, z: f64, max_terms: usize) -> SeriesSum {
    let mut acc = NeumaierSum::new();
    let mut p = 1.0f64; // z^n / n!
    let mut max_abs = 0.0f64;
    let mut prev_abs = f64::INFINITY;
    let mut decreasing = false;
    for n in 0..max_terms {
        let g = rgamma(lam * n as f64 + mu);
        if g == 0.0 {
            // Gamma pole: the term is absent from the series, which is
            // not a convergence signal. Zero must not reach the
            // noise-floor stop below.
            p *= z / (n as f64 + 1.0);
            continue;
        }
        let term = p * g;
        if !term.is_finite() {
            return SeriesSum {
                value: f64::NAN,
                max_abs_term: f64::INFINITY,
                converged: false,
            };
        }
        acc.add(term);
        let a = term.abs();
        max_abs = max_abs.max(a);
        if a < prev_abs {
            decreasing = true;
        } else if a > prev_abs {
            decreasing = false;
        }
        if decreasing && n > 4 && a <= noise_floor(max_abs) {
            return SeriesSum {
                value: acc.value(),
                max_abs_term: max_abs,
                converged: true,
            };
        }
        prev_abs = a;
        p *= z / (n as f64 + 1.0);
    }
    SeriesSum {
        value: acc.value(),
        max_abs_term: max_abs,
        converged: false,
    }
}

/// k-th derivative series of the one-parameter Mittag-Leffler function,
/// sum_{m>=0} (m+k)!/m! * y^m / Gamma(beta*(m+k) + 1), evaluated at y.
///
/// k = 0 reduces to the function itself. Terms are built in log space
/// term by term, so the rising factorial and the gamma factor never
/// overflow individually even when their combination is moderate.
pub(crate) fn ml_deriv_series(beta: f64, k: u32, y: f64, max_terms: usize) -> SeriesSum {
    debug_assert!(k <= 150, "large orders go straight to high precision");
    let kf = k as f64;
    let ln_ay = if y == 0.0 { f64::NEG_INFINITY } else { log(y.abs()) };
    let neg = y < 0.0;
    let mut acc = NeumaierSum::new();
    let mut max_abs = 0.0f64;
    let mut prev_abs = f64::INFINITY;
    let mut decreasing = false;
    for m in 0..max_terms {
        let mf = m as f64;
        let (lf1, _) = lgamma_r(mf + kf + 1.0);
        let (lf2, _) = lgamma_r(mf + 1.0);
        let (lg, _) = lgamma_r(beta * (mf + kf) + 1.0);
        let ln_term = lf1 - lf2 - lg + if m == 0 { 0.0 } else { mf * ln_ay };
        let mut term = exp(ln_term);
        if neg && m % 2 == 1 {
            term = -term;
        }
        if !term.is_finite() {
            return SeriesSum {
                value: f64::NAN,
                max_abs_term: f64::INFINITY,
                converged: false,
            };
        }
        acc.add(term);
        let a = term.abs();
        max_abs = max_abs.max(a);
        if a < prev_abs {
            decreasing = true;
        } else if a > prev_abs {
            decreasing = false;
        }
        if (decreasing && m > 4 && a <= noise_floor(max_abs)) || y == 0.0 {
            return SeriesSum {
                value: acc.value(),
                max_abs_term: max_abs,
                converged: true,
            };
        }
        prev_abs = a;
    }
    SeriesSum {
        value: acc.value(),
        max_abs_term: max_abs,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn exponential_through_both_engines() {
        // lam = 0 makes the Wright series a plain exponential in z.
        // Gamma(mu)=Gamma(1)=1.
        let s = wright_series(0.0, 1.0, -2.5, 200);
        assert!(s.converged);
        assert!(rel(s.value, (-2.5f64).exp()) < 1e-14);

        // beta = 1, k = 0 makes the derivative series exp(y).
        let s = ml_deriv_series(1.0, 0, -2.5, 200);
        assert!(s.converged);
        assert!(rel(s.value, (-2.5f64).exp()) < 1e-13);
    }

    #[test]
    fn cancellation_is_reported_not_hidden() {
        // exp(-30) through the series: value ~ 9.4e-14, max term ~ e^30/sqrt(60pi).
        let s = wright_series(0.0, 1.0, -30.0, 500);
        assert!(s.converged);
        assert!(s.max_abs_term > 1e11);
        assert!(!s.certifies(1e-12));
        assert!(s.digits_needed(1e-12) > 30);
    }

    #[test]
    fn budget_exhaustion_reports_unconverged() {
        let s = wright_series(-0.5, 1.0, -40.0, 10);
        assert!(!s.converged);
    }

    #[test]
    fn derivative_series_seeds_match_factorials() {
        // At y = 0 the series is its first term, k!/Gamma(beta k + 1).
        let s = ml_deriv_series(0.5, 4, 0.0, 50);
        assert!(s.converged);
        let want = 24.0 / libm::tgamma(3.0);
        assert!(rel(s.value, want) < 1e-13);
    }
}
