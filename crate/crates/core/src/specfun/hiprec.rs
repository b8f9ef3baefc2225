//! Multiprecision series evaluation (MPFR via rug) for the cases where
//! f64 cancellation destroys the requested digits.
//!
//! Escalation protocol shared by the Wright and Mittag-Leffler callers:
//! run at a first guess of working precision, then certify against the
//! observed max-term/result ratio, re-running at the certified precision
//! when the guess was short. Past [`DIGIT_CAP`] the evaluation errors
//! out rather than chase digits forever.

use super::{EvalPolicy, DIGIT_CAP};
use crate::{Error, Result};
use rug::ops::CompleteRound;
use rug::Float;

#[derive(Debug, Clone)]
pub(crate) struct HpOutcome {
    pub value: f64,
    /// ln |value| extracted at full precision, for log-space consumers;
    /// meaningful even when `value` itself under- or overflows f64.
    pub ln_abs: f64,
    pub positive: bool,
    /// log10(max |term| / |value|), the digit count cancellation ate.
    pub ratio_log10: f64,
    pub converged: bool,
}

fn bits_for(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

fn stop_threshold(prec: u32, digits: u32) -> Float {
    Float::with_val(prec, -(digits as f64 + 10.0) * std::f64::consts::LN_10).exp()
}

/// sum z^n / (n! Gamma(lam n + mu)) at `digits` working digits.
pub(crate) fn wright_hp(lam: f64, mu: f64, z: f64, digits: u32, max_terms: usize) -> HpOutcome {
    let prec = bits_for(digits);
    let zf = Float::with_val(prec, z);
    let lamf = Float::with_val(prec, lam);
    let muf = Float::with_val(prec, mu);
    let mut p = Float::with_val(prec, 1.0);
    let mut sum = Float::with_val(prec, 0.0);
    let mut max_abs = Float::with_val(prec, 0.0);
    let mut prev_abs = Float::with_val(prec, f64::INFINITY);
    let mut decreasing = false;
    let mut converged = false;
    let stop = stop_threshold(prec, digits);

    for n in 0..max_terms {
        // The gamma argument must be assembled at working precision:
        // f64 rounding here costs psi(arg) * ulp relative per term,
        // which is exactly the noise escalation is meant to remove.
        let arg = (&lamf * (n as u32)).complete(prec) + &muf;
        let g = arg.gamma();
        // MPFR returns NaN on the poles; those terms are zero by the
        // reciprocal-gamma convention.
        if g.is_finite() {
            let term = (&p / &g).complete(prec);
            let a = term.clone().abs();
            if a > max_abs {
                max_abs = a.clone();
            }
            sum += &term;
            if a < prev_abs {
                decreasing = true;
            } else if a > prev_abs {
                decreasing = false;
            }
            if decreasing && n > 8 && a <= (&max_abs * &stop).complete(prec) {
                converged = true;
                break;
            }
            prev_abs = a;
        }
        p *= &zf;
        p /= n as f64 + 1.0;
    }
    finish(sum, max_abs, converged)
}

/// sum (m+k)!/m! y^m / Gamma(beta (m+k) + 1) at `digits` working digits.
/// Gamma arguments are positive here, so there are no pole terms.
pub(crate) fn ml_deriv_hp(beta: f64, k: u32, y: f64, digits: u32, max_terms: usize) -> HpOutcome {
    let prec = bits_for(digits);
    let yf = Float::with_val(prec, y);
    let betaf = Float::with_val(prec, beta);
    // q_m = (m+k)!/m! * y^m, seeded with k!.
    let mut q = Float::with_val(prec, k as f64 + 1.0).gamma();
    let mut sum = Float::with_val(prec, 0.0);
    let mut max_abs = Float::with_val(prec, 0.0);
    let mut prev_abs = Float::with_val(prec, f64::INFINITY);
    let mut decreasing = false;
    let mut converged = false;
    let stop = stop_threshold(prec, digits);

    for m in 0..max_terms {
        // Assembled at working precision for the same reason as in
        // wright_hp.
        let arg = (&betaf * (m as u32 + k)).complete(prec) + 1.0f64;
        let g = arg.gamma();
        let term = (&q / &g).complete(prec);
        let a = term.clone().abs();
        if a > max_abs {
            max_abs = a.clone();
        }
        sum += &term;
        if a < prev_abs {
            decreasing = true;
        } else if a > prev_abs {
            decreasing = false;
        }
        if decreasing && m > 4 && a <= (&max_abs * &stop).complete(prec) {
            converged = true;
            break;
        }
        prev_abs = a;
        q *= &yf;
        q *= m as f64 + k as f64 + 1.0;
        q /= m as f64 + 1.0;
    }
    finish(sum, max_abs, converged)
}

fn finish(sum: Float, max_abs: Float, converged: bool) -> HpOutcome {
    let positive = sum.is_sign_positive() && !sum.is_zero();
    let value = sum.to_f64();
    let ln_abs = if sum.is_zero() {
        f64::NEG_INFINITY
    } else {
        sum.clone().abs().ln().to_f64()
    };
    let ratio_log10 = if sum.is_zero() {
        f64::INFINITY
    } else {
        (max_abs / sum.abs()).log10().to_f64()
    };
    HpOutcome {
        value,
        ln_abs,
        positive,
        ratio_log10,
        converged,
    }
}

/// Cap for escalated series passes. Deliberately far above the f64
/// term budget: near order 1 the Wright series converges slowly in n
/// even when each term is cheap at high precision.
pub(crate) const HP_TERM_FACTOR: usize = 50;

/// Run an escalated evaluation to the policy's relative tolerance.
///
/// `eval(digits)` performs one pass; `first_digits` is the caller's
/// opening guess (usually an f64 prescan of the cancellation ratio).
/// `order`/`arg` only label errors.
pub(crate) fn escalated<F: Fn(u32) -> HpOutcome>(
    eval: F,
    first_digits: u32,
    policy: &EvalPolicy,
    order: f64,
    arg: f64,
) -> Result<HpOutcome> {
    let tol_digits = (-policy.rel_tol.log10()).ceil().max(0.0) as u32;
    let mut digits = first_digits.max(policy.highprec_digits).min(DIGIT_CAP);
    let mut needed = digits;
    for _pass in 0..3 {
        let out = eval(digits);
        if !out.converged {
            return Err(Error::NonConvergence {
                order,
                arg,
                max_terms: policy.max_terms * HP_TERM_FACTOR,
            });
        }
        needed = if out.ratio_log10.is_finite() {
            out.ratio_log10.ceil().max(0.0) as u32 + tol_digits + 8
        } else {
            DIGIT_CAP + 1
        };
        if needed <= digits {
            return Ok(out);
        }
        if needed > DIGIT_CAP {
            break;
        }
        digits = needed;
    }
    Err(Error::CancellationUnresolvable {
        order,
        arg,
        needed,
        cap: DIGIT_CAP,
    })
}
