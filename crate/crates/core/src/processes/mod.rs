//! The three concrete waiting-time laws and their shared long-time
//! tail constants.
//!
//! * [`PoissonLaw`]: exponential waits, rate lambda. Everything closed
//!   form; the counting process is Poisson.
//! * [`MittagLefflerLaw`]: survival E_beta(-t^beta). Exponential at
//!   beta = 1, power tail t^{-beta} otherwise; the unique law whose
//!   counting probabilities are derivatives of the same function.
//! * [`WrightLaw`]: the inverse-stable waiting law, exponentially flat
//!   near t = 0 with the same power tail at infinity. Degenerates to a
//!   deterministic unit clock at beta = 1.
//!
//! Both fractional laws share the tail phi(t) ~ A t^{-1-beta} with the
//! constant returned by [`tail_constants`].

mod mittag_leffler;
mod poisson;
mod tail;
mod wright;

pub use mittag_leffler::MittagLefflerLaw;
pub use poisson::PoissonLaw;
pub use tail::{tail_constants, TailConstants};
pub use wright::WrightLaw;
