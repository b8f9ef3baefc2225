//! Renewal processes whose waiting times range from exponential to
//! heavy-tailed, the counting distributions they generate, compound
//! (jump) processes built on top of them, and the space-time scaling
//! limit of the heavy-tailed case.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`]: the special functions everything else needs
//!   (Mittag-Leffler type functions, Wright functions, repeated
//!   integrals of erfc), with automatic escalation to multiprecision
//!   arithmetic when f64 cancellation would eat the requested digits.
//! * [`renewal`]: the waiting-law trait, counting distributions,
//!   renewal functions, and a convolution oracle that cross-checks
//!   closed forms by direct numerical convolution.
//! * [`processes`]: the three concrete laws (exponential, Mittag-Leffler
//!   type, Wright type) and their long-time tail constants.
//! * [`compound`]: processes subordinated to a counting process
//!   (continuous-time random walks), including a master-equation
//!   residual check.
//! * [`tfde`]: the self-similar density that the heavy-tailed walks
//!   converge to under diffusive space-time scaling.
//! * [`sampling`]: exact trajectory samplers with deterministic
//!   per-walker RNG streams, parallel by default.

mod error;
pub mod compound;
pub mod processes;
pub mod renewal;
pub mod sampling;
pub mod specfun;
pub mod tfde;

pub use error::{Error, Result};
