//! Monte Carlo side of the crate: waiting-time samplers for the three
//! laws, trajectory simulation of the counting and jump processes they
//! induce, and the comparison statistics used to check them against
//! the analytic layer.
//!
//! Randomness comes from ChaCha8 streams: walker i of a batch seeded s
//! always draws from stream (s, i), so results are bit-reproducible
//! regardless of how the walkers are scheduled across threads.

use crate::compound::{GaussianJumpLaw, ZeroJumpLaw};
use crate::processes::{MittagLefflerLaw, PoissonLaw, WrightLaw};
use crate::{Error, Result};
use libm::{cos, exp, log, pow, sin, sqrt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

/// Hard per-walker event cap; a law would need pathological parameters
/// to reach it, so hitting it is reported rather than absorbed.
const RUNAWAY_CAP: u64 = 100_000_000;

/// Factory for per-walker RNG streams from one 64-bit seed.
///
/// Identical (seed, index) pairs yield identical sample sequences on
/// any build, which is what makes parallel batches deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The generator dedicated to one walker.
    pub fn walker(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// Uniform draw from the open interval (0, 1); exact endpoints are
/// rejected so logs and the Kanter formula stay finite.
fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

fn exponential<R: Rng>(rng: &mut R) -> f64 {
    -log(open_unit(rng))
}

/// One-sided stable variate with Laplace transform exp(-s^beta), by
/// Kanter's representation
///     S = sin(beta pi U) sin((1-beta) pi U)^{(1-beta)/beta}
///         / sin(pi U)^{1/beta} * E^{-(1-beta)/beta}.
/// The u -> 0 limit of the trigonometric factor is finite (the powers
/// of u cancel exactly), so open-interval U is all it needs.
fn kanter_stable(beta: f64, u: f64, e: f64) -> f64 {
    let r = (1.0 - beta) / beta;
    sin(beta * PI * u) * pow(sin((1.0 - beta) * PI * u), r) / pow(sin(PI * u), 1.0 / beta)
        * pow(e, -r)
}

/// Draw of a single waiting time from a law's exact distribution.
pub trait SampleWait: Send + Sync {
    fn sample_wait(&self, rng: &mut ChaCha8Rng) -> f64;
}

impl SampleWait for PoissonLaw {
    fn sample_wait(&self, rng: &mut ChaCha8Rng) -> f64 {
        exponential(rng) / self.lambda()
    }
}

impl SampleWait for WrightLaw {
    /// The stable variate itself; at beta = 1 it degenerates to the
    /// unit clock tick.
    fn sample_wait(&self, rng: &mut ChaCha8Rng) -> f64 {
        let beta = self.beta();
        if beta == 1.0 {
            return 1.0;
        }
        let u = open_unit(rng);
        let e = exponential(rng);
        kanter_stable(beta, u, e)
    }
}

impl SampleWait for MittagLefflerLaw {
    /// Product form T = E^{1/beta} S, the subordination of the
    /// exponential to the stable law; at beta = 1 it is Exp(1).
    fn sample_wait(&self, rng: &mut ChaCha8Rng) -> f64 {
        let beta = self.beta();
        let e = exponential(rng);
        if beta == 1.0 {
            return e;
        }
        let u = open_unit(rng);
        let es = exponential(rng);
        pow(e, 1.0 / beta) * kanter_stable(beta, u, es)
    }
}

/// Draw of a single spatial jump.
pub trait SampleJump: Send + Sync {
    fn sample_jump(&self, rng: &mut ChaCha8Rng) -> f64;
}

impl SampleJump for GaussianJumpLaw {
    /// Box-Muller scaled to the law's variance of 2.
    fn sample_jump(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u = open_unit(rng);
        let v = open_unit(rng);
        sqrt(2.0) * sqrt(-2.0 * log(u)) * cos(2.0 * PI * v)
    }
}

impl SampleJump for ZeroJumpLaw {
    fn sample_jump(&self, _rng: &mut ChaCha8Rng) -> f64 {
        0.0
    }
}

/// Final states of a batch of independent walkers at one horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryBatch {
    pub t: f64,
    /// Events counted by each walker up to and including t.
    pub counts: Vec<u64>,
    /// Each walker's position after its counted jumps; all zero when
    /// the batch was simulated without a jump law.
    pub positions: Vec<f64>,
}

impl TrajectoryBatch {
    pub fn walkers(&self) -> usize {
        self.counts.len()
    }

    pub fn mean_count(&self) -> f64 {
        let n = self.counts.len() as f64;
        self.counts.iter().map(|&c| c as f64).sum::<f64>() / n
    }
}

fn check_batch(t: f64, walkers: usize) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("horizon must be finite and >= 0, got {t}")));
    }
    if walkers == 0 {
        return Err(Error::Domain("need at least one walker".into()));
    }
    Ok(())
}

/// Renewal events accumulated until the running clock passes t; an
/// event landing exactly on t still counts.
fn walk_counting<L: SampleWait>(law: &L, t: f64, rng: &mut ChaCha8Rng) -> Result<(u64, f64)> {
    let mut clock = 0.0;
    let mut n = 0u64;
    loop {
        clock += law.sample_wait(rng);
        if clock > t {
            return Ok((n, 0.0));
        }
        n += 1;
        if n >= RUNAWAY_CAP {
            return Err(Error::RunawayWalker { cap: RUNAWAY_CAP });
        }
    }
}

fn walk_ctrw<L: SampleWait, J: SampleJump>(
    law: &L,
    jumps: &J,
    t: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(u64, f64)> {
    let mut clock = 0.0;
    let mut n = 0u64;
    let mut x = 0.0;
    loop {
        clock += law.sample_wait(rng);
        if clock > t {
            return Ok((n, x));
        }
        n += 1;
        x += jumps.sample_jump(rng);
        if n >= RUNAWAY_CAP {
            return Err(Error::RunawayWalker { cap: RUNAWAY_CAP });
        }
    }
}

/// Run one closure per walker stream, in parallel when the crate is
/// built with the parallel feature. Walker order in the output is the
/// stream index order either way.
fn drive<F>(walkers: usize, seed: u64, f: F) -> Result<(Vec<u64>, Vec<f64>)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(u64, f64)> + Sync,
{
    let streams = RngStream::new(seed);
    #[cfg(feature = "parallel")]
    let pairs: Result<Vec<(u64, f64)>> = {
        use rayon::prelude::*;
        (0..walkers)
            .into_par_iter()
            .map(|w| f(&mut streams.walker(w as u64)))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let pairs: Result<Vec<(u64, f64)>> = (0..walkers)
        .map(|w| f(&mut streams.walker(w as u64)))
        .collect();
    Ok(pairs?.into_iter().unzip())
}

fn drive_seq<F>(walkers: usize, seed: u64, f: F) -> Result<(Vec<u64>, Vec<f64>)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(u64, f64)>,
{
    let streams = RngStream::new(seed);
    let pairs: Result<Vec<(u64, f64)>> = (0..walkers)
        .map(|w| f(&mut streams.walker(w as u64)))
        .collect();
    Ok(pairs?.into_iter().unzip())
}

/// Simulate the counting process N(t) for a batch of walkers.
pub fn simulate_counting<L: SampleWait>(
    law: &L,
    t: f64,
    walkers: usize,
    seed: u64,
) -> Result<TrajectoryBatch> {
    check_batch(t, walkers)?;
    let (counts, positions) = drive(walkers, seed, |rng| walk_counting(law, t, rng))?;
    Ok(TrajectoryBatch { t, counts, positions })
}

/// Simulate the jump process x(t) = sum of N(t) jumps for a batch.
pub fn simulate_ctrw<L: SampleWait, J: SampleJump>(
    law: &L,
    jumps: &J,
    t: f64,
    walkers: usize,
    seed: u64,
) -> Result<TrajectoryBatch> {
    check_batch(t, walkers)?;
    let (counts, positions) = drive(walkers, seed, |rng| walk_ctrw(law, jumps, t, rng))?;
    Ok(TrajectoryBatch { t, counts, positions })
}

/// Single-threaded reference version of [`simulate_ctrw`]; the parallel
/// path must reproduce it exactly.
pub fn simulate_ctrw_seq<L: SampleWait, J: SampleJump>(
    law: &L,
    jumps: &J,
    t: f64,
    walkers: usize,
    seed: u64,
) -> Result<TrajectoryBatch> {
    check_batch(t, walkers)?;
    let (counts, positions) = drive_seq(walkers, seed, |rng| walk_ctrw(law, jumps, t, rng))?;
    Ok(TrajectoryBatch { t, counts, positions })
}

/// n independent waiting times, one walker stream per draw.
pub fn sample_waits<L: SampleWait>(law: &L, n: usize, seed: u64) -> Vec<f64> {
    let streams = RngStream::new(seed);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .map(|i| law.sample_wait(&mut streams.walker(i as u64)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n)
            .map(|i| law.sample_wait(&mut streams.walker(i as u64)))
            .collect()
    }
}

/// One-sample Kolmogorov-Smirnov statistic sup |F_emp - F|.
///
/// Ties are collapsed into jump groups, and the reference cdf is read
/// at both one-sided limits of each group (the left limit through the
/// previous representable value), so laws with atoms are compared
/// correctly: samples sitting exactly on a matching cdf jump
/// contribute no distance.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("KS distance needs at least one sample".into()));
    }
    let mut s = samples.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < s.len() {
        let mut j = i + 1;
        while j < s.len() && s[j] == s[i] {
            j += 1;
        }
        let f_hi = cdf(s[i]);
        let f_lo = cdf(s[i].next_down().max(0.0));
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((at - f_hi).abs()).max((f_lo - below).abs());
        i = j;
    }
    Ok(d)
}

/// Empirical Laplace transform mean(exp(-s T)) with its standard error.
pub fn empirical_laplace(samples: &[f64], s: f64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::Domain("Laplace estimate needs at least one sample".into()));
    }
    let n = samples.len() as f64;
    let vals: Vec<f64> = samples.iter().map(|&t| exp(-s * t)).collect();
    let mean = vals.iter().sum::<f64>() / n;
    if samples.len() == 1 {
        return Ok((mean, f64::INFINITY));
    }
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, sqrt(var / n)))
}
