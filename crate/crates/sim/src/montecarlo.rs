//! Monte Carlo oracle for the intersection model.
//!
//! Each trial draws interferer positions on the two roads, ALOHA access,
//! Rayleigh fading per (interferer, receiver, slot) and the slot signal
//! fadings, then evaluates the outage events exactly as the protocol defines
//! them. Nothing here reuses the analytical machinery beyond link path
//! gains, so estimates cross-validate the closed forms end to end.
//!
//! Mobility semantics per trial:
//!
//! * low-speed (`Lsv`): one transmitting set per road serves all three
//!   interference observations (relay slot 1, destination slots 1 and 2) —
//!   a vehicle transmits in both slots or in neither, which is exactly the
//!   coupling the analytical cross-terms integrate over. Fading is drawn
//!   fresh per observation.
//! * high-speed (`Hsv`): every observation gets an independent transmitting
//!   set, matching the factorized joint transforms.
//!
//! The transmitting sets are sampled directly at the thinned intensity
//! `p * lambda`; by the thinning theorem this is distributionally identical
//! to sampling the full process and flipping an ALOHA coin per vehicle.
//!
//! Determinism: the RNG for trial `i` is a pure function of `(seed, i)`, and
//! partial results are merged in fixed chunk order, so estimates are
//! bit-identical across runs and across any number of worker threads
//! (`RAYON_NUM_THREADS` only changes the wall time).

use crossway_core::geometry::{
    ChannelParams, Mobility, NetworkConfig, NodePose, RoadGeometry, Scenario, Scheme,
};
use crossway_core::laplace::RoadAxis;
use crossway_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

/// Default half-width (meters) used to approximate infinite roads.
///
/// Tests that need a tighter tail pick a larger window per point; finite
/// road configurations are always simulated on their exact segment.
pub const DEFAULT_SIM_WINDOW: f64 = 1e4;

/// Trials per work unit; results are folded in chunk order so the estimate
/// does not depend on scheduling.
const TRIAL_CHUNK: u64 = 512;

const STREAM_OUTAGE: u64 = 1;
const STREAM_JOINT: u64 = 2;
const STREAM_WINDOW_PAIR: u64 = 3;

/// Simulation size, seed and road-approximation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub trials: u64,
    pub seed: u64,
    pub sim_window: f64,
}

impl TrialConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameter("trial count must be >= 1"));
        }
        Ok(Self {
            trials,
            seed,
            sim_window: DEFAULT_SIM_WINDOW,
        })
    }

    pub fn with_window(mut self, sim_window: f64) -> Result<Self> {
        if !(sim_window.is_finite() && sim_window > 0.0) {
            return Err(Error::InvalidParameter("sim window must be finite and > 0"));
        }
        self.sim_window = sim_window;
        Ok(self)
    }
}

/// Frequency estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Sample-mean estimate of a Laplace-transform value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
}

// ---------------------------------------------------------------------------
// elementary sampling operations
// ---------------------------------------------------------------------------

/// Positions of a homogeneous Poisson process of the given intensity on
/// `[-half_width, half_width]`: a Poisson count with mean
/// `2 * intensity * half_width`, positions i.i.d. uniform.
pub fn sample_road_ppp<R: Rng + ?Sized>(intensity: f64, half_width: f64, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::new();
    sample_road_ppp_into(&mut out, poisson_count(intensity, half_width).as_ref(), half_width, rng);
    out
}

/// Independent p-thinning: each point survives with probability `p`.
pub fn aloha_thin<R: Rng + ?Sized>(points: &[f64], p: f64, rng: &mut R) -> Vec<f64> {
    points
        .iter()
        .copied()
        .filter(|_| rng.gen::<f64>() < p)
        .collect()
}

fn poisson_count(intensity: f64, half_width: f64) -> Option<Poisson<f64>> {
    let mean = 2.0 * intensity * half_width;
    if mean > 0.0 {
        Some(Poisson::new(mean).expect("positive finite mean"))
    } else {
        None
    }
}

fn sample_road_ppp_into<R: Rng + ?Sized>(
    buf: &mut Vec<f64>,
    count: Option<&Poisson<f64>>,
    half_width: f64,
    rng: &mut R,
) {
    buf.clear();
    let Some(dist) = count else { return };
    let n = dist.sample(rng) as u64;
    buf.reserve(n as usize);
    for _ in 0..n {
        buf.push(rng.gen_range(-half_width..half_width));
    }
}

/// Receiver coordinates against both roads, plus the fast path-loss kernel.
#[derive(Debug, Clone, Copy)]
struct Receiver {
    // squared offset from the road and foot-point coordinate, per road
    perp2_x: f64,
    par_x: f64,
    perp2_y: f64,
    par_y: f64,
}

impl Receiver {
    fn new(pose: &NodePose) -> Self {
        let (x, y) = pose.cartesian();
        Self {
            perp2_x: y * y,
            par_x: x,
            perp2_y: x * x,
            par_y: y,
        }
    }

    fn road(&self, axis: RoadAxis) -> (f64, f64) {
        match axis {
            RoadAxis::X => (self.perp2_x, self.par_x),
            RoadAxis::Y => (self.perp2_y, self.par_y),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum LossKernel {
    /// `alpha = 2`: contribution `(P/A^2) * E / r^2`
    AlphaTwo { p_over_a2: f64 },
    /// generic `alpha`: contribution `P * E * (A r)^-alpha`
    General { power: f64, antenna: f64, alpha: f64 },
}

impl LossKernel {
    fn new(ch: &ChannelParams) -> Self {
        if ch.alpha() == 2.0 {
            LossKernel::AlphaTwo {
                p_over_a2: ch.power() / (ch.antenna() * ch.antenna()),
            }
        } else {
            LossKernel::General {
                power: ch.power(),
                antenna: ch.antenna(),
                alpha: ch.alpha(),
            }
        }
    }

    #[inline]
    fn received(&self, fading: f64, dist2: f64) -> f64 {
        match *self {
            LossKernel::AlphaTwo { p_over_a2 } => p_over_a2 * fading / dist2,
            LossKernel::General {
                power,
                antenna,
                alpha,
            } => power * fading * (antenna * dist2.sqrt()).powf(-alpha),
        }
    }
}

/// Shot-noise sum over one road's points at one receiver, with fresh
/// unit-mean exponential fading per point. A point exactly on top of the
/// receiver (probability zero, floating-point degeneracy only) is re-sampled
/// within the window.
fn road_interference<R: Rng + ?Sized>(
    perp2: f64,
    par: f64,
    points: &[f64],
    half_width: f64,
    kernel: &LossKernel,
    rng: &mut R,
) -> f64 {
    let mut total = 0.0;
    for &p in points {
        let mut pos = p;
        let mut dx = pos - par;
        let mut dist2 = perp2 + dx * dx;
        while dist2 == 0.0 {
            log::warn!("interferer co-located with receiver; re-sampling its position");
            pos = rng.gen_range(-half_width..half_width);
            dx = pos - par;
            dist2 = perp2 + dx * dx;
        }
        let fading: f64 = rng.sample(Exp1);
        total += kernel.received(fading, dist2);
    }
    total
}

/// Aggregate interference (watts) at `receiver` from interferer positions on
/// the two roads, drawing Rayleigh power fading per point.
pub fn aggregate_interference<R: Rng + ?Sized>(
    receiver: &NodePose,
    x_points: &[f64],
    y_points: &[f64],
    half_width: f64,
    ch: &ChannelParams,
    rng: &mut R,
) -> f64 {
    let rx = Receiver::new(receiver);
    let kernel = LossKernel::new(ch);
    road_interference(rx.perp2_x, rx.par_x, x_points, half_width, &kernel, rng)
        + road_interference(rx.perp2_y, rx.par_y, y_points, half_width, &kernel, rng)
}

// ---------------------------------------------------------------------------
// deterministic parallel driver
// ---------------------------------------------------------------------------

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for one trial: a pure function of `(seed, stream, trial)`.
fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mut state = seed
        ^ stream.wrapping_mul(0xA076_1D64_78BD_642F)
        ^ trial.wrapping_mul(0xE703_7ED1_A0B4_28DB);
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(bytes)
}

/// Run `trials` independent trials in fixed-size chunks and fold the chunk
/// results in index order.
fn run_chunked<T, F>(trials: u64, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<u64>) -> T + Sync,
{
    let n_chunks = trials.div_ceil(TRIAL_CHUNK);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * TRIAL_CHUNK;
            let hi = (lo + TRIAL_CHUNK).min(trials);
            per_chunk(lo..hi)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// outage estimation
// ---------------------------------------------------------------------------

struct TrialContext {
    scheme: Scheme,
    mobility: Mobility,
    threshold: f64,
    noise: f64,
    power: f64,
    l_sd: f64,
    l_sr: f64,
    l_rd: f64,
    rx_relay: Receiver,
    rx_dest: Receiver,
    kernel: LossKernel,
    half_width: f64,
    pois_x: Option<Poisson<f64>>,
    pois_y: Option<Poisson<f64>>,
}

impl TrialContext {
    fn new(scenario: &Scenario, cfg: &NetworkConfig, sim_window: f64) -> Result<Self> {
        let ch = &cfg.channel;
        let half_width = match cfg.road {
            // infinite roads are approximated by the window; finite roads
            // are simulated exactly
            RoadGeometry::Infinite => sim_window,
            RoadGeometry::Finite { half_length } => half_length,
        };
        let thinned_x = cfg.traffic.access_prob() * cfg.traffic.lambda_x();
        let thinned_y = cfg.traffic.access_prob() * cfg.traffic.lambda_y();
        let (l_sr, l_rd, rx_relay) = match scenario.relay {
            Some(relay) => (
                ch.path_loss(scenario.source.distance(&relay))?,
                ch.path_loss(relay.distance(&scenario.destination))?,
                Receiver::new(&relay),
            ),
            None => (f64::NAN, f64::NAN, Receiver::new(&scenario.destination)),
        };
        if scenario.scheme != Scheme::Direct && scenario.relay.is_none() {
            return Err(Error::MissingRelay);
        }
        Ok(Self {
            scheme: scenario.scheme,
            mobility: scenario.mobility,
            threshold: scenario.threshold,
            noise: ch.noise(),
            power: ch.power(),
            l_sd: ch.path_loss(scenario.source.distance(&scenario.destination))?,
            l_sr,
            l_rd,
            rx_relay,
            rx_dest: Receiver::new(&scenario.destination),
            kernel: LossKernel::new(ch),
            half_width,
            pois_x: poisson_count(thinned_x, half_width),
            pois_y: poisson_count(thinned_y, half_width),
        })
    }

    fn interference_at<R: Rng + ?Sized>(
        &self,
        rx: &Receiver,
        xs: &[f64],
        ys: &[f64],
        rng: &mut R,
    ) -> f64 {
        road_interference(rx.perp2_x, rx.par_x, xs, self.half_width, &self.kernel, rng)
            + road_interference(rx.perp2_y, rx.par_y, ys, self.half_width, &self.kernel, rng)
    }

    /// One observation: fresh transmitting sets (sampled into the scratch
    /// buffers) and fresh fading.
    fn observe_fresh<R: Rng + ?Sized>(&self, rx: &Receiver, scratch: &mut Scratch, rng: &mut R) -> f64 {
        sample_road_ppp_into(&mut scratch.xs, self.pois_x.as_ref(), self.half_width, rng);
        sample_road_ppp_into(&mut scratch.ys, self.pois_y.as_ref(), self.half_width, rng);
        self.interference_at(rx, &scratch.xs, &scratch.ys, rng)
    }

    /// `SINR < threshold`, written multiplicatively so a zero denominator
    /// (no noise, no interferers) never divides.
    #[inline]
    fn in_outage(&self, fading_power: f64, interference: f64) -> bool {
        fading_power < self.threshold * (self.noise + interference)
    }

    fn trial<R: Rng + ?Sized>(&self, scratch: &mut Scratch, rng: &mut R) -> bool {
        if self.scheme == Scheme::Direct {
            let i_d = self.observe_fresh(&self.rx_dest, scratch, rng);
            let e_sd: f64 = rng.sample(Exp1);
            return self.in_outage(self.power * e_sd * self.l_sd, i_d);
        }

        let (i_r1, i_d1, i_d2) = match self.mobility {
            Mobility::Lsv => {
                sample_road_ppp_into(&mut scratch.xs, self.pois_x.as_ref(), self.half_width, rng);
                sample_road_ppp_into(&mut scratch.ys, self.pois_y.as_ref(), self.half_width, rng);
                let i_r1 = self.interference_at(&self.rx_relay, &scratch.xs, &scratch.ys, rng);
                let i_d1 = self.interference_at(&self.rx_dest, &scratch.xs, &scratch.ys, rng);
                let i_d2 = self.interference_at(&self.rx_dest, &scratch.xs, &scratch.ys, rng);
                (i_r1, i_d1, i_d2)
            }
            Mobility::Hsv => {
                let i_r1 = self.observe_fresh(&self.rx_relay, scratch, rng);
                let i_d1 = self.observe_fresh(&self.rx_dest, scratch, rng);
                let i_d2 = self.observe_fresh(&self.rx_dest, scratch, rng);
                (i_r1, i_d1, i_d2)
            }
        };

        let e_sr: f64 = rng.sample(Exp1);
        let e_sd1: f64 = rng.sample(Exp1);
        let o_sr = self.in_outage(self.power * e_sr * self.l_sr, i_r1);
        let o_sd = self.in_outage(self.power * e_sd1 * self.l_sd, i_d1);

        let slot_two = match self.scheme {
            Scheme::Sc => {
                let e_rd: f64 = rng.sample(Exp1);
                self.in_outage(self.power * e_rd * self.l_rd, i_d2)
            }
            Scheme::Mrc => {
                // combined power uses its own source-destination fading draw,
                // independent of slot one
                let e_rd: f64 = rng.sample(Exp1);
                let e_sd2: f64 = rng.sample(Exp1);
                let combined = self.power * (e_sd2 * self.l_sd + e_rd * self.l_rd);
                self.in_outage(combined, i_d2)
            }
            Scheme::Direct => unreachable!(),
        };

        (o_sr && o_sd) || (!o_sr && slot_two)
    }
}

#[derive(Default)]
struct Scratch {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

/// Estimate the outage probability of `scenario` by simulation.
pub fn estimate_outage(
    scenario: &Scenario,
    cfg: &NetworkConfig,
    tc: &TrialConfig,
) -> Result<OutageEstimate> {
    let ctx = TrialContext::new(scenario, cfg, tc.sim_window)?;
    let counts = run_chunked(tc.trials, |range| {
        let mut scratch = Scratch::default();
        let mut hits = 0u64;
        for t in range {
            let mut rng = trial_rng(tc.seed, STREAM_OUTAGE, t);
            if ctx.trial(&mut scratch, &mut rng) {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = counts.iter().sum();
    Ok(frequency_estimate(hits, tc.trials))
}

fn frequency_estimate(hits: u64, trials: u64) -> OutageEstimate {
    let p_hat = hits as f64 / trials as f64;
    OutageEstimate {
        p_hat,
        stderr: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        trials,
    }
}

// ---------------------------------------------------------------------------
// window sensitivity diagnostic
// ---------------------------------------------------------------------------

/// Paired window diagnostic: one simulation at window `2 * sim_window` whose
/// interferers are also accumulated restricted to `sim_window`, sharing all
/// randomness. Returns `(restricted, full)` estimates; their difference
/// isolates the tail truncation effect without Monte Carlo noise.
pub fn estimate_outage_window_pair(
    scenario: &Scenario,
    cfg: &NetworkConfig,
    tc: &TrialConfig,
) -> Result<(OutageEstimate, OutageEstimate)> {
    if !matches!(cfg.road, RoadGeometry::Infinite) {
        return Err(Error::InvalidParameter(
            "window diagnostic applies to infinite-road configurations",
        ));
    }
    let ctx = TrialContext::new(scenario, cfg, 2.0 * tc.sim_window)?;
    let inner = tc.sim_window;
    let counts = run_chunked(tc.trials, |range| {
        let mut scratch = Scratch::default();
        let mut hits = (0u64, 0u64);
        for t in range {
            let mut rng = trial_rng(tc.seed, STREAM_WINDOW_PAIR, t);
            let (restricted, full) = paired_trial(&ctx, inner, &mut scratch, &mut rng);
            hits.0 += restricted as u64;
            hits.1 += full as u64;
        }
        hits
    });
    let (r, f) = counts
        .iter()
        .fold((0u64, 0u64), |acc, h| (acc.0 + h.0, acc.1 + h.1));
    Ok((frequency_estimate(r, tc.trials), frequency_estimate(f, tc.trials)))
}

/// Interference pair (restricted to `inner`, full window) with shared
/// positions and fading.
fn paired_interference<R: Rng + ?Sized>(
    ctx: &TrialContext,
    rx: &Receiver,
    inner: f64,
    xs: &[f64],
    ys: &[f64],
    rng: &mut R,
) -> (f64, f64) {
    let mut restricted = 0.0;
    let mut full = 0.0;
    for (axis, pts) in [(RoadAxis::X, xs), (RoadAxis::Y, ys)] {
        let (perp2, par) = rx.road(axis);
        for &pos in pts {
            let dx = pos - par;
            let dist2 = perp2 + dx * dx;
            if dist2 == 0.0 {
                // measure-zero degeneracy; skip in the diagnostic
                continue;
            }
            let fading: f64 = rng.sample(Exp1);
            let w = ctx.kernel.received(fading, dist2);
            full += w;
            if pos.abs() <= inner {
                restricted += w;
            }
        }
    }
    (restricted, full)
}

fn paired_trial<R: Rng + ?Sized>(
    ctx: &TrialContext,
    inner: f64,
    scratch: &mut Scratch,
    rng: &mut R,
) -> (bool, bool) {
    // LSV-style shared point sets would also work here, but the diagnostic
    // matches the estimator's mobility semantics observation by observation.
    let mut observe = |rx: &Receiver, scratch: &mut Scratch, rng: &mut R| {
        sample_road_ppp_into(&mut scratch.xs, ctx.pois_x.as_ref(), ctx.half_width, rng);
        sample_road_ppp_into(&mut scratch.ys, ctx.pois_y.as_ref(), ctx.half_width, rng);
        paired_interference(ctx, rx, inner, &scratch.xs, &scratch.ys, rng)
    };

    if ctx.scheme == Scheme::Direct {
        let (i_r, i_f) = observe(&ctx.rx_dest, scratch, rng);
        let e_sd: f64 = rng.sample(Exp1);
        let sig = ctx.power * e_sd * ctx.l_sd;
        return (ctx.in_outage(sig, i_r), ctx.in_outage(sig, i_f));
    }

    let (obs, shared): ([(f64, f64); 3], bool) = match ctx.mobility {
        Mobility::Lsv => {
            sample_road_ppp_into(&mut scratch.xs, ctx.pois_x.as_ref(), ctx.half_width, rng);
            sample_road_ppp_into(&mut scratch.ys, ctx.pois_y.as_ref(), ctx.half_width, rng);
            let a = paired_interference(ctx, &ctx.rx_relay, inner, &scratch.xs, &scratch.ys, rng);
            let b = paired_interference(ctx, &ctx.rx_dest, inner, &scratch.xs, &scratch.ys, rng);
            let c = paired_interference(ctx, &ctx.rx_dest, inner, &scratch.xs, &scratch.ys, rng);
            ([a, b, c], true)
        }
        Mobility::Hsv => {
            let a = observe(&ctx.rx_relay, scratch, rng);
            let b = observe(&ctx.rx_dest, scratch, rng);
            let c = observe(&ctx.rx_dest, scratch, rng);
            ([a, b, c], false)
        }
    };
    let _ = shared;

    let e_sr: f64 = rng.sample(Exp1);
    let e_sd1: f64 = rng.sample(Exp1);
    let sig_sr = ctx.power * e_sr * ctx.l_sr;
    let sig_sd = ctx.power * e_sd1 * ctx.l_sd;
    let slot_two_sig = match ctx.scheme {
        Scheme::Sc => {
            let e_rd: f64 = rng.sample(Exp1);
            ctx.power * e_rd * ctx.l_rd
        }
        Scheme::Mrc => {
            let e_rd: f64 = rng.sample(Exp1);
            let e_sd2: f64 = rng.sample(Exp1);
            ctx.power * (e_sd2 * ctx.l_sd + e_rd * ctx.l_rd)
        }
        Scheme::Direct => unreachable!(),
    };

    let eval = |pick: fn(&(f64, f64)) -> f64| {
        let o_sr = ctx.in_outage(sig_sr, pick(&obs[0]));
        let o_sd = ctx.in_outage(sig_sd, pick(&obs[1]));
        let o_2 = ctx.in_outage(slot_two_sig, pick(&obs[2]));
        (o_sr && o_sd) || (!o_sr && o_2)
    };
    (eval(|p| p.0), eval(|p| p.1))
}

// ---------------------------------------------------------------------------
// joint Laplace estimation
// ---------------------------------------------------------------------------

/// Sample mean of `exp(-s I_relay - b I_dest)` for one road's interference
/// under the common-transmitting-set (low-speed) sampling: shared positions,
/// independent fading per receiver.
pub fn estimate_joint_laplace(
    axis: RoadAxis,
    s: f64,
    b: f64,
    relay: &NodePose,
    dest: &NodePose,
    cfg: &NetworkConfig,
    tc: &TrialConfig,
) -> Result<LaplaceEstimate> {
    if !(s.is_finite() && s >= 0.0 && b.is_finite() && b >= 0.0) {
        return Err(Error::InvalidParameter("Laplace arguments must be finite and >= 0"));
    }
    let half_width = match cfg.road {
        RoadGeometry::Infinite => tc.sim_window,
        RoadGeometry::Finite { half_length } => half_length,
    };
    let thinned = cfg.traffic.access_prob() * axis.intensity(&cfg.traffic);
    let pois = poisson_count(thinned, half_width);
    let kernel = LossKernel::new(&cfg.channel);
    let rx_relay = Receiver::new(relay);
    let rx_dest = Receiver::new(dest);
    let (relay_perp2, relay_par) = rx_relay.road(axis);
    let (dest_perp2, dest_par) = rx_dest.road(axis);

    let sums = run_chunked(tc.trials, |range| {
        let mut pts = Vec::new();
        let mut sum = 0.0f64;
        let mut sum_sq = 0.0f64;
        for t in range {
            let mut rng = trial_rng(tc.seed, STREAM_JOINT, t);
            sample_road_ppp_into(&mut pts, pois.as_ref(), half_width, &mut rng);
            let i_relay =
                road_interference(relay_perp2, relay_par, &pts, half_width, &kernel, &mut rng);
            let i_dest =
                road_interference(dest_perp2, dest_par, &pts, half_width, &kernel, &mut rng);
            let g = (-s * i_relay - b * i_dest).exp();
            sum += g;
            sum_sq += g * g;
        }
        (sum, sum_sq)
    });
    let (sum, sum_sq) = sums
        .iter()
        .fold((0.0f64, 0.0f64), |acc, v| (acc.0 + v.0, acc.1 + v.1));
    let n = tc.trials as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0).max(1.0)).max(0.0);
    Ok(LaplaceEstimate {
        mean,
        stderr: (var / n).sqrt(),
        trials: tc.trials,
    })
}
