//! Outage probabilities for direct and relayed transmissions.
//!
//! A relayed transmission spans two slots: the source broadcasts to relay
//! and destination, then (if the relay decoded) the relay forwards. Every
//! outage probability reduces to products of per-link noise factors and
//! interference Laplace transforms evaluated at the link budgets:
//!
//! * first phase, both schemes: `P[O_SR and O_SD]` by inclusion–exclusion
//!   over the two slot-one links;
//! * second phase, SC: the relay decoded but the relay–destination link
//!   failed;
//! * second phase, MRC: the relay decoded but the combined relay-plus-source
//!   power at the destination still missed the threshold. The combined
//!   fading power is hypoexponential, whose CCDF divides by
//!   `l_RD - l_SD`; the equal-gain case is evaluated through its analytic
//!   limit rather than an epsilon perturbation, which at budgets of order
//!   1e10 would inject visible bias.
//!
//! Under high-speed mobility every interference observation is independent
//! and joint transforms factor into marginals. Under low-speed mobility the
//! two observation points share one transmitting set and each road
//! contributes a cross-term `rho >= 1`; the evaluators differ in nothing
//! else.

use crate::geometry::{LinkBudget, Mobility, NetworkConfig, NodePose, Scenario, Scheme};
use crate::laplace::{
    marginal_exponent, marginal_exponent_derivative, rho_exponent, rho_exponent_derivative,
    RoadAxis,
};
use crate::quad::QuadratureSettings;
use crate::{Error, Result};

/// Relative gap under which `l_RD` and `l_SD` are treated as equal and the
/// MRC expression switches to its analytic limit.
pub const MRC_EQUAL_GAIN_REL_TOL: f64 = 1e-9;

/// Outage probability split into the two protocol phases.
///
/// `first_phase` is `P[O_SR and O_SD]`; `second_phase` is
/// `P[O_SR^c and O_RD]` (SC) or `P[O_SR^c and O_SRD]` (MRC); `total` is
/// their sum. A direct transmission reports everything in `first_phase`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageBreakdown {
    pub first_phase: f64,
    pub second_phase: f64,
    pub total: f64,
}

/// Success probability of a single slot-one link `tx -> rx`:
/// `N exp(-E_X(K) - E_Y(K))`.
pub fn link_success(
    tx: &NodePose,
    rx: &NodePose,
    threshold: f64,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let lb = LinkBudget::between(tx, rx, threshold, &cfg.channel)?;
    let ex = marginal_exponent(RoadAxis::X, rx, lb.laplace_arg(), cfg, quad)?;
    let ey = marginal_exponent(RoadAxis::Y, rx, lb.laplace_arg(), cfg, quad)?;
    Ok(lb.noise_factor() * libm::exp(-(ex + ey)))
}

/// Success probability of the source–destination link.
pub fn success_sd(scenario: &Scenario, cfg: &NetworkConfig, quad: &QuadratureSettings) -> Result<f64> {
    link_success(&scenario.source, &scenario.destination, scenario.threshold, cfg, quad)
}

/// Success probability of the source–relay link.
pub fn success_sr(scenario: &Scenario, cfg: &NetworkConfig, quad: &QuadratureSettings) -> Result<f64> {
    let relay = scenario.relay.as_ref().ok_or(Error::MissingRelay)?;
    link_success(&scenario.source, relay, scenario.threshold, cfg, quad)
}

/// Outage probability of a direct transmission to a destination anywhere on
/// the plane: `1 - N_SD L_X(K_SD) L_Y(K_SD)`.
pub fn outage_direct(
    source: &NodePose,
    destination: &NodePose,
    threshold: f64,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let s = link_success(source, destination, threshold, cfg, quad)?;
    Ok(finish_probability(1.0 - s))
}

/// Full outage evaluation dispatching on scheme and mobility model.
pub fn outage(
    scenario: &Scenario,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<OutageBreakdown> {
    evaluate(scenario, cfg, quad, cross_terms_of(scenario.mobility))
}

/// Diagnostic variant: evaluate with the cross-terms pinned to unity.
///
/// With `rho_X = rho_Y = 1` the correlated-interference evaluator must
/// reproduce the independent-interference one exactly; tests use this to pin
/// the structural identity between the two mobility models.
pub fn outage_with_unit_cross_terms(
    scenario: &Scenario,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<OutageBreakdown> {
    evaluate(scenario, cfg, quad, CrossTerms::Unit)
}

/// `P[O_SR and O_SD]`, the first-phase outage shared by SC and MRC.
pub fn p_first_phase(
    scenario: &Scenario,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let terms = CoopTerms::prepare(scenario, cfg, quad, cross_terms_of(scenario.mobility))?;
    Ok(terms.first_phase())
}

/// `P[O_SR^c and O_RD]`, the SC second-phase outage.
pub fn p_second_phase_sc(
    scenario: &Scenario,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let terms = CoopTerms::prepare(scenario, cfg, quad, cross_terms_of(scenario.mobility))?;
    Ok(terms.second_phase_sc())
}

/// `P[O_SR^c and O_SRD]`, the MRC second-phase outage.
pub fn p_second_phase_mrc(
    scenario: &Scenario,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let terms = CoopTerms::prepare(scenario, cfg, quad, cross_terms_of(scenario.mobility))?;
    terms.second_phase_mrc()
}

/// CCDF of `delta = l_rd E_1 + l_sd E_2` with `E_i` unit-mean exponentials:
/// the combined fading power behind the MRC decision.
///
/// Requires `l_rd, l_sd > 0` and `u >= 0`. Within a relative gap of
/// [`MRC_EQUAL_GAIN_REL_TOL`] the two-rate form degenerates into the
/// Erlang-2 limit `(1 + u/l) exp(-u/l)`.
pub fn ccdf_sum_two_exp(u: f64, l_rd: f64, l_sd: f64) -> f64 {
    debug_assert!(u >= 0.0 && l_rd > 0.0 && l_sd > 0.0);
    let gap = libm::fabs(l_rd - l_sd);
    if gap <= MRC_EQUAL_GAIN_REL_TOL * f64::max(l_rd, l_sd) {
        let l = 0.5 * (l_rd + l_sd);
        let r = u / l;
        (1.0 + r) * libm::exp(-r)
    } else {
        (l_rd * libm::exp(-u / l_rd) - l_sd * libm::exp(-u / l_sd)) / (l_rd - l_sd)
    }
}

/// Throughput `T = success * log2(1 + theta)` in bits per channel use.
pub fn throughput(threshold: f64, success_probability: f64) -> f64 {
    success_probability * libm::log1p(threshold) / core::f64::consts::LN_2
}

// ---------------------------------------------------------------------------
// cooperative evaluator
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CrossTerms {
    /// Independent interference observations: joint transforms factorize.
    Unit,
    /// One transmitting set for both slots: multiply in `rho` per road.
    Correlated,
}

fn cross_terms_of(mobility: Mobility) -> CrossTerms {
    match mobility {
        Mobility::Hsv => CrossTerms::Unit,
        Mobility::Lsv => CrossTerms::Correlated,
    }
}

fn evaluate(
    scenario: &Scenario,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
    cross: CrossTerms,
) -> Result<OutageBreakdown> {
    if scenario.scheme == Scheme::Direct {
        let op = outage_direct(
            &scenario.source,
            &scenario.destination,
            scenario.threshold,
            cfg,
            quad,
        )?;
        return Ok(OutageBreakdown {
            first_phase: op,
            second_phase: 0.0,
            total: op,
        });
    }
    let terms = CoopTerms::prepare(scenario, cfg, quad, cross)?;
    let p1 = terms.first_phase();
    let p2 = match scenario.scheme {
        Scheme::Sc => terms.second_phase_sc(),
        Scheme::Mrc => terms.second_phase_mrc()?,
        Scheme::Direct => unreachable!(),
    };
    Ok(OutageBreakdown {
        first_phase: p1,
        second_phase: p2,
        total: finish_probability(p1 + p2),
    })
}

/// Every Laplace evaluation one outage call needs, computed once: the
/// theorems reuse the relay marginals at `K_SR` across all terms.
struct CoopTerms<'a> {
    scenario: &'a Scenario,
    cfg: &'a NetworkConfig,
    quad: &'a QuadratureSettings,
    cross: CrossTerms,
    relay: NodePose,
    lb_sd: LinkBudget,
    lb_sr: LinkBudget,
    lb_rd: LinkBudget,
    /// relay marginals at K_SR (X then Y), destination marginals at K_SD and
    /// at K_RD
    e_r: [f64; 2],
    e_d_sd: [f64; 2],
    e_d_rd: [f64; 2],
    /// summed-over-roads cross-term exponents at (K_SR, K_SD) and
    /// (K_SR, K_RD); zero when observations are independent
    rho_sd: f64,
    rho_rd: f64,
}

impl<'a> CoopTerms<'a> {
    fn prepare(
        scenario: &'a Scenario,
        cfg: &'a NetworkConfig,
        quad: &'a QuadratureSettings,
        cross: CrossTerms,
    ) -> Result<Self> {
        let relay = scenario.relay.ok_or(Error::MissingRelay)?;
        let theta = scenario.threshold;
        let src = &scenario.source;
        let dst = &scenario.destination;
        let lb_sd = LinkBudget::between(src, dst, theta, &cfg.channel)?;
        let lb_sr = LinkBudget::between(src, &relay, theta, &cfg.channel)?;
        let lb_rd = LinkBudget::between(&relay, dst, theta, &cfg.channel)?;

        let e_r = [
            marginal_exponent(RoadAxis::X, &relay, lb_sr.laplace_arg(), cfg, quad)?,
            marginal_exponent(RoadAxis::Y, &relay, lb_sr.laplace_arg(), cfg, quad)?,
        ];
        let e_d_sd = [
            marginal_exponent(RoadAxis::X, dst, lb_sd.laplace_arg(), cfg, quad)?,
            marginal_exponent(RoadAxis::Y, dst, lb_sd.laplace_arg(), cfg, quad)?,
        ];
        let e_d_rd = [
            marginal_exponent(RoadAxis::X, dst, lb_rd.laplace_arg(), cfg, quad)?,
            marginal_exponent(RoadAxis::Y, dst, lb_rd.laplace_arg(), cfg, quad)?,
        ];
        let (rho_sd, rho_rd) = match cross {
            CrossTerms::Unit => (0.0, 0.0),
            CrossTerms::Correlated => (
                Self::rho_sum(&relay, dst, lb_sr.laplace_arg(), lb_sd.laplace_arg(), cfg, quad)?,
                Self::rho_sum(&relay, dst, lb_sr.laplace_arg(), lb_rd.laplace_arg(), cfg, quad)?,
            ),
        };
        Ok(Self {
            scenario,
            cfg,
            quad,
            cross,
            relay,
            lb_sd,
            lb_sr,
            lb_rd,
            e_r,
            e_d_sd,
            e_d_rd,
            rho_sd,
            rho_rd,
        })
    }

    fn rho_sum(
        relay: &NodePose,
        dest: &NodePose,
        s: f64,
        b: f64,
        cfg: &NetworkConfig,
        quad: &QuadratureSettings,
    ) -> Result<f64> {
        Ok(rho_exponent(RoadAxis::X, s, b, relay, dest, cfg, quad)?
            + rho_exponent(RoadAxis::Y, s, b, relay, dest, cfg, quad)?)
    }

    fn relay_exponent(&self) -> f64 {
        self.e_r[0] + self.e_r[1]
    }

    /// `P(O_SR^c) = N_SR L_XR(K_SR) L_YR(K_SR)`
    fn success_sr(&self) -> f64 {
        self.lb_sr.noise_factor() * libm::exp(-self.relay_exponent())
    }

    /// `P(O_SD^c) = N_SD L_XD(K_SD) L_YD(K_SD)`
    fn success_sd(&self) -> f64 {
        self.lb_sd.noise_factor() * libm::exp(-(self.e_d_sd[0] + self.e_d_sd[1]))
    }

    /// Joint success of both slot-one links.
    fn joint_sr_sd(&self) -> f64 {
        self.lb_sr.noise_factor()
            * self.lb_sd.noise_factor()
            * libm::exp(-(self.relay_exponent() + self.e_d_sd[0] + self.e_d_sd[1]) + self.rho_sd)
    }

    /// Joint factor at arguments (K_SR, K_RD).
    fn joint_sr_rd(&self) -> f64 {
        self.lb_sr.noise_factor()
            * self.lb_rd.noise_factor()
            * libm::exp(-(self.relay_exponent() + self.e_d_rd[0] + self.e_d_rd[1]) + self.rho_rd)
    }

    fn first_phase(&self) -> f64 {
        finish_probability(1.0 - self.success_sr() - self.success_sd() + self.joint_sr_sd())
    }

    fn second_phase_sc(&self) -> f64 {
        finish_probability(self.success_sr() - self.joint_sr_rd())
    }

    fn second_phase_mrc(&self) -> Result<f64> {
        let l_rd = self.lb_rd.path_gain();
        let l_sd = self.lb_sd.path_gain();
        if libm::fabs(l_rd - l_sd) <= MRC_EQUAL_GAIN_REL_TOL * f64::max(l_rd, l_sd) {
            return self.second_phase_mrc_equal_gain();
        }
        let w = l_rd - l_sd;
        let raw = self.success_sr() - (l_rd / w) * self.joint_sr_rd()
            + (l_sd / w) * self.joint_sr_sd();
        Ok(finish_probability(raw))
    }

    /// Equal-gain limit: the hypoexponential CCDF degenerates to
    /// `(1 + u/l) exp(-u/l)`, and carrying the limit through the expectation
    /// turns the extra `u/l` factor into `-K d/db` of the joint transform.
    fn second_phase_mrc_equal_gain(&self) -> Result<f64> {
        let cfg = self.cfg;
        let quad = self.quad;
        let dst = &self.scenario.destination;
        let l = 0.5 * (self.lb_rd.path_gain() + self.lb_sd.path_gain());
        let k = self.scenario.threshold / (cfg.channel.power() * l);
        let n_k = libm::exp(-k * cfg.channel.noise());
        let s = self.lb_sr.laplace_arg();

        let e_d = marginal_exponent(RoadAxis::X, dst, k, cfg, quad)?
            + marginal_exponent(RoadAxis::Y, dst, k, cfg, quad)?;
        let mut d_exponent_db = marginal_exponent_derivative(RoadAxis::X, dst, k, cfg, quad)?
            + marginal_exponent_derivative(RoadAxis::Y, dst, k, cfg, quad)?;
        let mut rho = 0.0;
        if self.cross == CrossTerms::Correlated {
            rho = Self::rho_sum(&self.relay, dst, s, k, cfg, quad)?;
            d_exponent_db -=
                rho_exponent_derivative(RoadAxis::X, s, k, &self.relay, dst, cfg, quad)?
                    + rho_exponent_derivative(RoadAxis::Y, s, k, &self.relay, dst, cfg, quad)?;
        }
        // d/db ln J = -(dE/db) + (d ln rho / db); d_exponent_db carries the
        // combination with the sign of dE/db
        let j = libm::exp(-(self.relay_exponent() + e_d) + rho);
        let dlogj_db = -d_exponent_db;
        let raw = self.success_sr()
            - self.lb_sr.noise_factor()
                * n_k
                * j
                * ((1.0 + k * cfg.channel.noise()) - k * dlogj_db);
        Ok(finish_probability(raw))
    }
}

// Tolerate sub-nanoscale floating drift outside [0, 1]; anything larger is a
// real defect and is returned untouched for tests to catch.
fn finish_probability(x: f64) -> f64 {
    if (-1e-9..0.0).contains(&x) {
        0.0
    } else if x > 1.0 && x <= 1.0 + 1e-9 {
        1.0
    } else {
        x
    }
}
