//! Laplace transforms of the aggregate road interference.
//!
//! For a receiver `N` anywhere on the plane, the interference from one road
//! is a shot-noise sum over the ALOHA-thinned Poisson process of that road
//! with Rayleigh fading. Its Laplace transform at `s >= 0` is
//!
//! ```text
//! L(s) = exp( -p lambda Integral_B dx / (1 + (A ||x - N||)^alpha / (s P)) )
//! ```
//!
//! with `||x - N||` the distance from the road point to the receiver and `B`
//! the road support (the whole line or a segment `[-Z, Z]`). For `alpha = 2`
//! the integral has closed forms for both supports; any other exponent goes
//! through the adaptive quadrature in [`crate::quad`].
//!
//! When the same transmitting set is observed at two receivers (the
//! low-speed mobility model), the joint transform factors into the two
//! marginals times a cross-term `rho(s, b) >= 1` that captures the positive
//! interference correlation; `rho` has no printed closed form and is always
//! integrated numerically.
//!
//! All functions work in log space: the exponent `p lambda Gamma` is
//! assembled first and exponentiated last, so link budgets with `s ~ 1e10`
//! lose nothing to overflow.

use crate::geometry::{ChannelParams, NetworkConfig, NodePose, RoadGeometry, TrafficParams};
use crate::quad::{integrate_real_line, integrate_segment, QuadratureSettings};
use crate::{Error, Result};

/// Which road the interference originates from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoadAxis {
    X,
    Y,
}

impl RoadAxis {
    /// Receiver coordinates relative to this road: (perpendicular offset,
    /// parallel coordinate of the foot point).
    pub fn receiver_coords(&self, node: &NodePose) -> (f64, f64) {
        match self {
            RoadAxis::X => (node.y(), node.x()),
            RoadAxis::Y => (node.x(), node.y()),
        }
    }

    /// Interferer intensity on this road.
    pub fn intensity(&self, traffic: &TrafficParams) -> f64 {
        match self {
            RoadAxis::X => traffic.lambda_x(),
            RoadAxis::Y => traffic.lambda_y(),
        }
    }
}

/// A Laplace-transform value stored as its exponent: `value = exp(-exponent)`
/// with `exponent >= 0`, so the represented value always lies in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceValue {
    exponent: f64,
}

impl LaplaceValue {
    fn from_exponent(exponent: f64) -> Self {
        // positive integrands can only produce nonnegative exponents; guard
        // against -0.0 style artifacts
        Self {
            exponent: exponent.max(0.0),
        }
    }

    /// The transform value in `(0, 1]` (may underflow to 0 for exponents
    /// beyond ~745).
    pub fn value(&self) -> f64 {
        libm::exp(-self.exponent)
    }

    /// `-ln(value)`, the quantity actually assembled by the evaluators.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }
}

// ---------------------------------------------------------------------------
// marginal transforms
// ---------------------------------------------------------------------------

/// Laplace transform of the X-road interference at `node`, dispatching to
/// the closed form when `alpha = 2` and to quadrature otherwise.
pub fn laplace_x(
    node: &NodePose,
    s: f64,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<LaplaceValue> {
    marginal(RoadAxis::X, node, s, cfg, quad)
}

/// Laplace transform of the Y-road interference at `node`.
pub fn laplace_y(
    node: &NodePose,
    s: f64,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<LaplaceValue> {
    marginal(RoadAxis::Y, node, s, cfg, quad)
}

/// Axis-generic marginal transform.
pub fn marginal(
    axis: RoadAxis,
    node: &NodePose,
    s: f64,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<LaplaceValue> {
    marginal_exponent(axis, node, s, cfg, quad).map(LaplaceValue::from_exponent)
}

/// Exponent of the marginal transform: `-ln L(s) = p lambda Gamma(s)`.
pub fn marginal_exponent(
    axis: RoadAxis,
    node: &NodePose,
    s: f64,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    check_laplace_arg(s)?;
    let p_lambda = cfg.traffic.access_prob() * axis.intensity(&cfg.traffic);
    if s == 0.0 || p_lambda == 0.0 {
        return Ok(0.0);
    }
    if cfg.channel.alpha() == 2.0 {
        return closed_exponent(axis, node, s, cfg);
    }
    marginal_exponent_numeric(axis, node, s, cfg, quad)
}

fn check_laplace_arg(s: f64) -> Result<()> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::InvalidParameter("Laplace argument must be finite and >= 0"));
    }
    Ok(())
}

fn closed_exponent(axis: RoadAxis, node: &NodePose, s: f64, cfg: &NetworkConfig) -> Result<f64> {
    let (perp, par) = axis.receiver_coords(node);
    let p_lambda = cfg.traffic.access_prob() * axis.intensity(&cfg.traffic);
    match cfg.road {
        RoadGeometry::Infinite => Ok(closed_exponent_infinite(perp, p_lambda, s, &cfg.channel)),
        RoadGeometry::Finite { half_length } => Ok(closed_exponent_finite(
            perp,
            par,
            p_lambda,
            s,
            &cfg.channel,
            half_length,
        )),
    }
}

// exponent = p lambda * pi k / sqrt(perp^2 + k), k = s P / A^2
fn closed_exponent_infinite(perp: f64, p_lambda: f64, s: f64, ch: &ChannelParams) -> f64 {
    if s == 0.0 || p_lambda == 0.0 {
        return 0.0;
    }
    let k = s * ch.power() / (ch.antenna() * ch.antenna());
    p_lambda * core::f64::consts::PI * k / libm::sqrt(perp * perp + k)
}

// exponent = p lambda * k [atan((Z+par)/q) + atan((Z-par)/q)] / q,
// q = sqrt(perp^2 + k)
fn closed_exponent_finite(
    perp: f64,
    par: f64,
    p_lambda: f64,
    s: f64,
    ch: &ChannelParams,
    half_length: f64,
) -> f64 {
    if s == 0.0 || p_lambda == 0.0 {
        return 0.0;
    }
    let k = s * ch.power() / (ch.antenna() * ch.antenna());
    let q = libm::sqrt(perp * perp + k);
    let span = libm::atan((half_length + par) / q) + libm::atan((half_length - par) / q);
    p_lambda * k * span / q
}

macro_rules! closed_form_pair {
    ($name:ident, $axis:expr, $doc:literal) => {
        #[doc = $doc]
        pub fn $name(
            node: &NodePose,
            s: f64,
            traffic: &TrafficParams,
            ch: &ChannelParams,
        ) -> Result<LaplaceValue> {
            check_laplace_arg(s)?;
            require_alpha_two(ch)?;
            let (perp, _) = $axis.receiver_coords(node);
            let p_lambda = traffic.access_prob() * $axis.intensity(traffic);
            Ok(LaplaceValue::from_exponent(closed_exponent_infinite(
                perp, p_lambda, s, ch,
            )))
        }
    };
}

closed_form_pair!(
    laplace_x_closed_infinite,
    RoadAxis::X,
    "Closed form of the X-road transform on an infinite road (`alpha = 2` \
     only). Depends on the receiver only through its offset from the X road."
);
closed_form_pair!(
    laplace_y_closed_infinite,
    RoadAxis::Y,
    "Closed form of the Y-road transform on an infinite road (`alpha = 2` \
     only)."
);

/// Closed form of the X-road transform on the segment `[-Z, Z]`
/// (`alpha = 2` only). Unlike the infinite-road form this depends on both
/// receiver coordinates.
pub fn laplace_x_closed_finite(
    node: &NodePose,
    s: f64,
    traffic: &TrafficParams,
    ch: &ChannelParams,
    half_length: f64,
) -> Result<LaplaceValue> {
    closed_finite(RoadAxis::X, node, s, traffic, ch, half_length)
}

/// Closed form of the Y-road transform on the segment `[-Z, Z]`
/// (`alpha = 2` only).
pub fn laplace_y_closed_finite(
    node: &NodePose,
    s: f64,
    traffic: &TrafficParams,
    ch: &ChannelParams,
    half_length: f64,
) -> Result<LaplaceValue> {
    closed_finite(RoadAxis::Y, node, s, traffic, ch, half_length)
}

fn closed_finite(
    axis: RoadAxis,
    node: &NodePose,
    s: f64,
    traffic: &TrafficParams,
    ch: &ChannelParams,
    half_length: f64,
) -> Result<LaplaceValue> {
    check_laplace_arg(s)?;
    require_alpha_two(ch)?;
    if !(half_length.is_finite() && half_length > 0.0) {
        return Err(Error::InvalidParameter("road half length must be finite and > 0"));
    }
    let (perp, par) = axis.receiver_coords(node);
    let p_lambda = traffic.access_prob() * axis.intensity(traffic);
    Ok(LaplaceValue::from_exponent(closed_exponent_finite(
        perp,
        par,
        p_lambda,
        s,
        ch,
        half_length,
    )))
}

fn require_alpha_two(ch: &ChannelParams) -> Result<()> {
    if ch.alpha() != 2.0 {
        return Err(Error::ClosedFormRequiresAlphaTwo { alpha: ch.alpha() });
    }
    Ok(())
}

/// Quadrature evaluation of the marginal exponent, valid for any
/// `alpha > 1`. For `alpha = 2` it serves as the independent cross-check of
/// the closed forms.
pub fn marginal_exponent_numeric(
    axis: RoadAxis,
    node: &NodePose,
    s: f64,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    check_laplace_arg(s)?;
    let p_lambda = cfg.traffic.access_prob() * axis.intensity(&cfg.traffic);
    if s == 0.0 || p_lambda == 0.0 {
        return Ok(0.0);
    }
    let (perp, par) = axis.receiver_coords(node);
    let ch = &cfg.channel;
    let alpha = ch.alpha();
    // dominance half-width: (A w)^alpha = s P
    let w = libm::pow(s * ch.power(), 1.0 / alpha) / ch.antenna();
    let eta = libm::fabs(perp) / w;
    let half_alpha = 0.5 * alpha;
    // scaled integrand in t = (x - par)/w
    let phi = |t: f64| 1.0 / (1.0 + libm::pow(eta * eta + t * t, half_alpha));
    let shoulder = 1.0 + eta;
    let seeds = [-shoulder, 0.0, shoulder];
    let integral = match cfg.road {
        RoadGeometry::Infinite => integrate_real_line(&phi, 0.0, shoulder, &seeds, quad)?,
        RoadGeometry::Finite { half_length } => {
            let t_lo = (-half_length - par) / w;
            let t_hi = (half_length - par) / w;
            integrate_segment(&phi, t_lo, t_hi, 0.0, shoulder, &seeds, quad)?
        }
    };
    Ok(p_lambda * w * integral.value)
}

/// `d/db` of the marginal exponent at `b > 0`, used by the equal-gain MRC
/// limit. Note `d/db [1/(1+u)] = u/(b (1+u)^2) = g(1-g)/b` for
/// `u = (A r)^alpha / (b P)`.
pub fn marginal_exponent_derivative(
    axis: RoadAxis,
    node: &NodePose,
    b: f64,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParameter("derivative requires a Laplace argument > 0"));
    }
    let p_lambda = cfg.traffic.access_prob() * axis.intensity(&cfg.traffic);
    if p_lambda == 0.0 {
        return Ok(0.0);
    }
    let (perp, par) = axis.receiver_coords(node);
    let ch = &cfg.channel;
    let alpha = ch.alpha();
    let w = libm::pow(b * ch.power(), 1.0 / alpha) / ch.antenna();
    let eta = libm::fabs(perp) / w;
    let half_alpha = 0.5 * alpha;
    let phi = |t: f64| {
        let g = 1.0 / (1.0 + libm::pow(eta * eta + t * t, half_alpha));
        g * (1.0 - g)
    };
    let shoulder = 1.0 + eta;
    let seeds = [-shoulder, 0.0, shoulder];
    let integral = match cfg.road {
        RoadGeometry::Infinite => integrate_real_line(&phi, 0.0, shoulder, &seeds, quad)?,
        RoadGeometry::Finite { half_length } => {
            let t_lo = (-half_length - par) / w;
            let t_hi = (half_length - par) / w;
            integrate_segment(&phi, t_lo, t_hi, 0.0, shoulder, &seeds, quad)?
        }
    };
    Ok(p_lambda * w * integral.value / b)
}

// ---------------------------------------------------------------------------
// cross-terms and joint transforms
// ---------------------------------------------------------------------------

struct RhoGeometry {
    r_perp: f64,
    r_par: f64,
    d_perp: f64,
    d_par: f64,
    w_s: f64,
    w_b: f64,
    half_alpha: f64,
    center: f64,
    scale: f64,
    seeds: [f64; 6],
}

impl RhoGeometry {
    fn new(axis: RoadAxis, s: f64, b: f64, relay: &NodePose, dest: &NodePose, ch: &ChannelParams) -> Self {
        let (r_perp, r_par) = axis.receiver_coords(relay);
        let (d_perp, d_par) = axis.receiver_coords(dest);
        let alpha = ch.alpha();
        let w_s = libm::pow(s * ch.power(), 1.0 / alpha) / ch.antenna();
        let w_b = libm::pow(b * ch.power(), 1.0 / alpha) / ch.antenna();
        let center = 0.5 * (r_par + d_par);
        let scale = f64::max(w_s, w_b) + 0.5 * libm::fabs(r_par - d_par);
        let s_r = w_s + libm::fabs(r_perp);
        let s_d = w_b + libm::fabs(d_perp);
        let seeds = [
            r_par - s_r,
            r_par,
            r_par + s_r,
            d_par - s_d,
            d_par,
            d_par + s_d,
        ];
        Self {
            r_perp,
            r_par,
            d_perp,
            d_par,
            w_s,
            w_b,
            half_alpha: 0.5 * alpha,
            center,
            scale,
            seeds,
        }
    }

    // 1/(1 + (r_relay(x)/w_s)^alpha)
    fn g_relay(&self, x: f64) -> f64 {
        let dx = (x - self.r_par) / self.w_s;
        let dp = self.r_perp / self.w_s;
        1.0 / (1.0 + libm::pow(dp * dp + dx * dx, self.half_alpha))
    }

    fn g_dest(&self, x: f64) -> f64 {
        let dx = (x - self.d_par) / self.w_b;
        let dp = self.d_perp / self.w_b;
        1.0 / (1.0 + libm::pow(dp * dp + dx * dx, self.half_alpha))
    }
}

fn rho_integral<G: Fn(f64) -> f64>(
    geom: &RhoGeometry,
    g: &G,
    road: RoadGeometry,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let q = match road {
        RoadGeometry::Infinite => {
            integrate_real_line(g, geom.center, geom.scale, &geom.seeds, quad)?
        }
        RoadGeometry::Finite { half_length } => integrate_segment(
            g,
            -half_length,
            half_length,
            geom.center,
            geom.scale,
            &geom.seeds,
            quad,
        )?,
    };
    Ok(q.value)
}

/// Exponent of the cross-term: `ln rho(s, b) >= 0`.
///
/// The integrand is the product of the two receivers' interference dominance
/// profiles, so it is bounded by `min(1, s P l_relay) * min(1, b P l_dest)`
/// and concentrated around the two foot points, which seed the subdivision.
pub fn rho_exponent(
    axis: RoadAxis,
    s: f64,
    b: f64,
    relay: &NodePose,
    dest: &NodePose,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    check_laplace_arg(s)?;
    check_laplace_arg(b)?;
    let p_lambda = cfg.traffic.access_prob() * axis.intensity(&cfg.traffic);
    if s == 0.0 || b == 0.0 || p_lambda == 0.0 {
        return Ok(0.0);
    }
    let geom = RhoGeometry::new(axis, s, b, relay, dest, &cfg.channel);
    let g = |x: f64| geom.g_relay(x) * geom.g_dest(x);
    let integral = rho_integral(&geom, &g, cfg.road, quad)?;
    Ok(p_lambda * integral)
}

/// `d/db ln rho(s, b)` for the equal-gain MRC limit.
pub fn rho_exponent_derivative(
    axis: RoadAxis,
    s: f64,
    b: f64,
    relay: &NodePose,
    dest: &NodePose,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    check_laplace_arg(s)?;
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParameter("derivative requires a Laplace argument > 0"));
    }
    let p_lambda = cfg.traffic.access_prob() * axis.intensity(&cfg.traffic);
    if s == 0.0 || p_lambda == 0.0 {
        return Ok(0.0);
    }
    let geom = RhoGeometry::new(axis, s, b, relay, dest, &cfg.channel);
    let g = |x: f64| {
        let gd = geom.g_dest(x);
        geom.g_relay(x) * gd * (1.0 - gd)
    };
    let integral = rho_integral(&geom, &g, cfg.road, quad)?;
    Ok(p_lambda * integral / b)
}

/// Cross-term `rho_X(s, b) >= 1` coupling the X-road interference at the
/// relay (argument `s`) and at the destination (argument `b`).
pub fn rho_x(
    s: f64,
    b: f64,
    relay: &NodePose,
    dest: &NodePose,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    rho_exponent(RoadAxis::X, s, b, relay, dest, cfg, quad).map(libm::exp)
}

/// Cross-term `rho_Y(s, b) >= 1` for the Y road.
pub fn rho_y(
    s: f64,
    b: f64,
    relay: &NodePose,
    dest: &NodePose,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    rho_exponent(RoadAxis::Y, s, b, relay, dest, cfg, quad).map(libm::exp)
}

/// Joint transform of the X-road interference at the relay and at the
/// destination under a common transmitting set:
/// `L(s, b) = L_relay(s) L_dest(b) rho_X(s, b)`.
pub fn joint_laplace_x(
    s: f64,
    b: f64,
    relay: &NodePose,
    dest: &NodePose,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    joint_laplace(RoadAxis::X, s, b, relay, dest, cfg, quad)
}

/// Joint transform for the Y road.
pub fn joint_laplace_y(
    s: f64,
    b: f64,
    relay: &NodePose,
    dest: &NodePose,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    joint_laplace(RoadAxis::Y, s, b, relay, dest, cfg, quad)
}

fn joint_laplace(
    axis: RoadAxis,
    s: f64,
    b: f64,
    relay: &NodePose,
    dest: &NodePose,
    cfg: &NetworkConfig,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let e_relay = marginal_exponent(axis, relay, s, cfg, quad)?;
    let e_dest = marginal_exponent(axis, dest, b, cfg, quad)?;
    let e_rho = rho_exponent(axis, s, b, relay, dest, cfg, quad)?;
    Ok(libm::exp(-e_relay - e_dest + e_rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ChannelParams, NetworkConfig, NodePose, RoadGeometry, TrafficParams};
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn paper_channel() -> ChannelParams {
        ChannelParams::new(2.0, 650.0, 0.12, 0.0).unwrap()
    }

    fn cfg(lambda: f64, p: f64, road: RoadGeometry) -> NetworkConfig {
        NetworkConfig {
            channel: paper_channel(),
            traffic: TrafficParams::symmetric(lambda, p).unwrap(),
            road,
        }
    }

    #[test]
    fn trivial_arguments_give_unity() {
        let node = NodePose::new(20.0, FRAC_PI_3).unwrap();
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let q = QuadratureSettings::default();
        assert_eq!(laplace_x(&node, 0.0, &c, &q).unwrap().value(), 1.0);
        assert_eq!(laplace_y(&node, 0.0, &c, &q).unwrap().value(), 1.0);

        let no_access = cfg(0.05, 0.0, RoadGeometry::Infinite);
        assert_eq!(laplace_x(&node, 1e9, &no_access, &q).unwrap().value(), 1.0);

        let mut empty_y = cfg(0.05, 0.1, RoadGeometry::Infinite);
        empty_y.traffic = TrafficParams::new(0.05, 0.0, 0.1).unwrap();
        assert_eq!(laplace_y(&node, 1e9, &empty_y, &q).unwrap().value(), 1.0);
    }

    #[test]
    fn closed_infinite_matches_quadrature() {
        // derived oracle: adaptive quadrature of the defining integral
        let node = NodePose::new(20.0, FRAC_PI_3).unwrap();
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let q = QuadratureSettings::default();
        let s = 1e9;

        let closed = laplace_x_closed_infinite(&node, s, &c.traffic, &c.channel).unwrap();
        let numeric = marginal_exponent_numeric(RoadAxis::X, &node, s, &c, &q).unwrap();
        assert_relative_eq!(closed.exponent(), numeric, max_relative = 1e-9);

        let closed = laplace_y_closed_infinite(&node, s, &c.traffic, &c.channel).unwrap();
        let numeric = marginal_exponent_numeric(RoadAxis::Y, &node, s, &c, &q).unwrap();
        assert_relative_eq!(closed.exponent(), numeric, max_relative = 1e-9);
    }

    #[test]
    fn closed_finite_matches_quadrature() {
        let node = NodePose::from_xy(10.0, 10.0).unwrap();
        let road = RoadGeometry::finite(500.0).unwrap();
        let c = cfg(0.05, 0.1, road);
        let q = QuadratureSettings::default();
        let s = 1e9;

        let closed = laplace_x_closed_finite(&node, s, &c.traffic, &c.channel, 500.0).unwrap();
        let numeric = marginal_exponent_numeric(RoadAxis::X, &node, s, &c, &q).unwrap();
        assert_relative_eq!(closed.exponent(), numeric, max_relative = 1e-9);

        let closed = laplace_y_closed_finite(&node, s, &c.traffic, &c.channel, 500.0).unwrap();
        let numeric = marginal_exponent_numeric(RoadAxis::Y, &node, s, &c, &q).unwrap();
        assert_relative_eq!(closed.exponent(), numeric, max_relative = 1e-9);
    }

    #[test]
    fn on_road_receiver_collapses_the_radical() {
        // receiver on the X road: exponent = p lambda pi sqrt(s P / A^2)
        let node = NodePose::new(50.0, 0.0).unwrap();
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let s = 2.0e9;
        let k = s * 0.12 / (650.0 * 650.0);
        let expect = 0.005 * core::f64::consts::PI * libm::sqrt(k);
        let got = laplace_x_closed_infinite(&node, s, &c.traffic, &c.channel).unwrap();
        assert_relative_eq!(got.exponent(), expect, max_relative = 1e-12);

        // receiver on the Y road plays the same role for the Y transform
        let node = NodePose::new(50.0, FRAC_PI_2).unwrap();
        let got = laplace_y_closed_infinite(&node, s, &c.traffic, &c.channel).unwrap();
        assert_relative_eq!(got.exponent(), expect, max_relative = 1e-12);
    }

    #[test]
    fn infinite_form_ignores_parallel_coordinate() {
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let s = 1e9;
        let a = NodePose::from_xy(0.0, 35.0).unwrap();
        let b = NodePose::from_xy(240.0, 35.0).unwrap();
        let ea = laplace_x_closed_infinite(&a, s, &c.traffic, &c.channel).unwrap();
        let eb = laplace_x_closed_infinite(&b, s, &c.traffic, &c.channel).unwrap();
        assert_eq!(ea.exponent(), eb.exponent());

        // ... but the finite-road form does depend on it
        let ea = laplace_x_closed_finite(&a, s, &c.traffic, &c.channel, 500.0).unwrap();
        let eb = laplace_x_closed_finite(&b, s, &c.traffic, &c.channel, 500.0).unwrap();
        assert!((ea.exponent() - eb.exponent()).abs() > 1e-6 * ea.exponent());
    }

    #[test]
    fn symmetric_node_swaps_roads() {
        let node = NodePose::new(80.0, FRAC_PI_4).unwrap();
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let q = QuadratureSettings::default();
        let s = 5e9;
        let ex = laplace_x(&node, s, &c, &q).unwrap();
        let ey = laplace_y(&node, s, &c, &q).unwrap();
        assert_relative_eq!(ex.value(), ey.value(), max_relative = 1e-12);
    }

    #[test]
    fn closed_form_rejects_other_exponents() {
        let node = NodePose::new(20.0, 0.3).unwrap();
        let traffic = TrafficParams::symmetric(0.05, 0.1).unwrap();
        let ch = ChannelParams::new(3.0, 650.0, 0.12, 0.0).unwrap();
        assert!(matches!(
            laplace_x_closed_infinite(&node, 1e9, &traffic, &ch),
            Err(Error::ClosedFormRequiresAlphaTwo { .. })
        ));
    }

    #[test]
    fn finite_grows_to_infinite() {
        let node = NodePose::new(20.0, FRAC_PI_3).unwrap();
        let c = cfg(0.002, 0.05, RoadGeometry::Infinite);
        let s = 5e8;
        let inf = laplace_x_closed_infinite(&node, s, &c.traffic, &c.channel)
            .unwrap()
            .value();
        let mut last = f64::INFINITY;
        for z in [1e3, 1e4, 1e5, 1e6] {
            let v = laplace_x_closed_finite(&node, s, &c.traffic, &c.channel, z)
                .unwrap()
                .value();
            assert!(v >= inf);
            assert!(v <= last);
            last = v;
        }
        assert!((last - inf).abs() <= 1e-6);
    }

    #[test]
    fn rho_trivial_and_bounds() {
        let relay = NodePose::from_xy(50.0, 0.0).unwrap();
        let dest = NodePose::from_xy(200.0, 0.0).unwrap();
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let q = QuadratureSettings::default();
        assert_eq!(rho_x(0.0, 1e9, &relay, &dest, &c, &q).unwrap(), 1.0);
        assert_eq!(rho_x(1e9, 0.0, &relay, &dest, &c, &q).unwrap(), 1.0);
        let r = rho_x(1e9, 1e9, &relay, &dest, &c, &q).unwrap();
        assert!(r >= 1.0);
        // swapping the roles with swapped arguments leaves rho unchanged
        let swapped = rho_x(1e9, 1e9, &dest, &relay, &c, &q).unwrap();
        assert_relative_eq!(r, swapped, max_relative = 1e-9);
    }

    #[test]
    fn joint_marginalizes_at_zero() {
        let relay = NodePose::from_xy(50.0, 0.0).unwrap();
        let dest = NodePose::from_xy(200.0, 0.0).unwrap();
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let q = QuadratureSettings::default();
        let s = 3e9;
        assert_eq!(joint_laplace_x(0.0, 0.0, &relay, &dest, &c, &q).unwrap(), 1.0);
        let jm = joint_laplace_x(s, 0.0, &relay, &dest, &c, &q).unwrap();
        let m = laplace_x(&relay, s, &c, &q).unwrap().value();
        assert_relative_eq!(jm, m, max_relative = 1e-12);
        // positive correlation: joint >= product of marginals
        let j = joint_laplace_x(s, s, &relay, &dest, &c, &q).unwrap();
        let md = laplace_x(&dest, s, &c, &q).unwrap().value();
        assert!(j >= m * md);
    }

    #[test]
    fn marginal_derivative_matches_closed_form() {
        // d/db of p lambda pi k/sqrt(perp^2+k) = p lambda pi (perp^2 + k/2)
        //   / (perp^2+k)^(3/2) * P/A^2
        let node = NodePose::from_xy(120.0, 40.0).unwrap();
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let q = QuadratureSettings::default();
        let b = 2e9;
        let k = b * 0.12 / (650.0f64 * 650.0);
        let perp = 40.0f64;
        let q2 = perp * perp + k;
        let expect =
            0.005 * core::f64::consts::PI * (perp * perp + 0.5 * k) / (q2 * libm::sqrt(q2))
                * (0.12 / (650.0 * 650.0));
        let got = marginal_exponent_derivative(RoadAxis::X, &node, b, &c, &q).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-8);
    }

    #[test]
    fn rho_derivative_matches_finite_difference() {
        let relay = NodePose::from_xy(50.0, 20.0).unwrap();
        let dest = NodePose::from_xy(200.0, 0.0).unwrap();
        let c = cfg(0.05, 0.1, RoadGeometry::Infinite);
        let q = QuadratureSettings::default();
        let (s, b) = (2e9, 3e9);
        let h = b * 1e-6;
        let up = rho_exponent(RoadAxis::X, s, b + h, &relay, &dest, &c, &q).unwrap();
        let dn = rho_exponent(RoadAxis::X, s, b - h, &relay, &dest, &c, &q).unwrap();
        let fd = (up - dn) / (2.0 * h);
        let got = rho_exponent_derivative(RoadAxis::X, s, b, &relay, &dest, &c, &q).unwrap();
        assert_relative_eq!(got, fd, max_relative = 1e-5);
    }
}
