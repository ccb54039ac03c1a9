//! Node placement, distances, path loss and per-link budget constants.
//!
//! The intersection sits at the origin; the X road is the horizontal axis and
//! the Y road the vertical one. A node is located by its distance from the
//! intersection and its angle from the X road, so any node of the
//! source/relay/destination triplet may be on a road (a vehicle) or anywhere
//! on the plane (roadside infrastructure).

use crate::{Error, Result};

const TAU: f64 = core::f64::consts::TAU;

/// Position of a node relative to the intersection: distance `n >= 0` and
/// angle `theta` from the X road, normalized to `[0, 2*pi)`.
///
/// The pose is stored in polar form; the cartesian projections
/// `(n cos theta, n sin theta)` are derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePose {
    n: f64,
    theta: f64,
}

impl NodePose {
    /// Pose from distance to the intersection and angle from the X road.
    pub fn new(n: f64, theta: f64) -> Result<Self> {
        if !n.is_finite() || n < 0.0 {
            return Err(Error::InvalidParameter("node distance must be finite and >= 0"));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter("node angle must be finite"));
        }
        let mut t = theta % TAU;
        if t < 0.0 {
            t += TAU;
        }
        Ok(Self { n, theta: t })
    }

    /// Pose from cartesian coordinates.
    pub fn from_xy(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter("cartesian coordinates must be finite"));
        }
        let n = libm::hypot(x, y);
        let theta = if n == 0.0 { 0.0 } else { libm::atan2(y, x) };
        Self::new(n, theta)
    }

    /// Distance from the intersection.
    pub fn n(&self) -> f64 {
        self.n
    }

    /// Angle from the X road, in `[0, 2*pi)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Cartesian projections `(n cos theta, n sin theta)`.
    pub fn cartesian(&self) -> (f64, f64) {
        (self.x(), self.y())
    }

    /// Abscissa `n cos theta`.
    pub fn x(&self) -> f64 {
        self.n * libm::cos(self.theta)
    }

    /// Ordinate `n sin theta`.
    pub fn y(&self) -> f64 {
        self.n * libm::sin(self.theta)
    }

    /// Euclidean distance to another pose.
    pub fn distance(&self, other: &NodePose) -> f64 {
        self.distance_to_xy(other.x(), other.y())
    }

    /// Euclidean distance to the point `(x, 0)` on the X road.
    pub fn distance_to_x_road_point(&self, x: f64) -> f64 {
        libm::hypot(self.y(), x - self.x())
    }

    /// Euclidean distance to the point `(0, y)` on the Y road.
    pub fn distance_to_y_road_point(&self, y: f64) -> f64 {
        libm::hypot(self.x(), y - self.y())
    }

    fn distance_to_xy(&self, x: f64, y: f64) -> f64 {
        libm::hypot(self.x() - x, self.y() - y)
    }
}

/// Interferer support: both roads extend to infinity, or are clipped to the
/// segment `[-half_length, half_length]` around the intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RoadGeometry {
    Infinite,
    Finite { half_length: f64 },
}

impl RoadGeometry {
    pub fn finite(half_length: f64) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::InvalidParameter("road half length must be finite and > 0"));
        }
        Ok(RoadGeometry::Finite { half_length })
    }
}

/// Channel constants: path-loss exponent `alpha`, antenna constant `A`,
/// transmit power `P` (watts) and noise power `sigma^2` (watts).
///
/// `alpha > 1` is required: on an infinite road the aggregate interference
/// integral diverges for `alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    alpha: f64,
    antenna: f64,
    power: f64,
    noise: f64,
}

impl ChannelParams {
    pub fn new(alpha: f64, antenna: f64, power: f64, noise: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::InvalidParameter("path-loss exponent must be > 1"));
        }
        if !(antenna.is_finite() && antenna > 0.0) {
            return Err(Error::InvalidParameter("antenna constant must be > 0"));
        }
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::InvalidParameter("transmit power must be > 0"));
        }
        if !(noise.is_finite() && noise >= 0.0) {
            return Err(Error::InvalidParameter("noise power must be >= 0"));
        }
        Ok(Self {
            alpha,
            antenna,
            power,
            noise,
        })
    }

    /// Same channel with the noise power given in dBm.
    pub fn with_noise_dbm(self, dbm: f64) -> Result<Self> {
        Self::new(self.alpha, self.antenna, self.power, noise_watts_from_dbm(dbm))
    }

    /// Interference-limited variant (`sigma^2 = 0`).
    pub fn interference_limited(self) -> Self {
        Self { noise: 0.0, ..self }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn antenna(&self) -> f64 {
        self.antenna
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    /// Path loss gain `(A r)^-alpha` at distance `r > 0`.
    pub fn path_loss(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Err(Error::SingularDistance);
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter("distance must be finite and > 0"));
        }
        Ok(libm::pow(self.antenna * r, -self.alpha))
    }
}

/// Noise power in watts from a dBm level.
pub fn noise_watts_from_dbm(dbm: f64) -> f64 {
    libm::exp10((dbm - 30.0) / 10.0)
}

/// Road traffic: interferer intensities (vehicles per meter) on each road and
/// the slotted-ALOHA access probability `p`. A transmitting slot keeps each
/// interferer independently with probability `p`, thinning the process to
/// intensity `p * lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficParams {
    lambda_x: f64,
    lambda_y: f64,
    access_prob: f64,
}

impl TrafficParams {
    pub fn new(lambda_x: f64, lambda_y: f64, access_prob: f64) -> Result<Self> {
        if !(lambda_x.is_finite() && lambda_x >= 0.0) || !(lambda_y.is_finite() && lambda_y >= 0.0)
        {
            return Err(Error::InvalidParameter("intensity must be finite and >= 0"));
        }
        if !(access_prob.is_finite() && (0.0..=1.0).contains(&access_prob)) {
            return Err(Error::InvalidParameter("access probability must lie in [0, 1]"));
        }
        Ok(Self {
            lambda_x,
            lambda_y,
            access_prob,
        })
    }

    /// Equal intensity on both roads.
    pub fn symmetric(lambda: f64, access_prob: f64) -> Result<Self> {
        Self::new(lambda, lambda, access_prob)
    }

    pub fn lambda_x(&self) -> f64 {
        self.lambda_x
    }

    pub fn lambda_y(&self) -> f64 {
        self.lambda_y
    }

    pub fn access_prob(&self) -> f64 {
        self.access_prob
    }

    /// Copy with the Y road emptied; turns an intersection configuration
    /// into a single-road (highway) one.
    pub fn without_y_road(self) -> Self {
        Self {
            lambda_y: 0.0,
            ..self
        }
    }
}

/// Channel, traffic and road-extent configuration shared by every evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    pub channel: ChannelParams,
    pub traffic: TrafficParams,
    pub road: RoadGeometry,
}

/// Per-link derived constants for a transmitter/receiver pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    path_gain: f64,
    laplace_arg: f64,
    noise_factor: f64,
    threshold: f64,
}

impl LinkBudget {
    /// Budget for the link `a -> b` at SINR threshold `theta`.
    pub fn between(a: &NodePose, b: &NodePose, theta: f64, ch: &ChannelParams) -> Result<Self> {
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::InvalidParameter("SINR threshold must be finite and >= 0"));
        }
        let gain = ch.path_loss(a.distance(b))?;
        let k = theta / (ch.power() * gain);
        Ok(Self {
            path_gain: gain,
            laplace_arg: k,
            noise_factor: libm::exp(-k * ch.noise()),
            threshold: theta,
        })
    }

    /// Path loss gain `l_ab = (A r_ab)^-alpha`.
    pub fn path_gain(&self) -> f64 {
        self.path_gain
    }

    /// `K_ab = theta / (P l_ab)`: the argument at which the interference
    /// Laplace transforms are evaluated for this link.
    pub fn laplace_arg(&self) -> f64 {
        self.laplace_arg
    }

    /// `N_ab = exp(-K_ab sigma^2)`, the noise contribution to the link
    /// success probability. Exactly 1 in interference-limited mode.
    pub fn noise_factor(&self) -> f64 {
        self.noise_factor
    }

    /// SINR threshold the budget was built for.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

/// SINR decoding threshold `theta = 2^(2 R) - 1` for a half-duplex target
/// rate `R` in bits per channel use.
pub fn threshold_from_rate(rate: f64) -> f64 {
    libm::exp2(2.0 * rate) - 1.0
}

/// Destination decoding strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Single-slot source-to-destination transmission, no relay.
    Direct,
    /// Selection combining: slot two is decoded from the relay alone.
    Sc,
    /// Maximum ratio combining: slot two adds the relay and source powers.
    Mrc,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Direct => "direct",
            Scheme::Sc => "sc",
            Scheme::Mrc => "mrc",
        }
    }
}

/// Interferer mobility across the two transmission slots.
///
/// High-speed vehicles decorrelate so fast that every interference
/// observation sees an independent point process realization; low-speed or
/// static vehicles keep the same transmitting set for both slots, which
/// correlates the interference at the relay and at the destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mobility {
    Hsv,
    Lsv,
}

impl Mobility {
    pub fn label(&self) -> &'static str {
        match self {
            Mobility::Hsv => "hsv",
            Mobility::Lsv => "lsv",
        }
    }
}

/// One transmission to evaluate: node poses, decoding scheme, mobility model
/// and the SINR threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub source: NodePose,
    pub relay: Option<NodePose>,
    pub destination: NodePose,
    pub scheme: Scheme,
    pub mobility: Mobility,
    pub threshold: f64,
}

impl Scenario {
    /// Direct transmission. The mobility model is irrelevant for a single
    /// slot and is fixed to `Hsv`.
    pub fn direct(source: NodePose, destination: NodePose, threshold: f64) -> Result<Self> {
        check_threshold(threshold)?;
        Ok(Self {
            source,
            relay: None,
            destination,
            scheme: Scheme::Direct,
            mobility: Mobility::Hsv,
            threshold,
        })
    }

    /// Two-slot decode-and-forward transmission through `relay`.
    pub fn relayed(
        source: NodePose,
        relay: NodePose,
        destination: NodePose,
        scheme: Scheme,
        mobility: Mobility,
        threshold: f64,
    ) -> Result<Self> {
        if scheme == Scheme::Direct {
            return Err(Error::InvalidParameter("relayed scenario cannot use the direct scheme"));
        }
        check_threshold(threshold)?;
        Ok(Self {
            source,
            relay: Some(relay),
            destination,
            scheme,
            mobility,
            threshold,
        })
    }

    /// Same scenario with a different relay pose.
    pub fn with_relay(mut self, relay: NodePose) -> Result<Self> {
        if self.scheme == Scheme::Direct {
            return Err(Error::InvalidParameter("direct scenario carries no relay"));
        }
        self.relay = Some(relay);
        Ok(self)
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(Error::InvalidParameter("SINR threshold must be finite and >= 0"));
    }
    Ok(())
}
