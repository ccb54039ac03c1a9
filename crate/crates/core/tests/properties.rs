//! Property tests for the geometry and Laplace layers.

use crossway_core::geometry::{
    threshold_from_rate, ChannelParams, Mobility, NetworkConfig, NodePose, RoadGeometry, Scenario,
    Scheme, TrafficParams,
};
use crossway_core::laplace::{
    laplace_x_closed_finite, laplace_x_closed_infinite, laplace_y_closed_finite,
    laplace_y_closed_infinite, marginal, marginal_exponent_numeric, rho_x, RoadAxis,
};
use crossway_core::outage::{outage, outage_with_unit_cross_terms};
use crossway_core::quad::QuadratureSettings;
use proptest::prelude::*;

fn paper_channel() -> ChannelParams {
    ChannelParams::new(2.0, 650.0, 0.12, 0.0).unwrap()
}

fn net(lambda: f64, p: f64, road: RoadGeometry) -> NetworkConfig {
    NetworkConfig {
        channel: paper_channel(),
        traffic: TrafficParams::symmetric(lambda, p).unwrap(),
        road,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_symmetric_with_triangle_inequality(
        a in (0.0..300.0f64, 0.0..6.28f64),
        b in (0.0..300.0f64, 0.0..6.28f64),
        c in (0.0..300.0f64, 0.0..6.28f64),
    ) {
        let pa = NodePose::new(a.0, a.1).unwrap();
        let pb = NodePose::new(b.0, b.1).unwrap();
        let pc = NodePose::new(c.0, c.1).unwrap();
        let ab = pa.distance(&pb);
        prop_assert!((ab - pb.distance(&pa)).abs() <= 1e-12 * ab.max(1.0));
        prop_assert!(ab <= pa.distance(&pc) + pc.distance(&pb) + 1e-9);
        prop_assert!(ab >= 0.0);
    }

    #[test]
    fn path_loss_decreases_in_distance_and_exponent(
        r in 0.01..1000.0f64,
        dr in 0.01..100.0f64,
        alpha in 1.1..6.0f64,
    ) {
        let ch = ChannelParams::new(alpha, 650.0, 0.12, 0.0).unwrap();
        let near = ch.path_loss(r).unwrap();
        let far = ch.path_loss(r + dr).unwrap();
        prop_assert!(far < near);
        // increasing alpha attenuates more whenever A r > 1
        let steeper = ChannelParams::new(alpha + 0.5, 650.0, 0.12, 0.0).unwrap();
        if 650.0 * r > 1.0 {
            prop_assert!(steeper.path_loss(r).unwrap() < near);
        }
    }

    #[test]
    fn threshold_rate_round_trip(rate in 0.0..10.0f64) {
        let theta = threshold_from_rate(rate);
        prop_assert!(theta >= 0.0);
        let back = 0.5 * (1.0 + theta).log2();
        prop_assert!((back - rate).abs() <= 1e-12 * rate.max(1.0));
        // strictly increasing
        let theta2 = threshold_from_rate(rate + 1e-3);
        prop_assert!(theta2 > theta);
    }

    #[test]
    fn laplace_value_in_unit_interval_and_decreasing(
        n in 0.0..300.0f64,
        th in 0.0..6.28f64,
        s in 1e7..1e10f64,
        lambda in 0.001..0.2f64,
        p in 0.01..1.0f64,
    ) {
        let node = NodePose::new(n, th).unwrap();
        let quad = QuadratureSettings::default();
        let cfg = net(lambda, p, RoadGeometry::Infinite);
        for axis in [RoadAxis::X, RoadAxis::Y] {
            let v0 = marginal(axis, &node, 0.0, &cfg, &quad).unwrap().value();
            prop_assert_eq!(v0, 1.0);
            let v = marginal(axis, &node, s, &cfg, &quad).unwrap().value();
            prop_assert!(v > 0.0 && v <= 1.0);
            // strictly decreasing in s, p and lambda while interference is felt
            let v_s = marginal(axis, &node, 2.0 * s, &cfg, &quad).unwrap().value();
            prop_assert!(v_s < v);
            let denser = net(1.5 * lambda, p, RoadGeometry::Infinite);
            prop_assert!(marginal(axis, &node, s, &denser, &quad).unwrap().value() < v);
            let chattier = net(lambda, (1.5 * p).min(1.0), RoadGeometry::Infinite);
            if (1.5 * p).min(1.0) > p {
                prop_assert!(marginal(axis, &node, s, &chattier, &quad).unwrap().value() < v);
            }
        }
    }

    #[test]
    fn closed_forms_match_quadrature_for_alpha_two(
        n in 0.0..300.0f64,
        th in 0.0..6.28f64,
        s in 1e7..1e10f64,
        lambda in 0.005..0.1f64,
        p in 0.05..0.5f64,
        z in 200.0..5000.0f64,
    ) {
        let node = NodePose::new(n, th).unwrap();
        let quad = QuadratureSettings::default();
        let inf = net(lambda, p, RoadGeometry::Infinite);
        let fin = net(lambda, p, RoadGeometry::finite(z).unwrap());

        let pairs = [
            (laplace_x_closed_infinite(&node, s, &inf.traffic, &inf.channel).unwrap(),
             marginal_exponent_numeric(RoadAxis::X, &node, s, &inf, &quad).unwrap()),
            (laplace_y_closed_infinite(&node, s, &inf.traffic, &inf.channel).unwrap(),
             marginal_exponent_numeric(RoadAxis::Y, &node, s, &inf, &quad).unwrap()),
            (laplace_x_closed_finite(&node, s, &fin.traffic, &fin.channel, z).unwrap(),
             marginal_exponent_numeric(RoadAxis::X, &node, s, &fin, &quad).unwrap()),
            (laplace_y_closed_finite(&node, s, &fin.traffic, &fin.channel, z).unwrap(),
             marginal_exponent_numeric(RoadAxis::Y, &node, s, &fin, &quad).unwrap()),
        ];
        for (closed, numeric_exponent) in pairs {
            // relative error on the transform value itself
            let rel = (closed.exponent() - numeric_exponent).exp_m1().abs();
            prop_assert!(rel <= 1e-8, "rel {} closed {} numeric {}", rel, closed.exponent(), numeric_exponent);
        }
    }

    #[test]
    fn finite_monotone_in_z_toward_infinite(
        n in 0.0..200.0f64,
        th in 0.0..6.28f64,
        s in 1e7..1e10f64,
        lambda in 0.005..0.1f64,
        p in 0.05..0.5f64,
    ) {
        let node = NodePose::new(n, th).unwrap();
        let traffic = TrafficParams::symmetric(lambda, p).unwrap();
        let ch = paper_channel();
        let inf = laplace_x_closed_infinite(&node, s, &traffic, &ch).unwrap().value();
        let mut last = f64::INFINITY;
        for z in [1e3, 3e3, 1e4, 3e4, 1e5] {
            let v = laplace_x_closed_finite(&node, s, &traffic, &ch, z).unwrap().value();
            prop_assert!(v >= inf - 1e-15);
            prop_assert!(v <= last + 1e-15);
            last = v;
        }
    }

    #[test]
    fn rho_at_least_one_and_argument_symmetric(
        rx in -200.0..200.0f64,
        ry in -50.0..50.0f64,
        dx in -200.0..200.0f64,
        s in 1e8..1e10f64,
        b in 1e8..1e10f64,
        lambda in 0.005..0.1f64,
        p in 0.05..0.5f64,
    ) {
        let relay = NodePose::from_xy(rx, ry).unwrap();
        let dest = NodePose::from_xy(dx, 0.0).unwrap();
        let quad = QuadratureSettings::default();
        let cfg = net(lambda, p, RoadGeometry::Infinite);
        let r1 = rho_x(s, b, &relay, &dest, &cfg, &quad).unwrap();
        prop_assert!(r1 >= 1.0);
        let r2 = rho_x(b, s, &dest, &relay, &cfg, &quad).unwrap();
        prop_assert!((r1 - r2).abs() <= 1e-8 * r1);
    }

    #[test]
    fn outage_probabilities_lie_in_unit_interval(
        relay_x in 10.0..390.0f64,
        relay_y in -50.0..50.0f64,
        lambda in 0.001..0.2f64,
        p in 0.01..1.0f64,
        theta in 0.05..10.0f64,
    ) {
        let s = NodePose::from_xy(0.0, 0.0).unwrap();
        let d = NodePose::from_xy(200.0, 0.0).unwrap();
        let r = NodePose::from_xy(relay_x, relay_y).unwrap();
        let quad = QuadratureSettings::default();
        let cfg = net(lambda, p, RoadGeometry::Infinite);
        let mut totals = Vec::new();
        for scheme in [Scheme::Sc, Scheme::Mrc] {
            for mobility in [Mobility::Hsv, Mobility::Lsv] {
                let sc = Scenario::relayed(s, r, d, scheme, mobility, theta).unwrap();
                let breakdown = outage(&sc, &cfg, &quad).unwrap();
                for v in [breakdown.first_phase, breakdown.second_phase, breakdown.total] {
                    prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v), "out of range: {}", v);
                }
                prop_assert!((breakdown.first_phase + breakdown.second_phase - breakdown.total).abs() <= 1e-9);
                totals.push((scheme, mobility, breakdown.total));
            }
        }
        // MRC never does worse than SC under the same mobility model
        for mobility in [Mobility::Hsv, Mobility::Lsv] {
            let sc = totals.iter().find(|t| t.0 == Scheme::Sc && t.1 == mobility).unwrap().2;
            let mrc = totals.iter().find(|t| t.0 == Scheme::Mrc && t.1 == mobility).unwrap().2;
            prop_assert!(mrc <= sc + 1e-12);
        }
    }

    #[test]
    fn lsv_with_unit_cross_terms_equals_hsv(
        relay_x in 10.0..190.0f64,
        relay_y in -50.0..50.0f64,
        lambda in 0.001..0.2f64,
        p in 0.01..1.0f64,
        theta in 0.05..10.0f64,
    ) {
        let s = NodePose::from_xy(0.0, 0.0).unwrap();
        let d = NodePose::from_xy(200.0, 0.0).unwrap();
        let r = NodePose::from_xy(relay_x, relay_y).unwrap();
        let quad = QuadratureSettings::default();
        let cfg = net(lambda, p, RoadGeometry::Infinite);
        for scheme in [Scheme::Sc, Scheme::Mrc] {
            let hsv = Scenario::relayed(s, r, d, scheme, Mobility::Hsv, theta).unwrap();
            let lsv = Scenario::relayed(s, r, d, scheme, Mobility::Lsv, theta).unwrap();
            let a = outage(&hsv, &cfg, &quad).unwrap();
            let b = outage_with_unit_cross_terms(&lsv, &cfg, &quad).unwrap();
            prop_assert!((a.total - b.total).abs() <= 1e-12);
        }
    }
}

/// As the relay approaches the destination the extra combining power
/// vanishes and MRC degenerates into SC.
#[test]
fn relay_at_destination_closes_the_mrc_sc_gap() {
    let s = NodePose::from_xy(0.0, 0.0).unwrap();
    let d = NodePose::from_xy(200.0, 0.0).unwrap();
    let quad = QuadratureSettings::default();
    let cfg = net(0.05, 0.1, RoadGeometry::Infinite);
    let mut last_gap = f64::INFINITY;
    for relay_x in [100.0, 150.0, 180.0, 195.0, 199.0] {
        let r = NodePose::from_xy(relay_x, 0.0).unwrap();
        let sc = Scenario::relayed(s, r, d, Scheme::Sc, Mobility::Hsv, 1.0).unwrap();
        let mrc = Scenario::relayed(s, r, d, Scheme::Mrc, Mobility::Hsv, 1.0).unwrap();
        let gap = outage(&sc, &cfg, &quad).unwrap().total - outage(&mrc, &cfg, &quad).unwrap().total;
        assert!(gap >= -1e-12);
        assert!(gap <= last_gap + 1e-12);
        last_gap = gap;
    }
    assert!(last_gap < 1e-3);
}
