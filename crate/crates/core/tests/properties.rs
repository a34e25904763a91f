use std::f64::consts::{FRAC_PI_2, PI};

use morphogait::gait::{generate, lift_angle, GaitConfig};
use morphogait::kinematics::{
    default_quad_geometry, forward_kinematics, inverse_kinematics, LimbGeometry, SagittalPoint,
};
use morphogait::metrics::{crosstrack_errors_xy, ReferencePath};
use morphogait::sim::{simulate_walk, solve_base_pose, Contact, PerturbationModel};
use morphogait::stream::{
    decode_frame, encode_frame, CommandFrame, FeedbackFrame, Frame, ServoState,
};
use proptest::prelude::*;

fn reachable() -> impl Strategy<Value = (LimbGeometry, SagittalPoint)> {
    (0.05f64..0.5, 0.05f64..0.5, 1e-6f64..1.0 - 1e-6, -PI..PI).prop_map(|(lf, lt, u, a)| {
        let g = LimbGeometry::new(lf, lt);
        let inner = (lf - lt).abs();
        let r = inner + (lf + lt - inner) * u;
        (g, SagittalPoint::new(r * a.cos(), r * a.sin()))
    })
}

fn joint_targets() -> impl Strategy<Value = [f64; 12]> {
    prop::array::uniform12(prop_oneof![
        -FRAC_PI_2..=FRAC_PI_2,
        Just(0.0),
        Just(-0.0),
        Just(FRAC_PI_2)
    ])
    .prop_map(|mut t| {
        for k in 0..4 {
            t[3 * k + 2] = -t[3 * k + 2].abs() * 2.0;
        }
        t
    })
}

fn servo() -> impl Strategy<Value = ServoState> {
    (any::<f64>(), -1e3f64..1e3, -1e3f64..1e3)
        .prop_filter("finite angle", |(a, ..)| a.is_finite())
        .prop_map(|(angle, volt, temp)| ServoState { angle, volt, temp })
}

fn frame() -> impl Strategy<Value = Frame> {
    prop_oneof![
        (any::<u64>(), 0.0f64..1e9, joint_targets())
            .prop_map(|(seq, t, targets)| Frame::Command(CommandFrame { seq, t, targets })),
        (any::<u64>(), prop::array::uniform12(servo()))
            .prop_map(|(seq, servos)| Frame::Feedback(FeedbackFrame { seq, servos })),
    ]
}

fn rigid(p: [f64; 2], angle: f64, shift: [f64; 2]) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [
        c * p[0] - s * p[1] + shift[0],
        s * p[0] + c * p[1] + shift[1],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn ik_fk_round_trip((g, p) in reachable()) {
        let (pitch, knee) = inverse_kinematics(&g, p).unwrap();
        prop_assert!(knee <= 0.0);
        prop_assert!(forward_kinematics(&g, pitch, knee).distance(&p) < 1e-9);
    }

    #[test]
    fn frames_round_trip(f in frame()) {
        let bytes = encode_frame(&f).unwrap();
        prop_assert_eq!(bytes.iter().filter(|&&b| b == b'\n').count(), 1);
        prop_assert_eq!(decode_frame(&bytes).unwrap(), f);
    }

    #[test]
    fn lift_balances_shift(theta0 in 0.0f64..1.0, theta1 in 0.05f64..1.5) {
        if let Ok(xi) = lift_angle(theta0, theta1) {
            let l = 0.3 * theta1.cos();
            let lhs = 2.0 * (1.0 - theta0.cos()) * l;
            let rhs = (theta1.cos() - (theta1 + xi).cos()) * 0.3;
            prop_assert!((lhs - rhs).abs() < 1e-12);
            prop_assert!(xi >= 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn crosstrack_is_rigid_invariant(
        pts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..40),
        angle in -PI..PI,
        dx in -5.0f64..5.0,
        dy in -5.0f64..5.0,
    ) {
        let reference = ReferencePath::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, -1.0], [2.5, -0.5]]).unwrap();
        let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
        let moved_ref = ReferencePath::new(
            reference.waypoints().iter().map(|&w| rigid(w, angle, [dx, dy])).collect(),
        ).unwrap();
        let moved: Vec<[f64; 2]> = pts.iter().map(|&p| rigid(p, angle, [dx, dy])).collect();
        let a = crosstrack_errors_xy(&pts, &reference);
        let b = crosstrack_errors_xy(&moved, &moved_ref);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn crosstrack_scales(
        pts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..40),
        scale in 0.01f64..100.0,
    ) {
        let waypoints = vec![[0.0, 0.0], [1.0, 0.5], [1.5, -1.0]];
        let reference = ReferencePath::new(waypoints.clone()).unwrap();
        let scaled_ref = ReferencePath::new(waypoints.iter().map(|w| [w[0] * scale, w[1] * scale]).collect()).unwrap();
        let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
        let scaled: Vec<[f64; 2]> = pts.iter().map(|p| [p[0] * scale, p[1] * scale]).collect();
        let a = crosstrack_errors_xy(&pts, &reference);
        let b = crosstrack_errors_xy(&scaled, &scaled_ref);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x * scale - y).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn pose_recovers_rigid_motion(
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..6),
        angle in -3.0f64..3.0,
        dx in -5.0f64..5.0,
        dy in -5.0f64..5.0,
    ) {
        let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
        let spread: f64 = pts.iter().map(|p| (p[0] - pts[0][0]).hypot(p[1] - pts[0][1])).sum();
        prop_assume!(spread > 1e-3);
        let contacts: Vec<Contact> = pts
            .iter()
            .map(|&p| Contact { base: p, world: rigid(p, angle, [dx, dy]) })
            .collect();
        let pose = solve_base_pose(&contacts).unwrap();
        prop_assert!((pose.heading - angle).abs() < 1e-9);
        prop_assert!((pose.x - dx).abs() < 1e-9 && (pose.y - dy).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn walks_are_deterministic_and_mirror(
        seed in any::<u64>(),
        offset in -0.03f64..0.03,
        limb in 0usize..4,
        sigma in 0.0f64..0.01,
        sway in 0.0f64..0.01,
        gait in 0usize..3,
    ) {
        let config = [GaitConfig::trot(), GaitConfig::gallop(), GaitConfig::canter()][gait];
        let canter = gait == 2;
        let geometry = default_quad_geometry();
        let plan = generate(&config, &geometry).unwrap();
        let mut perturb = PerturbationModel::ideal().with_seed(seed);
        perturb.yaw_offsets[limb] = offset;
        perturb.placement_sigma = sigma;
        perturb.initial_sigma = 0.004;
        perturb.sway = sway;
        let a = simulate_walk(&plan, 3, &perturb).unwrap();
        let b = simulate_walk(&plan, 3, &perturb).unwrap();
        prop_assert_eq!(&a, &b);
        // The canter's limb sequence is chiral, so only the trot mirrors.
        if canter {
            return Ok(());
        }
        let mirror = perturb.mirrored(&geometry, config.travel_direction()).unwrap();
        let m = simulate_walk(&plan, 3, &mirror).unwrap();
        for (p, q) in a.samples.iter().zip(&m.samples) {
            prop_assert!((p.pose.x - q.pose.x).abs() < 1e-9);
            prop_assert!((p.pose.y + q.pose.y).abs() < 1e-9);
        }
    }
}
