use idionet_core::antigen::STALLED;
use idionet_core::Priority;
use idionet_sim::robot::{clearance, MotionNoise};
use idionet_sim::sensors::{
    cast_laser, detect_blob, rear_sonar_average, CAMERA_HALF_FOV, LASER_MAX_RANGE, SONAR_MAX_RANGE,
};
use idionet_sim::{Point, Pose, Repertoire, Segment, SimConfig, Simulator, World, ROBOT_RADIUS};
use proptest::prelude::*;

fn free_pose() -> impl Strategy<Value = Pose> {
    let w = World::maze();
    (0.3..22.2f64, 0.3..14.7f64, -3.14..3.14f64)
        .prop_filter("pose overlaps geometry", move |&(x, y, _)| {
            clearance(&w, Point::new(x, y)) > 0.0
        })
        .prop_map(|(x, y, t)| Pose::new(x, y, t))
}

fn noisy() -> SimConfig {
    SimConfig {
        noise: MotionNoise::default(),
        ..SimConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sensor_readings_in_range(pose in free_pose()) {
        let w = World::maze();
        let scan = cast_laser(&w, &pose);
        prop_assert!(scan.ranges.iter().all(|&r| (0.0..=LASER_MAX_RANGE).contains(&r)));
        let s = scan.summary();
        prop_assert!(s.min_sector < 8 && s.max_sector < 8);
        prop_assert!(s.min_reading <= s.average && s.average <= LASER_MAX_RANGE);
        prop_assert!(scan.ranges.contains(&s.min_reading));
        let rear = rear_sonar_average(&w, &pose, ROBOT_RADIUS);
        prop_assert!((0.0..=SONAR_MAX_RANGE).contains(&rear));
        let blob = detect_blob(&w, &pose);
        if blob.visible {
            prop_assert!(blob.area > 0.0);
            prop_assert!(blob.bearing.abs() <= CAMERA_HALF_FOV + 1e-12);
        } else {
            prop_assert_eq!(blob.area, 0.0);
        }
    }

    /// Readings at a mirrored pose in the mirrored world are the mirror
    /// image of the originals.
    #[test]
    fn mirrored_scan_is_reversed(pose in free_pose()) {
        let w = World::maze();
        let m = w.mirror();
        let mp = Pose::new(w.bounds.width - pose.x, pose.y, std::f64::consts::PI - pose.theta);
        let a = cast_laser(&w, &pose).ranges;
        let mut b = cast_laser(&m, &mp).ranges;
        b.reverse();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    /// Random behaviour sequences never leave the robot overlapping a wall
    /// or step it through one, and a blocked tick always presents "stalled"
    /// as the dominant antigen.
    #[test]
    fn no_tunnelling(seed in any::<u64>(), plan in prop::collection::vec(0usize..16, 20..60)) {
        let mut sim = Simulator::new(World::maze(), Repertoire::standard(), noisy(), seed);
        let priority = Priority::standard();
        for &ab in &plan {
            sim.set_antibody(ab).unwrap();
            for _ in 0..10 {
                let before = sim.robot().pose.position();
                let solid: Vec<Segment> = sim.world().solid_segments().copied().collect();
                sim.step();
                let after = sim.robot().pose.position();
                let path = Segment::new(before, after);
                prop_assert!(solid.iter().all(|s| !s.intersects(&path) || before == after));
                prop_assert!(clearance(sim.world(), after) >= -1e-9);
                if sim.robot().stalled {
                    let sensors = sim.sense();
                    let st = sim.detect(&sensors, &priority).unwrap();
                    prop_assert_eq!(st.dominant(), STALLED);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_trajectory(seed in any::<u64>(), plan in prop::collection::vec(0usize..16, 10)) {
        let run = || {
            let mut sim = Simulator::new(World::maze(), Repertoire::standard(), noisy(), seed);
            let mut poses = Vec::new();
            for &ab in &plan {
                sim.set_antibody(ab).unwrap();
                for _ in 0..10 {
                    sim.step();
                    let p = sim.robot().pose;
                    poses.push((p.x.to_bits(), p.y.to_bits(), p.theta.to_bits()));
                }
            }
            poses
        };
        prop_assert_eq!(run(), run());
    }

    /// Mirroring is exact for worlds on a dyadic grid.
    #[test]
    fn mirror_involution(
        walls in prop::collection::vec((0u32..160, 0u32..120, 0u32..160, 0u32..120), 1..20),
        start in (8u32..150, 8u32..110, 0u32..8),
    ) {
        let q = |v: u32| v as f64 / 8.0;
        let mut base = World::maze();
        base.walls = walls
            .iter()
            .map(|&(a, b, c, d)| Segment::xy(q(a), q(b), q(c), q(d)))
            .collect();
        base.start = Pose::new(q(start.0), q(start.1), start.2 as f64 * std::f64::consts::FRAC_PI_4 - std::f64::consts::PI + std::f64::consts::FRAC_PI_4);
        let base = World::from_json(&base.to_json()).unwrap();
        let twice = base.mirror().mirror();
        prop_assert_eq!(&twice, &base);
    }
}

#[test]
fn stall_only_from_blocked_motion() {
    // Driving at the outer wall from close range stalls within a second;
    // spinning in place never does.
    let mut w = World::maze();
    w.start = Pose::new(0.5, 7.0, std::f64::consts::PI);
    let cfg = SimConfig {
        noise: MotionNoise::none(),
        ..SimConfig::default()
    };
    let mut sim = Simulator::new(w.clone(), Repertoire::standard(), cfg.clone(), 1);
    sim.set_antibody(0).unwrap();
    let mut stalled = false;
    for _ in 0..10 {
        sim.step();
        stalled |= sim.robot().stalled;
    }
    assert!(stalled);

    let mut sim = Simulator::new(w, Repertoire::standard(), cfg, 1);
    sim.set_antibody(8).unwrap();
    for _ in 0..50 {
        sim.step();
        assert!(!sim.robot().stalled);
    }
}
