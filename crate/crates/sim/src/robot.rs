//! Unicycle kinematics with sub-stepped collision against world geometry.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::geometry::{wrap_angle, Point};
use crate::world::{Pose, World};

pub const ROBOT_RADIUS: f64 = 0.25;
/// Longest translation (m) integrated without a collision check.
pub const MAX_SUBSTEP: f64 = 0.02;
/// Control period (s).
pub const DT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotionNoise {
    /// Standard deviation of the executed speed, relative to the command.
    pub linear: f64,
    /// Standard deviation of the executed turn rate (rad/s).
    pub angular: f64,
    /// Half-width of the uniform start position jitter (m).
    pub start_position: f64,
    /// Half-width of the uniform start heading jitter (rad).
    pub start_heading: f64,
}

impl Default for MotionNoise {
    fn default() -> Self {
        Self {
            linear: 0.05,
            angular: 0.05,
            start_position: 0.1,
            start_heading: 5f64.to_radians(),
        }
    }
}

impl MotionNoise {
    pub fn none() -> Self {
        Self {
            linear: 0.0,
            angular: 0.0,
            start_position: 0.0,
            start_heading: 0.0,
        }
    }

    pub fn perturb<R: Rng + ?Sized>(&self, v: f64, w: f64, rng: &mut R) -> (f64, f64) {
        let mut v = v;
        let mut w = w;
        if self.linear > 0.0 && v != 0.0 {
            v *= 1.0 + Normal::new(0.0, self.linear).expect("finite sigma").sample(rng);
        }
        if self.angular > 0.0 {
            w += Normal::new(0.0, self.angular).expect("finite sigma").sample(rng);
        }
        (v, w)
    }

    pub fn jitter_start<R: Rng + ?Sized>(&self, pose: Pose, rng: &mut R) -> Pose {
        let mut u = |h: f64| if h > 0.0 { rng.random_range(-h..=h) } else { 0.0 };
        let dx = u(self.start_position);
        let dy = u(self.start_position);
        let dt = u(self.start_heading);
        Pose::new(pose.x + dx, pose.y + dy, wrap_angle(pose.theta + dt))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotState {
    pub pose: Pose,
    /// Last commanded (linear m/s, angular rad/s).
    pub commanded: (f64, f64),
    /// Distance actually travelled (m).
    pub odometer: f64,
    /// Set when the last tick had a translation blocked by geometry.
    pub stalled: bool,
}

impl RobotState {
    pub fn at(pose: Pose) -> Self {
        Self {
            pose,
            commanded: (0.0, 0.0),
            odometer: 0.0,
            stalled: false,
        }
    }
}

/// Clearance (m) between the robot body centred at `p` and the nearest solid
/// segment; negative when overlapping.
pub fn clearance(world: &World, p: Point) -> f64 {
    world
        .solid_segments()
        .map(|s| s.distance_to(p))
        .fold(f64::INFINITY, f64::min)
        - ROBOT_RADIUS
}

pub fn collides(world: &World, p: Point) -> bool {
    clearance(world, p) < 0.0
}

/// Advance `state` by `dt` seconds at velocity `(v, w)`. Returns the
/// distance travelled.
pub fn integrate(world: &World, state: &mut RobotState, v: f64, w: f64, dt: f64) -> f64 {
    let travel = v.abs() * dt;
    let n = ((travel / MAX_SUBSTEP).ceil() as usize).max(1);
    let h = dt / n as f64;
    let mut moved = 0.0;
    let mut blocked = false;
    for _ in 0..n {
        let pose = &mut state.pose;
        // Midpoint heading keeps arcs second-order accurate.
        let heading = pose.theta + 0.5 * w * h;
        let step = Point::from_polar(v * h, heading);
        let next = pose.position() + step;
        if v != 0.0 {
            if collides(world, next) {
                blocked = true;
            } else {
                pose.x = next.x;
                pose.y = next.y;
                moved += step.norm();
            }
        }
        pose.theta = wrap_angle(pose.theta + w * h);
    }
    state.commanded = (v, w);
    state.odometer += moved;
    state.stalled = blocked;
    moved
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::geometry::Segment;
    use crate::world::{Bounds, Marker};

    fn open_world() -> World {
        let mut w = World::new(
            "open",
            Bounds { width: 100.0, height: 100.0 },
            vec![],
            vec![],
            vec![Marker {
                id: 0,
                room: "A".into(),
                position: Point::new(99.0, 99.0),
                doorway: None,
                through: None,
                is_final: true,
                active: true,
            }],
            vec![],
            Pose::new(50.0, 50.0, 0.0),
        )
        .unwrap();
        w.reset();
        w
    }

    #[test]
    fn straight_line() {
        let w = open_world();
        let mut s = RobotState::at(Pose::new(50.0, 50.0, 0.0));
        for _ in 0..10 {
            integrate(&w, &mut s, 1.0, 0.0, DT);
        }
        assert_abs_diff_eq!(s.pose.x, 51.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.pose.y, 50.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.odometer, 1.0, epsilon = 1e-9);
        assert!(!s.stalled);
    }

    #[test]
    fn spin_in_place() {
        let w = open_world();
        let mut s = RobotState::at(Pose::new(50.0, 50.0, 0.0));
        integrate(&w, &mut s, 0.0, 1.0, 1.0);
        assert_eq!((s.pose.x, s.pose.y), (50.0, 50.0));
        assert_abs_diff_eq!(s.pose.theta, 1.0, epsilon = 1e-12);
        assert_eq!(s.odometer, 0.0);
    }

    #[test]
    fn wall_stops_translation() {
        let mut w = open_world();
        w.walls.push(Segment::xy(51.0, 40.0, 51.0, 60.0));
        let w = World::new("wall", w.bounds, w.walls, vec![], w.markers, vec![], w.start).unwrap();
        let mut s = RobotState::at(Pose::new(50.0, 50.0, 0.0));
        for _ in 0..20 {
            integrate(&w, &mut s, 1.0, 0.0, DT);
        }
        assert!(s.stalled);
        // Body stops within one sub-step of touching the wall.
        assert!(s.odometer <= 0.75 && s.odometer > 0.75 - MAX_SUBSTEP, "{}", s.odometer);
        assert!(clearance(&w, s.pose.position()) >= 0.0);
    }

    #[test]
    fn noise_free_perturb_is_identity() {
        let mut rng = rand::rng();
        assert_eq!(MotionNoise::none().perturb(1.0, 0.5, &mut rng), (1.0, 0.5));
        let p = Pose::new(1.0, 2.0, 0.3);
        assert_eq!(MotionNoise::none().jitter_start(p, &mut rng), p);
    }
}
