//! World geometry: walls, obstacles, door markers and the blocking lines
//! that close each door once the robot has gone through it.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{mirror_point, Point, Rect, Segment};
use crate::SimError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub width: f64,
    pub height: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub id: usize,
    /// Label of the room the marker leads out of.
    pub room: String,
    pub position: Point,
    /// Door opening the marker sits in. `None` for the goal marker.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doorway: Option<Segment>,
    /// Unit vector pointing through the doorway into the next room.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub through: Option<Point>,
    /// Reaching this marker ends the run.
    #[serde(default, rename = "final")]
    pub is_final: bool,
    #[serde(default = "default_true")]
    pub active: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockingLine {
    pub segment: Segment,
    /// Marker whose passage activates this line.
    pub trigger: usize,
    #[serde(default)]
    pub active: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub name: String,
    pub bounds: Bounds,
    pub walls: Vec<Segment>,
    #[serde(default)]
    pub obstacles: Vec<Rect>,
    pub markers: Vec<Marker>,
    #[serde(default)]
    pub blocking_lines: Vec<BlockingLine>,
    pub start: Pose,
    #[serde(skip)]
    solid: Vec<Segment>,
}

/// Distance past a doorway (m) at which the robot counts as through it.
pub const PASS_MARGIN: f64 = 0.4;

impl World {
    pub fn new(
        name: impl Into<String>,
        bounds: Bounds,
        walls: Vec<Segment>,
        obstacles: Vec<Rect>,
        markers: Vec<Marker>,
        blocking_lines: Vec<BlockingLine>,
        start: Pose,
    ) -> Result<Self, SimError> {
        let mut w = Self {
            name: name.into(),
            bounds,
            walls,
            obstacles,
            markers,
            blocking_lines,
            start,
            solid: Vec::new(),
        };
        w.finish()?;
        Ok(w)
    }

    fn finish(&mut self) -> Result<(), SimError> {
        self.solid = self.walls.clone();
        for r in &self.obstacles {
            self.solid.extend(r.edges());
        }
        for (i, m) in self.markers.iter().enumerate() {
            if m.id != i {
                return Err(SimError::InvalidWorld(format!(
                    "marker ids must be 0..n in order, found {} at {i}",
                    m.id
                )));
            }
            if !m.is_final && (m.doorway.is_none() || m.through.is_none()) {
                return Err(SimError::InvalidWorld(format!(
                    "door marker {} needs a doorway and a through direction",
                    m.id
                )));
            }
            if self.obstacles.iter().any(|r| r.contains(m.position)) {
                return Err(SimError::InvalidWorld(format!("marker {} inside an obstacle", m.id)));
            }
        }
        if !self.markers.iter().any(|m| m.is_final) {
            return Err(SimError::InvalidWorld("no final marker".into()));
        }
        for l in &self.blocking_lines {
            if l.trigger >= self.markers.len() {
                return Err(SimError::InvalidWorld(format!(
                    "blocking line triggered by unknown marker {}",
                    l.trigger
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let mut w: World = serde_json::from_str(text).map_err(|e| SimError::Parse(e.to_string()))?;
        w.finish()?;
        Ok(w)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("world serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| SimError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SimError> {
        std::fs::write(path.as_ref(), self.to_json())
            .map_err(|e| SimError::Io(format!("{}: {e}", path.as_ref().display())))
    }

    /// Every segment the robot and its sensors currently collide with.
    pub fn solid_segments(&self) -> impl Iterator<Item = &Segment> + '_ {
        self.solid.iter().chain(
            self.blocking_lines
                .iter()
                .filter(|l| l.active)
                .map(|l| &l.segment),
        )
    }

    /// Restores markers and blocking lines to their initial state.
    pub fn reset(&mut self) {
        for m in &mut self.markers {
            m.active = true;
        }
        for l in &mut self.blocking_lines {
            l.active = false;
        }
    }

    /// Closes the doors behind `marker`: its blocking lines become solid and
    /// the marker stops being a tracking target.
    pub fn on_marker_passed(&mut self, marker: usize) {
        if let Some(m) = self.markers.get_mut(marker) {
            m.active = false;
        }
        for l in &mut self.blocking_lines {
            if l.trigger == marker {
                l.active = true;
            }
        }
    }

    /// Active door markers the robot at `p` has gone through.
    pub fn passed_markers(&self, p: Point) -> Vec<usize> {
        self.markers
            .iter()
            .filter(|m| m.active && !m.is_final)
            .filter_map(|m| {
                let (door, through) = (m.doorway?, m.through?);
                let rel = p - door.midpoint();
                let depth = rel.dot(through);
                let lateral = rel.cross(through).abs();
                (depth >= PASS_MARGIN && depth < 2.0 && lateral <= door.length() / 2.0 + 1.0)
                    .then_some(m.id)
            })
            .collect()
    }

    pub fn final_marker(&self) -> &Marker {
        self.markers.iter().find(|m| m.is_final).expect("validated")
    }

    /// Reflection about the vertical mid-axis `x = width / 2`. Exactly
    /// involutive when coordinates are dyadic (as in [`World::maze`]).
    pub fn mirror(&self) -> World {
        let w = self.bounds.width;
        let name = match self.name.strip_prefix("mirror-") {
            Some(orig) => orig.to_string(),
            None => format!("mirror-{}", self.name),
        };
        let theta = std::f64::consts::PI - self.start.theta;
        let mut out = World {
            name,
            bounds: self.bounds,
            walls: self.walls.iter().map(|s| s.mirrored_x(w)).collect(),
            obstacles: self.obstacles.iter().map(|r| r.mirrored_x(w)).collect(),
            markers: self
                .markers
                .iter()
                .map(|m| Marker {
                    position: mirror_point(m.position, w),
                    doorway: m.doorway.map(|d| d.mirrored_x(w)),
                    through: m.through.map(|t| Point::new(-t.x, t.y)),
                    ..m.clone()
                })
                .collect(),
            blocking_lines: self
                .blocking_lines
                .iter()
                .map(|l| BlockingLine {
                    segment: l.segment.mirrored_x(w),
                    ..l.clone()
                })
                .collect(),
            start: Pose::new(w - self.start.x, self.start.y, crate::geometry::wrap_angle(theta)),
            solid: Vec::new(),
        };
        out.finish().expect("mirror of a valid world is valid");
        out
    }

    /// The six-room maze (22.5 m x 15 m): rooms A, B, C along the bottom
    /// row and D, E, F back along the top, each 7.5 m square and joined by
    /// one 1.5 m door. The goal marker sits on the far wall of room F.
    pub fn maze() -> World {
        const W: f64 = 22.5;
        const H: f64 = 15.0;
        const R: f64 = 7.5;
        const DOOR: f64 = 1.5;
        let seg = Segment::xy;
        let mut walls = vec![
            seg(0.0, 0.0, W, 0.0),
            seg(W, 0.0, W, H),
            seg(W, H, 0.0, H),
            seg(0.0, H, 0.0, 0.0),
        ];
        // Vertical wall at x with a door starting at y0.
        let vwall = |walls: &mut Vec<Segment>, x: f64, y_lo: f64, y_hi: f64, y0: f64| {
            walls.push(seg(x, y_lo, x, y0));
            walls.push(seg(x, y0 + DOOR, x, y_hi));
            seg(x, y0, x, y0 + DOOR)
        };
        let ab = vwall(&mut walls, R, 0.0, R, 5.0);
        let bc = vwall(&mut walls, 2.0 * R, 0.0, R, 1.0);
        // Horizontal wall between the rows, door C->D.
        let cd = seg(19.0, R, 19.0 + DOOR, R);
        walls.push(seg(0.0, R, 19.0, R));
        walls.push(seg(19.0 + DOOR, R, W, R));
        let de = vwall(&mut walls, 2.0 * R, R, H, 12.5);
        let ef = vwall(&mut walls, R, R, H, 9.0);
        // A short stub wall in room C that makes a corner trap.
        walls.push(seg(20.0, 2.75, W, 2.75));

        let obstacles = vec![
            // A
            Rect::new(3.0, 2.5, 4.5, 4.0),
            Rect::new(5.5, 0.75, 6.5, 1.75),
            Rect::new(1.25, 5.0, 2.25, 6.0),
            Rect::new(4.25, 6.25, 5.25, 7.5),
            // B
            Rect::new(9.0, 6.0, 10.0, 7.5),
            Rect::new(10.5, 2.5, 11.75, 4.0),
            Rect::new(12.75, 5.0, 13.75, 6.0),
            Rect::new(8.5, 0.75, 9.5, 1.75),
            // C
            Rect::new(16.5, 4.5, 17.75, 5.75),
            Rect::new(21.0, 5.5, 22.0, 6.5),
            Rect::new(18.0, 1.0, 19.0, 2.0),
            // D
            Rect::new(18.5, 10.25, 20.0, 11.5),
            Rect::new(16.0, 9.0, 17.0, 10.0),
            Rect::new(21.0, 12.5, 22.0, 13.5),
            // E
            Rect::new(10.5, 10.25, 12.0, 11.75),
            Rect::new(13.0, 8.5, 14.0, 9.5),
            Rect::new(8.5, 12.5, 9.5, 13.5),
            // F
            Rect::new(4.0, 13.0, 5.5, 14.5),
            Rect::new(2.5, 8.5, 3.5, 9.5),
            Rect::new(4.5, 11.0, 5.25, 11.75),
        ];

        let door = |id: usize, room: &str, d: Segment, through: Point| Marker {
            id,
            room: room.into(),
            position: d.midpoint(),
            doorway: Some(d),
            through: Some(through),
            is_final: false,
            active: true,
        };
        let east = Point::new(1.0, 0.0);
        let west = Point::new(-1.0, 0.0);
        let north = Point::new(0.0, 1.0);
        let markers = vec![
            door(0, "A", ab, east),
            door(1, "B", bc, east),
            door(2, "C", cd, north),
            door(3, "D", de, west),
            door(4, "E", ef, west),
            Marker {
                id: 5,
                room: "F".into(),
                position: Point::new(0.0, 11.25),
                doorway: None,
                through: None,
                is_final: true,
                active: true,
            },
        ];
        let blocking_lines = [ab, bc, cd, de, ef]
            .into_iter()
            .enumerate()
            .map(|(i, segment)| BlockingLine {
                segment,
                trigger: i,
                active: false,
            })
            .collect();

        World::new(
            "maze",
            Bounds { width: W, height: H },
            walls,
            obstacles,
            markers,
            blocking_lines,
            Pose::new(1.5, 1.5, 0.0),
        )
        .expect("built-in maze is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let w = World::maze();
        let back = World::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.solid_segments().count(), w.solid_segments().count());
    }

    #[test]
    fn mirror_twice_is_identity() {
        let w = World::maze();
        let m = w.mirror();
        assert_eq!(m.name, "mirror-maze");
        assert_ne!(m, w);
        assert_eq!(m.mirror(), w);
    }

    #[test]
    fn mirror_maps_x_to_width_minus_x() {
        let w = World::maze();
        let m = w.mirror();
        for (a, b) in w.obstacles.iter().zip(&m.obstacles) {
            assert_eq!(b.min.x, w.bounds.width - a.max.x);
            assert_eq!(b.max.x, w.bounds.width - a.min.x);
            assert_eq!(b.min.y, a.min.y);
        }
        assert_eq!(m.start.x, 21.0);
        assert_eq!(m.start.theta, std::f64::consts::PI);
    }

    #[test]
    fn passing_a_marker_closes_its_door() {
        let mut w = World::maze();
        let closed = w.solid_segments().count();
        assert!(w.passed_markers(Point::new(6.5, 5.75)).is_empty());
        assert_eq!(w.passed_markers(Point::new(8.1, 5.75)), vec![0]);
        w.on_marker_passed(0);
        assert_eq!(w.solid_segments().count(), closed + 1);
        assert!(!w.markers[0].active);
        assert!(w.passed_markers(Point::new(8.1, 5.75)).is_empty());
        w.reset();
        assert_eq!(w.solid_segments().count(), closed);
    }

    #[test]
    fn rejects_bad_worlds() {
        let mut w = World::maze();
        w.markers[5].is_final = false;
        assert!(World::from_json(&w.to_json()).is_err());
        let mut w = World::maze();
        w.blocking_lines[0].trigger = 42;
        assert!(World::from_json(&w.to_json()).is_err());
        assert!(World::from_json("{").is_err());
    }
}
