//! Laser range finder, rear sonar ring and marker camera models.

use std::f64::consts::FRAC_PI_2;

use idionet_core::{MarkerSighting, SensorSample};
use serde::{Deserialize, Serialize};

use crate::geometry::{wrap_angle, Point};
use crate::world::{Pose, World};

pub const LASER_RAYS: usize = 361;
pub const LASER_MAX_RANGE: f64 = 8.0;
pub const SECTORS: usize = 8;
pub const SECTOR_WIDTH: f64 = std::f64::consts::PI / SECTORS as f64;

pub const SONAR_COUNT: usize = 8;
pub const SONAR_MAX_RANGE: f64 = 5.0;

/// Half of the 60 degree camera field of view.
pub const CAMERA_HALF_FOV: f64 = std::f64::consts::PI / 6.0;
/// Pinhole constant: blob area in px of a marker 1 m away. Area falls off
/// as `BLOB_CONSTANT / d^2`.
pub const BLOB_CONSTANT: f64 = 1000.0;

/// Angle of laser ray `k` relative to the heading, +90 deg (left) down to
/// -90 deg (right).
pub fn laser_angle(k: usize) -> f64 {
    FRAC_PI_2 - k as f64 * std::f64::consts::PI / (LASER_RAYS - 1) as f64
}

/// Sector of a relative bearing in `[-pi/2, pi/2]`: 0-2 left, 3-4 front,
/// 5-7 right.
pub fn sector_of(angle: f64) -> usize {
    (((FRAC_PI_2 - angle) / SECTOR_WIDTH).floor().max(0.0) as usize).min(SECTORS - 1)
}

/// Rays per sector; rays on a boundary belong to both neighbours so the
/// left and right halves of a scan aggregate symmetrically.
const RAYS_PER_SECTOR: usize = (LASER_RAYS - 1) / SECTORS;

/// Sectors containing laser ray `k`.
pub fn ray_sectors(k: usize) -> std::ops::RangeInclusive<usize> {
    let s = k / RAYS_PER_SECTOR;
    let lo = if k % RAYS_PER_SECTOR == 0 && s > 0 { s - 1 } else { s };
    lo..=s.min(SECTORS - 1)
}

/// Bearing of a sector's centre line.
pub fn sector_center(sector: usize) -> f64 {
    FRAC_PI_2 - (sector as f64 + 0.5) * SECTOR_WIDTH
}

/// Distance from `origin` along `angle` to the nearest solid segment,
/// capped at `max_range`.
pub fn cast_ray(world: &World, origin: Point, angle: f64, max_range: f64) -> f64 {
    let dir = Point::from_polar(1.0, angle);
    world
        .solid_segments()
        .filter_map(|s| s.ray_hit(origin, dir))
        .fold(max_range, f64::min)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaserScan {
    pub ranges: Vec<f64>,
}

pub fn cast_laser(world: &World, pose: &Pose) -> LaserScan {
    let origin = pose.position();
    LaserScan {
        ranges: (0..LASER_RAYS)
            .map(|k| cast_ray(world, origin, pose.theta + laser_angle(k), LASER_MAX_RANGE))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSummary {
    pub min_reading: f64,
    pub min_sector: usize,
    /// Sector with the largest mean reading; ties go to the one nearest
    /// the heading.
    pub max_sector: usize,
    pub average: f64,
    pub sector_min: [f64; SECTORS],
    pub sector_mean: [f64; SECTORS],
}

impl LaserScan {
    pub fn summary(&self) -> SectorSummary {
        let mut sector_min = [f64::INFINITY; SECTORS];
        let mut sum = [0.0; SECTORS];
        let mut count = [0usize; SECTORS];
        let mut min_reading = f64::INFINITY;
        let mut min_sector = 0;
        for (k, &r) in self.ranges.iter().enumerate() {
            for s in ray_sectors(k) {
                sector_min[s] = sector_min[s].min(r);
                sum[s] += r;
                count[s] += 1;
                if r < min_reading {
                    min_reading = r;
                    min_sector = s;
                }
            }
        }
        let mut sector_mean = [0.0; SECTORS];
        for s in 0..SECTORS {
            sector_mean[s] = sum[s] / count[s].max(1) as f64;
        }
        // front sectors first, then outwards
        const SEARCH: [usize; SECTORS] = [3, 4, 2, 5, 1, 6, 0, 7];
        let mut max_sector = SEARCH[0];
        for &s in &SEARCH[1..] {
            if sector_mean[s] > sector_mean[max_sector] {
                max_sector = s;
            }
        }
        SectorSummary {
            min_reading,
            min_sector,
            max_sector,
            average: self.ranges.iter().sum::<f64>() / self.ranges.len() as f64,
            sector_min,
            sector_mean,
        }
    }
}

/// Mean of eight sonar readings fanned over the rear 180 degrees, measured
/// from the robot body (`radius` from the centre).
pub fn rear_sonar_average(world: &World, pose: &Pose, radius: f64) -> f64 {
    let origin = pose.position();
    let step = std::f64::consts::PI / SONAR_COUNT as f64;
    let total: f64 = (0..SONAR_COUNT)
        .map(|k| {
            let rel = FRAC_PI_2 + (k as f64 + 0.5) * step;
            let d = cast_ray(world, origin, pose.theta + rel, SONAR_MAX_RANGE + radius);
            (d - radius).clamp(0.0, SONAR_MAX_RANGE)
        })
        .sum();
    total / SONAR_COUNT as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct BlobReading {
    pub visible: bool,
    /// Radians relative to heading, positive to the left.
    pub bearing: f64,
    pub area: f64,
    pub marker: Option<usize>,
}

impl BlobReading {
    pub fn sighting(&self) -> Option<MarkerSighting> {
        self.visible.then_some(MarkerSighting {
            bearing: self.bearing,
            area: self.area,
        })
    }
}

/// Nearest active marker inside the field of view with a clear line of
/// sight.
pub fn detect_blob(world: &World, pose: &Pose) -> BlobReading {
    let origin = pose.position();
    let mut best: Option<(f64, BlobReading)> = None;
    for m in world.markers.iter().filter(|m| m.active) {
        let rel = m.position - origin;
        let dist = rel.norm();
        if dist < 1e-9 {
            continue;
        }
        let bearing = wrap_angle(rel.angle() - pose.theta);
        if bearing.abs() > CAMERA_HALF_FOV {
            continue;
        }
        if best.as_ref().is_some_and(|(d, _)| *d <= dist) {
            continue;
        }
        let dir = rel * (1.0 / dist);
        let occluded = world
            .solid_segments()
            .filter_map(|s| s.ray_hit(origin, dir))
            .any(|t| t < dist - 1e-6);
        if occluded {
            continue;
        }
        best = Some((
            dist,
            BlobReading {
                visible: true,
                bearing,
                area: BLOB_CONSTANT / (dist * dist),
                marker: Some(m.id),
            },
        ));
    }
    best.map(|(_, b)| b).unwrap_or_default()
}

/// All sensor values available at one control step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorBundle {
    pub laser: SectorSummary,
    pub rear_average: f64,
    pub blob: BlobReading,
    pub stalled: bool,
    pub odometer: f64,
}

impl SensorBundle {
    pub fn sample(&self) -> SensorSample {
        SensorSample {
            min_reading: self.laser.min_reading,
            min_sector: self.laser.min_sector,
            average: self.laser.average,
            odometer: self.odometer,
            marker: self.blob.sighting(),
            stalled: self.stalled,
        }
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::geometry::{Rect, Segment};
    use crate::world::{Bounds, Marker};

    fn open_world(walls: Vec<Segment>, obstacles: Vec<Rect>) -> World {
        World::new(
            "test",
            Bounds {
                width: 40.0,
                height: 40.0,
            },
            walls,
            obstacles,
            vec![Marker {
                id: 0,
                room: "X".into(),
                position: Point::new(30.0, 20.0),
                doorway: None,
                through: None,
                is_final: true,
                active: true,
            }],
            vec![],
            Pose::new(20.0, 20.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn sectors_partition_the_front() {
        assert_eq!(sector_of(laser_angle(0)), 0);
        assert_eq!(sector_of(laser_angle(180)), 4);
        assert_eq!(sector_of(laser_angle(179)), 3);
        assert_eq!(sector_of(laser_angle(360)), 7);
        assert_eq!(ray_sectors(0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(ray_sectors(45).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(ray_sectors(180).collect::<Vec<_>>(), vec![3, 4]);
        assert_eq!(ray_sectors(359).collect::<Vec<_>>(), vec![7]);
        assert_eq!(ray_sectors(360).collect::<Vec<_>>(), vec![7]);
        for k in 0..LASER_RAYS {
            let a: Vec<usize> = ray_sectors(k).collect();
            let b: Vec<usize> = ray_sectors(LASER_RAYS - 1 - k).map(|s| SECTORS - 1 - s).rev().collect();
            assert_eq!(a, b, "ray {k}");
        }
        for s in 0..SECTORS {
            assert_eq!(sector_of(sector_center(s)), s);
        }
    }

    #[test]
    fn empty_world_reads_max_range() {
        let w = open_world(vec![], vec![]);
        let scan = cast_laser(&w, &Pose::new(20.0, 20.0, 0.3));
        assert!(scan.ranges.iter().all(|&r| r == LASER_MAX_RANGE));
        let s = scan.summary();
        assert_eq!(s.average, LASER_MAX_RANGE);
        assert_eq!(s.max_sector, 3);
        assert_eq!(rear_sonar_average(&w, &Pose::new(20.0, 20.0, 0.0), 0.25), SONAR_MAX_RANGE);
    }

    #[test]
    fn wall_dead_ahead() {
        let w = open_world(vec![Segment::xy(21.0, 10.0, 21.0, 30.0)], vec![]);
        let s = cast_laser(&w, &Pose::new(20.0, 20.0, 0.0)).summary();
        assert!(s.min_sector == 3 || s.min_sector == 4);
        assert_abs_diff_eq!(s.min_reading, 1.0, epsilon = 1e-9);
        assert!(s.average < LASER_MAX_RANGE);
    }

    #[test]
    fn corridor_is_symmetric() {
        let w = open_world(
            vec![Segment::xy(0.0, 21.0, 40.0, 21.0), Segment::xy(0.0, 19.0, 40.0, 19.0)],
            vec![],
        );
        let s = cast_laser(&w, &Pose::new(20.0, 20.0, 0.0)).summary();
        for k in 0..SECTORS / 2 {
            assert_abs_diff_eq!(s.sector_min[k], s.sector_min[SECTORS - 1 - k], epsilon = 1e-6);
        }
    }

    #[test]
    fn rear_sonar_sees_wall_behind() {
        let open = open_world(vec![], vec![]);
        let walled = open_world(vec![Segment::xy(19.45, 10.0, 19.45, 30.0)], vec![]);
        let pose = Pose::new(20.0, 20.0, 0.0);
        assert!(rear_sonar_average(&walled, &pose, 0.25) < rear_sonar_average(&open, &pose, 0.25));
        // an alcove closing in on three sides
        let alcove = open_world(
            vec![],
            vec![
                Rect::new(19.3, 19.0, 19.7, 21.0),
                Rect::new(19.0, 20.3, 20.4, 20.6),
                Rect::new(19.0, 19.4, 20.4, 19.7),
            ],
        );
        assert!(rear_sonar_average(&alcove, &pose, 0.25) < 0.4);
    }

    #[test]
    fn blob_follows_pinhole_model() {
        let w = open_world(vec![], vec![]);
        let b = detect_blob(&w, &Pose::new(29.0, 20.0, 0.0));
        assert!(b.visible);
        assert_abs_diff_eq!(b.area, BLOB_CONSTANT, epsilon = 1e-9);
        assert_abs_diff_eq!(b.bearing, 0.0, epsilon = 1e-12);
        let far = detect_blob(&w, &Pose::new(20.0, 20.0, 0.0));
        assert_abs_diff_eq!(far.area, BLOB_CONSTANT / 100.0, epsilon = 1e-9);
        // outside the field of view
        assert!(!detect_blob(&w, &Pose::new(29.0, 20.0, 1.0)).visible);
        assert!(!detect_blob(&w, &Pose::new(29.0, 20.0, std::f64::consts::PI)).visible);
    }

    #[test]
    fn blob_occluded_by_wall() {
        let w = open_world(vec![Segment::xy(25.0, 15.0, 25.0, 25.0)], vec![]);
        assert!(!detect_blob(&w, &Pose::new(20.0, 20.0, 0.0)).visible);
    }
}
