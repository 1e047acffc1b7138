//! One robot in one world, advanced one control tick at a time.

use idionet_core::{CoreError, Priority, Stimulus};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::antigens::{detect_antigens, AntigenThresholds};
use crate::repertoire::{Antibody, AntibodyKind, Repertoire};
use crate::robot::{integrate, MotionNoise, RobotState, DT, ROBOT_RADIUS};
use crate::sensors::{cast_laser, detect_blob, rear_sonar_average, BlobReading, SensorBundle};
use crate::world::World;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub thresholds: AntigenThresholds,
    pub noise: MotionNoise,
    /// Blob area (px) of the final marker that ends a run.
    pub goal_area: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            thresholds: AntigenThresholds::default(),
            noise: MotionNoise::default(),
            goal_area: 1000.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepOutcome {
    pub moved: f64,
    /// Doors passed during this tick.
    pub passed: Vec<usize>,
    pub goal: bool,
}

#[derive(Clone, Debug)]
pub struct Simulator {
    world: World,
    repertoire: Repertoire,
    robot: RobotState,
    config: SimConfig,
    rng: ChaCha8Rng,
    tick: u64,
    antibody: usize,
}

impl Simulator {
    pub fn new(mut world: World, repertoire: Repertoire, config: SimConfig, seed: u64) -> Self {
        world.reset();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = config.noise.jitter_start(world.start, &mut rng);
        Self {
            world,
            repertoire,
            robot: RobotState::at(start),
            config,
            rng,
            tick: 0,
            antibody: 12,
        }
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn robot(&self) -> &RobotState {
        &self.robot
    }

    pub fn repertoire(&self) -> &Repertoire {
        &self.repertoire
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// Simulated seconds since the start.
    pub fn time(&self) -> f64 {
        self.tick as f64 * DT
    }

    pub fn antibody(&self) -> &Antibody {
        self.repertoire.get(self.antibody)
    }

    /// Switches the executing behaviour.
    pub fn set_antibody(&mut self, id: usize) -> Result<(), CoreError> {
        if id >= self.repertoire.len() {
            return Err(CoreError::UnknownAntibody(id));
        }
        self.antibody = id;
        Ok(())
    }

    pub fn sense(&self) -> SensorBundle {
        let pose = &self.robot.pose;
        SensorBundle {
            laser: cast_laser(&self.world, pose).summary(),
            rear_average: rear_sonar_average(&self.world, pose, ROBOT_RADIUS),
            blob: detect_blob(&self.world, pose),
            stalled: self.robot.stalled,
            odometer: self.robot.odometer,
        }
    }

    pub fn detect(&self, sensors: &SensorBundle, priority: &Priority) -> Result<Stimulus, CoreError> {
        detect_antigens(sensors, &self.config.thresholds, priority)
    }

    /// Noise-free velocity the current antibody asks for right now.
    pub fn command(&self) -> (f64, f64) {
        let ab = self.antibody();
        let pose = &self.robot.pose;
        match ab.kind {
            AntibodyKind::WanderMaxGap => {
                let max_sector = cast_laser(&self.world, pose).summary().max_sector;
                ab.command(max_sector, &BlobReading::default())
            }
            AntibodyKind::TrackMarker => ab.command(0, &detect_blob(&self.world, pose)),
            _ => (ab.linear, ab.angular),
        }
    }

    /// Executes the current antibody for one control period.
    pub fn step(&mut self) -> StepOutcome {
        let (v, w) = self.command();
        let (v, w) = self.config.noise.perturb(v, w, &mut self.rng);
        let moved = integrate(&self.world, &mut self.robot, v, w, DT);
        self.tick += 1;
        let passed = self.world.passed_markers(self.robot.pose.position());
        for &m in &passed {
            self.world.on_marker_passed(m);
        }
        StepOutcome {
            moved,
            passed,
            goal: self.goal_reached(),
        }
    }

    pub fn goal_reached(&self) -> bool {
        let blob = detect_blob(&self.world, &self.robot.pose);
        let target = self.world.final_marker().id;
        blob.marker == Some(target) && blob.area > self.config.goal_area
    }
}
