//! CSV and JSON-lines writers for records, sweeps, traces and trajectories.

use std::io::Write;

use idionet_core::Trace;
use idionet_sim::RobotState;
use serde::Serialize;

use crate::runner::{RunObserver, RunRecord};
use crate::suite::SweepPoint;
use crate::ExperimentError;

fn io(e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::Io(e.to_string())
}

/// A run record flattened to one CSV row.
#[derive(Serialize)]
struct RecordRow<'a> {
    system: String,
    strategy: String,
    k1: f64,
    b: f64,
    k2: f64,
    world: &'a str,
    paratope: &'a str,
    seed: u64,
    t: f64,
    n_s: u64,
    s: f64,
    completed: bool,
    doors_passed: usize,
    decisions: usize,
    success_rate: Option<f64>,
    change_rate: Option<f64>,
    difference_rate: Option<f64>,
    idiotypic_success_rate: Option<f64>,
    stall_success_rate: Option<f64>,
    stall_change_rate: Option<f64>,
    stall_difference_rate: Option<f64>,
    stall_idiotypic_success_rate: Option<f64>,
    long_stalls: usize,
}

impl<'a> From<&'a RunRecord> for RecordRow<'a> {
    fn from(r: &'a RunRecord) -> Self {
        let m = &r.metrics;
        Self {
            system: r.system.to_string(),
            strategy: r.strategy.to_string(),
            k1: r.k1,
            b: r.b,
            k2: r.k2,
            world: &r.world,
            paratope: &r.paratope,
            seed: r.seed,
            t: r.t,
            n_s: r.n_s,
            s: r.s,
            completed: r.completed,
            doors_passed: r.doors_passed,
            decisions: m.decisions,
            success_rate: m.all.reinforcement_success,
            change_rate: m.all.antibody_change,
            difference_rate: m.all.idiotypic_difference,
            idiotypic_success_rate: m.all.idiotypic_success,
            stall_success_rate: m.stalls.reinforcement_success,
            stall_change_rate: m.stalls.antibody_change,
            stall_difference_rate: m.stalls.idiotypic_difference,
            stall_idiotypic_success_rate: m.stalls.idiotypic_success,
            long_stalls: m.long_stalls().count(),
        }
    }
}

pub fn write_records_csv<W: Write>(records: &[RunRecord], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(RecordRow::from(r)).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Writes every selection as one JSON object per line. The first write
/// error is kept and reported by [`finish`](Self::finish).
pub struct TraceWriter<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

#[derive(Serialize)]
struct TraceLine<'a> {
    tick: u64,
    #[serde(flatten)]
    trace: &'a Trace,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out, error: None }
    }

    pub fn finish(mut self) -> Result<W, ExperimentError> {
        if let Some(e) = self.error.take() {
            return Err(io(e));
        }
        self.out.flush().map_err(io)?;
        Ok(self.out)
    }
}

impl<W: Write> RunObserver for TraceWriter<W> {
    fn on_decision(&mut self, tick: u64, trace: &Trace) {
        if self.error.is_some() {
            return;
        }
        let line = serde_json::to_string(&TraceLine { tick, trace }).expect("trace serializes");
        if let Err(e) = writeln!(self.out, "{line}") {
            self.error = Some(e);
        }
    }
}

/// Trajectory CSV: tick, x, y, theta, dominant antigen, winner, stalled.
pub struct TrajectoryWriter<W: Write> {
    out: csv::Writer<W>,
    error: Option<csv::Error>,
}

impl<W: Write> TrajectoryWriter<W> {
    pub fn new(out: W) -> Self {
        Self {
            out: csv::Writer::from_writer(out),
            error: None,
        }
    }

    pub fn finish(mut self) -> Result<(), ExperimentError> {
        if let Some(e) = self.error.take() {
            return Err(io(e));
        }
        self.out.flush().map_err(io)
    }
}

#[derive(Serialize)]
struct TrajectoryRow {
    tick: u64,
    x: f64,
    y: f64,
    theta: f64,
    dominant: usize,
    winner: usize,
    stalled: bool,
}

impl<W: Write> RunObserver for TrajectoryWriter<W> {
    fn on_step(&mut self, tick: u64, robot: &RobotState, dominant: usize, winner: usize) {
        if self.error.is_some() {
            return;
        }
        let row = TrajectoryRow {
            tick,
            x: robot.pose.x,
            y: robot.pose.y,
            theta: robot.pose.theta,
            dominant,
            winner,
            stalled: robot.stalled,
        };
        if let Err(e) = self.out.serialize(row) {
            self.error = Some(e);
        }
    }
}

/// Forwards every event to both observers.
pub struct Both<'a, A: ?Sized, B: ?Sized>(pub &'a mut A, pub &'a mut B);

impl<A: RunObserver + ?Sized, B: RunObserver + ?Sized> RunObserver for Both<'_, A, B> {
    fn on_decision(&mut self, tick: u64, trace: &Trace) {
        self.0.on_decision(tick, trace);
        self.1.on_decision(tick, trace);
    }

    fn on_step(&mut self, tick: u64, robot: &RobotState, dominant: usize, winner: usize) {
        self.0.on_step(tick, robot, dominant, winner);
        self.1.on_step(tick, robot, dominant, winner);
    }
}
