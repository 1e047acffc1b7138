//! Batches of runs: parameter sweeps, the maze/mirror comparison protocol
//! and their summaries.

use idionet_core::{init_paratope, Paratope, SelectionMode, Strategy};
use idionet_sim::World;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metrics::Rates;
use crate::runner::{run_single, RunOutcome, RunRecord};
use crate::score::{BAD_SCORE, GOOD_SCORE};
use crate::stats::{confidence_interval, mean, welch_one_tailed, Describe, TTest};
use crate::{ExperimentError, RunConfig};

/// Antibodies and antigens of the standard repertoire.
pub const ANTIBODIES: usize = 16;
pub const ANTIGENS: usize = 8;

/// One run waiting to be executed.
#[derive(Clone, Debug)]
pub struct RunSpec<'a> {
    pub config: RunConfig,
    pub world: &'a World,
    pub paratope: Paratope,
    pub paratope_id: String,
    pub seed: u64,
}

/// Runs every spec on up to `jobs` threads. Results come back in spec order
/// whatever the thread count.
pub fn run_batch(specs: &[RunSpec<'_>], jobs: usize) -> Result<Vec<RunOutcome>, ExperimentError> {
    let one = |s: &RunSpec<'_>| {
        run_single(&s.config, s.world, s.paratope.clone(), &s.paratope_id, s.seed, &mut ())
    };
    if jobs <= 1 {
        return specs.iter().map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ExperimentError::Protocol(e.to_string()))?;
    pool.install(|| specs.par_iter().map(one).collect())
}

/// `count` random paratopes named P1, P2, ..., the k-th drawn from seed
/// `seed + k - 1`.
pub fn paratope_set(count: usize, seed: u64) -> Vec<(String, Paratope)> {
    (0..count)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed + k as u64);
            (format!("P{}", k + 1), init_paratope(ANTIBODIES, ANTIGENS, &mut rng))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    K1,
    B,
}

impl Axis {
    pub fn apply(self, cfg: &mut RunConfig, value: f64) {
        match self {
            Axis::K1 => cfg.k1 = value,
            Axis::B => cfg.b = value,
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = ExperimentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k1" => Ok(Axis::K1),
            "b" => Ok(Axis::B),
            _ => Err(ExperimentError::Protocol(format!("unknown sweep axis {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub runs: usize,
    pub mean_s: f64,
    pub mean_t: f64,
    pub mean_n_s: f64,
    /// Mean over runs of the whole-run idiotypic difference rate, in percent.
    pub mean_difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub axis: Axis,
    pub points: Vec<SweepPoint>,
    pub records: Vec<RunRecord>,
}

/// Runs `runs` seeded runs at every value of `axis`, cycling through
/// `paratopes`. Run `r` at every point uses seed `run_seed + r`.
pub fn sweep(
    base: &RunConfig,
    axis: Axis,
    values: &[f64],
    runs: usize,
    world: &World,
    paratopes: &[(String, Paratope)],
    run_seed: u64,
    jobs: usize,
) -> Result<Sweep, ExperimentError> {
    if values.is_empty() {
        return Err(ExperimentError::Protocol("sweep needs at least one value".into()));
    }
    if runs == 0 || paratopes.is_empty() {
        return Err(ExperimentError::Protocol("sweep needs runs and paratopes".into()));
    }
    let mut specs = Vec::with_capacity(values.len() * runs);
    for &v in values {
        let mut cfg = base.clone();
        axis.apply(&mut cfg, v);
        cfg.validate()?;
        for r in 0..runs {
            let (id, p) = &paratopes[r % paratopes.len()];
            specs.push(RunSpec {
                config: cfg.clone(),
                world,
                paratope: p.clone(),
                paratope_id: id.clone(),
                seed: run_seed + r as u64,
            });
        }
    }
    let records: Vec<RunRecord> = run_batch(&specs, jobs)?.into_iter().map(|o| o.record).collect();
    let points = values
        .iter()
        .zip(records.chunks(runs))
        .map(|(&value, rs)| SweepPoint {
            value,
            runs: rs.len(),
            mean_s: mean(&rs.iter().map(|r| r.s).collect::<Vec<_>>()),
            mean_t: mean(&rs.iter().map(|r| r.t).collect::<Vec<_>>()),
            mean_n_s: mean(&rs.iter().map(|r| r.n_s as f64).collect::<Vec<_>>()),
            mean_difference: mean(
                &rs.iter()
                    .map(|r| r.metrics.all.idiotypic_difference.unwrap_or(0.0))
                    .collect::<Vec<_>>(),
            ),
        })
        .collect();
    Ok(Sweep { axis, points, records })
}

/// Means of each per-run rate over the runs where it is defined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanRates {
    pub reinforcement_success: Option<f64>,
    pub antibody_change: Option<f64>,
    pub idiotypic_difference: Option<f64>,
    pub idiotypic_success: Option<f64>,
}

impl MeanRates {
    fn of<'a>(rates: impl Iterator<Item = &'a Rates> + Clone) -> Self {
        let avg = |f: fn(&Rates) -> Option<f64>| {
            let v: Vec<f64> = rates.clone().filter_map(f).collect();
            (!v.is_empty()).then(|| mean(&v))
        };
        Self {
            reinforcement_success: avg(|r| r.reinforcement_success),
            antibody_change: avg(|r| r.antibody_change),
            idiotypic_difference: avg(|r| r.idiotypic_difference),
            idiotypic_success: avg(|r| r.idiotypic_success),
        }
    }
}

/// Pooled over every stall sequence longer than one decision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LongStallSummary {
    pub count: usize,
    pub mean_length: Option<f64>,
    /// Winner changes as a percentage of the transitions inside sequences.
    pub change_rate: Option<f64>,
    /// Mean number of decisions per sequence that reused an antibody already
    /// tried in it.
    pub mean_repeats: Option<f64>,
    /// Percentage of escaped sequences whose last decision was an
    /// idiotypic difference.
    pub escape_by_difference: Option<f64>,
}

impl LongStallSummary {
    pub fn of(records: &[RunRecord]) -> Self {
        let seqs: Vec<_> = records.iter().flat_map(|r| r.metrics.long_stalls()).collect();
        if seqs.is_empty() {
            return Self::default();
        }
        let n = seqs.len() as f64;
        let total: usize = seqs.iter().map(|s| s.length).sum();
        let transitions: usize = seqs.iter().map(|s| s.length - 1).sum();
        let changes: usize = seqs.iter().map(|s| s.changes()).sum();
        let repeats: usize = seqs
            .iter()
            .map(|s| {
                let mut seen = std::collections::BTreeSet::new();
                s.antibodies.iter().filter(|&&a| !seen.insert(a)).count()
            })
            .sum();
        let escaped: Vec<_> = seqs.iter().filter(|s| s.escaped).collect();
        Self {
            count: seqs.len(),
            mean_length: Some(total as f64 / n),
            change_rate: Some(100.0 * changes as f64 / transitions as f64),
            mean_repeats: Some(repeats as f64 / n),
            escape_by_difference: (!escaped.is_empty()).then(|| {
                100.0 * escaped.iter().filter(|s| s.escape_by_difference).count() as f64
                    / escaped.len() as f64
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub world: String,
    pub system: SelectionMode,
    pub strategy: Strategy,
    pub runs: usize,
    pub completed: usize,
    pub t: Describe,
    pub n_s: Describe,
    pub s: Describe,
    /// 95% interval on the mean score.
    pub s_interval: Option<(f64, f64)>,
    pub good_pct: f64,
    pub bad_pct: f64,
    pub rates: MeanRates,
    pub stall_rates: MeanRates,
    pub long_stalls: LongStallSummary,
}

impl GroupSummary {
    /// `None` for an empty record set.
    pub fn of(world: &str, records: &[RunRecord]) -> Option<Self> {
        let first = records.first()?;
        let s: Vec<f64> = records.iter().map(|r| r.s).collect();
        let n = records.len() as f64;
        Some(Self {
            world: world.to_string(),
            system: first.system,
            strategy: first.strategy,
            runs: records.len(),
            completed: records.iter().filter(|r| r.completed).count(),
            t: Describe::of(&records.iter().map(|r| r.t).collect::<Vec<_>>())?,
            n_s: Describe::of(&records.iter().map(|r| r.n_s as f64).collect::<Vec<_>>())?,
            s: Describe::of(&s)?,
            s_interval: confidence_interval(&s, 0.95),
            good_pct: 100.0 * s.iter().filter(|&&v| v < GOOD_SCORE).count() as f64 / n,
            bad_pct: 100.0 * s.iter().filter(|&&v| v > BAD_SCORE).count() as f64 / n,
            rates: MeanRates::of(records.iter().map(|r| &r.metrics.all)),
            stall_rates: MeanRates::of(records.iter().map(|r| &r.metrics.stalls)),
            long_stalls: LongStallSummary::of(records),
        })
    }
}

/// One-tailed tests that system `a` has lower means than system `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub world: String,
    pub a: SelectionMode,
    pub b: SelectionMode,
    pub s: Option<TTest>,
    pub n_s: Option<TTest>,
    pub t: Option<TTest>,
}

impl Comparison {
    pub fn of(world: &str, a: &[RunRecord], b: &[RunRecord]) -> Option<Self> {
        let col = |rs: &[RunRecord], f: fn(&RunRecord) -> f64| rs.iter().map(f).collect::<Vec<_>>();
        Some(Self {
            world: world.to_string(),
            a: a.first()?.system,
            b: b.first()?.system,
            s: welch_one_tailed(&col(a, |r| r.s), &col(b, |r| r.s)),
            n_s: welch_one_tailed(&col(a, |r| r.n_s as f64), &col(b, |r| r.n_s as f64)),
            t: welch_one_tailed(&col(a, |r| r.t), &col(b, |r| r.t)),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub groups: Vec<GroupSummary>,
    pub comparisons: Vec<Comparison>,
}

impl SuiteSummary {
    pub fn group(&self, world: &str, system: SelectionMode) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| g.world == world && g.system == system)
    }

    pub fn comparison(&self, world: &str, a: SelectionMode, b: SelectionMode) -> Option<&Comparison> {
        self.comparisons
            .iter()
            .find(|c| c.world == world && c.a == a && c.b == b)
    }
}

/// Settings of the comparison protocol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Protocol {
    pub base: RunConfig,
    pub systems: Vec<SelectionMode>,
    pub paratopes: usize,
    pub runs_per_paratope: usize,
    pub paratope_seed: u64,
    pub run_seed: u64,
    /// Rerun every maze run in the mirrored world with its trained paratope.
    pub mirror: bool,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            base: RunConfig::default(),
            systems: SelectionMode::ALL.to_vec(),
            paratopes: 5,
            runs_per_paratope: 6,
            paratope_seed: 1000,
            run_seed: 1,
            mirror: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolResult {
    pub protocol: Protocol,
    pub maze: Vec<RunRecord>,
    pub mirror: Vec<RunRecord>,
    pub summary: SuiteSummary,
}

fn by_system(records: &[RunRecord], system: SelectionMode) -> Vec<RunRecord> {
    records.iter().filter(|r| r.system == system).cloned().collect()
}

/// Summaries per system for each world label, plus every pairwise
/// comparison of a later system against an earlier one.
pub fn summarize(worlds: &[(&str, &[RunRecord])], systems: &[SelectionMode]) -> SuiteSummary {
    let mut out = SuiteSummary::default();
    for &(label, records) in worlds {
        let groups: Vec<Vec<RunRecord>> = systems.iter().map(|&s| by_system(records, s)).collect();
        out.groups
            .extend(groups.iter().filter_map(|g| GroupSummary::of(label, g)));
        for i in 0..groups.len() {
            for j in 0..i {
                if let Some(c) = Comparison::of(label, &groups[i], &groups[j]) {
                    out.comparisons.push(c);
                }
            }
        }
    }
    out
}

/// Every system runs `runs_per_paratope` times from each random paratope in
/// the maze, then optionally once more per run in the mirrored maze starting
/// from the paratope that run learned.
pub fn compare_protocol(
    protocol: &Protocol,
    world: &World,
    jobs: usize,
) -> Result<ProtocolResult, ExperimentError> {
    if protocol.systems.is_empty() || protocol.paratopes == 0 || protocol.runs_per_paratope == 0 {
        return Err(ExperimentError::Protocol(
            "need at least one system, paratope and run".into(),
        ));
    }
    let paratopes = paratope_set(protocol.paratopes, protocol.paratope_seed);
    let mut specs = Vec::new();
    for &system in &protocol.systems {
        let cfg = protocol.base.clone().with_system(system);
        cfg.validate()?;
        for (j, (id, p)) in paratopes.iter().enumerate() {
            for r in 0..protocol.runs_per_paratope {
                specs.push(RunSpec {
                    config: cfg.clone(),
                    world,
                    paratope: p.clone(),
                    paratope_id: id.clone(),
                    seed: protocol.run_seed + (j * protocol.runs_per_paratope + r) as u64,
                });
            }
        }
    }
    let outcomes = run_batch(&specs, jobs)?;

    let mirrored = world.mirror();
    let mirror = if protocol.mirror {
        let specs: Vec<RunSpec<'_>> = specs
            .iter()
            .zip(&outcomes)
            .map(|(s, o)| RunSpec {
                config: s.config.clone(),
                world: &mirrored,
                paratope: o.paratope.clone(),
                paratope_id: format!("{}-trained", s.paratope_id),
                seed: s.seed,
            })
            .collect();
        run_batch(&specs, jobs)?.into_iter().map(|o| o.record).collect()
    } else {
        Vec::new()
    };
    let maze: Vec<RunRecord> = outcomes.into_iter().map(|o| o.record).collect();

    let combined: Vec<RunRecord> = maze.iter().chain(&mirror).cloned().collect();
    let mut worlds: Vec<(&str, &[RunRecord])> = vec![("maze", &maze)];
    if protocol.mirror {
        worlds.push(("mirror", &mirror));
        worlds.push(("combined", &combined));
    }
    let summary = summarize(&worlds, &protocol.systems);
    Ok(ProtocolResult {
        protocol: protocol.clone(),
        maze,
        mirror,
        summary,
    })
}
