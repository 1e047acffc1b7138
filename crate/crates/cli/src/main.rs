mod settings;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use idionet_core::{init_paratope, SelectionMode, Strategy};
use idionet_experiment::output::{
    write_records_csv, write_sweep_csv, Both, TraceWriter, TrajectoryWriter,
};
use idionet_experiment::suite::{ANTIBODIES, ANTIGENS};
use idionet_experiment::{compare_protocol, run_single, sweep, Axis, RunObserver};
use idionet_sim::World;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use toml::Value;

use settings::{comment_header, parse_assignment, Settings};

#[derive(Parser)]
#[command(name = "idionet", version, about = "Idiotypic network robot control experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random initial paratope matrix.
    GenParatope {
        #[arg(long)]
        seed: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One run; prints the run record as JSON.
    Run(RunArgs),
    /// Seeded runs at each value of k1 or b; prints CSV.
    Sweep(SweepArgs),
    /// The maze/mirror comparison of the selection systems.
    Compare(CompareArgs),
    /// Write the mirror image of a world file (or of the built-in maze).
    MirrorWorld {
        #[arg(long)]
        world: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML config file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    world: Option<PathBuf>,
    #[arg(long)]
    system: Option<SelectionMode>,
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
    /// Simulated seconds before a run is abandoned.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    paratope_seed: Option<u64>,
    /// Any config key, e.g. `run.reinforcement.movement_gain=0.3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_assignment)]
    set: Vec<(String, Value)>,
}

impl Common {
    fn resolve(&self, paratope: Option<&Path>) -> Result<Settings> {
        let mut o: Vec<(String, Value)> = Vec::new();
        let mut put = |k: &str, v: Value| o.push((k.to_string(), v));
        if let Some(p) = &self.world {
            put("world", Value::String(p.display().to_string()));
        }
        if let Some(p) = paratope {
            put("paratope", Value::String(p.display().to_string()));
        }
        if let Some(s) = self.system {
            put("run.system", Value::String(s.to_string()));
        }
        if let Some(s) = self.strategy {
            put("run.reinforcement.strategy", Value::String(s.to_string()));
        }
        for (key, v) in [
            ("run.k1", self.k1),
            ("run.b", self.b),
            ("run.k2", self.k2),
            ("run.timeout", self.timeout),
        ] {
            if let Some(v) = v {
                put(key, Value::Float(v));
            }
        }
        for (key, v) in [("seed", self.seed), ("paratope_seed", self.paratope_seed)] {
            if let Some(v) = v {
                put(key, Value::Integer(v.try_into().context("seed too large")?));
            }
        }
        // --set comes last so it overrides the named flags too.
        o.extend(self.set.iter().cloned());
        Settings::resolve(self.config.as_deref(), &o)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Starting paratope file; generated from the paratope seed when absent.
    #[arg(long)]
    paratope: Option<PathBuf>,
    /// Write the paratope learned during the run.
    #[arg(long)]
    save_paratope: Option<PathBuf>,
    /// Write every selection as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the pose at every control tick as CSV.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    paratope: Option<PathBuf>,
    #[arg(long)]
    axis: Axis,
    /// Comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    values: Vec<f64>,
    /// Runs at each value.
    #[arg(long, default_value_t = 6)]
    runs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "IDIONET_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    /// Shorthand for `--strategy weak`.
    #[arg(long)]
    weak: bool,
    #[arg(long, value_delimiter = ',')]
    systems: Option<Vec<SelectionMode>>,
    #[arg(long)]
    paratopes: Option<usize>,
    #[arg(long)]
    runs_per_paratope: Option<usize>,
    #[arg(long)]
    no_mirror: bool,
    /// Write every run record as CSV.
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long, env = "IDIONET_JOBS")]
    jobs: Option<usize>,
}

fn jobs(requested: Option<usize>) -> usize {
    requested
        .filter(|&j| j > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: &'a Settings,
    #[serde(flatten)]
    body: T,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn gen_paratope(seed: u64, out: Option<&Path>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: idionet_core::Paratope = init_paratope(ANTIBODIES, ANTIGENS, &mut rng);
    let text = p.as_matrix().to_text(Some(&format!("seed = {seed}")));
    output(out)?.write_all(text.as_bytes())?;
    Ok(())
}

fn run(args: &RunArgs) -> Result<bool> {
    let settings = args.common.resolve(args.paratope.as_deref())?;
    let world = settings.load_world()?;
    let (id, paratope) = settings.load_paratope()?;

    let mut trace = args.trace.as_deref().map(create).transpose()?.map(TraceWriter::new);
    let mut traj = args
        .trajectory
        .as_deref()
        .map(create)
        .transpose()?
        .map(TrajectoryWriter::new);
    let mut none = ();
    let outcome = {
        let a: &mut dyn RunObserver = match &mut trace {
            Some(t) => t,
            None => &mut none,
        };
        let mut none_b = ();
        let b: &mut dyn RunObserver = match &mut traj {
            Some(t) => t,
            None => &mut none_b,
        };
        let mut both = Both(a, b);
        run_single(&settings.run, &world, paratope, &id, settings.seed, &mut both)?
    };
    if let Some(t) = trace {
        t.finish()?;
    }
    if let Some(t) = traj {
        t.finish()?;
    }
    if let Some(path) = &args.save_paratope {
        let comment = format!(
            "learned by {} from {id}, seed {}, world {}",
            settings.run.system, settings.seed, world.name
        );
        outcome
            .paratope
            .save(path, Some(&comment))
            .with_context(|| format!("saving {}", path.display()))?;
    }
    print_json(&Report {
        config: &settings,
        body: &outcome.record,
    })?;
    Ok(outcome.record.completed)
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    if args.values.is_empty() {
        bail!("--values needs at least one value");
    }
    let settings = args.common.resolve(args.paratope.as_deref())?;
    let world = settings.load_world()?;
    let paratope = settings.load_paratope()?;
    let result = sweep(
        &settings.run,
        args.axis,
        &args.values,
        args.runs,
        &world,
        std::slice::from_ref(&paratope),
        settings.seed,
        jobs(args.jobs),
    )?;
    let mut out = output(args.out.as_deref())?;
    out.write_all(comment_header(&settings).as_bytes())?;
    write_sweep_csv(&result.points, &mut out)?;
    out.flush()?;
    Ok(())
}

fn compare(args: &CompareArgs) -> Result<()> {
    let mut common = args.common.clone();
    if args.weak {
        common.strategy = Some(Strategy::Weak);
    }
    let mut settings = common.resolve(None)?;
    if let Some(s) = &args.systems {
        settings.protocol.systems = s.clone();
    }
    if let Some(n) = args.paratopes {
        settings.protocol.paratopes = n;
    }
    if let Some(n) = args.runs_per_paratope {
        settings.protocol.runs_per_paratope = n;
    }
    if args.no_mirror {
        settings.protocol.mirror = false;
    }
    let world = settings.load_world()?;
    let result = compare_protocol(&settings.protocol(), &world, jobs(args.jobs))?;
    if let Some(path) = &args.records {
        let mut out = create(path)?;
        out.write_all(comment_header(&settings).as_bytes())?;
        let all: Vec<_> = result.maze.iter().chain(&result.mirror).cloned().collect();
        write_records_csv(&all, &mut out)?;
        out.flush()?;
    }
    print_json(&Report {
        config: &settings,
        body: &result.summary,
    })
}

fn mirror_world(world: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let w = match world {
        Some(p) => World::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => World::maze(),
    };
    let mut o = output(out)?;
    writeln!(o, "{}", w.mirror().to_json())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Exit code 2 means a timed-out run, so usage errors use 1.
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::GenParatope { seed, out } => gen_paratope(*seed, out.as_deref()).map(|_| true),
        Command::Run(args) => run(args),
        Command::Sweep(args) => run_sweep(args).map(|_| true),
        Command::Compare(args) => compare(args).map(|_| true),
        Command::MirrorWorld { world, out } => {
            mirror_world(world.as_deref(), out.as_deref()).map(|_| true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
