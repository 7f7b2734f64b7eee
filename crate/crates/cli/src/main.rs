//! Command-line front end: runs the verification experiments and utility
//! commands, emits CSV or JSON lines, and exits nonzero when any bound
//! check fails.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rdtp_core::density::quantile_init;
use rdtp_core::harness::emit::{self, Format};
use rdtp_core::harness::{ExperimentConfig, ExperimentRegistry};
use rdtp_core::metrics::{bl_distance, DiscreteMeasure};
use rdtp_core::particle;
use rdtp_core::stream::{experiment_id, rng_for, StreamKey};
use rdtp_core::InitialDensity;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rdtp", about = "Removal-driven thinning process: simulation and bound verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Particle / point counts (comma separated for a sweep)
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    replicas: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial density: uniform | exp:<rate> | file:<path>
    #[arg(long, default_value = "uniform")]
    density: String,
    /// Deviation sizes
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
    eps: Vec<f64>,
    /// Fixed evaluation times
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    times: Vec<f64>,
    /// End of the sup-over-time window
    #[arg(long, default_value_t = 0.9)]
    horizon: f64,
    /// Uniform time-grid size for sup estimates
    #[arg(long, default_value_t = 10)]
    grid: usize,
    /// Atom count for limit discretization
    #[arg(long = "disc-m", default_value_t = 400)]
    disc_m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Record wall-clock runtimes in the output (breaks byte-for-byte
    /// reproducibility across machines; timings otherwise go to stderr)
    #[arg(long, default_value_t = false)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one particle-system trajectory and emit its event log
    Simulate(Common),
    /// Urn verification: CLT statistics and exact concentration tails
    Urn(Common),
    /// Thinning tails against the Maurey-type bound
    Thin(Common),
    /// Loss concentration: sup-over-time and pointwise tail bounds
    VerifyLoss(Common),
    /// One-point empirical-measure concentration bound
    VerifyOnePoint(Common),
    /// Uniform-in-time empirical closeness to the kinetic limit
    VerifyEmp(Common),
    /// Bounded-Lipschitz distance between two measures read from files
    Bl {
        /// File with one "position weight" pair per line
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

fn parse_density(s: &str) -> Result<InitialDensity> {
    if s == "uniform" {
        return Ok(InitialDensity::uniform01());
    }
    if let Some(rate) = s.strip_prefix("exp:") {
        let rate: f64 = rate.parse().context("exponential rate")?;
        return Ok(InitialDensity::exponential(rate)?);
    }
    if let Some(path) = s.strip_prefix("file:") {
        return Ok(InitialDensity::from_cdf_file(path.as_ref())?);
    }
    bail!("unrecognized density {s:?}; expected uniform | exp:<rate> | file:<path>")
}

fn parse_format(s: &str) -> Result<Format> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => bail!("unrecognized format {other:?}; expected csv | json"),
    }
}

fn config_from(common: &Common) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        n_values: common.n.clone(),
        density: parse_density(&common.density)?,
        eps: common.eps.clone(),
        times: common.times.clone(),
        horizon: common.horizon,
        grid: common.grid,
        replicas: common.replicas,
        seed: common.seed,
        disc_m: common.disc_m,
        record_runtime: common.timings,
        ..ExperimentConfig::default()
    })
}

fn write_output(common: &Common, content: &str) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run_experiment(name: &str, common: &Common) -> Result<bool> {
    let cfg = config_from(common)?;
    let format = parse_format(&common.format)?;
    let start = std::time::Instant::now();
    let rows = ExperimentRegistry::builtin().run(name, &cfg)?;
    eprintln!(
        "{name}: {} rows in {} ms",
        rows.len(),
        start.elapsed().as_millis()
    );
    write_output(common, &emit::render(&rows, format))?;
    Ok(emit::all_bounds_ok(&rows))
}

fn run_simulate(common: &Common) -> Result<bool> {
    let density = parse_density(&common.density)?;
    let n = *common.n.first().context("need --n")?;
    let positions = quantile_init(n, &density)?;
    let mut rng = rng_for(StreamKey::new(common.seed, experiment_id::SIMULATE, 0));
    let traj = particle::simulate(&positions, &mut rng)?;
    write_output(common, &traj.events_csv())?;
    Ok(true)
}

fn read_measure(path: &PathBuf) -> Result<DiscreteMeasure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let x: f64 = it
            .next()
            .context("missing position")?
            .parse()
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        let w: f64 = match it.next() {
            Some(tok) => tok
                .parse()
                .with_context(|| format!("{}:{}", path.display(), i + 1))?,
            None => 1.0,
        };
        pairs.push((x, w));
    }
    Ok(DiscreteMeasure::from_pairs(pairs))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(c) => run_simulate(c),
        Command::Urn(c) => run_experiment("urn_clt", c),
        Command::Thin(c) => run_experiment("thinning", c),
        Command::VerifyLoss(c) => run_experiment("loss", c),
        Command::VerifyOnePoint(c) => run_experiment("one_point", c),
        Command::VerifyEmp(c) => run_experiment("uniform_emp", c),
        Command::Bl { a, b } => (|| {
            let d = bl_distance(&read_measure(a)?, &read_measure(b)?);
            println!("{d}");
            Ok(true)
        })(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more bound checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
