//! `rnagenus` — exact counting, uniform fixed-genus sampling, and
//! energy-weighted genus-1 sampling of RNA pseudoknot structures.
//!
//! Exit codes: 0 on success, 1 on runtime failure (infeasible request or a
//! failed verification), 2 on command-line or input parsing problems.

mod format;
mod verify;

use std::io::{BufRead, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

use format::{emit_text, parse_text, GenusRecord, SampleRecord};
use rnagenus::{
    classify_loops, genus_of_diagram, loop_energy, CountTables, Diagram, DiagramSampler,
    EnergyParams, GenusOneDiagramSampler, LoopClass, MatchingSampler, PartitionTables,
    RandomSource,
};

#[derive(Parser)]
#[command(
    name = "rnagenus",
    version,
    about = "Counting and random generation of RNA pseudoknot structures by topological genus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact structure counts by size and genus
    Count(CountArgs),
    /// Random structure generation
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Read structures and annotate each with its genus
    Genus(GenusArgs),
    /// Loop-class statistics over freshly sampled structures
    Stats(StatsArgs),
    /// Cross-check the fast machinery against brute force
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(group = ArgGroup::new("size").required(true).args(["edges", "length"]))]
struct CountArgs {
    /// Count perfect matchings with this many arcs (backbone length 2n)
    #[arg(long)]
    edges: Option<usize>,
    /// Count diagrams of this backbone length, unpaired positions allowed
    #[arg(long)]
    length: Option<usize>,
    /// Restrict to one genus; omit for a per-genus table
    #[arg(long)]
    genus: Option<usize>,
    /// Split a --length --genus count by number of arcs
    #[arg(long, requires = "length", requires = "genus")]
    breakdown: bool,
}

#[derive(Subcommand)]
enum SampleCommand {
    /// Uniform perfect matchings of fixed genus
    Matching(SampleMatchingArgs),
    /// Uniform diagrams of fixed genus (unpaired positions allowed)
    Diagram(SampleDiagramArgs),
    /// Genus-1 structures drawn with Boltzmann weights from the loop model
    Boltzmann(SampleBoltzmannArgs),
}

#[derive(Args)]
struct SampleMatchingArgs {
    /// Number of arcs (backbone length 2n)
    #[arg(long)]
    edges: usize,
    /// Genus of every generated structure
    #[arg(long)]
    genus: usize,
    #[command(flatten)]
    common: CommonSampleArgs,
}

#[derive(Args)]
struct SampleDiagramArgs {
    /// Backbone length
    #[arg(long)]
    length: usize,
    /// Genus of every generated structure
    #[arg(long)]
    genus: usize,
    #[command(flatten)]
    common: CommonSampleArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("size").required(true).args(["edges", "length"]))]
struct SampleBoltzmannArgs {
    /// Sample perfect matchings with this many arcs
    #[arg(long)]
    edges: Option<usize>,
    /// Sample diagrams of this backbone length (unpaired positions allowed)
    #[arg(long)]
    length: Option<usize>,
    /// Energy parameter file (key = value lines); all zero when omitted
    #[arg(long)]
    params: Option<PathBuf>,
    #[command(flatten)]
    common: CommonSampleArgs,
}

#[derive(Args)]
struct CommonSampleArgs {
    /// How many structures to generate
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// RNG seed; derived from the clock (and echoed) when omitted
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; output is identical for every thread count
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Emit one JSON record per line instead of the text form
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenusArgs {
    /// Input file with one structure per line; stdin when omitted or "-"
    file: Option<PathBuf>,
    /// Emit one JSON record per line instead of annotated text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StatsArgs {
    /// Number of arcs (backbone length 2n)
    #[arg(long)]
    edges: usize,
    /// Genus of the sampled structures
    #[arg(long)]
    genus: usize,
    /// Sample size
    #[arg(long, default_value_t = 1000)]
    count: u64,
    /// RNG seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Energy parameter file; adds a mean-energy line (genus <= 1 only)
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest arc count used in exhaustive checks
    #[arg(long, default_value_t = 6)]
    max_edges: usize,
    /// Number of randomized surgery round-trips
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// RNG seed for the randomized checks
    #[arg(long, default_value_t = 48879)]
    seed: u64,
}

fn main() -> ExitCode {
    // Die quietly when the reader of a pipeline goes away (`... | head`)
    // instead of panicking mid-write, like other line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Count(args) => count(args),
        Command::Sample(args) => sample(args),
        Command::Genus(args) => genus(args),
        Command::Stats(args) => stats(args),
        Command::Verify(args) => {
            let opts = verify::VerifyOptions {
                max_edges: args.max_edges,
                samples: args.samples,
                seed: args.seed,
            };
            return if verify::run(&opts) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
        }
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn count(args: CountArgs) -> Result<ExitCode> {
    let tables = CountTables::new();
    let out = std::io::stdout();
    let mut out = BufWriter::new(out.lock());
    match (args.edges, args.length) {
        (Some(n), None) => {
            if let Some(g) = args.genus {
                writeln!(out, "{}", tables.matchings(n, g))?;
            } else {
                for g in 0..=n / 2 {
                    writeln!(out, "genus {g}: {}", tables.matchings(n, g))?;
                }
                writeln!(
                    out,
                    "total: {}",
                    rnagenus::enumerate::double_factorial_odd(n)
                )?;
            }
        }
        (None, Some(len)) => {
            if let Some(g) = args.genus {
                if args.breakdown {
                    for n in 0..=len / 2 {
                        let c = tables.diagrams_with_arcs(len, n, g);
                        if !num_is_zero(&c) {
                            writeln!(out, "arcs {n}: {c}")?;
                        }
                    }
                    writeln!(out, "total: {}", tables.diagrams(len, g))?;
                } else {
                    writeln!(out, "{}", tables.diagrams(len, g))?;
                }
            } else {
                for g in 0..=len / 4 {
                    let c = tables.diagrams(len, g);
                    if !num_is_zero(&c) {
                        writeln!(out, "genus {g}: {c}")?;
                    }
                }
            }
        }
        _ => unreachable!("clap enforces exactly one of --edges/--length"),
    }
    Ok(ExitCode::SUCCESS)
}

fn num_is_zero(x: &rnagenus::num::BigUint) -> bool {
    use rnagenus::num::Zero;
    x.is_zero()
}

fn sample(args: SampleCommand) -> Result<ExitCode> {
    match args {
        SampleCommand::Matching(a) => {
            let sampler = MatchingSampler::new(a.edges, a.genus)
                .context("cannot build a uniform matching sampler")?;
            emit_samples(&a.common, None, |rng| Ok(sampler.sample(rng)))
        }
        SampleCommand::Diagram(a) => {
            let sampler = DiagramSampler::new(a.length, a.genus)
                .context("cannot build a uniform diagram sampler")?;
            emit_samples(&a.common, None, |rng| Ok(sampler.sample(rng)))
        }
        SampleCommand::Boltzmann(a) => {
            let params = load_params(a.params.as_deref())?;
            match (a.edges, a.length) {
                (Some(n), None) => {
                    let tables = PartitionTables::build(n, &params);
                    emit_samples(&a.common, Some(&params), |rng| {
                        tables
                            .sample_matching(n, rng)
                            .context("energy-weighted sampling failed")
                    })
                }
                (None, Some(len)) => {
                    let sampler = GenusOneDiagramSampler::new(len, &params)
                        .context("cannot build an energy-weighted diagram sampler")?;
                    emit_samples(&a.common, Some(&params), |rng| Ok(sampler.sample(rng)))
                }
                _ => unreachable!("clap enforces exactly one of --edges/--length"),
            }
        }
    }
}

/// Loads an energy parameter file; malformed content is a usage problem.
fn load_params(path: Option<&std::path::Path>) -> Result<EnergyParams> {
    match path {
        None => Ok(EnergyParams::default()),
        Some(p) => match EnergyParams::from_file(p) {
            Ok(params) => Ok(params),
            Err(err) => {
                eprintln!("error: {err}");
                std::process::exit(2);
            }
        },
    }
}

/// Samples `count` structures on `threads` workers and prints them in order.
/// Sample `i` always uses stream `i` of the seed, so the bytes written do
/// not depend on the thread count.
fn emit_samples<F>(
    common: &CommonSampleArgs,
    energy_params: Option<&EnergyParams>,
    draw: F,
) -> Result<ExitCode>
where
    F: Fn(&mut RandomSource) -> Result<Diagram> + Sync,
{
    let seed = match common.seed {
        Some(s) => s,
        None => {
            let s = seed_from_clock();
            eprintln!("seed: {s} (pass --seed {s} to reproduce)");
            s
        }
    };
    let base = RandomSource::from_seed(seed);
    let results = run_indexed(common.count, common.threads, |index| {
        let mut rng = base.split(index);
        draw(&mut rng)
    });
    let out = std::io::stdout();
    let mut out = BufWriter::new(out.lock());
    for (index, result) in results.into_iter().enumerate() {
        let diagram = result?;
        if common.json {
            let energy = match energy_params {
                Some(p) => Some(loop_energy(&diagram, p)?),
                None => None,
            };
            let record = SampleRecord {
                length: diagram.length(),
                arcs: diagram.arcs().to_vec(),
                genus: genus_of_diagram(&diagram).genus,
                seed,
                index: index as u64,
                energy,
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        } else {
            writeln!(out, "{}", emit_text(&diagram))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn seed_from_clock() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    nanos ^ (std::process::id() as u64) << 32
}

/// Runs `work(i)` for `i` in `0..count` across up to `threads` workers,
/// returning results in index order.
fn run_indexed<T, F>(count: u64, threads: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let mut results: Vec<Option<T>> = (0..count).map(|_| None).collect();
    if count == 0 {
        return Vec::new();
    }
    let workers = threads.clamp(1, count as usize);
    let chunk = (count as usize).div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slots) in results.chunks_mut(chunk).enumerate() {
            let work = &work;
            let start = (w * chunk) as u64;
            scope.spawn(move || {
                for (offset, slot) in slots.iter_mut().enumerate() {
                    *slot = Some(work(start + offset as u64));
                }
            });
        }
    });
    results.into_iter().map(|r| r.unwrap()).collect()
}

fn genus(args: GenusArgs) -> Result<ExitCode> {
    let reader: Box<dyn BufRead> = match args.file.as_deref() {
        None => Box::new(std::io::stdin().lock()),
        Some(p) if p.as_os_str() == "-" => Box::new(std::io::stdin().lock()),
        Some(p) => Box::new(std::io::BufReader::new(
            std::fs::File::open(p).with_context(|| format!("cannot open {}", p.display()))?,
        )),
    };
    let out = std::io::stdout();
    let mut out = BufWriter::new(out.lock());
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.context("cannot read input")?;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let diagram = match parse_text(&line) {
            Ok(d) => d,
            Err(why) => {
                eprintln!("error: line {}: {}", lineno + 1, why);
                std::process::exit(2);
            }
        };
        let result = genus_of_diagram(&diagram);
        if args.json {
            let record = GenusRecord {
                length: diagram.length(),
                arcs: diagram.arcs().to_vec(),
                genus: result.genus,
                boundary_count: result.boundary_count,
                euler_characteristic: result.euler_characteristic,
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        } else {
            writeln!(
                out,
                "{}\tgenus={}\tboundaries={}",
                emit_text(&diagram),
                result.genus,
                result.boundary_count
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn stats(args: StatsArgs) -> Result<ExitCode> {
    let params = match args.params.as_deref() {
        Some(p) => Some(load_params(Some(p))?),
        None => None,
    };
    let sampler = MatchingSampler::new(args.edges, args.genus)
        .context("cannot build a uniform matching sampler")?;
    let base = RandomSource::from_seed(args.seed);
    let classes = [
        LoopClass::Hairpin,
        LoopClass::Interior,
        LoopClass::Multi,
        LoopClass::Pseudoknot,
    ];
    let mut totals = [0u64; 4];
    let mut energy_sum = 0.0;
    for index in 0..args.count {
        let mut rng = base.split(index);
        let m = sampler.sample(&mut rng);
        for profile in classify_loops(&m)? {
            if let Some(at) = classes.iter().position(|&c| c == profile.class) {
                totals[at] += 1;
            }
        }
        if let Some(p) = &params {
            energy_sum += loop_energy(&m, p)?;
        }
    }
    let out = std::io::stdout();
    let mut out = BufWriter::new(out.lock());
    writeln!(
        out,
        "samples: {} (arcs {}, genus {}, seed {})",
        args.count, args.edges, args.genus, args.seed
    )?;
    let all: u64 = totals.iter().sum();
    for (class, &total) in classes.iter().zip(&totals) {
        let share = if all == 0 {
            0.0
        } else {
            100.0 * total as f64 / all as f64
        };
        writeln!(out, "{class}: {total} ({share:.2}%)")?;
    }
    writeln!(
        out,
        "loops per structure: {:.3}",
        all as f64 / args.count.max(1) as f64
    )?;
    if params.is_some() {
        writeln!(
            out,
            "mean energy: {:.6}",
            energy_sum / args.count.max(1) as f64
        )?;
    }
    Ok(ExitCode::SUCCESS)
}
