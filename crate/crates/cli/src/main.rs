//! `fuzzy-tft`: analyse fuzzy temporal fault trees from the command line.
//!
//! Exit codes: 0 ok, 2 usage, 3 parse or validation failure, 4 numeric
//! failure, 5 I/O failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzy_tft::engine::{evaluate, sweep, AnalysisConfig, AnalysisReport};
use fuzzy_tft::mc::{random_seed, simulate_tree, Component, SimulationConfig};
use fuzzy_tft::report::{
    self, compare, deltas_csv, importance_csv, read_reference, sig, sweep_csv, Interpretation,
};
use fuzzy_tft::tree::{parse_spec, validate_spec, Severity};
use fuzzy_tft::{Error, FaultTree, MissionTime, Spread};

#[derive(Parser)]
#[command(
    name = "fuzzy-tft",
    version,
    about = "Fuzzy quantification of Pandora temporal fault trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuzzy top-event probability at a single mission time.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Mission time in hours [default: the document's importance time, else its last grid point]
        #[arg(long)]
        time: Option<f64>,
    },
    /// Top-event probability over a time grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated grid in hours [default: the document's `times`]
        #[arg(long, value_delimiter = ',')]
        times: Vec<f64>,
        /// Reference CSV (`t,petri_net,bayesian_network,proposed`); outputs per-row deltas
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Which scalar of the fuzzy result is compared with the reference
        #[arg(long, value_enum, default_value_t = How::Centroid)]
        interpretation: How,
    },
    /// Fuzzy importance measure of every basic event, ranked.
    Importance {
        #[command(flatten)]
        common: Common,
        /// Mission time in hours [default: the document's importance time, else its last grid point]
        #[arg(long)]
        time: Option<f64>,
    },
    /// Monte Carlo estimate of the top-event probability with crisp rates.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Mission time in hours [default: as for `analyze`]
        #[arg(long)]
        time: Option<f64>,
        /// RNG seed [default: random, reported in the output]
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Component of each fuzzy rate to simulate with
        #[arg(long, value_enum, default_value_t = Comp::Peak)]
        component: Comp,
    },
    /// Check a document and print diagnostics only.
    Validate { input: PathBuf },
}

#[derive(Args)]
struct Common {
    /// Tree document (line format or JSON)
    input: PathBuf,
    /// Write the report here instead of standard output
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Fuzzification spread in percent, overriding the document's
    #[arg(long)]
    spread: Option<f64>,
    /// Accept a spread other than 15, 25 or 50 percent
    #[arg(long)]
    spread_override: bool,
    /// Clamp gate outputs to [0, 1] and saturate rate conversions
    #[arg(long)]
    clamp: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum How {
    Centroid,
    Peak,
}

#[derive(Clone, Copy, ValueEnum)]
enum Comp {
    Lower,
    Peak,
    Upper,
}

/// A failure already reported on standard error, carrying its exit code.
struct Fail(u8);

const USAGE: u8 = 2;
const INVALID: u8 = 3;
const NUMERIC: u8 = 4;
const IO: u8 = 5;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code)) => ExitCode::from(code),
    }
}

fn run(command: Command) -> Result<(), Fail> {
    match command {
        Command::Validate { input } => load(&input).map(|_| ()),
        Command::Analyze { common, time } => {
            let (tree, mut config) = prepare(&common)?;
            let t = mission_time(&common.input, time, &tree)?;
            let te = evaluate(&tree, t, &config).map_err(|e| engine_fail(&common.input, e))?;
            config.times = vec![t];
            let report = AnalysisReport {
                tree: tree
                    .name()
                    .map(str::to_string)
                    .or_else(|| tree.source.clone()),
                clamp: config.clamp,
                points: vec![fuzzy_tft::engine::TimePoint {
                    t,
                    te,
                    defuzzified: te.centroid(),
                    peak: te.peak(),
                }],
                importance_time: None,
                importance: Vec::new(),
                diagnostics: tree.warnings().to_vec(),
            };
            emit(&common, || sweep_csv(&report), || report::to_json(&report))
        }
        Command::Sweep {
            common,
            times,
            reference,
            interpretation,
        } => {
            let (tree, mut config) = prepare(&common)?;
            if !times.is_empty() {
                config.times = times_arg(&times)?;
            }
            if config.times.is_empty() {
                eprintln!(
                    "{}: error: no time grid; pass --times or add `directive times=...`",
                    common.input.display()
                );
                return Err(Fail(USAGE));
            }
            let report = sweep(&tree, &config).map_err(|e| engine_fail(&common.input, e))?;
            match reference {
                None => emit(&common, || sweep_csv(&report), || report::to_json(&report)),
                Some(path) => {
                    let text = read(&path)?;
                    let rows = read_reference(&text).map_err(|e| {
                        eprintln!("{}: error: {e}", path.display());
                        Fail(INVALID)
                    })?;
                    let how = match interpretation {
                        How::Centroid => Interpretation::Centroid,
                        How::Peak => Interpretation::Peak,
                    };
                    let deltas = compare(&report, &rows, how).map_err(|e| {
                        eprintln!("{}: error: {e}", path.display());
                        Fail(USAGE)
                    })?;
                    let max = deltas.iter().map(|d| d.vs_petri_net()).fold(0.0, f64::max);
                    let gap = deltas.iter().map(|d| d.published_gap()).fold(0.0, f64::max);
                    eprintln!(
                        "max |delta| vs petri_net: {} (published gap {})",
                        sig(max),
                        sig(gap)
                    );
                    emit(
                        &common,
                        || deltas_csv(&deltas),
                        || {
                            let v = serde_json::json!({ "report": report, "interpretation": how, "deltas": deltas });
                            serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
                        },
                    )
                }
            }
        }
        Command::Importance { common, time } => {
            let (tree, mut config) = prepare(&common)?;
            let t = mission_time(&common.input, time, &tree)?;
            config.times = vec![t];
            config = config.with_importance(Some(t));
            let report = sweep(&tree, &config).map_err(|e| engine_fail(&common.input, e))?;
            emit(
                &common,
                || importance_csv(&report),
                || report::to_json(&report),
            )
        }
        Command::Simulate {
            common,
            time,
            seed,
            samples,
            component,
        } => {
            let (tree, _) = prepare(&common)?;
            let t = mission_time(&common.input, time, &tree)?;
            let seed = seed.unwrap_or_else(random_seed);
            let mut config = SimulationConfig::new(samples, seed, t).map_err(usage)?;
            config.component = match component {
                Comp::Lower => Component::Lower,
                Comp::Peak => Component::Peak,
                Comp::Upper => Component::Upper,
            };
            let est = simulate_tree(&tree, &config).map_err(|e| engine_fail(&common.input, e))?;
            emit(
                &common,
                || {
                    let mut s = String::from("t,probability,std_error,samples,hits,seed\n");
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        sig(t.hours()),
                        sig(est.probability),
                        sig(est.std_error),
                        est.samples,
                        est.hits,
                        seed
                    );
                    s
                },
                || {
                    let v = serde_json::json!({
                        "t": t, "seed": seed, "component": config.component, "estimate": est,
                    });
                    serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
                },
            )
        }
    }
}

fn usage(e: Error) -> Fail {
    eprintln!("error: {e}");
    Fail(USAGE)
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: error: {e}", path.display());
        Fail(IO)
    })
}

/// Parses and validates, printing every diagnostic to standard error.
fn load(path: &Path) -> Result<FaultTree, Fail> {
    let text = read(path)?;
    let shown = path.display();
    let spec = parse_spec(&text).map_err(|e| {
        eprintln!("{shown}:{}:{}: error: {}", e.line, e.column, e.message);
        Fail(INVALID)
    })?;
    let diagnostics = validate_spec(&spec);
    for d in &diagnostics {
        eprintln!("{shown}: {d}");
    }
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(Fail(INVALID));
    }
    let mut tree = FaultTree::from_spec(&spec).map_err(|e| engine_fail(path, e))?;
    tree.source = Some(path.display().to_string());
    Ok(tree)
}

fn prepare(common: &Common) -> Result<(FaultTree, AnalysisConfig), Fail> {
    let tree = load(&common.input)?;
    let mut config = AnalysisConfig::from_tree(&tree);
    config.clamp = common.clamp;
    if let Some(p) = common.spread {
        let spread = if common.spread_override {
            Spread::custom(p)
        } else {
            Spread::standard(p)
        };
        config.spread = Some(spread.map_err(usage)?);
    } else if common.spread_override {
        eprintln!("error: --spread-override needs --spread");
        return Err(Fail(USAGE));
    }
    Ok((tree, config))
}

fn times_arg(times: &[f64]) -> Result<Vec<MissionTime>, Fail> {
    times
        .iter()
        .map(|&t| MissionTime::new(t))
        .collect::<Result<_, _>>()
        .map_err(usage)
}

fn mission_time(path: &Path, time: Option<f64>, tree: &FaultTree) -> Result<MissionTime, Fail> {
    match time {
        Some(t) => MissionTime::new(t).map_err(usage),
        None => tree.directives.importance_time.or(tree.directives.times.last().copied()).ok_or_else(|| {
            eprintln!("{}: error: no mission time; pass --time or add `directive importance_time=...`", path.display());
            Fail(USAGE)
        }),
    }
}

fn engine_fail(path: &Path, e: Error) -> Fail {
    let code = match &e {
        Error::Parse(_) | Error::Invalid(_) => INVALID,
        Error::Config(_) | Error::UnknownEvent(_) => USAGE,
        // Numeric failures, and internal ones that surface through numerics.
        _ => NUMERIC,
    };
    eprintln!("{}: error: {e}", path.display());
    if let Error::Invalid(ds) = &e {
        for d in ds {
            eprintln!("{}: {d}", path.display());
        }
    }
    if matches!(e, Error::Saturation { .. } | Error::Domain(_)) {
        eprintln!("hint: rerun with --clamp to saturate probabilities near 1");
    }
    Fail(code)
}

fn emit(
    common: &Common,
    csv: impl FnOnce() -> String,
    json: impl FnOnce() -> String,
) -> Result<(), Fail> {
    let text = match common.format {
        Format::Csv => csv(),
        Format::Json => json(),
    };
    match &common.output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("{}: error: {e}", path.display());
            Fail(IO)
        }),
    }
}
