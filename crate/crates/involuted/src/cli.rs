//! The command-line surface: `run`, `verify`, `bench`, and `gen`.
//!
//! Exit codes: 0 success, 1 usage error, 2 input format error, 3 internal
//! consistency failure.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::{self, DiagramDocument, InputFormat, OutputFormat};
use crate::oracle;
use crate::pipeline::{boundary_of, compute_with, ComputeOptions, Mode, Persistence};
use crate::rips::{DistanceMatrix, RipsConfig};
use crate::{datasets, Error, PrimeField};

#[derive(Parser)]
#[command(
    name = "involuted",
    version,
    about = "Persistent homology of Vietoris-Rips filtrations with representative cycles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a persistence diagram (and, by default, representatives).
    Run(RunArgs),
    /// Cross-check the involuted pipeline against the dense oracle.
    Verify(VerifyArgs),
    /// Time the computation modes and report matrix column counts.
    Bench(BenchArgs),
    /// Generate built-in datasets.
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Involuted,
    Cohomology,
    HomologyOracle,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Involuted => Mode::Involuted,
            ModeArg::Cohomology => Mode::Cohomology,
            ModeArg::HomologyOracle => Mode::HomologyOracle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Svg,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Svg => OutputFormat::Svg,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormatArg {
    Auto,
    LowerDistance,
    PointCloud,
}

impl From<InputFormatArg> for InputFormat {
    fn from(f: InputFormatArg) -> InputFormat {
        match f {
            InputFormatArg::Auto => InputFormat::Auto,
            InputFormatArg::LowerDistance => InputFormat::LowerDistance,
            InputFormatArg::PointCloud => InputFormat::PointCloud,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Input file; omitted or '-' reads standard input.
    input: Option<PathBuf>,
    /// Input grammar; auto picks lower-distance when the entry count is
    /// triangular.
    #[arg(long, value_enum, default_value_t = InputFormatArg::Auto)]
    input_format: InputFormatArg,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Highest homology dimension to compute.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Rips scale bound; omitted computes the full filtration.
    #[arg(long)]
    threshold: Option<f64>,
    /// Coefficient field modulus (prime).
    #[arg(long, default_value_t = 2)]
    modulus: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Involuted)]
    mode: ModeArg,
    /// Attach representative cycles (involuted mode).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    representatives: bool,
    /// Suppress trivial intervals (equal birth and death diameter) from the
    /// output.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    skip_trivial: bool,
    /// Truncate restricted matrices past the last non-trivial death;
    /// suppressed trivial pairs lose their representatives.
    #[arg(long)]
    truncate: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write to a file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 2)]
    modulus: u32,
    /// Column cap for the dense oracle.
    #[arg(long, default_value_t = oracle::DEFAULT_MAX_COLUMNS)]
    cap: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset specs: gcycle:<n>, cube:<n>:<dim>:<seed>, circle:<n>:<seed>,
    /// annulus:<n>:<inner>:<outer>:<seed>, or file:<path>.
    #[arg(long = "dataset", required = true)]
    datasets: Vec<String>,
    /// Modes to time.
    #[arg(long = "mode", value_enum, default_values_t = [ModeArg::Cohomology, ModeArg::Involuted])]
    modes: Vec<ModeArg>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 2)]
    modulus: u32,
    #[arg(long, default_value_t = oracle::DEFAULT_MAX_COLUMNS)]
    oracle_cap: usize,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Subcommand)]
enum GenKind {
    /// Shortest-path metric of the cycle graph on n nodes (lower-distance
    /// output).
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Uniform points in the unit cube.
    Cube {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GenFormat::PointCloud)]
        format: GenFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Random points on the unit circle.
    Circle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GenFormat::PointCloud)]
        format: GenFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Uniform points in an annulus.
    Annulus {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.6)]
        inner: f64,
        #[arg(long, default_value_t = 1.0)]
        outer: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GenFormat::PointCloud)]
        format: GenFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenFormat {
    PointCloud,
    LowerDistance,
}

fn emit_points(points: &[Vec<f64>], format: GenFormat) -> Result<String, Error> {
    Ok(match format {
        GenFormat::PointCloud => io::emit_point_cloud(points),
        GenFormat::LowerDistance => {
            io::emit_lower_distance(&DistanceMatrix::from_points(points)?)
        }
    })
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Rips(_) | Error::Io(_) => 2,
        Error::Consistency(_) => 3,
        Error::Field(_) | Error::Simplex(_) | Error::OracleRefused(_) | Error::Usage(_) => 1,
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Verify(args) => verify(args),
        Command::Bench(args) => bench(args),
        Command::Gen(args) => gen(args),
    }
}

fn read_input(input: &InputArgs) -> Result<DistanceMatrix, Error> {
    let text = match &input.input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)?,
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    Ok(io::parse_input(&text, input.input_format.into())?)
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<(), Error> {
    let dm = read_input(&args.input)?;
    let cfg = RipsConfig {
        max_dim: args.dim,
        threshold: args.threshold,
        modulus: args.modulus,
    };
    let mode: Mode = args.mode.into();
    let options = ComputeOptions {
        mode,
        representatives: args.representatives,
        truncate: args.truncate,
        ..ComputeOptions::default()
    };
    let persistence = compute_with(&dm, &cfg, &options)?;
    let doc = DiagramDocument::from_persistence(&persistence, mode, args.skip_trivial);
    write_output(&args.output, &io::emit(&doc, args.format.into()))
}

fn verify(args: VerifyArgs) -> Result<(), Error> {
    let dm = read_input(&args.input)?;
    let cfg = RipsConfig {
        max_dim: args.dim,
        threshold: args.threshold,
        modulus: args.modulus,
    };
    let field = PrimeField::new(args.modulus)?;
    let involuted = compute_with(&dm, &cfg, &ComputeOptions::default())?;
    let oracle_out = oracle::full_reduce(&dm, &cfg, args.cap)?;
    let mut failures = 0usize;

    let check = |name: &str, ok: bool, failures: &mut usize| {
        if ok {
            println!("ok   {name}");
        } else {
            println!("FAIL {name}");
            *failures += 1;
        }
    };

    check(
        "diagram multisets agree (oracle vs involuted)",
        involuted.diagram_points() == oracle_out.persistence.diagram_points(),
        &mut failures,
    );
    let chains_equal = involuted.pairs.len() == oracle_out.persistence.pairs.len()
        && involuted
            .pairs
            .iter()
            .zip(&oracle_out.persistence.pairs)
            .all(|(a, b)| a.representative == b.representative);
    check(
        "representatives agree chain-for-chain",
        chains_equal,
        &mut failures,
    );

    let filt = &involuted.filtration;
    let mut cycles_ok = true;
    let mut births_ok = true;
    let mut spans_ok = true;
    for pair in &involuted.pairs {
        let Some(rep) = &pair.representative else {
            cycles_ok = false;
            continue;
        };
        cycles_ok &= !rep.is_empty() && boundary_of(rep, filt, field).is_empty();
        births_ok &= rep.pivot().map(|(r, _)| r) == Some(pair.birth.position);
        if let Some(death) = pair.death {
            // death.position >= 1 always: the birth simplex precedes it.
            let at_death =
                oracle::in_boundary_span(rep, pair.dim, death.position, filt, field, args.cap)?;
            let just_before =
                oracle::in_boundary_span(rep, pair.dim, death.position - 1, filt, field, args.cap)?;
            spans_ok &= at_death && !just_before;
        }
    }
    check("representatives are nonzero cycles", cycles_ok, &mut failures);
    check(
        "representatives attain their birth position",
        births_ok,
        &mut failures,
    );
    check(
        "span membership flips exactly at the death",
        spans_ok,
        &mut failures,
    );

    if failures > 0 {
        return Err(Error::Consistency(format!(
            "{failures} verification check(s) failed"
        )));
    }
    println!("all checks passed");
    Ok(())
}

struct ColumnCounts {
    coboundary: usize,
    boundary: usize,
    restricted: usize,
}

fn column_counts(p: &Persistence) -> ColumnCounts {
    let filt = &p.filtration;
    let coboundary = (0..=p.max_dim).map(|k| filt.simplex_count(k)).sum();
    let boundary = (1..=p.max_dim + 1).map(|k| filt.simplex_count(k)).sum();
    ColumnCounts {
        coboundary,
        boundary,
        restricted: p.restricted_column_count(),
    }
}

fn load_dataset(spec: &str) -> Result<(String, DistanceMatrix), Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let usage = || Error::Usage(format!("bad dataset spec {spec:?}"));
    let parse_n = |s: &str| s.parse::<usize>().map_err(|_| usage());
    let parse_u = |s: &str| s.parse::<u64>().map_err(|_| usage());
    let parse_f = |s: &str| s.parse::<f64>().map_err(|_| usage());
    let dm = match parts.as_slice() {
        ["gcycle", n] => datasets::cycle_graph_metric(parse_n(n)?),
        ["cube", n, dim, seed] => DistanceMatrix::from_points(&datasets::uniform_cube(
            parse_n(n)?,
            parse_n(dim)?,
            parse_u(seed)?,
        ))?,
        ["circle", n, seed] => {
            DistanceMatrix::from_points(&datasets::circle_sample(parse_n(n)?, parse_u(seed)?))?
        }
        ["annulus", n, inner, outer, seed] => DistanceMatrix::from_points(
            &datasets::annulus_sample(parse_n(n)?, parse_f(inner)?, parse_f(outer)?, parse_u(seed)?),
        )?,
        ["file", path] => {
            let text = std::fs::read_to_string(path)?;
            io::parse_input(&text, InputFormat::Auto)?
        }
        _ => return Err(usage()),
    };
    Ok((spec.to_string(), dm))
}

fn bench(args: BenchArgs) -> Result<(), Error> {
    let cfg_base = RipsConfig {
        max_dim: args.dim,
        threshold: args.threshold,
        modulus: args.modulus,
    };
    let mut modes: Vec<ModeArg> = Vec::new();
    for m in args.modes {
        if !modes.contains(&m) {
            modes.push(m);
        }
    }
    println!(
        "{:<28} {:<16} {:>6} {:>12} {:>10} {:>10} {:>10}",
        "dataset", "mode", "n", "time_ms", "m_d", "m_bd", "m_D"
    );
    for spec in &args.datasets {
        let (name, dm) = match load_dataset(spec) {
            Ok(pair) => pair,
            Err(Error::Io(e)) => {
                eprintln!("skipping {spec}: {e}");
                continue;
            }
            Err(e) => return Err(e),
        };
        for &mode in &modes {
            let options = ComputeOptions {
                mode: mode.into(),
                oracle_max_columns: args.oracle_cap,
                ..ComputeOptions::default()
            };
            let start = Instant::now();
            let result = compute_with(&dm, &cfg_base, &options);
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            match result {
                Ok(p) => {
                    let counts = column_counts(&p);
                    println!(
                        "{:<28} {:<16} {:>6} {:>12.3} {:>10} {:>10} {:>10}",
                        name,
                        Mode::from(mode).as_str(),
                        dm.len(),
                        elapsed,
                        counts.coboundary,
                        counts.boundary,
                        counts.restricted
                    );
                }
                Err(Error::OracleRefused(msg)) => {
                    eprintln!("skipping {name} ({}): {msg}", Mode::from(mode).as_str());
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<(), Error> {
    let (content, output) = match args.kind {
        GenKind::Cycle { n, output } => {
            let dm = datasets::cycle_graph_metric(n);
            (io::emit_lower_distance(&dm), output)
        }
        GenKind::Cube {
            n,
            dim,
            seed,
            format,
            output,
        } => (emit_points(&datasets::uniform_cube(n, dim, seed), format)?, output),
        GenKind::Circle {
            n,
            seed,
            format,
            output,
        } => (emit_points(&datasets::circle_sample(n, seed), format)?, output),
        GenKind::Annulus {
            n,
            inner,
            outer,
            seed,
            format,
            output,
        } => {
            if !(0.0 <= inner && inner < outer) {
                return Err(Error::Usage("need 0 <= inner < outer".to_string()));
            }
            (
                emit_points(&datasets::annulus_sample(n, inner, outer, seed), format)?,
                output,
            )
        }
    };
    write_output(&output, &content)
}
