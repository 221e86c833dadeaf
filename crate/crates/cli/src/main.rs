//! `qmsets`: run quantum-mechanics-over-sets experiments described in a
//! small text or JSON document.

mod commands;
mod spec;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qmsets::SlitMode;

use commands::{DensityArgs, MeasureArgs, TwoSlitArgs};
use spec::{Experiment, ExperimentSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Ascii,
}

#[derive(Debug, Parser)]
#[command(name = "qmsets", version, about = "Quantum mechanics over sets: exact experiments on finite universes")]
struct Cli {
    /// Output format (default: csv for ket-table, json otherwise)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SpecArg {
    /// Experiment document (text format, or JSON if it starts with `{`)
    spec: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ModeArg {
    /// Detect which slit the particle passes
    #[arg(long)]
    measured: bool,
    /// Leave the slits unobserved
    #[arg(long)]
    unmeasured: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Express every subset in each declared basis
    KetTable(SpecArg),
    /// Measure a sequence of attributes on a state
    Measure {
        #[command(flatten)]
        spec: SpecArg,
        /// Attribute name; repeat for a sequence
        #[arg(long = "attribute", value_name = "NAME")]
        attributes: Vec<String>,
        /// Prepared state, e.g. `{a,b,c}`
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Two-slit experiment with or without detection at the slits
    TwoSlit {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        mode: ModeArg,
        /// Superposition of slit positions, e.g. `{a,c}`
        #[arg(long)]
        slits: Option<String>,
        /// Monte-Carlo trials; 0 prints the exact distribution only
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Periods from the slits to the wall
        #[arg(long)]
        periods: Option<u32>,
    },
    /// Density matrix of a partition, a block, or a measured state
    Density {
        #[command(flatten)]
        spec: SpecArg,
        /// Partition name, literal `{{a},{b,c}}`, `discrete` or `indiscrete`
        #[arg(long)]
        partition: Option<String>,
        /// Single block, e.g. `{a,b}`
        #[arg(long)]
        block: Option<String>,
        /// State to measure with --attribute
        #[arg(long, requires = "attribute")]
        state: Option<String>,
        /// Attribute measured on --state
        #[arg(long)]
        attribute: Option<String>,
    },
    /// Every partition with its distinctions and logical entropy
    Partitions(SpecArg),
    /// Orbits of the dynamics on nonzero subsets
    Orbits(SpecArg),
}

fn load(path: &PathBuf) -> Result<Experiment> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let spec = ExperimentSpec::parse(&text).with_context(|| format!("in {}", path.display()))?;
    Experiment::resolve(spec).with_context(|| format!("in {}", path.display()))
}

fn run(cli: Cli) -> Result<String> {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::KetTable(s) => commands::ket_table_cmd(&load(&s.spec)?, fmt(Format::Csv)),
        Command::Measure { spec, attributes, state, seed } => commands::measure_cmd(
            &load(&spec.spec)?,
            MeasureArgs { attributes, state: state.as_deref(), seed: *seed },
            fmt(Format::Json),
        ),
        Command::TwoSlit { spec, mode, slits, trials, seed, periods } => commands::two_slit_cmd(
            &load(&spec.spec)?,
            TwoSlitArgs {
                mode: if mode.measured { SlitMode::Measured } else { SlitMode::Unmeasured },
                slits: slits.as_deref(),
                trials: *trials,
                seed: *seed,
                periods: *periods,
            },
            fmt(Format::Json),
        ),
        Command::Density { spec, partition, block, state, attribute } => commands::density_cmd(
            &load(&spec.spec)?,
            DensityArgs {
                partition: partition.as_deref(),
                block: block.as_deref(),
                state: state.as_deref(),
                attribute: attribute.as_deref(),
            },
            fmt(Format::Json),
        ),
        Command::Partitions(s) => commands::partitions_cmd(&load(&s.spec)?, fmt(Format::Json)),
        Command::Orbits(s) => commands::orbits_cmd(&load(&s.spec)?, fmt(Format::Json)),
    }
}

/// 2 for well-formed input the mathematics rejects, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    use qmsets::Error as E;
    let domain = err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<E>(),
            Some(
                E::SingularMatrix
                    | E::DependentBasis { .. }
                    | E::EmptyState
                    | E::EmptyBlock
                    | E::NotInSpectrum { .. }
                    | E::NotCsca
                    | E::InvalidPartition(_)
                    | E::TooLargeFor { .. }
                    | E::UniverseTooLarge(_)
                    | E::BadDistribution
            )
        )
    });
    if domain {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.out.clone();
    let result = run(cli).and_then(|text| match out {
        Some(path) => fs::write(&path, text).with_context(|| format!("cannot write {}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("cannot write to stdout"),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
