use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use plateau_cli::{run, Emit, InputFormat, Mode, RunConfig};

/// Topological simplification of scalar fields on surfaces: produces the
/// closest function (in the sup norm, within `delta`) having the provably
/// minimum number of critical points.
#[derive(Parser, Debug)]
#[command(name = "simplify", version)]
struct Args {
    /// Input file: a PGM image or an ASCII OFF triangle mesh.
    #[arg(long)]
    input: PathBuf,

    /// Input format.
    #[arg(long, value_enum)]
    format: FormatArg,

    /// Simplification tolerance, in input-value units.
    #[arg(long)]
    delta: f64,

    /// Interpret --delta as a fraction of the input value range.
    #[arg(long)]
    delta_relative: bool,

    /// Which point of the solution polytope to emit.
    #[arg(long, value_enum, default_value_t = ModeArg::Mean)]
    mode: ModeArg,

    /// Gauss-Seidel sweeps for --mode smooth.
    #[arg(long, default_value_t = 25)]
    sweeps: usize,

    /// Artifacts to write, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [EmitArg::Field, EmitArg::Stats])]
    emit: Vec<EmitArg>,

    /// Output prefix; artifacts get suffixes like `.field.pgm`.
    #[arg(long)]
    out: PathBuf,

    /// Per-vertex scalar file for OFF input without a fourth column.
    #[arg(long)]
    values: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Pgm,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum ModeArg {
    Min,
    Max,
    Mean,
    Smooth,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum EmitArg {
    Field,
    Diagram,
    Critical,
    Gradient,
    Stats,
}

fn main() {
    let args = Args::parse();
    let config = RunConfig {
        input: args.input,
        format: match args.format {
            FormatArg::Pgm => InputFormat::Pgm,
            FormatArg::Off => InputFormat::Off,
        },
        delta: args.delta,
        delta_relative: args.delta_relative,
        mode: match args.mode {
            ModeArg::Min => Mode::Min,
            ModeArg::Max => Mode::Max,
            ModeArg::Mean => Mode::Mean,
            ModeArg::Smooth => Mode::Smooth,
        },
        sweeps: args.sweeps,
        emit: args
            .emit
            .iter()
            .map(|e| match e {
                EmitArg::Field => Emit::Field,
                EmitArg::Diagram => Emit::Diagram,
                EmitArg::Critical => Emit::Critical,
                EmitArg::Gradient => Emit::Gradient,
                EmitArg::Stats => Emit::Stats,
            })
            .collect(),
        out: args.out,
        values: args.values,
    };
    match run(&config) {
        Ok(summary) => {
            for (key, value) in &summary.stats {
                println!("{key}={value}");
            }
        }
        Err(e) => {
            eprintln!("simplify: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
