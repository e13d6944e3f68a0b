//! Orchestration for the `simplify` binary: load a scalar field, cap the
//! surface, compute persistence, build the simplified function, and emit
//! the requested artifacts.

pub mod error;
pub mod formats;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use plateau::complex::{CellComplex, CellId};
use plateau::function::CellFunction;
use plateau::morse::{build_total_order, extend_from_top_cells, extend_from_vertices, GradientField};
use plateau::persistence::{all_persistence_pairs, DimPair, PersistenceRecord};
use plateau::simplify::{
    construct_bounds, extract_gradient_field, smooth_within_polytope, symmetrize,
};

pub use error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Pgm,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Min,
    Max,
    Mean,
    Smooth,
}

impl Mode {
    fn name(&self) -> &'static str {
        match self {
            Mode::Min => "min",
            Mode::Max => "max",
            Mode::Mean => "mean",
            Mode::Smooth => "smooth",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Field,
    Diagram,
    Critical,
    Gradient,
    Stats,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    pub delta: f64,
    pub delta_relative: bool,
    pub mode: Mode,
    pub sweeps: usize,
    pub emit: Vec<Emit>,
    pub out: PathBuf,
    pub values: Option<PathBuf>,
}

/// Counters and file list reported back to the caller; the same numbers
/// go into the stats artifact.
#[derive(Clone, Debug, Default)]
pub struct RunSummary {
    pub critical_by_dim: [usize; 3],
    pub surviving: usize,
    pub canceled: usize,
    pub outputs: Vec<PathBuf>,
    pub stats: Vec<(String, String)>,
}

enum InputKind {
    Pgm { rows: usize, cols: usize, maxval: u32 },
    Off,
}

pub fn run(config: &RunConfig) -> Result<RunSummary> {
    if !config.delta.is_finite() || config.delta < 0.0 {
        return Err(CliError::Parse(format!(
            "delta must be finite and nonnegative, got {}",
            config.delta
        )));
    }
    let total_start = Instant::now();
    let mut stats: Vec<(String, String)> = Vec::new();
    let mut outputs = Vec::new();

    let parse_start = Instant::now();
    let (complex, f, input_range, kind) = match config.format {
        InputFormat::Pgm => {
            let image = formats::read_pgm(&config.input)?;
            let complex = CellComplex::from_pixel_grid(image.rows, image.cols)?;
            let f = extend_from_top_cells(&complex, &image.values)?;
            let range = value_range(&image.values);
            let kind = InputKind::Pgm {
                rows: image.rows,
                cols: image.cols,
                maxval: image.maxval,
            };
            (complex, f, range, kind)
        }
        InputFormat::Off => {
            let mesh = formats::read_off(&config.input)?;
            let scalars = match &config.values {
                Some(path) => formats::read_values(path, mesh.vertex_count)?,
                None => mesh.scalars.clone().ok_or_else(|| {
                    CliError::Parse(
                        "OFF file has no scalar column; supply one with --values".into(),
                    )
                })?,
            };
            let complex = CellComplex::from_triangle_mesh(mesh.vertex_count, &mesh.triangles)?;
            let f = extend_from_vertices(&complex, &scalars)?;
            let range = value_range(&scalars);
            (complex, f, range, InputKind::Off)
        }
    };
    let time_parse = parse_start.elapsed();

    let report = complex.validate_surface();
    if !report.manifold {
        let detail = report
            .issues
            .first()
            .map(|i| i.to_string())
            .unwrap_or_else(|| "unspecified defect".into());
        return Err(CliError::NonManifold(detail));
    }

    let cap_start = Instant::now();
    let uncapped_cells = complex.len();
    let (complex, f) = complex.cap_boundary(f)?;
    let time_cap = cap_start.elapsed();

    let delta = if config.delta_relative {
        config.delta * input_range
    } else {
        config.delta
    };

    let order_start = Instant::now();
    let empty = GradientField::empty(complex.len());
    let order = build_total_order(&complex, &f, &empty)?;
    let time_order = order_start.elapsed();

    let persistence_start = Instant::now();
    let two_delta = 2.0 * delta;
    let (records, primal, dual) = all_persistence_pairs(&complex, &f, &order, two_delta)?;
    let time_persistence = persistence_start.elapsed();

    let extract_start = Instant::now();
    let v_delta = extract_gradient_field(&primal, &dual, &complex)?;
    let time_extract = extract_start.elapsed();

    let construct_start = Instant::now();
    let (f_min, f_max) = construct_bounds(&complex, &f, &v_delta, delta)?;
    let f_mean = symmetrize(&f_min, &f_max);
    let time_construct = construct_start.elapsed();

    let smooth_start = Instant::now();
    let field_out = match config.mode {
        Mode::Min => f_min.clone(),
        Mode::Max => f_max.clone(),
        Mode::Mean => f_mean.clone(),
        Mode::Smooth => {
            smooth_within_polytope(&complex, &f, &f_min, &f_max, &v_delta, config.sweeps)?
        }
    };
    let time_smooth = smooth_start.elapsed();

    let emit_start = Instant::now();
    let mut quantization_error = None;
    if config.emit.contains(&Emit::Field) {
        match kind {
            InputKind::Pgm { rows, cols, maxval } => {
                let pixels: Vec<f64> = complex
                    .cells_of_dim(2)
                    .filter(|c| !complex.is_virtual(*c))
                    .map(|c| field_out.value(c))
                    .collect();
                let (bytes, scale) = formats::encode_pgm(rows, cols, maxval, &pixels);
                let path = artifact(&config.out, "field.pgm");
                std::fs::write(&path, bytes)?;
                outputs.push(path);
                let meta = format!(
                    "offset={}\nscale={}\nmaxval={maxval}\nmax_quantization_error={}\n",
                    formats::format_value(scale.offset),
                    formats::format_value(scale.scale),
                    formats::format_value(scale.max_error),
                );
                let path = artifact(&config.out, "field.meta");
                std::fs::write(&path, meta)?;
                outputs.push(path);
                quantization_error = Some(scale.max_error);
            }
            InputKind::Off => {
                let mut text = String::new();
                for c in complex.cells_of_dim(0) {
                    let _ = writeln!(text, "{}", formats::format_value(field_out.value(c)));
                }
                let path = artifact(&config.out, "field.tsv");
                std::fs::write(&path, text)?;
                outputs.push(path);
            }
        }
    }
    if config.emit.contains(&Emit::Diagram) {
        let path = artifact(&config.out, "diagram.tsv");
        std::fs::write(&path, formats::diagram_tsv(&records))?;
        outputs.push(path);
    }
    let critical = v_delta.critical_cells(&complex);
    if config.emit.contains(&Emit::Critical) {
        let mut text = String::from("dim\tcell\tvalue\n");
        let mut rows: Vec<(u8, CellId)> = critical
            .iter()
            .filter(|(c, _)| !complex.is_virtual(*c))
            .map(|(c, d)| (*d, *c))
            .collect();
        rows.sort();
        for (d, c) in rows {
            let _ = writeln!(
                text,
                "{d}\t{c}\t{}",
                formats::format_value(field_out.value(c))
            );
        }
        let path = artifact(&config.out, "critical.tsv");
        std::fs::write(&path, text)?;
        outputs.push(path);
    }
    if config.emit.contains(&Emit::Gradient) {
        let mut buffer = Vec::new();
        v_delta.write_pairs(&complex, &mut buffer)?;
        let path = artifact(&config.out, "gradient.tsv");
        std::fs::write(&path, buffer)?;
        outputs.push(path);
    }
    let time_emit = emit_start.elapsed();

    let mut summary = RunSummary {
        outputs,
        ..Default::default()
    };
    for (c, d) in &critical {
        if !complex.is_virtual(*c) {
            summary.critical_by_dim[*d as usize] += 1;
        }
    }
    let mut counts = RecordCounts::default();
    for r in &records {
        counts.add(r, two_delta);
    }
    summary.surviving = counts.surviving;
    summary.canceled = counts.canceled;

    let [c0, c1, c2] = complex.counts();
    let mut push = |k: &str, v: String| stats.push((k.to_string(), v));
    push("input", config.input.display().to_string());
    push("cells", complex.len().to_string());
    push("cells_dim0", c0.to_string());
    push("cells_dim1", c1.to_string());
    push("cells_dim2", c2.to_string());
    push("cells_before_capping", uncapped_cells.to_string());
    push("virtual_cells", complex.virtual_cells().len().to_string());
    push("delta", formats::format_value(delta));
    push("mode", config.mode.name().to_string());
    if config.mode == Mode::Smooth {
        push("sweeps", config.sweeps.to_string());
    }
    push("pairs_01", counts.pairs01.to_string());
    push("pairs_12", counts.pairs12.to_string());
    push("essential_0", counts.essential[0].to_string());
    push("essential_1", counts.essential[1].to_string());
    push("essential_2", counts.essential[2].to_string());
    push("surviving", counts.surviving.to_string());
    push("canceled", counts.canceled.to_string());
    push("critical_cells", critical.len().to_string());
    push("minima", summary.critical_by_dim[0].to_string());
    push("saddles", summary.critical_by_dim[1].to_string());
    push("maxima", summary.critical_by_dim[2].to_string());
    if let Some(e) = quantization_error {
        push("max_quantization_error", formats::format_value(e));
    }
    let secs = |d: std::time::Duration| format!("{:.6}", d.as_secs_f64());
    push("time_parse_s", secs(time_parse));
    push("time_cap_s", secs(time_cap));
    push("time_order_s", secs(time_order));
    push("time_persistence_s", secs(time_persistence));
    push("time_extract_s", secs(time_extract));
    push("time_construct_s", secs(time_construct));
    push("time_smooth_s", secs(time_smooth));
    push("time_emit_s", secs(time_emit));
    push("time_total_s", secs(total_start.elapsed()));

    if config.emit.contains(&Emit::Stats) {
        let mut text = String::new();
        for (k, v) in &stats {
            let _ = writeln!(text, "{k}={v}");
        }
        let path = artifact(&config.out, "stats.txt");
        std::fs::write(&path, text)?;
        summary.outputs.push(path);
    }
    summary.stats = stats;
    Ok(summary)
}

fn artifact(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    if !name.is_empty() {
        name.push(".");
    }
    name.push(suffix);
    prefix.with_file_name(name)
}

fn value_range(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        hi - lo
    } else {
        0.0
    }
}

#[derive(Default)]
struct RecordCounts {
    pairs01: usize,
    pairs12: usize,
    essential: [usize; 3],
    surviving: usize,
    canceled: usize,
}

impl RecordCounts {
    fn add(&mut self, r: &PersistenceRecord, two_delta: f64) {
        match r.dim_pair {
            DimPair::ZeroOne => self.pairs01 += 1,
            DimPair::OneTwo => self.pairs12 += 1,
            DimPair::Essential(d) => self.essential[d as usize] += 1,
        }
        if r.is_essential() || r.persistence() > two_delta {
            self.surviving += 1;
        } else {
            self.canceled += 1;
        }
    }
}

/// Extends a raw `CellFunction` helper for tests.
pub fn field_on_pixels(complex: &CellComplex, g: &CellFunction) -> Vec<f64> {
    complex
        .cells_of_dim(2)
        .filter(|c| !complex.is_virtual(*c))
        .map(|c| g.value(c))
        .collect()
}
