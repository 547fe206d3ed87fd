//! The benchmark pipeline: downsample a reference, upscale it back with
//! each scheme, score the result and time it. Also writes the rounding
//! conformance tables and round-off error profiles.

use std::fs;
use std::path::{Path, PathBuf};

use crate::bilinear::{elapsed_time, resize, Scale, Scheme, TimingStats};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::improved::{
    error_profiles_csv, improved_post_sum_readings, per_addend_error_profile,
    post_sum_error_profile, ErrorScheme, Perturbation, CANONICAL_DIVISORS, CANONICAL_NUMERATORS,
};
use crate::metrics::{compare_schemes, Comparison, CSV_HEADER};
use crate::raster::{self, RasterFormat, DOWNSAMPLER_NAME};
use crate::rounding::{
    conformance_table, RoundingMode, RowLabels, IEEE_TABLE_INPUTS, MAXFIELD_TABLE_INPUTS,
};

pub const TOOL_NAME: &str = "modfloor-bench";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub input: PathBuf,
    pub scales: Vec<u32>,
    pub schemes: Vec<Scheme>,
    pub l: Perturbation,
    pub repetitions: usize,
    pub out_dir: PathBuf,
}

impl BenchmarkConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        let l = Perturbation::DEFAULT;
        BenchmarkConfig {
            input: input.into(),
            scales: vec![2, 3, 4, 5],
            schemes: Scheme::all(l).to_vec(),
            l,
            repetitions: 10,
            out_dir: out_dir.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() || self.scales.iter().any(|&s| s < 2) {
            return Err(Error::Parameter(format!(
                "scales must all be at least 2, got {:?}",
                self.scales
            )));
        }
        if self.repetitions == 0 {
            return Err(Error::Parameter("repetitions must be at least 1".into()));
        }
        for s in &self.schemes {
            if let Scheme::Modulo(l) | Scheme::ModuloSwapped(l) = s {
                if *l != self.l {
                    return Err(Error::Parameter(format!(
                        "scheme {s} carries L={l}, config says L={}",
                        self.l
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Results of one scale: metric comparison plus timing per scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleRun {
    pub scale: u32,
    pub padded: bool,
    pub output_size: (usize, usize),
    pub comparison: Comparison,
    pub timings: Vec<(Scheme, TimingStats)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutcome {
    pub runs: Vec<ScaleRun>,
    pub metrics_csv: PathBuf,
    pub timing_csv: PathBuf,
}

impl BenchmarkOutcome {
    pub fn metric_rows(&self) -> usize {
        self.runs.iter().map(|r| r.comparison.reports.len()).sum()
    }
}

fn csv_preamble(l: Perturbation) -> String {
    format!(
        "# {TOOL_NAME} {TOOL_VERSION}\n# L={l}\n# downsampler={DOWNSAMPLER_NAME}\n\
         # mapping=source=dest/scale,no-half-pixel-offset,border=clamp,output=uint8-clamp\n"
    )
}

/// Runs every (scale, scheme) pair of `cfg` and writes `metrics.csv`,
/// `timing.csv` and the interpolated images into `cfg.out_dir`.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<BenchmarkOutcome> {
    cfg.validate()?;
    let input = raster::load(&cfg.input)?;
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;

    let mut runs = Vec::with_capacity(cfg.scales.len());
    for &s in &cfg.scales {
        runs.push(run_scale(&input, s, cfg)?);
    }

    let metrics_csv = cfg.out_dir.join("metrics.csv");
    write(&metrics_csv, &render_metrics(&input, &runs, cfg.l, true))?;
    let timing_csv = cfg.out_dir.join("timing.csv");
    write(&timing_csv, &render_timing(&runs, cfg.l))?;
    Ok(BenchmarkOutcome {
        runs,
        metrics_csv,
        timing_csv,
    })
}

fn run_scale(input: &GrayImage, s: u32, cfg: &BenchmarkConfig) -> Result<ScaleRun> {
    let factor = s as usize;
    let scale = Scale::integer(s)?;
    let lowres = raster::downsample(input, factor)?;
    let padded = raster::needs_padding(input, factor);
    let reference = input.pad_clamped(lowres.width() * factor, lowres.height() * factor)?;
    let mut comparison = compare_schemes(&reference, &lowres, scale, &cfg.schemes)?;

    let mut timings = Vec::with_capacity(cfg.schemes.len());
    for (report, &scheme) in comparison.reports.iter_mut().zip(&cfg.schemes) {
        let stats = elapsed_time(&lowres, scale, scheme, cfg.repetitions)?;
        report.seconds = stats.mean_seconds;
        timings.push((scheme, stats));
        let out = resize(&lowres, scale, scheme)?;
        raster::save(
            &out,
            cfg.out_dir.join(format!("x{s}_{scheme}.pgm")),
            RasterFormat::PgmBinary,
        )?;
    }
    Ok(ScaleRun {
        scale: s,
        padded,
        output_size: reference.dimensions(),
        comparison,
        timings,
    })
}

fn render_metrics(
    input: &GrayImage,
    runs: &[ScaleRun],
    l: Perturbation,
    with_timing: bool,
) -> String {
    let mut out = csv_preamble(l);
    for run in runs.iter().filter(|r| r.padded) {
        out.push_str(&format!(
            "# warning: input {}x{} is not divisible by {}; reference and low-res padded by edge replication\n",
            input.width(),
            input.height(),
            run.scale
        ));
    }
    let header = if with_timing {
        CSV_HEADER.to_string()
    } else {
        CSV_HEADER.replace(",seconds", "")
    };
    out.push_str(&header);
    out.push('\n');
    for run in runs {
        for report in &run.comparison.reports {
            let row = report.csv_row(run.comparison.disagreement_count);
            let row = if with_timing {
                row
            } else {
                drop_column(&row, SECONDS_COLUMN)
            };
            out.push_str(&row);
            out.push('\n');
        }
    }
    out
}

const SECONDS_COLUMN: usize = 6;

fn drop_column(line: &str, index: usize) -> String {
    line.split(',')
        .enumerate()
        .filter(|&(i, _)| i != index)
        .map(|(_, f)| f)
        .collect::<Vec<_>>()
        .join(",")
}

/// Removes the `seconds` column from a `metrics.csv` body, leaving comment
/// lines untouched. Two runs on the same input agree byte for byte afterwards.
pub fn strip_timing(metrics_csv: &str) -> String {
    metrics_csv
        .lines()
        .map(|l| {
            if l.starts_with('#') {
                l.to_string()
            } else {
                drop_column(l, SECONDS_COLUMN)
            }
        })
        .map(|l| l + "\n")
        .collect()
}

fn render_timing(runs: &[ScaleRun], l: Perturbation) -> String {
    let mut out = csv_preamble(l);
    out.push_str("scheme,resolution,mean_seconds,min_seconds,max_seconds,repetitions\n");
    for run in runs {
        let (w, h) = run.output_size;
        for (scheme, t) in &run.timings {
            out.push_str(&format!(
                "{scheme},{w}x{h},{},{},{},{}\n",
                t.mean_seconds, t.min_seconds, t.max_seconds, t.repetitions
            ));
        }
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `metrics.golden.csv`, the timing-free metrics used for regression checks.
pub fn write_goldens(cfg: &BenchmarkConfig, outcome: &BenchmarkOutcome) -> Result<PathBuf> {
    let input = raster::load(&cfg.input)?;
    let path = cfg.out_dir.join("metrics.golden.csv");
    write(&path, &render_metrics(&input, &outcome.runs, cfg.l, false))?;
    Ok(path)
}

/// Paths written by [`emit_tables`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFiles {
    pub table1: PathBuf,
    pub table2: PathBuf,
    pub fig2: PathBuf,
    pub fig3: PathBuf,
}

/// Writes the IEEE and Maxfield conformance tables and the round-off error
/// profiles of the canonical quotient vectors.
pub fn emit_tables(out_dir: &Path) -> Result<TableFiles> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let header = format!("# {TOOL_NAME} {TOOL_VERSION}\n");
    let files = TableFiles {
        table1: out_dir.join("table1.csv"),
        table2: out_dir.join("table2.csv"),
        fig2: out_dir.join("fig2_errors.csv"),
        fig3: out_dir.join("fig3_errors.csv"),
    };

    let t1 = conformance_table(&RoundingMode::IEEE_RULES, &IEEE_TABLE_INPUTS)?;
    write(
        &files.table1,
        &(header.clone() + &t1.to_csv(RowLabels::Names)),
    )?;
    let t2 = conformance_table(&RoundingMode::MAXFIELD_MODES, &MAXFIELD_TABLE_INPUTS)?;
    write(
        &files.table2,
        &(header.clone() + &t2.to_csv(RowLabels::Abbreviations)),
    )?;

    let (n, v) = (&CANONICAL_NUMERATORS[..], &CANONICAL_DIVISORS[..]);
    let fig2 = per_addend_error_profile(n, v, &ErrorScheme::STANDARD)?;
    write(&files.fig2, &(header.clone() + &error_profiles_csv(&fig2)))?;

    let fig3 = post_sum_error_profile(n, v, &ErrorScheme::STANDARD)?;
    let readings = improved_post_sum_readings(n, v)?;
    let note = format!(
        "# post-sum: exact_sum={} improved_literal={} improved_floor_of_exact_sum={}\n",
        readings.exact_sum, readings.literal, readings.floor_of_exact_sum
    );
    write(&files.fig3, &(header + &note + &error_profiles_csv(&fig3)))?;
    Ok(files)
}
