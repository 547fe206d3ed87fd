//! Full-reference quality metrics: MSE, SNR, PSNR and 2-D correlation.
//!
//! Accumulations use pairwise summation so results do not depend on pixel
//! traversal order. A perfect match reports `f64::INFINITY` for SNR and
//! PSNR; CSV output spells it `inf`.

use std::time::Instant;

use crate::bilinear::{resize, Scale, Scheme};
use crate::error::{Error, Result};
use crate::image::GrayImage;

const PEAK: f64 = 255.0;

/// Pairwise (tree) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let (lo, hi) = values.split_at(values.len() / 2);
        pairwise_sum(lo) + pairwise_sum(hi)
    }
}

fn sum_of(img_a: &GrayImage, img_b: &GrayImage, f: impl Fn(f64, f64) -> f64) -> f64 {
    let terms: Vec<f64> = img_a
        .pixels()
        .iter()
        .zip(img_b.pixels())
        .map(|(&a, &b)| f(f64::from(a), f64::from(b)))
        .collect();
    pairwise_sum(&terms)
}

fn squared_error(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    reference.same_dimensions(test)?;
    Ok(sum_of(reference, test, |a, b| (a - b) * (a - b)))
}

pub fn mse(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    Ok(squared_error(reference, test)? / reference.pixels().len() as f64)
}

/// `10·log10(255² / mse)`.
pub fn psnr(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    let m = mse(reference, test)?;
    Ok(if m == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / m).log10()
    })
}

/// `10·log10(Σ ref² / Σ (ref - test)²)`, anchored on the reference.
pub fn snr(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    let noise = squared_error(reference, test)?;
    let signal = sum_of(reference, reference, |a, _| a * a);
    if signal == 0.0 {
        return Err(Error::Domain(
            "SNR is undefined for an all-zero reference".into(),
        ));
    }
    Ok(if noise == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (signal / noise).log10()
    })
}

/// Pearson correlation of the two flattened pixel grids.
pub fn corr2(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    reference.same_dimensions(test)?;
    let n = reference.pixels().len() as f64;
    let mean_a = sum_of(reference, test, |a, _| a) / n;
    let mean_b = sum_of(reference, test, |_, b| b) / n;
    let cov = sum_of(reference, test, |a, b| (a - mean_a) * (b - mean_b));
    let var_a = sum_of(reference, test, |a, _| (a - mean_a) * (a - mean_a));
    let var_b = sum_of(reference, test, |_, b| (b - mean_b) * (b - mean_b));
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::Domain(
            "correlation is undefined for a constant image".into(),
        ));
    }
    Ok((cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
}

/// Metrics of one scheme at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub scheme: Scheme,
    pub scale: Scale,
    pub mse: f64,
    pub snr_db: f64,
    pub psnr_db: f64,
    pub corr2: f64,
    /// Not computed; reserved for a structural similarity metric.
    pub fsim: Option<f64>,
    pub seconds: f64,
}

/// Reports for several schemes against one reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub reports: Vec<MetricsReport>,
    /// Output pixels where BA_F and BA_R differ.
    pub disagreement_count: usize,
}

pub const CSV_HEADER: &str = "scheme,scale,mse,snr_db,psnr_db,corr2,seconds,disagreement_count";

/// Formats a metric value, writing infinities as `inf`.
pub fn format_metric(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

impl MetricsReport {
    pub fn csv_row(&self, disagreement_count: usize) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.scheme,
            self.scale,
            format_metric(self.mse),
            format_metric(self.snr_db),
            format_metric(self.psnr_db),
            format_metric(self.corr2),
            self.seconds,
            disagreement_count
        )
    }
}

/// Number of positions where two equally sized images differ.
pub fn disagreement_count(a: &GrayImage, b: &GrayImage) -> Result<usize> {
    a.same_dimensions(b)?;
    Ok(a.pixels()
        .iter()
        .zip(b.pixels())
        .filter(|(x, y)| x != y)
        .count())
}

/// Upscales `lowres` with each scheme and scores it against `reference`.
pub fn compare_schemes(
    reference: &GrayImage,
    lowres: &GrayImage,
    scale: Scale,
    schemes: &[Scheme],
) -> Result<Comparison> {
    let expected = (scale.apply(lowres.width()), scale.apply(lowres.height()));
    if reference.dimensions() != expected {
        return Err(Error::DimensionMismatch {
            left_w: reference.width(),
            left_h: reference.height(),
            right_w: expected.0,
            right_h: expected.1,
        });
    }
    let mut reports = Vec::with_capacity(schemes.len());
    for &scheme in schemes {
        let start = Instant::now();
        let test = resize(lowres, scale, scheme)?;
        let seconds = start.elapsed().as_secs_f64();
        reports.push(MetricsReport {
            scheme,
            scale,
            mse: mse(reference, &test)?,
            snr_db: snr(reference, &test)?,
            psnr_db: psnr(reference, &test)?,
            corr2: corr2(reference, &test)?,
            fsim: None,
            seconds,
        });
    }
    let floor = resize(lowres, scale, Scheme::Floor)?;
    let round = resize(lowres, scale, Scheme::Round)?;
    Ok(Comparison {
        reports,
        disagreement_count: disagreement_count(&floor, &round)?,
    })
}
