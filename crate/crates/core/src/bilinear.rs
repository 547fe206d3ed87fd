//! Bilinear upscaling with a pluggable final rounding step.
//!
//! Destination pixel `(r', c')` samples the source at `r'/scale`,
//! `c'/scale` with no half-pixel offset: the integer part selects the base
//! pixel `I(r, c)` and the fractional part gives `Δr`, `Δc`. Neighbours past
//! the last row or column are clamped to it. At scale 2 this puts every
//! offset in `{0, 0.5}`.
//!
//! The four neighbours follow the `(row, column)` convention
//! `N1 = I(r, c)`, `N2 = I(r+1, c)`, `N3 = I(r, c+1)`, `N4 = I(r+1, c+1)`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::improved::{
    improved_floor_sum, improved_floor_sum_swapped, make_divisors, Perturbation,
};

/// The four source intensities around a sample point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Neighborhood {
    pub n1: u8,
    pub n2: u8,
    pub n3: u8,
    pub n4: u8,
}

impl Neighborhood {
    pub fn as_array(&self) -> [u8; 4] {
        [self.n1, self.n2, self.n3, self.n4]
    }

    pub fn numerators(&self) -> [u32; 4] {
        self.as_array().map(u32::from)
    }

    pub fn min(&self) -> u8 {
        self.n1.min(self.n2).min(self.n3).min(self.n4)
    }

    pub fn max(&self) -> u8 {
        self.n1.max(self.n2).max(self.n3).max(self.n4)
    }
}

impl From<[u8; 4]> for Neighborhood {
    fn from([n1, n2, n3, n4]: [u8; 4]) -> Self {
        Neighborhood { n1, n2, n3, n4 }
    }
}

/// Bilinear weights `W1..W4` for the offsets `(Δr, Δc)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
}

impl WeightVector {
    pub fn as_array(&self) -> [f64; 4] {
        [self.w1, self.w2, self.w3, self.w4]
    }

    pub fn sum(&self) -> f64 {
        self.w1 + self.w2 + self.w3 + self.w4
    }

    fn from_offsets(dr: f64, dc: f64) -> Self {
        WeightVector {
            w1: (1.0 - dr) * (1.0 - dc),
            w2: dr * (1.0 - dc),
            w3: (1.0 - dr) * dc,
            w4: dr * dc,
        }
    }
}

/// Weights for fractional offsets in `[0, 1)`.
pub fn weights(dr: f64, dc: f64) -> Result<WeightVector> {
    let ok = |x: f64| (0.0..1.0).contains(&x);
    if !ok(dr) || !ok(dc) {
        return Err(Error::Parameter(format!(
            "offsets must lie in [0, 1), got ({dr}, {dc})"
        )));
    }
    Ok(WeightVector::from_offsets(dr, dc))
}

/// Like [`weights`] but also accepts offsets of exactly 1, i.e. samples that
/// sit on the far edge of the cell.
pub fn weights_closed(dr: f64, dc: f64) -> Result<WeightVector> {
    let ok = |x: f64| (0.0..=1.0).contains(&x);
    if !ok(dr) || !ok(dc) {
        return Err(Error::Parameter(format!(
            "offsets must lie in [0, 1], got ({dr}, {dc})"
        )));
    }
    Ok(WeightVector::from_offsets(dr, dc))
}

/// `N1·W1 + N2·W2 + N3·W3 + N4·W4`, unrounded.
pub fn interpolate_exact(nb: &Neighborhood, w: &WeightVector) -> f64 {
    f64::from(nb.n1) * w.w1
        + f64::from(nb.n2) * w.w2
        + f64::from(nb.n3) * w.w3
        + f64::from(nb.n4) * w.w4
}

/// Final rounding strategy of the interpolator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// BA_F: floor of the bilinear sum.
    Floor,
    /// BA_R: round half away from zero.
    Round,
    /// BA_M: improved floor over the four reciprocal-weight addends.
    Modulo(Perturbation),
    /// BA_M with the main quotients of `N3` and `N4` using each other's divisor.
    ModuloSwapped(Perturbation),
}

impl Scheme {
    pub const NAMES: [&'static str; 4] = ["ba_f", "ba_r", "ba_m", "ba_m_swap"];

    /// All four schemes, modulo variants using `l`.
    pub fn all(l: Perturbation) -> [Scheme; 4] {
        [
            Scheme::Floor,
            Scheme::Round,
            Scheme::Modulo(l),
            Scheme::ModuloSwapped(l),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Floor => "ba_f",
            Scheme::Round => "ba_r",
            Scheme::Modulo(_) => "ba_m",
            Scheme::ModuloSwapped(_) => "ba_m_swap",
        }
    }

    /// Parses a scheme name, attaching `l` to the modulo variants.
    pub fn parse_with(name: &str, l: Perturbation) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "ba_f" => Ok(Scheme::Floor),
            "ba_r" => Ok(Scheme::Round),
            "ba_m" => Ok(Scheme::Modulo(l)),
            "ba_m_swap" => Ok(Scheme::ModuloSwapped(l)),
            other => Err(Error::Parameter(format!(
                "unknown scheme `{other}` (expected one of {})",
                Scheme::NAMES.join(", ")
            ))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    /// Modulo variants get the default `L`.
    fn from_str(s: &str) -> Result<Self> {
        Scheme::parse_with(s, Perturbation::DEFAULT)
    }
}

/// The scheme's integer output before clamping to `[0, 255]`.
pub fn interpolate_unclamped(nb: &Neighborhood, w: &WeightVector, scheme: Scheme) -> i64 {
    match scheme {
        Scheme::Floor => interpolate_exact(nb, w).floor() as i64,
        // f64::round ties away from zero.
        Scheme::Round => interpolate_exact(nb, w).round() as i64,
        Scheme::Modulo(l) => {
            let d = make_divisors(w, l).expect("bilinear weights are finite and non-negative");
            improved_floor_sum(&nb.numerators(), &d.as_array()).expect("four positive divisors")
        }
        Scheme::ModuloSwapped(l) => {
            let d = make_divisors(w, l).expect("bilinear weights are finite and non-negative");
            improved_floor_sum_swapped(nb, &d).expect("four positive divisors")
        }
    }
}

/// One output intensity: the scheme's rounding, then an 8-bit clamp.
pub fn interpolate_pixel(nb: &Neighborhood, w: &WeightVector, scheme: Scheme) -> u8 {
    interpolate_unclamped(nb, w, scheme).clamp(0, 255) as u8
}

/// A positive rational scale factor `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scale {
    num: u32,
    den: u32,
}

impl Scale {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::Parameter(format!(
                "scale {num}/{den} must be positive"
            )));
        }
        let g = gcd(num, den);
        Ok(Scale {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(factor: u32) -> Result<Self> {
        Self::new(factor, 1)
    }

    pub fn numerator(&self) -> u32 {
        self.num
    }

    pub fn denominator(&self) -> u32 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }

    /// `floor(scale · len)`
    pub fn apply(&self, len: usize) -> usize {
        (len as u128 * u128::from(self.num) / u128::from(self.den)) as usize
    }

    /// Source base index and fractional offset for destination index `dst`.
    pub fn locate(&self, dst: usize) -> (usize, f64) {
        let t = dst as u128 * u128::from(self.den);
        let num = u128::from(self.num);
        ((t / num) as usize, (t % num) as f64 / f64::from(self.num))
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Base coordinates and fractional offsets of one destination pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceLocus {
    pub r: usize,
    pub c: usize,
    pub dr: f64,
    pub dc: f64,
}

impl SourceLocus {
    pub fn neighborhood(&self, img: &GrayImage) -> Neighborhood {
        Neighborhood {
            n1: img.get_clamped(self.r, self.c),
            n2: img.get_clamped(self.r + 1, self.c),
            n3: img.get_clamped(self.r, self.c + 1),
            n4: img.get_clamped(self.r + 1, self.c + 1),
        }
    }
}

pub fn source_locus(dst_row: usize, dst_col: usize, scale: Scale) -> SourceLocus {
    let (r, dr) = scale.locate(dst_row);
    let (c, dc) = scale.locate(dst_col);
    SourceLocus { r, c, dr, dc }
}

/// Upscales `img` by `scale` (at least 1) with the given rounding scheme.
pub fn resize(img: &GrayImage, scale: Scale, scheme: Scheme) -> Result<GrayImage> {
    if scale.num < scale.den {
        return Err(Error::Parameter(format!(
            "resize only upscales; scale {scale} is below 1 (use raster::downsample)"
        )));
    }
    let out_w = scale.apply(img.width());
    let out_h = scale.apply(img.height());
    let cols: Vec<(usize, f64)> = (0..out_w).map(|c| scale.locate(c)).collect();
    let mut pixels = Vec::with_capacity(out_w * out_h);
    for dst_r in 0..out_h {
        let (r, dr) = scale.locate(dst_r);
        for &(c, dc) in &cols {
            let locus = SourceLocus { r, c, dr, dc };
            let w = WeightVector::from_offsets(dr, dc);
            pixels.push(interpolate_pixel(&locus.neighborhood(img), &w, scheme));
        }
    }
    GrayImage::new(out_w, out_h, pixels)
}

/// Wall-clock statistics of repeated [`resize`] calls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingStats {
    pub mean_seconds: f64,
    pub min_seconds: f64,
    pub max_seconds: f64,
    pub repetitions: usize,
}

/// Times `repetitions` sequential resizes; I/O is not included.
pub fn elapsed_time(
    img: &GrayImage,
    scale: Scale,
    scheme: Scheme,
    repetitions: usize,
) -> Result<TimingStats> {
    if repetitions == 0 {
        return Err(Error::Parameter("repetitions must be at least 1".into()));
    }
    let mut samples = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        let out = resize(img, scale, scheme)?;
        let secs = start.elapsed().as_secs_f64();
        std::hint::black_box(out);
        // Instant can report zero on coarse clocks; keep samples positive.
        samples.push(secs.max(f64::MIN_POSITIVE));
    }
    Ok(TimingStats {
        mean_seconds: samples.iter().sum::<f64>() / repetitions as f64,
        min_seconds: samples.iter().copied().fold(f64::INFINITY, f64::min),
        max_seconds: samples.iter().copied().fold(0.0, f64::max),
        repetitions,
    })
}
