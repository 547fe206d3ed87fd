//! Bilinear upscaling of grayscale images with pluggable rounding.
//!
//! The crate compares the usual final-rounding choices (floor, round half
//! away from zero) against a modulo-based "improved floor" that folds each
//! addend's remainder back into the sum before a single floor. Around that
//! engine sit the scalar rounding modes it is measured against, a round-off
//! error analyzer, full-reference quality metrics, PGM/PNG I/O and the
//! benchmark pipeline behind the `modfloor-bench` binary.

pub mod bench;
pub mod bilinear;
pub mod error;
pub mod image;
pub mod improved;
pub mod metrics;
pub mod raster;
pub mod rounding;

pub use bilinear::{
    interpolate_exact, interpolate_pixel, resize, Neighborhood, Scale, Scheme, WeightVector,
};
pub use error::{Error, Result};
pub use image::GrayImage;
pub use improved::{DivisorSet, Perturbation};
pub use rounding::{apply_mode, RoundingMode};
