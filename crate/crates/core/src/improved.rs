//! Modulo-based "improved floor" rounding for sums of quotients.
//!
//! A bilinear sample `Σ N·W` is rewritten as `Σ N / V` with `V = 1/(W + L)`.
//! Each addend is replaced by `(N + N mod V) / V` and the sum is floored.
//! Writing `N / V = k + f` (`k` integer, `0 <= f < 1`) gives
//! `N mod V = V·f`, so the transformed addend is `k + 2f`: flooring it rounds
//! the addend half-up, and flooring the whole sum lets the fractional parts
//! accumulate before the single final rounding.
//!
//! `L > 0` keeps `1/(W + L)` finite when a weight is zero. It biases every
//! quotient upward by `N·L`, which the final floor absorbs.

use std::fmt;

use crate::bilinear::{Neighborhood, WeightVector};
use crate::error::{Error, Result};
use crate::rounding::{apply_mode, real_mod, RoundingMode};

/// The perturbation `L` added to each weight before taking its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Perturbation(f64);

impl Perturbation {
    pub const DEFAULT: Perturbation = Perturbation(1e-9);

    pub fn new(l: f64) -> Result<Self> {
        if l.is_finite() && l > 0.0 {
            Ok(Perturbation(l))
        } else {
            Err(Error::Parameter(format!(
                "L must be a finite positive number, got {l}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation::DEFAULT
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0)
    }
}

/// Per-addend divisors `A, B, C, D` for one neighborhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisorSet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub l: Perturbation,
}

impl DivisorSet {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Builds `A..D = 1/(W1..W4 + L)`.
pub fn make_divisors(w: &WeightVector, l: Perturbation) -> Result<DivisorSet> {
    let ws = w.as_array();
    if let Some(bad) = ws.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::Parameter(format!(
            "weights must be finite and non-negative, got {bad}"
        )));
    }
    let inv = |x: f64| 1.0 / (x + l.get());
    Ok(DivisorSet {
        a: inv(ws[0]),
        b: inv(ws[1]),
        c: inv(ws[2]),
        d: inv(ws[3]),
        l,
    })
}

/// Every intermediate of one transformed addend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AddendTrace {
    pub numerator: u32,
    pub divisor: f64,
    /// `N / V`
    pub raw_quotient: f64,
    /// `N mod V`
    pub remainder: f64,
    /// `(N + N mod V) / V`
    pub transformed: f64,
}

fn check_divisor(v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "divisor must be finite and positive, got {v}"
        )))
    }
}

pub fn improved_addend(n: u32, v: f64) -> Result<AddendTrace> {
    check_divisor(v)?;
    let numerator = f64::from(n);
    let remainder = real_mod(numerator, v)?;
    Ok(AddendTrace {
        numerator: n,
        divisor: v,
        raw_quotient: numerator / v,
        remainder,
        transformed: (numerator + remainder) / v,
    })
}

fn check_lists(numerators: &[u32], divisors: &[f64]) -> Result<()> {
    if numerators.is_empty() {
        return Err(Error::Parameter("at least one addend is required".into()));
    }
    if numerators.len() != divisors.len() {
        return Err(Error::Parameter(format!(
            "{} numerators but {} divisors",
            numerators.len(),
            divisors.len()
        )));
    }
    divisors.iter().try_for_each(|&v| check_divisor(v))
}

/// `floor( Σ (N_x + N_x mod V_x) / V_x )`.
pub fn improved_floor_sum(numerators: &[u32], divisors: &[f64]) -> Result<i64> {
    check_lists(numerators, divisors)?;
    let mut sum = 0.0;
    for (&n, &v) in numerators.iter().zip(divisors) {
        sum += improved_addend(n, v)?.transformed;
    }
    apply_mode(sum, RoundingMode::TowardNegative)
}

/// Variant in which the main quotients of `N3` and `N4` trade divisors
/// (`N3/D`, `N4/C`) while every remainder term keeps its own pairing.
pub fn improved_floor_sum_swapped(nb: &Neighborhood, d: &DivisorSet) -> Result<i64> {
    [d.a, d.b, d.c, d.d]
        .iter()
        .try_for_each(|&v| check_divisor(v))?;
    let n = nb.as_array().map(f64::from);
    let rem = |x: f64, v: f64| real_mod(x, v).map(|r| r / v);
    let sum = n[0] / d.a
        + n[1] / d.b
        + n[2] / d.d
        + n[3] / d.c
        + rem(n[0], d.a)?
        + rem(n[1], d.b)?
        + rem(n[2], d.c)?
        + rem(n[3], d.d)?;
    apply_mode(sum, RoundingMode::TowardNegative)
}

/// Numerators of the canonical round-off comparison.
pub const CANONICAL_NUMERATORS: [u32; 10] = [13, 11, 17, 19, 14, 13, 11, 11, 3, 9];
/// Divisors of the canonical round-off comparison.
pub const CANONICAL_DIVISORS: [f64; 10] = [4.0, 10.0, 3.0, 8.0, 3.0, 5.0, 7.0, 9.0, 2.0, 6.0];

/// A rounding strategy compared in the round-off error profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorScheme {
    Mode(RoundingMode),
    ImprovedFloor,
}

impl ErrorScheme {
    pub const FLOOR: ErrorScheme = ErrorScheme::Mode(RoundingMode::TowardNegative);
    pub const CEIL: ErrorScheme = ErrorScheme::Mode(RoundingMode::TowardPositive);
    pub const FIX: ErrorScheme = ErrorScheme::Mode(RoundingMode::TowardZero);
    pub const ROUND: ErrorScheme = ErrorScheme::Mode(RoundingMode::HalfAwayFromZero);

    /// floor, ceil, fix, round and improved-floor.
    pub const STANDARD: [ErrorScheme; 5] = [
        ErrorScheme::FLOOR,
        ErrorScheme::CEIL,
        ErrorScheme::FIX,
        ErrorScheme::ROUND,
        ErrorScheme::ImprovedFloor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ErrorScheme::FLOOR => "floor",
            ErrorScheme::CEIL => "ceil",
            ErrorScheme::FIX => "fix",
            ErrorScheme::ROUND => "round",
            ErrorScheme::Mode(m) => m.name(),
            ErrorScheme::ImprovedFloor => "improved-floor",
        }
    }
}

impl fmt::Display for ErrorScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProfile {
    pub scheme: ErrorScheme,
    pub rounded: Vec<i64>,
    pub per_addend_abs_errors: Vec<f64>,
    pub total_abs_error: f64,
}

impl ErrorProfile {
    fn new(scheme: ErrorScheme, rounded: Vec<i64>, errors: Vec<f64>) -> Self {
        ErrorProfile {
            scheme,
            rounded,
            total_abs_error: errors.iter().sum(),
            per_addend_abs_errors: errors,
        }
    }
}

/// Rounds every quotient `N_x / V_x` on its own and records `|rounded - exact|`.
///
/// For [`ErrorScheme::ImprovedFloor`] the rounded addend is the floor of the
/// transformed addend.
pub fn per_addend_error_profile(
    numerators: &[u32],
    divisors: &[f64],
    schemes: &[ErrorScheme],
) -> Result<Vec<ErrorProfile>> {
    check_lists(numerators, divisors)?;
    let traces = numerators
        .iter()
        .zip(divisors)
        .map(|(&n, &v)| improved_addend(n, v))
        .collect::<Result<Vec<_>>>()?;
    schemes
        .iter()
        .map(|&scheme| {
            let rounded = traces
                .iter()
                .map(|t| match scheme {
                    ErrorScheme::Mode(m) => apply_mode(t.raw_quotient, m),
                    ErrorScheme::ImprovedFloor => {
                        apply_mode(t.transformed, RoundingMode::TowardNegative)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let errors = rounded
                .iter()
                .zip(&traces)
                .map(|(&r, t)| (r as f64 - t.raw_quotient).abs())
                .collect();
            Ok(ErrorProfile::new(scheme, rounded, errors))
        })
        .collect()
}

/// Rounds the single exact sum `Σ N_x / V_x` and records `|rounded - sum|`.
///
/// The improved scheme's value is [`improved_floor_sum`] taken literally,
/// which accumulates the remainder terms and may land above the exact sum;
/// see [`improved_post_sum_readings`] for the alternative reading.
pub fn post_sum_error_profile(
    numerators: &[u32],
    divisors: &[f64],
    schemes: &[ErrorScheme],
) -> Result<Vec<ErrorProfile>> {
    check_lists(numerators, divisors)?;
    let exact = exact_quotient_sum(numerators, divisors);
    schemes
        .iter()
        .map(|&scheme| {
            let rounded = match scheme {
                ErrorScheme::Mode(m) => apply_mode(exact, m)?,
                ErrorScheme::ImprovedFloor => improved_floor_sum(numerators, divisors)?,
            };
            Ok(ErrorProfile::new(
                scheme,
                vec![rounded],
                vec![(rounded as f64 - exact).abs()],
            ))
        })
        .collect()
}

fn exact_quotient_sum(numerators: &[u32], divisors: &[f64]) -> f64 {
    numerators
        .iter()
        .zip(divisors)
        .map(|(&n, &v)| f64::from(n) / v)
        .sum()
}

/// Two readings of the improved scheme applied after summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostSumReadings {
    /// `Σ N_x / V_x`
    pub exact_sum: f64,
    /// `floor(Σ (N_x + N_x mod V_x) / V_x)`
    pub literal: i64,
    /// `floor(Σ N_x / V_x)`, the value if the remainder terms are dropped.
    pub floor_of_exact_sum: i64,
}

pub fn improved_post_sum_readings(numerators: &[u32], divisors: &[f64]) -> Result<PostSumReadings> {
    check_lists(numerators, divisors)?;
    let exact_sum = exact_quotient_sum(numerators, divisors);
    Ok(PostSumReadings {
        exact_sum,
        literal: improved_floor_sum(numerators, divisors)?,
        floor_of_exact_sum: apply_mode(exact_sum, RoundingMode::TowardNegative)?,
    })
}

/// `scheme,addend_index,abs_error` rows, followed by one `total` row per scheme.
pub fn error_profiles_csv(profiles: &[ErrorProfile]) -> String {
    let mut out = String::from("scheme,addend_index,abs_error\n");
    for p in profiles {
        for (i, e) in p.per_addend_abs_errors.iter().enumerate() {
            out.push_str(&format!("{},{i},{e}\n", p.scheme));
        }
    }
    for p in profiles {
        out.push_str(&format!("{},total,{}\n", p.scheme, p.total_abs_error));
    }
    out
}
