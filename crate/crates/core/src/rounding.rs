//! Scalar rounding modes and floored real modulo.
//!
//! Covers the five IEEE 754-2008 rounding-direction rules and Maxfield's
//! ten-mode diagram. Every mode maps a finite `f64` to a mathematical
//! integer (`i64`); signed zero is not modeled, so `-0.3` toward zero is `0`.
//!
//! Ties are detected by exact equality of the fractional part with `0.5`,
//! never with an epsilon, so decimal literals such as `-1.5` or `12.5`
//! behave exactly as printed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A rule for turning a real into an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoundingMode {
    /// Nearest, ties to the even neighbour (IEEE default, R-H-E).
    HalfToEven,
    /// Nearest, ties away from zero (IEEE `roundTiesToAway`, Matlab `round`).
    HalfAwayFromZero,
    /// IEEE `roundTowardZero` (Matlab `fix`).
    TowardZero,
    /// IEEE `roundTowardPositive` (`ceil`).
    TowardPositive,
    /// IEEE `roundTowardNegative` (`floor`).
    TowardNegative,
    /// Maxfield R-H-U (s): ties away from zero.
    HalfUpSymmetric,
    /// Maxfield R-H-U (a): ties toward positive infinity.
    HalfUpAsymmetric,
    /// Maxfield R-H-D (s): ties toward zero.
    HalfDownSymmetric,
    /// Maxfield R-H-D (a): ties toward negative infinity.
    HalfDownAsymmetric,
    /// Maxfield R-H-O: ties to the odd neighbour.
    HalfOdd,
    /// Maxfield R-C.
    Ceiling,
    /// Maxfield R-F.
    FloorMode,
    /// Truncation; identical to R-T-Z.
    Truncate,
    /// Maxfield R-A-F-Z: any non-integer goes to the neighbour farther from zero.
    AwayFromZero,
}

impl RoundingMode {
    pub const ALL: [RoundingMode; 14] = [
        RoundingMode::HalfToEven,
        RoundingMode::HalfAwayFromZero,
        RoundingMode::TowardZero,
        RoundingMode::TowardPositive,
        RoundingMode::TowardNegative,
        RoundingMode::HalfUpSymmetric,
        RoundingMode::HalfUpAsymmetric,
        RoundingMode::HalfDownSymmetric,
        RoundingMode::HalfDownAsymmetric,
        RoundingMode::HalfOdd,
        RoundingMode::Ceiling,
        RoundingMode::FloorMode,
        RoundingMode::Truncate,
        RoundingMode::AwayFromZero,
    ];

    /// The five IEEE 754-2008 rules, in the order of the standard's table.
    pub const IEEE_RULES: [RoundingMode; 5] = [
        RoundingMode::HalfToEven,
        RoundingMode::HalfAwayFromZero,
        RoundingMode::TowardZero,
        RoundingMode::TowardPositive,
        RoundingMode::TowardNegative,
    ];

    /// Maxfield's ten modes, in diagram order.
    pub const MAXFIELD_MODES: [RoundingMode; 10] = [
        RoundingMode::HalfUpSymmetric,
        RoundingMode::HalfUpAsymmetric,
        RoundingMode::HalfDownSymmetric,
        RoundingMode::HalfDownAsymmetric,
        RoundingMode::HalfToEven,
        RoundingMode::HalfOdd,
        RoundingMode::Ceiling,
        RoundingMode::FloorMode,
        RoundingMode::TowardZero,
        RoundingMode::AwayFromZero,
    ];

    /// Kebab-case identifier, also accepted by [`FromStr`].
    pub fn name(self) -> &'static str {
        match self {
            RoundingMode::HalfToEven => "half-to-even",
            RoundingMode::HalfAwayFromZero => "half-away-from-zero",
            RoundingMode::TowardZero => "toward-zero",
            RoundingMode::TowardPositive => "toward-positive-infinity",
            RoundingMode::TowardNegative => "toward-negative-infinity",
            RoundingMode::HalfUpSymmetric => "half-up-symmetric",
            RoundingMode::HalfUpAsymmetric => "half-up-asymmetric",
            RoundingMode::HalfDownSymmetric => "half-down-symmetric",
            RoundingMode::HalfDownAsymmetric => "half-down-asymmetric",
            RoundingMode::HalfOdd => "half-odd",
            RoundingMode::Ceiling => "ceiling",
            RoundingMode::FloorMode => "floor",
            RoundingMode::Truncate => "truncate",
            RoundingMode::AwayFromZero => "away-from-zero",
        }
    }

    /// Maxfield's abbreviation where one exists, otherwise [`Self::name`].
    pub fn abbreviation(self) -> &'static str {
        match self {
            RoundingMode::HalfUpSymmetric => "R-H-U (s)",
            RoundingMode::HalfUpAsymmetric => "R-H-U (a)",
            RoundingMode::HalfDownSymmetric => "R-H-D (s)",
            RoundingMode::HalfDownAsymmetric => "R-H-D (a)",
            RoundingMode::HalfToEven => "R-H-E",
            RoundingMode::HalfOdd => "R-H-O",
            RoundingMode::Ceiling => "R-C",
            RoundingMode::FloorMode => "R-F",
            RoundingMode::TowardZero => "R-T-Z",
            RoundingMode::AwayFromZero => "R-A-F-Z",
            other => other.name(),
        }
    }
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RoundingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RoundingMode::ALL
            .into_iter()
            .find(|m| m.name() == s || m.abbreviation() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown rounding mode `{s}`")))
    }
}

/// Floored modulo: `a - b * floor(a / b)`, with the sign of the result
/// following the divisor. For `b > 0` the result lies in `[0, b)`.
///
/// Uses the exact IEEE remainder of `fmod` and shifts it by `b` when the
/// signs disagree, so the result carries no rounding error of its own except
/// for that final shift.
pub fn real_mod(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "real_mod({a}, {b}): non-finite operand"
        )));
    }
    if b == 0.0 {
        return Err(Error::Domain(format!(
            "real_mod({a}, 0): undefined modulus"
        )));
    }
    let mut r = a % b;
    if r != 0.0 && (r < 0.0) != (b < 0.0) {
        r += b;
        // The shift can round up onto `b` itself when |a % b| is tiny.
        if r == b {
            r = prev_toward_zero(b);
        }
    }
    // Normalize -0.0.
    Ok(if r == 0.0 { 0.0 } else { r })
}

fn prev_toward_zero(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

fn to_integer(x: f64) -> Result<i64> {
    // 2^63 is exactly representable; everything strictly inside fits in i64.
    const LIMIT: f64 = 9_223_372_036_854_775_808.0;
    if !(-LIMIT..LIMIT).contains(&x) {
        return Err(Error::Domain(format!(
            "{x} does not fit in a 64-bit integer"
        )));
    }
    Ok(x as i64)
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("cannot round non-finite value {x}")))
    }
}

/// Greatest integer not above `x`, computed through `x - (x mod 1)`.
pub fn floor_via_mod(x: f64) -> Result<i64> {
    check_finite(x)?;
    to_integer(x - real_mod(x, 1.0)?)
}

/// Rounds `x` to an integer under `mode`.
pub fn apply_mode(x: f64, mode: RoundingMode) -> Result<i64> {
    check_finite(x)?;
    let lo = x.floor();
    // Exact: x and floor(x) share a binade or x is already integral.
    let frac = x - lo;
    if frac == 0.0 {
        return to_integer(lo);
    }
    let hi = lo + 1.0;
    let nearest = |tie: f64| {
        if frac < 0.5 {
            lo
        } else if frac > 0.5 {
            hi
        } else {
            tie
        }
    };
    let positive = x > 0.0;
    let lo_is_even = lo.rem_euclid(2.0) == 0.0;
    let rounded = match mode {
        RoundingMode::HalfToEven => nearest(if lo_is_even { lo } else { hi }),
        RoundingMode::HalfOdd => nearest(if lo_is_even { hi } else { lo }),
        RoundingMode::HalfAwayFromZero | RoundingMode::HalfUpSymmetric => {
            nearest(if positive { hi } else { lo })
        }
        RoundingMode::HalfUpAsymmetric => nearest(hi),
        RoundingMode::HalfDownSymmetric => nearest(if positive { lo } else { hi }),
        RoundingMode::HalfDownAsymmetric => nearest(lo),
        RoundingMode::TowardZero | RoundingMode::Truncate => {
            if positive {
                lo
            } else {
                hi
            }
        }
        RoundingMode::TowardPositive | RoundingMode::Ceiling => hi,
        RoundingMode::TowardNegative | RoundingMode::FloorMode => lo,
        RoundingMode::AwayFromZero => {
            if positive {
                hi
            } else {
                lo
            }
        }
    };
    to_integer(rounded)
}

/// Inputs of the IEEE 754-2008 half-integer table.
pub const IEEE_TABLE_INPUTS: [f64; 4] = [11.5, 12.5, -11.5, -12.5];

/// Inputs of Maxfield's diagram, left to right.
pub const MAXFIELD_TABLE_INPUTS: [f64; 17] = [
    -2.0, -1.7, -1.5, -1.3, -1.0, -0.7, -0.5, -0.3, 0.0, 0.3, 0.5, 0.7, 1.0, 1.3, 1.5, 1.7, 2.0,
];

/// How row labels are written when a table is serialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowLabels {
    Names,
    Abbreviations,
}

/// Rounded outputs of several modes over a shared list of inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformanceTable {
    pub modes: Vec<RoundingMode>,
    pub inputs: Vec<f64>,
    /// `cells[i][j]` is `apply_mode(inputs[j], modes[i])`.
    pub cells: Vec<Vec<i64>>,
}

impl ConformanceTable {
    pub fn cell(&self, mode: RoundingMode, input: f64) -> Option<i64> {
        let row = self.modes.iter().position(|&m| m == mode)?;
        let col = self.inputs.iter().position(|&x| x == input)?;
        Some(self.cells[row][col])
    }

    /// One mode per row; the header row lists the inputs.
    pub fn to_csv(&self, labels: RowLabels) -> String {
        let mut out = String::from("mode");
        for x in &self.inputs {
            out.push_str(&format!(",{x:.1}"));
        }
        out.push('\n');
        for (mode, row) in self.modes.iter().zip(&self.cells) {
            out.push_str(match labels {
                RowLabels::Names => mode.name(),
                RowLabels::Abbreviations => mode.abbreviation(),
            });
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Applies every mode to every input.
pub fn conformance_table(modes: &[RoundingMode], inputs: &[f64]) -> Result<ConformanceTable> {
    let cells = modes
        .iter()
        .map(|&m| {
            inputs
                .iter()
                .map(|&x| apply_mode(x, m))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConformanceTable {
        modes: modes.to_vec(),
        inputs: inputs.to_vec(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn real_mod_examples() {
        assert_eq!(real_mod(13.0, 4.0).unwrap(), 1.0);
        assert_eq!(real_mod(91.0, 4.0).unwrap(), 3.0);
        assert_eq!(real_mod(3.25, 1.0).unwrap(), 0.25);
        assert_eq!(real_mod(-1.5, 1.0).unwrap(), 0.5);
        assert_eq!(real_mod(-7.0, 2.0).unwrap(), 1.0);
        assert_eq!(real_mod(7.0, -2.0).unwrap(), -1.0);
    }

    #[test]
    fn real_mod_rejects_zero_and_nan() {
        assert!(matches!(real_mod(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(real_mod(f64::NAN, 1.0), Err(Error::Domain(_))));
        assert!(matches!(
            real_mod(1.0, f64::INFINITY),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn real_mod_stays_below_divisor_for_tiny_negatives() {
        let r = real_mod(-1e-300, 1.0).unwrap();
        assert!((0.0..1.0).contains(&r));
    }

    #[test]
    fn floor_via_mod_examples() {
        assert_eq!(floor_via_mod(3.25).unwrap(), 3);
        assert_eq!(floor_via_mod(-1.5).unwrap(), -2);
        assert_eq!(floor_via_mod(2.0).unwrap(), 2);
        assert!(floor_via_mod(f64::INFINITY).is_err());
    }

    #[test]
    fn apply_mode_examples() {
        assert_eq!(apply_mode(12.5, RoundingMode::HalfToEven).unwrap(), 12);
        assert_eq!(
            apply_mode(-11.5, RoundingMode::TowardNegative).unwrap(),
            -12
        );
        assert_eq!(
            apply_mode(-1.5, RoundingMode::HalfUpAsymmetric).unwrap(),
            -1
        );
        for m in RoundingMode::ALL {
            assert_eq!(apply_mode(0.0, m).unwrap(), 0);
            assert_eq!(apply_mode(-0.0, m).unwrap(), 0);
        }
    }

    #[test]
    fn apply_mode_rejects_non_finite_and_huge() {
        assert!(apply_mode(f64::NAN, RoundingMode::HalfToEven).is_err());
        assert!(apply_mode(f64::NEG_INFINITY, RoundingMode::FloorMode).is_err());
        assert!(apply_mode(1e300, RoundingMode::FloorMode).is_err());
    }

    #[test]
    fn empty_inputs_give_empty_rows() {
        let t = conformance_table(&RoundingMode::IEEE_RULES, &[]).unwrap();
        assert!(t.cells.iter().all(Vec::is_empty));
        let t = conformance_table(&[], &[1.5]).unwrap();
        assert!(t.cells.is_empty());
    }

    #[test]
    fn mode_names_round_trip() {
        for m in RoundingMode::ALL {
            assert_eq!(m.name().parse::<RoundingMode>().unwrap(), m);
            assert_eq!(
                m.abbreviation()
                    .parse::<RoundingMode>()
                    .unwrap()
                    .abbreviation(),
                m.abbreviation()
            );
        }
        assert!("banker".parse::<RoundingMode>().is_err());
    }

    #[test]
    fn csv_layout() {
        let t = conformance_table(&[RoundingMode::HalfOdd], &[0.5, -0.5]).unwrap();
        assert_eq!(
            t.to_csv(RowLabels::Abbreviations),
            "mode,0.5,-0.5\nR-H-O,1,-1\n"
        );
        assert_eq!(t.to_csv(RowLabels::Names), "mode,0.5,-0.5\nhalf-odd,1,-1\n");
    }

    fn quarter_grid() -> impl Strategy<Value = f64> {
        // Multiples of 1/4 hit ties and non-ties alike.
        (-4000i32..4000).prop_map(|k| f64::from(k) / 4.0)
    }

    fn any_mode() -> impl Strategy<Value = RoundingMode> {
        proptest::sample::select(RoundingMode::ALL.to_vec())
    }

    proptest! {
        #[test]
        fn monotone(a in -1e6f64..1e6, b in -1e6f64..1e6, m in any_mode()) {
            let (x, y) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(apply_mode(x, m).unwrap() <= apply_mode(y, m).unwrap());
        }

        #[test]
        fn monotone_on_ties(a in quarter_grid(), b in quarter_grid(), m in any_mode()) {
            let (x, y) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(apply_mode(x, m).unwrap() <= apply_mode(y, m).unwrap());
        }

        #[test]
        fn integers_are_fixed(k in -1_000_000i64..1_000_000, m in any_mode()) {
            prop_assert_eq!(apply_mode(k as f64, m).unwrap(), k);
        }

        #[test]
        fn bracketed_by_floor_and_ceil(x in -1e9f64..1e9, m in any_mode()) {
            let r = apply_mode(x, m).unwrap() as f64;
            prop_assert!(x.floor() <= r && r <= x.ceil());
        }

        #[test]
        fn tie_parity(k in -100_000i64..100_000) {
            let x = k as f64 + 0.5;
            prop_assert_eq!(apply_mode(x, RoundingMode::HalfToEven).unwrap().rem_euclid(2), 0);
            prop_assert_eq!(apply_mode(x, RoundingMode::HalfOdd).unwrap().rem_euclid(2), 1);
        }

        #[test]
        fn aliases_agree(x in quarter_grid(), y in -1e6f64..1e6) {
            for v in [x, y] {
                prop_assert_eq!(
                    apply_mode(v, RoundingMode::TowardNegative).unwrap(),
                    apply_mode(v, RoundingMode::FloorMode).unwrap()
                );
                prop_assert_eq!(
                    apply_mode(v, RoundingMode::TowardZero).unwrap(),
                    apply_mode(v, RoundingMode::Truncate).unwrap()
                );
                prop_assert_eq!(
                    apply_mode(v, RoundingMode::TowardPositive).unwrap(),
                    apply_mode(v, RoundingMode::Ceiling).unwrap()
                );
            }
        }

        #[test]
        fn half_up_variants_split_only_on_negative_ties(x in quarter_grid()) {
            let s = apply_mode(x, RoundingMode::HalfUpSymmetric).unwrap();
            let a = apply_mode(x, RoundingMode::HalfUpAsymmetric).unwrap();
            let negative_tie = x < 0.0 && x - x.floor() == 0.5;
            prop_assert_eq!(s != a, negative_tie);
        }

        #[test]
        fn half_modes_agree_off_ties(x in -1e6f64..1e6) {
            prop_assume!(x - x.floor() != 0.5);
            let reference = apply_mode(x, RoundingMode::HalfToEven).unwrap();
            for m in [
                RoundingMode::HalfAwayFromZero,
                RoundingMode::HalfUpSymmetric,
                RoundingMode::HalfUpAsymmetric,
                RoundingMode::HalfDownSymmetric,
                RoundingMode::HalfDownAsymmetric,
                RoundingMode::HalfOdd,
            ] {
                prop_assert_eq!(apply_mode(x, m).unwrap(), reference);
            }
        }

        #[test]
        fn unit_modulus_splits_integer_and_fraction(x in -1e12f64..1e12) {
            let r = real_mod(x, 1.0).unwrap();
            prop_assert!((0.0..1.0).contains(&r));
            let k = x - r;
            prop_assert_eq!(k, k.trunc());
            prop_assert_eq!(floor_via_mod(x).unwrap() as f64, x.floor());
        }
    }
}
