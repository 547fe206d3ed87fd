//! Exact rational-arithmetic oracle for the improved-floor sums.
//!
//! Independent of the floating-point production path: weights, `L`, the
//! divisors and every modulo are evaluated over big rationals.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Q {
    q(n, 1)
}

/// `L = 1/10^9`.
pub fn default_l() -> Q {
    q(1, 1_000_000_000)
}

pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn floor_i64(x: &Q) -> i64 {
    floor(x).to_i64().unwrap()
}

/// `a - b·floor(a/b)`
pub fn rmod(a: &Q, b: &Q) -> Q {
    a - b * Q::from_integer(floor(&(a / b)))
}

pub fn weights(dr: &Q, dc: &Q) -> [Q; 4] {
    let one = Q::one();
    [
        (&one - dr) * (&one - dc),
        dr * (&one - dc),
        (&one - dr) * dc,
        dr * dc,
    ]
}

pub fn divisors(w: &[Q; 4], l: &Q) -> [Q; 4] {
    w.clone().map(|w| Q::one() / (w + l))
}

/// `Σ (N_x + N_x mod V_x) / V_x`, before the floor.
pub fn improved_sum_unfloored(n: &[u32], v: &[Q]) -> Q {
    assert_eq!(n.len(), v.len());
    n.iter().zip(v).fold(Q::zero(), |acc, (&n, v)| {
        let n = int(i64::from(n));
        acc + (&n + rmod(&n, v)) / v
    })
}

pub fn improved_sum(n: &[u32], v: &[Q]) -> i64 {
    floor_i64(&improved_sum_unfloored(n, v))
}

/// Factored four-addend form for a neighborhood at offsets `(dr, dc)`.
pub fn ba_m_unfloored(n: [u32; 4], dr: &Q, dc: &Q, l: &Q) -> Q {
    improved_sum_unfloored(&n, &divisors(&weights(dr, dc), l))
}

pub fn ba_m(n: [u32; 4], dr: &Q, dc: &Q, l: &Q) -> i64 {
    floor_i64(&ba_m_unfloored(n, dr, dc, l))
}

/// Divisor-swapped form: `N3/D + N4/C` in the main quotients, remainders
/// keep `N3 mod C` and `N4 mod D`.
pub fn ba_m_swap(n: [u32; 4], dr: &Q, dc: &Q, l: &Q) -> i64 {
    let [a, b, c, d] = divisors(&weights(dr, dc), l);
    let n = n.map(|x| int(i64::from(x)));
    let sum = &n[0] / &a
        + &n[1] / &b
        + &n[2] / &d
        + &n[3] / &c
        + rmod(&n[0], &a) / &a
        + rmod(&n[1], &b) / &b
        + rmod(&n[2], &c) / &c
        + rmod(&n[3], &d) / &d;
    floor_i64(&sum)
}

/// Unrounded bilinear value.
pub fn bilinear(n: [u32; 4], dr: &Q, dc: &Q) -> Q {
    weights(dr, dc)
        .iter()
        .zip(n)
        .fold(Q::zero(), |acc, (w, n)| acc + w * int(i64::from(n)))
}

/// Round half up (ties toward +inf) of an exact rational.
pub fn round_half_up(x: &Q) -> i64 {
    floor_i64(&(x + q(1, 2)))
}

/// Distance from `x` to the nearest integer.
pub fn distance_to_integer(x: &Q) -> Q {
    let f = x - Q::from_integer(floor(x));
    let g = Q::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

/// `|rounded - N/V|` summed over addends, for a per-addend rounding rule
/// evaluated in exact arithmetic.
pub fn per_addend_total(n: &[u32], v: &[i64], round: impl Fn(&Q) -> i64) -> Q {
    n.iter().zip(v).fold(Q::zero(), |acc, (&n, &v)| {
        let x = q(i64::from(n), v);
        let r = int(round(&x));
        acc + (r - &x).abs()
    })
}

pub fn ceil_i64(x: &Q) -> i64 {
    -floor_i64(&-x)
}
