//! Shared oracle helpers for the integration and acceptance suites.

#![allow(dead_code)]

pub mod fixtures;

use nodalcert_core::Interval;
use num::{BigRational, FromPrimitive};
use rand::Rng;

/// Exact rational value of a finite f64.
pub fn rational_of(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite f64 converts exactly")
}

/// Checks that the exact rational `value` lies inside `iv`.
pub fn contains_rational(iv: &Interval, value: &BigRational) -> bool {
    let lo_ok = iv.lo() == f64::NEG_INFINITY
        || (iv.lo().is_finite() && rational_of(iv.lo()) <= *value);
    let hi_ok =
        iv.hi() == f64::INFINITY || (iv.hi().is_finite() && *value <= rational_of(iv.hi()));
    lo_ok && hi_ok
}

/// Random finite f64 with exponents spread over a wide dynamic range,
/// including zeros and sign changes.
pub fn random_f64<R: Rng>(rng: &mut R) -> f64 {
    if rng.gen_ratio(1, 100) {
        return 0.0;
    }
    let exponent: i32 = rng.gen_range(-60..=60);
    let mantissa: f64 = rng.gen_range(-2.0..2.0);
    mantissa * 2f64.powi(exponent)
}

/// Random interval around a random center, occasionally degenerate.
pub fn random_interval<R: Rng>(rng: &mut R) -> Interval {
    let a = random_f64(rng);
    if rng.gen_ratio(1, 10) {
        return Interval::point(a);
    }
    let b = random_f64(rng);
    Interval::new(a.min(b), a.max(b)).unwrap()
}

/// Random sub-interval of `iv`.
pub fn random_subinterval<R: Rng>(rng: &mut R, iv: &Interval) -> Interval {
    let t0: f64 = rng.gen_range(0.0..=1.0);
    let t1: f64 = rng.gen_range(0.0..=1.0);
    let (t0, t1) = (t0.min(t1), t0.max(t1));
    let w = iv.hi() - iv.lo();
    let lo = (iv.lo() + t0 * w).clamp(iv.lo(), iv.hi());
    let hi = (iv.lo() + t1 * w).clamp(lo, iv.hi());
    Interval::new(lo, hi).unwrap()
}
