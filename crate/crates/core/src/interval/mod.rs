//! Outward-rounded interval arithmetic over binary64.
//!
//! Every operation returns an interval that contains the exact real result
//! for all points of the operand intervals. Directed rounding is realized
//! by nextafter-style outward nudging driven by exact residuals (see
//! [`round`]); no hardware rounding-mode switching is used, so all
//! operations are pure and thread-safe.
//!
//! Empty and reversed intervals are rejected at construction. Endpoints may
//! be infinite; NaN is never accepted.

mod gamma;
mod round;
mod transcend;

pub use gamma::gamma;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IntervalError {
    #[error("malformed interval [{lo}, {hi}]: endpoints must satisfy lo <= hi and be non-NaN")]
    Malformed { lo: f64, hi: f64 },
    #[error("interval division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("domain error: {0}")]
    DomainError(String),
}

/// Closed interval `[lo, hi]` with the inclusion property.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Tight enclosure of pi.
    pub const PI: Interval = Interval {
        lo: f64::from_bits(0x400921FB54442D18),
        hi: f64::from_bits(0x400921FB54442D19),
    };

    /// Tight enclosure of ln 2.
    pub const LN2: Interval = Interval {
        lo: f64::from_bits(0x3FE62E42FEFA39EF),
        hi: f64::from_bits(0x3FE62E42FEFA39F0),
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(IntervalError::Malformed { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN is not a valid interval endpoint");
        Interval { lo: x, hi: x }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    /// Midpoint, rounded to nearest; always lies inside the interval.
    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY {
            return 0.0;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Magnitude: sup |x| over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Intersection of two enclosures of the same quantity.
    ///
    /// Disjointness would mean at least one operand violated its inclusion
    /// contract; we keep the tighter sound reading by returning the raw
    /// overlap and let the caller decide.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval {
                lo: 0.0,
                hi: self.mag(),
            }
        }
    }

    pub fn div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains(0.0) {
            return Err(IntervalError::DivisionByZeroInterval);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &a in &[self.lo, self.hi] {
            for &b in &[rhs.lo, rhs.hi] {
                lo = lo.min(round::div_down(a, b));
                hi = hi.max(round::div_up(a, b));
            }
        }
        Ok(Interval { lo, hi })
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::DomainError(format!(
                "sqrt of interval with negative lower endpoint {}",
                self.lo
            )));
        }
        Ok(Interval {
            lo: round::sqrt_down(self.lo),
            hi: round::sqrt_up(self.hi),
        })
    }

    /// Integer power by binary exponentiation with sign-case handling.
    pub fn powi(self, n: i32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if n < 0 {
            // Caller guarantees 0 is excluded; route through pow() otherwise.
            let p = self.powi(-n);
            return Interval::ONE
                .div(p)
                .expect("powi with negative exponent requires 0 outside the base");
        }
        if n % 2 == 1 {
            Interval {
                lo: ipow_point(self.lo, n as u32).lo,
                hi: ipow_point(self.hi, n as u32).hi,
            }
        } else if self.lo >= 0.0 {
            Interval {
                lo: ipow_point(self.lo, n as u32).lo,
                hi: ipow_point(self.hi, n as u32).hi,
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: ipow_point(self.hi.abs(), n as u32).lo,
                hi: ipow_point(self.lo.abs(), n as u32).hi,
            }
        } else {
            Interval {
                lo: 0.0,
                hi: ipow_point(self.mag(), n as u32).hi,
            }
        }
    }

    /// Real power `x^r`.
    ///
    /// Integer and half-integer exponents use exact monotone paths; general
    /// exponents go through `exp(r ln x)` and require a nonnegative base.
    /// Negative exponents additionally require 0 outside the base.
    pub fn pow(self, r: f64) -> Result<Interval, IntervalError> {
        if r.is_nan() {
            return Err(IntervalError::DomainError("NaN exponent".into()));
        }
        if r == 0.0 {
            return Ok(Interval::ONE);
        }
        if r < 0.0 {
            if self.contains(0.0) {
                return Err(IntervalError::DivisionByZeroInterval);
            }
            return Interval::ONE.div(self.pow(-r)?);
        }
        // Exact integer exponent.
        if r.fract() == 0.0 && r <= i32::MAX as f64 {
            return Ok(self.powi(r as i32));
        }
        if self.lo < 0.0 {
            return Err(IntervalError::DomainError(format!(
                "negative base [{}, {}] with non-integer exponent {}",
                self.lo, self.hi, r
            )));
        }
        // Half-integer exponent: x^(k + 1/2) = x^k * sqrt(x).
        if (2.0 * r).fract() == 0.0 && 2.0 * r <= i32::MAX as f64 {
            let k = (2.0 * r) as i64 / 2;
            return Ok(self.powi(k as i32) * self.sqrt()?);
        }
        // General positive exponent on a nonnegative base.
        let hi_part = if self.hi == 0.0 {
            0.0
        } else {
            transcend::pow_point_up(self.hi, r)
        };
        let lo_part = if self.lo == 0.0 {
            0.0
        } else {
            transcend::pow_point_down(self.lo, r).max(0.0)
        };
        Ok(Interval {
            lo: lo_part,
            hi: hi_part,
        })
    }

    /// Interval-exponent power `x^e` for nonnegative `x`, via `exp(e ln x)`.
    ///
    /// A zero lower endpoint is admitted when the exponent is strictly
    /// positive (x^e -> 0 as x -> 0+), which is how fractional exponents
    /// like 1/p enter without rounding the exponent itself.
    pub fn pow_interval(self, e: Interval) -> Result<Interval, IntervalError> {
        if e.lo == e.hi {
            // Thin exponent: the scalar path has exact integer and
            // half-integer branches, so prefer it.
            return self.pow(e.lo);
        }
        if self.lo < 0.0 {
            return Err(IntervalError::DomainError(
                "interval-exponent power requires a nonnegative base".into(),
            ));
        }
        if self.lo == 0.0 {
            if e.lo <= 0.0 {
                return Err(IntervalError::DomainError(
                    "zero base with nonpositive exponent".into(),
                ));
            }
            if self.hi == 0.0 {
                return Ok(Interval::ZERO);
            }
            let upper = (Interval::point(self.hi).ln()? * e).exp().hi;
            return Interval::new(0.0, upper);
        }
        Ok((self.ln()? * e).exp())
    }

    pub fn exp(self) -> Interval {
        Interval {
            lo: transcend::exp_point(self.lo).lo,
            hi: transcend::exp_point(self.hi).hi,
        }
    }

    pub fn ln(self) -> Result<Interval, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::DomainError(format!(
                "ln of interval with nonpositive lower endpoint {}",
                self.lo
            )));
        }
        Ok(Interval {
            lo: transcend::ln_point(self.lo).lo,
            hi: transcend::ln_point(self.hi).hi,
        })
    }
}

/// Enclosure of `x^n` for a scalar base, by interval binary exponentiation.
fn ipow_point(x: f64, n: u32) -> Interval {
    let mut acc = Interval::ONE;
    let mut base = Interval::point(x);
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

impl std::ops::Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::add_down(self.lo, rhs.lo),
            hi: round::add_up(self.hi, rhs.hi),
        }
    }
}

impl std::ops::Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::sub_down(self.lo, rhs.hi),
            hi: round::sub_up(self.hi, rhs.lo),
        }
    }
}

impl std::ops::Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &a in &[self.lo, self.hi] {
            for &b in &[rhs.lo, rhs.hi] {
                lo = lo.min(round::mul_down(a, b));
                hi = hi.max(round::mul_up(a, b));
            }
        }
        Interval { lo, hi }
    }
}

impl std::ops::Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn rejects_malformed() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn add_exact_endpoints() {
        let r = iv(1.0, 2.0) + iv(3.0, 4.0);
        assert_eq!((r.lo(), r.hi()), (4.0, 6.0));
    }

    #[test]
    fn mul_sign_cases() {
        let r = iv(-1.0, 2.0) * iv(3.0, 4.0);
        assert_eq!((r.lo(), r.hi()), (-4.0, 8.0));
        let r = iv(-2.0, -1.0) * iv(-4.0, -3.0);
        assert_eq!((r.lo(), r.hi()), (3.0, 8.0));
        let r = iv(-1.0, 2.0) * iv(-3.0, 5.0);
        assert_eq!((r.lo(), r.hi()), (-6.0, 10.0));
    }

    #[test]
    fn div_one_third_is_tight() {
        let r = iv(1.0, 1.0).div(iv(3.0, 3.0)).unwrap();
        assert!(r.lo() < 1.0 / 3.0 + f64::EPSILON && r.hi() > 1.0 / 3.0 - f64::EPSILON);
        assert!(3.0 * r.lo() <= 1.0 && 3.0 * r.hi() >= 1.0);
        assert!(r.width() <= 2.0 * (1.0f64 / 3.0).abs() * f64::EPSILON);
    }

    #[test]
    fn div_by_zero_interval_errors() {
        assert_eq!(
            iv(1.0, 1.0).div(iv(-1.0, 1.0)).unwrap_err(),
            IntervalError::DivisionByZeroInterval
        );
        assert_eq!(
            iv(1.0, 1.0).div(iv(0.0, 2.0)).unwrap_err(),
            IntervalError::DivisionByZeroInterval
        );
    }

    #[test]
    fn pow_square_exact_up_to_rounding() {
        let r = iv(2.0, 2.0).pow(2.0).unwrap();
        assert_eq!((r.lo(), r.hi()), (4.0, 4.0));
    }

    #[test]
    fn pow_even_through_zero() {
        let r = iv(-2.0, 3.0).pow(2.0).unwrap();
        assert_eq!((r.lo(), r.hi()), (0.0, 9.0));
    }

    #[test]
    fn pow_odd_is_monotone() {
        let r = iv(-2.0, 3.0).pow(3.0).unwrap();
        assert_eq!((r.lo(), r.hi()), (-8.0, 27.0));
    }

    #[test]
    fn pow_half_encloses_sqrt2_tightly() {
        // sqrt(2) = 1.414213562373095048801689... (frozen oracle value)
        let r = iv(2.0, 2.0).pow(0.5).unwrap();
        let lo_oracle = f64::from_bits(0x3FF6A09E667F3BCC);
        let hi_oracle = f64::from_bits(0x3FF6A09E667F3BCD);
        assert!(r.lo() <= hi_oracle && r.hi() >= lo_oracle);
        assert!(r.contains(lo_oracle) || r.contains(hi_oracle));
        assert!(r.width() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn pow_negative_base_non_integer_errors() {
        assert!(matches!(
            iv(-2.0, -1.0).pow(0.5),
            Err(IntervalError::DomainError(_))
        ));
    }

    #[test]
    fn pow_general_real_exponent() {
        // 2^(1/3) = 1.259921049894873164767...
        let r = iv(2.0, 2.0).pow(1.0 / 3.0).unwrap();
        assert!(r.contains(1.2599210498948732));
        assert!(r.width() < 1e-14);
        // zero base maps to zero lower endpoint
        let r = iv(0.0, 2.0).pow(1.5).unwrap();
        assert_eq!(r.lo(), 0.0);
        assert!(r.contains(2.0f64.powf(1.5)));
    }

    #[test]
    fn pow_negative_exponent() {
        // 8^(-2/3) = 1/4
        let r = iv(8.0, 8.0).pow(-2.0 / 3.0).unwrap();
        assert!(r.contains(0.25));
        assert!(r.width() < 1e-15);
    }

    #[test]
    fn pi_constant_is_a_valid_enclosure() {
        assert!(Interval::PI.contains(std::f64::consts::PI));
        assert!(Interval::PI.width() <= 2.0 * f64::EPSILON * 4.0);
    }

    #[test]
    fn exp_and_ln_basics() {
        let e = Interval::ONE.exp();
        assert!(e.contains(std::f64::consts::E));
        assert!(e.width() < 1e-14);
        let l = Interval::point(2.0).ln().unwrap();
        assert!(l.contains(std::f64::consts::LN_2));
        assert!(l.width() < 1e-15);
        assert!(Interval::point(0.0).ln().is_err());
    }

    #[test]
    fn exp_ln_round_trip_contains_identity() {
        for &x in &[0.1, 0.5, 1.0, 3.0, 17.5, 123.0] {
            let r = Interval::point(x).ln().unwrap().exp();
            assert!(r.contains(x), "exp(ln({x})) = {r} should contain {x}");
            assert!(r.width() / x < 1e-13);
        }
    }

    #[test]
    fn neg_and_abs() {
        let r = -iv(-1.0, 3.0);
        assert_eq!((r.lo(), r.hi()), (-3.0, 1.0));
        assert_eq!(iv(-4.0, 2.0).abs().hi(), 4.0);
        assert_eq!(iv(-4.0, 2.0).abs().lo(), 0.0);
        assert_eq!(iv(1.0, 2.0).abs(), iv(1.0, 2.0));
    }
}
