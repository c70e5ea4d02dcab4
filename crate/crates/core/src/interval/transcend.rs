//! Certified enclosures of exp, ln and real powers.
//!
//! exp uses the reduction x = k ln2 + r with |r| <= ln2/2 and a Taylor
//! polynomial whose truncation error is added as interval slack; ln uses
//! the atanh series after reducing the mantissa into [sqrt(1/2), sqrt(2)).
//! Real powers of positive scalars go through exp(r ln x).

use super::Interval;

const EXP_TERMS: usize = 13;
const LN_TERMS: usize = 10;

/// Cody-Waite split of ln 2: LN2_HI has 26 significant bits, so k*LN2_HI
/// is exact for every reduction integer k in use, and the remainder
/// ln2 - LN2_HI is enclosed by [LN2_TAIL_LO, LN2_TAIL_HI].
const LN2_HI: f64 = f64::from_bits(0x3FE62E42F8000000);
const LN2_TAIL: Interval = Interval {
    lo: f64::from_bits(0x3E4BE8E7BCD5E4F1),
    hi: f64::from_bits(0x3E4BE8E7BCD5E4F2),
};

/// Enclosure of x - k*ln2 with the reduction error kept near 1e-24.
#[inline]
fn reduce_by_ln2(x: f64, k: f64) -> Interval {
    let k_iv = Interval::point(k);
    Interval::point(x) - k_iv * Interval::point(LN2_HI) - k_iv * LN2_TAIL
}

/// Enclosure of e^x for a scalar argument.
pub fn exp_point(x: f64) -> Interval {
    debug_assert!(!x.is_nan());
    if x == f64::NEG_INFINITY {
        return Interval::ZERO;
    }
    if x > 709.9 {
        // e^x > f64::MAX; MAX is still a valid lower bound.
        return Interval::new(f64::MAX, f64::INFINITY).unwrap();
    }
    if x < -745.2 {
        // 0 < e^x < smallest subnormal boundary.
        return Interval::new(0.0, f64::from_bits(1)).unwrap();
    }
    let k = (x / std::f64::consts::LN_2).round();
    let r = reduce_by_ln2(x, k);
    let core = exp_taylor(r);
    let scaled = scale_pow2(core, k as i64);
    // e^x is strictly positive.
    Interval::new(scaled.lo().max(0.0), scaled.hi()).unwrap()
}

/// Taylor enclosure of e^r for |r| <= 0.35 + slack.
fn exp_taylor(r: Interval) -> Interval {
    let mut s = Interval::ONE;
    for i in (1..=EXP_TERMS).rev() {
        s = Interval::ONE + (r * s).div(Interval::point(i as f64)).unwrap();
    }
    let rmag = r.mag();
    // |R| <= rmag^(N+1)/(N+1)! * 1/(1 - rmag/(N+2))
    let num = Interval::point(rmag).powi(EXP_TERMS as i32 + 1);
    let fact = Interval::point(87_178_291_200.0); // 14!
    let denom = Interval::ONE - Interval::point(rmag).div(Interval::point(15.0)).unwrap();
    let tail = num.div(fact).unwrap().div(denom).unwrap().hi();
    s + Interval::new(-tail, tail).unwrap()
}

/// Multiply by the exact power 2^k, chunked to keep each factor finite.
fn scale_pow2(mut v: Interval, mut k: i64) -> Interval {
    while k != 0 {
        let step = k.clamp(-512, 512);
        let factor = f64::from_bits((((step + 1023) as u64) << 52) & 0x7FF0_0000_0000_0000);
        debug_assert!(factor.is_finite() && factor > 0.0);
        v = v * Interval::point(factor);
        k -= step;
    }
    v
}

/// Enclosure of ln x for a scalar argument, x > 0.
pub fn ln_point(x: f64) -> Interval {
    debug_assert!(x > 0.0);
    if x == f64::INFINITY {
        return Interval::new(f64::MAX, f64::INFINITY).unwrap();
    }
    // Normalize subnormals so the exponent field is usable.
    let (xn, e0) = if x < f64::MIN_POSITIVE {
        (x * 2f64.powi(52), -52i64)
    } else {
        (x, 0i64)
    };
    let bits = xn.to_bits();
    let mut e = ((bits >> 52) & 0x7FF) as i64 - 1023 + e0;
    let mut m = f64::from_bits((bits & 0x000F_FFFF_FFFF_FFFF) | 0x3FF0_0000_0000_0000);
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5; // exact
        e += 1;
    }
    // t = (m-1)/(m+1); m-1 is exact by Sterbenz for m in [1/2, 2].
    let t = Interval::point(m - 1.0)
        .div(Interval::point(m) + Interval::ONE)
        .unwrap();
    let u = t * t;
    let mut acc = Interval::ONE
        .div(Interval::point((2 * LN_TERMS + 1) as f64))
        .unwrap();
    for j in (0..LN_TERMS).rev() {
        acc = acc * u
            + Interval::ONE
                .div(Interval::point((2 * j + 1) as f64))
                .unwrap();
    }
    let series = Interval::point(2.0) * t * acc;
    // Tail: 2|t|^(2K+3) / ((2K+3)(1-t^2))
    let tmag = t.mag();
    let num = Interval::point(2.0) * Interval::point(tmag).powi(2 * LN_TERMS as i32 + 3);
    let denom = (Interval::point((2 * LN_TERMS + 3) as f64))
        * (Interval::ONE - Interval::point(tmag).powi(2));
    let tail = num.div(denom).unwrap().hi();
    let e_iv = Interval::point(e as f64);
    series
        + Interval::new(-tail, tail).unwrap()
        + e_iv * Interval::point(LN2_HI)
        + e_iv * LN2_TAIL
}

/// Lower bound of x^r for scalar x > 0.
pub fn pow_point_down(x: f64, r: f64) -> f64 {
    pow_point(x, r).lo()
}

/// Upper bound of x^r for scalar x > 0.
pub fn pow_point_up(x: f64, r: f64) -> f64 {
    pow_point(x, r).hi()
}

fn pow_point(x: f64, r: f64) -> Interval {
    debug_assert!(x > 0.0);
    (ln_point(x) * Interval::point(r)).exp()
}
