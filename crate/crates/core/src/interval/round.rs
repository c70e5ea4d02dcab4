//! Directed-rounding endpoint kernels.
//!
//! All arithmetic runs in the default round-to-nearest mode; the directed
//! result is recovered from the sign of the exact residual (two-sum for
//! sums, fma residuals for products, quotients and square roots). When the
//! residual cannot be trusted (overflow, underflow into the subnormal
//! range) the value is nudged one ulp outward instead. No rounding-mode
//! switching is performed, so these kernels are safe to call from any
//! thread.

/// Sign of `exact - returned` for a round-to-nearest result.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Residual {
    /// The returned value is the exact result.
    Exact,
    /// The exact result is strictly above the returned value.
    Above,
    /// The exact result is strictly below the returned value.
    Below,
    /// Nothing is known; nudge outward.
    Unknown,
}

/// Largest float strictly below `v`, mapping +inf to MAX.
///
/// For a round-to-nearest result `v`, `prev(v)` is always a strict lower
/// bound of the exact value: if the exact value were `<= prev(v)` it could
/// not have rounded to `v`.
#[inline]
fn prev(v: f64) -> f64 {
    if v == f64::INFINITY {
        f64::MAX
    } else {
        v.next_down()
    }
}

#[inline]
fn next(v: f64) -> f64 {
    if v == f64::NEG_INFINITY {
        f64::MIN
    } else {
        v.next_up()
    }
}

#[inline]
fn finish_down(v: f64, r: Residual) -> f64 {
    match r {
        Residual::Exact | Residual::Above => v,
        Residual::Below | Residual::Unknown => prev(v),
    }
}

#[inline]
fn finish_up(v: f64, r: Residual) -> f64 {
    match r {
        Residual::Exact | Residual::Below => v,
        Residual::Above | Residual::Unknown => next(v),
    }
}

/// Round-to-nearest sum plus residual sign via Knuth's two-sum.
#[inline]
fn sum_residual(a: f64, b: f64) -> (f64, Residual) {
    let s = a + b;
    if !s.is_finite() {
        // A genuinely infinite operand gives an exact infinite sum;
        // otherwise the sum overflowed and the true value lies beyond MAX.
        return if a.is_infinite() || b.is_infinite() {
            (s, Residual::Exact)
        } else if s == f64::INFINITY {
            (s, Residual::Below)
        } else {
            (s, Residual::Above)
        };
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if !err.is_finite() {
        return (s, Residual::Unknown);
    }
    let r = match err.partial_cmp(&0.0) {
        Some(std::cmp::Ordering::Greater) => Residual::Above,
        Some(std::cmp::Ordering::Less) => Residual::Below,
        _ => Residual::Exact,
    };
    (s, r)
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, r) = sum_residual(a, b);
    finish_down(s, r)
}

pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, r) = sum_residual(a, b);
    finish_up(s, r)
}

pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Round-to-nearest product plus residual sign via the fma residual.
///
/// The residual `a*b - p` is exactly representable (and exactly computed by
/// fma) whenever `p` is normal; outside that range we report Unknown.
#[inline]
fn prod_residual(a: f64, b: f64) -> (f64, Residual) {
    // Exact zero endpoints annihilate: the sup/inf of {x*y} over a set with
    // an endpoint pinned at 0 is attained at 0 even when the other side is
    // an infinite (unbounded) endpoint.
    if a == 0.0 || b == 0.0 {
        return (0.0, Residual::Exact);
    }
    let p = a * b;
    if !p.is_finite() {
        return if a.is_infinite() || b.is_infinite() {
            (p, Residual::Exact)
        } else if p == f64::INFINITY {
            (p, Residual::Below)
        } else {
            (p, Residual::Above)
        };
    }
    if !p.is_normal() {
        // Underflow: the fma residual is no longer guaranteed exact.
        return (p, Residual::Unknown);
    }
    let err = a.mul_add(b, -p);
    if !err.is_finite() {
        return (p, Residual::Unknown);
    }
    let r = match err.partial_cmp(&0.0) {
        Some(std::cmp::Ordering::Greater) => Residual::Above,
        Some(std::cmp::Ordering::Less) => Residual::Below,
        _ => Residual::Exact,
    };
    (p, r)
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    let (p, r) = prod_residual(a, b);
    finish_down(p, r)
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    let (p, r) = prod_residual(a, b);
    finish_up(p, r)
}

/// Round-to-nearest quotient plus residual sign. Requires `b != 0`.
#[inline]
fn quot_residual(a: f64, b: f64) -> (f64, Residual) {
    debug_assert!(b != 0.0);
    if a == 0.0 {
        return (0.0, Residual::Exact);
    }
    if b.is_infinite() {
        // Finite / unbounded endpoint: the limit is 0, a one-sided bound.
        return if a.is_infinite() {
            (0.0, Residual::Unknown)
        } else if (a > 0.0) == (b > 0.0) {
            (0.0, Residual::Above)
        } else {
            (0.0, Residual::Below)
        };
    }
    let q = a / b;
    if !q.is_finite() {
        return if a.is_infinite() {
            (q, Residual::Exact)
        } else if q == f64::INFINITY {
            (q, Residual::Below)
        } else {
            (q, Residual::Above)
        };
    }
    if q == 0.0 || !q.is_normal() {
        return (q, Residual::Unknown);
    }
    // r = q*b - a exactly; a/b - q = -r/b.
    let r = q.mul_add(b, -a);
    if !r.is_finite() {
        return (q, Residual::Unknown);
    }
    let res = if r == 0.0 {
        Residual::Exact
    } else if (r > 0.0) == (b > 0.0) {
        Residual::Below
    } else {
        Residual::Above
    };
    (q, res)
}

pub fn div_down(a: f64, b: f64) -> f64 {
    let (q, r) = quot_residual(a, b);
    finish_down(q, r)
}

pub fn div_up(a: f64, b: f64) -> f64 {
    let (q, r) = quot_residual(a, b);
    finish_up(q, r)
}

/// Round-to-nearest square root plus residual sign. Requires `x >= 0`.
#[inline]
fn sqrt_residual(x: f64) -> (f64, Residual) {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return (0.0, Residual::Exact);
    }
    if x.is_infinite() {
        return (f64::INFINITY, Residual::Exact);
    }
    let s = x.sqrt();
    if !s.is_normal() {
        return (s, Residual::Unknown);
    }
    // r = s*s - x exactly; sqrt(x) - s has the opposite sign.
    let r = s.mul_add(s, -x);
    if !r.is_finite() {
        return (s, Residual::Unknown);
    }
    let res = match r.partial_cmp(&0.0) {
        Some(std::cmp::Ordering::Greater) => Residual::Below,
        Some(std::cmp::Ordering::Less) => Residual::Above,
        _ => Residual::Exact,
    };
    (s, res)
}

pub fn sqrt_down(x: f64) -> f64 {
    let (s, r) = sqrt_residual(x);
    finish_down(s, r).max(0.0)
}

pub fn sqrt_up(x: f64) -> f64 {
    let (s, r) = sqrt_residual(x);
    finish_up(s, r)
}
