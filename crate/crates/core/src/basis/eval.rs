//! Shifted-Legendre recurrences.
//!
//! Q_n is the shifted Legendre polynomial on [0,1] (Q_n(x) = P_n(2x-1)),
//! computed together with its derivative by the differentiated three-term
//! recurrence. The H^1_0 basis functions are
//!
//!   phi_n(x) = x(1-x) Q_n'(x) / (n(n+1)),
//!
//! which satisfy phi_n' = -Q_n and phi_n'' = -Q_n' (both follow from the
//! Legendre differential equation), so one recurrence pass yields values
//! and two derivative orders at once.
//!
//! On [0,1] the classical bounds |Q_n| <= 1, |Q_n'| <= n(n+1) and
//! |phi_n| <= 1/(2n+1) hold; the last one from
//! phi_n = (Q_{n-1} - Q_{n+1}) / (2(2n+1)).

use crate::interval::Interval;

/// Q_n(x) and Q_n'(x) for n = 0..=n_max in interval arithmetic.
///
/// Sound for any interval x; enclosures are tight for thin arguments and
/// degrade for wide ones (the range machinery only ever passes centers).
pub fn q_and_dq(n_max: usize, x: Interval) -> (Vec<Interval>, Vec<Interval>) {
    let two = Interval::point(2.0);
    let s = two * x - Interval::ONE;
    let mut q = Vec::with_capacity(n_max + 1);
    let mut dq = Vec::with_capacity(n_max + 1);
    q.push(Interval::ONE);
    dq.push(Interval::ZERO);
    if n_max == 0 {
        return (q, dq);
    }
    q.push(s);
    dq.push(two);
    for n in 1..n_max {
        let a = Interval::point((2 * n + 1) as f64);
        let b = Interval::point(n as f64);
        let c = Interval::point((n + 1) as f64);
        let qn = (a * s * q[n] - b * q[n - 1]).div(c).unwrap();
        let dqn = (a * (two * q[n] + s * dq[n]) - b * dq[n - 1]).div(c).unwrap();
        q.push(qn);
        dq.push(dqn);
    }
    (q, dq)
}

/// phi_n(x) for n = 1..=n_max from precomputed Q' values.
pub fn phi_from_dq(x: Interval, dq: &[Interval]) -> Vec<Interval> {
    let weight = x * (Interval::ONE - x);
    (1..dq.len())
        .map(|n| {
            (weight * dq[n])
                .div(Interval::point((n * (n + 1)) as f64))
                .unwrap()
        })
        .collect()
}

/// Enclosure of phi_n(x), n >= 1.
pub fn phi_eval(n: usize, x: Interval) -> Interval {
    assert!(n >= 1, "basis functions are indexed from 1");
    let (_, dq) = q_and_dq(n, x);
    let weight = x * (Interval::ONE - x);
    (weight * dq[n])
        .div(Interval::point((n * (n + 1)) as f64))
        .unwrap()
}

/// Plain f64 recurrences for the non-rigorous solver path:
/// returns (Q_n, Q_n') for n = 0..=n_max.
pub fn q_and_dq_f64(n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let s = 2.0 * x - 1.0;
    let mut q = Vec::with_capacity(n_max + 1);
    let mut dq = Vec::with_capacity(n_max + 1);
    q.push(1.0);
    dq.push(0.0);
    if n_max == 0 {
        return (q, dq);
    }
    q.push(s);
    dq.push(2.0);
    for n in 1..n_max {
        let a = (2 * n + 1) as f64;
        let b = n as f64;
        let c = (n + 1) as f64;
        q.push((a * s * q[n] - b * q[n - 1]) / c);
        dq.push((a * (2.0 * q[n] + s * dq[n]) - b * dq[n - 1]) / c);
    }
    (q, dq)
}

/// (phi_n, phi_n', phi_n'') at a point, n = 1..=n_max, plain f64.
pub fn phi_table_f64(n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (q, dq) = q_and_dq_f64(n_max, x);
    let w = x * (1.0 - x);
    let mut phi = Vec::with_capacity(n_max);
    let mut dphi = Vec::with_capacity(n_max);
    let mut ddphi = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        phi.push(w * dq[n] / ((n * (n + 1)) as f64));
        dphi.push(-q[n]);
        ddphi.push(-dq[n]);
    }
    (phi, dphi, ddphi)
}

/// Upper bound for sup |phi_n| on [0,1]: 1/(2n+1), rounded up.
pub fn phi_sup_bound(n: usize) -> f64 {
    Interval::ONE
        .div(Interval::point((2 * n + 1) as f64))
        .unwrap()
        .hi()
}

/// Upper bound for sup |Q_n'| on [0,1]: n(n+1), exact for n in range.
pub fn dq_sup_bound(n: usize) -> f64 {
    (n * (n + 1)) as f64
}
