//! Basis evaluation against an exact rational oracle.
//!
//! The oracle runs the shifted-Legendre recurrences in BigRational
//! arithmetic at exactly-representable points, so every comparison is
//! against the true polynomial value.

mod common;

use common::rational_of;
use nodalcert_core::basis::{phi_eval, CoefficientField, Rectangle};
use nodalcert_core::Interval;
use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact phi_n(x) for rational x: Q and Q' recurrences, then
/// x(1-x) Q_n'(x) / (n(n+1)).
fn phi_exact(n: usize, x: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = &one + &one;
    let s = &two * x - &one;
    let mut q_prev = BigRational::one();
    let mut q = s.clone();
    let mut dq_prev = BigRational::zero();
    let mut dq = two.clone();
    if n == 0 {
        unreachable!("basis indices start at 1");
    }
    for m in 1..n {
        let a = BigRational::from_integer((2 * m + 1).into());
        let b = BigRational::from_integer(m.into());
        let c = BigRational::from_integer((m + 1).into());
        let q_next = (&a * &s * &q - &b * &q_prev) / &c;
        let dq_next = (&a * (&two * &q + &s * &dq) - &b * &dq_prev) / &c;
        q_prev = q;
        q = q_next;
        dq_prev = dq;
        dq = dq_next;
    }
    let weight = x * &(&one - x);
    weight * dq / BigRational::from_integer((n * (n + 1)).into())
}

#[test]
fn phi_point_values_contain_exact_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBA515);
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(0.0..=1.0);
        let xr = rational_of(x);
        for n in 1..=20 {
            let enclosure = phi_eval(n, Interval::point(x));
            let exact = phi_exact(n, &xr);
            assert!(
                common::contains_rational(&enclosure, &exact),
                "phi_{n}({x}) = {enclosure} misses the exact value"
            );
        }
    }
}

#[test]
fn phi_enclosures_stay_tight_at_degree_20() {
    for k in 0..=50 {
        let x = k as f64 / 50.0;
        let v = phi_eval(20, Interval::point(x));
        assert!(v.width() < 1e-10, "width {} at {x}", v.width());
    }
}

/// Random tensor fields: the rigorous cell range must contain exact values
/// of the field at exactly-representable points of the cell.
#[test]
fn uhat_range_contains_exact_tensor_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    for _ in 0..40 {
        let mu = rng.gen_range(1..=8usize);
        let coeffs: Vec<f64> = (0..mu * mu).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let field = CoefficientField::new(mu, coeffs.clone(), Rectangle::unit_square()).unwrap();
        let x0: f64 = rng.gen_range(0.0..0.9);
        let x1: f64 = rng.gen_range(x0..1.0);
        let y0: f64 = rng.gen_range(0.0..0.9);
        let y1: f64 = rng.gen_range(y0..1.0);
        let cell = Rectangle::new(x0, x1.max(x0 + 1e-6), y0, y1.max(y0 + 1e-6)).unwrap();
        let range = field.uhat_range(&cell).unwrap();
        for _ in 0..20 {
            let px: f64 = rng.gen_range(cell.ax..=cell.bx);
            let py: f64 = rng.gen_range(cell.ay..=cell.by);
            let mut exact = BigRational::zero();
            let pxr = rational_of(px);
            let pyr = rational_of(py);
            for i in 0..mu {
                for j in 0..mu {
                    exact += rational_of(coeffs[i * mu + j])
                        * phi_exact(i + 1, &pxr)
                        * phi_exact(j + 1, &pyr);
                }
            }
            assert!(
                common::contains_rational(&range, &exact),
                "field value at ({px},{py}) escapes {range}"
            );
        }
    }
}

#[test]
fn lp_upper_phi1_tensor_against_quadrature_oracle() {
    // ||phi1 x phi1||_{L^4} over (0,1)^2 has the closed form
    // (int_0^1 t^4 (1-t)^4 dt)^(1/2) = (1/630)^(1/2) via the Beta function.
    let field = CoefficientField::new(1, vec![1.0], Rectangle::unit_square()).unwrap();
    // full dyadic partition at m = 10: 32 x 32 cells
    let n = 32;
    let mut cells = Vec::new();
    for i in 0..n {
        for j in 0..n {
            cells.push(
                Rectangle::new(
                    i as f64 / n as f64,
                    (i + 1) as f64 / n as f64,
                    j as f64 / n as f64,
                    (j + 1) as f64 / n as f64,
                )
                .unwrap(),
            );
        }
    }
    let bound = field.lp_norm_upper(&cells, 4.0).unwrap();
    let exact = (1.0f64 / 630.0).sqrt();
    assert!(bound >= exact, "upper bound {bound} below true norm {exact}");
    assert!(
        bound <= 1.10 * exact,
        "upper bound {bound} more than 10% above {exact}"
    );
}

/// Refining a partition once never increases the bound by more than
/// rounding slack, and the bound stays above a sampling lower estimate.
#[test]
fn lp_upper_refinement_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x17);
    let mu = 5;
    let coeffs: Vec<f64> = (0..mu * mu).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let field = CoefficientField::new(mu, coeffs, Rectangle::unit_square()).unwrap();
    let partition = |n: u32| -> Vec<Rectangle> {
        let mut cells = Vec::new();
        for i in 0..n {
            for j in 0..n {
                cells.push(
                    Rectangle::new(
                        i as f64 / n as f64,
                        (i + 1) as f64 / n as f64,
                        j as f64 / n as f64,
                        (j + 1) as f64 / n as f64,
                    )
                    .unwrap(),
                );
            }
        }
        cells
    };
    let coarse = field.lp_norm_upper(&partition(8), 4.0).unwrap();
    let fine = field.lp_norm_upper(&partition(16), 4.0).unwrap();
    assert!(fine <= coarse * (1.0 + 1e-12), "{fine} > {coarse}");

    // Sampling lower estimate of the norm.
    let mut sum = 0.0;
    let s = 200;
    for i in 0..s {
        for j in 0..s {
            let v = field.point_eval((i as f64 + 0.5) / s as f64, (j as f64 + 0.5) / s as f64);
            sum += v.abs().powi(4) / (s * s) as f64;
        }
    }
    let sampled = sum.powf(0.25);
    assert!(fine >= sampled * (1.0 - 1e-6), "{fine} < sampled {sampled}");
}
