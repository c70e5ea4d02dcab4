//! Acceptance suite: one test per criterion, each printing a PASS line
//! after its assertions (run with --nocapture to see them; the harness
//! result line per test doubles as the pass/fail record).

mod common;

use common::fixtures;
use common::{contains_rational, random_f64, random_subinterval, rational_of};
use nodalcert_core::basis::{CoefficientField, Rectangle};
use nodalcert_core::constants::{
    cm_tau, embed_plum_upper, lambda1_lower_corollary, liyau_lower, talenti_constant, EigenLower,
    EigenMethod,
};
use nodalcert_core::grid::{
    classify, grid_dims, label_components, region_volume_upper, CellClassification, CellLabel,
};
use nodalcert_core::interval::Interval;
use nodalcert_core::solver::{
    defect_estimate, heuristic_error, newton_galerkin, FKind, InitialGuess, SolveConfig,
};
use nodalcert_core::verifier::{
    allen_cahn_condition, nd_bounds, verify_allen_cahn, verify_dirichlet_on_classification,
    ConstantsPolicy, CountBound, NonlinearityBound, Rounding,
};
use num::{BigRational, FromPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn known(b: CountBound) -> u64 {
    match b {
        CountBound::Known(n) => n,
        CountBound::Unbounded => panic!("expected a finite count bound"),
    }
}

/// Criterion 1: Table replay of the Allen-Cahn condition for solution
/// type (C); perturbing the eigenvalue below eps^-2 flips the verdict.
/// Runtime under one second.
#[test]
fn acceptance_01_condition_replay() {
    let start = Instant::now();
    let rows = [(0.1, 704.7), (0.08, 574.1), (0.06, 459.0)];
    let mut outcomes = Vec::new();
    for (eps, lam) in rows {
        let eig = EigenLower {
            value: lam,
            method: EigenMethod::UserSupplied {
                provenance: "replayed verification table".into(),
            },
            domain_volume: f64::NAN,
        };
        let out = allen_cahn_condition(eps, &eig).unwrap();
        assert!(out.holds, "eps = {eps}: {} vs {}", out.lhs.value, out.rhs.value);
        outcomes.push(out);
    }
    // eps^-2 values 100.0, 156.3 (stated upper bound), 277.8 must appear
    assert!((outcomes[0].lhs.value - 100.0).abs() < 1e-9);
    assert!(outcomes[1].lhs.value <= 156.3 && outcomes[1].lhs.value > 156.2);
    assert!(outcomes[2].lhs.value <= 277.8 && outcomes[2].lhs.value > 277.7);
    for (eps, lam) in rows {
        let eps2 = 1.0 / (eps * eps);
        let eig = EigenLower {
            value: eps2 * 0.999, // perturbed below eps^-2
            method: EigenMethod::UserSupplied {
                provenance: "perturbed".into(),
            },
            domain_volume: f64::NAN,
        };
        let out = allen_cahn_condition(eps, &eig).unwrap();
        assert!(!out.holds, "perturbed eps = {eps}, lam = {lam} must fail");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 PASS: condition replay certified 3/3, perturbations rejected, {elapsed:?}");
}

/// Criterion 2: hand-built classifications with the three published
/// topologies reproduce the count-bound rows exactly.
#[test]
fn acceptance_02_count_bound_replay() {
    let cases = [
        (fixtures::type_a_classification(), (1, 1), (1, 2), (2, 3)),
        (fixtures::type_b_classification(), (1, 2), (1, 2), (2, 4)),
        (fixtures::type_c_classification(), (1, 1), (1, 1), (2, 2)),
    ];
    for (i, (cls, pnd, nnd, nd)) in cases.into_iter().enumerate() {
        let b = nd_bounds(&cls).unwrap();
        assert_eq!((known(b.pnd.lower), known(b.pnd.upper)), pnd, "type {i}");
        assert_eq!((known(b.nnd.lower), known(b.nnd.upper)), nnd, "type {i}");
        assert_eq!((known(b.nd.lower), known(b.nd.upper)), nd, "type {i}");
    }
    println!("ACCEPTANCE 2 PASS: nd bounds [2,3], [2,4], [2,2] reproduced");
}

/// Criterion 3: closed-form constants at their stated tolerances.
#[test]
fn acceptance_03_closed_form_constants() {
    let one_over_pi = 0.3183098861837907;
    let t4 = talenti_constant(4.0, 2).unwrap();
    assert!((t4 - one_over_pi).abs() <= 1e-6, "T_4 = {t4}");

    let inv_sqrt_2pi = 0.3989422804014327;
    let c4 = embed_plum_upper(4.0, 2, 2.0 * std::f64::consts::PI.powi(2), 0.0).unwrap();
    assert!((c4 - inv_sqrt_2pi).abs() <= 1e-6, "C_4 = {c4}");

    let two_pi = 6.283185307179586;
    let lam = liyau_lower(1, 2, 1.0).unwrap();
    assert!((lam - two_pi).abs() <= 1e-12, "lambda = {lam}");
    assert!(lam <= 2.0 * std::f64::consts::PI.powi(2));

    let cm = cm_tau(6.0e-3, 102.3).unwrap();
    assert!((cm - 6.0111e-3).abs() <= 1e-6, "C^tau(M) = {cm}");
    println!("ACCEPTANCE 3 PASS: T_4, Plum C_4, Li-Yau, C^tau(M) at stated tolerances");
}

/// Criterion 4: cell-union volumes against exact rational arithmetic for
/// a thousand random (k, m).
#[test]
fn acceptance_04_volume_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    for trial in 0..1000 {
        let m: u32 = rng.gen_range(0..=24);
        let total = 1u64 << m;
        let k: u64 = rng.gen_range(0..=total.min(1 << 15));
        let (nx, ny) = grid_dims(m);
        let cls = CellClassification::from_labels_with_synthetic_ranges(
            m,
            vec![CellLabel::Undetermined; (nx * ny) as usize],
            0.0,
            Rectangle::unit_square(),
        )
        .unwrap();
        let cells: Vec<u32> = (0..k as u32).collect();
        let vol = region_volume_upper(&cls, &cells);
        let exact = BigRational::from_u64(k).unwrap() / BigRational::from_u64(total).unwrap();
        let got = BigRational::from_f64(vol).unwrap();
        assert!(got >= exact, "trial {trial}: {vol} below {k}/2^{m}");
        assert_eq!(got, exact, "trial {trial}: k 2^-m is exact here");
    }
    println!("ACCEPTANCE 4 PASS: 1000 exact-rational volume checks");
}

/// Criterion 5: union-find component counts equal an independent flood
/// fill on a thousand random 64x64 labelings, both adjacencies.
#[test]
fn acceptance_05_component_oracle() {
    fn flood(nx: usize, ny: usize, sel: &[bool], diagonal: bool) -> usize {
        let mut seen = vec![false; sel.len()];
        let mut count = 0;
        for start in 0..sel.len() {
            if !sel[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(cell) = stack.pop() {
                let (i, j) = ((cell % nx) as isize, (cell / nx) as isize);
                let mut nb = vec![(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)];
                if diagonal {
                    nb.extend([(i - 1, j - 1), (i + 1, j - 1), (i - 1, j + 1), (i + 1, j + 1)]);
                }
                for (a, b) in nb {
                    if a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
                        continue;
                    }
                    let n = (b * nx as isize + a) as usize;
                    if sel[n] && !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        count
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0C0);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let density: f64 = rng.gen_range(0.15..0.85);
        let sel: Vec<bool> = (0..64 * 64).map(|_| rng.gen_bool(density)).collect();
        for diagonal in [false, true] {
            if label_components(64, 64, &sel, diagonal).len() != flood(64, 64, &sel, diagonal) {
                mismatches += 1;
            }
        }
    }
    assert_eq!(mismatches, 0);
    println!("ACCEPTANCE 5 PASS: 1000 labelings x 2 adjacencies, zero mismatches");
}

/// Criterion 6: one million exact-rational containment trials per
/// arithmetic operation, plus an inclusion-isotonicity sweep.
#[test]
fn acceptance_06_interval_soundness() {
    let trials = 1_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x1501);
    let mut done_div = 0usize;
    for i in 0..trials {
        let (x, y) = (random_f64(&mut rng), random_f64(&mut rng));
        let (ix, iy) = (Interval::point(x), Interval::point(y));
        let (rx, ry) = (rational_of(x), rational_of(y));
        assert!(contains_rational(&(ix + iy), &(rx.clone() + ry.clone())), "add {i}");
        assert!(contains_rational(&(ix - iy), &(rx.clone() - ry.clone())), "sub {i}");
        assert!(contains_rational(&(ix * iy), &(rx.clone() * ry.clone())), "mul {i}");
        if y != 0.0 {
            assert!(contains_rational(&ix.div(iy).unwrap(), &(rx / ry)), "div {i}");
            done_div += 1;
        }
    }
    // top up the division count to a full million
    while done_div < trials {
        let (x, y) = (random_f64(&mut rng), random_f64(&mut rng));
        if y == 0.0 {
            continue;
        }
        let r = Interval::point(x).div(Interval::point(y)).unwrap();
        assert!(contains_rational(&r, &(rational_of(x) / rational_of(y))));
        done_div += 1;
    }
    // isotonicity sweep over random nested operands
    for _ in 0..20_000 {
        let a = common::random_interval(&mut rng);
        let b = common::random_interval(&mut rng);
        let sa = random_subinterval(&mut rng, &a);
        let sb = random_subinterval(&mut rng, &b);
        assert!((a + b).contains_interval(&(sa + sb)));
        assert!((a - b).contains_interval(&(sa - sb)));
        assert!((a * b).contains_interval(&(sa * sb)));
        if !b.contains(0.0) {
            assert!(a.div(b).unwrap().contains_interval(&sa.div(sb).unwrap()));
        }
    }
    println!("ACCEPTANCE 6 PASS: 1e6 containment trials per op, isotonicity sweep clean");
}

/// Criterion 7: |Omega_0| upper bounds are non-increasing along
/// m = 8, 10, 12, 14 for twenty random coefficient fields.
#[test]
fn acceptance_07_nesting_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4E5);
    for trial in 0..20 {
        let mu = rng.gen_range(2..=6usize);
        let coeffs: Vec<f64> = (0..mu * mu).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let field = CoefficientField::new(mu, coeffs, Rectangle::unit_square()).unwrap();
        let sigma: f64 = rng.gen_range(0.0..0.2);
        let mut prev = f64::INFINITY;
        for m in [8u32, 10, 12, 14] {
            let cls = classify(&field, sigma, m).unwrap();
            let cells = cls.cell_indices_with(CellLabel::Undetermined);
            let vol = region_volume_upper(&cls, &cells);
            assert!(
                vol <= prev * (1.0 + 1e-12),
                "trial {trial}: grew from {prev} to {vol} at m = {m}"
            );
            prev = vol;
        }
    }
    println!("ACCEPTANCE 7 PASS: |Omega_0| non-increasing over m = 8,10,12,14 on 20 fields");
}

/// Criterion 8: the desk-scale end-to-end run. Allen-Cahn eps = 0.1,
/// pattern C, M_u = 40, m = 14, heuristic sigma below 1e-3; finishes
/// well inside five minutes, certifies nd = [2,2], and the interior
/// annulus does not touch the boundary.
#[test]
fn acceptance_08_end_to_end_desk_scale() {
    let start = Instant::now();
    let mut cfg = SolveConfig::new(40, FKind::AllenCahn { epsilon: 0.1 }, InitialGuess::PatternC);
    cfg.max_iters = 60;
    let field = newton_galerkin(&cfg).unwrap();
    let tau = 350.0;
    let delta = defect_estimate(&field, &cfg.f_kind, tau, cfg.quadrature_order);
    let h = heuristic_error(delta, 15.0, &cfg.f_kind, &field, tau, 2.0).unwrap();
    assert!(h.sigma <= 1e-3, "heuristic sigma {} too large", h.sigma);
    assert!(!h.certified);

    let report = verify_allen_cahn(&field, h.rho, h.sigma, 0.1, 14).unwrap();
    assert!(report.certified(), "{:?}", report.failure);
    assert_eq!(known(report.nd.lower), 2);
    assert_eq!(known(report.nd.upper), 2);

    // the interior annulus: one Omega_0 component away from the boundary
    let cls = classify(&field, h.sigma, 14).unwrap();
    let zero = nodalcert_core::grid::region_components(
        &cls,
        nodalcert_core::grid::Region::ZeroRegion,
        nodalcert_core::grid::Adjacency::EdgeAndCorner,
    )
    .unwrap();
    let (nx, ny) = cls.dims();
    let interior_components = zero
        .components
        .iter()
        .filter(|cells| {
            cells.iter().all(|&c| {
                let (i, j) = (c % nx, c / nx);
                i != 0 && j != 0 && i != nx - 1 && j != ny - 1
            })
        })
        .count();
    assert_eq!(interior_components, 1, "exactly one interior annulus");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 8 PASS: nd = [2,2], sigma = {:.2e}, interior annulus confirmed, {elapsed:?}",
        h.sigma
    );
}

/// Criterion 9: the mixed-boundary fixture routes exactly one component
/// to Case 2, refuses certification without a user eigenvalue when
/// lambda > 0, and certifies when lambda <= 0.
#[test]
fn acceptance_09_mixed_routing() {
    use nodalcert_core::verifier::{verify_mixed_on_classification, PowerTerm, VerifyError};
    use std::collections::HashMap;

    let (cls, bc) = fixtures::fig5_style_fixture();
    let field = CoefficientField::new(1, vec![0.0], Rectangle::unit_square()).unwrap();
    let term = vec![PowerTerm {
        coeff: 1.0,
        exponent: 3.0,
    }];

    // lambda > 0 without user lambda_1: refused with the right component.
    let nl_pos = NonlinearityBound::new(0.5, term.clone(), None, 2).unwrap();
    let err = verify_mixed_on_classification(
        &field,
        &cls,
        1e-8,
        &nl_pos,
        &bc,
        &HashMap::new(),
        ConstantsPolicy::Mizuguchi,
    )
    .unwrap_err();
    assert!(matches!(err, VerifyError::MissingUserLambda1(2)));

    // lambda <= 0: certified, and exactly one Case-2 component.
    let nl_neg = NonlinearityBound::new(-1.0, term, None, 2).unwrap();
    let report = verify_mixed_on_classification(
        &field,
        &cls,
        1e-8,
        &nl_neg,
        &bc,
        &HashMap::new(),
        ConstantsPolicy::Mizuguchi,
    )
    .unwrap();
    assert!(report.certified(), "{:?}", report.failure);
    let case2 = report
        .per_component
        .iter()
        .filter(|c| c.case == nodalcert_core::verifier::ComponentCase::MixedCase2)
        .count();
    assert_eq!(case2, 1);
    println!("ACCEPTANCE 9 PASS: one Case-2 component, refusal and certification as specified");
}

/// Criterion 10: the rounding audit over the certificate traces of the
/// replay, the count fixtures and the end-to-end run.
#[test]
fn acceptance_10_rounding_audit() {
    // run 1 trace: the replay outcomes carry up/down tags
    let eig = EigenLower {
        value: 704.7,
        method: EigenMethod::UserSupplied {
            provenance: "replayed".into(),
        },
        domain_volume: f64::NAN,
    };
    let out = allen_cahn_condition(0.1, &eig).unwrap();
    assert_eq!(out.lhs.rounding, Rounding::Up);
    assert_eq!(out.rhs.rounding, Rounding::Down);

    // run 2 trace: push the type fixtures through the Dirichlet checker
    // so each component emits a tagged certificate, then audit.
    let field = CoefficientField::new(1, vec![0.0], Rectangle::unit_square()).unwrap();
    let nl = NonlinearityBound::emden(0.0, 3.0, 2).unwrap();
    for cls in [
        fixtures::type_a_classification(),
        fixtures::type_b_classification(),
        fixtures::type_c_classification(),
    ] {
        let report = verify_dirichlet_on_classification(
            &field,
            &cls,
            1e-8,
            &nl,
            ConstantsPolicy::MinTalentiPlum,
        )
        .unwrap();
        report.audit_rounding().unwrap();
        assert!(!report.per_component.is_empty());
    }

    // run 8 trace: a fast stand-in with the same code path (mu = 30,
    // m = 12) plus the audit of every tagged pair.
    let mut cfg = SolveConfig::new(30, FKind::AllenCahn { epsilon: 0.1 }, InitialGuess::PatternC);
    cfg.max_iters = 60;
    let field = newton_galerkin(&cfg).unwrap();
    let report = verify_allen_cahn(&field, 1e-9, 1e-4, 0.1, 12).unwrap();
    report.audit_rounding().unwrap();
    for c in &report.per_component {
        assert_eq!(c.lhs.rounding, Rounding::Up);
        assert_eq!(c.rhs.rounding, Rounding::Down);
    }
    println!("ACCEPTANCE 10 PASS: every LHS tagged up, every RHS tagged down");
}
