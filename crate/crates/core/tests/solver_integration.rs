//! Solver integration: branch sign structures and defect convergence for
//! the Allen-Cahn demos.

use nodalcert_core::grid::{classify, region_components, Adjacency, Region};
use nodalcert_core::solver::{
    defect_estimate, newton_galerkin, FKind, InitialGuess, SolveConfig,
};

fn solve_allen_cahn(mu: usize, pattern: InitialGuess) -> nodalcert_core::basis::CoefficientField {
    let mut cfg = SolveConfig::new(mu, FKind::AllenCahn { epsilon: 0.1 }, pattern);
    cfg.max_iters = 60;
    newton_galerkin(&cfg).expect("Newton converges on the demo branch")
}

#[test]
fn pattern_a_reaches_a_two_lobe_sign_structure() {
    let field = solve_allen_cahn(30, InitialGuess::PatternA);
    let cls = classify(&field, 1e-3, 12).unwrap();
    let plus = region_components(&cls, Region::PlusRegion, Adjacency::EdgeOnly).unwrap();
    let minus = region_components(&cls, Region::MinusRegion, Adjacency::EdgeOnly).unwrap();
    assert_eq!(plus.count(), 1, "one positive lobe");
    assert!(
        (1..=2).contains(&minus.count()),
        "one-or-two negative regions, got {}",
        minus.count()
    );
}

#[test]
fn pattern_b_reaches_a_quadrant_sign_structure() {
    let field = solve_allen_cahn(30, InitialGuess::PatternB);
    let cls = classify(&field, 1e-3, 12).unwrap();
    let plus = region_components(&cls, Region::PlusRegion, Adjacency::EdgeOnly).unwrap();
    let minus = region_components(&cls, Region::MinusRegion, Adjacency::EdgeOnly).unwrap();
    assert_eq!(plus.count(), 2);
    assert_eq!(minus.count(), 2);
}

#[test]
fn pattern_c_reaches_the_ring_sign_structure() {
    let field = solve_allen_cahn(30, InitialGuess::PatternC);
    let cls = classify(&field, 1e-3, 12).unwrap();
    let plus = region_components(&cls, Region::PlusRegion, Adjacency::EdgeOnly).unwrap();
    let minus = region_components(&cls, Region::MinusRegion, Adjacency::EdgeOnly).unwrap();
    let zero = region_components(&cls, Region::ZeroRegion, Adjacency::EdgeAndCorner).unwrap();
    assert_eq!(plus.count(), 1, "positive core");
    assert_eq!(minus.count(), 1, "negative annulus");
    // interior nodal ring plus the boundary band
    assert_eq!(zero.count(), 2);
}

#[test]
fn defect_decreases_by_a_decade_from_mu_20_to_40() {
    let f = FKind::AllenCahn { epsilon: 0.1 };
    let d20 = {
        let field = solve_allen_cahn(20, InitialGuess::PatternC);
        defect_estimate(&field, &f, 0.0, 48)
    };
    let d40 = {
        let field = solve_allen_cahn(40, InitialGuess::PatternC);
        defect_estimate(&field, &f, 0.0, 88)
    };
    assert!(
        d40 <= d20 / 10.0,
        "defect did not converge: {d20} at mu=20 vs {d40} at mu=40"
    );
}
