//! Sign-structure verification: evaluates the no-nodal-domain-in-Omega_0
//! conditions over a cell classification and emits certified bounds on the
//! number of nodal domains.
//!
//! The certified chain per undetermined component Omega_0^j is
//!
//!   sum_i a_i C_{p_i+1}(Omega_0^j)^2
//!        (||u_hat||_{L^{p_i+1}(Omega_0^j)} + inflation_i)^(p_i - 1)
//!     <  1 - lambda / lambda_1(Omega_0^j),
//!
//! with inflation C_{p_i+1}(Omega) rho for the H^1_0 route and
//! sigma |Omega_0^j|^{1/(p_i+1)} for the L^inf-only route. Every left-hand
//! quantity is an upper bound and every right-hand quantity a lower bound,
//! and a condition that only reaches equality after rounding is reported
//! as not certified.
//!
//! Count bounds: certified runs report
//! [#C.C.(Omega_+ u Omega_0), #C.C.(Omega_+)] for the positive count (and
//! symmetrically for the negative one), where the lower end counts only
//! closed components that contain a certified-sign cell. Components of
//! Omega_+ u Omega_0 without any Plus cell cannot be shown to contain a
//! positive nodal domain, so counting them would overstate the lower
//! bound; with them excluded the lower bound holds unconditionally (each
//! such component contains a certified u > 0 point, and distinct
//! components separate nodal domains). Uncertified runs still report these
//! lower bounds, with the upper ends unbounded.

mod report;

pub use report::{
    CheckOutcome, ComponentCase, ComponentCertificate, ConstantRecord, CountBound, CountRange,
    InputsEcho, NodalReport, Rounding, TaggedValue, TheoremUsed, Verdict,
};

use crate::basis::{BasisError, CoefficientField};
use crate::constants::{
    self, ConstantsError, EigenLower, EmbedMethod,
};
use crate::grid::{
    self, boundary_contact, region_components, region_volume_upper, Adjacency, BoundarySpec,
    CellClassification, CellLabel, GridError, Region,
};
use crate::interval::{Interval, IntervalError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid nonlinearity bound: {0}")]
    InvalidBound(String),
    #[error("invalid exponent p = {0}: must lie in (1, p*)")]
    InvalidExponent(f64),
    #[error("assumption violation: {0}")]
    AssumptionViolation(String),
    #[error(
        "nonlinearity range [{range_lo}, {range_hi}] does not cover the certified \
         solution range [{need_lo}, {need_hi}]"
    )]
    RangeViolation {
        range_lo: f64,
        range_hi: f64,
        need_lo: f64,
        need_hi: f64,
    },
    #[error(
        "component {0} meets the Neumann boundary with positive measure and lambda > 0; \
         a user-supplied lambda_1 lower bound is required"
    )]
    MissingUserLambda1(usize),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// One power term a |t|^(p+1) of the nonlinearity inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

/// The data of the inequality t f(t) <= lambda t^2 + sum_i a_i |t|^(p_i+1),
/// optionally valid only on a stated range of t.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearityBound {
    pub lambda: f64,
    pub terms: Vec<PowerTerm>,
    pub range: Option<(f64, f64)>,
    pub n_dim: u32,
}

impl NonlinearityBound {
    pub fn p_star(n_dim: u32) -> f64 {
        if n_dim <= 2 {
            f64::INFINITY
        } else {
            (n_dim as f64 + 2.0) / (n_dim as f64 - 2.0)
        }
    }

    pub fn new(
        lambda: f64,
        terms: Vec<PowerTerm>,
        range: Option<(f64, f64)>,
        n_dim: u32,
    ) -> Result<Self, VerifyError> {
        if !lambda.is_finite() {
            return Err(VerifyError::InvalidBound(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        let p_star = Self::p_star(n_dim);
        for t in &terms {
            if !(t.coeff >= 0.0) || !t.coeff.is_finite() {
                return Err(VerifyError::InvalidBound(format!(
                    "coefficients must be nonnegative, got {}",
                    t.coeff
                )));
            }
            if !(t.exponent > 1.0 && t.exponent < p_star) {
                return Err(VerifyError::InvalidExponent(t.exponent));
            }
        }
        if let Some((lo, hi)) = range {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(VerifyError::InvalidBound(format!(
                    "invalid validity range [{lo}, {hi}]"
                )));
            }
        }
        Ok(NonlinearityBound {
            lambda,
            terms,
            range,
            n_dim,
        })
    }

    /// Allen-Cahn: t f(t) <= eps^-2 t^2, no power terms. The coefficient
    /// eps^-2 is rounded up so it remains a valid bound.
    pub fn allen_cahn(epsilon: f64) -> Result<Self, VerifyError> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(VerifyError::InvalidBound(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        let eps2 = Interval::ONE
            .div(Interval::point(epsilon) * Interval::point(epsilon))?
            .hi();
        NonlinearityBound::new(eps2, vec![], None, 2)
    }

    /// f(t) = lambda t + t |t|^(p-1): a single term with coefficient 1.
    pub fn emden(lambda: f64, p: f64, n_dim: u32) -> Result<Self, VerifyError> {
        NonlinearityBound::new(
            lambda,
            vec![PowerTerm {
                coeff: 1.0,
                exponent: p,
            }],
            None,
            n_dim,
        )
    }
}

/// How the source policy picks the whole-domain embedding constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantsPolicy {
    /// min of the Talenti-based and the spectral (tau = 0) bound.
    MinTalentiPlum,
    TalentiOnly,
    PlumOnly,
    /// The partition-based bound; required when Gamma_N is nonempty.
    Mizuguchi,
}

impl Default for ConstantsPolicy {
    fn default() -> Self {
        ConstantsPolicy::MinTalentiPlum
    }
}

/// User-supplied eigenvalue lower bound for a Case-2 component.
#[derive(Debug, Clone)]
pub struct UserLambda {
    pub value: f64,
    pub provenance: String,
}

/// Strict smallness check of the triviality condition
/// sum_i a_i C_i^2 ||u||_i^(p_i - 1) < 1 - lambda/lambda_1.
pub fn check_smallness(
    nl: &NonlinearityBound,
    lambda1_lower: f64,
    cp_uppers: &[f64],
    norm_uppers: &[f64],
) -> Result<CheckOutcome, VerifyError> {
    if cp_uppers.len() != nl.terms.len() || norm_uppers.len() != nl.terms.len() {
        return Err(VerifyError::InvalidBound(
            "one embedding constant and one norm bound per term required".into(),
        ));
    }
    let mut lhs = Interval::ZERO;
    for ((term, &c), &norm) in nl.terms.iter().zip(cp_uppers).zip(norm_uppers) {
        let c_iv = Interval::point(c);
        let norm_iv = Interval::point(norm.max(0.0));
        let powed = norm_iv.pow(term.exponent - 1.0)?;
        lhs = lhs + Interval::point(term.coeff) * c_iv * c_iv * powed;
    }
    let rhs = rhs_lower(nl.lambda, lambda1_lower)?;
    let lhs_up = lhs.hi();
    Ok(CheckOutcome {
        holds: lhs_up < rhs,
        lhs: TaggedValue::up(lhs_up),
        rhs: TaggedValue::down(rhs),
    })
}

/// Lower bound of 1 - lambda/lambda_1 given only a lower bound of
/// lambda_1. For lambda <= 0 the quotient is conservatively dropped
/// (the bound 1 is valid since lambda/lambda_1 <= 0).
fn rhs_lower(lambda: f64, lambda1_lower: f64) -> Result<f64, VerifyError> {
    if lambda <= 0.0 {
        return Ok(1.0);
    }
    if !(lambda1_lower > 0.0) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok((Interval::ONE - Interval::point(lambda).div(Interval::point(lambda1_lower))?).lo())
}

/// Allen-Cahn condition eps^-2 < lambda_1(Omega_0^j) against a certified
/// eigenvalue lower bound; the Table-replay entry point.
pub fn allen_cahn_condition(
    epsilon: f64,
    lambda1: &EigenLower,
) -> Result<CheckOutcome, VerifyError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(VerifyError::InvalidBound(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let eps2_up = Interval::ONE
        .div(Interval::point(epsilon) * Interval::point(epsilon))?
        .hi();
    Ok(CheckOutcome {
        holds: eps2_up < lambda1.value,
        lhs: TaggedValue::up(eps2_up),
        rhs: TaggedValue::down(lambda1.value),
    })
}

/// Certified nodal-domain count bounds from a classification.
///
/// Precondition (not checkable here): the caller has certified that no
/// nodal domain lies inside Omega_0. This function only counts.
pub struct NdBounds {
    pub pnd: CountRange,
    pub nnd: CountRange,
    pub nd: CountRange,
}

pub fn nd_bounds(cls: &CellClassification) -> Result<NdBounds, VerifyError> {
    let counts = count_bounds(cls)?;
    Ok(NdBounds {
        pnd: CountRange::known(counts.pnd_lower, counts.pnd_upper),
        nnd: CountRange::known(counts.nnd_lower, counts.nnd_upper),
        nd: CountRange::known(
            counts.pnd_lower + counts.nnd_lower,
            counts.pnd_upper + counts.nnd_upper,
        ),
    })
}

struct RawCounts {
    pnd_lower: u64,
    pnd_upper: u64,
    nnd_lower: u64,
    nnd_upper: u64,
}

fn count_bounds(cls: &CellClassification) -> Result<RawCounts, VerifyError> {
    let pnd_upper = region_components(cls, Region::PlusRegion, Adjacency::EdgeOnly)?.count() as u64;
    let nnd_upper =
        region_components(cls, Region::MinusRegion, Adjacency::EdgeOnly)?.count() as u64;
    let pnd_lower = closed_components_with_sign(cls, Region::PlusUnionZero, CellLabel::Plus)?;
    let nnd_lower = closed_components_with_sign(cls, Region::MinusUnionZero, CellLabel::Minus)?;
    Ok(RawCounts {
        pnd_lower,
        pnd_upper,
        nnd_lower,
        nnd_upper,
    })
}

fn closed_components_with_sign(
    cls: &CellClassification,
    region: Region,
    sign: CellLabel,
) -> Result<u64, VerifyError> {
    let set = region_components(cls, region, Adjacency::EdgeAndCorner)?;
    let labels = cls.labels();
    Ok(set
        .components
        .iter()
        .filter(|cells| cells.iter().any(|&c| labels[c as usize] == sign))
        .count() as u64)
}

/// Which norm-inflation term the theorem route uses.
enum Inflation {
    /// H^1_0 route: C_{p+1}(Omega) rho.
    H10 { rho: f64 },
    /// L^inf-only route: sigma |Omega_0^j|^(1/(p+1)).
    LinfOnly { sigma: f64 },
}

struct Setup<'a> {
    field: &'a CoefficientField,
    rho: Option<f64>,
    sigma: f64,
    nl: NonlinearityBound,
    m: u32,
    inflation: Inflation,
    policy: ConstantsPolicy,
    theorem: TheoremUsed,
    bc: Option<&'a BoundarySpec>,
    user_lambda1: HashMap<usize, UserLambda>,
    notes: Vec<String>,
}

/// Theorem route for the Dirichlet problem with both error bounds.
pub fn verify_dirichlet(
    field: &CoefficientField,
    rho: f64,
    sigma: f64,
    nl: &NonlinearityBound,
    m: u32,
    policy: ConstantsPolicy,
) -> Result<NodalReport, VerifyError> {
    check_error_bound("rho", rho)?;
    check_error_bound("sigma", sigma)?;
    run_verification(Setup {
        field,
        rho: Some(rho),
        sigma,
        nl: nl.clone(),
        m,
        inflation: Inflation::H10 { rho },
        policy,
        theorem: TheoremUsed::Dirichlet,
        bc: None,
        user_lambda1: HashMap::new(),
        notes: vec![],
    })
}

/// Theorem route that only assumes the L^inf error.
pub fn verify_linf_only(
    field: &CoefficientField,
    sigma: f64,
    nl: &NonlinearityBound,
    m: u32,
    policy: ConstantsPolicy,
) -> Result<NodalReport, VerifyError> {
    check_error_bound("sigma", sigma)?;
    run_verification(Setup {
        field,
        rho: None,
        sigma,
        nl: nl.clone(),
        m,
        inflation: Inflation::LinfOnly { sigma },
        policy,
        theorem: TheoremUsed::LinfOnly,
        bc: None,
        user_lambda1: HashMap::new(),
        notes: vec![],
    })
}

/// f(t) = lambda t + t |t|^(p-1): single-term specialization.
pub fn verify_emden(
    field: &CoefficientField,
    rho: f64,
    sigma: f64,
    lambda: f64,
    p: f64,
    m: u32,
    policy: ConstantsPolicy,
) -> Result<NodalReport, VerifyError> {
    check_error_bound("rho", rho)?;
    check_error_bound("sigma", sigma)?;
    let nl = NonlinearityBound::emden(lambda, p, 2)?;
    run_verification(Setup {
        field,
        rho: Some(rho),
        sigma,
        nl,
        m,
        inflation: Inflation::H10 { rho },
        policy,
        theorem: TheoremUsed::Emden,
        bc: None,
        user_lambda1: HashMap::new(),
        notes: vec![],
    })
}

/// f(t) = eps^-2 (t - t^3): the condition collapses to
/// eps^-2 < lambda_1(Omega_0^j) for every component.
pub fn verify_allen_cahn(
    field: &CoefficientField,
    rho: f64,
    sigma: f64,
    epsilon: f64,
    m: u32,
) -> Result<NodalReport, VerifyError> {
    check_error_bound("rho", rho)?;
    check_error_bound("sigma", sigma)?;
    let nl = NonlinearityBound::allen_cahn(epsilon)?;
    // Nontriviality side condition eps^-2 >= lambda_1(Omega), checked only
    // against the Li-Yau lower bound: diagnostic, not a soundness input.
    let area_up = field.domain().area_interval().hi();
    let lam_omega = constants::liyau_lower(1, 2, area_up)?;
    let note = if nl.lambda >= lam_omega {
        format!(
            "nontriviality side condition: eps^-2 = {:.6} >= {lam_omega:.6} \
             (Li-Yau lower bound for lambda_1(Omega)); consistent with a \
             sign-changing branch",
            nl.lambda
        )
    } else {
        format!(
            "nontriviality side condition not confirmed: eps^-2 = {:.6} is below \
             the Li-Yau lower bound {lam_omega:.6} for lambda_1(Omega); the \
             condition concerns nontriviality, not soundness",
            nl.lambda
        )
    };
    run_verification(Setup {
        field,
        rho: Some(rho),
        sigma,
        nl,
        m,
        inflation: Inflation::H10 { rho },
        policy: ConstantsPolicy::MinTalentiPlum,
        theorem: TheoremUsed::AllenCahn,
        bc: None,
        user_lambda1: HashMap::new(),
        notes: vec![note],
    })
}

/// Mixed boundary conditions: components with positive-measure Neumann
/// contact take Case 2 (user-supplied eigenvalue, partition-based
/// embedding constant), all others the Dirichlet route of Case 1.
pub fn verify_mixed(
    field: &CoefficientField,
    rho: f64,
    sigma: f64,
    nl: &NonlinearityBound,
    bc: &BoundarySpec,
    m: u32,
    user_lambda1: &HashMap<usize, UserLambda>,
    policy: ConstantsPolicy,
) -> Result<NodalReport, VerifyError> {
    check_error_bound("rho", rho)?;
    check_error_bound("sigma", sigma)?;
    let policy = if bc.gamma_n_is_empty() {
        policy
    } else {
        ConstantsPolicy::Mizuguchi
    };
    run_verification(Setup {
        field,
        rho: Some(rho),
        sigma,
        nl: nl.clone(),
        m,
        inflation: Inflation::H10 { rho },
        policy,
        theorem: TheoremUsed::Mixed,
        bc: Some(bc),
        user_lambda1: user_lambda1.clone(),
        notes: vec![],
    })
}

fn check_error_bound(name: &str, v: f64) -> Result<(), VerifyError> {
    if !v.is_finite() || v < 0.0 {
        return Err(VerifyError::InvalidBound(format!(
            "{name} must be finite and nonnegative, got {v}"
        )));
    }
    Ok(())
}

fn run_verification(setup: Setup<'_>) -> Result<NodalReport, VerifyError> {
    let cls = grid::classify(setup.field, setup.sigma, setup.m)?;
    verify_on_classification(setup, &cls)
}

/// The workhorse, split out so fixtures can drive a prebuilt
/// classification directly.
fn verify_on_classification(
    mut setup: Setup<'_>,
    cls: &CellClassification,
) -> Result<NodalReport, VerifyError> {
    if cls.has_degenerate_contact() {
        return Err(VerifyError::AssumptionViolation(
            "a certified-positive cell shares an edge with a certified-negative cell; \
             refusing to certify this classification"
                .into(),
        ));
    }
    if cls.omega0_is_whole_domain() {
        return Err(VerifyError::AssumptionViolation(
            "Omega_0 covers the whole domain; the standing assumption Omega_0 != Omega fails"
                .into(),
        ));
    }

    // Enforce the declared validity range of the nonlinearity inequality.
    let hull = cls.range_hull();
    let sig = Interval::point(setup.sigma);
    let need = hull + Interval::new(-setup.sigma, setup.sigma).expect("sigma >= 0");
    let _ = sig;
    if let Some((lo, hi)) = setup.nl.range {
        if !(lo <= need.lo() && need.hi() <= hi) {
            return Err(VerifyError::RangeViolation {
                range_lo: lo,
                range_hi: hi,
                need_lo: need.lo(),
                need_hi: need.hi(),
            });
        }
    }

    let zero_set = region_components(cls, Region::ZeroRegion, Adjacency::EdgeAndCorner)?;
    let area_up = setup.field.domain().area_interval().hi();
    let lambda1_omega = constants::liyau_lower(1, 2, area_up)?;

    // Whole-domain embedding constants, one per distinct term exponent.
    let mut global_constants: Vec<ConstantRecord> = Vec::new();
    let mut global_embeds: Vec<(Interval, EmbedMethod)> = Vec::new();
    for term in &setup.nl.terms {
        let p_target = term.exponent + 1.0;
        let (enc, method) = global_embed_upper(
            p_target,
            setup.field,
            setup.policy,
            lambda1_omega,
            setup.bc,
        )?;
        global_constants.push(ConstantRecord {
            name: format!("C_{p_target}(Omega) upper"),
            value: TaggedValue::up(enc.hi()),
            provenance: format!("{method:?}"),
        });
        global_embeds.push((enc, method));
    }
    global_constants.push(ConstantRecord {
        name: "lambda_1(Omega) lower".into(),
        value: TaggedValue::down(lambda1_omega),
        provenance: "LiYau".into(),
    });

    let mut per_component = Vec::new();
    let mut all_hold = true;
    let mut failure = None;
    let mut warnings = Vec::new();

    for (idx, cells) in zero_set.components.iter().enumerate() {
        let cert = check_component(&setup, cls, idx, cells, &global_embeds, lambda1_omega)?;
        if !cert.holds && all_hold {
            all_hold = false;
            failure = Some(format!(
                "no-nodal-domain condition failed on Omega_0 component {idx}: \
                 lhs {} >= rhs {}",
                cert.lhs.value, cert.rhs.value
            ));
        }
        per_component.push(cert);
    }

    let counts = count_bounds(cls)?;
    let (pnd, nnd, nd) = if all_hold {
        (
            CountRange::known(counts.pnd_lower, counts.pnd_upper),
            CountRange::known(counts.nnd_lower, counts.nnd_upper),
            CountRange::known(
                counts.pnd_lower + counts.nnd_lower,
                counts.pnd_upper + counts.nnd_upper,
            ),
        )
    } else {
        warnings.push(
            "condition not certified: only the count lower bounds are valid".to_string(),
        );
        (
            CountRange::lower_only(counts.pnd_lower),
            CountRange::lower_only(counts.nnd_lower),
            CountRange::lower_only(counts.pnd_lower + counts.nnd_lower),
        )
    };

    let mut notes = std::mem::take(&mut setup.notes);
    notes.push(
        "nodal domains are counted in the open domain; zero-Dirichlet boundary parts are \
         reported as part of the nodal line by convention only"
            .to_string(),
    );

    Ok(NodalReport {
        theorem_used: setup.theorem,
        verdict: if all_hold {
            Verdict::Certified
        } else {
            Verdict::NotCertified
        },
        failure,
        pnd,
        nnd,
        nd,
        per_component,
        inputs: InputsEcho {
            rho: setup.rho,
            sigma: setup.sigma,
            m: setup.m,
            certified_inputs: false,
            certificate_source: "library".into(),
            constants: global_constants,
        },
        warnings,
        notes,
    })
}

fn check_component(
    setup: &Setup<'_>,
    cls: &CellClassification,
    idx: usize,
    cells: &[u32],
    global_embeds: &[(Interval, EmbedMethod)],
    lambda1_omega: f64,
) -> Result<ComponentCertificate, VerifyError> {
    let volume_upper = region_volume_upper(cls, cells);
    let mut constants_used = Vec::new();

    // Case routing from the boundary contact analysis.
    let (case, touches) = match setup.bc {
        None => (ComponentCase::Dirichlet, false),
        Some(bc) => {
            let contact = boundary_contact(cls, cells, bc);
            if contact.neumann_measure_positive {
                (ComponentCase::MixedCase2, true)
            } else {
                (ComponentCase::MixedCase1, contact.touches_neumann)
            }
        }
    };

    // Eigenvalue lower bound for the component.
    let (lambda1, lambda1_provenance) = match case {
        ComponentCase::Dirichlet | ComponentCase::MixedCase1 => {
            let v = constants::lambda1_lower_corollary(2, volume_upper)?;
            // lambda_1(Omega_0^j) >= lambda_1(Omega) as well; keep the better.
            (v.max(lambda1_omega), "LiYau".to_string())
        }
        ComponentCase::MixedCase2 => match setup.user_lambda1.get(&idx) {
            Some(user) => (user.value, format!("UserSupplied: {}", user.provenance)),
            None => {
                if setup.nl.lambda > 0.0 {
                    return Err(VerifyError::MissingUserLambda1(idx));
                }
                // lambda <= 0: the spectral term is dropped, no bound needed.
                (0.0, "not required (lambda <= 0)".to_string())
            }
        },
    };

    // Embedding constant on the component, per term.
    let mut lhs = Interval::ZERO;
    for (k, term) in setup.nl.terms.iter().enumerate() {
        let p_target = term.exponent + 1.0;
        let global = global_embeds[k].0;
        let local = match case {
            ComponentCase::Dirichlet | ComponentCase::MixedCase1 => {
                // Dirichlet constant from the component volume; with zero
                // Neumann measure the mixed space coincides with H^1_0.
                let a2 = constants::embed_dirichlet_upper_enclosure(p_target, 2, volume_upper)?;
                // C(Omega_0^j) <= C(Omega): the global bound is a valid
                // fallback, so the smaller upper bound wins.
                if global.hi() < a2.hi() {
                    constants_used.push(ConstantRecord {
                        name: format!("C_{p_target}(Omega_0^{idx}) upper"),
                        value: TaggedValue::up(global.hi()),
                        provenance: "global fallback (C(Omega_0) <= C(Omega))".into(),
                    });
                    global
                } else {
                    constants_used.push(ConstantRecord {
                        name: format!("C_{p_target}(Omega_0^{idx}) upper"),
                        value: TaggedValue::up(a2.hi()),
                        provenance: "TalentiA2 on component volume".into(),
                    });
                    a2
                }
            }
            ComponentCase::MixedCase2 => {
                let rects = component_rectangles(cls, cells);
                let cp = constants::mizuguchi_cp_enclosure(&rects, p_target, 2.0)?;
                // Zero extension into Omega bounds the component constant
                // by the global mixed constant as well.
                let chosen = if global.hi() < cp.hi() { global } else { cp };
                constants_used.push(ConstantRecord {
                    name: format!("C_{p_target}(Omega_0^{idx}) upper"),
                    value: TaggedValue::up(chosen.hi()),
                    provenance: if global.hi() < cp.hi() {
                        "global fallback (zero extension)".into()
                    } else {
                        "MizuguchiCp on component cells (q = 2)".into()
                    },
                });
                chosen
            }
        };

        let norm = lp_upper_on_cells(cls, cells, p_target)?;
        let inflation = match &setup.inflation {
            Inflation::H10 { rho } => global * Interval::point(*rho),
            Inflation::LinfOnly { sigma } => {
                let vol_pow = Interval::point(volume_upper)
                    .pow_interval(Interval::ONE.div(Interval::point(p_target))?)?;
                Interval::point(*sigma) * vol_pow
            }
        };
        let padded = Interval::point(norm.hi().max(0.0)) + Interval::point(inflation.hi());
        let powed = padded.pow(term.exponent - 1.0)?;
        lhs = lhs + Interval::point(term.coeff) * local * local * powed;
    }

    let rhs = rhs_lower(setup.nl.lambda, lambda1)?;
    let lhs_up = lhs.hi();
    // Allen-Cahn reports the paper's direct form eps^-2 < lambda_1.
    let (lhs_tag, rhs_tag, holds) = if setup.theorem == TheoremUsed::AllenCahn {
        (
            TaggedValue::up(setup.nl.lambda),
            TaggedValue::down(lambda1),
            setup.nl.lambda < lambda1,
        )
    } else {
        (TaggedValue::up(lhs_up), TaggedValue::down(rhs), lhs_up < rhs)
    };

    Ok(ComponentCertificate {
        component: idx,
        cells: cells.len(),
        volume_upper: TaggedValue::up(volume_upper),
        case,
        touches_neumann: touches,
        lambda1_lower: TaggedValue::down(lambda1),
        lambda1_provenance,
        lhs: lhs_tag,
        rhs: rhs_tag,
        holds,
        constants: constants_used,
    })
}

/// Whole-domain embedding constant per policy.
fn global_embed_upper(
    p_target: f64,
    field: &CoefficientField,
    policy: ConstantsPolicy,
    lambda1_omega_lower: f64,
    bc: Option<&BoundarySpec>,
) -> Result<(Interval, EmbedMethod), VerifyError> {
    let area_up = field.domain().area_interval().hi();
    let mixed_needed = bc.map(|b| !b.gamma_n_is_empty()).unwrap_or(false);
    if mixed_needed || policy == ConstantsPolicy::Mizuguchi {
        let enc = constants::mizuguchi_cp_enclosure(&[*field.domain()], p_target, 2.0)?;
        return Ok((enc, EmbedMethod::MizuguchiCp));
    }
    let talenti = || constants::embed_dirichlet_upper_enclosure(p_target, 2, area_up);
    let plum = || constants::embed_plum_upper_enclosure(p_target, 2, lambda1_omega_lower, 0.0);
    match policy {
        ConstantsPolicy::TalentiOnly => Ok((talenti()?, EmbedMethod::TalentiA2)),
        ConstantsPolicy::PlumOnly => Ok((plum()?, EmbedMethod::PlumA5)),
        ConstantsPolicy::MinTalentiPlum => {
            let t = talenti()?;
            let p = plum()?;
            if t.hi() <= p.hi() {
                Ok((t, EmbedMethod::TalentiA2))
            } else {
                Ok((p, EmbedMethod::PlumA5))
            }
        }
        ConstantsPolicy::Mizuguchi => unreachable!("handled above"),
    }
}

/// Upper bound for ||u_hat||_{L^p} over a set of grid cells, from the
/// stored per-cell range enclosures.
fn lp_upper_on_cells(
    cls: &CellClassification,
    cells: &[u32],
    p: f64,
) -> Result<Interval, VerifyError> {
    let area = cls.cell_area_interval();
    let mut sum = Interval::ZERO;
    for &c in cells {
        let sup = cls.range(c).mag();
        sum = sum + Interval::point(sup).pow(p)? * area;
    }
    Ok(sum.pow_interval(Interval::ONE.div(Interval::point(p))?)?)
}

/// The component's own grid cells as physical rectangles: a convex
/// partition satisfying the disjoint-cover hypothesis by construction.
fn component_rectangles(
    cls: &CellClassification,
    cells: &[u32],
) -> Vec<crate::basis::Rectangle> {
    let (nx, ny) = cls.dims();
    let d = cls.domain();
    let w = d.bx - d.ax;
    let h = d.by - d.ay;
    cells
        .iter()
        .map(|&c| {
            let i = c % nx;
            let j = c / nx;
            let x0 = d.ax + w * (i as f64 / nx as f64);
            let x1 = d.ax + w * ((i + 1) as f64 / nx as f64);
            let y0 = d.ay + h * (j as f64 / ny as f64);
            let y1 = d.ay + h * ((j + 1) as f64 / ny as f64);
            crate::basis::Rectangle::new(x0, x1, y0, y1).expect("cells are nondegenerate")
        })
        .collect()
}

/// Fixture entry point: run a verification directly on a prebuilt
/// classification (hand-built labels or replayed external data). The
/// classification is trusted as-is.
pub fn verify_mixed_on_classification(
    field: &CoefficientField,
    cls: &CellClassification,
    rho: f64,
    nl: &NonlinearityBound,
    bc: &BoundarySpec,
    user_lambda1: &HashMap<usize, UserLambda>,
    policy: ConstantsPolicy,
) -> Result<NodalReport, VerifyError> {
    check_error_bound("rho", rho)?;
    let policy = if bc.gamma_n_is_empty() {
        policy
    } else {
        ConstantsPolicy::Mizuguchi
    };
    verify_on_classification(
        Setup {
            field,
            rho: Some(rho),
            sigma: cls.sigma(),
            nl: nl.clone(),
            m: cls.m(),
            inflation: Inflation::H10 { rho },
            policy,
            theorem: TheoremUsed::Mixed,
            bc: Some(bc),
            user_lambda1: user_lambda1.clone(),
            notes: vec![],
        },
        cls,
    )
}

/// Fixture entry point for the Dirichlet route on a prebuilt
/// classification.
pub fn verify_dirichlet_on_classification(
    field: &CoefficientField,
    cls: &CellClassification,
    rho: f64,
    nl: &NonlinearityBound,
    policy: ConstantsPolicy,
) -> Result<NodalReport, VerifyError> {
    check_error_bound("rho", rho)?;
    verify_on_classification(
        Setup {
            field,
            rho: Some(rho),
            sigma: cls.sigma(),
            nl: nl.clone(),
            m: cls.m(),
            inflation: Inflation::H10 { rho },
            policy,
            theorem: TheoremUsed::Dirichlet,
            bc: None,
            user_lambda1: HashMap::new(),
            notes: vec![],
        },
        cls,
    )
}

/// Tag a report's inputs with the certificate source declared by the
/// caller ("certified-external" enables proof wording downstream).
pub fn set_certificate_source(report: &mut NodalReport, source: &str) {
    report.inputs.certificate_source = source.to_string();
    report.inputs.certified_inputs = source == "certified-external";
}
