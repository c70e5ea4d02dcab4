//! Non-rigorous spectral Newton-Galerkin solver and heuristic error
//! estimates.
//!
//! Nothing in this module is certified: it produces the coefficient-field
//! inputs for the rigorous pipeline and clearly tagged heuristic
//! (rho, sigma) estimates that mirror the structure of the certified
//! fixed-point argument without its verified constants.
//!
//! The Galerkin system over the tensor Legendre basis uses the exact 1-D
//! matrices (the stiffness matrix is diagonal, 1/(2n+1), and the mass
//! matrix pentadiagonal in steps of two) and Gauss-Legendre quadrature for
//! the nonlinear term. Newton steps are damped by halving on residual
//! increase.

use crate::basis::{phi_table_f64, CoefficientField, Rectangle};
use crate::constants;
use crate::grid;
use nalgebra::{DMatrix, DVector};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "Newton iteration did not converge: residual {residual} after {iterations} iterations"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Jacobian in Newton step")]
    SingularJacobian,
    #[error("no positive radius satisfies delta <= rho/K - g(rho)")]
    NoRadius,
    #[error("tau = {got} does not dominate -f'(u_hat); need tau > {required}")]
    TauViolation { required: f64, got: f64 },
    #[error("unsupported nonlinearity for this operation: {0}")]
    UnsupportedNonlinearity(String),
    #[error(transparent)]
    Basis(#[from] crate::basis::BasisError),
    #[error(transparent)]
    Constants(#[from] crate::constants::ConstantsError),
}

/// Right-hand side nonlinearity of -Delta u = f(u).
#[derive(Debug, Clone, PartialEq)]
pub enum FKind {
    /// f(t) = eps^-2 (t - t^3).
    AllenCahn { epsilon: f64 },
    /// f(t) = lambda t + t |t|^(p-1).
    Emden { lambda: f64, p: f64 },
    /// f(t) = lambda t + sum_i a_i t |t|^(p_i - 1).
    Polynomial { lambda: f64, terms: Vec<(f64, f64)> },
    /// f = 0 (linear homogeneous; Newton converges in one step).
    Zero,
}

impl FKind {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            FKind::AllenCahn { epsilon } => (t - t * t * t) / (epsilon * epsilon),
            FKind::Emden { lambda, p } => lambda * t + t * t.abs().powf(p - 1.0),
            FKind::Polynomial { lambda, terms } => {
                let mut v = lambda * t;
                for (a, p) in terms {
                    v += a * t * t.abs().powf(p - 1.0);
                }
                v
            }
            FKind::Zero => 0.0,
        }
    }

    pub fn eval_derivative(&self, t: f64) -> f64 {
        match self {
            FKind::AllenCahn { epsilon } => (1.0 - 3.0 * t * t) / (epsilon * epsilon),
            FKind::Emden { lambda, p } => lambda + p * t.abs().powf(p - 1.0),
            FKind::Polynomial { lambda, terms } => {
                let mut v = *lambda;
                for (a, p) in terms {
                    v += a * p * t.abs().powf(p - 1.0);
                }
                v
            }
            FKind::Zero => 0.0,
        }
    }

    /// Coefficient of the cubic term, if f is lambda t + a t^3-shaped;
    /// the heuristic radius bound is built for cubic nonlinearities.
    fn cubic_coefficient(&self) -> Option<f64> {
        match self {
            FKind::AllenCahn { epsilon } => Some(-1.0 / (epsilon * epsilon)),
            FKind::Emden { lambda: _, p } if *p == 3.0 => Some(1.0),
            FKind::Polynomial { terms, .. } if terms.iter().all(|(_, p)| *p == 3.0) => {
                Some(terms.iter().map(|(a, _)| a).sum())
            }
            FKind::Zero => Some(0.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialGuess {
    /// One lobe over one lobe, split across the horizontal midline.
    PatternA,
    /// Four alternating quadrant lobes.
    PatternB,
    /// Centered bump with an opposite-sign ring toward the boundary.
    PatternC,
    FromFile(PathBuf),
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub mu: usize,
    pub f_kind: FKind,
    pub initial_guess: InitialGuess,
    pub newton_tol: f64,
    pub max_iters: usize,
    /// Gauss-Legendre nodes per axis.
    pub quadrature_order: usize,
    pub domain: Rectangle,
}

impl SolveConfig {
    pub fn new(mu: usize, f_kind: FKind, initial_guess: InitialGuess) -> Self {
        SolveConfig {
            mu,
            f_kind,
            initial_guess,
            newton_tol: 1e-10,
            max_iters: 50,
            quadrature_order: 2 * mu + 8,
            domain: Rectangle::unit_square(),
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.mu == 0 {
            return Err(SolveError::InvalidConfig("mu must be positive".into()));
        }
        if !(self.newton_tol > 0.0) {
            return Err(SolveError::InvalidConfig(
                "newton_tol must be positive".into(),
            ));
        }
        if self.quadrature_order < 2 * self.mu + 4 {
            return Err(SolveError::InvalidConfig(format!(
                "quadrature_order {} below the exactness margin 2 mu + 4 = {}",
                self.quadrature_order,
                2 * self.mu + 4
            )));
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes and weights on (0, 1).
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-based initial guess on [-1, 1], then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x); // descending x maps to ascending s
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Exact 1-D mass matrix on (0,1): (phi_i, phi_j), pentadiagonal in steps
/// of two from phi_n = (Q_{n-1} - Q_{n+1}) / (2(2n+1)).
fn mass_matrix(mu: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(mu, mu);
    for n in 1..=mu {
        let nf = n as f64;
        let diag = (1.0 / (2.0 * nf - 1.0) + 1.0 / (2.0 * nf + 3.0))
            / (4.0 * (2.0 * nf + 1.0).powi(2));
        m[(n - 1, n - 1)] = diag;
        if n + 2 <= mu {
            let off = -1.0 / (4.0 * (2.0 * nf + 1.0) * (2.0 * nf + 5.0) * (2.0 * nf + 3.0));
            m[(n - 1, n + 1)] = off;
            m[(n + 1, n - 1)] = off;
        }
    }
    m
}

/// Exact 1-D stiffness diagonal: (phi_i', phi_j') = delta_ij / (2i+1).
fn stiffness_diagonal(mu: usize) -> Vec<f64> {
    (1..=mu).map(|n| 1.0 / (2.0 * n as f64 + 1.0)).collect()
}

struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// phi_k(s_q), row q, column k.
    phi: DMatrix<f64>,
}

fn build_quadrature(mu: usize, order: usize) -> Quadrature {
    let (nodes, weights) = gauss_legendre_unit(order);
    let mut phi = DMatrix::zeros(order, mu);
    for (q, &s) in nodes.iter().enumerate() {
        let (p, _, _) = phi_table_f64(mu, s);
        for k in 0..mu {
            phi[(q, k)] = p[k];
        }
    }
    Quadrature {
        nodes,
        weights,
        phi,
    }
}

/// Solve the Galerkin system (grad u, grad v) = (f(u), v) by damped Newton.
pub fn newton_galerkin(cfg: &SolveConfig) -> Result<CoefficientField, SolveError> {
    cfg.validate()?;
    let mu = cfg.mu;
    let quad = build_quadrature(mu, cfg.quadrature_order);
    let mass = mass_matrix(mu);
    let stiff = stiffness_diagonal(mu);
    let lx = cfg.domain.width();
    let ly = cfg.domain.height();

    let mut u = initial_coefficients(cfg, &quad, &mass)?;
    let mut residual = galerkin_residual(&u, cfg, &quad, &mass, &stiff, lx, ly);
    let mut res_norm = residual.norm();

    for iter in 0..cfg.max_iters {
        if res_norm < cfg.newton_tol {
            return CoefficientField::new(mu, matrix_to_row_major(&u), cfg.domain)
                .map_err(SolveError::from);
        }
        let jac = galerkin_jacobian(&u, cfg, &quad, &mass, &stiff, lx, ly);
        let rhs = -DVector::from_fn(mu * mu, |r, _| residual[(r / mu, r % mu)]);
        let delta = jac.lu().solve(&rhs).ok_or(SolveError::SingularJacobian)?;

        // Damped update: halve the step while the residual grows.
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let mut trial = u.clone();
            for i in 0..mu {
                for j in 0..mu {
                    trial[(i, j)] += alpha * delta[i * mu + j];
                }
            }
            let trial_res = galerkin_residual(&trial, cfg, &quad, &mass, &stiff, lx, ly);
            let trial_norm = trial_res.norm();
            if trial_norm < res_norm {
                u = trial;
                residual = trial_res;
                res_norm = trial_norm;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(SolveError::NoConvergence {
                iterations: iter + 1,
                residual: res_norm,
            });
        }
    }
    if res_norm < cfg.newton_tol {
        return CoefficientField::new(mu, matrix_to_row_major(&u), cfg.domain)
            .map_err(SolveError::from);
    }
    Err(SolveError::NoConvergence {
        iterations: cfg.max_iters,
        residual: res_norm,
    })
}

fn matrix_to_row_major(u: &DMatrix<f64>) -> Vec<f64> {
    let (rows, cols) = u.shape();
    let mut out = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            out.push(u[(i, j)]);
        }
    }
    out
}

/// u_hat values on the tensor quadrature grid: Phi U Phi^T.
fn values_on_grid(u: &DMatrix<f64>, quad: &Quadrature) -> DMatrix<f64> {
    &quad.phi * u * quad.phi.transpose()
}

fn galerkin_residual(
    u: &DMatrix<f64>,
    cfg: &SolveConfig,
    quad: &Quadrature,
    mass: &DMatrix<f64>,
    stiff: &[f64],
    lx: f64,
    ly: f64,
) -> DMatrix<f64> {
    let mu = cfg.mu;
    // Linear part (Ly/Lx) S U M + (Lx/Ly) M U S with S diagonal.
    let su = DMatrix::from_fn(mu, mu, |i, j| stiff[i] * u[(i, j)]);
    let us = DMatrix::from_fn(mu, mu, |i, j| u[(i, j)] * stiff[j]);
    let lin = (&su * mass) * (ly / lx) + (mass * &us) * (lx / ly);

    // Nonlinear part LxLy Phi^T W F W Phi.
    let vals = values_on_grid(u, quad);
    let order = quad.nodes.len();
    let mut fw = DMatrix::zeros(order, order);
    for q in 0..order {
        for r in 0..order {
            fw[(q, r)] = quad.weights[q] * quad.weights[r] * cfg.f_kind.eval(vals[(q, r)]);
        }
    }
    let nonlinear = quad.phi.transpose() * fw * &quad.phi;
    lin - nonlinear * (lx * ly)
}

fn galerkin_jacobian(
    u: &DMatrix<f64>,
    cfg: &SolveConfig,
    quad: &Quadrature,
    mass: &DMatrix<f64>,
    stiff: &[f64],
    lx: f64,
    ly: f64,
) -> DMatrix<f64> {
    let mu = cfg.mu;
    let n = mu * mu;
    let mut jac = DMatrix::zeros(n, n);
    // Linear part: J[(k,l),(i,j)] = (Ly/Lx) S_ik M_jl + (Lx/Ly) M_ik S_jl.
    for k in 0..mu {
        for l in 0..mu {
            let row = k * mu + l;
            for j in 0..mu {
                jac[(row, k * mu + j)] += (ly / lx) * stiff[k] * mass[(j, l)];
            }
            for i in 0..mu {
                jac[(row, i * mu + l)] += (lx / ly) * mass[(i, k)] * stiff[l];
            }
        }
    }

    // Nonlinear part: -LxLy sum_{q,r} w_q w_r f'(u(q,r))
    //                  phi_i(q) phi_k(q) phi_j(r) phi_l(r).
    let vals = values_on_grid(u, quad);
    let order = quad.nodes.len();
    let mut fpw = DMatrix::zeros(order, order);
    for q in 0..order {
        for r in 0..order {
            fpw[(q, r)] =
                quad.weights[q] * quad.weights[r] * cfg.f_kind.eval_derivative(vals[(q, r)]);
        }
    }
    // B[q, i*mu + k] = phi_i(q) phi_k(q); X = B^T (fpw B).
    let mut b = DMatrix::zeros(order, n);
    for q in 0..order {
        for i in 0..mu {
            let pi = quad.phi[(q, i)];
            for k in 0..mu {
                b[(q, i * mu + k)] = pi * quad.phi[(q, k)];
            }
        }
    }
    let x = b.transpose() * fpw * &b;
    for k in 0..mu {
        for l in 0..mu {
            let row = k * mu + l;
            for i in 0..mu {
                for j in 0..mu {
                    jac[(row, i * mu + j)] -= lx * ly * x[(i * mu + k, j * mu + l)];
                }
            }
        }
    }
    jac
}

/// L^2 projection of a function onto the tensor basis on the unit square:
/// solves M U M = Phi^T W H W Phi. Used for initial guesses and for
/// building interpolant-style test fields.
pub fn project_l2<F: Fn(f64, f64) -> f64>(
    mu: usize,
    quadrature_order: usize,
    h: F,
) -> Result<CoefficientField, SolveError> {
    let quad = build_quadrature(mu, quadrature_order.max(2 * mu + 4));
    let mass = mass_matrix(mu);
    let u = project_onto_basis(&quad, &mass, h)?;
    CoefficientField::new(mu, matrix_to_row_major(&u), Rectangle::unit_square())
        .map_err(SolveError::from)
}

fn project_onto_basis<F: Fn(f64, f64) -> f64>(
    quad: &Quadrature,
    mass: &DMatrix<f64>,
    h: F,
) -> Result<DMatrix<f64>, SolveError> {
    let order = quad.nodes.len();
    let mut hw = DMatrix::zeros(order, order);
    for q in 0..order {
        for r in 0..order {
            hw[(q, r)] = quad.weights[q] * quad.weights[r] * h(quad.nodes[q], quad.nodes[r]);
        }
    }
    let rhs = quad.phi.transpose() * hw * &quad.phi;
    let half = mass
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(SolveError::SingularJacobian)?;
    let full = mass
        .clone()
        .lu()
        .solve(&half.transpose())
        .ok_or(SolveError::SingularJacobian)?;
    Ok(full.transpose())
}

fn initial_coefficients(
    cfg: &SolveConfig,
    quad: &Quadrature,
    mass: &DMatrix<f64>,
) -> Result<DMatrix<f64>, SolveError> {
    let mu = cfg.mu;
    let pi = std::f64::consts::PI;
    let h: Box<dyn Fn(f64, f64) -> f64> = match &cfg.initial_guess {
        InitialGuess::PatternA => {
            Box::new(move |s: f64, t: f64| 1.1 * (pi * s).sin() * (2.0 * pi * t).sin())
        }
        InitialGuess::PatternB => {
            Box::new(move |s: f64, t: f64| 1.1 * (2.0 * pi * s).sin() * (2.0 * pi * t).sin())
        }
        InitialGuess::PatternC => {
            Box::new(move |s: f64, t: f64| 1.5 * ((pi * s).sin() * (pi * t).sin() - 0.45))
        }
        InitialGuess::FromFile(path) => {
            let field = crate::basis::read_coefficient_file(path)?;
            if field.mu() != mu {
                return Err(SolveError::InvalidConfig(format!(
                    "initial-guess file has mu = {}, config wants {}",
                    field.mu(),
                    mu
                )));
            }
            let mut m = DMatrix::zeros(mu, mu);
            for i in 0..mu {
                for j in 0..mu {
                    m[(i, j)] = field.coeff(i, j);
                }
            }
            return Ok(m);
        }
    };
    project_onto_basis(quad, mass, h)
}

/// Analytic first Dirichlet eigenvalue of the rectangle,
/// pi^2 (1/Lx^2 + 1/Ly^2); feeds the heuristic C_2 = (lambda_1 + tau)^(-1/2).
pub fn rectangle_lambda1(domain: &Rectangle) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    pi2 * (1.0 / (domain.width() * domain.width()) + 1.0 / (domain.height() * domain.height()))
}

/// Heuristic defect bound C_2 ||Delta u_hat + f(u_hat)||_{L^2} with
/// C_2 = (lambda_1(Omega) + tau)^(-1/2); plain Gauss quadrature, not
/// certified.
pub fn defect_estimate(
    field: &CoefficientField,
    f_kind: &FKind,
    tau: f64,
    quadrature_order: usize,
) -> f64 {
    let (nodes, weights) = gauss_legendre_unit(quadrature_order.max(8));
    let d = field.domain();
    let mut sq = 0.0;
    for (&sx, &wx) in nodes.iter().zip(&weights) {
        for (&sy, &wy) in nodes.iter().zip(&weights) {
            let x = d.ax + sx * d.width();
            let y = d.ay + sy * d.height();
            let (v, lap) = field.value_and_laplacian(x, y);
            let r = lap + f_kind.eval(v);
            sq += wx * wy * r * r;
        }
    }
    sq *= d.width() * d.height();
    let c2 = 1.0 / (rectangle_lambda1(d) + tau).sqrt();
    c2 * sq.sqrt()
}

/// Heuristic L^4 norm of the field by Gauss quadrature.
pub fn l4_norm_estimate(field: &CoefficientField, quadrature_order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_unit(quadrature_order.max(8));
    let d = field.domain();
    let mut sq = 0.0;
    for (&sx, &wx) in nodes.iter().zip(&weights) {
        for (&sy, &wy) in nodes.iter().zip(&weights) {
            let x = d.ax + sx * d.width();
            let y = d.ay + sy * d.height();
            let v = field.point_eval(x, y);
            sq += wx * wy * v.powi(4);
        }
    }
    (sq * d.width() * d.height()).powf(0.25)
}

/// Heuristic error radii, always tagged non-certified.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HeuristicErrors {
    pub rho: f64,
    pub sigma: f64,
    /// Always false: these radii reuse the certified argument's structure
    /// but none of the inputs (K, delta) are verified here.
    pub certified: bool,
}

/// Smallest positive rho with delta <= rho/K - G(rho), where
/// G(rho) = int_0^rho g(t) dt and
/// g(t) = 6 |a3| C_4^3 t (||u_hat||_4 + C_4 t) is the derivative-distance
/// modulus for cubic nonlinearities; the root is found by bisection below
/// the vertex of the concave majorant. sigma is derived as
/// c_embed_linf * rho.
///
/// g bounds the distance of linearizations, so the fixed-point condition
/// consumes its integral; the non-integrated variant delta <= rho/K -
/// g(rho) is unsatisfiable for inverse-operator bounds K of realistic
/// size (1/K would have to dominate g everywhere).
///
/// The tau-domination condition tau > -f'(u_hat) is checked against a
/// certified range of u_hat before anything else.
pub fn heuristic_error(
    delta: f64,
    k_bound: f64,
    f_kind: &FKind,
    field: &CoefficientField,
    tau: f64,
    c_embed_linf: f64,
) -> Result<HeuristicErrors, SolveError> {
    if !(k_bound > 0.0) {
        return Err(SolveError::InvalidConfig(
            "the inverse-operator bound K must be positive".into(),
        ));
    }
    if !(delta >= 0.0) {
        return Err(SolveError::InvalidConfig(
            "the defect bound delta must be nonnegative".into(),
        ));
    }
    check_tau_domination(f_kind, field, tau)?;

    let a3 = f_kind.cubic_coefficient().ok_or_else(|| {
        SolveError::UnsupportedNonlinearity(
            "the heuristic radius bound is built for cubic nonlinearities".into(),
        )
    })?;

    let rho = if a3 == 0.0 {
        // g = 0: the inequality degenerates to rho >= K delta.
        k_bound * delta
    } else {
        let area = field.domain().area_interval().hi();
        let lam1 = constants::liyau_lower(1, 2, area)?;
        let c4_talenti = constants::embed_dirichlet_upper(4.0, 2, area)?;
        let c4_plum = constants::embed_plum_upper(4.0, 2, lam1, tau)?;
        let c4 = c4_talenti.min(c4_plum);
        let l4 = l4_norm_estimate(field, 2 * field.mu() + 8);
        let a = 6.0 * a3.abs() * c4.powi(3);
        // G(rho) = a (l4 rho^2 / 2 + c4 rho^3 / 3)
        let h = |rho: f64| {
            rho / k_bound - a * (l4 * rho * rho / 2.0 + c4 * rho.powi(3) / 3.0) - delta
        };
        // h is concave with h'(0) = 1/K > 0; its maximum sits where
        // g(rho) = 1/K, i.e. at the positive root of
        // a c4 rho^2 + a l4 rho - 1/K = 0.
        let disc = (a * l4).powi(2) + 4.0 * a * c4 / k_bound;
        let vertex = (-a * l4 + disc.sqrt()) / (2.0 * a * c4);
        if h(vertex) < 0.0 {
            return Err(SolveError::NoRadius);
        }
        let mut lo = 0.0;
        let mut hi = vertex;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(HeuristicErrors {
        rho,
        sigma: c_embed_linf * rho,
        certified: false,
    })
}

/// tau must dominate -f'(u_hat) pointwise; the range of u_hat is taken
/// from a certified coarse evaluation hull.
fn check_tau_domination(
    f_kind: &FKind,
    field: &CoefficientField,
    tau: f64,
) -> Result<(), SolveError> {
    if tau < 0.0 {
        return Err(SolveError::InvalidConfig("tau must be nonnegative".into()));
    }
    let required = sup_neg_f_prime(f_kind, field)?;
    if required >= 0.0 && !(tau > required) {
        return Err(SolveError::TauViolation { required, got: tau });
    }
    Ok(())
}

/// Supremum of -f'(t) over a certified enclosure of the range of u_hat.
fn sup_neg_f_prime(f_kind: &FKind, field: &CoefficientField) -> Result<f64, SolveError> {
    let range = {
        let eval = field.grid_evaluator(16, 16);
        let mut hull = eval.cell_range(0, 0);
        for i in 0..16 {
            for j in 0..16 {
                hull = hull.hull(&eval.cell_range(i, j));
            }
        }
        hull
    };
    let mag = range.mag();
    let min_abs = if range.contains(0.0) {
        0.0
    } else {
        range.lo().abs().min(range.hi().abs())
    };
    Ok(match f_kind {
        // -f'(t) = eps^-2 (3 t^2 - 1): increasing in |t|.
        FKind::AllenCahn { epsilon } => (3.0 * mag * mag - 1.0) / (epsilon * epsilon),
        // -f'(t) = -lambda - p |t|^(p-1): decreasing in |t| for p > 1.
        FKind::Emden { lambda, p } => -lambda - p * min_abs.powf(p - 1.0),
        FKind::Polynomial { lambda, terms } => {
            if terms.iter().any(|(a, _)| *a < 0.0) {
                return Err(SolveError::UnsupportedNonlinearity(
                    "tau domination for mixed-sign polynomial terms is not implemented".into(),
                ));
            }
            -lambda
                - terms
                    .iter()
                    .map(|(a, p)| a * p * min_abs.powf(p - 1.0))
                    .sum::<f64>()
        }
        FKind::Zero => 0.0,
    })
}

/// Classify a solved field with a heuristic sigma (demo pipeline helper;
/// the result inherits the non-certified tag of its inputs).
pub fn classify_with_heuristic_sigma(
    field: &CoefficientField,
    sigma: f64,
    m: u32,
) -> Result<grid::CellClassification, grid::GridError> {
    grid::classify(field, sigma, m)
}
