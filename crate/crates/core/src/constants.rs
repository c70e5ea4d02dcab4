//! Certified eigenvalue lower bounds and embedding-constant upper bounds.
//!
//! Everything is computed in interval arithmetic end to end; the public
//! functions return the directed endpoint (lower bounds rounded down,
//! upper bounds rounded up) and `_enclosure` variants expose the full
//! interval for composition inside the verifier.
//!
//! All bounds are monotone in the right direction for chained use: the
//! Li-Yau bound decreases in the volume, so feeding a volume upper bound
//! yields a valid eigenvalue lower bound; the embedding bounds increase in
//! the volume and decrease in the eigenvalue, so volume upper bounds and
//! eigenvalue lower bounds yield valid constant upper bounds.

use crate::basis::Rectangle;
use crate::interval::{gamma, Interval, IntervalError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstantsError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("quadrature budget exceeded: enclosure width {width} above tolerance {tol}")]
    QuadratureBudgetExceeded { width: f64, tol: f64 },
    #[error("invalid partition: {0}")]
    PartitionInvalid(String),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Certified lower bound for a Laplacian eigenvalue, with provenance.
#[derive(Debug, Clone, Serialize)]
pub struct EigenLower {
    pub value: f64,
    pub method: EigenMethod,
    pub domain_volume: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind")]
pub enum EigenMethod {
    LiYau,
    UserSupplied { provenance: String },
}

/// Certified upper bound for an embedding constant, with provenance.
#[derive(Debug, Clone, Serialize)]
pub struct EmbedUpper {
    /// Target Lebesgue exponent of the embedding H^1 -> L^p.
    pub p: f64,
    pub value: f64,
    pub method: EmbedMethod,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind")]
pub enum EmbedMethod {
    TalentiA2,
    PlumA5,
    MizuguchiCp,
    UserSupplied { provenance: String },
}

fn check_positive(name: &str, v: f64) -> Result<(), ConstantsError> {
    if !v.is_finite() || v <= 0.0 {
        return Err(ConstantsError::DomainError(format!(
            "{name} must be finite and positive, got {v}"
        )));
    }
    Ok(())
}

/// Volume of the unit N-ball, pi^(N/2) / Gamma(N/2 + 1).
///
/// Low dimensions use the closed forms (tighter than the Gamma route,
/// which matters because the Li-Yau chain divides by this value).
pub fn unit_ball_volume_enclosure(n_dim: u32) -> Result<Interval, ConstantsError> {
    match n_dim {
        1 => Ok(Interval::point(2.0)),
        2 => Ok(Interval::PI),
        3 => Ok((Interval::point(4.0) * Interval::PI).div(Interval::point(3.0))?),
        4 => Ok((Interval::PI * Interval::PI).div(Interval::point(2.0))?),
        n => {
            let half_n = n as f64 / 2.0;
            let num = Interval::PI.pow(half_n)?;
            let den = gamma(Interval::point(half_n + 1.0))?;
            Ok(num.div(den)?)
        }
    }
}

/// Li-Yau lower bound for the k-th Dirichlet eigenvalue:
/// (4 pi^2 N / (N+2)) (k / (B_N |Omega|))^(2/N).
pub fn liyau_lower_enclosure(
    k: u32,
    n_dim: u32,
    volume_upper: f64,
) -> Result<Interval, ConstantsError> {
    if k == 0 || n_dim == 0 {
        return Err(ConstantsError::DomainError(
            "k and N must be positive".into(),
        ));
    }
    check_positive("volume", volume_upper)?;
    let n = Interval::point(n_dim as f64);
    let front =
        (Interval::point(4.0) * Interval::PI * Interval::PI * n).div(n + Interval::point(2.0))?;
    let ball = unit_ball_volume_enclosure(n_dim)?;
    let base = Interval::point(k as f64).div(ball * Interval::point(volume_upper))?;
    let expo = Interval::point(2.0).div(n)?;
    Ok(front * base.pow_interval(expo)?)
}

pub fn liyau_lower(k: u32, n_dim: u32, volume_upper: f64) -> Result<f64, ConstantsError> {
    Ok(liyau_lower_enclosure(k, n_dim, volume_upper)?.lo().max(0.0))
}

/// Specialized first-eigenvalue bounds: 2 pi / |Omega| for N = 2 and
/// (3 * 6^(2/3) / 5) pi^(4/3) |Omega|^(-2/3) for N = 3.
pub fn lambda1_lower_corollary_enclosure(
    n_dim: u32,
    volume_upper: f64,
) -> Result<Interval, ConstantsError> {
    check_positive("volume", volume_upper)?;
    match n_dim {
        2 => Ok((Interval::point(2.0) * Interval::PI).div(Interval::point(volume_upper))?),
        3 => {
            let third = Interval::ONE.div(Interval::point(3.0))?;
            let two_thirds = Interval::point(2.0) * third;
            let four_thirds = Interval::point(4.0) * third;
            let front = (Interval::point(3.0) * Interval::point(6.0).pow_interval(two_thirds)?)
                .div(Interval::point(5.0))?;
            let pi_pow = Interval::PI.pow_interval(four_thirds)?;
            let vol_pow = Interval::point(volume_upper).pow_interval(-two_thirds)?;
            Ok(front * pi_pow * vol_pow)
        }
        _ => Err(ConstantsError::DomainError(format!(
            "corollary form only covers N = 2 and N = 3, got {n_dim}"
        ))),
    }
}

pub fn lambda1_lower_corollary(n_dim: u32, volume_upper: f64) -> Result<f64, ConstantsError> {
    Ok(lambda1_lower_corollary_enclosure(n_dim, volume_upper)?
        .lo()
        .max(0.0))
}

/// Best constant of the Sobolev inequality on R^N for the embedding into
/// L^p, with q = Np/(N+p) required to satisfy 1 < q < N.
pub fn talenti_constant_enclosure(p: f64, n_dim: u32) -> Result<Interval, ConstantsError> {
    check_positive("p", p)?;
    if n_dim < 2 {
        return Err(ConstantsError::DomainError("need N >= 2".into()));
    }
    let n = Interval::point(n_dim as f64);
    let p_iv = Interval::point(p);
    let q = (n * p_iv).div(n + p_iv)?;
    if !(q.lo() > 1.0 && q.hi() < n_dim as f64) {
        return Err(ConstantsError::DomainError(format!(
            "q = Np/(N+p) = {q} violates 1 < q < N"
        )));
    }
    let inv_q = Interval::ONE.div(q)?;
    let half = Interval::point(0.5);
    let pi_factor = Interval::PI.pow_interval(-half)?;
    let n_factor = n.pow_interval(-inv_q)?;
    let ratio = (q - Interval::ONE).div(n - q)?;
    let ratio_factor = ratio.pow_interval(Interval::ONE - inv_q)?;
    let g1 = gamma(Interval::ONE + n * half)?;
    let g2 = gamma(n)?;
    let g3 = gamma(n.div(q)?)?;
    let g4 = gamma(Interval::ONE + n - n.div(q)?)?;
    let gamma_ratio = (g1 * g2).div(g3 * g4)?;
    let gamma_factor = gamma_ratio.pow_interval(Interval::ONE.div(n)?)?;
    Ok(pi_factor * n_factor * ratio_factor * gamma_factor)
}

pub fn talenti_constant(p: f64, n_dim: u32) -> Result<f64, ConstantsError> {
    Ok(talenti_constant_enclosure(p, n_dim)?.hi())
}

/// Embedding constant upper bound |Omega|^((2-q)/(2q)) T_p for
/// H^1_0(Omega) -> L^p(Omega) on a bounded domain.
pub fn embed_dirichlet_upper_enclosure(
    p: f64,
    n_dim: u32,
    volume_upper: f64,
) -> Result<Interval, ConstantsError> {
    check_positive("volume", volume_upper)?;
    let in_range = if n_dim == 2 {
        p > 2.0
    } else {
        let n = n_dim as f64;
        p > n / (n - 1.0) && p <= 2.0 * n / (n - 2.0)
    };
    if !in_range {
        return Err(ConstantsError::DomainError(format!(
            "p = {p} outside the admissible range for N = {n_dim}"
        )));
    }
    let t = talenti_constant_enclosure(p, n_dim)?;
    let n = Interval::point(n_dim as f64);
    let p_iv = Interval::point(p);
    let q = (n * p_iv).div(n + p_iv)?;
    let expo = (Interval::point(2.0) - q).div(Interval::point(2.0) * q)?;
    Ok(Interval::point(volume_upper).pow_interval(expo)? * t)
}

pub fn embed_dirichlet_upper(p: f64, n_dim: u32, volume_upper: f64) -> Result<f64, ConstantsError> {
    Ok(embed_dirichlet_upper_enclosure(p, n_dim, volume_upper)?.hi())
}

/// Embedding constant upper bound for H^1_0 endowed with the tau-norm,
/// from the spectral lower bound lambda_1.
///
/// Case N = 2 (p >= 2): with nu = floor(p/2),
///   (1/2)^(1/2 + (2 nu - 3)/p) [ (p/2)(p/2 - 1) ... (p/2 - nu + 2) ]^(2/p)
///   (lambda_1 + (p/2) tau)^(-1/p),
/// the bracket being the empty product 1 when nu = 1.
///
/// Case N >= 3 (2 <= p <= 2N/(N-2)): with s = N(1/p - 1/2 + 1/N),
///   ((N-1)/(sqrt(N)(N-2)))^(1-s) (s/(s lambda_1 + tau))^(s/2).
pub fn embed_plum_upper_enclosure(
    p: f64,
    n_dim: u32,
    lambda1_lower: f64,
    tau: f64,
) -> Result<Interval, ConstantsError> {
    if !(lambda1_lower >= 0.0) || !lambda1_lower.is_finite() {
        return Err(ConstantsError::DomainError(format!(
            "lambda_1 lower bound must be finite and nonnegative, got {lambda1_lower}"
        )));
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(ConstantsError::DomainError(format!(
            "tau must be finite and nonnegative, got {tau}"
        )));
    }
    if lambda1_lower == 0.0 && tau == 0.0 {
        return Err(ConstantsError::DomainError(
            "need tau > 0 when lambda_1 = 0".into(),
        ));
    }
    let lam = Interval::point(lambda1_lower);
    let tau_iv = Interval::point(tau);
    let p_iv = Interval::point(p);
    match n_dim {
        2 => {
            if !(p >= 2.0) {
                return Err(ConstantsError::DomainError(format!(
                    "case N = 2 needs p >= 2, got {p}"
                )));
            }
            let nu = (p / 2.0).floor() as i64;
            let half = Interval::point(0.5);
            let expo = half + (Interval::point((2 * nu - 3) as f64)).div(p_iv)?;
            let lead = half.pow_interval(expo)?;
            let mut product = Interval::ONE;
            for i in 0..nu - 1 {
                product = product * (p_iv * half - Interval::point(i as f64));
            }
            let bracket = product.pow_interval(Interval::point(2.0).div(p_iv)?)?;
            let spectral =
                (lam + p_iv * half * tau_iv).pow_interval(-(Interval::ONE.div(p_iv)?))?;
            Ok(lead * bracket * spectral)
        }
        n if n >= 3 => {
            let n_f = n as f64;
            if !(2.0 <= p && p <= 2.0 * n_f / (n_f - 2.0)) {
                return Err(ConstantsError::DomainError(format!(
                    "case N = {n} needs 2 <= p <= {}, got {p}",
                    2.0 * n_f / (n_f - 2.0)
                )));
            }
            let n_iv = Interval::point(n_f);
            let s_raw = n_iv
                * (Interval::ONE.div(p_iv)? - Interval::point(0.5) + Interval::ONE.div(n_iv)?);
            let front_base =
                (n_iv - Interval::ONE).div(n_iv.sqrt()? * (n_iv - Interval::point(2.0)))?;
            if s_raw.hi() <= 0.0 {
                // Critical exponent: s = 0 and the spectral factor is 1.
                return Ok(front_base);
            }
            if s_raw.lo() <= 0.0 {
                return Err(ConstantsError::DomainError(
                    "p is too close to the critical exponent to separate s from 0; \
                     use the exact critical p"
                        .into(),
                ));
            }
            let s = s_raw;
            let front = front_base.pow_interval(Interval::ONE - s)?;
            let spectral = s
                .div(s * lam + tau_iv)?
                .pow_interval(s * Interval::point(0.5))?;
            Ok(front * spectral)
        }
        _ => Err(ConstantsError::DomainError(
            "embedding bound needs N >= 2".into(),
        )),
    }
}

pub fn embed_plum_upper(
    p: f64,
    n_dim: u32,
    lambda1_lower: f64,
    tau: f64,
) -> Result<f64, ConstantsError> {
    Ok(embed_plum_upper_enclosure(p, n_dim, lambda1_lower, tau)?.hi())
}

/// Interpolation constant for the tau-norm: C(M) sqrt(1 + tau C(M)^2).
pub fn cm_tau_enclosure(c_m: f64, tau: f64) -> Result<Interval, ConstantsError> {
    check_positive("C(M)", c_m)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(ConstantsError::DomainError(format!(
            "tau must be finite and nonnegative, got {tau}"
        )));
    }
    let c = Interval::point(c_m);
    Ok(c * (Interval::ONE + Interval::point(tau) * c * c).sqrt()?)
}

pub fn cm_tau(c_m: f64, tau: f64) -> Result<f64, ConstantsError> {
    Ok(cm_tau_enclosure(c_m, tau)?.hi())
}

/// A_m factor: 1 for m = 1 or m = infinity,
/// sqrt(m^(2/m - 1) (m-1)^(1 - 1/m)) otherwise.
fn a_factor(m: Interval) -> Result<Interval, ConstantsError> {
    if m.lo() == 1.0 && m.hi() == 1.0 {
        return Ok(Interval::ONE);
    }
    if m.hi() == f64::INFINITY {
        if m.lo() == f64::INFINITY {
            return Ok(Interval::ONE);
        }
        return Err(ConstantsError::DomainError(
            "A_m with a half-unbounded exponent interval".into(),
        ));
    }
    if m.lo() <= 1.0 {
        return Err(ConstantsError::DomainError(format!(
            "A_m needs m > 1 (or exactly 1), got {m}"
        )));
    }
    let inv_m = Interval::ONE.div(m)?;
    let two_over_m = Interval::point(2.0).div(m)?;
    let first = m.pow_interval(two_over_m - Interval::ONE)?;
    let second = (m - Interval::ONE).pow_interval(Interval::ONE - inv_m)?;
    Ok((first * second).sqrt()?)
}

/// Relative-width tolerance demanded of the singular-integral enclosure.
const DP_QUAD_TOL: f64 = 1e-3;
const DP_QUAD_MAX_PANELS: usize = 1 << 21;

/// Poincare-type constant D_p for a convex rectangle (N = 2):
///
///   D_p = (d^2 / (2 |Omega|)) (A_r A_q A_{p'})^2 || |x|^{-1} ||_{L^r(U)},
///
/// with r = qp/((q-1)p + q), p' = p/(p-1) and U the centered difference
/// rectangle (-w,w) x (-h,h). The L^r integral is reduced to
/// one-dimensional integrals by radial integration, which absorbs the
/// singularity analytically:
///
///   int_U |x|^{-r} = 4/(2-r) [ w int_0^h (w^2+y^2)^{-r/2} dy
///                            + h int_0^w (x^2+h^2)^{-r/2} dx ],
///
/// each factor enclosed by monotone Riemann brackets refined until the
/// relative width is below 1e-3.
pub fn mizuguchi_dp_enclosure(
    rect: &Rectangle,
    p: f64,
    q: f64,
) -> Result<Interval, ConstantsError> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    if !(1.0 <= q && q <= p) {
        return Err(ConstantsError::DomainError(format!(
            "need 1 <= q <= p, got q = {q}, p = {p}"
        )));
    }
    if q > 2.0 {
        return Err(ConstantsError::DomainError(format!(
            "N = 2 requires q <= 2, got {q}"
        )));
    }
    if q < 2.0 && !(p < 2.0 * q / (2.0 - q)) {
        return Err(ConstantsError::DomainError(format!(
            "need p < 2q/(2-q) = {} for q = {q}, got {p}",
            2.0 * q / (2.0 - q)
        )));
    }
    let p_iv = Interval::point(p);
    let q_iv = Interval::point(q);
    let r = (q_iv * p_iv).div((q_iv - Interval::ONE) * p_iv + q_iv)?;
    if !(r.hi() < 2.0) {
        return Err(ConstantsError::DomainError(format!(
            "integrability requires r < 2, got r = {r}"
        )));
    }
    let p_conj = if p == 1.0 {
        Interval::new(f64::INFINITY, f64::INFINITY).expect("valid")
    } else {
        p_iv.div(p_iv - Interval::ONE)?
    };
    let a = a_factor(r)? * a_factor(q_iv)? * a_factor(p_conj)?;

    let w = Interval::point(rect.bx) - Interval::point(rect.ax);
    let h = Interval::point(rect.by) - Interval::point(rect.ay);
    let d_sq = w * w + h * h;
    let area = w * h;

    let part1 = w * edge_integral(w, h, r)?;
    let part2 = h * edge_integral(h, w, r)?;
    let integral = (Interval::point(4.0).div(Interval::point(2.0) - r)?) * (part1 + part2);
    let norm = integral.pow_interval(Interval::ONE.div(r)?)?;
    Ok(d_sq.div(Interval::point(2.0) * area)? * a * a * norm)
}

/// Monotone Riemann enclosure of int_0^len (base^2 + t^2)^(-r/2) dt,
/// refined by panel doubling until the relative width is small.
fn edge_integral(base: Interval, len: Interval, r: Interval) -> Result<Interval, ConstantsError> {
    let neg_half_r = -(r * Interval::point(0.5));
    let g = |t: Interval| -> Result<Interval, ConstantsError> {
        Ok((base * base + t * t).pow_interval(neg_half_r)?)
    };
    let mut panels = 64usize;
    loop {
        let dt = len.div(Interval::point(panels as f64))?;
        let mut sum = Interval::ZERO;
        for k in 0..panels {
            let t0 = dt * Interval::point(k as f64);
            let t1 = dt * Interval::point((k + 1) as f64);
            // integrand decreasing in t: bracket by the endpoint values
            let g_hi = g(t0)?;
            let g_lo = g(t1)?;
            let bracket =
                Interval::new(g_lo.lo().min(g_hi.lo()), g_hi.hi()).expect("bracket ordered");
            sum = sum + dt * bracket;
        }
        let rel = sum.width() / sum.lo().max(f64::MIN_POSITIVE);
        if rel <= DP_QUAD_TOL / 2.0 {
            return Ok(sum);
        }
        panels *= 2;
        if panels > DP_QUAD_MAX_PANELS {
            return Err(ConstantsError::QuadratureBudgetExceeded {
                width: sum.width(),
                tol: DP_QUAD_TOL,
            });
        }
    }
}

pub fn mizuguchi_dp(rect: &Rectangle, p: f64, q: f64) -> Result<f64, ConstantsError> {
    Ok(mizuguchi_dp_enclosure(rect, p, q)?.hi())
}

/// Embedding-type constant C_p' over a finite rectangle partition:
///
///   C_p' = 2^(1 - 1/q) max( max_i |Omega_i|^(1/p - 1/q), max_i D_p(Omega_i) ).
///
/// With q = 2 this bounds the mixed-boundary embedding constant
/// C_p(Omega, Gamma_D) for every choice of Gamma_D. The p = q = infinity
/// branch of the theorem needs the oscillation constant D_infinity, which
/// this toolbox does not produce; infinite exponents are rejected.
pub fn mizuguchi_cp_enclosure(
    partition: &[Rectangle],
    p: f64,
    q: f64,
) -> Result<Interval, ConstantsError> {
    if partition.is_empty() {
        return Err(ConstantsError::PartitionInvalid(
            "partition must contain at least one rectangle".into(),
        ));
    }
    if !p.is_finite() || !q.is_finite() {
        return Err(ConstantsError::DomainError(
            "infinite exponents are not supported (D_infinity unavailable)".into(),
        ));
    }
    for (i, a) in partition.iter().enumerate() {
        for b in &partition[i + 1..] {
            let overlap = a.ax < b.bx && b.ax < a.bx && a.ay < b.by && b.ay < a.by;
            if overlap {
                return Err(ConstantsError::PartitionInvalid(format!(
                    "rectangles {i} and a later one have overlapping interiors"
                )));
            }
        }
    }
    let p_iv = Interval::point(p);
    let q_iv = Interval::point(q);
    let expo = Interval::ONE.div(p_iv)? - Interval::ONE.div(q_iv)?;
    let mut max_term = Interval::ZERO;
    for rect in partition {
        let vol_term = rect.area_interval().pow_interval(expo)?;
        let dp_term = mizuguchi_dp_enclosure(rect, p, q)?;
        for t in [vol_term, dp_term] {
            if t.hi() > max_term.hi() {
                max_term = t;
            }
        }
    }
    let front = Interval::point(2.0).pow_interval(Interval::ONE - Interval::ONE.div(q_iv)?)?;
    Ok(front * max_term)
}

pub fn mizuguchi_cp(partition: &[Rectangle], p: f64, q: f64) -> Result<f64, ConstantsError> {
    Ok(mizuguchi_cp_enclosure(partition, p, q)?.hi())
}
