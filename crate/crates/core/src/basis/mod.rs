//! Legendre tensor coefficient fields: certified range enclosures and
//! L^p norm upper bounds, plus the plain-f64 evaluation path the solver
//! uses.
//!
//! A field is u_hat(x,y) = offset + sum_{i,j} u_ij phi_i(s) phi_j(t) in the
//! normalized coordinates (s,t) of its rectangle. The offset is zero for
//! H^1_0-conforming solutions; it exists so exact constant fields can be
//! represented for classification fixtures.
//!
//! Range enclosures use a second-order Taylor form around the cell center:
//! value and gradient are evaluated there in interval arithmetic (thin
//! arguments keep the Legendre recurrences stable), and the Hessian is
//! bounded globally from the coefficient sums. A naive interval extension
//! of the recurrences is useless beyond degree ~15: the three-term
//! recurrence amplifies the width of a non-thin argument exponentially.

mod eval;
mod io;

pub use eval::{phi_eval, phi_table_f64, q_and_dq, q_and_dq_f64};
pub use io::{parse_coefficient_text, read_coefficient_file, write_coefficient_file};

use crate::interval::{Interval, IntervalError};
use eval::{dq_sup_bound, phi_from_dq, phi_sup_bound};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("invalid rectangle [{ax}, {bx}] x [{ay}, {by}]")]
    InvalidRectangle { ax: f64, bx: f64, ay: f64, by: f64 },
    #[error("invalid coefficient field: {0}")]
    InvalidField(String),
    #[error("cell lies outside the coefficient field domain")]
    CellOutsideDomain,
    #[error("cells overlap; L^p bound requires pairwise disjoint interiors")]
    OverlappingCells,
    #[error("invalid exponent {0}: need p > 1")]
    InvalidExponent(f64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Axis-aligned rectangle [ax,bx] x [ay,by].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub ax: f64,
    pub bx: f64,
    pub ay: f64,
    pub by: f64,
}

impl Rectangle {
    pub fn new(ax: f64, bx: f64, ay: f64, by: f64) -> Result<Self, BasisError> {
        let ok = ax.is_finite() && bx.is_finite() && ay.is_finite() && by.is_finite();
        if !ok || ax >= bx || ay >= by {
            return Err(BasisError::InvalidRectangle { ax, bx, ay, by });
        }
        Ok(Rectangle { ax, bx, ay, by })
    }

    pub fn unit_square() -> Self {
        Rectangle {
            ax: 0.0,
            bx: 1.0,
            ay: 0.0,
            by: 1.0,
        }
    }

    pub fn width(&self) -> f64 {
        self.bx - self.ax
    }

    pub fn height(&self) -> f64 {
        self.by - self.ay
    }

    /// Enclosure of the area.
    pub fn area_interval(&self) -> Interval {
        (Interval::point(self.bx) - Interval::point(self.ax))
            * (Interval::point(self.by) - Interval::point(self.ay))
    }

    /// Enclosure of the diagonal length sup d(x,y).
    pub fn diameter_interval(&self) -> Interval {
        let w = Interval::point(self.bx) - Interval::point(self.ax);
        let h = Interval::point(self.by) - Interval::point(self.ay);
        (w * w + h * h).sqrt().expect("squares are nonnegative")
    }

    pub fn contains_rect(&self, other: &Rectangle) -> bool {
        self.ax <= other.ax && other.bx <= self.bx && self.ay <= other.ay && other.by <= self.by
    }

    fn overlaps_interior(&self, other: &Rectangle) -> bool {
        self.ax < other.bx && other.ax < self.bx && self.ay < other.by && other.ay < self.by
    }
}

/// Global sup bounds on the series and its derivatives in normalized
/// coordinates, derived from |Q_n| <= 1, |Q_n'| <= n(n+1),
/// |phi_n| <= 1/(2n+1). All upper-rounded.
#[derive(Debug, Clone, Copy)]
struct FieldBounds {
    value: f64,
    hess_xx: f64,
    hess_xy: f64,
    hess_yy: f64,
}

/// Approximate solution as an M_u x M_u tensor of Legendre coefficients.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    mu: usize,
    /// Row-major: coeffs[i * mu + j] is the coefficient of phi_{i+1} phi_{j+1}.
    coeffs: Vec<f64>,
    offset: f64,
    domain: Rectangle,
    bounds: FieldBounds,
}

impl CoefficientField {
    pub fn new(mu: usize, coeffs: Vec<f64>, domain: Rectangle) -> Result<Self, BasisError> {
        Self::with_offset(mu, coeffs, domain, 0.0)
    }

    pub fn with_offset(
        mu: usize,
        coeffs: Vec<f64>,
        domain: Rectangle,
        offset: f64,
    ) -> Result<Self, BasisError> {
        if mu == 0 {
            return Err(BasisError::InvalidField("mu must be at least 1".into()));
        }
        if coeffs.len() != mu * mu {
            return Err(BasisError::InvalidField(format!(
                "expected {} coefficients for mu = {mu}, got {}",
                mu * mu,
                coeffs.len()
            )));
        }
        if !offset.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(BasisError::InvalidField(
                "coefficients must be finite".into(),
            ));
        }
        let bounds = compute_bounds(mu, &coeffs);
        Ok(CoefficientField {
            mu,
            coeffs,
            offset,
            domain,
            bounds,
        })
    }

    /// Exact constant field u_hat = c (all coefficients zero).
    pub fn constant(c: f64, domain: Rectangle) -> Self {
        Self::with_offset(1, vec![0.0], domain, c).expect("constant field is always valid")
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn domain(&self) -> &Rectangle {
        &self.domain
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of phi_{i+1} phi_{j+1} (zero-based indices).
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i * self.mu + j]
    }

    /// Global enclosure of the field's range over the whole domain.
    pub fn global_range(&self) -> Interval {
        Interval::point(self.offset)
            + Interval::new(-self.bounds.value, self.bounds.value).expect("finite bound")
    }

    /// Enclosure of {u_hat(x,y) : (x,y) in cell}, physical coordinates.
    pub fn uhat_range(&self, cell: &Rectangle) -> Result<Interval, BasisError> {
        if !self.domain.contains_rect(cell) {
            return Err(BasisError::CellOutsideDomain);
        }
        let (tx, ty) = self.normalize_cell(cell);
        Ok(self.range_normalized(tx, ty))
    }

    /// Outward-rounded image of a physical cell in normalized coordinates.
    fn normalize_cell(&self, cell: &Rectangle) -> (Interval, Interval) {
        let wx = Interval::point(self.domain.bx) - Interval::point(self.domain.ax);
        let wy = Interval::point(self.domain.by) - Interval::point(self.domain.ay);
        let tx0 = (Interval::point(cell.ax) - Interval::point(self.domain.ax))
            .div(wx)
            .expect("domain has positive width")
            .lo()
            .clamp(0.0, 1.0);
        let tx1 = (Interval::point(cell.bx) - Interval::point(self.domain.ax))
            .div(wx)
            .expect("domain has positive width")
            .hi()
            .clamp(tx0, 1.0);
        let ty0 = (Interval::point(cell.ay) - Interval::point(self.domain.ay))
            .div(wy)
            .expect("domain has positive height")
            .lo()
            .clamp(0.0, 1.0);
        let ty1 = (Interval::point(cell.by) - Interval::point(self.domain.ay))
            .div(wy)
            .expect("domain has positive height")
            .hi()
            .clamp(ty0, 1.0);
        (
            Interval::new(tx0, tx1).expect("ordered by clamping"),
            Interval::new(ty0, ty1).expect("ordered by clamping"),
        )
    }

    /// Taylor-form range enclosure on a normalized cell.
    ///
    /// For any point p of the cell and center c, the mean value theorem
    /// along the segment [c, p] gives
    ///   u(p) = u(c) + grad u(c) . (p - c) + 1/2 (p-c)^T H(xi) (p-c),
    /// so the enclosure is value + gradient * radius box + Hessian-bound
    /// remainder, intersected with the global range bound.
    pub(crate) fn range_normalized(&self, tx: Interval, ty: Interval) -> Interval {
        let cx = tx.mid();
        let cy = ty.mid();
        let (qx, dqx) = q_and_dq(self.mu, Interval::point(cx));
        let phix = phi_from_dq(Interval::point(cx), &dqx);
        let (qy, dqy) = q_and_dq(self.mu, Interval::point(cy));
        let phiy = phi_from_dq(Interval::point(cy), &dqy);

        let mut value = Interval::ZERO;
        let mut grad_x = Interval::ZERO;
        let mut grad_y = Interval::ZERO;
        for i in 0..self.mu {
            let mut w = Interval::ZERO; // sum_j u_ij phi_j(cy)
            let mut wq = Interval::ZERO; // sum_j u_ij Q_j(cy)
            for j in 0..self.mu {
                let u = Interval::point(self.coeff(i, j));
                w = w + u * phiy[j];
                wq = wq + u * qy[j + 1];
            }
            value = value + phix[i] * w;
            grad_x = grad_x - qx[i + 1] * w;
            grad_y = grad_y - phix[i] * wq;
        }

        let rx = radius_up(tx, cx);
        let ry = radius_up(ty, cy);
        let enc = Interval::point(self.offset)
            + value
            + grad_x * Interval::new(-rx, rx).expect("finite radius")
            + grad_y * Interval::new(-ry, ry).expect("finite radius")
            + self.taylor_remainder(rx, ry);
        enc.intersect(&self.global_range()).unwrap_or(enc)
    }

    /// Symmetric remainder interval 1/2 (Hxx rx^2 + 2 Hxy rx ry + Hyy ry^2).
    fn taylor_remainder(&self, rx: f64, ry: f64) -> Interval {
        let rx = Interval::point(rx);
        let ry = Interval::point(ry);
        let b = &self.bounds;
        let q = Interval::point(b.hess_xx) * rx * rx
            + Interval::point(2.0 * b.hess_xy) * rx * ry
            + Interval::point(b.hess_yy) * ry * ry;
        let half = (q * Interval::point(0.5)).hi();
        Interval::new(-half, half).expect("finite remainder")
    }

    /// Upper bound for (sum over cells of int |u_hat|^p)^(1/p) via
    /// sup-norm times area per cell, upper-rounded throughout.
    pub fn lp_norm_upper(&self, cells: &[Rectangle], p: f64) -> Result<f64, BasisError> {
        if !(p > 1.0) {
            return Err(BasisError::InvalidExponent(p));
        }
        for (k, a) in cells.iter().enumerate() {
            if !self.domain.contains_rect(a) {
                return Err(BasisError::CellOutsideDomain);
            }
            for b in &cells[k + 1..] {
                if a.overlaps_interior(b) {
                    return Err(BasisError::OverlappingCells);
                }
            }
        }
        let mut sum = Interval::ZERO;
        for cell in cells {
            let sup = self.uhat_range(cell)?.mag();
            let term = Interval::point(sup).pow(p)? * cell.area_interval();
            sum = sum + term;
        }
        lp_root_upper(sum, p)
    }

    /// Point value of u_hat at physical coordinates (plain f64, solver path).
    pub fn point_eval(&self, x: f64, y: f64) -> f64 {
        let s = (x - self.domain.ax) / self.domain.width();
        let t = (y - self.domain.ay) / self.domain.height();
        let (phix, _, _) = phi_table_f64(self.mu, s);
        let (phiy, _, _) = phi_table_f64(self.mu, t);
        let mut v = self.offset;
        for i in 0..self.mu {
            let mut w = 0.0;
            for j in 0..self.mu {
                w += self.coeff(i, j) * phiy[j];
            }
            v += phix[i] * w;
        }
        v
    }

    /// Residual Delta u_hat + f(u_hat) at physical coordinates (plain f64).
    pub fn residual<F: Fn(f64) -> f64>(&self, f: F, x: f64, y: f64) -> f64 {
        let (value, lap) = self.value_and_laplacian(x, y);
        lap + f(value)
    }

    /// (u_hat, Delta u_hat) at physical coordinates (plain f64).
    pub fn value_and_laplacian(&self, x: f64, y: f64) -> (f64, f64) {
        let lx2 = self.domain.width() * self.domain.width();
        let ly2 = self.domain.height() * self.domain.height();
        let s = (x - self.domain.ax) / self.domain.width();
        let t = (y - self.domain.ay) / self.domain.height();
        let (phix, _, ddphix) = phi_table_f64(self.mu, s);
        let (phiy, _, ddphiy) = phi_table_f64(self.mu, t);
        let mut v = self.offset;
        let mut lap = 0.0;
        for i in 0..self.mu {
            let mut w = 0.0;
            let mut wv = 0.0;
            for j in 0..self.mu {
                let u = self.coeff(i, j);
                wv += u * phiy[j];
                w += u * ddphiy[j];
            }
            v += phix[i] * wv;
            lap += ddphix[i] * wv / lx2 + phix[i] * w / ly2;
        }
        (v, lap)
    }

    /// Shared per-axis tables for evaluating every cell of an nx x ny grid.
    pub fn grid_evaluator(&self, nx: u32, ny: u32) -> GridEvaluator<'_> {
        GridEvaluator::new(self, nx, ny)
    }
}

/// Upper-rounded distance from the center to the farthest cell edge.
fn radius_up(t: Interval, c: f64) -> f64 {
    let a = (Interval::point(t.hi()) - Interval::point(c)).hi();
    let b = (Interval::point(c) - Interval::point(t.lo())).hi();
    a.max(b).max(0.0)
}

/// Upper bound of sum^(1/p) with the exponent enclosed as an interval.
pub(crate) fn lp_root_upper(sum: Interval, p: f64) -> Result<f64, BasisError> {
    let inv_p = Interval::ONE.div(Interval::point(p))?;
    Ok(sum.pow_interval(inv_p)?.hi())
}

fn compute_bounds(mu: usize, coeffs: &[f64]) -> FieldBounds {
    let phi_sup: Vec<Interval> = (1..=mu).map(|n| Interval::point(phi_sup_bound(n))).collect();
    let dq_sup: Vec<Interval> = (1..=mu).map(|n| Interval::point(dq_sup_bound(n))).collect();
    let mut value = Interval::ZERO;
    let mut hess_xx = Interval::ZERO;
    let mut hess_xy = Interval::ZERO;
    let mut hess_yy = Interval::ZERO;
    for i in 0..mu {
        for j in 0..mu {
            let a = Interval::point(coeffs[i * mu + j].abs());
            value = value + a * phi_sup[i] * phi_sup[j];
            hess_xx = hess_xx + a * dq_sup[i] * phi_sup[j]; // |phi_i''| = |Q_i'|
            hess_yy = hess_yy + a * phi_sup[i] * dq_sup[j];
            hess_xy = hess_xy + a; // |phi_i' phi_j'| = |Q_i Q_j| <= 1
        }
    }
    FieldBounds {
        value: value.hi(),
        hess_xx: hess_xx.hi(),
        hess_xy: hess_xy.hi(),
        hess_yy: hess_yy.hi(),
    }
}

/// Per-axis tables shared across all cells of a grid, so one cell range
/// costs O(mu) instead of O(mu^2).
pub struct GridEvaluator<'a> {
    field: &'a CoefficientField,
    nx: u32,
    ny: u32,
    /// phi_k(cx_i) per column.
    col_phi: Vec<Vec<Interval>>,
    /// Q_k(cx_i) per column.
    col_q: Vec<Vec<Interval>>,
    /// Per row j: w[i] = sum_jb u[i][jb] phi_jb(cy_j).
    row_w: Vec<Vec<Interval>>,
    /// Per row j: wq[i] = sum_jb u[i][jb] Q_jb(cy_j).
    row_wq: Vec<Vec<Interval>>,
    remainder: Interval,
    rx: f64,
    ry: f64,
}

impl<'a> GridEvaluator<'a> {
    fn new(field: &'a CoefficientField, nx: u32, ny: u32) -> Self {
        assert!(nx >= 1 && ny >= 1);
        let mu = field.mu;
        let mut col_phi = Vec::with_capacity(nx as usize);
        let mut col_q = Vec::with_capacity(nx as usize);
        for i in 0..nx {
            let cx = cell_center(i, nx);
            let (q, dq) = q_and_dq(mu, Interval::point(cx));
            col_phi.push(phi_from_dq(Interval::point(cx), &dq));
            col_q.push(q[1..].to_vec());
        }
        let mut row_w = Vec::with_capacity(ny as usize);
        let mut row_wq = Vec::with_capacity(ny as usize);
        for j in 0..ny {
            let cy = cell_center(j, ny);
            let (qy, dqy) = q_and_dq(mu, Interval::point(cy));
            let phiy = phi_from_dq(Interval::point(cy), &dqy);
            let mut w = vec![Interval::ZERO; mu];
            let mut wq = vec![Interval::ZERO; mu];
            for (i, (wi, wqi)) in w.iter_mut().zip(wq.iter_mut()).enumerate() {
                for jb in 0..mu {
                    let u = Interval::point(field.coeff(i, jb));
                    *wi = *wi + u * phiy[jb];
                    *wqi = *wqi + u * qy[jb + 1];
                }
            }
            row_w.push(w);
            row_wq.push(wq);
        }
        let rx = half_width_up(nx);
        let ry = half_width_up(ny);
        let remainder = field.taylor_remainder(rx, ry);
        GridEvaluator {
            field,
            nx,
            ny,
            col_phi,
            col_q,
            row_w,
            row_wq,
            remainder,
            rx,
            ry,
        }
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.nx, self.ny)
    }

    /// Range enclosure of the field over normalized cell (i, j).
    pub fn cell_range(&self, i: u32, j: u32) -> Interval {
        let phix = &self.col_phi[i as usize];
        let qx = &self.col_q[i as usize];
        let w = &self.row_w[j as usize];
        let wq = &self.row_wq[j as usize];
        let mut value = Interval::ZERO;
        let mut grad_x = Interval::ZERO;
        let mut grad_y = Interval::ZERO;
        for k in 0..self.field.mu {
            value = value + phix[k] * w[k];
            grad_x = grad_x - qx[k] * w[k];
            grad_y = grad_y - phix[k] * wq[k];
        }
        let enc = Interval::point(self.field.offset)
            + value
            + grad_x * Interval::new(-self.rx, self.rx).expect("finite radius")
            + grad_y * Interval::new(-self.ry, self.ry).expect("finite radius")
            + self.remainder;
        enc.intersect(&self.field.global_range()).unwrap_or(enc)
    }
}

/// Center of cell i of n equal cells of [0,1]; exact for power-of-two n.
fn cell_center(i: u32, n: u32) -> f64 {
    (2 * i as u64 + 1) as f64 / (2 * n as u64) as f64
}

/// Upper bound on the half-width 1/(2n) plus center rounding slack.
fn half_width_up(n: u32) -> f64 {
    // Cell edges are i/n and (i+1)/n; centers are (2i+1)/(2n). For
    // power-of-two n all three are exact and the radius is exactly 1/(2n).
    // For general n, pad by one ulp per rounded quantity.
    let base = Interval::ONE
        .div(Interval::point(2.0 * n as f64))
        .expect("n >= 1")
        .hi();
    if n.is_power_of_two() {
        base
    } else {
        base.next_up().next_up()
    }
}
