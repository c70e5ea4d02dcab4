//! Dyadic cell classification and the certified geometry of the sets
//! Omega_+ / Omega_- / Omega_0.
//!
//! The domain is divided into 2^m congruent cells (2^ceil(m/2) columns by
//! 2^floor(m/2) rows, each a scaled copy of the rectangle). A cell is
//! labeled Plus only when the certified range enclosure shows
//! inf u_hat - sigma > 0 on it, Minus only when sup u_hat + sigma < 0, and
//! Undetermined otherwise. Omega_+ is the interior of the union of the
//! Plus cells, Omega_- likewise, and Omega_0 = Omega \ (Omega_+ u Omega_-)
//! encloses the nodal line.
//!
//! Component counting is topology-aware: open cell unions (Omega_+,
//! Omega_-) are connected across shared edges only, while the closed
//! complements (Omega_0 and the unions Omega_+- u Omega_0) also connect
//! through shared corners. The API rejects the mismatched pairing, since
//! each direction of mismatch breaks one of the count bounds.

mod components;

pub use components::label_components;

use crate::basis::{CoefficientField, Rectangle};
use crate::interval::Interval;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("sigma must be finite and nonnegative, got {0}")]
    InvalidSigma(f64),
    #[error("subdivision exponent {0} exceeds the supported maximum of 31")]
    SubdivisionTooFine(u32),
    #[error(
        "adjacency mismatch: {requested:?} is invalid for {region:?} \
         (open regions need EdgeOnly, closed regions EdgeAndCorner)"
    )]
    AdjacencyMismatch { region: Region, requested: Adjacency },
    #[error("invalid classification: {0}")]
    InvalidClassification(String),
    #[error("invalid boundary specification: {0}")]
    InvalidBoundarySpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellLabel {
    Plus,
    Minus,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    PlusRegion,
    MinusRegion,
    ZeroRegion,
    PlusUnionZero,
    MinusUnionZero,
}

impl Region {
    /// Open regions are interiors of cell unions; the others are closed
    /// complements of open sets in Omega.
    pub fn is_open(self) -> bool {
        matches!(self, Region::PlusRegion | Region::MinusRegion)
    }

    fn selects(self, label: CellLabel) -> bool {
        match self {
            Region::PlusRegion => label == CellLabel::Plus,
            Region::MinusRegion => label == CellLabel::Minus,
            Region::ZeroRegion => label == CellLabel::Undetermined,
            Region::PlusUnionZero => label != CellLabel::Minus,
            Region::MinusUnionZero => label != CellLabel::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    EdgeOnly,
    EdgeAndCorner,
}

/// Certified classification of the 2^m cell grid.
#[derive(Debug, Clone)]
pub struct CellClassification {
    m: u32,
    nx: u32,
    ny: u32,
    labels: Vec<CellLabel>,
    /// Per-cell range enclosure of u_hat actually used for labeling.
    ranges: Vec<Interval>,
    sigma: f64,
    domain: Rectangle,
    degenerate_contact: bool,
}

pub fn grid_dims(m: u32) -> (u32, u32) {
    (1u32 << m.div_ceil(2), 1u32 << (m / 2))
}

/// Classify every cell of the 2^m grid against the signed thresholds.
///
/// Threshold-straddling cells are refined once (2x2 children on the next
/// dyadic level); a cell is promoted only if all four children certify,
/// which keeps classifications nested under grid refinement.
pub fn classify(
    field: &CoefficientField,
    sigma: f64,
    m: u32,
) -> Result<CellClassification, GridError> {
    classify_with_refinement(field, sigma, m, true)
}

pub fn classify_with_refinement(
    field: &CoefficientField,
    sigma: f64,
    m: u32,
    refine: bool,
) -> Result<CellClassification, GridError> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(GridError::InvalidSigma(sigma));
    }
    if m > 31 {
        return Err(GridError::SubdivisionTooFine(m));
    }
    let (nx, ny) = grid_dims(m);
    let total = (nx as usize) * (ny as usize);
    let eval = field.grid_evaluator(nx, ny);
    let eval_children = if refine && m <= 29 {
        Some(field.grid_evaluator(nx * 2, ny * 2))
    } else {
        None
    };
    let sig = Interval::point(sigma);

    let decide = |range: Interval| -> CellLabel {
        if (range - sig).lo() > 0.0 {
            CellLabel::Plus
        } else if (range + sig).hi() < 0.0 {
            CellLabel::Minus
        } else {
            CellLabel::Undetermined
        }
    };

    let mut labels = vec![CellLabel::Undetermined; total];
    let mut ranges = vec![Interval::ZERO; total];
    labels
        .par_chunks_mut(nx as usize)
        .zip(ranges.par_chunks_mut(nx as usize))
        .enumerate()
        .for_each(|(j, (label_row, range_row))| {
            let j = j as u32;
            for i in 0..nx {
                let range = eval.cell_range(i, j);
                let mut label = decide(range);
                let mut stored = range;
                if label == CellLabel::Undetermined {
                    if let Some(fine) = &eval_children {
                        let kids = [
                            fine.cell_range(2 * i, 2 * j),
                            fine.cell_range(2 * i + 1, 2 * j),
                            fine.cell_range(2 * i, 2 * j + 1),
                            fine.cell_range(2 * i + 1, 2 * j + 1),
                        ];
                        let votes: Vec<CellLabel> = kids.iter().map(|r| decide(*r)).collect();
                        if votes.iter().all(|&v| v == CellLabel::Plus) {
                            label = CellLabel::Plus;
                        } else if votes.iter().all(|&v| v == CellLabel::Minus) {
                            label = CellLabel::Minus;
                        }
                        let hull = kids[0].hull(&kids[1]).hull(&kids[2]).hull(&kids[3]);
                        stored = hull.intersect(&range).unwrap_or(range);
                    }
                }
                label_row[i as usize] = label;
                range_row[i as usize] = stored;
            }
        });

    let degenerate_contact = detect_degenerate_contact(nx, ny, &labels);
    Ok(CellClassification {
        m,
        nx,
        ny,
        labels,
        ranges,
        sigma,
        domain: *field.domain(),
        degenerate_contact,
    })
}

/// A Plus cell sharing an edge with a Minus cell is impossible for sound
/// enclosures of a continuous u_hat (both certifications would hold on the
/// shared edge); it is detected and flagged so the verifier refuses to
/// certify instead of guessing.
fn detect_degenerate_contact(nx: u32, ny: u32, labels: &[CellLabel]) -> bool {
    let idx = |i: u32, j: u32| (j * nx + i) as usize;
    for j in 0..ny {
        for i in 0..nx {
            let here = labels[idx(i, j)];
            if here == CellLabel::Undetermined {
                continue;
            }
            let opposite = if here == CellLabel::Plus {
                CellLabel::Minus
            } else {
                CellLabel::Plus
            };
            if i + 1 < nx && labels[idx(i + 1, j)] == opposite {
                return true;
            }
            if j + 1 < ny && labels[idx(i, j + 1)] == opposite {
                return true;
            }
        }
    }
    false
}

impl CellClassification {
    /// Assemble a classification from explicit labels and ranges.
    ///
    /// This constructor certifies nothing; it exists for hand-built
    /// fixtures and for replaying externally computed classifications.
    pub fn from_labels(
        m: u32,
        labels: Vec<CellLabel>,
        ranges: Vec<Interval>,
        sigma: f64,
        domain: Rectangle,
    ) -> Result<Self, GridError> {
        if m > 31 {
            return Err(GridError::SubdivisionTooFine(m));
        }
        let (nx, ny) = grid_dims(m);
        let total = (nx as usize) * (ny as usize);
        if labels.len() != total || ranges.len() != total {
            return Err(GridError::InvalidClassification(format!(
                "expected {total} labels and ranges for m = {m}, got {} and {}",
                labels.len(),
                ranges.len()
            )));
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(GridError::InvalidSigma(sigma));
        }
        let degenerate_contact = detect_degenerate_contact(nx, ny, &labels);
        Ok(CellClassification {
            m,
            nx,
            ny,
            labels,
            ranges,
            sigma,
            domain,
            degenerate_contact,
        })
    }

    /// Fixture constructor with ranges synthesized to match the labels.
    pub fn from_labels_with_synthetic_ranges(
        m: u32,
        labels: Vec<CellLabel>,
        sigma: f64,
        domain: Rectangle,
    ) -> Result<Self, GridError> {
        let ranges = labels
            .iter()
            .map(|l| match l {
                CellLabel::Plus => Interval::new(sigma + 0.5, sigma + 1.0),
                CellLabel::Minus => Interval::new(-sigma - 1.0, -sigma - 0.5),
                CellLabel::Undetermined => Interval::new(-sigma - 0.1, sigma + 0.1),
            })
            .collect::<Result<Vec<_>, _>>()
            .expect("synthetic endpoints are ordered");
        Self::from_labels(m, labels, ranges, sigma, domain)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.nx, self.ny)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn domain(&self) -> &Rectangle {
        &self.domain
    }

    pub fn labels(&self) -> &[CellLabel] {
        &self.labels
    }

    pub fn label(&self, i: u32, j: u32) -> CellLabel {
        self.labels[(j * self.nx + i) as usize]
    }

    /// Range enclosure of u_hat over cell `idx` as used for labeling.
    pub fn range(&self, idx: u32) -> Interval {
        self.ranges[idx as usize]
    }

    /// Hull of all cell enclosures: a certified range of u_hat over Omega.
    pub fn range_hull(&self) -> Interval {
        self.ranges
            .iter()
            .skip(1)
            .fold(self.ranges[0], |acc, r| acc.hull(r))
    }

    pub fn count(&self, label: CellLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// True when every cell is undetermined, i.e. Omega_0 = Omega.
    pub fn omega0_is_whole_domain(&self) -> bool {
        self.labels.iter().all(|&l| l == CellLabel::Undetermined)
    }

    pub fn has_degenerate_contact(&self) -> bool {
        self.degenerate_contact
    }

    /// Enclosure of the area of a single cell.
    pub fn cell_area_interval(&self) -> Interval {
        self.domain
            .area_interval()
            .div(Interval::point(2f64.powi(self.m as i32)))
            .expect("cell count is positive")
    }

    pub fn cell_indices_with(&self, label: CellLabel) -> Vec<u32> {
        (0..self.labels.len() as u32)
            .filter(|&c| self.labels[c as usize] == label)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ComponentSet {
    pub region: Region,
    pub adjacency: Adjacency,
    /// Cell-index sets, each sorted, ordered by smallest member.
    pub components: Vec<Vec<u32>>,
}

impl ComponentSet {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

/// Connected components of a region of the classification.
///
/// Open regions must be requested with EdgeOnly (corner contact does not
/// connect interiors) and closed regions with EdgeAndCorner (closed cells
/// sharing a corner are connected); anything else is rejected because it
/// would push the corresponding count bound in the unsound direction.
pub fn region_components(
    cls: &CellClassification,
    region: Region,
    adjacency: Adjacency,
) -> Result<ComponentSet, GridError> {
    let required = if region.is_open() {
        Adjacency::EdgeOnly
    } else {
        Adjacency::EdgeAndCorner
    };
    if adjacency != required {
        return Err(GridError::AdjacencyMismatch {
            region,
            requested: adjacency,
        });
    }
    let selected: Vec<bool> = cls.labels.iter().map(|&l| region.selects(l)).collect();
    let components = label_components(
        cls.nx,
        cls.ny,
        &selected,
        adjacency == Adjacency::EdgeAndCorner,
    );
    Ok(ComponentSet {
        region,
        adjacency,
        components,
    })
}

/// Upper bound on the measure of a cell union (inter-cell edges are null
/// sets, so this is the rounded-up cell-area sum).
pub fn region_volume_upper(cls: &CellClassification, cells: &[u32]) -> f64 {
    if cells.is_empty() {
        return 0.0;
    }
    (cls.cell_area_interval() * Interval::point(cells.len() as f64)).hi()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Start of the segment in edge parameter [0,1].
    pub start: f64,
    pub end: f64,
    pub kind: BcKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

pub const SIDES: [Side; 4] = [Side::Bottom, Side::Right, Side::Top, Side::Left];

/// Dirichlet/Neumann labeling of the four rectangle edges, each split into
/// finitely many segments covering the edge exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    pub bottom: Vec<Segment>,
    pub right: Vec<Segment>,
    pub top: Vec<Segment>,
    pub left: Vec<Segment>,
}

impl BoundarySpec {
    pub fn all_dirichlet() -> Self {
        Self::uniform(
            BcKind::Dirichlet,
            BcKind::Dirichlet,
            BcKind::Dirichlet,
            BcKind::Dirichlet,
        )
    }

    pub fn all_neumann() -> Self {
        Self::uniform(
            BcKind::Neumann,
            BcKind::Neumann,
            BcKind::Neumann,
            BcKind::Neumann,
        )
    }

    pub fn uniform(bottom: BcKind, right: BcKind, top: BcKind, left: BcKind) -> Self {
        let whole = |kind| {
            vec![Segment {
                start: 0.0,
                end: 1.0,
                kind,
            }]
        };
        BoundarySpec {
            bottom: whole(bottom),
            right: whole(right),
            top: whole(top),
            left: whole(left),
        }
    }

    pub fn new(
        bottom: Vec<Segment>,
        right: Vec<Segment>,
        top: Vec<Segment>,
        left: Vec<Segment>,
    ) -> Result<Self, GridError> {
        for (name, segs) in [
            ("bottom", &bottom),
            ("right", &right),
            ("top", &top),
            ("left", &left),
        ] {
            validate_edge(name, segs)?;
        }
        Ok(BoundarySpec {
            bottom,
            right,
            top,
            left,
        })
    }

    pub fn side(&self, side: Side) -> &[Segment] {
        match side {
            Side::Bottom => &self.bottom,
            Side::Right => &self.right,
            Side::Top => &self.top,
            Side::Left => &self.left,
        }
    }

    pub fn gamma_n_is_empty(&self) -> bool {
        SIDES
            .iter()
            .all(|&s| self.side(s).iter().all(|seg| seg.kind == BcKind::Dirichlet))
    }

    pub fn gamma_d_is_empty(&self) -> bool {
        SIDES
            .iter()
            .all(|&s| self.side(s).iter().all(|seg| seg.kind == BcKind::Neumann))
    }
}

fn validate_edge(name: &str, segs: &[Segment]) -> Result<(), GridError> {
    if segs.is_empty() {
        return Err(GridError::InvalidBoundarySpec(format!(
            "{name} edge has no segments"
        )));
    }
    if segs[0].start != 0.0 {
        return Err(GridError::InvalidBoundarySpec(format!(
            "{name} edge must start at 0"
        )));
    }
    for w in segs.windows(2) {
        if w[0].end != w[1].start {
            return Err(GridError::InvalidBoundarySpec(format!(
                "{name} edge segments are not contiguous at {}",
                w[0].end
            )));
        }
    }
    for s in segs {
        if !(s.start < s.end) || !s.start.is_finite() || !s.end.is_finite() {
            return Err(GridError::InvalidBoundarySpec(format!(
                "{name} edge has an empty or malformed segment [{}, {}]",
                s.start, s.end
            )));
        }
    }
    if segs.last().unwrap().end != 1.0 {
        return Err(GridError::InvalidBoundarySpec(format!(
            "{name} edge must end at 1"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactReport {
    pub touches_neumann: bool,
    pub neumann_measure_positive: bool,
}

/// Neumann-contact analysis of a cell union against the boundary spec.
///
/// Conservative at breakpoints: single-point contact with a
/// Dirichlet/Neumann breakpoint counts as Neumann contact.
pub fn boundary_contact(
    cls: &CellClassification,
    cells: &[u32],
    bc: &BoundarySpec,
) -> ContactReport {
    let mut touches = false;
    let mut positive = false;
    let (nx, ny) = (cls.nx, cls.ny);
    for &cell in cells {
        let i = cell % nx;
        let j = cell / nx;
        let mut spans: Vec<(Side, f64, f64)> = Vec::new();
        if j == 0 {
            spans.push((Side::Bottom, i as f64 / nx as f64, (i + 1) as f64 / nx as f64));
        }
        if j == ny - 1 {
            spans.push((Side::Top, i as f64 / nx as f64, (i + 1) as f64 / nx as f64));
        }
        if i == 0 {
            spans.push((Side::Left, j as f64 / ny as f64, (j + 1) as f64 / ny as f64));
        }
        if i == nx - 1 {
            spans.push((Side::Right, j as f64 / ny as f64, (j + 1) as f64 / ny as f64));
        }
        for (side, lo, hi) in spans {
            for seg in cls_side(bc, side) {
                if seg.kind != BcKind::Neumann {
                    continue;
                }
                if seg.start <= hi && lo <= seg.end {
                    touches = true;
                }
                if seg.start < hi && lo < seg.end {
                    positive = true;
                }
            }
        }
        if touches && positive {
            break;
        }
    }
    ContactReport {
        touches_neumann: touches,
        neumann_measure_positive: positive,
    }
}

fn cls_side(bc: &BoundarySpec, side: Side) -> &[Segment] {
    bc.side(side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{CoefficientField, Rectangle};

    fn unit() -> Rectangle {
        Rectangle::unit_square()
    }

    #[test]
    fn constant_positive_field_is_all_plus() {
        let f = CoefficientField::constant(1.0, unit());
        let cls = classify(&f, 0.5, 6).unwrap();
        assert_eq!(cls.count(CellLabel::Plus), 64);
        assert!(!cls.omega0_is_whole_domain());
        let zero = region_components(&cls, Region::ZeroRegion, Adjacency::EdgeAndCorner).unwrap();
        assert_eq!(zero.count(), 0);
    }

    #[test]
    fn zero_field_is_all_undetermined() {
        let f = CoefficientField::constant(0.0, unit());
        let cls = classify(&f, 0.1, 4).unwrap();
        assert_eq!(cls.count(CellLabel::Undetermined), 16);
        assert!(cls.omega0_is_whole_domain());
    }

    #[test]
    fn grid_dims_follow_the_split() {
        assert_eq!(grid_dims(0), (1, 1));
        assert_eq!(grid_dims(1), (2, 1));
        assert_eq!(grid_dims(5), (8, 4));
        assert_eq!(grid_dims(20), (1024, 1024));
    }

    #[test]
    fn single_plus_cell_among_undetermined() {
        let mut labels = vec![CellLabel::Undetermined; 16];
        labels[5] = CellLabel::Plus;
        let cls =
            CellClassification::from_labels_with_synthetic_ranges(4, labels, 0.1, unit()).unwrap();
        let plus = region_components(&cls, Region::PlusRegion, Adjacency::EdgeOnly).unwrap();
        assert_eq!(plus.count(), 1);
    }

    #[test]
    fn corner_touching_plus_cells_are_two_open_components() {
        // 4x4 grid: cells (0,0) and (1,1) touch only at a corner.
        let mut labels = vec![CellLabel::Undetermined; 16];
        labels[0] = CellLabel::Plus;
        labels[5] = CellLabel::Plus;
        let cls =
            CellClassification::from_labels_with_synthetic_ranges(4, labels, 0.0, unit()).unwrap();
        let plus = region_components(&cls, Region::PlusRegion, Adjacency::EdgeOnly).unwrap();
        assert_eq!(plus.count(), 2);
        let closed =
            region_components(&cls, Region::PlusUnionZero, Adjacency::EdgeAndCorner).unwrap();
        assert_eq!(closed.count(), 1);
    }

    #[test]
    fn adjacency_mismatch_is_rejected_both_ways() {
        let labels = vec![CellLabel::Undetermined; 16];
        let cls =
            CellClassification::from_labels_with_synthetic_ranges(4, labels, 0.0, unit()).unwrap();
        assert!(matches!(
            region_components(&cls, Region::PlusRegion, Adjacency::EdgeAndCorner),
            Err(GridError::AdjacencyMismatch { .. })
        ));
        assert!(matches!(
            region_components(&cls, Region::ZeroRegion, Adjacency::EdgeOnly),
            Err(GridError::AdjacencyMismatch { .. })
        ));
    }

    #[test]
    fn volume_of_empty_set_is_zero_and_whole_grid_is_area() {
        let f = CoefficientField::constant(1.0, unit());
        let cls = classify(&f, 0.5, 8).unwrap();
        assert_eq!(region_volume_upper(&cls, &[]), 0.0);
        let all: Vec<u32> = (0..256).collect();
        let v = region_volume_upper(&cls, &all);
        assert!(v >= 1.0 && v <= 1.0 + 1e-12);
    }

    #[test]
    fn degenerate_plus_minus_contact_is_flagged() {
        let mut labels = vec![CellLabel::Undetermined; 16];
        labels[0] = CellLabel::Plus;
        labels[1] = CellLabel::Minus;
        let cls =
            CellClassification::from_labels_with_synthetic_ranges(4, labels, 0.0, unit()).unwrap();
        assert!(cls.has_degenerate_contact());
    }

    #[test]
    fn all_dirichlet_never_touches_neumann() {
        let labels = vec![CellLabel::Undetermined; 16];
        let cls =
            CellClassification::from_labels_with_synthetic_ranges(4, labels, 0.0, unit()).unwrap();
        let all: Vec<u32> = (0..16).collect();
        let r = boundary_contact(&cls, &all, &BoundarySpec::all_dirichlet());
        assert!(!r.touches_neumann && !r.neumann_measure_positive);
    }

    #[test]
    fn interior_component_never_touches_boundary() {
        // 4x4 grid; cells (1,1) and (2,1) are interior.
        let labels = vec![CellLabel::Undetermined; 16];
        let cls =
            CellClassification::from_labels_with_synthetic_ranges(4, labels, 0.0, unit()).unwrap();
        let r = boundary_contact(&cls, &[5, 6], &BoundarySpec::all_neumann());
        assert!(!r.touches_neumann && !r.neumann_measure_positive);
    }

    #[test]
    fn top_edge_cell_on_neumann_top_has_positive_measure() {
        let labels = vec![CellLabel::Undetermined; 16];
        let cls =
            CellClassification::from_labels_with_synthetic_ranges(4, labels, 0.0, unit()).unwrap();
        let bc = BoundarySpec::uniform(
            BcKind::Dirichlet,
            BcKind::Dirichlet,
            BcKind::Neumann,
            BcKind::Dirichlet,
        );
        // cell (1, 3) lies on the top edge
        let r = boundary_contact(&cls, &[3 * 4 + 1], &bc);
        assert!(r.touches_neumann && r.neumann_measure_positive);
    }

    #[test]
    fn breakpoint_contact_counts_as_neumann_touch() {
        // Top edge splits at 0.5: left half Dirichlet, right half Neumann.
        let labels = vec![CellLabel::Undetermined; 16];
        let cls =
            CellClassification::from_labels_with_synthetic_ranges(4, labels, 0.0, unit()).unwrap();
        let bc = BoundarySpec::new(
            vec![Segment {
                start: 0.0,
                end: 1.0,
                kind: BcKind::Dirichlet,
            }],
            vec![Segment {
                start: 0.0,
                end: 1.0,
                kind: BcKind::Dirichlet,
            }],
            vec![
                Segment {
                    start: 0.0,
                    end: 0.5,
                    kind: BcKind::Dirichlet,
                },
                Segment {
                    start: 0.5,
                    end: 1.0,
                    kind: BcKind::Neumann,
                },
            ],
            vec![Segment {
                start: 0.0,
                end: 1.0,
                kind: BcKind::Dirichlet,
            }],
        )
        .unwrap();
        // Top cell (1, 3) spans [0.25, 0.5] on the top edge: touches the
        // breakpoint but with zero shared measure.
        let r = boundary_contact(&cls, &[3 * 4 + 1], &bc);
        assert!(r.touches_neumann);
        assert!(!r.neumann_measure_positive);
    }

    #[test]
    fn boundary_spec_validation() {
        let bad = BoundarySpec::new(
            vec![Segment {
                start: 0.0,
                end: 0.9,
                kind: BcKind::Dirichlet,
            }],
            vec![Segment {
                start: 0.0,
                end: 1.0,
                kind: BcKind::Dirichlet,
            }],
            vec![Segment {
                start: 0.0,
                end: 1.0,
                kind: BcKind::Dirichlet,
            }],
            vec![Segment {
                start: 0.0,
                end: 1.0,
                kind: BcKind::Dirichlet,
            }],
        );
        assert!(matches!(bad, Err(GridError::InvalidBoundarySpec(_))));
    }

    #[test]
    fn classification_sound_against_point_samples() {
        // Random low-order field: every Plus cell must have u_hat > sigma
        // at sampled interior points, symmetrically for Minus.
        let coeffs: Vec<f64> = (0..9).map(|k| ((k * 37 % 11) as f64 - 5.0) / 5.0).collect();
        let f = CoefficientField::new(3, coeffs, unit()).unwrap();
        let sigma = 0.05;
        let cls = classify(&f, sigma, 8).unwrap();
        let (nx, ny) = cls.dims();
        for j in 0..ny {
            for i in 0..nx {
                let label = cls.label(i, j);
                if label == CellLabel::Undetermined {
                    continue;
                }
                for (dx, dy) in [(0.3, 0.3), (0.5, 0.5), (0.7, 0.2)] {
                    let x = (i as f64 + dx) / nx as f64;
                    let y = (j as f64 + dy) / ny as f64;
                    let v = f.point_eval(x, y);
                    match label {
                        CellLabel::Plus => assert!(v > sigma, "{v} at ({x},{y})"),
                        CellLabel::Minus => assert!(v < -sigma, "{v} at ({x},{y})"),
                        CellLabel::Undetermined => unreachable!(),
                    }
                }
            }
        }
    }
}
