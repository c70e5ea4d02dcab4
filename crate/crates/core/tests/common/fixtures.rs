//! Hand-built classification fixtures shared by the verifier and
//! acceptance suites: the three published solution topologies and the
//! mixed-boundary routing layout.

use nodalcert_core::basis::Rectangle;
use nodalcert_core::grid::{BcKind, BoundarySpec, CellClassification, CellLabel, Segment};

fn unit() -> Rectangle {
    Rectangle::unit_square()
}

/// 16x16 label canvas (m = 8).
pub struct Canvas {
    labels: Vec<CellLabel>,
}

impl Canvas {
    pub fn filled(label: CellLabel) -> Self {
        Canvas {
            labels: vec![label; 256],
        }
    }

    pub fn set(&mut self, i: u32, j: u32, label: CellLabel) {
        self.labels[(j * 16 + i) as usize] = label;
    }

    pub fn rect(&mut self, i0: u32, i1: u32, j0: u32, j1: u32, label: CellLabel) {
        for j in j0..=j1 {
            for i in i0..=i1 {
                self.set(i, j, label);
            }
        }
    }

    pub fn boundary_ring(&mut self, label: CellLabel) {
        for k in 0..16 {
            self.set(k, 0, label);
            self.set(k, 15, label);
            self.set(0, k, label);
            self.set(15, k, label);
        }
    }

    pub fn build(self, sigma: f64) -> CellClassification {
        CellClassification::from_labels_with_synthetic_ranges(8, self.labels, sigma, unit())
            .unwrap()
    }
}

/// Type (A): one positive lobe over a negative region whose two visible
/// parts may connect through the undetermined boundary band.
pub fn type_a_classification() -> CellClassification {
    let mut c = Canvas::filled(CellLabel::Minus);
    c.boundary_ring(CellLabel::Undetermined);
    c.rect(1, 14, 9, 14, CellLabel::Plus); // upper lobe
    c.rect(1, 14, 8, 8, CellLabel::Undetermined); // nodal band
    c.rect(7, 8, 1, 8, CellLabel::Undetermined); // strip splitting the minus region
    c.build(1e-3)
}

/// Type (B): diagonal quadrants with an undetermined cross.
pub fn type_b_classification() -> CellClassification {
    let mut c = Canvas::filled(CellLabel::Undetermined);
    c.rect(1, 6, 9, 14, CellLabel::Plus); // top-left
    c.rect(9, 14, 1, 6, CellLabel::Plus); // bottom-right
    c.rect(1, 6, 1, 6, CellLabel::Minus); // bottom-left
    c.rect(9, 14, 9, 14, CellLabel::Minus); // top-right
    c.build(1e-3)
}

/// Type (C): positive core, undetermined ring, negative annulus, and the
/// undetermined boundary band; the inner ring does not touch the boundary.
pub fn type_c_classification() -> CellClassification {
    let mut c = Canvas::filled(CellLabel::Minus);
    c.boundary_ring(CellLabel::Undetermined);
    c.rect(5, 10, 5, 10, CellLabel::Undetermined); // ring + interior
    c.rect(6, 9, 6, 9, CellLabel::Plus); // positive core
    c.build(1e-3)
}

/// Three undetermined components under a Neumann top edge: two interior
/// rings (no boundary contact) and one strip hanging from the top.
pub fn fig5_style_fixture() -> (CellClassification, BoundarySpec) {
    let mut c = Canvas::filled(CellLabel::Minus);
    // left ring around a positive core
    c.rect(2, 6, 5, 9, CellLabel::Undetermined);
    c.rect(3, 5, 6, 8, CellLabel::Plus);
    // right ring around a positive core
    c.rect(9, 13, 5, 9, CellLabel::Undetermined);
    c.rect(10, 12, 6, 8, CellLabel::Plus);
    // middle strip touching the top edge
    c.rect(7, 8, 11, 15, CellLabel::Undetermined);
    let cls = c.build(0.0);
    let dirichlet = vec![Segment {
        start: 0.0,
        end: 1.0,
        kind: BcKind::Dirichlet,
    }];
    let neumann = vec![Segment {
        start: 0.0,
        end: 1.0,
        kind: BcKind::Neumann,
    }];
    let bc = BoundarySpec::new(dirichlet.clone(), dirichlet.clone(), neumann, dirichlet).unwrap();
    (cls, bc)
}
