//! Raster and vector export of cell classifications.
//!
//! PGM (binary P5, maxval 255): Plus cells are white (255), Minus cells
//! black (0), undetermined cells mid-gray (128); rows run top to bottom.
//! SVG: one filled red square per undetermined cell, with optional gray
//! shading of the certified-sign cells.

use crate::grid::{CellClassification, CellLabel};

pub fn label_byte(label: CellLabel) -> u8 {
    match label {
        CellLabel::Plus => 255,
        CellLabel::Minus => 0,
        CellLabel::Undetermined => 128,
    }
}

/// Binary PGM of the classification, each cell rendered as a
/// `scale` x `scale` pixel block.
pub fn pgm_bytes(cls: &CellClassification, scale: u32) -> Vec<u8> {
    let scale = scale.max(1);
    let (nx, ny) = cls.dims();
    let (w, h) = (nx * scale, ny * scale);
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.reserve((w * h) as usize);
    for py in 0..h {
        // raster rows run top to bottom; grid rows bottom to top
        let j = ny - 1 - py / scale;
        for px in 0..w {
            let i = px / scale;
            out.push(label_byte(cls.label(i, j)));
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct SvgStyle {
    /// Side length of one cell in SVG user units.
    pub cell_size: f64,
    /// Also shade Plus (light) and Minus (dark) cells.
    pub shade_signs: bool,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            cell_size: 8.0,
            shade_signs: false,
        }
    }
}

/// SVG drawing of the classification: undetermined cells as filled red
/// squares enclosing the nodal line.
pub fn svg_string(cls: &CellClassification, style: &SvgStyle) -> String {
    let (nx, ny) = cls.dims();
    let s = style.cell_size;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        nx as f64 * s,
        ny as f64 * s,
        nx as f64 * s,
        ny as f64 * s
    ));
    out.push_str(&format!(
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        nx as f64 * s,
        ny as f64 * s
    ));
    for j in 0..ny {
        for i in 0..nx {
            let label = cls.label(i, j);
            let fill = match label {
                CellLabel::Undetermined => "red",
                CellLabel::Plus if style.shade_signs => "#e8e8e8",
                CellLabel::Minus if style.shade_signs => "#b0b0b0",
                _ => continue,
            };
            let x = i as f64 * s;
            let y = (ny - 1 - j) as f64 * s; // SVG y grows downward
            out.push_str(&format!(
                "<rect x=\"{x}\" y=\"{y}\" width=\"{s}\" height=\"{s}\" fill=\"{fill}\"/>\n"
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}
