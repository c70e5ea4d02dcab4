//! Coefficient file format.
//!
//! Line-oriented text, parsed exactly:
//!
//! ```text
//! BASIS LEGENDRE        (optional; only LEGENDRE is accepted)
//! MU <integer>
//! DOMAIN ax bx ay by
//! OFFSET <decimal>      (optional; written only when nonzero)
//! <mu * mu coefficients, row-major, whitespace separated>
//! ```
//!
//! Coefficients are converted to the nearest binary64 and treated as exact
//! inputs from then on. The writer emits shortest round-trip decimals, so
//! write-then-read reproduces bit-identical values.

use super::{BasisError, CoefficientField, Rectangle};
use std::io::Write;
use std::path::Path;

pub fn read_coefficient_file(path: &Path) -> Result<CoefficientField, BasisError> {
    let text = std::fs::read_to_string(path)?;
    parse_coefficient_text(&text)
}

pub fn parse_coefficient_text(text: &str) -> Result<CoefficientField, BasisError> {
    let mut lines = text.lines().enumerate().peekable();

    let err = |line: usize, msg: String| BasisError::Parse { line: line + 1, msg };

    // Optional BASIS header.
    if let Some((n, line)) = lines.peek().copied() {
        let mut parts = line.split_whitespace();
        if parts.next() == Some("BASIS") {
            let kind = parts.next().unwrap_or("");
            if kind != "LEGENDRE" {
                return Err(err(n, format!("unsupported basis {kind:?}")));
            }
            lines.next();
        }
    }

    let (n, mu_line) = lines
        .next()
        .ok_or_else(|| err(0, "missing MU line".into()))?;
    let mu = parse_tagged_line(mu_line, "MU", 1, n)?[0];
    if mu.fract() != 0.0 || mu < 1.0 {
        return Err(err(n, format!("MU must be a positive integer, got {mu}")));
    }
    let mu = mu as usize;

    let (n, dom_line) = lines
        .next()
        .ok_or_else(|| err(0, "missing DOMAIN line".into()))?;
    let d = parse_tagged_line(dom_line, "DOMAIN", 4, n)?;
    let domain = Rectangle::new(d[0], d[1], d[2], d[3])?;

    // Optional OFFSET line.
    let mut offset = 0.0;
    if let Some((n, line)) = lines.peek().copied() {
        if line.split_whitespace().next() == Some("OFFSET") {
            offset = parse_tagged_line(line, "OFFSET", 1, n)?[0];
            lines.next();
        }
    }

    let mut coeffs = Vec::with_capacity(mu * mu);
    for (n, line) in lines {
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| err(n, format!("bad coefficient {token:?}")))?;
            coeffs.push(v);
        }
    }
    if coeffs.len() != mu * mu {
        return Err(BasisError::InvalidField(format!(
            "expected {} coefficients, file contains {}",
            mu * mu,
            coeffs.len()
        )));
    }
    CoefficientField::with_offset(mu, coeffs, domain, offset)
}

pub fn write_coefficient_file(field: &CoefficientField, path: &Path) -> Result<(), BasisError> {
    let mut out = String::new();
    out.push_str(&format!("MU {}\n", field.mu()));
    let d = field.domain();
    out.push_str(&format!("DOMAIN {} {} {} {}\n", d.ax, d.bx, d.ay, d.by));
    if field.offset() != 0.0 {
        out.push_str(&format!("OFFSET {}\n", field.offset()));
    }
    for i in 0..field.mu() {
        let row: Vec<String> = (0..field.mu())
            .map(|j| format!("{}", field.coeff(i, j)))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

fn parse_tagged_line(
    line: &str,
    tag: &str,
    count: usize,
    lineno: usize,
) -> Result<Vec<f64>, BasisError> {
    let parse_err = |msg: String| BasisError::Parse {
        line: lineno + 1,
        msg,
    };
    let mut parts = line.split_whitespace();
    let head = parts.next().unwrap_or("");
    if head != tag {
        return Err(parse_err(format!("expected {tag} line, got {head:?}")));
    }
    let values: Result<Vec<f64>, _> = parts.map(|t| t.parse::<f64>()).collect();
    let values = values.map_err(|e| parse_err(format!("bad {tag} value: {e}")))?;
    if values.len() != count {
        return Err(parse_err(format!(
            "{tag} expects {count} value(s), got {}",
            values.len()
        )));
    }
    Ok(values)
}
