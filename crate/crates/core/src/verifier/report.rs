//! Certified verification reports and their JSON serialization.
//!
//! Every one-sided numeric bound in a report carries a rounding tag; the
//! audit in [`NodalReport::audit_rounding`] walks the whole report and
//! checks that each position carries the direction its soundness argument
//! requires (condition left-hand sides and volumes rounded up, right-hand
//! sides and eigenvalue bounds rounded down).

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    Up,
    Down,
}

/// A directed bound: `value` was rounded in direction `rounding`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaggedValue {
    pub value: f64,
    pub rounding: Rounding,
}

impl TaggedValue {
    pub fn up(value: f64) -> Self {
        TaggedValue {
            value,
            rounding: Rounding::Up,
        }
    }

    pub fn down(value: f64) -> Self {
        TaggedValue {
            value,
            rounding: Rounding::Down,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountBound {
    Known(u64),
    Unbounded,
}

impl Serialize for CountBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CountBound::Known(n) => s.serialize_u64(*n),
            CountBound::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CountRange {
    pub lower: CountBound,
    pub upper: CountBound,
}

impl CountRange {
    pub fn known(lower: u64, upper: u64) -> Self {
        CountRange {
            lower: CountBound::Known(lower),
            upper: CountBound::Known(upper),
        }
    }

    pub fn lower_only(lower: u64) -> Self {
        CountRange {
            lower: CountBound::Known(lower),
            upper: CountBound::Unbounded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremUsed {
    Dirichlet,
    LinfOnly,
    Emden,
    AllenCahn,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentCase {
    Dirichlet,
    MixedCase1,
    MixedCase2,
}

/// A named constant with provenance, as used in a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantRecord {
    pub name: String,
    pub value: TaggedValue,
    pub provenance: String,
}

/// Outcome of one strict-inequality check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CheckOutcome {
    pub holds: bool,
    pub lhs: TaggedValue,
    pub rhs: TaggedValue,
}

/// Per-component certificate for the no-nodal-domain condition.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentCertificate {
    pub component: usize,
    pub cells: usize,
    pub volume_upper: TaggedValue,
    pub case: ComponentCase,
    pub touches_neumann: bool,
    pub lambda1_lower: TaggedValue,
    pub lambda1_provenance: String,
    pub lhs: TaggedValue,
    pub rhs: TaggedValue,
    pub holds: bool,
    pub constants: Vec<ConstantRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputsEcho {
    pub rho: Option<f64>,
    pub sigma: f64,
    pub m: u32,
    /// Whether the rho/sigma certificates came from a certified external
    /// source; heuristic inputs make the whole report non-certified in the
    /// "proved" sense regardless of the condition checks.
    pub certified_inputs: bool,
    pub certificate_source: String,
    pub constants: Vec<ConstantRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodalReport {
    pub theorem_used: TheoremUsed,
    pub verdict: Verdict,
    /// Human-readable reason when not certified.
    pub failure: Option<String>,
    pub pnd: CountRange,
    pub nnd: CountRange,
    pub nd: CountRange,
    pub per_component: Vec<ComponentCertificate>,
    pub inputs: InputsEcho,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

impl NodalReport {
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One-sided soundness audit: every condition LHS and volume must be
    /// tagged up, every condition RHS and eigenvalue bound tagged down,
    /// and named constants must match the direction their name implies.
    pub fn audit_rounding(&self) -> Result<(), String> {
        for c in &self.per_component {
            if c.lhs.rounding != Rounding::Up {
                return Err(format!("component {}: LHS not rounded up", c.component));
            }
            if c.rhs.rounding != Rounding::Down {
                return Err(format!("component {}: RHS not rounded down", c.component));
            }
            if c.volume_upper.rounding != Rounding::Up {
                return Err(format!(
                    "component {}: volume bound not rounded up",
                    c.component
                ));
            }
            if c.lambda1_lower.rounding != Rounding::Down {
                return Err(format!(
                    "component {}: eigenvalue bound not rounded down",
                    c.component
                ));
            }
            for k in &c.constants {
                audit_constant(k)?;
            }
        }
        for k in &self.inputs.constants {
            audit_constant(k)?;
        }
        Ok(())
    }

    /// Single summary line; never uses "proved" wording for heuristic
    /// inputs.
    pub fn summary_line(&self) -> String {
        let counts = format_counts(self);
        match (self.verdict, self.inputs.certified_inputs) {
            (Verdict::Certified, true) => {
                format!("PROVED: nodal domain counts {counts}")
            }
            (Verdict::Certified, false) => format!(
                "conditions hold (inputs {}; NOT a proof): nodal domain counts {counts}",
                self.inputs.certificate_source
            ),
            (Verdict::NotCertified, _) => format!(
                "not certified ({}): lower bounds only, {counts}",
                self.failure.as_deref().unwrap_or("condition failed")
            ),
        }
    }
}

fn format_counts(r: &NodalReport) -> String {
    let one = |c: &CountRange| -> String {
        match (c.lower, c.upper) {
            (CountBound::Known(a), CountBound::Known(b)) if a == b => format!("{a}"),
            (CountBound::Known(a), CountBound::Known(b)) => format!("{a}-{b}"),
            (CountBound::Known(a), CountBound::Unbounded) => format!(">={a}"),
            _ => "?".into(),
        }
    };
    format!(
        "#P.N.D. {}, #N.N.D. {}, #N.D. {}",
        one(&r.pnd),
        one(&r.nnd),
        one(&r.nd)
    )
}

fn audit_constant(k: &ConstantRecord) -> Result<(), String> {
    let name = k.name.to_ascii_lowercase();
    let expect_down = name.contains("lambda") || name.contains("eigen");
    let expected = if expect_down {
        Rounding::Down
    } else {
        Rounding::Up
    };
    if k.value.rounding != expected {
        return Err(format!(
            "constant {} tagged {:?}, expected {:?}",
            k.name, k.value.rounding, expected
        ));
    }
    Ok(())
}
