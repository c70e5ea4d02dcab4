//! Flat `section.key = value` configuration files.
//!
//! The format is deliberately line-oriented with no nesting: decimal
//! values parse bit-exactly, files diff cleanly, and every diagnostic can
//! name the exact key. Lines starting with `#` and blank lines are
//! ignored.

use anyhow::{anyhow, bail, Context, Result};
use nodalcert_core::grid::{BcKind, BoundarySpec, Segment};
use nodalcert_core::solver::{FKind, InitialGuess};
use nodalcert_core::verifier::{ConstantsPolicy, NonlinearityBound, PowerTerm, UserLambda};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
    source: PathBuf,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                anyhow!(
                    "{}:{}: expected `section.key = value`, got {raw:?}",
                    path.display(),
                    lineno + 1
                )
            })?;
            let key = key.trim();
            if key.is_empty() || !key.contains('.') {
                bail!(
                    "{}:{}: keys must be of the form section.key, got {key:?}",
                    path.display(),
                    lineno + 1
                );
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Config {
            values,
            source: path.to_path_buf(),
        })
    }

    pub fn override_value(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| {
            anyhow!(
                "{}: missing required field `{key}`",
                self.source.display()
            )
        })
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| anyhow!("field `{key}` = {v:?}: {e}"))
            })
            .transpose()
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?
            .ok_or_else(|| anyhow!("{}: missing required field `{key}`", self.source.display()))
    }

    pub fn get_u32(&self, key: &str) -> Result<Option<u32>> {
        self.get(key)
            .map(|v| {
                v.parse::<u32>()
                    .map_err(|e| anyhow!("field `{key}` = {v:?}: {e}"))
            })
            .transpose()
    }

    pub fn require_u32(&self, key: &str) -> Result<u32> {
        self.get_u32(key)?
            .ok_or_else(|| anyhow!("{}: missing required field `{key}`", self.source.display()))
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|e| anyhow!("field `{key}` = {v:?}: {e}"))
            })
            .transpose()
    }

    pub fn path(&self, key: &str) -> Result<PathBuf> {
        Ok(PathBuf::from(self.require(key)?))
    }

    pub fn path_opt(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }

    /// problem.kind plus its parameters.
    pub fn f_kind(&self) -> Result<FKind> {
        match self.require("problem.kind")? {
            "allen-cahn" => Ok(FKind::AllenCahn {
                epsilon: self.require_f64("problem.epsilon")?,
            }),
            "emden" => Ok(FKind::Emden {
                lambda: self.require_f64("problem.lambda")?,
                p: self.require_f64("problem.p")?,
            }),
            "polynomial" => Ok(FKind::Polynomial {
                lambda: self.require_f64("problem.lambda")?,
                terms: self.power_terms()?,
            }),
            "zero" => Ok(FKind::Zero),
            other => bail!("unknown problem.kind {other:?} (allen-cahn | emden | polynomial | zero)"),
        }
    }

    /// problem.terms = a1:p1,a2:p2,...
    fn power_terms(&self) -> Result<Vec<(f64, f64)>> {
        let raw = self.require("problem.terms")?;
        raw.split(',')
            .map(|chunk| {
                let (a, p) = chunk
                    .split_once(':')
                    .ok_or_else(|| anyhow!("problem.terms entry {chunk:?}: expected a:p"))?;
                Ok((
                    a.trim().parse::<f64>().context("coefficient")?,
                    p.trim().parse::<f64>().context("exponent")?,
                ))
            })
            .collect()
    }

    /// The nonlinearity bound t f(t) <= lambda t^2 + sum a_i |t|^(p_i+1)
    /// induced by problem.kind, with the optional problem.range.
    pub fn nonlinearity_bound(&self) -> Result<NonlinearityBound> {
        let range = match self.get("problem.range") {
            None => None,
            Some(raw) => {
                let (lo, hi) = raw
                    .split_once(',')
                    .ok_or_else(|| anyhow!("problem.range must be `lo,hi`"))?;
                Some((lo.trim().parse::<f64>()?, hi.trim().parse::<f64>()?))
            }
        };
        let nl = match self.f_kind()? {
            FKind::AllenCahn { epsilon } => NonlinearityBound::allen_cahn(epsilon)?,
            FKind::Emden { lambda, p } => NonlinearityBound::emden(lambda, p, 2)?,
            FKind::Polynomial { lambda, terms } => NonlinearityBound::new(
                lambda,
                terms
                    .iter()
                    .filter(|(a, _)| *a > 0.0)
                    .map(|&(a, p)| PowerTerm {
                        coeff: a,
                        exponent: p,
                    })
                    .collect(),
                range,
                2,
            )?,
            FKind::Zero => NonlinearityBound::new(0.0, vec![], range, 2)?,
        };
        Ok(nl)
    }

    /// boundary.bottom/right/top/left: `dirichlet`, `neumann`, or segment
    /// lists `0:0.5:dirichlet,0.5:1:neumann`. Missing keys mean Dirichlet.
    pub fn boundary_spec(&self) -> Result<BoundarySpec> {
        let parse_edge = |key: &str| -> Result<Vec<Segment>> {
            let raw = match self.get(key) {
                None => return Ok(whole_edge(BcKind::Dirichlet)),
                Some(r) => r,
            };
            match raw {
                "dirichlet" => Ok(whole_edge(BcKind::Dirichlet)),
                "neumann" => Ok(whole_edge(BcKind::Neumann)),
                list => list
                    .split(',')
                    .map(|seg| {
                        let parts: Vec<&str> = seg.split(':').collect();
                        if parts.len() != 3 {
                            bail!("{key} segment {seg:?}: expected start:end:kind");
                        }
                        Ok(Segment {
                            start: parts[0].trim().parse()?,
                            end: parts[1].trim().parse()?,
                            kind: match parts[2].trim() {
                                "dirichlet" => BcKind::Dirichlet,
                                "neumann" => BcKind::Neumann,
                                other => bail!("{key}: unknown condition {other:?}"),
                            },
                        })
                    })
                    .collect(),
            }
        };
        Ok(BoundarySpec::new(
            parse_edge("boundary.bottom")?,
            parse_edge("boundary.right")?,
            parse_edge("boundary.top")?,
            parse_edge("boundary.left")?,
        )?)
    }

    pub fn constants_policy(&self) -> Result<ConstantsPolicy> {
        Ok(match self.get("constants.policy") {
            None | Some("min-talenti-plum") => ConstantsPolicy::MinTalentiPlum,
            Some("talenti") => ConstantsPolicy::TalentiOnly,
            Some("plum") => ConstantsPolicy::PlumOnly,
            Some("mizuguchi") => ConstantsPolicy::Mizuguchi,
            Some(other) => bail!("unknown constants.policy {other:?}"),
        })
    }

    /// constants.lambda1.<component-index> = value, with optional
    /// constants.lambda1_provenance.<index>.
    pub fn user_lambda1(&self) -> Result<std::collections::HashMap<usize, UserLambda>> {
        let mut out = std::collections::HashMap::new();
        for (key, value) in &self.values {
            if let Some(idx) = key.strip_prefix("constants.lambda1.") {
                let idx: usize = idx
                    .parse()
                    .map_err(|e| anyhow!("field `{key}`: bad component index: {e}"))?;
                let v: f64 = value
                    .parse()
                    .map_err(|e| anyhow!("field `{key}` = {value:?}: {e}"))?;
                let provenance = self
                    .get(&format!("constants.lambda1_provenance.{idx}"))
                    .unwrap_or("user config")
                    .to_string();
                out.insert(
                    idx,
                    UserLambda {
                        value: v,
                        provenance,
                    },
                );
            }
        }
        Ok(out)
    }

    pub fn initial_guess(&self) -> Result<InitialGuess> {
        Ok(match self.get("solve.pattern").unwrap_or("C") {
            "A" => InitialGuess::PatternA,
            "B" => InitialGuess::PatternB,
            "C" => InitialGuess::PatternC,
            "file" => InitialGuess::FromFile(self.path("solve.initial_file")?),
            other => bail!("unknown solve.pattern {other:?} (A | B | C | file)"),
        })
    }

    pub fn certificate_source(&self) -> Result<&str> {
        match self.get("certificates.source") {
            None => Ok("heuristic"),
            Some(s @ ("certified-external" | "heuristic")) => Ok(s),
            Some(other) => bail!(
                "certificates.source must be certified-external or heuristic, got {other:?}"
            ),
        }
    }
}

fn whole_edge(kind: BcKind) -> Vec<Segment> {
    vec![Segment {
        start: 0.0,
        end: 1.0,
        kind,
    }]
}
