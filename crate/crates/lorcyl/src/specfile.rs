//! The metric spec file format: a line-oriented `key = value` document
//! describing a flat, conformally flat, or variable-coefficient metric.
//!
//! ```text
//! # comment lines start with `#`; blank lines are ignored
//! type = conformal
//! E = 0
//! F = 1
//! G = 0
//! psi = sin(2*pi*x) + 0.5*y
//! ```
//!
//! Keys are case-sensitive; `type` is one of `flat`, `conformal` or
//! `general`. For `flat` and `conformal` the coefficients are decimal
//! literals and the signature invariant is checked at parse time; for
//! `general` they are expressions in `x` and `y` (checked pointwise when
//! a grid is built from them). `psi` is required for `conformal` and
//! rejected otherwise. Files are read with LF or CRLF endings and written
//! with LF.

use alloc::string::{String, ToString};
use core::fmt;

use crate::expr::{ExprError, Expression};
use crate::metric::{FlatMetric, MetricError};

/// A parsed metric specification.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    /// Constant coefficients.
    Flat(FlatMetric),
    /// Constant coefficients scaled by `e^{2ψ(x,y)}`.
    Conformal {
        base: FlatMetric,
        psi: Expression,
    },
    /// Point-dependent coefficients `E(x,y)`, `F(x,y)`, `G(x,y)`.
    General {
        e: Expression,
        f: Expression,
        g: Expression,
    },
}

impl MetricSpec {
    /// The constant-coefficient representative, when there is one.
    pub fn flat_part(&self) -> Option<&FlatMetric> {
        match self {
            MetricSpec::Flat(m) => Some(m),
            MetricSpec::Conformal { base, .. } => Some(base),
            MetricSpec::General { .. } => None,
        }
    }
}

/// Parse errors for spec files, with 1-based line numbers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFileError {
    #[error("line {line}: missing `=` separator")]
    MissingEquals { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { key: String, line: usize },
    #[error("missing required key `{key}`")]
    MissingKey { key: &'static str },
    #[error("line {line}: unknown metric type `{value}` (expected flat, conformal or general)")]
    UnknownType { value: String, line: usize },
    #[error("line {line}: `{key}` is not a finite decimal number: `{value}`")]
    InvalidNumber {
        key: String,
        value: String,
        line: usize,
    },
    #[error("line {line}: in `{key}`: {source}")]
    Expr {
        key: String,
        line: usize,
        source: ExprError,
    },
    #[error("line {line}: `psi` is only allowed when type = conformal")]
    UnexpectedPsi { line: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// One raw `key = value` binding with its source line.
#[derive(Debug, Clone)]
struct RawValue {
    value: String,
    line: usize,
}

#[derive(Debug, Default)]
struct RawSpec {
    kind: Option<RawValue>,
    e: Option<RawValue>,
    f: Option<RawValue>,
    g: Option<RawValue>,
    psi: Option<RawValue>,
}

/// Parses a spec file from text. See the module docs for the format.
pub fn parse_metric_spec(text: &str) -> Result<MetricSpec, SpecFileError> {
    let mut raw = RawSpec::default();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(SpecFileError::MissingEquals { line: line_no });
        };
        let key = key.trim();
        let value = value.trim();
        let slot = match key {
            "type" => &mut raw.kind,
            "E" => &mut raw.e,
            "F" => &mut raw.f,
            "G" => &mut raw.g,
            "psi" => &mut raw.psi,
            _ => {
                return Err(SpecFileError::UnknownKey {
                    key: key.to_string(),
                    line: line_no,
                })
            }
        };
        if slot.is_some() {
            return Err(SpecFileError::DuplicateKey {
                key: key.to_string(),
                line: line_no,
            });
        }
        *slot = Some(RawValue {
            value: value.to_string(),
            line: line_no,
        });
    }

    let kind = raw.kind.as_ref().ok_or(SpecFileError::MissingKey { key: "type" })?;
    match kind.value.as_str() {
        "flat" | "conformal" => {
            let conformal = kind.value == "conformal";
            if let Some(psi) = &raw.psi {
                if !conformal {
                    return Err(SpecFileError::UnexpectedPsi { line: psi.line });
                }
            }
            let e = parse_number("E", raw.e.as_ref())?;
            let f = parse_number("F", raw.f.as_ref())?;
            let g = parse_number("G", raw.g.as_ref())?;
            let base = FlatMetric::new(e, f, g)?;
            if conformal {
                let psi = raw.psi.as_ref().ok_or(SpecFileError::MissingKey { key: "psi" })?;
                let psi = parse_expression("psi", psi)?;
                Ok(MetricSpec::Conformal { base, psi })
            } else {
                Ok(MetricSpec::Flat(base))
            }
        }
        "general" => {
            if let Some(psi) = &raw.psi {
                return Err(SpecFileError::UnexpectedPsi { line: psi.line });
            }
            let take = |key: &'static str, slot: Option<&RawValue>| -> Result<Expression, SpecFileError> {
                let raw = slot.ok_or(SpecFileError::MissingKey { key })?;
                parse_expression(key, raw)
            };
            Ok(MetricSpec::General {
                e: take("E", raw.e.as_ref())?,
                f: take("F", raw.f.as_ref())?,
                g: take("G", raw.g.as_ref())?,
            })
        }
        other => Err(SpecFileError::UnknownType {
            value: other.to_string(),
            line: kind.line,
        }),
    }
}

fn parse_number(key: &'static str, slot: Option<&RawValue>) -> Result<f64, SpecFileError> {
    let raw = slot.ok_or(SpecFileError::MissingKey { key })?;
    raw.value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| SpecFileError::InvalidNumber {
            key: key.to_string(),
            value: raw.value.clone(),
            line: raw.line,
        })
}

fn parse_expression(key: &str, raw: &RawValue) -> Result<Expression, SpecFileError> {
    Expression::parse(&raw.value).map_err(|source| SpecFileError::Expr {
        key: key.to_string(),
        line: raw.line,
        source,
    })
}

impl fmt::Display for MetricSpec {
    /// Writes the spec in the file format (LF line endings); parsing the
    /// output yields an equal spec.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricSpec::Flat(m) => {
                writeln!(out, "type = flat")?;
                writeln!(out, "E = {}", m.e())?;
                writeln!(out, "F = {}", m.f())?;
                writeln!(out, "G = {}", m.g())
            }
            MetricSpec::Conformal { base, psi } => {
                writeln!(out, "type = conformal")?;
                writeln!(out, "E = {}", base.e())?;
                writeln!(out, "F = {}", base.f())?;
                writeln!(out, "G = {}", base.g())?;
                writeln!(out, "psi = {psi}")
            }
            MetricSpec::General { e, f, g } => {
                writeln!(out, "type = general")?;
                writeln!(out, "E = {e}")?;
                writeln!(out, "F = {f}")?;
                writeln!(out, "G = {g}")
            }
        }
    }
}
