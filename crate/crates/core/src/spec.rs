//! JSON channel and gate files, and the report document.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows:
//!
//! ```json
//! {"dim": 2, "channel": {"type": "depolarizing", "p": 0.1}}
//! {"dim": 2, "channel": {"type": "kraus", "operators": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}}
//! {"dim": 2, "channel": {"type": "compose",
//!     "first": {"type": "unitary", "matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]},
//!     "then": {"type": "depolarizing", "p": 0.05}}}
//! {"dim": 3, "channel": {"type": "random", "kraus_rank": 4, "seed": 11}}
//! ```
//!
//! Gate files carry either a matrix or one of the names `identity`, `shift`, `clock`:
//!
//! ```json
//! {"dim": 3, "gate": "shift"}
//! ```

use std::fmt;

use num_complex::Complex64;
use serde::ser::Error as _;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::basis::{clock, shift};
use crate::channel::{compose, random_channel, DepolarizingParams, QuantumChannel};
use crate::error::Error;
use crate::fidelity::GATE_TOL;
use crate::linalg::{unitarity_error, ComplexMatrix};

/// Trace-preservation and unitarity tolerance for file input.
pub const FILE_TOL: f64 = 1e-8;

/// Row-major complex matrix as nested `[re, im]` pairs.
pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpecDocument {
    pub dim: usize,
    pub channel: ChannelSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelSpec {
    Kraus { operators: Vec<MatrixSpec> },
    Depolarizing { p: f64 },
    Unitary { matrix: MatrixSpec },
    Compose { first: Box<ChannelSpec>, then: Box<ChannelSpec> },
    Random { kraus_rank: usize, seed: u64 },
}

impl ChannelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Kraus { .. } => "kraus",
            Self::Depolarizing { .. } => "depolarizing",
            Self::Unitary { .. } => "unitary",
            Self::Compose { .. } => "compose",
            Self::Random { .. } => "random",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpecDocument {
    pub dim: usize,
    pub gate: GateSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateSpec {
    Named(NamedGate),
    Matrix(MatrixSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedGate {
    Identity,
    Shift,
    Clock,
}

/// Failure while reading or validating an input file.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecError {
    /// Not well-formed JSON, or not shaped like the schema.
    Parse { line: usize, column: usize, message: String },
    /// Well-formed, but violates a numeric invariant.
    Semantic { field: String, message: String },
}

impl SpecError {
    fn semantic(field: impl Into<String>, message: impl fmt::Display) -> Self {
        Self::Semantic {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse { line, column, message } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            Self::Semantic { field, message } => write!(f, "invalid `{field}`: {message}"),
        }
    }
}

impl std::error::Error for SpecError {}

impl From<serde_json::Error> for SpecError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        // serde_json appends " at line L column C"; keep the message bare
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_owned(),
            None => full,
        };
        Self::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

fn matrix_from_spec(dim: usize, spec: &MatrixSpec, field: &str) -> Result<ComplexMatrix, SpecError> {
    if spec.len() != dim || spec.iter().any(|row| row.len() != dim) {
        let shape = format!(
            "{}x{}",
            spec.len(),
            spec.iter().map(Vec::len).max().unwrap_or(0)
        );
        return Err(SpecError::semantic(field, format!("expected a {dim}x{dim} matrix, found {shape}")));
    }
    let data = spec
        .iter()
        .flatten()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    ComplexMatrix::from_row_major(dim, dim, data).map_err(|e| SpecError::semantic(field, e))
}

pub fn matrix_to_spec(m: &ComplexMatrix) -> MatrixSpec {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn resolve_channel(dim: usize, spec: &ChannelSpec, field: &str) -> Result<QuantumChannel, SpecError> {
    match spec {
        ChannelSpec::Kraus { operators } => {
            if operators.is_empty() {
                return Err(SpecError::semantic(format!("{field}.operators"), Error::NoKrausOperators));
            }
            let kraus = operators
                .iter()
                .enumerate()
                .map(|(i, m)| matrix_from_spec(dim, m, &format!("{field}.operators[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            QuantumChannel::with_tolerance(dim, kraus, FILE_TOL)
                .map_err(|e| SpecError::semantic(format!("{field}.operators"), e))
        }
        ChannelSpec::Depolarizing { p } => DepolarizingParams::new(dim, *p)
            .map(|params| params.channel())
            .map_err(|e| SpecError::semantic(format!("{field}.p"), e)),
        ChannelSpec::Unitary { matrix } => {
            let path = format!("{field}.matrix");
            let u = matrix_from_spec(dim, matrix, &path)?;
            let err = unitarity_error(&u);
            if err > FILE_TOL {
                return Err(SpecError::semantic(path, Error::NotUnitary(err)));
            }
            QuantumChannel::with_tolerance(dim, vec![u], FILE_TOL).map_err(|e| SpecError::semantic(path, e))
        }
        ChannelSpec::Compose { first, then } => {
            let a = resolve_channel(dim, first, &format!("{field}.first"))?;
            let b = resolve_channel(dim, then, &format!("{field}.then"))?;
            compose(&a, &b).map_err(|e| SpecError::semantic(field, e))
        }
        ChannelSpec::Random { kraus_rank, seed } => random_channel(dim, *kraus_rank, *seed)
            .map_err(|e| SpecError::semantic(format!("{field}.kraus_rank"), e)),
    }
}

fn check_dim(dim: usize) -> Result<(), SpecError> {
    if dim < 2 {
        return Err(SpecError::semantic("dim", Error::DimensionTooSmall { min: 2, found: dim }));
    }
    Ok(())
}

impl ChannelSpecDocument {
    /// Builds the channel, checking every invariant.
    pub fn resolve(&self) -> Result<QuantumChannel, SpecError> {
        check_dim(self.dim)?;
        resolve_channel(self.dim, &self.channel, "channel")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint::of(self.dim, self.channel.kind(), self)
    }
}

impl GateSpecDocument {
    pub fn resolve(&self) -> Result<ComplexMatrix, SpecError> {
        check_dim(self.dim)?;
        match &self.gate {
            GateSpec::Named(NamedGate::Identity) => Ok(ComplexMatrix::identity(self.dim)),
            GateSpec::Named(NamedGate::Shift) => Ok(shift(self.dim)),
            GateSpec::Named(NamedGate::Clock) => Ok(clock(self.dim)),
            GateSpec::Matrix(m) => {
                let u = matrix_from_spec(self.dim, m, "gate")?;
                let err = unitarity_error(&u);
                if err > GATE_TOL {
                    return Err(SpecError::semantic("gate", Error::NotUnitary(err)));
                }
                Ok(u)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.gate {
            GateSpec::Named(NamedGate::Identity) => "identity",
            GateSpec::Named(NamedGate::Shift) => "shift",
            GateSpec::Named(NamedGate::Clock) => "clock",
            GateSpec::Matrix(_) => "matrix",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint::of(self.dim, self.kind(), self)
    }
}

/// Parses and validates a channel file.
pub fn parse_channel_spec(text: &[u8]) -> Result<ChannelSpecDocument, SpecError> {
    let doc: ChannelSpecDocument = serde_json::from_slice(text)?;
    doc.resolve()?;
    Ok(doc)
}

/// Parses and validates a gate file.
pub fn parse_gate_spec(text: &[u8]) -> Result<GateSpecDocument, SpecError> {
    let doc: GateSpecDocument = serde_json::from_slice(text)?;
    doc.resolve()?;
    Ok(doc)
}

/// Dimension, variant and SHA-256 of the compact canonical serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub sha256: String,
}

impl Fingerprint {
    fn of(dim: usize, kind: &'static str, doc: &impl Serialize) -> Self {
        let canonical = serde_json::to_vec(doc).expect("plain data serializes");
        let digest = Sha256::digest(&canonical);
        let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        Self { dim, kind, sha256 }
    }
}

/// Real number written with 17 significant digits in scientific notation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_owned()
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_real(self.0)).map_err(S::Error::custom)?;
        raw.serialize(serializer)
    }
}

/// One closed-form fidelity in a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityEntry {
    /// Clamped into [0, 1].
    pub value: Real,
    pub raw: Real,
    pub clamped: bool,
    pub method: &'static str,
}

impl From<crate::fidelity::FidelityValue> for FidelityEntry {
    fn from(v: crate::fidelity::FidelityValue) -> Self {
        Self {
            value: Real(v.reported()),
            raw: Real(v.value),
            clamped: v.was_clamped(),
            method: v.method.as_str(),
        }
    }
}

/// A sampled estimate in a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateEntry {
    pub method: &'static str,
    pub mean: Real,
    pub std_error: Real,
    pub n_samples: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

impl EstimateEntry {
    pub fn new(method: &'static str, e: &crate::haar::McEstimate) -> Self {
        Self {
            method,
            mean: Real(e.mean),
            std_error: Real(e.std_error),
            n_samples: e.n_samples,
            seed: e.seed,
            shots: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactResults {
    pub average_gate_fidelity: FidelityEntry,
    /// Of `U† ∘ E`.
    pub entanglement_fidelity: FidelityEntry,
    /// Horodecki value of `U† ∘ E`.
    pub average_fidelity: FidelityEntry,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalTwirl {
    pub unitaries: u64,
    pub seed: u64,
    pub frobenius_distance: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwirlResults {
    pub depolarizing_p: Real,
    pub entanglement_fidelity: FidelityEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<EmpiricalTwirl>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidateResults {
    pub valid: bool,
    pub kraus_operators: usize,
    pub trace_preservation_error: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Results {
    Exact(ExactResults),
    Estimate { average_gate_fidelity: EstimateEntry },
    Twirl(TwirlResults),
    Validate(ValidateResults),
}

/// Output of every `avgfid` subcommand. Key order is fixed by field order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<&'static str>,
    pub channel: Fingerprint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<Fingerprint>,
    pub results: Results,
    /// Only present when timing was requested; omitted so reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<Real>,
}

impl ReportDocument {
    pub fn new(command: &'static str, channel: Fingerprint, results: Results) -> Self {
        Self {
            tool: "avgfid",
            version: env!("CARGO_PKG_VERSION"),
            command,
            method: None,
            basis: None,
            channel,
            gate: None,
            results,
            wall_clock_seconds: None,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
