//! JSON documents for monoids, morphisms and push-out diagrams.
//!
//! ```json
//! {"kind": "monoid", "format_version": "1",
//!  "payload": {"ambient_dim": 1, "generators": [[2], [3]]}}
//! ```
//!
//! A morphism payload is `{"source": <monoid>, "target": <monoid>, "matrix": rows}`
//! with one row per target coordinate; a push-out payload is
//! `{"f": <morphism>, "g": <morphism>}`. Integers in files are 64-bit.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::error::Error;
use crate::intlin::{to_big, IntegerMatrix};
use crate::monoid::{AffineMonoid, LatticeMap};
use crate::pushout::PushoutData;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("unknown document kind {0:?}")]
    UnknownKind(String),
    #[error("unsupported format version {0:?}")]
    UnsupportedVersion(String),
    #[error("expected a {expected} document, found {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("malformed document: {0}")]
    Shape(String),
    #[error("invalid document: {0}")]
    Invalid(#[from] Error),
    #[error("value {0} does not fit in 64 bits")]
    Overflow(BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidBody {
    pub ambient_dim: usize,
    pub generators: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismBody {
    pub source: MonoidBody,
    pub target: MonoidBody,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushoutBody {
    pub f: MorphismBody,
    pub g: MorphismBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Monoid(MonoidBody),
    Morphism(MorphismBody),
    Pushout(PushoutBody),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    kind: String,
    format_version: String,
    payload: Value,
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Monoid(_) => "monoid",
            Document::Morphism(_) => "morphism",
            Document::Pushout(_) => "pushout",
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| DocumentError::Syntax(e.to_string()))?;
        let envelope: Envelope =
            serde_json::from_value(value).map_err(|e| DocumentError::Shape(e.to_string()))?;
        if !matches!(envelope.kind.as_str(), "monoid" | "morphism" | "pushout") {
            return Err(DocumentError::UnknownKind(envelope.kind));
        }
        if envelope.format_version != FORMAT_VERSION {
            return Err(DocumentError::UnsupportedVersion(envelope.format_version));
        }
        let shape = |e: serde_json::Error| DocumentError::Shape(e.to_string());
        Ok(match envelope.kind.as_str() {
            "monoid" => Document::Monoid(serde_json::from_value(envelope.payload).map_err(shape)?),
            "morphism" => {
                Document::Morphism(serde_json::from_value(envelope.payload).map_err(shape)?)
            }
            _ => Document::Pushout(serde_json::from_value(envelope.payload).map_err(shape)?),
        })
    }

    pub fn to_json(&self) -> Value {
        let payload = match self {
            Document::Monoid(b) => serde_json::to_value(b),
            Document::Morphism(b) => serde_json::to_value(b),
            Document::Pushout(b) => serde_json::to_value(b),
        }
        .expect("document bodies serialize");
        serde_json::to_value(Envelope {
            kind: self.kind().to_string(),
            format_version: FORMAT_VERSION.to_string(),
            payload,
        })
        .expect("envelope serializes")
    }

    pub fn print(&self) -> String {
        self.to_json().to_string()
    }

    pub fn into_monoid(self) -> Result<MonoidBody, DocumentError> {
        match self {
            Document::Monoid(b) => Ok(b),
            other => Err(DocumentError::WrongKind {
                expected: "monoid",
                found: other.kind(),
            }),
        }
    }

    pub fn into_morphism(self) -> Result<MorphismBody, DocumentError> {
        match self {
            Document::Morphism(b) => Ok(b),
            other => Err(DocumentError::WrongKind {
                expected: "morphism",
                found: other.kind(),
            }),
        }
    }

    pub fn into_pushout(self) -> Result<PushoutBody, DocumentError> {
        match self {
            Document::Pushout(b) => Ok(b),
            other => Err(DocumentError::WrongKind {
                expected: "pushout",
                found: other.kind(),
            }),
        }
    }
}

pub fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>, DocumentError> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| DocumentError::Overflow(x.clone())))
        .collect()
}

impl MonoidBody {
    pub fn to_monoid(&self) -> Result<AffineMonoid, DocumentError> {
        Ok(AffineMonoid::new(
            self.ambient_dim,
            self.generators.iter().map(|g| to_big(g)).collect(),
        )?)
    }

    pub fn from_monoid(m: &AffineMonoid) -> Result<Self, DocumentError> {
        Ok(MonoidBody {
            ambient_dim: m.ambient_dim(),
            generators: m
                .generators()
                .iter()
                .map(|g| to_i64_vec(g))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl MorphismBody {
    pub fn to_map(&self) -> Result<LatticeMap, DocumentError> {
        let source = self.source.to_monoid()?;
        let target = self.target.to_monoid()?;
        if self.matrix.len() != target.ambient_dim() {
            return Err(DocumentError::Shape(format!(
                "matrix has {} rows, the target dimension is {}",
                self.matrix.len(),
                target.ambient_dim()
            )));
        }
        let rows: Vec<Vec<BigInt>> = self.matrix.iter().map(|r| to_big(r)).collect();
        if let Some(r) = rows.iter().find(|r| r.len() != source.ambient_dim()) {
            return Err(DocumentError::Shape(format!(
                "matrix row has {} entries, the source dimension is {}",
                r.len(),
                source.ambient_dim()
            )));
        }
        let matrix = IntegerMatrix::from_rows(source.ambient_dim(), &rows)?;
        Ok(LatticeMap::new(source, target, matrix)?)
    }

    pub fn from_map(map: &LatticeMap) -> Result<Self, DocumentError> {
        Ok(MorphismBody {
            source: MonoidBody::from_monoid(map.source())?,
            target: MonoidBody::from_monoid(map.target())?,
            matrix: map
                .matrix()
                .row_vectors()
                .iter()
                .map(|r| to_i64_vec(r))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl PushoutBody {
    pub fn to_data(&self) -> Result<PushoutData, DocumentError> {
        Ok(PushoutData::new(self.f.to_map()?, self.g.to_map()?)?)
    }

    /// Both maps, without requiring a shared source.
    pub fn to_maps(&self) -> Result<(LatticeMap, LatticeMap), DocumentError> {
        Ok((self.f.to_map()?, self.g.to_map()?))
    }
}
