use serde::{Deserialize, Serialize};

use super::{BoundaryData, Domain};
use crate::error::{Error, Result};
use crate::real::Real;

/// Serialized domain geometry, e.g. `{"kind": "rectangle", "L1": 1.0, "L2": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainSpec {
    Interval {
        #[serde(rename = "L")]
        length: f64,
    },
    Rectangle {
        #[serde(rename = "L1")]
        width: f64,
        #[serde(rename = "L2")]
        height: f64,
    },
    Disk {
        #[serde(rename = "R")]
        radius: f64,
    },
    Polygon { vertices: Vec<[f64; 2]> },
}

/// Serialized Robin coefficient. Rectangle sides are ordered bottom, right, top, left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySpec {
    Constant(f64),
    PerSide(Vec<f64>),
    PerEdge(Vec<f64>),
    PerPiece(Vec<f64>),
    /// `[σ at x = 0, σ at x = L]` for an interval.
    Endpoints([f64; 2]),
    Sampled { arclength: Vec<f64>, values: Vec<f64> },
}

/// A domain document with an optional embedded σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDocument {
    #[serde(flatten)]
    pub domain: DomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<BoundarySpec>,
}

impl DomainDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain documents always serialize")
    }
}

impl DomainSpec {
    pub fn build<T: Real>(&self) -> Result<Domain<T>> {
        match self {
            DomainSpec::Interval { length } => Domain::interval(T::lit(*length)),
            DomainSpec::Rectangle { width, height } => Domain::rectangle(T::lit(*width), T::lit(*height)),
            DomainSpec::Disk { radius } => Domain::disk(T::lit(*radius)),
            DomainSpec::Polygon { vertices } => Domain::polygon(vertices.iter().map(|p| [T::lit(p[0]), T::lit(p[1])]).collect()),
        }
    }

    pub fn from_domain<T: Real>(domain: &Domain<T>) -> Self {
        match domain {
            Domain::Interval { length } => DomainSpec::Interval { length: length.to_f64_lossy() },
            Domain::Rectangle { width, height } => DomainSpec::Rectangle { width: width.to_f64_lossy(), height: height.to_f64_lossy() },
            Domain::Disk { radius } => DomainSpec::Disk { radius: radius.to_f64_lossy() },
            Domain::Polygon { vertices } => DomainSpec::Polygon { vertices: vertices.iter().map(|p| [p[0].to_f64_lossy(), p[1].to_f64_lossy()]).collect() },
        }
    }
}

impl BoundarySpec {
    pub fn build<T: Real>(&self, domain: &Domain<T>) -> Result<BoundaryData<T>> {
        let conv = |v: &[f64]| v.iter().map(|x| T::lit(*x)).collect::<Vec<T>>();
        match (self, domain) {
            (BoundarySpec::Constant(c), _) => BoundaryData::constant(domain, T::lit(*c)),
            (BoundarySpec::PerSide(v), Domain::Rectangle { .. }) => BoundaryData::per_piece(domain, conv(v)),
            (BoundarySpec::PerSide(_), _) => Err(Error::InvalidBoundary("per_side applies to rectangles only".into())),
            (BoundarySpec::PerEdge(v), Domain::Polygon { .. } | Domain::Rectangle { .. }) => BoundaryData::per_piece(domain, conv(v)),
            (BoundarySpec::PerEdge(_), _) => Err(Error::InvalidBoundary("per_edge applies to polygons only".into())),
            (BoundarySpec::Endpoints(v), Domain::Interval { .. }) => BoundaryData::per_piece(domain, conv(v)),
            (BoundarySpec::Endpoints(_), _) => Err(Error::InvalidBoundary("endpoints applies to intervals only".into())),
            (BoundarySpec::PerPiece(v), _) => BoundaryData::per_piece(domain, conv(v)),
            (BoundarySpec::Sampled { arclength, values }, _) => BoundaryData::sampled(domain, conv(arclength), conv(values)),
        }
    }
}
