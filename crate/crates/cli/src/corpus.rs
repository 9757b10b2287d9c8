//! Domain corpus files: a JSON array of domain entries.

use std::path::Path;

use hermite_robin_core::geometry::DEFAULT_TRUNCATION_RADIUS;
use hermite_robin_core::{Domain2D, Point};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read corpus {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("corpus is not a JSON array of entries: {0}")]
    Parse(serde_json::Error),
    #[error("corpus entry {index} ({name}): {reason}")]
    Entry { index: usize, name: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Rectangle,
    Disk,
    HalfPlane,
    Polygon,
}

/// One corpus entry, with the kind-specific fields optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Outward normal direction of a half-plane, in radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
    pub beta: f64,
}

impl CorpusEntry {
    pub fn domain(&self) -> Result<Domain2D, String> {
        fn need<T: Clone>(v: &Option<T>, field: &str) -> Result<T, String> {
            v.clone().ok_or_else(|| format!("missing field \"{field}\""))
        }
        let d = match self.kind {
            Kind::Rectangle => {
                let x = need(&self.x_range, "x_range")?;
                let y = need(&self.y_range, "y_range")?;
                Domain2D::rectangle((x[0], x[1]), (y[0], y[1]))
            }
            Kind::Disk => {
                let c = need(&self.center, "center")?;
                Domain2D::disk(Point::new(c[0], c[1]), need(&self.radius, "radius")?)
            }
            Kind::HalfPlane => Domain2D::half_plane(
                need(&self.angle, "angle")?,
                need(&self.offset, "offset")?,
                self.truncation_radius.unwrap_or(DEFAULT_TRUNCATION_RADIUS),
            ),
            Kind::Polygon => {
                let v = need(&self.vertices, "vertices")?;
                Domain2D::polygon(v.iter().map(|p| Point::new(p[0], p[1])).collect())
            }
        };
        d.map_err(|e| e.to_string())
    }

    fn check(&self) -> Result<(), String> {
        // the main theorem needs β > 0
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(format!("beta must be a positive real, got {}", self.beta));
        }
        self.domain().map(|_| ())
    }
}

/// Parses and validates a corpus document.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, ConfigError> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text).map_err(ConfigError::Parse)?;
    let mut out = Vec::with_capacity(raw.len());
    for (index, value) in raw.into_iter().enumerate() {
        let name = value.get("name").and_then(|n| n.as_str()).unwrap_or("<unnamed>").to_string();
        let entry: CorpusEntry = serde_json::from_value(value).map_err(|e| ConfigError::Entry {
            index,
            name: name.clone(),
            reason: e.to_string(),
        })?;
        entry.check().map_err(|reason| ConfigError::Entry { index, name: name.clone(), reason })?;
        if out.iter().any(|e: &CorpusEntry| e.name == entry.name) {
            return Err(ConfigError::Entry { index, name, reason: "duplicate name".into() });
        }
        out.push(entry);
    }
    Ok(out)
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_corpus(&text)
}
