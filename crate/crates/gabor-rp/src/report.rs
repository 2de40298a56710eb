//! Run reports: a JSON tree with a schema version, the command line, the
//! resolved inputs, one output record per module and warnings.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::error::Result;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: String,
    pub command: Vec<String>,
    pub timestamp: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command,
            timestamp: OffsetDateTime::now_utc().format(&Rfc3339).unwrap_or_default(),
            inputs: Map::new(),
            outputs: Map::new(),
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.inputs.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn output(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.outputs.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The report without its timestamp, the form compared across runs.
    pub fn canonical_body(&self) -> Result<String> {
        canonical_body(&self.to_json()?)
    }
}

/// Strips the timestamp from a serialized report.
pub fn canonical_body(json: &str) -> Result<String> {
    let mut v: Value = serde_json::from_str(json)?;
    if let Value::Object(map) = &mut v {
        map.remove("timestamp");
    }
    Ok(serde_json::to_string_pretty(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_lossless() {
        let mut r = RunReport::new(vec!["constants".into(), "bspline:1".into()]);
        r.input("tol", 1e-10).unwrap();
        r.output("q", 0.1 + 0.2).unwrap();
        r.output("values", [1.0 / 3.0, 2.0f64.sqrt(), 1e-300]).unwrap();
        r.warn("something");
        let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.schema_version, "1");
    }

    #[test]
    fn canonical_body_ignores_timestamp() {
        let mut a = RunReport::new(vec!["x".into()]);
        let mut b = a.clone();
        a.timestamp = "2020-01-01T00:00:00Z".into();
        b.timestamp = "2030-01-01T00:00:00Z".into();
        assert_eq!(a.canonical_body().unwrap(), b.canonical_body().unwrap());
        assert!(!a.canonical_body().unwrap().contains("timestamp"));
    }
}
