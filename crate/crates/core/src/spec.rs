//! Evaluation specifications: an ordered list of measure invocations.
//!
//! A spec file is a JSON array like
//! `[{"id": "tnc", "params": {"k": 20}}, {"id": "snc", "params": {"k": 30, "clustering": "hdbscan"}}]`.
//! Specs are validated against the registry at parse time so a run can
//! only fail on data-dependent conditions.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::{self, MeasureDescriptor, ParamKind};

/// A scalar or string parameter value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Str(String),
}

/// One measure invocation: id plus parameter overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecEntry {
    pub id: String,
    #[serde(default)]
    pub params: IndexMap<String, ParamValue>,
}

impl SpecEntry {
    pub fn new(id: &str) -> Self {
        Self {
            id: id.to_string(),
            params: IndexMap::new(),
        }
    }

    pub fn with_int(mut self, name: &str, v: i64) -> Self {
        self.params.insert(name.to_string(), ParamValue::Int(v));
        self
    }

    pub fn with_float(mut self, name: &str, v: f64) -> Self {
        self.params.insert(name.to_string(), ParamValue::Float(v));
        self
    }

    pub fn with_str(mut self, name: &str, v: &str) -> Self {
        self.params
            .insert(name.to_string(), ParamValue::Str(v.to_string()));
        self
    }

    pub fn descriptor(&self) -> Result<&'static MeasureDescriptor> {
        registry::lookup(&self.id)
    }

    /// Integer parameter with registry default.
    pub fn int_param(&self, name: &str) -> Result<i64> {
        let desc = self.descriptor()?;
        let spec = desc
            .param(name)
            .ok_or_else(|| Error::Param(format!("{}: no parameter {name:?}", self.id)))?;
        let default = match spec.kind {
            ParamKind::Int { default, .. } => default,
            _ => return Err(Error::Param(format!("{}: {name:?} is not an integer", self.id))),
        };
        match self.params.get(name) {
            None => Ok(default),
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(other) => Err(Error::Param(format!(
                "{}: {name:?} must be an integer, got {other:?}",
                self.id
            ))),
        }
    }

    /// Float parameter with registry default; integer values are widened.
    pub fn float_param(&self, name: &str) -> Result<f64> {
        let desc = self.descriptor()?;
        let spec = desc
            .param(name)
            .ok_or_else(|| Error::Param(format!("{}: no parameter {name:?}", self.id)))?;
        let default = match spec.kind {
            ParamKind::Float { default, .. } => default,
            _ => return Err(Error::Param(format!("{}: {name:?} is not a float", self.id))),
        };
        match self.params.get(name) {
            None => Ok(default),
            Some(ParamValue::Float(v)) => Ok(*v),
            Some(ParamValue::Int(v)) => Ok(*v as f64),
            Some(other) => Err(Error::Param(format!(
                "{}: {name:?} must be numeric, got {other:?}",
                self.id
            ))),
        }
    }

    /// Choice parameter with registry default.
    pub fn str_param(&self, name: &str) -> Result<String> {
        let desc = self.descriptor()?;
        let spec = desc
            .param(name)
            .ok_or_else(|| Error::Param(format!("{}: no parameter {name:?}", self.id)))?;
        let default = match spec.kind {
            ParamKind::Choice { default, .. } => default,
            _ => return Err(Error::Param(format!("{}: {name:?} is not a choice", self.id))),
        };
        match self.params.get(name) {
            None => Ok(default.to_string()),
            Some(ParamValue::Str(v)) => Ok(v.clone()),
            Some(other) => Err(Error::Param(format!(
                "{}: {name:?} must be a string, got {other:?}",
                self.id
            ))),
        }
    }

    /// Validate parameter names, types, and static ranges against the registry.
    pub fn validate(&self) -> Result<()> {
        let desc = self.descriptor()?;
        for (name, value) in &self.params {
            let spec = desc.param(name).ok_or_else(|| {
                Error::Param(format!(
                    "{}: unknown parameter {name:?} (declared: {})",
                    self.id,
                    desc.params
                        .iter()
                        .map(|p| p.name)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
            match (spec.kind, value) {
                (ParamKind::Int { min, max, .. }, ParamValue::Int(v)) => {
                    if *v < min || max.is_some_and(|m| *v > m) {
                        return Err(Error::Param(format!(
                            "{}: {name} = {v} out of range (min {min})",
                            self.id
                        )));
                    }
                }
                (ParamKind::Float { min_exclusive, .. }, ParamValue::Float(v)) => {
                    if !v.is_finite() || *v <= min_exclusive {
                        return Err(Error::Param(format!(
                            "{}: {name} = {v} must be > {min_exclusive}",
                            self.id
                        )));
                    }
                }
                (ParamKind::Float { min_exclusive, .. }, ParamValue::Int(v)) => {
                    if (*v as f64) <= min_exclusive {
                        return Err(Error::Param(format!(
                            "{}: {name} = {v} must be > {min_exclusive}",
                            self.id
                        )));
                    }
                }
                (ParamKind::Choice { options, .. }, ParamValue::Str(v)) => {
                    if !options.contains(&v.as_str()) {
                        return Err(Error::Param(format!(
                            "{}: {name} = {v:?} not one of {options:?}",
                            self.id
                        )));
                    }
                }
                (_, got) => {
                    return Err(Error::Param(format!(
                        "{}: {name} has the wrong type ({got:?})",
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// An ordered, validated list of measure invocations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasureSpec {
    pub entries: Vec<SpecEntry>,
}

impl MeasureSpec {
    pub fn new(entries: Vec<SpecEntry>) -> Result<Self> {
        let spec = Self { entries };
        spec.validate()?;
        Ok(spec)
    }

    /// Parse and validate a JSON spec.
    pub fn parse_json(text: &str) -> Result<Self> {
        let spec: MeasureSpec = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("spec JSON: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::Format("spec has no entries".into()));
        }
        for (i, e) in self.entries.iter().enumerate() {
            e.validate().map_err(|err| err.at_entry(i, &e.id))?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
