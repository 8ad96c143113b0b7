//! The JSON model document read and written by the command-line tool.
//!
//! ```json
//! {
//!   "classes": [["a"], ["b"], ["c"]],
//!   "lower": ["0", "0", "1"],
//!   "upper": ["1/2", "4/5", "1"]
//! }
//! ```
//!
//! A document may instead carry a possibility distribution under `pi`, or a
//! list of marginal distributions under `marginals`. Rationals are strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::Error;
use crate::multivariate::MarginalFamily;
use crate::pbox::PBox;
use crate::possibility::PossDist;
use crate::rational::{self, Rational};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {source}")]
    Field { field: String, source: Error },
    #[error("document contains no model")]
    Empty,
    #[error("field `{0}` is required for this command")]
    Missing(&'static str),
    #[error("field `{0}` requires field `{1}`")]
    Requires(&'static str, &'static str),
}

fn field(name: impl Into<String>) -> impl FnOnce(Error) -> DocumentError {
    let field = name.into();
    move |source| DocumentError::Field { field, source }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginals: Option<Vec<BTreeMap<String, String>>>,
}

fn render_values(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational::format).collect()
}

pub fn render_distribution(pi: &PossDist) -> BTreeMap<String, String> {
    pi.values().iter().map(|(l, v)| (l.clone(), rational::format(v))).collect()
}

fn parse_values(name: &str, values: &[String]) -> Result<Vec<Rational>, DocumentError> {
    values
        .iter()
        .enumerate()
        .map(|(i, s)| rational::parse(s).map_err(field(format!("{name}[{i}]"))))
        .collect()
}

fn parse_distribution(name: &str, values: &BTreeMap<String, String>) -> Result<PossDist, DocumentError> {
    let mut parsed = Vec::with_capacity(values.len());
    for (label, text) in values {
        let v = rational::parse(text).map_err(field(format!("{name}.{label}")))?;
        parsed.push((label.clone(), v));
    }
    PossDist::new(parsed).map_err(field(name))
}

impl ModelDocument {
    /// Parses and checks a document. Syntax errors report line and column.
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }

    pub fn from_pbox(p: &PBox) -> Self {
        ModelDocument {
            classes: Some(p.chain().classes().to_vec()),
            lower: Some(render_values(p.lower())),
            upper: Some(render_values(p.upper())),
            ..Default::default()
        }
    }

    pub fn from_possibility(pi: &PossDist) -> Self {
        ModelDocument { pi: Some(render_distribution(pi)), ..Default::default() }
    }

    pub fn from_family(family: &MarginalFamily) -> Self {
        ModelDocument {
            marginals: Some(family.marginals().iter().map(render_distribution).collect()),
            ..Default::default()
        }
    }

    /// Every model present in the document, fully checked.
    pub fn validate(&self) -> Result<(), DocumentError> {
        if self.classes.is_none() && self.pi.is_none() && self.marginals.is_none() {
            return Err(DocumentError::Empty);
        }
        if self.lower.is_some() || self.upper.is_some() {
            self.pbox()?;
        } else if self.classes.is_some() {
            self.chain()?;
        }
        if self.pi.is_some() {
            self.possibility()?;
        }
        if self.marginals.is_some() {
            self.family()?;
        }
        Ok(())
    }

    pub fn chain(&self) -> Result<Chain, DocumentError> {
        let classes = self.classes.as_ref().ok_or(DocumentError::Missing("classes"))?;
        Chain::new(classes.iter().cloned()).map_err(field("classes"))
    }

    pub fn has_pbox(&self) -> bool {
        self.lower.is_some() || self.upper.is_some()
    }

    pub fn pbox(&self) -> Result<PBox, DocumentError> {
        let lower = self.lower.as_ref().ok_or(DocumentError::Missing("lower"))?;
        let upper = self.upper.as_ref().ok_or(DocumentError::Missing("upper"))?;
        if self.classes.is_none() {
            return Err(DocumentError::Requires("lower", "classes"));
        }
        let chain = self.chain()?;
        let lower = parse_values("lower", lower)?;
        let upper = parse_values("upper", upper)?;
        PBox::new(chain, lower, upper).map_err(|e| {
            let name = match &e {
                Error::LengthMismatch { which, .. }
                | Error::OutOfRange { which, .. }
                | Error::NotMonotone { which, .. }
                | Error::TopNotOne { which } => which.to_string(),
                _ => "lower/upper".to_string(),
            };
            DocumentError::Field { field: name, source: e }
        })
    }

    pub fn possibility(&self) -> Result<PossDist, DocumentError> {
        let pi = self.pi.as_ref().ok_or(DocumentError::Missing("pi"))?;
        let dist = parse_distribution("pi", pi)?;
        if self.classes.is_some() && !dist.matches_chain(&self.chain()?) {
            return Err(DocumentError::Field { field: "pi".into(), source: Error::ChainMismatch });
        }
        Ok(dist)
    }

    pub fn family(&self) -> Result<MarginalFamily, DocumentError> {
        let marginals = self.marginals.as_ref().ok_or(DocumentError::Missing("marginals"))?;
        let parsed = marginals
            .iter()
            .enumerate()
            .map(|(i, m)| parse_distribution(&format!("marginals[{i}]"), m))
            .collect::<Result<Vec<_>, _>>()?;
        MarginalFamily::new(parsed).map_err(field("marginals"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P1: &str = r#"{"classes":[["a"],["b"],["c"]],"lower":["0","0","1"],"upper":["1/2","4/5","1"]}"#;

    #[test]
    fn round_trip() {
        let doc = ModelDocument::from_json(P1).unwrap();
        let p = doc.pbox().unwrap();
        assert_eq!(ModelDocument::from_pbox(&p).to_json(), P1);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = ModelDocument::from_json("{\n  \"classes\": [[\"a\"]\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn field_errors_name_the_field() {
        let bad = r#"{"classes":[["a"],["b"]],"lower":["0","x"],"upper":["1","1"]}"#;
        let err = ModelDocument::from_json(bad).unwrap_err();
        assert!(err.to_string().starts_with("field `lower[1]`"), "{err}");

        let bad = r#"{"classes":[["a"],["b"]],"lower":["0","1"],"upper":["1","1/2"]}"#;
        let err = ModelDocument::from_json(bad).unwrap_err();
        assert!(err.to_string().starts_with("field `upper`"), "{err}");

        let bad = r#"{"pi":{"a":"1/2"}}"#;
        assert!(ModelDocument::from_json(bad).unwrap_err().to_string().starts_with("field `pi`"));
    }

    #[test]
    fn rejects_empty_and_unknown_fields() {
        assert!(matches!(ModelDocument::from_json("{}"), Err(DocumentError::Empty)));
        assert!(matches!(
            ModelDocument::from_json(r#"{"pi":{"a":"1"},"extra":1}"#),
            Err(DocumentError::Json(_))
        ));
        assert!(matches!(
            ModelDocument::from_json(r#"{"lower":["1"],"upper":["1"],"pi":{"a":"1"}}"#),
            Err(DocumentError::Requires("lower", "classes"))
        ));
    }

    #[test]
    fn pi_must_match_classes() {
        let doc = r#"{"classes":[["a"],["b"]],"pi":{"a":"1"}}"#;
        assert!(ModelDocument::from_json(doc).is_err());
    }
}
