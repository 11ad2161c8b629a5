//! Dialect mappings: which XML element plays which role in the LMF model.
//!
//! Mapping files use the same TAB-separated record style as the registry:
//!
//! ```text
//! scheme  morphalou
//! elem    lexicalEntry        entry           -
//! elem    lemmatizedForm      form            lemma
//! elem    orthography         representation  writtenForm
//! elem    grammaticalGender   feature         gender
//! elem    feminineVariantOf   relation        feminineVariantOf
//! elem    xr                  relation        @type
//! ```
//!
//! The scheme names the registry code scheme used to translate element
//! text into canonical value ids and back.

use std::collections::HashSet;
use std::io::Read;

use crate::lmf::FormType;
use crate::records::{read_utf8, records};
use crate::registry::Registry;

use super::SerializationError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationBinding {
    /// The element always denotes this relation type.
    Fixed(String),
    /// The relation type is read from the element's `type` attribute.
    TypeAttribute,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementRole {
    Resource,
    GlobalInformation,
    Lexicon,
    Entry,
    FormGroup,
    Form(FormType),
    /// Element text is the value of this representation attribute.
    Representation(String),
    /// Element text, mapped through the scheme, is the value of this attribute.
    Feature(String),
    Relation(RelationBinding),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialectMapping {
    scheme: String,
    rules: Vec<(String, ElementRole)>,
}

fn mapping_err(line: usize, message: impl Into<String>) -> SerializationError {
    SerializationError::Mapping {
        line,
        message: message.into(),
    }
}

impl DialectMapping {
    pub fn load(source: impl Read, reg: &Registry) -> Result<Self, SerializationError> {
        let text = read_utf8(source).map_err(|(line, m)| mapping_err(line, m))?;
        DialectMapping::parse(&text, reg)
    }

    pub fn parse(text: &str, reg: &Registry) -> Result<Self, SerializationError> {
        let mut scheme = None;
        let mut rules: Vec<(String, ElementRole)> = Vec::new();
        let mut structural = HashSet::new();
        let mut features = HashSet::new();
        let mut relations = HashSet::new();

        for rec in records(text) {
            let f = &rec.fields;
            match (rec.kind(), f.len()) {
                ("scheme", 2) => {
                    if scheme.replace(f[1].to_string()).is_some() {
                        return Err(mapping_err(rec.line, "scheme declared twice"));
                    }
                }
                ("elem", 4) => {
                    let (name, role, arg) = (f[1], f[2], f[3]);
                    if name.is_empty() || rules.iter().any(|(n, _)| n == name) {
                        return Err(mapping_err(rec.line, format!("element {name:?} mapped twice")));
                    }
                    let role = match role {
                        "resource" => ElementRole::Resource,
                        "globalInformation" => ElementRole::GlobalInformation,
                        "lexicon" => ElementRole::Lexicon,
                        "entry" => ElementRole::Entry,
                        "formGroup" => ElementRole::FormGroup,
                        "form" => ElementRole::Form(
                            arg.parse().map_err(|e: String| mapping_err(rec.line, e))?,
                        ),
                        "representation" | "feature" => {
                            if !reg.is_attribute(arg) {
                                return Err(mapping_err(
                                    rec.line,
                                    format!("{arg} is not a registered attribute"),
                                ));
                            }
                            if !features.insert(arg.to_string()) {
                                return Err(mapping_err(
                                    rec.line,
                                    format!("attribute {arg} bound to two elements"),
                                ));
                            }
                            if role == "feature" {
                                ElementRole::Feature(arg.to_string())
                            } else {
                                ElementRole::Representation(arg.to_string())
                            }
                        }
                        "relation" => {
                            let binding = if arg == "@type" {
                                RelationBinding::TypeAttribute
                            } else if reg.is_attribute(arg) {
                                RelationBinding::Fixed(arg.to_string())
                            } else {
                                return Err(mapping_err(
                                    rec.line,
                                    format!("{arg} is not a registered attribute"),
                                ));
                            };
                            if !relations.insert(arg.to_string()) {
                                return Err(mapping_err(rec.line, format!("relation {arg} bound twice")));
                            }
                            ElementRole::Relation(binding)
                        }
                        other => return Err(mapping_err(rec.line, format!("unknown role {other:?}"))),
                    };
                    let structural_key = match &role {
                        ElementRole::Feature(_)
                        | ElementRole::Representation(_)
                        | ElementRole::Relation(_) => None,
                        r => Some(format!("{r:?}")),
                    };
                    if let Some(key) = structural_key {
                        if !structural.insert(key) {
                            return Err(mapping_err(rec.line, format!("role of {name} already bound")));
                        }
                    }
                    rules.push((name.to_string(), role));
                }
                (kind, _) => {
                    return Err(mapping_err(rec.line, format!("malformed {kind:?} record")));
                }
            }
        }
        if relations.contains("@type") && relations.len() > 1 {
            return Err(mapping_err(0, "@type relation binding must be the only relation rule"));
        }
        let scheme = scheme.ok_or_else(|| mapping_err(0, "no scheme declared"))?;
        Ok(DialectMapping { scheme, rules })
    }

    pub fn scheme(&self) -> &str {
        &self.scheme
    }

    pub fn rules(&self) -> &[(String, ElementRole)] {
        &self.rules
    }

    pub fn role(&self, element: &str) -> Option<&ElementRole> {
        self.rules.iter().find(|(n, _)| n == element).map(|(_, r)| r)
    }

    pub fn element_for(&self, role: &ElementRole) -> Option<&str> {
        self.rules
            .iter()
            .find(|(_, r)| r == role)
            .map(|(n, _)| n.as_str())
    }

    pub fn feature_element(&self, attribute: &str) -> Option<&str> {
        self.element_for(&ElementRole::Feature(attribute.to_string()))
    }

    pub fn feature_attribute(&self, element: &str) -> Option<&str> {
        match self.role(element) {
            Some(ElementRole::Feature(a)) => Some(a),
            _ => None,
        }
    }

    /// Element name used for a relation of `relation_type`, and whether the
    /// type travels in a `type` attribute.
    pub fn relation_element(&self, relation_type: &str) -> Option<(&str, bool)> {
        self.rules.iter().find_map(|(n, r)| match r {
            ElementRole::Relation(RelationBinding::Fixed(t)) if t == relation_type => {
                Some((n.as_str(), false))
            }
            ElementRole::Relation(RelationBinding::TypeAttribute) => Some((n.as_str(), true)),
            _ => None,
        })
    }
}
