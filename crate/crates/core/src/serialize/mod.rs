//! Readers and writers for the three supported XML dialects.
//!
//! * `canonical-lmf`: one element per LMF component with `feat` leaves,
//!   values stored as canonical registry ids.
//! * `morphalou`: the `lexicalEntry`/`formSet`/`lemmatizedForm` vocabulary.
//!   Element roles come from a [`DialectMapping`] file.
//! * `tei`: a constrained subset of the TEI dictionary module (`entry`,
//!   typed `form`, `orth`, `gramGrp`, `sense`, `xr`).
//!
//! Writers are deterministic: document order follows the model, attributes
//! appear in a fixed order and indentation is two spaces.

mod canonical;
mod mapping;
mod morphalou;
mod tei;
pub mod xml;

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use thiserror::Error;

use crate::data;
use crate::feature::{FeatureError, FeatureStructure};
use crate::lmf::{EntryRelation, Form, FormType, LexicalEntry, Lexicon, ModelError, Sense};
use crate::registry::Registry;

pub use mapping::{DialectMapping, ElementRole, RelationBinding};
pub use tei::{tei_constraints_check, ConstraintViolation, TEI_NAMESPACE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializationError {
    #[error("XML error {0}")]
    Xml(String),
    #[error("unknown element <{0}>")]
    UnknownElement(String),
    #[error("unexpected attribute {attribute} on <{element}>")]
    UnknownAttribute { element: String, attribute: String },
    #[error("<{element}> is missing attribute {attribute}")]
    MissingAttribute { element: String, attribute: String },
    #[error("cannot map {text:?} in <{element}> to a registered value")]
    UnmappableValue { element: String, text: String },
    #[error("{location}: {source}")]
    StructuralViolation { location: String, source: ModelError },
    #[error("{location}: {source}")]
    InvalidFeature { location: String, source: FeatureError },
    #[error("{location}: {detail}")]
    Malformed { location: String, detail: String },
    #[error("TEI constraints violated: {}", join(.0))]
    Constraint(Vec<ConstraintViolation>),
    #[error("not expressible in {dialect}: {detail}")]
    NotExpressible { dialect: DialectId, detail: String },
    #[error("dialect mapping line {line}: {message}")]
    Mapping { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(String),
}

fn join(items: &[ConstraintViolation]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DialectId {
    CanonicalLmf,
    Morphalou,
    Tei,
}

impl DialectId {
    pub const ALL: [DialectId; 3] = [DialectId::CanonicalLmf, DialectId::Morphalou, DialectId::Tei];

    pub fn as_str(self) -> &'static str {
        match self {
            DialectId::CanonicalLmf => "canonical-lmf",
            DialectId::Morphalou => "morphalou",
            DialectId::Tei => "tei",
        }
    }
}

impl fmt::Display for DialectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DialectId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DialectId::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown dialect {s:?} (expected canonical-lmf, morphalou or tei)"))
    }
}

/// A dialect together with the mapping it needs, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dialect {
    id: DialectId,
    mapping: Option<DialectMapping>,
}

impl Dialect {
    pub fn canonical() -> Self {
        Dialect {
            id: DialectId::CanonicalLmf,
            mapping: None,
        }
    }

    /// Pairs a dialect with a mapping, checking that the mapping binds every
    /// role the dialect's reader needs.
    pub fn with_mapping(id: DialectId, mapping: DialectMapping) -> Result<Self, SerializationError> {
        let required: &[ElementRole] = match id {
            DialectId::CanonicalLmf => {
                return Ok(Dialect::canonical());
            }
            DialectId::Morphalou => &[
                ElementRole::Resource,
                ElementRole::Lexicon,
                ElementRole::Entry,
                ElementRole::FormGroup,
            ],
            DialectId::Tei => &[],
        };
        for role in required {
            if mapping.element_for(role).is_none() {
                return Err(SerializationError::Mapping {
                    line: 0,
                    message: format!("{id} mapping binds no element to {role:?}"),
                });
            }
        }
        if id == DialectId::Morphalou
            && !mapping
                .rules()
                .iter()
                .any(|(_, r)| matches!(r, ElementRole::Representation(_)))
        {
            return Err(SerializationError::Mapping {
                line: 0,
                message: "morphalou mapping binds no representation element".into(),
            });
        }
        Ok(Dialect {
            id,
            mapping: Some(mapping),
        })
    }

    /// The dialect with its shipped mapping.
    pub fn builtin(id: DialectId, reg: &Registry) -> Result<Self, SerializationError> {
        match id {
            DialectId::CanonicalLmf => Ok(Dialect::canonical()),
            DialectId::Morphalou => {
                Dialect::with_mapping(id, DialectMapping::parse(data::MORPHALOU_MAPPING, reg)?)
            }
            DialectId::Tei => Dialect::with_mapping(id, DialectMapping::parse(data::TEI_MAPPING, reg)?),
        }
    }

    pub fn id(&self) -> DialectId {
        self.id
    }

    pub fn mapping(&self) -> Option<&DialectMapping> {
        self.mapping.as_ref()
    }

    fn require_mapping(&self) -> &DialectMapping {
        self.mapping
            .as_ref()
            .expect("non-canonical dialects are built with a mapping")
    }
}

/// Reads a resource written in `dialect`.
pub fn read_resource(
    source: impl Read,
    dialect: &Dialect,
    reg: &Registry,
) -> Result<crate::lmf::LexicalResource, SerializationError> {
    let text = crate::records::read_utf8(source).map_err(|(line, m)| {
        if line == 0 {
            SerializationError::Io(m)
        } else {
            SerializationError::Xml(format!("line {line}: {m}"))
        }
    })?;
    let root = xml::parse_document(&text).map_err(SerializationError::Xml)?;
    match dialect.id {
        DialectId::CanonicalLmf => canonical::read(&root),
        DialectId::Morphalou => morphalou::read(&root, dialect.require_mapping(), reg),
        DialectId::Tei => tei::read(&root, dialect.require_mapping(), reg),
    }
}

/// Writes a resource in `dialect`. Fails with `NotExpressible` when the
/// resource uses something the dialect cannot carry.
pub fn write_resource(
    res: &crate::lmf::LexicalResource,
    dialect: &Dialect,
    reg: &Registry,
) -> Result<Vec<u8>, SerializationError> {
    let root = match dialect.id {
        DialectId::CanonicalLmf => canonical::write(res),
        DialectId::Morphalou => morphalou::write(res, dialect.require_mapping(), reg)?,
        DialectId::Tei => tei::write(res, dialect.require_mapping(), reg)?,
    };
    Ok(xml::write_document(&root).into_bytes())
}

// ---- helpers shared by the dialect modules ----

fn check_attrs(el: &xml::Element, allowed: &[&str]) -> Result<(), SerializationError> {
    for (k, _) in &el.attrs {
        if k == "xmlns" || k.starts_with("xmlns:") {
            continue;
        }
        if !allowed.contains(&k.as_str()) {
            return Err(SerializationError::UnknownAttribute {
                element: el.name.clone(),
                attribute: k.clone(),
            });
        }
    }
    if el.has_mixed_content() {
        return Err(SerializationError::Malformed {
            location: format!("<{}>", el.name),
            detail: "unexpected text between elements".into(),
        });
    }
    Ok(())
}

fn required_attr<'a>(el: &'a xml::Element, name: &str) -> Result<&'a str, SerializationError> {
    el.get_attr(name)
        .ok_or_else(|| SerializationError::MissingAttribute {
            element: el.name.clone(),
            attribute: name.to_string(),
        })
}

fn leaf_text(el: &xml::Element) -> Result<String, SerializationError> {
    el.text().ok_or_else(|| SerializationError::Malformed {
        location: format!("<{}>", el.name),
        detail: "expected text content only".into(),
    })
}

fn insert_feat(
    fs: &mut FeatureStructure,
    name: &str,
    value: &str,
    location: &str,
) -> Result<(), SerializationError> {
    fs.insert(name, value)
        .map_err(|source| SerializationError::InvalidFeature {
            location: location.to_string(),
            source,
        })
}

fn structural(location: &str) -> impl Fn(ModelError) -> SerializationError + '_ {
    move |source| SerializationError::StructuralViolation {
        location: location.to_string(),
        source,
    }
}

/// Element text to canonical value: schemes that cover the attribute must
/// map the text; other attributes are free text.
fn decode_value(
    reg: &Registry,
    scheme: &str,
    attribute: &str,
    element: &str,
    text: &str,
) -> Result<String, SerializationError> {
    if reg.scheme_covers(scheme, attribute) {
        reg.map_code(scheme, attribute, text)
            .map(str::to_string)
            .map_err(|_| SerializationError::UnmappableValue {
                element: element.to_string(),
                text: text.to_string(),
            })
    } else {
        Ok(text.to_string())
    }
}

fn encode_value(
    reg: &Registry,
    dialect: DialectId,
    scheme: &str,
    attribute: &str,
    value: &str,
) -> Result<String, SerializationError> {
    if reg.scheme_covers(scheme, attribute) {
        reg.reverse_map(scheme, attribute, value)
            .map(str::to_string)
            .map_err(|_| SerializationError::NotExpressible {
                dialect,
                detail: format!("no {scheme} code for {attribute}={value}"),
            })
    } else {
        Ok(value.to_string())
    }
}

/// Entry under construction; its id may still be missing.
struct PendingEntry {
    id: Option<String>,
    location: String,
    feats: FeatureStructure,
    forms: Vec<Form>,
    senses: Vec<Sense>,
    relations: Vec<EntryRelation>,
}

/// Builds a lexicon, giving id-less entries the id `<lemma>_<n>` where `n`
/// counts earlier entries with the same lemma, skipping ids already taken.
fn finish_lexicon(
    language: String,
    feats: FeatureStructure,
    pending: Vec<PendingEntry>,
    location: &str,
) -> Result<Lexicon, SerializationError> {
    let mut taken: std::collections::HashSet<String> =
        pending.iter().filter_map(|p| p.id.clone()).collect();
    let mut counters: std::collections::HashMap<String, usize> = Default::default();
    let mut entries = Vec::with_capacity(pending.len());
    for p in pending {
        let id = match p.id {
            Some(id) => id,
            None => {
                let base = p
                    .forms
                    .iter()
                    .find(|f| f.form_type() == FormType::Lemma)
                    .or(p.forms.first())
                    .map(|f| f.representations()[0].written_form().to_string())
                    .unwrap_or_else(|| "entry".to_string());
                let n = counters.entry(base.clone()).or_insert(0);
                loop {
                    *n += 1;
                    let candidate = format!("{base}_{n}");
                    if taken.insert(candidate.clone()) {
                        break candidate;
                    }
                }
            }
        };
        entries.push(
            LexicalEntry::new(id, p.feats, p.forms, p.senses, p.relations)
                .map_err(structural(&p.location))?,
        );
    }
    Lexicon::new(language, feats, entries).map_err(structural(location))
}

fn strip_pointer(target: &str) -> String {
    target.strip_prefix('#').unwrap_or(target).to_string()
}

fn not_expressible(dialect: DialectId, detail: impl Into<String>) -> SerializationError {
    SerializationError::NotExpressible {
        dialect,
        detail: detail.into(),
    }
}

/// Language used when a document does not declare one.
pub const UNDETERMINED_LANGUAGE: &str = "und";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dialect_ids() {
        for d in DialectId::ALL {
            assert_eq!(d.as_str().parse::<DialectId>().unwrap(), d);
        }
        assert!("lmf".parse::<DialectId>().is_err());
    }

    #[test]
    fn morphalou_needs_structural_roles() {
        let reg = data::demo_registry();
        let m = DialectMapping::parse("scheme\tx\nelem\tentry\tentry\t-\n", &reg).unwrap();
        assert!(Dialect::with_mapping(DialectId::Morphalou, m.clone()).is_err());
        assert!(Dialect::with_mapping(DialectId::Tei, m).is_ok());
    }
}
