//! Data-category registry.
//!
//! The registry holds three kinds of records:
//!
//! * data categories, each either an attribute (`gender`) or a value (`feminine`);
//! * conceptual domains, the permitted values of an attribute, optionally
//!   restricted to one language;
//! * code mappings, which tie the concrete code used by an encoding scheme
//!   (`f`, `fém.`) to a canonical value category.
//!
//! A [`Registry`] can only be obtained through [`Registry::load`] or
//! [`Registry::parse`], which check every cross reference before returning.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Read;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::records::{read_utf8, records};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("reference to unregistered data category {0}")]
    DanglingReference(String),
    #[error("data category {0} registered twice")]
    DuplicateId(String),
    #[error("data category {id} is not of kind {expected}")]
    KindMismatch { id: String, expected: CategoryKind },
    #[error("conceptual domain for {attribute} ({language}) declared twice")]
    DuplicateDomain { attribute: String, language: String },
    #[error("scheme {scheme} is not one-to-one for attribute {attribute}")]
    NonBijectiveScheme { scheme: String, attribute: String },
    #[error("unknown attribute {0}")]
    UnknownAttribute(String),
    #[error("no value for code {code:?} under {scheme}/{attribute}")]
    UnknownCode {
        scheme: String,
        attribute: String,
        code: String,
    },
    #[error("no code for value {value} under {scheme}/{attribute}")]
    UnknownValue {
        scheme: String,
        attribute: String,
        value: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CategoryKind {
    Attribute,
    Value,
}

impl fmt::Display for CategoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CategoryKind::Attribute => "attribute",
            CategoryKind::Value => "value",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataCategory {
    pub id: String,
    pub kind: CategoryKind,
    pub definition: String,
    pub profile: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptualDomain {
    pub attribute: String,
    /// `None` for the universal domain.
    pub language: Option<String>,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMapping {
    pub scheme: String,
    pub attribute: String,
    pub code: String,
    pub value: String,
}

#[derive(Debug, Clone, Default)]
pub struct Registry {
    categories: BTreeMap<String, DataCategory>,
    domains: BTreeMap<(String, Option<String>), ConceptualDomain>,
    mappings: Vec<CodeMapping>,
    by_code: HashMap<(String, String, String), usize>,
    by_value: HashMap<(String, String, String), usize>,
}

fn nfc(s: &str) -> String {
    s.nfc().collect()
}

fn parse_err(line: usize, message: impl Into<String>) -> RegistryError {
    RegistryError::Parse {
        line,
        message: message.into(),
    }
}

impl Registry {
    pub fn load(source: impl Read) -> Result<Registry, RegistryError> {
        let text = read_utf8(source).map_err(|(line, m)| parse_err(line, m))?;
        Registry::parse(&text)
    }

    /// Parses registry text. Record order does not matter; integrity is
    /// checked once every line has been read.
    pub fn parse(text: &str) -> Result<Registry, RegistryError> {
        let mut reg = Registry::default();
        let mut domain_lines = Vec::new();
        let mut mappings = Vec::new();

        for rec in records(text) {
            let f = &rec.fields;
            match rec.kind() {
                "datcat" => {
                    if f.len() < 4 || f.len() > 5 {
                        return Err(parse_err(rec.line, "datcat needs id, kind, definition[, profile]"));
                    }
                    let id = nfc(f[1]);
                    if id.is_empty() || id.contains(char::is_whitespace) {
                        return Err(parse_err(rec.line, format!("bad category id {:?}", f[1])));
                    }
                    let kind = match f[2] {
                        "attribute" => CategoryKind::Attribute,
                        "value" => CategoryKind::Value,
                        other => return Err(parse_err(rec.line, format!("unknown kind {other:?}"))),
                    };
                    if reg.categories.contains_key(&id) {
                        return Err(RegistryError::DuplicateId(id));
                    }
                    let profile = f.get(4).filter(|p| !p.is_empty()).map(|p| p.to_string());
                    reg.categories.insert(
                        id.clone(),
                        DataCategory {
                            id,
                            kind,
                            definition: f[3].to_string(),
                            profile,
                        },
                    );
                }
                "domain" => {
                    if f.len() != 4 {
                        return Err(parse_err(rec.line, "domain needs attribute, language, values"));
                    }
                    let values: Vec<String> = f[3]
                        .split(',')
                        .map(|v| nfc(v.trim()))
                        .filter(|v| !v.is_empty())
                        .collect();
                    if values.is_empty() {
                        return Err(parse_err(rec.line, "empty conceptual domain"));
                    }
                    let language = (f[2] != "*").then(|| f[2].to_string());
                    domain_lines.push(ConceptualDomain {
                        attribute: nfc(f[1]),
                        language,
                        values,
                    });
                }
                "code" => {
                    if f.len() != 5 {
                        return Err(parse_err(rec.line, "code needs scheme, attribute, code, value"));
                    }
                    if f[3].is_empty() {
                        return Err(parse_err(rec.line, "empty code"));
                    }
                    mappings.push(CodeMapping {
                        scheme: f[1].to_string(),
                        attribute: nfc(f[2]),
                        code: nfc(f[3]),
                        value: nfc(f[4]),
                    });
                }
                other => return Err(parse_err(rec.line, format!("unknown record {other:?}"))),
            }
        }

        for dom in domain_lines {
            reg.expect_kind(&dom.attribute, CategoryKind::Attribute)?;
            for v in &dom.values {
                reg.expect_kind(v, CategoryKind::Value)?;
            }
            let key = (dom.attribute.clone(), dom.language.clone());
            if reg.domains.contains_key(&key) {
                return Err(RegistryError::DuplicateDomain {
                    attribute: dom.attribute,
                    language: dom.language.unwrap_or_else(|| "*".into()),
                });
            }
            reg.domains.insert(key, dom);
        }

        for m in mappings {
            reg.expect_kind(&m.attribute, CategoryKind::Attribute)?;
            reg.expect_kind(&m.value, CategoryKind::Value)?;
            let idx = reg.mappings.len();
            let code_key = (m.scheme.clone(), m.attribute.clone(), m.code.clone());
            let value_key = (m.scheme.clone(), m.attribute.clone(), m.value.clone());
            if reg.by_code.contains_key(&code_key) || reg.by_value.contains_key(&value_key) {
                return Err(RegistryError::NonBijectiveScheme {
                    scheme: m.scheme,
                    attribute: m.attribute,
                });
            }
            reg.by_code.insert(code_key, idx);
            reg.by_value.insert(value_key, idx);
            reg.mappings.push(m);
        }

        Ok(reg)
    }

    fn expect_kind(&self, id: &str, expected: CategoryKind) -> Result<(), RegistryError> {
        match self.categories.get(id) {
            None => Err(RegistryError::DanglingReference(id.to_string())),
            Some(c) if c.kind != expected => Err(RegistryError::KindMismatch {
                id: id.to_string(),
                expected,
            }),
            Some(_) => Ok(()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn category(&self, id: &str) -> Option<&DataCategory> {
        self.categories.get(id)
    }

    /// All categories, ordered by id.
    pub fn categories(&self) -> impl Iterator<Item = &DataCategory> {
        self.categories.values()
    }

    pub fn is_attribute(&self, id: &str) -> bool {
        matches!(self.category(id), Some(c) if c.kind == CategoryKind::Attribute)
    }

    pub fn is_value(&self, id: &str) -> bool {
        matches!(self.category(id), Some(c) if c.kind == CategoryKind::Value)
    }

    pub fn domains(&self) -> impl Iterator<Item = &ConceptualDomain> {
        self.domains.values()
    }

    /// Code mappings in file order.
    pub fn code_mappings(&self) -> &[CodeMapping] {
        &self.mappings
    }

    /// True if `scheme` declares any code for `attribute`.
    pub fn scheme_covers(&self, scheme: &str, attribute: &str) -> bool {
        self.mappings
            .iter()
            .any(|m| m.scheme == scheme && m.attribute == attribute)
    }

    /// The domain that applies to `attribute` for `language`: the
    /// language-scoped one if declared, the universal one otherwise.
    pub fn applicable_domain(&self, attribute: &str, language: Option<&str>) -> Option<&ConceptualDomain> {
        language
            .and_then(|l| self.domains.get(&(attribute.to_string(), Some(l.to_string()))))
            .or_else(|| self.domains.get(&(attribute.to_string(), None)))
    }

    /// Checks `value` against the applicable conceptual domain of
    /// `attribute`. Attributes without any domain are open and accept every
    /// value.
    pub fn validate_pair(
        &self,
        attribute: &str,
        value: &str,
        language: Option<&str>,
    ) -> Result<bool, RegistryError> {
        let attribute = nfc(attribute);
        if !self.is_attribute(&attribute) {
            return Err(RegistryError::UnknownAttribute(attribute));
        }
        let value = nfc(value);
        Ok(match self.applicable_domain(&attribute, language) {
            Some(dom) => dom.values.contains(&value),
            None => true,
        })
    }

    pub fn map_code(&self, scheme: &str, attribute: &str, code: &str) -> Result<&str, RegistryError> {
        let key = (scheme.to_string(), nfc(attribute), nfc(code));
        self.by_code
            .get(&key)
            .map(|&i| self.mappings[i].value.as_str())
            .ok_or(RegistryError::UnknownCode {
                scheme: key.0,
                attribute: key.1,
                code: key.2,
            })
    }

    pub fn reverse_map(&self, scheme: &str, attribute: &str, value: &str) -> Result<&str, RegistryError> {
        let key = (scheme.to_string(), nfc(attribute), nfc(value));
        self.by_value
            .get(&key)
            .map(|&i| self.mappings[i].code.as_str())
            .ok_or(RegistryError::UnknownValue {
                scheme: key.0,
                attribute: key.1,
                value: key.2,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# tiny registry
datcat\tgender\tattribute\tgrammatical gender\tmorphosyntax
datcat\tfeminine\tvalue\tfeminine gender
datcat\tmasculine\tvalue\tmasculine gender
datcat\tcase\tattribute\tgrammatical case
datcat\tgenitive\tvalue\tgenitive case
datcat\tablative\tvalue\tablative case
domain\tgender\t*\tfeminine,masculine
domain\tcase\tde\tgenitive
domain\tcase\t*\tgenitive,ablative
code\tscheme-A\tgender\tf\tfeminine
code\tscheme-B\tgender\tfém.\tfeminine
";

    #[test]
    fn empty_file() {
        let reg = Registry::parse("").unwrap();
        assert!(reg.is_empty());
        assert!(reg.code_mappings().is_empty());
    }

    #[test]
    fn loads_small_registry() {
        let reg = Registry::parse(SMALL).unwrap();
        assert_eq!(reg.category("gender").unwrap().profile.as_deref(), Some("morphosyntax"));
        assert_eq!(reg.category("feminine").unwrap().kind, CategoryKind::Value);
        assert_eq!(reg.map_code("scheme-A", "gender", "f").unwrap(), "feminine");
        assert_eq!(reg.map_code("scheme-B", "gender", "fém.").unwrap(), "feminine");
        // decomposed input still matches after NFC
        assert_eq!(reg.map_code("scheme-B", "gender", "fe\u{301}m.").unwrap(), "feminine");
        assert!(reg.map_code("scheme-A", "gender", "F").is_err());
    }

    #[test]
    fn language_scoped_domain_replaces_universal() {
        let reg = Registry::parse(SMALL).unwrap();
        assert!(reg.validate_pair("case", "ablative", None).unwrap());
        assert!(!reg.validate_pair("case", "ablative", Some("de")).unwrap());
        assert!(reg.validate_pair("case", "ablative", Some("la")).unwrap());
        assert!(reg.validate_pair("gender", "feminine", None).unwrap());
        assert_eq!(
            reg.validate_pair("tense", "past", None),
            Err(RegistryError::UnknownAttribute("tense".into()))
        );
        assert_eq!(
            reg.validate_pair("feminine", "x", None),
            Err(RegistryError::UnknownAttribute("feminine".into()))
        );
    }

    #[test]
    fn non_bijective_scheme() {
        let text = format!("{SMALL}code\tscheme-A\tgender\tfem\tfeminine\n");
        assert_eq!(
            Registry::parse(&text).unwrap_err(),
            RegistryError::NonBijectiveScheme {
                scheme: "scheme-A".into(),
                attribute: "gender".into()
            }
        );
        let text = format!("{SMALL}code\tscheme-A\tgender\tf\tmasculine\n");
        assert!(matches!(
            Registry::parse(&text),
            Err(RegistryError::NonBijectiveScheme { .. })
        ));
    }

    #[test]
    fn integrity_errors() {
        let text = format!("{SMALL}domain\tnumber\t*\tsingular\n");
        assert_eq!(
            Registry::parse(&text).unwrap_err(),
            RegistryError::DanglingReference("number".into())
        );
        let text = format!("{SMALL}datcat\tgender\tvalue\tagain\n");
        assert_eq!(
            Registry::parse(&text).unwrap_err(),
            RegistryError::DuplicateId("gender".into())
        );
        let text = format!("{SMALL}code\ts\tfeminine\tf\tfeminine\n");
        assert!(matches!(
            Registry::parse(&text),
            Err(RegistryError::KindMismatch { .. })
        ));
        let text = format!("{SMALL}domain\tgender\t*\tmasculine\n");
        assert!(matches!(
            Registry::parse(&text),
            Err(RegistryError::DuplicateDomain { .. })
        ));
    }

    #[test]
    fn forward_references_allowed() {
        let text = "code\ts\tg\tx\tv\ndomain\tg\t*\tv\ndatcat\tg\tattribute\tg\ndatcat\tv\tvalue\tv\n";
        let reg = Registry::parse(text).unwrap();
        assert_eq!(reg.map_code("s", "g", "x").unwrap(), "v");
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = Registry::parse("# c\n\ndatcat\tx\n").unwrap_err();
        assert_eq!(err, RegistryError::Parse { line: 3, message: "datcat needs id, kind, definition[, profile]".into() });
        assert!(matches!(Registry::parse("bogus\tx\n"), Err(RegistryError::Parse { line: 1, .. })));
        assert!(matches!(
            Registry::parse("datcat\tx\tthing\td\n"),
            Err(RegistryError::Parse { line: 1, .. })
        ));
    }
}
