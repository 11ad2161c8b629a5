//! Flat feature structures.
//!
//! A [`FeatureStructure`] is an ordered list of attribute/value pairs in which
//! no attribute occurs twice. Insertion order is kept so that serializers are
//! deterministic, but equality ignores it: two structures are equal when they
//! hold the same set of pairs.

use std::borrow::Borrow;
use std::fmt;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("feature name is empty")]
    EmptyName,
    #[error("invalid feature name {0:?}: whitespace or control characters")]
    InvalidName(String),
    #[error("feature value for {0} is empty")]
    EmptyValue(String),
    #[error("duplicate attribute {0}")]
    DuplicateAttribute(String),
    #[error("conflicting values for {name}: {left} vs {right}")]
    Conflict {
        name: String,
        left: String,
        right: String,
    },
}

fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Attribute key of a feature. NFC-normalized, non-empty, no whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureName(String);

impl FeatureName {
    pub fn new(name: impl AsRef<str>) -> Result<Self, FeatureError> {
        let name = nfc(name.as_ref());
        if name.is_empty() {
            return Err(FeatureError::EmptyName);
        }
        if name.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(FeatureError::InvalidName(name));
        }
        Ok(FeatureName(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for FeatureName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FeatureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Value of a feature. NFC-normalized and non-empty; otherwise opaque.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureValue(String);

impl FeatureValue {
    pub fn new(value: impl AsRef<str>) -> Option<Self> {
        let value = nfc(value.as_ref());
        if value.is_empty() {
            None
        } else {
            Some(FeatureValue(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl PartialEq<str> for FeatureValue {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for FeatureValue {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

/// An ordered set of attribute/value pairs with unique attributes.
#[derive(Debug, Clone, Default)]
pub struct FeatureStructure {
    pairs: Vec<(FeatureName, FeatureValue)>,
}

impl FeatureStructure {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a structure from raw pairs, rejecting repeated attributes.
    pub fn build<I, N, V>(pairs: I) -> Result<Self, FeatureError>
    where
        I: IntoIterator<Item = (N, V)>,
        N: AsRef<str>,
        V: AsRef<str>,
    {
        let mut fs = FeatureStructure::new();
        for (name, value) in pairs {
            fs.insert(name, value)?;
        }
        Ok(fs)
    }

    /// Appends a pair. Fails if the attribute is already present, whatever its value.
    pub fn insert(&mut self, name: impl AsRef<str>, value: impl AsRef<str>) -> Result<(), FeatureError> {
        let name = FeatureName::new(name)?;
        let value =
            FeatureValue::new(value).ok_or_else(|| FeatureError::EmptyValue(name.to_string()))?;
        self.push(name, value)
    }

    fn push(&mut self, name: FeatureName, value: FeatureValue) -> Result<(), FeatureError> {
        if self.contains(name.as_str()) {
            return Err(FeatureError::DuplicateAttribute(name.0));
        }
        self.pairs.push((name, value));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FeatureValue> {
        self.pairs
            .iter()
            .find(|(n, _)| n.as_str() == name)
            .map(|(_, v)| v)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (&FeatureName, &FeatureValue)> {
        self.pairs.iter().map(|(n, v)| (n, v))
    }

    /// Copy of this structure without `name`.
    pub fn without(&self, name: &str) -> FeatureStructure {
        FeatureStructure {
            pairs: self
                .pairs
                .iter()
                .filter(|(n, _)| n.as_str() != name)
                .cloned()
                .collect(),
        }
    }

    /// Consistent union: `self`'s pairs, then the pairs of `other` whose
    /// attribute is new. Shared attributes must agree.
    pub fn merge(&self, other: &FeatureStructure) -> Result<FeatureStructure, FeatureError> {
        let mut out = self.clone();
        for (name, value) in &other.pairs {
            match self.get(name.as_str()) {
                Some(existing) if existing == value => {}
                Some(existing) => {
                    return Err(FeatureError::Conflict {
                        name: name.to_string(),
                        left: existing.to_string(),
                        right: value.to_string(),
                    })
                }
                None => out.pairs.push((name.clone(), value.clone())),
            }
        }
        Ok(out)
    }

    /// True iff every pair of `self` occurs in `other`.
    pub fn subsumes(&self, other: &FeatureStructure) -> bool {
        self.pairs
            .iter()
            .all(|(n, v)| other.get(n.as_str()) == Some(v))
    }
}

impl PartialEq for FeatureStructure {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.subsumes(other)
    }
}

impl Eq for FeatureStructure {}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (n, v)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a FeatureStructure {
    type Item = (&'a FeatureName, &'a FeatureValue);
    type IntoIter = Box<dyn Iterator<Item = Self::Item> + 'a>;

    fn into_iter(self) -> Self::IntoIter {
        Box::new(self.iter())
    }
}
