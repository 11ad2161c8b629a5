//! Positional morphosyntactic descriptors.
//!
//! A tag such as `Ncmsg` is read one character at a time: the first
//! character names the category, each following character is the code of
//! the attribute occupying that slot, and `-` marks a slot that does not
//! apply. The layout of every category is declared in a [`TagsetSpec`]
//! loaded from a TAB-separated file, so the codec itself knows nothing
//! about any particular language.
//!
//! Tags are canonical when they carry no trailing `-`. Decoding accepts
//! truncated or dash-padded tags; encoding always produces the canonical one.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use thiserror::Error;

use crate::feature::{FeatureError, FeatureStructure};
use crate::records::{read_utf8, records};
use crate::registry::Registry;

/// Feature name carrying the category value in decoded structures.
pub const CATEGORY_FEATURE: &str = "cat";

const DASH: char = '-';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown data category {0}")]
    UnknownDataCategory(String),
    #[error("category {category}, position {position}: {code:?} used twice")]
    DuplicateCode {
        category: char,
        position: usize,
        code: char,
    },
    #[error("category {category}, position {position}: value {value} mapped twice")]
    DuplicateValue {
        category: char,
        position: usize,
        value: String,
    },
    #[error("category {category}, position {position}: '-' is reserved")]
    ReservedDash { category: char, position: usize },
    #[error("empty tag")]
    EmptyTag,
    #[error("unknown category {0:?}")]
    UnknownCategory(char),
    #[error("unknown code {code:?} at position {position}")]
    UnknownCode { position: usize, code: char },
    #[error("tag {tag} is longer than the {max} positions of its category")]
    TagTooLong { tag: String, max: usize },
    #[error("feature structure has no {CATEGORY_FEATURE} feature")]
    MissingCategory,
    #[error("no slot for feature {0}")]
    UnknownFeature(String),
    #[error("value {value} not encodable at position {position}")]
    ValueNotInSlot { position: usize, value: String },
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// One attribute position within a category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub attribute: String,
    /// (code character, value id) in declaration order.
    pub codes: Vec<(char, String)>,
}

impl Slot {
    pub fn value_for(&self, code: char) -> Option<&str> {
        self.codes
            .iter()
            .find(|(c, _)| *c == code)
            .map(|(_, v)| v.as_str())
    }

    pub fn code_for(&self, value: &str) -> Option<char> {
        self.codes.iter().find(|(_, v)| v == value).map(|(c, _)| *c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategorySpec {
    pub letter: char,
    pub value: String,
    /// Slot `i` occupies tag position `i + 1`.
    pub slots: Vec<Slot>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagsetSpec {
    pub language: String,
    categories: BTreeMap<char, CategorySpec>,
}

/// A positional tag. Non-empty; not validated against any tagset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MsdTag(String);

impl MsdTag {
    pub fn new(text: impl Into<String>) -> Result<Self, CodecError> {
        let text = text.into();
        if text.is_empty() {
            return Err(CodecError::EmptyTag);
        }
        Ok(MsdTag(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn category(&self) -> char {
        self.0.chars().next().expect("tag is non-empty")
    }
}

impl fmt::Display for MsdTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> CodecError {
    CodecError::Parse {
        line,
        message: message.into(),
    }
}

fn single_char(s: &str, line: usize, what: &str) -> Result<char, CodecError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(parse_err(line, format!("{what} must be one character, got {s:?}"))),
    }
}

fn parse_position(s: &str, line: usize) -> Result<usize, CodecError> {
    match s.parse::<usize>() {
        Ok(p) if p >= 1 => Ok(p),
        _ => Err(parse_err(line, format!("bad slot position {s:?}"))),
    }
}

impl TagsetSpec {
    pub fn load(source: impl Read, reg: &Registry) -> Result<TagsetSpec, CodecError> {
        let text = read_utf8(source).map_err(|(line, m)| parse_err(line, m))?;
        TagsetSpec::parse(&text, reg)
    }

    /// Parses tagset text and checks it against `reg`: bijective slots,
    /// contiguous positions, registered attributes and values.
    pub fn parse(text: &str, reg: &Registry) -> Result<TagsetSpec, CodecError> {
        let mut language = None;
        let mut cats: BTreeMap<char, String> = BTreeMap::new();
        let mut slots: BTreeMap<(char, usize), (usize, String)> = BTreeMap::new();
        let mut codes: Vec<(usize, char, usize, char, String)> = Vec::new();

        for rec in records(text) {
            let f = &rec.fields;
            let arity = |n: usize| {
                if f.len() == n {
                    Ok(())
                } else {
                    Err(parse_err(rec.line, format!("{} record needs {} fields", f[0], n - 1)))
                }
            };
            match rec.kind() {
                "language" => {
                    arity(2)?;
                    if language.replace(f[1].to_string()).is_some() {
                        return Err(parse_err(rec.line, "language declared twice"));
                    }
                }
                "category" => {
                    arity(3)?;
                    let letter = single_char(f[1], rec.line, "category letter")?;
                    if letter == DASH {
                        return Err(parse_err(rec.line, "'-' cannot be a category letter"));
                    }
                    if cats.insert(letter, f[2].to_string()).is_some() {
                        return Err(parse_err(rec.line, format!("category {letter} declared twice")));
                    }
                }
                "slot" => {
                    arity(4)?;
                    let letter = single_char(f[1], rec.line, "category letter")?;
                    let pos = parse_position(f[2], rec.line)?;
                    if slots.insert((letter, pos), (rec.line, f[3].to_string())).is_some() {
                        return Err(parse_err(rec.line, format!("slot {letter}{pos} declared twice")));
                    }
                }
                "code" => {
                    arity(5)?;
                    let letter = single_char(f[1], rec.line, "category letter")?;
                    let pos = parse_position(f[2], rec.line)?;
                    let code = single_char(f[3], rec.line, "code")?;
                    codes.push((rec.line, letter, pos, code, f[4].to_string()));
                }
                other => return Err(parse_err(rec.line, format!("unknown record {other:?}"))),
            }
        }

        let language = language.unwrap_or_else(|| "und".to_string());
        let mut categories = BTreeMap::new();
        let mut seen_values: BTreeMap<&str, char> = BTreeMap::new();
        for (&letter, value) in &cats {
            if !reg.is_value(value) {
                return Err(CodecError::UnknownDataCategory(value.clone()));
            }
            if let Some(other) = seen_values.insert(value, letter) {
                return Err(parse_err(
                    0,
                    format!("categories {other} and {letter} share value {value}"),
                ));
            }
            categories.insert(
                letter,
                CategorySpec {
                    letter,
                    value: value.clone(),
                    slots: Vec::new(),
                },
            );
        }

        for (&(letter, pos), (line, attribute)) in &slots {
            let cat = categories
                .get_mut(&letter)
                .ok_or_else(|| parse_err(*line, format!("slot for undeclared category {letter}")))?;
            if pos != cat.slots.len() + 1 {
                return Err(parse_err(
                    *line,
                    format!("slots of category {letter} are not contiguous from 1"),
                ));
            }
            if attribute == CATEGORY_FEATURE || cat.slots.iter().any(|s| &s.attribute == attribute) {
                return Err(parse_err(
                    *line,
                    format!("attribute {attribute} used twice in category {letter}"),
                ));
            }
            if !reg.is_attribute(attribute) {
                return Err(CodecError::UnknownDataCategory(attribute.clone()));
            }
            cat.slots.push(Slot {
                attribute: attribute.clone(),
                codes: Vec::new(),
            });
        }

        for (line, letter, pos, code, value) in codes {
            let slot = categories
                .get_mut(&letter)
                .and_then(|c| c.slots.get_mut(pos - 1))
                .ok_or_else(|| parse_err(line, format!("code for undeclared slot {letter}{pos}")))?;
            if code == DASH {
                return Err(CodecError::ReservedDash {
                    category: letter,
                    position: pos,
                });
            }
            if !reg.is_value(&value) {
                return Err(CodecError::UnknownDataCategory(value));
            }
            if slot.value_for(code).is_some() {
                return Err(CodecError::DuplicateCode {
                    category: letter,
                    position: pos,
                    code,
                });
            }
            if slot.code_for(&value).is_some() {
                return Err(CodecError::DuplicateValue {
                    category: letter,
                    position: pos,
                    value,
                });
            }
            slot.codes.push((code, value));
        }

        Ok(TagsetSpec {
            language,
            categories,
        })
    }

    pub fn category(&self, letter: char) -> Option<&CategorySpec> {
        self.categories.get(&letter)
    }

    pub fn categories(&self) -> impl Iterator<Item = &CategorySpec> {
        self.categories.values()
    }

    fn category_by_value(&self, value: &str) -> Option<&CategorySpec> {
        self.categories.values().find(|c| c.value == value)
    }

    /// Decodes a tag into `cat` plus one feature per specified slot.
    pub fn decode(&self, tag: &MsdTag) -> Result<FeatureStructure, CodecError> {
        let mut chars = tag.as_str().chars();
        let letter = chars.next().ok_or(CodecError::EmptyTag)?;
        let cat = self
            .category(letter)
            .ok_or(CodecError::UnknownCategory(letter))?;
        let rest: Vec<char> = chars.collect();
        if rest.len() > cat.slots.len() {
            return Err(CodecError::TagTooLong {
                tag: tag.to_string(),
                max: cat.slots.len() + 1,
            });
        }
        let mut fs = FeatureStructure::new();
        fs.insert(CATEGORY_FEATURE, &cat.value)?;
        for (i, (&code, slot)) in rest.iter().zip(&cat.slots).enumerate() {
            if code == DASH {
                continue;
            }
            let value = slot.value_for(code).ok_or(CodecError::UnknownCode {
                position: i + 1,
                code,
            })?;
            fs.insert(&slot.attribute, value)?;
        }
        Ok(fs)
    }

    /// Encodes a feature structure into its canonical tag.
    pub fn encode(&self, fs: &FeatureStructure) -> Result<MsdTag, CodecError> {
        let cat_value = fs.get(CATEGORY_FEATURE).ok_or(CodecError::MissingCategory)?;
        let cat = self
            .category_by_value(cat_value.as_str())
            .ok_or_else(|| CodecError::ValueNotInSlot {
                position: 0,
                value: cat_value.to_string(),
            })?;
        let mut positions = vec![DASH; cat.slots.len()];
        for (name, value) in fs.iter() {
            if name.as_str() == CATEGORY_FEATURE {
                continue;
            }
            let (i, slot) = cat
                .slots
                .iter()
                .enumerate()
                .find(|(_, s)| s.attribute == name.as_str())
                .ok_or_else(|| CodecError::UnknownFeature(name.to_string()))?;
            positions[i] = slot.code_for(value.as_str()).ok_or_else(|| CodecError::ValueNotInSlot {
                position: i + 1,
                value: value.to_string(),
            })?;
        }
        Ok(render_tag(cat.letter, &positions))
    }

    /// Every canonical tag of a category, in odometer order over the slots
    /// with `-` before the declared codes.
    pub fn enumerate_tags(&self, letter: char) -> Result<Vec<MsdTag>, CodecError> {
        let cat = self
            .category(letter)
            .ok_or(CodecError::UnknownCategory(letter))?;
        let choices: Vec<Vec<char>> = cat
            .slots
            .iter()
            .map(|s| std::iter::once(DASH).chain(s.codes.iter().map(|(c, _)| *c)).collect())
            .collect();
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut odometer = vec![0usize; choices.len()];
        loop {
            let positions: Vec<char> = odometer.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            let tag = render_tag(letter, &positions);
            if seen.insert(tag.clone()) {
                out.push(tag);
            }
            // advance the last slot fastest
            let mut k = choices.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                odometer[k] += 1;
                if odometer[k] < choices[k].len() {
                    break;
                }
                odometer[k] = 0;
            }
        }
    }

    /// All canonical tags of every category.
    pub fn all_tags(&self) -> Vec<MsdTag> {
        self.categories
            .keys()
            .flat_map(|&l| self.enumerate_tags(l).expect("category exists"))
            .collect()
    }
}

fn render_tag(letter: char, positions: &[char]) -> MsdTag {
    let keep = positions
        .iter()
        .rposition(|&c| c != DASH)
        .map_or(0, |i| i + 1);
    let mut s = String::with_capacity(keep + 1);
    s.push(letter);
    s.extend(&positions[..keep]);
    MsdTag(s)
}

/// One line of a full-form lexicon: surface form, lemma, tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconLine {
    pub form: String,
    pub lemma: String,
    pub tag: MsdTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expected 3 fields (form, lemma, tag), found {0}")]
pub struct FieldCount(pub usize);

impl LexiconLine {
    /// Splits on runs of TAB/space into exactly three fields.
    pub fn parse(text: &str) -> Result<LexiconLine, FieldCount> {
        let fields: Vec<&str> = text
            .split([' ', '\t'])
            .map(|f| f.trim_end_matches('\r'))
            .filter(|f| !f.is_empty())
            .collect();
        match fields.as_slice() {
            [form, lemma, tag] => Ok(LexiconLine {
                form: form.to_string(),
                lemma: lemma.to_string(),
                tag: MsdTag(tag.to_string()),
            }),
            _ => Err(FieldCount(fields.len())),
        }
    }

    pub fn render(&self) -> String {
        format!("{}\t{}\t{}", self.form, self.lemma, self.tag)
    }
}

/// Non-blank, non-comment lines of a lexicon file with their 1-based numbers.
pub fn lexicon_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, l))
    })
}
