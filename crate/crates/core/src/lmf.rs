//! LMF core package: resource, global information, lexica, entries, forms,
//! form representations, recursive senses and entry relations.
//!
//! Constructors enforce the structural invariants (an entry has at least one
//! form and at most one lemma, a form has at least one representation, every
//! representation carries a `writtenForm`, entry ids are unique within a
//! lexicon). [`validate_resource`] covers what constructors cannot see:
//! relation targets and registry conformance of feature values.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::feature::FeatureStructure;
use crate::registry::{Registry, RegistryError};

pub const WRITTEN_FORM: &str = "writtenForm";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("entry {0} has no form")]
    MissingForm(String),
    #[error("entry {0} has more than one lemma form")]
    MultipleLemmas(String),
    #[error("form has no representation")]
    MissingRepresentation,
    #[error("form representation has no writtenForm")]
    MissingWrittenForm,
    #[error("entry id {0} used twice in one lexicon")]
    DuplicateEntryId(String),
    #[error("resource has no lexicon")]
    NoLexicon,
    #[error("empty entry id")]
    EmptyId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormType {
    Lemma,
    WordForm,
    Stem,
}

impl FormType {
    pub const ALL: [FormType; 3] = [FormType::Lemma, FormType::WordForm, FormType::Stem];

    pub fn as_str(self) -> &'static str {
        match self {
            FormType::Lemma => "lemma",
            FormType::WordForm => "wordForm",
            FormType::Stem => "stem",
        }
    }
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown form type {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormRepresentation {
    feats: FeatureStructure,
}

impl FormRepresentation {
    pub fn new(feats: FeatureStructure) -> Result<Self, ModelError> {
        if !feats.contains(WRITTEN_FORM) {
            return Err(ModelError::MissingWrittenForm);
        }
        Ok(FormRepresentation { feats })
    }

    /// Shorthand for a representation holding only its orthography.
    pub fn written(text: &str) -> Result<Self, ModelError> {
        let mut feats = FeatureStructure::new();
        feats
            .insert(WRITTEN_FORM, text)
            .map_err(|_| ModelError::MissingWrittenForm)?;
        Ok(FormRepresentation { feats })
    }

    pub fn feats(&self) -> &FeatureStructure {
        &self.feats
    }

    pub fn written_form(&self) -> &str {
        self.feats
            .get(WRITTEN_FORM)
            .expect("checked at construction")
            .as_str()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    form_type: FormType,
    feats: FeatureStructure,
    representations: Vec<FormRepresentation>,
}

impl Form {
    pub fn new(
        form_type: FormType,
        feats: FeatureStructure,
        representations: Vec<FormRepresentation>,
    ) -> Result<Self, ModelError> {
        if representations.is_empty() {
            return Err(ModelError::MissingRepresentation);
        }
        Ok(Form {
            form_type,
            feats,
            representations,
        })
    }

    pub fn form_type(&self) -> FormType {
        self.form_type
    }

    pub fn feats(&self) -> &FeatureStructure {
        &self.feats
    }

    pub fn representations(&self) -> &[FormRepresentation] {
        &self.representations
    }
}

/// A sense and its subsenses. Ownership makes the tree finite and unshared.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sense {
    pub id: Option<String>,
    pub feats: FeatureStructure,
    pub subsenses: Vec<Sense>,
}

impl Sense {
    /// Number of senses in this subtree, this one included.
    pub fn count(&self) -> usize {
        1 + self.subsenses.iter().map(Sense::count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.subsenses.iter().map(Sense::depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryRelation {
    pub relation_type: String,
    /// Entry id, without any `#` pointer prefix.
    pub target: String,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexicalEntry {
    id: String,
    feats: FeatureStructure,
    forms: Vec<Form>,
    senses: Vec<Sense>,
    relations: Vec<EntryRelation>,
}

impl LexicalEntry {
    pub fn new(
        id: impl Into<String>,
        feats: FeatureStructure,
        forms: Vec<Form>,
        senses: Vec<Sense>,
        relations: Vec<EntryRelation>,
    ) -> Result<Self, ModelError> {
        let id: String = id.into().nfc().collect();
        if id.is_empty() {
            return Err(ModelError::EmptyId);
        }
        if forms.is_empty() {
            return Err(ModelError::MissingForm(id));
        }
        if forms.iter().filter(|f| f.form_type == FormType::Lemma).count() > 1 {
            return Err(ModelError::MultipleLemmas(id));
        }
        Ok(LexicalEntry {
            id,
            feats,
            forms,
            senses,
            relations,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn feats(&self) -> &FeatureStructure {
        &self.feats
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }

    pub fn relations(&self) -> &[EntryRelation] {
        &self.relations
    }

    pub fn lemma(&self) -> Option<&Form> {
        self.forms.iter().find(|f| f.form_type == FormType::Lemma)
    }

    #[cfg(test)]
    pub(crate) fn unchecked(id: &str, forms: Vec<Form>, relations: Vec<EntryRelation>) -> Self {
        LexicalEntry {
            id: id.to_string(),
            feats: FeatureStructure::new(),
            forms,
            senses: Vec::new(),
            relations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    language: String,
    feats: FeatureStructure,
    entries: Vec<LexicalEntry>,
}

impl Lexicon {
    pub fn new(
        language: impl Into<String>,
        feats: FeatureStructure,
        entries: Vec<LexicalEntry>,
    ) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.id.as_str()) {
                return Err(ModelError::DuplicateEntryId(e.id.clone()));
            }
        }
        Ok(Lexicon {
            language: language.into(),
            feats,
            entries,
        })
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn feats(&self) -> &FeatureStructure {
        &self.feats
    }

    pub fn entries(&self) -> &[LexicalEntry] {
        &self.entries
    }

    pub fn entry(&self, id: &str) -> Option<&LexicalEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GlobalInformation {
    pub feats: FeatureStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexicalResource {
    global: GlobalInformation,
    lexica: Vec<Lexicon>,
}

impl LexicalResource {
    pub fn new(global: GlobalInformation, lexica: Vec<Lexicon>) -> Result<Self, ModelError> {
        if lexica.is_empty() {
            return Err(ModelError::NoLexicon);
        }
        Ok(LexicalResource { global, lexica })
    }

    /// A resource with a single lexicon and no metadata.
    pub fn single(lexicon: Lexicon) -> Self {
        LexicalResource {
            global: GlobalInformation::default(),
            lexica: vec![lexicon],
        }
    }

    pub fn global(&self) -> &GlobalInformation {
        &self.global
    }

    pub fn lexica(&self) -> &[Lexicon] {
        &self.lexica
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexicalEntry> {
        self.lexica.iter().flat_map(|l| l.entries.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    MissingForm,
    MultipleLemmas,
    MissingRepresentation,
    MissingWrittenForm,
    DuplicateEntryId(String),
    DanglingRelationTarget(String),
    UnregisteredRelationType(String),
    UnregisteredAttribute(String),
    InvalidValue { attribute: String, value: String },
}

impl ViolationKind {
    pub fn code(&self) -> &'static str {
        match self {
            ViolationKind::MissingForm => "MissingForm",
            ViolationKind::MultipleLemmas => "MultipleLemmas",
            ViolationKind::MissingRepresentation => "MissingRepresentation",
            ViolationKind::MissingWrittenForm => "MissingWrittenForm",
            ViolationKind::DuplicateEntryId(_) => "DuplicateEntryId",
            ViolationKind::DanglingRelationTarget(_) => "DanglingRelationTarget",
            ViolationKind::UnregisteredRelationType(_) => "UnregisteredRelationType",
            ViolationKind::UnregisteredAttribute(_) => "UnregisteredAttribute",
            ViolationKind::InvalidValue { .. } => "InvalidValue",
        }
    }
}

impl From<&ModelError> for ViolationKind {
    fn from(e: &ModelError) -> Self {
        match e {
            ModelError::MissingForm(_) | ModelError::EmptyId | ModelError::NoLexicon => {
                ViolationKind::MissingForm
            }
            ModelError::MultipleLemmas(_) => ViolationKind::MultipleLemmas,
            ModelError::MissingRepresentation => ViolationKind::MissingRepresentation,
            ModelError::MissingWrittenForm => ViolationKind::MissingWrittenForm,
            ModelError::DuplicateEntryId(id) => ViolationKind::DuplicateEntryId(id.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub severity: Severity,
    pub kind: ViolationKind,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    /// `<severity> <code> <location> <message>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.severity,
            self.kind.code(),
            self.location,
            self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    fn push(&mut self, kind: ViolationKind, location: &str, message: String) {
        self.violations.push(Violation {
            severity: Severity::Error,
            kind,
            location: location.to_string(),
            message,
        });
    }
}

/// Checks a resource against `reg`. Violations are returned as data.
pub fn validate_resource(res: &LexicalResource, reg: &Registry) -> ValidationReport {
    let mut report = ValidationReport::default();
    let ids: HashSet<&str> = res.entries().map(|e| e.id.as_str()).collect();

    for (li, lex) in res.lexica.iter().enumerate() {
        let lang = Some(lex.language.as_str());
        let mut seen = HashSet::new();
        for entry in &lex.entries {
            let loc = format!("lexicon[{}]/entry[{}]", li + 1, entry.id);
            if !seen.insert(entry.id.as_str()) {
                report.push(
                    ViolationKind::DuplicateEntryId(entry.id.clone()),
                    &loc,
                    format!("entry id {} is not unique", entry.id),
                );
            }
            if entry.forms.is_empty() {
                report.push(ViolationKind::MissingForm, &loc, "entry has no form".into());
            }
            if entry.forms.iter().filter(|f| f.form_type == FormType::Lemma).count() > 1 {
                report.push(ViolationKind::MultipleLemmas, &loc, "more than one lemma form".into());
            }
            check_feats(&mut report, reg, lang, &entry.feats, &loc);

            for (fi, form) in entry.forms.iter().enumerate() {
                let floc = format!("{loc}/form[{}]", fi + 1);
                if form.representations.is_empty() {
                    report.push(
                        ViolationKind::MissingRepresentation,
                        &floc,
                        "form has no representation".into(),
                    );
                }
                check_feats(&mut report, reg, lang, &form.feats, &floc);
                for (ri, rep) in form.representations.iter().enumerate() {
                    let rloc = format!("{floc}/representation[{}]", ri + 1);
                    if !rep.feats.contains(WRITTEN_FORM) {
                        report.push(
                            ViolationKind::MissingWrittenForm,
                            &rloc,
                            "representation has no writtenForm".into(),
                        );
                    }
                    check_feats(&mut report, reg, lang, &rep.feats, &rloc);
                }
            }

            let mut stack: Vec<(String, &Sense)> = entry
                .senses
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("{loc}/sense[{}]", i + 1), s))
                .collect();
            while let Some((sloc, sense)) = stack.pop() {
                check_feats(&mut report, reg, lang, &sense.feats, &sloc);
                for (i, sub) in sense.subsenses.iter().enumerate() {
                    stack.push((format!("{sloc}/sense[{}]", i + 1), sub));
                }
            }

            for (ri, rel) in entry.relations.iter().enumerate() {
                let rloc = format!("{loc}/relation[{}]", ri + 1);
                if !reg.is_attribute(&rel.relation_type) {
                    report.push(
                        ViolationKind::UnregisteredRelationType(rel.relation_type.clone()),
                        &rloc,
                        format!("relation type {} is not a registered attribute", rel.relation_type),
                    );
                }
                if !ids.contains(rel.target.as_str()) {
                    report.push(
                        ViolationKind::DanglingRelationTarget(rel.target.clone()),
                        &rloc,
                        format!("{} target {} is not in the resource", rel.relation_type, rel.target),
                    );
                }
            }
        }
    }
    report
}

fn check_feats(
    report: &mut ValidationReport,
    reg: &Registry,
    language: Option<&str>,
    feats: &FeatureStructure,
    loc: &str,
) {
    for (name, value) in feats.iter() {
        match reg.validate_pair(name.as_str(), value.as_str(), language) {
            Ok(true) => {}
            Ok(false) => report.push(
                ViolationKind::InvalidValue {
                    attribute: name.to_string(),
                    value: value.to_string(),
                },
                loc,
                format!("{value} is not a permitted value of {name}"),
            ),
            Err(RegistryError::UnknownAttribute(_)) | Err(_) => report.push(
                ViolationKind::UnregisteredAttribute(name.to_string()),
                loc,
                format!("attribute {name} is not registered"),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupHit {
    /// 0-based lexicon index.
    pub lexicon: usize,
    pub entry_id: String,
    pub form_type: FormType,
    /// Entry, form and representation features merged in that order.
    pub features: FeatureStructure,
}

/// Full-form lookup. Returns every representation whose `writtenForm` equals
/// `surface` and whose merged features are subsumed by `filter`, in resource
/// order. Representations whose levels carry conflicting features are skipped.
pub fn lookup_form(
    res: &LexicalResource,
    surface: &str,
    filter: Option<&FeatureStructure>,
) -> Vec<LookupHit> {
    let surface: String = surface.nfc().collect();
    let mut hits = Vec::new();
    for (li, lex) in res.lexica.iter().enumerate() {
        for entry in &lex.entries {
            for form in &entry.forms {
                for rep in &form.representations {
                    if rep.written_form() != surface {
                        continue;
                    }
                    let merged = entry
                        .feats
                        .merge(&form.feats)
                        .and_then(|fs| fs.merge(&rep.feats));
                    let features = match merged {
                        Ok(fs) => fs,
                        Err(e) => {
                            log::warn!("skipping {surface} in entry {}: {e}", entry.id);
                            continue;
                        }
                    };
                    if filter.is_none_or(|f| f.subsumes(&features)) {
                        hits.push(LookupHit {
                            lexicon: li,
                            entry_id: entry.id.clone(),
                            form_type: form.form_type,
                            features,
                        });
                    }
                }
            }
        }
    }
    hits
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StatsSummary {
    pub lexica: usize,
    pub entries: usize,
    pub lemma_forms: usize,
    pub word_forms: usize,
    pub stem_forms: usize,
    pub representations: usize,
    pub senses: usize,
    pub relations: usize,
}

impl StatsSummary {
    pub fn forms(&self) -> usize {
        self.lemma_forms + self.word_forms + self.stem_forms
    }
}

impl fmt::Display for StatsSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lexica\t{}", self.lexica)?;
        writeln!(f, "entries\t{}", self.entries)?;
        writeln!(f, "forms\t{}", self.forms())?;
        writeln!(f, "forms.lemma\t{}", self.lemma_forms)?;
        writeln!(f, "forms.wordForm\t{}", self.word_forms)?;
        writeln!(f, "forms.stem\t{}", self.stem_forms)?;
        writeln!(f, "representations\t{}", self.representations)?;
        writeln!(f, "senses\t{}", self.senses)?;
        writeln!(f, "relations\t{}", self.relations)
    }
}

pub fn resource_stats(res: &LexicalResource) -> StatsSummary {
    let mut s = StatsSummary {
        lexica: res.lexica.len(),
        ..Default::default()
    };
    for entry in res.entries() {
        s.entries += 1;
        s.relations += entry.relations.len();
        s.senses += entry.senses.iter().map(Sense::count).sum::<usize>();
        for form in &entry.forms {
            match form.form_type {
                FormType::Lemma => s.lemma_forms += 1,
                FormType::WordForm => s.word_forms += 1,
                FormType::Stem => s.stem_forms += 1,
            }
            s.representations += form.representations.len();
        }
    }
    s
}
