//! Dialect-to-dialect conversion and import of three-column full-form
//! lexica into LMF.

use std::collections::HashMap;
use std::fmt;
use std::io::Read;

use rayon::prelude::*;
use thiserror::Error;

use crate::feature::FeatureStructure;
use crate::lmf::{Form, FormRepresentation, FormType, LexicalEntry, LexicalResource, Lexicon};
use crate::msd::{lexicon_lines, CodecError, FieldCount, LexiconLine, TagsetSpec, CATEGORY_FEATURE};
use crate::registry::Registry;
use crate::serialize::{read_resource, write_resource, Dialect, SerializationError};

/// Entry-level attribute receiving the decoded category value.
pub const PART_OF_SPEECH: &str = "partOfSpeech";

/// Reads `source` in one dialect and writes it in another.
pub fn convert(
    source: impl Read,
    from: &Dialect,
    to: &Dialect,
    reg: &Registry,
) -> Result<Vec<u8>, SerializationError> {
    let res = read_resource(source, from, reg)?;
    write_resource(&res, to, reg)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineProblem {
    #[error(transparent)]
    Fields(#[from] FieldCount),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {problem}")]
pub struct LineError {
    pub line: usize,
    pub problem: LineProblem,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImportError {
    #[error("{} bad line(s); first: {}", .0.len(), .0[0])]
    Lines(Vec<LineError>),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("{0}")]
    Model(String),
}

/// Result of a lenient import: the resource built from the good lines and
/// every line that failed.
#[derive(Debug, Clone)]
pub struct ImportOutcome {
    pub resource: LexicalResource,
    pub errors: Vec<LineError>,
    pub lines: usize,
}

impl fmt::Display for ImportOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stats = crate::lmf::resource_stats(&self.resource);
        write!(
            f,
            "entries={} forms={} errors={}",
            stats.entries,
            stats.word_forms,
            self.errors.len()
        )
    }
}

/// Imports a full-form lexicon, failing if any line is bad. All bad lines
/// are reported together.
pub fn import_multext(
    source: impl Read,
    spec: &TagsetSpec,
    reg: &Registry,
    language: &str,
) -> Result<LexicalResource, ImportError> {
    let outcome = import_multext_lenient(source, spec, reg, language)?;
    if outcome.errors.is_empty() {
        Ok(outcome.resource)
    } else {
        Err(ImportError::Lines(outcome.errors))
    }
}

struct Decoded {
    line: LexiconLine,
    feats: FeatureStructure,
}

/// Imports every line that parses and decodes; bad lines are collected.
///
/// Lines are grouped into entries by (lemma, category). Features carried with
/// the same value by every member of a group move to the lemma form; the
/// category becomes the entry's `partOfSpeech`; each line keeps the rest on
/// its own word form.
pub fn import_multext_lenient(
    source: impl Read,
    spec: &TagsetSpec,
    _reg: &Registry,
    language: &str,
) -> Result<ImportOutcome, ImportError> {
    let text = crate::records::read_utf8(source).map_err(|(_, m)| ImportError::Io(m))?;
    let numbered: Vec<(usize, &str)> = lexicon_lines(&text).collect();
    let results: Vec<(usize, Result<Decoded, LineProblem>)> = numbered
        .par_iter()
        .map(|&(n, raw)| {
            let decoded = LexiconLine::parse(raw)
                .map_err(LineProblem::from)
                .and_then(|line| {
                    let feats = spec.decode(&line.tag)?;
                    Ok(Decoded { line, feats })
                });
            (n, decoded)
        })
        .collect();

    let mut errors = Vec::new();
    let mut groups: Vec<((String, String), Vec<Decoded>)> = Vec::new();
    let mut index: HashMap<(String, String), usize> = HashMap::new();
    for (line, r) in results {
        match r {
            Ok(d) => {
                let cat = d
                    .feats
                    .get(CATEGORY_FEATURE)
                    .expect("decode always sets the category")
                    .to_string();
                let key = (d.line.lemma.clone(), cat);
                let i = *index.entry(key.clone()).or_insert_with(|| {
                    groups.push((key, Vec::new()));
                    groups.len() - 1
                });
                groups[i].1.push(d);
            }
            Err(problem) => errors.push(LineError { line, problem }),
        }
    }

    let mut lemma_counts: HashMap<String, usize> = HashMap::new();
    let mut entries = Vec::with_capacity(groups.len());
    for ((lemma, cat), members) in groups {
        let n = lemma_counts.entry(lemma.clone()).or_insert(0);
        *n += 1;
        entries.push(build_entry(&lemma, &cat, *n, &members).map_err(ImportError::Model)?);
    }
    let lexicon = Lexicon::new(language, FeatureStructure::new(), entries)
        .map_err(|e| ImportError::Model(e.to_string()))?;
    Ok(ImportOutcome {
        resource: LexicalResource::single(lexicon),
        errors,
        lines: numbered.len(),
    })
}

fn build_entry(lemma: &str, cat: &str, n: usize, members: &[Decoded]) -> Result<LexicalEntry, String> {
    let first = members[0].feats.without(CATEGORY_FEATURE);
    let mut shared = FeatureStructure::new();
    for (name, value) in first.iter() {
        if members.iter().all(|m| m.feats.get(name.as_str()) == Some(value)) {
            shared
                .insert(name.as_str(), value.as_str())
                .map_err(|e| e.to_string())?;
        }
    }

    let mut forms = Vec::with_capacity(members.len() + 1);
    forms.push(
        Form::new(
            FormType::Lemma,
            shared.clone(),
            vec![FormRepresentation::written(lemma).map_err(|e| e.to_string())?],
        )
        .map_err(|e| e.to_string())?,
    );
    for m in members {
        let mut own = FeatureStructure::new();
        for (name, value) in m.feats.iter() {
            if name.as_str() != CATEGORY_FEATURE && !shared.contains(name.as_str()) {
                own.insert(name.as_str(), value.as_str())
                    .map_err(|e| e.to_string())?;
            }
        }
        forms.push(
            Form::new(
                FormType::WordForm,
                own,
                vec![FormRepresentation::written(&m.line.form).map_err(|e| e.to_string())?],
            )
            .map_err(|e| e.to_string())?,
        );
    }
    let mut feats = FeatureStructure::new();
    feats.insert(PART_OF_SPEECH, cat).map_err(|e| e.to_string())?;
    LexicalEntry::new(format!("{lemma}_{n}"), feats, forms, vec![], vec![]).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{demo_registry, demo_tagset_de, demo_tagset_fr};

    fn fs(pairs: &[(&str, &str)]) -> FeatureStructure {
        FeatureStructure::build(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn single_line_lifts_everything() {
        let reg = demo_registry();
        let spec = demo_tagset_de(&reg);
        let res = import_multext("Hundes Hund Ncmsg\n".as_bytes(), &spec, &reg, "de").unwrap();
        let entry = &res.lexica()[0].entries()[0];
        assert_eq!(entry.id(), "Hund_1");
        assert_eq!(entry.feats(), &fs(&[("partOfSpeech", "noun")]));
        let lemma = &entry.forms()[0];
        assert_eq!(lemma.form_type(), FormType::Lemma);
        assert_eq!(lemma.representations()[0].written_form(), "Hund");
        assert_eq!(
            lemma.feats(),
            &fs(&[("type", "common"), ("gender", "masculine"), ("number", "singular"), ("case", "genitive")])
        );
        let wf = &entry.forms()[1];
        assert_eq!(wf.representations()[0].written_form(), "Hundes");
        assert!(wf.feats().is_empty());
    }

    #[test]
    fn championne_feature_placement() {
        let reg = demo_registry();
        let spec = demo_tagset_fr(&reg);
        let text = "championne championne Ncfs\nchampionnes championne Ncfp\n";
        let res = import_multext(text.as_bytes(), &spec, &reg, "fr").unwrap();
        let entries = res.lexica()[0].entries();
        assert_eq!(entries.len(), 1);
        let e = &entries[0];
        assert_eq!(e.id(), "championne_1");
        assert_eq!(e.forms()[0].feats(), &fs(&[("type", "common"), ("gender", "feminine")]));
        assert_eq!(e.forms()[1].feats(), &fs(&[("number", "singular")]));
        assert_eq!(e.forms()[2].feats(), &fs(&[("number", "plural")]));
        assert_eq!(e.forms()[2].representations()[0].written_form(), "championnes");
    }

    #[test]
    fn empty_input() {
        let reg = demo_registry();
        let spec = demo_tagset_de(&reg);
        let res = import_multext("# nothing\n\n".as_bytes(), &spec, &reg, "de").unwrap();
        assert_eq!(res.lexica().len(), 1);
        assert!(res.lexica()[0].entries().is_empty());
        assert_eq!(res.lexica()[0].language(), "de");
    }

    #[test]
    fn homographs_split_by_category() {
        let reg = demo_registry();
        let spec = demo_tagset_de(&reg);
        let text = "Laut Laut Ncmsn\nlaut laut Ap\nLaute Laut Ncmpn\nLaut Laut Sp\n";
        let res = import_multext(text.as_bytes(), &spec, &reg, "de").unwrap();
        let ids: Vec<_> = res.lexica()[0].entries().iter().map(|e| e.id().to_string()).collect();
        assert_eq!(ids, ["Laut_1", "laut_1", "Laut_2"]);
        let first = &res.lexica()[0].entries()[0];
        assert_eq!(first.forms()[0].feats(), &fs(&[("type", "common"), ("gender", "masculine"), ("case", "nominative")]));
    }

    #[test]
    fn errors_are_collected() {
        let reg = demo_registry();
        let spec = demo_tagset_de(&reg);
        let text = "a a Nc\nbad line\nb b Nz\nc c Ncm\n";
        let err = import_multext(text.as_bytes(), &spec, &reg, "de").unwrap_err();
        let ImportError::Lines(lines) = err else { panic!() };
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].line, 2);
        assert_eq!(lines[0].problem, LineProblem::Fields(FieldCount(2)));
        assert_eq!(lines[1].line, 3);
        assert_eq!(lines[1].problem, LineProblem::Codec(CodecError::UnknownCode { position: 1, code: 'z' }));

        let lenient = import_multext_lenient(text.as_bytes(), &spec, &reg, "de").unwrap();
        assert_eq!(lenient.errors.len(), 2);
        assert_eq!(crate::lmf::resource_stats(&lenient.resource).word_forms, 2);
        assert_eq!(lenient.to_string(), "entries=2 forms=2 errors=2");
    }
}
