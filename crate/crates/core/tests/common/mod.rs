//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use lexkit::msd::CATEGORY_FEATURE;
use lexkit::serialize::ElementRole;
use lexkit::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_bytes(name: &str) -> Vec<u8> {
    std::fs::read(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fs(pairs: &[(&str, &str)]) -> FeatureStructure {
    FeatureStructure::build(pairs.iter().copied()).unwrap()
}

/// Mixes markup characters, whitespace, combining sequences and non-Latin
/// script so the writers' escaping gets exercised.
const PIECES: &[&str] = &[
    "a", "b", "x", "é", "e\u{301}", "ß", "字", "&", "<", ">", "\"", "'", " ", "\t", "\n", "\r",
    "-", "1",
];
const NAME_PIECES: &[&str] = &["a", "b", "n", "é", "ß", "字", "&", "<", "_", "-", "1"];

fn text(rng: &mut StdRng, pieces: &[&str]) -> String {
    let n = rng.gen_range(1..=6);
    (0..n).map(|_| *pieces.choose(rng).unwrap()).collect()
}

pub fn random_feats(rng: &mut StdRng, max: usize) -> FeatureStructure {
    let mut out = FeatureStructure::new();
    for _ in 0..rng.gen_range(0..=max) {
        let name = text(rng, NAME_PIECES);
        if !out.contains(&name) {
            out.insert(name.as_str(), text(rng, PIECES).as_str()).unwrap();
        }
    }
    out
}

pub fn random_sense(rng: &mut StdRng, depth: usize, feats: &mut dyn FnMut(&mut StdRng) -> FeatureStructure) -> Sense {
    let subsenses = if depth > 1 {
        (0..rng.gen_range(0..=2))
            .map(|_| random_sense(rng, depth - 1, feats))
            .collect()
    } else {
        Vec::new()
    };
    Sense {
        id: rng.gen_bool(0.5).then(|| format!("s{}", rng.gen_range(0..1000))),
        feats: feats(rng),
        subsenses,
    }
}

fn random_forms(rng: &mut StdRng, feats: &mut dyn FnMut(&mut StdRng) -> FeatureStructure, extra_rep_feats: bool) -> Vec<Form> {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|i| {
            let form_type = match (i, rng.gen_range(0..3)) {
                (0, 0) => FormType::Lemma,
                (_, 1) => FormType::Stem,
                _ => FormType::WordForm,
            };
            let reps = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let mut r = if extra_rep_feats {
                        random_feats(rng, 2).without("writtenForm")
                    } else {
                        FeatureStructure::new()
                    };
                    r.insert("writtenForm", text(rng, PIECES).as_str()).unwrap();
                    FormRepresentation::new(r).unwrap()
                })
                .collect();
            Form::new(form_type, feats(rng), reps).unwrap()
        })
        .collect()
}

fn random_label(rng: &mut StdRng) -> Option<String> {
    rng.gen_bool(0.5).then(|| text(rng, PIECES))
}

/// Arbitrary valid resource for the canonical format: up to `max_entries`
/// entries per lexicon and sense trees up to `max_depth` levels.
pub fn random_resource(rng: &mut StdRng, max_entries: usize, max_depth: usize) -> LexicalResource {
    let mut next_id = 0;
    let lexica = (0..rng.gen_range(1..=2))
        .map(|_| {
            let entries = (0..rng.gen_range(0..=max_entries))
                .map(|_| {
                    next_id += 1;
                    let id = format!("e{next_id}");
                    let forms = random_forms(rng, &mut |r| random_feats(r, 2), true);
                    let senses = (0..rng.gen_range(0..=2))
                        .map(|_| {
                            let depth = rng.gen_range(1..=max_depth);
                            random_sense(rng, depth, &mut |r| random_feats(r, 2))
                        })
                        .collect();
                    let relations = (0..rng.gen_range(0..=2))
                        .map(|_| EntryRelation {
                            relation_type: text(rng, NAME_PIECES),
                            target: format!("e{}", rng.gen_range(1..=next_id + 2)),
                            label: random_label(rng),
                        })
                        .collect();
                    LexicalEntry::new(id, random_feats(rng, 2), forms, senses, relations).unwrap()
                })
                .collect();
            let language = ["fr", "de", "und"].choose(rng).unwrap().to_string();
            Lexicon::new(language, random_feats(rng, 2), entries).unwrap()
        })
        .collect();
    LexicalResource::new(GlobalInformation { feats: random_feats(rng, 2) }, lexica).unwrap()
}

/// Registered (attribute, values) pairs that `dialect` has a feature element
/// for, with the values taken from the universal domain.
pub fn mapped_domains(dialect: &Dialect, reg: &Registry) -> Vec<(String, Vec<String>)> {
    let map = dialect.mapping().expect("mapped dialect");
    let mut out = Vec::new();
    for (_, role) in map.rules() {
        if let ElementRole::Feature(attr) = role {
            if let Some(d) = reg.applicable_domain(attr, None) {
                out.push((attr.clone(), d.values.clone()));
            }
        }
    }
    out.sort();
    out
}

fn mapped_feats(rng: &mut StdRng, domains: &[(String, Vec<String>)], max: usize) -> FeatureStructure {
    let mut out = FeatureStructure::new();
    for _ in 0..rng.gen_range(0..=max) {
        let (attr, values) = domains.choose(rng).unwrap();
        if !out.contains(attr) {
            out.insert(attr.as_str(), values.choose(rng).unwrap().as_str()).unwrap();
        }
    }
    out
}

/// Random resource restricted to what Morphalou or TEI can express: one
/// lexicon, registered feature values, only writtenForm on representations.
/// Morphalou gets entry features and no senses; TEI gets senses and no
/// entry features.
pub fn random_dialect_resource(rng: &mut StdRng, dialect: &Dialect, reg: &Registry, max_entries: usize) -> LexicalResource {
    let domains = mapped_domains(dialect, reg);
    let tei = dialect.id() == DialectId::Tei;
    let entries = (1..=rng.gen_range(0..=max_entries))
        .map(|i| {
            let forms = random_forms(rng, &mut |r| mapped_feats(r, &domains, 3), false);
            let senses = if tei {
                (0..rng.gen_range(0..=2))
                    .map(|_| {
                        let depth = rng.gen_range(1..=3);
                        random_sense(rng, depth, &mut |r| {
                            let mut f = mapped_feats(r, &domains, 1);
                            if r.gen_bool(0.5) {
                                f.insert("definition", text(r, PIECES).as_str()).unwrap();
                            }
                            f
                        })
                    })
                    .collect()
            } else {
                Vec::new()
            };
            let relations = (0..rng.gen_range(0..=1))
                .map(|_| EntryRelation {
                    relation_type: "feminineVariantOf".into(),
                    target: format!("e{}", rng.gen_range(1..=max_entries + 1)),
                    label: random_label(rng),
                })
                .collect();
            let feats = if tei { FeatureStructure::new() } else { mapped_feats(rng, &domains, 2) };
            LexicalEntry::new(format!("e{i}"), feats, forms, senses, relations).unwrap()
        })
        .collect();
    let language = ["fr", "de"].choose(rng).unwrap().to_string();
    LexicalResource::single(Lexicon::new(language, FeatureStructure::new(), entries).unwrap())
}

/// Counts senses by walking the trees with an explicit stack.
pub fn brute_force_sense_count(res: &LexicalResource) -> usize {
    let mut stack: Vec<&Sense> = res.entries().flat_map(|e| e.senses()).collect();
    let mut n = 0;
    while let Some(s) = stack.pop() {
        n += 1;
        stack.extend(s.subsenses.iter());
    }
    n
}

const LEMMAS: &[&str] = &[
    "Hund", "Katze", "laufen", "gut", "in", "Haus", "Laut", "laut", "Mann", "Frau", "gehen", "alt",
];

/// Random full-form lexicon lines over the tags of `spec`.
pub fn random_lexicon_lines(rng: &mut StdRng, spec: &TagsetSpec, n: usize) -> Vec<String> {
    let tags = spec.all_tags();
    (0..n)
        .map(|_| {
            let lemma = LEMMAS.choose(rng).unwrap();
            let form = format!("{lemma}{}", ["", "e", "es", "en", "er", "s"].choose(rng).unwrap());
            format!("{form}\t{lemma}\t{}", tags.choose(rng).unwrap())
        })
        .collect()
}

/// Checks that an imported resource reproduces every input line: the
/// entry category, lemma-form features and the line's word-form features
/// merge back to the decoded tag, and word forms match lines one to one.
/// Returns a description of the first mismatch.
pub fn import_is_lossless(res: &LexicalResource, lines: &[String], spec: &TagsetSpec) -> Result<(), String> {
    let entries: Vec<&LexicalEntry> = res.entries().collect();
    let word_forms: usize = entries
        .iter()
        .flat_map(|e| e.forms())
        .filter(|f| f.form_type() == FormType::WordForm)
        .count();
    if word_forms != lines.len() {
        return Err(format!("{word_forms} word forms for {} lines", lines.len()));
    }
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    for (i, raw) in lines.iter().enumerate() {
        let line = LexiconLine::parse(raw).map_err(|e| format!("line {i}: {e}"))?;
        let decoded = spec.decode(&line.tag).map_err(|e| format!("line {i}: {e}"))?;
        let cat = decoded.get(CATEGORY_FEATURE).unwrap().to_string();
        let matching: Vec<&&LexicalEntry> = entries
            .iter()
            .filter(|e| {
                e.feats().get("partOfSpeech").map(|v| v.as_str()) == Some(cat.as_str())
                    && e.lemma().map(|l| l.representations()[0].written_form()) == Some(line.lemma.as_str())
            })
            .collect();
        let [entry] = matching.as_slice() else {
            return Err(format!("line {i}: {} entries for ({}, {cat})", matching.len(), line.lemma));
        };
        let k = seen.entry((line.lemma.clone(), cat.clone())).or_insert(0);
        let wf = entry
            .forms()
            .iter()
            .filter(|f| f.form_type() == FormType::WordForm)
            .nth(*k)
            .ok_or_else(|| format!("line {i}: missing word form"))?;
        *k += 1;
        if wf.representations()[0].written_form() != line.form {
            return Err(format!("line {i}: form {} vs {}", wf.representations()[0].written_form(), line.form));
        }
        let rebuilt = fs(&[(CATEGORY_FEATURE, cat.as_str())])
            .merge(entry.lemma().unwrap().feats())
            .and_then(|m| m.merge(wf.feats()))
            .map_err(|e| format!("line {i}: {e}"))?;
        if rebuilt != decoded {
            return Err(format!("line {i}: rebuilt {rebuilt} vs decoded {decoded}"));
        }
    }
    Ok(())
}

/// Every representation must come back from a lookup on its own written
/// form. Duplicate surface forms within one entry are matched by count.
pub fn lookup_is_complete(res: &LexicalResource) -> Result<(), String> {
    let mut expected: HashMap<(usize, String, FormType, String), usize> = HashMap::new();
    for (li, lex) in res.lexica().iter().enumerate() {
        for e in lex.entries() {
            for f in e.forms() {
                for r in f.representations() {
                    *expected
                        .entry((li, e.id().to_string(), f.form_type(), r.written_form().to_string()))
                        .or_default() += 1;
                }
            }
        }
    }
    for ((li, id, ft, surface), n) in expected {
        let found = lookup_form(res, &surface, None)
            .iter()
            .filter(|h| h.lexicon == li && h.entry_id == id && h.form_type == ft)
            .count();
        if found < n {
            return Err(format!("{surface:?} in {id}: {found} of {n} hits"));
        }
    }
    Ok(())
}
