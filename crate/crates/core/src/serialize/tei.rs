//! TEI dictionary subset.
//!
//! Structural elements are fixed (`TEI`, `text`, `body`, `entry`, `form`,
//! `orth`, `gramGrp`, `sense`, `xr`, `ref`); grammatical and sense-level
//! elements come from the mapping. Form types are restricted to `lemma`,
//! `inflected` and `stem`, and forms may nest one level deep to group
//! inflected forms under a lemma. Nested forms are flattened into sibling
//! forms on read.

use std::fmt;

use crate::feature::FeatureStructure;
use crate::lmf::{EntryRelation, Form, FormRepresentation, FormType, LexicalResource, Sense, WRITTEN_FORM};
use crate::registry::Registry;

use super::mapping::DialectMapping;
use super::xml::Element;
use super::{
    check_attrs, decode_value, encode_value, finish_lexicon, insert_feat, leaf_text,
    not_expressible, required_attr, strip_pointer, structural, DialectId, PendingEntry,
    SerializationError, UNDETERMINED_LANGUAGE,
};

pub const TEI_NAMESPACE: &str = "http://www.tei-c.org/ns/1.0";

const ID: &str = "xml:id";
const LANG: &str = "xml:lang";
const D: DialectId = DialectId::Tei;
const MAX_FORM_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintViolation {
    /// Forms nested deeper than two levels; carries the depth reached.
    RecursionDepth(usize),
    IllegalTypeValue(String),
    MissingType,
    GramGrpOutsideForm,
    UnknownGrammaticalElement(String),
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintViolation::RecursionDepth(d) => {
                write!(f, "form nested {d} deep (at most {MAX_FORM_DEPTH} allowed)")
            }
            ConstraintViolation::IllegalTypeValue(v) => write!(f, "illegal form type {v:?}"),
            ConstraintViolation::MissingType => f.write_str("form without type"),
            ConstraintViolation::GramGrpOutsideForm => f.write_str("gramGrp outside form"),
            ConstraintViolation::UnknownGrammaticalElement(n) => {
                write!(f, "unknown grammatical element <{n}>")
            }
        }
    }
}

fn tei_type(t: FormType) -> &'static str {
    match t {
        FormType::Lemma => "lemma",
        FormType::WordForm => "inflected",
        FormType::Stem => "stem",
    }
}

fn parse_tei_type(s: &str) -> Option<FormType> {
    match s {
        "lemma" => Some(FormType::Lemma),
        "inflected" => Some(FormType::WordForm),
        "stem" => Some(FormType::Stem),
        _ => None,
    }
}

/// Checks a parsed `entry` element against the TEI subset restrictions.
pub fn tei_constraints_check(entry: &Element, map: &DialectMapping) -> Vec<ConstraintViolation> {
    let mut out = Vec::new();
    walk(entry, 0, false, map, &mut out);
    out
}

/// Returns the deepest form nesting found under `el`.
fn walk(
    el: &Element,
    form_depth: usize,
    in_form: bool,
    map: &DialectMapping,
    out: &mut Vec<ConstraintViolation>,
) -> usize {
    let mut deepest = form_depth;
    for child in el.elements() {
        match child.name.as_str() {
            "form" => {
                match child.get_attr("type") {
                    None => out.push(ConstraintViolation::MissingType),
                    Some(t) if parse_tei_type(t).is_none() => {
                        out.push(ConstraintViolation::IllegalTypeValue(t.to_string()))
                    }
                    Some(_) => {}
                }
                let d = walk(child, form_depth + 1, true, map, out);
                if form_depth == 0 && d > MAX_FORM_DEPTH {
                    out.push(ConstraintViolation::RecursionDepth(d));
                }
                deepest = deepest.max(d);
            }
            "gramGrp" => {
                if !in_form {
                    out.push(ConstraintViolation::GramGrpOutsideForm);
                }
                for g in child.elements() {
                    if map.feature_attribute(&g.name).is_none() {
                        out.push(ConstraintViolation::UnknownGrammaticalElement(g.name.clone()));
                    }
                }
            }
            _ => {
                deepest = deepest.max(walk(child, form_depth, false, map, out));
            }
        }
    }
    deepest
}

struct Ctx<'a> {
    map: &'a DialectMapping,
    reg: &'a Registry,
}

pub(super) fn read(
    root: &Element,
    map: &DialectMapping,
    reg: &Registry,
) -> Result<LexicalResource, SerializationError> {
    let cx = Ctx { map, reg };
    let (language, entries): (String, Vec<&Element>) = match root.name.as_str() {
        "TEI" => {
            check_attrs(root, &[])?;
            let mut texts = root.elements();
            let text = match (texts.next(), texts.next()) {
                (Some(t), None) if t.name == "text" => t,
                (Some(t), _) if t.name != "text" => {
                    return Err(SerializationError::UnknownElement(t.name.clone()))
                }
                _ => {
                    return Err(SerializationError::Malformed {
                        location: "TEI".into(),
                        detail: "expected exactly one <text>".into(),
                    })
                }
            };
            check_attrs(text, &[LANG])?;
            let language = text.get_attr(LANG).unwrap_or(UNDETERMINED_LANGUAGE).to_string();
            let mut entries = Vec::new();
            for body in text.elements() {
                if body.name != "body" {
                    return Err(SerializationError::UnknownElement(body.name.clone()));
                }
                check_attrs(body, &[])?;
                for e in body.elements() {
                    if e.name != "entry" {
                        return Err(SerializationError::UnknownElement(e.name.clone()));
                    }
                    entries.push(e);
                }
            }
            (language, entries)
        }
        "entry" => (UNDETERMINED_LANGUAGE.to_string(), vec![root]),
        _ => return Err(SerializationError::UnknownElement(root.name.clone())),
    };

    let violations: Vec<_> = entries
        .iter()
        .flat_map(|e| tei_constraints_check(e, map))
        .collect();
    if !violations.is_empty() {
        return Err(SerializationError::Constraint(violations));
    }

    let pending = entries
        .iter()
        .enumerate()
        .map(|(i, e)| read_entry(&cx, e, i + 1))
        .collect::<Result<Vec<_>, _>>()?;
    let lex = finish_lexicon(language, FeatureStructure::new(), pending, "body")?;
    Ok(LexicalResource::single(lex))
}

fn read_entry(cx: &Ctx, el: &Element, index: usize) -> Result<PendingEntry, SerializationError> {
    check_attrs(el, &[ID])?;
    let id = el.get_attr(ID).map(str::to_string);
    let loc = format!("entry[{}]", id.clone().unwrap_or_else(|| index.to_string()));
    let mut entry = PendingEntry {
        id,
        location: loc.clone(),
        feats: FeatureStructure::new(),
        forms: Vec::new(),
        senses: Vec::new(),
        relations: Vec::new(),
    };
    for child in el.elements() {
        match child.name.as_str() {
            "form" => read_form(cx, child, &loc, &mut entry.forms)?,
            "sense" => entry.senses.push(read_sense(cx, child, &loc)?),
            "xr" => entry.relations.push(read_xr(child)?),
            _ => return Err(SerializationError::UnknownElement(child.name.clone())),
        }
    }
    Ok(entry)
}

fn read_feature(cx: &Ctx, el: &Element, fs: &mut FeatureStructure, loc: &str) -> Result<(), SerializationError> {
    let attr = cx
        .map
        .feature_attribute(&el.name)
        .ok_or_else(|| SerializationError::UnknownElement(el.name.clone()))?;
    check_attrs(el, &[])?;
    let text = leaf_text(el)?;
    let value = decode_value(cx.reg, cx.map.scheme(), attr, &el.name, &text)?;
    insert_feat(fs, attr, &value, loc)
}

/// Reads a form and appends it, followed by its nested forms, to `out`.
fn read_form(cx: &Ctx, el: &Element, parent: &str, out: &mut Vec<Form>) -> Result<(), SerializationError> {
    check_attrs(el, &["type"])?;
    let form_type = parse_tei_type(required_attr(el, "type")?)
        .expect("type checked by tei_constraints_check");
    let loc = format!("{parent}/form[{}]", out.len() + 1);
    let mut feats = FeatureStructure::new();
    let mut reps = Vec::new();
    let mut nested = Vec::new();
    for child in el.elements() {
        match child.name.as_str() {
            "orth" => {
                check_attrs(child, &[])?;
                let mut fs = FeatureStructure::new();
                insert_feat(&mut fs, WRITTEN_FORM, &leaf_text(child)?, &loc)?;
                reps.push(FormRepresentation::new(fs).map_err(structural(&loc))?);
            }
            "gramGrp" => {
                check_attrs(child, &[])?;
                for g in child.elements() {
                    read_feature(cx, g, &mut feats, &loc)?;
                }
            }
            "form" => nested.push(child),
            _ => read_feature(cx, child, &mut feats, &loc)?,
        }
    }
    out.push(Form::new(form_type, feats, reps).map_err(structural(&loc))?);
    for n in nested {
        read_form(cx, n, parent, out)?;
    }
    Ok(())
}

fn read_sense(cx: &Ctx, el: &Element, parent: &str) -> Result<Sense, SerializationError> {
    check_attrs(el, &[ID])?;
    let loc = format!("{parent}/sense");
    let mut sense = Sense {
        id: el.get_attr(ID).map(str::to_string),
        ..Default::default()
    };
    for child in el.elements() {
        match child.name.as_str() {
            "sense" => sense.subsenses.push(read_sense(cx, child, &loc)?),
            _ => read_feature(cx, child, &mut sense.feats, &loc)?,
        }
    }
    Ok(sense)
}

fn read_xr(el: &Element) -> Result<EntryRelation, SerializationError> {
    check_attrs(el, &["type"])?;
    let relation_type = required_attr(el, "type")?.to_string();
    let mut refs = el.elements();
    let r = match (refs.next(), refs.next()) {
        (Some(r), None) if r.name == "ref" => r,
        (Some(r), None) => return Err(SerializationError::UnknownElement(r.name.clone())),
        _ => {
            return Err(SerializationError::Malformed {
                location: "xr".into(),
                detail: "expected exactly one <ref>".into(),
            })
        }
    };
    check_attrs(r, &["target"])?;
    let label = leaf_text(r)?;
    Ok(EntryRelation {
        relation_type,
        target: strip_pointer(required_attr(r, "target")?),
        label: (!label.is_empty()).then_some(label),
    })
}

fn feature_elements(cx: &Ctx, fs: &FeatureStructure, into: &mut Element) -> Result<(), SerializationError> {
    for (name, value) in fs.iter() {
        let elem = cx
            .map
            .feature_element(name.as_str())
            .ok_or_else(|| not_expressible(D, format!("no TEI element for attribute {name}")))?;
        let text = encode_value(cx.reg, D, cx.map.scheme(), name.as_str(), value.as_str())?;
        into.push(Element::new(elem).with_text(text));
    }
    Ok(())
}

pub(super) fn write(
    res: &LexicalResource,
    map: &DialectMapping,
    reg: &Registry,
) -> Result<Element, SerializationError> {
    let cx = Ctx { map, reg };
    if !res.global().feats.is_empty() {
        return Err(not_expressible(D, "global information features"));
    }
    let [lex] = res.lexica() else {
        return Err(not_expressible(D, "more than one lexicon"));
    };
    if !lex.feats().is_empty() {
        return Err(not_expressible(D, "lexicon features"));
    }
    let mut body = Element::new("body");
    for entry in lex.entries() {
        if !entry.feats().is_empty() {
            return Err(not_expressible(
                D,
                format!("entry-level features of {} (gramGrp is only allowed inside form)", entry.id()),
            ));
        }
        let mut e = Element::new("entry").attr(ID, entry.id());
        for form in entry.forms() {
            let mut f = Element::new("form").attr("type", tei_type(form.form_type()));
            for rep in form.representations() {
                if rep.feats().len() != 1 {
                    return Err(not_expressible(D, "form representations with more than one feature"));
                }
                f.push(Element::new("orth").with_text(rep.written_form()));
            }
            if form.form_type() == FormType::Lemma {
                if !form.feats().is_empty() {
                    let mut g = Element::new("gramGrp");
                    feature_elements(&cx, form.feats(), &mut g)?;
                    f.push(g);
                }
            } else {
                feature_elements(&cx, form.feats(), &mut f)?;
            }
            e.push(f);
        }
        for rel in entry.relations() {
            let (name, typed) = cx
                .map
                .relation_element(&rel.relation_type)
                .ok_or_else(|| not_expressible(D, format!("relation type {}", rel.relation_type)))?;
            if name != "xr" || !typed {
                return Err(not_expressible(D, "relations must map to xr/@type"));
            }
            let mut r = Element::new("ref").attr("target", format!("#{}", rel.target));
            if let Some(label) = &rel.label {
                r = r.with_text(label);
            }
            e.push(Element::new("xr").attr("type", &rel.relation_type).child(r));
        }
        for sense in entry.senses() {
            e.push(write_sense(&cx, sense)?);
        }
        body.push(e);
    }
    Ok(Element::new("TEI")
        .attr("xmlns", TEI_NAMESPACE)
        .child(Element::new("text").attr(LANG, lex.language()).child(body)))
}

fn write_sense(cx: &Ctx, sense: &Sense) -> Result<Element, SerializationError> {
    let mut s = Element::new("sense");
    if let Some(id) = &sense.id {
        s = s.attr(ID, id);
    }
    feature_elements(cx, &sense.feats, &mut s)?;
    for sub in &sense.subsenses {
        s.push(write_sense(cx, sub)?);
    }
    Ok(s)
}
