//! Morphalou-style XML, driven entirely by a [`DialectMapping`].
//!
//! A document is either a full envelope (resource > lexicon > entries) or a
//! single bare entry, which is read as a one-lexicon resource of
//! undetermined language. The writer always emits the envelope.

use crate::feature::FeatureStructure;
use crate::lmf::{
    EntryRelation, Form, FormRepresentation, GlobalInformation, LexicalEntry, LexicalResource,
};
use crate::registry::Registry;

use super::mapping::{DialectMapping, ElementRole, RelationBinding};
use super::xml::Element;
use super::{
    check_attrs, decode_value, encode_value, finish_lexicon, insert_feat, leaf_text,
    not_expressible, strip_pointer, structural, DialectId, PendingEntry, SerializationError,
    UNDETERMINED_LANGUAGE,
};

const ID: &str = "xml:id";
const LANG: &str = "xml:lang";
const D: DialectId = DialectId::Morphalou;

struct Ctx<'a> {
    map: &'a DialectMapping,
    reg: &'a Registry,
}

impl Ctx<'_> {
    fn role(&self, el: &Element) -> Result<&ElementRole, SerializationError> {
        self.map
            .role(&el.name)
            .ok_or_else(|| SerializationError::UnknownElement(el.name.clone()))
    }

    fn element(&self, role: ElementRole) -> &str {
        self.map.element_for(&role).expect("checked when the dialect was built")
    }
}

pub(super) fn read(
    root: &Element,
    map: &DialectMapping,
    reg: &Registry,
) -> Result<LexicalResource, SerializationError> {
    let cx = Ctx { map, reg };
    match cx.role(root)? {
        ElementRole::Resource => {
            check_attrs(root, &[])?;
            let mut global = None;
            let mut lexica = Vec::new();
            for child in root.elements() {
                match cx.role(child)? {
                    ElementRole::GlobalInformation if global.is_none() && lexica.is_empty() => {
                        check_attrs(child, &[])?;
                        if let Some(e) = child.elements().next() {
                            return Err(SerializationError::UnknownElement(e.name.clone()));
                        }
                        global = Some(GlobalInformation::default());
                    }
                    ElementRole::Lexicon => {
                        lexica.push(read_lexicon(&cx, child, lexica.len() + 1)?);
                    }
                    _ => return Err(SerializationError::UnknownElement(child.name.clone())),
                }
            }
            LexicalResource::new(global.unwrap_or_default(), lexica).map_err(structural(&root.name))
        }
        ElementRole::Lexicon => Ok(LexicalResource::single(read_lexicon(&cx, root, 1)?)),
        ElementRole::Entry => {
            let entry = read_entry(&cx, root, "")?;
            let lex = finish_lexicon(
                UNDETERMINED_LANGUAGE.into(),
                FeatureStructure::new(),
                vec![entry],
                &root.name,
            )?;
            Ok(LexicalResource::single(lex))
        }
        _ => Err(SerializationError::UnknownElement(root.name.clone())),
    }
}

fn read_lexicon(
    cx: &Ctx,
    el: &Element,
    index: usize,
) -> Result<crate::lmf::Lexicon, SerializationError> {
    check_attrs(el, &[LANG])?;
    let loc = format!("{}[{index}]", el.name);
    let language = el.get_attr(LANG).unwrap_or(UNDETERMINED_LANGUAGE).to_string();
    let mut pending = Vec::new();
    for child in el.elements() {
        match cx.role(child)? {
            ElementRole::Entry => pending.push(read_entry(cx, child, &loc)?),
            _ => return Err(SerializationError::UnknownElement(child.name.clone())),
        }
    }
    finish_lexicon(language, FeatureStructure::new(), pending, &loc)
}

fn read_entry(cx: &Ctx, el: &Element, parent: &str) -> Result<PendingEntry, SerializationError> {
    check_attrs(el, &[ID])?;
    let id = el.get_attr(ID).map(str::to_string);
    let step = format!("{}[{}]", el.name, id.as_deref().unwrap_or("?"));
    let loc = if parent.is_empty() { step } else { format!("{parent}/{step}") };
    let mut entry = PendingEntry {
        id,
        location: loc.clone(),
        feats: FeatureStructure::new(),
        forms: Vec::new(),
        senses: Vec::new(),
        relations: Vec::new(),
    };
    for child in el.elements() {
        match cx.role(child)? {
            ElementRole::Feature(attr) => read_feature(cx, child, attr, &mut entry.feats, &loc)?,
            ElementRole::Relation(binding) => entry.relations.push(read_relation(child, binding)?),
            ElementRole::FormGroup => {
                check_attrs(child, &[])?;
                for f in child.elements() {
                    entry.forms.push(read_form(cx, f, &loc)?);
                }
            }
            ElementRole::Form(_) => entry.forms.push(read_form(cx, child, &loc)?),
            _ => return Err(SerializationError::UnknownElement(child.name.clone())),
        }
    }
    Ok(entry)
}

fn read_feature(
    cx: &Ctx,
    el: &Element,
    attr: &str,
    fs: &mut FeatureStructure,
    loc: &str,
) -> Result<(), SerializationError> {
    check_attrs(el, &[])?;
    let text = leaf_text(el)?;
    let value = decode_value(cx.reg, cx.map.scheme(), attr, &el.name, &text)?;
    insert_feat(fs, attr, &value, loc)
}

fn read_relation(el: &Element, binding: &RelationBinding) -> Result<EntryRelation, SerializationError> {
    let relation_type = match binding {
        RelationBinding::Fixed(t) => {
            check_attrs(el, &["target"])?;
            t.clone()
        }
        RelationBinding::TypeAttribute => {
            check_attrs(el, &["target", "type"])?;
            super::required_attr(el, "type")?.to_string()
        }
    };
    let target = strip_pointer(super::required_attr(el, "target")?);
    let label = leaf_text(el)?;
    Ok(EntryRelation {
        relation_type,
        target,
        label: (!label.is_empty()).then_some(label),
    })
}

fn read_form(cx: &Ctx, el: &Element, parent: &str) -> Result<Form, SerializationError> {
    let form_type = match cx.role(el)? {
        ElementRole::Form(t) => *t,
        _ => return Err(SerializationError::UnknownElement(el.name.clone())),
    };
    check_attrs(el, &[])?;
    let loc = format!("{parent}/{}", el.name);
    let mut feats = FeatureStructure::new();
    let mut reps = Vec::new();
    for child in el.elements() {
        match cx.role(child)? {
            ElementRole::Representation(attr) => {
                check_attrs(child, &[])?;
                let mut fs = FeatureStructure::new();
                insert_feat(&mut fs, attr, &leaf_text(child)?, &loc)?;
                reps.push(FormRepresentation::new(fs).map_err(structural(&loc))?);
            }
            ElementRole::Feature(attr) => read_feature(cx, child, attr, &mut feats, &loc)?,
            _ => return Err(SerializationError::UnknownElement(child.name.clone())),
        }
    }
    Form::new(form_type, feats, reps).map_err(structural(&loc))
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
    let mut root = Element::new(cx.element(ElementRole::Resource));
    for lex in res.lexica() {
        if !lex.feats().is_empty() {
            return Err(not_expressible(D, "lexicon features"));
        }
        let mut l = Element::new(cx.element(ElementRole::Lexicon)).attr(LANG, lex.language());
        for entry in lex.entries() {
            l.push(write_entry(&cx, entry)?);
        }
        root.push(l);
    }
    Ok(root)
}

fn feature_elements(cx: &Ctx, fs: &FeatureStructure, into: &mut Element) -> Result<(), SerializationError> {
    for (name, value) in fs.iter() {
        let elem = cx
            .map
            .feature_element(name.as_str())
            .ok_or_else(|| not_expressible(D, format!("no element for attribute {name}")))?;
        let text = encode_value(cx.reg, D, cx.map.scheme(), name.as_str(), value.as_str())?;
        into.push(Element::new(elem).with_text(text));
    }
    Ok(())
}

fn write_entry(cx: &Ctx, entry: &LexicalEntry) -> Result<Element, SerializationError> {
    if !entry.senses().is_empty() {
        return Err(not_expressible(D, format!("senses of entry {}", entry.id())));
    }
    let mut e = Element::new(cx.element(ElementRole::Entry)).attr(ID, entry.id());
    for rel in entry.relations() {
        let (name, typed) = cx
            .map
            .relation_element(&rel.relation_type)
            .ok_or_else(|| not_expressible(D, format!("relation type {}", rel.relation_type)))?;
        let mut r = Element::new(name);
        if typed {
            r = r.attr("type", &rel.relation_type);
        }
        r = r.attr("target", format!("#{}", rel.target));
        if let Some(label) = &rel.label {
            r = r.with_text(label);
        }
        e.push(r);
    }
    feature_elements(cx, entry.feats(), &mut e)?;

    let mut group = Element::new(cx.element(ElementRole::FormGroup));
    for form in entry.forms() {
        let fname = cx
            .map
            .element_for(&ElementRole::Form(form.form_type()))
            .ok_or_else(|| not_expressible(D, format!("{} forms", form.form_type())))?;
        let mut f = Element::new(fname);
        for rep in form.representations() {
            let mut fs_iter = rep.feats().iter();
            let (name, value) = fs_iter.next().expect("representation has writtenForm");
            if rep.feats().len() != 1 {
                return Err(not_expressible(D, "form representations with more than one feature"));
            }
            let rname = cx
                .map
                .element_for(&ElementRole::Representation(name.to_string()))
                .ok_or_else(|| not_expressible(D, format!("representation attribute {name}")))?;
            f.push(Element::new(rname).with_text(value.as_str()));
        }
        feature_elements(cx, form.feats(), &mut f)?;
        group.push(f);
    }
    e.push(group);
    Ok(e)
}
