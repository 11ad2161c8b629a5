//! Canonical LMF XML.
//!
//! ```text
//! LexicalResource
//!   GlobalInformation        feat*
//!   Lexicon @language        feat*, LexicalEntry*
//!     LexicalEntry @id       feat*, Form+, Sense*, Relation*
//!       Form @type           feat*, FormRepresentation+
//!         FormRepresentation feat+
//!       Sense @id?           feat*, Sense*
//!       Relation @type @target @label?
//! feat @att @val
//! ```

use crate::feature::FeatureStructure;
use crate::lmf::{
    EntryRelation, Form, FormRepresentation, FormType, GlobalInformation, LexicalEntry,
    LexicalResource, Lexicon, Sense,
};

use super::xml::Element;
use super::{
    check_attrs, finish_lexicon, insert_feat, required_attr, structural, PendingEntry,
    SerializationError,
};

const FEAT: &str = "feat";

fn unknown(el: &Element) -> SerializationError {
    SerializationError::UnknownElement(el.name.clone())
}

fn read_feat(el: &Element, fs: &mut FeatureStructure, location: &str) -> Result<(), SerializationError> {
    check_attrs(el, &["att", "val"])?;
    if el.elements().next().is_some() {
        return Err(SerializationError::Malformed {
            location: location.to_string(),
            detail: "feat has child elements".into(),
        });
    }
    insert_feat(fs, required_attr(el, "att")?, required_attr(el, "val")?, location)
}

/// Reads an element made only of `feat` children.
fn read_feats_only(el: &Element, location: &str) -> Result<FeatureStructure, SerializationError> {
    let mut fs = FeatureStructure::new();
    for child in el.elements() {
        if child.name != FEAT {
            return Err(unknown(child));
        }
        read_feat(child, &mut fs, location)?;
    }
    Ok(fs)
}

pub(super) fn read(root: &Element) -> Result<LexicalResource, SerializationError> {
    if root.name != "LexicalResource" {
        return Err(unknown(root));
    }
    check_attrs(root, &[])?;
    let mut global = None;
    let mut lexica = Vec::new();
    for child in root.elements() {
        match child.name.as_str() {
            "GlobalInformation" if global.is_none() => {
                check_attrs(child, &[])?;
                global = Some(GlobalInformation {
                    feats: read_feats_only(child, "GlobalInformation")?,
                });
            }
            "Lexicon" => lexica.push(read_lexicon(child, lexica.len() + 1)?),
            _ => return Err(unknown(child)),
        }
    }
    LexicalResource::new(global.unwrap_or_default(), lexica).map_err(structural("LexicalResource"))
}

fn read_lexicon(el: &Element, index: usize) -> Result<Lexicon, SerializationError> {
    check_attrs(el, &["language"])?;
    let loc = format!("Lexicon[{index}]");
    let language = required_attr(el, "language")?.to_string();
    let mut feats = FeatureStructure::new();
    let mut pending = Vec::new();
    for child in el.elements() {
        match child.name.as_str() {
            FEAT => read_feat(child, &mut feats, &loc)?,
            "LexicalEntry" => pending.push(read_entry(child, &loc)?),
            _ => return Err(unknown(child)),
        }
    }
    finish_lexicon(language, feats, pending, &loc)
}

fn read_entry(el: &Element, parent: &str) -> Result<PendingEntry, SerializationError> {
    check_attrs(el, &["id"])?;
    let id = required_attr(el, "id")?.to_string();
    let loc = format!("{parent}/LexicalEntry[{id}]");
    let mut entry = PendingEntry {
        id: Some(id),
        location: loc.clone(),
        feats: FeatureStructure::new(),
        forms: Vec::new(),
        senses: Vec::new(),
        relations: Vec::new(),
    };
    for child in el.elements() {
        match child.name.as_str() {
            FEAT => read_feat(child, &mut entry.feats, &loc)?,
            "Form" => entry.forms.push(read_form(child, &loc)?),
            "Sense" => entry.senses.push(read_sense(child, &loc)?),
            "Relation" => {
                check_attrs(child, &["type", "target", "label"])?;
                if child.elements().next().is_some() {
                    return Err(unknown(child.elements().next().unwrap()));
                }
                entry.relations.push(EntryRelation {
                    relation_type: required_attr(child, "type")?.to_string(),
                    target: required_attr(child, "target")?.to_string(),
                    label: child.get_attr("label").map(str::to_string),
                });
            }
            _ => return Err(unknown(child)),
        }
    }
    Ok(entry)
}

fn read_form(el: &Element, parent: &str) -> Result<Form, SerializationError> {
    check_attrs(el, &["type"])?;
    let form_type: FormType = required_attr(el, "type")?
        .parse()
        .map_err(|detail| SerializationError::Malformed {
            location: format!("{parent}/Form"),
            detail,
        })?;
    let loc = format!("{parent}/Form");
    let mut feats = FeatureStructure::new();
    let mut reps = Vec::new();
    for child in el.elements() {
        match child.name.as_str() {
            FEAT => read_feat(child, &mut feats, &loc)?,
            "FormRepresentation" => {
                check_attrs(child, &[])?;
                let rloc = format!("{loc}/FormRepresentation");
                let fs = read_feats_only(child, &rloc)?;
                reps.push(FormRepresentation::new(fs).map_err(structural(&rloc))?);
            }
            _ => return Err(unknown(child)),
        }
    }
    Form::new(form_type, feats, reps).map_err(structural(&loc))
}

fn read_sense(el: &Element, parent: &str) -> Result<Sense, SerializationError> {
    check_attrs(el, &["id"])?;
    let loc = format!("{parent}/Sense");
    let mut sense = Sense {
        id: el.get_attr("id").map(str::to_string),
        ..Default::default()
    };
    for child in el.elements() {
        match child.name.as_str() {
            FEAT => read_feat(child, &mut sense.feats, &loc)?,
            "Sense" => sense.subsenses.push(read_sense(child, &loc)?),
            _ => return Err(unknown(child)),
        }
    }
    Ok(sense)
}

fn feats_into(el: &mut Element, fs: &FeatureStructure) {
    for (n, v) in fs.iter() {
        el.push(Element::new(FEAT).attr("att", n.as_str()).attr("val", v.as_str()));
    }
}

pub(super) fn write(res: &LexicalResource) -> Element {
    let mut root = Element::new("LexicalResource");
    let mut global = Element::new("GlobalInformation");
    feats_into(&mut global, &res.global().feats);
    root.push(global);
    for lex in res.lexica() {
        let mut l = Element::new("Lexicon").attr("language", lex.language());
        feats_into(&mut l, lex.feats());
        for entry in lex.entries() {
            l.push(write_entry(entry));
        }
        root.push(l);
    }
    root
}

fn write_entry(entry: &LexicalEntry) -> Element {
    let mut e = Element::new("LexicalEntry").attr("id", entry.id());
    feats_into(&mut e, entry.feats());
    for form in entry.forms() {
        let mut f = Element::new("Form").attr("type", form.form_type().as_str());
        feats_into(&mut f, form.feats());
        for rep in form.representations() {
            let mut r = Element::new("FormRepresentation");
            feats_into(&mut r, rep.feats());
            f.push(r);
        }
        e.push(f);
    }
    for sense in entry.senses() {
        e.push(write_sense(sense));
    }
    for rel in entry.relations() {
        let mut r = Element::new("Relation")
            .attr("type", &rel.relation_type)
            .attr("target", &rel.target);
        if let Some(label) = &rel.label {
            r = r.attr("label", label);
        }
        e.push(r);
    }
    e
}

fn write_sense(sense: &Sense) -> Element {
    let mut s = Element::new("Sense");
    if let Some(id) = &sense.id {
        s = s.attr("id", id);
    }
    feats_into(&mut s, &sense.feats);
    for sub in &sense.subsenses {
        s.push(write_sense(sub));
    }
    s
}
