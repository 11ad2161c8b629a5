//! Minimal XML element tree on top of quick-xml, plus a deterministic
//! pretty printer. DTDs and non-predefined entities are refused.

use quick_xml::escape::{escape, resolve_predefined_entity};
use quick_xml::events::Event;
use quick_xml::{Reader, XmlVersion};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Element(Element),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Node>,
}

impl Element {
    pub fn new(name: impl Into<String>) -> Self {
        Element {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn attr(mut self, name: &str, value: impl Into<String>) -> Self {
        self.attrs.push((name.to_string(), value.into()));
        self
    }

    pub fn child(mut self, el: Element) -> Self {
        self.children.push(Node::Element(el));
        self
    }

    pub fn push(&mut self, el: Element) {
        self.children.push(Node::Element(el));
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.children.push(Node::Text(text.into()));
        self
    }

    pub fn get_attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    /// Child elements, skipping text.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|n| match n {
            Node::Element(e) => Some(e),
            Node::Text(_) => None,
        })
    }

    /// Concatenated text of a leaf element; `None` if it has element children.
    pub fn text(&self) -> Option<String> {
        let mut out = String::new();
        for n in &self.children {
            match n {
                Node::Text(t) => out.push_str(t),
                Node::Element(_) => return None,
            }
        }
        Some(out)
    }

    /// Non-whitespace text directly inside an element that also has element
    /// children.
    pub fn has_mixed_content(&self) -> bool {
        self.elements().next().is_some()
            && self
                .children
                .iter()
                .any(|n| matches!(n, Node::Text(t) if !t.trim().is_empty()))
    }
}

fn xml_err(reader: &Reader<&[u8]>, msg: impl std::fmt::Display) -> String {
    format!("at byte {}: {msg}", reader.error_position())
}

/// Parses a complete document and returns its root element.
pub fn parse_document(text: &str) -> Result<Element, String> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().check_end_names = true;
    reader.config_mut().expand_empty_elements = false;

    let mut stack: Vec<Element> = Vec::new();
    let mut root: Option<Element> = None;

    let start = |e: &quick_xml::events::BytesStart, reader: &Reader<&[u8]>| -> Result<Element, String> {
        let name = e.name().as_ref().to_string();
        let mut el = Element::new(name);
        for a in e.attributes() {
            let a = a.map_err(|err| xml_err(reader, err))?;
            let key = a.key.as_ref().to_string();
            let value = a
                .normalized_value(XmlVersion::Implicit1_0)
                .map_err(|err| xml_err(reader, err))?
                .into_owned();
            el.attrs.push((key, value));
        }
        Ok(el)
    };

    fn append_text(stack: &mut [Element], text: &str, outside: &mut bool) {
        match stack.last_mut() {
            Some(top) => match top.children.last_mut() {
                Some(Node::Text(t)) => t.push_str(text),
                _ => top.children.push(Node::Text(text.to_string())),
            },
            None => {
                if !text.trim().is_empty() {
                    *outside = true;
                }
            }
        }
    }

    let mut text_outside = false;
    loop {
        let ev = reader.read_event().map_err(|e| xml_err(&reader, e))?;
        match ev {
            Event::Start(e) => {
                let el = start(&e, &reader)?;
                if root.is_some() && stack.is_empty() {
                    return Err(xml_err(&reader, "content after the root element"));
                }
                stack.push(el);
            }
            Event::Empty(e) => {
                let el = start(&e, &reader)?;
                match stack.last_mut() {
                    Some(top) => top.children.push(Node::Element(el)),
                    None if root.is_none() => root = Some(el),
                    None => return Err(xml_err(&reader, "content after the root element")),
                }
            }
            Event::End(_) => {
                let el = stack.pop().ok_or_else(|| xml_err(&reader, "unbalanced end tag"))?;
                match stack.last_mut() {
                    Some(top) => top.children.push(Node::Element(el)),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                let t = t.xml10_content();
                append_text(&mut stack, &t, &mut text_outside);
            }
            Event::CData(c) => {
                let t = c.into_inner().into_owned();
                append_text(&mut stack, &t, &mut text_outside);
            }
            Event::GeneralRef(r) => {
                let resolved = match r.resolve_char_ref().map_err(|e| xml_err(&reader, e))? {
                    Some(c) => c.to_string(),
                    None => {
                        let name = r.xml10_content();
                        resolve_predefined_entity(&name)
                            .ok_or_else(|| xml_err(&reader, format!("undefined entity &{name};")))?
                            .to_string()
                    }
                };
                append_text(&mut stack, &resolved, &mut text_outside);
            }
            Event::DocType(_) => return Err(xml_err(&reader, "DTD declarations are not accepted")),
            Event::Decl(_) | Event::Comment(_) | Event::PI(_) => {}
            Event::Eof => break,
        }
        if text_outside {
            return Err(xml_err(&reader, "text outside the root element"));
        }
    }
    if !stack.is_empty() {
        return Err(format!("unexpected end of document inside <{}>", stack[stack.len() - 1].name));
    }
    root.ok_or_else(|| "document has no root element".to_string())
}

/// Serializes `root` with an XML declaration, 2-space indentation and a
/// trailing newline. Leaf elements keep their text inline.
pub fn write_document(root: &Element) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    write_element(root, 0, &mut out);
    out
}

fn write_element(el: &Element, depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push('<');
    out.push_str(&el.name);
    for (k, v) in &el.attrs {
        out.push(' ');
        out.push_str(k);
        out.push_str("=\"");
        push_escaped(out, v, true);
        out.push('"');
    }
    if el.children.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push('>');
    match el.text() {
        Some(t) => push_escaped(out, &t, false),
        None => {
            out.push('\n');
            for child in el.elements() {
                write_element(child, depth + 1, out);
            }
            for _ in 0..depth {
                out.push_str("  ");
            }
        }
    }
    out.push_str("</");
    out.push_str(&el.name);
    out.push_str(">\n");
}

/// Escapes markup characters. Whitespace that a parser would normalize away
/// (tabs and newlines in attributes, carriage returns anywhere) becomes a
/// character reference.
fn push_escaped(out: &mut String, s: &str, in_attr: bool) {
    for piece in escape(s).split_inclusive(['\t', '\n', '\r']) {
        let (body, last) = match piece.chars().last() {
            Some(c @ ('\t' | '\n' | '\r')) => (&piece[..piece.len() - 1], Some(c)),
            _ => (piece, None),
        };
        out.push_str(body);
        match last {
            Some('\r') => out.push_str("&#13;"),
            Some('\t') if in_attr => out.push_str("&#9;"),
            Some('\n') if in_attr => out.push_str("&#10;"),
            Some(c) => out.push(c),
            None => {}
        }
    }
}
