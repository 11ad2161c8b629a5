//! Line-oriented TAB-separated record files shared by the registry, tagset
//! and dialect mapping loaders.

use std::io::Read;

/// One non-comment, non-blank line split on TAB. `line` is 1-based.
#[derive(Debug)]
pub(crate) struct Record<'a> {
    pub line: usize,
    pub fields: Vec<&'a str>,
}

impl Record<'_> {
    pub fn kind(&self) -> &str {
        self.fields[0]
    }
}

pub(crate) fn records(text: &str) -> impl Iterator<Item = Record<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            return None;
        }
        Some(Record {
            line: i + 1,
            fields: raw.split('\t').map(str::trim).collect(),
        })
    })
}

/// Reads a whole source as UTF-8. The error carries the 1-based line of the
/// first invalid byte, or 0 for I/O failures.
pub(crate) fn read_utf8(mut source: impl Read) -> Result<String, (usize, String)> {
    let mut bytes = Vec::new();
    source
        .read_to_end(&mut bytes)
        .map_err(|e| (0, e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| {
        let valid = e.utf8_error().valid_up_to();
        let line = e.as_bytes()[..valid].iter().filter(|&&b| b == b'\n').count() + 1;
        (line, "invalid UTF-8".to_string())
    })
}
