//! Where the registry, tagsets and dialect mappings come from: explicit
//! paths, the `LEXKIT_DATA` directory, or the demo data compiled in.

use std::fs::File;
use std::path::{Path, PathBuf};

use lexkit::data;
use lexkit::serialize::DialectMapping;
use lexkit::{Dialect, DialectId, Registry, TagsetSpec};

use crate::Failure;

pub const DATA_ENV: &str = "LEXKIT_DATA";

fn data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_ENV).map(PathBuf::from)
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::env(format!("{}: {e}", path.display())))
}

/// Resolves a data file: the explicit path, else `LEXKIT_DATA/<file>`.
/// `None` means the embedded copy should be used.
fn locate(explicit: Option<&Path>, file: &str) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| data_dir().map(|d| d.join(file)))
}

pub fn registry(path: Option<&Path>) -> Result<Registry, Failure> {
    match locate(path, data::REGISTRY_FILE) {
        Some(p) => Registry::load(open(&p)?).map_err(|e| Failure::env(format!("{}: {e}", p.display()))),
        None => Ok(data::demo_registry()),
    }
}

/// Loads a tagset. Without a path the demo tagset for `language` is used
/// (German unless `language` is `fr`).
pub fn tagset(path: Option<&Path>, language: Option<&str>, reg: &Registry) -> Result<TagsetSpec, Failure> {
    let (file, text) = match language {
        Some("fr") => (data::TAGSET_FR_FILE, data::DEMO_TAGSET_FR),
        _ => (data::TAGSET_DE_FILE, data::DEMO_TAGSET_DE),
    };
    match locate(path, file) {
        Some(p) => TagsetSpec::load(open(&p)?, reg).map_err(|e| Failure::env(format!("{}: {e}", p.display()))),
        None => TagsetSpec::parse(text, reg).map_err(|e| Failure::env(format!("embedded {file}: {e}"))),
    }
}

pub fn dialect(id: DialectId, reg: &Registry) -> Result<Dialect, Failure> {
    let file = match id {
        DialectId::CanonicalLmf => return Ok(Dialect::canonical()),
        DialectId::Morphalou => data::MORPHALOU_MAPPING_FILE,
        DialectId::Tei => data::TEI_MAPPING_FILE,
    };
    match data_dir() {
        Some(dir) => {
            let p = dir.join(file);
            let wrap = |e: lexkit::SerializationError| Failure::env(format!("{}: {e}", p.display()));
            let mapping = DialectMapping::load(open(&p)?, reg).map_err(wrap)?;
            Dialect::with_mapping(id, mapping).map_err(wrap)
        }
        None => Dialect::builtin(id, reg).map_err(|e| Failure::env(format!("embedded {file}: {e}"))),
    }
}
