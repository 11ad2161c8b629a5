//! Demo data shipped with the library: a small registry, German and French
//! tagsets, and the Morphalou and TEI dialect mappings.

use crate::msd::TagsetSpec;
use crate::registry::Registry;

pub const DEMO_REGISTRY: &str = include_str!("../data/registry.tsv");
pub const DEMO_TAGSET_DE: &str = include_str!("../data/tagset-de.tsv");
pub const DEMO_TAGSET_FR: &str = include_str!("../data/tagset-fr.tsv");
pub const MORPHALOU_MAPPING: &str = include_str!("../data/morphalou.map");
pub const TEI_MAPPING: &str = include_str!("../data/tei.map");

/// File names used when demo data is read from a directory instead.
pub const REGISTRY_FILE: &str = "registry.tsv";
pub const TAGSET_DE_FILE: &str = "tagset-de.tsv";
pub const TAGSET_FR_FILE: &str = "tagset-fr.tsv";
pub const MORPHALOU_MAPPING_FILE: &str = "morphalou.map";
pub const TEI_MAPPING_FILE: &str = "tei.map";

pub fn demo_registry() -> Registry {
    Registry::parse(DEMO_REGISTRY).expect("shipped registry is valid")
}

pub fn demo_tagset_de(reg: &Registry) -> TagsetSpec {
    TagsetSpec::parse(DEMO_TAGSET_DE, reg).expect("shipped German tagset is valid")
}

pub fn demo_tagset_fr(reg: &Registry) -> TagsetSpec {
    TagsetSpec::parse(DEMO_TAGSET_FR, reg).expect("shipped French tagset is valid")
}
