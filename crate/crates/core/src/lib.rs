//! Lexical resource toolkit: flat feature structures, a data-category
//! registry, a positional morphosyntactic tag codec, the LMF core model and
//! converters between canonical LMF, Morphalou-style and TEI dictionary XML.

pub mod convert;
pub mod data;
pub mod feature;
pub mod lmf;
pub mod msd;
pub mod registry;
pub mod serialize;

mod records;

pub use convert::{convert, import_multext, import_multext_lenient, ImportError, ImportOutcome};
pub use feature::{FeatureError, FeatureName, FeatureStructure, FeatureValue};
pub use lmf::{
    lookup_form, resource_stats, validate_resource, EntryRelation, Form, FormRepresentation,
    FormType, GlobalInformation, LexicalEntry, LexicalResource, Lexicon, LookupHit, ModelError,
    Sense, Severity, StatsSummary, ValidationReport, Violation, ViolationKind,
};
pub use msd::{CodecError, LexiconLine, MsdTag, TagsetSpec};
pub use registry::{Registry, RegistryError};
pub use serialize::{read_resource, write_resource, Dialect, DialectId, SerializationError};
