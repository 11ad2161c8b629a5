//! `lexkit`: validate, convert, tag, look up, import and count lexical
//! resources.
//!
//! Exit status is 0 on success, 1 for violations in the data (invalid
//! entries, unknown tag codes, unexpressible content, bad import lines) and
//! 2 for I/O, parse and usage errors. Results go to stdout, diagnostics to
//! stderr.

mod data;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lexkit::{
    lookup_form, read_resource, resource_stats, validate_resource, write_resource, Dialect,
    DialectId, FeatureStructure, LexicalResource, MsdTag, Registry, SerializationError, Severity,
    Violation, ViolationKind,
};

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn domain(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    pub fn env(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "lexkit", version, about = "Lexical resource toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a resource against the model and the registry.
    Validate {
        path: PathBuf,
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, default_value = "canonical-lmf", value_parser = parse_dialect)]
        dialect: DialectId,
    },
    /// Convert a resource between XML dialects.
    Convert {
        input: PathBuf,
        #[arg(long, value_parser = parse_dialect)]
        from: DialectId,
        #[arg(long, value_parser = parse_dialect)]
        to: DialectId,
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Decode a morphosyntactic tag or encode `name=value` pairs.
    Tag {
        op: TagOp,
        #[arg(required = true)]
        values: Vec<String>,
        #[arg(long)]
        tagset: Option<PathBuf>,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Find every form with the given spelling.
    Lookup {
        surface: String,
        lexicon: PathBuf,
        #[arg(long, default_value = "canonical-lmf", value_parser = parse_dialect)]
        dialect: DialectId,
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Required feature, `name=value`; repeat for several.
        #[arg(long = "filter", value_parser = parse_pair)]
        filters: Vec<(String, String)>,
    },
    /// Import a form/lemma/tag full-form lexicon as canonical LMF.
    Import {
        path: PathBuf,
        #[arg(long)]
        tagset: Option<PathBuf>,
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Lexicon language; defaults to the tagset's.
        #[arg(long)]
        lang: Option<String>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Write the good lines even when some lines fail.
        #[arg(long)]
        keep_going: bool,
    },
    /// Print entry, form, sense and relation counts.
    Stats {
        path: PathBuf,
        #[arg(long, default_value = "canonical-lmf", value_parser = parse_dialect)]
        dialect: DialectId,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TagOp {
    Decode,
    Encode,
}

fn parse_dialect(s: &str) -> Result<DialectId, String> {
    s.parse()
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((n, v)) if !n.is_empty() && !v.is_empty() => Ok((n.to_string(), v.to_string())),
        _ => Err(format!("expected name=value, got {s:?}")),
    }
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::env(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> CmdResult {
    let result = match output {
        Some(p) => std::fs::write(p, bytes).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(bytes).map_err(|e| format!("stdout: {e}")),
    };
    result.map_err(Failure::env)
}

fn serialization_failure(path: &Path, e: SerializationError) -> Failure {
    let message = format!("{}: {e}", path.display());
    match e {
        SerializationError::NotExpressible { .. } => Failure::domain(message),
        _ => Failure::env(message),
    }
}

fn load(path: &Path, dialect: &Dialect, reg: &Registry) -> Result<LexicalResource, Failure> {
    read_resource(open(path)?, dialect, reg).map_err(|e| serialization_failure(path, e))
}

fn validate(path: &Path, registry: Option<&Path>, dialect: DialectId) -> CmdResult {
    let reg = data::registry(registry)?;
    let dialect = data::dialect(dialect, &reg)?;
    let violations = match read_resource(open(path)?, &dialect, &reg) {
        Ok(res) => validate_resource(&res, &reg).violations,
        // The model refuses to build structurally broken entries, so these
        // only surface while reading.
        Err(SerializationError::StructuralViolation { location, source }) => vec![Violation {
            severity: Severity::Error,
            kind: ViolationKind::from(&source),
            location,
            message: source.to_string(),
        }],
        Err(e) => return Err(serialization_failure(path, e)),
    };
    if violations.is_empty() {
        return Ok(());
    }
    let mut out = String::new();
    for v in &violations {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    emit(None, out.as_bytes())?;
    Err(Failure::domain(format!("{}: {} violation(s)", path.display(), violations.len())))
}

fn convert(input: &Path, from: DialectId, to: DialectId, registry: Option<&Path>, output: Option<&Path>) -> CmdResult {
    let reg = data::registry(registry)?;
    let (from, to) = (data::dialect(from, &reg)?, data::dialect(to, &reg)?);
    let bytes = lexkit::convert(open(input)?, &from, &to, &reg).map_err(|e| serialization_failure(input, e))?;
    emit(output, &bytes)
}

fn tag(op: TagOp, values: &[String], tagset: Option<&Path>, registry: Option<&Path>) -> CmdResult {
    let reg = data::registry(registry)?;
    let spec = data::tagset(tagset, None, &reg)?;
    let codec = |e: lexkit::CodecError| Failure::domain(e.to_string());
    match op {
        TagOp::Decode => {
            let [value] = values else {
                return Err(Failure::env("decode takes exactly one tag"));
            };
            let fs = spec.decode(&MsdTag::new(value.as_str()).map_err(codec)?).map_err(codec)?;
            let mut out = String::new();
            for (n, v) in fs.iter() {
                out.push_str(&format!("{n}={v}\n"));
            }
            emit(None, out.as_bytes())
        }
        TagOp::Encode => {
            let pairs = values.iter().map(|v| parse_pair(v)).collect::<Result<Vec<_>, _>>().map_err(Failure::env)?;
            let fs = FeatureStructure::build(pairs).map_err(|e| Failure::domain(e.to_string()))?;
            let tag = spec.encode(&fs).map_err(codec)?;
            emit(None, format!("{tag}\n").as_bytes())
        }
    }
}

fn lookup(surface: &str, lexicon: &Path, dialect: DialectId, registry: Option<&Path>, filters: &[(String, String)]) -> CmdResult {
    let reg = data::registry(registry)?;
    let res = load(lexicon, &data::dialect(dialect, &reg)?, &reg)?;
    let filter = if filters.is_empty() {
        None
    } else {
        Some(FeatureStructure::build(filters.iter().cloned()).map_err(|e| Failure::env(e.to_string()))?)
    };
    let mut out = String::new();
    for hit in lookup_form(&res, surface, filter.as_ref()) {
        let feats: Vec<String> = hit
            .features
            .iter()
            .filter(|(n, _)| n.as_str() != lexkit::lmf::WRITTEN_FORM)
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        out.push_str(&format!("{}\t{}\t{}\n", hit.entry_id, hit.form_type, feats.join(",")));
    }
    emit(None, out.as_bytes())
}

fn import(
    path: &Path,
    tagset: Option<&Path>,
    registry: Option<&Path>,
    lang: Option<&str>,
    output: Option<&Path>,
    keep_going: bool,
) -> CmdResult {
    let reg = data::registry(registry)?;
    let spec = data::tagset(tagset, lang, &reg)?;
    let language = lang.unwrap_or(&spec.language).to_string();
    let outcome = lexkit::import_multext_lenient(open(path)?, &spec, &reg, &language).map_err(|e| match e {
        lexkit::ImportError::Io(m) => Failure::env(format!("{}: {m}", path.display())),
        other => Failure::domain(other.to_string()),
    })?;
    for err in &outcome.errors {
        eprintln!("{}: {err}", path.display());
    }
    eprintln!("{outcome}");
    if outcome.errors.is_empty() || keep_going {
        let bytes = write_resource(&outcome.resource, &Dialect::canonical(), &reg)
            .map_err(|e| serialization_failure(path, e))?;
        emit(output, &bytes)?;
    }
    if outcome.errors.is_empty() {
        Ok(())
    } else {
        Err(Failure::domain(format!("{} line(s) rejected", outcome.errors.len())))
    }
}

fn stats(path: &Path, dialect: DialectId, registry: Option<&Path>) -> CmdResult {
    let reg = data::registry(registry)?;
    let res = load(path, &data::dialect(dialect, &reg)?, &reg)?;
    emit(None, resource_stats(&res).to_string().as_bytes())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate { path, registry, dialect } => validate(&path, registry.as_deref(), dialect),
        Command::Convert { input, from, to, registry, output } => {
            convert(&input, from, to, registry.as_deref(), output.as_deref())
        }
        Command::Tag { op, values, tagset, registry } => tag(op, &values, tagset.as_deref(), registry.as_deref()),
        Command::Lookup { surface, lexicon, dialect, registry, filters } => {
            lookup(&surface, &lexicon, dialect, registry.as_deref(), &filters)
        }
        Command::Import { path, tagset, registry, lang, output, keep_going } => import(
            &path,
            tagset.as_deref(),
            registry.as_deref(),
            lang.as_deref(),
            output.as_deref(),
            keep_going,
        ),
        Command::Stats { path, dialect, registry } => stats(&path, dialect, registry.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lexkit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
