use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn lexkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexkit"))
        .args(args)
        .env_remove("LEXKIT_DATA")
        .output()
        .expect("run lexkit")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let championne = fixture("championne-morphalou.xml");
    let out = lexkit(&["validate", path(&championne), "--dialect", "morphalou"]);
    assert_eq!(code(&out), 1);
    let lines: Vec<_> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 1, "{lines:?}");
    assert!(lines[0].starts_with("error DanglingRelationTarget "), "{}", lines[0]);
    assert!(lines[0].contains("champion_1"));

    let out = lexkit(&["validate", path(&fixture("empty-canonical.xml"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).is_empty());

    let out = lexkit(&["validate", "/nonexistent/lexicon.xml"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).is_empty());

    let out = lexkit(&["validate", path(&fixture("zero-form-canonical.xml"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains(" MissingForm "));

    let out = lexkit(&["validate", path(&fixture("tei-unbalanced.xml")), "--dialect", "tei"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn convert_to_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.xml");
    let out = lexkit(&[
        "convert",
        path(&fixture("championne-morphalou.xml")),
        "--from",
        "morphalou",
        "--to",
        "tei",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), std::fs::read(fixture("championne-tei.xml")).unwrap());
}

#[test]
fn convert_is_repeatable() {
    let src = fixture("tei-nested-group.xml");
    let first = lexkit(&["convert", path(&src), "--from", "tei", "--to", "tei"]);
    assert_eq!(code(&first), 0);
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.xml");
    std::fs::write(&once, &first.stdout).unwrap();
    let second = lexkit(&["convert", once.to_str().unwrap(), "--from", "tei", "--to", "tei"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn convert_failures() {
    let out = lexkit(&["convert", path(&fixture("tei-too-deep.xml")), "--from", "tei", "--to", "canonical-lmf"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("nested 3 deep"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    // A second lexicon cannot be written as TEI.
    let dir = tempfile::tempdir().unwrap();
    let two = dir.path().join("two.xml");
    std::fs::write(
        &two,
        "<LexicalResource><Lexicon language=\"fr\"/><Lexicon language=\"de\"/></LexicalResource>",
    )
    .unwrap();
    let out = lexkit(&["convert", two.to_str().unwrap(), "--from", "canonical-lmf", "--to", "tei"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));

    let out = lexkit(&["convert", path(&two), "--from", "html", "--to", "tei"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tag_decode_and_encode() {
    let out = lexkit(&["tag", "decode", "Ncmsg"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "cat=noun\ntype=common\ngender=masculine\nnumber=singular\ncase=genitive\n"
    );

    let out = lexkit(&["tag", "encode", "cat=noun"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "N\n"));

    let out = lexkit(&["tag", "encode", "cat=noun", "case=genitive", "gender=masculine"]);
    assert_eq!(stdout(&out), "N-m-g\n");

    let out = lexkit(&["tag", "decode", "Nz"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("'z' at position 1"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn lookup_hits() {
    let championne = fixture("championne-morphalou.xml");
    let out = lexkit(&["lookup", "championnes", path(&championne), "--dialect", "morphalou"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "championne_1\twordForm\tnumber=plural\n");

    let out = lexkit(&["lookup", "championne", path(&championne), "--dialect", "morphalou"]);
    assert_eq!(stdout(&out).lines().count(), 2);

    let out = lexkit(&["lookup", "zzz", path(&championne), "--dialect", "morphalou"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, ""));

    let out = lexkit(&[
        "lookup", "championne", path(&championne), "--dialect", "morphalou", "--filter", "number=plural",
    ]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, ""));

    let out = lexkit(&[
        "lookup", "championne", path(&championne), "--dialect", "morphalou",
        "--filter", "number=singular", "--filter", "partOfSpeech=commonNoun",
    ]);
    assert_eq!(stdout(&out), "");
    let out = lexkit(&[
        "lookup", "championne", path(&championne), "--dialect", "morphalou", "--filter", "number=singular",
    ]);
    assert_eq!(stdout(&out), "championne_1\twordForm\tnumber=singular\n");

    let out = lexkit(&["lookup", "x", "/nonexistent.xml"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn import_championne() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.xml");
    let out = lexkit(&[
        "import",
        path(&fixture("championne-fr.txt")),
        "--lang",
        "fr",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("entries=1 forms=2 errors=0"));
    let stats = lexkit(&["stats", target.to_str().unwrap()]);
    assert!(stdout(&stats).contains("forms.lemma\t1\nforms.wordForm\t2\n"), "{}", stdout(&stats));
    let hit = lexkit(&["lookup", "championnes", target.to_str().unwrap()]);
    assert_eq!(stdout(&hit), "championne_1\twordForm\tpartOfSpeech=noun,number=plural\n");
    let lemma = lexkit(&["lookup", "championne", target.to_str().unwrap(), "--filter", "gender=feminine"]);
    assert!(stdout(&lemma).starts_with("championne_1\tlemma\t"));
}

#[test]
fn import_empty_and_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let out = lexkit(&["import", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("<Lexicon language=\"de\"/>"), "{}", stdout(&out));

    let bad = fixture("one-bad-tag.txt");
    let out = lexkit(&["import", path(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("line 7"));

    let target = dir.path().join("partial.xml");
    let out = lexkit(&["import", path(&bad), "--keep-going", "-o", target.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("forms=9 errors=1"), "{}", stderr(&out));
    let stats = lexkit(&["stats", target.to_str().unwrap()]);
    assert!(stdout(&stats).contains("forms.wordForm\t9\n"));

    let out = lexkit(&["import", "/nonexistent.txt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn stats_output() {
    let out = lexkit(&["stats", path(&fixture("championne-morphalou.xml")), "--dialect", "morphalou"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "lexica\t1\nentries\t1\nforms\t3\nforms.lemma\t1\nforms.wordForm\t2\nforms.stem\t0\nrepresentations\t3\nsenses\t0\nrelations\t1\n"
    );
    let out = lexkit(&["stats", path(&fixture("empty-canonical.xml"))]);
    assert!(stdout(&out).starts_with("lexica\t1\nentries\t0\n"));
}

#[test]
fn data_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    // Only the registry is present, so tagset loading fails.
    std::fs::write(dir.path().join("registry.tsv"), lexkit::data::DEMO_REGISTRY).unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_lexkit"))
            .args(args)
            .env("LEXKIT_DATA", dir.path())
            .output()
            .unwrap()
    };
    let out = run(&["tag", "decode", "Ncmsg"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("tagset-de.tsv"), "{}", stderr(&out));

    // A reduced tagset in the data directory replaces the demo one.
    std::fs::write(
        dir.path().join("tagset-de.tsv"),
        "language\tde\ncategory\tN\tnoun\nslot\tN\t1\tgender\ncode\tN\t1\tm\tmasculine\ncode\tN\t1\tf\tfeminine\n",
    )
    .unwrap();
    let out = run(&["tag", "decode", "Nf"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "cat=noun\ngender=feminine\n"), "{}", stderr(&out));
    let out = run(&["tag", "decode", "Ncmsg"]);
    assert_eq!(code(&out), 1);
}
