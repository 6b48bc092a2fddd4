//! Every chapter listed in the guide's summary is compiled as doc-tests.

use std::path::Path;

#[test]
fn summary_chapters_are_doc_tested() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src");
    let summary = std::fs::read_to_string(root.join("SUMMARY.md")).unwrap();
    let lib = include_str!("../src/lib.rs");
    let chapters: Vec<&str> = summary
        .lines()
        .filter_map(|l| l.split("](").nth(1))
        .filter_map(|rest| rest.strip_suffix(')'))
        .collect();
    assert!(chapters.len() >= 7);
    for ch in chapters {
        assert!(root.join(ch).is_file(), "{ch} missing");
        assert!(
            lib.contains(&format!("book/src/{ch}\")")),
            "{ch} is not included in lib.rs"
        );
    }
}
