#![allow(dead_code)]

use std::path::PathBuf;

use hopf_concordance::cli::{load_corpus, CorpusEntry};
use hopf_concordance::obstruction::{ScanConfig, ScanInput, SatelliteSpec};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn input_path(name: &str) -> PathBuf {
    corpus_dir().join("inputs").join(name)
}

pub fn corpus() -> Vec<CorpusEntry> {
    load_corpus(&corpus_dir()).expect("corpus loads")
}

/// First entry whose name starts with `name`.
pub fn entry(name: &str) -> CorpusEntry {
    corpus().into_iter().find(|e| e.name.starts_with(name)).unwrap_or_else(|| panic!("no corpus entry {name}"))
}

/// Corpus links with two components and linking number ±1.
pub fn lk_one_links() -> Vec<CorpusEntry> {
    corpus()
        .into_iter()
        .filter(|e| e.pd.component_count() == 2 && e.pd.linking_number(0, 1).unwrap().abs() == 1)
        .collect()
}

pub fn scan(name: &str) -> (SatelliteSpec, ScanConfig) {
    let text = std::fs::read_to_string(input_path(name)).unwrap();
    ScanInput::parse(&text).unwrap().into_spec().unwrap()
}
