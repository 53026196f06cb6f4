#![allow(dead_code)]

use std::path::PathBuf;

use sentiflux::{LoadOptions, NegationMode, SentiScore, SentimentLabel, SentimentLexicon};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn sample_lexicon() -> SentimentLexicon {
    SentimentLexicon::from_path(data("lexicon.tsv"), LoadOptions::strict()).unwrap()
}

pub fn table_one() -> SentimentLexicon {
    SentimentLexicon::from_path(data("table1.tsv"), LoadOptions::strict()).unwrap()
}

pub fn golden_lexicon() -> SentimentLexicon {
    SentimentLexicon::from_path(fixture("golden_lexicon.tsv"), LoadOptions::strict()).unwrap()
}

pub struct GoldenCase {
    pub text: String,
    pub literal: (SentimentLabel, SentiScore),
    pub final_flip: (SentimentLabel, SentiScore),
}

impl GoldenCase {
    pub fn expected(&self, mode: NegationMode) -> (SentimentLabel, SentiScore) {
        match mode {
            NegationMode::Literal => self.literal,
            NegationMode::FinalFlip => self.final_flip,
        }
    }
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let raw = std::fs::read_to_string(fixture("golden_tweets.tsv")).unwrap();
    raw.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            assert_eq!(f.len(), 5, "bad golden row {l:?}");
            GoldenCase {
                text: f[0].to_owned(),
                literal: (f[1].parse().unwrap(), SentiScore(f[2].parse().unwrap())),
                final_flip: (f[3].parse().unwrap(), SentiScore(f[4].parse().unwrap())),
            }
        })
        .collect()
}
