//! Tweet sources: line-oriented readers for files and stdin, and a seeded
//! synthetic corpus generator.
//!
//! Readers are single-pass and hold one line in memory at a time. A
//! malformed record is surfaced as [`IngestError::Malformed`], which
//! consumers count and skip; [`IngestError::Io`] is fatal.

mod synth;

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::scorer::SentimentLabel;

pub use synth::{synth_corpus, SynthCorpus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub id: String,
    pub text: String,
    pub gold_label: Option<SentimentLabel>,
    pub timestamp_ms: Option<i64>,
}

impl TweetRecord {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        TweetRecord {
            id: id.into(),
            text: text.into(),
            gold_label: None,
            timestamp_ms: None,
        }
    }

    pub fn with_gold(mut self, label: SentimentLabel) -> Self {
        self.gold_label = Some(label);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One JSON object per line with a `text` field.
    Jsonl,
    /// One raw tweet per line.
    Text,
    /// `label<TAB>text` per line.
    LabeledTsv,
}

impl InputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::Jsonl => "jsonl",
            InputFormat::Text => "text",
            InputFormat::LabeledTsv => "labeled-tsv",
        }
    }

    /// Whether every record of this format carries a gold label.
    pub fn carries_gold(self) -> bool {
        !matches!(self, InputFormat::Text)
    }
}

impl FromStr for InputFormat {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, IngestError> {
        match s {
            "jsonl" => Ok(InputFormat::Jsonl),
            "text" => Ok(InputFormat::Text),
            "labeled-tsv" => Ok(InputFormat::LabeledTsv),
            other => Err(IngestError::UnknownFormat(other.to_owned())),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{source_name}:{line}: skipped malformed record: {reason}")]
    Malformed {
        source_name: String,
        line: usize,
        reason: String,
    },
    #[error("cannot read {source_name}: {error}")]
    Io {
        source_name: String,
        #[source]
        error: io::Error,
    },
    #[error("unknown input format {0:?} (expected jsonl, text or labeled-tsv)")]
    UnknownFormat(String),
}

impl IngestError {
    /// Malformed records are skippable; everything else ends the stream.
    pub fn is_fatal(&self) -> bool {
        !matches!(self, IngestError::Malformed { .. })
    }
}

#[derive(Deserialize)]
struct JsonTweet {
    text: String,
    #[serde(default)]
    id: Option<String>,
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    timestamp_ms: Option<i64>,
}

/// Streaming record reader over any buffered source.
pub struct TweetReader<R> {
    inner: R,
    format: InputFormat,
    source_name: String,
    line_number: usize,
    buf: Vec<u8>,
    skipped: usize,
    done: bool,
}

impl<R: BufRead> TweetReader<R> {
    pub fn new(inner: R, format: InputFormat, source_name: impl Into<String>) -> Self {
        TweetReader {
            inner,
            format,
            source_name: source_name.into(),
            line_number: 0,
            buf: Vec::with_capacity(256),
            skipped: 0,
            done: false,
        }
    }

    /// Number of malformed records yielded so far.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    fn malformed(&mut self, reason: impl Into<String>) -> IngestError {
        self.skipped += 1;
        IngestError::Malformed {
            source_name: self.source_name.clone(),
            line: self.line_number,
            reason: reason.into(),
        }
    }

    fn parse_line(&mut self, line: &str) -> Option<Result<TweetRecord, IngestError>> {
        let line_id = || format!("line-{}", self.line_number);
        match self.format {
            InputFormat::Text => Some(Ok(TweetRecord::new(line_id(), line))),
            InputFormat::LabeledTsv => {
                if line.trim().is_empty() {
                    return None;
                }
                let Some((label, text)) = line.split_once('\t') else {
                    return Some(Err(self.malformed("expected label<TAB>text")));
                };
                match label.parse::<SentimentLabel>() {
                    Ok(gold) => Some(Ok(TweetRecord::new(line_id(), text).with_gold(gold))),
                    Err(()) => Some(Err(self.malformed(format!("unknown label {label:?}")))),
                }
            }
            InputFormat::Jsonl => {
                if line.trim().is_empty() {
                    return None;
                }
                let parsed: JsonTweet = match serde_json::from_str(line) {
                    Ok(v) => v,
                    Err(e) => return Some(Err(self.malformed(e.to_string()))),
                };
                let gold_label = match parsed.label.as_deref().map(str::parse::<SentimentLabel>) {
                    None => None,
                    Some(Ok(label)) => Some(label),
                    Some(Err(())) => {
                        let bad = parsed.label.unwrap_or_default();
                        return Some(Err(self.malformed(format!("unknown label {bad:?}"))));
                    }
                };
                let id = match parsed.id {
                    Some(id) if !id.is_empty() => id,
                    _ => line_id(),
                };
                Some(Ok(TweetRecord {
                    id,
                    text: parsed.text,
                    gold_label,
                    timestamp_ms: parsed.timestamp_ms,
                }))
            }
        }
    }
}

impl<R: BufRead> Iterator for TweetReader<R> {
    type Item = Result<TweetRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            match self.inner.read_until(b'\n', &mut self.buf) {
                Ok(0) => {
                    self.done = true;
                    return None;
                }
                Ok(_) => {}
                Err(error) => {
                    self.done = true;
                    return Some(Err(IngestError::Io {
                        source_name: self.source_name.clone(),
                        error,
                    }));
                }
            }
            self.line_number += 1;
            let mut bytes = std::mem::take(&mut self.buf);
            if bytes.last() == Some(&b'\n') {
                bytes.pop();
                if bytes.last() == Some(&b'\r') {
                    bytes.pop();
                }
            }
            let item = match std::str::from_utf8(&bytes) {
                Ok(line) => self.parse_line(line),
                Err(_) => Some(Err(self.malformed("invalid UTF-8"))),
            };
            self.buf = bytes;
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

/// Source path, or `-` for standard input.
pub fn open_source(path: &str) -> Result<Box<dyn BufRead + Send>, IngestError> {
    if path == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(Path::new(path)).map_err(|error| IngestError::Io {
        source_name: path.to_owned(),
        error,
    })?;
    Ok(Box::new(BufReader::with_capacity(1 << 16, file)))
}

/// Opens `path` (or stdin for `-`) and streams records in `format`.
pub fn read_tweets(
    path: &str,
    format: InputFormat,
) -> Result<TweetReader<Box<dyn BufRead + Send>>, IngestError> {
    let name = if path == "-" { "<stdin>" } else { path };
    Ok(TweetReader::new(open_source(path)?, format, name))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(input: &str, format: InputFormat) -> Vec<Result<TweetRecord, IngestError>> {
        TweetReader::new(input.as_bytes(), format, "test").collect()
    }

    #[test]
    fn jsonl_field_mapping() {
        let out = read(r#"{"id":"42","text":"abandoned :("}"#, InputFormat::Jsonl);
        let rec = out[0].as_ref().unwrap();
        assert_eq!(rec, &TweetRecord::new("42", "abandoned :("));

        let out = read(
            r#"{"text":"x","label":"neutral","timestamp_ms":1700000000000}"#,
            InputFormat::Jsonl,
        );
        let rec = out[0].as_ref().unwrap();
        assert_eq!(rec.id, "line-1");
        assert_eq!(rec.gold_label, Some(SentimentLabel::Neutral));
        assert_eq!(rec.timestamp_ms, Some(1_700_000_000_000));
    }

    #[test]
    fn text_lines_get_synthetic_ids() {
        let out = read("a\nb\nthe acting needed to be better\n", InputFormat::Text);
        let rec = out[2].as_ref().unwrap();
        assert_eq!(rec.id, "line-3");
        assert_eq!(rec.text, "the acting needed to be better");
    }

    #[test]
    fn text_keeps_empty_tweets() {
        let out = read("one\n\nthree", InputFormat::Text);
        assert_eq!(out.len(), 3);
        assert_eq!(out[1].as_ref().unwrap().text, "");
    }

    #[test]
    fn labeled_tsv() {
        let out = read("negative\tthe movie was not good\r\n", InputFormat::LabeledTsv);
        let rec = out[0].as_ref().unwrap();
        assert_eq!(rec.gold_label, Some(SentimentLabel::Negative));
        assert_eq!(rec.text, "the movie was not good");
    }

    #[test]
    fn malformed_records_are_counted_not_fatal() {
        let input = "positive\tok\nbogus\tx\nno tab here\n\nneutral\t\n";
        let mut reader = TweetReader::new(input.as_bytes(), InputFormat::LabeledTsv, "t.tsv");
        let items: Vec<_> = reader.by_ref().collect();
        assert_eq!(items.len(), 4);
        assert_eq!(reader.skipped(), 2);
        let errs: Vec<_> = items.iter().filter_map(|r| r.as_ref().err()).collect();
        assert!(errs.iter().all(|e| !e.is_fatal()));
        assert!(errs[0].to_string().contains("t.tsv:2"));

        let mut reader = TweetReader::new(
            "{\"text\":\"ok\"}\n{not json}\n{\"id\":\"x\"}\n{\"text\":\"y\",\"label\":\"meh\"}\n".as_bytes(),
            InputFormat::Jsonl,
            "t.jsonl",
        );
        let ok = reader.by_ref().filter(|r| r.is_ok()).count();
        assert_eq!(ok, 1);
        assert_eq!(reader.skipped(), 3);
    }

    #[test]
    fn invalid_utf8_is_skipped() {
        let bytes: &[u8] = b"good\n\xff\xfe\nfine\n";
        let items: Vec<_> = TweetReader::new(bytes, InputFormat::Text, "bin").collect();
        assert_eq!(items.len(), 3);
        assert!(items[1].is_err());
        assert_eq!(items[2].as_ref().unwrap().id, "line-3");
    }

    #[test]
    fn format_tags() {
        assert_eq!("labeled-tsv".parse::<InputFormat>().unwrap(), InputFormat::LabeledTsv);
        assert!(matches!(
            "csv".parse::<InputFormat>(),
            Err(IngestError::UnknownFormat(_))
        ));
    }

    #[test]
    fn missing_file_is_fatal() {
        let err = read_tweets("/no/such/file.jsonl", InputFormat::Jsonl).err().unwrap();
        assert!(err.is_fatal());
        assert!(err.to_string().contains("/no/such/file.jsonl"));
    }
}
