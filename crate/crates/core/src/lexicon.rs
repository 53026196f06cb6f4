//! Sentiment dictionary: parsing, validation and an immutable lookup table.
//!
//! The on-disk format is one record per line with five tab-separated
//! columns: `strength  word  pos  stemmed  polarity`. Blank lines and lines
//! whose first non-space character is `#` are ignored.
//!
//! Word surfaces are lowercased at load time; emoticon surfaces are kept
//! verbatim. No stemming or morphological expansion is performed: every
//! inflected form a caller wants matched must be listed explicitly.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Polarity column of a lexicon row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
    Negation,
    #[serde(rename = "blindnegation")]
    BlindNegation,
}

impl Polarity {
    pub const ALL: [Polarity; 5] = [
        Polarity::Positive,
        Polarity::Negative,
        Polarity::Neutral,
        Polarity::Negation,
        Polarity::BlindNegation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
            Polarity::Negation => "negation",
            Polarity::BlindNegation => "blindnegation",
        }
    }

    /// Negation and blind negation change control flow rather than adding
    /// to the score.
    pub fn is_structural(self) -> bool {
        matches!(self, Polarity::Negation | Polarity::BlindNegation)
    }
}

impl FromStr for Polarity {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Polarity::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or(())
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Subjectivity strength: strong entries weigh twice as much as weak ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Strength {
    #[serde(rename = "weaksubj")]
    WeakSubj,
    #[serde(rename = "strongsubj")]
    StrongSubj,
}

impl Strength {
    pub const ALL: [Strength; 2] = [Strength::WeakSubj, Strength::StrongSubj];

    pub fn as_str(self) -> &'static str {
        match self {
            Strength::WeakSubj => "weaksubj",
            Strength::StrongSubj => "strongsubj",
        }
    }
}

impl FromStr for Strength {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Strength::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or(())
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PartOfSpeech {
    #[serde(rename = "adj")]
    Adjective,
    #[serde(rename = "noun")]
    Noun,
    #[serde(rename = "verb")]
    Verb,
    #[serde(rename = "advb")]
    Adverb,
    #[serde(rename = "conj")]
    Conjunction,
    #[serde(rename = "emoti")]
    Emoticon,
    #[serde(rename = "anypos")]
    Any,
}

impl PartOfSpeech {
    pub const ALL: [PartOfSpeech; 7] = [
        PartOfSpeech::Adjective,
        PartOfSpeech::Noun,
        PartOfSpeech::Verb,
        PartOfSpeech::Adverb,
        PartOfSpeech::Conjunction,
        PartOfSpeech::Emoticon,
        PartOfSpeech::Any,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PartOfSpeech::Adjective => "adj",
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::Adverb => "advb",
            PartOfSpeech::Conjunction => "conj",
            PartOfSpeech::Emoticon => "emoti",
            PartOfSpeech::Any => "anypos",
        }
    }
}

impl FromStr for PartOfSpeech {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        PartOfSpeech::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or(())
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One dictionary row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexiconEntry {
    pub surface: String,
    pub strength: Strength,
    pub pos: PartOfSpeech,
    /// Stored for completeness; matching ignores it.
    pub stemmed: bool,
    pub polarity: Polarity,
}

impl LexiconEntry {
    pub fn is_emoticon(&self) -> bool {
        self.pos == PartOfSpeech::Emoticon
    }

    /// Renders the entry back into its five-column file form.
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.strength,
            self.surface,
            self.pos,
            if self.stemmed { "y" } else { "n" },
            self.polarity
        )
    }
}

/// Column a row error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    /// The record as a whole (wrong column count).
    Record,
    Strength,
    Word,
    Pos,
    Stemmed,
    Polarity,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Field::Record => "record",
            Field::Strength => "strength",
            Field::Word => "word",
            Field::Pos => "pos",
            Field::Stemmed => "stemmed",
            Field::Polarity => "polarity",
        };
        f.write_str(name)
    }
}

/// A malformed lexicon line.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("line {line}: invalid {field}: {message}")]
pub struct RowError {
    pub line: usize,
    pub field: Field,
    pub message: String,
}

impl RowError {
    fn new(line: usize, field: Field, message: impl Into<String>) -> Self {
        RowError {
            line,
            field,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Unreadable {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Row(#[from] RowError),
}

/// Diagnostics collected while loading in lenient mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadWarning {
    Malformed(RowError),
    Duplicate {
        surface: String,
        kept_line: usize,
        dropped_line: usize,
    },
}

impl fmt::Display for LoadWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadWarning::Malformed(err) => write!(f, "skipped malformed {err}"),
            LoadWarning::Duplicate {
                surface,
                kept_line,
                dropped_line,
            } => write!(
                f,
                "duplicate surface {surface:?}: kept line {kept_line}, dropped line {dropped_line}"
            ),
        }
    }
}

/// Parses a single record. `line_number` is only used for error reporting.
pub fn parse_lexicon_line(line: &str, line_number: usize) -> Result<LexiconEntry, RowError> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 5 {
        return Err(RowError::new(
            line_number,
            Field::Record,
            format!("expected 5 tab-separated fields, found {}", fields.len()),
        ));
    }
    let strength: Strength = fields[0].parse().map_err(|_| {
        RowError::new(line_number, Field::Strength, format!("unknown value {:?}", fields[0]))
    })?;
    let pos: PartOfSpeech = fields[2].parse().map_err(|_| {
        RowError::new(line_number, Field::Pos, format!("unknown value {:?}", fields[2]))
    })?;
    let stemmed = match fields[3] {
        "y" => true,
        "n" => false,
        other => {
            return Err(RowError::new(
                line_number,
                Field::Stemmed,
                format!("unknown value {other:?}"),
            ))
        }
    };
    let polarity: Polarity = fields[4].parse().map_err(|_| {
        RowError::new(line_number, Field::Polarity, format!("unknown value {:?}", fields[4]))
    })?;

    let raw = fields[1];
    if raw.is_empty() {
        return Err(RowError::new(line_number, Field::Word, "empty surface"));
    }
    if raw.chars().any(char::is_whitespace) {
        return Err(RowError::new(
            line_number,
            Field::Word,
            format!("surface {raw:?} contains whitespace"),
        ));
    }
    let surface = if pos == PartOfSpeech::Emoticon {
        raw.to_owned()
    } else {
        raw.to_lowercase()
    };

    Ok(LexiconEntry {
        surface,
        strength,
        pos,
        stemmed,
        polarity,
    })
}

fn is_skippable(line: &str) -> bool {
    let trimmed = line.trim_start();
    trimmed.is_empty() || trimmed.starts_with('#')
}

/// Ordering used to settle duplicate surfaces; larger wins, ties keep the
/// earlier row.
fn precedence(entry: &LexiconEntry) -> (bool, bool) {
    (
        entry.strength == Strength::StrongSubj,
        entry.polarity.is_structural(),
    )
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Abort on the first malformed row instead of skipping it.
    pub strict: bool,
}

impl LoadOptions {
    pub fn strict() -> Self {
        LoadOptions { strict: true }
    }
}

/// Emoticon surfaces with a first-character prefilter, for the tokenizer.
#[derive(Debug, Clone, Default)]
pub struct EmoticonSet {
    surfaces: HashSet<String>,
    first_chars: HashSet<char>,
    max_len: usize,
}

impl EmoticonSet {
    pub fn new<I, S>(surfaces: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = EmoticonSet::default();
        for s in surfaces {
            set.insert(s.into());
        }
        set
    }

    fn insert(&mut self, surface: String) {
        if let Some(c) = surface.chars().next() {
            self.first_chars.insert(c);
            self.max_len = self.max_len.max(surface.len());
            self.surfaces.insert(surface);
        }
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.surfaces.contains(surface)
    }

    pub fn len(&self) -> usize {
        self.surfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surfaces.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.surfaces.iter().map(String::as_str)
    }

    /// Byte length of the longest emoticon that `text` starts with.
    pub fn longest_prefix(&self, text: &str) -> Option<usize> {
        let first = text.chars().next()?;
        if !self.first_chars.contains(&first) {
            return None;
        }
        let limit = self.max_len.min(text.len());
        (1..=limit)
            .rev()
            .filter(|&end| text.is_char_boundary(end))
            .find(|&end| self.surfaces.contains(&text[..end]))
    }
}

/// Immutable dictionary keyed by normalized surface form.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    entries: HashMap<String, LexiconEntry>,
    emoticons: EmoticonSet,
    warnings: Vec<LoadWarning>,
}

impl SentimentLexicon {
    /// Builds a lexicon from raw file lines. Line numbers are 1-based.
    pub fn from_lines<I, S>(lines: I, options: LoadOptions) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut builder = Builder::default();
        for (idx, line) in lines.into_iter().enumerate() {
            builder.push(line.as_ref(), idx + 1, options)?;
        }
        Ok(builder.finish())
    }

    pub fn from_reader<R: BufRead>(
        reader: R,
        options: LoadOptions,
        name: &str,
    ) -> Result<Self, LexiconError> {
        let mut builder = Builder::default();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| LexiconError::Unreadable {
                path: name.to_owned(),
                source,
            })?;
            builder.push(&line, idx + 1, options)?;
        }
        Ok(builder.finish())
    }

    pub fn from_path(path: impl AsRef<Path>, options: LoadOptions) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| LexiconError::Unreadable {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_reader(BufReader::new(file), options, &path.display().to_string())
    }

    /// Looks up an already normalized surface (lowercased word or verbatim
    /// emoticon).
    #[inline]
    pub fn lookup(&self, surface: &str) -> Option<&LexiconEntry> {
        self.entries.get(surface)
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn emoticons(&self) -> &EmoticonSet {
        &self.emoticons
    }

    pub fn warnings(&self) -> &[LoadWarning] {
        &self.warnings
    }

    /// Human-readable diagnostics in load order.
    pub fn warning_log(&self) -> Vec<String> {
        self.warnings.iter().map(ToString::to_string).collect()
    }

    pub fn malformed_rows(&self) -> impl Iterator<Item = &RowError> {
        self.warnings.iter().filter_map(|w| match w {
            LoadWarning::Malformed(e) => Some(e),
            LoadWarning::Duplicate { .. } => None,
        })
    }

    /// Entries sorted by surface.
    pub fn entries(&self) -> Vec<&LexiconEntry> {
        let mut all: Vec<_> = self.entries.values().collect();
        all.sort_by(|a, b| a.surface.cmp(&b.surface));
        all
    }

    pub fn polarity_counts(&self) -> BTreeMap<Polarity, usize> {
        let mut counts = BTreeMap::new();
        for e in self.entries.values() {
            *counts.entry(e.polarity).or_insert(0) += 1;
        }
        counts
    }

    pub fn pos_counts(&self) -> BTreeMap<PartOfSpeech, usize> {
        let mut counts = BTreeMap::new();
        for e in self.entries.values() {
            *counts.entry(e.pos).or_insert(0) += 1;
        }
        counts
    }

    /// Serializes to the five-column file format, sorted by surface.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in self.entries() {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out
    }
}

#[derive(Default)]
struct Builder {
    entries: HashMap<String, (LexiconEntry, usize)>,
    warnings: Vec<LoadWarning>,
}

impl Builder {
    fn push(&mut self, line: &str, line_number: usize, options: LoadOptions) -> Result<(), RowError> {
        if is_skippable(line) {
            return Ok(());
        }
        let entry = match parse_lexicon_line(line, line_number) {
            Ok(entry) => entry,
            Err(err) if options.strict => return Err(err),
            Err(err) => {
                self.warnings.push(LoadWarning::Malformed(err));
                return Ok(());
            }
        };
        match self.entries.get_mut(&entry.surface) {
            None => {
                self.entries
                    .insert(entry.surface.clone(), (entry, line_number));
            }
            Some((existing, existing_line)) => {
                let (kept_line, dropped_line) = if precedence(&entry) > precedence(existing) {
                    let dropped = *existing_line;
                    *existing = entry;
                    *existing_line = line_number;
                    (line_number, dropped)
                } else {
                    (*existing_line, line_number)
                };
                self.warnings.push(LoadWarning::Duplicate {
                    surface: existing.surface.clone(),
                    kept_line,
                    dropped_line,
                });
            }
        }
        Ok(())
    }

    fn finish(self) -> SentimentLexicon {
        let entries: HashMap<String, LexiconEntry> = self
            .entries
            .into_iter()
            .map(|(k, (e, _))| (k, e))
            .collect();
        let emoticons = EmoticonSet::new(
            entries
                .values()
                .filter(|e| e.is_emoticon())
                .map(|e| e.surface.clone()),
        );
        SentimentLexicon {
            entries,
            emoticons,
            warnings: self.warnings,
        }
    }
}
