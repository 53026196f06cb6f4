//! Per-tweet sentiment scoring.
//!
//! Scores are kept as integer half-units: a strong term moves the score by
//! 2, a weak one by 1. Zero comparisons are therefore exact.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::lexicon::{LexiconEntry, Polarity, SentimentLexicon, Strength};
use crate::tokenizer::{extract_hashtags, tokenize, Token, TokenKind};

/// Signed tweet score in half-units.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SentiScore(pub i64);

impl SentiScore {
    pub fn half_units(self) -> i64 {
        self.0
    }

    /// Score on the conventional scale where a strong term counts 1.
    pub fn display_value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for SentiScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Positive,
    Negative,
    Neutral,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 3] = [
        SentimentLabel::Positive,
        SentimentLabel::Negative,
        SentimentLabel::Neutral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Positive => "positive",
            SentimentLabel::Negative => "negative",
            SentimentLabel::Neutral => "neutral",
        }
    }

    /// Dense index, in `ALL` order.
    pub fn index(self) -> usize {
        match self {
            SentimentLabel::Positive => 0,
            SentimentLabel::Negative => 1,
            SentimentLabel::Neutral => 2,
        }
    }
}

impl FromStr for SentimentLabel {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        SentimentLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or(())
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How negation words act on the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NegationMode {
    /// Multiply the running total by -1 at each negation word.
    Literal,
    /// Count negation words; an odd count flips the final total.
    #[default]
    FinalFlip,
}

impl NegationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NegationMode::Literal => "literal",
            NegationMode::FinalFlip => "final-flip",
        }
    }
}

impl FromStr for NegationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "literal" => Ok(NegationMode::Literal),
            "final-flip" => Ok(NegationMode::FinalFlip),
            other => Err(format!("unknown negation mode {other:?} (expected literal or final-flip)")),
        }
    }
}

impl fmt::Display for NegationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoringOptions {
    pub mode: NegationMode,
    /// Look up the inner word of `#hashtags` as well.
    pub score_hashtag_words: bool,
}

impl Default for ScoringOptions {
    fn default() -> Self {
        ScoringOptions {
            mode: NegationMode::default(),
            score_hashtag_words: true,
        }
    }
}

impl ScoringOptions {
    pub fn with_mode(mode: NegationMode) -> Self {
        ScoringOptions {
            mode,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchedTerm {
    pub term: String,
    pub polarity: Polarity,
    pub strength: Strength,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredTweet {
    pub tweet_id: String,
    pub score: SentiScore,
    pub label: SentimentLabel,
    pub blind_negation_hit: bool,
    pub matched: Vec<MatchedTerm>,
    pub hashtags: Vec<String>,
    pub negation_count: u32,
}

/// Half-unit contribution of a sentiment-bearing entry. `None` for negation
/// and blind negation, which are handled by the scoring loop itself.
#[inline]
pub fn word_contribution(entry: &LexiconEntry) -> Option<i64> {
    let magnitude = match entry.strength {
        Strength::StrongSubj => 2,
        Strength::WeakSubj => 1,
    };
    match entry.polarity {
        Polarity::Positive => Some(magnitude),
        Polarity::Negative => Some(-magnitude),
        Polarity::Neutral => Some(0),
        Polarity::Negation | Polarity::BlindNegation => None,
    }
}

#[inline]
pub fn label_from_score(score: SentiScore) -> SentimentLabel {
    match score.0.signum() {
        1 => SentimentLabel::Positive,
        -1 => SentimentLabel::Negative,
        _ => SentimentLabel::Neutral,
    }
}

#[inline]
fn is_scored(kind: TokenKind, score_hashtag_words: bool) -> bool {
    match kind {
        TokenKind::Word | TokenKind::Emoticon => true,
        TokenKind::Hashtag => score_hashtag_words,
        TokenKind::Mention | TokenKind::Url => false,
    }
}

pub fn score_tweet(
    tweet_id: impl Into<String>,
    tokens: &[Token<'_>],
    lexicon: &SentimentLexicon,
    options: ScoringOptions,
) -> ScoredTweet {
    let mut total: i64 = 0;
    let mut negations: u32 = 0;
    let mut blind = false;
    let mut matched = Vec::new();

    for token in tokens {
        if !is_scored(token.kind, options.score_hashtag_words) {
            continue;
        }
        let Some(entry) = lexicon.lookup(&token.surface) else {
            continue;
        };
        matched.push(MatchedTerm {
            term: entry.surface.clone(),
            polarity: entry.polarity,
            strength: entry.strength,
        });
        match entry.polarity {
            Polarity::BlindNegation => {
                blind = true;
                break;
            }
            Polarity::Negation => {
                negations += 1;
                if options.mode == NegationMode::Literal {
                    total = -total;
                }
            }
            _ => total += word_contribution(entry).unwrap_or(0),
        }
    }

    if !blind && options.mode == NegationMode::FinalFlip && negations % 2 == 1 {
        total = -total;
    }
    let score = SentiScore(total);
    let label = if blind {
        SentimentLabel::Negative
    } else {
        label_from_score(score)
    };

    ScoredTweet {
        tweet_id: tweet_id.into(),
        score,
        label,
        blind_negation_hit: blind,
        matched,
        hashtags: extract_hashtags(tokens),
        negation_count: negations,
    }
}

/// Tokenizes and scores raw text against `lexicon`.
pub fn score_text(
    tweet_id: impl Into<String>,
    text: &str,
    lexicon: &SentimentLexicon,
    options: ScoringOptions,
) -> ScoredTweet {
    let tokens = tokenize(text, lexicon.emoticons());
    score_tweet(tweet_id, &tokens, lexicon, options)
}
