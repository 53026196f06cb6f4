//! Reference transcription of the scoring algorithm.
//!
//! Deliberately naive and kept apart from [`crate::scorer`]: it uses the
//! fractional scale (strong = 1, weak = 0.5) and walks the original branch
//! structure line by line. It is used to label synthetic corpora and to
//! cross-check the production scorer; it shares no scoring code with it.

use crate::lexicon::{Polarity, SentimentLexicon, Strength};
use crate::scorer::{NegationMode, SentimentLabel};
use crate::tokenizer::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleVerdict {
    /// Final score on the fractional scale. Frozen at the point of exit when
    /// a blind negation word was seen.
    pub score: f64,
    pub sentiment: SentimentLabel,
    pub blind_negation: bool,
}

pub fn oracle_score(
    tokens: &[Token<'_>],
    lexicon: &SentimentLexicon,
    mode: NegationMode,
    score_hashtag_words: bool,
) -> OracleVerdict {
    let mut senti_score: f64 = 0.0;
    let mut negation_words = 0usize;

    for token in tokens {
        let candidate = match token.kind {
            TokenKind::Word | TokenKind::Emoticon => true,
            TokenKind::Hashtag => score_hashtag_words,
            TokenKind::Mention | TokenKind::Url => false,
        };
        if !candidate {
            continue;
        }
        // "for each word that exists in the dictionary"
        let entry = match lexicon.lookup(token.surface.as_ref()) {
            Some(entry) => entry,
            None => continue,
        };
        let polarity = entry.polarity;
        let strength = entry.strength;

        if polarity == Polarity::BlindNegation {
            return OracleVerdict {
                score: senti_score,
                sentiment: SentimentLabel::Negative,
                blind_negation: true,
            };
        } else {
            if polarity == Polarity::Positive && strength == Strength::StrongSubj {
                senti_score = senti_score + 1.0;
            } else if polarity == Polarity::Positive && strength == Strength::WeakSubj {
                senti_score = senti_score + 0.5;
            } else if polarity == Polarity::Negative && strength == Strength::StrongSubj {
                senti_score = senti_score - 1.0;
            } else if polarity == Polarity::Negative && strength == Strength::WeakSubj {
                senti_score = senti_score - 0.5;
            }
        }
        if polarity == Polarity::Negation {
            match mode {
                NegationMode::Literal => senti_score = senti_score * -1.0,
                NegationMode::FinalFlip => negation_words += 1,
            }
        }
    }

    if mode == NegationMode::FinalFlip && negation_words % 2 == 1 {
        senti_score = senti_score * -1.0;
    }

    let sentiment = if senti_score > 0.0 {
        SentimentLabel::Positive
    } else if senti_score < 0.0 {
        SentimentLabel::Negative
    } else {
        SentimentLabel::Neutral
    };
    OracleVerdict {
        score: senti_score,
        sentiment,
        blind_negation: false,
    }
}
