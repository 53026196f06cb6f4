//! Lexicon-based sentiment scoring for tweets.
//!
//! The pieces, in dataflow order:
//!
//! - [`lexicon`]: load and index a tab-separated sentiment dictionary
//! - [`tokenizer`]: split tweets into words, hashtags, emoticons, mentions, URLs
//! - [`scorer`]: accumulate term strengths, apply negation and blind negation
//! - [`ingest`]: stream records from JSONL/text/TSV, or generate a synthetic corpus
//! - [`pipeline`]: score records on a worker pool and merge aggregates
//! - [`evaluate`]: confusion matrix and accuracy against gold labels
//!
//! [`oracle`] holds a separate, naive transcription of the scoring rules used
//! to label synthetic data and cross-check [`scorer`].

pub mod cli;
pub mod evaluate;
pub mod ingest;
pub mod lexicon;
pub mod oracle;
pub mod pipeline;
pub mod scorer;
pub mod tokenizer;

pub use evaluate::{evaluate, ConfusionMatrix, EvalReport};
pub use ingest::{read_tweets, synth_corpus, InputFormat, TweetRecord};
pub use lexicon::{LexiconEntry, LoadOptions, PartOfSpeech, Polarity, SentimentLexicon, Strength};
pub use pipeline::{benchmark, merge, run_batch, Aggregate, BatchConfig, BatchResult, LabelCounts};
pub use scorer::{
    label_from_score, score_text, score_tweet, word_contribution, NegationMode, ScoredTweet,
    ScoringOptions, SentiScore, SentimentLabel,
};
pub use tokenizer::{extract_hashtags, tokenize, Token, TokenKind};
