//! Seeded synthetic tweet corpus with oracle gold labels.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TweetRecord;
use crate::lexicon::{Polarity, SentimentLexicon};
use crate::oracle::oracle_score;
use crate::scorer::NegationMode;
use crate::tokenizer::tokenize;

const FILLER: &[&str] = &[
    "the", "a", "this", "that", "was", "is", "it", "with", "and", "to", "of", "just", "saw", "at",
    "tonight", "yesterday", "really", "so", "my", "friends", "cast", "ending", "director", "story",
    "ticket", "popcorn", "hours", "today", "again", "opening", "weekend", "2014", "3d", "imax",
];

const TOPICS: &[&str] = &[
    "gravity", "oscars", "interstellar", "inception", "avatar", "matrix", "titanic", "frozen",
    "hobbit", "ironman", "Gravity", "StarWars",
];

const SEPARATORS: &[&str] = &[" ", " ", " ", " ", ", ", "! ", "... ", "? "];

#[derive(Clone, Copy)]
enum Slot {
    Filler,
    Positive,
    Negative,
    Neutral,
    Emoticon,
    Negation,
    BlindNegation,
    Topic,
    LexiconHashtag,
    Mention,
    Url,
}

const SLOTS: [(Slot, u32); 11] = [
    (Slot::Filler, 400),
    (Slot::Positive, 140),
    (Slot::Negative, 140),
    (Slot::Neutral, 50),
    (Slot::Emoticon, 80),
    (Slot::Negation, 70),
    (Slot::BlindNegation, 12),
    (Slot::Topic, 50),
    (Slot::LexiconHashtag, 20),
    (Slot::Mention, 20),
    (Slot::Url, 18),
];

/// Share of tweets built only from filler, neutral terms and identifiers.
const CALM_TWEET_PERCENT: u32 = 10;

#[derive(Default)]
struct Pools {
    positive: Vec<String>,
    negative: Vec<String>,
    neutral: Vec<String>,
    emoticons: Vec<String>,
    negation: Vec<String>,
    blind: Vec<String>,
    filler: Vec<String>,
}

impl Pools {
    fn from_lexicon(lexicon: &SentimentLexicon) -> Self {
        let mut pools = Pools::default();
        // entries() is sorted, which keeps the pools and the corpus stable.
        for entry in lexicon.entries() {
            let surface = entry.surface.clone();
            if entry.is_emoticon() {
                match entry.polarity {
                    Polarity::Negation => pools.negation.push(surface),
                    Polarity::BlindNegation => pools.blind.push(surface),
                    _ => pools.emoticons.push(surface),
                }
                continue;
            }
            if !surface.chars().all(|c| c.is_alphanumeric() || c == '\'') {
                continue;
            }
            match entry.polarity {
                Polarity::Positive => pools.positive.push(surface),
                Polarity::Negative => pools.negative.push(surface),
                Polarity::Neutral => pools.neutral.push(surface),
                Polarity::Negation => pools.negation.push(surface),
                Polarity::BlindNegation => pools.blind.push(surface),
            }
        }
        pools.filler = FILLER
            .iter()
            .filter(|w| lexicon.lookup(w).is_none())
            .map(|w| w.to_string())
            .collect();
        if pools.filler.is_empty() {
            pools.filler = (0..16).map(|i| format!("qzx{i}")).collect();
        }
        pools
    }
}

/// Iterator over `n` synthetic tweets. See [`synth_corpus`].
pub struct SynthCorpus<'a> {
    lexicon: &'a SentimentLexicon,
    mode: NegationMode,
    rng: ChaCha8Rng,
    pools: Pools,
    slot_dist: WeightedIndex<u32>,
    seed: u64,
    next: usize,
    n: usize,
}

/// Deterministically generates `n` tweets of 5 to 20 tokens mixing lexicon
/// terms, emoticons, negations, blind negations, hashtags, mentions, URLs
/// and out-of-vocabulary filler. Gold labels come from the reference
/// transcription in [`crate::oracle`] under `mode`, with hashtag words
/// scored.
pub fn synth_corpus(
    n: usize,
    seed: u64,
    lexicon: &SentimentLexicon,
    mode: NegationMode,
) -> SynthCorpus<'_> {
    SynthCorpus {
        lexicon,
        mode,
        rng: ChaCha8Rng::seed_from_u64(seed),
        pools: Pools::from_lexicon(lexicon),
        slot_dist: WeightedIndex::new(SLOTS.iter().map(|(_, w)| *w)).expect("static weights"),
        seed,
        next: 0,
        n,
    }
}

impl SynthCorpus<'_> {
    fn pick<'p>(rng: &mut ChaCha8Rng, pool: &'p [String], fallback: &'p [String]) -> &'p str {
        pool.choose(rng)
            .or_else(|| fallback.choose(rng))
            .map(String::as_str)
            .unwrap_or("the")
    }

    fn push_piece(&mut self, slot: Slot, out: &mut String) {
        let rng = &mut self.rng;
        let p = &self.pools;
        match slot {
            Slot::Filler => out.push_str(Self::pick(rng, &p.filler, &p.filler)),
            Slot::Positive | Slot::Negative | Slot::Neutral | Slot::Negation | Slot::BlindNegation => {
                let pool = match slot {
                    Slot::Positive => &p.positive,
                    Slot::Negative => &p.negative,
                    Slot::Neutral => &p.neutral,
                    Slot::Negation => &p.negation,
                    _ => &p.blind,
                };
                let word = Self::pick(rng, pool, &p.filler);
                if rng.gen_ratio(1, 8) && !word.is_empty() {
                    out.push_str(&word.to_uppercase());
                } else {
                    out.push_str(word);
                }
            }
            Slot::Emoticon => out.push_str(Self::pick(rng, &p.emoticons, &p.filler)),
            Slot::Topic => {
                out.push('#');
                out.push_str(TOPICS.choose(rng).expect("non-empty"));
            }
            Slot::LexiconHashtag => {
                let pool = if rng.gen_bool(0.5) { &p.positive } else { &p.negative };
                out.push('#');
                out.push_str(Self::pick(rng, pool, &p.filler));
            }
            Slot::Mention => {
                let k: u32 = rng.gen_range(0..500);
                out.push_str(&format!("@user_{k}"));
            }
            Slot::Url => {
                let k: u32 = rng.gen_range(0..100_000);
                out.push_str(&format!("http://t.co/{k:x}"));
            }
        }
    }

    fn compose(&mut self) -> String {
        let len = self.rng.gen_range(5..=20);
        let calm = self.rng.gen_range(0..100) < CALM_TWEET_PERCENT;
        let mut text = String::with_capacity(len * 8);
        for i in 0..len {
            if i > 0 {
                text.push_str(SEPARATORS.choose(&mut self.rng).expect("non-empty"));
            }
            let slot = if calm {
                match self.rng.gen_range(0..10) {
                    0 => Slot::Neutral,
                    1 => Slot::Topic,
                    2 => Slot::Mention,
                    _ => Slot::Filler,
                }
            } else {
                SLOTS[self.slot_dist.sample(&mut self.rng)].0
            };
            self.push_piece(slot, &mut text);
        }
        text
    }
}

impl Iterator for SynthCorpus<'_> {
    type Item = TweetRecord;

    fn next(&mut self) -> Option<TweetRecord> {
        if self.next >= self.n {
            return None;
        }
        let text = self.compose();
        let tokens = tokenize(&text, self.lexicon.emoticons());
        let verdict = oracle_score(&tokens, self.lexicon, self.mode, true);
        let id = format!("synth-{}-{}", self.seed, self.next);
        self.next += 1;
        Some(TweetRecord::new(id, text).with_gold(verdict.sentiment))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.n - self.next;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for SynthCorpus<'_> {}
