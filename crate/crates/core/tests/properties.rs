mod common;

use proptest::prelude::*;
use sentiflux::evaluate::evaluate;
use sentiflux::lexicon::{LexiconEntry, LoadOptions, PartOfSpeech, Polarity, Strength};
use sentiflux::oracle::oracle_score;
use sentiflux::pipeline::{merge, Aggregate, LabelCounts};
use sentiflux::{
    score_tweet, tokenize, NegationMode, ScoringOptions, SentimentLabel, SentimentLexicon,
    TokenKind,
};

const VOCAB: &[&str] = &[
    "good", "bad", "great", "boring", "nice", "film", "okay", "not", "neither", "nor", "needed",
    "require", "abandoned", "abandon", ":)", ":(", ":D", ">:(", "the", "movie", "was", "#good",
    "#Gravity", "@bob", "http://t.co/x", "GOOD", "don't", "'quoted'", "wow", "2014",
];

const OOV: &[&str] = &["zzq", "blorp", "@someone", "http://x.y/z", "qux'd", "12345"];

fn tweet() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(VOCAB), 0..20).prop_map(|w| w.join(" "))
}

fn mode() -> impl Strategy<Value = NegationMode> {
    prop_oneof![Just(NegationMode::Literal), Just(NegationMode::FinalFlip)]
}

fn label() -> impl Strategy<Value = SentimentLabel> {
    prop::sample::select(SentimentLabel::ALL.to_vec())
}

fn counts() -> impl Strategy<Value = LabelCounts> {
    (0u64..50, 0u64..50, 0u64..50).prop_map(|(positive, negative, neutral)| LabelCounts {
        positive,
        negative,
        neutral,
    })
}

fn aggregate() -> impl Strategy<Value = Aggregate> {
    (
        counts(),
        prop::collection::btree_map("[a-e]{1,2}", counts(), 0..6),
        0u64..10,
    )
        .prop_map(|(counts, per_hashtag, records_skipped)| Aggregate {
            tweets_processed: counts.total(),
            counts,
            per_hashtag,
            records_skipped,
        })
}

fn doubled(lex: &SentimentLexicon) -> SentimentLexicon {
    // Weak terms become strong: every contribution doubles.
    let lines: Vec<String> = lex
        .entries()
        .into_iter()
        .map(|e| {
            let mut e = e.clone();
            if e.strength == Strength::WeakSubj && !e.polarity.is_structural() {
                e.strength = Strength::StrongSubj;
            }
            e.to_line()
        })
        .collect();
    SentimentLexicon::from_lines(lines, LoadOptions::strict()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn production_matches_oracle(text in tweet(), mode in mode(), hashtags in any::<bool>()) {
        let lex = common::golden_lexicon();
        let tokens = tokenize(&text, lex.emoticons());
        let s = score_tweet("p", &tokens, &lex, ScoringOptions { mode, score_hashtag_words: hashtags });
        let o = oracle_score(&tokens, &lex, mode, hashtags);
        prop_assert_eq!(s.label, o.sentiment);
        prop_assert_eq!(s.blind_negation_hit, o.blind_negation);
        prop_assert_eq!(s.score.half_units() as f64, o.score * 2.0);
    }

    #[test]
    fn tokens_are_ordered_and_reconstruct(text in "[a-zA-Z0-9#@:()'>_ ./\u{e9}\u{1F600}]{0,40}") {
        let emo = sentiflux::lexicon::EmoticonSet::new([":)", ":(", ">:(", ":D"]);
        let tokens = tokenize(&text, &emo);
        let mut last_end = 0;
        for t in &tokens {
            prop_assert!(t.span.start < t.span.end);
            prop_assert!(t.span.start >= last_end);
            prop_assert!(t.span.end <= text.len());
            last_end = t.span.end;
            let slice = &text[t.span.clone()];
            let expected = match t.kind {
                TokenKind::Word => slice.to_lowercase(),
                TokenKind::Hashtag => slice[1..].to_lowercase(),
                TokenKind::Mention => slice[1..].to_owned(),
                TokenKind::Emoticon | TokenKind::Url => slice.to_owned(),
            };
            prop_assert_eq!(t.surface.as_ref(), expected.as_str());
            if t.kind == TokenKind::Word {
                prop_assert!(!t.surface.contains(['#', '@']));
                prop_assert!(!t.surface.chars().any(char::is_whitespace));
            }
        }
        prop_assert_eq!(tokens, tokenize(&text, &emo));
    }

    #[test]
    fn blind_negation_forces_negative(text in tweet(), mode in mode()) {
        let lex = common::golden_lexicon();
        let s = score_tweet("p", &tokenize(&text, lex.emoticons()), &lex, ScoringOptions::with_mode(mode));
        if s.blind_negation_hit {
            prop_assert_eq!(s.label, SentimentLabel::Negative);
        }
    }

    #[test]
    fn two_negations_cancel_in_final_flip(
        words in prop::collection::vec(prop::sample::select(VOCAB), 0..15),
        i in 0usize..16,
        j in 0usize..17,
    ) {
        let lex = common::golden_lexicon();
        let opts = ScoringOptions::with_mode(NegationMode::FinalFlip);
        let base = words.join(" ");
        let mut more = words.clone();
        more.insert(i.min(more.len()), "not");
        more.insert(j.min(more.len()), "nor");
        let a = score_tweet("p", &tokenize(&base, lex.emoticons()), &lex, opts);
        let b = score_tweet("p", &tokenize(&more.join(" "), lex.emoticons()), &lex, opts);
        prop_assert_eq!(a.score, b.score);
        prop_assert_eq!(a.label, b.label);
    }

    #[test]
    fn unmatched_tokens_are_inert(
        words in prop::collection::vec(prop::sample::select(VOCAB), 0..15),
        inserts in prop::collection::vec((0usize..20, prop::sample::select(OOV)), 0..6),
        mode in mode(),
    ) {
        let lex = common::golden_lexicon();
        let opts = ScoringOptions::with_mode(mode);
        let mut noisy = words.clone();
        for (at, w) in inserts {
            noisy.insert(at.min(noisy.len()), w);
        }
        let a = score_tweet("p", &tokenize(&words.join(" "), lex.emoticons()), &lex, opts);
        let b = score_tweet("p", &tokenize(&noisy.join(" "), lex.emoticons()), &lex, opts);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn permuting_unmatched_tokens_is_inert(
        words in prop::collection::vec(prop::sample::select(VOCAB), 0..15),
        seed in any::<u64>(),
        mode in mode(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let lex = common::golden_lexicon();
        let opts = ScoringOptions::with_mode(mode);
        let mut shuffled = words.clone();
        let unmatched: Vec<usize> = (0..words.len())
            .filter(|&i| tokenize(words[i], lex.emoticons()).iter().all(|t| lex.lookup(&t.surface).is_none()
                || matches!(t.kind, TokenKind::Mention | TokenKind::Url)))
            .collect();
        let mut vals: Vec<&str> = unmatched.iter().map(|&i| words[i]).collect();
        vals.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        for (slot, v) in unmatched.iter().zip(vals) {
            shuffled[*slot] = v;
        }
        let a = score_tweet("p", &tokenize(&words.join(" "), lex.emoticons()), &lex, opts);
        let b = score_tweet("p", &tokenize(&shuffled.join(" "), lex.emoticons()), &lex, opts);
        prop_assert_eq!(a.score, b.score);
        prop_assert_eq!(a.label, b.label);
        prop_assert_eq!(a.matched, b.matched);
        prop_assert_eq!(a.negation_count, b.negation_count);
    }

    #[test]
    fn doubling_contributions_keeps_labels(text in tweet(), mode in mode()) {
        let lex = common::golden_lexicon();
        // Make every sentiment term weak, then compare against all-strong.
        let weak_lines: Vec<String> = lex.entries().into_iter().map(|e| {
            let mut e = e.clone();
            if !e.polarity.is_structural() {
                e.strength = Strength::WeakSubj;
            }
            e.to_line()
        }).collect();
        let weak = SentimentLexicon::from_lines(weak_lines, LoadOptions::strict()).unwrap();
        let strong = doubled(&weak);
        let opts = ScoringOptions::with_mode(mode);
        let a = score_tweet("p", &tokenize(&text, weak.emoticons()), &weak, opts);
        let b = score_tweet("p", &tokenize(&text, strong.emoticons()), &strong, opts);
        prop_assert_eq!(b.score.half_units(), 2 * a.score.half_units());
        prop_assert_eq!(a.label, b.label);
    }

    #[test]
    fn lexicon_round_trip(rows in prop::collection::btree_map(
        "[a-z]{1,8}|:[()DP]",
        (prop::sample::select(Strength::ALL.to_vec()),
         prop::sample::select(PartOfSpeech::ALL.to_vec()),
         any::<bool>(),
         prop::sample::select(Polarity::ALL.to_vec())),
        0..20,
    )) {
        let entries: Vec<LexiconEntry> = rows
            .into_iter()
            .map(|(surface, (strength, pos, stemmed, polarity))| LexiconEntry { surface, strength, pos, stemmed, polarity })
            .collect();
        let lines: Vec<String> = entries.iter().map(LexiconEntry::to_line).collect();
        let lex = SentimentLexicon::from_lines(&lines, LoadOptions::strict()).unwrap();
        let again = SentimentLexicon::from_lines(lex.to_tsv().lines(), LoadOptions::strict()).unwrap();
        prop_assert_eq!(lex.entries(), again.entries());
        prop_assert!(lex.entry_count() <= lines.len());
        for e in &entries {
            let key = if e.pos == PartOfSpeech::Emoticon { e.surface.clone() } else { e.surface.to_lowercase() };
            prop_assert!(lex.lookup(&key).is_some());
        }
    }

    #[test]
    fn lexicon_load_is_deterministic(lines in prop::collection::vec(
        "(weak|strong)subj\t[a-c]{1,2}\t(adj|noun)\t[yn]\t(positive|negation|bogus)", 0..15)) {
        let a = SentimentLexicon::from_lines(&lines, LoadOptions::default()).unwrap();
        let b = SentimentLexicon::from_lines(&lines, LoadOptions::default()).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
        prop_assert_eq!(a.warning_log(), b.warning_log());
        let well_formed = lines.iter().filter(|l| !l.ends_with("bogus")).count();
        prop_assert!(a.entry_count() <= well_formed);
    }

    #[test]
    fn merge_is_a_commutative_monoid(a in aggregate(), b in aggregate(), c in aggregate()) {
        prop_assert_eq!(merge(a.clone(), Aggregate::default()), a.clone());
        prop_assert_eq!(merge(Aggregate::default(), a.clone()), a.clone());
        prop_assert_eq!(merge(a.clone(), b.clone()), merge(b.clone(), a.clone()));
        prop_assert_eq!(
            merge(merge(a.clone(), b.clone()), c.clone()),
            merge(a, merge(b, c))
        );
    }

    #[test]
    fn evaluate_invariants(pairs in prop::collection::vec((label(), label()), 0..60), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let report = evaluate(pairs.clone());
        let mut shuffled = pairs.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(&report, &evaluate(shuffled));

        if let Some(acc) = report.accuracy {
            prop_assert!((0.0..=1.0).contains(&acc));
        }
        let diag = report.confusion.correct() as f64;
        let weighted: f64 = SentimentLabel::ALL.iter().map(|&l| {
            let m = report.per_class.get(l);
            m.recall.unwrap_or(0.0) * m.support as f64
        }).sum();
        prop_assert!((weighted - diag).abs() < 1e-9);

        let perfect = evaluate(pairs.iter().map(|&(p, _)| (p, p)));
        if !pairs.is_empty() {
            prop_assert_eq!(perfect.accuracy, Some(1.0));
        }
    }
}
