//! Parallel batch engine: shard records into chunks, score them on a pool of
//! workers, and merge worker-local aggregates once at the end.
//!
//! Aggregates form a commutative monoid under [`merge`], so the final
//! [`BatchResult`] does not depend on how records were distributed.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::ingest::{synth_corpus, IngestError, TweetRecord};
use crate::lexicon::SentimentLexicon;
use crate::scorer::{score_text, MatchedTerm, NegationMode, ScoredTweet, ScoringOptions, SentimentLabel};

pub const DEFAULT_CHUNK_SIZE: usize = 1024;

/// Tweets in the reference run.
pub const REFERENCE_TWEETS: u64 = 674_412;
/// Wall-clock seconds of the reference run.
pub const REFERENCE_SECONDS: f64 = 14.8;

/// Throughput of the reference run, about 45,568 tweets per second.
pub fn reference_tps() -> f64 {
    REFERENCE_TWEETS as f64 / REFERENCE_SECONDS
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct LabelCounts {
    pub positive: u64,
    pub negative: u64,
    pub neutral: u64,
}

impl LabelCounts {
    pub fn add(&mut self, label: SentimentLabel) {
        match label {
            SentimentLabel::Positive => self.positive += 1,
            SentimentLabel::Negative => self.negative += 1,
            SentimentLabel::Neutral => self.neutral += 1,
        }
    }

    pub fn get(&self, label: SentimentLabel) -> u64 {
        match label {
            SentimentLabel::Positive => self.positive,
            SentimentLabel::Negative => self.negative,
            SentimentLabel::Neutral => self.neutral,
        }
    }

    pub fn total(&self) -> u64 {
        self.positive + self.negative + self.neutral
    }

    fn merge_from(&mut self, other: &LabelCounts) {
        self.positive += other.positive;
        self.negative += other.negative;
        self.neutral += other.neutral;
    }
}

/// Order-independent partial aggregate over a set of records.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub counts: LabelCounts,
    pub per_hashtag: BTreeMap<String, LabelCounts>,
    pub tweets_processed: u64,
    pub records_skipped: u64,
}

impl Aggregate {
    pub fn record(&mut self, scored: &ScoredTweet) {
        self.tweets_processed += 1;
        self.counts.add(scored.label);
        for tag in &scored.hashtags {
            match self.per_hashtag.get_mut(tag) {
                Some(c) => c.add(scored.label),
                None => {
                    let mut c = LabelCounts::default();
                    c.add(scored.label);
                    self.per_hashtag.insert(tag.clone(), c);
                }
            }
        }
    }

    pub fn merge_from(&mut self, other: Aggregate) {
        self.counts.merge_from(&other.counts);
        self.tweets_processed += other.tweets_processed;
        self.records_skipped += other.records_skipped;
        for (tag, c) in other.per_hashtag {
            self.per_hashtag.entry(tag).or_default().merge_from(&c);
        }
    }

    /// Hashtags by descending total, ties broken alphabetically.
    pub fn top_hashtags(&self, k: usize) -> Vec<(&str, LabelCounts)> {
        let mut all: Vec<_> = self
            .per_hashtag
            .iter()
            .map(|(t, c)| (t.as_str(), *c))
            .collect();
        all.sort_by(|a, b| b.1.total().cmp(&a.1.total()).then(a.0.cmp(b.0)));
        all.truncate(k);
        all
    }
}

/// Pointwise sum of two aggregates over disjoint record sets.
pub fn merge(mut a: Aggregate, b: Aggregate) -> Aggregate {
    a.merge_from(b);
    a
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchResult {
    pub aggregate: Aggregate,
    pub elapsed: Duration,
}

impl BatchResult {
    pub fn counts(&self) -> LabelCounts {
        self.aggregate.counts
    }

    pub fn tweets_processed(&self) -> u64 {
        self.aggregate.tweets_processed
    }

    pub fn records_skipped(&self) -> u64 {
        self.aggregate.records_skipped
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1000.0
    }

    pub fn throughput_tps(&self) -> f64 {
        let secs = self.elapsed.as_secs_f64();
        if secs > 0.0 {
            self.aggregate.tweets_processed as f64 / secs
        } else {
            0.0
        }
    }
}

#[derive(Debug, Error)]
pub enum SinkError {
    #[error("sink write failed: {0}")]
    Io(#[from] io::Error),
    #[error("sink rejected result: {0}")]
    Rejected(String),
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Sink(#[from] SinkError),
    #[error("parallelism must be at least 1")]
    ZeroParallelism,
}

/// Consumer of per-tweet results. Called concurrently from workers, one
/// chunk at a time; `records[i]` produced `scored[i]`. `seq` numbers chunks
/// from 0 in input order, so a sink can restore ordering if it needs to.
pub trait ResultSink: Sync {
    fn accept(
        &self,
        seq: u64,
        records: &[TweetRecord],
        scored: &[ScoredTweet],
    ) -> Result<(), SinkError>;
}

/// Wraps a single-threaded consumer so workers can share it.
pub struct SerializingSink<F> {
    inner: Mutex<F>,
}

impl<F> SerializingSink<F>
where
    F: FnMut(&TweetRecord, &ScoredTweet) -> Result<(), SinkError> + Send,
{
    pub fn new(consumer: F) -> Self {
        SerializingSink {
            inner: Mutex::new(consumer),
        }
    }

    pub fn into_inner(self) -> F {
        self.inner.into_inner().unwrap_or_else(|p| p.into_inner())
    }
}

impl<F> ResultSink for SerializingSink<F>
where
    F: FnMut(&TweetRecord, &ScoredTweet) -> Result<(), SinkError> + Send,
{
    fn accept(
        &self,
        _seq: u64,
        records: &[TweetRecord],
        scored: &[ScoredTweet],
    ) -> Result<(), SinkError> {
        let mut consumer = self.inner.lock().unwrap_or_else(|p| p.into_inner());
        for (r, s) in records.iter().zip(scored) {
            consumer(r, s)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ScoredTweetLine<'a> {
    id: &'a str,
    score: i64,
    score_display: f64,
    label: SentimentLabel,
    blind_negation: bool,
    hashtags: &'a [String],
    matched: &'a [MatchedTerm],
    negations: u32,
}

/// Appends one JSON Lines record for `scored` to `out`.
pub fn write_scored_jsonl<W: Write>(out: &mut W, scored: &ScoredTweet) -> io::Result<()> {
    let line = ScoredTweetLine {
        id: &scored.tweet_id,
        score: scored.score.half_units(),
        score_display: scored.score.display_value(),
        label: scored.label,
        blind_negation: scored.blind_negation_hit,
        hashtags: &scored.hashtags,
        matched: &scored.matched,
        negations: scored.negation_count,
    };
    serde_json::to_writer(&mut *out, &line)?;
    out.write_all(b"\n")
}

struct OrderedWriter<W> {
    out: W,
    next_seq: u64,
    pending: BTreeMap<u64, Vec<u8>>,
}

/// Streams results as JSON Lines in input order. Chunks are rendered outside
/// the lock; chunks that finish early wait until their predecessors are out.
pub struct JsonlSink<W> {
    state: Mutex<OrderedWriter<W>>,
}

impl<W: Write + Send> JsonlSink<W> {
    pub fn new(out: W) -> Self {
        JsonlSink {
            state: Mutex::new(OrderedWriter {
                out,
                next_seq: 0,
                pending: BTreeMap::new(),
            }),
        }
    }

    pub fn into_inner(self) -> W {
        let state = self.state.into_inner().unwrap_or_else(|p| p.into_inner());
        debug_assert!(state.pending.is_empty());
        state.out
    }
}

impl<W: Write + Send> ResultSink for JsonlSink<W> {
    fn accept(
        &self,
        seq: u64,
        _records: &[TweetRecord],
        scored: &[ScoredTweet],
    ) -> Result<(), SinkError> {
        let mut buf = Vec::with_capacity(scored.len() * 160);
        for s in scored {
            write_scored_jsonl(&mut buf, s)?;
        }
        let mut state = self.state.lock().unwrap_or_else(|p| p.into_inner());
        state.pending.insert(seq, buf);
        loop {
            let next = state.next_seq;
            let Some(ready) = state.pending.remove(&next) else {
                break;
            };
            state.out.write_all(&ready)?;
            state.next_seq += 1;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BatchConfig {
    pub scoring: ScoringOptions,
    pub parallelism: usize,
    pub chunk_size: usize,
}

impl BatchConfig {
    pub fn new(mode: NegationMode, parallelism: usize) -> Self {
        BatchConfig {
            scoring: ScoringOptions::with_mode(mode),
            parallelism,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }
}

fn worker(
    chunks: crossbeam_channel::Receiver<(u64, Vec<TweetRecord>)>,
    lexicon: &SentimentLexicon,
    options: ScoringOptions,
    sink: Option<&dyn ResultSink>,
    abort: &AtomicBool,
) -> (Aggregate, Option<SinkError>) {
    let mut agg = Aggregate::default();
    let mut scored = Vec::new();
    for (seq, chunk) in chunks {
        if abort.load(Ordering::Relaxed) {
            break;
        }
        match sink {
            None => {
                for rec in &chunk {
                    agg.record(&score_text(rec.id.as_str(), &rec.text, lexicon, options));
                }
            }
            Some(sink) => {
                scored.clear();
                scored.extend(
                    chunk
                        .iter()
                        .map(|rec| score_text(rec.id.as_str(), &rec.text, lexicon, options)),
                );
                if let Err(e) = sink.accept(seq, &chunk, &scored) {
                    abort.store(true, Ordering::Relaxed);
                    return (agg, Some(e));
                }
                for s in &scored {
                    agg.record(s);
                }
            }
        }
    }
    (agg, None)
}

/// Scores every record of `tweets` exactly once on up to `parallelism`
/// workers. Malformed records are counted as skipped; a fatal ingest error
/// or a sink failure aborts the run.
pub fn run_batch<I>(
    tweets: I,
    lexicon: &SentimentLexicon,
    config: BatchConfig,
    sink: Option<&dyn ResultSink>,
) -> Result<BatchResult, PipelineError>
where
    I: IntoIterator<Item = Result<TweetRecord, IngestError>>,
{
    if config.parallelism == 0 {
        return Err(PipelineError::ZeroParallelism);
    }
    let chunk_size = config.chunk_size.max(1);
    let start = Instant::now();
    let abort = AtomicBool::new(false);
    let (tx, rx) = crossbeam_channel::bounded::<(u64, Vec<TweetRecord>)>(config.parallelism * 2);

    let (total, failure) = thread::scope(|scope| {
        let handles: Vec<_> = (0..config.parallelism)
            .map(|_| {
                let rx = rx.clone();
                let abort = &abort;
                scope.spawn(move || worker(rx, lexicon, config.scoring, sink, abort))
            })
            .collect();
        drop(rx);

        let mut skipped = 0u64;
        let mut fatal: Option<PipelineError> = None;
        let mut chunk = Vec::with_capacity(chunk_size);
        let mut seq = 0u64;
        for item in tweets {
            if abort.load(Ordering::Relaxed) {
                break;
            }
            match item {
                Ok(rec) => {
                    chunk.push(rec);
                    if chunk.len() == chunk_size {
                        let full = std::mem::replace(&mut chunk, Vec::with_capacity(chunk_size));
                        if tx.send((seq, full)).is_err() {
                            break;
                        }
                        seq += 1;
                    }
                }
                Err(e) if !e.is_fatal() => skipped += 1,
                Err(e) => {
                    abort.store(true, Ordering::Relaxed);
                    fatal = Some(e.into());
                    break;
                }
            }
        }
        if !chunk.is_empty() && fatal.is_none() {
            let _ = tx.send((seq, chunk));
        }
        drop(tx);

        let mut total = Aggregate {
            records_skipped: skipped,
            ..Aggregate::default()
        };
        for handle in handles {
            let (agg, err) = handle.join().expect("scoring worker panicked");
            total.merge_from(agg);
            if fatal.is_none() {
                fatal = err.map(PipelineError::from);
            }
        }
        (total, fatal)
    });

    if let Some(err) = failure {
        return Err(err);
    }
    Ok(BatchResult {
        aggregate: total,
        elapsed: start.elapsed(),
    })
}

/// [`run_batch`] over records that cannot fail.
pub fn run_batch_records<I>(
    records: I,
    lexicon: &SentimentLexicon,
    config: BatchConfig,
    sink: Option<&dyn ResultSink>,
) -> Result<BatchResult, PipelineError>
where
    I: IntoIterator<Item = TweetRecord>,
{
    run_batch(records.into_iter().map(Ok), lexicon, config, sink)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub n: usize,
    pub seed: u64,
    pub mode: NegationMode,
    pub parallelism: usize,
    pub result: BatchResult,
    /// Time spent generating the corpus; not part of the measured run.
    pub generation_elapsed: Duration,
}

impl BenchmarkReport {
    pub fn meets_reference(&self) -> bool {
        self.result.throughput_tps() >= reference_tps()
    }
}

/// Generates `n` synthetic tweets up front, then times [`run_batch`] over
/// them so the measurement covers scoring and aggregation only.
pub fn benchmark(
    n: usize,
    seed: u64,
    lexicon: &SentimentLexicon,
    mode: NegationMode,
    parallelism: usize,
) -> Result<BenchmarkReport, PipelineError> {
    let gen_start = Instant::now();
    let corpus: Vec<TweetRecord> = synth_corpus(n, seed, lexicon, mode).collect();
    let generation_elapsed = gen_start.elapsed();
    let result = run_batch_records(corpus, lexicon, BatchConfig::new(mode, parallelism), None)?;
    Ok(BenchmarkReport {
        n,
        seed,
        mode,
        parallelism,
        result,
        generation_elapsed,
    })
}
