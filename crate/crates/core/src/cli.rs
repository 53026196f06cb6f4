//! Command-line front end.
//!
//! Machine-readable output (JSONL or one JSON object) goes to stdout or
//! `--output`; human-readable summaries go to stderr. Exit status is 0 on
//! success, 1 on runtime failure and 2 on usage errors.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::evaluate::{ConfusionMatrix, EvalReport};
use crate::ingest::{read_tweets, IngestError, InputFormat, TweetRecord};
use crate::lexicon::{LexiconError, LoadOptions, LoadWarning, PartOfSpeech, Polarity, RowError, SentimentLexicon};
use crate::pipeline::{
    self, reference_tps, run_batch, BatchConfig, BatchResult, JsonlSink, ResultSink, SinkError,
    REFERENCE_SECONDS, REFERENCE_TWEETS,
};
use crate::scorer::{NegationMode, ScoredTweet, ScoringOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Malformed input records echoed to stderr before going quiet.
const MAX_REPORTED_SKIPS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "sentiflux", version, about = "Lexicon-based tweet sentiment scoring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every tweet and stream JSONL results.
    Analyze(AnalyzeArgs),
    /// Time scoring over a generated corpus.
    Benchmark(BenchmarkArgs),
    /// Compare predictions against gold labels.
    Evaluate(EvaluateArgs),
    /// Validate a lexicon file.
    LexiconCheck(LexiconArgs),
}

#[derive(Debug, Args)]
pub struct LexiconArgs {
    /// Tab-separated lexicon file.
    #[arg(long, env = "SENTIFLUX_LEXICON")]
    pub lexicon: PathBuf,
    /// Fail on the first malformed lexicon line.
    #[arg(long)]
    pub strict_lexicon: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Literal,
    FinalFlip,
}

impl From<ModeArg> for NegationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Literal => NegationMode::Literal,
            ModeArg::FinalFlip => NegationMode::FinalFlip,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Jsonl,
    Text,
    LabeledTsv,
}

impl From<FormatArg> for InputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Jsonl => InputFormat::Jsonl,
            FormatArg::Text => InputFormat::Text,
            FormatArg::LabeledTsv => InputFormat::LabeledTsv,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScoringArgs {
    #[arg(long, value_enum, default_value = "final-flip")]
    pub mode: ModeArg,
    /// Worker threads [default: logical cores].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub parallelism: Option<u64>,
}

impl ScoringArgs {
    fn parallelism(&self) -> usize {
        self.parallelism.map_or_else(
            || std::thread::available_parallelism().map_or(1, |n| n.get()),
            |p| p as usize,
        )
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    /// Input path, or `-` for stdin.
    #[arg(long, default_value = "-")]
    pub input: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Do not look up the words inside hashtags.
    #[arg(long)]
    pub no_hashtag_words: bool,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    pub output: String,
    #[arg(long, default_value_t = 10)]
    pub top_hashtags: usize,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[arg(long, default_value = "-")]
    pub input: String,
    /// Must carry gold labels: labeled-tsv, or jsonl with a "label" field.
    #[arg(long, value_enum, default_value = "labeled-tsv")]
    pub format: FormatArg,
    #[arg(long)]
    pub no_hashtag_words: bool,
    #[arg(long, default_value = "-")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    /// Number of synthetic tweets.
    #[arg(long, default_value_t = REFERENCE_TWEETS, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Runs the CLI with explicit arguments and streams; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };

    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args, stdout, stderr),
        Command::Benchmark(args) => cmd_benchmark(&args, stdout, stderr),
        Command::Evaluate(args) => cmd_evaluate(&args, stdout, stderr),
        Command::LexiconCheck(args) => cmd_lexicon_check(&args, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn load_lexicon(args: &LexiconArgs, stderr: &mut dyn Write) -> Result<SentimentLexicon, CliError> {
    let options = LoadOptions {
        strict: args.strict_lexicon,
    };
    let lexicon = SentimentLexicon::from_path(&args.lexicon, options).map_err(|e| match e {
        LexiconError::Unreadable { .. } => CliError::Runtime(e.to_string()),
        LexiconError::Row(row) => {
            CliError::Runtime(format!("lexicon {}: {row}", args.lexicon.display()))
        }
    })?;
    for w in lexicon.warnings() {
        writeln!(stderr, "lexicon {}: {w}", args.lexicon.display())?;
    }
    Ok(lexicon)
}

enum Output<'a> {
    Stdout(&'a mut (dyn Write + Send)),
    File(BufWriter<File>),
}

impl Write for Output<'_> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Output::Stdout(w) => w.write(buf),
            Output::File(f) => f.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            Output::Stdout(w) => w.flush(),
            Output::File(f) => f.flush(),
        }
    }
}

fn open_output<'a>(path: &str, stdout: &'a mut (dyn Write + Send)) -> Result<Output<'a>, CliError> {
    if path == "-" {
        return Ok(Output::Stdout(stdout));
    }
    let file = File::create(path)
        .map_err(|e| CliError::Runtime(format!("cannot create output {path}: {e}")))?;
    Ok(Output::File(BufWriter::new(file)))
}

/// Feeds records to the pipeline and echoes the first few skipped ones.
fn reporting_records<'s, I>(
    records: I,
    stderr: &'s mut dyn Write,
) -> impl Iterator<Item = Result<TweetRecord, IngestError>> + 's
where
    I: Iterator<Item = Result<TweetRecord, IngestError>> + 's,
{
    let mut reported = 0usize;
    records.inspect(move |item| {
        if let Err(e) = item {
            if !e.is_fatal() && reported < MAX_REPORTED_SKIPS {
                let _ = writeln!(stderr, "warning: {e}");
                reported += 1;
            }
        }
    })
}

fn write_summary(
    result: &BatchResult,
    parallelism: usize,
    top_k: usize,
    stderr: &mut dyn Write,
) -> io::Result<()> {
    let c = result.counts();
    writeln!(
        stderr,
        "tweets {}  skipped {}  positive {}  negative {}  neutral {}",
        result.tweets_processed(),
        result.records_skipped(),
        c.positive,
        c.negative,
        c.neutral
    )?;
    writeln!(
        stderr,
        "elapsed {:.1} ms  throughput {:.0} tweets/s  parallelism {}",
        result.elapsed_ms(),
        result.throughput_tps(),
        parallelism
    )?;
    let top = result.aggregate.top_hashtags(top_k);
    if !top.is_empty() {
        writeln!(stderr, "top hashtags:")?;
        for (tag, counts) in top {
            writeln!(
                stderr,
                "  #{tag:<24} {:>8} (+{} -{} ={})",
                counts.total(),
                counts.positive,
                counts.negative,
                counts.neutral
            )?;
        }
    }
    Ok(())
}

fn cmd_analyze(
    args: &AnalyzeArgs,
    stdout: &mut (dyn Write + Send),
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let lexicon = load_lexicon(&args.lexicon, stderr)?;
    let records = read_tweets(&args.input, args.format.into())?;
    let config = BatchConfig {
        scoring: ScoringOptions {
            mode: args.scoring.mode.into(),
            score_hashtag_words: !args.no_hashtag_words,
        },
        parallelism: args.scoring.parallelism(),
        chunk_size: pipeline::DEFAULT_CHUNK_SIZE,
    };

    let output = open_output(&args.output, stdout)?;
    let sink = JsonlSink::new(output);
    let mut log = Vec::new();
    let result = run_batch(reporting_records(records, &mut log), &lexicon, config, Some(&sink));
    stderr.write_all(&log)?;
    let result = result?;
    sink.into_inner().flush()?;

    write_summary(&result, config.parallelism, args.top_hashtags, stderr)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BenchmarkJson {
    n: u64,
    seed: u64,
    mode: &'static str,
    parallelism: usize,
    tweets_processed: u64,
    elapsed_ms: f64,
    throughput_tps: f64,
    reference_tweets: u64,
    reference_seconds: f64,
    reference_tps: f64,
    meets_reference: bool,
    counts: pipeline::LabelCounts,
}

fn cmd_benchmark(
    args: &BenchmarkArgs,
    stdout: &mut (dyn Write + Send),
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let lexicon = load_lexicon(&args.lexicon, stderr)?;
    if lexicon.is_empty() {
        return Err(CliError::Runtime(format!(
            "lexicon {} has no entries",
            args.lexicon.lexicon.display()
        )));
    }
    let n = usize::try_from(args.n).map_err(|_| CliError::Usage("--n is too large".into()))?;
    let parallelism = args.scoring.parallelism();
    let report = pipeline::benchmark(n, args.seed, &lexicon, args.scoring.mode.into(), parallelism)?;
    let r = &report.result;

    let json = BenchmarkJson {
        n: args.n,
        seed: args.seed,
        mode: report.mode.as_str(),
        parallelism,
        tweets_processed: r.tweets_processed(),
        elapsed_ms: r.elapsed_ms(),
        throughput_tps: r.throughput_tps(),
        reference_tweets: REFERENCE_TWEETS,
        reference_seconds: REFERENCE_SECONDS,
        reference_tps: reference_tps(),
        meets_reference: report.meets_reference(),
        counts: r.counts(),
    };
    serde_json::to_writer(&mut *stdout, &json)?;
    writeln!(stdout)?;

    writeln!(
        stderr,
        "corpus generated in {:.1} ms (not timed)",
        report.generation_elapsed.as_secs_f64() * 1000.0
    )?;
    writeln!(stderr, "{:<12} {:>12} {:>12} {:>16}", "", "tweets", "seconds", "tweets/s")?;
    writeln!(
        stderr,
        "{:<12} {:>12} {:>12.3} {:>16.0}",
        "this run",
        r.tweets_processed(),
        r.elapsed.as_secs_f64(),
        r.throughput_tps()
    )?;
    writeln!(
        stderr,
        "{:<12} {:>12} {:>12.3} {:>16.0}",
        "reference",
        REFERENCE_TWEETS,
        REFERENCE_SECONDS,
        reference_tps()
    )?;
    writeln!(stderr, "parallelism {parallelism}, mode {}", report.mode)?;
    Ok(EXIT_OK)
}

#[derive(Default)]
struct Tally {
    confusion: ConfusionMatrix,
    missing_gold: u64,
}

/// Pairs each prediction with the record's gold label.
#[derive(Default)]
struct EvalSink {
    tally: Mutex<Tally>,
}

impl ResultSink for EvalSink {
    fn accept(
        &self,
        _seq: u64,
        records: &[TweetRecord],
        scored: &[ScoredTweet],
    ) -> Result<(), SinkError> {
        let mut local = Tally::default();
        for (rec, s) in records.iter().zip(scored) {
            match rec.gold_label {
                Some(gold) => local.confusion.record(s.label, gold),
                None => local.missing_gold += 1,
            }
        }
        let mut tally = self.tally.lock().unwrap_or_else(|p| p.into_inner());
        tally.confusion.merge_from(&local.confusion);
        tally.missing_gold += local.missing_gold;
        Ok(())
    }
}

fn cmd_evaluate(
    args: &EvaluateArgs,
    stdout: &mut (dyn Write + Send),
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let format: InputFormat = args.format.into();
    if !format.carries_gold() {
        return Err(CliError::Usage(format!(
            "evaluate needs gold labels; --format {format} has none (use labeled-tsv or jsonl)"
        )));
    }
    let lexicon = load_lexicon(&args.lexicon, stderr)?;
    let records = read_tweets(&args.input, format)?;
    let config = BatchConfig {
        scoring: ScoringOptions {
            mode: args.scoring.mode.into(),
            score_hashtag_words: !args.no_hashtag_words,
        },
        parallelism: args.scoring.parallelism(),
        chunk_size: pipeline::DEFAULT_CHUNK_SIZE,
    };
    let sink = EvalSink::default();
    let mut log = Vec::new();
    let result = run_batch(reporting_records(records, &mut log), &lexicon, config, Some(&sink));
    stderr.write_all(&log)?;
    result?;

    let tally = sink.tally.into_inner().unwrap_or_else(|p| p.into_inner());
    if tally.confusion.total() == 0 {
        return Err(CliError::Runtime(format!(
            "no record in {} carries a gold label",
            args.input
        )));
    }
    let report = EvalReport::from_confusion(tally.confusion, tally.missing_gold);
    let mut out = open_output(&args.output, stdout)?;
    serde_json::to_writer(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    stderr.write_all(report.render_table().as_bytes())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct LexiconReport<'a> {
    path: String,
    entry_count: usize,
    polarity_counts: BTreeMap<&'static str, usize>,
    pos_counts: BTreeMap<&'static str, usize>,
    duplicates: Vec<String>,
    malformed: Vec<&'a RowError>,
}

fn cmd_lexicon_check(
    args: &LexiconArgs,
    stdout: &mut (dyn Write + Send),
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    // Always load leniently so every malformed line is reported.
    let lexicon = SentimentLexicon::from_path(&args.lexicon, LoadOptions::default())?;
    let by_polarity = lexicon.polarity_counts();
    let by_pos = lexicon.pos_counts();
    let report = LexiconReport {
        path: args.lexicon.display().to_string(),
        entry_count: lexicon.entry_count(),
        polarity_counts: Polarity::ALL
            .iter()
            .map(|p| (p.as_str(), by_polarity.get(p).copied().unwrap_or(0)))
            .collect(),
        pos_counts: PartOfSpeech::ALL
            .iter()
            .map(|p| (p.as_str(), by_pos.get(p).copied().unwrap_or(0)))
            .collect(),
        duplicates: lexicon
            .warnings()
            .iter()
            .filter(|w| matches!(w, LoadWarning::Duplicate { .. }))
            .map(ToString::to_string)
            .collect(),
        malformed: lexicon.malformed_rows().collect(),
    };
    serde_json::to_writer(&mut *stdout, &report)?;
    writeln!(stdout)?;

    writeln!(stderr, "{}: {} entries", report.path, report.entry_count)?;
    for w in lexicon.warning_log() {
        writeln!(stderr, "  {w}")?;
    }
    if args.strict_lexicon && !report.malformed.is_empty() {
        writeln!(
            stderr,
            "{} malformed line(s) in strict mode",
            report.malformed.len()
        )?;
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}
