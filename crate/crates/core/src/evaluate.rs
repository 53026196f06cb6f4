//! Gold-vs-predicted comparison: 3x3 confusion matrix, accuracy and
//! per-class precision/recall/F1.
//!
//! Any metric whose denominator is zero is reported as `None` (JSON `null`)
//! rather than 0.

use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::scorer::SentimentLabel;

/// Counts indexed `[gold][predicted]` in [`SentimentLabel::ALL`] order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    cells: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    pub fn record(&mut self, predicted: SentimentLabel, gold: SentimentLabel) {
        self.cells[gold.index()][predicted.index()] += 1;
    }

    pub fn cell(&self, gold: SentimentLabel, predicted: SentimentLabel) -> u64 {
        self.cells[gold.index()][predicted.index()]
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..3).map(|i| self.cells[i][i]).sum()
    }

    pub fn gold_count(&self, label: SentimentLabel) -> u64 {
        self.cells[label.index()].iter().sum()
    }

    pub fn predicted_count(&self, label: SentimentLabel) -> u64 {
        self.cells.iter().map(|row| row[label.index()]).sum()
    }

    pub fn merge_from(&mut self, other: &ConfusionMatrix) {
        for (row, other_row) in self.cells.iter_mut().zip(&other.cells) {
            for (c, o) in row.iter_mut().zip(other_row) {
                *c += o;
            }
        }
    }
}

impl Serialize for ConfusionMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("labels", &SentimentLabel::ALL)?;
        map.serialize_entry("cells", &self.cells)?;
        map.serialize_entry("total", &self.total())?;
        map.end()
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerClass([ClassMetrics; 3]);

impl PerClass {
    pub fn get(&self, label: SentimentLabel) -> &ClassMetrics {
        &self.0[label.index()]
    }
}

impl Serialize for PerClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        for label in SentimentLabel::ALL {
            map.serialize_entry(label.as_str(), self.get(label))?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub accuracy: Option<f64>,
    pub per_class: PerClass,
    pub confusion: ConfusionMatrix,
    pub n_evaluated: u64,
    pub n_missing_gold: u64,
}

impl EvalReport {
    pub fn from_confusion(confusion: ConfusionMatrix, n_missing_gold: u64) -> Self {
        let per_class = SentimentLabel::ALL.map(|label| {
            let tp = confusion.cell(label, label);
            let precision = ratio(tp, confusion.predicted_count(label));
            let recall = ratio(tp, confusion.gold_count(label));
            let f1 = match (precision, recall) {
                (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
                _ => None,
            };
            ClassMetrics {
                precision,
                recall,
                f1,
                support: confusion.gold_count(label),
            }
        });
        EvalReport {
            accuracy: ratio(confusion.correct(), confusion.total()),
            per_class: PerClass(per_class),
            confusion,
            n_evaluated: confusion.total(),
            n_missing_gold,
        }
    }

    /// Aligned plain-text rendering for terminals.
    pub fn render_table(&self) -> String {
        fn fmt(v: Option<f64>) -> String {
            v.map_or_else(|| "undefined".to_owned(), |x| format!("{x:.4}"))
        }
        let mut out = String::new();
        let _ = writeln!(
            out,
            "evaluated {}  missing gold {}  accuracy {}",
            self.n_evaluated,
            self.n_missing_gold,
            fmt(self.accuracy)
        );
        let _ = writeln!(
            out,
            "{:<10} {:>10} {:>10} {:>10} {:>8}",
            "class", "precision", "recall", "f1", "support"
        );
        for label in SentimentLabel::ALL {
            let m = self.per_class.get(label);
            let _ = writeln!(
                out,
                "{:<10} {:>10} {:>10} {:>10} {:>8}",
                label.as_str(),
                fmt(m.precision),
                fmt(m.recall),
                fmt(m.f1),
                m.support
            );
        }
        let _ = writeln!(
            out,
            "{:<14} {:>9} {:>9} {:>9}",
            "gold \\ pred", "positive", "negative", "neutral"
        );
        for gold in SentimentLabel::ALL {
            let _ = write!(out, "{:<14}", gold.as_str());
            for pred in SentimentLabel::ALL {
                let _ = write!(out, " {:>9}", self.confusion.cell(gold, pred));
            }
            out.push('\n');
        }
        out
    }
}

/// Tallies `(predicted, gold)` pairs into a report.
pub fn evaluate<I>(pairs: I) -> EvalReport
where
    I: IntoIterator<Item = (SentimentLabel, SentimentLabel)>,
{
    let mut confusion = ConfusionMatrix::default();
    for (predicted, gold) in pairs {
        confusion.record(predicted, gold);
    }
    EvalReport::from_confusion(confusion, 0)
}
