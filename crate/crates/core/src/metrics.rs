//! Multiclass precision, recall, F1 and G-mean, with leave-one-subject-out
//! aggregation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::pow;
use crate::{Error, Result};

/// One-vs-rest counts for one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

/// Counts per class from parallel label lists over `n_classes` classes.
pub fn confusion_counts(
    true_labels: &[usize],
    predicted: &[usize],
    n_classes: usize,
) -> Result<Vec<ClassCounts>> {
    if true_labels.is_empty() {
        return Err(Error::EmptyInput);
    }
    if true_labels.len() != predicted.len() {
        return Err(Error::InvalidLabels(format!(
            "{} true labels but {} predictions",
            true_labels.len(),
            predicted.len()
        )));
    }
    if let Some(&l) = true_labels
        .iter()
        .chain(predicted)
        .find(|&&l| l >= n_classes)
    {
        return Err(Error::InvalidLabels(format!(
            "label {l} outside 0..{n_classes}"
        )));
    }
    let mut c = vec![ClassCounts::default(); n_classes];
    for (&t, &p) in true_labels.iter().zip(predicted) {
        if t == p {
            c[t].tp += 1;
        } else {
            c[p].fp += 1;
            c[t].fn_ += 1;
        }
    }
    Ok(c)
}

/// Scores of one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub counts: Vec<ClassCounts>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub micro_precision: f64,
    pub micro_recall: f64,
    pub micro_f1: f64,
    pub g_mean: f64,
}

/// Averaged scores over folds. Each field is the mean of the per-fold
/// values, so `f1` is generally not the harmonic mean of `precision` and
/// `recall` here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateReport {
    pub folds: usize,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub micro_precision: f64,
    pub micro_recall: f64,
    pub micro_f1: f64,
    pub g_mean: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Macro and micro scores. A class with no positives has recall 0 and a
/// class that is never predicted has precision 0.
pub fn compute_metrics(counts: &[ClassCounts]) -> Result<MetricsReport> {
    if counts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = counts.len() as f64;
    let precisions: Vec<f64> = counts.iter().map(|c| ratio(c.tp, c.tp + c.fp)).collect();
    let recalls: Vec<f64> = counts.iter().map(|c| ratio(c.tp, c.tp + c.fn_)).collect();
    let macro_precision = precisions.iter().sum::<f64>() / n;
    let macro_recall = recalls.iter().sum::<f64>() / n;
    let (tp, fp, fn_) = counts
        .iter()
        .fold((0, 0, 0), |(a, b, c), k| (a + k.tp, b + k.fp, c + k.fn_));
    let micro_precision = ratio(tp, tp + fp);
    let micro_recall = ratio(tp, tp + fn_);
    let g_mean = pow(recalls.iter().product::<f64>(), 1.0 / n);
    Ok(MetricsReport {
        counts: counts.to_vec(),
        macro_precision,
        macro_recall,
        macro_f1: harmonic(macro_precision, macro_recall),
        micro_precision,
        micro_recall,
        micro_f1: harmonic(micro_precision, micro_recall),
        g_mean,
    })
}

/// Arithmetic mean of every score across folds.
pub fn losocv_aggregate(per_subject: &[MetricsReport]) -> Result<AggregateReport> {
    if per_subject.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = per_subject.len() as f64;
    let mean = |f: fn(&MetricsReport) -> f64| per_subject.iter().map(f).sum::<f64>() / n;
    Ok(AggregateReport {
        folds: per_subject.len(),
        macro_precision: mean(|r| r.macro_precision),
        macro_recall: mean(|r| r.macro_recall),
        macro_f1: mean(|r| r.macro_f1),
        micro_precision: mean(|r| r.micro_precision),
        micro_recall: mean(|r| r.micro_recall),
        micro_f1: mean(|r| r.micro_f1),
        g_mean: mean(|r| r.g_mean),
    })
}

impl From<&MetricsReport> for AggregateReport {
    fn from(r: &MetricsReport) -> Self {
        AggregateReport {
            folds: 1,
            macro_precision: r.macro_precision,
            macro_recall: r.macro_recall,
            macro_f1: r.macro_f1,
            micro_precision: r.micro_precision,
            micro_recall: r.micro_recall,
            micro_f1: r.micro_f1,
            g_mean: r.g_mean,
        }
    }
}
