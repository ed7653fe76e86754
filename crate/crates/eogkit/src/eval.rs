//! Event-level evaluation: greedy onset matching of predictions against
//! ground truth and a confusion matrix with per-kind miss and
//! false-positive counts.

use crate::model::{GroundTruthLabel, MovementEvent, MovementKind};
use serde_json::json;

/// Default onset matching tolerance, seconds.
pub const DEFAULT_TOLERANCE: f64 = 0.15;

const KINDS: [MovementKind; 6] = MovementKind::EVENT_KINDS;

/// Confusion counts over the six event kinds.
///
/// Row indices are true kinds, columns are predicted kinds plus a trailing
/// `Missed` column; unmatched predictions land in the false-positive row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: [[usize; 7]; 6],
    false_positives: [usize; 6],
}

fn kind_index(kind: MovementKind) -> usize {
    KINDS
        .iter()
        .position(|&k| k == kind)
        .expect("event kind, not Neutral")
}

impl ConfusionMatrix {
    /// Matched pairs with equal true and predicted kind.
    pub fn correct(&self) -> usize {
        (0..6).map(|i| self.counts[i][i]).sum()
    }

    /// Total number of ground-truth events.
    pub fn total_truth(&self) -> usize {
        self.counts
            .iter()
            .map(|row| row.iter().sum::<usize>())
            .sum()
    }

    /// correct / total true events; 0 for an empty truth list.
    pub fn accuracy(&self) -> f64 {
        let total = self.total_truth();
        if total == 0 {
            0.0
        } else {
            self.correct() as f64 / total as f64
        }
    }

    pub fn count(&self, truth: MovementKind, predicted: MovementKind) -> usize {
        self.counts[kind_index(truth)][kind_index(predicted)]
    }

    pub fn missed(&self, truth: MovementKind) -> usize {
        self.counts[kind_index(truth)][6]
    }

    pub fn false_positives(&self, predicted: MovementKind) -> usize {
        self.false_positives[kind_index(predicted)]
    }

    pub fn total_false_positives(&self) -> usize {
        self.false_positives.iter().sum()
    }

    /// Serializes the matrix with readable kind names, including the
    /// derived accuracy.
    pub fn to_json(&self) -> serde_json::Value {
        let mut counts = serde_json::Map::new();
        for (i, &truth) in KINDS.iter().enumerate() {
            let mut row = serde_json::Map::new();
            for (j, &pred) in KINDS.iter().enumerate() {
                row.insert(pred.to_string(), json!(self.counts[i][j]));
            }
            row.insert("Missed".to_string(), json!(self.counts[i][6]));
            counts.insert(truth.to_string(), serde_json::Value::Object(row));
        }
        let mut fp = serde_json::Map::new();
        for (j, &pred) in KINDS.iter().enumerate() {
            fp.insert(pred.to_string(), json!(self.false_positives[j]));
        }
        json!({
            "accuracy": self.accuracy(),
            "correct": self.correct(),
            "total_truth": self.total_truth(),
            "false_positive_total": self.total_false_positives(),
            "counts": counts,
            "false_positives": fp,
        })
    }
}

/// Greedy one-to-one matching of predictions to truth by onset proximity.
///
/// All (truth, prediction) pairs within `tolerance` seconds are considered
/// in order of increasing onset distance (ties broken by list positions);
/// each event matches at most once. Matched pairs count as correct or
/// confused by kind, unmatched truths as missed, unmatched predictions as
/// false positives.
pub fn evaluate(
    predicted: &[MovementEvent],
    truth: &[GroundTruthLabel],
    tolerance: f64,
) -> ConfusionMatrix {
    let mut pairs = Vec::new();
    for (ti, t) in truth.iter().enumerate() {
        for (pi, p) in predicted.iter().enumerate() {
            let d = (t.onset - p.onset).abs();
            if d <= tolerance {
                pairs.push((d, ti, pi));
            }
        }
    }
    pairs.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite onsets")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut truth_matched = vec![false; truth.len()];
    let mut pred_matched = vec![false; predicted.len()];
    let mut matrix = ConfusionMatrix {
        counts: [[0; 7]; 6],
        false_positives: [0; 6],
    };
    for (_, ti, pi) in pairs {
        if truth_matched[ti] || pred_matched[pi] {
            continue;
        }
        truth_matched[ti] = true;
        pred_matched[pi] = true;
        matrix.counts[kind_index(truth[ti].kind)][kind_index(predicted[pi].kind)] += 1;
    }
    for (ti, t) in truth.iter().enumerate() {
        if !truth_matched[ti] {
            matrix.counts[kind_index(t.kind)][6] += 1;
        }
    }
    for (pi, p) in predicted.iter().enumerate() {
        if !pred_matched[pi] {
            matrix.false_positives[kind_index(p.kind)] += 1;
        }
    }
    matrix
}
