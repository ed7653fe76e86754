//! Property tests for the cross-stage invariants: streaming equivalence
//! under arbitrary chunking, filter linearity over random stable cascades,
//! CSV fidelity, and evaluation bookkeeping.

use eogkit::dsp::{BiquadSection, FilterCascade};
use eogkit::eval::evaluate;
use eogkit::io::{read_session_from, write_session_to};
use eogkit::model::{GroundTruthLabel, MovementEvent, MovementKind};
use eogkit::SessionRecording;
use proptest::prelude::*;

fn stable_section() -> impl Strategy<Value = BiquadSection> {
    (
        -2.0f64..2.0,
        -2.0f64..2.0,
        -2.0f64..2.0,
        0.0f64..0.98,
        0.0f64..std::f64::consts::PI,
    )
        .prop_map(|(b0, b1, b2, r, theta)| {
            BiquadSection::new(b0, b1, b2, -2.0 * r * theta.cos(), r * r).unwrap()
        })
}

fn cascade() -> impl Strategy<Value = Vec<BiquadSection>> {
    proptest::collection::vec(stable_section(), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Processing a signal in one pass equals processing it in arbitrary
    /// chunk splits with persisted state.
    #[test]
    fn chunked_streaming_equals_single_pass(
        sections in cascade(),
        input in proptest::collection::vec(-1.0f64..1.0, 1..400),
        splits in proptest::collection::vec(0usize..400, 0..6),
    ) {
        let mut whole = FilterCascade::new(sections.clone()).unwrap();
        let expected = whole.process(0, &input).unwrap();

        let mut cuts: Vec<usize> = splits.into_iter().map(|s| s % (input.len() + 1)).collect();
        cuts.push(0);
        cuts.push(input.len());
        cuts.sort_unstable();

        let mut chunked = FilterCascade::new(sections).unwrap();
        let mut got = Vec::new();
        for pair in cuts.windows(2) {
            got.extend(chunked.process(0, &input[pair[0]..pair[1]]).unwrap());
        }
        prop_assert_eq!(got.len(), expected.len());
        for (a, b) in got.iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    /// Scaling the input scales the zero-state output.
    #[test]
    fn filter_is_homogeneous(
        sections in cascade(),
        input in proptest::collection::vec(-1.0f64..1.0, 1..300),
        alpha in 0.1f64..4.0,
    ) {
        let run = |x: &[f64]| {
            let mut c = FilterCascade::new(sections.clone()).unwrap();
            c.process(0, x).unwrap()
        };
        let base = run(&input);
        let scaled_in: Vec<f64> = input.iter().map(|x| alpha * x).collect();
        let scaled_out = run(&scaled_in);
        let magnitude = base.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in scaled_out.iter().zip(&base) {
            prop_assert!((a - alpha * b).abs() <= 1e-9 * alpha.max(1.0) * magnitude);
        }
    }

    /// Zero-state response to a zero-padded delayed input is the delayed
    /// response.
    #[test]
    fn filter_is_time_invariant(
        sections in cascade(),
        input in proptest::collection::vec(-1.0f64..1.0, 1..200),
        delay in 1usize..40,
    ) {
        let run = |x: &[f64]| {
            let mut c = FilterCascade::new(sections.clone()).unwrap();
            c.process(0, x).unwrap()
        };
        let base = run(&input);
        let mut padded = vec![0.0; delay];
        padded.extend_from_slice(&input);
        let delayed = run(&padded);
        for (i, b) in base.iter().enumerate() {
            prop_assert!((delayed[i + delay] - b).abs() <= 1e-12);
        }
    }

    /// Writing a session and reading it back preserves every channel value
    /// to the 9-significant-digit contract, and a second write is
    /// byte-identical to the first.
    #[test]
    fn session_csv_is_faithful(
        h in proptest::collection::vec(-0.5f64..0.5, 2..120),
    ) {
        let v: Vec<f64> = h.iter().map(|x| -x * 0.25).collect();
        let session = SessionRecording::from_channels(250.0, h, v, Vec::new());
        let mut first = Vec::new();
        write_session_to(&session, &mut first).unwrap();
        let back = read_session_from(&first[..]).unwrap();
        prop_assert_eq!(back.samples.len(), session.samples.len());
        for (a, b) in back.samples.iter().zip(&session.samples) {
            prop_assert!((a.h - b.h).abs() <= 1e-8 * b.h.abs().max(1e-12));
            prop_assert!((a.v - b.v).abs() <= 1e-8 * b.v.abs().max(1e-12));
        }
        let mut second = Vec::new();
        write_session_to(&back, &mut second).unwrap();
        prop_assert_eq!(first, second);
    }

    /// Evaluation bookkeeping: rows sum to the per-kind truth counts and a
    /// list evaluated against itself is perfect.
    #[test]
    fn evaluation_counts_are_conserved(
        onsets in proptest::collection::vec(0.0f64..100.0, 1..30),
        kinds in proptest::collection::vec(0usize..6, 30),
    ) {
        let mut sorted = onsets.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted.dedup_by(|a, b| (*a - *b).abs() < 0.5);
        let truth: Vec<GroundTruthLabel> = sorted
            .iter()
            .zip(&kinds)
            .map(|(&onset, &k)| GroundTruthLabel {
                kind: MovementKind::EVENT_KINDS[k],
                onset,
                duration: 0.2,
            })
            .collect();
        let predicted: Vec<MovementEvent> = truth
            .iter()
            .map(|l| MovementEvent { kind: l.kind, onset: l.onset, duration: 0.2, peak: 0.01 })
            .collect();
        let matrix = evaluate(&predicted, &truth, 0.15);
        prop_assert_eq!(matrix.accuracy(), 1.0);
        prop_assert_eq!(matrix.total_false_positives(), 0);
        prop_assert_eq!(matrix.total_truth(), truth.len());

        // Dropping predictions turns rows into misses, never changes totals.
        let half: Vec<MovementEvent> = predicted.iter().step_by(2).cloned().collect();
        let partial = evaluate(&half, &truth, 0.15);
        prop_assert_eq!(partial.total_truth(), truth.len());
        let missed: usize = MovementKind::EVENT_KINDS
            .iter()
            .map(|&k| partial.missed(k))
            .sum();
        prop_assert_eq!(missed, truth.len() - half.len());
    }
}
