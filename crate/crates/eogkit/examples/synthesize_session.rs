//! Generates a small labeled session through the modeled amplifier chain
//! and writes it as CSV.
//!
//! Run with `cargo run --example synthesize_session`.

use eogkit::io::write_session;
use eogkit::model::MovementKind;
use eogkit::synth::{synth_session, FrontEndModel, KindAmplitudes, PlannedEvent, ScenarioSpec};

fn main() {
    let spec = ScenarioSpec {
        fs: 250.0,
        duration: 16.0,
        events: vec![
            PlannedEvent {
                kind: MovementKind::Right,
                onset: 2.0,
            },
            PlannedEvent {
                kind: MovementKind::Left,
                onset: 5.0,
            },
            PlannedEvent {
                kind: MovementKind::Blink,
                onset: 8.0,
            },
            PlannedEvent {
                kind: MovementKind::DoubleBlink,
                onset: 10.5,
            },
            PlannedEvent {
                kind: MovementKind::Up,
                onset: 13.0,
            },
        ],
        amplitudes: KindAmplitudes::default(),
        noise_rms: 8e-6,
        drift: 2e-6,
        seed: 7,
    };
    let frontend = FrontEndModel::default();
    let session = synth_session(&spec, &frontend).expect("valid scenario");

    println!(
        "synthesized {} samples at {} Hz through gain {}",
        session.len(),
        session.fs,
        frontend.total_gain()
    );
    for label in &session.labels {
        println!(
            "  label {:11} onset {:6.3} s  duration {:.3} s",
            label.kind.to_string(),
            label.onset,
            label.duration
        );
    }
    let peak = session
        .samples
        .iter()
        .map(|s| s.h.abs().max(s.v.abs()))
        .fold(0.0f64, f64::max);
    println!("peak amplitude: {:.4} V (post-amplifier)", peak);

    let path = std::env::temp_dir().join("eogkit_session.csv");
    write_session(&session, &path).expect("writable temp dir");
    println!("session written to {}", path.display());
}
