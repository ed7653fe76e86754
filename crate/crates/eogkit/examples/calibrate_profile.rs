//! Runs the guided calibration flow: synthesize a sweep, filter it, derive
//! per-direction thresholds, and save the profile.
//!
//! Run with `cargo run --example calibrate_profile`.

use eogkit::calibration::calibrate;
use eogkit::io::write_profile;
use eogkit::pipeline::{filter_session, FilterChoice};
use eogkit::synth::{synth_calibration_sweep, KindAmplitudes};

fn main() {
    // Sweep amplitudes are post-amplifier volts; reuse the stock gains.
    let amplitudes = KindAmplitudes::default().scaled(152.5);
    let sweep = synth_calibration_sweep(250.0, &amplitudes, 3).expect("valid sweep");
    println!(
        "sweep: {} gestures over {:.1} s",
        sweep.labels.len(),
        sweep.duration()
    );

    // Thresholds must live in the domain the classifier sees.
    let filtered = filter_session(&sweep, &FilterChoice::default_design()).expect("filterable");
    let profile = calibrate(&filtered).expect("complete, non-degenerate sweep");

    println!("\nderived profile:");
    println!(
        "  neutral  h = {:+.5} V, v = {:+.5} V",
        profile.neutral_mean_h, profile.neutral_mean_v
    );
    println!("  left     {:+.5} V", profile.threshold_left);
    println!("  right    {:+.5} V", profile.threshold_right);
    println!("  up       {:+.5} V", profile.threshold_up);
    println!("  down     {:+.5} V", profile.threshold_down);
    println!("  blink    {:+.5} V", profile.threshold_blink);
    println!(
        "  k = {}, min_hold = {} s, refractory = {} s",
        profile.k, profile.min_hold, profile.refractory
    );
    println!(
        "  blink <= {} s, up >= {} s, pairing window {} s",
        profile.blink_max_dur, profile.long_blink_min_dur, profile.double_blink_window
    );

    let path = std::env::temp_dir().join("eogkit_profile.json");
    write_profile(&profile, &path).expect("writable temp dir");
    println!("\nprofile written to {}", path.display());
}
