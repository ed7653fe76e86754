//! Designs a Butterworth band-pass for a given sample rate and band, and
//! verifies the half-power edges analytically.
//!
//! Run with `cargo run --example design_bandpass`.

use eogkit::design_butterworth_bandpass;
use std::f64::consts::PI;

fn main() {
    let (order, fs, f_lo, f_hi) = (4, 250.0, 0.5, 30.0);
    let cascade = design_butterworth_bandpass(order, fs, f_lo, f_hi).expect("valid band");

    println!("Butterworth band-pass, prototype order {order}, {f_lo}-{f_hi} Hz at {fs} Hz:");
    for (i, s) in cascade.sections().iter().enumerate() {
        println!(
            "  S{} b = [{:+.6e}, {:+.6e}, {:+.6e}]  a = [{:+.6e}, {:+.6e}]",
            i + 1,
            s.b0,
            s.b1,
            s.b2,
            s.a1,
            s.a2
        );
    }

    let to_omega = |f: f64| 2.0 * PI * f / fs;
    let probes = [0.1, f_lo, 2.0, 10.0, f_hi, 60.0, 100.0];
    let grid: Vec<f64> = probes.iter().map(|&f| to_omega(f)).collect();
    let mags = cascade.freq_response(&grid).unwrap().magnitude();
    println!("\nmagnitude probes:");
    for (f, m) in probes.iter().zip(&mags) {
        println!("  {f:6.2} Hz  |H| = {m:.6}  ({:+7.2} dB)", 20.0 * m.log10());
    }
    println!(
        "\nedges vs 1/sqrt(2): {:.2e} and {:.2e}",
        (mags[1] - 0.5f64.sqrt()).abs(),
        (mags[4] - 0.5f64.sqrt()).abs()
    );
}
