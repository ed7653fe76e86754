//! Deterministic synthesis of labeled two-channel EOG sessions and the
//! modeled analog front-end gain chain.
//!
//! Waveform conventions follow the gesture taxonomy used downstream:
//! Left/Right are signed plateaus on the horizontal channel (Left negative),
//! Down a negative plateau on the vertical channel, Up a sustained positive
//! vertical deflection (a long blink), Blink a short positive pulse, and
//! DoubleBlink two pulses 300 ms apart onset-to-onset. Plateaus and pulses
//! use raised-cosine edges so the filter stages see no discontinuities.

use crate::model::{GroundTruthLabel, MovementKind, SessionRecording};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Rise/fall time of plateau and pulse edges, seconds.
pub const EDGE_S: f64 = 0.02;
/// Default plateau duration for Left/Right/Down and the sustained Up, seconds.
pub const SACCADE_S: f64 = 0.6;
/// Default blink pulse duration, seconds.
pub const BLINK_S: f64 = 0.15;
/// Onset-to-onset gap of the two double-blink pulses, seconds.
pub const DOUBLE_BLINK_GAP_S: f64 = 0.3;
/// Minimum quiet gap required between planned events, seconds. Matches the
/// classifier's default refractory period.
pub const MIN_EVENT_GAP_S: f64 = 0.2;

/// Default pre-gain saccade amplitude, volts.
pub const DEFAULT_SACCADE_AMPLITUDE: f64 = 100e-6;
/// Default pre-gain blink amplitude, volts.
pub const DEFAULT_BLINK_AMPLITUDE: f64 = 200e-6;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("scenario field {field} must be positive and finite")]
    BadField { field: &'static str },
    #[error("planned event {index} ({kind}) lies outside the session duration")]
    OnsetOutOfRange { index: usize, kind: MovementKind },
    #[error("planned events {first} and {second} are closer than the minimum gap")]
    EventsTooClose { first: usize, second: usize },
    #[error("planned event {index} may not be Neutral")]
    NeutralEvent { index: usize },
    #[error("front-end gains must be positive and band_lo < band_hi")]
    BadFrontEnd,
    #[error("repetitions must be at least 1")]
    NoRepetitions,
}

/// Parameters of the analog acquisition chain in front of the ADC: an
/// instrumentation amplifier followed by a band-pass gain stage.
///
/// The band limits are carried as metadata only; no extra analog filter is
/// simulated, because a 20 Hz high-pass would erase the sub-hertz plateau
/// content the classifier depends on. The digital cascade is the only
/// filtering in the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrontEndModel {
    pub ina_gain: f64,
    pub bandpass_gain: f64,
    pub band_lo: f64,
    pub band_hi: f64,
}

impl Default for FrontEndModel {
    fn default() -> Self {
        FrontEndModel {
            ina_gain: 1.0,
            bandpass_gain: 152.5,
            band_lo: 20.0,
            band_hi: 500.0,
        }
    }
}

impl FrontEndModel {
    pub fn total_gain(&self) -> f64 {
        self.ina_gain * self.bandpass_gain
    }

    fn validate(&self) -> Result<(), SynthError> {
        let ok = self.ina_gain > 0.0
            && self.bandpass_gain > 0.0
            && self.ina_gain.is_finite()
            && self.bandpass_gain.is_finite()
            && self.band_lo < self.band_hi;
        if ok {
            Ok(())
        } else {
            Err(SynthError::BadFrontEnd)
        }
    }
}

/// Per-kind waveform amplitudes in volts. For [`synth_session`] these are
/// electrode-level (pre-gain) values; [`synth_calibration_sweep`] takes them
/// as final post-amplifier levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KindAmplitudes {
    pub left: f64,
    pub right: f64,
    pub up: f64,
    pub down: f64,
    pub blink: f64,
    pub double_blink: f64,
}

impl Default for KindAmplitudes {
    fn default() -> Self {
        KindAmplitudes {
            left: DEFAULT_SACCADE_AMPLITUDE,
            right: DEFAULT_SACCADE_AMPLITUDE,
            // Up is realized as a long blink, so it carries the blink
            // amplitude, not the saccade one.
            up: DEFAULT_BLINK_AMPLITUDE,
            down: DEFAULT_SACCADE_AMPLITUDE,
            blink: DEFAULT_BLINK_AMPLITUDE,
            double_blink: DEFAULT_BLINK_AMPLITUDE,
        }
    }
}

impl KindAmplitudes {
    pub fn get(&self, kind: MovementKind) -> f64 {
        match kind {
            MovementKind::Left => self.left,
            MovementKind::Right => self.right,
            MovementKind::Up => self.up,
            MovementKind::Down => self.down,
            MovementKind::Blink => self.blink,
            MovementKind::DoubleBlink => self.double_blink,
            MovementKind::Neutral => 0.0,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        KindAmplitudes {
            left: self.left * factor,
            right: self.right * factor,
            up: self.up * factor,
            down: self.down * factor,
            blink: self.blink * factor,
            double_blink: self.double_blink * factor,
        }
    }
}

/// One planned gesture occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannedEvent {
    pub kind: MovementKind,
    /// Onset in seconds; snapped to the sample grid during synthesis.
    pub onset: f64,
}

/// Full description of a synthetic session: timing grid, event plan,
/// amplitudes, additive disturbances and the RNG seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub fs: f64,
    pub duration: f64,
    #[serde(default)]
    pub events: Vec<PlannedEvent>,
    #[serde(default)]
    pub amplitudes: KindAmplitudes,
    /// RMS of the white Gaussian noise added to each channel, pre-gain volts.
    #[serde(default)]
    pub noise_rms: f64,
    /// Linear baseline drift added to both channels, pre-gain volts/second.
    #[serde(default)]
    pub drift: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Waveform (and label) duration for a planned kind.
pub fn event_duration(kind: MovementKind) -> f64 {
    match kind {
        MovementKind::Blink => BLINK_S,
        MovementKind::DoubleBlink => DOUBLE_BLINK_GAP_S + BLINK_S,
        _ => SACCADE_S,
    }
}

impl ScenarioSpec {
    fn validate(&self) -> Result<(), SynthError> {
        if !(self.fs.is_finite() && self.fs > 0.0) {
            return Err(SynthError::BadField { field: "fs" });
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(SynthError::BadField { field: "duration" });
        }
        if !(self.noise_rms.is_finite() && self.noise_rms >= 0.0) {
            return Err(SynthError::BadField { field: "noise_rms" });
        }
        if !self.drift.is_finite() {
            return Err(SynthError::BadField { field: "drift" });
        }
        let mut prev_end: Option<(usize, f64)> = None;
        for (i, ev) in self.events.iter().enumerate() {
            if ev.kind == MovementKind::Neutral {
                return Err(SynthError::NeutralEvent { index: i });
            }
            let end = ev.onset + event_duration(ev.kind);
            if ev.onset < 0.0 || end > self.duration {
                return Err(SynthError::OnsetOutOfRange {
                    index: i,
                    kind: ev.kind,
                });
            }
            if let Some((j, pe)) = prev_end {
                if ev.onset - pe < MIN_EVENT_GAP_S {
                    return Err(SynthError::EventsTooClose {
                        first: j,
                        second: i,
                    });
                }
            }
            prev_end = Some((i, end));
        }
        Ok(())
    }
}

/// Plateau/pulse envelope with raised-cosine edges, evaluated at `tau`
/// seconds past the event onset; zero outside [0, total].
fn envelope(tau: f64, total: f64) -> f64 {
    if tau < 0.0 || tau > total {
        return 0.0;
    }
    let edge = EDGE_S.min(total / 2.0);
    if tau < edge {
        0.5 * (1.0 - (std::f64::consts::PI * tau / edge).cos())
    } else if tau > total - edge {
        0.5 * (1.0 - (std::f64::consts::PI * (total - tau) / edge).cos())
    } else {
        1.0
    }
}

fn add_event(
    h: &mut [f64],
    v: &mut [f64],
    fs: f64,
    kind: MovementKind,
    onset_idx: usize,
    amplitude: f64,
) {
    let write = |buf: &mut [f64], sign: f64, start_s: f64, dur: f64| {
        let start = onset_idx + (start_s * fs).round() as usize;
        let len = (dur * fs).round() as usize;
        for i in start..=(start + len).min(buf.len().saturating_sub(1)) {
            let tau = (i - start) as f64 / fs;
            buf[i] += sign * amplitude * envelope(tau, dur);
        }
    };
    match kind {
        MovementKind::Left => write(h, -1.0, 0.0, SACCADE_S),
        MovementKind::Right => write(h, 1.0, 0.0, SACCADE_S),
        MovementKind::Up => write(v, 1.0, 0.0, SACCADE_S),
        MovementKind::Down => write(v, -1.0, 0.0, SACCADE_S),
        MovementKind::Blink => write(v, 1.0, 0.0, BLINK_S),
        MovementKind::DoubleBlink => {
            write(v, 1.0, 0.0, BLINK_S);
            write(v, 1.0, DOUBLE_BLINK_GAP_S, BLINK_S);
        }
        MovementKind::Neutral => {}
    }
}

/// Generates a labeled session from a scenario through the front-end model.
///
/// Event waveforms, noise and drift are all scaled by the front-end's total
/// gain, so the output is in post-amplifier volts (what the ADC would see).
/// Generation is a pure function of `(spec, frontend)`: the same seed yields
/// a bit-identical session.
pub fn synth_session(
    spec: &ScenarioSpec,
    frontend: &FrontEndModel,
) -> Result<SessionRecording, SynthError> {
    spec.validate()?;
    frontend.validate()?;
    let gain = frontend.total_gain();
    let n = (spec.duration * spec.fs).round() as usize;
    let mut h = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut labels = Vec::with_capacity(spec.events.len());

    for ev in &spec.events {
        let onset_idx = (ev.onset * spec.fs).round() as usize;
        add_event(
            &mut h,
            &mut v,
            spec.fs,
            ev.kind,
            onset_idx,
            spec.amplitudes.get(ev.kind) * gain,
        );
        labels.push(GroundTruthLabel {
            kind: ev.kind,
            onset: onset_idx as f64 / spec.fs,
            duration: event_duration(ev.kind),
        });
    }

    if spec.drift != 0.0 {
        let slope = spec.drift * gain;
        for i in 0..n {
            let offset = slope * (i as f64 / spec.fs);
            h[i] += offset;
            v[i] += offset;
        }
    }
    if spec.noise_rms > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_rms * gain).expect("positive rms");
        for i in 0..n {
            h[i] += normal.sample(&mut rng);
            v[i] += normal.sample(&mut rng);
        }
    }

    Ok(SessionRecording::from_channels(spec.fs, h, v, labels))
}

/// Spacing between consecutive sweep gestures, seconds.
pub const SWEEP_SPACING_S: f64 = 2.5;
/// Quiet lead-in before the first sweep gesture, seconds.
pub const SWEEP_LEAD_S: f64 = 1.0;

/// Gesture order of one sweep repetition.
pub const SWEEP_CYCLE: [MovementKind; 5] = [
    MovementKind::Left,
    MovementKind::Right,
    MovementKind::Up,
    MovementKind::Down,
    MovementKind::Blink,
];

/// Emits a deterministic, noise-free guided calibration sequence cycling
/// Left, Right, Up, Down, Blink `repetitions` times, labeled and evenly
/// spaced. Amplitudes are final (post-amplifier) volts.
pub fn synth_calibration_sweep(
    fs: f64,
    amplitudes: &KindAmplitudes,
    repetitions: usize,
) -> Result<SessionRecording, SynthError> {
    if repetitions == 0 {
        return Err(SynthError::NoRepetitions);
    }
    let count = SWEEP_CYCLE.len() * repetitions;
    let duration = SWEEP_LEAD_S + count as f64 * SWEEP_SPACING_S;
    let events = (0..count)
        .map(|i| PlannedEvent {
            kind: SWEEP_CYCLE[i % SWEEP_CYCLE.len()],
            onset: SWEEP_LEAD_S + i as f64 * SWEEP_SPACING_S,
        })
        .collect();
    let spec = ScenarioSpec {
        fs,
        duration,
        events,
        amplitudes: *amplitudes,
        noise_rms: 0.0,
        drift: 0.0,
        seed: 0,
    };
    // Unity front-end: amplitudes are already post-gain here.
    let frontend = FrontEndModel {
        ina_gain: 1.0,
        bandpass_gain: 1.0,
        ..FrontEndModel::default()
    };
    synth_session(&spec, &frontend)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet_spec() -> ScenarioSpec {
        ScenarioSpec {
            fs: 250.0,
            duration: 4.0,
            events: vec![],
            amplitudes: KindAmplitudes::default(),
            noise_rms: 0.0,
            drift: 0.0,
            seed: 1,
        }
    }

    #[test]
    fn empty_plan_without_disturbances_is_silent() {
        let session = synth_session(&quiet_spec(), &FrontEndModel::default()).unwrap();
        assert!(session.samples.iter().all(|s| s.h == 0.0 && s.v == 0.0));
        assert!(session.labels.is_empty());
    }

    #[test]
    fn right_plateau_amplitude_reflects_gain_chain() {
        let mut spec = quiet_spec();
        spec.events = vec![PlannedEvent {
            kind: MovementKind::Right,
            onset: 1.0,
        }];
        spec.amplitudes.right = 100e-6;
        let session = synth_session(&spec, &FrontEndModel::default()).unwrap();
        // Mid-plateau sample: 100 uV * 1 * 152.5.
        let mid = (1.3 * 250.0) as usize;
        assert!((session.samples[mid].h - 0.01525).abs() < 1e-12);
        assert_eq!(session.samples[mid].v, 0.0);
    }

    #[test]
    fn left_is_negative_and_down_is_negative() {
        let mut spec = quiet_spec();
        spec.duration = 6.0;
        spec.events = vec![
            PlannedEvent {
                kind: MovementKind::Left,
                onset: 1.0,
            },
            PlannedEvent {
                kind: MovementKind::Down,
                onset: 3.0,
            },
        ];
        let s = synth_session(&spec, &FrontEndModel::default()).unwrap();
        assert!(s.samples[(1.3 * 250.0) as usize].h < 0.0);
        assert!(s.samples[(3.3 * 250.0) as usize].v < 0.0);
    }

    #[test]
    fn double_blink_has_two_pulses() {
        let mut spec = quiet_spec();
        spec.events = vec![PlannedEvent {
            kind: MovementKind::DoubleBlink,
            onset: 1.0,
        }];
        let s = synth_session(&spec, &FrontEndModel::default()).unwrap();
        let v = s.channel(crate::model::CHANNEL_V);
        let at = |t: f64| v[(t * 250.0) as usize];
        assert!(at(1.07) > 0.0); // first pulse
        assert!(at(1.22).abs() < 1e-12); // gap between pulses
        assert!(at(1.37) > 0.0); // second pulse
        assert_eq!(s.labels[0].duration, DOUBLE_BLINK_GAP_S + BLINK_S);
    }

    #[test]
    fn generation_is_deterministic() {
        let mut spec = quiet_spec();
        spec.noise_rms = 1e-5;
        spec.drift = 2e-6;
        spec.events = vec![PlannedEvent {
            kind: MovementKind::Blink,
            onset: 2.0,
        }];
        let a = synth_session(&spec, &FrontEndModel::default()).unwrap();
        let b = synth_session(&spec, &FrontEndModel::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ() {
        let mut spec = quiet_spec();
        spec.noise_rms = 1e-5;
        let a = synth_session(&spec, &FrontEndModel::default()).unwrap();
        spec.seed = 2;
        let b = synth_session(&spec, &FrontEndModel::default()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn signal_outside_event_windows_is_zero() {
        let mut spec = quiet_spec();
        spec.events = vec![
            PlannedEvent {
                kind: MovementKind::Right,
                onset: 0.5,
            },
            PlannedEvent {
                kind: MovementKind::Blink,
                onset: 2.0,
            },
        ];
        let s = synth_session(&spec, &FrontEndModel::default()).unwrap();
        for sample in &s.samples {
            let in_window = s
                .labels
                .iter()
                .any(|l| sample.t >= l.onset && sample.t <= l.end() + 1.0 / s.fs);
            if !in_window {
                assert_eq!(sample.h, 0.0, "at t={}", sample.t);
                assert_eq!(sample.v, 0.0, "at t={}", sample.t);
            }
        }
        assert_eq!(s.labels.len(), spec.events.len());
    }

    #[test]
    fn label_window_contains_waveform_peak() {
        let mut spec = quiet_spec();
        spec.duration = 8.0;
        spec.events = vec![
            PlannedEvent {
                kind: MovementKind::Up,
                onset: 1.0,
            },
            PlannedEvent {
                kind: MovementKind::Blink,
                onset: 4.0,
            },
        ];
        let s = synth_session(&spec, &FrontEndModel::default()).unwrap();
        let v = s.channel(crate::model::CHANNEL_V);
        let peak_idx = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let peak_t = peak_idx as f64 / s.fs;
        assert!(s
            .labels
            .iter()
            .any(|l| peak_t >= l.onset && peak_t <= l.end()));
    }

    #[test]
    fn power_of_two_amplitude_scaling_is_exact() {
        let mut spec = quiet_spec();
        spec.duration = 6.0;
        spec.events = vec![
            PlannedEvent {
                kind: MovementKind::Left,
                onset: 1.0,
            },
            PlannedEvent {
                kind: MovementKind::Blink,
                onset: 3.0,
            },
        ];
        let base = synth_session(&spec, &FrontEndModel::default()).unwrap();
        spec.amplitudes = spec.amplitudes.scaled(2.0);
        let doubled = synth_session(&spec, &FrontEndModel::default()).unwrap();
        for (a, b) in base.samples.iter().zip(&doubled.samples) {
            assert_eq!(b.h, 2.0 * a.h);
            assert_eq!(b.v, 2.0 * a.v);
        }
    }

    #[test]
    fn generic_amplitude_scaling_is_exact_to_rounding() {
        let mut spec = quiet_spec();
        spec.events = vec![PlannedEvent {
            kind: MovementKind::Right,
            onset: 1.0,
        }];
        let base = synth_session(&spec, &FrontEndModel::default()).unwrap();
        let c = 1.7;
        spec.amplitudes = spec.amplitudes.scaled(c);
        let scaled = synth_session(&spec, &FrontEndModel::default()).unwrap();
        for (a, b) in base.samples.iter().zip(&scaled.samples) {
            assert!((b.h - c * a.h).abs() <= 1e-12 * a.h.abs().max(1e-30));
        }
    }

    #[test]
    fn overlapping_events_are_rejected() {
        let mut spec = quiet_spec();
        spec.events = vec![
            PlannedEvent {
                kind: MovementKind::Right,
                onset: 1.0,
            },
            PlannedEvent {
                kind: MovementKind::Left,
                onset: 1.4,
            },
        ];
        assert_eq!(
            synth_session(&spec, &FrontEndModel::default()).unwrap_err(),
            SynthError::EventsTooClose {
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn out_of_range_event_is_rejected() {
        let mut spec = quiet_spec();
        spec.events = vec![PlannedEvent {
            kind: MovementKind::Up,
            onset: 3.8,
        }];
        assert!(matches!(
            synth_session(&spec, &FrontEndModel::default()),
            Err(SynthError::OnsetOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn sweep_emits_fixed_cycle() {
        let sweep = synth_calibration_sweep(250.0, &KindAmplitudes::default(), 1).unwrap();
        let kinds: Vec<MovementKind> = sweep.labels.iter().map(|l| l.kind).collect();
        assert_eq!(kinds, SWEEP_CYCLE.to_vec());
    }

    #[test]
    fn sweep_repetitions_multiply_labels() {
        let sweep = synth_calibration_sweep(250.0, &KindAmplitudes::default(), 3).unwrap();
        assert_eq!(sweep.labels.len(), 15);
        for pair in sweep.labels.windows(2) {
            assert!(pair[1].onset > pair[0].onset);
        }
        assert!(synth_calibration_sweep(250.0, &KindAmplitudes::default(), 0).is_err());
    }

    #[test]
    fn doubling_sweep_amplitudes_doubles_window_peaks() {
        let amps = KindAmplitudes::default();
        let base = synth_calibration_sweep(250.0, &amps, 1).unwrap();
        let doubled = synth_calibration_sweep(250.0, &amps.scaled(2.0), 1).unwrap();
        for (label, kind) in base.labels.iter().zip(SWEEP_CYCLE) {
            let window = |s: &SessionRecording| -> f64 {
                s.samples
                    .iter()
                    .filter(|smp| smp.t >= label.onset && smp.t <= label.end())
                    .map(|smp| match kind {
                        MovementKind::Left | MovementKind::Right => smp.h,
                        _ => smp.v,
                    })
                    .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m })
            };
            let p1 = window(&base);
            let p2 = window(&doubled);
            assert!((p2 - 2.0 * p1).abs() < 1e-15, "{kind}: {p1} vs {p2}");
        }
    }

    #[test]
    fn session_passes_validation() {
        let mut spec = quiet_spec();
        spec.noise_rms = 1e-5;
        spec.events = vec![PlannedEvent {
            kind: MovementKind::Right,
            onset: 1.0,
        }];
        let s = synth_session(&spec, &FrontEndModel::default()).unwrap();
        assert!(crate::model::validate_session(&s).is_empty());
    }
}
