//! Two-channel EOG signal pipeline at desk scale.
//!
//! The crate covers the full path from electrode-level waveforms to output
//! commands: synthesis of labeled sessions through a modeled amplifier
//! front-end, biquad-cascade filtering, per-user threshold calibration,
//! event classification, and mapping of events to display/audio/indicator
//! commands with an NDJSON monitoring stream.
//!
//! Start with the runnable examples (`cargo run --example full_pipeline`),
//! or drive the stages from files with the `eogkit` binary.

pub mod calibration;
pub mod classifier;
pub mod command;
pub mod dsp;
pub mod eval;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod synth;

pub use calibration::{calibrate, validate_profile, CalibrationError, CalibrationProfile};
pub use classifier::{classify_sample, classify_stream, Classifier, ClassifyError};
pub use command::{default_table, emit, map_event, CommandEntry, CommandError, CommandTable};
pub use dsp::{
    biquad_step, design_butterworth_bandpass, omega_grid, paper_cascade, BiquadSection,
    BiquadState, DspError, FilterCascade, FrequencyResponse,
};
pub use eval::{evaluate, ConfusionMatrix};
pub use model::{
    validate_session, Command, GroundTruthLabel, MovementEvent, MovementKind, Sample,
    SessionRecording, SessionViolation, CHANNEL_H, CHANNEL_V,
};
pub use pipeline::{filter_session, run_pipeline, FilterChoice, PipelineError};
pub use synth::{
    synth_calibration_sweep, synth_session, FrontEndModel, KindAmplitudes, PlannedEvent,
    ScenarioSpec, SynthError,
};
