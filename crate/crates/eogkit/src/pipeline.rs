//! File-oriented pipeline stages and the end-to-end run: each stage reads
//! and writes the formats in [`crate::io`], so chaining the stages by hand
//! produces byte-identical artifacts to [`run_pipeline`].

use crate::calibration::{calibrate, CalibrationError};
use crate::classifier::{classify_stream, ClassifyError};
use crate::command::{
    default_table, emit, map_event, CommandError, CommandSink, ConsoleSink, NdjsonSink,
};
use crate::dsp::{design_butterworth_bandpass, paper_cascade, DspError, FilterCascade};
use crate::eval::{evaluate, ConfusionMatrix, DEFAULT_TOLERANCE};
use crate::io::{
    read_events, read_profile, read_session, read_table, write_events, write_freq_response,
    write_profile, write_session, FormatError,
};
use crate::model::{MovementKind, Sample, SessionRecording, CHANNEL_H, CHANNEL_V};
use crate::synth::{
    event_duration, synth_calibration_sweep, synth_session, FrontEndModel, KindAmplitudes,
    PlannedEvent, ScenarioSpec, SynthError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

/// Prototype order of the default designed band-pass.
pub const DEFAULT_DESIGN_ORDER: usize = 2;
/// Low edge of the default designed band-pass, Hz. Low enough that the
/// plateau gestures keep their above-threshold span through the filter.
pub const DEFAULT_DESIGN_F_LO: f64 = 0.02;
/// High edge of the default designed band-pass, Hz.
pub const DEFAULT_DESIGN_F_HI: f64 = 30.0;
/// Calibration sweep repetitions generated by the synth stage.
pub const SWEEP_REPETITIONS: usize = 3;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Dsp(#[from] DspError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Command(#[from] CommandError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    /// Process exit code: 1 usage, 2 data/format, 3 degenerate
    /// calibration/classification.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Usage(_) => 1,
            PipelineError::Dsp(DspError::InvalidBand { .. })
            | PipelineError::Dsp(DspError::UnsupportedOrder { .. }) => 1,
            PipelineError::Calibration(CalibrationError::IncompleteCalibration(_))
            | PipelineError::Calibration(CalibrationError::Degenerate(_))
            | PipelineError::Calibration(CalibrationError::NoNeutralSamples)
            | PipelineError::Classify(ClassifyError::InvalidProfile(_)) => 3,
            _ => 2,
        }
    }
}

/// Which cascade a filtering stage applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterChoice {
    /// The fixed reference four-section cascade.
    Paper,
    /// A Butterworth band-pass designed for the session's sample rate.
    Design { order: usize, f_lo: f64, f_hi: f64 },
}

impl FilterChoice {
    pub fn default_design() -> Self {
        FilterChoice::Design {
            order: DEFAULT_DESIGN_ORDER,
            f_lo: DEFAULT_DESIGN_F_LO,
            f_hi: DEFAULT_DESIGN_F_HI,
        }
    }

    pub fn build(&self, fs: f64) -> Result<FilterCascade, DspError> {
        match *self {
            FilterChoice::Paper => Ok(paper_cascade()),
            FilterChoice::Design { order, f_lo, f_hi } => {
                design_butterworth_bandpass(order, fs, f_lo, f_hi)
            }
        }
    }
}

/// Runs both channels of a session through a fresh instance of the chosen
/// cascade, preserving timestamps and labels.
pub fn filter_session(
    session: &SessionRecording,
    choice: &FilterChoice,
) -> Result<SessionRecording, PipelineError> {
    let mut cascade = choice.build(session.fs)?;
    cascade.reset();
    let h = cascade.process(CHANNEL_H, &session.channel(CHANNEL_H))?;
    let v = cascade.process(CHANNEL_V, &session.channel(CHANNEL_V))?;
    let samples = session
        .samples
        .iter()
        .zip(h.into_iter().zip(v))
        .map(|(s, (h, v))| Sample { t: s.t, h, v })
        .collect();
    Ok(SessionRecording {
        fs: session.fs,
        samples,
        labels: session.labels.clone(),
    })
}

/// Reads a scenario description from JSON.
pub fn read_scenario(path: &Path) -> Result<ScenarioSpec, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(serde_json::from_str(&text).map_err(FormatError::from)?)
}

pub fn write_scenario(spec: &ScenarioSpec, path: &Path) -> Result<(), PipelineError> {
    let json = serde_json::to_string_pretty(spec).map_err(FormatError::from)?;
    std::fs::write(path, json + "\n").map_err(|e| PipelineError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// The canonical 100-event benchmark scenario: every kind drawn uniformly,
/// onsets separated by at least a second of quiet, mild noise and drift.
/// Fully determined by the fixed seed.
pub fn default_scenario() -> ScenarioSpec {
    let fs = 250.0;
    let seed = 0xE09u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = Vec::with_capacity(100);
    let mut t = 4.0;
    for _ in 0..100 {
        let kind = MovementKind::EVENT_KINDS[rng.gen_range(0..6)];
        events.push(PlannedEvent { kind, onset: t });
        t += event_duration(kind) + 2.0 + rng.gen_range(0.0..0.5);
    }
    ScenarioSpec {
        fs,
        duration: t + 2.0,
        events,
        amplitudes: KindAmplitudes::default(),
        noise_rms: 10e-6,
        drift: 2e-6,
        seed,
    }
}

/// Synthesizes the scenario session (and optionally the matching calibration
/// sweep) to CSV. The sweep reuses the scenario's amplitudes at the
/// front-end output level.
pub fn stage_synth(
    spec: &ScenarioSpec,
    frontend: &FrontEndModel,
    session_out: &Path,
    sweep_out: Option<&Path>,
) -> Result<(), PipelineError> {
    let session = synth_session(spec, frontend)?;
    write_session(&session, session_out)?;
    if let Some(sweep_path) = sweep_out {
        let amplitudes = spec.amplitudes.scaled(frontend.total_gain());
        let sweep = synth_calibration_sweep(spec.fs, &amplitudes, SWEEP_REPETITIONS)?;
        write_session(&sweep, sweep_path)?;
    }
    Ok(())
}

/// Filters a session file per channel with independent state.
pub fn stage_filter(
    input: &Path,
    output: &Path,
    choice: &FilterChoice,
) -> Result<(), PipelineError> {
    let session = read_session(input)?;
    let filtered = filter_session(&session, choice)?;
    write_session(&filtered, output)?;
    Ok(())
}

/// Exports the cascade frequency response on a uniform [0, pi] grid.
pub fn stage_freqz(
    choice: &FilterChoice,
    fs: f64,
    points: usize,
    output: &Path,
) -> Result<(), PipelineError> {
    if points < 2 {
        return Err(PipelineError::Usage(
            "freqz needs at least 2 grid points".into(),
        ));
    }
    let cascade = choice.build(fs)?;
    let response = cascade.freq_response(&crate::dsp::omega_grid(points))?;
    write_freq_response(&response, output)?;
    Ok(())
}

/// Calibrates from a filtered, labeled sweep file.
pub fn stage_calibrate(input: &Path, output: &Path) -> Result<(), PipelineError> {
    let sweep = read_session(input)?;
    let profile = calibrate(&sweep)?;
    write_profile(&profile, output)?;
    Ok(())
}

/// Classifies a filtered session and maps events to commands.
///
/// Events and commands are written as NDJSON; each command is also rendered
/// on the console writer.
pub fn stage_classify(
    input: &Path,
    profile_path: &Path,
    table_path: Option<&Path>,
    events_out: &Path,
    commands_out: &Path,
    console: &mut dyn Write,
) -> Result<(), PipelineError> {
    let session = read_session(input)?;
    let profile = read_profile(profile_path)?;
    let table = match table_path {
        Some(path) => read_table(path)?,
        None => default_table(),
    };
    let events = classify_stream(&session, &profile)?;
    write_events(&events, events_out)?;

    let commands_file = std::fs::File::create(commands_out).map_err(|e| PipelineError::Io {
        path: commands_out.display().to_string(),
        source: e,
    })?;
    let mut monitor = NdjsonSink::new("monitor", std::io::BufWriter::new(commands_file));
    let mut console_sink = ConsoleSink::new(console);
    for event in &events {
        let command = map_event(event, &table)?;
        let mut sinks: [&mut dyn CommandSink; 2] = [&mut console_sink, &mut monitor];
        emit(&command, &mut sinks)?;
    }
    monitor
        .into_inner()
        .flush()
        .map_err(|e| PipelineError::Io {
            path: commands_out.display().to_string(),
            source: e,
        })?;
    Ok(())
}

/// Evaluates predicted events against the labels of a truth session and
/// renders the confusion matrix as pretty JSON.
pub fn stage_eval(
    events_path: &Path,
    truth_path: &Path,
    tolerance: f64,
) -> Result<(ConfusionMatrix, String), PipelineError> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(PipelineError::Usage(
            "matching tolerance must be positive".into(),
        ));
    }
    let events = read_events(events_path)?;
    let truth = read_session(truth_path)?.labels;
    let matrix = evaluate(&events, &truth, tolerance);
    let json = serde_json::to_string_pretty(&matrix.to_json()).map_err(FormatError::from)?;
    Ok((matrix, json))
}

/// Artifact file names produced by [`run_pipeline`] inside the output
/// directory.
pub mod artifacts {
    pub const SCENARIO: &str = "scenario.json";
    pub const SESSION: &str = "session.csv";
    pub const SWEEP: &str = "sweep.csv";
    pub const SWEEP_FILTERED: &str = "sweep_filtered.csv";
    pub const FILTERED: &str = "filtered.csv";
    pub const PROFILE: &str = "profile.json";
    pub const EVENTS: &str = "events.ndjson";
    pub const COMMANDS: &str = "commands.ndjson";
    pub const EVAL: &str = "eval.json";
}

/// Chains synth, filter, calibrate, classify and eval over an output
/// directory, writing every intermediate artifact. Returns the confusion
/// matrix of the final evaluation.
///
/// With `paper_filter` false the default designed band-pass is used; the
/// reference cascade is available opt-in, but note that at typical sample
/// rates it turns plateau gestures into short transients.
pub fn run_pipeline(
    scenario: Option<&Path>,
    paper_filter: bool,
    out_dir: &Path,
) -> Result<ConfusionMatrix, PipelineError> {
    std::fs::create_dir_all(out_dir).map_err(|e| PipelineError::Io {
        path: out_dir.display().to_string(),
        source: e,
    })?;
    let spec = match scenario {
        Some(path) => read_scenario(path)?,
        None => default_scenario(),
    };
    write_scenario(&spec, &out_dir.join(artifacts::SCENARIO))?;
    let choice = if paper_filter {
        FilterChoice::Paper
    } else {
        FilterChoice::default_design()
    };

    let session_csv = out_dir.join(artifacts::SESSION);
    let sweep_csv = out_dir.join(artifacts::SWEEP);
    let sweep_filtered_csv = out_dir.join(artifacts::SWEEP_FILTERED);
    let filtered_csv = out_dir.join(artifacts::FILTERED);
    let profile_json = out_dir.join(artifacts::PROFILE);
    let events_ndjson = out_dir.join(artifacts::EVENTS);
    let commands_ndjson = out_dir.join(artifacts::COMMANDS);

    stage_synth(
        &spec,
        &FrontEndModel::default(),
        &session_csv,
        Some(&sweep_csv),
    )?;
    stage_filter(&sweep_csv, &sweep_filtered_csv, &choice)?;
    stage_filter(&session_csv, &filtered_csv, &choice)?;
    stage_calibrate(&sweep_filtered_csv, &profile_json)?;
    stage_classify(
        &filtered_csv,
        &profile_json,
        None,
        &events_ndjson,
        &commands_ndjson,
        &mut std::io::sink(),
    )?;
    let (matrix, json) = stage_eval(&events_ndjson, &session_csv, DEFAULT_TOLERANCE)?;
    std::fs::write(out_dir.join(artifacts::EVAL), json + "\n").map_err(|e| PipelineError::Io {
        path: out_dir.join(artifacts::EVAL).display().to_string(),
        source: e,
    })?;
    Ok(matrix)
}
