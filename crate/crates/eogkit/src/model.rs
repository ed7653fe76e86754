//! Domain types shared by every pipeline stage: samples, sessions, labels,
//! movement events, and mapped commands.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Channel index of the horizontal (left-right) electrode pair.
pub const CHANNEL_H: usize = 0;
/// Channel index of the vertical (up-down) electrode pair.
pub const CHANNEL_V: usize = 1;

/// Tolerance for the uniform-grid check on sample timestamps, in seconds.
pub const TIME_GRID_TOLERANCE: f64 = 1e-9;

/// The six detectable eye-movement gestures plus the classifier idle state.
///
/// `Neutral` is never emitted as an event; it only marks "no threshold
/// crossed" inside the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MovementKind {
    Left,
    Right,
    Up,
    Down,
    Blink,
    DoubleBlink,
    Neutral,
}

impl MovementKind {
    /// Every kind that can appear as an emitted event, in canonical order.
    pub const EVENT_KINDS: [MovementKind; 6] = [
        MovementKind::Left,
        MovementKind::Right,
        MovementKind::Up,
        MovementKind::Down,
        MovementKind::Blink,
        MovementKind::DoubleBlink,
    ];

    pub fn is_event(self) -> bool {
        self != MovementKind::Neutral
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MovementKind::Left => "Left",
            MovementKind::Right => "Right",
            MovementKind::Up => "Up",
            MovementKind::Down => "Down",
            MovementKind::Blink => "Blink",
            MovementKind::DoubleBlink => "DoubleBlink",
            MovementKind::Neutral => "Neutral",
        }
    }
}

impl fmt::Display for MovementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MovementKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Left" => Ok(MovementKind::Left),
            "Right" => Ok(MovementKind::Right),
            "Up" => Ok(MovementKind::Up),
            "Down" => Ok(MovementKind::Down),
            "Blink" => Ok(MovementKind::Blink),
            "DoubleBlink" => Ok(MovementKind::DoubleBlink),
            "Neutral" => Ok(MovementKind::Neutral),
            other => Err(format!("unknown movement kind `{other}`")),
        }
    }
}

/// One timestamped two-channel sample, in volts at the post-amplifier level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Time in seconds, non-negative and on a uniform 1/fs grid.
    pub t: f64,
    /// Horizontal-channel potential in volts.
    pub h: f64,
    /// Vertical-channel potential in volts.
    pub v: f64,
}

/// Ground-truth annotation attached to a session: one gesture occurrence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthLabel {
    pub kind: MovementKind,
    /// Onset in seconds from session start.
    pub onset: f64,
    /// Length of the annotated window in seconds, strictly positive.
    pub duration: f64,
}

impl GroundTruthLabel {
    pub fn end(&self) -> f64 {
        self.onset + self.duration
    }
}

/// A finite recording of the two-channel stream with an optional label track.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionRecording {
    /// Sample rate in Hz, strictly positive.
    pub fs: f64,
    pub samples: Vec<Sample>,
    /// Ground-truth labels ordered by onset; empty when unlabeled.
    pub labels: Vec<GroundTruthLabel>,
}

impl SessionRecording {
    /// Builds a session from per-channel buffers on the grid `t = i / fs`.
    ///
    /// Panics if the channel lengths differ; callers construct both channels
    /// from the same grid.
    pub fn from_channels(fs: f64, h: Vec<f64>, v: Vec<f64>, labels: Vec<GroundTruthLabel>) -> Self {
        assert_eq!(h.len(), v.len(), "channel buffers must have equal length");
        let samples = h
            .into_iter()
            .zip(v)
            .enumerate()
            .map(|(i, (h, v))| Sample {
                t: i as f64 / fs,
                h,
                v,
            })
            .collect();
        SessionRecording {
            fs,
            samples,
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration covered by the sample grid in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// Extracts one channel as a contiguous buffer.
    pub fn channel(&self, channel: usize) -> Vec<f64> {
        match channel {
            CHANNEL_H => self.samples.iter().map(|s| s.h).collect(),
            CHANNEL_V => self.samples.iter().map(|s| s.v).collect(),
            other => panic!("session has no channel {other}"),
        }
    }
}

/// A single violation found by [`validate_session`].
///
/// Each variant carries the first offending index of its category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionViolation {
    EmptySamples,
    NonPositiveRate,
    NegativeTime { index: usize },
    NonMonotoneTime { index: usize },
    OffGridTime { index: usize },
    NonFiniteH { index: usize },
    NonFiniteV { index: usize },
    LabelOutOfRange { label: usize },
    LabelOverlap { label: usize },
    LabelNeutral { label: usize },
    LabelNonPositiveDuration { label: usize },
}

impl fmt::Display for SessionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SessionViolation::EmptySamples => write!(f, "session has no samples"),
            SessionViolation::NonPositiveRate => write!(f, "sample rate is not positive"),
            SessionViolation::NegativeTime { index } => {
                write!(f, "negative timestamp at index {index}")
            }
            SessionViolation::NonMonotoneTime { index } => {
                write!(f, "non-monotone time at index {index}")
            }
            SessionViolation::OffGridTime { index } => {
                write!(f, "time gap off the 1/fs grid at index {index}")
            }
            SessionViolation::NonFiniteH { index } => {
                write!(f, "non-finite horizontal value at index {index}")
            }
            SessionViolation::NonFiniteV { index } => {
                write!(f, "non-finite vertical value at index {index}")
            }
            SessionViolation::LabelOutOfRange { label } => {
                write!(f, "label {label} extends outside the recorded time span")
            }
            SessionViolation::LabelOverlap { label } => {
                write!(f, "label {label} overlaps its predecessor")
            }
            SessionViolation::LabelNeutral { label } => {
                write!(f, "label {label} is Neutral")
            }
            SessionViolation::LabelNonPositiveDuration { label } => {
                write!(f, "label {label} has non-positive duration")
            }
        }
    }
}

/// Checks every [`SessionRecording`] invariant and reports findings.
///
/// Pure: never aborts, never mutates. Returns an empty list iff the session
/// is well-formed. For each violation category only the first offending
/// index is reported.
pub fn validate_session(session: &SessionRecording) -> Vec<SessionViolation> {
    let mut found = Vec::new();
    if session.fs <= 0.0 || !session.fs.is_finite() {
        found.push(SessionViolation::NonPositiveRate);
    }
    if session.samples.is_empty() {
        found.push(SessionViolation::EmptySamples);
        return found;
    }

    if session.samples[0].t < 0.0 {
        found.push(SessionViolation::NegativeTime { index: 0 });
    }
    let dt = 1.0 / session.fs;
    let mut monotone_hit = false;
    let mut grid_hit = false;
    let mut h_hit = false;
    let mut v_hit = false;
    for (i, s) in session.samples.iter().enumerate() {
        if !h_hit && !s.h.is_finite() {
            found.push(SessionViolation::NonFiniteH { index: i });
            h_hit = true;
        }
        if !v_hit && !s.v.is_finite() {
            found.push(SessionViolation::NonFiniteV { index: i });
            v_hit = true;
        }
        if i == 0 {
            continue;
        }
        let gap = s.t - session.samples[i - 1].t;
        if !monotone_hit && gap <= 0.0 {
            found.push(SessionViolation::NonMonotoneTime { index: i });
            monotone_hit = true;
        }
        if !grid_hit && (gap - dt).abs() > TIME_GRID_TOLERANCE {
            found.push(SessionViolation::OffGridTime { index: i });
            grid_hit = true;
        }
    }

    let span_start = session.samples[0].t;
    let span_end = session.samples[session.samples.len() - 1].t;
    let mut range_hit = false;
    let mut overlap_hit = false;
    let mut neutral_hit = false;
    let mut duration_hit = false;
    for (i, label) in session.labels.iter().enumerate() {
        if !neutral_hit && label.kind == MovementKind::Neutral {
            found.push(SessionViolation::LabelNeutral { label: i });
            neutral_hit = true;
        }
        if !duration_hit && label.duration <= 0.0 {
            found.push(SessionViolation::LabelNonPositiveDuration { label: i });
            duration_hit = true;
        }
        if !range_hit && (label.onset < span_start || label.end() > span_end) {
            found.push(SessionViolation::LabelOutOfRange { label: i });
            range_hit = true;
        }
        if !overlap_hit && i > 0 && label.onset < session.labels[i - 1].end() {
            found.push(SessionViolation::LabelOverlap { label: i });
            overlap_hit = true;
        }
    }
    found
}

/// One classified eye-movement occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovementEvent {
    pub kind: MovementKind,
    /// Onset in seconds.
    pub onset: f64,
    /// Above-threshold span in seconds (first onset to second pulse end for
    /// a double blink).
    pub duration: f64,
    /// Signed peak excursion relative to the channel's neutral level, volts.
    pub peak: f64,
}

/// A command produced from a movement event: display text, audio track and
/// indicator color, stamped with the event onset.
///
/// Equality and serialization cover exactly the five wire fields; the
/// `truncated` diagnostic is local to the producing process.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Command {
    /// Event onset in seconds.
    pub t: f64,
    pub kind: MovementKind,
    /// Display text, at most 32 characters (16x2 panel).
    pub text: String,
    /// Audio track index, >= 1.
    pub track: u32,
    /// Indicator color name.
    pub color: String,
    /// True when `text` was cut to the display limit during mapping.
    #[serde(skip, default)]
    pub truncated: bool,
}

impl PartialEq for Command {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t
            && self.kind == other.kind
            && self.text == other.text
            && self.track == other.track
            && self.color == other.color
    }
}
