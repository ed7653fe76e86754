//! Per-user calibration: derives detection thresholds and temporal windows
//! from a labeled, already-filtered calibration sweep.
//!
//! Thresholds live in the same signal domain the classifier sees, so the
//! sweep must be run through the filter cascade before calling
//! [`calibrate`]. Per-direction peaks are the median across repetitions of
//! the windowed channel extremum; each threshold is then placed a fraction
//! `k` of the way from the neutral mean to that peak.

use crate::model::{MovementKind, SessionRecording, CHANNEL_H, CHANNEL_V};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Default threshold fraction between neutral level and calibrated peak.
pub const DEFAULT_K: f64 = 0.6;
/// Default minimum above-threshold hold time before a candidate counts, s.
pub const DEFAULT_MIN_HOLD: f64 = 0.08;
/// Default post-event detection suppression, s.
pub const DEFAULT_REFRACTORY: f64 = 0.2;
/// Default longest above-threshold span still classified as a blink, s.
pub const DEFAULT_BLINK_MAX_DUR: f64 = 0.35;
/// Default shortest vertical-positive span classified as Up (long blink), s.
pub const DEFAULT_LONG_BLINK_MIN_DUR: f64 = 0.45;
/// Default onset-to-onset window pairing two blinks into a double blink, s.
pub const DEFAULT_DOUBLE_BLINK_WINDOW: f64 = 0.5;

/// The kinds a calibration sweep must cover.
pub const REQUIRED_KINDS: [MovementKind; 5] = [
    MovementKind::Left,
    MovementKind::Right,
    MovementKind::Up,
    MovementKind::Down,
    MovementKind::Blink,
];

/// Per-user detection thresholds (absolute volts, one per direction) and
/// the temporal windows of the classifier state machine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationProfile {
    /// Horizontal-channel resting level, volts.
    pub neutral_mean_h: f64,
    /// Vertical-channel resting level, volts.
    pub neutral_mean_v: f64,
    /// Horizontal level below which a Left crossing begins, volts.
    pub threshold_left: f64,
    /// Horizontal level above which a Right crossing begins, volts.
    pub threshold_right: f64,
    /// Vertical level above which an Up (long blink) crossing begins, volts.
    pub threshold_up: f64,
    /// Vertical level below which a Down crossing begins, volts.
    pub threshold_down: f64,
    /// Vertical level above which a blink crossing begins, volts.
    pub threshold_blink: f64,
    /// Threshold fraction used to derive the levels above, 0 < k < 1.
    pub k: f64,
    /// Minimum above-threshold hold time, seconds.
    pub min_hold: f64,
    /// Post-event suppression, seconds.
    pub refractory: f64,
    /// Longest blink span, seconds.
    pub blink_max_dur: f64,
    /// Shortest Up span, seconds.
    pub long_blink_min_dur: f64,
    /// Double-blink pairing window, seconds.
    pub double_blink_window: f64,
}

impl CalibrationProfile {
    /// Effective vertical-positive detection level: the more sensitive of
    /// the Up and Blink thresholds. The Up/Blink decision itself happens
    /// later, by duration.
    pub fn vertical_positive_threshold(&self) -> f64 {
        self.threshold_up.min(self.threshold_blink)
    }
}

/// A violated [`CalibrationProfile`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileViolation {
    HorizontalOrdering,
    VerticalOrdering,
    KOutOfRange,
    NonPositiveDuration { field: &'static str },
    BlinkWindowsInverted,
    NonFiniteField { field: &'static str },
}

impl fmt::Display for ProfileViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileViolation::HorizontalOrdering => {
                write!(
                    f,
                    "left threshold must lie below the horizontal neutral mean and right above it"
                )
            }
            ProfileViolation::VerticalOrdering => {
                write!(
                    f,
                    "down threshold must lie below the vertical neutral mean and blink/up above it"
                )
            }
            ProfileViolation::KOutOfRange => write!(f, "k must satisfy 0 < k < 1"),
            ProfileViolation::NonPositiveDuration { field } => {
                write!(f, "{field} must be positive")
            }
            ProfileViolation::BlinkWindowsInverted => {
                write!(f, "blink_max_dur must be smaller than long_blink_min_dur")
            }
            ProfileViolation::NonFiniteField { field } => {
                write!(f, "{field} must be finite")
            }
        }
    }
}

/// Checks every profile invariant; empty result means the profile is valid.
pub fn validate_profile(profile: &CalibrationProfile) -> Vec<ProfileViolation> {
    let mut found = Vec::new();
    let fields = [
        ("neutral_mean_h", profile.neutral_mean_h),
        ("neutral_mean_v", profile.neutral_mean_v),
        ("threshold_left", profile.threshold_left),
        ("threshold_right", profile.threshold_right),
        ("threshold_up", profile.threshold_up),
        ("threshold_down", profile.threshold_down),
        ("threshold_blink", profile.threshold_blink),
        ("k", profile.k),
    ];
    for (field, value) in fields {
        if !value.is_finite() {
            found.push(ProfileViolation::NonFiniteField { field });
        }
    }
    if !(profile.threshold_left < profile.neutral_mean_h
        && profile.neutral_mean_h < profile.threshold_right)
    {
        found.push(ProfileViolation::HorizontalOrdering);
    }
    if !(profile.threshold_down < profile.neutral_mean_v
        && profile.neutral_mean_v < profile.threshold_up
        && profile.neutral_mean_v < profile.threshold_blink)
    {
        found.push(ProfileViolation::VerticalOrdering);
    }
    if !(profile.k > 0.0 && profile.k < 1.0) {
        found.push(ProfileViolation::KOutOfRange);
    }
    for (field, value) in [
        ("min_hold", profile.min_hold),
        ("refractory", profile.refractory),
        ("blink_max_dur", profile.blink_max_dur),
        ("long_blink_min_dur", profile.long_blink_min_dur),
        ("double_blink_window", profile.double_blink_window),
    ] {
        if !(value.is_finite() && value > 0.0) {
            found.push(ProfileViolation::NonPositiveDuration { field });
        }
    }
    if profile.blink_max_dur >= profile.long_blink_min_dur {
        found.push(ProfileViolation::BlinkWindowsInverted);
    }
    found
}

#[derive(Debug, Error, PartialEq)]
pub enum CalibrationError {
    #[error("calibration sweep has no samples")]
    EmptySession,
    #[error("calibration sweep has no {0} labels")]
    IncompleteCalibration(MovementKind),
    #[error("calibration sweep leaves no unlabeled samples for the neutral estimate")]
    NoNeutralSamples,
    #[error("non-finite sample at index {index} in calibration sweep")]
    NonFiniteSample { index: usize },
    #[error("degenerate calibration: {}", format_violations(.0))]
    Degenerate(Vec<ProfileViolation>),
}

fn format_violations(violations: &[ProfileViolation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite peaks"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Builds a [`CalibrationProfile`] from a labeled, filtered sweep.
///
/// Neutral means are taken over every unlabeled sample. For each required
/// kind the windowed extremum of the relevant channel is collected per
/// repetition and reduced by the median; the threshold is
/// `neutral + k * (peak - neutral)` with the default `k`. Temporal fields
/// take their documented defaults. The result always satisfies
/// [`validate_profile`]; otherwise a degenerate-calibration error reports
/// the violated orderings.
pub fn calibrate(session: &SessionRecording) -> Result<CalibrationProfile, CalibrationError> {
    if session.samples.is_empty() {
        return Err(CalibrationError::EmptySession);
    }
    for (i, s) in session.samples.iter().enumerate() {
        if !(s.h.is_finite() && s.v.is_finite()) {
            return Err(CalibrationError::NonFiniteSample { index: i });
        }
    }
    for kind in REQUIRED_KINDS {
        if !session.labels.iter().any(|l| l.kind == kind) {
            return Err(CalibrationError::IncompleteCalibration(kind));
        }
    }

    let mut labeled = vec![false; session.samples.len()];
    for label in &session.labels {
        for (i, s) in session.samples.iter().enumerate() {
            if s.t >= label.onset && s.t <= label.end() {
                labeled[i] = true;
            }
        }
    }
    let mut sum_h = 0.0;
    let mut sum_v = 0.0;
    let mut count = 0usize;
    for (s, &inside) in session.samples.iter().zip(&labeled) {
        if !inside {
            sum_h += s.h;
            sum_v += s.v;
            count += 1;
        }
    }
    if count == 0 {
        return Err(CalibrationError::NoNeutralSamples);
    }
    let neutral_h = sum_h / count as f64;
    let neutral_v = sum_v / count as f64;

    // Windowed extremum per repetition, reduced by the median.
    let peak_for = |kind: MovementKind| -> f64 {
        let channel = match kind {
            MovementKind::Left | MovementKind::Right => CHANNEL_H,
            _ => CHANNEL_V,
        };
        let take_min = matches!(kind, MovementKind::Left | MovementKind::Down);
        let mut peaks: Vec<f64> = session
            .labels
            .iter()
            .filter(|l| l.kind == kind)
            .map(|l| {
                session
                    .samples
                    .iter()
                    .filter(|s| s.t >= l.onset && s.t <= l.end())
                    .map(|s| if channel == CHANNEL_H { s.h } else { s.v })
                    .fold(
                        if take_min {
                            f64::INFINITY
                        } else {
                            f64::NEG_INFINITY
                        },
                        |m, x| {
                            if take_min {
                                m.min(x)
                            } else {
                                m.max(x)
                            }
                        },
                    )
            })
            .collect();
        median(&mut peaks)
    };

    let threshold = |neutral: f64, peak: f64| neutral + DEFAULT_K * (peak - neutral);

    let profile = CalibrationProfile {
        neutral_mean_h: neutral_h,
        neutral_mean_v: neutral_v,
        threshold_left: threshold(neutral_h, peak_for(MovementKind::Left)),
        threshold_right: threshold(neutral_h, peak_for(MovementKind::Right)),
        threshold_up: threshold(neutral_v, peak_for(MovementKind::Up)),
        threshold_down: threshold(neutral_v, peak_for(MovementKind::Down)),
        threshold_blink: threshold(neutral_v, peak_for(MovementKind::Blink)),
        k: DEFAULT_K,
        min_hold: DEFAULT_MIN_HOLD,
        refractory: DEFAULT_REFRACTORY,
        blink_max_dur: DEFAULT_BLINK_MAX_DUR,
        long_blink_min_dur: DEFAULT_LONG_BLINK_MIN_DUR,
        double_blink_window: DEFAULT_DOUBLE_BLINK_WINDOW,
    };

    let violations = validate_profile(&profile);
    if violations.is_empty() {
        Ok(profile)
    } else {
        Err(CalibrationError::Degenerate(violations))
    }
}
