//! Threshold state machine turning the filtered two-channel stream into
//! movement events.
//!
//! Detection works on threshold crossings of the filtered signal. Because
//! the cascade blocks DC, a sustained gaze appears as an onset transient
//! followed by an offset transient of opposite sign; events key on the
//! onset transient and their duration is the above-threshold span, not the
//! gaze duration.
//!
//! Rules, applied per sample on a fixed grid:
//!
//! - A sample's candidate kind is the direction whose threshold it crosses;
//!   when both channels cross at once, the larger normalized excursion wins
//!   and exact ties go to the horizontal channel. Vertical-positive
//!   crossings are provisionally Blink; the Up/Blink split happens by
//!   duration once the crossing ends.
//! - A contiguous crossing becomes an event only when it lasted at least
//!   `min_hold`. Vertical-positive spans at most `blink_max_dur` long are
//!   blinks, spans of `long_blink_min_dur` or more are Up, and anything in
//!   between is discarded as ambiguous.
//! - A blink is not emitted immediately: it waits `double_blink_window`
//!   (onset-to-onset) for a second blink, merging into one DoubleBlink whose
//!   onset is the first pulse's onset and whose duration runs to the second
//!   pulse's end. If the window lapses the single blink is emitted then. A
//!   non-blink crossing completing while a blink is pending flushes the
//!   pending blink alongside its own event; a pending window lapsing during
//!   a non-blink crossing flushes the blink and abandons the crossing.
//! - Every emission starts a refractory period that suppresses detection
//!   for `refractory` seconds.
//! - Deactivating the classifier clears any in-flight candidate or pending
//!   blink without emission; samples consumed while inactive produce
//!   nothing. End of stream completes an open crossing and flushes any
//!   pending blink.

use crate::calibration::{validate_profile, CalibrationProfile};
use crate::model::{MovementEvent, MovementKind, SessionRecording};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },
    #[error("invalid calibration profile: {0}")]
    InvalidProfile(String),
    #[error("sample rate must be positive and finite, got {fs}")]
    BadSampleRate { fs: f64 },
}

/// Candidate kind of a single sample against the profile thresholds.
///
/// Returns `Neutral` when nothing is crossed. Vertical-positive crossings
/// return `Blink`; `Up` is decided later by duration. Simultaneous crossings
/// on both channels resolve to the larger normalized excursion
/// `|x - neutral| / |threshold - neutral|`, horizontal winning exact ties.
pub fn classify_sample(h: f64, v: f64, profile: &CalibrationProfile) -> MovementKind {
    let h_exc = h - profile.neutral_mean_h;
    let v_exc = v - profile.neutral_mean_v;

    let right_span = profile.threshold_right - profile.neutral_mean_h;
    let left_span = profile.threshold_left - profile.neutral_mean_h;
    let horizontal = if h >= profile.threshold_right {
        Some((MovementKind::Right, h_exc / right_span))
    } else if h <= profile.threshold_left {
        Some((MovementKind::Left, h_exc / left_span))
    } else {
        None
    };

    let up_level = profile.vertical_positive_threshold();
    let down_span = profile.threshold_down - profile.neutral_mean_v;
    let vertical = if v >= up_level {
        Some((
            MovementKind::Blink,
            v_exc / (up_level - profile.neutral_mean_v),
        ))
    } else if v <= profile.threshold_down {
        Some((MovementKind::Down, v_exc / down_span))
    } else {
        None
    };

    match (horizontal, vertical) {
        (None, None) => MovementKind::Neutral,
        (Some((kind, _)), None) => kind,
        (None, Some((kind, _))) => kind,
        (Some((hk, hn)), Some((vk, vn))) => {
            if hn >= vn {
                hk
            } else {
                vk
            }
        }
    }
}

/// A completed blink pulse waiting for a possible second pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PendingBlink {
    onset: usize,
    end: usize,
    peak: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Mode {
    Idle,
    Candidate {
        kind: MovementKind,
        onset: usize,
        peak: f64,
        pending: Option<PendingBlink>,
    },
    Refractory {
        until: usize,
    },
    BlinkPending {
        first: PendingBlink,
    },
}

/// Streaming classifier over one two-channel stream.
///
/// Single-owner: feed samples in order with [`push`](Classifier::push), then
/// call [`finish`](Classifier::finish) to flush and take the events.
#[derive(Debug, Clone)]
pub struct Classifier {
    profile: CalibrationProfile,
    fs: f64,
    hold_n: usize,
    refractory_n: usize,
    blink_max_n: usize,
    long_blink_min_n: usize,
    pair_window_n: usize,
    mode: Mode,
    active: bool,
    index: usize,
    events: Vec<MovementEvent>,
}

fn seconds_to_samples(seconds: f64, fs: f64) -> usize {
    (seconds * fs).round() as usize
}

impl Classifier {
    pub fn new(profile: &CalibrationProfile, fs: f64) -> Result<Self, ClassifyError> {
        if !(fs.is_finite() && fs > 0.0) {
            return Err(ClassifyError::BadSampleRate { fs });
        }
        let violations = validate_profile(profile);
        if !violations.is_empty() {
            let text = violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(ClassifyError::InvalidProfile(text));
        }
        Ok(Classifier {
            profile: profile.clone(),
            fs,
            hold_n: seconds_to_samples(profile.min_hold, fs),
            refractory_n: seconds_to_samples(profile.refractory, fs),
            blink_max_n: seconds_to_samples(profile.blink_max_dur, fs),
            long_blink_min_n: seconds_to_samples(profile.long_blink_min_dur, fs),
            pair_window_n: seconds_to_samples(profile.double_blink_window, fs),
            mode: Mode::Idle,
            active: true,
            index: 0,
            events: Vec::new(),
        })
    }

    pub fn is_active(&self) -> bool {
        self.active
    }

    /// Enables or disables detection. Disabling clears any candidate or
    /// pending blink without emission; enabling is idempotent.
    pub fn set_active(&mut self, flag: bool) {
        if !flag {
            self.mode = Mode::Idle;
        }
        self.active = flag;
    }

    /// Events emitted so far.
    pub fn events(&self) -> &[MovementEvent] {
        &self.events
    }

    fn emit(&mut self, kind: MovementKind, onset: usize, span: usize, peak: f64) {
        self.events.push(MovementEvent {
            kind,
            onset: onset as f64 / self.fs,
            duration: span as f64 / self.fs,
            peak,
        });
    }

    fn emit_pending(&mut self, pending: PendingBlink) {
        self.emit(
            MovementKind::Blink,
            pending.onset,
            pending.end - pending.onset,
            pending.peak,
        );
    }

    /// Signed excursion of the channel relevant to `kind`.
    fn excursion(&self, kind: MovementKind, h: f64, v: f64) -> f64 {
        match kind {
            MovementKind::Left | MovementKind::Right => h - self.profile.neutral_mean_h,
            _ => v - self.profile.neutral_mean_v,
        }
    }

    /// Folds a fresh sample excursion into the running candidate peak,
    /// keeping the extremum in the crossing's direction.
    fn wider_peak(kind: MovementKind, current: f64, sample: f64) -> f64 {
        match kind {
            MovementKind::Left | MovementKind::Down => current.min(sample),
            _ => current.max(sample),
        }
    }

    /// Completes a candidate whose above-threshold span just ended at
    /// sample `end` (exclusive). Returns the successor mode.
    fn complete_candidate(
        &mut self,
        kind: MovementKind,
        onset: usize,
        peak: f64,
        pending: Option<PendingBlink>,
        end: usize,
    ) -> Mode {
        let span = end - onset;
        if span < self.hold_n {
            // Chatter: too short to count.
            return match pending {
                Some(first) => Mode::BlinkPending { first },
                None => Mode::Idle,
            };
        }
        if kind != MovementKind::Blink {
            if let Some(first) = pending {
                self.emit_pending(first);
            }
            self.emit(kind, onset, span, peak);
            return Mode::Refractory {
                until: end + self.refractory_n,
            };
        }
        // Vertical-positive crossing: split by duration.
        if span <= self.blink_max_n {
            match pending {
                Some(first) => {
                    self.emit(
                        MovementKind::DoubleBlink,
                        first.onset,
                        end - first.onset,
                        Self::wider_peak(MovementKind::Blink, first.peak, peak),
                    );
                    Mode::Refractory {
                        until: end + self.refractory_n,
                    }
                }
                None => Mode::BlinkPending {
                    first: PendingBlink { onset, end, peak },
                },
            }
        } else if span >= self.long_blink_min_n {
            if let Some(first) = pending {
                self.emit_pending(first);
            }
            self.emit(MovementKind::Up, onset, span, peak);
            Mode::Refractory {
                until: end + self.refractory_n,
            }
        } else {
            // Ambiguous span between blink and sustained Up: discard.
            match pending {
                Some(first) => Mode::BlinkPending { first },
                None => Mode::Idle,
            }
        }
    }

    /// Feeds one sample; emitted events accumulate in [`events`](Self::events).
    pub fn push(&mut self, h: f64, v: f64) -> Result<(), ClassifyError> {
        if !(h.is_finite() && v.is_finite()) {
            return Err(ClassifyError::NonFiniteSample { index: self.index });
        }
        let i = self.index;
        self.index += 1;
        if !self.active {
            return Ok(());
        }
        let ck = classify_sample(h, v, &self.profile);

        loop {
            match self.mode.clone() {
                Mode::Refractory { until } => {
                    if i < until {
                        break;
                    }
                    self.mode = Mode::Idle;
                }
                Mode::Idle => {
                    if ck.is_event() {
                        self.mode = Mode::Candidate {
                            kind: ck,
                            onset: i,
                            peak: self.excursion(ck, h, v),
                            pending: None,
                        };
                    }
                    break;
                }
                Mode::BlinkPending { first } => {
                    if i > first.onset + self.pair_window_n {
                        // Window lapsed: the single blink stands.
                        self.emit_pending(first);
                        self.mode = Mode::Refractory {
                            until: i + self.refractory_n,
                        };
                        break;
                    }
                    if ck.is_event() {
                        self.mode = Mode::Candidate {
                            kind: ck,
                            onset: i,
                            peak: self.excursion(ck, h, v),
                            pending: Some(first),
                        };
                    }
                    break;
                }
                Mode::Candidate {
                    kind,
                    onset,
                    peak,
                    pending,
                } => {
                    if let Some(first) = pending {
                        // A pending blink can only pair with another blink;
                        // its window lapsing aborts a non-blink crossing.
                        if kind != MovementKind::Blink && i > first.onset + self.pair_window_n {
                            self.emit_pending(first);
                            self.mode = Mode::Refractory {
                                until: i + self.refractory_n,
                            };
                            break;
                        }
                    }
                    if ck == kind {
                        self.mode = Mode::Candidate {
                            kind,
                            onset,
                            peak: Self::wider_peak(kind, peak, self.excursion(kind, h, v)),
                            pending,
                        };
                        break;
                    }
                    // Crossing ended at this sample; reprocess it in the
                    // successor state so back-to-back crossings chain.
                    self.mode = self.complete_candidate(kind, onset, peak, pending, i);
                    if matches!(self.mode, Mode::Refractory { .. }) {
                        break;
                    }
                }
            }
        }
        Ok(())
    }

    /// Flushes end-of-stream state and returns all events: an open crossing
    /// is completed as if the signal had dropped at the final sample, and a
    /// still-pending blink is emitted.
    pub fn finish(mut self) -> Vec<MovementEvent> {
        let end = self.index;
        if let Mode::Candidate {
            kind,
            onset,
            peak,
            pending,
        } = self.mode.clone()
        {
            self.mode = self.complete_candidate(kind, onset, peak, pending, end);
        }
        if let Mode::BlinkPending { first } = self.mode {
            self.emit_pending(first);
        }
        self.events
    }
}

/// Classifies a whole filtered session with a fresh, active classifier.
pub fn classify_stream(
    session: &SessionRecording,
    profile: &CalibrationProfile,
) -> Result<Vec<MovementEvent>, ClassifyError> {
    let mut classifier = Classifier::new(profile, session.fs)?;
    for sample in &session.samples {
        classifier.push(sample.h, sample.v)?;
    }
    Ok(classifier.finish())
}
