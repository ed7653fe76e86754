//! Biquad sections, the fixed four-section filter cascade, and frequency
//! response analysis.
//!
//! Each second-order section realizes
//!
//! ```text
//! y[n] = b0*x[n] + b1*x[n-1] + b2*x[n-2] - a1*y[n-1] - a2*y[n-2]
//! ```
//!
//! in direct-form II: one internal delay line `w` with states `z1`, `z2`,
//! updated per sample as `w = x - a1*z1 - a2*z2`, `y = b0*w + b1*z1 + b2*z2`,
//! then `z2 <- z1`, `z1 <- w`.
//!
//! The fixed cascade returned by [`paper_cascade`] is nominally a low-pass,
//! but its third and fourth sections place double zeros at z = 1 while the
//! first two place them at z = -1, so the realized response is band-pass:
//! |H| = 0 at both DC and Nyquist, unity near 0.21 rad/sample. The
//! coefficients are kept verbatim; downstream stages are built around the
//! observed band-pass behavior.

mod design;

pub use design::design_butterworth_bandpass;

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DspError {
    #[error("non-finite input sample {value} at index {index}")]
    NonFiniteSample { index: usize, value: f64 },
    #[error("filter output overflowed at index {index}")]
    OutputOverflow { index: usize },
    #[error("non-finite coefficient in biquad section")]
    NonFiniteCoefficient,
    #[error("biquad section is unstable: a1={a1}, a2={a2}")]
    UnstableSection { a1: f64, a2: f64 },
    #[error("cascade needs at least one section")]
    EmptyCascade,
    #[error("cascade has {channels} channels, no channel {channel}")]
    NoSuchChannel { channel: usize, channels: usize },
    #[error("impulse response length must be at least 1")]
    EmptyImpulse,
    #[error("normalized frequency {value} outside [0, pi]")]
    OmegaOutOfRange { value: f64 },
    #[error(
        "band edges must satisfy 0 < f_lo < f_hi < fs/2, got f_lo={f_lo}, f_hi={f_hi}, fs={fs}"
    )]
    InvalidBand { f_lo: f64, f_hi: f64, fs: f64 },
    #[error("prototype order must be 2 or 4, got {order}")]
    UnsupportedOrder { order: usize },
}

/// Coefficients of one second-order section, with `a0` normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiquadSection {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl BiquadSection {
    /// Builds a section, rejecting non-finite coefficients.
    pub fn new(b0: f64, b1: f64, b2: f64, a1: f64, a2: f64) -> Result<Self, DspError> {
        if ![b0, b1, b2, a1, a2].iter().all(|c| c.is_finite()) {
            return Err(DspError::NonFiniteCoefficient);
        }
        Ok(BiquadSection { b0, b1, b2, a1, a2 })
    }

    /// Strict constructor: additionally requires both poles strictly inside
    /// the unit circle.
    pub fn new_stable(b0: f64, b1: f64, b2: f64, a1: f64, a2: f64) -> Result<Self, DspError> {
        let section = Self::new(b0, b1, b2, a1, a2)?;
        if !section.is_stable() {
            return Err(DspError::UnstableSection { a1, a2 });
        }
        Ok(section)
    }

    /// Stability triangle check: `|a2| < 1` and `|a1| < 1 + a2`.
    pub fn is_stable(&self) -> bool {
        self.a2.abs() < 1.0 && self.a1.abs() < 1.0 + self.a2
    }

    /// Section response at normalized frequency `omega` in [0, pi]:
    /// `(b0 + b1 e^{-jw} + b2 e^{-j2w}) / (1 + a1 e^{-jw} + a2 e^{-j2w})`.
    pub fn response_at(&self, omega: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -omega);
        let z2 = Complex64::from_polar(1.0, -2.0 * omega);
        (self.b0 + self.b1 * z1 + self.b2 * z2) / (1.0 + self.a1 * z1 + self.a2 * z2)
    }
}

/// Delayed internal states of one direct-form II section.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BiquadState {
    pub z1: f64,
    pub z2: f64,
}

impl BiquadState {
    pub fn reset(&mut self) {
        self.z1 = 0.0;
        self.z2 = 0.0;
    }
}

/// Advances one section by one sample in direct-form II and returns the
/// section output. Rejects non-finite input and overflowed output.
pub fn biquad_step(
    state: &mut BiquadState,
    section: &BiquadSection,
    input: f64,
) -> Result<f64, DspError> {
    if !input.is_finite() {
        return Err(DspError::NonFiniteSample {
            index: 0,
            value: input,
        });
    }
    let w = input - section.a1 * state.z1 - section.a2 * state.z2;
    let out = section.b0 * w + section.b1 * state.z1 + section.b2 * state.z2;
    state.z2 = state.z1;
    state.z1 = w;
    if !out.is_finite() {
        return Err(DspError::OutputOverflow { index: 0 });
    }
    Ok(out)
}

/// An ordered chain of biquad sections with persistent per-channel state.
///
/// Section order is significant and preserved: the output of each section
/// feeds the next. Each channel owns one [`BiquadState`] per section, so a
/// single cascade can filter several independent streams (one per channel)
/// while supporting chunked streaming on each.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterCascade {
    sections: Vec<BiquadSection>,
    states: Vec<Vec<BiquadState>>,
}

impl FilterCascade {
    /// Single-channel cascade with zeroed state.
    pub fn new(sections: Vec<BiquadSection>) -> Result<Self, DspError> {
        Self::with_channels(sections, 1)
    }

    /// Cascade carrying independent state for `channels` parallel streams.
    pub fn with_channels(sections: Vec<BiquadSection>, channels: usize) -> Result<Self, DspError> {
        if sections.is_empty() {
            return Err(DspError::EmptyCascade);
        }
        let states = vec![vec![BiquadState::default(); sections.len()]; channels.max(1)];
        Ok(FilterCascade { sections, states })
    }

    pub fn sections(&self) -> &[BiquadSection] {
        &self.sections
    }

    pub fn channel_count(&self) -> usize {
        self.states.len()
    }

    /// Zeroes every state on every channel.
    pub fn reset(&mut self) {
        for channel in &mut self.states {
            for state in channel {
                state.reset();
            }
        }
    }

    /// Pushes one sample through all sections on the given channel.
    pub fn process_sample(&mut self, channel: usize, input: f64) -> Result<f64, DspError> {
        let channels = self.states.len();
        let states = self
            .states
            .get_mut(channel)
            .ok_or(DspError::NoSuchChannel { channel, channels })?;
        let mut x = input;
        for (section, state) in self.sections.iter().zip(states.iter_mut()) {
            x = biquad_step(state, section, x)?;
        }
        Ok(x)
    }

    /// Filters a block of samples on one channel, carrying state across
    /// calls so a stream may be processed in arbitrary chunks.
    ///
    /// Empty input yields empty output. A non-finite sample aborts with the
    /// offending index; state mutations up to that index are kept, matching
    /// streaming semantics.
    pub fn process(&mut self, channel: usize, input: &[f64]) -> Result<Vec<f64>, DspError> {
        let mut out = Vec::with_capacity(input.len());
        for (i, &x) in input.iter().enumerate() {
            let y = self.process_sample(channel, x).map_err(|e| match e {
                DspError::NonFiniteSample { value, .. } => {
                    DspError::NonFiniteSample { index: i, value }
                }
                DspError::OutputOverflow { .. } => DspError::OutputOverflow { index: i },
                other => other,
            })?;
            out.push(y);
        }
        Ok(out)
    }

    /// First `n` samples of the unit-impulse response, computed on a scratch
    /// copy of the state so the caller's streaming state is untouched.
    pub fn impulse_response(&self, n: usize) -> Result<Vec<f64>, DspError> {
        if n == 0 {
            return Err(DspError::EmptyImpulse);
        }
        let mut scratch = FilterCascade::new(self.sections.clone())?;
        let mut input = vec![0.0; n];
        input[0] = 1.0;
        scratch.process(0, &input)
    }

    /// Evaluates the cascade response `H(e^{jw})` on an arbitrary grid of
    /// normalized frequencies in [0, pi]; the total response is the product
    /// of the per-section responses.
    pub fn freq_response(&self, omega: &[f64]) -> Result<FrequencyResponse, DspError> {
        let mut response = Vec::with_capacity(omega.len());
        for &w in omega {
            if !(0.0..=PI).contains(&w) {
                return Err(DspError::OmegaOutOfRange { value: w });
            }
            let h = self
                .sections
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response_at(w));
            response.push(h);
        }
        Ok(FrequencyResponse::new(omega.to_vec(), response))
    }
}

/// Sampled frequency response: complex values plus derived magnitude (dB)
/// and phase (radians) per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    pub omega: Vec<f64>,
    pub response: Vec<Complex64>,
    pub magnitude_db: Vec<f64>,
    pub phase_rad: Vec<f64>,
}

impl FrequencyResponse {
    fn new(omega: Vec<f64>, response: Vec<Complex64>) -> Self {
        let magnitude_db = response.iter().map(|h| 20.0 * h.norm().log10()).collect();
        let phase_rad = response.iter().map(|h| h.arg()).collect();
        FrequencyResponse {
            omega,
            response,
            magnitude_db,
            phase_rad,
        }
    }

    /// Linear magnitude at each grid point.
    pub fn magnitude(&self) -> Vec<f64> {
        self.response.iter().map(|h| h.norm()).collect()
    }
}

/// Uniform grid of `points` normalized frequencies spanning [0, pi]
/// inclusive.
pub fn omega_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2, "grid needs at least two points");
    let step = PI / (points - 1) as f64;
    (0..points)
        .map(|i| if i == points - 1 { PI } else { i as f64 * step })
        .collect()
}

/// The fixed reference four-section cascade, states zeroed, with independent state
/// for the horizontal and vertical channels.
///
/// Sections, in order:
///
/// | # | b0         | b1         | b2         | a1          | a2         |
/// |---|------------|------------|------------|-------------|------------|
/// | 1 | 0.09797471 | 0.19594942 | 0.09797471 |  0.02977423 | 0.04296318 |
/// | 2 | 1.0        | 2.0        | 1.0        |  0.08383952 | 0.46067709 |
/// | 3 | 1.0        | -2.0       | 1.0        | -1.92167271 | 0.92347975 |
/// | 4 | 1.0        | -2.0       | 1.0        | -1.96758891 | 0.96933514 |
pub fn paper_cascade() -> FilterCascade {
    let sections = vec![
        BiquadSection {
            b0: 0.09797471,
            b1: 0.19594942,
            b2: 0.09797471,
            a1: 0.02977423,
            a2: 0.04296318,
        },
        BiquadSection {
            b0: 1.0,
            b1: 2.0,
            b2: 1.0,
            a1: 0.08383952,
            a2: 0.46067709,
        },
        BiquadSection {
            b0: 1.0,
            b1: -2.0,
            b2: 1.0,
            a1: -1.92167271,
            a2: 0.92347975,
        },
        BiquadSection {
            b0: 1.0,
            b1: -2.0,
            b2: 1.0,
            a1: -1.96758891,
            a2: 0.96933514,
        },
    ];
    FilterCascade::with_channels(sections, 2).expect("fixed cascade is non-empty")
}
