//! File formats: session CSV, calibration profile and command table JSON,
//! NDJSON event/command streams, and the frequency response CSV export.
//!
//! Numeric columns in CSV files are written with 9 significant digits;
//! writing, reading back and writing again is byte-stable. The session
//! sample rate is carried implicitly by the time column and validated for
//! uniformity on read.

use crate::calibration::CalibrationProfile;
use crate::command::CommandTable;
use crate::dsp::FrequencyResponse;
use crate::model::{Command, GroundTruthLabel, MovementEvent, MovementKind, SessionRecording};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

/// Maximum deviation between consecutive time gaps before a session CSV is
/// rejected as non-uniform, seconds.
pub const GAP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError::Malformed {
            line,
            message: message.into(),
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> FormatError {
    FormatError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Formats a value with 9 significant digits, the fidelity contract of the
/// CSV formats.
pub fn sig9(value: f64) -> String {
    format!("{value:.8e}")
}

// ---------------------------------------------------------------------------
// Session CSV
// ---------------------------------------------------------------------------

/// Writes a session as CSV. The label column is present iff the session
/// carries labels; each label occupies its onset row as `kind:duration`.
pub fn write_session_to(session: &SessionRecording, writer: &mut dyn Write) -> std::io::Result<()> {
    let labeled = !session.labels.is_empty();
    if labeled {
        writeln!(writer, "t,h,v,label")?;
    } else {
        writeln!(writer, "t,h,v")?;
    }
    let mut label_at: Vec<Option<&GroundTruthLabel>> = vec![None; session.samples.len()];
    for label in &session.labels {
        let idx = (label.onset * session.fs).round() as usize;
        if idx < label_at.len() {
            label_at[idx] = Some(label);
        }
    }
    for (i, s) in session.samples.iter().enumerate() {
        if labeled {
            let cell = match label_at[i] {
                Some(l) => format!("{}:{}", l.kind, sig9(l.duration)),
                None => String::new(),
            };
            writeln!(writer, "{},{},{},{}", sig9(s.t), sig9(s.h), sig9(s.v), cell)?;
        } else {
            writeln!(writer, "{},{},{}", sig9(s.t), sig9(s.h), sig9(s.v))?;
        }
    }
    Ok(())
}

pub fn write_session(session: &SessionRecording, path: &Path) -> Result<(), FormatError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut writer = BufWriter::new(file);
    write_session_to(session, &mut writer).map_err(|e| io_err(path, e))?;
    writer.flush().map_err(|e| io_err(path, e))
}

/// Reads a session CSV, inferring the sample rate from the first two
/// timestamps and validating every gap against it.
pub fn read_session_from(reader: impl Read) -> Result<SessionRecording, FormatError> {
    let mut lines = BufReader::new(reader).lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| FormatError::at(1, "empty file"))?;
    let header = header.map_err(|e| FormatError::at(1, e.to_string()))?;
    let labeled = match header.trim_end() {
        "t,h,v" => false,
        "t,h,v,label" => true,
        other => {
            return Err(FormatError::at(
                1,
                format!("expected header `t,h,v` or `t,h,v,label`, got `{other}`"),
            ))
        }
    };
    let expected_fields = if labeled { 4 } else { 3 };

    let mut samples: Vec<crate::model::Sample> = Vec::new();
    let mut labels: Vec<GroundTruthLabel> = Vec::new();
    let mut first_gap: Option<f64> = None;
    for (zero_idx, line) in lines {
        let line_no = zero_idx + 1;
        let line = line.map_err(|e| FormatError::at(line_no, e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected_fields {
            return Err(FormatError::at(
                line_no,
                format!("expected {expected_fields} fields, got {}", fields.len()),
            ));
        }
        let parse = |name: &str, raw: &str| -> Result<f64, FormatError> {
            raw.parse::<f64>()
                .map_err(|_| FormatError::at(line_no, format!("bad {name} value `{raw}`")))
        };
        let t = parse("t", fields[0])?;
        let h = parse("h", fields[1])?;
        let v = parse("v", fields[2])?;
        if let Some(prev) = samples.last() {
            let gap = t - prev.t;
            if gap <= 0.0 {
                return Err(FormatError::at(line_no, "non-monotone time"));
            }
            match first_gap {
                None => first_gap = Some(gap),
                Some(g0) => {
                    if (gap - g0).abs() > GAP_TOLERANCE {
                        return Err(FormatError::at(
                            line_no,
                            format!("time gap {gap} deviates from {g0}"),
                        ));
                    }
                }
            }
        }
        if labeled && !fields[3].is_empty() {
            let (kind_raw, dur_raw) = fields[3].split_once(':').ok_or_else(|| {
                FormatError::at(
                    line_no,
                    format!("label `{}` is not kind:duration", fields[3]),
                )
            })?;
            let kind: MovementKind = kind_raw.parse().map_err(|e| FormatError::at(line_no, e))?;
            if kind == MovementKind::Neutral {
                return Err(FormatError::at(line_no, "labels may not be Neutral"));
            }
            let duration = parse("label duration", dur_raw)?;
            if duration <= 0.0 {
                return Err(FormatError::at(line_no, "label duration must be positive"));
            }
            labels.push(GroundTruthLabel {
                kind,
                onset: t,
                duration,
            });
        }
        samples.push(crate::model::Sample { t, h, v });
    }
    if samples.is_empty() {
        return Err(FormatError::at(2, "no samples"));
    }
    let fs = match first_gap {
        Some(g0) => 1.0 / g0,
        None => return Err(FormatError::at(2, "need at least two samples to infer fs")),
    };
    Ok(SessionRecording {
        fs,
        samples,
        labels,
    })
}

pub fn read_session(path: &Path) -> Result<SessionRecording, FormatError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_session_from(file)
}

// ---------------------------------------------------------------------------
// Profile and command table JSON
// ---------------------------------------------------------------------------

pub fn write_profile(profile: &CalibrationProfile, path: &Path) -> Result<(), FormatError> {
    let json = serde_json::to_string_pretty(profile)?;
    std::fs::write(path, json + "\n").map_err(|e| io_err(path, e))
}

pub fn read_profile(path: &Path) -> Result<CalibrationProfile, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_table(table: &CommandTable, path: &Path) -> Result<(), FormatError> {
    let json = serde_json::to_string_pretty(table)?;
    std::fs::write(path, json + "\n").map_err(|e| io_err(path, e))
}

pub fn read_table(path: &Path) -> Result<CommandTable, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

// ---------------------------------------------------------------------------
// NDJSON streams
// ---------------------------------------------------------------------------

pub fn write_events_to(
    events: &[MovementEvent],
    writer: &mut dyn Write,
) -> Result<(), FormatError> {
    for event in events {
        let line = serde_json::to_string(event)?;
        writer
            .write_all(line.as_bytes())
            .and_then(|_| writer.write_all(b"\n"))
            .map_err(|e| FormatError::Io {
                path: "<writer>".into(),
                source: e,
            })?;
    }
    Ok(())
}

pub fn write_events(events: &[MovementEvent], path: &Path) -> Result<(), FormatError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut writer = BufWriter::new(file);
    write_events_to(events, &mut writer)?;
    writer.flush().map_err(|e| io_err(path, e))
}

pub fn read_events(path: &Path) -> Result<Vec<MovementEvent>, FormatError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    BufReader::new(file)
        .lines()
        .enumerate()
        .filter(|(_, l)| !matches!(l, Ok(s) if s.is_empty()))
        .map(|(i, line)| {
            let line = line.map_err(|e| FormatError::at(i + 1, e.to_string()))?;
            let event: MovementEvent =
                serde_json::from_str(&line).map_err(|e| FormatError::at(i + 1, e.to_string()))?;
            if event.kind == MovementKind::Neutral {
                return Err(FormatError::at(i + 1, "events may not be Neutral"));
            }
            Ok(event)
        })
        .collect()
}

pub fn read_commands(path: &Path) -> Result<Vec<Command>, FormatError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    BufReader::new(file)
        .lines()
        .enumerate()
        .filter(|(_, l)| !matches!(l, Ok(s) if s.is_empty()))
        .map(|(i, line)| {
            let line = line.map_err(|e| FormatError::at(i + 1, e.to_string()))?;
            serde_json::from_str(&line).map_err(|e| FormatError::at(i + 1, e.to_string()))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Frequency response CSV
// ---------------------------------------------------------------------------

/// Writes `omega_rad,magnitude_db,phase_rad` rows, one per grid point.
/// Blocked frequencies print their magnitude as `-inf` dB.
pub fn write_freq_response_to(
    response: &FrequencyResponse,
    writer: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(writer, "omega_rad,magnitude_db,phase_rad")?;
    for i in 0..response.omega.len() {
        writeln!(
            writer,
            "{},{},{}",
            sig9(response.omega[i]),
            sig9(response.magnitude_db[i]),
            sig9(response.phase_rad[i])
        )?;
    }
    Ok(())
}

pub fn write_freq_response(response: &FrequencyResponse, path: &Path) -> Result<(), FormatError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut writer = BufWriter::new(file);
    write_freq_response_to(response, &mut writer).map_err(|e| io_err(path, e))?;
    writer.flush().map_err(|e| io_err(path, e))
}
