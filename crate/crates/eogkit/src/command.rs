//! Maps movement events to output commands and writes them to sinks:
//! console, command log, and an NDJSON monitoring stream.
//!
//! Audio playback is modeled as a track number only, matching the "play
//! track N" contract of the hardware player; no audio is decoded.

use crate::model::{Command, MovementEvent, MovementKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use thiserror::Error;

/// Display budget of the 16x2 text panel, in characters.
pub const DISPLAY_CHARS: usize = 32;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("cannot map a Neutral event to a command")]
    NeutralEvent,
    #[error("command table is missing an entry for {0}")]
    MissingKind(MovementKind),
    #[error("command table may not contain a Neutral entry")]
    NeutralEntry,
    #[error("command table entry for {0} has an empty text")]
    EmptyText(MovementKind),
    #[error("track numbers must be unique; {track} is used by {first} and {second}")]
    DuplicateTrack {
        track: u32,
        first: MovementKind,
        second: MovementKind,
    },
    #[error("track number for {0} must be at least 1")]
    TrackOutOfRange(MovementKind),
    #[error("sink {name} failed: {source}")]
    Sink {
        name: String,
        #[source]
        source: std::io::Error,
    },
}

/// Text, audio track and indicator color for one movement kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEntry {
    pub text: String,
    pub track: u32,
    pub color: String,
}

/// Total mapping from every event kind to its command outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CommandTable {
    entries: BTreeMap<MovementKind, CommandEntry>,
}

impl CommandTable {
    /// Validates totality over the six event kinds, track uniqueness and
    /// track numbers starting at 1.
    pub fn new(entries: BTreeMap<MovementKind, CommandEntry>) -> Result<Self, CommandError> {
        if entries.contains_key(&MovementKind::Neutral) {
            return Err(CommandError::NeutralEntry);
        }
        for kind in MovementKind::EVENT_KINDS {
            let entry = entries.get(&kind).ok_or(CommandError::MissingKind(kind))?;
            if entry.text.is_empty() {
                return Err(CommandError::EmptyText(kind));
            }
            if entry.track < 1 {
                return Err(CommandError::TrackOutOfRange(kind));
            }
        }
        let mut seen: BTreeMap<u32, MovementKind> = BTreeMap::new();
        for (&kind, entry) in &entries {
            if let Some(&first) = seen.get(&entry.track) {
                return Err(CommandError::DuplicateTrack {
                    track: entry.track,
                    first,
                    second: kind,
                });
            }
            seen.insert(entry.track, kind);
        }
        Ok(CommandTable { entries })
    }

    pub fn entry(&self, kind: MovementKind) -> Option<&CommandEntry> {
        self.entries.get(&kind)
    }

    pub fn entries(&self) -> &BTreeMap<MovementKind, CommandEntry> {
        &self.entries
    }
}

impl<'de> Deserialize<'de> for CommandTable {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let entries = BTreeMap::<MovementKind, CommandEntry>::deserialize(deserializer)?;
        CommandTable::new(entries).map_err(serde::de::Error::custom)
    }
}

/// The built-in mapping. Only the Left entry reproduces the attested
/// caregiver message; the other five are placeholder defaults of this
/// artifact and are meant to be replaced per deployment.
pub fn default_table() -> CommandTable {
    let mut entries = BTreeMap::new();
    let mut put = |kind: MovementKind, text: &str, track: u32, color: &str| {
        entries.insert(
            kind,
            CommandEntry {
                text: text.to_string(),
                track,
                color: color.to_string(),
            },
        );
    };
    put(MovementKind::Left, "Call the Doctor", 1, "red");
    put(MovementKind::Right, "I need water", 2, "green");
    put(MovementKind::Up, "Yes", 3, "blue");
    put(MovementKind::Down, "No", 4, "yellow");
    put(MovementKind::Blink, "Attention please", 5, "cyan");
    put(MovementKind::DoubleBlink, "I am hungry", 6, "magenta");
    CommandTable::new(entries).expect("built-in table is valid")
}

/// Maps one event through the table. The command is stamped with the event
/// onset; text longer than the 32-character display budget is truncated and
/// the command's `truncated` diagnostic set.
pub fn map_event(event: &MovementEvent, table: &CommandTable) -> Result<Command, CommandError> {
    if event.kind == MovementKind::Neutral {
        return Err(CommandError::NeutralEvent);
    }
    let entry = table
        .entry(event.kind)
        .ok_or(CommandError::MissingKind(event.kind))?;
    let truncated = entry.text.chars().count() > DISPLAY_CHARS;
    let text = if truncated {
        entry.text.chars().take(DISPLAY_CHARS).collect()
    } else {
        entry.text.clone()
    };
    Ok(Command {
        t: event.onset,
        kind: event.kind,
        text,
        track: entry.track,
        color: entry.color.clone(),
        truncated,
    })
}

/// A destination for emitted commands.
pub trait CommandSink {
    fn name(&self) -> &str;
    fn emit(&mut self, command: &Command) -> std::io::Result<()>;
}

/// Renders `t kind text` per command, the live operator view.
pub struct ConsoleSink<W: Write> {
    writer: W,
}

impl<W: Write> ConsoleSink<W> {
    pub fn new(writer: W) -> Self {
        ConsoleSink { writer }
    }

    pub fn into_inner(self) -> W {
        self.writer
    }
}

impl<W: Write> CommandSink for ConsoleSink<W> {
    fn name(&self) -> &str {
        "console"
    }

    fn emit(&mut self, command: &Command) -> std::io::Result<()> {
        writeln!(
            self.writer,
            "{:.3} {} {}",
            command.t, command.kind, command.text
        )
    }
}

/// Writes one JSON object per line: the monitoring stream and the persisted
/// command log share this format.
pub struct NdjsonSink<W: Write> {
    name: String,
    writer: W,
}

impl<W: Write> NdjsonSink<W> {
    pub fn new(name: impl Into<String>, writer: W) -> Self {
        NdjsonSink {
            name: name.into(),
            writer,
        }
    }

    pub fn into_inner(self) -> W {
        self.writer
    }
}

impl<W: Write> CommandSink for NdjsonSink<W> {
    fn name(&self) -> &str {
        &self.name
    }

    fn emit(&mut self, command: &Command) -> std::io::Result<()> {
        let line = serde_json::to_string(command).map_err(std::io::Error::other)?;
        writeln!(self.writer, "{line}")
    }
}

/// Emits one command to every sink, preserving sink order. A failing sink
/// aborts with its name.
pub fn emit(command: &Command, sinks: &mut [&mut dyn CommandSink]) -> Result<(), CommandError> {
    for sink in sinks.iter_mut() {
        sink.emit(command).map_err(|source| CommandError::Sink {
            name: sink.name().to_string(),
            source,
        })?;
    }
    Ok(())
}

/// Emits a command sequence in order.
pub fn emit_all(
    commands: &[Command],
    sinks: &mut [&mut dyn CommandSink],
) -> Result<(), CommandError> {
    for command in commands {
        emit(command, sinks)?;
    }
    Ok(())
}
