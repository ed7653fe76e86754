//! Maps events through the command table and emits them to a console sink
//! and an NDJSON monitoring sink simultaneously.
//!
//! Run with `cargo run --example command_mapping`.

use eogkit::command::{default_table, emit, map_event, CommandSink, ConsoleSink, NdjsonSink};
use eogkit::model::{MovementEvent, MovementKind};

fn main() {
    let table = default_table();
    println!("command table:");
    for (kind, entry) in table.entries() {
        println!(
            "  {:11} -> \"{}\" (track {}, {})",
            kind.to_string(),
            entry.text,
            entry.track,
            entry.color
        );
    }

    let events = [
        MovementEvent {
            kind: MovementKind::Left,
            onset: 2.5,
            duration: 0.42,
            peak: -0.011,
        },
        MovementEvent {
            kind: MovementKind::DoubleBlink,
            onset: 5.1,
            duration: 0.45,
            peak: 0.024,
        },
        MovementEvent {
            kind: MovementKind::Up,
            onset: 8.8,
            duration: 0.55,
            peak: 0.019,
        },
    ];

    let mut console = ConsoleSink::new(Vec::new());
    let mut monitor = NdjsonSink::new("monitor", Vec::new());
    for event in &events {
        let command = map_event(event, &table).expect("non-neutral events");
        let mut sinks: [&mut dyn CommandSink; 2] = [&mut console, &mut monitor];
        emit(&command, &mut sinks).expect("in-memory sinks");
    }

    println!("\nconsole sink:");
    print!("{}", String::from_utf8(console.into_inner()).unwrap());
    println!("\nmonitoring stream (NDJSON):");
    print!("{}", String::from_utf8(monitor.into_inner()).unwrap());
}
