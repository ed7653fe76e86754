//! Command-line front door for the pipeline stages. All logic lives in the
//! library; this binary only parses arguments, wires file paths and maps
//! errors to exit codes (0 ok, 1 usage, 2 data/format, 3 degenerate
//! calibration or classification).

use clap::{Args, Parser, Subcommand};
use eogkit::eval::DEFAULT_TOLERANCE;
use eogkit::pipeline::{
    read_scenario, run_pipeline, stage_calibrate, stage_classify, stage_eval, stage_filter,
    stage_freqz, stage_synth, FilterChoice, PipelineError,
};
use eogkit::synth::FrontEndModel;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "eogkit",
    version,
    about = "Two-channel EOG pipeline: synthesis, filtering, calibration, classification, command output"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct FilterArgs {
    /// Apply the fixed reference four-section cascade (the default here).
    #[arg(long, conflicts_with = "design")]
    paper: bool,
    /// Design a Butterworth band-pass instead: `order,f_lo,f_hi` (Hz).
    #[arg(long, value_name = "ORDER,F_LO,F_HI", value_parser = parse_design)]
    design: Option<(usize, f64, f64)>,
}

impl FilterArgs {
    fn choice(&self) -> FilterChoice {
        match self.design {
            Some((order, f_lo, f_hi)) => FilterChoice::Design { order, f_lo, f_hi },
            None => FilterChoice::Paper,
        }
    }
}

fn parse_design(raw: &str) -> Result<(usize, f64, f64), String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 3 {
        return Err("expected order,f_lo,f_hi".into());
    }
    let order = parts[0]
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad order `{}`", parts[0]))?;
    let f_lo = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("bad f_lo `{}`", parts[1]))?;
    let f_hi = parts[2]
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("bad f_hi `{}`", parts[2]))?;
    Ok((order, f_lo, f_hi))
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a labeled synthetic session from a scenario JSON.
    Synth {
        /// Scenario description (fs, duration, events, amplitudes, noise,
        /// drift, seed).
        #[arg(long)]
        scenario: PathBuf,
        /// Output session CSV.
        #[arg(long)]
        out: PathBuf,
        /// Also write the matching guided calibration sweep here.
        #[arg(long)]
        calibration_out: Option<PathBuf>,
    },
    /// Filter a session CSV per channel with independent state.
    Filter {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Export the cascade frequency response as CSV.
    Freqz {
        #[command(flatten)]
        filter: FilterArgs,
        /// Sample rate used when designing a band-pass.
        #[arg(long, default_value_t = 250.0)]
        fs: f64,
        /// Grid points spanning [0, pi].
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a calibration profile from a filtered, labeled sweep.
    Calibrate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify a filtered session and map events to commands.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Command table JSON; built-in defaults when omitted.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Output NDJSON event stream.
        #[arg(long)]
        events: PathBuf,
        /// Output NDJSON command stream.
        #[arg(long)]
        commands: PathBuf,
    },
    /// Match predicted events against a truth session's labels.
    Eval {
        #[arg(long)]
        events: PathBuf,
        /// Session CSV whose label column is the ground truth.
        #[arg(long)]
        truth: PathBuf,
        /// Onset matching tolerance in seconds.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Full pipeline: synth, filter, calibrate, classify, eval.
    Run {
        /// Scenario JSON; the built-in 100-event benchmark when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Filter with the fixed reference cascade instead of the default
        /// designed band-pass. Note: at typical sample rates the reference
        /// coefficients leave plateau gestures as short transients.
        #[arg(long)]
        paper_filter: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn dispatch(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Cmd::Synth {
            scenario,
            out,
            calibration_out,
        } => {
            let spec = read_scenario(&scenario)?;
            stage_synth(
                &spec,
                &FrontEndModel::default(),
                &out,
                calibration_out.as_deref(),
            )
        }
        Cmd::Filter { input, out, filter } => stage_filter(&input, &out, &filter.choice()),
        Cmd::Freqz {
            filter,
            fs,
            points,
            out,
        } => stage_freqz(&filter.choice(), fs, points, &out),
        Cmd::Calibrate { input, out } => stage_calibrate(&input, &out),
        Cmd::Classify {
            input,
            profile,
            table,
            events,
            commands,
        } => stage_classify(
            &input,
            &profile,
            table.as_deref(),
            &events,
            &commands,
            &mut std::io::stdout(),
        ),
        Cmd::Eval {
            events,
            truth,
            tolerance,
        } => {
            let (_, json) = stage_eval(&events, &truth, tolerance)?;
            println!("{json}");
            Ok(())
        }
        Cmd::Run {
            scenario,
            paper_filter,
            out_dir,
        } => {
            let matrix = run_pipeline(scenario.as_deref(), paper_filter, &out_dir)?;
            println!(
                "accuracy {:.3} ({}/{} events, {} false positives) -> {}",
                matrix.accuracy(),
                matrix.correct(),
                matrix.total_truth(),
                matrix.total_false_positives(),
                out_dir.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
